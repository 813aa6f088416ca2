//! Finitely presented `Z[G]`-modules with explicit integer action matrices.
//!
//! A module is `Z^n / span(rels)` together with an `n x n` matrix for every
//! group element. Actions are only required to be well defined modulo the
//! relations. Lattices are the special case with no relations.

mod constructors;
mod ops;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::linalg::{AbelianInvariants, IntMatrix, IntSolver};

pub use constructors::{augmentation_ideal, permutation_module, regular_module, trivial_module};
pub use ops::{
    check_exact, direct_sum, dual_lattice, fixed_submodule, hom_fixed, induced_module,
    inflate_module, kernel_and_cokernel, restrict_module, torsion_and_free, DirectSum,
    FixedSubmodule, HomFixed, KernelCokernel, TorsionSplit,
};

pub struct GModule {
    group: Arc<FiniteGroup>,
    rels: IntMatrix,
    action: Vec<IntMatrix>,
    solver: OnceLock<IntSolver>,
}

impl GModule {
    /// Module with explicit action matrices for every element, checked for
    /// well-definedness modulo the relations.
    pub fn new(group: Arc<FiniteGroup>, rels: IntMatrix, action: Vec<IntMatrix>) -> Result<Self> {
        let m = Self::new_unchecked(group, rels, action)?;
        m.validate()?;
        Ok(m)
    }

    /// Like [`GModule::new`] but with matrices given only on some elements.
    /// Missing elements are filled in by multiplying known ones.
    pub fn from_partial_action(
        group: Arc<FiniteGroup>,
        rels: IntMatrix,
        known: HashMap<usize, IntMatrix>,
    ) -> Result<Self> {
        let n = rels.rows();
        let order = group.order();
        let mut action: Vec<Option<IntMatrix>> = vec![None; order];
        action[0] = Some(IntMatrix::identity(n));
        for (g, a) in known {
            if g >= order {
                return Err(Error::InvalidModule(format!("element {g} out of range")));
            }
            action[g] = Some(a);
        }
        let gens: Vec<usize> = (1..order).filter(|&g| action[g].is_some()).collect();
        let mut frontier = vec![0usize];
        let mut reached = vec![false; order];
        reached[0] = true;
        while let Some(x) = frontier.pop() {
            for &s in &gens {
                let y = group.mul(x, s);
                if !reached[y] {
                    reached[y] = true;
                    if action[y].is_none() {
                        let prod = action[x].as_ref().unwrap().checked_mul(action[s].as_ref().unwrap())?;
                        action[y] = Some(prod);
                    }
                    frontier.push(y);
                }
            }
        }
        if reached.iter().any(|&r| !r) {
            return Err(Error::InvalidModule(
                "given elements do not generate the group".into(),
            ));
        }
        Self::new(group, rels, action.into_iter().map(Option::unwrap).collect())
    }

    pub(crate) fn new_unchecked(
        group: Arc<FiniteGroup>,
        rels: IntMatrix,
        action: Vec<IntMatrix>,
    ) -> Result<Self> {
        let n = rels.rows();
        if action.len() != group.order() {
            return Err(Error::InvalidModule(format!(
                "{} action matrices for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        if action.iter().any(|a| a.rows() != n || a.cols() != n) {
            return Err(Error::InvalidModule(format!("action matrices must be {n}x{n}")));
        }
        Ok(GModule {
            group,
            rels,
            action,
            solver: OnceLock::new(),
        })
    }

    fn validate(&self) -> Result<()> {
        let n = self.gens();
        let g = &self.group;
        if !self.in_relations(&self.action[0].sub(&IntMatrix::identity(n))?) {
            return Err(Error::InvalidModule("identity does not act trivially".into()));
        }
        for a in g.elements() {
            if !self.in_relations(&self.action[a].checked_mul(&self.rels)?) {
                return Err(Error::InvalidModule(format!(
                    "element {a} does not preserve the relations"
                )));
            }
            for b in g.elements() {
                let lhs = self.action[a].checked_mul(&self.action[b])?;
                if !self.in_relations(&lhs.sub(&self.action[g.mul(a, b)])?) {
                    return Err(Error::InvalidModule(format!(
                        "action is not multiplicative at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    /// Number of generators of the presentation.
    pub fn gens(&self) -> usize {
        self.rels.rows()
    }

    pub fn rels(&self) -> &IntMatrix {
        &self.rels
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.action
    }

    pub(crate) fn solver(&self) -> &IntSolver {
        self.solver.get_or_init(|| IntSolver::new(&self.rels))
    }

    /// Whether every column of `x` lies in the span of the relations.
    pub fn in_relations(&self, x: &IntMatrix) -> bool {
        if x.is_zero() {
            return true;
        }
        if self.rels.cols() == 0 {
            return false;
        }
        self.solver().contains(x)
    }

    /// Abelian group structure of the underlying module.
    pub fn invariants(&self) -> AbelianInvariants {
        AbelianInvariants::of_cokernel(&self.rels)
    }

    pub fn rank(&self) -> usize {
        self.invariants().free_rank
    }

    /// A lattice: no relations at all (not merely torsion-free).
    pub fn is_lattice(&self) -> bool {
        self.rels.is_zero()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.invariants().torsion.is_empty()
    }

    pub fn order(&self) -> Option<BigInt> {
        self.invariants().order()
    }

    pub fn is_zero(&self) -> bool {
        self.invariants().is_zero()
    }

    /// The same presentation viewed as a `Z`-module with trivial action over
    /// an arbitrary group of the caller's choosing.
    pub(crate) fn with_trivial_action(group: Arc<FiniteGroup>, rels: IntMatrix) -> Self {
        let n = rels.rows();
        let action = vec![IntMatrix::identity(n); group.order()];
        GModule {
            group,
            rels,
            action,
            solver: OnceLock::new(),
        }
    }
}

impl Clone for GModule {
    fn clone(&self) -> Self {
        GModule {
            group: self.group.clone(),
            rels: self.rels.clone(),
            action: self.action.clone(),
            solver: OnceLock::new(),
        }
    }
}

impl fmt::Debug for GModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GModule")
            .field("group_order", &self.group.order())
            .field("gens", &self.gens())
            .field("structure", &self.invariants().to_string())
            .finish()
    }
}

/// A `G`-equivariant map given by its matrix on generators.
#[derive(Clone, Debug)]
pub struct GMap {
    source: GModule,
    target: GModule,
    matrix: IntMatrix,
}

impl GMap {
    /// Checks that the matrix respects relations and commutes with the action
    /// modulo the target relations.
    pub fn new(source: GModule, target: GModule, matrix: IntMatrix) -> Result<Self> {
        let f = Self::new_unchecked(source, target, matrix)?;
        f.validate()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(source: GModule, target: GModule, matrix: IntMatrix) -> Result<Self> {
        if !source.group.same_as(&target.group) {
            return Err(Error::GroupMismatch("map between modules over different groups".into()));
        }
        if matrix.rows() != target.gens() || matrix.cols() != source.gens() {
            return Err(Error::InvalidMap(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.gens(),
                source.gens()
            )));
        }
        Ok(GMap {
            source,
            target,
            matrix,
        })
    }

    fn validate(&self) -> Result<()> {
        if !self.target.in_relations(&self.matrix.checked_mul(&self.source.rels)?) {
            return Err(Error::InvalidMap("relations are not mapped to relations".into()));
        }
        for g in self.source.group.elements() {
            let lhs = self.matrix.checked_mul(&self.source.action[g])?;
            let rhs = self.target.action[g].checked_mul(&self.matrix)?;
            if !self.target.in_relations(&lhs.sub(&rhs)?) {
                return Err(Error::InvalidMap(format!("not equivariant at element {g}")));
            }
        }
        Ok(())
    }

    pub fn identity(m: &GModule) -> Self {
        GMap {
            source: m.clone(),
            target: m.clone(),
            matrix: IntMatrix::identity(m.gens()),
        }
    }

    pub fn zero(source: &GModule, target: &GModule) -> Result<Self> {
        Self::new_unchecked(
            source.clone(),
            target.clone(),
            IntMatrix::zeros(target.gens(), source.gens()),
        )
    }

    /// Multiplication by an integer on a module.
    pub fn scalar(m: &GModule, k: i64) -> Self {
        GMap {
            source: m.clone(),
            target: m.clone(),
            matrix: IntMatrix::identity(m.gens()).scaled(&BigInt::from(k)),
        }
    }

    pub fn source(&self) -> &GModule {
        &self.source
    }

    pub fn target(&self) -> &GModule {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `other ∘ self`
    pub fn then(&self, other: &GMap) -> Result<GMap> {
        if other.source.gens() != self.target.gens() {
            return Err(Error::InvalidMap("maps are not composable".into()));
        }
        Self::new_unchecked(
            self.source.clone(),
            other.target.clone(),
            other.matrix.checked_mul(&self.matrix)?,
        )
    }

    /// Whether the map is zero modulo the target relations.
    pub fn is_zero(&self) -> bool {
        self.target.in_relations(&self.matrix)
    }
}
