use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;

use super::{pow, regulator_constant};
use crate::cohomology::{cohomology_order, kani_defect, CohomologyConfig};
use crate::error::{Error, Result};
use crate::gmodules::{
    check_exact, induced_module, inflate_module, kernel_and_cokernel, restrict_module, GMap, GModule,
};
use crate::groups::{FiniteGroup, GroupHom, Subgroup};
use crate::linalg::IntSolver;
use crate::relations::BrauerRelation;

/// An identity between two exact rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactCheck {
    pub name: String,
    pub left: BigRational,
    pub right: BigRational,
}

impl ExactCheck {
    pub fn new(name: impl Into<String>, left: BigRational, right: BigRational) -> Self {
        ExactCheck {
            name: name.into(),
            left,
            right,
        }
    }

    pub fn holds(&self) -> bool {
        self.left == self.right
    }

    /// `Err(CheckFailed)` unless the identity holds.
    pub fn require(self) -> Result<Self> {
        if self.holds() {
            Ok(self)
        } else {
            Err(Error::CheckFailed(self.to_string()))
        }
    }
}

impl fmt::Display for ExactCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.holds() { "ok" } else { "FAILED" };
        write!(f, "{}: {} vs {} [{verdict}]", self.name, self.left, self.right)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicativityReport {
    /// `C_Θ(M)` for the middle term.
    pub middle: BigRational,
    pub sub: BigRational,
    pub quotient: BigRational,
    /// Kani's defect of the injection.
    pub psi: BigRational,
    /// `C(M') · C(M'') · ψ²`.
    pub predicted: BigRational,
}

impl MultiplicativityReport {
    pub fn holds(&self) -> bool {
        self.middle == self.predicted
    }
}

/// `C_Θ(M) = C_Θ(M') C_Θ(M'') ψ_Θ(f)²` for `0 → M' → M → M'' → 0`.
pub fn check_multiplicativity(theta: &BrauerRelation, f: &GMap, g: &GMap) -> Result<MultiplicativityReport> {
    check_exact(f, g)?;
    let sub = regulator_constant(theta, f.source(), None)?.value;
    let middle = regulator_constant(theta, f.target(), None)?.value;
    let quotient = regulator_constant(theta, g.target(), None)?.value;
    let psi = kani_defect(theta, f)?;
    let predicted = &sub * &quotient * &psi * &psi;
    Ok(MultiplicativityReport {
        middle,
        sub,
        quotient,
        psi,
        predicted,
    })
}

fn trivial_cohomology(m: &GModule, max_degree: usize) -> Result<()> {
    let cfg = CohomologyConfig::default();
    let l = m.group().lattice();
    for c in 0..l.num_classes() {
        let h = l.representative(c);
        for i in 1..=max_degree {
            let order = cohomology_order(h, m, i, &cfg)?;
            if !order.is_one() {
                return Err(Error::NotCohomologicallyTrivial(format!(
                    "h^{i}(H, M) = {order} for a subgroup of order {}",
                    h.order()
                )));
            }
        }
    }
    Ok(())
}

/// `C_Θ(M) = 1`, after confirming `h¹(H, M) = h²(H, M) = 1` for every `H`.
pub fn check_cohomologically_trivial(theta: &BrauerRelation, m: &GModule) -> Result<ExactCheck> {
    trivial_cohomology(m, 2)?;
    let c = regulator_constant(theta, m, None)?.value;
    Ok(ExactCheck::new("cohomologically trivial", c, BigRational::one()))
}

/// For an exact sequence `0 → M' → M_r → ... → M_1 → M'' → 0` given by its
/// `r + 1` maps, with every `M_i` cohomologically trivial:
/// `C(M') = C(M'')^{(-1)^r} Π_H (Π_i h^i(H, M')^{(-1)^i})^{2n_H}`.
pub fn check_trivial_middle_terms(theta: &BrauerRelation, maps: &[GMap]) -> Result<ExactCheck> {
    if maps.len() < 2 {
        return Err(Error::NotExact("need at least one middle term".into()));
    }
    check_long_exact(maps)?;
    let r = maps.len() - 1;
    for f in &maps[1..] {
        trivial_cohomology(f.source(), 2)?;
    }
    let first = maps[0].source();
    let last = maps[r].target();
    let left = regulator_constant(theta, first, None)?.value;
    let c_last = regulator_constant(theta, last, None)?.value;
    let mut right = if r.is_multiple_of(2) { c_last } else { c_last.recip() };
    let cfg = CohomologyConfig {
        max_degree: r.max(3),
        ..CohomologyConfig::default()
    };
    let l = theta.group().lattice();
    for (c, n) in theta.terms() {
        let h = l.representative(c);
        let mut inner = BigRational::one();
        for i in 1..=r {
            let o = BigRational::from_integer(cohomology_order(h, first, i, &cfg)?);
            inner *= if i % 2 == 0 { o } else { o.recip() };
        }
        right *= pow(&inner, 2 * n);
    }
    Ok(ExactCheck::new("exact sequence with cohomologically trivial terms", left, right))
}

fn check_long_exact(maps: &[GMap]) -> Result<()> {
    if !kernel_and_cokernel(&maps[0])?.kernel.is_zero() {
        return Err(Error::NotExact("first map is not injective".into()));
    }
    if !kernel_and_cokernel(&maps[maps.len() - 1])?.cokernel.is_zero() {
        return Err(Error::NotExact("last map is not surjective".into()));
    }
    for (i, w) in maps.windows(2).enumerate() {
        let (f, g) = (&w[0], &w[1]);
        if !f.then(g)?.is_zero() {
            return Err(Error::NotExact(format!("composite {i} is not zero")));
        }
        let ker = kernel_and_cokernel(g)?.kernel_inclusion;
        let image = f.matrix().hstack(f.target().rels())?;
        let k = ker.matrix();
        if k.cols() > 0 && !k.is_zero() && !(image.cols() > 0 && IntSolver::new(&image).contains(k)) {
            return Err(Error::NotExact(format!("homology at term {}", i + 1)));
        }
    }
    Ok(())
}

/// The three transport identities for regulator constants.
#[derive(Clone, Debug)]
pub enum FunctorialityCase {
    /// `θ` lives on `Y ≤ X` (as [`FiniteGroup::subgroup_group`]), `N` on `X`:
    /// `C_{Ind θ}(N) = C_θ(Res N)`.
    Induction {
        theta: BrauerRelation,
        subgroup: Subgroup,
        module: GModule,
    },
    /// `θ` and `X` share a group, `N` lives on `Y ≤ X`:
    /// `C_{Res θ}(N) = C_θ(Ind N)`.
    Restriction {
        theta: BrauerRelation,
        subgroup: Subgroup,
        module: GModule,
    },
    /// `θ` and `M` live on the target of a surjection `q`:
    /// `C_{Inf θ}(Inf M) = C_θ(M)`.
    Inflation {
        theta: BrauerRelation,
        quotient: GroupHom,
        module: GModule,
    },
}

pub fn check_functoriality(case: &FunctorialityCase) -> Result<ExactCheck> {
    match case {
        FunctorialityCase::Induction {
            theta,
            subgroup,
            module,
        } => {
            let x: &Arc<FiniteGroup> = module.group();
            let emb = GroupHom::subgroup_inclusion(x, subgroup);
            if !emb.source().same_as(theta.group()) {
                return Err(Error::GroupMismatch("relation is not over the subgroup".into()));
            }
            let left = regulator_constant(&theta.induce(&emb)?, module, None)?.value;
            let right = regulator_constant(theta, &restrict_module(module, subgroup)?, None)?.value;
            Ok(ExactCheck::new("induction", left, right))
        }
        FunctorialityCase::Restriction {
            theta,
            subgroup,
            module,
        } => {
            let left = regulator_constant(&theta.restrict(subgroup)?, module, None)?.value;
            let ind = induced_module(module, theta.group(), subgroup)?;
            let right = regulator_constant(theta, &ind, None)?.value;
            Ok(ExactCheck::new("restriction", left, right))
        }
        FunctorialityCase::Inflation {
            theta,
            quotient,
            module,
        } => {
            let left = regulator_constant(&theta.inflate(quotient)?, &inflate_module(module, quotient)?, None)?.value;
            let right = regulator_constant(theta, module, None)?.value;
            Ok(ExactCheck::new("inflation", left, right))
        }
    }
}
