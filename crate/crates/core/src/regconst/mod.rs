//! Regulator constants `C_Θ(M)`, computed from a pairing on the torsion-free
//! quotient or from the kernels and cokernels of `Hom_G(φ, M)` for a map
//! `φ: P₁ → P₂` between the permutation modules of `Θ`.

mod checks;
mod homological;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gmodules::{fixed_submodule, torsion_and_free, GModule};
use crate::groups::Subgroup;
use crate::linalg::{image_basis, rational_det, IntMatrix, RationalMatrix};
use crate::relations::BrauerRelation;

pub use checks::{
    check_cohomologically_trivial, check_trivial_middle_terms, check_functoriality,
    check_multiplicativity, ExactCheck, FunctorialityCase, MultiplicativityReport,
};
pub use homological::{
    build_phi, regulator_constant_homological, HomologicalReport, PhiDatum, DEFAULT_PHI_ATTEMPTS,
};

/// A `G`-invariant symmetric bilinear form on `M~ = M / tors M`, written in
/// the basis produced by [`torsion_and_free`].
#[derive(Clone, Debug)]
pub struct PairingGram {
    module: GModule,
    gram: RationalMatrix,
}

impl PairingGram {
    pub fn new(module: &GModule, gram: RationalMatrix) -> Result<Self> {
        let free = torsion_and_free(module)?.free;
        let r = free.gens();
        if gram.rows() != r || gram.cols() != r {
            return Err(Error::Dimension(format!(
                "gram is {}x{} but the free rank is {r}",
                gram.rows(),
                gram.cols()
            )));
        }
        if !gram.is_symmetric() {
            return Err(Error::InvalidModule("gram is not symmetric".into()));
        }
        for g in free.group().elements() {
            if gram.congruence(free.action(g))? != gram {
                return Err(Error::InvalidModule(format!("gram is not invariant under element {g}")));
            }
        }
        if rational_det(&gram)?.is_zero() {
            return Err(Error::DegeneratePairing);
        }
        Ok(PairingGram {
            module: module.clone(),
            gram,
        })
    }

    /// `Σ_g ρ̃(g)ᵀ ρ̃(g)`, the dot product averaged over the group.
    pub fn invariant_pairing(module: &GModule) -> Result<Self> {
        let free = torsion_and_free(module)?.free;
        Ok(PairingGram {
            module: module.clone(),
            gram: averaged(&free, &IntMatrix::identity(free.gens())),
        })
    }

    /// `Σ_g (Uρ̃(g))ᵀ (Uρ̃(g))` for a random unimodular `U` drawn from `seed`.
    pub fn from_seed(module: &GModule, seed: u64) -> Result<Self> {
        let free = torsion_and_free(module)?.free;
        let r = free.gens();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut u = IntMatrix::identity(r);
        if r > 1 {
            for _ in 0..4 * r {
                let i = rng.gen_range(0..r);
                let mut j = rng.gen_range(0..r - 1);
                if j >= i {
                    j += 1;
                }
                let k = BigInt::from(rng.gen_range(-2i64..=2));
                u.add_col_multiple(i, j, &k);
            }
        }
        Ok(PairingGram {
            module: module.clone(),
            gram: averaged(&free, &u),
        })
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn gram(&self) -> &RationalMatrix {
        &self.gram
    }
}

fn averaged(free: &GModule, u: &IntMatrix) -> RationalMatrix {
    let r = free.gens();
    let mut acc = IntMatrix::zeros(r, r);
    for g in free.group().elements() {
        let a = u * free.action(g);
        acc = acc.add(&(&a.transpose() * &a)).expect("square");
    }
    acc.to_rational()
}

/// The contribution of one conjugacy class of subgroups.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassFactor {
    pub class: usize,
    pub coeff: i64,
    pub subgroup_order: usize,
    /// `|tors(M^H)|`.
    pub torsion: BigInt,
    /// `det((1/|H|)⟨·,·⟩)` on `(M^H)~`.
    pub det: BigRational,
    /// `det / torsion²`, before raising to `coeff`.
    pub factor: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegulatorConstant {
    pub value: BigRational,
    pub factors: Vec<ClassFactor>,
}

/// `C_Θ(M)` from the definition, with the averaged pairing unless one is
/// supplied. Every conjugate of each subgroup in the support is evaluated
/// and must give the same factor.
pub fn regulator_constant(
    theta: &BrauerRelation,
    m: &GModule,
    pairing: Option<&PairingGram>,
) -> Result<RegulatorConstant> {
    let g = theta.group();
    if !g.same_as(m.group()) {
        return Err(Error::GroupMismatch("relation and module over different groups".into()));
    }
    let owned;
    let pairing = match pairing {
        Some(p) => {
            if p.module.rels() != m.rels() || p.module.actions() != m.actions() {
                return Err(Error::InvalidModule("pairing belongs to another module".into()));
            }
            p
        }
        None => {
            owned = PairingGram::invariant_pairing(m)?;
            &owned
        }
    };
    let split = torsion_and_free(m)?;
    let l = g.lattice();
    let mut value = BigRational::one();
    let mut factors = Vec::new();
    for (c, n) in theta.terms() {
        let members = l.class_members(c);
        let (torsion, det) = class_factor(m, split.projection.matrix(), pairing, l.representative(c))?;
        let factor = &det / BigRational::from_integer(&torsion * &torsion);
        for &idx in &members[1..] {
            let (t, d) = class_factor(m, split.projection.matrix(), pairing, l.subgroup(idx))?;
            if &d / BigRational::from_integer(&t * &t) != factor {
                return Err(Error::Internal(format!(
                    "conjugate subgroups in class {c} give different factors"
                )));
            }
        }
        value *= pow(&factor, n);
        factors.push(ClassFactor {
            class: c,
            coeff: n,
            subgroup_order: l.representative(c).order(),
            torsion,
            det,
            factor,
        });
    }
    Ok(RegulatorConstant { value, factors })
}

fn class_factor(
    m: &GModule,
    projection: &IntMatrix,
    pairing: &PairingGram,
    h: &Subgroup,
) -> Result<(BigInt, BigRational)> {
    let fixed = fixed_submodule(m, h)?;
    let inv = fixed.module.invariants();
    let basis = image_basis(&(projection * &fixed.basis));
    debug_assert_eq!(basis.cols(), inv.free_rank);
    let scale = BigRational::new(BigInt::one(), BigInt::from(h.order()));
    let det = rational_det(&pairing.gram.congruence(&basis)?.scaled(&scale))?;
    if det.is_zero() {
        return Err(Error::DegeneratePairing);
    }
    Ok((inv.torsion_order(), det))
}

pub(crate) fn pow(base: &BigRational, exp: i64) -> BigRational {
    let p = num_traits::pow(base.clone(), exp.unsigned_abs() as usize);
    if exp >= 0 {
        p
    } else {
        p.recip()
    }
}
