use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gmodules::{fixed_submodule, permutation_module, FixedSubmodule, GMap, GModule};
use crate::groups::{FiniteGroup, Subgroup};
use crate::linalg::{map_cokernel, map_kernel, IntMatrix, IntSolver};
use crate::relations::BrauerRelation;

pub const DEFAULT_PHI_ATTEMPTS: usize = 200;

/// `P₁ = ⊕_{n_H>0} Z[G/H]^{n_H}`, `P₂ = ⊕_{n_H<0} Z[G/H]^{-n_H}`, an
/// injective `φ: P₁ → P₂` with finite cokernel, and its transpose.
#[derive(Clone, Debug)]
pub struct PhiDatum {
    pub p1: GModule,
    pub p2: GModule,
    pub phi: GMap,
    pub phi_tr: GMap,
    /// Summands of `P₁` and `P₂`, one subgroup per copy of `Z[G/H]`.
    pub p1_parts: Vec<Subgroup>,
    pub p2_parts: Vec<Subgroup>,
    pub seed: u64,
    /// Number of random draws it took to find `φ`.
    pub attempts: usize,
}

/// `Hom_G(Z[G/H], Z[G/K])` as matrices: one map per `H`-orbit on `G/K`,
/// sending the coset `tH` to `t` times the orbit sum.
fn hom_basis(g: &FiniteGroup, h: &Subgroup, k: &Subgroup) -> Result<Vec<IntMatrix>> {
    let h_reps: Vec<usize> = g.left_cosets(h).iter().map(|c| c[0]).collect();
    let k_idx = g.coset_index(k);
    let rows = g.order() / k.order();
    g.double_cosets(h, k)?
        .into_iter()
        .map(|x| {
            let mut m = IntMatrix::zeros(rows, h_reps.len());
            for (col, &t) in h_reps.iter().enumerate() {
                for &y in h.elements() {
                    m[(k_idx[g.mul(t, g.mul(y, x))], col)] = BigInt::from(1);
                }
            }
            Ok(m)
        })
        .collect()
}

fn expand(theta: &BrauerRelation, positive: bool) -> Vec<Subgroup> {
    let l = theta.group().lattice();
    let mut parts = Vec::new();
    for (c, n) in theta.terms() {
        if (n > 0) == positive {
            for _ in 0..n.unsigned_abs() {
                parts.push(l.representative(c).clone());
            }
        }
    }
    parts
}

fn sum_module(g: &Arc<FiniteGroup>, parts: &[Subgroup]) -> Result<GModule> {
    let blocks = parts
        .iter()
        .map(|h| permutation_module(g, h))
        .collect::<Result<Vec<_>>>()?;
    let dim = blocks.iter().map(|b| b.gens()).sum();
    let action = g
        .elements()
        .map(|x| {
            let a: Vec<IntMatrix> = blocks.iter().map(|b| b.action(x).clone()).collect();
            IntMatrix::block_diag(&a)
        })
        .collect();
    GModule::new(g.clone(), IntMatrix::zeros(dim, 0), action)
}

/// Searches for `φ` among combinations of the orbit-sum basis with
/// coefficients in `[-2, 2]`, drawn deterministically from `seed`.
pub fn build_phi(theta: &BrauerRelation, seed: u64, max_attempts: usize) -> Result<PhiDatum> {
    if theta.is_zero() {
        return Err(Error::ZeroRelation);
    }
    if !theta.is_relation() {
        return Err(Error::NotARelation);
    }
    let g = theta.group();
    let p1_parts = expand(theta, true);
    let p2_parts = expand(theta, false);
    let p1 = sum_module(g, &p1_parts)?;
    let p2 = sum_module(g, &p2_parts)?;
    debug_assert_eq!(p1.gens(), p2.gens());

    let offsets = |parts: &[Subgroup]| -> Vec<usize> {
        let mut acc = 0;
        parts
            .iter()
            .map(|h| {
                let o = acc;
                acc += g.order() / h.order();
                o
            })
            .collect()
    };
    let (off1, off2) = (offsets(&p1_parts), offsets(&p2_parts));
    let mut blocks = Vec::new();
    for (b, k) in p2_parts.iter().enumerate() {
        for (a, h) in p1_parts.iter().enumerate() {
            for m in hom_basis(g, h, k)? {
                blocks.push((off2[b], off1[a], m));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=max_attempts {
        let mut phi = IntMatrix::zeros(p2.gens(), p1.gens());
        for (r0, c0, m) in &blocks {
            let c = rng.gen_range(-2i64..=2);
            if c != 0 {
                phi.add_block(*r0, *c0, &m.scaled(&BigInt::from(c)));
            }
        }
        if !phi.det()?.is_zero() {
            let phi_tr = GMap::new(p2.clone(), p1.clone(), phi.transpose())?;
            let phi = GMap::new(p1.clone(), p2.clone(), phi)?;
            return Ok(PhiDatum {
                p1,
                p2,
                phi,
                phi_tr,
                p1_parts,
                p2_parts,
                seed,
                attempts: attempt,
            });
        }
    }
    Err(Error::PhiSearchExhausted {
        seed,
        attempts: max_attempts,
    })
}

/// Orders of the kernels and cokernels of `(φ, M): (P₂, M) → (P₁, M)` and
/// `(φ^Tr, M): (P₁, M) → (P₂, M)`, and the resulting constant.
#[derive(Clone, Debug, PartialEq)]
pub struct HomologicalReport {
    pub value: BigRational,
    pub ker_phi: BigInt,
    pub coker_phi: BigInt,
    pub ker_phi_tr: BigInt,
    pub coker_phi_tr: BigInt,
}

/// `C_Θ(M) = (|Coker(φ^Tr, M)| / |Ker(φ^Tr, M)|) / (|Coker(φ, M)| / |Ker(φ, M)|)`.
///
/// `φ` is built with seed 0 when not supplied.
pub fn regulator_constant_homological(
    theta: &BrauerRelation,
    m: &GModule,
    phi: Option<&PhiDatum>,
) -> Result<HomologicalReport> {
    let g = theta.group();
    if !g.same_as(m.group()) {
        return Err(Error::GroupMismatch("relation and module over different groups".into()));
    }
    if theta.is_zero() {
        let one = BigInt::from(1);
        return Ok(HomologicalReport {
            value: BigRational::from_integer(one.clone()),
            ker_phi: one.clone(),
            coker_phi: one.clone(),
            ker_phi_tr: one.clone(),
            coker_phi_tr: one,
        });
    }
    let owned;
    let datum = match phi {
        Some(d) => {
            if !d.p1.group().same_as(g) {
                return Err(Error::GroupMismatch("φ is over another group".into()));
            }
            d
        }
        None => {
            owned = build_phi(theta, 0, DEFAULT_PHI_ATTEMPTS)?;
            &owned
        }
    };
    let fix1 = datum
        .p1_parts
        .iter()
        .map(|h| fixed_submodule(m, h))
        .collect::<Result<Vec<_>>>()?;
    let fix2 = datum
        .p2_parts
        .iter()
        .map(|h| fixed_submodule(m, h))
        .collect::<Result<Vec<_>>>()?;
    let (ker_phi, coker_phi) = pullback_orders(g, datum.phi.matrix(), &datum.p1_parts, &datum.p2_parts, &fix1, &fix2, m)?;
    let (ker_phi_tr, coker_phi_tr) =
        pullback_orders(g, datum.phi_tr.matrix(), &datum.p2_parts, &datum.p1_parts, &fix2, &fix1, m)?;
    let value = BigRational::new(coker_phi_tr.clone(), ker_phi_tr.clone())
        / BigRational::new(coker_phi.clone(), ker_phi.clone());
    Ok(HomologicalReport {
        value,
        ker_phi,
        coker_phi,
        ker_phi_tr,
        coker_phi_tr,
    })
}

/// For `ψ: ⊕_a Z[G/H_a] → ⊕_b Z[G/K_b]`, the map
/// `Hom_G(⊕ Z[G/K_b], M) = ⊕ M^{K_b} → ⊕ M^{H_a} = Hom_G(⊕ Z[G/H_a], M)`
/// in the bases of the fixed lattices, and the orders of its kernel and
/// cokernel.
#[allow(clippy::too_many_arguments)]
fn pullback_orders(
    g: &FiniteGroup,
    psi: &IntMatrix,
    src_parts: &[Subgroup],
    tgt_parts: &[Subgroup],
    src_fixed: &[FixedSubmodule],
    tgt_fixed: &[FixedSubmodule],
    m: &GModule,
) -> Result<(BigInt, BigInt)> {
    let k = m.gens();
    let dims_in: Vec<usize> = tgt_fixed.iter().map(|f| f.basis.cols()).collect();
    let dims_out: Vec<usize> = src_fixed.iter().map(|f| f.basis.cols()).collect();
    let mut map = IntMatrix::zeros(dims_out.iter().sum(), dims_in.iter().sum());

    let mut src_off = 0;
    let mut row0 = 0;
    for (a, h) in src_parts.iter().enumerate() {
        let out_basis = &src_fixed[a].basis;
        let solver = (out_basis.cols() > 0).then(|| IntSolver::new(out_basis));
        let mut tgt_off = 0;
        let mut col0 = 0;
        for (b, kb) in tgt_parts.iter().enumerate() {
            let reps: Vec<usize> = g.left_cosets(kb).iter().map(|c| c[0]).collect();
            // the coset `H_a` is the first basis vector of its summand
            let mut lin = IntMatrix::zeros(k, k);
            for (j, &t) in reps.iter().enumerate() {
                let c = &psi[(tgt_off + j, src_off)];
                if !c.is_zero() {
                    lin.add_block(0, 0, &m.action(t).scaled(c));
                }
            }
            let in_basis = &tgt_fixed[b].basis;
            if let Some(sv) = &solver {
                if in_basis.cols() > 0 {
                    let image = &lin * in_basis;
                    let block = sv
                        .solve(&image)
                        .ok_or_else(|| Error::Internal("image is not fixed".into()))?;
                    map.set_block(row0, col0, &block);
                }
            }
            tgt_off += reps.len();
            col0 += dims_in[b];
        }
        src_off += g.order() / h.order();
        row0 += dims_out[a];
    }

    let rs: Vec<IntMatrix> = tgt_fixed.iter().map(|f| f.module.rels().clone()).collect();
    let rt: Vec<IntMatrix> = src_fixed.iter().map(|f| f.module.rels().clone()).collect();
    let (rs, rt) = (IntMatrix::block_diag(&rs), IntMatrix::block_diag(&rt));
    let ker = map_kernel(&map, &rs, &rt)
        .order()
        .ok_or_else(|| Error::InfiniteOrder("kernel of Hom(φ, M)".into()))?;
    let coker = map_cokernel(&map, &rt)
        .order()
        .ok_or_else(|| Error::InfiniteOrder("cokernel of Hom(φ, M)".into()))?;
    Ok((ker, coker))
}
