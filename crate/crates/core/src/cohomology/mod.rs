//! Group cohomology `H^i(H, M)` of finitely presented modules, induced maps
//! on `H^1`, and Kani's defect.
//!
//! Cochains come from a small free `Z[H]`-resolution of `Z` by default, which
//! keeps the complexes a few times the size of `M` even for groups of order 8
//! in degree 3. The inhomogeneous bar complex is available as an alternative
//! for small cases.

mod bar;
mod resolution;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gmodules::{restrict_module, GMap, GModule};
use crate::groups::Subgroup;
use crate::linalg::{preimage_lattice, subquotient, AbelianInvariants, IntMatrix};
use crate::relations::BrauerRelation;

pub use bar::bar_differential;
pub use resolution::{resolution, Resolution};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Resolution,
    Bar,
}

#[derive(Clone, Debug)]
pub struct CohomologyConfig {
    pub max_degree: usize,
    pub method: Method,
    pub use_cache: bool,
    /// Recompute per-class quantities on every conjugate and insist they agree.
    pub check_conjugates: bool,
}

impl Default for CohomologyConfig {
    fn default() -> Self {
        CohomologyConfig {
            max_degree: 3,
            method: Method::Resolution,
            use_cache: true,
            check_conjugates: true,
        }
    }
}

/// Cochains `C^0 → C^1 → ... → C^{top+1}` of `Res_H M`, each `C^i` a direct
/// sum of copies of `M`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    subgroup: Subgroup,
    module: GModule,
    copies: Vec<usize>,
    differentials: Vec<IntMatrix>,
}

impl CochainComplex {
    /// Differentials `δ_0, ..., δ_top`.
    pub fn build(h: &Subgroup, m: &GModule, top: usize, cfg: &CohomologyConfig) -> Result<Self> {
        let module = restrict_module(m, h)?;
        let grp = module.group().clone();
        let n = grp.order();
        let k = module.gens();
        let (copies, differentials) = match cfg.method {
            Method::Bar => {
                let copies = (0..=top + 1).map(|i| n.pow(i as u32)).collect();
                let diffs = (0..=top).map(|i| bar_differential(&module, i)).collect();
                (copies, diffs)
            }
            Method::Resolution => {
                let res = resolution(&grp, top + 1, cfg.use_cache);
                let copies: Vec<usize> = (0..=top + 1).map(|i| res.rank(i)).collect();
                let diffs = (0..=top)
                    .map(|i| {
                        let (src, dst) = (copies[i], copies[i + 1]);
                        let mut d = IntMatrix::zeros(dst * k, src * k);
                        for a in 0..dst {
                            for b in 0..src {
                                let coeff = res.coefficient(i, a, b);
                                for (hh, c) in coeff.iter().enumerate() {
                                    if !c.is_zero() {
                                        d.add_block(a * k, b * k, &module.action(hh).scaled(c));
                                    }
                                }
                            }
                        }
                        d
                    })
                    .collect();
                (copies, diffs)
            }
        };
        Ok(CochainComplex {
            subgroup: h.clone(),
            module,
            copies,
            differentials,
        })
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// The module restricted to the subgroup.
    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn top(&self) -> usize {
        self.differentials.len() - 1
    }

    /// Number of copies of `M` in `C^i`.
    pub fn copies(&self, i: usize) -> usize {
        self.copies[i]
    }

    pub fn differential(&self, i: usize) -> &IntMatrix {
        &self.differentials[i]
    }

    /// Relations of `C^i`.
    pub fn rels(&self, i: usize) -> IntMatrix {
        self.module.rels().repeat_diag(self.copies[i])
    }

    /// `δ_{i+1} ∘ δ_i ≡ 0` modulo relations, for every pair available.
    pub fn check_d_squared(&self) -> bool {
        (1..self.differentials.len()).all(|i| {
            let dd = &self.differentials[i] * &self.differentials[i - 1];
            let r = self.rels(i + 1);
            dd.is_zero() || (r.cols() > 0 && crate::linalg::IntSolver::new(&r).contains(&dd))
        })
    }

    /// Lattice of cocycles in `Z^{gens · copies(i)}` (contains the relations).
    pub fn cocycles(&self, i: usize) -> IntMatrix {
        preimage_lattice(&self.differentials[i], &self.rels(i + 1))
    }

    /// Generators of coboundaries plus relations in `C^i`.
    pub fn coboundaries(&self, i: usize) -> IntMatrix {
        let r = self.rels(i);
        if i == 0 {
            return r;
        }
        self.differentials[i - 1].hstack(&r).expect("row counts agree")
    }

    pub fn cohomology(&self, i: usize) -> AbelianInvariants {
        subquotient(&self.cocycles(i), &self.coboundaries(i))
            .expect("coboundaries are cocycles")
    }
}

/// Invariant factors of `H^i(H, M)`, with the default configuration.
pub fn cohomology(h: &Subgroup, m: &GModule, i: usize) -> Result<AbelianInvariants> {
    cohomology_with(h, m, i, &CohomologyConfig::default())
}

pub fn cohomology_with(
    h: &Subgroup,
    m: &GModule,
    i: usize,
    cfg: &CohomologyConfig,
) -> Result<AbelianInvariants> {
    if i > cfg.max_degree {
        return Err(Error::DegreeTooLarge {
            degree: i,
            max: cfg.max_degree,
        });
    }
    let cx = CochainComplex::build(h, m, i, cfg)?;
    let inv = cx.cohomology(i);
    if i >= 1 {
        let order = BigInt::from(h.order());
        if !inv.is_finite() || !(&order % inv.exponent()).is_zero() {
            return Err(Error::Internal(format!(
                "H^{i} = {inv} is not killed by |H| = {order}"
            )));
        }
    }
    Ok(inv)
}

/// `h^i(H, M)`, the order of a finite cohomology group (`i ≥ 1`).
pub fn cohomology_order(h: &Subgroup, m: &GModule, i: usize, cfg: &CohomologyConfig) -> Result<BigInt> {
    cohomology_with(h, m, i, cfg)?
        .order()
        .ok_or_else(|| Error::InfiniteOrder(format!("H^{i} has free part")))
}

/// `|Ker(H^1(H, f))|`.
pub fn h1_kernel_order(f: &GMap, h: &Subgroup) -> Result<BigInt> {
    h1_kernel_order_with(f, h, &CohomologyConfig::default())
}

pub fn h1_kernel_order_with(f: &GMap, h: &Subgroup, cfg: &CohomologyConfig) -> Result<BigInt> {
    let src = CochainComplex::build(h, f.source(), 1, cfg)?;
    let tgt = CochainComplex::build(h, f.target(), 1, cfg)?;
    let copies = src.copies(1);
    debug_assert_eq!(copies, tgt.copies(1));
    let z1 = src.cocycles(1);
    let image = &f.matrix().repeat_diag(copies) * &z1;
    let c = preimage_lattice(&image, &tgt.coboundaries(1));
    let kernel = &z1 * &c;
    let inv = subquotient(&kernel, &src.coboundaries(1))
        .ok_or_else(|| Error::Internal("coboundaries not inside the kernel".into()))?;
    inv.order()
        .ok_or_else(|| Error::InfiniteOrder("kernel on H^1 is infinite".into()))
}

/// `ψ_Θ(f) = Π_H |Ker(H^1(H, f))|^{n_H}`.
pub fn kani_defect(theta: &BrauerRelation, f: &GMap) -> Result<BigRational> {
    kani_defect_with(theta, f, &CohomologyConfig::default())
}

pub fn kani_defect_with(theta: &BrauerRelation, f: &GMap, cfg: &CohomologyConfig) -> Result<BigRational> {
    let g = theta.group();
    if !g.same_as(f.source().group()) {
        return Err(Error::GroupMismatch("relation and map over different groups".into()));
    }
    let l = g.lattice();
    let mut out = BigRational::one();
    for (c, n) in theta.terms() {
        let order = h1_kernel_order_with(f, l.representative(c), cfg)?;
        if cfg.check_conjugates {
            for &idx in &l.class_members(c)[1..] {
                let other = h1_kernel_order_with(f, l.subgroup(idx), cfg)?;
                if other != order {
                    return Err(Error::Internal(format!(
                        "conjugate subgroups give kernel orders {order} and {other}"
                    )));
                }
            }
        }
        out *= pow_rational(&order, n);
    }
    Ok(out)
}

pub(crate) fn pow_rational(base: &BigInt, exp: i64) -> BigRational {
    let p = num_traits::pow(base.clone(), exp.unsigned_abs() as usize);
    if exp >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

#[cfg(test)]
mod tests;
