//! Lattice-level operations built on Smith and Hermite forms: kernels,
//! images, exact solving, and invariants of finitely generated abelian
//! groups given as subquotients of `Z^n`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::hnf::column_hnf;
use super::matrix::IntMatrix;
use super::smith::{smith, SmithDecomposition};

/// Saturated basis of `{x in Z^cols : a x = 0}`, as columns in column HNF.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let d = smith(a);
    let n = a.cols();
    let k = d.v.submatrix(0..n, d.rank()..n);
    column_hnf(&k)
}

/// Basis (column HNF) of the lattice spanned by the columns of `gens`.
pub fn image_basis(gens: &IntMatrix) -> IntMatrix {
    column_hnf(gens)
}

/// Invariant factors of `Z^rows / a Z^cols`: nontrivial factors first, then
/// one zero per free summand.
pub fn cokernel_invariants(a: &IntMatrix) -> Vec<BigInt> {
    AbelianInvariants::of_cokernel(a).to_list()
}

/// Structure of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianInvariants {
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        AbelianInvariants {
            torsion: Vec::new(),
            free_rank: 0,
        }
    }

    pub fn of_cokernel(a: &IntMatrix) -> Self {
        let d = smith(a);
        Self::from_smith(&d, a.rows())
    }

    pub(crate) fn from_smith(d: &SmithDecomposition, rows: usize) -> Self {
        let torsion = d.diagonal().into_iter().filter(|x| !x.is_one()).collect();
        AbelianInvariants {
            torsion,
            free_rank: rows - d.rank(),
        }
    }

    pub fn to_list(&self) -> Vec<BigInt> {
        let mut out = self.torsion.clone();
        out.extend(std::iter::repeat_n(BigInt::zero(), self.free_rank));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// Order of the group, if finite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion_order())
    }

    pub fn exponent(&self) -> BigInt {
        self.torsion.last().cloned().unwrap_or_else(BigInt::one)
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Solver for `a x = b` over the integers, reusing one Smith decomposition.
pub struct IntSolver {
    d: SmithDecomposition,
    rows: usize,
    cols: usize,
}

impl IntSolver {
    pub fn new(a: &IntMatrix) -> Self {
        IntSolver {
            d: smith(a),
            rows: a.rows(),
            cols: a.cols(),
        }
    }

    /// Integer solution of `a x = b` (all columns of `b`), if one exists.
    /// Free coordinates are set to zero.
    pub fn solve(&self, b: &IntMatrix) -> Option<IntMatrix> {
        assert_eq!(b.rows(), self.rows, "right-hand side has wrong row count");
        let c = &self.d.u * b;
        let r = self.d.rank();
        let mut y = IntMatrix::zeros(self.cols, b.cols());
        for j in 0..b.cols() {
            for i in 0..r {
                let (q, rem) = c[(i, j)].div_rem(&self.d.s[(i, i)]);
                if !rem.is_zero() {
                    return None;
                }
                y[(i, j)] = q;
            }
            if (r..self.rows).any(|i| !c[(i, j)].is_zero()) {
                return None;
            }
        }
        Some(&self.d.v * &y)
    }

    pub fn solve_vec(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        self.solve(&IntMatrix::column_vector(b.to_vec()))
            .map(|x| x.column(0))
    }

    pub fn contains(&self, b: &IntMatrix) -> bool {
        self.solve(b).is_some()
    }

    pub fn rank(&self) -> usize {
        self.d.rank()
    }
}

/// Integer solution of `a x = b`, if any.
pub fn solve(a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    IntSolver::new(a).solve(b)
}

/// Invariants of `span(big) / span(small)`. Requires `span(small) ⊆ span(big)`;
/// returns `None` otherwise.
pub fn subquotient(big: &IntMatrix, small: &IntMatrix) -> Option<AbelianInvariants> {
    let basis = image_basis(big);
    let coords = if basis.cols() == 0 {
        if !small.is_zero() {
            return None;
        }
        IntMatrix::zeros(0, small.cols())
    } else {
        solve(&basis, small)?
    };
    Some(AbelianInvariants::of_cokernel(&coords))
}

/// Rank of an integer matrix (exact, via Smith form).
pub fn rank(a: &IntMatrix) -> usize {
    smith(a).rank()
}

const RANK_PRIME: u64 = 2_147_483_647;

/// Rank of `a` reduced modulo a large prime. Never exceeds the rational rank;
/// used only as a cheap heuristic.
pub fn rank_mod_p(a: &IntMatrix) -> usize {
    let p = RANK_PRIME;
    let pb = BigInt::from(p);
    let (rows, cols) = (a.rows(), a.cols());
    let mut m: Vec<Vec<u64>> = (0..rows)
        .map(|r| {
            (0..cols)
                .map(|c| a[(r, c)].mod_floor(&pb).to_u64().unwrap())
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = pow_mod(m[rank][col], p - 2, p);
        for r in 0..rows {
            if r != rank && m[r][col] != 0 {
                let f = m[r][col] * inv % p;
                for c in col..cols {
                    let sub = f * m[rank][c] % p;
                    m[r][c] = (m[r][c] + p - sub) % p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Basis of `{x in Z^n : f x ∈ span(rt)}`, the preimage of the relations of
/// the target under `f`.
pub fn preimage_lattice(f: &IntMatrix, rt: &IntMatrix) -> IntMatrix {
    assert_eq!(f.rows(), rt.rows(), "map and relations disagree on target rank");
    let n = f.cols();
    let joint = f.hstack(rt).expect("row counts checked");
    let k = kernel_basis(&joint);
    image_basis(&k.submatrix(0..n, 0..k.cols()))
}

/// Kernel of the induced map `Z^n/span(rs) → Z^m/span(rt)`.
pub fn map_kernel(f: &IntMatrix, rs: &IntMatrix, rt: &IntMatrix) -> AbelianInvariants {
    subquotient(&preimage_lattice(f, rt), rs).expect("source relations lie in the preimage")
}

/// Cokernel of the induced map `Z^n/span(rs) → Z^m/span(rt)`.
pub fn map_cokernel(f: &IntMatrix, rt: &IntMatrix) -> AbelianInvariants {
    AbelianInvariants::of_cokernel(&rt.hstack(f).expect("row counts agree"))
}
