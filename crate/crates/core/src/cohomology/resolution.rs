//! Small free `Z[H]`-resolutions of `Z`, built greedily from lattice kernels.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::groups::FiniteGroup;
use crate::linalg::{kernel_basis, rank_mod_p, IntMatrix, IntSolver};

/// `... → F_2 → F_1 → F_0 = Z[H] → Z → 0` with `F_i = Z[H]^{r_i}`.
///
/// `Z`-coordinates on `F_i` put `h·e_j` at index `j·|H| + h`.
/// `boundary[i]` is the `Z`-matrix of `F_{i+1} → F_i`, with one column per
/// `h·e_k`.
#[derive(Debug)]
pub struct Resolution {
    group: Arc<FiniteGroup>,
    ranks: Vec<usize>,
    boundary: Vec<IntMatrix>,
    /// `ker(F_i → F_{i-1})` for the last computed `i` (the augmentation for `i = 0`).
    last_kernel: IntMatrix,
}

impl Resolution {
    pub fn new(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let aug = IntMatrix::from_fn(1, n, |_, _| BigInt::from(1));
        Resolution {
            last_kernel: kernel_basis(&aug),
            group,
            ranks: vec![1],
            boundary: Vec::new(),
        }
    }

    /// Number of computed boundary maps.
    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    /// `r_i`, the `Z[H]`-rank of `F_i`.
    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i]
    }

    pub fn boundary(&self, i: usize) -> &IntMatrix {
        &self.boundary[i]
    }

    /// `h·v` for `v ∈ F_i` in `Z`-coordinates.
    fn translate(&self, h: usize, v: &[BigInt]) -> Vec<BigInt> {
        let n = self.group.order();
        let mut out = vec![BigInt::from(0); v.len()];
        for (idx, x) in v.iter().enumerate() {
            let (j, g) = (idx / n, idx % n);
            out[j * n + self.group.mul(h, g)] = x.clone();
        }
        out
    }

    fn orbit(&self, v: &[BigInt]) -> Vec<Vec<BigInt>> {
        self.group.elements().map(|h| self.translate(h, v)).collect()
    }

    /// Extends the resolution by one step.
    pub fn extend(&mut self) {
        let k = &self.last_kernel;
        let dim = k.rows();
        let candidates: Vec<Vec<BigInt>> = (0..k.cols()).map(|j| k.column(j)).collect();
        let mut gens: Vec<Vec<BigInt>> = Vec::new();
        let mut span: Vec<Vec<BigInt>> = Vec::new();
        let mut span_rank = 0;
        // first pass: generators that raise the rank
        for c in &candidates {
            let mut trial = span.clone();
            trial.extend(self.orbit(c));
            let r = rank_mod_p(&IntMatrix::from_columns(dim, &trial));
            if r > span_rank {
                span = trial;
                span_rank = r;
                gens.push(c.clone());
            }
        }
        // second pass: fill in until the span is the whole kernel
        loop {
            let s = IntMatrix::from_columns(dim, &span);
            let solver = (!span.is_empty()).then(|| IntSolver::new(&s));
            let outside = candidates.iter().find(|c| match &solver {
                Some(sv) => !sv.contains(&IntMatrix::column_vector(c.to_vec())),
                None => c.iter().any(|x| !x.is_zero()),
            });
            match outside {
                Some(c) => {
                    span.extend(self.orbit(c));
                    gens.push(c.clone());
                }
                None => break,
            }
        }
        let d = IntMatrix::from_columns(dim, &span);
        self.last_kernel = kernel_basis(&d);
        self.ranks.push(gens.len());
        self.boundary.push(d);
    }

    /// Ensures at least `len` boundary maps are available.
    pub fn extend_to(&mut self, len: usize) {
        while self.boundary.len() < len {
            self.extend();
        }
    }

    /// `Z[H]`-coefficients of `∂(e_k)` on `e_j` for `F_{i+1} → F_i`:
    /// entry `h` is the coefficient of `h·e_j`.
    pub fn coefficient(&self, i: usize, k: usize, j: usize) -> Vec<BigInt> {
        let n = self.group.order();
        let col = k * n; // the column of e_k itself (h = identity)
        (0..n).map(|h| self.boundary[i][(j * n + h, col)].clone()).collect()
    }
}

type Cache = Mutex<HashMap<Vec<Vec<usize>>, Arc<Resolution>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// A resolution of at least `len` steps, memoized per group table when
/// `use_cache` is set.
pub fn resolution(group: &Arc<FiniteGroup>, len: usize, use_cache: bool) -> Arc<Resolution> {
    if !use_cache {
        let mut r = Resolution::new(group.clone());
        r.extend_to(len);
        return Arc::new(r);
    }
    let key = group.table_rows();
    if let Some(hit) = cache().lock().unwrap().get(&key) {
        if hit.len() >= len {
            return hit.clone();
        }
    }
    let mut r = Resolution::new(group.clone());
    r.extend_to(len);
    let r = Arc::new(r);
    let mut guard = cache().lock().unwrap();
    match guard.get(&key) {
        Some(existing) if existing.len() >= len => existing.clone(),
        _ => {
            guard.insert(key, r.clone());
            r
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::preset;
    use crate::linalg::rank;

    #[test]
    fn boundaries_compose_to_zero_and_are_exact() {
        for name in ["C1", "C2", "C4", "V4", "S3", "Q8", "D4"] {
            let g = Arc::new(preset(name).unwrap());
            let mut r = Resolution::new(g.clone());
            r.extend_to(4);
            let n = g.order();
            let aug = IntMatrix::from_fn(1, n, |_, _| BigInt::from(1));
            assert!((&aug * r.boundary(0)).is_zero(), "{name}");
            for i in 1..4 {
                assert!((r.boundary(i - 1) * r.boundary(i)).is_zero(), "{name} {i}");
                // exactness: rank(∂_i) + rank(∂_{i+1}) = rank F_i... over Q
                let dim = n * r.rank(i);
                assert_eq!(rank(r.boundary(i - 1)) + rank(r.boundary(i)), dim, "{name} {i}");
            }
        }
    }

    #[test]
    fn cyclic_groups_need_one_generator() {
        for name in ["C2", "C3", "C6"] {
            let g = Arc::new(preset(name).unwrap());
            let mut r = Resolution::new(g);
            r.extend_to(3);
            assert_eq!((r.rank(1), r.rank(2), r.rank(3)), (1, 1, 1), "{name}");
        }
    }

    #[test]
    fn equivariant_boundaries() {
        let g = Arc::new(preset("S3").unwrap());
        let mut r = Resolution::new(g.clone());
        r.extend_to(2);
        // column (k, h) is h applied to column (k, e)
        let n = g.order();
        for i in 0..2 {
            let d = r.boundary(i);
            for k in 0..r.rank(i + 1) {
                let base = d.column(k * n);
                for h in g.elements() {
                    assert_eq!(d.column(k * n + h), r.translate(h, &base));
                }
            }
        }
    }
}
