use std::sync::Arc;

use num_bigint::BigInt;

use super::{GMap, GModule};
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Subgroup};
use crate::linalg::IntMatrix;

fn permutation_matrix(n: usize, image: impl Fn(usize) -> usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(n, n);
    for j in 0..n {
        m[(image(j), j)] = BigInt::from(1);
    }
    m
}

/// `Z[G/H]`, with basis the left cosets in [`FiniteGroup::left_cosets`] order.
pub fn permutation_module(g: &Arc<FiniteGroup>, h: &Subgroup) -> Result<GModule> {
    g.check_subgroup(h)?;
    let cosets = g.left_cosets(h);
    let idx = g.coset_index(h);
    let n = cosets.len();
    let action = g
        .elements()
        .map(|x| permutation_matrix(n, |j| idx[g.mul(x, cosets[j][0])]))
        .collect();
    GModule::new_unchecked(g.clone(), IntMatrix::zeros(n, 0), action)
}

pub fn trivial_module(g: &Arc<FiniteGroup>) -> GModule {
    GModule::with_trivial_action(g.clone(), IntMatrix::zeros(1, 0))
}

/// `Z[G]`, with basis the group elements in index order.
pub fn regular_module(g: &Arc<FiniteGroup>) -> GModule {
    permutation_module(g, &g.trivial_subgroup()).expect("trivial subgroup")
}

/// `ΔG ⊂ Z[G]` on the basis `{g - e : g ≠ e}`, with its inclusion.
pub fn augmentation_ideal(g: &Arc<FiniteGroup>) -> (GModule, GMap) {
    let n = g.order();
    let k = n - 1;
    // x·(y - e) = (xy - e) - (x - e)
    let action = g
        .elements()
        .map(|x| {
            let mut m = IntMatrix::zeros(k, k);
            for y in 1..n {
                let xy = g.mul(x, y);
                if xy != 0 {
                    m[(xy - 1, y - 1)] += BigInt::from(1);
                }
                if x != 0 {
                    m[(x - 1, y - 1)] -= BigInt::from(1);
                }
            }
            m
        })
        .collect();
    let delta = GModule::new_unchecked(g.clone(), IntMatrix::zeros(k, 0), action)
        .expect("dimensions agree");
    let mut inc = IntMatrix::zeros(n, k);
    for y in 1..n {
        inc[(y, y - 1)] = BigInt::from(1);
        inc[(0, y - 1)] = BigInt::from(-1);
    }
    let zg = regular_module(g);
    let map = GMap::new_unchecked(delta.clone(), zg, inc).expect("dimensions agree");
    (delta, map)
}

impl GModule {
    /// Rank-one module `Z` (`modulus = 0`) or `Z/modulus`, each element acting
    /// by the given scalar.
    pub fn scalar(g: &Arc<FiniteGroup>, modulus: u64, scalars: &[i64]) -> Result<GModule> {
        if scalars.len() != g.order() {
            return Err(Error::InvalidModule("one scalar per group element".into()));
        }
        let rels = if modulus == 0 {
            IntMatrix::zeros(1, 0)
        } else {
            IntMatrix::from_rows(&[[modulus as i64]])
        };
        let action = scalars.iter().map(|&s| IntMatrix::from_rows(&[[s]])).collect();
        GModule::new(g.clone(), rels, action)
    }

    /// `Z` or `Z/modulus` on which elements outside the index-two subgroup
    /// `kernel` act by `-1`.
    pub fn sign(g: &Arc<FiniteGroup>, kernel: &Subgroup, modulus: u64) -> Result<GModule> {
        g.check_subgroup(kernel)?;
        if 2 * kernel.order() != g.order() {
            return Err(Error::InvalidModule("sign character needs an index-two kernel".into()));
        }
        let scalars: Vec<i64> = g
            .elements()
            .map(|x| if kernel.contains(x) { 1 } else { -1 })
            .collect();
        Self::scalar(g, modulus, &scalars)
    }

    /// `M / kM`.
    pub fn mod_multiple(&self, k: u64) -> GModule {
        let n = self.gens();
        let extra = IntMatrix::identity(n).scaled(&BigInt::from(k));
        let rels = self.rels.hstack(&extra).expect("same row count");
        GModule::new_unchecked(self.group.clone(), rels, self.action.clone()).expect("same action")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::preset;

    fn v4() -> Arc<FiniteGroup> {
        Arc::new(preset("V4").unwrap())
    }

    fn checked(m: &GModule) -> GModule {
        GModule::new(m.group().clone(), m.rels().clone(), m.actions().to_vec()).unwrap()
    }

    #[test]
    fn permutation_module_on_whole_group_is_trivial() {
        let g = v4();
        let m = checked(&permutation_module(&g, &g.whole()).unwrap());
        assert_eq!(m.gens(), 1);
        for x in g.elements() {
            assert_eq!(m.action(x), &IntMatrix::identity(1));
        }
    }

    #[test]
    fn regular_module_rank() {
        let g = v4();
        let m = checked(&regular_module(&g));
        assert_eq!(m.rank(), 4);
    }

    #[test]
    fn klein_coset_module() {
        let g = v4();
        let h1 = Subgroup::from_sorted(vec![0, 1]);
        let m = checked(&permutation_module(&g, &h1).unwrap());
        assert_eq!(m.rank(), 2);
        let swap = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert_eq!(m.action(1), &IntMatrix::identity(2));
        assert_eq!(m.action(2), &swap);
        assert_eq!(m.action(3), &swap);
    }

    #[test]
    fn augmentation_ideals() {
        let c1 = Arc::new(preset("C1").unwrap());
        let (d, _) = augmentation_ideal(&c1);
        assert!(d.is_zero());

        let c2 = Arc::new(preset("C2").unwrap());
        let (d, inc) = augmentation_ideal(&c2);
        let d = checked(&d);
        assert_eq!(d.action(1), &IntMatrix::from_rows(&[[-1]]));
        GMap::new(d, inc.target().clone(), inc.matrix().clone()).unwrap();

        let (d, inc) = augmentation_ideal(&v4());
        assert_eq!(checked(&d).rank(), 3);
        GMap::new(d, inc.target().clone(), inc.matrix().clone()).unwrap();
    }

    #[test]
    fn sign_twists() {
        let g = v4();
        let h1 = Subgroup::from_sorted(vec![0, 1]);
        let m = GModule::sign(&g, &h1, 3).unwrap();
        assert_eq!(m.order(), Some(BigInt::from(3)));
        assert_eq!(m.action(2), &IntMatrix::from_rows(&[[-1]]));
        assert!(GModule::sign(&g, &g.trivial_subgroup(), 3).is_err());
    }

    #[test]
    fn scalar_rejects_non_action() {
        let c3 = Arc::new(preset("C3").unwrap());
        // -1 is not a character of C3 on Z
        assert!(GModule::scalar(&c3, 0, &[1, -1, -1]).is_err());
        // but on Z/2 it is, since -1 = 1
        assert!(GModule::scalar(&c3, 2, &[1, -1, -1]).is_ok());
    }

    #[test]
    fn reduction_mod_m() {
        let g = v4();
        let m = regular_module(&g).mod_multiple(6);
        assert_eq!(m.order(), Some(BigInt::from(6u32.pow(4))));
    }
}
