use std::sync::Arc;

use super::{FiniteGroup, Subgroup};
use crate::error::{Error, Result};

/// A group homomorphism given on elements.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    map: Vec<usize>,
}

impl GroupHom {
    /// Checks the homomorphism property on all pairs.
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.order() || map.iter().any(|&x| x >= target.order()) {
            return Err(Error::InvalidHomomorphism(
                "element map has the wrong domain or codomain".into(),
            ));
        }
        for a in source.elements() {
            for b in source.elements() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(Error::InvalidHomomorphism(format!(
                        "not multiplicative at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(GroupHom { source, target, map })
    }

    pub fn identity(g: Arc<FiniteGroup>) -> Self {
        let map = g.elements().collect();
        GroupHom {
            source: g.clone(),
            target: g,
            map,
        }
    }

    /// Inclusion of a subgroup, seen as a standalone group.
    pub fn subgroup_inclusion(parent: &Arc<FiniteGroup>, h: &Subgroup) -> Self {
        let (sub, emb) = parent.subgroup_group(h);
        GroupHom {
            source: sub,
            target: parent.clone(),
            map: emb,
        }
    }

    /// Projection onto the quotient by a normal subgroup.
    pub fn quotient_map(parent: &Arc<FiniteGroup>, n: &Subgroup) -> Result<Self> {
        let (q, proj) = parent.quotient(n)?;
        Ok(GroupHom {
            source: parent.clone(),
            target: Arc::new(q),
            map: proj,
        })
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn apply(&self, g: usize) -> usize {
        self.map[g]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_injective(&self) -> bool {
        self.source.elements().filter(|&g| self.map[g] == 0).count() == 1
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.order()];
        for &x in &self.map {
            hit[x] = true;
        }
        hit.into_iter().all(|b| b)
    }

    pub fn kernel(&self) -> Subgroup {
        Subgroup::from_sorted(self.source.elements().filter(|&g| self.map[g] == 0).collect())
    }

    pub fn image(&self, h: &Subgroup) -> Subgroup {
        let mut els: Vec<usize> = h.elements().iter().map(|&g| self.map[g]).collect();
        els.sort_unstable();
        els.dedup();
        Subgroup::from_sorted(els)
    }

    pub fn preimage(&self, h: &Subgroup) -> Subgroup {
        Subgroup::from_sorted(
            self.source
                .elements()
                .filter(|&g| h.contains(self.map[g]))
                .collect(),
        )
    }
}
