use std::collections::BTreeSet;

use super::{FiniteGroup, Subgroup};

/// All subgroups of a group, partitioned into conjugacy classes.
///
/// Subgroups are sorted by order, then lexicographically by element set.
/// Classes are numbered by their representative, which is the smallest member
/// in that order. Class 0 is always the trivial subgroup and the last class is
/// the whole group.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    subgroups: Vec<Subgroup>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    cyclic: Vec<bool>,
    normal: Vec<bool>,
}

impl SubgroupLattice {
    /// Cyclic subgroups, then pairwise joins until nothing new appears.
    pub(crate) fn compute(g: &FiniteGroup) -> Self {
        let mut found: BTreeSet<Subgroup> = g.elements().map(|x| g.generate(&[x])).collect();
        loop {
            let current: Vec<Subgroup> = found.iter().cloned().collect();
            let mut added = false;
            for (i, a) in current.iter().enumerate() {
                for b in &current[i + 1..] {
                    if a.is_subset_of(b) || b.is_subset_of(a) {
                        continue;
                    }
                    let mut gens = g.generators_of(a);
                    gens.extend(g.generators_of(b));
                    if found.insert(g.generate(&gens)) {
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        let subgroups: Vec<Subgroup> = found.into_iter().collect();
        for h in &subgroups {
            assert_eq!(g.order() % h.order(), 0, "Lagrange violated");
        }

        let mut class_of = vec![usize::MAX; subgroups.len()];
        let mut classes = Vec::new();
        for i in 0..subgroups.len() {
            if class_of[i] != usize::MAX {
                continue;
            }
            let c = classes.len();
            let mut members = BTreeSet::new();
            for x in g.elements() {
                let conj = g.conjugate(&subgroups[i], x);
                let j = subgroups.binary_search(&conj).expect("conjugate is a subgroup");
                members.insert(j);
            }
            for &j in &members {
                class_of[j] = c;
            }
            classes.push(members.into_iter().collect::<Vec<_>>());
        }
        let cyclic = classes
            .iter()
            .map(|c| g.is_cyclic_subgroup(&subgroups[c[0]]))
            .collect();
        let normal = classes.iter().map(|c| c.len() == 1).collect();
        SubgroupLattice {
            subgroups,
            class_of,
            classes,
            cyclic,
            normal,
        }
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn subgroup(&self, index: usize) -> &Subgroup {
        &self.subgroups[index]
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Subgroup indices in class `c`.
    pub fn class_members(&self, c: usize) -> &[usize] {
        &self.classes[c]
    }

    pub fn class_size(&self, c: usize) -> usize {
        self.classes[c].len()
    }

    pub fn representative(&self, c: usize) -> &Subgroup {
        &self.subgroups[self.classes[c][0]]
    }

    pub fn class_of(&self, index: usize) -> usize {
        self.class_of[index]
    }

    pub fn index_of(&self, h: &Subgroup) -> Option<usize> {
        self.subgroups.binary_search(h).ok()
    }

    pub fn class_of_subgroup(&self, h: &Subgroup) -> Option<usize> {
        self.index_of(h).map(|i| self.class_of[i])
    }

    pub fn is_cyclic_class(&self, c: usize) -> bool {
        self.cyclic[c]
    }

    pub fn is_normal_class(&self, c: usize) -> bool {
        self.normal[c]
    }

    pub fn cyclic_classes(&self) -> Vec<usize> {
        (0..self.num_classes()).filter(|&c| self.cyclic[c]).collect()
    }
}

#[cfg(test)]
mod tests {
    use crate::groups::preset;

    fn counts(name: &str) -> (usize, usize) {
        let g = preset(name).unwrap();
        let l = g.lattice();
        (l.len(), l.num_classes())
    }

    #[test]
    fn known_lattice_sizes() {
        assert_eq!(counts("C1"), (1, 1));
        assert_eq!(counts("V4"), (5, 5));
        assert_eq!(counts("S3"), (6, 4));
        assert_eq!(counts("D4"), (10, 8));
        assert_eq!(counts("Q8"), (6, 6));
        assert_eq!(counts("C2xC2xC2"), (16, 16));
        assert_eq!(counts("C2xC4"), (8, 8));
        assert_eq!(counts("A4"), (10, 5));
        assert_eq!(counts("C12"), (6, 6));
    }

    #[test]
    fn class_representatives_are_minimal_and_stable() {
        let g = preset("S3").unwrap();
        let l = g.lattice();
        for c in 0..l.num_classes() {
            let rep = l.representative(c);
            for &m in l.class_members(c) {
                assert!(rep <= l.subgroup(m));
            }
        }
        let again = super::SubgroupLattice::compute(&g);
        for c in 0..l.num_classes() {
            assert_eq!(l.representative(c), again.representative(c));
        }
    }

    #[test]
    fn trivial_first_whole_last() {
        let g = preset("D4").unwrap();
        let l = g.lattice();
        assert_eq!(l.representative(0).order(), 1);
        assert_eq!(l.representative(l.num_classes() - 1).order(), 8);
    }

    #[test]
    fn conjugation_permutes_subgroups() {
        let g = preset("A4").unwrap();
        let l = g.lattice();
        for h in l.subgroups() {
            for x in g.elements() {
                let c = g.conjugate(h, x);
                assert_eq!(l.class_of_subgroup(&c), l.class_of_subgroup(h));
            }
        }
    }
}
