//! Finite groups given by Cayley tables.
//!
//! Elements are opaque indices `0..order` with `0` the identity. Groups built
//! from permutations number their elements in breadth-first order from the
//! identity over the generator list, so indices are stable across runs.

mod hom;
mod lattice;
mod presets;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

pub use hom::GroupHom;
pub use lattice::SubgroupLattice;
pub use presets::{preset, PRESET_NAMES};

use crate::error::{Error, Result};

/// A finite group by composition table.
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    label: Option<String>,
    lattice: OnceLock<SubgroupLattice>,
    subgroup_cache: Mutex<HashMap<Vec<usize>, (Arc<FiniteGroup>, Vec<usize>)>>,
}

/// A subgroup, as the sorted list of its element indices in the parent.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    /// Wraps a sorted, deduplicated element list. Closure is not checked here;
    /// see [`FiniteGroup::check_subgroup`].
    pub fn from_sorted(elements: Vec<usize>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Subgroup { elements }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&g| other.contains(g))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            elements: self
                .elements
                .iter()
                .copied()
                .filter(|&g| other.contains(g))
                .collect(),
        }
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Subgroups order by size first, then lexicographically by elements.
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.elements
            .len()
            .cmp(&other.elements.len())
            .then_with(|| self.elements.cmp(&other.elements))
    }
}

type Perm = Vec<usize>;

fn compose(a: &Perm, b: &Perm) -> Perm {
    // (a ∘ b)(x) = a(b(x))
    b.iter().map(|&x| a[x]).collect()
}

impl FiniteGroup {
    /// Closure of the given permutations of `0..degree`.
    pub fn from_generators(degree: usize, perms: &[Vec<usize>]) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidGroup("degree must be positive".into()));
        }
        for (i, p) in perms.iter().enumerate() {
            if p.len() != degree {
                return Err(Error::InvalidGroup(format!(
                    "generator {i} has length {}, expected {degree}",
                    p.len()
                )));
            }
            let mut seen = vec![false; degree];
            for &x in p {
                if x >= degree || seen[x] {
                    return Err(Error::InvalidGroup(format!("generator {i} is not a bijection")));
                }
                seen[x] = true;
            }
        }
        let identity: Perm = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Perm, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in perms {
                let p = compose(&elements[i], g);
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }
        let n = elements.len();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&compose(&elements[a], &elements[b])];
            }
        }
        Self::from_table_unchecked(n, table)
    }

    /// Group from an explicit `order x order` table with identity at index 0.
    /// Associativity, identity and inverses are checked.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroup("table is not square over 0..order".into()));
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        for a in 0..n {
            if flat[a] != a || flat[a * n] != a {
                return Err(Error::InvalidGroup("index 0 is not an identity".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = flat[a * n + b];
                for c in 0..n {
                    if flat[ab * n + c] != flat[a * n + flat[b * n + c]] {
                        return Err(Error::InvalidGroup("table is not associative".into()));
                    }
                }
            }
        }
        Self::from_table_unchecked(n, flat)
    }

    fn from_table_unchecked(order: usize, table: Vec<usize>) -> Result<Self> {
        let mut inverses = vec![usize::MAX; order];
        for a in 0..order {
            let mut found = None;
            for b in 0..order {
                if table[a * order + b] == 0 {
                    if found.is_some() {
                        return Err(Error::InvalidGroup("inverse not unique".into()));
                    }
                    found = Some(b);
                }
            }
            match found {
                Some(b) if table[b * order + a] == 0 => inverses[a] = b,
                _ => return Err(Error::InvalidGroup(format!("element {a} has no inverse"))),
            }
        }
        Ok(FiniteGroup {
            order,
            table,
            inverses,
            label: None,
            lattice: OnceLock::new(),
            subgroup_cache: Mutex::new(HashMap::new()),
        })
    }

    pub(crate) fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `g h g^{-1}`
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        self.elements()
            .map(|g| self.element_order(g))
            .fold(1, num_integer::lcm)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.elements().any(|g| self.element_order(g) == self.order)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted(self.elements().collect())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_sorted(vec![0])
    }

    /// Subgroup generated by the given elements.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut set = BTreeSet::from([0usize]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Subgroup::from_sorted(set.into_iter().collect())
    }

    /// Checks that `h` is a subgroup of this group.
    pub fn check_subgroup(&self, h: &Subgroup) -> Result<()> {
        let els = h.elements();
        if els.is_empty() || els[0] != 0 || els.iter().any(|&x| x >= self.order) {
            return Err(Error::GroupMismatch(
                "subgroup elements do not belong to this group".into(),
            ));
        }
        for &a in els {
            if !h.contains(self.inv(a)) || els.iter().any(|&b| !h.contains(self.mul(a, b))) {
                return Err(Error::GroupMismatch("element set is not closed".into()));
            }
        }
        Ok(())
    }

    /// A small generating set of `h`, chosen greedily in index order.
    pub fn generators_of(&self, h: &Subgroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.trivial_subgroup();
        for &x in h.elements() {
            if !span.contains(x) {
                gens.push(x);
                span = self.generate(&gens);
                if span.order() == h.order() {
                    break;
                }
            }
        }
        gens
    }

    /// `g H g^{-1}`
    pub fn conjugate(&self, h: &Subgroup, g: usize) -> Subgroup {
        let mut els: Vec<usize> = h.elements().iter().map(|&x| self.conj(g, x)).collect();
        els.sort_unstable();
        Subgroup::from_sorted(els)
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.elements().all(|g| {
            h.elements()
                .iter()
                .all(|&x| h.contains(self.conj(g, x)))
        })
    }

    pub fn is_cyclic_subgroup(&self, h: &Subgroup) -> bool {
        h.elements()
            .iter()
            .any(|&g| self.element_order(g) == h.order())
    }

    /// Left cosets `gH`, ordered by their smallest element; each coset sorted.
    pub fn left_cosets(&self, h: &Subgroup) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut out = Vec::new();
        for g in self.elements() {
            if seen[g] {
                continue;
            }
            let mut c: Vec<usize> = h.elements().iter().map(|&x| self.mul(g, x)).collect();
            c.sort_unstable();
            for &x in &c {
                seen[x] = true;
            }
            out.push(c);
        }
        out
    }

    /// For each element `g`, the index of the coset `gH` in [`Self::left_cosets`].
    pub fn coset_index(&self, h: &Subgroup) -> Vec<usize> {
        let mut idx = vec![0; self.order];
        for (i, c) in self.left_cosets(h).iter().enumerate() {
            for &x in c {
                idx[x] = i;
            }
        }
        idx
    }

    /// One representative (the smallest index) per double coset `H g K`.
    pub fn double_cosets(&self, h: &Subgroup, k: &Subgroup) -> Result<Vec<usize>> {
        self.check_subgroup(h)?;
        self.check_subgroup(k)?;
        let mut seen = vec![false; self.order];
        let mut reps = Vec::new();
        for g in self.elements() {
            if seen[g] {
                continue;
            }
            reps.push(g);
            for &x in h.elements() {
                let xg = self.mul(x, g);
                for &y in k.elements() {
                    seen[self.mul(xg, y)] = true;
                }
            }
        }
        Ok(reps)
    }

    /// Size of the double coset `H g K`.
    pub fn double_coset_size(&self, h: &Subgroup, g: usize, k: &Subgroup) -> usize {
        let mut set = BTreeSet::new();
        for &x in h.elements() {
            let xg = self.mul(x, g);
            for &y in k.elements() {
                set.insert(self.mul(xg, y));
            }
        }
        set.len()
    }

    /// Quotient by a normal subgroup, with the projection as an element map.
    /// Cosets are numbered by their smallest element.
    pub fn quotient(&self, n: &Subgroup) -> Result<(FiniteGroup, Vec<usize>)> {
        self.check_subgroup(n)?;
        if !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        let cosets = self.left_cosets(n);
        let proj = self.coset_index(n);
        let k = cosets.len();
        let table: Vec<usize> = (0..k * k)
            .map(|i| proj[self.mul(cosets[i / k][0], cosets[i % k][0])])
            .collect();
        Ok((Self::from_table_unchecked(k, table)?, proj))
    }

    /// `h` as a group in its own right, with its embedding into this group.
    /// The subgroup's elements keep their relative order, so the standalone
    /// group numbers them `0..|h|` in increasing parent index.
    pub fn subgroup_group(&self, h: &Subgroup) -> (Arc<FiniteGroup>, Vec<usize>) {
        let mut cache = self.subgroup_cache.lock().unwrap();
        if let Some(hit) = cache.get(h.elements()) {
            return hit.clone();
        }
        let els = h.elements().to_vec();
        let pos: HashMap<usize, usize> = els.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let n = els.len();
        let table: Vec<usize> = (0..n * n)
            .map(|i| pos[&self.mul(els[i / n], els[i % n])])
            .collect();
        let g = Arc::new(
            Self::from_table_unchecked(n, table).expect("subgroup table is a group"),
        );
        cache.insert(els.clone(), (g.clone(), els.clone()));
        (g, els)
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        self.lattice.get_or_init(|| SubgroupLattice::compute(self))
    }

    /// Structural equality of composition tables.
    pub fn same_as(&self, other: &FiniteGroup) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Clone for FiniteGroup {
    fn clone(&self) -> Self {
        FiniteGroup {
            order: self.order,
            table: self.table.clone(),
            inverses: self.inverses.clone(),
            label: self.label.clone(),
            lattice: OnceLock::new(),
            subgroup_cache: Mutex::new(HashMap::new()),
        }
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("label", &self.label)
            .field("order", &self.order)
            .finish()
    }
}
