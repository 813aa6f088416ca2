//! Brauer relations: integer combinations of subgroup classes whose virtual
//! permutation character vanishes.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GroupHom, Subgroup};
use crate::linalg::{kernel_basis, IntMatrix};

/// A formal combination `Σ n_H H` over conjugacy classes of subgroups.
///
/// One coefficient per class of the group's lattice, attached to the class
/// representative. The combination need not be a relation; see
/// [`BrauerRelation::is_relation`].
#[derive(Clone)]
pub struct BrauerRelation {
    group: Arc<FiniteGroup>,
    coeffs: Vec<i64>,
}

impl BrauerRelation {
    pub fn new(group: Arc<FiniteGroup>, coeffs: Vec<i64>) -> Result<Self> {
        let k = group.lattice().num_classes();
        if coeffs.len() != k {
            return Err(Error::Dimension(format!(
                "expected {k} class coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(BrauerRelation { group, coeffs })
    }

    pub fn zero(group: Arc<FiniteGroup>) -> Self {
        let k = group.lattice().num_classes();
        BrauerRelation {
            group,
            coeffs: vec![0; k],
        }
    }

    /// From `(class index, coefficient)` pairs; repeated classes add up.
    pub fn from_terms(group: Arc<FiniteGroup>, terms: &[(usize, i64)]) -> Result<Self> {
        let mut r = Self::zero(group);
        for &(c, n) in terms {
            if c >= r.coeffs.len() {
                return Err(Error::Dimension(format!("no subgroup class {c}")));
            }
            r.coeffs[c] += n;
        }
        Ok(r)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, class: usize) -> i64 {
        self.coeffs[class]
    }

    /// Nonzero `(class, n_H)` pairs in class order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &n)| n != 0)
            .map(|(c, &n)| (c, n))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&n| n == 0)
    }

    /// Value of the virtual permutation character on the cyclic class `c`.
    pub fn character_at(&self, c: &Subgroup) -> i64 {
        let l = self.group.lattice();
        self.terms()
            .map(|(k, n)| n * fixed_point_count_unchecked(&self.group, c, l.representative(k)) as i64)
            .sum()
    }

    /// Zero permutation character on every cyclic subgroup.
    pub fn is_relation(&self) -> bool {
        let l = self.group.lattice();
        l.cyclic_classes()
            .into_iter()
            .all(|c| self.character_at(l.representative(c)) == 0)
    }

    /// `Σ n_H` (degree of the trivial-character pairing).
    pub fn coefficient_sum(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// `Σ n_H [G:H]` (dimension of the virtual representation).
    pub fn degree(&self) -> i64 {
        let l = self.group.lattice();
        let g = self.group.order() as i64;
        self.terms()
            .map(|(c, n)| n * g / l.representative(c).order() as i64)
            .sum()
    }

    pub fn add(&self, other: &BrauerRelation) -> Result<BrauerRelation> {
        self.same_group(other)?;
        Ok(BrauerRelation {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scaled(&self, k: i64) -> BrauerRelation {
        BrauerRelation {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }

    fn same_group(&self, other: &BrauerRelation) -> Result<()> {
        if !self.group.same_as(&other.group) {
            return Err(Error::GroupMismatch("relations live in different groups".into()));
        }
        Ok(())
    }

    /// Transport along an injective homomorphism `G → X`.
    pub fn induce(&self, emb: &GroupHom) -> Result<BrauerRelation> {
        if !emb.source().same_as(&self.group) {
            return Err(Error::GroupMismatch("embedding source is not the relation's group".into()));
        }
        if !emb.is_injective() {
            return Err(Error::InvalidHomomorphism("induction needs an injective map".into()));
        }
        let x = emb.target().clone();
        let xl = x.lattice();
        let mut out = BrauerRelation::zero(x.clone());
        for (c, n) in self.terms() {
            let img = emb.image(self.group.lattice().representative(c));
            let k = xl
                .class_of_subgroup(&img)
                .ok_or_else(|| Error::Internal("image of a subgroup is not a subgroup".into()))?;
            out.coeffs[k] += n;
        }
        Ok(out)
    }

    /// Mackey restriction to `y`, returned over `y` as a standalone group
    /// (see [`FiniteGroup::subgroup_group`] for the element numbering).
    ///
    /// The orbits of `Y` on `G/H` are indexed by double cosets `Y x H`, with
    /// stabilizer `Y ∩ xHx⁻¹`.
    pub fn restrict(&self, y: &Subgroup) -> Result<BrauerRelation> {
        self.group.check_subgroup(y)?;
        let (yg, emb) = self.group.subgroup_group(y);
        let pos = |g: usize| emb.binary_search(&g).expect("element of y");
        let yl = yg.lattice();
        let mut out = BrauerRelation::zero(yg.clone());
        for (c, n) in self.terms() {
            let h = self.group.lattice().representative(c);
            for x in self.group.double_cosets(y, h)? {
                let stab = y.intersection(&self.group.conjugate(h, x));
                let mut local: Vec<usize> = stab.elements().iter().map(|&g| pos(g)).collect();
                local.sort_unstable();
                let k = yl
                    .class_of_subgroup(&Subgroup::from_sorted(local))
                    .ok_or_else(|| Error::Internal("stabilizer is not a subgroup".into()))?;
                out.coeffs[k] += n;
            }
        }
        Ok(out)
    }

    /// Pull back along a surjection `Z ↠ G`: each `H` goes to its preimage.
    pub fn inflate(&self, quotient: &GroupHom) -> Result<BrauerRelation> {
        if !quotient.target().same_as(&self.group) {
            return Err(Error::GroupMismatch("quotient target is not the relation's group".into()));
        }
        if !quotient.is_surjective() {
            return Err(Error::InvalidHomomorphism("inflation needs a surjective map".into()));
        }
        let z = quotient.source().clone();
        let zl = z.lattice();
        let mut out = BrauerRelation::zero(z.clone());
        for (c, n) in self.terms() {
            let pre = quotient.preimage(self.group.lattice().representative(c));
            let k = zl
                .class_of_subgroup(&pre)
                .ok_or_else(|| Error::Internal("preimage is not a subgroup".into()))?;
            out.coeffs[k] += n;
        }
        Ok(out)
    }
}

impl PartialEq for BrauerRelation {
    fn eq(&self, other: &Self) -> bool {
        self.group.same_as(&other.group) && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for BrauerRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BrauerRelation({self})")
    }
}

impl fmt::Display for BrauerRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(c, n)| format!("{n}*H{c}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `#{xH ∈ G/H : c·xH = xH}`.
pub fn fixed_point_count(g: &FiniteGroup, c: &Subgroup, h: &Subgroup) -> Result<usize> {
    g.check_subgroup(c)?;
    g.check_subgroup(h)?;
    Ok(fixed_point_count_unchecked(g, c, h))
}

fn fixed_point_count_unchecked(g: &FiniteGroup, c: &Subgroup, h: &Subgroup) -> usize {
    // xH is fixed by c iff x⁻¹cx ⊆ H
    g.left_cosets(h)
        .iter()
        .filter(|coset| {
            let x = coset[0];
            let xi = g.inv(x);
            c.elements().iter().all(|&y| h.contains(g.mul(g.mul(xi, y), x)))
        })
        .count()
}

/// Fixed-point counts: rows are cyclic classes, columns all classes.
pub fn marks_matrix(g: &FiniteGroup) -> IntMatrix {
    let l = g.lattice();
    let cyc = l.cyclic_classes();
    let mut m = IntMatrix::zeros(cyc.len(), l.num_classes());
    for (i, &c) in cyc.iter().enumerate() {
        for k in 0..l.num_classes() {
            m[(i, k)] = BigInt::from(fixed_point_count_unchecked(
                g,
                l.representative(c),
                l.representative(k),
            ));
        }
    }
    m
}

/// A basis of the lattice of Brauer relations, in column Hermite form.
pub fn relation_lattice(g: &Arc<FiniteGroup>) -> Vec<BrauerRelation> {
    let k = kernel_basis(&marks_matrix(g));
    (0..k.cols())
        .map(|j| {
            let coeffs = k
                .column(j)
                .iter()
                .map(|x| x.to_i64().expect("relation coefficient fits in i64"))
                .collect();
            let r = BrauerRelation {
                group: g.clone(),
                coeffs,
            };
            assert!(r.is_relation(), "kernel vector is not a relation");
            r
        })
        .collect()
}
