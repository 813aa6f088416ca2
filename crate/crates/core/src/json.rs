//! JSON forms of matrices, groups, relations, modules and local data.
//!
//! Subgroups are always referenced by their class index in the group's
//! subgroup lattice.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmodules::GModule;
use crate::groups::{preset, FiniteGroup};
use crate::inertial::LocalGaloisDatum;
use crate::linalg::IntMatrix;
use crate::relations::BrauerRelation;

const EXACT_F64_LIMIT: i64 = 1 << 53;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntEntry {
    Int(i64),
    Text(String),
}

impl IntEntry {
    fn from_big(x: &BigInt) -> Self {
        match x.to_i64() {
            Some(v) if v.abs() <= EXACT_F64_LIMIT => IntEntry::Int(v),
            _ => IntEntry::Text(x.to_string()),
        }
    }

    fn to_big(&self) -> Result<BigInt> {
        match self {
            IntEntry::Int(v) => Ok(BigInt::from(*v)),
            IntEntry::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Fixture(format!("`{s}` is not an integer"))),
        }
    }
}

/// `{"rows": n, "cols": m, "entries": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<IntEntry>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &IntMatrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows())
                .map(|r| m.row(r).iter().map(IntEntry::from_big).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<IntMatrix> {
        if self.entries.len() != self.rows {
            return Err(Error::Fixture(format!(
                "matrix declares {} rows but has {}",
                self.rows,
                self.entries.len()
            )));
        }
        let rows = self
            .entries
            .iter()
            .map(|row| row.iter().map(IntEntry::to_big).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if rows.iter().any(|r| r.len() != self.cols) {
            return Err(Error::Fixture(format!("matrix rows must have {} entries", self.cols)));
        }
        IntMatrix::from_big_rows(rows, self.cols)
    }
}

/// A preset name, `{"preset": name}` or `{"degree": n, "generators": [...]}`
/// with permutations given as image lists on `0..n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupJson {
    Name(String),
    Preset { preset: String },
    Permutations { degree: usize, generators: Vec<Vec<usize>> },
}

impl GroupJson {
    pub fn build(&self) -> Result<Arc<FiniteGroup>> {
        match self {
            GroupJson::Name(name) | GroupJson::Preset { preset: name } => Ok(Arc::new(preset(name)?)),
            GroupJson::Permutations { degree, generators } => {
                Ok(Arc::new(FiniteGroup::from_generators(*degree, generators)?))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub subgroup_class: usize,
    pub coeff: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationJson {
    pub group: GroupJson,
    pub terms: Vec<TermJson>,
}

impl RelationJson {
    pub fn from_relation(group: GroupJson, theta: &BrauerRelation) -> Self {
        RelationJson {
            group,
            terms: theta
                .terms()
                .map(|(subgroup_class, coeff)| TermJson {
                    subgroup_class,
                    coeff,
                })
                .collect(),
        }
    }

    pub fn to_relation(&self) -> Result<BrauerRelation> {
        self.to_relation_over(self.group.build()?)
    }

    /// Reads the terms against an already built group.
    pub fn to_relation_over(&self, g: Arc<FiniteGroup>) -> Result<BrauerRelation> {
        let terms: Vec<(usize, i64)> = self.terms.iter().map(|t| (t.subgroup_class, t.coeff)).collect();
        let theta = BrauerRelation::from_terms(g, &terms)?;
        if !theta.is_relation() {
            return Err(Error::NotARelation);
        }
        Ok(theta)
    }
}

/// `{"group", "rank", "rels", "action": {element: matrix}}`; actions of
/// omitted elements follow from the given ones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub group: GroupJson,
    pub rank: usize,
    pub rels: MatrixJson,
    pub action: BTreeMap<String, MatrixJson>,
}

impl ModuleJson {
    pub fn from_module(group: GroupJson, m: &GModule) -> Self {
        ModuleJson {
            group,
            rank: m.gens(),
            rels: MatrixJson::from_matrix(m.rels()),
            action: m
                .actions()
                .iter()
                .enumerate()
                .map(|(g, a)| (g.to_string(), MatrixJson::from_matrix(a)))
                .collect(),
        }
    }

    pub fn to_module(&self) -> Result<GModule> {
        self.to_module_over(self.group.build()?)
    }

    pub fn to_module_over(&self, g: Arc<FiniteGroup>) -> Result<GModule> {
        let rels = self.rels.to_matrix()?;
        if rels.rows() != self.rank {
            return Err(Error::Fixture(format!(
                "relations have {} rows but the rank is {}",
                rels.rows(),
                self.rank
            )));
        }
        let mut action = HashMap::new();
        for (key, m) in &self.action {
            let idx: usize = key
                .parse()
                .map_err(|_| Error::Fixture(format!("action key `{key}` is not an element index")))?;
            action.insert(idx, m.to_matrix()?);
        }
        GModule::from_partial_action(g, rels, action)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalDatumJson {
    pub group: GroupJson,
    pub inertia_subgroup_class: usize,
    pub frobenius_element: usize,
}

impl LocalDatumJson {
    pub fn to_datum(&self) -> Result<LocalGaloisDatum> {
        let g = self.group.build()?;
        let l = g.lattice();
        if self.inertia_subgroup_class >= l.num_classes() {
            return Err(Error::InvalidDatum(format!(
                "no subgroup class {}",
                self.inertia_subgroup_class
            )));
        }
        let inertia = l.representative(self.inertia_subgroup_class).clone();
        LocalGaloisDatum::new(g, inertia, self.frobenius_element)
    }
}

/// Parses a group argument: JSON, or a bare preset name.
pub fn parse_group(text: &str) -> Result<GroupJson> {
    let t = text.trim();
    if t.starts_with('{') || t.starts_with('"') {
        Ok(serde_json::from_str(t)?)
    } else {
        Ok(GroupJson::Name(t.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmodules::{augmentation_ideal, trivial_module};
    use crate::relations::relation_lattice;

    #[test]
    fn matrix_round_trip_with_big_entries() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let mut m = IntMatrix::from_rows(&[[1, -2], [3, 4]]);
        m[(1, 1)] = big.clone();
        let j = MatrixJson::from_matrix(&m);
        assert_eq!(j.entries[1][1], IntEntry::Text(big.to_string()));
        assert_eq!(j.entries[0][1], IntEntry::Int(-2));
        let text = serde_json::to_string(&j).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_matrix().unwrap(), m);
    }

    #[test]
    fn matrix_shape_errors() {
        let j: MatrixJson = serde_json::from_str(r#"{"rows": 2, "cols": 2, "entries": [[1, 2]]}"#).unwrap();
        assert!(j.to_matrix().is_err());
        let j: MatrixJson = serde_json::from_str(r#"{"rows": 1, "cols": 2, "entries": [["x", 2]]}"#).unwrap();
        assert!(j.to_matrix().is_err());
    }

    #[test]
    fn group_forms() {
        let a = parse_group("V4").unwrap().build().unwrap();
        let b = parse_group(r#"{"preset": "V4"}"#).unwrap().build().unwrap();
        assert!(a.same_as(&b));
        let c = parse_group(r#"{"degree": 3, "generators": [[1, 2, 0], [1, 0, 2]]}"#)
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(c.order(), 6);
        assert!(parse_group("nope").unwrap().build().is_err());
    }

    #[test]
    fn relation_round_trip() {
        let g = Arc::new(preset("S3").unwrap());
        let theta = relation_lattice(&g).remove(0);
        let j = RelationJson::from_relation(GroupJson::Name("S3".into()), &theta);
        let text = serde_json::to_string(&j).unwrap();
        let back: RelationJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_relation().unwrap(), theta);
        let bad = RelationJson {
            group: GroupJson::Name("S3".into()),
            terms: vec![TermJson {
                subgroup_class: 0,
                coeff: 1,
            }],
        };
        assert!(matches!(bad.to_relation(), Err(Error::NotARelation)));
    }

    #[test]
    fn module_round_trip_and_partial_action() {
        let g = Arc::new(preset("S3").unwrap());
        let (delta, _) = augmentation_ideal(&g);
        let j = ModuleJson::from_module(GroupJson::Name("S3".into()), &delta);
        let back = j.to_module().unwrap();
        assert_eq!(back.actions(), delta.actions());
        // keep only the generators' matrices
        let mut partial = j.clone();
        let gens = g.generators_of(&g.whole());
        partial.action.retain(|k, _| gens.contains(&k.parse().unwrap()));
        let rebuilt = partial.to_module().unwrap();
        assert_eq!(rebuilt.actions(), delta.actions());
        let z = trivial_module(&g);
        let jz = ModuleJson::from_module(GroupJson::Name("S3".into()), &z);
        assert_eq!(jz.rank, 1);
    }

    #[test]
    fn local_datum() {
        let j: LocalDatumJson = serde_json::from_str(
            r#"{"group": "V4", "inertia_subgroup_class": 1, "frobenius_element": 2}"#,
        )
        .unwrap();
        let d = j.to_datum().unwrap();
        assert_eq!(d.inertia().order(), 2);
        let bad = LocalDatumJson {
            frobenius_element: 1,
            ..j
        };
        assert!(matches!(bad.to_datum(), Err(Error::InvalidDatum(_))));
    }
}
