//! Number-field checks: Brauer's class number formula and the two regulator
//! constant identities, evaluated on fixture data.
//!
//! The exact pieces `C_Θ(Z)` and `C_Θ(Z[S])` are computed over the integers;
//! everything involving logarithms of units is floating point.

use std::path::Path;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmodules::{direct_sum, permutation_module};
use crate::groups::FiniteGroup;
use crate::json::{GroupJson, RelationJson};
use crate::regconst::{regulator_constant, PairingGram};
use crate::relations::BrauerRelation;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum Decimal {
    Text(String),
    Number(f64),
}

impl Decimal {
    fn value(&self) -> Option<f64> {
        match self {
            Decimal::Text(s) => s.trim().parse::<f64>().ok().filter(|x| x.is_finite()),
            Decimal::Number(x) => Some(*x).filter(|x| x.is_finite()),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassJson {
    subgroup_class: usize,
    h: u64,
    w: u64,
    reg: Decimal,
    #[serde(default)]
    unit_gram: Vec<Vec<Decimal>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FixtureJson {
    schema: u32,
    label: String,
    group: GroupJson,
    classes: Vec<ClassJson>,
    s_orbits: Vec<usize>,
    #[serde(default)]
    notes: Option<String>,
}

/// Invariants of `K^H` for one conjugacy class of subgroups.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassData {
    /// S-class number.
    pub h: u64,
    /// Number of roots of unity.
    pub w: u64,
    /// S-regulator.
    pub reg: f64,
    /// Pairing of a basis of the free part of the S-units of `K^H`, computed
    /// inside `K`.
    pub unit_gram: Vec<Vec<f64>>,
}

#[derive(Clone, Debug)]
pub struct FieldFixture {
    pub label: String,
    pub group: Arc<FiniteGroup>,
    pub group_json: GroupJson,
    /// Indexed by subgroup class.
    pub classes: Vec<Option<ClassData>>,
    /// Decomposition group class of one place in each `G`-orbit of `S`.
    pub s_orbits: Vec<usize>,
    pub notes: Option<String>,
}

fn gram_problem(gram: &[Vec<f64>]) -> Option<String> {
    let n = gram.len();
    if n == 0 {
        return None;
    }
    if gram.iter().any(|r| r.len() != n) {
        return Some("unit_gram is not square".into());
    }
    for (i, row) in gram.iter().enumerate() {
        for (j, &a) in row.iter().enumerate().take(i) {
            let b = gram[j][i];
            if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                return Some("unit_gram is not symmetric".into());
            }
        }
    }
    let m = DMatrix::from_fn(n, n, |i, j| gram[i][j]);
    if m.cholesky().is_none() {
        return Some("unit_gram is not positive definite".into());
    }
    None
}

impl FieldFixture {
    /// Parses and validates a fixture, reporting every problem found.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: FixtureJson = serde_json::from_str(text)?;
        let mut problems = Vec::new();
        if raw.schema != SCHEMA_VERSION {
            problems.push(format!("unsupported schema {}, expected {SCHEMA_VERSION}", raw.schema));
        }
        let group = raw.group.build()?;
        let l = group.lattice();
        let mut classes: Vec<Option<ClassData>> = vec![None; l.num_classes()];
        for (i, c) in raw.classes.iter().enumerate() {
            let at = format!("classes[{i}]");
            if c.subgroup_class >= l.num_classes() {
                problems.push(format!("{at}: no subgroup class {}", c.subgroup_class));
                continue;
            }
            if classes[c.subgroup_class].is_some() {
                problems.push(format!("{at}: class {} given twice", c.subgroup_class));
                continue;
            }
            if c.h == 0 {
                problems.push(format!("{at}: h must be at least 1"));
            }
            if c.w == 0 {
                problems.push(format!("{at}: w must be at least 1"));
            }
            let reg = match c.reg.value() {
                Some(r) if r > 0.0 => r,
                _ => {
                    problems.push(format!("{at}: reg must be a positive decimal"));
                    f64::NAN
                }
            };
            let mut gram = Vec::new();
            let mut parsed = true;
            for row in &c.unit_gram {
                let mut out = Vec::new();
                for x in row {
                    match x.value() {
                        Some(v) => out.push(v),
                        None => parsed = false,
                    }
                }
                gram.push(out);
            }
            if !parsed {
                problems.push(format!("{at}: unit_gram has a non-numeric entry"));
            } else if let Some(p) = gram_problem(&gram) {
                problems.push(format!("{at}: {p}"));
            }
            classes[c.subgroup_class] = Some(ClassData {
                h: c.h,
                w: c.w,
                reg,
                unit_gram: gram,
            });
        }
        if raw.s_orbits.is_empty() {
            problems.push("s_orbits is empty".into());
        }
        for &s in &raw.s_orbits {
            if s >= l.num_classes() {
                problems.push(format!("s_orbits: no subgroup class {s}"));
            }
        }
        if !problems.is_empty() {
            return Err(Error::Fixture(problems.join("; ")));
        }
        Ok(FieldFixture {
            label: raw.label,
            group,
            group_json: raw.group,
            classes,
            s_orbits: raw.s_orbits,
            notes: raw.notes,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    fn class(&self, c: usize) -> Result<&ClassData> {
        self.classes
            .get(c)
            .and_then(Option::as_ref)
            .ok_or_else(|| Error::Fixture(format!("no data for subgroup class {c}")))
    }

    fn check_relation(&self, theta: &BrauerRelation) -> Result<()> {
        if !theta.group().same_as(&self.group) {
            return Err(Error::GroupMismatch("relation is not over the fixture's group".into()));
        }
        if !theta.is_relation() {
            return Err(Error::NotARelation);
        }
        for (c, _) in theta.terms() {
            self.class(c)?;
        }
        Ok(())
    }
}

/// `Π_H (w_H⁻² det(gram_H / |H|))^{n_H}`.
pub fn c_units(fx: &FieldFixture, theta: &BrauerRelation) -> Result<f64> {
    fx.check_relation(theta)?;
    let l = fx.group.lattice();
    let mut acc = 1.0;
    for (c, n) in theta.terms() {
        let d = fx.class(c)?;
        let k = d.unit_gram.len();
        let order = l.representative(c).order() as f64;
        let det = if k == 0 {
            1.0
        } else {
            DMatrix::from_fn(k, k, |i, j| d.unit_gram[i][j] / order).determinant()
        };
        acc *= (det / (d.w as f64).powi(2)).powi(n as i32);
    }
    Ok(acc)
}

/// `C_Θ(Z) = Π |H|^{-n_H}`.
pub fn c_z(theta: &BrauerRelation) -> BigRational {
    let l = theta.group().lattice();
    theta
        .terms()
        .map(|(c, n)| {
            let h = BigRational::from_integer(BigInt::from(l.representative(c).order()));
            crate::regconst::pow(&h, -n)
        })
        .fold(BigRational::one(), |a, b| a * b)
}

/// `C_Θ(Z[S])` with `Z[S] = ⊕_orbits Z[G/G_P]`, using the pairing drawn
/// from `seed` or the averaged dot product.
pub fn c_zs(fx: &FieldFixture, theta: &BrauerRelation, seed: Option<u64>) -> Result<BigRational> {
    fx.check_relation(theta)?;
    let l = fx.group.lattice();
    let parts = fx
        .s_orbits
        .iter()
        .map(|&c| permutation_module(&fx.group, l.representative(c)))
        .collect::<Result<Vec<_>>>()?;
    let zs = direct_sum(&fx.group, &parts)?.module;
    let theta = BrauerRelation::new(fx.group.clone(), theta.coeffs().to_vec())?;
    let pairing = seed.map(|s| PairingGram::from_seed(&zs, s)).transpose()?;
    Ok(regulator_constant(&theta, &zs, pairing.as_ref())?.value)
}

/// A floating comparison `left ≈ right` at relative tolerance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericCheck {
    pub name: String,
    pub left: f64,
    pub right: f64,
    pub abs_error: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl NumericCheck {
    pub fn new(name: impl Into<String>, left: f64, right: f64, tolerance: f64) -> Self {
        let abs_error = (left - right).abs();
        let rel_error = if right == 0.0 {
            if left == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            abs_error / right.abs()
        };
        NumericCheck {
            name: name.into(),
            left,
            right,
            abs_error,
            rel_error,
            tolerance,
            pass: rel_error <= tolerance,
        }
    }

    /// `left / right`.
    pub fn ratio(&self) -> f64 {
        self.left / self.right
    }
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn product(theta: &BrauerRelation, f: impl Fn(usize, i64) -> f64) -> f64 {
    theta.terms().map(|(c, n)| f(c, n)).product()
}

fn h_product(fx: &FieldFixture, theta: &BrauerRelation, scale: i64) -> Result<BigRational> {
    let mut acc = BigRational::one();
    for (c, n) in theta.terms() {
        let h = BigRational::from_integer(BigInt::from(fx.class(c)?.h));
        acc *= crate::regconst::pow(&h, scale * n);
    }
    Ok(acc)
}

/// `Π h^{n_H}` against `Π (w/reg)^{n_H}`.
pub fn check_bcnf(fx: &FieldFixture, theta: &BrauerRelation, tol: f64) -> Result<NumericCheck> {
    fx.check_relation(theta)?;
    let left = to_f64(&h_product(fx, theta, 1)?);
    let right = product(theta, |c, n| {
        let d = fx.classes[c].as_ref().unwrap();
        (d.w as f64 / d.reg).powi(n as i32)
    });
    Ok(NumericCheck::new("class number formula", left, right, tol))
}

/// `C_Θ(E)` against `C_Θ(Z[S])⁻¹ C_Θ(Z) Π h^{-2n_H}`.
pub fn check_thm_rccln(fx: &FieldFixture, theta: &BrauerRelation, tol: f64) -> Result<NumericCheck> {
    let left = c_units(fx, theta)?;
    let right = c_zs(fx, theta, None)?.recip() * c_z(theta) * h_product(fx, theta, -2)?;
    Ok(NumericCheck::new("units via class numbers", left, to_f64(&right), tol))
}

/// `C_Θ(E)` against `Π w^{-2n_H} C_Θ(Z[S])⁻¹ C_Θ(Z) Π reg^{2n_H}`.
pub fn check_thm_rcreg(fx: &FieldFixture, theta: &BrauerRelation, tol: f64) -> Result<NumericCheck> {
    let left = c_units(fx, theta)?;
    let exact = c_zs(fx, theta, None)?.recip() * c_z(theta);
    let right = to_f64(&exact)
        * product(theta, |c, n| {
            let d = fx.classes[c].as_ref().unwrap();
            (d.reg / d.w as f64).powi(2 * n as i32)
        });
    Ok(NumericCheck::new("units via regulators", left, right, tol))
}

/// Dirichlet–Hilbert for `K = Q(√d, √−d)`: the unit index `Q_K` implied by
/// `h_K = Q_K h(Q(√d)) h(Q(√−d)) / 2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HilbertIndex {
    pub h_k: u64,
    pub h_real: u64,
    pub h_imaginary: u64,
    pub implied_q_k: BigRationalString,
    /// Whether the implied index is 1 or 2.
    pub admissible: bool,
}

/// A rational serialized as `"p/q"`.
#[derive(Clone, Debug, PartialEq)]
pub struct BigRationalString(pub BigRational);

impl Serialize for BigRationalString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

/// For a `V4` fixture whose quadratic subfields include exactly one with four
/// roots of unity (that is `Q(i)`), the other two are `Q(√d)` and
/// `Q(√−d)`; told apart by their regulators.
pub fn hilbert_index(fx: &FieldFixture) -> Option<HilbertIndex> {
    let l = fx.group.lattice();
    if fx.group.order() != 4 || fx.group.is_cyclic() {
        return None;
    }
    let quad: Vec<usize> = (0..l.num_classes())
        .filter(|&c| l.representative(c).order() == 2)
        .collect();
    let data: Vec<&ClassData> = quad.iter().map(|&c| fx.classes[c].as_ref()).collect::<Option<_>>()?;
    let gaussian: Vec<usize> = (0..3).filter(|&i| data[i].w == 4).collect();
    if gaussian.len() != 1 {
        return None;
    }
    let others: Vec<&ClassData> = (0..3).filter(|&i| i != gaussian[0]).map(|i| data[i]).collect();
    let (real, imag) = if others[0].unit_gram.is_empty() {
        (others[1], others[0])
    } else {
        (others[0], others[1])
    };
    let top = (0..l.num_classes()).find(|&c| l.representative(c).order() == 1)?;
    let h_k = fx.classes[top].as_ref()?.h;
    let q = BigRational::new(BigInt::from(2 * h_k), BigInt::from(real.h * imag.h));
    let admissible = q == BigRational::one() || q == BigRational::from_integer(BigInt::from(2));
    Some(HilbertIndex {
        h_k,
        h_real: real.h,
        h_imaginary: imag.h,
        implied_q_k: BigRationalString(q),
        admissible,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub label: String,
    pub relation: RelationJson,
    pub tolerance: f64,
    pub c_units: f64,
    pub c_z: BigRationalString,
    pub c_zs: BigRationalString,
    pub checks: Vec<NumericCheck>,
    /// The class number formula ratio squared against the ratio of the other
    /// two ratios; these agree identically, up to rounding.
    pub consistency: NumericCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hilbert: Option<HilbertIndex>,
    pub pass: bool,
}

/// Runs all three checks for one relation. A `seed` also recomputes
/// `C_Θ(Z[S])` with a random invariant pairing, which must agree.
pub fn verify(fx: &FieldFixture, theta: &BrauerRelation, tol: f64, seed: Option<u64>) -> Result<VerificationReport> {
    fx.check_relation(theta)?;
    let bcnf = check_bcnf(fx, theta, tol)?;
    let cln = check_thm_rccln(fx, theta, tol)?;
    let reg = check_thm_rcreg(fx, theta, tol)?;
    let consistency = NumericCheck::new(
        "consistency",
        bcnf.ratio().powi(2),
        cln.ratio() / reg.ratio(),
        (1.0 + tol).powi(2) - 1.0,
    );
    let pass = bcnf.pass && cln.pass && reg.pass && consistency.pass;
    let zs = c_zs(fx, theta, None)?;
    if seed.is_some() && c_zs(fx, theta, seed)? != zs {
        return Err(Error::Internal("C(Z[S]) depends on the pairing".into()));
    }
    Ok(VerificationReport {
        label: fx.label.clone(),
        relation: RelationJson::from_relation(fx.group_json.clone(), theta),
        tolerance: tol,
        c_units: c_units(fx, theta)?,
        c_z: BigRationalString(c_z(theta)),
        c_zs: BigRationalString(zs),
        checks: vec![bcnf, cln, reg],
        consistency,
        hilbert: hilbert_index(fx),
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::relation_lattice;

    const L: &str = "0.88137358701954302523260932498";
    const TWO_L: &str = "1.76274717403908605046521864996";
    const FOUR_L2: &str = "3.10727759958278392600229884036";

    fn zeta8_text() -> String {
        format!(
            r#"{{"schema": 1, "label": "zeta8", "group": "V4",
            "classes": [
              {{"subgroup_class": 0, "h": 1, "w": 8, "reg": "{TWO_L}", "unit_gram": [["{FOUR_L2}"]]}},
              {{"subgroup_class": 1, "h": 1, "w": 2, "reg": "{L}", "unit_gram": [["{FOUR_L2}"]]}},
              {{"subgroup_class": 2, "h": 1, "w": 2, "reg": "1", "unit_gram": []}},
              {{"subgroup_class": 3, "h": 1, "w": 4, "reg": "1", "unit_gram": []}},
              {{"subgroup_class": 4, "h": 1, "w": 2, "reg": "1", "unit_gram": []}}
            ],
            "s_orbits": [1]}}"#
        )
    }

    fn zeta8() -> FieldFixture {
        FieldFixture::from_json(&zeta8_text()).unwrap()
    }

    fn relation(fx: &FieldFixture) -> BrauerRelation {
        relation_lattice(&fx.group).remove(0)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn zeta8_by_hand() {
        let fx = zeta8();
        let theta = relation(&fx);
        // w⁻² det(gram / |H|) class by class, L = log(1 + √2)
        let l: f64 = L.parse().unwrap();
        let n: Vec<i64> = theta.coeffs().to_vec();
        let hand = ((4.0 * l * l) / 64.0).powi(n[0] as i32)
            * ((4.0 * l * l / 2.0) / 4.0).powi(n[1] as i32)
            * (1.0f64 / 4.0).powi(n[2] as i32)
            * (1.0f64 / 16.0).powi(n[3] as i32)
            * (1.0f64 / 4.0).powi(n[4] as i32);
        let cu = c_units(&fx, &theta).unwrap();
        assert!((cu - hand).abs() < 1e-14);
        assert!((cu - 0.5).abs() < 1e-12);
        assert_eq!(c_z(&theta), q(1, 2));
        assert_eq!(c_zs(&fx, &theta, None).unwrap(), q(1, 1));
    }

    #[test]
    fn zeta8_passes() {
        let fx = zeta8();
        let rep = verify(&fx, &relation(&fx), DEFAULT_TOLERANCE, Some(7)).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.checks.len(), 3);
        for c in &rep.checks {
            assert!(c.rel_error <= 1e-12, "{c:?}");
        }
        let h = rep.hilbert.unwrap();
        assert_eq!(h.implied_q_k.0, q(2, 1));
        assert!(h.admissible);
    }

    #[test]
    fn zero_relation_is_trivial() {
        let fx = zeta8();
        let zero = BrauerRelation::zero(fx.group.clone());
        assert_eq!(c_units(&fx, &zero).unwrap(), 1.0);
        assert_eq!(c_z(&zero), q(1, 1));
        assert_eq!(c_zs(&fx, &zero, None).unwrap(), q(1, 1));
        let rep = verify(&fx, &zero, DEFAULT_TOLERANCE, None).unwrap();
        assert!(rep.pass);
        assert!(rep.checks.iter().all(|c| c.left == 1.0 && c.right == 1.0));
    }

    #[test]
    fn c_z_on_s3() {
        let g = Arc::new(crate::groups::preset("S3").unwrap());
        // {1} - 2 C2 - C3 + 2 S3
        let theta = BrauerRelation::from_terms(g, &[(0, 1), (1, -2), (2, -1), (3, 2)]).unwrap();
        assert!(theta.is_relation());
        assert_eq!(c_z(&theta), q(1, 3));
    }

    #[test]
    fn c_zs_reductions() {
        let mut fx = zeta8();
        let theta = relation(&fx);
        fx.s_orbits = vec![4, 4];
        assert_eq!(c_zs(&fx, &theta, None).unwrap(), c_z(&theta) * c_z(&theta));
        fx.s_orbits = vec![0];
        assert_eq!(c_zs(&fx, &theta, None).unwrap(), q(1, 1));
    }

    #[test]
    fn unit_free_fixture_is_a_torsion_product() {
        let mut fx = zeta8();
        let theta = relation(&fx);
        for d in fx.classes.iter_mut().flatten() {
            d.unit_gram.clear();
            d.reg = 1.0;
        }
        let expected = product(&theta, |c, n| (fx.classes[c].as_ref().unwrap().w as f64).powi(-2 * n as i32));
        assert!((c_units(&fx, &theta).unwrap() - expected).abs() < 1e-15);
        let reg = check_thm_rcreg(&fx, &theta, 1e-9).unwrap();
        let exact = to_f64(&(c_zs(&fx, &theta, None).unwrap().recip() * c_z(&theta)));
        assert!((reg.right - expected * exact).abs() < 1e-15);
    }

    #[test]
    fn perturbed_data_fails_the_right_checks() {
        let mut fx = zeta8();
        let theta = relation(&fx);
        fx.classes[1].as_mut().unwrap().reg *= 1.0 + 1e-6;
        let rep = verify(&fx, &theta, DEFAULT_TOLERANCE, None).unwrap();
        assert!(!rep.checks[0].pass);
        assert!(rep.checks[1].pass);
        assert!(!rep.checks[2].pass);
        assert!(rep.consistency.pass);
        assert!(!rep.pass);

        let mut fx = zeta8();
        fx.classes[3].as_mut().unwrap().h = 2;
        let rep = verify(&fx, &theta, DEFAULT_TOLERANCE, None).unwrap();
        assert!(!rep.checks[0].pass && !rep.checks[1].pass && rep.checks[2].pass);
    }

    #[test]
    fn validation_collects_every_problem() {
        let text = zeta8_text()
            .replacen("\"w\": 8", "\"w\": 0", 1)
            .replacen(&format!("[[\"{FOUR_L2}\"]]"), "[[\"1\", \"2\"], [\"3\", \"1\"]]", 1)
            .replace("\"s_orbits\": [1]", "\"s_orbits\": [9]");
        let err = FieldFixture::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("w must be at least 1"), "{err}");
        assert!(err.contains("not symmetric"), "{err}");
        assert!(err.contains("s_orbits: no subgroup class 9"), "{err}");

        let text = zeta8_text().replacen(&format!("[[\"{FOUR_L2}\"]]"), "[[\"-1\"]]", 1);
        let err = FieldFixture::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("positive definite"), "{err}");

        let text = zeta8_text().replace("\"schema\": 1", "\"schema\": 2");
        assert!(FieldFixture::from_json(&text).is_err());
        let text = zeta8_text().replace("\"subgroup_class\": 2,", "\"subgroup_class\": 1,");
        let err = FieldFixture::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("given twice"), "{err}");
        assert!(FieldFixture::from_json("{\"schema\": 1}").is_err());
    }

    #[test]
    fn missing_class_data() {
        let mut v: serde_json::Value = serde_json::from_str(&zeta8_text()).unwrap();
        v["classes"].as_array_mut().unwrap().pop();
        let fx = FieldFixture::from_json(&v.to_string()).unwrap();
        let theta = relation(&fx);
        assert!(matches!(c_units(&fx, &theta), Err(Error::Fixture(_))));
        assert!(matches!(verify(&fx, &theta, 1e-9, None), Err(Error::Fixture(_))));
    }

    #[test]
    fn relation_over_another_group() {
        let fx = zeta8();
        let g = Arc::new(crate::groups::preset("S3").unwrap());
        let theta = relation_lattice(&g).remove(0);
        assert!(matches!(c_units(&fx, &theta), Err(Error::GroupMismatch(_))));
    }
}
