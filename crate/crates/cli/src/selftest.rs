use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::json;

use brauer_core::gmodules::{augmentation_ideal, regular_module, trivial_module, GMap};
use brauer_core::groups::{preset, PRESET_NAMES};
use brauer_core::inertial::{check_w_dual_trivial, LocalGaloisDatum};
use brauer_core::linalg::IntMatrix;
use brauer_core::regconst::{check_multiplicativity, regulator_constant, regulator_constant_homological};
use brauer_core::relations::relation_lattice;
use brauer_core::verify::{verify, FieldFixture, DEFAULT_TOLERANCE};
use brauer_core::Result;

use super::{emit, Outcome};

const ZETA8: &str = include_str!("../../../fixtures/zeta8.json");

fn relation_existence() -> Result<bool> {
    for name in PRESET_NAMES {
        let g = Arc::new(preset(name)?);
        if relation_lattice(&g).is_empty() != g.is_cyclic() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn paths_agree() -> Result<bool> {
    for name in ["V4", "S3"] {
        let g = Arc::new(preset(name)?);
        let theta = relation_lattice(&g).remove(0);
        let modules = [
            trivial_module(&g),
            regular_module(&g),
            augmentation_ideal(&g).0,
            trivial_module(&g).mod_multiple(2),
        ];
        for m in &modules {
            if regulator_constant(&theta, m, None)?.value != regulator_constant_homological(&theta, m, None)?.value {
                return Ok(false);
            }
        }
        if !regulator_constant(&theta, &modules[1], None)?.value.is_integer() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn multiplicativity() -> Result<bool> {
    let g = Arc::new(preset("S3")?);
    let theta = relation_lattice(&g).remove(0);
    let (_, inc) = augmentation_ideal(&g);
    let ones = IntMatrix::from_fn(1, g.order(), |_, _| BigInt::from(1));
    let eps = GMap::new(regular_module(&g), trivial_module(&g), ones)?;
    Ok(check_multiplicativity(&theta, &inc, &eps)?.holds())
}

fn dual_inertial() -> Result<bool> {
    let g = Arc::new(preset("V4")?);
    let theta = relation_lattice(&g).remove(0);
    for d in LocalGaloisDatum::enumerate(&g) {
        if !check_w_dual_trivial(&d, &theta)?.iter().all(|c| c.holds()) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn zeta8() -> Result<bool> {
    let fx = FieldFixture::from_json(ZETA8)?;
    let theta = relation_lattice(&fx.group).remove(0);
    Ok(verify(&fx, &theta, DEFAULT_TOLERANCE, None)?.pass)
}

type Check = (&'static str, fn() -> Result<bool>);

pub fn run() -> Outcome {
    let checks: [Check; 5] = [
        ("relations exist exactly for noncyclic groups", relation_existence),
        ("pairing and homological constants agree", paths_agree),
        ("multiplicativity on the augmentation sequence", multiplicativity),
        ("dual inertial lattices have trivial constants", dual_inertial),
        ("Q(zeta8) fixture", zeta8),
    ];
    let mut all = true;
    let mut out = Vec::new();
    for (name, f) in checks {
        let (pass, error) = match f() {
            Ok(p) => (p, None),
            Err(e) => (false, Some(e.to_string())),
        };
        all &= pass;
        out.push(json!({ "name": name, "pass": pass, "error": error }));
    }
    emit(&json!({ "checks": out, "pass": all }));
    Ok(all)
}
