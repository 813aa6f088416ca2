use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use brauer_core::cohomology::{cohomology_with, CohomologyConfig};
use brauer_core::gmodules::{augmentation_ideal, permutation_module, regular_module, trivial_module, GModule};
use brauer_core::groups::FiniteGroup;
use brauer_core::inertial::{
    check_bottom_row, check_dual_cohomology, check_w_dual_trivial, inertial_lattice, LocalGaloisDatum,
};
use brauer_core::json::{parse_group, GroupJson, LocalDatumJson, ModuleJson, RelationJson};
use brauer_core::regconst::{
    build_phi, regulator_constant, regulator_constant_homological, PairingGram, DEFAULT_PHI_ATTEMPTS,
};
use brauer_core::relations::{relation_lattice, BrauerRelation};
use brauer_core::verify::{verify, FieldFixture, DEFAULT_TOLERANCE};
use brauer_core::Error;

mod selftest;

#[derive(Parser)]
#[command(name = "brauer", version, about = "Brauer relations and regulator constants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Pairing,
    Homological,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Subgroup classes and a basis of Brauer relations.
    Relations {
        /// Preset name or group JSON.
        #[arg(long)]
        group: String,
    },
    /// C_Θ(M) for a relation and a module.
    Regconst {
        #[arg(long)]
        group: String,
        /// Relation JSON or file, or the index of a basis relation.
        #[arg(long)]
        relation: String,
        /// Module JSON or file, or one of trivial, regular, augmentation,
        /// perm:<class>, trivial-mod:<m>.
        #[arg(long)]
        module: String,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
        /// Draws the pairing and the map φ from this seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Invariant factors of H^i(H, M).
    Cohomology {
        #[arg(long)]
        group: String,
        #[arg(long)]
        module: String,
        /// Subgroup class index.
        #[arg(long)]
        subgroup: usize,
        #[arg(long)]
        degree: usize,
    },
    /// Inertial lattice checks for one local datum, or for all of them.
    InertialCheck {
        /// Local datum JSON or file.
        #[arg(long, conflicts_with_all = ["group", "inertia", "frobenius"])]
        datum: Option<String>,
        #[arg(long)]
        group: Option<String>,
        /// Inertia subgroup class; every valid datum when omitted.
        #[arg(long, requires = "group")]
        inertia: Option<usize>,
        #[arg(long, requires = "inertia")]
        frobenius: Option<usize>,
    },
    /// Class number formula and regulator constant identities on a fixture.
    Verify {
        #[arg(long)]
        fixture: PathBuf,
        /// Relation JSON or file, or the index of a basis relation. Every
        /// basis relation is checked when absent.
        #[arg(long, conflicts_with = "all_relations")]
        relation: Option<String>,
        #[arg(long)]
        all_relations: bool,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[arg(long)]
        seed: Option<u64>,
        /// Emit the full JSON report instead of one line per check.
        #[arg(long)]
        json: bool,
    },
    /// A quick run of the core identities on small groups.
    Selftest,
}

enum Failure {
    Check,
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CheckFailed(_) | Error::NotExact(_) | Error::Internal(_) => {
                eprintln!("check failed: {e}");
                Failure::Check
            }
            e => Failure::Data(e),
        }
    }
}

type Outcome = std::result::Result<bool, Failure>;

fn read_arg(text: &str) -> Result<String, Error> {
    let t = text.trim();
    if t.starts_with('{') || t.starts_with('[') {
        Ok(t.to_string())
    } else {
        Ok(std::fs::read_to_string(Path::new(t))?)
    }
}

fn load_group(text: &str) -> Result<(GroupJson, Arc<FiniteGroup>), Error> {
    let t = text.trim();
    let gj = if t.starts_with('{') || t.starts_with('"') || !Path::new(t).is_file() {
        parse_group(t)?
    } else {
        serde_json::from_str(&std::fs::read_to_string(t)?)?
    };
    let g = gj.build()?;
    Ok((gj, g))
}

fn load_relation(text: &str, g: &Arc<FiniteGroup>) -> Result<BrauerRelation, Error> {
    if let Ok(i) = text.trim().parse::<usize>() {
        let basis = relation_lattice(g);
        return basis
            .get(i)
            .cloned()
            .ok_or_else(|| Error::Fixture(format!("the group has {} basis relations", basis.len())));
    }
    let rj: RelationJson = serde_json::from_str(&read_arg(text)?)?;
    let theta = rj.to_relation()?;
    if !theta.group().same_as(g) {
        return Err(Error::GroupMismatch("relation is over another group".into()));
    }
    BrauerRelation::new(g.clone(), theta.coeffs().to_vec())
}

fn load_module(text: &str, g: &Arc<FiniteGroup>) -> Result<GModule, Error> {
    let t = text.trim();
    let l = g.lattice();
    let class = |s: &str| -> Result<usize, Error> {
        s.parse::<usize>()
            .ok()
            .filter(|&c| c < l.num_classes())
            .ok_or_else(|| Error::InvalidModule(format!("`{s}` is not a subgroup class")))
    };
    match t {
        "trivial" => return Ok(trivial_module(g)),
        "regular" => return Ok(regular_module(g)),
        "augmentation" => return Ok(augmentation_ideal(g).0),
        _ => {}
    }
    if let Some(c) = t.strip_prefix("perm:") {
        return permutation_module(g, l.representative(class(c)?));
    }
    if let Some(m) = t.strip_prefix("trivial-mod:") {
        let m: u64 = m
            .parse()
            .ok()
            .filter(|&m| m > 0)
            .ok_or_else(|| Error::InvalidModule(format!("`{m}` is not a positive modulus")))?;
        return Ok(trivial_module(g).mod_multiple(m));
    }
    let mj: ModuleJson = serde_json::from_str(&read_arg(t)?)?;
    let m = mj.to_module()?;
    if !m.group().same_as(g) {
        return Err(Error::GroupMismatch("module is over another group".into()));
    }
    GModule::new(g.clone(), m.rels().clone(), m.actions().to_vec())
}

fn big(x: &BigInt) -> Value {
    json!(x.to_string())
}

fn emit(v: &Value) {
    let text = serde_json::to_string_pretty(v).expect("json values serialize");
    // a closed pipe is not worth a panic
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn relations(group: &str) -> Outcome {
    let (gj, g) = load_group(group)?;
    let l = g.lattice();
    let classes: Vec<Value> = (0..l.num_classes())
        .map(|c| {
            json!({
                "class": c,
                "order": l.representative(c).order(),
                "size": l.class_size(c),
                "cyclic": l.is_cyclic_class(c),
                "normal": l.is_normal_class(c),
            })
        })
        .collect();
    let rels: Vec<RelationJson> = relation_lattice(&g)
        .iter()
        .map(|t| RelationJson::from_relation(gj.clone(), t))
        .collect();
    emit(&json!({
        "group": gj,
        "order": g.order(),
        "classes": classes,
        "relations": rels,
    }));
    Ok(true)
}

fn regconst(group: &str, relation: &str, module: &str, method: MethodArg, seed: Option<u64>) -> Outcome {
    let (_, g) = load_group(group)?;
    let theta = load_relation(relation, &g)?;
    let m = load_module(module, &g)?;
    let mut out = serde_json::Map::new();
    let mut values = Vec::new();
    if method != MethodArg::Homological {
        let pairing = seed.map(|s| PairingGram::from_seed(&m, s)).transpose()?;
        let rc = regulator_constant(&theta, &m, pairing.as_ref())?;
        let factors: Vec<Value> = rc
            .factors
            .iter()
            .map(|f| {
                json!({
                    "class": f.class,
                    "coeff": f.coeff,
                    "subgroup_order": f.subgroup_order,
                    "torsion": big(&f.torsion),
                    "det": f.det.to_string(),
                    "factor": f.factor.to_string(),
                })
            })
            .collect();
        out.insert("value".into(), json!(rc.value.to_string()));
        out.insert("factors".into(), json!(factors));
        values.push(rc.value);
    }
    if method != MethodArg::Pairing {
        let phi = if theta.is_zero() {
            None
        } else {
            Some(build_phi(&theta, seed.unwrap_or(0), DEFAULT_PHI_ATTEMPTS)?)
        };
        let h = regulator_constant_homological(&theta, &m, phi.as_ref())?;
        out.entry("value").or_insert(json!(h.value.to_string()));
        out.insert(
            "homological".into(),
            json!({
                "value": h.value.to_string(),
                "ker_phi": big(&h.ker_phi),
                "coker_phi": big(&h.coker_phi),
                "ker_phi_tr": big(&h.ker_phi_tr),
                "coker_phi_tr": big(&h.coker_phi_tr),
                "phi_attempts": phi.as_ref().map(|p| p.attempts),
            }),
        );
        values.push(h.value);
    }
    let agree = values.windows(2).all(|w| w[0] == w[1]);
    if values.len() == 2 {
        out.insert("agree".into(), json!(agree));
    }
    emit(&Value::Object(out));
    Ok(agree)
}

fn cohomology(group: &str, module: &str, subgroup: usize, degree: usize) -> Outcome {
    let (_, g) = load_group(group)?;
    let m = load_module(module, &g)?;
    let l = g.lattice();
    if subgroup >= l.num_classes() {
        return Err(Failure::Data(Error::InvalidGroup(format!("no subgroup class {subgroup}"))));
    }
    let cfg = CohomologyConfig {
        max_degree: degree.max(3),
        ..CohomologyConfig::default()
    };
    let inv = cohomology_with(l.representative(subgroup), &m, degree, &cfg)?;
    emit(&json!({
        "subgroup_class": subgroup,
        "degree": degree,
        "invariants": inv.torsion.iter().map(big).collect::<Vec<_>>(),
        "free_rank": inv.free_rank,
        "order": inv.order().map(|o| o.to_string()),
        "structure": inv.to_string(),
    }));
    Ok(true)
}

fn inertial_report(datum: &LocalGaloisDatum) -> Result<(Value, bool), Error> {
    let lat = inertial_lattice(datum)?;
    let bottom = check_bottom_row(&lat).is_ok();
    let dual = check_dual_cohomology(&lat)?;
    let mut pass = bottom && dual.iter().all(|c| c.holds());
    let mut constants = Vec::new();
    for theta in relation_lattice(datum.group()) {
        for c in check_w_dual_trivial(datum, &theta)? {
            pass &= c.holds();
            constants.push(c.to_string());
        }
    }
    let inertia_class = datum.group().lattice().class_of_subgroup(datum.inertia());
    Ok((
        json!({
            "inertia_class": inertia_class,
            "inertia_order": datum.inertia().order(),
            "frobenius": datum.frobenius(),
            "rank": lat.w.gens(),
            "bottom_row_exact": bottom,
            "dual_cohomology": dual.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "dual_regulator_constant": constants,
            "pass": pass,
        }),
        pass,
    ))
}

fn inertial_check(
    datum: Option<String>,
    group: Option<String>,
    inertia: Option<usize>,
    frobenius: Option<usize>,
) -> Outcome {
    let data: Vec<LocalGaloisDatum> = match (datum, group) {
        (Some(d), _) => {
            let dj: LocalDatumJson = serde_json::from_str(&read_arg(&d)?).map_err(Error::from)?;
            vec![dj.to_datum()?]
        }
        (None, Some(gtext)) => {
            let (gj, g) = load_group(&gtext)?;
            match inertia {
                Some(i) => {
                    let dj = LocalDatumJson {
                        group: gj,
                        inertia_subgroup_class: i,
                        frobenius_element: frobenius.unwrap_or(0),
                    };
                    vec![dj.to_datum()?]
                }
                None => LocalGaloisDatum::enumerate(&g),
            }
        }
        (None, None) => {
            return Err(Failure::Data(Error::InvalidDatum("give --datum or --group".into())));
        }
    };
    let mut all = true;
    let mut reports = Vec::new();
    for d in &data {
        let (v, pass) = inertial_report(d)?;
        all &= pass;
        reports.push(v);
    }
    emit(&json!({ "data": reports, "pass": all }));
    Ok(all)
}

fn run_verify(
    fixture: &Path,
    relation: Option<String>,
    tolerance: f64,
    seed: Option<u64>,
    as_json: bool,
) -> Outcome {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Failure::Data(Error::Fixture("tolerance must be positive".into())));
    }
    let fx = FieldFixture::load(fixture)?;
    let thetas = match relation {
        Some(r) => vec![load_relation(&r, &fx.group)?],
        None => relation_lattice(&fx.group),
    };
    let mut reports = Vec::new();
    for theta in &thetas {
        reports.push(verify(&fx, theta, tolerance, seed)?);
    }
    let pass = reports.iter().all(|r| r.pass);
    if as_json {
        emit(&json!({ "fixture": fx.label, "reports": reports, "pass": pass }));
    } else {
        for (i, r) in reports.iter().enumerate() {
            println!("{} relation {i}: C(units) = {:.12}, C(Z) = {}, C(Z[S]) = {}", r.label, r.c_units, r.c_z.0, r.c_zs.0);
            for c in r.checks.iter().chain(std::iter::once(&r.consistency)) {
                let verdict = if c.pass { "PASS" } else { "FAIL" };
                println!(
                    "  {verdict} {}: {:.15e} vs {:.15e} (rel {:.2e}, tol {:.1e})",
                    c.name, c.left, c.right, c.rel_error, c.tolerance
                );
            }
            if let Some(h) = &r.hilbert {
                println!("  implied unit index Q_K = {}", h.implied_q_k.0);
            }
        }
    }
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Relations { group } => relations(&group),
        Command::Regconst {
            group,
            relation,
            module,
            method,
            seed,
        } => regconst(&group, &relation, &module, method, seed),
        Command::Cohomology {
            group,
            module,
            subgroup,
            degree,
        } => cohomology(&group, &module, subgroup, degree),
        Command::InertialCheck {
            datum,
            group,
            inertia,
            frobenius,
        } => inertial_check(datum, group, inertia, frobenius),
        Command::Verify {
            fixture,
            relation,
            all_relations: _,
            tolerance,
            seed,
            json,
        } => run_verify(&fixture, relation, tolerance, seed, json),
        Command::Selftest => selftest::run(),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) | Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
