//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use brauer_core::gmodules::{
    augmentation_ideal, direct_sum, dual_lattice, permutation_module, regular_module, trivial_module, GMap,
    GModule,
};
use brauer_core::groups::{preset, FiniteGroup, GroupHom, PRESET_NAMES};
use brauer_core::inertial::{
    check_dual_cohomology, check_w_dual_trivial, dual_inertial, inertial_lattice, ws_regulator_constant,
    LocalGaloisDatum,
};
use brauer_core::linalg::IntMatrix;
use brauer_core::regconst::{
    build_phi, check_cohomologically_trivial, check_functoriality, check_multiplicativity,
    regulator_constant, regulator_constant_homological, FunctorialityCase,
};
use brauer_core::relations::{relation_lattice, BrauerRelation};
use brauer_core::verify::{c_units, c_z, c_zs, verify, FieldFixture};
use brauer_core::Result;

const CYCLIC: &[&str] = &["C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11", "C12"];
const NONCYCLIC: &[&str] = &["V4", "S3", "D4", "Q8", "C2xC2xC2", "C2xC4", "A4"];

fn grp(name: &str) -> Arc<FiniteGroup> {
    Arc::new(preset(name).unwrap())
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Fails with a message naming the first counterexample.
fn ensure(cond: bool, what: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

type Outcome = std::result::Result<String, String>;

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn relation_existence() -> Outcome {
    for name in CYCLIC {
        ensure(relation_lattice(&grp(name)).is_empty(), || format!("{name} has a relation"))?;
    }
    let mut ranks = Vec::new();
    for name in NONCYCLIC {
        let n = relation_lattice(&grp(name)).len();
        ensure(n > 0, || format!("{name} has no relation"))?;
        ranks.push(format!("{name}:{n}"));
    }
    Ok(format!("basis ranks {}", ranks.join(" ")))
}

fn free_triviality() -> Outcome {
    let mut count = 0;
    for name in PRESET_NAMES {
        let g = grp(name);
        let zg = regular_module(&g);
        for theta in relation_lattice(&g) {
            let a = lift(regulator_constant(&theta, &zg, None))?.value;
            let b = lift(regulator_constant_homological(&theta, &zg, None))?.value;
            ensure(a.is_one() && b.is_one(), || format!("{name}: {a} / {b}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} relations, both paths 1"))
}

fn module_catalog(g: &Arc<FiniteGroup>) -> Result<Vec<(String, GModule)>> {
    let l = g.lattice();
    let mut lattices = vec![("Z".to_string(), trivial_module(g)), ("ΔG".to_string(), augmentation_ideal(g).0)];
    for c in 0..l.num_classes() {
        lattices.push((format!("Z[G/H{c}]"), permutation_module(g, l.representative(c))?));
    }
    let mut out = lattices.clone();
    for (name, m) in &lattices {
        out.push((format!("{name}*"), dual_lattice(m)?));
    }
    let index_two: Vec<_> = l
        .subgroups()
        .iter()
        .filter(|h| 2 * h.order() == g.order())
        .cloned()
        .collect();
    for m in [2u64, 3, 4] {
        out.push((format!("Z/{m}"), trivial_module(g).mod_multiple(m)));
        for (i, k) in index_two.iter().enumerate() {
            out.push((format!("Z/{m} sign {i}"), GModule::sign(g, k, m)?));
        }
    }
    for (i, d) in LocalGaloisDatum::enumerate(g).iter().enumerate() {
        out.push((format!("W*{i}"), dual_inertial(&inertial_lattice(d)?)?));
    }
    Ok(out)
}

fn path_agreement() -> Outcome {
    let mut count = 0;
    for name in ["V4", "S3", "D4", "Q8"] {
        let g = grp(name);
        let mods = lift(module_catalog(&g))?;
        for theta in relation_lattice(&g) {
            for seed in [0u64, 1, 2] {
                let phi = lift(build_phi(&theta, seed, 200))?;
                for (mname, m) in &mods {
                    let a = lift(regulator_constant(&theta, m, None))?.value;
                    let b = lift(regulator_constant_homological(&theta, m, Some(&phi)))?.value;
                    ensure(a == b, || format!("{name} {theta} {mname} seed {seed}: {a} vs {b}"))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} comparisons"))
}

fn augmentation_sequence(g: &Arc<FiniteGroup>) -> Result<(GMap, GMap)> {
    let (_, inc) = augmentation_ideal(g);
    let ones = IntMatrix::from_fn(1, g.order(), |_, _| BigInt::from(1));
    Ok((inc, GMap::new(regular_module(g), trivial_module(g), ones)?))
}

fn times_m(g: &Arc<FiniteGroup>, m: i64) -> Result<(GMap, GMap)> {
    let z = trivial_module(g);
    let f = GMap::scalar(&z, m);
    let p = GMap::new(z, trivial_module(g).mod_multiple(m as u64), IntMatrix::identity(1))?;
    Ok((f, p))
}

fn split(a: &GModule, b: &GModule) -> Result<(GMap, GMap)> {
    let s = direct_sum(a.group(), &[a.clone(), b.clone()])?;
    Ok((s.injections[0].clone(), s.projections[1].clone()))
}

fn multiplicativity() -> Outcome {
    let mut psis = Vec::new();
    for name in ["V4", "S3"] {
        let g = grp(name);
        let theta = relation_lattice(&g).remove(0);
        let mut seqs = vec![("augmentation".to_string(), lift(augmentation_sequence(&g))?)];
        for m in [2, 3] {
            seqs.push((format!("x{m}"), lift(times_m(&g, m))?));
        }
        for (sname, (f, p)) in &seqs {
            let r = lift(check_multiplicativity(&theta, f, p))?;
            ensure(r.holds(), || format!("{name} {sname}: {r:?}"))?;
            psis.push(format!("{name} {sname} ψ={}", r.psi));
        }
        let delta = augmentation_ideal(&g).0;
        let perm = lift(permutation_module(&g, &g.lattice().representative(1).clone()))?;
        for (a, b) in [(trivial_module(&g), delta.clone()), (perm, delta)] {
            let (f, p) = lift(split(&a, &b))?;
            let r = lift(check_multiplicativity(&theta, &f, &p))?;
            ensure(r.holds() && r.psi.is_one(), || format!("{name} split: {r:?}"))?;
        }
    }
    Ok(psis.join(", "))
}

fn cohomological_triviality() -> Outcome {
    let mut count = 0;
    for name in NONCYCLIC {
        let g = grp(name);
        for m in [2u64, 3, 6] {
            let module = regular_module(&g).mod_multiple(m);
            for theta in relation_lattice(&g) {
                let c = lift(check_cohomologically_trivial(&theta, &module))?;
                ensure(c.holds(), || format!("{name} Z[G]/{m}: {c}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} cases equal 1"))
}

fn functoriality() -> Outcome {
    let d4 = grp("D4");
    let l = d4.lattice();
    let mut cases = Vec::new();

    // (i) induction from a Klein four subgroup of D4
    let y = l
        .subgroups()
        .iter()
        .find(|s| s.order() == 4 && !d4.is_cyclic_subgroup(s))
        .unwrap()
        .clone();
    let (yg, _) = d4.subgroup_group(&y);
    for theta in relation_lattice(&yg) {
        for module in [regular_module(&d4), trivial_module(&d4), augmentation_ideal(&d4).0] {
            cases.push(FunctorialityCase::Induction {
                theta: theta.clone(),
                subgroup: y.clone(),
                module,
            });
        }
    }
    // (ii) restriction of D4 relations to the same subgroup
    for theta in relation_lattice(&d4) {
        for module in [trivial_module(&yg), augmentation_ideal(&yg).0] {
            cases.push(FunctorialityCase::Restriction {
                theta: theta.clone(),
                subgroup: y.clone(),
                module,
            });
        }
    }
    // (iii) inflation along D4 → D4/Z = V4
    let centre = l
        .subgroups()
        .iter()
        .find(|s| s.order() == 2 && d4.is_normal(s))
        .unwrap();
    let quotient = lift(GroupHom::quotient_map(&d4, centre))?;
    let v4 = quotient.target().clone();
    for theta in relation_lattice(&v4) {
        for module in [trivial_module(&v4), augmentation_ideal(&v4).0, regular_module(&v4)] {
            cases.push(FunctorialityCase::Inflation {
                theta: theta.clone(),
                quotient: quotient.clone(),
                module,
            });
        }
    }
    let n = cases.len();
    for case in &cases {
        let c = lift(check_functoriality(case))?;
        ensure(c.holds(), || c.to_string())?;
    }
    Ok(format!("{n} instances"))
}

fn dual_inertial_lattices() -> Outcome {
    let mut data = 0;
    for name in ["V4", "D4", "Q8", "C2xC4"] {
        let d = grp(name);
        let thetas = relation_lattice(&d);
        for datum in LocalGaloisDatum::enumerate(&d) {
            data += 1;
            for theta in &thetas {
                for c in lift(check_w_dual_trivial(&datum, theta))? {
                    ensure(c.holds(), || format!("{name}: {c}"))?;
                }
            }
            let lat = lift(inertial_lattice(&datum))?;
            for c in lift(check_dual_cohomology(&lat))? {
                ensure(c.holds(), || format!("{name}: {c}"))?;
            }
        }
    }
    Ok(format!("{data} local data"))
}

fn ws_aggregate() -> Outcome {
    let d4 = grp("D4");
    let thetas = relation_lattice(&d4);
    let l = d4.lattice();
    let mut count = 0;
    for c in 0..l.num_classes() {
        let gp = l.representative(c);
        if gp.order() != 4 || d4.is_cyclic_subgroup(gp) {
            continue;
        }
        let (vg, _) = d4.subgroup_group(gp);
        for datum in LocalGaloisDatum::enumerate(&vg) {
            for theta in &thetas {
                let r = lift(ws_regulator_constant(&d4, theta, &[(gp.clone(), datum.clone())]))?;
                ensure(r.holds() && r.direct == r.via_restriction, || format!("{r:?}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} instances equal 1"))
}

fn zeta8_end_to_end() -> Outcome {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/zeta8.json");
    let fx = lift(FieldFixture::load(path))?;
    let theta = relation_lattice(&fx.group).remove(0);
    let cu = lift(c_units(&fx, &theta))?;
    ensure((cu - 0.5).abs() <= 1e-9 * 0.5, || format!("C_units = {cu}"))?;
    ensure(c_z(&theta) == q(1, 2), || format!("C(Z) = {}", c_z(&theta)))?;
    let zs = lift(c_zs(&fx, &theta, None))?;
    ensure(zs == q(1, 1), || format!("C(Z[S]) = {zs}"))?;
    let rep = lift(verify(&fx, &theta, 1e-9, Some(1)))?;
    for c in &rep.checks {
        ensure(c.pass, || format!("{c:?}"))?;
    }
    let worst = rep.checks.iter().map(|c| c.rel_error).fold(0.0, f64::max);
    Ok(format!("C_units = {cu:.15}, worst relative error {worst:.1e}"))
}

/// Permutation character of `Σ n_H Z[G/H]` at `g`, by counting fixed cosets.
fn character(theta: &BrauerRelation, x: usize) -> i64 {
    let g = theta.group();
    let l = g.lattice();
    theta
        .terms()
        .map(|(c, n)| {
            let fixed = g
                .left_cosets(l.representative(c))
                .iter()
                .filter(|coset| {
                    let y = coset[0];
                    coset.contains(&g.mul(x, y))
                })
                .count();
            n * fixed as i64
        })
        .sum()
}

fn relation_sanity() -> Outcome {
    let mut count = 0;
    for name in PRESET_NAMES {
        let g = grp(name);
        let l = g.lattice();
        for theta in relation_lattice(&g) {
            let sum: i64 = theta.terms().map(|(_, n)| n).sum();
            let index_sum: i64 = theta
                .terms()
                .map(|(c, n)| n * (g.order() / l.representative(c).order()) as i64)
                .sum();
            ensure(sum == 0 && index_sum == 0, || format!("{name}: {theta}"))?;
            for x in g.elements() {
                ensure(character(&theta, x) == 0, || format!("{name}: {theta} at {x}"))?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} basis relations"))
}

/// Name, check and time limit in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() {
    let criteria: [Criterion; 10] = [
        ("relation existence", relation_existence, 5),
        ("free triviality", free_triviality, 10),
        ("path agreement", path_agreement, 120),
        ("multiplicativity", multiplicativity, 30),
        ("cohomological triviality", cohomological_triviality, 30),
        ("functoriality", functoriality, 30),
        ("dual inertial lattices", dual_inertial_lattices, 120),
        ("W_S aggregate", ws_aggregate, 30),
        ("zeta8 end to end", zeta8_end_to_end, 5),
        ("relation sanity", relation_sanity, 5),
    ];
    let mut failed = 0;
    for (name, f, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(limit);
        let (verdict, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {limit} s limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("{verdict} {name} ({:.2} s): {detail}", elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
