use std::sync::Arc;

use num_bigint::BigInt;

use super::*;
use crate::gmodules::{augmentation_ideal, permutation_module, regular_module, trivial_module};
use crate::groups::{preset, FiniteGroup};
use crate::relations::relation_lattice;

fn grp(name: &str) -> Arc<FiniteGroup> {
    Arc::new(preset(name).unwrap())
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn bar() -> CohomologyConfig {
    CohomologyConfig {
        method: Method::Bar,
        ..CohomologyConfig::default()
    }
}

/// `h^1(H, Z/m)` for a scalar action, counting crossed homomorphisms by
/// enumerating every function `H → Z/m`.
fn brute_h1_scalar(g: &FiniteGroup, h: &Subgroup, m: i64, scalar: &[i64]) -> i64 {
    let els = h.elements();
    let k = els.len();
    let total = (m as usize).pow(k as u32);
    let mut cocycles = 0;
    for code in 0..total {
        let mut f = vec![0i64; g.order()];
        let mut c = code;
        for &x in els {
            f[x] = (c % m as usize) as i64;
            c /= m as usize;
        }
        let ok = els.iter().all(|&a| {
            els.iter().all(|&b| {
                (f[g.mul(a, b)] - f[a] - scalar[a] * f[b]).rem_euclid(m) == 0
            })
        });
        if ok {
            cocycles += 1;
        }
    }
    let fixed = (0..m)
        .filter(|&x| els.iter().all(|&a| (scalar[a] * x - x).rem_euclid(m) == 0))
        .count() as i64;
    // |B^1| = |M| / |M^H|
    cocycles * fixed / m
}

#[test]
fn cyclic_two_with_integer_coefficients() {
    let c2 = grp("C2");
    let z = trivial_module(&c2);
    let whole = c2.whole();
    for cfg in [CohomologyConfig::default(), bar()] {
        assert!(cohomology_with(&whole, &z, 1, &cfg).unwrap().is_zero());
        assert_eq!(cohomology_with(&whole, &z, 2, &cfg).unwrap().to_list(), big(&[2]));
        assert_eq!(cohomology_with(&whole, &z, 0, &cfg).unwrap().to_list(), big(&[0]));
    }
}

#[test]
fn cyclic_two_with_mod_two_coefficients() {
    let c2 = grp("C2");
    let z2 = trivial_module(&c2).mod_multiple(2);
    let h1 = cohomology(&c2.whole(), &z2, 1).unwrap();
    assert_eq!(h1.to_list(), big(&[2]));
    assert_eq!(brute_h1_scalar(&c2, &c2.whole(), 2, &[1, 1]), 2);
}

#[test]
fn brute_force_agreement_on_scalar_modules() {
    for name in ["C2", "C4", "V4", "S3"] {
        let g = grp(name);
        // every sign character of g, with coefficients mod 2, 3, 4
        let l = g.lattice();
        let mut kernels: Vec<Subgroup> = l
            .subgroups()
            .iter()
            .filter(|k| 2 * k.order() == g.order() && g.is_normal(k))
            .cloned()
            .collect();
        kernels.push(g.whole());
        for k in &kernels {
            let scalar: Vec<i64> = g.elements().map(|x| if k.contains(x) { 1 } else { -1 }).collect();
            for m in [2u64, 3, 4] {
                let module = GModule::scalar(&g, m, &scalar).unwrap();
                for h in l.subgroups() {
                    let ours = cohomology(h, &module, 1).unwrap().order().unwrap();
                    let brute = brute_h1_scalar(&g, h, m as i64, &scalar);
                    assert_eq!(ours, BigInt::from(brute), "{name} m={m} |H|={}", h.order());
                }
            }
        }
    }
}

#[test]
fn free_modules_are_acyclic() {
    for name in ["V4", "S3", "Q8"] {
        let g = grp(name);
        let zg = regular_module(&g);
        for h in g.lattice().subgroups() {
            for i in 1..=2 {
                assert!(cohomology(h, &zg, i).unwrap().is_zero(), "{name} {i}");
            }
        }
    }
}

#[test]
fn bar_and_resolution_agree() {
    for name in ["C2", "C3", "C4", "V4"] {
        let g = grp(name);
        let (delta, _) = augmentation_ideal(&g);
        let mut modules = vec![trivial_module(&g), delta, trivial_module(&g).mod_multiple(2)];
        for k in g.lattice().subgroups() {
            modules.push(permutation_module(&g, k).unwrap());
        }
        for m in &modules {
            for h in g.lattice().subgroups() {
                for i in 0..=2 {
                    let a = cohomology_with(h, m, i, &CohomologyConfig::default()).unwrap();
                    let b = cohomology_with(h, m, i, &bar()).unwrap();
                    assert_eq!(a, b, "{name} |H|={} i={i}", h.order());
                }
            }
        }
    }
}

#[test]
fn bar_complex_squares_to_zero() {
    let g = grp("S3");
    let (delta, _) = augmentation_ideal(&g);
    let cx = CochainComplex::build(&g.whole(), &delta, 1, &bar()).unwrap();
    assert!(cx.check_d_squared());
    let cx = CochainComplex::build(&g.whole(), &delta, 3, &CohomologyConfig::default()).unwrap();
    assert!(cx.check_d_squared());
}

#[test]
fn cyclic_groups_are_periodic() {
    for n in [2usize, 3, 5, 6] {
        let g = grp(&format!("C{n}"));
        let z = trivial_module(&g);
        let w = g.whole();
        assert!(cohomology(&w, &z, 1).unwrap().is_zero());
        assert_eq!(cohomology(&w, &z, 2).unwrap().order(), Some(BigInt::from(n)));
        assert!(cohomology(&w, &z, 3).unwrap().is_zero());
    }
}

#[test]
fn klein_four_integral_cohomology() {
    // H^2(V4, Z) = Hom(V4, Q/Z) = (Z/2)^2, H^3(V4, Z) = Z/2
    let g = grp("V4");
    let z = trivial_module(&g);
    assert_eq!(cohomology(&g.whole(), &z, 2).unwrap().to_list(), big(&[2, 2]));
    assert_eq!(cohomology(&g.whole(), &z, 3).unwrap().to_list(), big(&[2]));
}

#[test]
fn dimension_shift_along_augmentation_sequence() {
    for name in ["V4", "S3", "D4", "Q8"] {
        let g = grp(name);
        let (delta, _) = augmentation_ideal(&g);
        let z = trivial_module(&g);
        let cfg = CohomologyConfig::default();
        for h in g.lattice().subgroups() {
            for i in 1..=2 {
                let lower = cohomology_order(h, &z, i, &cfg).unwrap();
                let upper = cohomology_order(h, &delta, i + 1, &cfg).unwrap();
                assert_eq!(lower, upper, "{name} |H|={} i={i}", h.order());
            }
            // h^1(H, ΔG) = |Ĥ^0(H, Z)| = |H|
            assert_eq!(cohomology_order(h, &delta, 1, &cfg).unwrap(), BigInt::from(h.order()));
        }
    }
}

#[test]
fn shapiro_for_permutation_modules() {
    for name in ["S3", "D4", "A4"] {
        let g = grp(name);
        let l = g.lattice();
        for c in 0..l.num_classes() {
            let k = l.representative(c);
            let (kg, _) = g.subgroup_group(k);
            let perm = permutation_module(&g, k).unwrap();
            let z = trivial_module(&kg);
            for i in 1..=2 {
                let big_side = cohomology(&g.whole(), &perm, i).unwrap();
                let small_side = cohomology(&kg.whole(), &z, i).unwrap();
                assert_eq!(big_side, small_side, "{name} |K|={} i={i}", k.order());
            }
        }
    }
}

#[test]
fn conjugate_subgroups_agree() {
    let g = grp("A4");
    let l = g.lattice();
    let (delta, _) = augmentation_ideal(&g);
    for c in 0..l.num_classes() {
        let orders: Vec<_> = l
            .class_members(c)
            .iter()
            .map(|&i| cohomology(l.subgroup(i), &delta, 2).unwrap())
            .collect();
        assert!(orders.windows(2).all(|w| w[0] == w[1]));
    }
}

#[test]
fn degree_cap() {
    let g = grp("C2");
    let z = trivial_module(&g);
    assert!(matches!(
        cohomology(&g.whole(), &z, 4),
        Err(Error::DegreeTooLarge { degree: 4, max: 3 })
    ));
    let cfg = CohomologyConfig {
        max_degree: 4,
        ..CohomologyConfig::default()
    };
    assert_eq!(cohomology_with(&g.whole(), &z, 4, &cfg).unwrap().to_list(), big(&[2]));
}

#[test]
fn cache_off_gives_same_answers() {
    let g = grp("Q8");
    let z = trivial_module(&g);
    let cfg = CohomologyConfig {
        use_cache: false,
        ..CohomologyConfig::default()
    };
    for i in 1..=3 {
        assert_eq!(
            cohomology_with(&g.whole(), &z, i, &cfg).unwrap(),
            cohomology(&g.whole(), &z, i).unwrap()
        );
    }
}

#[test]
fn kernel_on_h1_examples() {
    let g = grp("C2");
    let z2 = trivial_module(&g).mod_multiple(2);
    let w = g.whole();
    assert_eq!(h1_kernel_order(&GMap::identity(&z2), &w).unwrap(), BigInt::from(1));
    let zero = GMap::zero(&z2, &z2).unwrap();
    assert_eq!(h1_kernel_order(&zero, &w).unwrap(), BigInt::from(2));
    let z = trivial_module(&g);
    assert_eq!(h1_kernel_order(&GMap::scalar(&z, 2), &w).unwrap(), BigInt::from(1));
}

#[test]
fn kernel_on_h1_of_reduction() {
    // With trivial action H^1(C2, -) = Hom(C2, -). The nonzero class of
    // Hom(C2, Z/4) hits 2, which reduces to 0 in Z/2.
    let g = grp("C2");
    let z4 = trivial_module(&g).mod_multiple(4);
    let z2 = trivial_module(&g).mod_multiple(2);
    let red = GMap::new(z4, z2, IntMatrix::identity(1)).unwrap();
    assert_eq!(h1_kernel_order(&red, &g.whole()).unwrap(), BigInt::from(2));
    let bar_cfg = bar();
    assert_eq!(h1_kernel_order_with(&red, &g.whole(), &bar_cfg).unwrap(), BigInt::from(2));
}

#[test]
fn kani_defect_trivial_cases() {
    let g = grp("V4");
    let theta = relation_lattice(&g).remove(0);
    let zg = regular_module(&g);
    // injective into a free module from a module with H^1 = 0 everywhere
    let two = GMap::scalar(&zg, 2);
    assert_eq!(kani_defect(&theta, &two).unwrap(), BigRational::one());
    let zero = BrauerRelation::zero(g.clone());
    let (_, inc) = augmentation_ideal(&g);
    assert_eq!(kani_defect(&zero, &inc).unwrap(), BigRational::one());
}

#[test]
fn kani_defect_of_augmentation_inclusion() {
    // H^1(H, Z[G]) = 0, so the kernel is all of H^1(H, ΔG), of order |H|.
    // Hence ψ = Π |H|^{n_H}.
    let g = grp("V4");
    let theta = relation_lattice(&g).remove(0);
    let (_, inc) = augmentation_ideal(&g);
    let psi = kani_defect(&theta, &inc).unwrap();
    // 1^1 · 2^-1 · 2^-1 · 2^-1 · 4^2 = 2
    assert_eq!(psi, BigRational::from_integer(BigInt::from(2)));
}
