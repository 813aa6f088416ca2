//! Inertial lattices of local Galois data and their duals.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::cohomology::{cohomology_order, CohomologyConfig};
use crate::error::{Error, Result};
use crate::gmodules::{
    augmentation_ideal, check_exact, direct_sum, dual_lattice, induced_module, permutation_module,
    trivial_module, GMap, GModule,
};
use crate::groups::{FiniteGroup, GroupHom, Subgroup};
use crate::linalg::{kernel_basis, IntMatrix, IntSolver};
use crate::regconst::{regulator_constant, regulator_constant_homological, ExactCheck};
use crate::relations::BrauerRelation;

/// Decomposition group `D`, inertia `I ⊴ D` and a Frobenius lift `φ ∈ D`
/// whose image generates the cyclic group `D̄ = D/I`.
#[derive(Clone, Debug)]
pub struct LocalGaloisDatum {
    group: Arc<FiniteGroup>,
    inertia: Subgroup,
    frobenius: usize,
    quotient: GroupHom,
}

impl LocalGaloisDatum {
    pub fn new(group: Arc<FiniteGroup>, inertia: Subgroup, frobenius: usize) -> Result<Self> {
        group
            .check_subgroup(&inertia)
            .map_err(|e| Error::InvalidDatum(e.to_string()))?;
        if frobenius >= group.order() {
            return Err(Error::InvalidDatum(format!("no element {frobenius}")));
        }
        if !group.is_normal(&inertia) {
            return Err(Error::InvalidDatum("inertia subgroup is not normal".into()));
        }
        let quotient = GroupHom::quotient_map(&group, &inertia)?;
        let dbar = quotient.target();
        if dbar.generate(&[quotient.apply(frobenius)]).order() != dbar.order() {
            return Err(Error::InvalidDatum(
                "Frobenius does not generate the quotient by inertia".into(),
            ));
        }
        Ok(LocalGaloisDatum {
            group,
            inertia,
            frobenius,
            quotient,
        })
    }

    /// Every valid datum on `d`: each normal `I` with cyclic quotient, and
    /// for each generator of `D/I` its smallest lift.
    pub fn enumerate(d: &Arc<FiniteGroup>) -> Vec<LocalGaloisDatum> {
        let mut out = Vec::new();
        for i in d.lattice().subgroups() {
            if !d.is_normal(i) {
                continue;
            }
            let q = GroupHom::quotient_map(d, i).expect("normal");
            let mut seen = vec![false; q.target().order()];
            for phi in d.elements() {
                let bar = q.apply(phi);
                if seen[bar] {
                    continue;
                }
                seen[bar] = true;
                if let Ok(datum) = LocalGaloisDatum::new(d.clone(), i.clone(), phi) {
                    out.push(datum);
                }
            }
        }
        out
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn inertia(&self) -> &Subgroup {
        &self.inertia
    }

    pub fn frobenius(&self) -> usize {
        self.frobenius
    }

    /// `D → D̄`.
    pub fn quotient(&self) -> &GroupHom {
        &self.quotient
    }
}

/// `W = {(x, y) ∈ ΔD ⊕ Z[D̄] : x̄ = (φ̄ - 1) y}`.
///
/// `basis` holds a basis of `W` inside the ambient `Z[D] ⊕ Z[D̄]`, whose
/// coordinates are the elements of `D` followed by those of `D̄`.
#[derive(Clone, Debug)]
pub struct InertialLattice {
    pub datum: LocalGaloisDatum,
    pub w: GModule,
    pub ambient: GModule,
    pub basis: IntMatrix,
}

pub fn inertial_lattice(datum: &LocalGaloisDatum) -> Result<InertialLattice> {
    let d = datum.group();
    let q = datum.quotient();
    let dbar = q.target();
    let (n, k) = (d.order(), dbar.order());
    let phi_bar = q.apply(datum.frobenius());

    // rows: ε(x) = 0, then x̄ - (φ̄ - 1) y = 0 coordinatewise on D̄
    let mut c = IntMatrix::zeros(1 + k, n + k);
    for g in d.elements() {
        c[(0, g)] = BigInt::from(1);
        c[(1 + q.apply(g), g)] += BigInt::from(1);
    }
    for j in dbar.elements() {
        c[(1 + dbar.mul(phi_bar, j), n + j)] -= BigInt::from(1);
        c[(1 + j, n + j)] += BigInt::from(1);
    }
    let basis = kernel_basis(&c);
    if basis.cols() != n {
        return Err(Error::Internal(format!("inertial lattice has rank {} not {n}", basis.cols())));
    }

    let zd = permutation_module(d, &d.trivial_subgroup())?;
    let zdbar = permutation_module(d, &datum.inertia)?;
    let ambient = direct_sum(d, &[zd, zdbar])?.module;
    debug_assert!(q.map().iter().enumerate().all(|(g, &b)| d.coset_index(&datum.inertia)[g] == b));

    let solver = IntSolver::new(&basis);
    let action = ambient
        .actions()
        .iter()
        .map(|a| {
            solver
                .solve(&(a * &basis))
                .ok_or_else(|| Error::Internal("inertial lattice is not stable".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let w = GModule::new(d.clone(), IntMatrix::zeros(n, 0), action)?;
    Ok(InertialLattice {
        datum: datum.clone(),
        w,
        ambient,
        basis,
    })
}

/// `0 → Z → W → ΔD → 0`, with `1 ↦ (0, N_D̄)` and the first projection.
#[derive(Clone, Debug)]
pub struct BottomRow {
    pub inclusion: GMap,
    pub projection: GMap,
}

/// Builds the two maps and verifies exactness.
pub fn check_bottom_row(lat: &InertialLattice) -> Result<BottomRow> {
    let d = lat.datum.group();
    let n = d.order();
    let k = lat.datum.quotient().target().order();
    let mut norm = vec![BigInt::from(0); n + k];
    for y in &mut norm[n..] {
        *y = BigInt::from(1);
    }
    let coords = IntSolver::new(&lat.basis)
        .solve_vec(&norm)
        .ok_or_else(|| Error::NotExact("(0, N) is not in W".into()))?;
    let inclusion = GMap::new(trivial_module(d), lat.w.clone(), IntMatrix::column_vector(coords))?;

    // x = Σ_{g ≠ e} x_g (g - e) because ε(x) = 0
    let (delta, _) = augmentation_ideal(d);
    let rows: Vec<usize> = (1..n).collect();
    let projection = GMap::new(lat.w.clone(), delta, lat.basis.select_rows(&rows))?;
    check_exact(&inclusion, &projection)?;
    Ok(BottomRow {
        inclusion,
        projection,
    })
}

/// `W*` with the contragredient action.
pub fn dual_inertial(lat: &InertialLattice) -> Result<GModule> {
    dual_lattice(&lat.w)
}

/// `h¹(H, W*) = h²(H, W)` for every subgroup `H ≤ D`.
pub fn check_dual_cohomology(lat: &InertialLattice) -> Result<Vec<ExactCheck>> {
    let dual = dual_inertial(lat)?;
    let cfg = CohomologyConfig::default();
    lat.datum
        .group()
        .lattice()
        .subgroups()
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let left = cohomology_order(h, &dual, 1, &cfg)?;
            let right = cohomology_order(h, &lat.w, 2, &cfg)?;
            Ok(ExactCheck::new(
                format!("h1(H{i}, W*) = h2(H{i}, W)"),
                BigRational::from_integer(left),
                BigRational::from_integer(right),
            ))
        })
        .collect()
}

/// `C_Θ(W*) = 1`, once from the pairing and once from `φ`.
pub fn check_w_dual_trivial(datum: &LocalGaloisDatum, theta: &BrauerRelation) -> Result<Vec<ExactCheck>> {
    if !theta.group().same_as(datum.group()) {
        return Err(Error::GroupMismatch("relation is not over the decomposition group".into()));
    }
    let dual = dual_inertial(&inertial_lattice(datum)?)?;
    let pairing = regulator_constant(theta, &dual, None)?.value;
    let homological = regulator_constant_homological(theta, &dual, None)?.value;
    Ok(vec![
        ExactCheck::new("C(W*) by pairing", pairing, BigRational::one()),
        ExactCheck::new("C(W*) by homological formula", homological, BigRational::one()),
    ])
}

#[derive(Clone, Debug, PartialEq)]
pub struct WsReport {
    /// `C_Θ(⊕_P Ind W*_P)` computed on the induced module.
    pub direct: BigRational,
    /// `Π_P C_{Res Θ}(W*_P)`.
    pub via_restriction: BigRational,
}

impl WsReport {
    pub fn holds(&self) -> bool {
        self.direct.is_one() && self.via_restriction.is_one()
    }
}

/// `C_Θ(⊕_P Ind_{G_P}^G W*_P)` for local data on decomposition subgroups
/// `G_P ≤ G`, each datum's group being `G_P` as a standalone group.
pub fn ws_regulator_constant(
    g: &Arc<FiniteGroup>,
    theta: &BrauerRelation,
    local_data: &[(Subgroup, LocalGaloisDatum)],
) -> Result<WsReport> {
    if !theta.group().same_as(g) {
        return Err(Error::GroupMismatch("relation is not over G".into()));
    }
    let mut via_restriction = BigRational::one();
    let mut induced = Vec::new();
    for (gp, datum) in local_data {
        let (sub, _) = g.subgroup_group(gp);
        if !sub.same_as(datum.group()) {
            return Err(Error::GroupMismatch(
                "local datum is not over its decomposition subgroup".into(),
            ));
        }
        let dual = dual_inertial(&inertial_lattice(datum)?)?;
        let local = GModule::new(sub.clone(), dual.rels().clone(), dual.actions().to_vec())?;
        via_restriction *= regulator_constant(&theta.restrict(gp)?, &local, None)?.value;
        induced.push(induced_module(&local, g, gp)?);
    }
    let sum = direct_sum(g, &induced)?.module;
    let direct = regulator_constant(theta, &sum, None)?.value;
    Ok(WsReport {
        direct,
        via_restriction,
    })
}
