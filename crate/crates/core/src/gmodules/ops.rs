use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::{GMap, GModule};
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GroupHom, Subgroup};
use crate::linalg::{preimage_lattice, smith, IntMatrix, IntSolver};

/// `tors M`, `M~ = M / tors M` and the maps between them and `M`.
#[derive(Clone, Debug)]
pub struct TorsionSplit {
    pub torsion: GModule,
    pub inclusion: GMap,
    pub free: GModule,
    pub projection: GMap,
    /// Preimages in `M`'s generators of the basis of `M~` (columns).
    pub free_lift: IntMatrix,
}

pub fn torsion_and_free(m: &GModule) -> Result<TorsionSplit> {
    let n = m.gens();
    let d = smith(m.rels());
    let r = d.rank();
    let diag = d.diagonal();
    let sel: Vec<usize> = (0..r).filter(|&i| !diag[i].is_one()).collect();
    let free_idx: Vec<usize> = (r..n).collect();
    let conj: Vec<IntMatrix> = m
        .actions()
        .iter()
        .map(|a| &(&d.u * a) * &d.u_inv)
        .collect();
    let block = |rows: &[usize]| -> Vec<IntMatrix> {
        conj.iter()
            .map(|c| c.select_rows(rows).select_columns(rows))
            .collect()
    };
    let mut trels = IntMatrix::zeros(sel.len(), sel.len());
    for (i, &k) in sel.iter().enumerate() {
        trels[(i, i)] = diag[k].clone();
    }
    let g = m.group().clone();
    let torsion = GModule::new_unchecked(g.clone(), trels, block(&sel))?;
    let free = GModule::new_unchecked(g, IntMatrix::zeros(free_idx.len(), 0), block(&free_idx))?;
    let inclusion = GMap::new_unchecked(torsion.clone(), m.clone(), d.u_inv.select_columns(&sel))?;
    let projection = GMap::new_unchecked(m.clone(), free.clone(), d.u.select_rows(&free_idx))?;
    debug_assert!(GMap::new(torsion.clone(), m.clone(), inclusion.matrix().clone()).is_ok());
    debug_assert!(GMap::new(m.clone(), free.clone(), projection.matrix().clone()).is_ok());
    Ok(TorsionSplit {
        torsion,
        inclusion,
        free,
        projection,
        free_lift: d.u_inv.select_columns(&free_idx),
    })
}

/// `M^H` for `H` a subgroup of `M`'s group.
///
/// The module is presented over `H` as a standalone group with trivial
/// action; `basis` holds its generators in `M`'s coordinates (an HNF basis of
/// the full preimage lattice), and `basis · module.rels = M.rels`.
#[derive(Clone, Debug)]
pub struct FixedSubmodule {
    pub subgroup: Subgroup,
    pub module: GModule,
    pub basis: IntMatrix,
}

impl FixedSubmodule {
    /// The inclusion `M^H → Res_H M`.
    pub fn inclusion(&self, m: &GModule) -> Result<GMap> {
        let res = restrict_module(m, &self.subgroup)?;
        GMap::new(self.module.clone(), res, self.basis.clone())
    }
}

pub fn fixed_submodule(m: &GModule, h: &Subgroup) -> Result<FixedSubmodule> {
    let g = m.group();
    g.check_subgroup(h)?;
    let n = m.gens();
    let gens = g.generators_of(h);
    let basis = if gens.is_empty() {
        IntMatrix::identity(n)
    } else {
        let blocks: Vec<IntMatrix> = gens
            .iter()
            .map(|&x| m.action(x).sub(&IntMatrix::identity(n)).expect("square"))
            .collect();
        let a = IntMatrix::vstack_all(n, &blocks)?;
        let t = m.rels().repeat_diag(gens.len());
        preimage_lattice(&a, &t)
    };
    let rels = solve_in(&basis, m.rels())?;
    let (hg, _) = g.subgroup_group(h);
    Ok(FixedSubmodule {
        subgroup: h.clone(),
        module: GModule::with_trivial_action(hg, rels),
        basis,
    })
}

fn solve_in(basis: &IntMatrix, x: &IntMatrix) -> Result<IntMatrix> {
    if basis.cols() == 0 {
        if x.is_zero() {
            return Ok(IntMatrix::zeros(0, x.cols()));
        }
        return Err(Error::Internal("vectors outside the zero lattice".into()));
    }
    IntSolver::new(basis)
        .solve(x)
        .ok_or_else(|| Error::Internal("vectors outside the lattice".into()))
}

/// `M` as a module over `Y`, numbered as in [`FiniteGroup::subgroup_group`].
pub fn restrict_module(m: &GModule, y: &Subgroup) -> Result<GModule> {
    m.group().check_subgroup(y)?;
    let (yg, emb) = m.group().subgroup_group(y);
    let action = emb.iter().map(|&g| m.action(g).clone()).collect();
    GModule::new_unchecked(yg, m.rels().clone(), action)
}

/// `M` pulled back along a surjection onto its group.
pub fn inflate_module(m: &GModule, q: &GroupHom) -> Result<GModule> {
    if !q.target().same_as(m.group()) {
        return Err(Error::GroupMismatch("quotient target is not the module's group".into()));
    }
    if !q.is_surjective() {
        return Err(Error::InvalidHomomorphism("inflation needs a surjective map".into()));
    }
    let action = q
        .source()
        .elements()
        .map(|z| m.action(q.apply(z)).clone())
        .collect();
    GModule::new_unchecked(q.source().clone(), m.rels().clone(), action)
}

/// `Hom_Z(M, Z)` with `g` acting by `ρ(g⁻¹)ᵀ`. A torsion-free module with
/// relations is first replaced by its free quotient.
pub fn dual_lattice(m: &GModule) -> Result<GModule> {
    if !m.is_torsion_free() {
        return Err(Error::TorsionPresent);
    }
    let lat = if m.is_lattice() {
        m.clone()
    } else {
        torsion_and_free(m)?.free
    };
    let g = lat.group().clone();
    let action = g
        .elements()
        .map(|x| lat.action(g.inv(x)).transpose())
        .collect();
    GModule::new_unchecked(g, IntMatrix::zeros(lat.gens(), 0), action)
}

/// `Ind_Y^G N = ⊕_{t ∈ G/Y} t ⊗ N`, blocks ordered as [`FiniteGroup::left_cosets`].
pub fn induced_module(n: &GModule, g: &Arc<FiniteGroup>, y: &Subgroup) -> Result<GModule> {
    g.check_subgroup(y)?;
    let (yg, emb) = g.subgroup_group(y);
    if !n.group().same_as(&yg) {
        return Err(Error::GroupMismatch("module is not over the inducing subgroup".into()));
    }
    let reps: Vec<usize> = g.left_cosets(y).iter().map(|c| c[0]).collect();
    let idx = g.coset_index(y);
    let k = n.gens();
    let blocks = reps.len();
    let action = g
        .elements()
        .map(|x| {
            let mut a = IntMatrix::zeros(k * blocks, k * blocks);
            for (i, &t) in reps.iter().enumerate() {
                // x t_i = t_j y'
                let xt = g.mul(x, t);
                let j = idx[xt];
                let yp = g.mul(g.inv(reps[j]), xt);
                let local = emb.binary_search(&yp).expect("y' lies in Y");
                a.set_block(j * k, i * k, n.action(local));
            }
            a
        })
        .collect();
    GModule::new_unchecked(g.clone(), n.rels().repeat_diag(blocks), action)
}

/// Shapiro data for `Hom_G(Z[G/H], M) ≅ M^H` via evaluation at the coset `H`.
#[derive(Clone, Debug)]
pub struct HomFixed {
    pub fixed: FixedSubmodule,
    coset_reps: Vec<usize>,
}

impl HomFixed {
    /// The homomorphism `Z[G/H] → M` sending `H` to the fixed vector with
    /// coordinates `x` (in the fixed module's generators).
    pub fn to_hom(&self, m: &GModule, x: &[BigInt]) -> IntMatrix {
        let v = self.fixed.basis.mul_vec(x);
        let cols: Vec<Vec<BigInt>> = self
            .coset_reps
            .iter()
            .map(|&t| m.action(t).mul_vec(&v))
            .collect();
        IntMatrix::from_columns(m.gens(), &cols)
    }

    /// Coordinates of `f(H)` in the fixed module's generators.
    pub fn from_hom(&self, f: &IntMatrix) -> Result<Vec<BigInt>> {
        let v = IntMatrix::column_vector(f.column(0));
        Ok(solve_in(&self.fixed.basis, &v)?.column(0))
    }
}

pub fn hom_fixed(h: &Subgroup, m: &GModule) -> Result<HomFixed> {
    let fixed = fixed_submodule(m, h)?;
    let coset_reps = m.group().left_cosets(h).iter().map(|c| c[0]).collect();
    Ok(HomFixed { fixed, coset_reps })
}

#[derive(Clone, Debug)]
pub struct KernelCokernel {
    pub kernel: GModule,
    pub kernel_inclusion: GMap,
    pub cokernel: GModule,
    pub cokernel_projection: GMap,
}

/// Submodule of `m` spanned by a `G`-stable lattice `l` containing the
/// relations.
fn submodule_on_lattice(m: &GModule, l: &IntMatrix) -> Result<(GModule, GMap)> {
    let rels = solve_in(l, m.rels())?;
    let action = m
        .actions()
        .iter()
        .map(|a| solve_in(l, &a.checked_mul(l)?))
        .collect::<Result<Vec<_>>>()?;
    let sub = GModule::new_unchecked(m.group().clone(), rels, action)?;
    let inc = GMap::new_unchecked(sub.clone(), m.clone(), l.clone())?;
    Ok((sub, inc))
}

pub fn kernel_and_cokernel(f: &GMap) -> Result<KernelCokernel> {
    let (s, t) = (f.source(), f.target());
    let l = preimage_lattice(f.matrix(), t.rels());
    let (kernel, kernel_inclusion) = submodule_on_lattice(s, &l)?;
    let crels = t.rels().hstack(f.matrix())?;
    let cokernel = GModule::new_unchecked(t.group().clone(), crels, t.actions().to_vec())?;
    let cokernel_projection =
        GMap::new_unchecked(t.clone(), cokernel.clone(), IntMatrix::identity(t.gens()))?;
    Ok(KernelCokernel {
        kernel,
        kernel_inclusion,
        cokernel,
        cokernel_projection,
    })
}

#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: GModule,
    pub injections: Vec<GMap>,
    pub projections: Vec<GMap>,
}

pub fn direct_sum(group: &Arc<FiniteGroup>, parts: &[GModule]) -> Result<DirectSum> {
    if parts.iter().any(|p| !p.group().same_as(group)) {
        return Err(Error::GroupMismatch("summands over different groups".into()));
    }
    let rels = IntMatrix::block_diag(&parts.iter().map(|p| p.rels().clone()).collect::<Vec<_>>());
    let action = group
        .elements()
        .map(|g| IntMatrix::block_diag(&parts.iter().map(|p| p.action(g).clone()).collect::<Vec<_>>()))
        .collect();
    let module = GModule::new_unchecked(group.clone(), rels, action)?;
    let total = module.gens();
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut offset = 0;
    for p in parts {
        let k = p.gens();
        let mut inj = IntMatrix::zeros(total, k);
        inj.set_block(offset, 0, &IntMatrix::identity(k));
        projections.push(GMap::new_unchecked(module.clone(), p.clone(), inj.transpose())?);
        injections.push(GMap::new_unchecked(p.clone(), module.clone(), inj)?);
        offset += k;
    }
    Ok(DirectSum {
        module,
        injections,
        projections,
    })
}

/// Checks that `0 → M' → M → M'' → 0` is exact.
pub fn check_exact(f: &GMap, g: &GMap) -> Result<()> {
    if f.target().gens() != g.source().gens() || !f.target().group().same_as(g.source().group()) {
        return Err(Error::NotExact("maps are not composable".into()));
    }
    let kc_f = kernel_and_cokernel(f)?;
    if !kc_f.kernel.is_zero() {
        return Err(Error::NotExact(format!("first map has kernel {}", kc_f.kernel.invariants())));
    }
    let kc_g = kernel_and_cokernel(g)?;
    if !kc_g.cokernel.is_zero() {
        return Err(Error::NotExact(format!(
            "second map has cokernel {}",
            kc_g.cokernel.invariants()
        )));
    }
    if !f.then(g)?.is_zero() {
        return Err(Error::NotExact("composite is not zero".into()));
    }
    let m = f.target();
    let image = f.matrix().hstack(m.rels())?;
    let ker_g = kc_g.kernel_inclusion.matrix();
    if !(ker_g.cols() == 0 || ker_g.is_zero() || IntSolver::new(&image).contains(ker_g)) {
        return Err(Error::NotExact("kernel of the second map exceeds the image of the first".into()));
    }
    Ok(())
}
