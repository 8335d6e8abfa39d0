//! Equivariant modules `(M, {lambda_g})` and their dictionary with modules
//! over the skew group algebra.
//!
//! `lambda_g` is stored as the matrix `L_g` of `M^g -> M`, which is the action
//! of `(1, g)` on the corresponding `AG`-module. So `L_g L_h = L_{gh}` and
//! `rho_{M^g}(a) L_g = L_g rho_M(a)`.

use std::sync::Arc;

use serde::Serialize;

use crate::actions::{GroupAction, SkewAlgebra};
use crate::algebras::{combine, coordinates, hom_space, is_projective, module_iso_probably, stable_hom, stable_hom_spaces, Module};
use crate::error::{Error, Result};
use crate::field::{intertwiners, stack_rows, Mat, Prime};
use crate::groups::{reynolds, Character, FiniteGroup, Irreducible, Quotient, Rep, Subgroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantModule {
    action: Arc<GroupAction>,
    base: Module,
    lambda: Vec<Mat>,
}

fn same_action(a: &Arc<GroupAction>, b: &Arc<GroupAction>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn require_same_action(a: &Arc<GroupAction>, b: &Arc<GroupAction>) -> Result<()> {
    if !same_action(a, b) {
        return Err(Error::Precondition("equivariant modules over different actions".into()));
    }
    Ok(())
}

fn require_coprime(g: &FiniteGroup, p: Prime) -> Result<()> {
    if p.residue(g.order()) == 0 {
        return Err(Error::Precondition(format!("p = {p} divides |G| = {}", g.order())));
    }
    Ok(())
}

impl EquivariantModule {
    /// One matrix per group element; validates `L_e = I`, intertwining and the cocycle law.
    pub fn new(action: Arc<GroupAction>, base: Module, lambda: Vec<Mat>) -> Result<Self> {
        let x = EquivariantModule { action, base, lambda };
        x.validate()?;
        Ok(x)
    }

    /// Completes `L` given on generators by `L_{xg} = L_x L_g`, then validates.
    pub fn from_generators(action: Arc<GroupAction>, base: Module, gens: &[(usize, Mat)]) -> Result<Self> {
        let g = action.group().clone();
        let p = action.p();
        let mut lambda: Vec<Option<Mat>> = vec![None; g.order()];
        lambda[g.unit()] = Some(Mat::identity(p, base.dim()));
        let mut queue = std::collections::VecDeque::from([g.unit()]);
        while let Some(x) = queue.pop_front() {
            for (s, m) in gens {
                let y = g.mul(x, *s);
                if lambda[y].is_none() {
                    lambda[y] = Some(lambda[x].as_ref().unwrap() * m);
                    queue.push_back(y);
                }
            }
        }
        let lambda = lambda
            .into_iter()
            .enumerate()
            .map(|(x, m)| m.ok_or_else(|| Error::InvalidEquivariant(format!("generators do not reach {}", g.name(x)))))
            .collect::<Result<Vec<_>>>()?;
        EquivariantModule::new(action, base, lambda)
    }

    /// `(M, {chi(g) * I})`, valid when every twist `M^g` equals `M`.
    pub fn with_character(action: Arc<GroupAction>, base: Module, chi: &Character) -> Result<Self> {
        let lambda = chi.values.iter().map(|&c| Mat::scalar(base.p(), base.dim(), c)).collect();
        EquivariantModule::new(action, base, lambda)
    }

    pub fn zero(action: Arc<GroupAction>) -> Self {
        let base = Module::zero(action.algebra().clone());
        let lambda = vec![Mat::zeros(action.p(), 0, 0); action.group().order()];
        EquivariantModule { action, base, lambda }
    }

    pub fn validate(&self) -> Result<()> {
        let act = &self.action;
        let g = act.group();
        let n = self.base.dim();
        if self.base.algebra().as_ref() != act.algebra().as_ref() {
            return Err(Error::InvalidEquivariant("base module is not over the acted-on algebra".into()));
        }
        if self.lambda.len() != g.order() {
            return Err(Error::InvalidEquivariant(format!("{} matrices for a group of order {}", self.lambda.len(), g.order())));
        }
        for (x, l) in self.lambda.iter().enumerate() {
            if l.rows() != n || l.cols() != n || l.modulus() != act.p() {
                return Err(Error::InvalidEquivariant(format!("lambda({}) has the wrong shape", g.name(x))));
            }
            if n > 0 && l.inverse().is_none() {
                return Err(Error::InvalidEquivariant(format!("lambda({}) is not invertible", g.name(x))));
            }
        }
        if !self.lambda[g.unit()].is_identity() {
            return Err(Error::InvalidEquivariant("lambda(e) is not the identity".into()));
        }
        for x in g.elements() {
            let twisted = act.twist_module(&self.base, x)?;
            for (i, (t, r)) in twisted.action().iter().zip(self.base.action()).enumerate() {
                if (t * &self.lambda[x]) != (&self.lambda[x] * r) {
                    return Err(Error::InvalidEquivariant(format!(
                        "lambda({}) does not intertwine M^g -> M on basis element {}",
                        g.name(x),
                        act.algebra().basis_names()[i]
                    )));
                }
            }
        }
        for x in g.elements() {
            for y in g.elements() {
                if &self.lambda[x] * &self.lambda[y] != self.lambda[g.mul(x, y)] {
                    return Err(Error::InvalidEquivariant(format!("cocycle condition fails for ({}, {})", g.name(x), g.name(y))));
                }
            }
        }
        Ok(())
    }

    pub fn action(&self) -> &Arc<GroupAction> {
        &self.action
    }

    pub fn base(&self) -> &Module {
        &self.base
    }

    pub fn lambda(&self, g: usize) -> &Mat {
        &self.lambda[g]
    }

    pub fn lambdas(&self) -> &[Mat] {
        &self.lambda
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn p(&self) -> Prime {
        self.action.p()
    }

    pub fn direct_sum(&self, other: &EquivariantModule) -> Result<EquivariantModule> {
        require_same_action(&self.action, &other.action)?;
        let base = self.base.direct_sum(&other.base)?;
        let lambda = self.lambda.iter().zip(&other.lambda).map(|(a, b)| Mat::block_diag(self.p(), &[a, b])).collect();
        Ok(EquivariantModule { action: self.action.clone(), base, lambda })
    }

    /// Whether `v -> v * h` is a morphism of equivariant modules.
    pub fn is_hom_to(&self, other: &EquivariantModule, h: &Mat) -> bool {
        same_action(&self.action, &other.action)
            && self.base.is_hom_to(&other.base, h)
            && self.lambda.iter().zip(&other.lambda).all(|(a, b)| (a * h) == (h * b))
    }

    /// The equivariant submodule spanned by the rows of an echelon `basis`.
    pub fn summand(&self, basis: &Mat) -> Result<EquivariantModule> {
        let k = basis.rows();
        let p = self.p();
        let restrict = |m: &Mat| -> Result<Mat> {
            if k == 0 {
                return Ok(Mat::zeros(p, 0, 0));
            }
            basis.solve_left(&(basis * m))?.ok_or_else(|| Error::InvalidEquivariant("subspace is not stable".into()))
        };
        let action = self.base.action().iter().map(restrict).collect::<Result<Vec<_>>>()?;
        let lambda = self.lambda.iter().map(restrict).collect::<Result<Vec<_>>>()?;
        let base = Module::new_unchecked(self.base.algebra().clone(), k, action);
        Ok(EquivariantModule { action: self.action.clone(), base, lambda })
    }
}

/// Echelon basis of the morphisms `x -> y` of equivariant modules.
pub fn equivariant_homs(x: &EquivariantModule, y: &EquivariantModule) -> Result<Vec<Mat>> {
    require_same_action(&x.action, &y.action)?;
    let pairs = x.base.action().iter().zip(y.base.action()).chain(x.lambda.iter().zip(&y.lambda));
    Ok(intertwiners(x.p(), x.dim(), y.dim(), pairs))
}

fn require_skew(skew: &SkewAlgebra, act: &Arc<GroupAction>) -> Result<()> {
    if !same_action(&skew.action, act) {
        return Err(Error::Precondition("equivariant module and skew algebra use different actions".into()));
    }
    Ok(())
}

/// An `AG`-module as an equivariant `A`-module with `lambda_g = (. (1, g))`.
pub fn phi(skew: &SkewAlgebra, m: &Module) -> Result<EquivariantModule> {
    if m.algebra().as_ref() != skew.algebra.as_ref() {
        return Err(Error::Precondition("module is not over the skew group algebra".into()));
    }
    let base = m.restrict(skew.action.algebra().clone(), &skew.base_embedding())?;
    let lambda = skew.group().elements().map(|g| m.act(&skew.group_element(g))).collect();
    Ok(EquivariantModule { action: skew.action.clone(), base, lambda })
}

/// Inverse of [`phi`]: `(a_i, g)` acts as `rho_M(a_i) L_g`.
pub fn phi_inv(skew: &SkewAlgebra, x: &EquivariantModule) -> Result<Module> {
    require_skew(skew, &x.action)?;
    let d = skew.base_dim();
    let action = (0..skew.algebra.dim()).map(|k| &x.base.action()[k % d] * &x.lambda[k / d]).collect();
    Ok(Module::new_unchecked(skew.algebra.clone(), x.dim(), action))
}

/// The underlying `A`-module.
pub fn forget(x: &EquivariantModule) -> Module {
    x.base.clone()
}

/// `M (x)_A AG` on the basis `m_k (x) g` at index `g * dim M + k`: as an
/// `A`-module it is `(+)_g M^g`, and `lambda_h` sends `m (x) g` to `m (x) gh`.
pub fn induce(action: &Arc<GroupAction>, m: &Module) -> Result<EquivariantModule> {
    let g = action.group();
    let p = action.p();
    let dm = m.dim();
    let twists = g.elements().map(|x| action.twist_module(m, x)).collect::<Result<Vec<_>>>()?;
    let base_action =
        (0..action.algebra().dim()).map(|i| Mat::block_diag(p, &twists.iter().map(|t| &t.action()[i]).collect::<Vec<_>>())).collect();
    let base = Module::new_unchecked(m.algebra().clone(), dm * g.order(), base_action);
    let eye = Mat::identity(p, dm);
    let lambda = g
        .elements()
        .map(|h| {
            let mut l = Mat::zeros(p, base.dim(), base.dim());
            for x in g.elements() {
                l.set_block(x * dm, g.mul(x, h) * dm, &eye);
            }
            l
        })
        .collect();
    Ok(EquivariantModule { action: action.clone(), base, lambda })
}

/// Unit and counit of `Ind -| omega` at an object, with their composite.
#[derive(Clone, Debug, Serialize)]
pub struct AdjunctionReport {
    /// `c` with `counit o unit = c * Id`.
    pub scalar: u32,
    pub group_order: usize,
    pub unit: Mat,
    pub counit: Mat,
    /// `M -> omega Ind M -> M` is the identity.
    pub omega_identity: bool,
}

/// Scalar `c` with `counit o unit = c * Id_x`, where `unit(v) = sum_g v L_g^-1 (x) g`
/// and `counit(v (x) g) = v L_g`. Both are checked to be morphisms and `c` to be `|G|`.
pub fn adjunction_check(x: &EquivariantModule) -> Result<AdjunctionReport> {
    let act = &x.action;
    let g = act.group();
    let p = x.p();
    require_coprime(g, p)?;
    let n = x.dim();
    let ind = induce(act, &x.base)?;
    let mut unit = Mat::zeros(p, n, n * g.order());
    let mut counit = Mat::zeros(p, n * g.order(), n);
    for h in g.elements() {
        let l = &x.lambda[h];
        let inv = l.inverse().ok_or_else(|| Error::InvalidEquivariant("lambda is singular".into()))?;
        unit.set_block(0, h * n, &inv);
        counit.set_block(h * n, 0, l);
    }
    if !x.is_hom_to(&ind, &unit) {
        return Err(Error::Invariant("unit x -> Ind(omega x) is not a morphism".into()));
    }
    if !ind.is_hom_to(x, &counit) {
        return Err(Error::Invariant("counit Ind(omega x) -> x is not a morphism".into()));
    }
    let comp = &unit * &counit;
    let scalar = if n == 0 { p.residue(g.order()) } else { comp.get(0, 0) };
    if comp != Mat::scalar(p, n, scalar) {
        return Err(Error::Invariant("counit o unit is not a scalar".into()));
    }
    if scalar != p.residue(g.order()) {
        return Err(Error::Invariant(format!("counit o unit = {scalar}, expected |G| = {}", g.order())));
    }
    // omega side: v -> v (x) e, then projection onto the e summand
    let e = g.unit();
    let into = Mat::from_fn(p, n, n * g.order(), |r, c| u32::from(c == e * n + r));
    let out = Mat::from_fn(p, n * g.order(), n, |r, c| u32::from(r == e * n + c));
    let omega_identity = x.base.is_hom_to(&ind.base, &into) && ind.base.is_hom_to(&x.base, &out) && (&into * &out).is_identity();
    if !omega_identity {
        return Err(Error::Invariant("M -> omega Ind M -> M is not the identity".into()));
    }
    Ok(AdjunctionReport { scalar, group_order: g.order(), unit, counit, omega_identity })
}

fn subgroup_action(action: &Arc<GroupAction>, h: &Subgroup) -> Result<Arc<GroupAction>> {
    if h.parent().as_ref() != action.group().as_ref() {
        return Err(Error::Precondition("subgroup of a different group".into()));
    }
    Ok(Arc::new(action.restrict(h)))
}

/// Restriction to `AH`, an equivariant module for the restricted action.
pub fn restrict_subgroup(x: &EquivariantModule, h: &Subgroup) -> Result<EquivariantModule> {
    let action = subgroup_action(&x.action, h)?;
    let lambda = h.elements().iter().map(|&k| x.lambda[k].clone()).collect();
    Ok(EquivariantModule { action, base: x.base.clone(), lambda })
}

/// `U (x)_{AH} AG` on `u (x) g_i` (index `i * dim U + k`) for the right coset
/// representatives `g_1 = e, g_2, ...`. As an `A`-module it is `(+)_i U^{g_i}`;
/// `lambda_g` sends `u (x) g_i` to `u L_{h'} (x) g_j` where `g_i g = h' g_j`.
pub fn induce_subgroup(action: &Arc<GroupAction>, h: &Subgroup, u: &EquivariantModule) -> Result<EquivariantModule> {
    let sub = subgroup_action(action, h)?;
    require_same_action(&sub, &u.action)?;
    let g = action.group();
    let p = action.p();
    let reps = h.right_coset_reps();
    let du = u.dim();
    let total = du * reps.len();
    let twists = reps.iter().map(|&r| action.twist_module(&u.base, r)).collect::<Result<Vec<_>>>()?;
    let base_action =
        (0..action.algebra().dim()).map(|i| Mat::block_diag(p, &twists.iter().map(|t| &t.action()[i]).collect::<Vec<_>>())).collect();
    let base = Module::new_unchecked(u.base.algebra().clone(), total, base_action);
    let pos = |x: usize| h.elements().binary_search(&x).expect("element of the subgroup");
    let lambda = g
        .elements()
        .map(|x| {
            let mut l = Mat::zeros(p, total, total);
            for (i, &r) in reps.iter().enumerate() {
                let (hh, j) = h.decompose(&reps, g.mul(r, x));
                l.set_block(i * du, j * du, &u.lambda[pos(hh)]);
            }
            l
        })
        .collect();
    Ok(EquivariantModule { action: action.clone(), base, lambda })
}

/// Composites of the unit/counit pairs for `Ind_H^G -| Res` at `x` and at `Res x`.
#[derive(Clone, Debug, Serialize)]
pub struct SubgroupAdjunctionReport {
    pub index: usize,
    /// `c` with `x -> Ind Res x -> x` equal to `c * Id`.
    pub scalar: u32,
    /// `Res x -> Res Ind Res x -> Res x` is the identity.
    pub res_ind_identity: bool,
}

pub fn subgroup_adjunction_check(x: &EquivariantModule, h: &Subgroup) -> Result<SubgroupAdjunctionReport> {
    let p = x.p();
    let index = h.index();
    if p.residue(index) == 0 {
        return Err(Error::Precondition(format!("p = {p} divides [G:H] = {index}")));
    }
    let n = x.dim();
    let reps = h.right_coset_reps();
    let u = restrict_subgroup(x, h)?;
    let ind = induce_subgroup(&x.action, h, &u)?;
    let mut unit = Mat::zeros(p, n, n * index);
    let mut counit = Mat::zeros(p, n * index, n);
    for (i, &r) in reps.iter().enumerate() {
        let l = &x.lambda[r];
        let inv = l.inverse().ok_or_else(|| Error::InvalidEquivariant("lambda is singular".into()))?;
        unit.set_block(0, i * n, &inv);
        counit.set_block(i * n, 0, l);
    }
    if !x.is_hom_to(&ind, &unit) || !ind.is_hom_to(x, &counit) {
        return Err(Error::Invariant("subgroup unit or counit is not a morphism".into()));
    }
    let comp = &unit * &counit;
    let scalar = if n == 0 { p.residue(index) } else { comp.get(0, 0) };
    if comp != Mat::scalar(p, n, scalar) || scalar != p.residue(index) {
        return Err(Error::Invariant(format!("Ind Res composite is not [G:H] = {index} times the identity")));
    }
    let res_ind = restrict_subgroup(&ind, h)?;
    let into = Mat::from_fn(p, n, n * index, |r, c| u32::from(c == r));
    let out = Mat::from_fn(p, n * index, n, |r, c| u32::from(r == c));
    let res_ind_identity = u.is_hom_to(&res_ind, &into) && res_ind.is_hom_to(&u, &out) && (&into * &out).is_identity();
    if !res_ind_identity {
        return Err(Error::Invariant("Res Ind composite is not the identity".into()));
    }
    Ok(SubgroupAdjunctionReport { index, scalar, res_ind_identity })
}

/// The `G`-representation on `Hom_A(omega x, omega y)` by `f.g = L^x_g^-1 f L^y_g`.
#[derive(Clone, Debug)]
pub struct HomAction {
    pub basis: Vec<Mat>,
    pub rep: Rep,
    /// Basis of the invariant morphisms (the image of the averaging operator).
    pub fixed: Vec<Mat>,
}

pub fn hom_g_action(x: &EquivariantModule, y: &EquivariantModule) -> Result<HomAction> {
    require_same_action(&x.action, &y.action)?;
    let g = x.action.group().clone();
    let p = x.p();
    require_coprime(&g, p)?;
    let basis = hom_space(&x.base, &y.base)?;
    let k = basis.len();
    let mut mats = Vec::with_capacity(g.order());
    for h in g.elements() {
        let inv = x.lambda[h].inverse().ok_or_else(|| Error::InvalidEquivariant("lambda is singular".into()))?;
        let rows = basis
            .iter()
            .map(|f| {
                let moved = &(&inv * f) * &y.lambda[h];
                coordinates(&basis, &moved).ok_or_else(|| Error::Invariant("G does not preserve the Hom space".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        mats.push(stack_rows(p, k, rows));
    }
    let rep = Rep::new(g, p, mats)?;
    let avg = reynolds(&rep)?.row_basis();
    let fixed = (0..avg.rows()).map(|r| combine(p, &basis, avg.row(r), x.dim(), y.dim())).collect();
    Ok(HomAction { basis, rep, fixed })
}

/// `(M (x) V, {L_g (x) rho(g)})`.
pub fn tensor_with_rep(x: &EquivariantModule, rho: &Rep) -> Result<EquivariantModule> {
    if rho.group.as_ref() != x.action.group().as_ref() || rho.p != x.p() {
        return Err(Error::Precondition("representation of a different group or field".into()));
    }
    let eye = Mat::identity(x.p(), rho.dim);
    let action = x.base.action().iter().map(|m| m.kron(&eye)).collect::<Result<Vec<_>>>()?;
    let base = Module::new_unchecked(x.base.algebra().clone(), x.dim() * rho.dim, action);
    let lambda = x.lambda.iter().zip(&rho.matrices).map(|(l, r)| l.kron(r)).collect::<Result<Vec<_>>>()?;
    Ok(EquivariantModule { action: x.action.clone(), base, lambda })
}

pub fn twist_by_character(x: &EquivariantModule, chi: &Character) -> Result<EquivariantModule> {
    tensor_with_rep(x, &chi.as_rep())
}

/// Multiplicities of the irreducibles in `Hom_A(omega x, omega y)`.
#[derive(Clone, Debug, Serialize)]
pub struct HomDecomposition {
    pub hom_dim: usize,
    /// `dim Hom_AG(x (x) rho, y)` for each irreducible, in the given order.
    pub multiplicities: Vec<usize>,
    pub irrep_dims: Vec<usize>,
    /// Rank of each block idempotent acting on the Hom representation.
    pub isotypic_dims: Vec<usize>,
}

/// Certifies `sum_rho d_rho dim(rho) = dim Hom_A(omega x, omega y)` and that each
/// isotypic component of the Hom representation has dimension `d_rho dim(rho)`.
pub fn hom_decomposition(x: &EquivariantModule, y: &EquivariantModule, irreps: &[Irreducible]) -> Result<HomDecomposition> {
    let g = x.action.group();
    let total: usize = irreps.iter().map(|r| r.rep.dim * r.rep.dim).sum();
    if total != g.order() {
        return Err(Error::Precondition("irreducibles do not form a complete set".into()));
    }
    let whole = hom_g_action(x, y)?;
    let mut multiplicities = Vec::new();
    let mut isotypic_dims = Vec::new();
    for irr in irreps {
        let twisted = tensor_with_rep(x, &irr.rep)?;
        multiplicities.push(hom_g_action(&twisted, y)?.fixed.len());
        isotypic_dims.push(whole.rep.act_group_algebra(&irr.idempotent).rank());
    }
    let irrep_dims: Vec<usize> = irreps.iter().map(|r| r.rep.dim).collect();
    let sum: usize = multiplicities.iter().zip(&irrep_dims).map(|(m, d)| m * d).sum();
    if sum != whole.basis.len() {
        return Err(Error::Invariant(format!("multiplicities account for {sum} of {} Hom dimensions", whole.basis.len())));
    }
    for (k, ((m, d), iso)) in multiplicities.iter().zip(&irrep_dims).zip(&isotypic_dims).enumerate() {
        if m * d != *iso {
            return Err(Error::Invariant(format!("irreducible {k}: isotypic dimension {iso} != {m} * {d}")));
        }
    }
    Ok(HomDecomposition { hom_dim: whole.basis.len(), multiplicities, irrep_dims, isotypic_dims })
}

/// One block of a module under a trivially acting subgroup.
#[derive(Clone, Debug)]
pub struct Block {
    pub irrep: usize,
    /// Rows span the block inside `x`.
    pub embedding: Mat,
    /// `x -> block`, with `embedding * projection = I`.
    pub projection: Mat,
    /// The block as an equivariant module for the subgroup.
    pub summand: EquivariantModule,
    /// The block as an equivariant module for the whole group, when it is stable.
    pub g_summand: Option<EquivariantModule>,
}

#[derive(Clone, Debug)]
pub struct TrivialBlocks {
    pub blocks: Vec<Block>,
    /// `sum_rho projection_rho * embedding_rho = I`.
    pub reassembles: bool,
    /// `(rho, rho', dim Hom)` for every ordered pair of distinct non-zero blocks.
    pub cross_hom_dims: Vec<(usize, usize, usize)>,
}

impl TrivialBlocks {
    pub fn passed(&self) -> bool {
        self.reassembles && self.cross_hom_dims.iter().all(|&(_, _, d)| d == 0)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.embedding.rows()).collect()
    }
}

/// Splits `x` by the block idempotents of `kH` acting through `lambda`; `H` must
/// act trivially on `A`, and `irreps` must be the irreducibles of `H` as a group.
pub fn trivial_blocks(x: &EquivariantModule, h: &Subgroup, irreps: &[Irreducible]) -> Result<TrivialBlocks> {
    if !x.action.is_trivial_on(h.elements()) {
        return Err(Error::Precondition("the subgroup does not act trivially on the algebra".into()));
    }
    let total: usize = irreps.iter().map(|r| r.rep.dim * r.rep.dim).sum();
    if irreps.iter().any(|r| r.rep.group.order() != h.order()) || total != h.order() {
        return Err(Error::Precondition("irreducibles are not a complete set for the subgroup".into()));
    }
    let p = x.p();
    let n = x.dim();
    let res = restrict_subgroup(x, h)?;
    let mut blocks = Vec::new();
    for (k, irr) in irreps.iter().enumerate() {
        let mut proj = Mat::zeros(p, n, n);
        for (pos, &c) in irr.idempotent.iter().enumerate() {
            proj.add_scaled(&x.lambda[h.elements()[pos]], c);
        }
        let embedding = proj.row_basis();
        let projection = if embedding.rows() == 0 { Mat::zeros(p, n, 0) } else { block_coordinates(&embedding, &proj)? };
        let summand = res.summand(&embedding)?;
        let g_summand = x.summand(&embedding).ok();
        blocks.push(Block { irrep: k, embedding, projection, summand, g_summand });
    }
    let mut sum = Mat::zeros(p, n, n);
    for b in &blocks {
        sum.add_scaled(&(&b.projection * &b.embedding), 1);
    }
    let mut reassembles = sum.is_identity();
    for a in &blocks {
        for b in &blocks {
            let k = &a.embedding * &b.projection;
            let ok = if a.irrep == b.irrep { k.is_identity() } else { k.is_zero() };
            reassembles &= ok;
        }
    }
    let mut cross_hom_dims = Vec::new();
    for a in blocks.iter().filter(|b| b.summand.dim() > 0) {
        for b in blocks.iter().filter(|b| b.summand.dim() > 0) {
            if a.irrep != b.irrep {
                cross_hom_dims.push((a.irrep, b.irrep, equivariant_homs(&a.summand, &b.summand)?.len()));
            }
        }
    }
    Ok(TrivialBlocks { blocks, reassembles, cross_hom_dims })
}

/// The `n x k` matrix `X` with `X * embedding = projector`.
fn block_coordinates(embedding: &Mat, projector: &Mat) -> Result<Mat> {
    embedding.solve_left(projector)?.ok_or_else(|| Error::Invariant("block projector does not factor through its image".into()))
}

/// Certificates for the comparison `A^{G/H} -> (A^G)_{trivial}`.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientEquivalence {
    /// Per test equivariant module: its image lies in the trivial block.
    pub in_trivial_block: Vec<bool>,
    /// Per ordered pair of test equivariant modules: (dim over G/H, dim over G, same span).
    pub hom_comparisons: Vec<(usize, usize, bool)>,
    /// Per test module: the trivial block of `Ind^G m` is isomorphic to `F(Ind^{G/H} m)`.
    pub induction_isos: Vec<bool>,
}

impl QuotientEquivalence {
    pub fn passed(&self) -> bool {
        self.in_trivial_block.iter().all(|&b| b)
            && self.hom_comparisons.iter().all(|&(a, b, s)| a == b && s)
            && self.induction_isos.iter().all(|&b| b)
    }
}

/// Inflation along `G -> G/H`: `(M, {mu}) -> (M, {nu_g = mu_{Hg}})`.
pub fn inflate(x: &EquivariantModule, g_action: &Arc<GroupAction>, quotient: &Quotient) -> Result<EquivariantModule> {
    let lambda = quotient.projection.iter().map(|&q| x.lambda[q].clone()).collect();
    EquivariantModule::new(g_action.clone(), x.base.clone(), lambda)
}

/// Checks the inflation functor against the trivial block of `A^G` for a normal
/// subgroup `H` acting trivially. `q_action` is the action of `G/H`; the action of
/// `G` is its pullback. `irreps_h` are the irreducibles of `H`.
#[allow(clippy::too_many_arguments)]
pub fn quotient_equivalence_check(
    q_action: &Arc<GroupAction>,
    quotient: &Quotient,
    h: &Subgroup,
    irreps_h: &[Irreducible],
    test_modules: &[Module],
    test_equivariant: &[EquivariantModule],
    trials: usize,
    seed: u64,
) -> Result<QuotientEquivalence> {
    if !h.is_normal() {
        return Err(Error::Precondition("the subgroup is not normal".into()));
    }
    let g = h.parent().clone();
    let g_action = Arc::new(crate::actions::pullback_action(q_action, g, &quotient.projection)?);
    let skew = crate::actions::skew_group_algebra(&g_action)?;
    let inflated = test_equivariant.iter().map(|x| inflate(x, &g_action, quotient)).collect::<Result<Vec<_>>>()?;
    let mut in_trivial_block = Vec::new();
    for fx in &inflated {
        let blocks = trivial_blocks(fx, h, irreps_h)?;
        in_trivial_block.push(blocks.passed() && blocks.blocks[0].embedding.rows() == fx.dim());
    }
    let mut hom_comparisons = Vec::new();
    for (x, fx) in test_equivariant.iter().zip(&inflated) {
        for (y, fy) in test_equivariant.iter().zip(&inflated) {
            let below = equivariant_homs(x, y)?;
            let above = equivariant_homs(fx, fy)?;
            let cols = x.dim() * y.dim();
            let flat = |v: &[Mat]| stack_rows(x.p(), cols, v.iter().map(|m| m.data().to_vec()));
            let joint = Mat::vstack(&[&flat(&below), &flat(&above)]).rank();
            hom_comparisons.push((below.len(), above.len(), joint == below.len() && joint == above.len()));
        }
    }
    let mut induction_isos = Vec::new();
    for (k, m) in test_modules.iter().enumerate() {
        let ind_g = induce(&g_action, m)?;
        let blocks = trivial_blocks(&ind_g, h, irreps_h)?;
        let Some(pr) = blocks.blocks[0].g_summand.clone() else {
            induction_isos.push(false);
            continue;
        };
        let f_ind = inflate(&induce(q_action, m)?, &g_action, quotient)?;
        let verdict = module_iso_probably(&phi_inv(&skew, &pr)?, &phi_inv(&skew, &f_ind)?, trials, seed.wrapping_add(k as u64))?;
        induction_isos.push(verdict.is_iso());
    }
    Ok(QuotientEquivalence { in_trivial_block, hom_comparisons, induction_isos })
}

/// Comparison of stable categories over a self-injective algebra.
#[derive(Clone, Debug, Serialize)]
pub struct StableEquivariant {
    /// `(label, projective over AG, projective over A)`.
    pub projectivity: Vec<(String, bool, bool)>,
    /// Stable Hom dimension between the skew-algebra modules.
    pub skew_stable_dim: usize,
    /// Dimension of the invariants of the stable Hom over `A`.
    pub fixed_stable_dim: usize,
    /// The maps factoring through projectives form a `G`-stable subspace.
    pub factoring_g_stable: bool,
}

impl StableEquivariant {
    pub fn passed(&self) -> bool {
        self.projectivity.iter().all(|(_, a, b)| a == b) && self.skew_stable_dim == self.fixed_stable_dim && self.factoring_g_stable
    }
}

pub fn stable_equivariant_check(
    skew: &SkewAlgebra,
    x: &EquivariantModule,
    y: &EquivariantModule,
    probes: &[Module],
) -> Result<StableEquivariant> {
    require_skew(skew, &x.action)?;
    require_skew(skew, &y.action)?;
    let g = x.action.group();
    let p = x.p();
    require_coprime(g, p)?;
    let mut objects = vec![("x".to_string(), x.clone()), ("y".to_string(), y.clone())];
    for (k, m) in probes.iter().enumerate() {
        objects.push((format!("Ind(probe {k})"), induce(&x.action, m)?));
    }
    let projectivity = objects
        .iter()
        .map(|(label, z)| Ok((label.clone(), is_projective(&phi_inv(skew, z)?).projective, is_projective(&z.base).projective)))
        .collect::<Result<Vec<_>>>()?;
    let skew_stable_dim = stable_hom(&phi_inv(skew, x)?, &phi_inv(skew, y)?)?.stable_dim;

    let (homs, factoring) = stable_hom_spaces(&x.base, &y.base)?;
    let (r, c) = (x.dim(), y.dim());
    let inverses = g
        .elements()
        .map(|h| x.lambda[h].inverse().ok_or_else(|| Error::InvalidEquivariant("lambda is singular".into())))
        .collect::<Result<Vec<_>>>()?;
    let act = |flat: &[u32], h: usize| -> Vec<u32> {
        let f = Mat::from_vec(p, r, c, flat.to_vec());
        (&(&inverses[h] * &f) * &y.lambda[h]).data().to_vec()
    };
    let mut factoring_g_stable = true;
    for k in 0..factoring.rows() {
        for h in g.elements() {
            let img = Mat::row_vector(p, &act(factoring.row(k), h));
            if Mat::vstack(&[&factoring, &img]).rank() != factoring.rows() {
                factoring_g_stable = false;
            }
        }
    }
    let inv_order = p.inv(p.residue(g.order())).expect("coprime order");
    let average = |flat: &[u32]| -> Vec<u32> {
        let mut sum = Mat::zeros(p, 1, r * c);
        for h in g.elements() {
            sum.add_scaled(&Mat::row_vector(p, &act(flat, h)), inv_order);
        }
        sum.row(0).to_vec()
    };
    let hom_fixed = stack_rows(p, r * c, homs.iter().map(|f| average(f.data()))).rank();
    let pf_fixed = stack_rows(p, r * c, (0..factoring.rows()).map(|k| average(factoring.row(k)))).rank();
    Ok(StableEquivariant { projectivity, skew_stable_dim, fixed_stable_dim: hom_fixed - pf_fixed, factoring_g_stable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::skew_group_algebra;
    use crate::algebras::Algebra;
    use crate::groups::{characters, irreducibles};

    fn f5() -> Prime {
        Prime::new(5).unwrap()
    }

    fn c2_dual() -> (Arc<GroupAction>, SkewAlgebra) {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let a = Arc::new(Algebra::truncated_poly(f5(), 2));
        let s = Mat::from_rows(f5(), &[[1, 0], [0, 4]]).unwrap();
        let act = Arc::new(GroupAction::from_generators(g, a, &[(1, s)]).unwrap());
        let skew = skew_group_algebra(&act).unwrap();
        (act, skew)
    }

    fn simple(act: &GroupAction) -> Module {
        Module::new(act.algebra().clone(), vec![Mat::identity(f5(), 1), Mat::zeros(f5(), 1, 1)]).unwrap()
    }

    fn s_chi(act: &Arc<GroupAction>, k: usize) -> EquivariantModule {
        let chars = characters(act.group(), f5()).unwrap();
        EquivariantModule::with_character(act.clone(), simple(act), &chars[k]).unwrap()
    }

    #[test]
    fn phi_round_trip_on_regular() {
        let (act, skew) = c2_dual();
        let reg = skew.algebra.regular_module();
        let x = phi(&skew, &reg).unwrap();
        x.validate().unwrap();
        assert_eq!(x.dim(), 4);
        assert_eq!(phi_inv(&skew, &x).unwrap(), reg);
        assert_eq!(phi(&skew, &phi_inv(&skew, &x).unwrap()).unwrap(), x);
        let sgn = s_chi(&act, 1);
        assert_eq!(phi(&skew, &phi_inv(&skew, &sgn).unwrap()).unwrap(), sgn);
        phi_inv(&skew, &sgn).unwrap().validate().unwrap();
    }

    #[test]
    fn induce_examples() {
        let (act, skew) = c2_dual();
        let ind = induce(&act, &simple(&act)).unwrap();
        ind.validate().unwrap();
        assert_eq!(ind.dim(), 2);
        let pair = s_chi(&act, 0).direct_sum(&s_chi(&act, 1)).unwrap();
        let v = module_iso_probably(&phi_inv(&skew, &ind).unwrap(), &phi_inv(&skew, &pair).unwrap(), 20, 1).unwrap();
        assert!(v.is_iso());
        let ind_a = induce(&act, &act.algebra().regular_module()).unwrap();
        let reg = phi(&skew, &skew.algebra.regular_module()).unwrap();
        let v = module_iso_probably(&phi_inv(&skew, &ind_a).unwrap(), &phi_inv(&skew, &reg).unwrap(), 20, 2).unwrap();
        assert!(v.is_iso());
        assert_eq!(induce(&act, &Module::zero(act.algebra().clone())).unwrap().dim(), 0);
    }

    #[test]
    fn adjunction_scalars() {
        let (act, skew) = c2_dual();
        for x in [s_chi(&act, 0), s_chi(&act, 1), phi(&skew, &skew.algebra.regular_module()).unwrap()] {
            let r = adjunction_check(&x).unwrap();
            assert_eq!(r.scalar, 2);
            assert!(r.omega_identity);
        }
    }

    #[test]
    fn subgroup_adjunction_degenerations() {
        let (act, skew) = c2_dual();
        let x = phi(&skew, &skew.algebra.regular_module()).unwrap();
        let g = act.group().clone();
        let whole = subgroup_adjunction_check(&x, &Subgroup::whole(g.clone())).unwrap();
        assert_eq!(whole.scalar, 1);
        let triv = subgroup_adjunction_check(&x, &Subgroup::trivial(g)).unwrap();
        assert_eq!(triv.scalar, 2);
    }

    #[test]
    fn hom_action_examples() {
        let (act, skew) = c2_dual();
        let ind = induce(&act, &simple(&act)).unwrap();
        let ha = hom_g_action(&ind, &ind).unwrap();
        assert_eq!((ha.basis.len(), ha.fixed.len()), (4, 2));
        let reg = phi(&skew, &skew.algebra.regular_module()).unwrap();
        assert_eq!(hom_g_action(&reg, &reg).unwrap().fixed.len(), 4);
        let ha = hom_g_action(&s_chi(&act, 0), &s_chi(&act, 1)).unwrap();
        assert_eq!((ha.basis.len(), ha.fixed.len()), (1, 0));
    }

    #[test]
    fn fixed_points_are_skew_homs() {
        let (act, skew) = c2_dual();
        let xs = [s_chi(&act, 0), s_chi(&act, 1), induce(&act, &simple(&act)).unwrap()];
        for x in &xs {
            for y in &xs {
                let fixed = hom_g_action(x, y).unwrap().fixed;
                let over = hom_space(&phi_inv(&skew, x).unwrap(), &phi_inv(&skew, y).unwrap()).unwrap();
                assert_eq!(fixed.len(), over.len());
            }
        }
    }

    #[test]
    fn character_twists() {
        let (act, _) = c2_dual();
        let chars = characters(act.group(), f5()).unwrap();
        let x = s_chi(&act, 1);
        assert_eq!(twist_by_character(&x, &chars[0]).unwrap(), x);
        assert_eq!(twist_by_character(&x, &chars[1]).unwrap(), s_chi(&act, 0));
    }

    #[test]
    fn decomposition_examples() {
        let (act, _) = c2_dual();
        let irr = irreducibles(act.group(), f5(), 7).unwrap();
        let a = EquivariantModule::new(
            act.clone(),
            act.algebra().regular_module(),
            act.group().elements().map(|g| act.sigma(g).clone()).collect(),
        )
        .unwrap();
        let d = hom_decomposition(&a, &a, &irr).unwrap();
        assert_eq!(d.multiplicities, vec![1, 1]);
        let s = s_chi(&act, 0);
        assert_eq!(hom_decomposition(&s, &s, &irr).unwrap().multiplicities, vec![1, 0]);
    }

    #[test]
    fn blocks_of_group_algebra() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let f = Arc::new(Algebra::field(f5()));
        let act = Arc::new(GroupAction::trivial(g.clone(), f));
        let skew = skew_group_algebra(&act).unwrap();
        let x = phi(&skew, &skew.algebra.regular_module()).unwrap();
        let irr = irreducibles(&g, f5(), 1).unwrap();
        let tb = trivial_blocks(&x, &Subgroup::whole(g), &irr).unwrap();
        assert_eq!(tb.dims(), vec![1, 1]);
        assert!(tb.passed());
    }

    #[test]
    fn stable_examples() {
        let (act, skew) = c2_dual();
        let st = |x: &EquivariantModule, y: &EquivariantModule| {
            let r = stable_equivariant_check(&skew, x, y, &[]).unwrap();
            assert!(r.passed(), "{r:?}");
            (r.skew_stable_dim, r.fixed_stable_dim)
        };
        assert_eq!(st(&s_chi(&act, 0), &s_chi(&act, 0)), (1, 1));
        let reg = phi(&skew, &skew.algebra.regular_module()).unwrap();
        assert_eq!(st(&reg, &reg), (0, 0));
        assert_eq!(st(&s_chi(&act, 0), &s_chi(&act, 1)), (0, 0));
    }
}
