//! Recovering `A G'` from `AG` through the character group.
//!
//! For `G*` acting on `AG` by characters, `(AG)G*` is isomorphic to
//! `End_{AG'}(AG)` by `agχ -> (bh -> χ(h) agbh)`, so `(AG)G*` and `AG'` are
//! Morita equivalent. The checks here build that isomorphism explicitly,
//! together with the representation-level maps `alpha` and `theta` that
//! identify the comonads `- (x) (+)_χ χ`, `- (x) k[G/G']` and `Ind Res`.

use std::sync::Arc;

use serde::Serialize;

use crate::actions::{char_dual_action, skew_group_algebra, GroupAction, SkewAlgebra};
use crate::algebras::{coordinates, endo_algebra, hom_space, is_projective, Algebra, Module};
use crate::equivariant::{induce_subgroup, restrict_subgroup, tensor_with_rep, EquivariantModule};
use crate::error::{Error, Result};
use crate::field::{stack_rows, Mat, Prime};
use crate::groups::{characters, commutator_subgroup, Character, FiniteGroup, Rep, Subgroup};

/// Everything needed to compare `(AG)G*` with `AG'`.
#[derive(Clone, Debug)]
pub struct ReconstructionInstance {
    pub action: Arc<GroupAction>,
    pub derived: Subgroup,
    /// Right coset representatives of `G'`, with `reps[0] = e`.
    pub reps: Vec<usize>,
    pub skew: SkewAlgebra,
    /// `AG'`, the skew algebra of the restricted action.
    pub sub_skew: SkewAlgebra,
    /// Rows are the images of the basis of `AG'` in `AG`.
    pub sub_embedding: Mat,
    /// Characters of `G`, trivial first; index `k` is element `chi{k}` of `G*`.
    pub characters: Vec<Character>,
    pub dual_action: Arc<GroupAction>,
    /// `(AG)G*`, basis `(x_k, chi)` at index `chi * dim(AG) + k`.
    pub double: SkewAlgebra,
}

impl ReconstructionInstance {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.action.group()
    }

    pub fn p(&self) -> Prime {
        self.action.p()
    }

    pub fn dual_group(&self) -> &Arc<FiniteGroup> {
        self.dual_action.group()
    }
}

pub fn build_instance(action: &Arc<GroupAction>) -> Result<ReconstructionInstance> {
    let g = action.group();
    let p = action.p();
    if p.residue(g.order()) == 0 {
        return Err(Error::Precondition(format!("p = {p} divides |G| = {}", g.order())));
    }
    let derived = commutator_subgroup(g);
    let reps = derived.right_coset_reps();
    let chars = characters(g, p)?;
    if chars.len() != reps.len() {
        return Err(Error::Precondition(format!(
            "found {} characters over F_{p} but [G:G'] = {}; p must be 1 mod the exponent of G/G'",
            chars.len(),
            reps.len()
        )));
    }
    let skew = skew_group_algebra(action)?;
    let sub_action = Arc::new(action.restrict(&derived));
    let sub_skew = skew_group_algebra(&sub_action)?;
    let sub_embedding = skew.subgroup_embedding(&derived, &sub_skew);
    let dual_action = Arc::new(char_dual_action(&skew, &chars)?);
    let double = skew_group_algebra(&dual_action)?;
    Ok(ReconstructionInstance {
        action: action.clone(),
        derived,
        reps,
        skew,
        sub_skew,
        sub_embedding,
        characters: chars,
        dual_action,
        double,
    })
}

/// `AG` as a right `AG'`-module.
pub fn skew_over_subalgebra(inst: &ReconstructionInstance) -> Result<Module> {
    inst.skew.algebra.regular_module().restrict(inst.sub_skew.algebra.clone(), &inst.sub_embedding)
}

/// `End_{AG'}(AG)` with product `f * g = f o g`, and its basis of matrices.
pub fn end_over_subalgebra(inst: &ReconstructionInstance) -> Result<(Algebra, Vec<Mat>)> {
    endo_algebra(&skew_over_subalgebra(inst)?)
}

/// Matrix (on `AG`) of the image of the basis element `(x_k, chi)` of `(AG)G*`.
pub fn phi_matrix(inst: &ReconstructionInstance, k: usize, chi: usize) -> Mat {
    let alg = &inst.skew.algebra;
    let d = inst.skew.base_dim();
    let p = inst.p();
    let values = &inst.characters[chi].values;
    let dim = alg.dim();
    let mut out = Mat::zeros(p, dim, dim);
    for r in 0..dim {
        let c = values[r / d];
        for (col, &v) in alg.product(k, r).iter().enumerate() {
            out.set(r, col, p.mul(c, v));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiReport {
    pub dim: usize,
    pub end_dim: usize,
    pub rank: usize,
    pub linear: bool,
    pub multiplicative: bool,
    pub unital: bool,
    /// First failing basis element or pair, if any.
    pub witness: Option<String>,
}

impl PhiReport {
    pub fn passed(&self) -> bool {
        self.linear && self.multiplicative && self.unital && self.rank == self.dim && self.end_dim == self.dim
    }
}

/// Certifies that `agχ -> (bh -> χ(h) agbh)` is an algebra isomorphism
/// `(AG)G* -> End_{AG'}(AG)`, checking every basis element and pair.
pub fn phi_iso_check(inst: &ReconstructionInstance) -> Result<PhiReport> {
    let p = inst.p();
    let dd = inst.skew.algebra.dim();
    let nchars = inst.characters.len();
    let dim = inst.double.algebra.dim();
    let images: Vec<Mat> = (0..dim).map(|b| phi_matrix(inst, b % dd, b / dd)).collect();
    let names = inst.double.algebra.basis_names();
    let mut witness = None;

    let over = skew_over_subalgebra(inst)?;
    let end_dim = hom_space(&over, &over)?.len();
    let mut linear = true;
    for (b, f) in images.iter().enumerate() {
        if !over.is_hom_to(&over, f) {
            linear = false;
            witness.get_or_insert_with(|| format!("image of {} is not right AG'-linear", names[b]));
        }
    }

    let mut multiplicative = true;
    'outer: for x in 0..dim {
        for y in 0..dim {
            let prod = inst.double.algebra.product(x, y);
            let mut lhs = Mat::zeros(p, dd, dd);
            for (z, &c) in prod.iter().enumerate() {
                if c != 0 {
                    lhs.add_scaled(&images[z], c);
                }
            }
            if lhs != &images[y] * &images[x] {
                multiplicative = false;
                witness.get_or_insert_with(|| format!("phi({} * {}) != phi({}) o phi({})", names[x], names[y], names[x], names[y]));
                break 'outer;
            }
        }
    }

    let one = inst.double.algebra.unit();
    let mut unit_img = Mat::zeros(p, dd, dd);
    for (z, &c) in one.iter().enumerate() {
        unit_img.add_scaled(&images[z], c);
    }
    let unital = unit_img.is_identity();
    if !unital {
        witness.get_or_insert_with(|| "phi(1) is not the identity".into());
    }
    let rank = stack_rows(p, dd * dd, images.iter().map(|m| m.data().to_vec())).rank();
    if rank != dim {
        witness.get_or_insert_with(|| format!("phi has rank {rank} < {dim}"));
    }
    debug_assert_eq!(dim, dd * nchars);
    Ok(PhiReport { dim, end_dim, rank, linear, multiplicative, unital, witness })
}

#[derive(Clone, Debug, Serialize)]
pub struct FourierReport {
    /// `C[chi][i] = chi(g_i)`.
    pub char_matrix: Mat,
    pub char_rank: usize,
    /// `alpha: (+)_chi chi -> k[G/G']`, rows indexed by characters.
    pub alpha: Mat,
    pub intertwines: bool,
    /// `alpha(sum_chi 1_chi) = G'e`.
    pub normalized: bool,
    pub counit: bool,
    pub comultiplication: bool,
}

impl FourierReport {
    pub fn passed(&self) -> bool {
        self.char_rank == self.alpha.rows() && self.intertwines && self.normalized && self.counit && self.comultiplication
    }
}

/// The isomorphism `alpha = (C^-1)^T` between the sum of characters and the
/// coset representation, with the counit and comultiplication squares.
pub fn character_fourier(inst: &ReconstructionInstance) -> Result<FourierReport> {
    let p = inst.p();
    let g = inst.group();
    let n = inst.reps.len();
    let chars = &inst.characters;
    let char_matrix = Mat::from_fn(p, n, n, |c, i| chars[c].value(inst.reps[i]));
    let char_rank = char_matrix.rank();
    let alpha = char_matrix
        .inverse()
        .ok_or_else(|| Error::Invariant("character matrix is singular, contradicting independence of characters".into()))?
        .transpose();

    let perm = Rep::coset_permutation(&inst.derived, p);
    let intertwines = g.elements().all(|x| {
        let diag = Mat::from_fn(p, n, n, |a, b| if a == b { chars[a].value(x) } else { 0 });
        &diag * &alpha == &alpha * perm.matrix(x)
    });

    let ones = Mat::from_fn(p, 1, n, |_, _| 1);
    let e1 = Mat::from_fn(p, 1, n, |_, i| u32::from(i == 0));
    let normalized = &ones * &alpha == e1;

    let eps1 = Mat::from_fn(p, n, 1, |c, _| u32::from(chars[c].is_trivial()));
    let eps3 = Mat::from_fn(p, n, 1, |_, _| 1);
    let counit = &alpha * &eps3 == eps1;

    let dual = inst.dual_group();
    let delta1 = Mat::from_fn(p, n, n * n, |c, col| {
        let (a, b) = (col / n, col % n);
        u32::from(a == dual.mul(c, dual.inv(b)))
    });
    let delta3 = Mat::from_fn(p, n, n * n, |i, col| u32::from(col == i * n + i));
    let comultiplication = &delta1 * &alpha.kron(&alpha)? == &alpha * &delta3;

    Ok(FourierReport { char_matrix, char_rank, alpha, intertwines, normalized, counit, comultiplication })
}

/// `theta_x: Ind_{G'}^G Res x -> x (x) k[G/G']`, `u (x) g_i -> u L_{g_i} (x) G'g_i`.
pub fn theta_matrix(inst: &ReconstructionInstance, x: &EquivariantModule) -> Mat {
    let p = inst.p();
    let m = x.dim();
    let n = inst.reps.len();
    let mut out = Mat::zeros(p, m * n, m * n);
    for (i, &r) in inst.reps.iter().enumerate() {
        let l = x.lambda(r);
        for k in 0..m {
            for k2 in 0..m {
                out.set(i * m + k, k2 * n + i, l.get(k, k2));
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaModuleReport {
    pub dim: usize,
    pub morphism: bool,
    pub invertible: bool,
    pub counit: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaReport {
    pub modules: Vec<ThetaModuleReport>,
    /// One entry per test morphism `(source, target, matrix)`.
    pub naturality: Vec<bool>,
}

impl ThetaReport {
    pub fn passed(&self) -> bool {
        self.modules.iter().all(|m| m.morphism && m.invertible && m.counit) && self.naturality.iter().all(|&b| b)
    }
}

/// Checks that each `theta_x` is an isomorphism of equivariant modules
/// compatible with the counits, and natural along the given morphisms.
pub fn theta_check(inst: &ReconstructionInstance, tests: &[EquivariantModule], morphisms: &[(usize, usize, Mat)]) -> Result<ThetaReport> {
    let p = inst.p();
    let n = inst.reps.len();
    let perm = Rep::coset_permutation(&inst.derived, p);
    let mut modules = Vec::new();
    for x in tests {
        let m = x.dim();
        let f2 = induce_subgroup(&inst.action, &inst.derived, &restrict_subgroup(x, &inst.derived)?)?;
        let f3 = tensor_with_rep(x, &perm)?;
        let theta = theta_matrix(inst, x);
        let morphism = f2.is_hom_to(&f3, &theta);
        let invertible = m == 0 || theta.inverse().is_some();
        let mut eps2 = Mat::zeros(p, m * n, m);
        for (i, &r) in inst.reps.iter().enumerate() {
            eps2.set_block(i * m, 0, x.lambda(r));
        }
        let eps3 = Mat::from_fn(p, m * n, m, |row, c| u32::from(row / n == c));
        let counit = &theta * &eps3 == eps2;
        modules.push(ThetaModuleReport { dim: m, morphism, invertible, counit });
    }
    let mut naturality = Vec::new();
    for (s, t, h) in morphisms {
        let (x, y) = (&tests[*s], &tests[*t]);
        if !x.is_hom_to(y, h) {
            return Err(Error::Precondition(format!("test morphism {s} -> {t} is not equivariant")));
        }
        let f2h = Mat::block_diag(p, &vec![h; n]);
        let f3h = h.kron(&Mat::identity(p, n))?;
        naturality.push(&theta_matrix(inst, x) * &f3h == &f2h * &theta_matrix(inst, y));
    }
    Ok(ThetaReport { modules, naturality })
}

#[derive(Clone, Debug, Serialize)]
pub struct MoritaReport {
    /// `AG` is projective as a right `AG'`-module.
    pub projective: bool,
    /// `AG'` is a direct summand of `AG` over `AG'`.
    pub generator: bool,
    /// Retraction `AG -> AG'` splitting the inclusion, when found.
    pub retraction: Option<Mat>,
}

impl MoritaReport {
    pub fn passed(&self) -> bool {
        self.projective && self.generator
    }
}

/// Progenerator witness for `AG` over `AG'`.
pub fn morita_witness(inst: &ReconstructionInstance) -> Result<MoritaReport> {
    let over = skew_over_subalgebra(inst)?;
    let projective = is_projective(&over).projective;
    let sub = inst.sub_skew.algebra.regular_module();
    let incl = &inst.sub_embedding;
    if !sub.is_hom_to(&over, incl) {
        return Err(Error::Invariant("AG' -> AG is not right AG'-linear".into()));
    }
    let homs = hom_space(&over, &sub)?;
    let composites: Vec<Mat> = homs.iter().map(|h| incl * h).collect();
    let id = Mat::identity(inst.p(), sub.dim());
    let retraction = coordinates(&composites, &id).map(|c| crate::algebras::combine(inst.p(), &homs, &c, over.dim(), sub.dim()));
    Ok(MoritaReport { projective, generator: retraction.is_some(), retraction })
}
