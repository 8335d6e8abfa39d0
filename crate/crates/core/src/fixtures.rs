//! Small groups acting on small algebras, with standard test objects.
//!
//! Every random constructor takes the generator explicitly so results are
//! reproducible from a seed.

use std::sync::Arc;

use rand::Rng;

use crate::actions::{pullback_action, GroupAction, SkewAlgebra};
use crate::algebras::{hom_space, Algebra, Module};
use crate::equivariant::{induce, phi_inv, tensor_with_rep, twist_by_character, EquivariantModule};
use crate::error::{Error, Result};
use crate::field::{Mat, Prime};
use crate::groups::{characters, commutator_subgroup, irreducibles, quotient_group, FiniteGroup};
use crate::homotopy::Complex;

pub fn prime(p: u32) -> Prime {
    Prime::new(u64::from(p)).expect("fixture prime")
}

fn dual_numbers(p: u32) -> Arc<Algebra> {
    Arc::new(Algebra::truncated_poly(prime(p), 2))
}

fn scaling(p: u32, c: i64) -> Mat {
    Mat::from_rows(prime(p), &[[1, 0], [0, c]]).expect("diagonal matrix")
}

/// `C2` acting on `F5[x]/(x^2)` by `x -> -x`.
pub fn c2_dual_numbers() -> Arc<GroupAction> {
    let g = Arc::new(FiniteGroup::cyclic(2));
    Arc::new(GroupAction::from_generators(g, dual_numbers(5), &[(1, scaling(5, 4))]).expect("C2 action"))
}

/// `C4` acting on `F5[x]/(x^2)` by `x -> 2x`.
pub fn c4_dual_numbers() -> Arc<GroupAction> {
    let g = Arc::new(FiniteGroup::cyclic(4));
    Arc::new(GroupAction::from_generators(g, dual_numbers(5), &[(1, scaling(5, 2))]).expect("C4 action"))
}

/// A group acting trivially on `F_p`.
pub fn trivial_on_field(g: FiniteGroup, p: u32) -> Arc<GroupAction> {
    Arc::new(GroupAction::trivial(Arc::new(g), Arc::new(Algebra::field(prime(p)))))
}

/// `S3` acting trivially on `F7`.
pub fn s3_trivial() -> Arc<GroupAction> {
    trivial_on_field(FiniteGroup::symmetric(3), 7)
}

/// `S3` acting on `F7[x]/(x^2)` through the sign: odd permutations send `x -> -x`.
pub fn s3_sign_dual_numbers() -> Arc<GroupAction> {
    let g = Arc::new(FiniteGroup::symmetric(3));
    let q = quotient_group(&commutator_subgroup(&g)).expect("A3 is normal");
    let c2 = GroupAction::from_generators(q.group.clone(), dual_numbers(7), &[(1, scaling(7, 6))]).expect("C2 action");
    Arc::new(pullback_action(&c2, g, &q.projection).expect("sign is a homomorphism"))
}

/// The one-dimensional module where `b_0` acts as 1 and every other basis
/// element as 0. Exists when the span of `b_1, ..` is an ideal complementing `b_0`.
pub fn augmentation(a: &Arc<Algebra>) -> Result<Module> {
    let p = a.p();
    Module::new(a.clone(), (0..a.dim()).map(|i| Mat::scalar(p, 1, u32::from(i == 0))).collect())
}

/// `A` with `lambda_g = sigma_g`.
pub fn natural(act: &Arc<GroupAction>) -> EquivariantModule {
    let lambda = act.group().elements().map(|g| act.sigma(g).clone()).collect();
    EquivariantModule::new(act.clone(), act.algebra().regular_module(), lambda).expect("A is equivariant over itself")
}

/// Labelled equivariant test modules: the augmentation twisted by every linear
/// character and by every higher-dimensional irreducible, `A` with its action
/// (and its sign twist), and the induced modules of the augmentation and of `A`.
pub fn test_equivariant(act: &Arc<GroupAction>) -> Result<Vec<(String, EquivariantModule)>> {
    let g = act.group();
    let p = act.p();
    let a = act.algebra();
    let chars = characters(g, p)?;
    let mut out = Vec::new();
    if let Ok(s) = augmentation(a) {
        for (k, chi) in chars.iter().enumerate() {
            out.push((format!("S(x)chi{k}"), EquivariantModule::with_character(act.clone(), s.clone(), chi)?));
        }
        let triv = EquivariantModule::with_character(act.clone(), s.clone(), &chars[0])?;
        for (k, irr) in irreducibles(g, p, 0)?.iter().enumerate() {
            if irr.rep.dim > 1 {
                out.push((format!("S(x)irr{k}"), tensor_with_rep(&triv, &irr.rep)?));
            }
        }
        out.push(("Ind(S)".into(), induce(act, &s)?));
    }
    if a.dim() > 1 {
        let nat = natural(act);
        if let Some(chi) = chars.get(1) {
            out.push(("A(x)chi1".into(), twist_by_character(&nat, chi)?));
        }
        out.push(("A".into(), nat));
        out.push(("Ind(A)".into(), induce(act, &a.regular_module())?));
    }
    Ok(out)
}

pub fn random_vec(p: Prime, n: usize, rng: &mut impl Rng) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(0..p.get())).collect()
}

pub fn random_invertible(p: Prime, n: usize, rng: &mut impl Rng) -> Mat {
    loop {
        let m = Mat::from_vec(p, n, n, random_vec(p, n * n, rng));
        if m.rank() == n {
            return m;
        }
    }
}

/// A random linear combination of same-shape matrices.
pub fn random_combination(p: Prime, rows: usize, cols: usize, basis: &[Mat], rng: &mut impl Rng) -> Mat {
    let mut out = Mat::zeros(p, rows, cols);
    for b in basis {
        out.add_scaled(b, rng.gen_range(0..p.get()));
    }
    out
}

/// A random nonzero module over `AG` of dimension at most `max_dim`: a direct sum
/// of cyclic right ideals `y AG` and their quotients `AG / y AG`, written in a
/// random basis.
pub fn random_skew_module(skew: &SkewAlgebra, max_dim: usize, rng: &mut impl Rng) -> Result<Module> {
    let alg = &skew.algebra;
    let p = alg.p();
    let n = alg.dim();
    let reg = alg.regular_module();
    let mut pieces = Vec::new();
    let mut total = 0;
    for _ in 0..64 {
        if pieces.len() == 2 || (total > 0 && rng.gen_bool(0.4)) {
            break;
        }
        let mut y = vec![0u32; n];
        for _ in 0..rng.gen_range(1..=2) {
            y[rng.gen_range(0..n)] = rng.gen_range(1..p.get());
        }
        let yv = Mat::row_vector(p, &y);
        let images: Vec<Mat> = reg.action().iter().map(|m| &yv * m).collect();
        let refs: Vec<&Mat> = images.iter().collect();
        let span = Mat::vstack(&refs).row_basis();
        let piece = if rng.gen_bool(0.5) { reg.submodule(&span)?.0 } else { reg.quotient(&span)?.0 };
        if piece.dim() == 0 || total + piece.dim() > max_dim {
            continue;
        }
        total += piece.dim();
        pieces.push(piece);
    }
    let Some(first) = pieces.first() else {
        return Err(Error::Precondition(format!("no cyclic piece of AG fits in dimension {max_dim}")));
    };
    let mut m = first.clone();
    for piece in &pieces[1..] {
        m = m.direct_sum(piece)?;
    }
    m.transport(&random_invertible(p, m.dim(), rng))
}

/// Test complexes over `AG` built from the test modules: two stalks, two-term
/// complexes `M -> N` along random nonzero homomorphisms, and a shift.
pub fn test_complexes(skew: &SkewAlgebra, rng: &mut impl Rng) -> Result<Vec<Complex>> {
    let alg = &skew.algebra;
    let p = alg.p();
    let modules = test_equivariant(&skew.action)?.into_iter().map(|(_, x)| phi_inv(skew, &x)).collect::<Result<Vec<_>>>()?;
    let mut out: Vec<Complex> = modules.iter().take(2).map(|m| Complex::stalk(m, 0)).collect();
    'pairs: for m in &modules {
        for n in &modules {
            if out.len() >= 4 {
                break 'pairs;
            }
            let homs = hom_space(m, n)?;
            if homs.is_empty() || m.dim() + n.dim() > 8 {
                continue;
            }
            let mut d = random_combination(p, m.dim(), n.dim(), &homs, rng);
            while d.is_zero() {
                d = random_combination(p, m.dim(), n.dim(), &homs, rng);
            }
            out.push(Complex::new(alg.clone(), 0, vec![m.clone(), n.clone()], vec![d])?);
        }
    }
    let shifted = out.last().expect("at least one test complex").shift(1);
    out.push(shifted);
    Ok(out)
}
