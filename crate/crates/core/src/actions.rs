//! Group actions on algebras by automorphisms, twisted modules and skew
//! group algebras.
//!
//! An action is stored as one matrix per group element with `a^g = a * sigma_g`
//! on coefficient rows. The single composition law everything else is derived
//! from is `(a^g)^h = a^{gh}`, i.e. `sigma_g * sigma_h == sigma_{gh}`.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use crate::algebras::{Algebra, Module};
use crate::error::{Error, Result};
use crate::field::{Mat, Prime};
use crate::groups::{character_group, Character, FiniteGroup, Subgroup};

/// A right action of `G` on `A` by algebra automorphisms.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupAction {
    group: Arc<FiniteGroup>,
    algebra: Arc<Algebra>,
    sigma: Vec<Mat>,
}

impl fmt::Debug for GroupAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupAction({:?} on {:?})", self.group, self.algebra)
    }
}

impl GroupAction {
    /// One matrix per group element; validates automorphisms and the composition law.
    pub fn new(group: Arc<FiniteGroup>, algebra: Arc<Algebra>, sigma: Vec<Mat>) -> Result<Self> {
        if sigma.len() != group.order() {
            return Err(Error::InvalidAction(format!("{} matrices for a group of order {}", sigma.len(), group.order())));
        }
        let act = GroupAction { group, algebra, sigma };
        act.validate()?;
        Ok(act)
    }

    /// Completes matrices given on generators by `sigma_{xg} = sigma_x sigma_g`, then validates.
    pub fn from_generators(group: Arc<FiniteGroup>, algebra: Arc<Algebra>, gens: &[(usize, Mat)]) -> Result<Self> {
        let p = algebra.p();
        let mut sigma: Vec<Option<Mat>> = vec![None; group.order()];
        sigma[group.unit()] = Some(Mat::identity(p, algebra.dim()));
        let mut queue = VecDeque::from([group.unit()]);
        while let Some(x) = queue.pop_front() {
            for (g, m) in gens {
                let y = group.mul(x, *g);
                if sigma[y].is_none() {
                    sigma[y] = Some(sigma[x].as_ref().unwrap() * m);
                    queue.push_back(y);
                }
            }
        }
        let sigma = sigma
            .into_iter()
            .enumerate()
            .map(|(g, m)| m.ok_or_else(|| Error::InvalidAction(format!("generators do not reach {}", group.name(g)))))
            .collect::<Result<Vec<_>>>()?;
        GroupAction::new(group, algebra, sigma)
    }

    pub fn trivial(group: Arc<FiniteGroup>, algebra: Arc<Algebra>) -> Self {
        let sigma = vec![Mat::identity(algebra.p(), algebra.dim()); group.order()];
        GroupAction { group, algebra, sigma }
    }

    fn validate(&self) -> Result<()> {
        let (g, a) = (&self.group, &self.algebra);
        let d = a.dim();
        for (x, s) in self.sigma.iter().enumerate() {
            let name = g.name(x);
            if s.rows() != d || s.cols() != d || s.modulus() != a.p() {
                return Err(Error::InvalidAction(format!("matrix for {name} has the wrong shape")));
            }
            if s.apply_row(a.unit()) != a.unit() {
                return Err(Error::InvalidAction(format!("sigma({name}) does not fix the unit")));
            }
            if s.inverse().is_none() {
                return Err(Error::InvalidAction(format!("sigma({name}) is not invertible")));
            }
            for i in 0..d {
                for j in 0..d {
                    let lhs = s.apply_row(a.product(i, j));
                    let rhs = a.mul(s.row(i), s.row(j));
                    if lhs != rhs {
                        return Err(Error::InvalidAction(format!(
                            "sigma({name}) is not multiplicative on basis ({}, {})",
                            a.basis_names()[i],
                            a.basis_names()[j]
                        )));
                    }
                }
            }
        }
        if !self.sigma[g.unit()].is_identity() {
            return Err(Error::InvalidAction("sigma(e) is not the identity".into()));
        }
        for x in g.elements() {
            for y in g.elements() {
                let lhs = &self.sigma[x] * &self.sigma[y];
                let rhs = &self.sigma[g.mul(x, y)];
                if &lhs != rhs {
                    let i = (0..d).find(|&i| lhs.row(i) != rhs.row(i)).unwrap_or(0);
                    return Err(Error::InvalidAction(format!(
                        "composition law (a^g)^h = a^(gh) fails for g = {}, h = {}, basis index {i}",
                        g.name(x),
                        g.name(y)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn p(&self) -> Prime {
        self.algebra.p()
    }

    pub fn sigma(&self, g: usize) -> &Mat {
        &self.sigma[g]
    }

    /// `a^g`.
    pub fn apply(&self, a: &[u32], g: usize) -> Vec<u32> {
        self.sigma[g].apply_row(a)
    }

    pub fn is_trivial_on(&self, elements: &[usize]) -> bool {
        elements.iter().all(|&h| self.sigma[h].is_identity())
    }

    /// Restriction to a subgroup, as an action of the subgroup in its own right.
    pub fn restrict(&self, h: &Subgroup) -> GroupAction {
        let (group, embed) = h.as_group();
        let sigma = embed.iter().map(|&x| self.sigma[x].clone()).collect();
        GroupAction { group, algebra: self.algebra.clone(), sigma }
    }

    /// Twisted module `M^g`: same space, `m ._g a = m . a^{g^-1}`.
    pub fn twist_module(&self, m: &Module, g: usize) -> Result<Module> {
        if m.algebra().as_ref() != self.algebra.as_ref() {
            return Err(Error::Precondition("module is not over the acted-on algebra".into()));
        }
        let s = &self.sigma[self.group.inv(g)];
        let action = (0..self.algebra.dim()).map(|i| m.act(s.row(i))).collect();
        Ok(Module::new_unchecked(m.algebra().clone(), m.dim(), action))
    }
}

/// Action of `G` obtained by restriction along a homomorphism `G -> Q`.
pub fn pullback_action(act: &GroupAction, source: Arc<FiniteGroup>, hom: &[usize]) -> Result<GroupAction> {
    source.check_homomorphism(act.group(), hom)?;
    let sigma = hom.iter().map(|&q| act.sigma(q).clone()).collect();
    GroupAction::new(source, act.algebra().clone(), sigma)
}

/// The skew group algebra `AG`, basis `(a_i, g)` at index `g * dim(A) + i`,
/// with `(a g)(a' g') = a a'^{g^-1} g g'`.
#[derive(Clone, Debug)]
pub struct SkewAlgebra {
    pub algebra: Arc<Algebra>,
    pub action: Arc<GroupAction>,
}

impl SkewAlgebra {
    pub fn base_dim(&self) -> usize {
        self.action.algebra().dim()
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.action.group()
    }

    #[inline]
    pub fn index(&self, i: usize, g: usize) -> usize {
        g * self.base_dim() + i
    }

    /// Coefficients of `(a, e)`.
    pub fn embed_base(&self, a: &[u32]) -> Vec<u32> {
        let mut v = vec![0; self.algebra.dim()];
        let off = self.index(0, self.group().unit());
        v[off..off + a.len()].copy_from_slice(a);
        v
    }

    /// Coefficients of `(1, g)`.
    pub fn group_element(&self, g: usize) -> Vec<u32> {
        let base = self.action.algebra();
        let mut v = vec![0; self.algebra.dim()];
        let off = self.index(0, g);
        v[off..off + base.dim()].copy_from_slice(base.unit());
        v
    }

    /// Rows are the images of the basis of `A` under `a -> (a, e)`.
    pub fn base_embedding(&self) -> Mat {
        let d = self.base_dim();
        let rows: Vec<Vec<u32>> = (0..d).map(|i| self.embed_base(&self.action.algebra().basis_vec(i))).collect();
        crate::field::stack_rows(self.action.p(), self.algebra.dim(), rows)
    }

    /// Rows are the images of the basis of `AH` (the skew algebra of the
    /// restricted action, with `h` indexing the subgroup) inside `AG`.
    pub fn subgroup_embedding(&self, h: &Subgroup, sub: &SkewAlgebra) -> Mat {
        let d = self.base_dim();
        let p = self.action.p();
        Mat::from_fn(p, sub.algebra.dim(), self.algebra.dim(), |r, c| {
            let (i, k) = (r % d, r / d);
            u32::from(c == self.index(i, h.elements()[k]))
        })
    }
}

pub fn skew_group_algebra(act: &Arc<GroupAction>) -> Result<SkewAlgebra> {
    let a = act.algebra();
    let g = act.group();
    let (d, n) = (a.dim(), g.order());
    let total = d * n;
    let mut sc = vec![0u32; total * total * total];
    for x in g.elements() {
        let twist = act.sigma(g.inv(x));
        for y in g.elements() {
            let block = g.mul(x, y) * d;
            for i in 0..d {
                for j in 0..d {
                    let prod = a.mul(&a.basis_vec(i), twist.row(j));
                    let (r, c) = (x * d + i, y * d + j);
                    let off = (r * total + c) * total + block;
                    sc[off..off + d].copy_from_slice(&prod);
                }
            }
        }
    }
    let mut unit = vec![0; total];
    unit[g.unit() * d..g.unit() * d + d].copy_from_slice(a.unit());
    let names =
        g.elements().flat_map(|x| a.basis_names().iter().map(move |b| (b.clone(), x))).map(|(b, x)| format!("{b}*{}", g.name(x))).collect();
    let algebra =
        Algebra::from_flat(a.p(), names, sc, unit).map_err(|e| Error::Invariant(format!("skew group algebra failed validation: {e}")))?;
    Ok(SkewAlgebra { algebra: Arc::new(algebra), action: act.clone() })
}

/// Action of the character group on `AG` by `(a, g) -> chi(g)^-1 (a, g)`.
///
/// With this sign, the twist of an `AG`-module by `chi` is `- (x) chi` on
/// equivariant modules, and `agχ -> {bh -> chi(h) agbh}` is multiplicative.
pub fn char_dual_action(skew: &SkewAlgebra, chars: &[Character]) -> Result<GroupAction> {
    let dual = character_group(chars)?;
    let p = skew.action.p();
    let d = skew.base_dim();
    let total = skew.algebra.dim();
    let sigma = chars
        .iter()
        .map(|chi| {
            Mat::from_fn(p, total, total, |r, c| if r == c { p.inv(chi.value(r / d)).expect("character values are units") } else { 0 })
        })
        .collect();
    GroupAction::new(dual, skew.algebra.clone(), sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::characters;

    fn f5() -> Prime {
        Prime::new(5).unwrap()
    }

    fn c2_on_dual() -> Arc<GroupAction> {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let a = Arc::new(Algebra::truncated_poly(f5(), 2));
        let s = Mat::from_rows(f5(), &[[1, 0], [0, 4]]).unwrap();
        Arc::new(GroupAction::from_generators(g, a, &[(1, s)]).unwrap())
    }

    #[test]
    fn action_examples() {
        c2_on_dual();
        let g = Arc::new(FiniteGroup::symmetric(3));
        let a = Arc::new(Algebra::truncated_poly(f5(), 3));
        GroupAction::new(g.clone(), a.clone(), vec![Mat::identity(f5(), 3); 6]).unwrap();
        // x -> 1 is not an automorphism
        let bad = Mat::from_rows(f5(), &[[1, 0], [1, 0]]).unwrap();
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        let dual = Arc::new(Algebra::truncated_poly(f5(), 2));
        assert!(GroupAction::new(c2.clone(), dual.clone(), vec![Mat::identity(f5(), 2), bad]).is_err());
        // x -> 2x has order 4, so it cannot define a C2 action
        let two = Mat::from_rows(f5(), &[[1, 0], [0, 2]]).unwrap();
        let err = GroupAction::from_generators(c2, dual, &[(1, two)]).unwrap_err();
        assert!(err.to_string().contains("composition law"), "{err}");
    }

    #[test]
    fn twist_examples() {
        let act = c2_on_dual();
        let a = act.algebra();
        let reg = a.regular_module();
        assert_eq!(act.twist_module(&reg, 0).unwrap(), reg);
        let s = Module::new(a.clone(), vec![Mat::identity(f5(), 1), Mat::zeros(f5(), 1, 1)]).unwrap();
        assert_eq!(act.twist_module(&s, 1).unwrap(), s);
        let twice = act.twist_module(&act.twist_module(&reg, 1).unwrap(), 1).unwrap();
        assert_eq!(twice, reg);
        act.twist_module(&reg, 1).unwrap().validate().unwrap();
    }

    #[test]
    fn skew_products() {
        let act = c2_on_dual();
        let skew = skew_group_algebra(&act).unwrap();
        let alg = &skew.algebra;
        assert_eq!(alg.dim(), 4);
        let xs = skew.index(1, 1);
        let s = skew.index(0, 1);
        let xe = skew.index(1, 0);
        // (x s)(x s) = x (4x) e = 0
        assert!(alg.product(xs, xs).iter().all(|&c| c == 0));
        // (1 s)(x e) = 4x s
        let mut expect = vec![0; 4];
        expect[xs] = 4;
        assert_eq!(alg.product(s, xe), expect.as_slice());
    }

    #[test]
    fn trivial_action_gives_group_algebra() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let f = Arc::new(Algebra::field(f5()));
        let skew = skew_group_algebra(&Arc::new(GroupAction::trivial(g.clone(), f))).unwrap();
        let ga = Algebra::group_algebra(&g, f5());
        assert_eq!(skew.algebra.structconst(), ga.structconst());
    }

    #[test]
    fn conjugation_law() {
        let act = c2_on_dual();
        let skew = skew_group_algebra(&act).unwrap();
        let alg = &skew.algebra;
        for g in act.group().elements() {
            for i in 0..2 {
                let a = act.algebra().basis_vec(i);
                let lhs = alg.mul(&alg.mul(&skew.group_element(g), &skew.embed_base(&a)), &skew.group_element(act.group().inv(g)));
                let rhs = skew.embed_base(&act.apply(&a, act.group().inv(g)));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn character_dual_action() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let f = Arc::new(Algebra::field(f5()));
        let skew = skew_group_algebra(&Arc::new(GroupAction::trivial(g.clone(), f))).unwrap();
        let chars = characters(&g, f5()).unwrap();
        let dual = char_dual_action(&skew, &chars).unwrap();
        assert!(dual.sigma(0).is_identity());
        assert_eq!(dual.sigma(1), &Mat::from_rows(f5(), &[[1, 0], [0, 4]]).unwrap());
    }

    #[test]
    fn character_dual_composes_pointwise() {
        let g = Arc::new(FiniteGroup::cyclic(4));
        let f = Arc::new(Algebra::field(f5()));
        let skew = skew_group_algebra(&Arc::new(GroupAction::trivial(g.clone(), f))).unwrap();
        let chars = characters(&g, f5()).unwrap();
        let dual = char_dual_action(&skew, &chars).unwrap();
        let cg = dual.group().clone();
        for i in cg.elements() {
            for j in cg.elements() {
                let prod = chars[i].product(&chars[j]);
                let k = cg.mul(i, j);
                assert_eq!(chars[k].values, prod.values);
                assert_eq!(&(dual.sigma(i) * dual.sigma(j)), dual.sigma(k));
            }
        }
    }

    #[test]
    fn pullback_examples() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        let f7 = Prime::new(7).unwrap();
        let a = Arc::new(Algebra::truncated_poly(f7, 2));
        let neg = Mat::from_rows(f7, &[[1, 0], [0, 6]]).unwrap();
        let act = GroupAction::from_generators(c2.clone(), a.clone(), &[(1, neg)]).unwrap();
        let q = crate::groups::quotient_group(&crate::groups::commutator_subgroup(&s3)).unwrap();
        let pulled = pullback_action(&act, s3.clone(), &q.projection).unwrap();
        for x in s3.elements() {
            if s3.element_order(x) == 3 {
                assert!(pulled.sigma(x).is_identity());
            }
        }
        let same = pullback_action(&act, c2.clone(), &[0, 1]).unwrap();
        assert_eq!(same, act);
        let triv = pullback_action(&act, s3.clone(), &[0; 6]).unwrap();
        assert!(triv.is_trivial_on(&(0..6).collect::<Vec<_>>()));
        assert!(pullback_action(&act, s3, &[0, 1, 0, 1, 0, 1]).is_err());
    }
}
