//! JSON formats for groups, algebras, actions, modules, equivariant modules
//! and complexes.
//!
//! Matrices are written as lists of integer rows; entries are reduced mod `p`
//! on load. Group elements are referred to by name.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::actions::{GroupAction, SkewAlgebra};
use crate::algebras::{Algebra, Module};
use crate::equivariant::{induce, phi, phi_inv, EquivariantModule};
use crate::error::{Error, Result};
use crate::field::{Mat, Prime};
use crate::groups::{characters, FiniteGroup};
use crate::homotopy::Complex;

pub type Rows = Vec<Vec<i64>>;

fn mat(p: Prime, rows: &Rows, cols: usize) -> Result<Mat> {
    if rows.is_empty() {
        return Ok(Mat::zeros(p, 0, cols));
    }
    Mat::from_rows(p, rows)
}

fn to_rows(m: &Mat) -> Rows {
    m.to_rows().into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum GroupSpec {
    /// Multiplication table by element names; the row of `a` lists `a * b`.
    Table {
        names: Vec<String>,
        table: Vec<Vec<String>>,
    },
    /// Generated by permutations of `0..degree`.
    Permutations {
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
    /// `cyclic` or `symmetric`.
    Family {
        family: String,
        n: usize,
    },
    Product {
        product: Vec<GroupSpec>,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Table { names, table } => {
                let index = |s: &String| {
                    names.iter().position(|n| n == s).ok_or_else(|| Error::InvalidGroup(format!("unknown element {s:?} in table")))
                };
                let table = table.iter().map(|row| row.iter().map(index).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
                FiniteGroup::from_table(names.clone(), table)
            }
            GroupSpec::Permutations { degree, generators } => FiniteGroup::from_permutations(*degree, generators),
            GroupSpec::Family { family, n } => match family.as_str() {
                "cyclic" => Ok(FiniteGroup::cyclic(*n)),
                "symmetric" => Ok(FiniteGroup::symmetric(*n)),
                other => Err(Error::Parse(format!("unknown group family {other:?}"))),
            },
            GroupSpec::Product { product } => {
                let mut it = product.iter();
                let first = it.next().ok_or_else(|| Error::Parse("empty product".into()))?.build()?;
                it.try_fold(first, |acc, g| Ok(FiniteGroup::direct_product(&acc, &g.build()?)))
            }
        }
    }

    pub fn from_group(g: &FiniteGroup) -> Self {
        let table = g.table().iter().map(|row| row.iter().map(|&c| g.name(c).to_string()).collect()).collect();
        GroupSpec::Table { names: g.names().to_vec(), table }
    }
}

/// Structure constants `structconst[i][j][k]`, or a named family.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum AlgebraSpec {
    Explicit {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<u64>,
        basis: Vec<String>,
        structconst: Vec<Vec<Vec<i64>>>,
        unit: Vec<i64>,
    },
    /// `field` or `truncated_poly` (`F_p[x]/(x^n)`).
    Family {
        family: String,
        #[serde(default)]
        n: Option<usize>,
    },
}

impl AlgebraSpec {
    pub fn build(&self, p: Prime) -> Result<Algebra> {
        match self {
            AlgebraSpec::Explicit { p: q, basis, structconst, unit } => {
                if let Some(q) = q {
                    if *q != u64::from(p.get()) {
                        return Err(Error::Parse(format!("algebra declares p = {q}, scenario has p = {p}")));
                    }
                }
                Algebra::new(p, basis.clone(), structconst, unit)
            }
            AlgebraSpec::Family { family, n } => match family.as_str() {
                "field" => Ok(Algebra::field(p)),
                "truncated_poly" => Ok(Algebra::truncated_poly(p, n.ok_or_else(|| Error::Parse("truncated_poly needs n".into()))?)),
                other => Err(Error::Parse(format!("unknown algebra family {other:?}"))),
            },
        }
    }

    pub fn from_algebra(a: &Algebra) -> Self {
        let sc =
            a.structconst().into_iter().map(|plane| plane.into_iter().map(|v| v.into_iter().map(i64::from).collect()).collect()).collect();
        AlgebraSpec::Explicit {
            p: Some(u64::from(a.p().get())),
            basis: a.basis_names().to_vec(),
            structconst: sc,
            unit: a.unit().iter().map(|&c| i64::from(c)).collect(),
        }
    }
}

/// Automorphism matrices by element name, for all elements or for generators.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    #[serde(default)]
    pub generators: BTreeMap<String, Rows>,
}

impl ActionSpec {
    pub fn build(&self, g: &Arc<FiniteGroup>, a: &Arc<Algebra>) -> Result<GroupAction> {
        let gens = named_matrices(g, a.p(), a.dim(), &self.generators)?;
        GroupAction::from_generators(g.clone(), a.clone(), &gens)
    }
}

fn named_matrices(g: &FiniteGroup, p: Prime, cols: usize, m: &BTreeMap<String, Rows>) -> Result<Vec<(usize, Mat)>> {
    m.iter()
        .map(|(name, rows)| {
            let idx = g.index_of(name).ok_or_else(|| Error::Parse(format!("unknown group element {name:?}")))?;
            Ok((idx, mat(p, rows, cols)?))
        })
        .collect()
}

/// A module over the algebra in context: explicit action matrices (one per
/// basis element) or a named module.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ModuleSpec {
    Action {
        action: Vec<Rows>,
    },
    /// `regular`, `free` (with `rank`), `zero`, or `augmentation` (the
    /// one-dimensional module where `b_0` acts as 1 and every other basis element as 0).
    Named {
        module: String,
        #[serde(default)]
        rank: Option<usize>,
    },
}

impl ModuleSpec {
    pub fn build(&self, a: &Arc<Algebra>) -> Result<Module> {
        let p = a.p();
        match self {
            ModuleSpec::Action { action } => {
                let dim = action.first().map_or(0, |m| m.len());
                let mats = action.iter().map(|rows| mat(p, rows, dim)).collect::<Result<Vec<_>>>()?;
                Module::new(a.clone(), mats)
            }
            ModuleSpec::Named { module, rank } => match module.as_str() {
                "regular" => Ok(a.regular_module()),
                "free" => Ok(a.free_module(rank.unwrap_or(1))),
                "zero" => Ok(Module::zero(a.clone())),
                "augmentation" => {
                    let mats = (0..a.dim()).map(|i| Mat::scalar(p, 1, u32::from(i == 0))).collect();
                    Module::new(a.clone(), mats)
                }
                other => Err(Error::Parse(format!("unknown module {other:?}"))),
            },
        }
    }

    pub fn from_module(m: &Module) -> Self {
        ModuleSpec::Action { action: m.action().iter().map(to_rows).collect() }
    }
}

/// An equivariant module over the action in context.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum EquivariantSpec {
    /// `lambda` by element name, for all elements or for generators.
    Lambda { module: ModuleSpec, lambda: BTreeMap<String, Rows> },
    /// `lambda_g = chi(g)` for the character with this index (trivial is 0).
    Character { module: ModuleSpec, character: usize },
    /// `Ind` of an `A`-module.
    Induced { induce: ModuleSpec },
    /// A module over the skew group algebra.
    Skew { skew_module: ModuleSpec },
    /// `A` itself with `lambda_g = sigma_g`.
    Natural { natural: bool },
}

impl EquivariantSpec {
    pub fn build(&self, skew: &SkewAlgebra) -> Result<EquivariantModule> {
        let act = &skew.action;
        let a = act.algebra();
        match self {
            EquivariantSpec::Lambda { module, lambda } => {
                let base = module.build(a)?;
                let gens = named_matrices(act.group(), act.p(), base.dim(), lambda)?;
                EquivariantModule::from_generators(act.clone(), base, &gens)
            }
            EquivariantSpec::Character { module, character } => {
                let chars = characters(act.group(), act.p())?;
                let chi = chars.get(*character).ok_or_else(|| Error::Parse(format!("no character with index {character}")))?;
                EquivariantModule::with_character(act.clone(), module.build(a)?, chi)
            }
            EquivariantSpec::Induced { induce: m } => {
                let x = induce(act, &m.build(a)?)?;
                x.validate()?;
                Ok(x)
            }
            EquivariantSpec::Skew { skew_module } => phi(skew, &skew_module.build(&skew.algebra)?),
            EquivariantSpec::Natural { .. } => {
                let lambda = act.group().elements().map(|g| act.sigma(g).clone()).collect();
                EquivariantModule::new(act.clone(), a.regular_module(), lambda)
            }
        }
    }

    pub fn from_equivariant(x: &EquivariantModule) -> Self {
        let g = x.action().group();
        let lambda = g.elements().map(|h| (g.name(h).to_string(), to_rows(x.lambda(h)))).collect();
        EquivariantSpec::Lambda { module: ModuleSpec::from_module(x.base()), lambda }
    }
}

/// A bounded complex of `AG`-modules; terms are given as equivariant modules.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    #[serde(default)]
    pub lo: i64,
    pub terms: Vec<EquivariantSpec>,
    #[serde(default)]
    pub diff: Vec<Rows>,
}

impl ComplexSpec {
    pub fn build(&self, skew: &SkewAlgebra) -> Result<Complex> {
        let p = skew.action.p();
        let terms = self.terms.iter().map(|t| phi_inv(skew, &t.build(skew)?)).collect::<Result<Vec<_>>>()?;
        let diffs = self
            .diff
            .iter()
            .enumerate()
            .map(|(k, rows)| mat(p, rows, terms.get(k + 1).map_or(0, |t| t.dim())))
            .collect::<Result<Vec<_>>>()?;
        Complex::new(skew.algebra.clone(), self.lo, terms, diffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::skew_group_algebra;

    #[test]
    fn group_table_round_trip() {
        let g = FiniteGroup::symmetric(3);
        let spec = GroupSpec::from_group(&g);
        let json = serde_json::to_string(&spec).unwrap();
        let back: GroupSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back.build().unwrap(), g);
    }

    #[test]
    fn corrupted_table_names_latin_violation() {
        let json = r#"{"names": ["e", "s"], "table": [["e", "s"], ["e", "s"]]}"#;
        let spec: GroupSpec = serde_json::from_str(json).unwrap();
        let err = spec.build().unwrap_err().to_string();
        assert!(err.contains("Latin"), "{err}");
    }

    #[test]
    fn skew_algebra_file_round_trips() {
        let p = Prime::new(5).unwrap();
        let g = Arc::new(FiniteGroup::cyclic(2));
        let a = Arc::new(Algebra::truncated_poly(p, 2));
        let act: ActionSpec = serde_json::from_str(r#"{"generators": {"g1": [[1, 0], [0, 4]]}}"#).unwrap();
        let act = Arc::new(act.build(&g, &a).unwrap());
        let skew = skew_group_algebra(&act).unwrap();
        let json = serde_json::to_string(&AlgebraSpec::from_algebra(&skew.algebra)).unwrap();
        let back: AlgebraSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back.build(p).unwrap(), *skew.algebra);
    }

    #[test]
    fn equivariant_specs() {
        let p = Prime::new(5).unwrap();
        let g = Arc::new(FiniteGroup::cyclic(2));
        let a = Arc::new(Algebra::truncated_poly(p, 2));
        let s = Mat::from_rows(p, &[[1, 0], [0, 4]]).unwrap();
        let act = Arc::new(GroupAction::from_generators(g, a, &[(1, s)]).unwrap());
        let skew = skew_group_algebra(&act).unwrap();
        for json in [
            r#"{"module": {"module": "augmentation"}, "character": 1}"#,
            r#"{"module": {"module": "augmentation"}, "lambda": {"g1": [[4]]}}"#,
            r#"{"induce": {"module": "augmentation"}}"#,
            r#"{"skew_module": {"module": "regular"}}"#,
            r#"{"natural": true}"#,
        ] {
            let spec: EquivariantSpec = serde_json::from_str(json).unwrap();
            let x = spec.build(&skew).unwrap();
            let again = EquivariantSpec::from_equivariant(&x).build(&skew).unwrap();
            assert_eq!(again, x);
        }
    }
}
