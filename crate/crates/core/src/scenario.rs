//! Scenario files: inputs plus a list of named checks, run into a report.
//!
//! Inputs are validated before any check runs; a validation failure is an input
//! error, never a check failure.

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::actions::{skew_group_algebra, GroupAction, SkewAlgebra};
use crate::algebras::{hom_space, is_projective, Algebra, Module};
use crate::equivariant::{
    adjunction_check, equivariant_homs, forget, hom_decomposition, hom_g_action, induce, phi, phi_inv, quotient_equivalence_check,
    stable_equivariant_check, subgroup_adjunction_check, trivial_blocks, EquivariantModule,
};
use crate::error::{Error, Result};
use crate::field::{Mat, Prime};
use crate::fixtures;
use crate::groups::{character_group, characters, commutator_subgroup, irreducibles, quotient_group, FiniteGroup, Subgroup};
use crate::homotopy::{
    chain_maps, cone, equivariant_homotopy_check, forget_complex, homotopy_boundary, tr3_average, truncation_check, ChainMap, Complex,
};
use crate::io::{ActionSpec, AlgebraSpec, ComplexSpec, EquivariantSpec, GroupSpec, ModuleSpec};
use crate::reconstruct::{build_instance, character_fourier, morita_witness, phi_iso_check, theta_check, ReconstructionInstance};
use crate::report::{CheckReport, ScenarioReport};

/// Environment variable holding the default seed.
pub const SEED_VAR: &str = "EQUIVAR_SEED";

pub struct CheckInfo {
    pub id: &'static str,
    pub statement: &'static str,
}

pub const CHECKS: &[CheckInfo] = &[
    CheckInfo {
        id: "skew.algebra",
        statement: "AG is associative and unital of dimension dim(A)|G|, satisfies g a = a^(g^-1) g, and its structure-constant file round-trips",
    },
    CheckInfo {
        id: "phi.roundtrip",
        statement: "AG-modules and equivariant A-modules correspond: both composites are the identity on test modules, AG and random AG-modules",
    },
    CheckInfo {
        id: "phi.fixed_points",
        statement: "Hom_AG(M, N) is the G-invariant subspace of Hom_A(M, N) under f.g = L_g^-1 f L_g, on test pairs and random pairs",
    },
    CheckInfo {
        id: "adjunction.scalar",
        statement: "for Ind -| omega, counit after unit is |G| times the identity and M -> omega Ind M -> M is the identity",
    },
    CheckInfo {
        id: "adjunction.subgroup",
        statement: "for H <= G, x -> Ind Res x -> x is [G:H] times the identity and Res x -> Res Ind Res x -> Res x is the identity",
    },
    CheckInfo {
        id: "hom.decomposition",
        statement: "Hom_A(omega x, omega y) has isotypic components of dimension d_rho dim(rho) with d_rho = dim Hom_AG(x (x) rho, y), summing to the whole space",
    },
    CheckInfo {
        id: "projective.transfer",
        statement: "x is projective over AG iff omega x is projective over A; Ind M is projective iff M is",
    },
    CheckInfo {
        id: "stable.compare",
        statement: "over self-injective A, maps factoring through projectives form a G-stable subspace and stable Hom over AG equals the invariant stable Hom over A",
    },
    CheckInfo {
        id: "reconstruct.phi",
        statement: "a g chi -> (b h -> chi(h) a g b h) is an algebra isomorphism from the dual skew algebra onto End_{AG'}(AG)",
    },
    CheckInfo {
        id: "reconstruct.fourier",
        statement: "the character table identifies the sum of characters with k[G/G'], compatibly with counit and comultiplication",
    },
    CheckInfo {
        id: "reconstruct.theta",
        statement: "theta_x: Ind_{G'} Res x -> x (x) k[G/G'] is an equivariant isomorphism, compatible with the counits and natural in x",
    },
    CheckInfo { id: "reconstruct.morita", statement: "AG is projective over AG' and has AG' as a direct summand" },
    CheckInfo {
        id: "homotopy.compare",
        statement: "homotopy classes of chain maps over AG equal the G-invariant homotopy classes over A; null-homotopic maps are G-stable; cones forget to cones",
    },
    CheckInfo {
        id: "homotopy.tr3",
        statement: "averaging a non-equivariant completion of a morphism of triangles over G gives an equivariant completion",
    },
    CheckInfo {
        id: "homotopy.truncate",
        statement: "truncations of complexes of AG-modules commute with forgetting to A, stay equivariant, and have the expected cohomology",
    },
    CheckInfo {
        id: "trivial.blocks",
        statement: "for H acting trivially, the block idempotents of kH split every equivariant module, with no maps between distinct blocks",
    },
    CheckInfo {
        id: "quotient.equivalence",
        statement: "for normal H acting trivially, inflation from G/H lands in the trivial block, preserves Hom spaces and matches the trivial block of Ind",
    },
    CheckInfo { id: "irreducibles.sanity", statement: "the irreducibles over F_p satisfy sum dim^2 = |G| and End = F_p" },
    CheckInfo {
        id: "characters.group",
        statement: "linear characters over F_p are homomorphisms closed under product and inverse, at most [G:G'] of them",
    },
];

pub fn check_info(id: &str) -> Option<&'static CheckInfo> {
    CHECKS.iter().find(|c| c.id == id)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum CheckSpec {
    Id(String),
    Full {
        id: String,
        #[serde(default)]
        seed: Option<u64>,
        #[serde(default)]
        trials: Option<usize>,
    },
}

impl CheckSpec {
    pub fn id(&self) -> &str {
        match self {
            CheckSpec::Id(id) | CheckSpec::Full { id, .. } => id,
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            CheckSpec::Id(_) => None,
            CheckSpec::Full { seed, .. } => *seed,
        }
    }

    fn trials(&self) -> Option<usize> {
        match self {
            CheckSpec::Id(_) => None,
            CheckSpec::Full { trials, .. } => *trials,
        }
    }
}

/// A scenario file. Absent `algebra` means `F_p`, absent `action` the trivial
/// action; absent test objects are replaced by the standard ones.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub p: u64,
    pub group: GroupSpec,
    #[serde(default)]
    pub algebra: Option<AlgebraSpec>,
    #[serde(default)]
    pub action: Option<ActionSpec>,
    /// Declares `A` self-injective; required by `stable.compare`.
    #[serde(default)]
    pub self_injective: bool,
    /// Element names of a subgroup, for `adjunction.subgroup` and `trivial.blocks`.
    #[serde(default)]
    pub subgroup: Option<Vec<String>>,
    /// Element names of a normal subgroup acting trivially, for `quotient.equivalence`.
    #[serde(default)]
    pub normal_subgroup: Option<Vec<String>>,
    /// Test `A`-modules.
    #[serde(default)]
    pub modules: Option<Vec<ModuleSpec>>,
    #[serde(default)]
    pub equivariant: Option<Vec<EquivariantSpec>>,
    #[serde(default)]
    pub complexes: Option<Vec<ComplexSpec>>,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("scenario: {e}")))
    }

    pub fn load(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
        Scenario::from_json(&text)
    }
}

/// Validated inputs shared by all checks.
pub struct Context {
    pub name: String,
    pub action: Arc<GroupAction>,
    pub skew: SkewAlgebra,
    pub self_injective: bool,
    pub subgroup: Option<Subgroup>,
    pub normal_subgroup: Option<Subgroup>,
    pub modules: Vec<(String, Module)>,
    pub equivariant: Vec<(String, EquivariantModule)>,
    pub complexes: Vec<Complex>,
}

fn subgroup_by_names(g: &Arc<FiniteGroup>, names: &[String]) -> Result<Subgroup> {
    let idx = names
        .iter()
        .map(|n| g.index_of(n).ok_or_else(|| Error::Parse(format!("unknown group element {n:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Subgroup::new(g.clone(), idx)
}

impl Context {
    pub fn build(s: &Scenario, seed: u64) -> Result<Context> {
        let p = Prime::new(s.p)?;
        let group = Arc::new(s.group.build()?);
        if p.residue(group.order()) == 0 {
            return Err(Error::Precondition(format!("p divides |G|: p = {p}, |G| = {}", group.order())));
        }
        let algebra = Arc::new(match &s.algebra {
            Some(spec) => spec.build(p)?,
            None => Algebra::field(p),
        });
        let action = Arc::new(match &s.action {
            Some(spec) => spec.build(&group, &algebra)?,
            None => GroupAction::trivial(group.clone(), algebra.clone()),
        });
        let skew = skew_group_algebra(&action)?;
        let subgroup = s.subgroup.as_ref().map(|n| subgroup_by_names(&group, n)).transpose()?;
        let normal_subgroup = s.normal_subgroup.as_ref().map(|n| subgroup_by_names(&group, n)).transpose()?;

        for c in &s.checks {
            let id = c.id();
            if check_info(id).is_none() {
                return Err(Error::Parse(format!("unknown check {id:?}")));
            }
            match id {
                "adjunction.subgroup" if subgroup.is_none() => {
                    return Err(Error::Parse("adjunction.subgroup needs a \"subgroup\"".into()));
                }
                "trivial.blocks" => {
                    let h = subgroup.clone().unwrap_or_else(|| Subgroup::whole(group.clone()));
                    if !action.is_trivial_on(h.elements()) {
                        return Err(Error::Precondition("trivial.blocks: the subgroup does not act trivially on A".into()));
                    }
                }
                "quotient.equivalence" => {
                    let n =
                        normal_subgroup.as_ref().ok_or_else(|| Error::Parse("quotient.equivalence needs a \"normal_subgroup\"".into()))?;
                    if !n.is_normal() {
                        return Err(Error::Precondition("quotient.equivalence: the subgroup is not normal".into()));
                    }
                    if !action.is_trivial_on(n.elements()) {
                        return Err(Error::Precondition("quotient.equivalence: the normal subgroup does not act trivially on A".into()));
                    }
                }
                _ => {}
            }
        }

        let modules = match &s.modules {
            Some(specs) => specs.iter().enumerate().map(|(k, m)| Ok((format!("m{k}"), m.build(&algebra)?))).collect::<Result<Vec<_>>>()?,
            None => {
                let mut v = Vec::new();
                if let Ok(aug) = fixtures::augmentation(&algebra) {
                    v.push(("S".to_string(), aug));
                }
                if algebra.dim() > 1 {
                    v.push(("A".to_string(), algebra.regular_module()));
                }
                v
            }
        };
        let equivariant = match &s.equivariant {
            Some(specs) => specs.iter().enumerate().map(|(k, x)| Ok((format!("x{k}"), x.build(&skew)?))).collect::<Result<Vec<_>>>()?,
            None => fixtures::test_equivariant(&action)?,
        };
        let complexes = match &s.complexes {
            Some(specs) => specs.iter().map(|c| c.build(&skew)).collect::<Result<Vec<_>>>()?,
            None => fixtures::test_complexes(&skew, &mut ChaCha8Rng::seed_from_u64(seed))?,
        };
        Ok(Context {
            name: s.name.clone(),
            action,
            skew,
            self_injective: s.self_injective,
            subgroup,
            normal_subgroup,
            modules,
            equivariant,
            complexes,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.action.group()
    }

    pub fn p(&self) -> Prime {
        self.action.p()
    }
}

struct Params {
    seed: u64,
    trials: Option<usize>,
}

enum Outcome {
    Pass(Value),
    Fail(Value, String),
    Skip(String),
}

fn verdict(ok: bool, details: Value, witness: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Pass(details)
    } else {
        Outcome::Fail(details, witness())
    }
}

/// Runs one check; errors raised by the underlying operations become failures
/// whose witness is the error message.
pub fn run_check(ctx: &Context, spec: &CheckSpec, default_seed: u64) -> CheckReport {
    let id = spec.id();
    let params = Params { seed: spec.seed().unwrap_or(default_seed), trials: spec.trials() };
    let outcome = match id {
        "skew.algebra" => skew_algebra(ctx),
        "phi.roundtrip" => phi_roundtrip(ctx, &params),
        "phi.fixed_points" => phi_fixed_points(ctx, &params),
        "adjunction.scalar" => adjunction_scalar(ctx),
        "adjunction.subgroup" => adjunction_subgroup(ctx),
        "hom.decomposition" => hom_decomp(ctx, &params),
        "projective.transfer" => projective_transfer(ctx),
        "stable.compare" => stable_compare(ctx),
        "reconstruct.phi" => with_instance(ctx, |inst| {
            let r = phi_iso_check(inst)?;
            let d = json!({"dim": r.dim, "end_dim": r.end_dim, "rank": r.rank, "multiplicative": r.multiplicative, "unital": r.unital});
            Ok(verdict(r.passed(), d, || r.witness.clone().unwrap_or_else(|| format!("rank {} of {}", r.rank, r.dim))))
        }),
        "reconstruct.fourier" => with_instance(ctx, |inst| {
            let r = character_fourier(inst)?;
            let d = json!({"char_matrix": r.char_matrix.to_rows(), "alpha": r.alpha.to_rows(), "intertwines": r.intertwines,
                "normalized": r.normalized, "counit": r.counit, "comultiplication": r.comultiplication});
            Ok(verdict(r.passed(), d, || {
                format!("character rank {}, counit {}, comultiplication {}", r.char_rank, r.counit, r.comultiplication)
            }))
        }),
        "reconstruct.theta" => with_instance(ctx, |inst| reconstruct_theta(ctx, inst)),
        "reconstruct.morita" => with_instance(ctx, |inst| {
            let r = morita_witness(inst)?;
            let rank = r.retraction.as_ref().map(|m| m.rank());
            let d = json!({"projective": r.projective, "generator": r.generator, "retraction_rank": rank});
            Ok(verdict(r.passed(), d, || format!("projective {}, generator {}", r.projective, r.generator)))
        }),
        "homotopy.compare" => homotopy_compare(ctx),
        "homotopy.tr3" => homotopy_tr3(ctx, &params),
        "homotopy.truncate" => homotopy_truncate(ctx),
        "trivial.blocks" => blocks(ctx, &params),
        "quotient.equivalence" => quotient(ctx, &params),
        "irreducibles.sanity" => irreducibles_sanity(ctx, &params),
        "characters.group" => characters_group(ctx),
        other => Err(Error::Parse(format!("unknown check {other:?}"))),
    };
    match outcome {
        Ok(Outcome::Pass(d)) => CheckReport::pass(id, d),
        Ok(Outcome::Fail(d, w)) => CheckReport::fail(id, d, w),
        Ok(Outcome::Skip(reason)) => CheckReport::skipped(id, reason),
        Err(e) => CheckReport::fail(id, Value::Null, e.to_string()),
    }
}

/// Runs every check of the scenario concurrently; reports are ordered by check id
/// (ties keep scenario order).
pub fn run_scenario(s: &Scenario, seed: u64, timings: bool) -> Result<ScenarioReport> {
    let ctx = Context::build(s, seed)?;
    let mut checks: Vec<CheckReport> = std::thread::scope(|scope| {
        let handles: Vec<_> = s
            .checks
            .iter()
            .map(|c| {
                let ctx = &ctx;
                scope.spawn(move || {
                    let start = Instant::now();
                    let mut r = run_check(ctx, c, seed);
                    if timings {
                        r.elapsed_ms = Some(start.elapsed().as_millis() as u64);
                    }
                    r
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("check thread panicked")).collect()
    });
    checks.sort_by(|a, b| a.check.cmp(&b.check));
    Ok(ScenarioReport { scenario: s.name.clone(), seed, checks })
}

fn labelled_pairs<T>(v: &[(String, T)]) -> impl Iterator<Item = (&(String, T), &(String, T))> {
    v.iter().flat_map(move |a| v.iter().map(move |b| (a, b)))
}

fn skew_algebra(ctx: &Context) -> Result<Outcome> {
    let skew = &ctx.skew;
    let act = &ctx.action;
    let g = ctx.group();
    let d = act.algebra().dim();
    let alg = &skew.algebra;
    let mut witness = None;
    for h in g.elements() {
        for i in 0..d {
            let b = act.algebra().basis_vec(i);
            let lhs = alg.mul(&skew.group_element(h), &skew.embed_base(&b));
            let rhs = alg.mul(&skew.embed_base(&act.apply(&b, g.inv(h))), &skew.group_element(h));
            if lhs != rhs && witness.is_none() {
                witness = Some(format!("g a != a^(g^-1) g for g = {}, a = {}", g.name(h), act.algebra().basis_names()[i]));
            }
        }
    }
    let reloaded = AlgebraSpec::from_algebra(alg).build(ctx.p())?;
    if reloaded != **alg && witness.is_none() {
        witness = Some("structure-constant file does not reload to the same algebra".into());
    }
    if alg.dim() != d * g.order() && witness.is_none() {
        witness = Some(format!("dim AG = {} != {} * {}", alg.dim(), d, g.order()));
    }
    let details = json!({"dim": alg.dim(), "base_dim": d, "group_order": g.order()});
    Ok(match witness {
        None => Outcome::Pass(details),
        Some(w) => Outcome::Fail(details, w),
    })
}

fn random_modules(ctx: &Context, count: usize, seed: u64) -> Result<Vec<Module>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| fixtures::random_skew_module(&ctx.skew, 6, &mut rng)).collect()
}

fn phi_roundtrip(ctx: &Context, params: &Params) -> Result<Outcome> {
    let skew = &ctx.skew;
    for (label, x) in &ctx.equivariant {
        if &phi(skew, &phi_inv(skew, x)?)? != x {
            return Ok(Outcome::Fail(json!({"module": label}), format!("phi(phi_inv({label})) != {label}")));
        }
    }
    let mut randoms = random_modules(ctx, params.trials.unwrap_or(10), params.seed)?;
    randoms.push(skew.algebra.regular_module());
    for (k, m) in randoms.iter().enumerate() {
        if &phi_inv(skew, &phi(skew, m)?)? != m {
            return Ok(Outcome::Fail(json!({"random_module": k}), format!("phi_inv(phi(M)) != M for skew module {k} (dim {})", m.dim())));
        }
    }
    Ok(Outcome::Pass(json!({
        "equivariant_modules": ctx.equivariant.len(),
        "skew_modules": randoms.len(),
        "skew_dims": randoms.iter().map(Module::dim).collect::<Vec<_>>(),
    })))
}

fn flat(p: Prime, cols: usize, ms: &[Mat]) -> Mat {
    let rows: Vec<Mat> = ms.iter().map(|m| Mat::row_vector(p, m.data())).collect();
    let refs: Vec<&Mat> = rows.iter().collect();
    if refs.is_empty() {
        Mat::zeros(p, 0, cols)
    } else {
        Mat::vstack(&refs)
    }
}

/// `(dim Hom_AG, dim of invariants, same subspace)`.
fn fixed_point_comparison(skew: &SkewAlgebra, x: &EquivariantModule, y: &EquivariantModule) -> Result<(usize, usize, bool)> {
    let p = x.p();
    let cols = x.dim() * y.dim();
    let fixed = hom_g_action(x, y)?.fixed;
    let skew_homs = hom_space(&phi_inv(skew, x)?, &phi_inv(skew, y)?)?;
    let (a, b) = (flat(p, cols, &fixed), flat(p, cols, &skew_homs));
    let joint = Mat::vstack(&[&a, &b]).rank();
    Ok((skew_homs.len(), fixed.len(), joint == skew_homs.len() && joint == fixed.len()))
}

fn phi_fixed_points(ctx: &Context, params: &Params) -> Result<Outcome> {
    let skew = &ctx.skew;
    let mut dims = Vec::new();
    for ((lx, x), (ly, y)) in labelled_pairs(&ctx.equivariant) {
        let (s, f, same) = fixed_point_comparison(skew, x, y)?;
        dims.push(json!([lx, ly, s]));
        if !same {
            return Ok(Outcome::Fail(
                json!({"pair": [lx, ly]}),
                format!("Hom_AG({lx}, {ly}) has dim {s}, invariants {f}, same span {same}"),
            ));
        }
    }
    let randoms = random_modules(ctx, 2 * params.trials.unwrap_or(20), params.seed)?;
    let mut random_dims = Vec::new();
    for (k, pair) in randoms.chunks(2).enumerate() {
        let (x, y) = (phi(skew, &pair[0])?, phi(skew, &pair[1])?);
        let (s, f, same) = fixed_point_comparison(skew, &x, &y)?;
        random_dims.push(s);
        if !same {
            return Ok(Outcome::Fail(
                json!({"random_pair": k}),
                format!("random pair {k}: Hom_AG dim {s}, invariants {f}, same span {same}"),
            ));
        }
    }
    Ok(Outcome::Pass(json!({"pairs": dims.len(), "random_pairs": random_dims.len(), "random_hom_dims": random_dims, "hom_dims": dims})))
}

fn adjunction_scalar(ctx: &Context) -> Result<Outcome> {
    let want = ctx.p().residue(ctx.group().order());
    let mut scalars = Vec::new();
    for (label, x) in &ctx.equivariant {
        let r = adjunction_check(x)?;
        scalars.push(json!([label, r.scalar]));
        if r.scalar != want || !r.omega_identity {
            return Ok(Outcome::Fail(
                json!({"module": label}),
                format!("{label}: counit o unit = {} Id (want {want}), omega composite identity {}", r.scalar, r.omega_identity),
            ));
        }
    }
    Ok(Outcome::Pass(json!({"group_order_mod_p": want, "scalars": scalars})))
}

fn adjunction_subgroup(ctx: &Context) -> Result<Outcome> {
    let h = ctx.subgroup.as_ref().expect("validated on load");
    let want = ctx.p().residue(h.index());
    let mut scalars = Vec::new();
    for (label, x) in &ctx.equivariant {
        let r = subgroup_adjunction_check(x, h)?;
        scalars.push(json!([label, r.scalar]));
        if r.scalar != want || !r.res_ind_identity {
            return Ok(Outcome::Fail(json!({"module": label}), format!("{label}: Ind Res composite {} Id (want {want})", r.scalar)));
        }
    }
    Ok(Outcome::Pass(json!({"index": h.index(), "index_mod_p": want, "scalars": scalars})))
}

fn hom_decomp(ctx: &Context, params: &Params) -> Result<Outcome> {
    let irreps = irreducibles(ctx.group(), ctx.p(), params.seed)?;
    let mut rows = Vec::new();
    for ((lx, x), (ly, y)) in labelled_pairs(&ctx.equivariant) {
        let r = hom_decomposition(x, y, &irreps)?;
        let total: usize = r.multiplicities.iter().zip(&r.irrep_dims).map(|(m, d)| m * d).sum();
        rows.push(json!({"pair": [lx, ly], "hom_dim": r.hom_dim, "multiplicities": r.multiplicities}));
        if total != r.hom_dim {
            return Ok(Outcome::Fail(json!({"pair": [lx, ly]}), format!("sum d_rho dim rho = {total} != dim Hom_A = {}", r.hom_dim)));
        }
    }
    let dims: Vec<usize> = irreps.iter().map(|i| i.rep.dim).collect();
    Ok(Outcome::Pass(json!({"irrep_dims": dims, "pairs": rows.len(), "decompositions": rows})))
}

fn projective_transfer(ctx: &Context) -> Result<Outcome> {
    let skew = &ctx.skew;
    let mut rows = Vec::new();
    for (label, x) in &ctx.equivariant {
        let over_skew = is_projective(&phi_inv(skew, x)?).projective;
        let over_a = is_projective(&forget(x)).projective;
        rows.push(json!([label, over_skew]));
        if over_skew != over_a {
            return Ok(Outcome::Fail(json!({"module": label}), format!("{label}: projective over AG {over_skew}, over A {over_a}")));
        }
    }
    let mut induced = Vec::new();
    for (label, m) in &ctx.modules {
        let proj_m = is_projective(m).projective;
        let proj_ind = is_projective(&phi_inv(skew, &induce(&ctx.action, m)?)?).projective;
        induced.push(json!([label, proj_m, proj_ind]));
        if proj_m != proj_ind {
            return Ok(Outcome::Fail(
                json!({"module": label}),
                format!("{label} projective {proj_m} but Ind({label}) projective {proj_ind}"),
            ));
        }
    }
    Ok(Outcome::Pass(json!({"projective": rows, "induced": induced})))
}

fn stable_compare(ctx: &Context) -> Result<Outcome> {
    if !ctx.self_injective {
        return Ok(Outcome::Skip("the algebra is not declared self-injective".into()));
    }
    let probes: Vec<Module> = ctx.modules.iter().map(|(_, m)| m.clone()).collect();
    let mut rows = Vec::new();
    for ((lx, x), (ly, y)) in labelled_pairs(&ctx.equivariant) {
        let r = stable_equivariant_check(&ctx.skew, x, y, &probes)?;
        rows.push(json!([lx, ly, r.skew_stable_dim]));
        if !r.passed() {
            return Ok(Outcome::Fail(
                json!({"pair": [lx, ly]}),
                format!(
                    "({lx}, {ly}): stable dim over AG {}, invariant stable dim over A {}, factoring maps G-stable {}",
                    r.skew_stable_dim, r.fixed_stable_dim, r.factoring_g_stable
                ),
            ));
        }
    }
    Ok(Outcome::Pass(json!({"pairs": rows.len(), "stable_dims": rows})))
}

fn with_instance(ctx: &Context, f: impl FnOnce(&ReconstructionInstance) -> Result<Outcome>) -> Result<Outcome> {
    match build_instance(&ctx.action) {
        Ok(inst) => f(&inst),
        Err(Error::Precondition(msg)) => Ok(Outcome::Skip(msg)),
        Err(e) => Err(e),
    }
}

fn reconstruct_theta(ctx: &Context, inst: &ReconstructionInstance) -> Result<Outcome> {
    let tests: Vec<EquivariantModule> = ctx.equivariant.iter().map(|(_, x)| x.clone()).collect();
    let mut morphisms = Vec::new();
    for (s, x) in tests.iter().enumerate() {
        for (t, y) in tests.iter().enumerate() {
            if let Some(h) = equivariant_homs(x, y)?.into_iter().next() {
                morphisms.push((s, t, h));
            }
        }
    }
    let r = theta_check(inst, &tests, &morphisms)?;
    let details = json!({"modules": r.modules.len(), "morphisms": r.naturality.len()});
    let bad = r.modules.iter().position(|m| !(m.morphism && m.invertible && m.counit));
    let unnatural = r.naturality.iter().position(|&b| !b);
    Ok(verdict(r.passed(), details, || match (bad, unnatural) {
        (Some(k), _) => format!("theta fails on {}", ctx.equivariant[k].0),
        (None, Some(k)) => format!("theta not natural along test morphism {} -> {}", morphisms[k].0, morphisms[k].1),
        _ => "theta check failed".into(),
    }))
}

fn homotopy_compare(ctx: &Context) -> Result<Outcome> {
    let mut rows = Vec::new();
    for (i, x) in ctx.complexes.iter().enumerate() {
        for (j, y) in ctx.complexes.iter().enumerate() {
            let r = equivariant_homotopy_check(&ctx.skew, x, y)?;
            rows.push(json!([i, j, r.skew_dims.k_dim]));
            if !r.passed() {
                return Ok(Outcome::Fail(
                    json!({"pair": [i, j]}),
                    format!(
                        "complexes ({i}, {j}): K over AG {}, invariant K over A {}, null-homotopic G-stable {}, cones forget {}",
                        r.skew_dims.k_dim, r.fixed_k_dim, r.null_g_stable, r.cones_forget
                    ),
                ));
            }
        }
    }
    Ok(Outcome::Pass(json!({"pairs": rows.len(), "k_dims": rows})))
}

/// For `a: X -> Y` over `AG`, `a' = c a`, `u = 1`, `v = c`, the completion
/// `diag(1, c)` on cones perturbed by a random non-equivariant null-homotopy is
/// averaged and checked.
fn homotopy_tr3(ctx: &Context, params: &Params) -> Result<Outcome> {
    let skew = &ctx.skew;
    let p = ctx.p();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let budget = params.trials.unwrap_or(4);
    let mut rows = Vec::new();
    'outer: for (i, x) in ctx.complexes.iter().enumerate() {
        for (j, y) in ctx.complexes.iter().enumerate() {
            if rows.len() >= budget {
                break 'outer;
            }
            let basis = chain_maps(x, y)?;
            if basis.is_empty() {
                continue;
            }
            let mut a = ChainMap::zero(x, y);
            while a == ChainMap::zero(x, y) {
                a = basis.iter().fold(ChainMap::zero(x, y), |acc, f| acc.add(&f.scale(rng.gen_range(0..p.get()))).expect("same complexes"));
            }
            let c = rng.gen_range(1..p.get());
            let a2 = a.scale(c);
            let (u, v) = (ChainMap::identity(x), ChainMap::identity(y).scale(c));
            let (ca, ca2) = (forget_complex(skew, &cone(&a)?)?.complex, forget_complex(skew, &cone(&a2)?)?.complex);
            let base = ChainMap::from_degrees(&ca, &ca2, |n| {
                let (dx, dy) = (x.dim(n + 1), y.dim(n));
                Mat::block_diag(p, &[&Mat::identity(p, dx), &Mat::scalar(p, dy, c)])
            })?;
            let mut h = Vec::new();
            for m in ca.lo()..=ca.end() {
                let homs = hom_space(&ca.term(m), &ca2.term(m - 1))?;
                if !homs.is_empty() {
                    h.push((m, fixtures::random_combination(p, ca.dim(m), ca2.dim(m - 1), &homs, &mut rng)));
                }
            }
            let r = base.add(&homotopy_boundary(&ca, &ca2, &h)?)?;
            let out = tr3_average(skew, &a, &a2, &u, &v, &r)?;
            let moved = (ca.lo()..ca.end()).any(|n| out.w.component(n) != r.component(n));
            rows.push(json!({"pair": [i, j], "fixed": out.fixed, "completes": out.completes, "average_differs_from_r": moved}));
            if !(out.fixed && out.completes) {
                return Ok(Outcome::Fail(
                    json!({"pair": [i, j]}),
                    format!("complexes ({i}, {j}): average fixed {}, completes {}", out.fixed, out.completes),
                ));
            }
        }
    }
    if rows.is_empty() {
        return Ok(Outcome::Skip("no non-zero chain maps between test complexes".into()));
    }
    Ok(Outcome::Pass(json!({"triangles": rows.len(), "results": rows})))
}

fn homotopy_truncate(ctx: &Context) -> Result<Outcome> {
    let mut count = 0;
    for (i, x) in ctx.complexes.iter().enumerate() {
        for n in x.lo() - 1..=x.end() {
            let r = truncation_check(&ctx.skew, x, n)?;
            count += 1;
            if !r.passed() {
                return Ok(Outcome::Fail(
                    json!({"complex": i, "degree": n}),
                    format!(
                        "complex {i}, degree {n}: equivariant {}, commutes with forget {}, cohomology {} {}",
                        r.equivariant, r.commutes_with_forget, r.cohomology_le, r.cohomology_ge
                    ),
                ));
            }
        }
    }
    Ok(Outcome::Pass(json!({"complexes": ctx.complexes.len(), "truncations": count})))
}

fn blocks(ctx: &Context, params: &Params) -> Result<Outcome> {
    let h = ctx.subgroup.clone().unwrap_or_else(|| Subgroup::whole(ctx.group().clone()));
    let irreps = irreducibles(&h.as_group().0, ctx.p(), params.seed)?;
    let mut rows = Vec::new();
    for (label, x) in &ctx.equivariant {
        let b = trivial_blocks(x, &h, &irreps)?;
        rows.push(json!([label, b.dims()]));
        if !b.passed() {
            let cross: Vec<_> = b.cross_hom_dims.iter().filter(|c| c.2 != 0).collect();
            return Ok(Outcome::Fail(
                json!({"module": label}),
                format!("{label}: reassembles {}, non-zero cross homs {cross:?}", b.reassembles),
            ));
        }
    }
    Ok(Outcome::Pass(json!({"subgroup_order": h.order(), "block_dims": rows})))
}

fn quotient(ctx: &Context, params: &Params) -> Result<Outcome> {
    let n = ctx.normal_subgroup.as_ref().expect("validated on load");
    let q = quotient_group(n)?;
    let sigma = q.reps.iter().map(|&r| ctx.action.sigma(r).clone()).collect();
    let q_action = Arc::new(GroupAction::new(q.group.clone(), ctx.action.algebra().clone(), sigma)?);
    let irreps = irreducibles(&n.as_group().0, ctx.p(), params.seed)?;
    let tests = fixtures::test_equivariant(&q_action)?;
    let test_eq: Vec<EquivariantModule> = tests.iter().map(|(_, x)| x.clone()).collect();
    let test_mods: Vec<Module> = ctx.modules.iter().map(|(_, m)| m.clone()).collect();
    let r = quotient_equivalence_check(&q_action, &q, n, &irreps, &test_mods, &test_eq, params.trials.unwrap_or(10), params.seed)?;
    let details = json!({
        "quotient_order": q.group.order(),
        "test_equivariant": tests.iter().map(|(l, _)| l.clone()).collect::<Vec<_>>(),
        "in_trivial_block": r.in_trivial_block,
        "hom_comparisons": r.hom_comparisons.len(),
        "induction_isos": r.induction_isos,
    });
    Ok(verdict(r.passed(), details, || {
        if let Some(k) = r.in_trivial_block.iter().position(|&b| !b) {
            format!("inflation of {} leaves the trivial block", tests[k].0)
        } else if let Some(k) = r.hom_comparisons.iter().position(|&(a, b, s)| a != b || !s) {
            let (a, b, _) = r.hom_comparisons[k];
            format!("Hom comparison {k}: dim over G/H {a}, over G {b}")
        } else {
            let k = r.induction_isos.iter().position(|&b| !b).unwrap_or(0);
            format!("trivial block of Ind({}) not isomorphic to inflated Ind", ctx.modules[k].0)
        }
    }))
}

fn irreducibles_sanity(ctx: &Context, params: &Params) -> Result<Outcome> {
    let mut groups = vec![("G".to_string(), ctx.group().clone())];
    if let Some(h) = &ctx.subgroup {
        groups.push(("H".to_string(), h.as_group().0));
    }
    let mut out = serde_json::Map::new();
    for (label, g) in groups {
        let irreps = irreducibles(&g, ctx.p(), params.seed)?;
        let dims: Vec<usize> = irreps.iter().map(|i| i.rep.dim).collect();
        let sum: usize = dims.iter().map(|d| d * d).sum();
        let ends: Vec<usize> = irreps.iter().map(|i| i.rep.endomorphism_dim()).collect();
        out.insert(label.clone(), json!({"dims": dims, "end_dims": ends}));
        if sum != g.order() || ends.iter().any(|&e| e != 1) {
            return Ok(Outcome::Fail(
                Value::Object(out),
                format!("{label}: sum dim^2 = {sum} (|{label}| = {}), End dims {ends:?}", g.order()),
            ));
        }
    }
    Ok(Outcome::Pass(Value::Object(out)))
}

fn characters_group(ctx: &Context) -> Result<Outcome> {
    let g = ctx.group();
    let chars = characters(g, ctx.p())?;
    let index = commutator_subgroup(g).index();
    let find = |c: &crate::groups::Character| chars.iter().position(|d| d == c);
    let mut witness = None;
    if !chars.first().is_some_and(|c| c.is_trivial()) {
        witness = Some("the trivial character is missing".to_string());
    }
    for (i, a) in chars.iter().enumerate() {
        if !a.is_homomorphism() {
            witness.get_or_insert(format!("character {i} is not a homomorphism"));
        }
        if find(&a.inverse()).is_none() {
            witness.get_or_insert(format!("inverse of character {i} is missing"));
        }
        for (j, b) in chars.iter().enumerate() {
            if find(&a.product(b)).is_none() {
                witness.get_or_insert(format!("product of characters {i} and {j} is missing"));
            }
        }
    }
    if chars.len() > index {
        witness.get_or_insert(format!("{} characters exceed [G:G'] = {index}", chars.len()));
    }
    if witness.is_none() {
        character_group(&chars)?;
    }
    let values: Vec<Vec<u32>> = chars.iter().map(|c| c.values.clone()).collect();
    let details = json!({"count": chars.len(), "abelianization_order": index, "values": values});
    Ok(match witness {
        None => Outcome::Pass(details),
        Some(w) => Outcome::Fail(details, w),
    })
}

/// Artifacts derived from a scenario's inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitKind {
    /// Structure constants of `AG`, loadable as an algebra.
    Skew,
    /// Dimensions and matrices of the irreducible representations of `G`.
    Irr,
    /// Value table of the linear characters of `G`.
    Characters,
    /// Trivial-action block dimensions of the equivariant test modules.
    Blocks,
}

impl std::str::FromStr for EmitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "skew" => Ok(EmitKind::Skew),
            "irr" => Ok(EmitKind::Irr),
            "characters" => Ok(EmitKind::Characters),
            "blocks" => Ok(EmitKind::Blocks),
            other => Err(Error::Parse(format!("unknown artifact kind {other:?}; expected skew, irr, characters or blocks"))),
        }
    }
}

pub fn emit(kind: EmitKind, s: &Scenario, seed: u64) -> Result<Value> {
    let ctx = Context::build(s, seed)?;
    let g = ctx.group();
    let p = ctx.p();
    let names = g.names().to_vec();
    Ok(match kind {
        EmitKind::Skew => serde_json::to_value(AlgebraSpec::from_algebra(&ctx.skew.algebra)).expect("algebra serializes"),
        EmitKind::Irr => {
            let irreps = irreducibles(g, p, seed)?;
            let reps: Vec<Value> = irreps
                .iter()
                .map(|i| {
                    let mats: serde_json::Map<String, Value> =
                        g.elements().map(|h| (names[h].clone(), json!(i.rep.matrix(h).to_rows()))).collect();
                    json!({"dim": i.rep.dim, "matrices": mats})
                })
                .collect();
            json!({"p": p.get(), "group_order": g.order(), "dims": irreps.iter().map(|i| i.rep.dim).collect::<Vec<_>>(), "irreducibles": reps})
        }
        EmitKind::Characters => {
            let chars = characters(g, p)?;
            let values: Vec<Vec<u32>> = chars.iter().map(|c| c.values.clone()).collect();
            json!({"p": p.get(), "elements": names, "values": values})
        }
        EmitKind::Blocks => {
            let h = ctx.subgroup.clone().unwrap_or_else(|| Subgroup::whole(g.clone()));
            if !ctx.action.is_trivial_on(h.elements()) {
                return Err(Error::Precondition("the subgroup does not act trivially on A".into()));
            }
            let irreps = irreducibles(&h.as_group().0, p, seed)?;
            let mut modules = serde_json::Map::new();
            for (label, x) in &ctx.equivariant {
                modules.insert(label.clone(), json!(trivial_blocks(x, &h, &irreps)?.dims()));
            }
            let sub: Vec<&str> = h.elements().iter().map(|&e| g.name(e)).collect();
            json!({"subgroup": sub, "irrep_dims": irreps.iter().map(|i| i.rep.dim).collect::<Vec<_>>(), "block_dims": modules})
        }
    })
}

/// Default seed: `EQUIVAR_SEED` when set and numeric, else 0.
pub fn default_seed() -> Result<u64> {
    match std::env::var(SEED_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| Error::Parse(format!("{SEED_VAR}={v:?} is not a non-negative integer"))),
        Err(_) => Ok(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const C2: &str = r#"{
        "name": "c2",
        "p": 5,
        "group": {"family": "cyclic", "n": 2},
        "algebra": {"family": "truncated_poly", "n": 2},
        "action": {"generators": {"g1": [[1, 0], [0, 4]]}},
        "self_injective": true,
        "checks": ["skew.algebra", {"id": "phi.roundtrip", "trials": 3}, "adjunction.scalar"]
    }"#;

    #[test]
    fn runs_and_orders_by_id() {
        let s = Scenario::from_json(C2).unwrap();
        let r = run_scenario(&s, 1, false).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        let ids: Vec<&str> = r.checks.iter().map(|c| c.check.as_str()).collect();
        assert_eq!(ids, ["adjunction.scalar", "phi.roundtrip", "skew.algebra"]);
        assert_eq!(r.checks[2].details["dim"], 4);
    }

    #[test]
    fn p_dividing_the_order_is_an_input_error() {
        let s = Scenario::from_json(&C2.replace("\"p\": 5", "\"p\": 2").replace("[[1, 0], [0, 4]]", "[[1, 0], [0, 1]]")).unwrap();
        let err = Context::build(&s, 0).err().unwrap();
        assert!(err.to_string().contains("p divides |G|"), "{err}");
    }

    #[test]
    fn unknown_checks_are_rejected() {
        let s = Scenario::from_json(&C2.replace("skew.algebra", "skew.nonsense")).unwrap();
        assert!(Context::build(&s, 0).is_err());
    }

    #[test]
    fn emitted_skew_reloads() {
        let s = Scenario::from_json(C2).unwrap();
        let v = emit(EmitKind::Skew, &s, 0).unwrap();
        let spec: AlgebraSpec = serde_json::from_value(v).unwrap();
        assert_eq!(spec.build(Prime::new(5).unwrap()).unwrap().dim(), 4);
    }

    #[test]
    fn emitted_tables() {
        let s3 = r#"{"name": "s3", "p": 7, "group": {"family": "symmetric", "n": 3}}"#;
        let v = emit(EmitKind::Irr, &Scenario::from_json(s3).unwrap(), 0).unwrap();
        assert_eq!(v["dims"], json!([1, 1, 2]));
        let c3 = r#"{"name": "c3", "p": 7, "group": {"family": "cyclic", "n": 3}}"#;
        let v = emit(EmitKind::Characters, &Scenario::from_json(c3).unwrap(), 0).unwrap();
        let mut rows: Vec<Vec<u64>> = serde_json::from_value(v["values"].clone()).unwrap();
        rows.sort();
        assert_eq!(rows, [vec![1, 1, 1], vec![1, 2, 4], vec![1, 4, 2]]);
    }

    #[test]
    fn every_check_is_listed() {
        let ids: std::collections::BTreeSet<&str> = CHECKS.iter().map(|c| c.id).collect();
        assert_eq!(ids.len(), CHECKS.len());
    }
}
