//! Stable Hom over the self-injective algebra F5[x]/(x^2) with C2 acting.

use equivar::actions::skew_group_algebra;
use equivar::equivariant::{phi, stable_equivariant_check, EquivariantModule};
use equivar::fixtures::{self, augmentation};
use equivar::groups::characters;

fn main() -> equivar::Result<()> {
    let act = fixtures::c2_dual_numbers();
    let skew = skew_group_algebra(&act)?;
    let chars = characters(act.group(), act.p())?;
    let s = augmentation(act.algebra())?;
    let triv = EquivariantModule::with_character(act.clone(), s.clone(), &chars[0])?;
    let sgn = EquivariantModule::with_character(act.clone(), s.clone(), &chars[1])?;
    let ag = phi(&skew, &skew.algebra.regular_module())?;
    let probes = [s, act.algebra().regular_module()];

    for (label, x, y) in [("S, S", &triv, &triv), ("S, S(x)sgn", &triv, &sgn), ("AG, AG", &ag, &ag)] {
        let r = stable_equivariant_check(&skew, x, y, &probes)?;
        println!("({label}): stable dim over AG {}, invariant stable dim {}", r.skew_stable_dim, r.fixed_stable_dim);
    }
    Ok(())
}
