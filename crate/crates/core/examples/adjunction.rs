//! Induction is adjoint to forgetting on both sides; the round trip is |G|.

use equivar::equivariant::{adjunction_check, subgroup_adjunction_check};
use equivar::fixtures::{self, test_equivariant};
use equivar::groups::commutator_subgroup;

fn main() -> equivar::Result<()> {
    for act in [fixtures::c2_dual_numbers(), fixtures::c4_dual_numbers(), fixtures::s3_trivial()] {
        println!("|G| = {}, p = {}", act.group().order(), act.p());
        for (name, x) in test_equivariant(&act)? {
            let r = adjunction_check(&x)?;
            println!("  {name:<10} counit o unit = {} * id, forget side identity: {}", r.scalar, r.omega_identity);
        }
    }

    let act = fixtures::s3_trivial();
    let a3 = commutator_subgroup(act.group());
    for (name, x) in test_equivariant(&act)? {
        let r = subgroup_adjunction_check(&x, &a3)?;
        println!("S3 over A3, {name}: scalar {}", r.scalar);
    }
    Ok(())
}
