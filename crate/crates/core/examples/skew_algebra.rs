//! The skew group algebra of C2 acting on F5[x]/(x^2) by x -> -x.

use equivar::actions::{char_dual_action, skew_group_algebra};
use equivar::fixtures;
use equivar::groups::characters;

fn main() -> equivar::Result<()> {
    let act = fixtures::c2_dual_numbers();
    let skew = skew_group_algebra(&act)?;
    let alg = &skew.algebra;
    println!("AG has dimension {} with basis {:?}", alg.dim(), alg.basis_names());

    // g x g^-1 = x^(g^-1) = -x
    let g = skew.group_element(1);
    let x = skew.embed_base(&[0, 1]);
    let conj = alg.mul(&alg.mul(&g, &x), &skew.group_element(act.group().inv(1)));
    println!("g x g^-1 = {conj:?}");

    let chars = characters(act.group(), act.p())?;
    let dual = char_dual_action(&skew, &chars)?;
    println!("the character group (order {}) acts on AG by automorphisms", dual.group().order());
    for chi in dual.group().elements() {
        println!("  sigma_{chi} on g = {:?}", dual.apply(&g, chi));
    }
    Ok(())
}
