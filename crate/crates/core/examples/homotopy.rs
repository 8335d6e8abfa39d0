//! Complexes over AG: homotopy classes, averaged cone maps and truncations.

use equivar::actions::skew_group_algebra;
use equivar::equivariant::{phi_inv, twist_by_character};
use equivar::fixtures::{self, natural};
use equivar::groups::characters;
use equivar::homotopy::{cone, equivariant_homotopy_check, homotopy_hom_dim, truncate, truncation_check, ChainMap, Complex};

fn main() -> equivar::Result<()> {
    let act = fixtures::c2_dual_numbers();
    let skew = skew_group_algebra(&act)?;
    let chars = characters(act.group(), act.p())?;

    // A --x--> A(x)sgn, multiplication by x made equivariant by the sign twist
    let a = natural(&act);
    let a_sgn = twist_by_character(&a, &chars[1])?;
    let d = act.algebra().left_mult(&[0, 1]);
    let x = Complex::new(skew.algebra.clone(), 0, vec![phi_inv(&skew, &a)?, phi_inv(&skew, &a_sgn)?], vec![d])?;
    println!("cohomology dims: H^0 = {}, H^1 = {}", x.cohomology_dim(0), x.cohomology_dim(1));

    let dims = homotopy_hom_dim(&x, &x)?;
    println!("End in K(AG): chain maps {}, null-homotopic {}, classes {}", dims.chain_map_dim, dims.nullhomotopic_dim, dims.k_dim);
    let cmp = equivariant_homotopy_check(&skew, &x, &x)?;
    println!("invariant classes over A: {}", cmp.fixed_k_dim);

    let c = cone(&ChainMap::identity(&x))?;
    println!("cone of the identity has End in K of dim {}", homotopy_hom_dim(&c, &c)?.k_dim);

    let t = truncate(&x, 0)?;
    println!("tau<=0 has dims {:?}", (t.le.lo()..t.le.end()).map(|n| t.le.dim(n)).collect::<Vec<_>>());
    println!("truncation commutes with forgetting: {}", truncation_check(&skew, &x, 0)?.passed());
    Ok(())
}
