//! Hom_A between equivariant modules splits by irreducible representations of G.

use equivar::equivariant::hom_decomposition;
use equivar::fixtures::{self, test_equivariant};
use equivar::groups::irreducibles;

fn main() -> equivar::Result<()> {
    let act = fixtures::s3_sign_dual_numbers();
    let irreps = irreducibles(act.group(), act.p(), 0)?;
    let tests = test_equivariant(&act)?;
    for (lx, x) in &tests {
        for (ly, y) in &tests {
            let d = hom_decomposition(x, y, &irreps)?;
            println!("{lx:>9} -> {ly:<9} dim {:>2} = multiplicities {:?} . dims {:?}", d.hom_dim, d.multiplicities, d.irrep_dims);
        }
    }
    Ok(())
}
