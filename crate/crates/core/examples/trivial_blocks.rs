//! When a subgroup acts trivially, every equivariant module splits into blocks
//! indexed by its irreducibles, with no maps between different blocks.

use equivar::equivariant::trivial_blocks;
use equivar::fixtures::{self, test_equivariant};
use equivar::groups::{irreducibles, FiniteGroup, Subgroup};

fn main() -> equivar::Result<()> {
    let act = fixtures::trivial_on_field(FiniteGroup::symmetric(3), 7);
    let g = act.group().clone();
    let irreps = irreducibles(&g, act.p(), 0)?;
    let whole = Subgroup::whole(g);
    for (name, x) in test_equivariant(&act)? {
        let b = trivial_blocks(&x, &whole, &irreps)?;
        println!("{name:<9} block dims {:?}, reassembles {}, cross homs {:?}", b.dims(), b.reassembles, b.cross_hom_dims);
    }
    Ok(())
}
