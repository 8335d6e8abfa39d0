//! Characters and irreducible representations of small groups over splitting primes.

use std::sync::Arc;

use equivar::groups::{characters, irreducibles, FiniteGroup};
use equivar::Prime;

fn main() -> equivar::Result<()> {
    let p = Prime::new(7)?;
    for g in [FiniteGroup::cyclic(3), FiniteGroup::symmetric(3), FiniteGroup::cyclic(6)] {
        let g = Arc::new(g);
        let chars = characters(&g, p)?;
        let irreps = irreducibles(&g, p, 0)?;
        let dims: Vec<usize> = irreps.iter().map(|i| i.rep.dim).collect();
        println!("group of order {} over F_{p}: irreducible dims {dims:?}", g.order());
        for (k, chi) in chars.iter().enumerate() {
            let values: Vec<u32> = g.elements().map(|x| chi.value(x)).collect();
            println!("  chi{k} = {values:?}");
        }
    }
    Ok(())
}
