//! Recovering the invariant side from AG and the dual action of the characters.

use equivar::equivariant::equivariant_homs;
use equivar::fixtures::{self, test_equivariant};
use equivar::reconstruct::{build_instance, character_fourier, morita_witness, phi_iso_check, theta_check};

fn main() -> equivar::Result<()> {
    let act = fixtures::c2_dual_numbers();
    let inst = build_instance(&act)?;
    println!("{} characters, derived subgroup of order {}", inst.characters.len(), inst.derived.order());

    let phi = phi_iso_check(&inst)?;
    println!("phi: dim {}, End dim {}, rank {}, multiplicative {}", phi.dim, phi.end_dim, phi.rank, phi.multiplicative);

    let f = character_fourier(&inst)?;
    println!("character matrix rank {}, counit {}, comultiplication {}", f.char_rank, f.counit, f.comultiplication);

    let tests: Vec<_> = test_equivariant(&act)?.into_iter().map(|(_, x)| x).collect();
    let mut morphisms = Vec::new();
    for (s, x) in tests.iter().enumerate() {
        for (t, y) in tests.iter().enumerate() {
            if let Some(h) = equivariant_homs(x, y)?.into_iter().next() {
                morphisms.push((s, t, h));
            }
        }
    }
    let theta = theta_check(&inst, &tests, &morphisms)?;
    println!("theta invertible on {} modules, natural on {} morphisms: {}", theta.modules.len(), morphisms.len(), theta.passed());

    let morita = morita_witness(&inst)?;
    println!("progenerator: projective {}, generator {}", morita.projective, morita.generator);
    Ok(())
}
