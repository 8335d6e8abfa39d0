//! Modules over AG and equivariant A-modules are the same data.

use equivar::actions::skew_group_algebra;
use equivar::algebras::hom_space;
use equivar::equivariant::{hom_g_action, phi, phi_inv};
use equivar::fixtures::{self, random_skew_module};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> equivar::Result<()> {
    let skew = skew_group_algebra(&fixtures::c2_dual_numbers())?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let m = random_skew_module(&skew, 6, &mut rng)?;
    let n = random_skew_module(&skew, 6, &mut rng)?;

    let x = phi(&skew, &m)?;
    let y = phi(&skew, &n)?;
    println!("M has dim {}; lambda_g for g != e:\n{:?}", m.dim(), x.lambda(1));
    println!("round trip exact: {}", phi_inv(&skew, &x)? == m);

    let hom = hom_g_action(&x, &y)?;
    println!("dim Hom_A = {}, invariants = {}, dim Hom_AG = {}", hom.basis.len(), hom.fixed.len(), hom_space(&m, &n)?.len());
    Ok(())
}
