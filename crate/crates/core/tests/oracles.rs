//! Brute-force enumeration over `F_3` for complexes small enough to list every
//! candidate chain map and every candidate homotopy.

use std::collections::HashSet;
use std::sync::Arc;

use equivar::algebras::{Algebra, Module};
use equivar::fixtures::{augmentation, prime};
use equivar::homotopy::{cone, homotopy_hom_dim, ChainMap, Complex};
use equivar::Mat;

fn is_hom(m: &Module, n: &Module, h: &Mat) -> bool {
    m.action().iter().zip(n.action()).all(|(a, b)| (a * h) == (h * b))
}

/// Every tuple of matrices with the given shapes, as one odometer over `F_p`.
fn all_tuples(p: u32, shapes: &[(usize, usize)]) -> Vec<Vec<Vec<u32>>> {
    let total: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let count = (p as usize).pow(total as u32);
    (0..count)
        .map(|mut code| {
            let flat: Vec<u32> = (0..total)
                .map(|_| {
                    let d = (code % p as usize) as u32;
                    code /= p as usize;
                    d
                })
                .collect();
            let mut out = Vec::new();
            let mut at = 0;
            for (r, c) in shapes {
                out.push(flat[at..at + r * c].to_vec());
                at += r * c;
            }
            out
        })
        .collect()
}

fn log(p: usize, mut n: usize) -> usize {
    let mut k = 0;
    while n > 1 {
        assert_eq!(n % p, 0, "a subspace has p^k elements");
        n /= p;
        k += 1;
    }
    k
}

/// `(dim chain maps, dim null-homotopic maps)` by exhaustive search.
fn brute_force(x: &Complex, y: &Complex) -> (usize, usize) {
    let p = x.p();
    let degrees: Vec<i64> = (x.lo().min(y.lo()) - 1..=x.end().max(y.end()) + 1).collect();
    let mat = |rows: usize, cols: usize, data: &[u32]| Mat::from_vec(p, rows, cols, data.to_vec());

    let shapes: Vec<(usize, usize)> = degrees.iter().map(|&n| (x.dim(n), y.dim(n))).collect();
    let mut chain = 0;
    for t in all_tuples(p.get(), &shapes) {
        let f: Vec<Mat> = shapes.iter().zip(&t).map(|(&(r, c), d)| mat(r, c, d)).collect();
        let ok = degrees.iter().enumerate().all(|(k, &n)| {
            is_hom(&x.term(n), &y.term(n), &f[k]) && (k + 1 == degrees.len() || &x.diff(n) * &f[k + 1] == &f[k] * &y.diff(n))
        });
        chain += usize::from(ok);
    }

    let hshapes: Vec<(usize, usize)> = degrees.iter().map(|&n| (x.dim(n), y.dim(n - 1))).collect();
    let mut boundaries = HashSet::new();
    for t in all_tuples(p.get(), &hshapes) {
        let h: Vec<Mat> = hshapes.iter().zip(&t).map(|(&(r, c), d)| mat(r, c, d)).collect();
        if !degrees.iter().enumerate().all(|(k, &n)| is_hom(&x.term(n), &y.term(n - 1), &h[k])) {
            continue;
        }
        let f: Vec<Vec<u32>> = degrees
            .iter()
            .enumerate()
            .skip(1)
            .take(degrees.len() - 2)
            .map(|(k, &n)| (&(&h[k] * &y.diff(n - 1)) + &(&x.diff(n) * &h[k + 1])).data().to_vec())
            .collect();
        boundaries.insert(f);
    }
    (log(p.get() as usize, chain), log(p.get() as usize, boundaries.len()))
}

fn dual_numbers() -> Arc<Algebra> {
    Arc::new(Algebra::truncated_poly(prime(3), 2))
}

#[test]
fn homotopy_dimensions_match_enumeration() {
    let a = dual_numbers();
    let p = a.p();
    let s = augmentation(&a).unwrap();
    let reg = a.regular_module();
    let times_x = a.left_mult(&[0, 1]);
    let socle = Mat::from_rows(p, &[[0, 1]]).unwrap();
    let top = Mat::from_rows(p, &[[1], [0]]).unwrap();

    let s_to_a = Complex::new(a.clone(), 0, vec![s.clone(), reg.clone()], vec![socle]).unwrap();
    let a_to_s = Complex::new(a.clone(), 0, vec![reg.clone(), s.clone()], vec![top]).unwrap();
    let a_x_a = Complex::new(a.clone(), 0, vec![reg.clone(), reg.clone()], vec![times_x]).unwrap();
    let stalk_s = Complex::stalk(&s, 0);
    let stalk_a = Complex::stalk(&reg, 1);
    let contractible = cone(&ChainMap::identity(&stalk_s)).unwrap();

    let complexes = [&s_to_a, &a_to_s, &a_x_a, &stalk_s, &stalk_a, &contractible];
    let mut checked = 0;
    for x in complexes {
        for y in complexes {
            let unknowns: i64 =
                (x.lo().min(y.lo()) - 1..=x.end().max(y.end()) + 1).map(|n| (x.dim(n) * y.dim(n) + x.dim(n) * y.dim(n - 1)) as i64).sum();
            if unknowns > 10 {
                continue;
            }
            let (chain, null) = brute_force(x, y);
            let d = homotopy_hom_dim(x, y).unwrap();
            assert_eq!((d.chain_map_dim, d.nullhomotopic_dim), (chain, null));
            checked += 1;
        }
    }
    assert!(checked >= 20, "only {checked} pairs were small enough");

    for y in complexes {
        assert_eq!(homotopy_hom_dim(&contractible, y).unwrap().k_dim, 0);
    }
    assert_eq!(homotopy_hom_dim(&a_x_a, &a_x_a).unwrap().k_dim, brute_force(&a_x_a, &a_x_a).0 - brute_force(&a_x_a, &a_x_a).1);
}
