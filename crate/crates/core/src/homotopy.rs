//! Bounded cochain complexes of modules and their homotopy category.
//!
//! A complex has terms `X^n` for `n` in a window starting at `lo` and
//! differentials `d^n: X^n -> X^{n+1}` stored as matrices `D^n` (row
//! convention). Conventions: `(X[k])^n = X^{n+k}` with differential
//! `(-1)^k d`; `cone(f)^n = X^{n+1} (+) Y^n` with differential
//! `[[-D_X^{n+1}, F^{n+1}], [0, D_Y^n]]`.

use std::sync::Arc;

use serde::Serialize;

use crate::actions::SkewAlgebra;
use crate::algebras::{coordinates, hom_space, Algebra, Module};
use crate::equivariant::phi;
use crate::error::{Error, Result};
use crate::field::{stack_rows, Mat, Prime};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    algebra: Arc<Algebra>,
    lo: i64,
    terms: Vec<Module>,
    /// `diffs[k]` is `d^{lo + k}`; there are `terms.len() - 1` of them.
    diffs: Vec<Mat>,
}

impl Complex {
    pub fn new(algebra: Arc<Algebra>, lo: i64, terms: Vec<Module>, diffs: Vec<Mat>) -> Result<Self> {
        let c = Complex { algebra, lo, terms, diffs };
        c.validate()?;
        Ok(c)
    }

    pub fn zero(algebra: Arc<Algebra>) -> Self {
        Complex { algebra, lo: 0, terms: vec![], diffs: vec![] }
    }

    /// `m` concentrated in degree `n`.
    pub fn stalk(m: &Module, n: i64) -> Self {
        Complex { algebra: m.algebra().clone(), lo: n, terms: vec![m.clone()], diffs: vec![] }
    }

    pub fn validate(&self) -> Result<()> {
        let want = self.terms.len().saturating_sub(1);
        if self.diffs.len() != want {
            return Err(Error::InvalidComplex(format!("{} differentials for {} terms", self.diffs.len(), self.terms.len())));
        }
        for (k, t) in self.terms.iter().enumerate() {
            if t.algebra().as_ref() != self.algebra.as_ref() {
                return Err(Error::InvalidComplex(format!("term in degree {} is over another algebra", self.lo + k as i64)));
            }
        }
        for (k, d) in self.diffs.iter().enumerate() {
            let n = self.lo + k as i64;
            if !self.terms[k].is_hom_to(&self.terms[k + 1], d) {
                return Err(Error::InvalidComplex(format!("d^{n} is not a module homomorphism")));
            }
        }
        for (k, w) in self.diffs.windows(2).enumerate() {
            if !(&w[0] * &w[1]).is_zero() {
                return Err(Error::InvalidComplex(format!("d^{} o d^{} != 0", self.lo + k as i64 + 1, self.lo + k as i64)));
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn p(&self) -> Prime {
        self.algebra.p()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// One past the top degree.
    pub fn end(&self) -> i64 {
        self.lo + self.terms.len() as i64
    }

    pub fn terms(&self) -> &[Module] {
        &self.terms
    }

    pub fn diffs(&self) -> &[Mat] {
        &self.diffs
    }

    fn index(&self, n: i64) -> Option<usize> {
        (n >= self.lo && n < self.end()).then(|| (n - self.lo) as usize)
    }

    pub fn dim(&self, n: i64) -> usize {
        self.index(n).map_or(0, |k| self.terms[k].dim())
    }

    pub fn term(&self, n: i64) -> Module {
        match self.index(n) {
            Some(k) => self.terms[k].clone(),
            None => Module::zero(self.algebra.clone()),
        }
    }

    /// `D^n`, zero outside the window.
    pub fn diff(&self, n: i64) -> Mat {
        match (self.index(n), self.index(n + 1)) {
            (Some(k), Some(_)) => self.diffs[k].clone(),
            _ => Mat::zeros(self.p(), self.dim(n), self.dim(n + 1)),
        }
    }

    pub fn shift(&self, k: i64) -> Complex {
        let diffs =
            if k.rem_euclid(2) == 1 { self.diffs.iter().map(|d| d.scale(self.p().get() - 1)).collect() } else { self.diffs.clone() };
        Complex { algebra: self.algebra.clone(), lo: self.lo - k, terms: self.terms.clone(), diffs }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.dim() == 0)
    }

    /// `dim H^n = dim ker d^n - rank d^{n-1}`.
    pub fn cohomology_dim(&self, n: i64) -> usize {
        let d = self.diff(n);
        let kernel = self.dim(n) - d.rank();
        kernel - self.diff(n - 1).rank()
    }
}

/// Degrees where either complex can be non-zero.
fn window(x: &Complex, y: &Complex) -> (i64, i64) {
    match (x.terms.is_empty(), y.terms.is_empty()) {
        (true, true) => (0, 0),
        (true, false) => (y.lo, y.end()),
        (false, true) => (x.lo, x.end()),
        (false, false) => (x.lo.min(y.lo), x.end().max(y.end())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub source: Complex,
    pub target: Complex,
    lo: i64,
    maps: Vec<Mat>,
}

impl ChainMap {
    /// `maps[k]` is the component in degree `lo + k` over the joint window of the
    /// two complexes, starting at its lowest degree.
    pub fn new(source: Complex, target: Complex, maps: Vec<Mat>) -> Result<Self> {
        let (lo, end) = window(&source, &target);
        if maps.len() != (end - lo) as usize {
            return Err(Error::InvalidComplex(format!("{} components for the window [{lo}, {end})", maps.len())));
        }
        let f = ChainMap { source, target, lo, maps };
        f.validate()?;
        Ok(f)
    }

    /// Component in degree `n` given by `comp(n)`, validated.
    pub fn from_degrees(source: &Complex, target: &Complex, comp: impl FnMut(i64) -> Mat) -> Result<ChainMap> {
        let f = ChainMap::from_fn(source, target, comp);
        f.validate()?;
        Ok(f)
    }

    fn from_fn(source: &Complex, target: &Complex, mut comp: impl FnMut(i64) -> Mat) -> ChainMap {
        let (lo, end) = window(source, target);
        let maps = (lo..end).map(&mut comp).collect();
        ChainMap { source: source.clone(), target: target.clone(), lo, maps }
    }

    pub fn zero(source: &Complex, target: &Complex) -> ChainMap {
        let p = source.p();
        ChainMap::from_fn(source, target, |n| Mat::zeros(p, source.dim(n), target.dim(n)))
    }

    pub fn identity(x: &Complex) -> ChainMap {
        ChainMap::from_fn(x, x, |n| Mat::identity(x.p(), x.dim(n)))
    }

    pub fn validate(&self) -> Result<()> {
        let (x, y) = (&self.source, &self.target);
        for (k, m) in self.maps.iter().enumerate() {
            let n = self.lo + k as i64;
            if m.rows() != x.dim(n) || m.cols() != y.dim(n) {
                return Err(Error::InvalidComplex(format!("component in degree {n} has the wrong shape")));
            }
            if !x.term(n).is_hom_to(&y.term(n), m) {
                return Err(Error::InvalidComplex(format!("component in degree {n} is not a module homomorphism")));
            }
        }
        for n in self.lo - 1..self.lo + self.maps.len() as i64 {
            if &x.diff(n) * &self.component(n + 1) != &self.component(n) * &y.diff(n) {
                return Err(Error::InvalidComplex(format!("chain map does not commute with d^{n}")));
            }
        }
        Ok(())
    }

    pub fn component(&self, n: i64) -> Mat {
        if n >= self.lo && n < self.lo + self.maps.len() as i64 {
            self.maps[(n - self.lo) as usize].clone()
        } else {
            Mat::zeros(self.source.p(), self.source.dim(n), self.target.dim(n))
        }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &ChainMap) -> Result<ChainMap> {
        if self.target != other.source {
            return Err(Error::Precondition("chain maps are not composable".into()));
        }
        Ok(ChainMap::from_fn(&self.source, &other.target, |n| &self.component(n) * &other.component(n)))
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Precondition("chain maps between different complexes".into()));
        }
        Ok(ChainMap::from_fn(&self.source, &self.target, |n| &self.component(n) - &other.component(n)))
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Precondition("chain maps between different complexes".into()));
        }
        Ok(ChainMap::from_fn(&self.source, &self.target, |n| &self.component(n) + &other.component(n)))
    }

    pub fn scale(&self, c: u32) -> ChainMap {
        ChainMap::from_fn(&self.source, &self.target, |n| self.component(n).scale(c))
    }

    /// `f[k]`, with components `f^{n+k}`.
    pub fn shift(&self, k: i64) -> ChainMap {
        let (x, y) = (self.source.shift(k), self.target.shift(k));
        ChainMap::from_fn(&x, &y, |n| self.component(n + k))
    }

    fn flatten(&self) -> Vec<u32> {
        let (lo, end) = window(&self.source, &self.target);
        (lo..end).flat_map(|n| self.component(n).data().to_vec()).collect()
    }

    fn unflatten(x: &Complex, y: &Complex, flat: &[u32]) -> ChainMap {
        let mut off = 0;
        ChainMap::from_fn(x, y, |n| {
            let (r, c) = (x.dim(n), y.dim(n));
            let m = Mat::from_vec(x.p(), r, c, flat[off..off + r * c].to_vec());
            off += r * c;
            m
        })
    }
}

fn flat_len(x: &Complex, y: &Complex) -> usize {
    let (lo, end) = window(x, y);
    (lo..end).map(|n| x.dim(n) * y.dim(n)).sum()
}

/// The null-homotopic map `d h + h d`, with components `h^n D_y^{n-1} + D_x^n h^{n+1}`,
/// for `h = [(n, h^n: X^n -> Y^{n-1})]`.
pub fn homotopy_boundary(x: &Complex, y: &Complex, h: &[(i64, Mat)]) -> Result<ChainMap> {
    for (n, m) in h {
        if m.rows() != x.dim(*n) || m.cols() != y.dim(n - 1) {
            return Err(Error::InvalidComplex(format!("homotopy component in degree {n} has the wrong shape")));
        }
        if !x.term(*n).is_hom_to(&y.term(n - 1), m) {
            return Err(Error::InvalidComplex(format!("homotopy component in degree {n} is not a module homomorphism")));
        }
    }
    let comp =
        |n: i64| h.iter().find(|(k, _)| *k == n).map(|(_, m)| m.clone()).unwrap_or_else(|| Mat::zeros(x.p(), x.dim(n), y.dim(n - 1)));
    Ok(ChainMap::from_fn(x, y, |n| &(&comp(n) * &y.diff(n - 1)) + &(&x.diff(n) * &comp(n + 1))))
}

/// `cone(f)^n = X^{n+1} (+) Y^n`.
pub fn cone(f: &ChainMap) -> Result<Complex> {
    let (x, y) = (&f.source, &f.target);
    let p = x.p();
    if x.terms.is_empty() && y.terms.is_empty() {
        return Ok(Complex::zero(x.algebra.clone()));
    }
    let lo = if x.terms.is_empty() {
        y.lo
    } else if y.terms.is_empty() {
        x.lo - 1
    } else {
        (x.lo - 1).min(y.lo)
    };
    let end = if x.terms.is_empty() {
        y.end()
    } else if y.terms.is_empty() {
        x.end() - 1
    } else {
        (x.end() - 1).max(y.end())
    };
    let terms = (lo..end).map(|n| x.term(n + 1).direct_sum(&y.term(n))).collect::<Result<Vec<_>>>()?;
    let diffs = (lo..end - 1)
        .map(|n| {
            let (a, b) = (x.dim(n + 1), y.dim(n));
            let (a2, b2) = (x.dim(n + 2), y.dim(n + 1));
            let mut d = Mat::zeros(p, a + b, a2 + b2);
            d.set_block(0, 0, &x.diff(n + 1).scale(p.get() - 1));
            d.set_block(0, a2, &f.component(n + 1));
            d.set_block(a, a2, &y.diff(n));
            d
        })
        .collect();
    Complex::new(x.algebra.clone(), lo, terms, diffs)
}

/// The triangle `X -> Y -> cone(f) -> X[1]`: returns `(Y -> cone, cone -> X[1])`.
pub fn cone_triangle(f: &ChainMap) -> Result<(Complex, ChainMap, ChainMap)> {
    let c = cone(f)?;
    let (x, y) = (&f.source, &f.target);
    let p = x.p();
    let incl = ChainMap::from_fn(y, &c, |n| {
        let (a, b) = (x.dim(n + 1), y.dim(n));
        Mat::from_fn(p, b, a + b, |r, col| u32::from(col == a + r))
    });
    let x1 = x.shift(1);
    let proj = ChainMap::from_fn(&c, &x1, |n| {
        let (a, b) = (x.dim(n + 1), y.dim(n));
        Mat::from_fn(p, a + b, a, |r, col| u32::from(r == col))
    });
    incl.validate()?;
    proj.validate()?;
    Ok((c, incl, proj))
}

/// Basis of the chain maps `x -> y`.
pub fn chain_maps(x: &Complex, y: &Complex) -> Result<Vec<ChainMap>> {
    if x.algebra.as_ref() != y.algebra.as_ref() {
        return Err(Error::Precondition("complexes over different algebras".into()));
    }
    let p = x.p();
    let (lo, end) = window(x, y);
    let mut vars: Vec<(i64, Mat)> = Vec::new();
    for n in lo..end {
        for b in hom_space(&x.term(n), &y.term(n))? {
            vars.push((n, b));
        }
    }
    // constraint n (lo-1 <= n < end): D_x^n F^{n+1} - F^n D_y^n, laid out consecutively
    let blocks: Vec<(i64, usize, usize)> = (lo - 1..end).map(|n| (n, x.dim(n), y.dim(n + 1))).collect();
    let width: usize = blocks.iter().map(|&(_, r, c)| r * c).sum();
    let residual = stack_rows(
        p,
        width,
        vars.iter().map(|(m, b)| {
            let mut row = Vec::with_capacity(width);
            for &(n, r, c) in &blocks {
                let part = if n + 1 == *m {
                    &x.diff(n) * b
                } else if n == *m {
                    (b * &y.diff(n)).scale(p.get() - 1)
                } else {
                    Mat::zeros(p, r, c)
                };
                row.extend_from_slice(part.data());
            }
            row
        }),
    );
    let kernel = residual.left_kernel();
    let maps = (0..kernel.rows())
        .map(|k| {
            let coeffs = kernel.row(k);
            ChainMap::from_fn(x, y, |n| {
                let mut m = Mat::zeros(p, x.dim(n), y.dim(n));
                for ((deg, b), &c) in vars.iter().zip(coeffs) {
                    if *deg == n && c != 0 {
                        m.add_scaled(b, c);
                    }
                }
                m
            })
        })
        .collect();
    Ok(maps)
}

/// Homotopies `h^n: X^n -> Y^{n-1}` (as module homs) and their chain maps `dh + hd`.
fn homotopy_generators(x: &Complex, y: &Complex) -> Result<Vec<(i64, Mat, ChainMap)>> {
    let p = x.p();
    let (lo, end) = window(x, y);
    let mut out = Vec::new();
    for m in lo..=end {
        for b in hom_space(&x.term(m), &y.term(m - 1))? {
            let f = ChainMap::from_fn(x, y, |n| {
                if n == m {
                    &b * &y.diff(m - 1)
                } else if n == m - 1 {
                    &x.diff(m - 1) * &b
                } else {
                    Mat::zeros(p, x.dim(n), y.dim(n))
                }
            });
            out.push((m, b, f));
        }
    }
    Ok(out)
}

/// Echelon rows (flattened chain maps) spanning the null-homotopic maps `x -> y`.
pub fn null_homotopic_span(x: &Complex, y: &Complex) -> Result<Mat> {
    let gens = homotopy_generators(x, y)?;
    Ok(stack_rows(x.p(), flat_len(x, y), gens.iter().map(|(_, _, f)| f.flatten())).row_basis())
}

/// A homotopy `h` (components `h^n: X^n -> Y^{n-1}` as `(n, matrix)`) with
/// `f^n = h^n D_Y^{n-1} + D_X^n h^{n+1}`, if one exists.
pub fn null_homotopy(f: &ChainMap) -> Result<Option<Vec<(i64, Mat)>>> {
    let (x, y) = (&f.source, &f.target);
    let p = x.p();
    let gens = homotopy_generators(x, y)?;
    let target = f.flatten();
    if target.iter().all(|&c| c == 0) {
        return Ok(Some(vec![]));
    }
    if gens.is_empty() {
        return Ok(None);
    }
    let images: Vec<Mat> = gens.iter().map(|(_, _, g)| Mat::row_vector(p, &g.flatten())).collect();
    let Some(coeffs) = coordinates(&images, &Mat::row_vector(p, &target)) else {
        return Ok(None);
    };
    let (lo, end) = window(x, y);
    let mut h = Vec::new();
    for m in lo..=end {
        let mut hm = Mat::zeros(p, x.dim(m), y.dim(m - 1));
        for ((deg, b, _), &c) in gens.iter().zip(&coeffs) {
            if *deg == m && c != 0 {
                hm.add_scaled(b, c);
            }
        }
        h.push((m, hm));
    }
    Ok(Some(h))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HomotopyDims {
    pub chain_map_dim: usize,
    pub nullhomotopic_dim: usize,
    pub k_dim: usize,
}

pub fn homotopy_hom_dim(x: &Complex, y: &Complex) -> Result<HomotopyDims> {
    let chain_map_dim = chain_maps(x, y)?.len();
    let nullhomotopic_dim = null_homotopic_span(x, y)?.rows();
    Ok(HomotopyDims { chain_map_dim, nullhomotopic_dim, k_dim: chain_map_dim - nullhomotopic_dim })
}

/// A complex over `AG` seen over `A`, with the equivariant structure of each term.
pub struct ForgottenComplex {
    pub complex: Complex,
    /// `lambdas[k][g]` for the term in degree `lo + k`.
    pub lambdas: Vec<Vec<Mat>>,
}

pub fn forget_complex(skew: &SkewAlgebra, x: &Complex) -> Result<ForgottenComplex> {
    if x.algebra.as_ref() != skew.algebra.as_ref() {
        return Err(Error::Precondition("complex is not over the skew group algebra".into()));
    }
    let eq = x.terms.iter().map(|t| phi(skew, t)).collect::<Result<Vec<_>>>()?;
    let terms = eq.iter().map(|e| e.base().clone()).collect();
    let lambdas = eq.iter().map(|e| e.lambdas().to_vec()).collect();
    let complex = Complex { algebra: skew.action.algebra().clone(), lo: x.lo, terms, diffs: x.diffs.clone() };
    Ok(ForgottenComplex { complex, lambdas })
}

fn lambda_at(f: &ForgottenComplex, n: i64, g: usize, p: Prime) -> Mat {
    match f.complex.index(n) {
        Some(k) => f.lambdas[k][g].clone(),
        None => Mat::zeros(p, 0, 0),
    }
}

/// `f.g` with components `(L^X_g)^-1 f^n L^Y_g`.
fn conjugate(fx: &ForgottenComplex, fy: &ForgottenComplex, f: &ChainMap, g: usize) -> Result<ChainMap> {
    let p = f.source.p();
    let (lo, end) = window(&f.source, &f.target);
    let mut maps = Vec::new();
    for n in lo..end {
        let lx = lambda_at(fx, n, g, p);
        let inv = lx.inverse().ok_or_else(|| Error::InvalidEquivariant("lambda is singular".into()))?;
        maps.push(&(&inv * &f.component(n)) * &lambda_at(fy, n, g, p));
    }
    Ok(ChainMap { source: f.source.clone(), target: f.target.clone(), lo, maps })
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivariantHomotopy {
    pub skew_dims: HomotopyDims,
    pub fixed_chain_dim: usize,
    pub fixed_null_dim: usize,
    pub fixed_k_dim: usize,
    /// Conjugation by `G` preserves the null-homotopic maps over `A`.
    pub null_g_stable: bool,
    /// For each basis chain map over `AG`, the cone triangle forgets to the cone triangle over `A`.
    pub cones_forget: bool,
}

impl EquivariantHomotopy {
    pub fn passed(&self) -> bool {
        self.null_g_stable && self.cones_forget && self.skew_dims.k_dim == self.fixed_k_dim
    }
}

/// Compares homotopy classes over `AG` with the `G`-invariant homotopy classes over `A`.
pub fn equivariant_homotopy_check(skew: &SkewAlgebra, x: &Complex, y: &Complex) -> Result<EquivariantHomotopy> {
    let g = skew.group();
    let p = x.p();
    if p.residue(g.order()) == 0 {
        return Err(Error::Precondition(format!("p = {p} divides |G| = {}", g.order())));
    }
    let skew_dims = homotopy_hom_dim(x, y)?;
    let (fx, fy) = (forget_complex(skew, x)?, forget_complex(skew, y)?);
    let (ax, ay) = (&fx.complex, &fy.complex);
    let chains = chain_maps(ax, ay)?;
    let null = null_homotopic_span(ax, ay)?;
    let len = flat_len(ax, ay);

    let mut null_g_stable = true;
    for k in 0..null.rows() {
        let f = ChainMap::unflatten(ax, ay, null.row(k));
        for h in g.elements() {
            let img = Mat::row_vector(p, &conjugate(&fx, &fy, &f, h)?.flatten());
            if Mat::vstack(&[&null, &img]).rank() != null.rows() {
                null_g_stable = false;
            }
        }
    }
    let inv_order = p.inv(p.residue(g.order())).expect("coprime order");
    let average = |f: &ChainMap| -> Result<Vec<u32>> {
        let mut sum = Mat::zeros(p, 1, len);
        for h in g.elements() {
            sum.add_scaled(&Mat::row_vector(p, &conjugate(&fx, &fy, f, h)?.flatten()), inv_order);
        }
        Ok(sum.row(0).to_vec())
    };
    let fixed_chain_dim = stack_rows(p, len, chains.iter().map(average).collect::<Result<Vec<_>>>()?).rank();
    let null_maps: Vec<ChainMap> = (0..null.rows()).map(|k| ChainMap::unflatten(ax, ay, null.row(k))).collect();
    let fixed_null_dim = stack_rows(p, len, null_maps.iter().map(average).collect::<Result<Vec<_>>>()?).rank();

    let mut cones_forget = true;
    for f in chain_maps(x, y)? {
        let (c, incl, proj) = cone_triangle(&f)?;
        let fa = ChainMap::from_fn(ax, ay, |n| f.component(n));
        let (ca, incl_a, proj_a) = cone_triangle(&fa)?;
        let fc = forget_complex(skew, &c)?;
        let (lo, end) = (c.lo().min(ax.lo - 1).min(ay.lo) - 1, c.end().max(ax.end()).max(ay.end()) + 1);
        cones_forget &=
            fc.complex == ca && (lo..end).all(|n| incl.component(n) == incl_a.component(n) && proj.component(n) == proj_a.component(n));
    }
    Ok(EquivariantHomotopy {
        skew_dims,
        fixed_chain_dim,
        fixed_null_dim,
        fixed_k_dim: fixed_chain_dim - fixed_null_dim,
        null_g_stable,
        cones_forget,
    })
}

/// Output of [`tr3_average`].
#[derive(Clone, Debug)]
pub struct Tr3Result {
    /// The averaged map `cone(a) -> cone(a')`, over `AG`.
    pub w: ChainMap,
    /// `w.g == w` for every `g`.
    pub fixed: bool,
    /// Both squares involving `w` commute up to a null-homotopy over `AG`.
    pub completes: bool,
}

/// Given equivariant `a: X -> Y`, `a': X' -> Y'`, `u: X -> X'`, `v: Y -> Y'` with
/// `a v = u a'`, and `r: cone(a) -> cone(a')` over `A` completing the morphism of
/// triangles up to homotopy, returns `w = (1/|G|) sum_g r.g`.
pub fn tr3_average(skew: &SkewAlgebra, a: &ChainMap, a2: &ChainMap, u: &ChainMap, v: &ChainMap, r: &ChainMap) -> Result<Tr3Result> {
    let g = skew.group();
    let p = a.source.p();
    if p.residue(g.order()) == 0 {
        return Err(Error::Precondition(format!("p = {p} divides |G| = {}", g.order())));
    }
    if a.then(v)? != u.then(a2)? {
        return Err(Error::Precondition("the square a v = u a' does not commute".into()));
    }
    let (c, incl, proj) = cone_triangle(a)?;
    let (c2, incl2, proj2) = cone_triangle(a2)?;
    let (fc, fc2) = (forget_complex(skew, &c)?, forget_complex(skew, &c2)?);
    if r.source != fc.complex || r.target != fc2.complex {
        return Err(Error::Precondition("r is not a map between the cones over A".into()));
    }
    let over_a = |f: &ChainMap, src: &Complex, tgt: &Complex| -> Result<ChainMap> {
        let src = forget_complex(skew, src)?.complex;
        let tgt = forget_complex(skew, tgt)?.complex;
        Ok(ChainMap::from_fn(&src, &tgt, |n| f.component(n)))
    };
    let squares =
        |w: &ChainMap, incl: &ChainMap, proj: &ChainMap, incl2: &ChainMap, proj2: &ChainMap, u1: &ChainMap, v: &ChainMap| -> Result<bool> {
            let left = incl.then(w)?.sub(&v.then(incl2)?)?;
            let right = w.then(proj2)?.sub(&proj.then(u1)?)?;
            Ok(null_homotopy(&left)?.is_some() && null_homotopy(&right)?.is_some())
        };
    let u1 = u.shift(1);
    {
        let (ia, pa) = (over_a(&incl, &a.target, &c)?, over_a(&proj, &c, &a.source.shift(1))?);
        let (ia2, pa2) = (over_a(&incl2, &a2.target, &c2)?, over_a(&proj2, &c2, &a2.source.shift(1))?);
        let ua = over_a(&u1, &a.source.shift(1), &a2.source.shift(1))?;
        let va = over_a(v, &a.target, &a2.target)?;
        if !squares(r, &ia, &pa, &ia2, &pa2, &ua, &va)? {
            return Err(Error::Precondition("r does not complete the morphism of triangles over A".into()));
        }
    }
    let inv_order = p.inv(p.residue(g.order())).expect("coprime order");
    let len = flat_len(&fc.complex, &fc2.complex);
    let mut sum = Mat::zeros(p, 1, len);
    for h in g.elements() {
        sum.add_scaled(&Mat::row_vector(p, &conjugate(&fc, &fc2, r, h)?.flatten()), inv_order);
    }
    let w_a = ChainMap::unflatten(&fc.complex, &fc2.complex, sum.row(0));
    let mut fixed = true;
    for h in g.elements() {
        fixed &= conjugate(&fc, &fc2, &w_a, h)? == w_a;
    }
    let w = ChainMap::from_fn(&c, &c2, |n| w_a.component(n));
    w.validate()?;
    let completes = squares(&w, &incl, &proj, &incl2, &proj2, &u1, v)?;
    Ok(Tr3Result { w, fixed, completes })
}

/// Smart truncations at degree `n` with their structure maps.
#[derive(Clone, Debug)]
pub struct Truncation {
    /// `tau_{<= n}`: degrees `< n` unchanged, `ker d^n` in degree `n`.
    pub le: Complex,
    /// `tau_{>= n+1}`: `coker d^n` in degree `n + 1`, higher degrees unchanged.
    pub ge: Complex,
    pub inclusion: ChainMap,
    pub projection: ChainMap,
}

pub fn truncate(x: &Complex, n: i64) -> Result<Truncation> {
    let p = x.p();
    let alg = x.algebra.clone();
    // tau_{<= n}
    let mut ker_basis = None;
    let le = if x.terms.is_empty() || n < x.lo {
        Complex::zero(alg.clone())
    } else {
        let top = n.min(x.end() - 1);
        let mut terms: Vec<Module> = (x.lo..top).map(|k| x.term(k)).collect();
        let mut diffs: Vec<Mat> = (x.lo..top - 1).map(|k| x.diff(k)).collect();
        if top == n {
            let (ker, basis) = x.term(n).submodule(&x.diff(n).left_kernel())?;
            if n > x.lo {
                let d = if basis.rows() == 0 {
                    Mat::zeros(p, x.dim(n - 1), 0)
                } else {
                    basis.solve_left(&x.diff(n - 1))?.ok_or_else(|| Error::Invariant("image is not inside the kernel".into()))?
                };
                diffs.push(d);
            }
            terms.push(ker);
            ker_basis = Some(basis);
        } else {
            terms.push(x.term(top));
            if top > x.lo {
                diffs.push(x.diff(top - 1));
            }
        }
        Complex::new(alg.clone(), x.lo, terms, diffs)?
    };
    let inclusion = ChainMap::from_fn(&le, x, |k| match (&ker_basis, k == n) {
        (Some(b), true) => b.clone(),
        _ if k <= n && le.dim(k) == x.dim(k) => Mat::identity(p, x.dim(k)),
        _ => Mat::zeros(p, le.dim(k), x.dim(k)),
    });
    inclusion.validate()?;
    // tau_{>= n+1}
    let ge = if x.terms.is_empty() || n + 1 >= x.end() {
        Complex::zero(alg.clone())
    } else {
        let start = (n + 1).max(x.lo);
        let mut terms = Vec::new();
        let mut diffs = Vec::new();
        if start == n + 1 {
            let (q, proj) = x.term(n + 1).quotient(&x.diff(n))?;
            terms.push(q);
            if n + 2 < x.end() {
                let sol =
                    proj.solve(&x.diff(n + 1))?.ok_or_else(|| Error::Invariant("d^{n+1} does not factor through the cokernel".into()))?;
                diffs.push(sol.particular);
            }
        } else {
            terms.push(x.term(start));
            if start + 1 < x.end() {
                diffs.push(x.diff(start));
            }
        }
        for k in start + 1..x.end() {
            terms.push(x.term(k));
            if k + 1 < x.end() {
                diffs.push(x.diff(k));
            }
        }
        Complex::new(alg, start, terms, diffs)?
    };
    let projection = ChainMap::from_fn(x, &ge, |k| {
        if k == n + 1 && k >= x.lo && k < x.end() {
            x.term(n + 1).quotient(&x.diff(n)).map(|(_, proj)| proj).expect("validated above")
        } else if ge.dim(k) == x.dim(k) {
            Mat::identity(p, x.dim(k))
        } else {
            Mat::zeros(p, x.dim(k), ge.dim(k))
        }
    });
    projection.validate()?;
    Ok(Truncation { le, ge, inclusion, projection })
}

#[derive(Clone, Debug, Serialize)]
pub struct TruncationReport {
    pub degree: i64,
    /// Every term of both truncations carries a valid equivariant structure.
    pub equivariant: bool,
    /// Truncating then forgetting equals forgetting then truncating, as matrices.
    pub commutes_with_forget: bool,
    pub cohomology_le: bool,
    pub cohomology_ge: bool,
}

impl TruncationReport {
    pub fn passed(&self) -> bool {
        self.equivariant && self.commutes_with_forget && self.cohomology_le && self.cohomology_ge
    }
}

pub fn truncation_check(skew: &SkewAlgebra, x: &Complex, n: i64) -> Result<TruncationReport> {
    let t = truncate(x, n)?;
    let mut equivariant = true;
    for c in [&t.le, &t.ge] {
        for term in c.terms() {
            equivariant &= phi(skew, term).and_then(|e| e.validate()).is_ok();
        }
    }
    let forgotten = forget_complex(skew, x)?.complex;
    let ta = truncate(&forgotten, n)?;
    let commutes_with_forget = forget_complex(skew, &t.le)?.complex == ta.le && forget_complex(skew, &t.ge)?.complex == ta.ge;
    let span = (x.lo - 1)..(x.end() + 1);
    let cohomology_le = span.clone().all(|k| t.le.cohomology_dim(k) == if k <= n { x.cohomology_dim(k) } else { 0 });
    let cohomology_ge = span.clone().all(|k| t.ge.cohomology_dim(k) == if k > n { x.cohomology_dim(k) } else { 0 });
    Ok(TruncationReport { degree: n, equivariant, commutes_with_forget, cohomology_le, cohomology_ge })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{skew_group_algebra, GroupAction};
    use crate::equivariant::{phi_inv, EquivariantModule};
    use crate::groups::{characters, FiniteGroup};
    use rand::{Rng, SeedableRng};

    fn f5() -> Prime {
        Prime::new(5).unwrap()
    }

    fn dual() -> Arc<Algebra> {
        Arc::new(Algebra::truncated_poly(f5(), 2))
    }

    fn simple(a: &Arc<Algebra>) -> Module {
        Module::new(a.clone(), vec![Mat::identity(f5(), 1), Mat::zeros(f5(), 1, 1)]).unwrap()
    }

    fn c2_skew() -> SkewAlgebra {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let s = Mat::from_rows(f5(), &[[1, 0], [0, 4]]).unwrap();
        let act = Arc::new(GroupAction::from_generators(g, dual(), &[(1, s)]).unwrap());
        skew_group_algebra(&act).unwrap()
    }

    /// `A --x--> A` in degrees 0 and 1.
    fn mult_by_x(a: &Arc<Algebra>) -> Complex {
        let reg = a.regular_module();
        let d = a.left_mult(&[0, 1]);
        Complex::new(a.clone(), 0, vec![reg.clone(), reg], vec![d]).unwrap()
    }

    #[test]
    fn cone_of_identity() {
        let s = Complex::stalk(&simple(&dual()), 0);
        let c = cone(&ChainMap::identity(&s)).unwrap();
        assert_eq!((c.lo(), c.end()), (-1, 1));
        assert!(c.diff(-1).is_identity());
        let id = ChainMap::identity(&c);
        assert!(null_homotopy(&id).unwrap().is_some());
        assert_eq!(homotopy_hom_dim(&c, &c).unwrap().k_dim, 0);
    }

    #[test]
    fn stalk_is_not_contractible() {
        let s = Complex::stalk(&simple(&dual()), 0);
        assert!(null_homotopy(&ChainMap::identity(&s)).unwrap().is_none());
        let d = homotopy_hom_dim(&s, &s).unwrap();
        assert_eq!((d.chain_map_dim, d.nullhomotopic_dim, d.k_dim), (1, 0, 1));
    }

    #[test]
    fn shifts_cancel() {
        let x = mult_by_x(&dual());
        assert_eq!(x.shift(1).shift(-1), x);
        assert_eq!(x.shift(1).diff(-1), x.diff(0).scale(4));
    }

    #[test]
    fn cone_of_zero_is_sum() {
        let a = dual();
        let x = mult_by_x(&a);
        let y = Complex::stalk(&simple(&a), 0);
        let c = cone(&ChainMap::zero(&x, &y)).unwrap();
        assert_eq!((c.lo(), c.end()), (-1, 1));
        assert_eq!((c.dim(-1), c.dim(0)), (2, 3));
    }

    #[test]
    fn multiplication_complex() {
        let x = mult_by_x(&dual());
        let d = homotopy_hom_dim(&x, &x).unwrap();
        assert_eq!((d.chain_map_dim, d.nullhomotopic_dim, d.k_dim), (3, 1, 2));
        for f in chain_maps(&x, &x).unwrap() {
            if let Some(h) = null_homotopy(&f).unwrap() {
                for n in -1..3 {
                    let comp = |m: i64| {
                        h.iter().find(|(k, _)| *k == m).map(|(_, b)| b.clone()).unwrap_or_else(|| Mat::zeros(f5(), x.dim(m), x.dim(m - 1)))
                    };
                    let rebuilt = &(&comp(n) * &x.diff(n - 1)) + &(&x.diff(n) * &comp(n + 1));
                    assert_eq!(rebuilt, f.component(n));
                }
            }
        }
    }

    fn s_chi(skew: &SkewAlgebra, k: usize) -> Module {
        let act = &skew.action;
        let chars = characters(act.group(), f5()).unwrap();
        let x = EquivariantModule::with_character(act.clone(), simple(act.algebra()), &chars[k]).unwrap();
        phi_inv(skew, &x).unwrap()
    }

    #[test]
    fn equivariant_stalks() {
        let skew = c2_skew();
        let (t, s) = (Complex::stalk(&s_chi(&skew, 0), 0), Complex::stalk(&s_chi(&skew, 1), 0));
        let r = equivariant_homotopy_check(&skew, &t, &s).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!((r.skew_dims.k_dim, r.fixed_k_dim), (0, 0));
        let reg = Complex::stalk(&skew.algebra.regular_module(), 0);
        let r = equivariant_homotopy_check(&skew, &reg, &reg).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.skew_dims.k_dim, 4);
        let zero = Complex::zero(skew.algebra.clone());
        let r = equivariant_homotopy_check(&skew, &zero, &zero).unwrap();
        assert_eq!((r.skew_dims.k_dim, r.fixed_k_dim), (0, 0));
    }

    #[test]
    fn averaging_a_perturbed_identity() {
        let skew = c2_skew();
        let reg = skew.algebra.regular_module();
        let x =
            Complex::new(skew.algebra.clone(), 0, vec![reg.clone(), reg.clone()], vec![skew.algebra.left_mult(&skew.embed_base(&[0, 1]))])
                .unwrap();
        let a = ChainMap::identity(&x);
        let c = cone(&a).unwrap();
        let ca = forget_complex(&skew, &c).unwrap().complex;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        // r = id + (dh + hd) for a random A-linear h
        let mut r = ChainMap::identity(&ca);
        for m in ca.lo()..=ca.end() {
            let basis = hom_space(&ca.term(m), &ca.term(m - 1)).unwrap();
            for b in basis {
                let c0: u32 = rng.gen_range(0..5);
                let f = ChainMap::from_fn(&ca, &ca, |n| {
                    if n == m {
                        &b * &ca.diff(m - 1)
                    } else if n == m - 1 {
                        &ca.diff(m - 1) * &b
                    } else {
                        Mat::zeros(f5(), ca.dim(n), ca.dim(n))
                    }
                });
                r = ChainMap::from_fn(&ca, &ca, |n| {
                    let mut s = r.component(n);
                    s.add_scaled(&f.component(n), c0);
                    s
                });
            }
        }
        r.validate().unwrap();
        let out = tr3_average(&skew, &a, &a, &ChainMap::identity(&x), &ChainMap::identity(&x), &r).unwrap();
        assert!(out.fixed && out.completes);
    }

    #[test]
    fn truncation_of_multiplication() {
        let skew = c2_skew();
        let act = &skew.action;
        let chars = characters(act.group(), f5()).unwrap();
        let a =
            EquivariantModule::new(act.clone(), act.algebra().regular_module(), (0..2).map(|g| act.sigma(g).clone()).collect()).unwrap();
        let a_sgn = crate::equivariant::twist_by_character(&a, &chars[1]).unwrap();
        let (m0, m1) = (phi_inv(&skew, &a).unwrap(), phi_inv(&skew, &a_sgn).unwrap());
        let d = act.algebra().left_mult(&[0, 1]);
        let x = Complex::new(skew.algebra.clone(), 0, vec![m0, m1], vec![d]).unwrap();
        let t = truncate(&x, 0).unwrap();
        assert_eq!(t.le.dim(0), 1);
        assert_eq!(t.ge.dim(1), 1);
        let r = truncation_check(&skew, &x, 0).unwrap();
        assert!(r.passed(), "{r:?}");
        let stalk = Complex::stalk(&skew.algebra.regular_module(), 0);
        let t = truncate(&stalk, 5).unwrap();
        assert_eq!(t.le, stalk);
        assert!(t.ge.is_zero());
    }
}
