//! Cohomology of cyclic groups, computed two ways.
//!
//! * [`periodic_cohomology`] works on any finite module with a generator of order `q`
//!   using `H^1 = ker N / im(sigma - 1)` and `H^2 = ker(sigma - 1) / im N`.
//! * [`h1_lattice`] realises `H^1(G, t^a k[[t]])` for a local Artin-Schreier cover as
//!   the cokernel `M = coker(L^G -> (L/I)^G)`, restricted to a finite window
//!   `t^lo B / t^a B`. Invariants of `L` are power series in `x`, so the image of
//!   `L^G` in the window is spanned by the truncations of `x^j`.
//!
//! Window-based results are recomputed on a window wider by `p` and must agree.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::ascover::{CoverError, LatticeWindow, LocalCover};
use crate::gf::{gcd, FieldCtx};
use crate::laurent::{LaurentError, LaurentSeries};
use crate::linalg::{span_rank, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomError {
    #[error("generator does not have order dividing {q}")]
    Order { q: u64 },
    #[error("cohomological degree {0} not supported (use 0, 1 or 2)")]
    Degree(u8),
    #[error("window width {w} too small, need at least {need}")]
    WindowTooSmall { w: i64, need: i64 },
    #[error("dimension changed from {dim} to {wider} when widening the window")]
    NotStabilized { dim: usize, wider: usize },
    #[error("image of a class under d is not sigma-fixed")]
    ImageNotFixed,
    #[error("basis certificate failed: {0}")]
    Certificate(String),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Series(#[from] LaurentError),
}

/// A finite-dimensional module over `k[Z/q]`, given by the matrix of a generator.
#[derive(Debug, Clone)]
pub struct CyclicModule {
    sigma: Matrix,
    q: u64,
}

impl CyclicModule {
    pub fn new(sigma: Matrix, q: u64) -> Result<CyclicModule, CohomError> {
        if !sigma.is_square() || !sigma.pow(q).is_identity() {
            return Err(CohomError::Order { q });
        }
        Ok(CyclicModule { sigma, q })
    }

    /// `k` with trivial action.
    pub fn trivial(ctx: &Arc<FieldCtx>, dim: usize, q: u64) -> CyclicModule {
        CyclicModule {
            sigma: Matrix::identity(ctx, dim),
            q,
        }
    }

    /// `k[Z/q]^copies`, the generator acting by cyclic shift on each copy.
    pub fn free(ctx: &Arc<FieldCtx>, q: u64, copies: usize) -> CyclicModule {
        let q_us = q as usize;
        let mut shift = Matrix::zeros(ctx, q_us, q_us);
        for i in 0..q_us {
            shift.set_raw((i + 1) % q_us, i, 1);
        }
        let mut sigma = Matrix::zeros(ctx, 0, 0);
        for _ in 0..copies {
            sigma = sigma.direct_sum(&shift);
        }
        CyclicModule { sigma, q }
    }

    /// Single Jordan block `J_size` with eigenvalue 1.
    pub fn jordan_block(
        ctx: &Arc<FieldCtx>,
        size: usize,
        q: u64,
    ) -> Result<CyclicModule, CohomError> {
        let mut sigma = Matrix::identity(ctx, size);
        for i in 0..size.saturating_sub(1) {
            sigma.set_raw(i, i + 1, 1);
        }
        CyclicModule::new(sigma, q)
    }

    pub fn from_window(w: &LatticeWindow) -> CyclicModule {
        CyclicModule {
            sigma: w.sigma.clone(),
            q: w.p,
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.sigma.ctx()
    }

    pub fn sigma(&self) -> &Matrix {
        &self.sigma
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.sigma.rows()
    }

    pub fn direct_sum(&self, other: &CyclicModule) -> CyclicModule {
        CyclicModule {
            sigma: self.sigma.direct_sum(&other.sigma),
            q: self.q.max(other.q),
        }
    }

    /// `1 + sigma + ... + sigma^{q-1}`.
    pub fn norm(&self) -> Matrix {
        let mut acc = Matrix::zeros(self.ctx(), self.dim(), self.dim());
        let mut power = Matrix::identity(self.ctx(), self.dim());
        for _ in 0..self.q {
            acc = acc.add(&power).unwrap();
            power = power.mul(&self.sigma).unwrap();
        }
        acc
    }

    /// Dimension of the fixed space `ker(sigma - 1)`.
    pub fn invariants_dim(&self) -> usize {
        self.dim() - self.sigma.minus_identity().rank()
    }
}

/// `dim H^i(Z/q, M)` for `i` in `0..=2`.
pub fn periodic_cohomology(module: &CyclicModule, degree: u8) -> Result<usize, CohomError> {
    let d = module.dim();
    let s1 = module.sigma.minus_identity();
    let rank_s1 = s1.rank();
    match degree {
        0 => Ok(d - rank_s1),
        1 => {
            let ker_norm = d - module.norm().rank();
            Ok(ker_norm - rank_s1)
        }
        2 => Ok(d - rank_s1 - module.norm().rank()),
        other => Err(CohomError::Degree(other)),
    }
}

/// `floor(a / b)` for `b > 0`.
pub fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

/// `n - floor((a-1)/p) + floor((a-1-n)/p)`.
pub fn h1_closed_form(p: u64, n: u64, a: i64) -> i64 {
    let (p, n) = (p as i64, n as i64);
    n - floor_div(a - 1, p) + floor_div(a - 1 - n, p)
}

/// `floor((n+1)(p-1)/p) - 1 - floor((n-1)/p)`.
pub fn d_image_closed_form(p: u64, n: u64) -> i64 {
    let (p, n) = (p as i64, n as i64);
    floor_div((n + 1) * (p - 1), p) - 1 - floor_div(n - 1, p)
}

/// Exponents `a-n <= i <= a-1` with `p` not dividing `i`.
pub fn j_set(p: u64, n: u64, a: i64) -> Vec<i64> {
    let (p, n) = (p as i64, n as i64);
    (a - n..a).filter(|i| i.rem_euclid(p) != 0).collect()
}

/// Smallest window width accepted by the lattice computations.
pub fn min_window(p: u64, n: u64) -> i64 {
    (n + p + 1) as i64
}

/// Precision needed to run [`h1_lattice`] at cutoff `a` with width `w` (including
/// the stabilisation rerun), and [`d_image_rank`] with width `w`.
pub fn required_prec(p: u64, n: u64, w: i64) -> i64 {
    let (p, n) = (p as i64, n as i64);
    // widest window: d-image target, width w + n + 2 + p, plus p for x-truncations
    (w + n + 2 + p + p + 1).max(n * p + p + 1)
}

/// Default precision: `a + W + n p + 4` guard terms, raised to what the windows need.
pub fn default_prec(p: u64, n: u64, a: i64, w: i64) -> i64 {
    (a + w + (n * p) as i64 + 4).max(required_prec(p, n, w))
}

/// Basis of `M = (L/I)^G / image(L^G)` inside a window.
#[derive(Debug, Clone)]
pub struct CohomologyClassSet {
    pub window: LatticeWindow,
    /// Coset representatives, as coordinate vectors in the window.
    pub basis: Vec<Vec<u64>>,
    /// Fixed vectors `(window)^G`.
    pub invariants: Vec<Vec<u64>>,
    /// Truncations of `x^j`, with `j`.
    pub image: Vec<(i64, Vec<u64>)>,
}

impl CohomologyClassSet {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn ctx(&self) -> &Arc<FieldCtx> {
        self.window.sigma.ctx()
    }

    fn image_vectors(&self) -> Vec<Vec<u64>> {
        self.image.iter().map(|(_, v)| v.clone()).collect()
    }

    /// Whether a fixed vector is zero in `M`.
    pub fn is_zero_class(&self, v: &[u64]) -> bool {
        let dim = self.window.dim();
        let mut vs = self.image_vectors();
        let base = span_rank(self.ctx(), dim, &vs);
        vs.push(v.to_vec());
        span_rank(self.ctx(), dim, &vs) == base
    }

    /// Rank in `M` of a family of fixed vectors.
    pub fn class_rank(&self, family: &[Vec<u64>]) -> usize {
        let dim = self.window.dim();
        let mut vs = self.image_vectors();
        let base = span_rank(self.ctx(), dim, &vs);
        vs.extend(family.iter().cloned());
        span_rank(self.ctx(), dim, &vs) - base
    }

    /// Representatives as Laurent polynomials, known modulo `t^a`.
    pub fn representatives(&self) -> Vec<LaurentSeries> {
        self.basis
            .iter()
            .map(|v| LaurentSeries::from_raw(self.ctx(), self.window.lo, v, self.window.a))
            .collect()
    }
}

fn lattice_once(cov: &LocalCover, a: i64, w: i64) -> Result<CohomologyClassSet, CohomError> {
    let lo = a - w;
    let window = cov.window(a, lo)?;
    let ctx = window.sigma.ctx().clone();
    let invariants = window.sigma.minus_identity().kernel();
    let image = cov.invariant_truncations(a, lo)?;
    let dim = window.dim();

    let mut spanning: Vec<Vec<u64>> = image.iter().map(|(_, v)| v.clone()).collect();
    let mut rank = span_rank(&ctx, dim, &spanning);
    if rank != spanning.len() {
        return Err(CohomError::Certificate(
            "x^j truncations are dependent".into(),
        ));
    }
    let mut basis = Vec::new();
    for v in &invariants {
        spanning.push(v.clone());
        let r = span_rank(&ctx, dim, &spanning);
        if r > rank {
            rank = r;
            basis.push(v.clone());
        } else {
            spanning.pop();
        }
    }
    if rank != invariants.len() {
        return Err(CohomError::Certificate(
            "x^j truncations are not sigma-fixed".into(),
        ));
    }
    Ok(CohomologyClassSet {
        window,
        basis,
        invariants,
        image,
    })
}

/// `H^1(G, t^a B)` as `M` on the window `[a - w, a)`; the dimension must be unchanged
/// on the window `[a - w - p, a)`.
pub fn h1_lattice(cov: &LocalCover, a: i64, w: i64) -> Result<CohomologyClassSet, CohomError> {
    let need = min_window(cov.p(), cov.n());
    if w < need {
        return Err(CohomError::WindowTooSmall { w, need });
    }
    let res = lattice_once(cov, a, w)?;
    let wider = lattice_once(cov, a, w + cov.p() as i64)?;
    if wider.dim() != res.dim() {
        return Err(CohomError::NotStabilized {
            dim: res.dim(),
            wider: wider.dim(),
        });
    }
    Ok(res)
}

/// [`h1_lattice`] on a freshly built cover with the default precision policy.
pub fn h1_local(p: u64, n: u64, a: i64, w: i64) -> Result<CohomologyClassSet, CohomError> {
    let cov = LocalCover::build(p, n, default_prec(p, n, a, w))?;
    h1_lattice(&cov, a, w)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisCertificate {
    pub a: i64,
    /// Exponents whose classes form a basis of `M`.
    pub basis_exponents: Vec<i64>,
    /// `(i, i/p)`: `t^i` agrees with `x^{i/p}` below `t^a`, so `[t^i] = 0`.
    pub vanishing: Vec<(i64, i64)>,
}

/// Certifies that `{[t^i] : i in J}` is a basis of `M` and that `[t^i] = 0` for the
/// multiples of `p` in `[a-n, a-1]`.
pub fn h1_basis_certificate(
    cov: &LocalCover,
    a: i64,
    w: i64,
) -> Result<BasisCertificate, CohomError> {
    let m = h1_lattice(cov, a, w)?;
    let (p, n) = (cov.p() as i64, cov.n() as i64);
    let fail = |s: String| CohomError::Certificate(s);
    let j = j_set(cov.p(), cov.n(), a);
    let mut family = Vec::new();
    for &i in &j {
        let v = m
            .window
            .unit_vector(i)
            .ok_or_else(|| fail(format!("t^{i} outside the window")))?;
        if !m.window.is_fixed(&v) {
            return Err(fail(format!("t^{i} is not fixed modulo t^{a}")));
        }
        family.push(v);
    }
    if m.class_rank(&family) != j.len() {
        return Err(fail("classes of t^i, i in J, are dependent".into()));
    }
    if j.len() != m.dim() {
        return Err(fail(format!("|J| = {} but dim M = {}", j.len(), m.dim())));
    }
    let mut vanishing = Vec::new();
    for i in (a - n..a).filter(|i| i.rem_euclid(p) == 0) {
        let jx = i / p;
        let (_, xv) = m
            .image
            .iter()
            .find(|(e, _)| *e == jx)
            .ok_or_else(|| fail(format!("x^{jx} missing from the window")))?;
        if Some(xv.clone()) != m.window.unit_vector(i) {
            return Err(fail(format!("x^{jx} differs from t^{i} below t^{a}")));
        }
        vanishing.push((i, jx));
    }
    Ok(BasisCertificate {
        a,
        basis_exponents: j,
        vanishing,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DImage {
    pub rank: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    /// `i` in `[-n, -1]` with `[d t^i]` part of a basis of the image, in the order found.
    pub surviving_exponents: Vec<i64>,
}

fn d_image_once(cov: &LocalCover, w: i64) -> Result<DImage, CohomError> {
    let n = cov.n() as i64;
    let ctx = cov.ctx().clone();
    let m1 = lattice_once(cov, 0, w)?;
    let m2 = lattice_once(cov, n + 1, w + n + 2)?;
    let lo2 = m2.window.lo;

    let to_target = |h: &LaurentSeries| -> Result<Vec<u64>, CohomError> {
        // h dt  <->  t^{n+1} h'
        let image = h.derivative().shift(n + 1);
        image.window_coeffs(lo2, n + 1).ok_or(CohomError::Cover(
            CoverError::InsufficientPrecision {
                prec: image.prec(),
                need: n + 1,
            },
        ))
    };

    // representatives of M1 are exact Laurent polynomials supported in [-w, -1]
    let lift = |v: &[u64]| LaurentSeries::from_raw(&ctx, m1.window.lo, v, n + 2);
    let mut images = Vec::new();
    for v in &m1.basis {
        let img = to_target(&lift(v))?;
        if !m2.window.is_fixed(&img) {
            return Err(CohomError::ImageNotFixed);
        }
        images.push(img);
    }
    let rank = m2.class_rank(&images);

    let mut surviving = Vec::new();
    let mut family = Vec::new();
    for i in -n..0 {
        let Some(v) = m1.window.unit_vector(i) else {
            continue;
        };
        if !m1.window.is_fixed(&v) {
            continue;
        }
        let img = to_target(&lift(&v))?;
        family.push(img);
        if m2.class_rank(&family) == family.len() {
            surviving.push(i);
        } else {
            family.pop();
        }
    }
    Ok(DImage {
        rank,
        source_dim: m1.dim(),
        target_dim: m2.dim(),
        surviving_exponents: surviving,
    })
}

/// Rank of `d : H^1(G, B) -> H^1(G, B dt)` via `M_1 -> M_2`, `[h] -> [t^{n+1} h']`.
///
/// `M_1` is the lattice model at `a = 0` with width `w`, `M_2` the one at `a = n + 1`
/// with width `w + n + 2`. The rank must be unchanged at width `w + p`.
pub fn d_image_rank(cov: &LocalCover, w: i64) -> Result<DImage, CohomError> {
    let need = min_window(cov.p(), cov.n());
    if w < need {
        return Err(CohomError::WindowTooSmall { w, need });
    }
    let res = d_image_once(cov, w)?;
    let wider = d_image_once(cov, w + cov.p() as i64)?;
    if wider.rank != res.rank {
        return Err(CohomError::NotStabilized {
            dim: res.rank,
            wider: wider.rank,
        });
    }
    Ok(res)
}

/// [`d_image_rank`] on a freshly built cover with the minimal window.
pub fn d_image_local(p: u64, n: u64) -> Result<DImage, CohomError> {
    let w = min_window(p, n);
    let cov = LocalCover::build(p, n, required_prec(p, n, w))?;
    d_image_rank(&cov, w)
}

/// Whether `(p, n)` is a valid local datum.
pub fn valid_jump(p: u64, n: u64) -> bool {
    n > 0 && gcd(n, p) == 1
}
