//! Local normal form of a totally ramified `Z/p`-point with ramification jump `n`.
//!
//! Upstairs the completed local ring is `k[[t]]` with `z = t^{-n}` and `sigma(z) = z + 1`,
//! which forces `sigma(t) = t (1 + t^n)^{-1/n}`. Downstairs the invariant parameter is
//! `x = t^p (1 - t^{n(p-1)})^{-1/n}`, characterised by `x^{-n} = t^{-np} - t^{-n}`.
//! The `n`-th roots are the principal ones (constant term 1), which pins down one
//! generator `sigma` of the group.

use std::sync::Arc;

use thiserror::Error;

use crate::gf::{gcd, is_prime, FieldCtx};
use crate::laurent::{LaurentError, LaurentSeries};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("jump {n} must be positive and prime to p = {p}")]
    BadJump { p: u64, n: u64 },
    #[error("precision {prec} too small: need at least {need}")]
    InsufficientPrecision { prec: i64, need: i64 },
    #[error("window needs lo < a, got lo = {lo}, a = {a}")]
    EmptyWindow { lo: i64, a: i64 },
    #[error("normal form identity fails: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Series(#[from] LaurentError),
}

#[derive(Debug, Clone)]
pub struct LocalCover {
    ctx: Arc<FieldCtx>,
    p: u64,
    n: u64,
    prec: i64,
    sigma_t: LaurentSeries,
    x_t: LaurentSeries,
}

impl LocalCover {
    /// Builds `sigma(t)` and `x(t)` modulo `t^prec`; needs `prec > n p + p`.
    pub fn build(p: u64, n: u64, prec: i64) -> Result<LocalCover, CoverError> {
        if !is_prime(p) {
            return Err(CoverError::NotPrime(p));
        }
        if n == 0 || gcd(n, p) != 1 {
            return Err(CoverError::BadJump { p, n });
        }
        let need = (n * p + p) as i64 + 1;
        if prec < need {
            return Err(CoverError::InsufficientPrecision { prec, need });
        }
        let ctx = FieldCtx::prime(p).map_err(|_| CoverError::NotPrime(p))?;
        let (ni, pi) = (n as i64, p as i64);

        let one_plus = LaurentSeries::from_terms(&ctx, &[(0, 1), (ni, 1)], prec - 1);
        let sigma_t = one_plus.nth_root(n)?.invert()?.shift(1);

        let one_minus = LaurentSeries::from_terms(&ctx, &[(0, 1), (ni * (pi - 1), -1)], prec - pi);
        let x_t = one_minus.nth_root(n)?.invert()?.shift(pi);

        Ok(LocalCover {
            ctx,
            p,
            n,
            prec,
            sigma_t,
            x_t,
        })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn sigma_t(&self) -> &LaurentSeries {
        &self.sigma_t
    }

    pub fn x_t(&self) -> &LaurentSeries {
        &self.x_t
    }

    /// `sigma(h)` for a series `h` in `t`.
    pub fn apply_sigma(&self, h: &LaurentSeries) -> Result<LaurentSeries, CoverError> {
        Ok(h.substitute(&self.sigma_t)?)
    }

    /// `sigma^k(t)`.
    pub fn sigma_power_t(&self, k: u64) -> Result<LaurentSeries, CoverError> {
        let mut s = LaurentSeries::t_pow(&self.ctx, 1, self.prec);
        for _ in 0..k {
            s = s.substitute(&self.sigma_t)?;
        }
        Ok(s)
    }

    /// Checks the defining identities of the normal form to the available precision.
    pub fn verify_normal_form(&self) -> Result<NormalFormReport, CoverError> {
        let ctx = &self.ctx;
        let (n, p) = (self.n as i64, self.p as i64);
        let fail = |what: &str| CoverError::Inconsistent(what.to_string());

        let sp = self.sigma_power_t(self.p)?;
        if !sp.agrees_with(&LaurentSeries::t_pow(ctx, 1, self.prec)) {
            return Err(fail("sigma^p(t) = t"));
        }

        let z = LaurentSeries::t_pow(ctx, -n, self.prec);
        let sz = self.apply_sigma(&z)?;
        let z_plus_one = z.add(&LaurentSeries::one(ctx, self.prec))?;
        if !sz.agrees_with(&z_plus_one) {
            return Err(fail("sigma(t^-n) = t^-n + 1"));
        }

        let sx = self.apply_sigma(&self.x_t)?;
        if !sx.agrees_with(&self.x_t) {
            return Err(fail("sigma(x) = x"));
        }

        let lhs = self.x_t.pow(-n)?;
        let rhs = LaurentSeries::t_pow(ctx, -n * p, self.prec)
            .sub(&LaurentSeries::t_pow(ctx, -n, self.prec))?;
        if !lhs.agrees_with(&rhs) {
            return Err(fail("x^-n = t^-np - t^-n"));
        }

        // x = t^p + (1/n) t^{p + n(p-1)} + higher
        let diff = self.x_t.sub(&LaurentSeries::t_pow(ctx, p, self.prec))?;
        let second_exp = p + n * (p - 1);
        let inv_n = ctx.int(n).inv().map_err(LaurentError::from)?;
        if diff.val() != second_exp || diff.leading_coeff() != Some(inv_n) {
            return Err(fail("x = t^p + (1/n) t^(p + n(p-1)) + ..."));
        }

        // sigma(t) = t - (1/n) t^{n+1} + ...
        let corr = self.sigma_t.sub(&LaurentSeries::t_pow(ctx, 1, self.prec))?;
        if corr.val() != n + 1 || corr.leading_coeff() != Some(-ctx.int(n).inv().unwrap()) {
            return Err(fail("sigma(t) = t - (1/n) t^(n+1) + ..."));
        }

        Ok(NormalFormReport {
            p: self.p,
            n: self.n,
            prec: self.prec,
            checked_to: sp.prec().min(sz.prec()).min(sx.prec()).min(lhs.prec()),
            x_second_term_exponent: second_exp,
        })
    }

    /// Checks that `dt/t^{n+1}` is invariant and equals `-dx/x^{n+1}`.
    ///
    /// Returns `false` with a diagnostic instead of erroring.
    pub fn invariant_differential_check(&self) -> (bool, String) {
        let run = || -> Result<(bool, String), CoverError> {
            let ctx = &self.ctx;
            let m = self.n as i64 + 1;
            let form = LaurentSeries::t_pow(ctx, -m, self.prec);
            let pulled = self.sigma_t.derivative().mul(&self.sigma_t.pow(-m)?)?;
            if !pulled.agrees_with(&form) {
                return Ok((false, format!("sigma^*(dt/t^{m}) = {pulled}")));
            }
            let via_x = self.x_t.derivative().mul(&self.x_t.pow(-m)?)?;
            if !via_x.agrees_with(&form.neg()) {
                return Ok((false, format!("dx/x^{m} = {via_x} dt")));
            }
            Ok((
                true,
                format!("checked modulo t^{}", pulled.prec().min(via_x.prec())),
            ))
        };
        run().unwrap_or_else(|e| (false, e.to_string()))
    }

    /// Matrix of `sigma` on `span{t^i : lo <= i < a}` modulo `t^a`.
    pub fn window(&self, a: i64, lo: i64) -> Result<LatticeWindow, CoverError> {
        if lo >= a {
            return Err(CoverError::EmptyWindow { lo, a });
        }
        let ctx = &self.ctx;
        let width = (a - lo) as usize;
        // sigma(t^i) = t^i u^i with u = sigma(t)/t, needed modulo t^{a - lo}.
        let need = a - lo;
        if self.prec - 1 < need {
            return Err(CoverError::InsufficientPrecision {
                prec: self.prec,
                need: need + 1,
            });
        }
        let u = self.sigma_t.shift(-1).truncate(need);
        let mut ui = u.pow(lo)?;
        let mut sigma = Matrix::zeros(ctx, width, width);
        for col in 0..width {
            let i = lo + col as i64;
            let image = ui.shift(i);
            let coords = image
                .window_coeffs(lo, a)
                .ok_or(CoverError::InsufficientPrecision {
                    prec: image.prec(),
                    need: a,
                })?;
            for (row, v) in coords.into_iter().enumerate() {
                sigma.set_raw(row, col, v);
            }
            ui = ui.mul(&u)?;
        }
        if !sigma.is_lower_triangular() || (0..width).any(|i| sigma.raw(i, i) != 1) {
            return Err(CoverError::Inconsistent(
                "sigma matrix is not unipotent lower triangular".into(),
            ));
        }
        Ok(LatticeWindow {
            p: self.p,
            n: self.n,
            a,
            lo,
            sigma,
        })
    }

    /// Coordinates of `x^j` truncated below `t^a` in the window `[lo, a)`,
    /// for every `j` with `lo <= p j <= a - 1`, paired with `j`.
    pub fn invariant_truncations(
        &self,
        a: i64,
        lo: i64,
    ) -> Result<Vec<(i64, Vec<u64>)>, CoverError> {
        let p = self.p as i64;
        let need = a - lo;
        if self.prec - p < need {
            return Err(CoverError::InsufficientPrecision {
                prec: self.prec,
                need: need + p,
            });
        }
        let v = self.x_t.shift(-p).truncate(need);
        let j_lo = lo.div_euclid(p) + i64::from(lo.rem_euclid(p) != 0);
        let j_hi = (a - 1).div_euclid(p);
        let mut out = Vec::new();
        if j_lo > j_hi {
            return Ok(out);
        }
        let mut vj = v.pow(j_lo)?;
        for j in j_lo..=j_hi {
            let xj = vj.shift(p * j);
            let coords = xj
                .window_coeffs(lo, a)
                .ok_or(CoverError::InsufficientPrecision {
                    prec: xj.prec(),
                    need: a,
                })?;
            out.push((j, coords));
            vj = vj.mul(&v)?;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFormReport {
    pub p: u64,
    pub n: u64,
    pub prec: i64,
    /// Smallest precision at which the identities were compared.
    pub checked_to: i64,
    pub x_second_term_exponent: i64,
}

/// `sigma` acting on `t^lo B / t^a B`, basis `t^lo, ..., t^{a-1}` in increasing order.
#[derive(Debug, Clone)]
pub struct LatticeWindow {
    pub p: u64,
    pub n: u64,
    pub a: i64,
    pub lo: i64,
    pub sigma: Matrix,
}

impl LatticeWindow {
    pub fn dim(&self) -> usize {
        (self.a - self.lo) as usize
    }

    pub fn index_of(&self, exp: i64) -> Option<usize> {
        (self.lo..self.a)
            .contains(&exp)
            .then(|| (exp - self.lo) as usize)
    }

    pub fn exponent_of(&self, idx: usize) -> i64 {
        self.lo + idx as i64
    }

    /// Coordinate vector of `t^exp`.
    pub fn unit_vector(&self, exp: i64) -> Option<Vec<u64>> {
        let idx = self.index_of(exp)?;
        let mut v = vec![0; self.dim()];
        v[idx] = 1;
        Some(v)
    }

    pub fn is_fixed(&self, v: &[u64]) -> bool {
        self.sigma.mul_vec(v) == v
    }
}
