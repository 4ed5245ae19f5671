//! Truncated Laurent series `sum_{i >= val} c_i t^i + O(t^prec)` over a finite field.
//!
//! Storage is dense from the valuation up to the absolute precision. Every operation
//! computes the precision its inputs actually determine and never pads beyond it:
//!
//! * `f + g` is known modulo `t^min(prec_f, prec_g)`;
//! * `f * g` is known modulo `t^min(val_f + prec_g, val_g + prec_f)`;
//! * inversion and powers keep the relative precision `prec - val`;
//! * the derivative loses one order.
//!
//! A series with no nonzero stored coefficient is zero modulo `t^prec`; its
//! valuation is reported as `prec`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::gf::{gcd, nth_root_raw, FieldCtx, FieldElement, GfError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("series belong to different fields")]
    CtxMismatch,
    #[error("series is zero modulo t^{prec} and cannot be inverted")]
    NotInvertible { prec: i64 },
    #[error("substitution needs an inner series of valuation exactly 1, got {val}")]
    BadSubstitution { val: i64 },
    #[error("cannot take an {n}-th root: {reason}")]
    Root { n: u64, reason: String },
    #[error(transparent)]
    Field(#[from] GfError),
}

#[derive(Clone)]
pub struct LaurentSeries {
    ctx: Arc<FieldCtx>,
    val: i64,
    prec: i64,
    /// Coefficients of `t^val, ..., t^{prec-1}`; the first one is nonzero.
    coeffs: Vec<u64>,
}

impl LaurentSeries {
    /// `sum_k coeffs[k] t^{start + k} + O(t^prec)`; coefficients at or beyond `prec` are dropped.
    pub fn from_raw(ctx: &Arc<FieldCtx>, start: i64, coeffs: &[u64], prec: i64) -> LaurentSeries {
        let mut dense = Vec::new();
        let mut val = prec;
        for (k, &c) in coeffs.iter().enumerate() {
            let e = start + k as i64;
            if e >= prec {
                break;
            }
            debug_assert!(c < ctx.order());
            if dense.is_empty() {
                if c == 0 {
                    continue;
                }
                val = e;
            }
            dense.push(c);
        }
        if !dense.is_empty() {
            dense.resize((prec - val) as usize, 0);
        }
        LaurentSeries {
            ctx: Arc::clone(ctx),
            val,
            prec,
            coeffs: dense,
        }
    }

    /// Series from `(exponent, integer coefficient)` terms, reduced into the prime field.
    pub fn from_terms(ctx: &Arc<FieldCtx>, terms: &[(i64, i64)], prec: i64) -> LaurentSeries {
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return LaurentSeries::zero(ctx, prec);
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap().max(lo);
        let mut dense = vec![0u64; (hi - lo + 1) as usize];
        for &(e, c) in terms {
            let idx = (e - lo) as usize;
            dense[idx] = ctx.add(dense[idx], ctx.from_int(c));
        }
        LaurentSeries::from_raw(ctx, lo, &dense, prec)
    }

    pub fn zero(ctx: &Arc<FieldCtx>, prec: i64) -> LaurentSeries {
        LaurentSeries {
            ctx: Arc::clone(ctx),
            val: prec,
            prec,
            coeffs: Vec::new(),
        }
    }

    pub fn one(ctx: &Arc<FieldCtx>, prec: i64) -> LaurentSeries {
        LaurentSeries::from_raw(ctx, 0, &[1], prec)
    }

    /// `c t^exp + O(t^prec)`.
    pub fn monomial(ctx: &Arc<FieldCtx>, exp: i64, c: &FieldElement, prec: i64) -> LaurentSeries {
        LaurentSeries::from_raw(ctx, exp, &[c.raw()], prec)
    }

    /// `t^exp + O(t^prec)`.
    pub fn t_pow(ctx: &Arc<FieldCtx>, exp: i64, prec: i64) -> LaurentSeries {
        LaurentSeries::from_raw(ctx, exp, &[1], prec)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    /// Valuation; equals `prec()` when the series is zero to its precision.
    pub fn val(&self) -> i64 {
        self.val
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Number of known coefficients from the valuation on.
    pub fn rel_prec(&self) -> i64 {
        self.prec - self.val
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Raw coefficient of `t^i`, or `None` when `i >= prec`.
    pub fn coeff_raw(&self, i: i64) -> Option<u64> {
        if i >= self.prec {
            None
        } else if i < self.val {
            Some(0)
        } else {
            Some(self.coeffs[(i - self.val) as usize])
        }
    }

    pub fn coeff(&self, i: i64) -> Option<FieldElement> {
        self.coeff_raw(i).map(|v| self.ctx.elem(v))
    }

    pub fn leading_coeff(&self) -> Option<FieldElement> {
        self.coeffs.first().map(|&v| self.ctx.elem(v))
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, FieldElement)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (self.val + k as i64, self.ctx.elem(c)))
    }

    /// Drops everything at or above `t^prec` (no-op if already coarser).
    pub fn truncate(&self, prec: i64) -> LaurentSeries {
        if prec >= self.prec {
            return self.clone();
        }
        LaurentSeries::from_raw(&self.ctx, self.val, &self.coeffs, prec)
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> LaurentSeries {
        LaurentSeries {
            ctx: Arc::clone(&self.ctx),
            val: self.val + k,
            prec: self.prec + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Equality of both series modulo `t^min(prec_f, prec_g)`.
    pub fn agrees_with(&self, other: &LaurentSeries) -> bool {
        self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    fn check_ctx(&self, other: &LaurentSeries) -> Result<(), LaurentError> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx {
            Ok(())
        } else {
            Err(LaurentError::CtxMismatch)
        }
    }

    pub fn add(&self, other: &LaurentSeries) -> Result<LaurentSeries, LaurentError> {
        self.check_ctx(other)?;
        let prec = self.prec.min(other.prec);
        let lo = self.val.min(other.val).min(prec);
        let f = &self.ctx;
        let dense: Vec<u64> = (lo..prec)
            .map(|i| f.add(self.coeff_raw(i).unwrap(), other.coeff_raw(i).unwrap()))
            .collect();
        Ok(LaurentSeries::from_raw(f, lo, &dense, prec))
    }

    pub fn neg(&self) -> LaurentSeries {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = self.ctx.neg(*c);
        }
        out
    }

    pub fn sub(&self, other: &LaurentSeries) -> Result<LaurentSeries, LaurentError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElement) -> LaurentSeries {
        let dense: Vec<u64> = self
            .coeffs
            .iter()
            .map(|&v| self.ctx.mul(v, c.raw()))
            .collect();
        LaurentSeries::from_raw(&self.ctx, self.val, &dense, self.prec)
    }

    pub fn mul(&self, other: &LaurentSeries) -> Result<LaurentSeries, LaurentError> {
        self.check_ctx(other)?;
        let f = &self.ctx;
        let val = self.val + other.val;
        let prec = (self.val + other.prec).min(other.val + self.prec);
        let n = (prec - val).max(0) as usize;
        let mut out = vec![0u64; n];
        for (i, &a) in self.coeffs.iter().enumerate().take(n) {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(n - i) {
                if b != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        Ok(LaurentSeries::from_raw(f, val, &out, prec))
    }

    pub fn invert(&self) -> Result<LaurentSeries, LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::NotInvertible { prec: self.prec });
        }
        let f = &self.ctx;
        let n = self.coeffs.len();
        let b0 = f.inv(self.coeffs[0])?;
        let mut b = vec![0u64; n];
        b[0] = b0;
        for k in 1..n {
            let mut s = 0;
            for j in 1..=k {
                s = f.add(s, f.mul(self.coeffs[j], b[k - j]));
            }
            b[k] = f.neg(f.mul(b0, s));
        }
        Ok(LaurentSeries::from_raw(
            f,
            -self.val,
            &b,
            -self.val + n as i64,
        ))
    }

    /// Integer power; negative exponents go through [`invert`](Self::invert).
    ///
    /// `f^0` is `1` with the relative precision of `f`.
    pub fn pow(&self, e: i64) -> Result<LaurentSeries, LaurentError> {
        if e < 0 {
            return self.invert()?.pow(-e);
        }
        let mut acc = LaurentSeries::one(&self.ctx, self.rel_prec().max(0));
        if e == 0 {
            return Ok(acc);
        }
        let mut base = self.clone();
        let mut e = e as u64;
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                acc = if first { base.clone() } else { acc.mul(&base)? };
                first = false;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Formal derivative `d/dt`.
    pub fn derivative(&self) -> LaurentSeries {
        let f = &self.ctx;
        let dense: Vec<u64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| f.mul(f.from_int(self.val + k as i64), c))
            .collect();
        if self.is_zero() {
            return LaurentSeries::zero(f, self.prec - 1);
        }
        LaurentSeries::from_raw(f, self.val - 1, &dense, self.prec - 1)
    }

    /// Composition `self(g)` for `g` of valuation exactly 1.
    ///
    /// The result is known modulo `t^min(prec_f, val_f + prec_g - 1)`.
    pub fn substitute(&self, g: &LaurentSeries) -> Result<LaurentSeries, LaurentError> {
        self.check_ctx(g)?;
        if g.is_zero() || g.val != 1 {
            return Err(LaurentError::BadSubstitution { val: g.val });
        }
        let f = &self.ctx;
        if self.is_zero() {
            return Ok(LaurentSeries::zero(f, self.prec));
        }
        let v = self.val;
        let rel = (self.prec - v).min(g.prec - 1);
        let g = g.truncate(1 + rel);
        // self = t^v * h(t) with h a power series, so self(g) = g^v * h(g).
        let mut acc = LaurentSeries::zero(f, rel);
        for k in (0..rel).rev() {
            let c = self.coeffs[k as usize];
            acc = acc.mul(&g)?.truncate(rel);
            acc = acc.add(&LaurentSeries::from_raw(f, 0, &[c], rel))?;
        }
        acc.mul(&g.pow(v)?)
    }

    /// An `n`-th root, `gcd(n, p) = 1`, `n | val`.
    ///
    /// The leading coefficient's root comes from [`FieldElement::nth_root`] (so the
    /// root of a series with leading coefficient 1 also has leading coefficient 1);
    /// the unit part is lifted by Newton iteration with doubling precision.
    pub fn nth_root(&self, n: u64) -> Result<LaurentSeries, LaurentError> {
        let f = &self.ctx;
        let fail = |reason: String| LaurentError::Root { n, reason };
        if n == 0 || gcd(n, f.p()) != 1 {
            return Err(fail(format!("degree not coprime to p = {}", f.p())));
        }
        if self.is_zero() {
            return Err(fail("series is zero to its precision".into()));
        }
        if self.val.rem_euclid(n as i64) != 0 {
            return Err(fail(format!(
                "valuation {} is not divisible by {n}",
                self.val
            )));
        }
        let lead = self.coeffs[0];
        let root0 = nth_root_raw(f, lead, n).map_err(|e| fail(e.to_string()))?;
        let rel = self.rel_prec();
        // unit = self / (lead t^val), constant term 1
        let lead_inv = f.inv(lead)?;
        let unit_coeffs: Vec<u64> = self.coeffs.iter().map(|&c| f.mul(c, lead_inv)).collect();
        let unit = LaurentSeries::from_raw(f, 0, &unit_coeffs, rel);
        let n_inv = f.inv(f.from_int(n as i64))?;
        let mut u = LaurentSeries::one(f, 1.min(rel));
        let mut cur = 1.min(rel);
        while cur < rel {
            cur = (2 * cur).min(rel);
            let u_ext = LaurentSeries::from_raw(f, 0, &u.coeffs_from(0, cur), cur);
            let un1 = u_ext.pow(n as i64 - 1)?;
            let un = un1.mul(&u_ext)?;
            let residual = un.sub(&unit.truncate(cur))?;
            let step = residual.mul(&un1.invert()?)?.scale(&f.elem(n_inv));
            u = u_ext.sub(&step)?.truncate(cur);
        }
        let root = u.scale(&f.elem(root0)).shift(self.val / n as i64);
        Ok(root)
    }

    /// Dense raw coefficients of `t^lo, ..., t^{hi-1}` with unknown digits read as 0.
    fn coeffs_from(&self, lo: i64, hi: i64) -> Vec<u64> {
        (lo..hi).map(|i| self.coeff_raw(i).unwrap_or(0)).collect()
    }

    /// Raw coefficients of `t^lo, ..., t^{hi-1}`; `None` if `hi > prec`.
    pub fn window_coeffs(&self, lo: i64, hi: i64) -> Option<Vec<u64>> {
        if hi > self.prec {
            return None;
        }
        Some(self.coeffs_from(lo, hi))
    }
}

impl PartialEq for LaurentSeries {
    /// Exact structural equality: same field, precision and coefficients.
    fn eq(&self, other: &Self) -> bool {
        self.check_ctx(other).is_ok()
            && self.prec == other.prec
            && self.val == other.val
            && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (e, c) in self.terms() {
            let coeff = if c.is_one() && e != 0 {
                String::new()
            } else if self.ctx.degree() > 1 && e != 0 {
                format!("({c})")
            } else {
                c.to_string()
            };
            parts.push(match e {
                0 => c.to_string(),
                1 => format!("{coeff}t"),
                _ => format!("{coeff}t^{e}"),
            });
        }
        parts.push(format!("O(t^{})", self.prec));
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u64) -> Arc<FieldCtx> {
        FieldCtx::prime(p).unwrap()
    }

    fn series(ctx: &Arc<FieldCtx>, val: i64, coeffs: &[u64], prec: i64) -> LaurentSeries {
        let raw: Vec<u64> = coeffs.iter().map(|c| c % ctx.order()).collect();
        LaurentSeries::from_raw(ctx, val, &raw, prec)
    }

    #[test]
    fn invert_t() {
        let f = fp(5);
        let t = LaurentSeries::t_pow(&f, 1, 10);
        let inv = t.invert().unwrap();
        assert_eq!(inv.val(), -1);
        assert_eq!(inv.rel_prec(), t.rel_prec());
        assert_eq!(inv.prec(), 8);
        assert_eq!(inv.terms().count(), 1);
    }

    #[test]
    fn one_plus_t_times_one_minus_t() {
        let f = fp(5);
        let a = LaurentSeries::from_terms(&f, &[(0, 1), (1, 1)], 12);
        let b = LaurentSeries::from_terms(&f, &[(0, 1), (1, -1)], 12);
        let expect = LaurentSeries::from_terms(&f, &[(0, 1), (2, -1)], 12);
        assert_eq!(a.mul(&b).unwrap(), expect);
    }

    #[test]
    fn inverse_of_one_plus_t_in_f3() {
        let f = fp(3);
        let a = LaurentSeries::from_terms(&f, &[(0, 1), (1, 1)], 8);
        let inv = a.pow(-1).unwrap();
        let got: Vec<u64> = (0..8).map(|i| inv.coeff_raw(i).unwrap()).collect();
        assert_eq!(got, vec![1, 2, 1, 2, 1, 2, 1, 2]);
        // re-multiplication oracle
        assert!(inv.mul(&a).unwrap().agrees_with(&LaurentSeries::one(&f, 8)));
    }

    #[test]
    fn derivative_examples() {
        let f3 = fp(3);
        let d = LaurentSeries::t_pow(&f3, -2, 5).derivative();
        assert_eq!(d, LaurentSeries::from_terms(&f3, &[(-3, 1)], 4));
        let f5 = fp(5);
        assert!(LaurentSeries::t_pow(&f5, 5, 20).derivative().is_zero());
        let d = LaurentSeries::from_terms(&f5, &[(0, 1), (1, 1), (2, 1)], 10).derivative();
        assert_eq!(d, LaurentSeries::from_terms(&f5, &[(0, 1), (1, 2)], 9));
    }

    #[test]
    fn substitute_examples() {
        let f7 = fp(7);
        let t2 = LaurentSeries::t_pow(&f7, 2, 12);
        let g = LaurentSeries::from_terms(&f7, &[(1, 1), (2, 1)], 12);
        let expect = LaurentSeries::from_terms(&f7, &[(2, 1), (3, 2), (4, 1)], 12);
        assert_eq!(t2.substitute(&g).unwrap(), expect);

        let f3 = fp(3);
        let tinv = LaurentSeries::t_pow(&f3, -1, 10);
        let g = LaurentSeries::from_terms(&f3, &[(1, 1), (2, 1)], 10);
        let s = tinv.substitute(&g).unwrap();
        assert_eq!(s.val(), -1);
        assert!(s.mul(&g).unwrap().agrees_with(&LaurentSeries::one(&f3, 10)));
        let leading: Vec<u64> = (-1..2).map(|i| s.coeff_raw(i).unwrap()).collect();
        assert_eq!(leading, vec![1, 2, 1]);

        let f = LaurentSeries::from_terms(&f3, &[(-2, 1), (0, 2), (3, 1)], 9);
        let t = LaurentSeries::t_pow(&f3, 1, 20);
        assert_eq!(f.substitute(&t).unwrap(), f);

        assert_eq!(
            f.substitute(&LaurentSeries::t_pow(&f3, 2, 10)),
            Err(LaurentError::BadSubstitution { val: 2 })
        );
    }

    #[test]
    fn nth_root_examples() {
        for p in [2u64, 3, 5, 7] {
            let f = fp(p);
            for n in (1..=6u64).filter(|&n| gcd(n, p) == 1) {
                let ni = n as i64;
                let prec = 4 * ni + 3;
                let a = LaurentSeries::from_terms(&f, &[(0, 1), (ni, 1)], prec);
                let r = a.nth_root(n).unwrap();
                assert!(r.pow(ni).unwrap().agrees_with(&a));
                let inv_n = f.int(ni).inv().unwrap();
                assert_eq!(r.coeff(0).unwrap(), f.one());
                assert_eq!(r.coeff(ni).unwrap(), inv_n);
                for i in 1..ni {
                    assert!(r.coeff(i).unwrap().is_zero());
                }
            }
        }
        let f3 = fp(3);
        let r = LaurentSeries::t_pow(&f3, 2, 10).nth_root(2).unwrap();
        assert_eq!(r, LaurentSeries::t_pow(&f3, 1, 9));
        let f11 = fp(11);
        assert_eq!(
            LaurentSeries::one(&f11, 10).nth_root(5).unwrap(),
            LaurentSeries::one(&f11, 10)
        );
    }

    #[test]
    fn nth_root_preconditions() {
        let f3 = fp(3);
        let one = LaurentSeries::one(&f3, 5);
        assert!(matches!(one.nth_root(3), Err(LaurentError::Root { .. })));
        assert!(matches!(
            LaurentSeries::t_pow(&f3, 1, 5).nth_root(2),
            Err(LaurentError::Root { .. })
        ));
        assert!(matches!(
            LaurentSeries::zero(&f3, 5).nth_root(2),
            Err(LaurentError::Root { .. })
        ));
        // 2 is not a square mod 3
        let two = LaurentSeries::from_terms(&f3, &[(0, 2)], 5);
        assert!(matches!(two.nth_root(2), Err(LaurentError::Root { .. })));
    }

    #[test]
    fn precision_is_tracked() {
        let f = fp(5);
        let a = LaurentSeries::from_terms(&f, &[(-2, 1), (0, 3)], 4);
        let b = LaurentSeries::from_terms(&f, &[(1, 2)], 10);
        // a*b known to min(-2 + 10, 1 + 4)
        assert_eq!(a.mul(&b).unwrap().prec(), 5);
        assert_eq!(a.add(&b).unwrap().prec(), 4);
        let z = LaurentSeries::zero(&f, 3);
        assert_eq!(z.mul(&b).unwrap().prec(), 4);
        assert_eq!(z.invert(), Err(LaurentError::NotInvertible { prec: 3 }));
        // cancellation leaves zero at the common precision
        let d = a.sub(&a).unwrap();
        assert!(d.is_zero());
        assert_eq!(d.val(), 4);
    }

    fn arb_unit_series(p: u64, len: usize) -> impl Strategy<Value = (i64, Vec<u64>)> {
        (-4i64..4, 1..p, proptest::collection::vec(0..p, len)).prop_map(|(v, lead, mut rest)| {
            rest.insert(0, lead);
            (v, rest)
        })
    }

    proptest! {
        #[test]
        fn double_inversion((v, c) in arb_unit_series(7, 12)) {
            let f = fp(7);
            let s = series(&f, v, &c, v + 13);
            let back = s.invert().unwrap().invert().unwrap();
            prop_assert!(back.agrees_with(&s));
            prop_assert_eq!(back.prec(), s.prec());
        }

        #[test]
        fn leibniz_rule(
            (v1, c1) in arb_unit_series(5, 10),
            (v2, c2) in arb_unit_series(5, 10),
        ) {
            let f = fp(5);
            let a = series(&f, v1, &c1, v1 + 11);
            let b = series(&f, v2, &c2, v2 + 11);
            let lhs = a.mul(&b).unwrap().derivative();
            let rhs = a.derivative().mul(&b).unwrap().add(&a.mul(&b.derivative()).unwrap()).unwrap();
            prop_assert!(lhs.agrees_with(&rhs));
        }

        #[test]
        fn substitution_is_multiplicative(
            (v1, c1) in arb_unit_series(3, 8),
            (v2, c2) in arb_unit_series(3, 8),
            (lead, tail) in (1u64..3, proptest::collection::vec(0u64..3, 10)),
        ) {
            let f = fp(3);
            let a = series(&f, v1, &c1, v1 + 9);
            let b = series(&f, v2, &c2, v2 + 9);
            let mut gc = vec![lead];
            gc.extend(tail);
            let g = series(&f, 1, &gc, 12);
            let lhs = a.mul(&b).unwrap().substitute(&g).unwrap();
            let rhs = a.substitute(&g).unwrap().mul(&b.substitute(&g).unwrap()).unwrap();
            prop_assert!(lhs.agrees_with(&rhs));
            let sum_l = a.add(&b).unwrap().substitute(&g).unwrap();
            let sum_r = a.substitute(&g).unwrap().add(&b.substitute(&g).unwrap()).unwrap();
            prop_assert!(sum_l.agrees_with(&sum_r));
        }
    }

    #[test]
    fn nth_root_round_trip_random() {
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for p in [2u64, 3, 5, 7] {
            let f = fp(p);
            for n in (1..=6u64).filter(|&n| gcd(n, p) == 1) {
                let mut done = 0;
                while done < 100 {
                    let k = rng.gen_range(-2i64..3);
                    let lead = rng.gen_range(1..p);
                    let mut c = vec![lead];
                    c.extend((0..15).map(|_| rng.gen_range(0..p)));
                    let val = k * n as i64;
                    let s = series(&f, val, &c, val + 16);
                    match s.nth_root(n) {
                        Ok(r) => {
                            assert!(r.pow(n as i64).unwrap().agrees_with(&s));
                            assert_eq!(r.pow(n as i64).unwrap().prec(), s.prec());
                            done += 1;
                        }
                        Err(LaurentError::Root { .. }) => {
                            // only possible when the leading coefficient has no root
                            assert!(f.elem(lead).nth_root(n).is_err());
                        }
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }
}
