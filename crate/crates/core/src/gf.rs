//! Prime fields `F_p` and small extensions `F_{p^m} = F_p[w]/(modulus)`.
//!
//! Elements are stored as a single integer `v < p^m` whose base-`p` digits are the
//! coefficients of `1, w, ..., w^{m-1}`. That integer is also the enumeration order
//! used by [`FieldElement::nth_root`]. Hot loops elsewhere in the crate work on these
//! raw values through the `FieldCtx` methods so that no context handle is cloned per
//! coefficient.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus must be monic of degree >= 1 with coefficients below p")]
    BadModulus,
    #[error("modulus is reducible over F_{0}")]
    Reducible(u64),
    #[error("field of order {0}^{1} is too large")]
    TooLarge(u64, usize),
    #[error("elements belong to different fields")]
    CtxMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("root degree {n} is not coprime to the characteristic {p}")]
    RootDegree { n: u64, p: u64 },
    #[error("no {n}-th root exists in this field")]
    NoRoot { n: u64 },
}

/// Largest field order for which a full multiplication table is cached.
const TABLE_LIMIT: u64 = 256;

pub struct FieldCtx {
    p: u64,
    m: usize,
    /// Monic modulus, low degree first, length `m + 1`. Empty for prime fields.
    modulus: Vec<u64>,
    order: u64,
    mul_table: Option<Vec<u32>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{} mod {:?}", self.p, self.m, self.modulus)
        }
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

impl FieldCtx {
    /// The prime field `F_p`, `p < 2^31`.
    pub fn prime(p: u64) -> Result<Arc<FieldCtx>, GfError> {
        if !is_prime(p) || p >= (1 << 31) {
            return Err(GfError::NotPrime(p));
        }
        Ok(Arc::new(FieldCtx {
            p,
            m: 1,
            modulus: Vec::new(),
            order: p,
            mul_table: None,
        }))
    }

    /// `F_p[w]/(modulus)`; `modulus` is monic, low degree first.
    pub fn extension(p: u64, modulus: &[u64]) -> Result<Arc<FieldCtx>, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(GfError::BadModulus);
        }
        let m = modulus.len() - 1;
        if m == 1 {
            return Self::prime(p);
        }
        let order = (0..m)
            .try_fold(1u64, |acc, _| acc.checked_mul(p).filter(|&q| q < (1 << 32)))
            .ok_or(GfError::TooLarge(p, m))?;
        if !poly::is_irreducible(modulus, p) {
            return Err(GfError::Reducible(p));
        }
        let mut ctx = FieldCtx {
            p,
            m,
            modulus: modulus.to_vec(),
            order,
            mul_table: None,
        };
        if order <= TABLE_LIMIT {
            let q = order as usize;
            let mut table = vec![0u32; q * q];
            for a in 0..q {
                for b in 0..q {
                    table[a * q + b] = ctx.mul_poly(a as u64, b as u64) as u32;
                }
            }
            ctx.mul_table = Some(table);
        }
        Ok(Arc::new(ctx))
    }

    /// `F_4 = F_2[w]/(w^2 + w + 1)`; `w` has raw value 2 and `w^2 = w + 1` has raw value 3.
    pub fn f4() -> Arc<FieldCtx> {
        Self::extension(2, &[1, 1, 1]).expect("w^2 + w + 1 is irreducible over F_2")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    // Raw arithmetic on encoded values.

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.m == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else if self.p == 2 {
            a ^ b
        } else {
            self.digitwise(a, b, |x, y| (x + y) % self.p)
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.m == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else if self.p == 2 {
            a
        } else {
            self.digitwise(a, 0, |x, _| (self.p - x) % self.p)
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.m == 1 {
            a * b % self.p
        } else if let Some(table) = &self.mul_table {
            table[(a * self.order + b) as usize] as u64
        } else {
            self.mul_poly(a, b)
        }
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64, GfError> {
        if a == 0 {
            return Err(GfError::DivisionByZero);
        }
        Ok(self.pow(a, self.order - 2))
    }

    /// Image of an integer under `Z -> F_p -> F_{p^m}`.
    pub fn from_int(&self, i: i64) -> u64 {
        i.rem_euclid(self.p as i64) as u64
    }

    pub fn elem(self: &Arc<Self>, raw: u64) -> FieldElement {
        debug_assert!(raw < self.order);
        FieldElement {
            ctx: Arc::clone(self),
            v: raw,
        }
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        self.elem(0)
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.elem(1)
    }

    pub fn int(self: &Arc<Self>, i: i64) -> FieldElement {
        self.elem(self.from_int(i))
    }

    /// Element with the given coefficients on `1, w, ..., w^{m-1}`.
    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[u64]) -> FieldElement {
        let raw = coeffs
            .iter()
            .take(self.m)
            .rev()
            .fold(0u64, |acc, &c| acc * self.p + c % self.p);
        self.elem(raw)
    }

    /// All elements in enumeration order.
    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order).map(move |v| self.elem(v))
    }

    fn digits(&self, mut a: u64) -> Vec<u64> {
        let mut d = vec![0; self.m];
        for slot in d.iter_mut() {
            *slot = a % self.p;
            a /= self.p;
        }
        d
    }

    fn undigits(&self, d: &[u64]) -> u64 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn digitwise(&self, a: u64, b: u64, f: impl Fn(u64, u64) -> u64) -> u64 {
        let (da, db) = (self.digits(a), self.digits(b));
        let out: Vec<u64> = da.iter().zip(&db).map(|(&x, &y)| f(x, y)).collect();
        self.undigits(&out)
    }

    fn mul_poly(&self, a: u64, b: u64) -> u64 {
        let p = self.p;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * self.m - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for k in (self.m..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            // w^k = w^{k-m} * (-(modulus - w^m))
            for (j, &mc) in self.modulus[..self.m].iter().enumerate() {
                let idx = k - self.m + j;
                prod[idx] = (prod[idx] + (p - c) * mc) % p;
            }
            prod[k] = 0;
        }
        self.undigits(&prod[..self.m])
    }
}

mod poly {
    //! Dense polynomials over `F_p`, just enough for irreducibility testing.

    fn trim(f: &mut Vec<u64>) {
        while f.len() > 1 && *f.last().unwrap() == 0 {
            f.pop();
        }
    }

    /// Remainder of `f` modulo the monic `g`.
    fn rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
        let mut r = f.to_vec();
        let dg = g.len() - 1;
        while r.len() > dg && !(r.len() == 1 && r[0] == 0) {
            let dr = r.len() - 1;
            let c = r[dr];
            if c != 0 {
                for (j, &gj) in g.iter().enumerate() {
                    let idx = dr - dg + j;
                    r[idx] = (r[idx] + (p - c) * gj) % p;
                }
            }
            r.pop();
        }
        if r.is_empty() {
            r.push(0);
        }
        trim(&mut r);
        r
    }

    /// Exhaustive search for a monic factor of degree `1..=deg/2`.
    pub(super) fn is_irreducible(f: &[u64], p: u64) -> bool {
        let deg = f.len() - 1;
        for d in 1..=deg / 2 {
            let count = p.pow(d as u32);
            for code in 0..count {
                let mut g = Vec::with_capacity(d + 1);
                let mut c = code;
                for _ in 0..d {
                    g.push(c % p);
                    c /= p;
                }
                g.push(1);
                let r = rem(f, &g, p);
                if r.len() == 1 && r[0] == 0 {
                    return false;
                }
            }
        }
        true
    }
}

/// An element of a [`FieldCtx`].
#[derive(Clone)]
pub struct FieldElement {
    ctx: Arc<FieldCtx>,
    v: u64,
}

impl FieldElement {
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn raw(&self) -> u64 {
        self.v
    }

    pub fn is_zero(&self) -> bool {
        self.v == 0
    }

    pub fn is_one(&self) -> bool {
        self.v == 1
    }

    /// Coefficients on `1, w, ..., w^{m-1}`.
    pub fn coeffs(&self) -> Vec<u64> {
        self.ctx.digits(self.v)
    }

    fn same_ctx(&self, other: &Self) -> Result<(), GfError> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx {
            Ok(())
        } else {
            Err(GfError::CtxMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, GfError> {
        self.same_ctx(other)?;
        Ok(self.ctx.elem(self.ctx.add(self.v, other.v)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, GfError> {
        self.same_ctx(other)?;
        Ok(self.ctx.elem(self.ctx.sub(self.v, other.v)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, GfError> {
        self.same_ctx(other)?;
        Ok(self.ctx.elem(self.ctx.mul(self.v, other.v)))
    }

    pub fn inv(&self) -> Result<Self, GfError> {
        Ok(self.ctx.elem(self.ctx.inv(self.v)?))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, GfError> {
        self.same_ctx(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, e: u64) -> Self {
        self.ctx.elem(self.ctx.pow(self.v, e))
    }

    /// An `n`-th root of `self`, `gcd(n, p) = 1`.
    ///
    /// Returns 1 when `self` is 1; otherwise the first root in enumeration order.
    pub fn nth_root(&self, n: u64) -> Result<Self, GfError> {
        nth_root_raw(&self.ctx, self.v, n).map(|v| self.ctx.elem(v))
    }
}

pub(crate) fn nth_root_raw(ctx: &FieldCtx, a: u64, n: u64) -> Result<u64, GfError> {
    if n == 0 || gcd(n, ctx.p) != 1 {
        return Err(GfError::RootDegree { n, p: ctx.p });
    }
    if a == 1 {
        return Ok(1);
    }
    (0..ctx.order)
        .find(|&r| ctx.pow(r, n) == a)
        .ok_or(GfError::NoRoot { n })
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v && self.same_ctx(other).is_ok()
    }
}

impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ctx.m == 1 {
            return write!(f, "{}", self.v);
        }
        let terms: Vec<String> = self
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "w".to_string(),
                (1, c) => format!("{c}w"),
                (i, 1) => format!("w^{i}"),
                (i, c) => format!("{c}w^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        /// Panics if the operands live in different fields.
        impl std::ops::$tr for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field context mismatch")
            }
        }
        impl std::ops::$tr for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$checked(&rhs).expect("field context mismatch")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.ctx.elem(self.ctx.neg(self.v))
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(f4: &Arc<FieldCtx>) -> FieldElement {
        f4.elem(2)
    }

    #[test]
    fn add_examples() {
        let f3 = FieldCtx::prime(3).unwrap();
        assert_eq!(f3.int(2) + f3.int(2), f3.int(1));
        let f4 = FieldCtx::f4();
        assert!((w(&f4) + w(&f4)).is_zero());
        let f5 = FieldCtx::prime(5).unwrap();
        assert_eq!(f5.int(0) + f5.int(4), f5.int(4));
    }

    #[test]
    fn ctx_mismatch_is_an_error() {
        let f3 = FieldCtx::prime(3).unwrap();
        let f5 = FieldCtx::prime(5).unwrap();
        assert_eq!(f3.one().try_add(&f5.one()), Err(GfError::CtxMismatch));
        // Structurally equal contexts are compatible.
        let other3 = FieldCtx::prime(3).unwrap();
        assert!(f3.one().try_add(&other3.one()).is_ok());
    }

    #[test]
    fn inverse_examples() {
        let f5 = FieldCtx::prime(5).unwrap();
        assert_eq!(f5.int(2).inv().unwrap(), f5.int(3));
        let f4 = FieldCtx::f4();
        let w = w(&f4);
        assert_eq!(w.inv().unwrap(), &w * &w);
        let f7 = FieldCtx::prime(7).unwrap();
        assert_eq!(f7.one().inv().unwrap(), f7.one());
        assert_eq!(f7.zero().inv(), Err(GfError::DivisionByZero));
    }

    #[test]
    fn f4_structure() {
        let f4 = FieldCtx::f4();
        let w = w(&f4);
        let w2 = &w * &w;
        assert_eq!(w2.coeffs(), vec![1, 1]);
        assert_eq!(w2.raw(), 3);
        assert!((&w2 * &w).is_one());
        assert_eq!(w2.to_string(), "1+w");
    }

    #[test]
    fn nth_root_examples() {
        let f7 = FieldCtx::prime(7).unwrap();
        assert_eq!(f7.one().nth_root(3).unwrap(), f7.one());
        let f4 = FieldCtx::f4();
        let w2 = f4.elem(3);
        assert_eq!(w2.nth_root(3), Err(GfError::NoRoot { n: 3 }));
        let f5 = FieldCtx::prime(5).unwrap();
        // 2 comes before 3 in enumeration order.
        assert_eq!(f5.int(4).nth_root(2).unwrap(), f5.int(2));
        assert_eq!(
            f5.int(4).nth_root(5),
            Err(GfError::RootDegree { n: 5, p: 5 })
        );
    }

    #[test]
    fn rejects_bad_contexts() {
        assert_eq!(FieldCtx::prime(9).unwrap_err(), GfError::NotPrime(9));
        // w^2 + 1 = (w + 1)^2 over F_2
        assert_eq!(
            FieldCtx::extension(2, &[1, 0, 1]).unwrap_err(),
            GfError::Reducible(2)
        );
        // w^2 + 1 is irreducible over F_3
        assert_eq!(FieldCtx::extension(3, &[1, 0, 1]).unwrap().order(), 9);
        // w^4 + w^2 + 1 = (w^2 + w + 1)^2 over F_2: no roots, still reducible
        assert!(FieldCtx::extension(2, &[1, 0, 1, 0, 1]).is_err());
        assert_eq!(
            FieldCtx::extension(2, &[1, 1, 0, 0, 1]).unwrap().order(),
            16
        );
    }

    fn contexts() -> Vec<Arc<FieldCtx>> {
        vec![
            FieldCtx::prime(2).unwrap(),
            FieldCtx::prime(7).unwrap(),
            FieldCtx::prime(2147483647).unwrap(),
            FieldCtx::f4(),
            FieldCtx::extension(3, &[1, 0, 1]).unwrap(),
            FieldCtx::extension(2, &[1, 1, 0, 0, 1]).unwrap(),
            FieldCtx::extension(5, &[1, 1, 0, 1]).unwrap(),
            // too big for a table: w^2 - 3 over F_17
            FieldCtx::extension(17, &[14, 0, 1]).unwrap(),
        ]
    }

    #[test]
    fn field_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for ctx in contexts() {
            let q = ctx.order();
            for _ in 0..1000 {
                let a = ctx.elem(rng.gen_range(0..q));
                let b = ctx.elem(rng.gen_range(0..q));
                let c = ctx.elem(rng.gen_range(0..q));
                assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                assert_eq!(&a * &b, &b * &a);
                assert!((&a + &(-&a)).is_zero());
                if !a.is_zero() {
                    assert!((&a * &a.inv().unwrap()).is_one());
                }
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        let f4 = FieldCtx::f4();
        for a in f4.elements() {
            for b in f4.elements() {
                assert_eq!((&a + &b).pow(2), &a.pow(2) + &b.pow(2));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for ctx in contexts() {
            let (p, q) = (ctx.p(), ctx.order());
            for _ in 0..200 {
                let a = ctx.elem(rng.gen_range(0..q));
                let b = ctx.elem(rng.gen_range(0..q));
                assert_eq!((&a + &b).pow(p), &a.pow(p) + &b.pow(p));
            }
        }
    }

    #[test]
    fn nth_roots_are_roots() {
        for ctx in [
            FieldCtx::prime(7).unwrap(),
            FieldCtx::prime(11).unwrap(),
            FieldCtx::f4(),
            FieldCtx::extension(3, &[1, 0, 1]).unwrap(),
        ] {
            for n in 1..=6u64 {
                for a in ctx.elements() {
                    match a.nth_root(n) {
                        Ok(r) => assert_eq!(r.pow(n), a),
                        Err(GfError::RootDegree { .. }) => assert!(gcd(n, ctx.p()) != 1),
                        Err(GfError::NoRoot { .. }) => {
                            assert!(ctx.elements().all(|r| r.pow(n) != a))
                        }
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }
}
