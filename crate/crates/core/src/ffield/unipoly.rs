use std::fmt;

use super::PrimeField;

const KARATSUBA_CUTOFF: usize = 40;

/// Dense univariate polynomial over `F_p`, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    field: PrimeField,
    coeffs: Vec<u64>,
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Schoolbook product with delayed reduction when the modulus allows it.
fn mul_school(f: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p = f.modulus();
    let n = a.len() + b.len() - 1;
    if p < 1 << 32 {
        let mut acc = vec![0u128; n];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = x as u128;
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] += x * y as u128;
            }
        }
        acc.into_iter().map(|c| (c % p as u128) as u64).collect()
    } else {
        let mut out = vec![0u64; n];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        out
    }
}

fn add_into(f: PrimeField, dst: &mut [u64], src: &[u64]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = f.add(*d, s);
    }
}

fn sub_into(f: PrimeField, dst: &mut [u64], src: &[u64]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = f.sub(*d, s);
    }
}

fn mul_kara(f: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.len() < KARATSUBA_CUTOFF || b.len() < KARATSUBA_CUTOFF {
        return mul_school(f, a, b);
    }
    let h = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(h.min(a.len()));
    let (b0, b1) = b.split_at(h.min(b.len()));
    if a1.is_empty() || b1.is_empty() {
        return mul_school(f, a, b);
    }
    let z0 = mul_kara(f, a0, b0);
    let z2 = mul_kara(f, a1, b1);
    let mut sa = a0.to_vec();
    sa.resize(a0.len().max(a1.len()), 0);
    add_into(f, &mut sa, a1);
    let mut sb = b0.to_vec();
    sb.resize(b0.len().max(b1.len()), 0);
    add_into(f, &mut sb, b1);
    let mut z1 = mul_kara(f, &sa, &sb);
    z1.resize(z1.len().max(z0.len()).max(z2.len()), 0);
    sub_into(f, &mut z1, &z0);
    sub_into(f, &mut z1, &z2);
    let mut out = vec![0u64; a.len() + b.len() - 1];
    add_into(f, &mut out, &z0);
    add_into(f, &mut out[h..], &z1);
    add_into(f, &mut out[2 * h..], &z2);
    out
}

impl UniPoly {
    /// Builds a polynomial from coefficients already reduced mod `p`.
    pub fn new(field: PrimeField, mut coeffs: Vec<u64>) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < field.modulus()));
        trim(&mut coeffs);
        UniPoly { field, coeffs }
    }

    pub fn from_i64(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: PrimeField) -> Self {
        UniPoly { field, coeffs: Vec::new() }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: PrimeField, c: u64) -> Self {
        Self::new(field, vec![c])
    }

    /// The polynomial `t`.
    pub fn var(field: PrimeField) -> Self {
        Self::new(field, vec![0, 1])
    }

    pub fn monomial(field: PrimeField, c: u64, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Self::new(field, v)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Length of the coefficient vector, `deg + 1` or 0.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lc(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Lowest index of a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let f = self.field;
        let (long, short) = if self.len() >= o.len() { (self, o) } else { (o, self) };
        let mut v = long.coeffs.clone();
        add_into(f, &mut v, &short.coeffs);
        Self::new(f, v)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let f = self.field;
        let mut v = self.coeffs.clone();
        v.resize(self.len().max(o.len()), 0);
        sub_into(f, &mut v, &o.coeffs);
        Self::new(f, v)
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        Self::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.field;
        Self::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.field, mul_kara(self.field, &self.coeffs, &o.coeffs))
    }

    /// Product reduced modulo `t^n`.
    pub fn mul_trunc(&self, o: &Self, n: usize) -> Self {
        let a = &self.coeffs[..self.len().min(n)];
        let b = &o.coeffs[..o.len().min(n)];
        let mut v = mul_kara(self.field, a, b);
        v.truncate(n);
        Self::new(self.field, v)
    }

    pub fn truncate(&self, n: usize) -> Self {
        Self::new(self.field, self.coeffs[..self.len().min(n)].to_vec())
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.coeffs);
        Self::new(self.field, v)
    }

    /// Division by `t^k`, dropping lower terms.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::new(self.field, self.coeffs.get(k..).unwrap_or(&[]).to_vec())
    }

    /// Substitutes `t -> t^q`.
    pub fn inflate(&self, q: usize) -> Self {
        if self.is_zero() || q == 1 {
            return self.clone();
        }
        let mut v = vec![0; (self.len() - 1) * q + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            v[k * q] = c;
        }
        Self::new(self.field, v)
    }

    /// Inverse of `inflate`; `None` when some exponent is not a multiple of `q`.
    pub fn deflate(&self, q: usize) -> Option<Self> {
        let mut v = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if k % q == 0 {
                v.push(c);
            } else if c != 0 {
                return None;
            }
        }
        Some(Self::new(self.field, v))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.lc()))
    }

    pub fn derivative(&self) -> Self {
        let f = self.field;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| f.mul(c, k as u64 % f.modulus()))
            .collect();
        Self::new(f, v)
    }

    pub fn eval(&self, t: u64) -> u64 {
        let f = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, t), c))
    }

    /// Euclidean division. Panics when `d` is zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let f = self.field;
        if self.len() < d.len() {
            return (Self::zero(f), self.clone());
        }
        let dl = d.len();
        let inv = f.inv(d.lc());
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; self.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let c = f.mul(r[k + dl - 1], inv);
            q[k] = c;
            if c != 0 {
                for (i, &dc) in d.coeffs.iter().enumerate() {
                    r[k + i] = f.sub(r[k + i], f.mul(c, dc));
                }
            }
        }
        r.truncate(dl - 1);
        (Self::new(f, q), Self::new(f, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Exact quotient; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd; zero only when both inputs are zero.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*o = g` and `g` monic.
    pub fn xgcd(&self, o: &Self) -> (Self, Self, Self) {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let c = f.inv(r0.lc());
        (r0.scale(c), s0.scale(c), t0.scale(c))
    }

    /// Inverse modulo `m`, when it exists.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = self.rem(m).xgcd(m);
        g.is_one().then(|| s.rem(m))
    }

    pub fn mul_mod(&self, o: &Self, m: &Self) -> Self {
        self.mul(o).rem(m)
    }

    pub fn pow_mod(&self, mut e: u128, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut r = Self::one(self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul_mod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, m);
            }
        }
        r
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut r = Self::one(self.field);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Power series inverse modulo `t^n` by Newton iteration.
    pub fn inv_series(&self, n: usize) -> Option<Self> {
        let f = self.field;
        let c0 = self.coeff(0);
        if c0 == 0 {
            return None;
        }
        let mut g = Self::constant(f, f.inv(c0));
        let mut k = 1;
        while k < n {
            k = (2 * k).min(n);
            let e = self.mul_trunc(&g, k);
            let two_minus = Self::constant(f, 2 % f.modulus()).sub(&e);
            g = g.mul_trunc(&two_minus, k);
        }
        Some(g.truncate(n))
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            match k {
                0 => write!(out, "{c}")?,
                1 if c == 1 => write!(out, "t")?,
                1 => write!(out, "{c}*t")?,
                _ if c == 1 => write!(out, "t^{k}")?,
                _ => write!(out, "{c}*t^{k}")?,
            }
        }
        Ok(())
    }
}
