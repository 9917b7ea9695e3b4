use std::collections::BTreeMap;
use std::fmt;

use crate::ffield::{PrimeField, UniPoly};

/// Sparse polynomial in `K[x, 1/x][y]`.
///
/// Keys are `(i, j)` for the monomial `x^j y^i`: `i` is the y-exponent and is
/// never negative, `j` is the x-exponent and may be negative. Zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiPoly {
    field: PrimeField,
    terms: BTreeMap<(i64, i64), u64>,
}

impl BiPoly {
    pub fn zero(field: PrimeField) -> Self {
        BiPoly { field, terms: BTreeMap::new() }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::monomial(field, 0, 0, 1)
    }

    pub fn constant(field: PrimeField, c: u64) -> Self {
        Self::monomial(field, 0, 0, c)
    }

    /// `c * x^j * y^i`.
    pub fn monomial(field: PrimeField, i: i64, j: i64, c: u64) -> Self {
        let mut p = Self::zero(field);
        p.add_term(i, j, c);
        p
    }

    /// `y`.
    pub fn y(field: PrimeField) -> Self {
        Self::monomial(field, 1, 0, 1)
    }

    /// `x`.
    pub fn x(field: PrimeField) -> Self {
        Self::monomial(field, 0, 1, 1)
    }

    /// Builds from `(i, j, c)` triples with signed coefficients; repeated monomials add up.
    pub fn from_terms<I: IntoIterator<Item = (i64, i64, i64)>>(field: PrimeField, it: I) -> Self {
        let mut p = Self::zero(field);
        for (i, j, c) in it {
            p.add_term(i, j, field.from_i64(c));
        }
        p
    }

    /// Polynomial in `y` with coefficients `rows[i]` in `K[x]`, shifted by `x^shift`.
    pub fn from_rows(field: PrimeField, rows: &[UniPoly], shift: i64) -> Self {
        let mut p = Self::zero(field);
        for (i, r) in rows.iter().enumerate() {
            for (k, &c) in r.coeffs().iter().enumerate() {
                if c != 0 {
                    p.terms.insert((i as i64, k as i64 + shift), c);
                }
            }
        }
        p
    }

    /// A univariate polynomial in `x` as a `BiPoly` of y-degree 0.
    pub fn from_x_poly(u: &UniPoly) -> Self {
        Self::from_rows(u.field(), std::slice::from_ref(u), 0)
    }

    /// A univariate polynomial in `y` as a `BiPoly` of x-degree 0.
    pub fn from_y_poly(u: &UniPoly) -> Self {
        let mut p = Self::zero(u.field());
        for (k, &c) in u.coeffs().iter().enumerate() {
            p.add_term(k as i64, 0, c);
        }
        p
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn add_term(&mut self, i: i64, j: i64, c: u64) {
        debug_assert!(i >= 0, "negative y-exponent");
        if c == 0 {
            return;
        }
        let f = self.field;
        let e = self.terms.entry((i, j)).or_insert(0);
        *e = f.add(*e, c);
        if *e == 0 {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = ((i64, i64), u64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn coeff(&self, i: i64, j: i64) -> u64 {
        self.terms.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest y-exponent, `None` for zero.
    pub fn deg_y(&self) -> Option<i64> {
        self.terms.keys().next_back().map(|k| k.0)
    }

    /// Smallest y-exponent, `None` for zero.
    pub fn ord_y(&self) -> Option<i64> {
        self.terms.keys().next().map(|k| k.0)
    }

    /// Smallest x-exponent `v0`, `None` for zero.
    pub fn v0(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.1).min()
    }

    pub fn deg_x(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.1).max()
    }

    /// The coefficient of `y^i` as `(x-exponent, coefficient)` pairs.
    pub fn row(&self, i: i64) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.terms.range((i, i64::MIN)..=(i, i64::MAX)).map(|(&(_, j), &c)| (j, c))
    }

    /// Smallest x-exponent in the coefficient of `y^i`.
    pub fn row_v0(&self, i: i64) -> Option<i64> {
        self.row(i).next().map(|(j, _)| j)
    }

    /// The coefficient of `y^i` as a polynomial in `x`. Panics on negative x-exponents.
    pub fn row_poly(&self, i: i64) -> UniPoly {
        let mut v = Vec::new();
        for (j, c) in self.row(i) {
            assert!(j >= 0, "negative x-exponent in row");
            let j = j as usize;
            if v.len() <= j {
                v.resize(j + 1, 0);
            }
            v[j] = c;
        }
        UniPoly::new(self.field, v)
    }

    /// Leading coefficient in `y` as a `BiPoly` of y-degree 0.
    pub fn lc_y(&self) -> BiPoly {
        match self.deg_y() {
            None => self.clone(),
            Some(d) => self.filter(|i, _| i == d).shift(-d, 0),
        }
    }

    /// All rows as polynomials in `x`, after dividing by `x^v0`; returns `(v0, rows)`.
    pub fn to_rows(&self) -> (i64, Vec<UniPoly>) {
        let Some(d) = self.deg_y() else {
            return (0, Vec::new());
        };
        let v0 = self.v0().unwrap();
        let mut rows = vec![Vec::new(); d as usize + 1];
        for (&(i, j), &c) in &self.terms {
            let r: &mut Vec<u64> = &mut rows[i as usize];
            let k = (j - v0) as usize;
            if r.len() <= k {
                r.resize(k + 1, 0);
            }
            r[k] = c;
        }
        (v0, rows.into_iter().map(|r| UniPoly::new(self.field, r)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (&(i, j), &c) in &o.terms {
            r.add_term(i, j, c);
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (&(i, j), &c) in &o.terms {
            r.add_term(i, j, self.field.neg(c));
        }
        r
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| self.field.neg(c))
    }

    pub fn scale(&self, s: u64) -> Self {
        self.map_coeffs(|c| self.field.mul(c, s))
    }

    fn map_coeffs(&self, f: impl Fn(u64) -> u64) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|(&k, &c)| {
                let c = f(c);
                (c != 0).then_some((k, c))
            })
            .collect();
        BiPoly { field: self.field, terms }
    }

    /// Multiplication by `x^dj y^di`.
    pub fn shift(&self, di: i64, dj: i64) -> Self {
        let terms = self.terms.iter().map(|(&(i, j), &c)| ((i + di, j + dj), c)).collect();
        BiPoly { field: self.field, terms }
    }

    /// Keeps the terms satisfying `keep(i, j)`.
    pub fn filter(&self, keep: impl Fn(i64, i64) -> bool) -> Self {
        let terms = self.terms.iter().filter(|(&(i, j), _)| keep(i, j)).map(|(&k, &c)| (k, c)).collect();
        BiPoly { field: self.field, terms }
    }

    /// Applies an exponent map that must be injective on the support.
    pub fn map_exponents(&self, f: impl Fn(i64, i64) -> (i64, i64)) -> Self {
        let mut r = Self::zero(self.field);
        for (&(i, j), &c) in &self.terms {
            let (a, b) = f(i, j);
            r.add_term(a, b, c);
        }
        r
    }

    /// Drops every term with x-exponent `>= n`.
    pub fn trunc_x(&self, n: i64) -> Self {
        self.filter(|_, j| j < n)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.mul_impl(o, None)
    }

    /// Product modulo `x^n` (absolute x-exponent bound).
    pub fn mul_trunc_x(&self, o: &Self, n: i64) -> Self {
        self.mul_impl(o, Some(n))
    }

    fn mul_impl(&self, o: &Self, bound: Option<i64>) -> Self {
        let f = self.field;
        if self.is_zero() || o.is_zero() {
            return Self::zero(f);
        }
        if self.len() == 1 || o.len() == 1 {
            let (mono, other) = if self.len() == 1 { (self, o) } else { (o, self) };
            let (&(i, j), &c) = mono.terms.iter().next().unwrap();
            let r = other.shift(i, j).scale(c);
            return match bound {
                Some(n) => r.trunc_x(n),
                None => r,
            };
        }
        // Rows are x^off P(x^g) for a common stride g; multiply the P's.
        let g = num_integer::gcd(self.x_stride(), o.x_stride()).max(1);
        if g == 1 && self.deg_y().unwrap() >= 4 && o.deg_y().unwrap() >= 4 {
            let r = self.mul_kronecker(o);
            return match bound {
                Some(n) => r.trunc_x(n),
                None => r,
            };
        }
        let (va, ra) = self.strided_rows(g);
        let (vb, rb) = o.strided_rows(g);
        let base = va + vb;
        let len = bound.map(|n| (n - base).max(0) as usize);
        if len == Some(0) {
            return Self::zero(f);
        }
        let mut rows: Vec<Vec<u64>> = vec![Vec::new(); ra.len() + rb.len() - 1];
        for (a, (oa, pa)) in ra.iter().enumerate() {
            if pa.is_zero() {
                continue;
            }
            for (b, (ob, pb)) in rb.iter().enumerate() {
                if pb.is_zero() {
                    continue;
                }
                let off = oa + ob;
                let prod = match len {
                    Some(n) if n <= off => continue,
                    Some(n) => pa.mul_trunc(pb, (n - off).div_ceil(g)),
                    None => pa.mul(pb),
                };
                let row = &mut rows[a + b];
                let need = off + g * prod.len();
                if row.len() < need {
                    row.resize(need, 0);
                }
                for (k, &c) in prod.coeffs().iter().enumerate() {
                    let slot = &mut row[off + g * k];
                    *slot = f.add(*slot, c);
                }
            }
        }
        let rows: Vec<UniPoly> = rows.into_iter().map(|r| UniPoly::new(f, r)).collect();
        Self::from_rows(f, &rows, base)
    }

    /// Product through `y -> x^w` with `w` above the x-degree of every product row.
    fn mul_kronecker(&self, o: &Self) -> Self {
        let f = self.field;
        let (va, ra) = self.to_rows();
        let (vb, rb) = o.to_rows();
        let wa = ra.iter().map(|r| r.len()).max().unwrap();
        let wb = rb.iter().map(|r| r.len()).max().unwrap();
        let w = wa + wb - 1;
        let pack = |rows: &[UniPoly]| {
            let mut v = vec![0u64; w * rows.len()];
            for (i, r) in rows.iter().enumerate() {
                v[i * w..i * w + r.len()].copy_from_slice(r.coeffs());
            }
            UniPoly::new(f, v)
        };
        let prod = pack(&ra).mul(&pack(&rb));
        let rows: Vec<UniPoly> = prod.coeffs().chunks(w).map(|c| UniPoly::new(f, c.to_vec())).collect();
        Self::from_rows(f, &rows, va + vb)
    }

    /// gcd of the x-exponent differences within each row, 0 when every row is a monomial.
    fn x_stride(&self) -> usize {
        let mut g = 0u64;
        let mut last: Option<(i64, i64)> = None;
        for &(i, j) in self.terms.keys() {
            if let Some((li, lj)) = last {
                if li == i {
                    g = num_integer::gcd(g, (j - lj) as u64);
                    if g == 1 {
                        return 1;
                    }
                }
            }
            last = Some((i, j));
        }
        g as usize
    }

    /// `(v0, rows)` with row `i` equal to `x^(v0 + off_i) P_i(x^g)`.
    fn strided_rows(&self, g: usize) -> (i64, Vec<(usize, UniPoly)>) {
        let d = self.deg_y().unwrap();
        let v0 = self.v0().unwrap();
        let mut rows: Vec<(usize, Vec<u64>)> = vec![(0, Vec::new()); d as usize + 1];
        let mut first: Option<i64> = None;
        for (&(i, j), &c) in &self.terms {
            let (off, r) = &mut rows[i as usize];
            if first != Some(i) {
                first = Some(i);
                *off = (j - v0) as usize;
            }
            let k = ((j - v0) as usize - *off) / g;
            if r.len() <= k {
                r.resize(k + 1, 0);
            }
            r[k] = c;
        }
        (v0, rows.into_iter().map(|(o, r)| (o, UniPoly::new(self.field, r))).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one(self.field);
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    pub fn derivative_y(&self) -> Self {
        let f = self.field;
        let mut r = Self::zero(f);
        for (&(i, j), &c) in &self.terms {
            if i > 0 {
                r.add_term(i - 1, j, f.mul(c, f.from_i64(i)));
            }
        }
        r
    }

    pub fn derivative_x(&self) -> Self {
        let f = self.field;
        let mut r = Self::zero(f);
        for (&(i, j), &c) in &self.terms {
            r.add_term(i, j - 1, f.mul(c, f.from_i64(j)));
        }
        r
    }

    /// Evaluates at `x = x0` to a polynomial in `y`. Requires nonnegative x-exponents unless `x0 != 0`.
    pub fn eval_x(&self, x0: u64) -> UniPoly {
        let f = self.field;
        let d = self.deg_y().unwrap_or(-1);
        let mut v = vec![0u64; (d + 1) as usize];
        for (&(i, j), &c) in &self.terms {
            let xp = if j >= 0 { f.pow(x0, j as u64) } else { f.pow(f.inv(x0), (-j) as u64) };
            v[i as usize] = f.add(v[i as usize], f.mul(c, xp));
        }
        UniPoly::new(f, v)
    }

    /// Evaluates at `y = y0` to a polynomial in `x`. Requires nonnegative x-exponents.
    pub fn eval_y(&self, y0: u64) -> UniPoly {
        let f = self.field;
        let mut acc = UniPoly::zero(f);
        if let Some(d) = self.deg_y() {
            for i in (0..=d).rev() {
                acc = acc.scale(y0).add(&self.row_poly(i));
            }
        }
        acc
    }

    /// Substitutes `x -> x^p, y -> y^p` and leaves the coefficients, which is the
    /// p-th power map over `F_p`.
    pub fn frobenius(&self) -> Self {
        let p = self.field.modulus() as i64;
        self.map_exponents(|i, j| (i * p, j * p))
    }

    /// Scales so that the given coefficient becomes 1.
    pub fn normalize_at(&self, i: i64, j: i64) -> Self {
        let c = self.coeff(i, j);
        assert!(c != 0, "normalizing at a zero coefficient");
        self.scale(self.field.inv(c))
    }

    /// Monomials in a fixed order: total degree, then y-exponent, then x-exponent.
    pub fn graded_support(&self) -> Vec<(i64, i64)> {
        let mut s: Vec<_> = self.terms.keys().copied().collect();
        s.sort_by_key(|&(i, j)| (i + j, i, j));
        s
    }
}

fn fmt_monomial(out: &mut fmt::Formatter<'_>, c: u64, i: i64, j: i64) -> fmt::Result {
    let mut parts = Vec::new();
    if c != 1 || (i == 0 && j == 0) {
        parts.push(c.to_string());
    }
    match j {
        0 => {}
        1 => parts.push("x".into()),
        _ => parts.push(format!("x^{j}")),
    }
    match i {
        0 => {}
        1 => parts.push("y".into()),
        _ => parts.push(format!("y^{i}")),
    }
    write!(out, "{}", parts.join("*"))
}

impl fmt::Display for BiPoly {
    /// Terms in decreasing `(i, j)` order, coefficients in `[0, p)`.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        for (n, (&(i, j), &c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                write!(out, " + ")?;
            }
            fmt_monomial(out, c, i, j)?;
        }
        Ok(())
    }
}
