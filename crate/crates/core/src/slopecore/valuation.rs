use super::slope::{Rat, Slope, Val};
use super::BiPoly;
use crate::error::{Error, Result};

/// `v_lambda(F) = min(j + i*lambda)` over the support.
pub fn v_lambda(f: &BiPoly, l: Slope) -> Val {
    f.terms()
        .map(|((i, j), _)| l.scaled_weight(i, j))
        .min()
        .map_or(Val::Inf, |w| Val::Finite(Rat::new(w, l.q())))
}

/// `d_lambda(F) = max(j + i*lambda)`; `None` for zero.
pub fn d_lambda(f: &BiPoly, l: Slope) -> Option<Rat> {
    f.terms().map(|((i, j), _)| l.scaled_weight(i, j)).max().map(|w| Rat::new(w, l.q()))
}

/// Keeps the terms with `j + i*lambda <= sigma`.
pub fn trunc_lambda(f: &BiPoly, l: Slope, sigma: Rat) -> BiPoly {
    let bound = sigma * l.q();
    f.filter(|i, j| Rat::from_integer(l.scaled_weight(i, j)) <= bound)
}

/// The lambda-homogeneous component of lowest weight.
pub fn in_lambda(f: &BiPoly, l: Slope) -> BiPoly {
    match f.terms().map(|((i, j), _)| l.scaled_weight(i, j)).min() {
        None => f.clone(),
        Some(w) => f.filter(|i, j| l.scaled_weight(i, j) == w),
    }
}

/// Initial and leading y-terms together with the defects of straightness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaParts {
    pub a: Rat,
    pub b: Rat,
    pub m: Rat,
    pub in_y: BiPoly,
    pub lt_y: BiPoly,
}

pub fn lambda_parts(f: &BiPoly, l: Slope) -> LambdaParts {
    assert!(!f.is_zero(), "lambda_parts of zero");
    let s = f.ord_y().unwrap();
    let n = f.deg_y().unwrap();
    let in_y = f.filter(|i, _| i == s);
    let lt_y = f.filter(|i, _| i == n);
    let v = v_lambda(f, l).unwrap();
    let a = v_lambda(&in_y, l).unwrap() - v;
    let b = v_lambda(&lt_y, l).unwrap() - v;
    LambdaParts { a, b, m: a.max(b), in_y, lt_y }
}

/// `F(x, y) -> F(x^q, x^m y)`, i.e. `(i, j) -> (i, q j + m i)`.
pub fn tau_lambda(f: &BiPoly, l: Slope) -> BiPoly {
    f.map_exponents(|i, j| (i, l.q() * j + l.m() * i))
}

pub fn tau_lambda_inverse(f: &BiPoly, l: Slope) -> Result<BiPoly> {
    if !is_in_apl(f, l) {
        return Err(Error::NotInApl);
    }
    Ok(f.map_exponents(|i, j| (i, (j - l.m() * i) / l.q())))
}

/// The residue `k * m^-1 mod q` in `[0, q)`.
pub fn alpha_lambda(k: i64, l: Slope) -> i64 {
    (k.rem_euclid(l.q()) * l.m_inv_mod_q()).rem_euclid(l.q())
}

/// Membership in the image of `tau_lambda`: every term has `i m = j mod q`.
pub fn is_in_apl(f: &BiPoly, l: Slope) -> bool {
    f.terms().all(|((i, j), _)| (i * l.m() - j).rem_euclid(l.q()) == 0)
}

/// Membership in `x^a y^b A_lambda` for some monomial: all residues `i m - j mod q` agree.
pub fn is_in_apl_translated(f: &BiPoly, l: Slope) -> bool {
    let mut res = f.terms().map(|((i, j), _)| (i * l.m() - j).rem_euclid(l.q()));
    match res.next() {
        None => true,
        Some(r) => res.all(|s| s == r),
    }
}

/// `y^d F(x, 1/y)` with `d = deg_y F`.
pub fn reciprocal(f: &BiPoly) -> BiPoly {
    match f.deg_y() {
        None => f.clone(),
        Some(d) => f.map_exponents(|i, j| (d - i, j)),
    }
}

/// `-(v0(p_n) - v0(p_s)) / (n - s)` for the extreme y-strata.
pub fn average_slope(f: &BiPoly) -> Result<Slope> {
    let (Some(s), Some(n)) = (f.ord_y(), f.deg_y()) else {
        return Err(Error::ZeroPolynomial);
    };
    if n == s {
        return Err(Error::SingleYStratum);
    }
    let vs = f.row_v0(s).unwrap();
    let vn = f.row_v0(n).unwrap();
    Ok(Slope::new(vs - vn, n - s))
}

/// Relative `lambda2`-precision that guarantees relative `lambda`-precision `sigma` on `P`.
pub fn sigma_prime(l: Slope, l2: Slope, sigma: Rat, p: &BiPoly) -> Rat {
    let base = sigma + v_lambda(p, l).unwrap() - v_lambda(p, l2).unwrap();
    if l2 >= l {
        let n = p.deg_y().unwrap_or(0);
        base + (l2.as_rat() - l.as_rat()) * n
    } else {
        base
    }
}
