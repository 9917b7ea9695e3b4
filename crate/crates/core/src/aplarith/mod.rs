//! Truncated arithmetic in `A_lambda`, Hensel lifting and the partial factorization.

mod hensel;
mod partial;

pub use hensel::apl_hensel;
pub use partial::{init_facto, partial_facto, InitFacto, PartialFactorization};

use crate::error::{Error, Result};
use crate::ffield::UniPoly;
use crate::slopecore::{
    alpha_lambda, ceil_rat, is_in_apl, is_in_apl_translated, tau_lambda, tau_lambda_inverse, v_lambda, BiPoly,
    Rat, Slope,
};

/// `G H` modulo `x^(n + v0(G H))`, for translated members of `A_lambda`.
pub fn apl_mul_trunc(g: &BiPoly, h: &BiPoly, l: Slope, n: i64) -> Result<BiPoly> {
    if !is_in_apl_translated(g, l) || !is_in_apl_translated(h, l) {
        return Err(Error::NotInApl);
    }
    let (Some(vg), Some(vh)) = (g.v0(), h.v0()) else {
        return Ok(BiPoly::zero(g.field()));
    };
    let top = n + vg + vh;
    Ok(g.trunc_x(top - vh).mul_trunc_x(&h.trunc_x(top - vg), top))
}

/// Inverse of a unit series modulo `x^n`.
pub fn apl_invert_unit(u: &UniPoly, n: usize) -> Result<UniPoly> {
    u.inv_series(n).ok_or(Error::NotAUnit)
}

/// Euclidean division `F = Q G + R mod x^(v0(F) + n)` with `deg_y R < deg_y G`.
///
/// The leading y-coefficient of `G` must have x-valuation `v0(G)`.
pub fn apl_div_trunc(f: &BiPoly, g: &BiPoly, l: Slope, n: i64) -> Result<(BiPoly, BiPoly)> {
    if !is_in_apl(f, l) || !is_in_apl(g, l) {
        return Err(Error::NotInApl);
    }
    div_trunc_unchecked(f, g, l, n)
}

pub(crate) fn div_trunc_unchecked(f: &BiPoly, g: &BiPoly, l: Slope, n: i64) -> Result<(BiPoly, BiPoly)> {
    let field = f.field();
    let gv0 = g.v0().ok_or(Error::ZeroPolynomial)?;
    let e = g.deg_y().unwrap();
    if g.row_v0(e) != Some(gv0) {
        return Err(Error::BadLeadingValuation);
    }
    let Some(fv0) = f.v0() else {
        return Ok((BiPoly::zero(field), BiPoly::zero(field)));
    };
    let top = fv0 + n;
    if f.deg_y().unwrap() < e {
        return Ok((BiPoly::zero(field), f.trunc_x(top)));
    }
    // normalize v0(G) = 0 by a monomial of A_lambda
    let k = -gv0;
    let alpha = alpha_lambda(k, l);
    let g0 = g.shift(alpha, k);
    let f0 = f.shift(alpha, k).trunc_x(top + k);
    let top0 = top + k;
    let u = g0.row_poly(e + alpha);
    let uinv = BiPoly::from_x_poly(&apl_invert_unit(&u, n.max(1) as usize)?);
    let gm = g0.mul_trunc_x(&uinv, n.max(1));
    let em = e + alpha;
    let mut r = f0;
    let mut q = BiPoly::zero(field);
    let d = r.deg_y().unwrap_or(-1);
    for t in (em..=d).rev() {
        let row = r.filter(|i, _| i == t);
        if row.is_zero() {
            continue;
        }
        let qt = row.shift(-em, 0);
        r = r.sub(&qt.mul_trunc_x(&gm, top0));
        q = q.add(&qt);
    }
    let q = q.mul_trunc_x(&uinv, top0);
    debug_assert!(r.ord_y().is_none_or(|o| o >= alpha));
    let r = r.shift(-alpha, -k).trunc_x(top);
    Ok((q, r))
}

/// `F G` with relative lambda-precision `sigma`, computed through `tau_lambda`.
pub fn lambda_mul_trunc(f: &BiPoly, g: &BiPoly, l: Slope, sigma: Rat) -> Result<BiPoly> {
    let n = ceil_rat(sigma * l.q()).max(1);
    let p = apl_mul_trunc(&tau_lambda(f, l), &tau_lambda(g, l), l, n)?;
    tau_lambda_inverse(&p, l)
}

/// Division by a lambda-monic `G` with `v_lambda(F - (Q G + R)) >= v_lambda(F) + sigma`.
pub fn lambda_div_trunc(f: &BiPoly, g: &BiPoly, l: Slope, sigma: Rat) -> Result<(BiPoly, BiPoly)> {
    let vg = v_lambda(g, l);
    let lt = g.filter(|i, _| Some(i) == g.deg_y());
    if g.is_zero() || v_lambda(&lt, l) != vg {
        return Err(Error::NotLambdaMonic);
    }
    let n = ceil_rat(sigma * l.q()).max(1);
    let (q, r) = apl_div_trunc(&tau_lambda(f, l), &tau_lambda(g, l), l, n)?;
    Ok((tau_lambda_inverse(&q, l)?, tau_lambda_inverse(&r, l)?))
}
