use crate::error::{Error, Result};
use crate::ffield::UniPoly;
use crate::slopecore::{is_in_apl, BiPoly, Slope};

use super::div_trunc_unchecked;

/// Lifts `f = g h mod x` to `mod x^n` with `h` monic, quadratically.
fn lift_pair(f: &BiPoly, g0: &UniPoly, h0: &UniPoly, l: Slope, n: i64) -> Result<(BiPoly, BiPoly)> {
    let field = f.field();
    let (gcd, s0, t0) = g0.xgcd(h0);
    if !gcd.is_one() {
        return Err(Error::NotCoprime);
    }
    let one = BiPoly::one(field);
    let mut g = BiPoly::from_y_poly(g0);
    let mut h = BiPoly::from_y_poly(h0);
    let mut s = BiPoly::from_y_poly(&s0);
    let mut t = BiPoly::from_y_poly(&t0);
    let div = |a: &BiPoly, b: &BiPoly, k: i64| -> Result<(BiPoly, BiPoly)> {
        match a.v0() {
            None => Ok((BiPoly::zero(field), BiPoly::zero(field))),
            Some(v) if v >= k => Ok((BiPoly::zero(field), BiPoly::zero(field))),
            Some(v) => div_trunc_unchecked(a, b, l, k - v),
        }
    };
    let mut k = 1;
    while k < n {
        let k2 = (2 * k).min(n);
        let e = f.trunc_x(k2).sub(&g.mul_trunc_x(&h, k2));
        let (q, r) = div(&s.mul_trunc_x(&e, k2), &h, k2)?;
        let g2 = g.add(&t.mul_trunc_x(&e, k2)).add(&q.mul_trunc_x(&g, k2)).trunc_x(k2);
        let h2 = h.add(&r).trunc_x(k2);
        if k2 < n {
            let b = s.mul_trunc_x(&g2, k2).add(&t.mul_trunc_x(&h2, k2)).sub(&one).trunc_x(k2);
            let (_, d) = div(&s.mul_trunc_x(&b, k2), &h2, k2)?;
            s = s.sub(&d).trunc_x(k2);
            let rest = one.sub(&s.mul_trunc_x(&g2, k2));
            t = div(&rest, &h2, k2)?.0;
        }
        g = g2;
        h = h2;
        k = k2;
    }
    Ok((g.trunc_x(n), h.trunc_x(n)))
}

fn product(field: crate::ffield::PrimeField, fs: &[UniPoly]) -> UniPoly {
    fs.iter().fold(UniPoly::one(field), |a, b| a.mul(b))
}

fn split_tree(m: &BiPoly, fs: &[UniPoly], l: Slope, n: i64, out: &mut Vec<BiPoly>) -> Result<()> {
    if fs.len() == 1 {
        out.push(m.clone());
        return Ok(());
    }
    let (left, right) = fs.split_at(fs.len() / 2);
    let field = m.field();
    let (a, b) = lift_pair(m, &product(field, left), &product(field, right), l, n)?;
    split_tree(&a, left, l, n, out)?;
    split_tree(&b, right, l, n, out)
}

/// Multifactor Hensel lifting in `A_lambda^+`.
///
/// `init` are the monic factors of `F(0, y)` and `unit` its leading constant.
/// Returns the lifted monic factors, in the order of `init`, and the unit
/// branch `F_inf`, all modulo `x^n`.
pub fn apl_hensel(f: &BiPoly, init: &[UniPoly], unit: u64, l: Slope, n: i64) -> Result<(Vec<BiPoly>, BiPoly)> {
    let field = f.field();
    if !is_in_apl(f, l) || f.v0().is_some_and(|v| v < 0) {
        return Err(Error::NotInApl);
    }
    let f0 = f.filter(|_, j| j == 0);
    let f0y = f0.eval_x(0);
    if product(field, init).scale(unit) != f0y || unit == 0 {
        return Err(Error::InitMismatch);
    }
    for a in 0..init.len() {
        for b in a + 1..init.len() {
            if !init[a].gcd(&init[b]).is_one() {
                return Err(Error::NotCoprime);
            }
        }
    }
    let f = f.trunc_x(n);
    if init.is_empty() {
        return Ok((Vec::new(), f));
    }
    let (g_inf, m) = if init.iter().map(|g| g.len() - 1).sum::<usize>() == f.deg_y().unwrap() as usize
        && f.row_poly(f.deg_y().unwrap()).is_one()
        && unit == 1
    {
        (BiPoly::one(field), f.clone())
    } else {
        lift_pair(&f, &UniPoly::constant(field, unit), &product(field, init), l, n)?
    };
    let mut out = Vec::new();
    split_tree(&m, init, l, n, &mut out)?;
    Ok((out, g_inf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::PrimeField;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn hensel_example() {
        let f = fp(101);
        // y^2 + (1 + x) y + x = (y + x)(y + 1)
        let big = BiPoly::from_terms(f, [(2, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]);
        let init = [UniPoly::var(f), UniPoly::from_i64(f, &[1, 1])];
        let (fs, inf) = apl_hensel(&big, &init, 1, Slope::integer(0), 3).unwrap();
        assert_eq!(fs[0], BiPoly::from_terms(f, [(1, 0, 1), (0, 1, 1)]));
        assert_eq!(fs[1], BiPoly::from_terms(f, [(1, 0, 1), (0, 0, 1)]));
        assert_eq!(inf, BiPoly::one(f));
    }

    #[test]
    fn hensel_errors() {
        let f = fp(7);
        let big = BiPoly::from_terms(f, [(2, 0, 1), (0, 1, 1)]);
        let y = UniPoly::var(f);
        assert_eq!(apl_hensel(&big, &[y.clone(), y.clone()], 1, Slope::integer(0), 3), Err(Error::NotCoprime));
        assert_eq!(apl_hensel(&big, std::slice::from_ref(&y), 1, Slope::integer(0), 3), Err(Error::InitMismatch));
    }

    #[test]
    fn recovers_known_factors_with_unit_branch() {
        let f = fp(65537);
        let l = Slope::new(1, 2);
        // factors in A_lambda^+ with coprime reductions, one of them a unit branch
        let g = BiPoly::from_terms(f, [(2, 0, 1), (1, 1, 3), (0, 0, 2), (0, 2, 5)]);
        let h = BiPoly::from_terms(f, [(2, 0, 1), (0, 0, 7), (1, 1, 1), (1, 3, 4)]);
        let u = BiPoly::from_terms(f, [(0, 0, 3), (2, 2, 1), (0, 4, 9)]);
        let big = g.mul(&h).mul(&u);
        assert!(is_in_apl(&big, l));
        let init = [g.filter(|_, j| j == 0).eval_x(0), h.filter(|_, j| j == 0).eval_x(0)];
        let n = 12;
        let (fs, inf) = apl_hensel(&big, &init, 3, l, n).unwrap();
        assert_eq!(fs[0], g.trunc_x(n));
        assert_eq!(fs[1], h.trunc_x(n));
        assert_eq!(inf, u.trunc_x(n));
    }
}
