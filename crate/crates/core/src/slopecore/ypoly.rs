//! Arithmetic in `K[x][y]` on polynomials with nonnegative exponents, through
//! the row representation (coefficients of `y^i` as polynomials in `x`).

use super::BiPoly;
use crate::ffield::UniPoly;

fn rows(f: &BiPoly) -> Vec<UniPoly> {
    let d = f.deg_y().unwrap_or(-1);
    (0..=d).map(|i| f.row_poly(i)).collect()
}

fn from_rows(f: &BiPoly, r: &[UniPoly]) -> BiPoly {
    BiPoly::from_rows(f.field(), r, 0)
}

fn trim(r: &mut Vec<UniPoly>) {
    while r.last().is_some_and(|c| c.is_zero()) {
        r.pop();
    }
}

/// Monic gcd of the y-coefficients, as a polynomial in `x`.
pub fn content(f: &BiPoly) -> UniPoly {
    rows(f).iter().fold(UniPoly::zero(f.field()), |g, r| g.gcd(r))
}

/// `f / content(f)`.
pub fn primitive_part(f: &BiPoly) -> BiPoly {
    if f.is_zero() {
        return f.clone();
    }
    let c = content(f);
    let r: Vec<_> = rows(f).iter().map(|r| r.div_exact(&c).unwrap()).collect();
    from_rows(f, &r)
}

/// Pseudo-remainder of `a` by `b` in `y`, made primitive along the way.
fn prem_rows(a: &[UniPoly], b: &[UniPoly]) -> Vec<UniPoly> {
    let mut a = a.to_vec();
    trim(&mut a);
    let lb = b.last().unwrap().clone();
    while a.len() >= b.len() {
        let la = a.last().unwrap().clone();
        let shift = a.len() - b.len();
        let g = la.gcd(&lb);
        let fa = lb.div_exact(&g).unwrap();
        let fb = la.div_exact(&g).unwrap();
        for c in a.iter_mut() {
            *c = c.mul(&fa);
        }
        for (k, bc) in b.iter().enumerate() {
            a[k + shift] = a[k + shift].sub(&bc.mul(&fb));
        }
        trim(&mut a);
        let cont = a.iter().fold(UniPoly::zero(lb.field()), |g, r| g.gcd(r));
        if !cont.is_zero() && !cont.is_one() {
            for c in a.iter_mut() {
                *c = c.div_exact(&cont).unwrap();
            }
        }
    }
    a
}

/// Primitive gcd over `K(x)[y]` of two polynomials in `K[x][y]`.
pub fn gcd_y(a: &BiPoly, b: &BiPoly) -> BiPoly {
    let f = a.field();
    if a.is_zero() {
        return primitive_part(b);
    }
    if b.is_zero() {
        return primitive_part(a);
    }
    let mut ra = rows(&primitive_part(a));
    let mut rb = rows(&primitive_part(b));
    if ra.len() < rb.len() {
        std::mem::swap(&mut ra, &mut rb);
    }
    while !rb.is_empty() {
        let r = prem_rows(&ra, &rb);
        ra = rb;
        rb = r;
    }
    primitive_part(&BiPoly::from_rows(f, &ra, 0))
}

/// Exact quotient in `K[x][y]`, `None` when `b` does not divide `a`.
pub fn div_exact(a: &BiPoly, b: &BiPoly) -> Option<BiPoly> {
    assert!(!b.is_zero(), "division by zero");
    let f = a.field();
    if a.is_zero() {
        return Some(a.clone());
    }
    if a.v0()? < 0 || b.v0()? < 0 {
        return None;
    }
    let mut ra = rows(a);
    let rb = rows(b);
    if ra.len() < rb.len() {
        return None;
    }
    let lb = rb.last().unwrap();
    let mut q = vec![UniPoly::zero(f); ra.len() - rb.len() + 1];
    for k in (0..q.len()).rev() {
        let top = &ra[k + rb.len() - 1];
        if top.is_zero() {
            continue;
        }
        let c = top.div_exact(lb)?;
        for (i, bc) in rb.iter().enumerate() {
            ra[k + i] = ra[k + i].sub(&c.mul(bc));
        }
        q[k] = c;
    }
    ra.iter().all(|r| r.is_zero()).then(|| BiPoly::from_rows(f, &q, 0))
}

/// Whether `b` divides `a` in `K[x][y]`, via the pseudo-remainder.
pub fn divides(b: &BiPoly, a: &BiPoly) -> bool {
    div_exact(a, b).is_some()
}

/// `F` has no repeated factor of positive y-degree: `gcd_y(F, dF/dy)` is constant in `y`
/// and the derivative does not vanish.
pub fn is_separable_y(f: &BiPoly) -> bool {
    let df = f.derivative_y();
    if df.is_zero() {
        return f.deg_y().unwrap_or(0) == 0;
    }
    // A squarefree specialization of full degree certifies separability.
    let d = f.deg_y().unwrap() as usize;
    let field = f.field();
    for k in 1..field.modulus().min(8) {
        let x0 = k * (field.modulus() / 8).max(1) % field.modulus();
        if x0 == 0 {
            continue;
        }
        let g = f.eval_x(x0);
        if g.degree() == Some(d) && g.gcd(&g.derivative()).is_one() {
            return true;
        }
    }
    gcd_y(f, &df).deg_y() == Some(0)
}
