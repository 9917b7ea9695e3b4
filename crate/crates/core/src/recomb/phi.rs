use super::{d_operator, RecombinationProblem};
use crate::error::{Error, Result};
use crate::ffield::{uni_find_coprime_irreducible, UniPoly};
use crate::slopecore::{floor_rat, tau_lambda, v_lambda, BiPoly, Slope};

/// `(F~, alpha, k)` with `F~ = tau(x^k y^alpha F)`, `q | deg_y F~` and `0 <= v0(F~) < q`.
pub fn ftilde_normalize(f: &BiPoly, l: Slope) -> (BiPoly, i64, i64) {
    let q = l.q();
    let d = f.deg_y().unwrap();
    let alpha = (-d).rem_euclid(q);
    let n0 = v_lambda(f, l).unwrap() * q + l.m() * alpha;
    debug_assert!(n0.is_integer());
    let k = -floor_rat(n0 / q);
    (tau_lambda(&f.shift(alpha, k), l), alpha, k)
}

/// First `count` digits of `u = sum u_i a^i`, each of degree below `deg a`.
fn digits(u: &UniPoly, a: &UniPoly, count: usize) -> Vec<UniPoly> {
    let mut out = Vec::with_capacity(count);
    let mut r = u.clone();
    for _ in 0..count {
        let (q, d) = r.divrem(a);
        out.push(d);
        r = q;
    }
    out
}

/// The digits `q_lo, ..., q_hi` of `Q = sum q_i(x, y) a(x)^i`, taken row by row.
pub fn a_adic_expand(q: &BiPoly, a: &UniPoly, lo: usize, hi: usize) -> Vec<BiPoly> {
    let field = q.field();
    let mut out = vec![BiPoly::zero(field); hi + 1 - lo.min(hi + 1)];
    if let Some(d) = q.deg_y() {
        for i in 0..=d {
            let ds = digits(&q.row_poly(i), a, hi + 1);
            for (slot, dig) in out.iter_mut().zip(&ds[lo..]) {
                *slot = slot.add(&BiPoly::from_x_poly(dig).shift(i, 0));
            }
        }
    }
    out
}

/// `x^e P(x^q)` with `0 <= e < q`: every row met by the division has this shape,
/// so the arithmetic runs on `P` in `X = x^q`.
#[derive(Debug, Clone)]
struct Graded {
    e: usize,
    p: UniPoly,
}

fn graded_row(f: &BiPoly, i: i64, q: usize) -> Result<Graded> {
    let field = f.field();
    let mut e = None;
    let mut coeffs = Vec::new();
    for (j, c) in f.row(i) {
        let j = j as usize;
        let r = j % q;
        if *e.get_or_insert(r) != r {
            return Err(Error::DegenerateInput("row mixes residue classes mod q".into()));
        }
        let k = j / q;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, 0);
        }
        coeffs[k] = c;
    }
    Ok(Graded { e: e.unwrap_or(0), p: UniPoly::new(field, coeffs) })
}

/// Everything about `F` the division test needs, shared by all rows.
#[derive(Debug, Clone)]
pub struct PhiSetup {
    pub ftilde: BiPoly,
    pub alpha: i64,
    pub k: i64,
    /// x-exponent shift applied after `tau` to the image of `D`.
    pub shift: i64,
    pub a: UniPoly,
    pub m_lo: usize,
    pub n_hi: usize,
    q: usize,
    m: i64,
    /// `a0 = a(X)` and `a0^(n+1)`, `c^-1` modulo it, rows of `F~` in `X`.
    a0: UniPoly,
    modulus: UniPoly,
    c_inv: UniPoly,
    rows: Vec<Graded>,
    q_rows: usize,
}

impl PhiSetup {
    /// Setup for images `D~` of x-degree at most `3 deg_x F~`.
    pub fn new(f: &BiPoly, l: Slope) -> Result<Self> {
        Self::with_degree(f, l, 0)
    }

    /// Setup for images `D~` of x-degree at most `max(e, 3 deg_x F~)`.
    ///
    /// With `E` that bound and `d_x = deg_x F~`, a quotient has x-degree at most
    /// `E - d_x`, so its digits from `m = floor((E - d_x)/deg a) + 1` on must
    /// vanish, and `n` is large enough that `a^(n+1)` exceeds every degree met.
    pub fn with_degree(f: &BiPoly, l: Slope, e: i64) -> Result<Self> {
        let q = l.q();
        let d = f.deg_y().unwrap();
        let (ftilde, alpha, k) = ftilde_normalize(f, l);
        let vq = v_lambda(f, l).unwrap() * q;
        // v(Q_x) >= v(Q) - 1 and v(Q_y) >= v(Q) - lambda cost q + 3m in total.
        let shift = q * k - 2 * vq.to_integer() + q + 3 * l.m();
        let dt = ftilde.deg_y().unwrap();
        let c = ftilde.row_poly(dt);
        let c0 = c.deflate(q as usize).ok_or_else(|| Error::DegenerateInput("leading coefficient not in K[x^q]".into()))?;
        let a0 = uni_find_coprime_irreducible(&c0);
        let a = a0.inflate(q as usize);
        let da = a.degree().unwrap();
        let dx = ftilde.deg_x().unwrap() as usize;
        let e = (e.max(0) as usize).max(3 * dx);
        let m_lo = (e - dx) / da + 1;
        let n_hi = e.div_ceil(da).max(m_lo - 1 + dx.div_ceil(da));
        let modulus = a0.pow(n_hi + 1);
        let c_inv = c0.inv_mod(&modulus).ok_or_else(|| Error::DegenerateInput("leading coefficient not invertible".into()))?;
        let rows = (0..=dt)
            .map(|i| graded_row(&ftilde, i, q as usize).map(|g| Graded { e: g.e, p: g.p.rem(&modulus) }))
            .collect::<Result<_>>()?;
        Ok(PhiSetup {
            ftilde,
            alpha,
            k,
            shift,
            a,
            m_lo,
            n_hi,
            q: q as usize,
            m: l.m(),
            a0,
            modulus,
            c_inv,
            rows,
            q_rows: (2 * d - 2).max(0) as usize,
        })
    }

    /// `D~ = x^shift tau(y^alpha D)`.
    pub fn d_tilde(&self, dmu: &BiPoly, l: Slope) -> BiPoly {
        tau_lambda(&dmu.shift(self.alpha, 0), l).shift(0, self.shift)
    }

    /// `a * b` modulo `a0^(n+1)`, carrying `x^q` into `X`.
    fn mul_graded(&self, a: &Graded, b: &Graded) -> Graded {
        let mut p = a.p.mul(&b.p);
        let mut e = a.e + b.e;
        if e >= self.q {
            e -= self.q;
            p = p.shift(1);
        }
        Graded { e, p: p.rem(&self.modulus) }
    }

    /// Quotient and remainder rows of `D~ / F~` over `K[x]/(a^(n+1))`.
    fn divide(&self, dt: &BiPoly) -> Result<(Vec<Graded>, Vec<Graded>)> {
        let field = dt.field();
        if dt.v0().is_some_and(|v| v < 0) {
            return Err(Error::DegenerateInput("D~ has negative x-exponents".into()));
        }
        let df = self.rows.len() - 1;
        let top = dt.deg_y().map_or(0, |d| d as usize);
        let mut rem: Vec<Graded> = (0..=top.max(df))
            .map(|i| graded_row(dt, i as i64, self.q).map(|g| Graded { e: g.e, p: g.p.rem(&self.modulus) }))
            .collect::<Result<_>>()?;
        let zero = Graded { e: 0, p: UniPoly::zero(field) };
        let mut quo = vec![zero; self.q_rows];
        let c_inv = Graded { e: 0, p: self.c_inv.clone() };
        for t in (df..rem.len()).rev() {
            if rem[t].p.is_zero() {
                continue;
            }
            let coef = self.mul_graded(&rem[t], &c_inv);
            let qi = t - df;
            if qi >= self.q_rows {
                return Err(Error::DegenerateInput("quotient degree exceeds its bound".into()));
            }
            for (kk, fr) in self.rows.iter().enumerate() {
                if fr.p.is_zero() {
                    continue;
                }
                let prod = self.mul_graded(&coef, fr);
                let slot = &mut rem[qi + kk];
                if slot.p.is_zero() {
                    slot.e = prod.e;
                } else if slot.e != prod.e {
                    return Err(Error::DegenerateInput("row mixes residue classes mod q".into()));
                }
                slot.p = slot.p.sub(&prod.p);
            }
            quo[qi] = coef;
        }
        rem.truncate(df);
        Ok((quo, rem))
    }

    /// Flattened digits `{Q}_m^n` and `{R}^n`.
    ///
    /// Row `t` of `D~` and the quotient coefficient it produces live in
    /// `x^e K[x^q]` with `e = m t + shift mod q`, so only the coefficients
    /// in `X = x^q` are kept.
    fn flatten(&self, quo: &[Graded], rem: &[Graded]) -> Vec<u64> {
        let da0 = self.a0.degree().unwrap();
        let df = self.rows.len() - 1;
        let residue = |t: usize| (self.m * t as i64 + self.shift).rem_euclid(self.q as i64) as usize;
        let mut out = Vec::new();
        let mut push = |u: &Graded, lo: usize, t: usize| {
            debug_assert!(u.p.is_zero() || u.e == residue(t));
            let ds = digits(&u.p, &self.a0, self.n_hi + 1);
            for dg in &ds[lo.min(ds.len())..] {
                out.extend((0..da0).map(|k| dg.coeff(k)));
            }
        };
        for (qi, qr) in quo.iter().enumerate() {
            push(qr, self.m_lo, qi + df);
        }
        for (t, rr) in rem.iter().enumerate() {
            push(rr, 0, t);
        }
        out
    }
}

/// The row of `phi` at `G`: vanishes exactly when `F` divides `D(G)`.
pub fn phi_row(setup: &PhiSetup, problem: &RecombinationProblem, g: &BiPoly) -> Result<Vec<u64>> {
    let dmu = d_operator(g, &problem.f);
    let dt = setup.d_tilde(&dmu, problem.lambda);
    let (quo, rem) = setup.divide(&dt)?;
    Ok(setup.flatten(&quo, &rem))
}

/// The division setup sized for every `D~_mu` of the problem.
pub fn phi_setup(problem: &RecombinationProblem) -> Result<PhiSetup> {
    Ok(setup_and_images(problem)?.0)
}

fn setup_and_images(problem: &RecombinationProblem) -> Result<(PhiSetup, Vec<BiPoly>)> {
    let base = PhiSetup::new(&problem.f, problem.lambda)?;
    let images: Vec<BiPoly> =
        problem.g_parts.iter().map(|g| base.d_tilde(&d_operator(g, &problem.f), problem.lambda)).collect();
    let e = images.iter().filter_map(|d| d.deg_x()).max().unwrap_or(0);
    if e <= 3 * base.ftilde.deg_x().unwrap() {
        Ok((base, images))
    } else {
        // alpha and shift do not depend on the degree bound, so the images carry over
        Ok((PhiSetup::with_degree(&problem.f, problem.lambda, e)?, images))
    }
}

/// One row per canonical basis vector of `K^s`.
pub fn phi_map(problem: &RecombinationProblem) -> Result<Vec<Vec<u64>>> {
    let (setup, images) = setup_and_images(problem)?;
    images
        .iter()
        .map(|dt| {
            let (quo, rem) = setup.divide(dt)?;
            Ok(setup.flatten(&quo, &rem))
        })
        .collect()
}
