use super::{g_mu, RecombinationProblem};
use crate::error::{Error, Result};
use crate::slopecore::{d_lambda, floor_rat, BiPoly};

/// Images `G^p + d^(p-1)/dy^(p-1) (G F^(p-1))` of the given vectors, flattened
/// over the monomials `x^(p a) y^(p b)`.
///
/// When enough evaluation points exist the image is sampled at `x = x0` for
/// `x0 = 0, ..., D`, where `D` bounds its degree in `x^p`; otherwise it is
/// computed exactly and checked to lie in `K[x^p, y^p]`. With this sign the image
/// vanishes when every residue of `G / F` lies in `F_p`.
pub fn psi_map(problem: &RecombinationProblem, vectors: &[Vec<u64>]) -> Result<Vec<Vec<u64>>> {
    let field = problem.f.field();
    let p = field.modulus();
    let gs: Vec<BiPoly> = vectors.iter().map(|v| g_mu(problem, v)).collect();
    // x^e G and x^e F make everything polynomial and scale the image by x^(e p).
    let e = gs.iter().filter_map(|g| g.v0()).min().unwrap_or(0).min(0).unsigned_abs() as i64;
    let f = problem.f.shift(0, e);
    let gs: Vec<BiPoly> = gs.iter().map(|g| g.shift(0, e)).collect();
    let big_d = floor_rat(d_lambda(&problem.f, problem.lambda).unwrap().max(problem.weight)) + e;
    let d = problem.f.deg_y().unwrap() as usize;
    if (big_d as u64) < p {
        Ok(gs.iter().map(|g| psi_by_evaluation(g, &f, big_d as u64, d)).collect())
    } else {
        let mut rows = gs.iter().map(|g| psi_exact(g, &f, d)).collect::<Result<Vec<_>>>()?;
        let width = rows.iter().map(|r| r.len()).max().unwrap_or(0);
        for r in rows.iter_mut() {
            r.resize(width, 0);
        }
        Ok(rows)
    }
}

fn psi_by_evaluation(g: &BiPoly, f: &BiPoly, big_d: u64, d: usize) -> Vec<u64> {
    let field = f.field();
    let p = field.modulus() as usize;
    let mut out = Vec::with_capacity((big_d as usize + 1) * d);
    for x0 in 0..=big_d {
        let f0 = f.eval_x(x0);
        let g0 = g.eval_x(x0);
        // f0(y)^(p-1) = f0(y^p) / f0(y) over F_p.
        let fp1 = f0.inflate(p).div_exact(&f0).expect("f0 divides f0(y^p)");
        let h = g0.mul(&fp1);
        for k in 0..d {
            out.push(field.sub(g0.coeff(k), h.coeff(k * p + p - 1)));
        }
    }
    out
}

fn psi_exact(g: &BiPoly, f: &BiPoly, d: usize) -> Result<Vec<u64>> {
    let field = f.field();
    let p = field.modulus() as i64;
    let mut h = g.mul(&f.pow((p - 1) as u32));
    for _ in 0..p - 1 {
        h = h.derivative_y();
    }
    let img = g.frobenius().add(&h);
    let big_d = img.deg_x().map_or(0, |v| v.max(0)) / p;
    let mut out = vec![0u64; (big_d as usize + 1) * d];
    for ((i, j), c) in img.terms() {
        if i % p != 0 || j % p != 0 || j < 0 {
            return Err(Error::NotInImageSpace);
        }
        let (a, b) = ((j / p) as usize, (i / p) as usize);
        if b >= d {
            return Err(Error::NotInImageSpace);
        }
        out[a * d + b] = c;
    }
    Ok(out)
}
