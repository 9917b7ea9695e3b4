//! Recombination of analytic factors into factors over `K[x, y]`.

pub mod linalg;
mod phi;
mod psi;

pub use linalg::{kernel_echelon, left_kernel, rref};
pub use phi::{a_adic_expand, ftilde_normalize, phi_map, phi_row, phi_setup, PhiSetup};
pub use psi::psi_map;

use crate::error::{Error, Result};
use crate::facto::{facto, AnalyticFactorization, TraceNode};
use crate::ffield::uni_factor;
use crate::polygon::{
    apply_affine, edge_to_univariate, is_degenerate, lower_boundary, minimal_lattice_length, newton_polygon,
    univariate_to_edge, AffineMap,
};
use crate::slopecore::ypoly::{content, is_separable_y, primitive_part};
use crate::slopecore::{average_slope, d_lambda, floor_rat, fmt_rat, lambda_parts, reciprocal, trunc_lambda, v_lambda, BiPoly, Rat, Slope};

/// `F` in the `lambda >= 0` frame with its analytic factors and the pieces of `G_mu`.
#[derive(Debug, Clone)]
pub struct RecombinationProblem {
    pub f: BiPoly,
    pub analytic: Vec<BiPoly>,
    pub lambda: Slope,
    /// `d (d_lambda(F) - v_lambda(F))`.
    pub n_bound: Rat,
    /// Truncation weight of the `G` parts, at least `d_lambda(F) - lambda`, the
    /// largest weight of an exact cofactor product.
    pub weight: Rat,
    /// `[lc(F) prod_{k != i} F_k dF_i/dy]` truncated at `weight`.
    pub g_parts: Vec<BiPoly>,
}

/// Product of `fs` truncated at lambda-weight `bound`, truncating partial products
/// as soon as the remaining factors make higher terms irrelevant.
pub fn product_trunc(fs: &[BiPoly], l: Slope, bound: Rat) -> BiPoly {
    let field = fs[0].field();
    if fs.iter().any(|g| g.is_zero()) {
        return BiPoly::zero(field);
    }
    let vs: Vec<Rat> = fs.iter().map(|g| v_lambda(g, l).unwrap()).collect();
    let mut rest: Rat = vs.iter().sum();
    let mut acc = BiPoly::one(field);
    let mut vacc = Rat::from_integer(0);
    for (g, &vg) in fs.iter().zip(&vs) {
        rest -= vg;
        let a = trunc_lambda(&acc, l, bound - vg - rest);
        let b = trunc_lambda(g, l, bound - vacc - rest);
        acc = trunc_lambda(&a.mul(&b), l, bound - rest);
        vacc += vg;
    }
    acc
}

impl RecombinationProblem {
    pub fn new(f: &BiPoly, analytic: Vec<BiPoly>, l: Slope) -> Self {
        let t = d_lambda(f, l).unwrap() - l.as_rat();
        Self::with_weight(f, analytic, l, t)
    }

    /// Truncates the `G` parts at weight `t`; the analytic factors must be known
    /// to relative precision above `t - v_lambda(F) + lambda`.
    pub fn with_weight(f: &BiPoly, analytic: Vec<BiPoly>, l: Slope, t: Rat) -> Self {
        let d = f.deg_y().unwrap();
        let dl = d_lambda(f, l).unwrap();
        let vl = v_lambda(f, l).unwrap();
        let lc = f.lc_y();
        let g_parts = (0..analytic.len())
            .map(|i| {
                let mut fs = vec![lc.clone()];
                fs.extend(analytic.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, g)| g.clone()));
                fs.push(analytic[i].derivative_y());
                product_trunc(&fs, l, t)
            })
            .collect();
        RecombinationProblem { f: f.clone(), analytic, lambda: l, n_bound: (dl - vl) * d, weight: t, g_parts }
    }

    /// Whether `mu -> G_mu` is injective. Recombination vectors are only
    /// determined by `G_mu` when it is; in small characteristic a derivative
    /// can vanish to high order and push the information past the truncation.
    pub fn g_map_injective(&self) -> bool {
        let field = self.f.field();
        let mut support: Vec<(i64, i64)> = self.g_parts.iter().flat_map(|g| g.terms().map(|(k, _)| k)).collect();
        support.sort_unstable();
        support.dedup();
        let mut rows: Vec<Vec<u64>> =
            self.g_parts.iter().map(|g| support.iter().map(|&(i, j)| g.coeff(i, j)).collect()).collect();
        rref(field, &mut rows, support.len()).len() == self.s()
    }

    pub fn s(&self) -> usize {
        self.analytic.len()
    }
}

/// `G_mu = sum mu_i [F^_i dF_i/dy]`.
pub fn g_mu(problem: &RecombinationProblem, mu: &[u64]) -> BiPoly {
    assert_eq!(mu.len(), problem.s());
    let mut g = BiPoly::zero(problem.f.field());
    for (part, &c) in problem.g_parts.iter().zip(mu) {
        if c != 0 {
            g = g.add(&part.scale(c));
        }
    }
    g
}

/// `(G_x F_y - G_y F_x) F_y - (F_xy F_y - F_yy F_x) G`.
pub fn d_operator(g: &BiPoly, f: &BiPoly) -> BiPoly {
    let fx = f.derivative_x();
    let fy = f.derivative_y();
    let first = g.derivative_x().mul(&fy).sub(&g.derivative_y().mul(&fx)).mul(&fy);
    let second = fx.derivative_y().mul(&fy).sub(&fy.derivative_y().mul(&fx)).mul(g);
    first.sub(&second)
}

fn is_partition(basis: &[Vec<u64>], s: usize) -> bool {
    let mut cover = vec![0u32; s];
    for v in basis {
        for (k, &c) in v.iter().enumerate() {
            match c {
                0 => {}
                1 => cover[k] += 1,
                _ => return false,
            }
        }
    }
    cover.iter().all(|&c| c == 1)
}

/// Right end point of `Lambda(F)`: `(deg_y F, v0(lc_y F))`.
fn right_end(f: &BiPoly) -> (i64, i64) {
    let d = f.deg_y().unwrap();
    (d, f.row_v0(d).unwrap())
}

/// Scales `f` so that the coefficient at the right end point of `Lambda(f)` is 1.
pub fn normalize_factor(f: &BiPoly) -> BiPoly {
    let (i, j) = right_end(f);
    f.normalize_at(i, j)
}

/// Global factors `[lc(F) prod_{i in S} F_i]`, made primitive, one per basis vector.
pub fn reconstruct_factors(problem: &RecombinationProblem, basis: &[Vec<u64>]) -> Result<Vec<BiPoly>> {
    let s = problem.s();
    if !is_partition(basis, s) {
        return Err(Error::NotAPartition);
    }
    let l = problem.lambda;
    let dl = d_lambda(&problem.f, l).unwrap();
    let mut out = Vec::new();
    for v in basis {
        let mut fs = vec![problem.f.lc_y()];
        fs.extend(v.iter().zip(&problem.analytic).filter(|(&c, _)| c == 1).map(|(_, g)| g.clone()));
        let g = product_trunc(&fs, l, dl);
        if g.v0().is_some_and(|v| v < 0) {
            return Err(Error::NotAPartition);
        }
        out.push(normalize_factor(&primitive_part(&g)));
    }
    Ok(out)
}

/// Factors with the data of the run that produced them.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub factors: Vec<BiPoly>,
    /// Slope used for the analytic factorization (after the flip), if one ran.
    pub lambda: Option<Slope>,
    pub sigma: Option<Rat>,
    /// Number of analytic factors.
    pub s: usize,
    pub recursion_depth: usize,
    pub trace: Vec<TraceNode>,
    pub flipped: bool,
    pub used_psi: bool,
}

impl Factorization {
    fn trivial(factors: Vec<BiPoly>) -> Self {
        Factorization {
            factors,
            lambda: None,
            sigma: None,
            s: 0,
            recursion_depth: 0,
            trace: Vec::new(),
            flipped: false,
            used_psi: false,
        }
    }
}

/// By y-degree, then by the support read from the largest graded monomial down.
fn sort_factors(fs: &mut [BiPoly]) {
    let key = |g: &BiPoly| {
        let sup: Vec<_> = g.graded_support().into_iter().rev().collect();
        let cs: Vec<u64> = sup.iter().map(|&(i, j)| g.coeff(i, j)).collect();
        (g.deg_y(), sup, cs)
    };
    fs.sort_by_cached_key(key);
}

fn product(field: crate::ffield::PrimeField, fs: &[BiPoly]) -> BiPoly {
    fs.iter().fold(BiPoly::one(field), |acc, g| acc.mul(g))
}

/// Whether `a = c b` for a nonzero constant `c`.
pub fn equal_up_to_unit(a: &BiPoly, b: &BiPoly) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    let ((i, j), _) = a.terms().next().unwrap();
    b.coeff(i, j) != 0 && a.normalize_at(i, j) == b.normalize_at(i, j)
}

/// Splits off the factor `y`; returns the rest and whether `y` divided `f`.
fn strip_y(f: &BiPoly) -> Result<(BiPoly, bool)> {
    match f.ord_y().ok_or(Error::ZeroPolynomial)? {
        0 => Ok((f.clone(), false)),
        1 => Ok((f.shift(-1, 0), true)),
        _ => Err(Error::NotSeparable),
    }
}

fn check_primitive(f: &BiPoly) -> Result<()> {
    if f.v0().is_some_and(|v| v < 0) {
        return Err(Error::NotPrimitive);
    }
    if f.deg_y().unwrap_or(0) > 0 && !content(f).is_one() {
        return Err(Error::NotPrimitive);
    }
    Ok(())
}

/// Factors a quasi-homogeneous polynomial supported on one segment.
fn factor_segment(f: &BiPoly, seed: u64) -> Result<Vec<BiPoly>> {
    let p = newton_polygon(f)?;
    let e = lower_boundary(&p).into_iter().next().ok_or(Error::DegeneratePolygon)?;
    let (g, _) = edge_to_univariate(f, &e)?;
    let mut out = Vec::new();
    for (h, mult) in uni_factor(&g, seed) {
        if mult > 1 {
            return Err(Error::NotSeparable);
        }
        if h.degree() == Some(0) {
            continue;
        }
        let hb = univariate_to_edge(&h, (0, 0), e.direction());
        let hb = hb.shift(-hb.ord_y().unwrap(), -hb.v0().unwrap());
        out.push(normalize_factor(&hb));
    }
    Ok(out)
}

/// Factors a primitive, separable, non-degenerate `F` over `K`.
pub fn factorization(f: &BiPoly, rng_seed: u64) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    check_primitive(f)?;
    let (g, had_y) = strip_y(f)?;
    let field = f.field();
    let mut result = if g.deg_y() == Some(0) {
        if g.len() > 1 || g.v0() != Some(0) {
            return Err(Error::NotPrimitive);
        }
        Factorization::trivial(Vec::new())
    } else {
        if !is_separable_y(&g) {
            return Err(Error::NotSeparable);
        }
        let poly = newton_polygon(&g)?;
        if poly.dimension() < 2 {
            Factorization::trivial(factor_segment(&g, rng_seed)?)
        } else {
            let report = is_degenerate(&g)?;
            if report.is_degenerate() {
                return Err(Error::DegenerateInput(report.to_string()));
            }
            factor_nondegenerate(&g, rng_seed)?
        }
    };
    if had_y {
        result.factors.push(BiPoly::y(field));
    }
    sort_factors(&mut result.factors);
    if !equal_up_to_unit(&product(field, &result.factors), f) {
        return Err(Error::VerificationFailed("product of factors differs from the input".into()));
    }
    Ok(result)
}

/// The analytic side of the algorithm for one input.
#[derive(Debug, Clone)]
pub struct Lifted {
    /// `F` after the flip and normalization.
    pub f: BiPoly,
    pub lambda: Slope,
    pub sigma: Rat,
    pub flipped: bool,
    pub analytic: AnalyticFactorization,
    /// Present when there are at least two analytic factors.
    pub problem: Option<RecombinationProblem>,
}

/// Flips to `lambda_F >= 0`, normalizes, runs the analytic factorization and sets
/// up the recombination, widening the truncation of the `G` parts until
/// `mu -> G_mu` is injective.
pub fn lift_and_prepare(f0: &BiPoly, seed: u64) -> Result<Lifted> {
    let l0 = average_slope(f0)?;
    let flipped = l0.as_rat() < Rat::from_integer(0);
    let f = if flipped { reciprocal(f0) } else { f0.clone() };
    let l = if flipped { l0.neg() } else { l0 };
    let f = normalize_factor(&f);
    let d = f.deg_y().unwrap();

    let vl = v_lambda(&f, l).unwrap();
    let dl = d_lambda(&f, l).unwrap();
    let m = lambda_parts(&f, l).m;
    let lc = f.row_poly(d);
    let a = lc.valuation().unwrap() as i64;
    let u0 = lc.shift_down(a as usize);

    let step = (dl - vl).max(Rat::from_integer(1));
    let mut extra = Rat::from_integer(0);
    for _ in 0..MAX_WIDENINGS {
        let sigma = dl - vl + extra + m + l.as_rat() * d;
        // F / lc_y(F) to the needed precision.
        let prec = floor_rat(vl + sigma) + 1;
        let uinv = u0.inv_series(prec.max(1) as usize).ok_or(Error::NotAUnit)?;
        let monic = f.mul(&BiPoly::from_x_poly(&uinv)).shift(0, -a);
        let monic = trunc_lambda(&monic, l, vl - a + sigma);

        let analytic = facto(&monic, l, sigma, seed)?;
        let problem = if analytic.factors.len() > 1 {
            let pr = RecombinationProblem::with_weight(&f, analytic.factors.clone(), l, dl - l.as_rat() + extra);
            if !pr.g_map_injective() {
                extra += step;
                continue;
            }
            Some(pr)
        } else {
            None
        };
        return Ok(Lifted { f, lambda: l, sigma, flipped, analytic, problem });
    }
    Err(Error::PrecisionTooLow { sigma: fmt_rat(dl - vl + extra), defect: "G map not injective".into() })
}

fn factor_nondegenerate(f0: &BiPoly, seed: u64) -> Result<Factorization> {
    let lifted = lift_and_prepare(f0, seed)?;
    let mut run = Factorization {
        factors: vec![lifted.f.clone()],
        lambda: Some(lifted.lambda),
        sigma: Some(lifted.sigma),
        s: lifted.analytic.factors.len(),
        recursion_depth: lifted.analytic.recursion_depth(),
        trace: lifted.analytic.trace,
        flipped: lifted.flipped,
        used_psi: false,
    };
    if let Some(problem) = &lifted.problem {
        let (basis, used_psi) = recombination_basis(problem)?;
        run.used_psi = used_psi;
        run.factors = reconstruct_factors(problem, &basis)?;
    }
    if lifted.flipped {
        run.factors = run.factors.iter().map(|g| normalize_factor(&reciprocal(g))).collect();
    }
    Ok(run)
}

const MAX_WIDENINGS: usize = 8;

/// Reduced echelon basis of the recombination vectors: the kernel of `phi`,
/// cut down by `psi` when the characteristic is small or the `G` parts were
/// truncated above `d_lambda(F) - lambda`.
pub fn recombination_basis(problem: &RecombinationProblem) -> Result<(Vec<Vec<u64>>, bool)> {
    let field = problem.f.field();
    let s = problem.s();
    let rows = phi_map(problem)?;
    let basis = left_kernel(field, &rows);
    // The large-characteristic shortcut assumes d_lambda(G_mu) <= d_lambda(F) - lambda.
    let widened = problem.weight > d_lambda(&problem.f, problem.lambda).unwrap() - problem.lambda.as_rat();
    let large_p = Rat::from_integer(field.modulus() as i64) >= problem.n_bound * 2;
    if (large_p && !widened) || basis.len() <= 1 {
        return Ok((basis, false));
    }
    let images = psi_map(problem, &basis)?;
    let coeffs = left_kernel(field, &images);
    let mut combined: Vec<Vec<u64>> = coeffs
        .iter()
        .map(|c| {
            let mut v = vec![0u64; s];
            for (ck, b) in c.iter().zip(&basis) {
                for (vk, bk) in v.iter_mut().zip(b) {
                    *vk = field.add(*vk, field.mul(*ck, *bk));
                }
            }
            v
        })
        .collect();
    rref(field, &mut combined, s);
    Ok((combined, true))
}

/// Factors `tau(F)` for the first minimizing map `tau` with `tau(F)` non-degenerate,
/// then pulls the factors back.
pub fn factor_minimal(f: &BiPoly, rng_seed: u64) -> Result<(Factorization, AffineMap)> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    check_primitive(f)?;
    let field = f.field();
    let (g, had_y) = strip_y(f)?;
    if g.deg_y() == Some(0) || !is_separable_y(&g) {
        return factorization(f, rng_seed).map(|r| (r, AffineMap::identity()));
    }
    let poly = newton_polygon(&g)?;
    if poly.dimension() < 2 {
        return factorization(f, rng_seed).map(|r| (r, AffineMap::identity()));
    }
    let (_, maps) = minimal_lattice_length(&poly)?;
    let mut chosen = None;
    for tau in maps {
        let img = apply_affine(&tau, &g);
        if !is_degenerate(&img)?.is_degenerate() {
            chosen = Some((tau, img));
            break;
        }
    }
    let (tau, img) = chosen.ok_or(Error::MinimallyDegenerate)?;

    let c = content(&img);
    let pp = primitive_part(&img);
    let mut inner = factorization(&pp, rng_seed)?;
    let mut pieces: Vec<BiPoly> = std::mem::take(&mut inner.factors);
    for (h, mult) in uni_factor(&c, rng_seed) {
        if mult > 1 {
            return Err(Error::NotSeparable);
        }
        pieces.push(BiPoly::from_x_poly(&h));
    }
    let inv = tau.inverse();
    let mut factors: Vec<BiPoly> = pieces
        .iter()
        .map(|h| apply_affine(&inv, h))
        .filter(|h| h.len() > 1)
        .map(|h| normalize_factor(&h))
        .collect();
    if had_y {
        factors.push(BiPoly::y(field));
    }
    sort_factors(&mut factors);
    if !equal_up_to_unit(&product(field, &factors), f) {
        return Err(Error::VerificationFailed("product of factors differs from the input".into()));
    }
    inner.factors = factors;
    Ok((inner, tau))
}
