//! Recursive analytic factorization over `K((x))` along average slopes.

use crate::aplarith::partial_facto;
use crate::error::{Error, Result};
use crate::polygon::{volume, LatticePolygon, Point};
use crate::slopecore::{average_slope, fmt_rat, lambda_parts, sigma_prime, BiPoly, Rat, Slope};

/// One call of the recursion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceNode {
    /// Root is level 0.
    pub level: usize,
    pub lambda: Slope,
    pub sigma: Rat,
    /// `deg_y` of the polynomial at this node.
    pub degree: i64,
    /// Area of the convex hull of the lower boundary `Lambda(P)`.
    pub volume: Rat,
    /// `m_{lambda_P}(P)` at the node's own average slope, zero for degree <= 1.
    pub m_average: Rat,
    /// Whether `lambda` equals the node's average slope.
    pub at_average: bool,
    /// Volumes of the `G` and `H` branches when they recurse.
    pub child_volumes: Vec<Rat>,
}

/// Analytic factors together with the recursion trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalyticFactorization {
    pub factors: Vec<BiPoly>,
    pub lambda: Slope,
    pub sigma: Rat,
    pub trace: Vec<TraceNode>,
}

impl AnalyticFactorization {
    /// Deepest level reached by the recursion.
    pub fn recursion_depth(&self) -> usize {
        self.trace.iter().map(|n| n.level).max().unwrap_or(0)
    }
}

/// Area of the convex hull of the lower boundary of the points `(i, v0(p_i))`.
pub fn lower_hull_volume(p: &BiPoly) -> Rat {
    let Some(d) = p.deg_y() else {
        return Rat::from_integer(0);
    };
    let pts: Vec<Point> = (0..=d).filter_map(|i| p.row_v0(i).map(|v| (i, v))).collect();
    let mut lower: Vec<Point> = Vec::new();
    for &q in &pts {
        while lower.len() >= 2 {
            let (o, a) = (lower[lower.len() - 2], lower[lower.len() - 1]);
            let cr = (a.0 - o.0) as i128 * (q.1 - o.1) as i128 - (a.1 - o.1) as i128 * (q.0 - o.0) as i128;
            if cr <= 0 {
                lower.pop();
            } else {
                break;
            }
        }
        lower.push(q);
    }
    volume(&LatticePolygon::hull(&lower))
}

fn node_average(p: &BiPoly) -> Option<(Slope, Rat)> {
    let l = average_slope(p).ok()?;
    Some((l, lambda_parts(p, l).m))
}

struct Run<'a> {
    seed: u64,
    factors: &'a mut Vec<BiPoly>,
    trace: &'a mut Vec<TraceNode>,
}

impl Run<'_> {
    fn recurse(&mut self, f: &BiPoly, l: Slope, sigma: Rat, level: usize) -> Result<()> {
        let degree = f.deg_y().unwrap_or(0);
        let avg = node_average(f);
        let mut node = TraceNode {
            level,
            lambda: l,
            sigma,
            degree,
            volume: lower_hull_volume(f),
            m_average: avg.map_or(Rat::from_integer(0), |a| a.1),
            at_average: avg.is_some_and(|a| a.0 == l),
            child_volumes: Vec::new(),
        };
        if degree <= 1 {
            self.trace.push(node);
            self.factors.push(f.clone());
            return Ok(());
        }
        let pf = partial_facto(f, l, sigma, self.seed)?;
        let branches: Vec<BiPoly> =
            [pf.p0, pf.pinf].into_iter().filter(|b| b.deg_y().unwrap_or(0) >= 1).collect();
        node.child_volumes = branches.iter().map(lower_hull_volume).collect();
        self.trace.push(node);
        self.factors.extend(pf.middle);
        for b in branches {
            let lb = average_slope(&b)?;
            let mb = lambda_parts(&b, lb).m;
            let sb = sigma_prime(l, lb, sigma, &b).max(mb);
            self.recurse(&b, lb, sb, level + 1)?;
        }
        Ok(())
    }
}

/// Factors a monic `F` into its irreducible factors over `K((x))`, each known to
/// relative lambda-precision above `sigma - m_lambda(F)`.
pub fn facto(f: &BiPoly, l: Slope, sigma: Rat, rng_seed: u64) -> Result<AnalyticFactorization> {
    let d = f.deg_y().ok_or(Error::ZeroPolynomial)?;
    if f.row(d).collect::<Vec<_>>() != [(0, 1)] {
        return Err(Error::NotMonic);
    }
    let m = lambda_parts(f, l).m;
    if sigma < m {
        return Err(Error::PrecisionTooLow { sigma: fmt_rat(sigma), defect: fmt_rat(m) });
    }
    let mut factors = Vec::new();
    let mut trace = Vec::new();
    Run { seed: rng_seed, factors: &mut factors, trace: &mut trace }.recurse(f, l, sigma, 0)?;
    Ok(AnalyticFactorization { factors, lambda: l, sigma, trace })
}

/// Checks the volume law on a trace: halving below the root, the bounds
/// `d m / 2 <= V <= d m` at average slopes, and the logarithmic depth.
pub fn check_recursion_volume(trace: &[TraceNode]) -> std::result::Result<(), String> {
    let two = Rat::from_integer(2);
    for n in trace {
        if n.degree >= 2 && n.level > 0 {
            let sum: Rat = n.child_volumes.iter().sum();
            if sum > n.volume / two {
                return Err(format!("node at level {} has V_G + V_H = {} > V_F/2 = {}", n.level, sum, n.volume / two));
            }
        }
        if n.degree >= 1 {
            let dm = n.m_average * n.degree;
            if n.volume > dm || n.volume < dm / two {
                return Err(format!("node at level {} has V = {} outside [{}, {}]", n.level, n.volume, dm / two, dm));
            }
        }
    }
    if let Some(root) = trace.first() {
        let depth = trace.iter().map(|n| n.level).max().unwrap_or(0);
        if root.volume > Rat::from_integer(0) {
            let mut bound = 1i64;
            while Rat::from_integer(1i64 << (bound - 1)) < root.volume {
                bound += 1;
            }
            if depth as i64 > bound {
                return Err(format!("depth {depth} exceeds 1 + ceil(log2 {}) = {bound}", root.volume));
            }
        } else if depth > 0 {
            return Err(format!("depth {depth} with a one-sided root"));
        }
    }
    Ok(())
}
