//! Newton polygons, lower boundaries, lattice lengths and unimodular transforms.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::ffield::UniPoly;
use crate::slopecore::{BiPoly, Rat};

pub type Point = (i64, i64);

/// A convex lattice polygon with vertices in counterclockwise order.
///
/// Points are `(i, j)` with `i` the y-exponent (horizontal) and `j` the
/// x-exponent. Lower-dimensional hulls keep one or two vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePolygon {
    vertices: Vec<Point>,
}

/// An oriented boundary edge `a -> b` with its primitive inward normal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub a: Point,
    pub b: Point,
    pub normal: Point,
}

/// `v -> M v + t` with `|det M| = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffineMap {
    pub m: [[i64; 2]; 2],
    pub t: Point,
}

fn cross(o: Point, a: Point, b: Point) -> i128 {
    (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
}

impl LatticePolygon {
    /// Convex hull by the monotone chain, collinear points removed.
    pub fn hull(points: &[Point]) -> Self {
        let mut pts = points.to_vec();
        pts.sort_unstable();
        pts.dedup();
        if pts.len() <= 2 {
            return LatticePolygon { vertices: pts };
        }
        let mut lower: Vec<Point> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Point> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        if lower.len() == 2 && lower[0] == lower[1] {
            lower.pop();
        }
        LatticePolygon { vertices: lower }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// 0 for a point, 1 for a segment, 2 otherwise.
    pub fn dimension(&self) -> usize {
        match self.vertices.len() {
            0 | 1 => 0,
            2 => 1,
            _ => 2,
        }
    }

    /// Boundary edges in counterclockwise order. A segment yields both orientations.
    pub fn edges(&self) -> Vec<Edge> {
        let n = self.vertices.len();
        if n < 2 {
            return Vec::new();
        }
        (0..n)
            .filter(|&k| n > 2 || k < 2)
            .map(|k| {
                let a = self.vertices[k];
                let b = self.vertices[(k + 1) % n];
                let (dx, dy) = (b.0 - a.0, b.1 - a.1);
                let g = dx.gcd(&dy);
                Edge { a, b, normal: (-dy / g, dx / g) }
            })
            .collect()
    }

    pub fn transform(&self, tau: &AffineMap) -> Self {
        let pts: Vec<Point> = self.vertices.iter().map(|&v| tau.apply_point(v)).collect();
        LatticePolygon::hull(&pts)
    }
}

impl Edge {
    pub fn lattice_length(&self) -> i64 {
        (self.b.0 - self.a.0).gcd(&(self.b.1 - self.a.1))
    }

    /// Primitive direction from `a` to `b`.
    pub fn direction(&self) -> Point {
        let g = self.lattice_length();
        ((self.b.0 - self.a.0) / g, (self.b.1 - self.a.1) / g)
    }

    /// Lattice points from `a` to `b` inclusive.
    pub fn lattice_points(&self) -> Vec<Point> {
        let (dx, dy) = self.direction();
        (0..=self.lattice_length()).map(|k| (self.a.0 + k * dx, self.a.1 + k * dy)).collect()
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{})-({},{}) normal ({},{}) length {}",
            self.a.0,
            self.a.1,
            self.b.0,
            self.b.1,
            self.normal.0,
            self.normal.1,
            self.lattice_length()
        )
    }
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap { m: [[1, 0], [0, 1]], t: (0, 0) }
    }

    pub fn new(m: [[i64; 2]; 2], t: Point) -> Self {
        let a = AffineMap { m, t };
        assert!(a.det().abs() == 1, "affine map is not unimodular");
        a
    }

    pub fn det(&self) -> i64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn apply_point(&self, v: Point) -> Point {
        (
            self.m[0][0] * v.0 + self.m[0][1] * v.1 + self.t.0,
            self.m[1][0] * v.0 + self.m[1][1] * v.1 + self.t.1,
        )
    }

    pub fn inverse(&self) -> Self {
        let d = self.det();
        let [[a, b], [c, e]] = self.m;
        let m = [[e * d, -b * d], [-c * d, a * d]];
        let t = (-(m[0][0] * self.t.0 + m[0][1] * self.t.1), -(m[1][0] * self.t.0 + m[1][1] * self.t.1));
        AffineMap { m, t }
    }

    /// Same linear part; the translations are irrelevant after normalization.
    pub fn same_linear_part(&self, o: &AffineMap) -> bool {
        self.m == o.m
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |a: i64, b: i64, t: i64| {
            let mut s = String::new();
            for (c, v) in [(a, "i"), (b, "j")] {
                match c {
                    0 => {}
                    1 => s.push_str(&format!("{}{v}", if s.is_empty() { "" } else { "+" })),
                    -1 => s.push_str(&format!("-{v}")),
                    _ if c > 0 && !s.is_empty() => s.push_str(&format!("+{c}{v}")),
                    _ => s.push_str(&format!("{c}{v}")),
                }
            }
            if t != 0 || s.is_empty() {
                if t > 0 && !s.is_empty() {
                    s.push('+');
                }
                s.push_str(&t.to_string());
            }
            s
        };
        write!(
            f,
            "(i,j) -> ({}, {})",
            term(self.m[0][0], self.m[0][1], self.t.0),
            term(self.m[1][0], self.m[1][1], self.t.1)
        )
    }
}

pub fn newton_polygon(f: &BiPoly) -> Result<LatticePolygon> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let pts: Vec<Point> = f.terms().map(|(k, _)| k).collect();
    Ok(LatticePolygon::hull(&pts))
}

/// Edges whose inward normal has positive second coordinate, left to right.
pub fn lower_boundary(p: &LatticePolygon) -> Vec<Edge> {
    let mut es: Vec<Edge> = p.edges().into_iter().filter(|e| e.normal.1 > 0).collect();
    es.sort_by_key(|e| e.a.0);
    es
}

/// `r(P)`: number of lattice points on the lower boundary minus one.
pub fn lattice_length(p: &LatticePolygon) -> i64 {
    lower_boundary(p).iter().map(Edge::lattice_length).sum()
}

/// Canonical Bezout pair `(u, v)` with `a u + b v = 1` for primitive `(a, b)`.
fn bezout(a: i64, b: i64) -> (i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.x, -e.y)
    } else {
        (e.x, e.y)
    }
}

/// Translation sending the minimum coordinates of the image of `pts` to zero.
fn normalizing(m: [[i64; 2]; 2], pts: &[Point]) -> AffineMap {
    let lin = AffineMap { m, t: (0, 0) };
    let img: Vec<Point> = pts.iter().map(|&v| lin.apply_point(v)).collect();
    let mi = img.iter().map(|v| v.0).min().unwrap_or(0);
    let mj = img.iter().map(|v| v.1).min().unwrap_or(0);
    AffineMap { m, t: (-mi, -mj) }
}

/// The two unimodular maps sending the inward normal `w` to `(1, 0)`, of
/// determinant `+1` and `-1`.
pub fn edge_maps(w: Point) -> [[[i64; 2]; 2]; 2] {
    let (u, v) = bezout(w.0, w.1);
    [[[w.0, w.1], [-v, u]], [[w.0, w.1], [v, -u]]]
}

/// `r_0(P)` and every candidate map achieving it, in edge order (det +1 first).
pub fn minimal_lattice_length(p: &LatticePolygon) -> Result<(i64, Vec<AffineMap>)> {
    if p.dimension() == 0 {
        return Err(Error::DegeneratePolygon);
    }
    let mut best = i64::MAX;
    let mut maps: Vec<AffineMap> = Vec::new();
    for e in p.edges() {
        for m in edge_maps(e.normal) {
            let tau = normalizing(m, p.vertices());
            let r = lattice_length(&p.transform(&tau));
            if r < best {
                best = r;
                maps.clear();
            }
            if r == best && !maps.iter().any(|t| t.same_linear_part(&tau)) {
                maps.push(tau);
            }
        }
    }
    Ok((best, maps))
}

/// Applies `tau` to the exponents and translates to minimum exponents 0.
pub fn apply_affine(tau: &AffineMap, f: &BiPoly) -> BiPoly {
    let lin = AffineMap { m: tau.m, t: (0, 0) };
    let pts: Vec<Point> = f.terms().map(|((i, j), _)| lin.apply_point((i, j))).collect();
    let mi = pts.iter().map(|p| p.0).min().unwrap_or(0);
    let mj = pts.iter().map(|p| p.1).min().unwrap_or(0);
    f.map_exponents(|i, j| {
        let (a, b) = lin.apply_point((i, j));
        (a - mi, b - mj)
    })
}

/// Euclidean area by the shoelace formula.
pub fn volume(p: &LatticePolygon) -> Rat {
    let v = &p.vertices;
    if v.len() < 3 {
        return Rat::from_integer(0);
    }
    let mut twice = 0i64;
    for k in 0..v.len() {
        let (a, b) = (v[k], v[(k + 1) % v.len()]);
        twice += a.0 * b.1 - a.1 * b.0;
    }
    Rat::new(twice.abs(), 2)
}

fn check_edge(f: &BiPoly, e: &Edge) -> Result<()> {
    let w = e.normal;
    let base = w.0 * e.a.0 + w.1 * e.a.1;
    let on_support = f.coeff(e.a.0, e.a.1) != 0 && f.coeff(e.b.0, e.b.1) != 0;
    if !on_support || e.normal.1 <= 0 || f.terms().any(|((i, j), _)| w.0 * i + w.1 * j < base) {
        return Err(Error::EdgeNotOnPolygon);
    }
    Ok(())
}

/// Restriction of `F` to the lattice points of a lower edge.
pub fn edge_polynomial(f: &BiPoly, e: &Edge) -> Result<BiPoly> {
    check_edge(f, e)?;
    let mut r = BiPoly::zero(f.field());
    for (i, j) in e.lattice_points() {
        r.add_term(i, j, f.coeff(i, j));
    }
    Ok(r)
}

/// Writes `F_E = x^a y^b g(y^q x^-m)` for the edge direction `(q, -m)`;
/// returns `g` and the exponents `(b, a)` of the monomial as a point.
pub fn edge_to_univariate(f: &BiPoly, e: &Edge) -> Result<(UniPoly, Point)> {
    let fe = edge_polynomial(f, e)?;
    let coeffs = e.lattice_points().iter().map(|&(i, j)| fe.coeff(i, j)).collect();
    Ok((UniPoly::new(f.field(), coeffs), e.a))
}

/// Rebuilds the quasi-homogeneous polynomial `x^a y^b g(y^q x^-m)`.
pub fn univariate_to_edge(g: &UniPoly, start: Point, dir: Point) -> BiPoly {
    let mut r = BiPoly::zero(g.field());
    for (k, &c) in g.coeffs().iter().enumerate() {
        let k = k as i64;
        r.add_term(start.0 + k * dir.0, start.1 + k * dir.1, c);
    }
    r
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeReport {
    pub edge: Edge,
    pub g: UniPoly,
    pub separable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegeneracyReport {
    pub edges: Vec<EdgeReport>,
}

impl DegeneracyReport {
    pub fn is_degenerate(&self) -> bool {
        self.edges.iter().any(|e| !e.separable)
    }
}

impl fmt::Display for DegeneracyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bad: Vec<String> = self
            .edges
            .iter()
            .filter(|e| !e.separable)
            .map(|e| format!("edge {} has g(t) = {}", e.edge, e.g))
            .collect();
        if bad.is_empty() {
            write!(f, "non-degenerate")
        } else {
            write!(f, "{}", bad.join("; "))
        }
    }
}

/// Per-edge separability of `g` on every lower edge of `N(F)`.
pub fn is_degenerate(f: &BiPoly) -> Result<DegeneracyReport> {
    let p = newton_polygon(f)?;
    let mut edges = Vec::new();
    for e in lower_boundary(&p) {
        let (g, _) = edge_to_univariate(f, &e)?;
        let separable = g.gcd(&g.derivative()).is_one();
        edges.push(EdgeReport { edge: e, g, separable });
    }
    Ok(DegeneracyReport { edges })
}
