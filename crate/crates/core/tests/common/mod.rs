#![allow(dead_code)]

use bivfact::ffield::{PrimeField, UniPoly};
use bivfact::polygon::is_degenerate;
use bivfact::slopecore::ypoly::{content, divides, is_separable_y};
use bivfact::BiPoly;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fp(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

/// Random sparse polynomial of y-degree in `1..=max_dy` with terms in both the
/// top and the bottom y-row.
pub fn random_sparse(rng: &mut ChaCha8Rng, f: PrimeField, max_dy: i64, max_dx: i64, max_extra: usize) -> BiPoly {
    let p = f.modulus();
    let dy = rng.gen_range(1..=max_dy);
    let dx = rng.gen_range(0..=max_dx);
    let extra = rng.gen_range(0..=max_extra);
    let mut g = BiPoly::zero(f);
    g.add_term(dy, rng.gen_range(0..=dx), rng.gen_range(1..p));
    g.add_term(0, rng.gen_range(0..=dx), rng.gen_range(1..p));
    for _ in 0..extra {
        g.add_term(rng.gen_range(0..=dy), rng.gen_range(0..=dx), rng.gen_range(1..p));
    }
    g
}

/// Primitive, separable, non-degenerate and not divisible by `x` or `y`.
pub fn is_good_input(f: &BiPoly) -> bool {
    if f.is_zero() || f.deg_y().unwrap_or(0) < 1 || f.ord_y() != Some(0) || f.v0() != Some(0) {
        return false;
    }
    content(f).is_one() && is_separable_y(f) && !is_degenerate(f).map(|r| r.is_degenerate()).unwrap_or(true)
}

pub fn product(f: PrimeField, fs: &[BiPoly]) -> BiPoly {
    fs.iter().fold(BiPoly::one(f), |a, g| a.mul(g))
}

pub fn equal_up_to_unit(a: &BiPoly, b: &BiPoly) -> bool {
    bivfact::recomb::equal_up_to_unit(a, b)
}

/// Whether `g` is, up to a unit, the product of the members of `factors` dividing it.
pub fn is_product_of_some(g: &BiPoly, factors: &[BiPoly]) -> bool {
    let f = g.field();
    let parts: Vec<BiPoly> = factors.iter().filter(|h| divides(h, g)).cloned().collect();
    equal_up_to_unit(&product(f, &parts), g)
}

/// Every polynomial with `deg_y <= dy` and `deg_x <= dx`, indexed in base `p`.
pub fn poly_from_index(f: PrimeField, mut idx: u64, dy: i64, dx: i64) -> BiPoly {
    let p = f.modulus();
    let mut g = BiPoly::zero(f);
    for i in 0..=dy {
        for j in 0..=dx {
            g.add_term(i, j, idx % p);
            idx /= p;
        }
    }
    g
}

/// Irreducible factorization by exhaustive search for factors linear in `y`,
/// valid for `deg_y <= 3` (any proper factorization then has a linear factor).
pub fn brute_force_factor(g: &BiPoly) -> Vec<BiPoly> {
    let d = g.deg_y().unwrap();
    assert!(d <= 3);
    let mut out = Vec::new();
    let mut rest = g.clone();
    while rest.deg_y().unwrap() >= 2 {
        match find_linear_factor(&rest) {
            Some(h) => {
                rest = bivfact::slopecore::ypoly::div_exact(&rest, &h).unwrap();
                out.push(h);
            }
            None => break,
        }
    }
    if rest.deg_y().unwrap() >= 1 {
        out.push(rest);
    }
    out
}

fn find_linear_factor(g: &BiPoly) -> Option<BiPoly> {
    let f = g.field();
    let p = f.modulus();
    let d = g.deg_y().unwrap();
    let dx = g.deg_x().unwrap();
    let rows: Vec<UniPoly> = (0..=d).map(|i| g.row_poly(i)).collect();
    // h = h1(x) y + h0(x); h1 runs over polynomials with leading coefficient 1
    // up to degree dx, h0 over all polynomials of degree <= dx.
    let count = p.pow(dx as u32 + 1);
    for h1i in 1..count {
        let h1 = UniPoly::new(f, digits(h1i, p, dx as usize + 1));
        if h1.lc() != 1 || !rows[d as usize].rem(&h1).is_zero() {
            continue;
        }
        for h0i in 0..count {
            let h0 = UniPoly::new(f, digits(h0i, p, dx as usize + 1));
            if h0.is_zero() || !rows[0].rem(&h0).is_zero() {
                continue;
            }
            // sum g_i (-h0)^i h1^(d-i) == 0
            let mh0 = h0.neg();
            let mut acc = UniPoly::zero(f);
            let mut pw = UniPoly::one(f);
            for (i, r) in rows.iter().enumerate() {
                acc = acc.add(&r.mul(&pw).mul(&h1.pow(d as usize - i)));
                pw = pw.mul(&mh0);
            }
            if acc.is_zero() {
                let mut h = BiPoly::from_x_poly(&h1).shift(1, 0).add(&BiPoly::from_x_poly(&h0));
                h = bivfact::slopecore::ypoly::primitive_part(&h);
                if divides(&h, g) {
                    return Some(h);
                }
            }
        }
    }
    None
}

fn digits(mut n: u64, p: u64, len: usize) -> Vec<u64> {
    (0..len)
        .map(|_| {
            let d = n % p;
            n /= p;
            d
        })
        .collect()
}

/// Sorted, normalized copies for comparing factor lists.
pub fn canonical(fs: &[BiPoly]) -> Vec<BiPoly> {
    let mut v: Vec<BiPoly> = fs.iter().map(bivfact::recomb::normalize_factor).collect();
    v.sort_by_key(|g| format!("{g}"));
    v
}
