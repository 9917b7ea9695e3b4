use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{PrimeField, UniPoly};

/// `g^(p^k)` style Frobenius power `base^p mod m`.
fn frob(base: &UniPoly, m: &UniPoly) -> UniPoly {
    base.pow_mod(base.field().modulus() as u128, m)
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, e)` with `f = prod g^e`.
fn squarefree(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let field = f.field();
    let p = field.modulus() as usize;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c).unwrap();
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y).unwrap();
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w).unwrap();
        i += 1;
    }
    if !c.is_one() {
        // c is a polynomial in t^p; over F_p its p-th root is the deflation
        let root = c.deflate(p).expect("remaining cofactor is a p-th power");
        for (g, e) in squarefree(&root) {
            out.push((g, e * p));
        }
    }
    out
}

/// Distinct-degree splitting of a monic squarefree polynomial.
fn distinct_degree(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let field = f.field();
    let x = UniPoly::var(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = frob(&h, &rest);
        let g = h.sub(&x).gcd(&rest);
        if !g.is_one() {
            rest = rest.div_exact(&g).unwrap();
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        let d = rest.degree().unwrap();
        out.push((rest, d));
    }
    out
}

/// Cantor-Zassenhaus equal-degree splitting into irreducibles of degree `d`.
fn equal_degree(f: &UniPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<UniPoly>) {
    let n = f.degree().unwrap();
    if n == d {
        out.push(f.clone());
        return;
    }
    let field = f.field();
    let p = field.modulus();
    loop {
        let a = UniPoly::new(field, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let g0 = a.gcd(f);
        let g = if !g0.is_one() {
            g0
        } else if p == 2 {
            // trace map of F_{2^d} over F_2
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = t.mul_mod(&t, f);
                acc = acc.add(&t);
            }
            acc.gcd(f)
        } else {
            // a^((p^d - 1)/2) = (a^(1 + p + ... + p^(d-1)))^((p-1)/2)
            let mut t = a.clone();
            let mut norm = a.clone();
            for _ in 1..d {
                t = frob(&t, f);
                norm = norm.mul_mod(&t, f);
            }
            let b = norm.pow_mod(((p - 1) / 2) as u128, f);
            b.sub(&UniPoly::one(field)).gcd(f)
        };
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let h = f.div_exact(&g).unwrap();
            equal_degree(&g, d, rng, out);
            equal_degree(&h, d, rng, out);
            return;
        }
    }
}

/// Complete factorization into monic irreducibles with multiplicities.
///
/// The product of the factors to their multiplicities, times `f.lc()`, is `f`.
/// Factors come out sorted by degree, then coefficients.
pub fn uni_factor(f: &UniPoly, rng_seed: u64) -> Vec<(UniPoly, usize)> {
    assert!(!f.is_zero(), "factorization of the zero polynomial");
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut out = Vec::new();
    for (sq, e) in squarefree(&f.monic()) {
        for (part, d) in distinct_degree(&sq) {
            let mut irr = Vec::new();
            equal_degree(&part, d, &mut rng, &mut irr);
            out.extend(irr.into_iter().map(|g| (g, e)));
        }
    }
    out.sort_by(|(a, _), (b, _)| a.len().cmp(&b.len()).then_with(|| a.coeffs().cmp(b.coeffs())));
    out
}

/// Ben-Or irreducibility test.
pub fn is_irreducible(f: &UniPoly) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(n) => n,
    };
    let f = f.monic();
    let x = UniPoly::var(f.field());
    let mut h = x.rem(&f);
    for _ in 1..=n / 2 {
        h = frob(&h, &f);
        if !h.sub(&x).gcd(&f).is_one() {
            return false;
        }
    }
    true
}

/// The first monic irreducible coprime to `c0`, searching degree 1 upward and,
/// within a degree, by coefficient vectors read as base-`p` integers.
pub fn uni_find_coprime_irreducible(c0: &UniPoly) -> UniPoly {
    let field: PrimeField = c0.field();
    let p = field.modulus();
    for z in 0..p {
        if c0.eval(z) != 0 {
            return UniPoly::new(field, vec![field.neg(z), 1]);
        }
    }
    for deg in 2.. {
        let count = (p as u128).pow(deg as u32);
        for idx in 0..count {
            let mut v = Vec::with_capacity(deg + 1);
            let mut r = idx;
            for _ in 0..deg {
                v.push((r % p as u128) as u64);
                r /= p as u128;
            }
            v.push(1);
            let cand = UniPoly::new(field, v);
            if cand.coeff(0) != 0 && cand.gcd(c0).is_one() && is_irreducible(&cand) {
                return cand;
            }
        }
    }
    unreachable!()
}
