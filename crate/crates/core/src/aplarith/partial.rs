use crate::error::{Error, Result};
use crate::ffield::{uni_factor, UniPoly};
use crate::slopecore::{
    alpha_lambda, floor_rat, in_lambda, tau_lambda, tau_lambda_inverse, trunc_lambda, v_lambda, BiPoly, Rat,
    Slope,
};

use super::apl_hensel;

/// Factorization `In_lambda(F) = y^n0 * prod(h_k^e_k) * u x^a` of the initial part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitFacto {
    pub n0: i64,
    /// Irreducible lambda-homogeneous monic factors with their multiplicities.
    pub middle: Vec<(BiPoly, usize)>,
    pub unit: u64,
    pub a: i64,
}

impl InitFacto {
    pub fn p0(&self, field: crate::ffield::PrimeField) -> BiPoly {
        BiPoly::monomial(field, self.n0, 0, 1)
    }

    pub fn pinf(&self, field: crate::ffield::PrimeField) -> BiPoly {
        BiPoly::monomial(field, 0, self.a, self.unit)
    }

    /// The coprime powers `p_1, ..., p_k`.
    pub fn middle_powers(&self) -> Vec<BiPoly> {
        self.middle.iter().map(|(h, e)| h.pow(*e as u32)).collect()
    }
}

pub fn init_facto(f: &BiPoly, l: Slope, rng_seed: u64) -> Result<InitFacto> {
    let field = f.field();
    let inl = in_lambda(f, l);
    let n0 = inl.ord_y().ok_or(Error::ZeroPolynomial)?;
    let rest = inl.shift(-n0, 0);
    let a0 = rest.row_v0(0).unwrap();
    let (q, m) = (l.q(), l.m());
    let deg = rest.deg_y().unwrap() / q;
    let g = UniPoly::new(field, (0..=deg).map(|k| rest.coeff(k * q, a0 - k * m)).collect());
    let mut middle = Vec::new();
    for (h, e) in uni_factor(&g, rng_seed) {
        let dh = h.degree().unwrap() as i64;
        let mut hk = BiPoly::zero(field);
        for (k, &c) in h.coeffs().iter().enumerate() {
            let k = k as i64;
            hk.add_term(k * q, m * (dh - k), c);
        }
        middle.push((hk, e));
    }
    Ok(InitFacto { n0, middle, unit: g.lc(), a: a0 - m * deg })
}

/// Output of one PartialFacto step along the slope `lambda`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFactorization {
    pub p0: BiPoly,
    pub middle: Vec<BiPoly>,
    pub pinf: BiPoly,
    pub lambda: Slope,
    pub sigma: Rat,
}

impl PartialFactorization {
    pub fn product(&self) -> BiPoly {
        self.middle.iter().fold(self.p0.mul(&self.pinf), |acc, p| acc.mul(p))
    }
}

fn relative_trunc(p: &BiPoly, l: Slope, sigma: Rat) -> BiPoly {
    match v_lambda(p, l).finite() {
        Some(v) => trunc_lambda(p, l, v + sigma),
        None => p.clone(),
    }
}

/// Splits `F` along the initial factorization and lifts each block to relative
/// lambda-precision `sigma`.
pub fn partial_facto(f: &BiPoly, l: Slope, sigma: Rat, rng_seed: u64) -> Result<PartialFactorization> {
    let field = f.field();
    let init = init_facto(f, l, rng_seed)?;
    if init.middle.iter().any(|(_, e)| *e > 1) {
        return Err(Error::DegenerateEdge);
    }
    let (q, m) = (l.q(), l.m());
    let t = (v_lambda(f, l).unwrap() * q).to_integer();
    let alpha = alpha_lambda(-t, l);
    let i0 = -(t + alpha * m) / q;
    let n = floor_rat(sigma * q) + 1;
    let fh = tau_lambda(&f.shift(alpha, i0), l).trunc_x(n);
    debug_assert_eq!(fh.v0(), Some(0));

    let mut polys = Vec::new();
    let n0a = init.n0 + alpha;
    if n0a > 0 {
        polys.push(UniPoly::monomial(field, 1, n0a as usize));
    }
    let mut shifts = Vec::new();
    for (h, _) in &init.middle {
        let th = tau_lambda(h, l);
        let s = th.v0().unwrap();
        shifts.push(s);
        polys.push(th.shift(0, -s).eval_x(0));
    }
    let lc0 = fh.filter(|_, j| j == 0).eval_x(0).lc();
    let (lifted, finf) = apl_hensel(&fh, &polys, lc0, l, n)?;
    let mut it = lifted.into_iter();

    let p0 = if n0a > 0 {
        let g = it.next().unwrap();
        tau_lambda_inverse(&g.shift(0, m * n0a), l)?.shift(-alpha, 0)
    } else {
        BiPoly::one(field)
    };
    let mut middle = Vec::new();
    for s in &shifts {
        let g = it.next().unwrap();
        middle.push(relative_trunc(&tau_lambda_inverse(&g.shift(0, *s), l)?, l, sigma));
    }
    let total = m * n0a + shifts.iter().sum::<i64>();
    let pinf = tau_lambda_inverse(&finf.shift(0, -total), l)?.shift(0, -i0);
    Ok(PartialFactorization {
        p0: relative_trunc(&p0, l, sigma),
        middle,
        pinf: relative_trunc(&pinf, l, sigma),
        lambda: l,
        sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::PrimeField;
    use crate::slopecore::{rat, Val};

    fn poly(p: u64, t: &[(i64, i64, i64)]) -> BiPoly {
        BiPoly::from_terms(PrimeField::new(p).unwrap(), t.iter().copied())
    }

    fn residual_ok(f: &BiPoly, pf: &PartialFactorization) -> bool {
        let l = pf.lambda;
        let v = v_lambda(f, l).unwrap();
        v_lambda(&f.sub(&pf.product()), l) > Val::Finite(v + pf.sigma)
    }

    #[test]
    fn init_examples() {
        let f5 = PrimeField::new(5).unwrap();
        let a = poly(101, &[(2, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]);
        let i = init_facto(&a, Slope::integer(0), 0).unwrap();
        assert_eq!(i.n0, 1);
        assert_eq!(i.middle, vec![(poly(101, &[(1, 0, 1), (0, 0, 1)]), 1)]);
        assert_eq!((i.unit, i.a), (1, 0));

        let b = poly(5, &[(2, 0, 1), (0, 2, 4)]);
        let i = init_facto(&b, Slope::integer(1), 0).unwrap();
        assert_eq!(i.n0, 0);
        let mids: Vec<_> = i.middle.iter().map(|(h, _)| h.clone()).collect();
        assert_eq!(mids, vec![poly(5, &[(1, 0, 1), (0, 1, 1)]), poly(5, &[(1, 0, 1), (0, 1, 4)])]);
        assert_eq!(i.middle_powers().iter().fold(BiPoly::one(f5), |a, p| a.mul(p)), b);

        let c = poly(3, &[(2, 0, 1), (0, 2, 1)]);
        let i = init_facto(&c, Slope::integer(1), 0).unwrap();
        assert_eq!(i.middle.len(), 1);
    }

    #[test]
    fn init_with_fractional_slope_and_unit() {
        // In = 3 x^5 (y^2 + x^3)(y^2 + 2 x^3) y at slope 3/2
        let f = poly(101, &[(1, 5, 1)])
            .mul(&poly(101, &[(2, 0, 1), (0, 3, 1)]))
            .mul(&poly(101, &[(2, 0, 1), (0, 3, 2)]))
            .scale(3);
        let i = init_facto(&f, Slope::new(3, 2), 0).unwrap();
        assert_eq!(i.n0, 1);
        assert_eq!(i.middle.len(), 2);
        let fld = f.field();
        let rebuilt = i.middle_powers().iter().fold(i.p0(fld).mul(&i.pinf(fld)), |a, p| a.mul(p));
        assert_eq!(rebuilt, f);
    }

    #[test]
    fn partial_examples() {
        let a = poly(101, &[(2, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]);
        let pf = partial_facto(&a, Slope::integer(0), rat(3, 1), 0).unwrap();
        assert_eq!(pf.p0, poly(101, &[(1, 0, 1), (0, 1, 1)]));
        assert_eq!(pf.middle, vec![poly(101, &[(1, 0, 1), (0, 0, 1)])]);
        assert_eq!(pf.pinf, BiPoly::one(a.field()));

        let b = poly(5, &[(2, 0, 1), (0, 2, 4), (0, 3, 4)]);
        let pf = partial_facto(&b, Slope::integer(1), rat(3, 1), 0).unwrap();
        assert_eq!(pf.middle.len(), 2);
        assert!(residual_ok(&b, &pf));
    }

    #[test]
    fn degenerate_edge_is_rejected() {
        let h = poly(7, &[(1, 0, 1), (0, 1, 1)]);
        let f = h.mul(&h).add(&poly(7, &[(0, 3, 1)]));
        assert_eq!(partial_facto(&f, Slope::integer(1), rat(2, 1), 0), Err(Error::DegenerateEdge));
    }

    #[test]
    fn partial_with_all_three_branches() {
        // In at lambda = 1/2: y (y^2 + x) * 5 x^2, plus higher weight terms
        let base = poly(65537, &[(1, 0, 1)]).mul(&poly(65537, &[(2, 0, 1), (0, 1, 1)])).mul(&poly(65537, &[(0, 2, 5)]));
        let f = base.add(&poly(65537, &[(4, 2, 1), (0, 5, 3), (2, 3, 7), (3, 3, 2), (1, 4, 1)]));
        let l = Slope::new(1, 2);
        for sigma in [rat(1, 2), rat(2, 1), rat(7, 2)] {
            let pf = partial_facto(&f, l, sigma, 0).unwrap();
            assert!(residual_ok(&f, &pf), "sigma {sigma}");
            assert_eq!(pf.p0.deg_y(), Some(1));
            assert_eq!(pf.middle[0].deg_y(), Some(2));
        }
    }
}
