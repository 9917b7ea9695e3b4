use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;


/// Exact rational number.
pub type Rat = Rational64;

/// A valuation value: a rational or `+inf` (the valuation of zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    Finite(Rat),
    Inf,
}

impl Val {
    pub fn finite(self) -> Option<Rat> {
        match self {
            Val::Finite(r) => Some(r),
            Val::Inf => None,
        }
    }

    /// Unwraps a finite valuation. Panics on `Inf`.
    pub fn unwrap(self) -> Rat {
        self.finite().expect("infinite valuation")
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Finite(r) => write!(f, "{}", fmt_rat(*r)),
            Val::Inf => write!(f, "inf"),
        }
    }
}

/// Renders a rational as `a/b`, or `a` when integral.
pub fn fmt_rat(r: Rat) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

pub fn floor_rat(r: Rat) -> i64 {
    r.numer().div_floor(r.denom())
}

pub fn ceil_rat(r: Rat) -> i64 {
    r.numer().div_ceil(r.denom())
}

/// A slope `m/q` in lowest terms with `q >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slope {
    m: i64,
    q: i64,
}

impl Slope {
    pub fn new(m: i64, q: i64) -> Self {
        assert!(q != 0, "slope with zero denominator");
        let g = m.gcd(&q);
        let s = if q < 0 { -1 } else { 1 };
        Slope { m: s * m / g, q: s * q / g }
    }

    pub fn integer(m: i64) -> Self {
        Slope { m, q: 1 }
    }

    pub fn from_rat(r: Rat) -> Self {
        Slope::new(*r.numer(), *r.denom())
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn as_rat(&self) -> Rat {
        Rat::new(self.m, self.q)
    }

    pub fn neg(&self) -> Self {
        Slope { m: -self.m, q: self.q }
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0
    }

    /// Inverse of `m` modulo `q` (0 when `q = 1`).
    pub fn m_inv_mod_q(&self) -> i64 {
        if self.q == 1 {
            return 0;
        }
        let e = self.m.rem_euclid(self.q).extended_gcd(&self.q);
        e.x.rem_euclid(self.q)
    }

    /// `q * (j + i*lambda)`, the scaled weight of the monomial `x^j y^i`.
    #[inline]
    pub fn scaled_weight(&self, i: i64, j: i64) -> i64 {
        self.q * j + self.m * i
    }

    pub fn weight(&self, i: i64, j: i64) -> Rat {
        Rat::new(self.scaled_weight(i, j), self.q)
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.m as i128 * other.q as i128).cmp(&(other.m as i128 * self.q as i128))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.m, self.q)
    }
}

/// Parses `m/q` or an integer into a rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().ok()?;
            let b: i64 = b.trim().parse().ok()?;
            (b != 0).then(|| Rat::new(a, b))
        }
        None => s.parse::<i64>().ok().map(Rat::from_integer),
    }
}
