//! Exact arithmetic for a real quadratic slope `r = (p + q√d)/s`.
//!
//! Every comparison in the crate reduces to the sign of an integer surd
//! `X + Y√d`. A checked `i128` path handles the common case and a `BigInt`
//! path takes over on overflow.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision reduced fraction.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SlopeError {
    #[error("q must be nonzero")]
    ZeroQ,
    #[error("s must be positive")]
    NonPositiveS,
    #[error("d must be greater than 1, got {0}")]
    SmallD(i64),
    #[error("d must be squarefree, got {0}")]
    NotSquarefree(i64),
    #[error("d must not be a perfect square, got {0}")]
    PerfectSquare(i64),
    #[error("slope must be greater than 1")]
    NotAboveOne,
    #[error("slope parameters out of range")]
    Overflow,
    #[error("unrecognized slope `{0}` (expected golden, sqrt:d or quad:p,q,s,d)")]
    Syntax(String),
}

/// The slope `r = (p + q√d)/s` with `d` squarefree, `q != 0`, `s > 0`, `r > 1`.
///
/// Parameters are stored reduced by `gcd(p, q, s)`, so equal slopes compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IrrationalSlope {
    p: i64,
    q: i64,
    s: i64,
    d: i64,
    // 1/r = (ip + iq√d)/is, is > 0, reduced.
    ip: i128,
    iq: i128,
    is: i128,
}

const MAX_PARAM: i64 = 1 << 30;

impl IrrationalSlope {
    pub fn new(p: i64, q: i64, s: i64, d: i64) -> Result<Self, SlopeError> {
        if q == 0 {
            return Err(SlopeError::ZeroQ);
        }
        if s <= 0 {
            return Err(SlopeError::NonPositiveS);
        }
        if d <= 1 {
            return Err(SlopeError::SmallD(d));
        }
        if [p, q, s, d].iter().any(|v| v.abs() > MAX_PARAM) {
            return Err(SlopeError::Overflow);
        }
        if !is_squarefree(d) {
            return Err(SlopeError::NotSquarefree(d));
        }
        let g = p.gcd(&q).gcd(&s);
        let (p, q, s) = (p / g, q / g, s / g);
        if sign_surd(i128::from(p - s), i128::from(q), i128::from(d)) <= 0 {
            return Err(SlopeError::NotAboveOne);
        }
        let (p1, q1, s1, d1) = (i128::from(p), i128::from(q), i128::from(s), i128::from(d));
        let den = p1 * p1 - q1 * q1 * d1;
        let (mut ip, mut iq, mut is) = (s1 * p1, -s1 * q1, den);
        if is < 0 {
            ip = -ip;
            iq = -iq;
            is = -is;
        }
        let g = ip.gcd(&iq).gcd(&is);
        ip /= g;
        iq /= g;
        is /= g;
        Ok(Self { p, q, s, d, ip, iq, is })
    }

    /// φ = (1 + √5)/2.
    pub fn golden() -> Self {
        Self::new(1, 1, 2, 5).expect("golden ratio parameters are valid")
    }

    /// `√n` for a non-square `n > 1`; square factors of `n` move into `q`.
    pub fn sqrt(n: i64) -> Result<Self, SlopeError> {
        if n <= 1 {
            return Err(SlopeError::SmallD(n));
        }
        if n > MAX_PARAM {
            return Err(SlopeError::Overflow);
        }
        let (f, core) = split_square(n);
        if core == 1 {
            return Err(SlopeError::PerfectSquare(n));
        }
        Self::new(0, f, 1, core)
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// `1/r` as `(p', q', s')` with `1/r = (p' + q'√d)/s'` and `s' > 0`.
    pub fn inverse_parts(&self) -> (i128, i128, i128) {
        (self.ip, self.iq, self.is)
    }

    /// Approximate value, for display and test oracles only.
    pub fn to_f64(&self) -> f64 {
        (self.p as f64 + self.q as f64 * (self.d as f64).sqrt()) / self.s as f64
    }

    /// `⌊r⌋`.
    pub fn floor(&self) -> i64 {
        self.floor_mul(1)
    }

    /// `⌊n·r⌋`.
    ///
    /// Panics if the result does not fit in `i64`.
    pub fn floor_mul(&self, n: i64) -> i64 {
        let n = i128::from(n);
        let (p, q, s, d) = (i128::from(self.p), i128::from(self.q), i128::from(self.s), i128::from(self.d));
        to_i64(floor_surd(n * p, n * q, s, d))
    }

    /// `⌊n/r⌋`.
    pub fn floor_div(&self, n: i64) -> i64 {
        let n = i128::from(n);
        to_i64(floor_surd(n * self.ip, n * self.iq, self.is, self.d.into()))
    }

    /// Sign of `a + b·r`.
    pub fn sign_affine(&self, a: &Rational, b: &Rational) -> i8 {
        let (p, q, s) = (i128::from(self.p), i128::from(self.q), i128::from(self.s));
        sign_rational_surd(a, b, (p, q, s), self.d.into())
    }

    /// Sign of `a + b/r`.
    pub fn sign_affine_inv(&self, a: &Rational, b: &Rational) -> i8 {
        sign_rational_surd(a, b, (self.ip, self.iq, self.is), self.d.into())
    }

    /// Sign of `(a_rat − b_rat) + (a_rot − b_rot)/r`.
    pub fn sign_diff_inv(&self, a_rot: &Rational, a_rat: &Rational, b_rot: &Rational, b_rat: &Rational) -> i8 {
        let fast = (|| {
            let (rn, rd) = diff_small(a_rot, b_rot)?;
            let (tn, td) = diff_small(a_rat, b_rat)?;
            let x = tn.checked_mul(rd)?.checked_mul(self.is)?.checked_add(rn.checked_mul(td)?.checked_mul(self.ip)?)?;
            let y = rn.checked_mul(td)?.checked_mul(self.iq)?;
            sign_surd_small(x, y, self.d.into())
        })();
        match fast {
            Some(s) => s,
            None => self.sign_affine_inv(&(a_rat - b_rat), &(a_rot - b_rot)),
        }
    }

    /// `⌊a + b/r⌋`.
    pub fn floor_affine_inv(&self, a: &Rational, b: &Rational) -> BigInt {
        floor_rational_surd(a, b, (self.ip, self.iq, self.is), self.d.into())
    }
}

impl fmt::Display for IrrationalSlope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "quad:{},{},{},{}", self.p, self.q, self.s, self.d)
    }
}

impl FromStr for IrrationalSlope {
    type Err = SlopeError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let text = text.trim();
        let syntax = || SlopeError::Syntax(text.to_string());
        if text == "golden" {
            return Ok(Self::golden());
        }
        if let Some(rest) = text.strip_prefix("sqrt:") {
            let n: i64 = rest.trim().parse().map_err(|_| syntax())?;
            return Self::sqrt(n);
        }
        if let Some(rest) = text.strip_prefix("quad:") {
            let parts: Vec<i64> =
                rest.split(',').map(|x| x.trim().parse::<i64>()).collect::<Result<_, _>>().map_err(|_| syntax())?;
            if let [p, q, s, d] = parts[..] {
                return Self::new(p, q, s, d);
            }
        }
        Err(syntax())
    }
}

/// Sign of `a + b·r`; zero only when `a = b = 0`.
pub fn sign_affine(a: &Rational, b: &Rational, r: &IrrationalSlope) -> i8 {
    r.sign_affine(a, b)
}

/// `⌊n·r⌋`.
pub fn floor_mul(n: i64, r: &IrrationalSlope) -> i64 {
    r.floor_mul(n)
}

/// `⌊n/r⌋`.
pub fn floor_div(n: i64, r: &IrrationalSlope) -> i64 {
    r.floor_div(n)
}

fn to_i64(v: i128) -> i64 {
    i64::try_from(v).expect("floor result exceeds i64")
}

fn is_squarefree(d: i64) -> bool {
    split_square(d).0 == 1
}

// n = f² · core with core squarefree.
fn split_square(mut n: i64) -> (i64, i64) {
    let mut f = 1;
    let mut core = 1;
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            f *= p;
        }
        if e % 2 == 1 {
            core *= p;
        }
        p += 1;
    }
    (f, core * n)
}

/// Sign of `x + y√d` for integer `x, y` and non-square `d > 1`.
pub(crate) fn sign_surd(x: i128, y: i128, d: i128) -> i8 {
    match sign_surd_small(x, y, d) {
        Some(s) => s,
        None => sign_surd_big(&BigInt::from(x), &BigInt::from(y), &BigInt::from(d)),
    }
}

fn sign_surd_small(x: i128, y: i128, d: i128) -> Option<i8> {
    let sx = x.signum() as i8;
    let sy = y.signum() as i8;
    if sx >= 0 && sy >= 0 {
        return Some(sx.max(sy));
    }
    if sx <= 0 && sy <= 0 {
        return Some(-1);
    }
    let xx = x.checked_mul(x)?;
    let yyd = y.checked_mul(y)?.checked_mul(d)?;
    // x² ≠ y²d since √d is irrational.
    Some(if xx > yyd { sx } else { sy })
}

fn sign_surd_big(x: &BigInt, y: &BigInt, d: &BigInt) -> i8 {
    let sx = sign_of(x);
    let sy = sign_of(y);
    if sx >= 0 && sy >= 0 {
        return sx.max(sy);
    }
    if sx <= 0 && sy <= 0 {
        return -1;
    }
    if x * x > y * y * d {
        sx
    } else {
        sy
    }
}

fn sign_of(v: &BigInt) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// `⌊(a + b√d)/c⌋` for `c > 0`.
pub(crate) fn floor_surd(a: i128, b: i128, c: i128, d: i128) -> i128 {
    match floor_surd_small(a, b, c, d) {
        Some(v) => v,
        None => {
            let v = floor_surd_big(&a.into(), &b.into(), &c.into(), &d.into());
            v.to_i128().expect("floor result exceeds i128")
        }
    }
}

fn floor_surd_small(a: i128, b: i128, c: i128, d: i128) -> Option<i128> {
    let bb = b.unsigned_abs().checked_mul(b.unsigned_abs())?;
    let bbd = bb.checked_mul(d as u128)?;
    let root = i128::try_from(bbd.sqrt()).ok()?;
    let t = match b.signum() {
        0 => 0,
        1 => root,
        _ => -root - 1,
    };
    Some(Integer::div_floor(&a.checked_add(t)?, &c))
}

fn floor_surd_big(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> BigInt {
    let root = (b * b * d).sqrt();
    let t = match sign_of(b) {
        0 => BigInt::zero(),
        1 => root,
        _ => -root - BigInt::one(),
    };
    (a + t).div_floor(c)
}

// x − y as an unreduced i128 fraction with positive denominator.
fn diff_small(x: &Rational, y: &Rational) -> Option<(i128, i128)> {
    let (xn, xd) = (small(x.numer())?, small(x.denom())?);
    let (yn, yd) = (small(y.numer())?, small(y.denom())?);
    if xd == yd {
        return Some((xn.checked_sub(yn)?, xd));
    }
    Some((xn.checked_mul(yd)?.checked_sub(yn.checked_mul(xd)?)?, xd.checked_mul(yd)?))
}

fn small(v: &BigInt) -> Option<i128> {
    v.to_i128()
}

// Sign of a + b·(u + v√d)/w with w > 0.
fn sign_rational_surd(a: &Rational, b: &Rational, (u, v, w): (i128, i128, i128), d: i128) -> i8 {
    let fast = (|| {
        let (an, ad) = (small(a.numer())?, small(a.denom())?);
        let (bn, bd) = (small(b.numer())?, small(b.denom())?);
        let x = an.checked_mul(bd)?.checked_mul(w)?.checked_add(bn.checked_mul(ad)?.checked_mul(u)?)?;
        let y = bn.checked_mul(ad)?.checked_mul(v)?;
        sign_surd_small(x, y, d)
    })();
    if let Some(s) = fast {
        return s;
    }
    let (x, y, _) = combine_big(a, b, (u, v, w));
    sign_surd_big(&x, &y, &BigInt::from(d))
}

// ⌊a + b·(u + v√d)/w⌋ with w > 0.
fn floor_rational_surd(a: &Rational, b: &Rational, (u, v, w): (i128, i128, i128), d: i128) -> BigInt {
    let fast = (|| {
        let (an, ad) = (small(a.numer())?, small(a.denom())?);
        let (bn, bd) = (small(b.numer())?, small(b.denom())?);
        let x = an.checked_mul(bd)?.checked_mul(w)?.checked_add(bn.checked_mul(ad)?.checked_mul(u)?)?;
        let y = bn.checked_mul(ad)?.checked_mul(v)?;
        let z = ad.checked_mul(bd)?.checked_mul(w)?;
        floor_surd_small(x, y, z, d)
    })();
    if let Some(f) = fast {
        return BigInt::from(f);
    }
    let (x, y, z) = combine_big(a, b, (u, v, w));
    floor_surd_big(&x, &y, &z, &BigInt::from(d))
}

// a + b(u + v√d)/w = (x + y√d)/z with z > 0.
fn combine_big(a: &Rational, b: &Rational, (u, v, w): (i128, i128, i128)) -> (BigInt, BigInt, BigInt) {
    let (u, v, w) = (BigInt::from(u), BigInt::from(v), BigInt::from(w));
    let x = a.numer() * b.denom() * &w + b.numer() * a.denom() * &u;
    let y = b.numer() * a.denom() * &v;
    let z = a.denom() * b.denom() * &w;
    (x, y, z)
}
