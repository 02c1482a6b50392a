//! Exact points of the circle group of the form `e(rot/r + rat)`.
//!
//! Points are kept canonical (argument in `[0, 1)`), so equality is structural.
//! The based order puts `1` below every other point.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::exact::{IrrationalSlope, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CircleError {
    #[error("interval is not open")]
    NotOpen,
    #[error("intersection is not a single arc")]
    Disconnected,
    #[error("arc length must be below 1/{0}")]
    TooLong(u64),
}

/// A point `e(rot/r + rat)` with argument in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CirclePoint {
    rot: Rational,
    rat: Rational,
}

impl CirclePoint {
    /// Coefficient of `1/r` in the argument.
    pub fn rot(&self) -> &Rational {
        &self.rot
    }

    /// Rational part of the argument.
    pub fn rat(&self) -> &Rational {
        &self.rat
    }
}

/// An arc from `lo` counter-clockwise to `hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrientedInterval {
    pub lo: CirclePoint,
    pub hi: CirclePoint,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl OrientedInterval {
    pub fn open(lo: CirclePoint, hi: CirclePoint) -> Self {
        Self { lo, hi, lo_closed: false, hi_closed: false }
    }

    pub fn closed(lo: CirclePoint, hi: CirclePoint) -> Self {
        Self { lo, hi, lo_closed: true, hi_closed: true }
    }

    /// `[lo, hi)`.
    pub fn half_open(lo: CirclePoint, hi: CirclePoint) -> Self {
        Self { lo, hi, lo_closed: true, hi_closed: false }
    }

    pub fn is_open(&self) -> bool {
        !self.lo_closed && !self.hi_closed
    }
}

/// Circle arithmetic relative to a fixed slope.
#[derive(Debug, Clone)]
pub struct Circle {
    slope: IrrationalSlope,
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl Circle {
    pub fn new(slope: IrrationalSlope) -> Self {
        Self { slope }
    }

    pub fn slope(&self) -> &IrrationalSlope {
        &self.slope
    }

    /// `e(rot/r + rat)` in canonical form.
    pub fn point(&self, rot: Rational, rat: Rational) -> CirclePoint {
        let shift = self.slope.floor_affine_inv(&rat, &rot);
        if shift.is_zero() {
            return CirclePoint { rot, rat };
        }
        CirclePoint { rat: rat - Rational::from_integer(shift), rot }
    }

    pub fn one(&self) -> CirclePoint {
        CirclePoint { rot: Rational::zero(), rat: Rational::zero() }
    }

    /// `h(n) = e(n/r)`.
    pub fn h(&self, n: i64) -> CirclePoint {
        CirclePoint { rot: int(n), rat: int(-self.slope.floor_div(n)) }
    }

    /// `ζ_k = e(1/k)`.
    pub fn zeta(&self, k: u64) -> CirclePoint {
        self.zeta_pow(k, 1)
    }

    /// `ζ_k^s`.
    pub fn zeta_pow(&self, k: u64, s: i64) -> CirclePoint {
        assert!(k >= 1, "root of unity order must be positive");
        let k = i64::try_from(k).expect("order fits i64");
        CirclePoint { rot: Rational::zero(), rat: rat(s.rem_euclid(k), k) }
    }

    pub fn mul(&self, a: &CirclePoint, b: &CirclePoint) -> CirclePoint {
        self.point(&a.rot + &b.rot, &a.rat + &b.rat)
    }

    pub fn inv(&self, a: &CirclePoint) -> CirclePoint {
        self.point(-a.rot.clone(), -a.rat.clone())
    }

    pub fn pow(&self, a: &CirclePoint, k: i64) -> CirclePoint {
        let k = int(k);
        self.point(&a.rot * &k, &a.rat * &k)
    }

    /// Compares canonical arguments.
    pub fn cmp_arg(&self, a: &CirclePoint, b: &CirclePoint) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        match self.slope.sign_diff_inv(&a.rot, &a.rat, &b.rot, &b.rat) {
            s if s < 0 => Ordering::Less,
            s if s > 0 => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }

    /// The based order: `b < c` iff `O(1, b, c)`, with `1` least.
    pub fn lt(&self, b: &CirclePoint, c: &CirclePoint) -> bool {
        self.cmp_arg(b, c) == Ordering::Less
    }

    /// Counter-clockwise orientation of three distinct points.
    pub fn orientation(&self, a: &CirclePoint, b: &CirclePoint, c: &CirclePoint) -> bool {
        if a == b || b == c || a == c {
            return false;
        }
        let ab = self.lt(a, b);
        let bc = self.lt(b, c);
        let ca = self.lt(c, a);
        (ab && bc) || (bc && ca) || (ca && ab)
    }

    /// Membership respecting endpoint flags; `(a, a)` is empty and `[a, a]` is `{a}`.
    pub fn contains(&self, i: &OrientedInterval, p: &CirclePoint) -> bool {
        if i.lo == i.hi {
            return i.lo_closed && i.hi_closed && *p == i.lo;
        }
        if *p == i.lo {
            return i.lo_closed;
        }
        if *p == i.hi {
            return i.hi_closed;
        }
        self.orientation(&i.lo, p, &i.hi)
    }

    /// `l(I) = hi·lo⁻¹`.
    pub fn length(&self, i: &OrientedInterval) -> CirclePoint {
        self.mul(&i.hi, &self.inv(&i.lo))
    }

    /// Common intersection of open arcs, or `None` if empty.
    ///
    /// A nonempty intersection starts at some left endpoint that lies in every
    /// other arc or coincides with its left endpoint. More than one such start
    /// means the intersection has several components.
    pub fn intersect_open(&self, intervals: &[OrientedInterval]) -> Result<Option<OrientedInterval>, CircleError> {
        if intervals.iter().any(|i| !i.is_open()) {
            return Err(CircleError::NotOpen);
        }
        let mut arcs: Vec<&OrientedInterval> = Vec::new();
        for i in intervals {
            if i.lo == i.hi {
                return Ok(None);
            }
            if !arcs.contains(&i) {
                arcs.push(i);
            }
        }
        if arcs.is_empty() {
            return Ok(None);
        }
        let mut starts: Vec<&CirclePoint> = Vec::new();
        for a in &arcs {
            let alpha = &a.lo;
            let inside = arcs.iter().all(|b| b.lo == *alpha || self.contains(b, alpha));
            if inside && !starts.contains(&alpha) {
                starts.push(alpha);
            }
        }
        match starts.as_slice() {
            [] => Ok(None),
            [alpha] => {
                let alpha = (*alpha).clone();
                let beta = arcs
                    .iter()
                    .map(|a| &a.hi)
                    .min_by(|x, y| self.cmp_from(&alpha, x, y))
                    .expect("nonempty family")
                    .clone();
                Ok(Some(OrientedInterval::open(alpha, beta)))
            }
            _ => Err(CircleError::Disconnected),
        }
    }

    // Order of x and y going counter-clockwise from base (base itself is least).
    fn cmp_from(&self, base: &CirclePoint, x: &CirclePoint, y: &CirclePoint) -> Ordering {
        let shift = self.inv(base);
        self.cmp_arg(&self.mul(x, &shift), &self.mul(y, &shift))
    }

    /// The `k`-th root of `p` with the smallest argument.
    pub fn kth_root_base(&self, p: &CirclePoint, k: u64) -> CirclePoint {
        assert!(k >= 1, "root order must be positive");
        let k = int(i64::try_from(k).expect("order fits i64"));
        CirclePoint { rot: &p.rot / &k, rat: &p.rat / &k }
    }

    /// The `k` arcs whose `k`-th powers land in the open arc `(alpha, gamma)`.
    pub fn root_slices(&self, alpha: &CirclePoint, gamma: &CirclePoint, k: u64) -> Vec<OrientedInterval> {
        if alpha == gamma {
            return Vec::new();
        }
        let a0 = self.kth_root_base(alpha, k);
        let g0 = self.kth_root_base(gamma, k);
        let wraps = self.lt(gamma, alpha);
        (0..k as i64)
            .map(|s| {
                let lo = self.mul(&a0, &self.zeta_pow(k, s));
                let hi = self.mul(&g0, &self.zeta_pow(k, s + i64::from(wraps)));
                OrientedInterval::open(lo, hi)
            })
            .collect()
    }

    /// Whether `b^k` lies in the open arc `i`, decided through its root slices.
    pub fn power_in_interval(&self, b: &CirclePoint, k: u64, i: &OrientedInterval) -> Result<bool, CircleError> {
        if !i.is_open() {
            return Err(CircleError::NotOpen);
        }
        Ok(self.root_slices(&i.lo, &i.hi, k).iter().any(|s| self.contains(s, b)))
    }

    /// Whether `b^k ∈ (α^k, γ^k)`, via `b ∈ ζ_k^s(α, γ)`; needs `l((α, γ)) < 1/k`.
    pub fn power_transfer(&self, b: &CirclePoint, k: u64, i: &OrientedInterval) -> Result<bool, CircleError> {
        if !i.is_open() {
            return Err(CircleError::NotOpen);
        }
        if k > 1 && !self.lt(&self.length(i), &self.zeta(k)) {
            return Err(CircleError::TooLong(k));
        }
        Ok((0..k as i64).any(|s| {
            let z = self.zeta_pow(k, s);
            let arc = OrientedInterval::open(self.mul(&z, &i.lo), self.mul(&z, &i.hi));
            self.contains(&arc, b)
        }))
    }

    /// Approximate argument in `[0, 1)`, for display and test oracles only.
    pub fn to_f64(&self, p: &CirclePoint) -> f64 {
        let rot = p.rot.to_f64().unwrap_or(f64::NAN);
        let rat = p.rat.to_f64().unwrap_or(f64::NAN);
        let v = rot / self.slope.to_f64() + rat;
        v - v.floor()
    }
}

impl Default for Circle {
    fn default() -> Self {
        Self::new(IrrationalSlope::golden())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn slopes() -> Vec<IrrationalSlope> {
        vec![IrrationalSlope::golden(), IrrationalSlope::sqrt(2).unwrap(), IrrationalSlope::new(1, 1, 2, 13).unwrap()]
    }

    fn phi() -> Circle {
        Circle::new(IrrationalSlope::golden())
    }

    // Arbitrary point with small rational coordinates.
    fn pt(c: &Circle, rn: i64, rd: i64, tn: i64, td: i64) -> CirclePoint {
        c.point(rat(rn, rd), rat(tn, td))
    }

    #[test]
    fn group_examples() {
        let c = phi();
        assert_eq!(c.mul(&c.h(1), &c.h(-1)), c.one());
        assert_eq!(c.mul(&c.zeta(2), &c.zeta(2)), c.one());
        let p = c.mul(&c.h(1), &c.zeta(3));
        assert_eq!(p.rot(), &int(1));
        assert_eq!(p.rat(), &rat(1, 3));
        assert_eq!(c.zeta(1), c.one());
    }

    #[test]
    fn canonical_arguments() {
        for s in slopes() {
            let c = Circle::new(s);
            for n in -300..300 {
                let x = c.to_f64(&c.h(n));
                assert!((0.0..1.0).contains(&x));
                let exp = n as f64 / c.slope().to_f64();
                assert!((x - (exp - exp.floor())).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn orientation_examples() {
        let c = phi();
        let (one, z3, z32) = (c.one(), c.zeta(3), c.zeta_pow(3, 2));
        assert!(c.orientation(&one, &z3, &z32));
        assert!(!c.orientation(&one, &z32, &z3));
        assert!(!c.orientation(&z3, &z3, &z32));
    }

    #[test]
    fn based_order_examples() {
        let c = phi();
        assert!(c.lt(&c.one(), &c.zeta(2)));
        assert!(!c.lt(&c.zeta(2), &c.one()));
        // {−1/φ} ≈ 0.382 < {1/φ} ≈ 0.618.
        assert!(c.lt(&c.h(-1), &c.h(1)));
        assert!(!c.lt(&c.h(1), &c.h(-1)));
    }

    #[test]
    fn contains_examples() {
        let c = phi();
        let i = OrientedInterval::open(c.one(), c.zeta(2));
        assert!(c.contains(&i, &c.zeta(3)));
        assert!(!c.contains(&i, &c.one()));
        let a = c.h(5);
        assert!(c.contains(&OrientedInterval::closed(a.clone(), a.clone()), &a));
        assert!(!c.contains(&OrientedInterval::open(a.clone(), a.clone()), &a));
    }

    #[test]
    fn intersect_examples() {
        let c = phi();
        let a = OrientedInterval::open(c.one(), c.zeta(2));
        assert_eq!(c.intersect_open(std::slice::from_ref(&a)).unwrap(), Some(a.clone()));
        let b = OrientedInterval::open(c.zeta(2), c.one());
        assert_eq!(c.intersect_open(&[a, b]).unwrap(), None);
        let x = OrientedInterval::open(c.one(), c.zeta_pow(3, 2));
        let y = OrientedInterval::open(c.zeta(3), c.mul(&c.zeta_pow(3, 2), &c.zeta(12)));
        let got = c.intersect_open(&[x, y]).unwrap().unwrap();
        assert_eq!(got, OrientedInterval::open(c.zeta(3), c.zeta_pow(3, 2)));
        let closed = OrientedInterval::closed(c.one(), c.zeta(2));
        assert_eq!(c.intersect_open(&[closed]), Err(CircleError::NotOpen));
    }

    #[test]
    fn intersect_reports_disconnected() {
        let c = phi();
        let a = OrientedInterval::open(c.one(), c.zeta_pow(4, 3));
        let b = OrientedInterval::open(c.zeta(2), c.zeta(4));
        assert_eq!(c.intersect_open(&[a, b]), Err(CircleError::Disconnected));
    }

    #[test]
    fn kth_root_examples() {
        let c = phi();
        assert_eq!(c.kth_root_base(&c.one(), 7), c.one());
        assert_eq!(c.kth_root_base(&c.zeta(2), 2), c.zeta(4));
        let root = c.kth_root_base(&c.h(-1), 3);
        assert_eq!(root.rot(), &rat(-1, 3));
        let expect = (-1.0 / c.slope().to_f64()).rem_euclid(1.0) / 3.0;
        assert!((c.to_f64(&root) - expect).abs() < 1e-12);
        assert_eq!(c.pow(&root, 3), c.h(-1));
    }

    #[test]
    fn root_slice_examples() {
        let c = phi();
        assert_eq!(c.root_slices(&c.one(), &c.zeta(2), 1), vec![OrientedInterval::open(c.one(), c.zeta(2))]);
        let i = OrientedInterval::open(c.one(), c.zeta(2));
        assert!(c.power_in_interval(&c.zeta(8), 2, &i).unwrap());
        let target = OrientedInterval::open(c.h(-1), c.one());
        for n in -500..=500 {
            let direct = c.contains(&target, &c.pow(&c.h(n), 3));
            assert_eq!(c.power_in_interval(&c.h(n), 3, &target).unwrap(), direct, "n={n}");
        }
    }

    #[test]
    fn power_transfer_checks_length() {
        let c = phi();
        let long = OrientedInterval::open(c.h(-1), c.one());
        assert_eq!(c.power_transfer(&c.h(2), 3, &long), Err(CircleError::TooLong(3)));
        let short = OrientedInterval::open(c.zeta(10), c.zeta(5));
        for n in -300..=300 {
            let b = c.h(n);
            let lhs = c.contains(&OrientedInterval::open(c.pow(&short.lo, 3), c.pow(&short.hi, 3)), &c.pow(&b, 3));
            assert_eq!(c.power_transfer(&b, 3, &short).unwrap(), lhs);
        }
    }

    #[test]
    fn arc_and_reverse_partition_circle() {
        let c = phi();
        let (a, b) = (c.h(3), c.h(-7));
        let fwd = OrientedInterval::open(a.clone(), b.clone());
        let back = OrientedInterval::open(b.clone(), a.clone());
        for n in -400..400 {
            let p = c.h(n);
            let in_f = c.contains(&fwd, &p);
            let in_b = c.contains(&back, &p);
            assert!(!(in_f && in_b));
            assert_eq!(in_f || in_b, p != a && p != b);
        }
    }

    fn arb_point() -> impl Strategy<Value = (i64, i64, i64, i64)> {
        (-40i64..40, 1i64..12, -40i64..40, 1i64..12)
    }

    proptest! {
        #[test]
        fn rotation_invariance(a in arb_point(), b in arb_point(), x in arb_point(), d in arb_point(), which in 0usize..3) {
            let c = Circle::new(slopes()[which].clone());
            let (a, b, x, d) = (pt(&c, a.0, a.1, a.2, a.3), pt(&c, b.0, b.1, b.2, b.3), pt(&c, x.0, x.1, x.2, x.3), pt(&c, d.0, d.1, d.2, d.3));
            prop_assert_eq!(
                c.orientation(&a, &b, &x),
                c.orientation(&c.mul(&a, &d), &c.mul(&b, &d), &c.mul(&x, &d))
            );
        }

        #[test]
        fn inversion_reverses(a in arb_point(), b in arb_point(), x in arb_point(), which in 0usize..3) {
            let c = Circle::new(slopes()[which].clone());
            let (a, b, x) = (pt(&c, a.0, a.1, a.2, a.3), pt(&c, b.0, b.1, b.2, b.3), pt(&c, x.0, x.1, x.2, x.3));
            prop_assert_eq!(c.orientation(&a, &b, &x), c.orientation(&c.inv(&x), &c.inv(&b), &c.inv(&a)));
        }

        #[test]
        fn root_then_power_is_identity(a in arb_point(), k in 1u64..=12, which in 0usize..3) {
            let c = Circle::new(slopes()[which].clone());
            let p = pt(&c, a.0, a.1, a.2, a.3);
            prop_assert_eq!(c.pow(&c.kth_root_base(&p, k), k as i64), p);
        }

        #[test]
        fn orientation_matches_float(a in arb_point(), b in arb_point(), x in arb_point()) {
            let c = phi();
            let (pa, pb, px) = (pt(&c, a.0, a.1, a.2, a.3), pt(&c, b.0, b.1, b.2, b.3), pt(&c, x.0, x.1, x.2, x.3));
            let (fa, fb, fx) = (c.to_f64(&pa), c.to_f64(&pb), c.to_f64(&px));
            prop_assume!((fa - fb).abs() > 1e-9 && (fb - fx).abs() > 1e-9 && (fa - fx).abs() > 1e-9);
            let float = (fa < fb && fb < fx) || (fb < fx && fx < fa) || (fx < fa && fa < fb);
            prop_assert_eq!(c.orientation(&pa, &pb, &px), float);
        }
    }
}
