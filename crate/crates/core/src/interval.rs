//! Outward-rounded interval arithmetic.
//!
//! The four field operations and `sqrt` are rounded exactly in the outward
//! direction: the round-to-nearest result is corrected with the sign of its
//! error term (two-sum for addition, a fused multiply-add residual for
//! products, quotients and square roots). `exp` and `ln` come from the platform
//! math library, which is accurate to within one ulp, and are widened by two
//! ulps on each side.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_traits::{FromPrimitive, ToPrimitive};

use crate::decimal;

/// Closed interval `[lo, hi]` of reals with `lo <= hi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

/// Products with a magnitude below this may have an inexact FMA residual.
const TINY: f64 = 1e-290;

#[inline]
fn down(x: f64) -> f64 {
    if x == f64::NEG_INFINITY || x.is_nan() {
        x
    } else {
        x.next_down()
    }
}

#[inline]
fn up(x: f64) -> f64 {
    if x == f64::INFINITY || x.is_nan() {
        x
    } else {
        x.next_up()
    }
}

/// Error of `a + b` relative to its rounded sum `s`: `a + b = s + err` exactly.
#[inline]
fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

#[inline]
fn add_rd(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return s;
    }
    if two_sum_err(a, b, s) < 0.0 {
        down(s)
    } else {
        s
    }
}

#[inline]
fn add_ru(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return s;
    }
    if two_sum_err(a, b, s) > 0.0 {
        up(s)
    } else {
        s
    }
}

#[inline]
fn mul_rd(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        return p;
    }
    if p.abs() < TINY {
        return if p == 0.0 && (a == 0.0 || b == 0.0) { 0.0 } else { down(p) };
    }
    if a.mul_add(b, -p) < 0.0 {
        down(p)
    } else {
        p
    }
}

#[inline]
fn mul_ru(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        return p;
    }
    if p.abs() < TINY {
        return if p == 0.0 && (a == 0.0 || b == 0.0) { 0.0 } else { up(p) };
    }
    if a.mul_add(b, -p) > 0.0 {
        up(p)
    } else {
        p
    }
}

/// Sign of `a / b - fl(a / b)`.
#[inline]
fn div_err_sign(a: f64, b: f64, q: f64) -> f64 {
    let r = (-q).mul_add(b, a);
    if r == 0.0 {
        0.0
    } else if (r > 0.0) == (b > 0.0) {
        1.0
    } else {
        -1.0
    }
}

#[inline]
fn div_rd(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() {
        return q;
    }
    if q.abs() < TINY {
        return if a == 0.0 { 0.0 } else { down(q) };
    }
    if div_err_sign(a, b, q) < 0.0 {
        down(q)
    } else {
        q
    }
}

#[inline]
fn div_ru(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() {
        return q;
    }
    if q.abs() < TINY {
        return if a == 0.0 { 0.0 } else { up(q) };
    }
    if div_err_sign(a, b, q) > 0.0 {
        up(q)
    } else {
        q
    }
}

#[inline]
fn sqrt_rd(x: f64) -> f64 {
    let s = x.sqrt();
    if s == 0.0 || !s.is_finite() {
        return s;
    }
    if (-s).mul_add(s, x) < 0.0 {
        down(s)
    } else {
        s
    }
}

#[inline]
fn sqrt_ru(x: f64) -> f64 {
    let s = x.sqrt();
    if s == 0.0 || !s.is_finite() {
        return s;
    }
    if (-s).mul_add(s, x) > 0.0 {
        up(s)
    } else {
        s
    }
}

#[inline]
fn widen_down(x: f64) -> f64 {
    down(down(x))
}

#[inline]
fn widen_up(x: f64) -> f64 {
    up(up(x))
}

#[inline]
fn exp_rd(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        widen_down(x.exp()).max(0.0)
    }
}

#[inline]
fn exp_ru(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        widen_up(x.exp())
    }
}

#[inline]
fn ln_rd(x: f64) -> f64 {
    if x == 1.0 {
        0.0
    } else {
        widen_down(x.ln())
    }
}

#[inline]
fn ln_ru(x: f64) -> f64 {
    if x == 1.0 {
        0.0
    } else {
        widen_up(x.ln())
    }
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

    /// Panics if `lo > hi` or either bound is NaN.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        assert!(!x.is_nan(), "NaN interval endpoint");
        Interval { lo: x, hi: x }
    }

    /// Smallest representable interval containing the integer `n`.
    pub fn from_biguint(n: &BigUint) -> Self {
        let f = n.to_f64().unwrap_or(f64::INFINITY);
        if f.is_finite() && BigUint::from_f64(f).as_ref() == Some(n) {
            Interval::point(f)
        } else {
            Interval { lo: down(f), hi: up(f) }
        }
    }

    pub fn from_u64(n: u64) -> Self {
        Interval::from_biguint(&BigUint::from(n))
    }

    /// Enclosure of the rational `num / den`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Interval::point(num as f64) / Interval::point(den as f64)
    }

    /// Enclosure of the decimal literal `s` (e.g. `"0.531277"`).
    pub fn from_decimal(s: &str) -> Option<Self> {
        let lo = decimal::parse_lower(s)?;
        let hi = decimal::parse_upper(s)?;
        Some(Interval { lo, hi })
    }

    /// Enclosure of the decimal band `[lo, hi]`.
    pub fn from_decimal_bounds(lo: &str, hi: &str) -> Option<Self> {
        let l = decimal::parse_lower(lo)?;
        let h = decimal::parse_upper(hi)?;
        (l <= h).then_some(Interval { lo: l, hi: h })
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn mid(self) -> f64 {
        if self.lo == self.hi {
            self.lo
        } else {
            0.5 * self.lo + 0.5 * self.hi
        }
    }

    pub fn width(self) -> f64 {
        add_ru(self.hi, -self.lo)
    }

    pub fn is_point(self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(self, other: Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Containment up to an absolute slack on both ends.
    pub fn contains_with_slack(self, other: Interval, slack: f64) -> bool {
        self.lo - slack <= other.lo && other.hi <= self.hi + slack
    }

    pub fn overlaps(self, other: Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(self, other: Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(self, other: Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    /// `hi < t`: every member is strictly below `t`.
    pub fn certainly_below(self, t: f64) -> bool {
        self.hi < t
    }

    /// `lo > t`: every member is strictly above `t`.
    pub fn certainly_above(self, t: f64) -> bool {
        self.lo > t
    }

    pub fn is_positive(self) -> bool {
        self.lo > 0.0
    }

    pub fn sqr(self) -> Interval {
        if self.lo >= 0.0 {
            Interval { lo: mul_rd(self.lo, self.lo), hi: mul_ru(self.hi, self.hi) }
        } else if self.hi <= 0.0 {
            Interval { lo: mul_rd(self.hi, self.hi), hi: mul_ru(self.lo, self.lo) }
        } else {
            let m = self.lo.abs().max(self.hi);
            Interval { lo: 0.0, hi: mul_ru(m, m) }
        }
    }

    pub fn recip(self) -> Interval {
        Interval::ONE / self
    }

    /// Square root; negative parts of the argument are clipped.
    pub fn sqrt(self) -> Interval {
        Interval { lo: sqrt_rd(self.lo.max(0.0)), hi: sqrt_ru(self.hi.max(0.0)) }
    }

    pub fn exp(self) -> Interval {
        Interval { lo: exp_rd(self.lo), hi: exp_ru(self.hi) }
    }

    /// Natural logarithm. Panics unless the argument is strictly positive.
    pub fn ln(self) -> Interval {
        assert!(self.lo > 0.0, "ln of non-positive interval {self:?}");
        Interval { lo: ln_rd(self.lo), hi: ln_ru(self.hi) }
    }

    /// `self^exponent` for a strictly positive base, as `exp(exponent * ln(self))`.
    /// A zero exponent yields exactly one.
    pub fn pow(self, exponent: Interval) -> Interval {
        if exponent == Interval::ZERO {
            return Interval::ONE;
        }
        (exponent * self.ln()).exp()
    }

    pub fn powf(self, exponent: f64) -> Interval {
        self.pow(Interval::point(exponent))
    }

    /// Integer power by repeated squaring.
    pub fn powi(self, n: u32) -> Interval {
        let mut result = Interval::ONE;
        let mut base = self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result * base;
            }
            base = base.sqr();
            k >>= 1;
        }
        result
    }

    pub fn max(self, other: Interval) -> Interval {
        Interval { lo: self.lo.max(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn min(self, other: Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.min(other.hi) }
    }

    /// Clamp into `[lo, hi]`; used where the true value is known to lie there.
    pub fn clamp_to(self, lo: f64, hi: f64) -> Interval {
        let l = self.lo.max(lo);
        let h = self.hi.min(hi);
        if l <= h {
            Interval { lo: l, hi: h }
        } else if self.hi < lo {
            Interval::point(lo)
        } else {
            Interval::point(hi)
        }
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        Interval { lo: add_rd(self.lo, rhs.lo), hi: add_ru(self.hi, rhs.hi) }
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        Interval { lo: add_rd(self.lo, -rhs.hi), hi: add_ru(self.hi, -rhs.lo) }
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Mul for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        if a >= 0.0 && c >= 0.0 {
            return Interval { lo: mul_rd(a, c), hi: mul_ru(b, d) };
        }
        let lo = mul_rd(a, c).min(mul_rd(a, d)).min(mul_rd(b, c)).min(mul_rd(b, d));
        let hi = mul_ru(a, c).max(mul_ru(a, d)).max(mul_ru(b, c)).max(mul_ru(b, d));
        Interval { lo, hi }
    }
}

impl Div for Interval {
    type Output = Interval;
    #[inline]
    fn div(self, rhs: Interval) -> Interval {
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        if c <= 0.0 && d >= 0.0 {
            return Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };
        }
        if a >= 0.0 && c > 0.0 {
            return Interval { lo: div_rd(a, d), hi: div_ru(b, c) };
        }
        let lo = div_rd(a, c).min(div_rd(a, d)).min(div_rd(b, c)).min(div_rd(b, d));
        let hi = div_ru(a, c).max(div_ru(a, d)).max(div_ru(b, c)).max(div_ru(b, d));
        Interval { lo, hi }
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl Sub<f64> for Interval {
    type Output = Interval;
    fn sub(self, rhs: f64) -> Interval {
        self - Interval::point(rhs)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        self * Interval::point(rhs)
    }
}

impl Div<f64> for Interval {
    type Output = Interval;
    fn div(self, rhs: f64) -> Interval {
        self / Interval::point(rhs)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl fmt::Display for Interval {
    /// Outward-rounded decimal form; the precision defaults to 9 digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(9);
        write!(f, "[{}, {}]", decimal::floor_str(self.lo, digits), decimal::ceil_str(self.hi, digits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_integer_sums_stay_points() {
        let s = Interval::ONE + Interval::ONE + Interval::ONE;
        assert_eq!(s, Interval::point(3.0));
        assert_eq!(Interval::point(6.0) / Interval::point(2.0), Interval::point(3.0));
    }

    #[test]
    fn inexact_ops_straddle_true_value() {
        let third = Interval::ONE / Interval::point(3.0);
        assert!(third.lo() < third.hi());
        assert!(third.lo() * 3.0 <= 1.0 && third.hi() * 3.0 >= 1.0);
        let tenth = Interval::from_decimal("0.1").unwrap();
        assert!(tenth.lo() < 0.1 || tenth.hi() > 0.1);
        let sum = tenth + tenth + tenth;
        assert!(sum.contains(0.30000000000000004) || sum.contains(0.3));
    }

    #[test]
    fn sqrt_five_encloses_golden_ratio() {
        let phi = (Interval::ONE + Interval::point(5.0).sqrt()) / 2.0;
        let golden = 1.618_033_988_749_895_f64;
        assert!(phi.contains(golden));
        assert!(phi.width() < 1e-15);
        // phi^2 - phi - 1 = 0
        let residual = phi.sqr() - phi - Interval::ONE;
        assert!(residual.contains(0.0));
    }

    #[test]
    fn exp_ln_special_values_are_exact() {
        assert_eq!(Interval::ZERO.exp(), Interval::ONE);
        assert_eq!(Interval::ONE.ln(), Interval::ZERO);
        assert_eq!(Interval::point(7.0).pow(Interval::ZERO), Interval::ONE);
    }

    #[test]
    fn big_integers_are_enclosed() {
        let n = BigUint::from(3u32).pow(40);
        let iv = Interval::from_biguint(&n);
        assert!(!iv.is_point());
        let exact = BigUint::from(1u64 << 60);
        assert!(Interval::from_biguint(&exact).is_point());
    }

    #[test]
    fn display_rounds_outward() {
        let iv = Interval::new(0.531_277_4, 0.531_280_2);
        assert_eq!(format!("{iv:.6}"), "[0.531277, 0.531281]");
    }

    #[test]
    fn division_by_zero_straddle_is_entire() {
        let q = Interval::ONE / Interval::new(-1.0, 1.0);
        assert_eq!(q.lo(), f64::NEG_INFINITY);
        assert_eq!(q.hi(), f64::INFINITY);
    }

    proptest! {
        #[test]
        fn products_and_quotients_contain_float_results(a in 0.001f64..1e6, b in 0.001f64..1e6) {
            let x = Interval::point(a);
            let y = Interval::point(b);
            prop_assert!((x * y).contains(a * b));
            prop_assert!((x / y).contains(a / b));
            prop_assert!((x + y).contains(a + b));
            prop_assert!((x - y).contains(a - b));
            prop_assert!((x * y).width() <= (a * b) * 2.3e-16);
        }

        #[test]
        fn transcendental_enclosures_contain_libm(a in 1e-6f64..50.0) {
            let x = Interval::point(a);
            prop_assert!(x.ln().contains(a.ln()));
            prop_assert!(x.exp().contains(a.exp()));
            prop_assert!(x.sqrt().contains(a.sqrt()));
            let back = x.ln().exp();
            prop_assert!(back.contains(a));
        }

        #[test]
        fn interval_ops_are_inclusion_monotone(lo in 0.5f64..2.0, w in 0.0f64..1.0, t in 0.0f64..1.0) {
            let x = Interval::new(lo, lo + w);
            let p = lo + t * w;
            prop_assert!(x.ln().contains(p.ln()));
            prop_assert!((x * x).contains(p * p));
            prop_assert!(x.recip().contains(1.0 / p));
            prop_assert!(x.powf(-0.7).contains(p.powf(-0.7)));
        }
    }
}
