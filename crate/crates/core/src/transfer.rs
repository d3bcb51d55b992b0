//! The transfer operator `(L_{s,F} f)(x) = Σ_{n∈F} (n+x)^{-2s} f(1/(n+x))`.

use crate::alphabets::Alphabet;
use crate::error::{Error, Result};
use crate::grid::{ClosedFormEigenfunction, PositiveFunction};
use crate::interval::Interval;
use crate::solver::tail::TailMajorant;

#[derive(Clone, Debug)]
pub struct TransferOperator {
    alphabet: Alphabet,
    digits: Vec<Interval>,
    digits_f64: Vec<f64>,
    s: f64,
    tail: Option<TailMajorant>,
}

fn check_s(s: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Parameter(format!("s = {s} outside [0, 1]")));
    }
    Ok(())
}

fn check_x(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(x));
    }
    Ok(())
}

impl TransferOperator {
    /// Operator for the finite snapshot of `alphabet`, with the family tail
    /// attached as a majorant when the alphabet carries one.
    pub fn new(alphabet: &Alphabet, s: f64) -> Result<Self> {
        check_s(s)?;
        let tail = TailMajorant::for_alphabet(alphabet)?;
        Ok(TransferOperator {
            digits: alphabet.elements().iter().map(Interval::from_biguint).collect(),
            digits_f64: alphabet.to_f64s(),
            alphabet: alphabet.clone(),
            s,
            tail,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn digits(&self) -> &[Interval] {
        &self.digits
    }

    pub fn digits_f64(&self) -> &[f64] {
        &self.digits_f64
    }

    pub fn tail(&self) -> Option<&TailMajorant> {
        self.tail.as_ref()
    }

    pub fn at(&self, s: f64) -> Result<Self> {
        check_s(s)?;
        Ok(TransferOperator { s, ..self.clone() })
    }

    /// Finite part of `(L f)(x)` in floating point.
    pub fn apply<W: PositiveFunction + ?Sized>(&self, f: &W, x: f64) -> Result<f64> {
        check_x(x)?;
        Ok(self.apply_unchecked(f, x))
    }

    pub(crate) fn apply_unchecked<W: PositiveFunction + ?Sized>(&self, f: &W, x: f64) -> f64 {
        let e = -2.0 * self.s;
        self.digits_f64
            .iter()
            .map(|&n| {
                let t = n + x;
                let w = if e == 0.0 { 1.0 } else { t.powf(e) };
                w * f.eval(1.0 / t)
            })
            .sum()
    }

    /// Enclosure of the finite part of `(L f)(x)` over an interval of `x`.
    pub fn apply_interval<W: PositiveFunction + ?Sized>(&self, f: &W, x: Interval) -> Interval {
        let e = Interval::point(-2.0 * self.s);
        self.digits.iter().fold(Interval::ZERO, |acc, &n| {
            let t = n + x;
            acc + t.pow(e) * f.enclose(t.recip())
        })
    }

    /// Enclosure of `(L f)(x)` including the tail: the lower end is the finite
    /// part, the upper end adds the tail majorant.
    pub fn apply_with_tail<W: PositiveFunction + ?Sized>(&self, f: &W, x: Interval) -> Result<Interval> {
        let finite = self.apply_interval(f, x);
        match &self.tail {
            None => Ok(finite),
            Some(t) => {
                let extra = t.contribution(f, Interval::point(self.s))?;
                Ok(Interval::new(finite.lo(), (finite + extra).hi()))
            }
        }
    }

    /// `Σ_{a,b∈F} (a(b+x)+1)^{-2s} f(θ_a(θ_b(x)))`.
    pub fn apply_squared<W: PositiveFunction + ?Sized>(&self, f: &W, x: f64) -> Result<f64> {
        check_x(x)?;
        if self.tail.is_some() {
            return Err(Error::Unsupported("squared operator needs a finite alphabet".into()));
        }
        let e = -2.0 * self.s;
        let mut sum = 0.0;
        for &a in &self.digits_f64 {
            for &b in &self.digits_f64 {
                let d = a * (b + x) + 1.0;
                let y = (b + x) / d;
                let w = if e == 0.0 { 1.0 } else { d.powf(e) };
                sum += w * f.eval(y);
            }
        }
        Ok(sum)
    }

    /// `e^{2s|x-y|/γ}` with `γ` the smallest digit.
    pub fn log_lipschitz_factor(&self, x: f64, y: f64) -> Result<f64> {
        check_x(x)?;
        check_x(y)?;
        let gamma = self.digits_f64[0];
        Ok((2.0 * self.s * (x - y).abs() / gamma).exp())
    }
}

/// Eigen-data for the single digit `μ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedFormEigenpair {
    /// `(μ + √(μ²+4)) / 2`
    pub lambda_root: Interval,
    /// `lambda_root^{-2s}`
    pub eigenvalue: Interval,
    pub eigenfunction: ClosedFormEigenfunction,
}

pub fn closed_form_eigenpair(mu: f64, s: f64) -> Result<ClosedFormEigenpair> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::Parameter(format!("mu must be positive, got {mu}")));
    }
    let m = Interval::point(mu);
    let lambda_root = (m + (m.sqr() + 4.0).sqrt()) / 2.0;
    let eigenvalue = lambda_root.powf(-2.0 * s);
    Ok(ClosedFormEigenpair {
        lambda_root,
        eigenvalue,
        eigenfunction: ClosedFormEigenfunction { lambda: lambda_root, s },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridFunction;
    use proptest::prelude::*;

    fn op(digits: &[u32], s: f64) -> TransferOperator {
        TransferOperator::new(&Alphabet::explicit(digits.iter().copied()).unwrap(), s).unwrap()
    }

    #[test]
    fn counting_at_zero() {
        let one = GridFunction::constant(8, 1.0).unwrap();
        assert_eq!(op(&[7], 0.0).apply(&one, 0.5).unwrap(), 1.0);
        assert_eq!(op(&[1, 2, 3], 0.0).apply(&one, 0.3).unwrap(), 3.0);
        assert_eq!(op(&[1], 0.5).apply(&one, 0.0).unwrap(), 1.0);
        assert_eq!(op(&[1, 2, 3], 0.0).apply_interval(&one, Interval::UNIT), Interval::point(3.0));
        assert!(matches!(op(&[1], 0.5).apply(&one, 1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn squared_counts_pairs() {
        let one = GridFunction::constant(8, 1.0).unwrap();
        assert_eq!(op(&[1], 0.0).apply_squared(&one, 0.0).unwrap(), 1.0);
        assert_eq!(op(&[1, 2], 0.0).apply_squared(&one, 0.0).unwrap(), 4.0);
    }

    #[test]
    fn squared_matches_nested_application() {
        // Independent oracle: the eigenfunction is smooth, so nesting is exact up to rounding.
        let t = op(&[1, 2], 0.531);
        let v = closed_form_eigenpair(3.0, 0.531).unwrap().eigenfunction;
        let inner = |y: f64| t.apply(&v, y).unwrap();
        let nested: f64 = [1.0f64, 2.0].iter().map(|&n| (n + 0.3f64).powf(-1.062) * inner(1.0 / (n + 0.3))).sum();
        assert!((t.apply_squared(&v, 0.3).unwrap() - nested).abs() < 1e-12);
    }

    #[test]
    fn golden_eigenpair() {
        let p = closed_form_eigenpair(1.0, 0.7).unwrap();
        assert!(p.lambda_root.contains(1.618_033_988_749_895));
        assert_eq!(closed_form_eigenpair(1.0, 0.0).unwrap().eigenvalue, Interval::ONE);
        let p = closed_form_eigenpair(2.0, 0.5).unwrap();
        assert!(p.lambda_root.contains(1.0 + 2f64.sqrt()));
        assert!((p.eigenvalue.mid() - 0.414_213_562_373_095).abs() < 1e-12);
        let t = op(&[2], 0.5);
        for i in 0..10 {
            let x = i as f64 / 9.0;
            let lhs = t.apply(&p.eigenfunction, x).unwrap();
            let rhs = p.eigenvalue.mid() * p.eigenfunction.eval(x);
            assert!((lhs - rhs).abs() < 1e-14);
        }
        assert!(closed_form_eigenpair(0.0, 0.5).is_err());
    }

    #[test]
    fn log_lipschitz_examples() {
        assert_eq!(op(&[1], 0.5).log_lipschitz_factor(0.3, 0.3).unwrap(), 1.0);
        let e2 = op(&[1], 1.0).log_lipschitz_factor(0.0, 1.0).unwrap();
        assert!((e2 - 1f64.exp().powi(2)).abs() < 1e-14);
        let q = op(&[4, 9], 0.5).log_lipschitz_factor(0.0, 1.0).unwrap();
        assert!((q - 0.25f64.exp()).abs() < 1e-15);
    }

    fn small_alphabet() -> impl Strategy<Value = Vec<u32>> {
        proptest::collection::vec(1u32..40, 1..=5)
    }

    proptest! {
        #[test]
        fn positive_and_monotone(f in small_alphabet(), extra in 1u32..60, s in 0.05f64..1.0, x in 0.0f64..1.0) {
            let v = closed_form_eigenpair(1.0, 0.4).unwrap().eigenfunction;
            let small = op(&f, s);
            let mut g = f.clone();
            g.push(extra);
            let big = op(&g, s);
            let a = small.apply(&v, x).unwrap();
            prop_assert!(a > 0.0);
            prop_assert!(a <= big.apply(&v, x).unwrap() + 1e-15);
            let twice = GridFunction::from_fn(16, |t| 2.0 * v.eval(t)).unwrap();
            prop_assert!(a <= small.apply(&twice, x).unwrap());
            prop_assert!(small.apply_interval(&v, Interval::point(x)).contains(a));
        }

        #[test]
        fn decreasing_in_s(f in small_alphabet(), s in 0.05f64..0.9, x in 0.0f64..1.0) {
            let v = closed_form_eigenpair(2.0, 0.3).unwrap().eigenfunction;
            let a = op(&f, s).apply(&v, x).unwrap();
            let b = op(&f, s + 0.05).apply(&v, x).unwrap();
            if x > 0.0 || f.iter().any(|&n| n > 1) {
                prop_assert!(b < a);
            } else {
                prop_assert!(b <= a);
            }
        }

        #[test]
        fn squared_agrees_on_grid(f in small_alphabet(), si in 0usize..3) {
            let s = [0.2, 0.5, 0.9][si];
            let t = op(&f, s);
            let v = closed_form_eigenpair(1.5, 0.6).unwrap().eigenfunction;
            for i in 0..32 {
                let x = i as f64 / 31.0;
                let nested: f64 = t.digits_f64().iter().map(|&n| {
                    (n + x).powf(-2.0 * s) * t.apply(&v, 1.0 / (n + x)).unwrap()
                }).sum();
                prop_assert!((t.apply_squared(&v, x).unwrap() - nested).abs() < 1e-10);
            }
        }

        #[test]
        fn eigenpair_residual(mu in 1u32..100, s in 0.0f64..1.0) {
            let p = closed_form_eigenpair(mu as f64, s).unwrap();
            let t = op(&[mu], s);
            for i in 0..64 {
                let x = i as f64 / 63.0;
                let v = p.eigenfunction.eval(x);
                let r = (t.apply(&p.eigenfunction, x).unwrap() - p.eigenvalue.mid() * v).abs() / v;
                prop_assert!(r < 1e-12);
            }
        }
    }
}
