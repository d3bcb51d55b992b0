//! Closed-form majorants for the infinite tail of an alphabet.

use num_bigint::BigUint;
use num_traits::One;

use crate::alphabets::{Alphabet, Family};
use crate::error::{Error, Result};
use crate::grid::PositiveFunction;
use crate::interval::Interval;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailKind {
    /// Tail `{q^{k+1}, q^{k+2}, ...}` after the anchor `q^k`.
    Geometric { q: u32, k: u32 },
    /// Tail `{(m+1)^q, (m+2)^q, ...}` after the anchor `m^q`.
    Monomial { q: u32, m: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TailMajorant {
    kind: TailKind,
}

impl TailMajorant {
    pub fn geometric(q: u32, k: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::Parameter(format!("geometric tail needs q >= 2, got {q}")));
        }
        Ok(TailMajorant { kind: TailKind::Geometric { q, k } })
    }

    pub fn monomial(q: u32, m: u64) -> Result<Self> {
        if q < 1 || m < 1 {
            return Err(Error::Parameter(format!("monomial tail needs q, m >= 1, got q={q}, m={m}")));
        }
        Ok(TailMajorant { kind: TailKind::Monomial { q, m } })
    }

    /// Majorant for the members of the alphabet's family above its snapshot.
    pub fn for_alphabet(a: &Alphabet) -> Result<Option<Self>> {
        if !a.has_tail() {
            return Ok(None);
        }
        let top = a.max();
        let t = match a.family() {
            Family::Powers { q } | Family::PowersStar { q } => {
                let mut k = 0u32;
                let mut p = BigUint::one();
                while &p < top {
                    p *= q;
                    k += 1;
                }
                TailMajorant::geometric(q, k)?
            }
            Family::Monomials { q } => {
                let m = top.nth_root(q);
                TailMajorant::monomial(q, m.try_into().map_err(|_| Error::Range("monomial anchor".into()))?)?
            }
            other => return Err(Error::Unsupported(format!("no closed-form tail majorant for {other}"))),
        };
        Ok(Some(t))
    }

    pub fn kind(&self) -> TailKind {
        self.kind
    }

    /// Last retained element: `q^k` or `m^q`.
    pub fn anchor(&self) -> BigUint {
        match self.kind {
            TailKind::Geometric { q, k } => BigUint::from(q).pow(k),
            TailKind::Monomial { q, m } => BigUint::from(m).pow(q),
        }
    }

    /// Smallest tail element.
    pub fn first_element(&self) -> BigUint {
        match self.kind {
            TailKind::Geometric { q, k } => BigUint::from(q).pow(k + 1),
            TailKind::Monomial { q, m } => BigUint::from(m + 1).pow(q),
        }
    }

    /// Upper bound for `Σ_{n in tail} n^{-2s}`.
    pub fn sum_bound(&self, s: Interval) -> Result<Interval> {
        match self.kind {
            TailKind::Geometric { q, k } => {
                if !(s.lo() > 0.0) {
                    return Err(Error::DivergentTail(format!("geometric tail needs s > 0, got {}", s.lo())));
                }
                let qi = Interval::point(q as f64);
                let ratio = qi.pow(-(s * 2.0));
                Ok(qi.pow(-(s * 2.0) * (k as f64 + 1.0)) / (Interval::ONE - ratio))
            }
            TailKind::Monomial { q, m } => {
                let p = s * (2.0 * q as f64);
                if !(p.lo() > 1.0) {
                    return Err(Error::DivergentTail(format!("monomial tail needs 2qs > 1, got {}", p.lo())));
                }
                // Σ_{n>m} n^{-p} <= ∫_m^∞ x^{-p} dx
                let mi = Interval::point(m as f64);
                Ok(mi.pow(Interval::ONE - p) / (p - 1.0))
            }
        }
    }

    /// Upper bound for the tail part of `(L f)(x)` at every `x`:
    /// `max f on [0, 1/first] · Σ n^{-2s}`.
    pub fn contribution<W: PositiveFunction + ?Sized>(&self, f: &W, s: Interval) -> Result<Interval> {
        let first = Interval::from_biguint(&self.first_element());
        let reach = Interval::new(0.0, first.recip().hi().min(1.0));
        let wmax = f.enclose(reach).hi();
        let total = Interval::point(wmax) * self.sum_bound(s)?;
        Ok(Interval::new(0.0, total.hi()))
    }

    /// Tail relative to the anchor term, using the log-Lipschitz bound on the
    /// true eigenfunction.
    ///
    /// Geometric: `(e^{1/q^k}(1 + 1/q^k))^{2s} / (q^{2s} - 1)`.
    /// Monomial: `e^{2s/m^q} (m^q + 1)^{2s} m^{1-2qs} / (2qs - 1)`.
    pub fn relative_bound(&self, s: Interval) -> Result<Interval> {
        let two_s = s * 2.0;
        match self.kind {
            TailKind::Geometric { q, k } => {
                if !(s.lo() > 0.0) {
                    return Err(Error::DivergentTail("geometric tail needs s > 0".into()));
                }
                let inv = Interval::from_biguint(&BigUint::from(q).pow(k)).recip();
                let base = inv.exp() * (Interval::ONE + inv);
                Ok(base.pow(two_s) / (Interval::point(q as f64).pow(two_s) - 1.0))
            }
            TailKind::Monomial { q, m } => {
                let p = two_s * q as f64;
                if !(p.lo() > 1.0) {
                    return Err(Error::DivergentTail("monomial tail needs 2qs > 1".into()));
                }
                let anchor = Interval::from_biguint(&self.anchor());
                let mi = Interval::point(m as f64);
                Ok((two_s / anchor).exp() * (anchor + 1.0).pow(two_s) * mi.pow(Interval::ONE - p) / (p - 1.0))
            }
        }
    }

    /// Geometric only: the simplified `e^{4s/q^k} / (q^{2s} - 1)`.
    pub fn relative_bound_simplified(&self, s: Interval) -> Result<Interval> {
        match self.kind {
            TailKind::Geometric { q, k } => {
                let inv = Interval::from_biguint(&BigUint::from(q).pow(k)).recip();
                Ok((s * 4.0 * inv).exp() / (Interval::point(q as f64).pow(s * 2.0) - 1.0))
            }
            TailKind::Monomial { .. } => Err(Error::Unsupported("simplified form is geometric only".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_tail_from_alphabet() {
        let a: Alphabet = "explicit:[1,9,27,81]+tail:P_q_star(q=3)".parse().unwrap();
        let t = TailMajorant::for_alphabet(&a).unwrap().unwrap();
        assert_eq!(t.kind(), TailKind::Geometric { q: 3, k: 4 });
        assert_eq!(t.first_element(), BigUint::from(243u32));
        let m: Alphabet = "family:M_q(q=5,count=40)+tail".parse().unwrap();
        let t = TailMajorant::for_alphabet(&m).unwrap().unwrap();
        assert_eq!(t.kind(), TailKind::Monomial { q: 5, m: 40 });
        let p: Alphabet = "family:primes(count=5)+tail".parse().unwrap();
        assert!(matches!(TailMajorant::for_alphabet(&p), Err(Error::Unsupported(_))));
        let f: Alphabet = "explicit:[1,2]".parse().unwrap();
        assert_eq!(TailMajorant::for_alphabet(&f).unwrap(), None);
    }

    #[test]
    fn geometric_sum_matches_series() {
        let t = TailMajorant::geometric(2, 3).unwrap();
        let s = 0.4;
        let series: f64 = (4..200).map(|j| 2f64.powf(-2.0 * s * j as f64)).sum();
        let b = t.sum_bound(Interval::point(s)).unwrap();
        assert!(b.contains(series) || (b.hi() >= series && b.hi() - series < 1e-12));
    }

    #[test]
    fn geometric_relative_example() {
        let t = TailMajorant::geometric(2, 3).unwrap();
        let s = Interval::point(0.67);
        assert!(t.relative_bound(s).unwrap().hi() < 0.915);
        let simple = t.relative_bound_simplified(s).unwrap();
        assert!(simple.hi() < 0.915);
        // e^{s/2} / (2^{2s} - 1) at s = 0.67
        let direct = (0.335f64).exp() / (2f64.powf(1.34) - 1.0);
        assert!((simple.mid() - direct).abs() < 1e-12);
    }

    #[test]
    fn monomial_majorant_dominates_partial_sums() {
        let t = TailMajorant::monomial(6, 1).unwrap();
        let s = 0.265;
        let rel = t.relative_bound(Interval::point(s)).unwrap();
        assert!(rel.lo() > 0.0 && rel.hi().is_finite());
        for x in [0.0, 0.5, 1.0] {
            let partial: f64 = (2..=10_001u64)
                .map(|n| {
                    let nq = (n as f64).powi(6);
                    ((1.0 + x) / (nq + x)).powf(2.0 * s) * (2.0 * s * (1.0 / (1.0 + x) - 1.0 / (nq + x))).exp()
                })
                .sum();
            assert!(partial <= rel.hi());
        }
        let sum = t.sum_bound(Interval::point(s)).unwrap();
        let partial: f64 = (2..=10_001u64).map(|n| (n as f64).powf(-12.0 * s)).sum();
        assert!(partial <= sum.hi());
    }

    #[test]
    fn divergence_is_reported() {
        let t = TailMajorant::monomial(2, 4).unwrap();
        assert!(matches!(t.sum_bound(Interval::point(0.25)), Err(Error::DivergentTail(_))));
        let g = TailMajorant::geometric(3, 1).unwrap();
        assert!(matches!(g.sum_bound(Interval::ZERO), Err(Error::DivergentTail(_))));
    }
}
