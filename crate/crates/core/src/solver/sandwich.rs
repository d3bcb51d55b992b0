//! Certified bounds `min Lw/w <= r(L) <= max Lw/w` for a positive candidate `w`.

use std::sync::atomic::{AtomicBool, Ordering};

use crate::error::{Error, Result};
use crate::grid::{GridFunction, PositiveFunction};
use crate::interval::Interval;
use crate::par;
use crate::solver::config::SolverConfig;
use crate::transfer::TransferOperator;

/// What the subdivision has to establish.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Goal {
    /// Both ends as tight as the tolerance allows.
    Full,
    /// Only `min Lw/w >= t`.
    AtLeast(f64),
    /// Only `max Lw/w <= t`.
    AtMost(f64),
}

#[derive(Clone, Copy, Debug)]
struct Targets {
    lo: Option<f64>,
    hi: Option<f64>,
    min_width: Option<f64>,
    max_depth: u32,
    decision: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioBounds {
    /// `[α, β]`; meaningful only when the goal was reached or the goal is `Full`.
    pub enclosure: Interval,
    /// Whether the requested inequality was proven (always true for `Full`).
    pub proven: bool,
    /// Number of leaf cells evaluated.
    pub cells: usize,
}

struct Leaf {
    lo: f64,
    hi: f64,
    cells: usize,
    ok: bool,
}

struct Evaluator<'a, W: PositiveFunction + ?Sized> {
    digits: &'a [Interval],
    exponent: Interval,
    two_s: Interval,
    w: &'a W,
    /// Upper bound for the tail part of `Lw`, uniformly in `x`.
    tail: Option<f64>,
}

impl<W: PositiveFunction + ?Sized> Evaluator<'_, W> {
    fn weight(&self, t: Interval) -> Interval {
        if self.exponent == Interval::ZERO {
            Interval::ONE
        } else {
            (self.exponent * t.ln()).exp()
        }
    }

    /// Numerator `Σ (n+x)^{-2s} w(1/(n+x))` over `x`.
    fn numerator(&self, x: Interval) -> Interval {
        let mut n = Interval::ZERO;
        for &d in self.digits {
            let t = d + x;
            n = n + self.weight(t) * self.w.enclose(t.recip());
        }
        n
    }

    /// Numerator and its derivative `Σ -(n+x)^{-2s} y (2s w(y) + y w'(y))`, `y = 1/(n+x)`.
    fn numerator_with_derivative(&self, x: Interval) -> (Interval, Interval) {
        let mut n = Interval::ZERO;
        let mut nd = Interval::ZERO;
        for &d in self.digits {
            let t = d + x;
            let p = self.weight(t);
            let y = t.recip();
            let wy = self.w.enclose(y);
            let dwy = self.w.enclose_derivative(y);
            n = n + p * wy;
            nd = nd - p * y * (self.two_s * wy + dwy * y);
        }
        (n, nd)
    }

    /// Enclosure of `Lw/w` over the cell `x`: the naive quotient intersected
    /// with the mean-value form around the midpoint.
    fn ratio(&self, x: Interval) -> Interval {
        let d = self.w.enclose(x);
        let (n, nd) = self.numerator_with_derivative(x);
        let naive = n / d;
        let r = if x.is_point() {
            naive
        } else {
            let c = Interval::point(x.mid());
            let rc = self.numerator(c) / self.w.enclose(c);
            let dd = self.w.enclose_derivative(x);
            let slope = (nd * d - n * dd) / d.sqr();
            let centered = rc + slope * (x - c);
            naive.intersect(centered).unwrap_or(naive)
        };
        match self.tail {
            None => r,
            Some(t) => {
                let extra = Interval::point(t) / d;
                Interval::new(r.lo(), (Interval::point(r.hi()) + extra).hi())
            }
        }
    }

    fn refine(&self, cell: Interval, targets: &Targets, abort: &AtomicBool) -> Leaf {
        let mut leaf = Leaf { lo: f64::INFINITY, hi: f64::NEG_INFINITY, cells: 0, ok: true };
        let mut stack = vec![(cell, 0u32)];
        while let Some((x, depth)) = stack.pop() {
            if targets.decision && abort.load(Ordering::Relaxed) {
                leaf.ok = false;
                return leaf;
            }
            let r = self.ratio(x);
            let lo_ok = targets.lo.is_none_or(|t| r.lo() >= t);
            let hi_ok = targets.hi.is_none_or(|t| r.hi() <= t);
            let small = targets.min_width.is_some_and(|m| r.width() < m);
            if (lo_ok && hi_ok) || small || depth >= targets.max_depth || x.is_point() {
                if targets.decision && !(lo_ok && hi_ok) {
                    abort.store(true, Ordering::Relaxed);
                    leaf.ok = false;
                    return leaf;
                }
                leaf.lo = leaf.lo.min(r.lo());
                leaf.hi = leaf.hi.max(r.hi());
                leaf.cells += 1;
            } else {
                let m = x.mid();
                if m <= x.lo() || m >= x.hi() {
                    leaf.lo = leaf.lo.min(r.lo());
                    leaf.hi = leaf.hi.max(r.hi());
                    leaf.cells += 1;
                    continue;
                }
                stack.push((Interval::new(m, x.hi()), depth + 1));
                stack.push((Interval::new(x.lo(), m), depth + 1));
            }
        }
        leaf
    }
}

fn tail_bound<W: PositiveFunction + ?Sized>(op: &TransferOperator, w: &W) -> Result<Option<f64>> {
    match op.tail() {
        None => Ok(None),
        Some(t) => Ok(Some(t.contribution(w, Interval::point(op.s()))?.hi())),
    }
}

/// Floating-point ratios `Lw/w` at cell endpoints and midpoints; the upper
/// value includes the tail bound.
pub fn sample_ratios<W: PositiveFunction + ?Sized>(
    op: &TransferOperator,
    w: &W,
    config: &SolverConfig,
) -> Result<(f64, f64)> {
    let tail = tail_bound(op, w).unwrap_or(Some(f64::INFINITY)).unwrap_or(0.0);
    let cells = w.cells(config.mesh_size);
    let mut points: Vec<f64> = cells.iter().flat_map(|c| [c.lo(), c.mid()]).collect();
    points.push(1.0);
    let ratios = par::map(config.execution, &points, |&x| {
        let wx = w.eval(x);
        let r = op.apply_unchecked(w, x) / wx;
        (r, r + tail / wx)
    });
    let lo = ratios.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

/// Certified ratio bounds for an arbitrary positive candidate.
pub fn ratio_bounds<W: PositiveFunction + ?Sized>(
    op: &TransferOperator,
    w: &W,
    config: &SolverConfig,
    goal: Goal,
) -> Result<RatioBounds> {
    config.validate()?;
    // The tail only ever raises the upper end.
    let tail = match goal {
        Goal::AtLeast(_) => None,
        _ => tail_bound(op, w)?,
    };
    let s = op.s();
    let ev = Evaluator {
        digits: op.digits(),
        exponent: Interval::point(-2.0 * s),
        two_s: Interval::point(2.0 * s),
        w,
        tail,
    };
    let targets = match goal {
        Goal::Full => {
            let (pmin, pmax) = sample_ratios(op, w, config)?;
            let slack = config.bisection_tol / 4.0;
            Targets {
                lo: Some(pmin - slack),
                hi: Some(pmax + slack),
                min_width: Some(slack),
                max_depth: config.max_subdivision_depth,
                decision: false,
            }
        }
        Goal::AtLeast(t) => {
            Targets { lo: Some(t), hi: None, min_width: None, max_depth: config.max_subdivision_depth, decision: true }
        }
        Goal::AtMost(t) => {
            Targets { lo: None, hi: Some(t), min_width: None, max_depth: config.max_subdivision_depth, decision: true }
        }
    };
    let abort = AtomicBool::new(false);
    let cells = w.cells(config.mesh_size);
    let leaves = par::map(config.execution, &cells, |&c| ev.refine(c, &targets, &abort));
    let ok = leaves.iter().all(|l| l.ok);
    let lo = leaves.iter().map(|l| l.lo).fold(f64::INFINITY, f64::min);
    let hi = leaves.iter().map(|l| l.hi).fold(f64::NEG_INFINITY, f64::max);
    let count = leaves.iter().map(|l| l.cells).sum();
    let enclosure =
        if ok && lo <= hi { Interval::new(lo, hi) } else { Interval::new(f64::NEG_INFINITY, f64::INFINITY) };
    Ok(RatioBounds { enclosure, proven: ok, cells: count })
}

/// `[α, β] ∋ r(L_{s,F})` for a finite alphabet.
pub fn radius_enclosure(op: &TransferOperator, w: &GridFunction, config: &SolverConfig) -> Result<Interval> {
    if op.tail().is_some() {
        return Err(Error::Unsupported("use radius_enclosure_with_tail for infinite alphabets".into()));
    }
    Ok(ratio_bounds(op, w, config, Goal::Full)?.enclosure)
}

/// `[α, β] ∋ r(L_{s,F})` where `F` continues with a closed-form tail: the
/// lower end uses the truncation, the upper end adds the tail majorant.
pub fn radius_enclosure_with_tail(op: &TransferOperator, w: &GridFunction, config: &SolverConfig) -> Result<Interval> {
    if op.tail().is_none() {
        return Err(Error::Unsupported("operator has no tail".into()));
    }
    Ok(ratio_bounds(op, w, config, Goal::Full)?.enclosure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabets::Alphabet;
    use crate::solver::power::power_iterate;
    use crate::transfer::closed_form_eigenpair;

    fn op(d: &[u32], s: f64) -> TransferOperator {
        TransferOperator::new(&Alphabet::explicit(d.iter().copied()).unwrap(), s).unwrap()
    }

    #[test]
    fn counting_anchor_is_exact() {
        let one = GridFunction::constant(200, 1.0).unwrap();
        let r = radius_enclosure(&op(&[1, 5, 9], 0.0), &one, &SolverConfig::default()).unwrap();
        assert_eq!(r, Interval::point(3.0));
    }

    #[test]
    fn singleton_closed_form_is_tight() {
        let cfg = SolverConfig { bisection_tol: 1e-9, ..SolverConfig::default() };
        let p = closed_form_eigenpair(3.0, 0.4).unwrap();
        let b = ratio_bounds(&op(&[3], 0.4), &p.eigenfunction, &cfg, Goal::Full).unwrap();
        assert!(b.enclosure.contains_interval(p.eigenvalue) || b.enclosure.overlaps(p.eigenvalue));
        assert!(b.enclosure.lo() <= p.eigenvalue.lo() && b.enclosure.hi() >= p.eigenvalue.hi());
        assert!(b.enclosure.width() < 1e-8, "{}", b.enclosure.width());
    }

    #[test]
    fn straddles_one_near_the_dimension() {
        let cfg = SolverConfig::default();
        let t = op(&[1, 2], 0.5313);
        let w = power_iterate(&t, &cfg).unwrap();
        let r = radius_enclosure(&t, &w, &cfg).unwrap();
        assert!(r.lo() < 1.0 + 1e-4 && r.hi() > 1.0 - 1e-4, "{r}");
        assert!(r.width() < 1e-4);
    }

    #[test]
    fn tail_enclosure_below_one_for_sharp_set() {
        let cfg = SolverConfig::default();
        let a: Alphabet = "explicit:[1,9,27,81,243]+tail:P_q_star(q=3)".parse().unwrap();
        let t = TransferOperator::new(&a, 0.45449).unwrap();
        let w = power_iterate(&t, &cfg).unwrap();
        let r = radius_enclosure_with_tail(&t, &w, &cfg).unwrap();
        assert!(r.hi() < 1.0, "{r}");
        assert!(radius_enclosure(&t, &w, &cfg).is_err());
    }

    #[test]
    fn decision_goals() {
        let cfg = SolverConfig::default();
        let t = op(&[1, 2], 0.5);
        let w = power_iterate(&t, &cfg).unwrap();
        assert!(ratio_bounds(&t, &w, &cfg, Goal::AtLeast(1.0)).unwrap().proven);
        assert!(!ratio_bounds(&t, &w, &cfg, Goal::AtMost(1.0)).unwrap().proven);
    }
}
