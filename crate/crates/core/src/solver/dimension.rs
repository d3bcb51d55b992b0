//! Dimension enclosures by bisection on `s ↦ r(L_{s,F})`.

use crate::alphabets::Alphabet;
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::interval::Interval;
use crate::solver::config::SolverConfig;
use crate::solver::power::power_iterate_from;
use crate::solver::sandwich::{ratio_bounds, sample_ratios, Goal};
use crate::transfer::TransferOperator;

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionEnclosure {
    pub enclosure: Interval,
    /// Set when the tolerance could not be reached; the enclosure is still sound.
    pub warning: bool,
    /// False for the floating-point fast path.
    pub certified: bool,
    /// Number of alphabet elements evaluated explicitly.
    pub truncation: usize,
    /// Number of sandwich evaluations performed.
    pub evaluations: usize,
}

impl DimensionEnclosure {
    pub fn lo(&self) -> f64 {
        self.enclosure.lo()
    }

    pub fn hi(&self) -> f64 {
        self.enclosure.hi()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    /// `r(s) >= 1`, so `s <= dim`.
    Below,
    /// `r(s) <= 1`, so `s >= dim`.
    Above,
    Unresolved,
}

struct Bisector<'a> {
    base: TransferOperator,
    config: &'a SolverConfig,
    warm: Option<GridFunction>,
    evaluations: usize,
    /// Tail majorant diverges at or below this `s`.
    divergent_below: f64,
}

impl Bisector<'_> {
    fn candidate(&mut self, op: &TransferOperator, iters: usize) -> Result<GridFunction> {
        let r = power_iterate_from(op, self.config.mesh_size, self.warm.as_ref(), iters)?;
        self.warm = Some(r.w.clone());
        Ok(r.w)
    }

    fn try_side(&mut self, s: f64, iters: usize, config: &SolverConfig) -> Result<Side> {
        let op = self.base.at(s)?;
        let w = self.candidate(&op, iters)?;
        let tail_ok = s > self.divergent_below;
        let (pmin, pmax) = sample_ratios(&op, &w, config)?;
        self.evaluations += 1;
        if pmin > 1.0 {
            if ratio_bounds(&op, &w, config, Goal::AtLeast(1.0))?.proven {
                return Ok(Side::Below);
            }
        } else if pmax < 1.0 && tail_ok && ratio_bounds(&op, &w, config, Goal::AtMost(1.0))?.proven {
            return Ok(Side::Above);
        }
        Ok(Side::Unresolved)
    }

    /// Decide on which side of the dimension `s` lies, refreshing the
    /// candidate and deepening the subdivision before giving up.
    fn decide(&mut self, s: f64) -> Result<Side> {
        let cfg = self.config.clone();
        match self.try_side(s, cfg.power_iters, &cfg)? {
            Side::Unresolved => {
                let deeper = SolverConfig { max_subdivision_depth: cfg.max_subdivision_depth + 2, ..cfg.clone() };
                self.try_side(s, cfg.power_iters * 3, &deeper)
            }
            side => Ok(side),
        }
    }

    /// Push `lo` up towards `hi` through points proven below the dimension.
    fn search_lower(&mut self, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
        while hi - lo > tol {
            let m = lo + (hi - lo) / 2.0;
            if self.decide(m)? == Side::Below {
                lo = m;
            } else {
                hi = m;
            }
        }
        Ok(lo)
    }

    /// Push `hi` down towards `lo` through points proven above the dimension.
    fn search_upper(&mut self, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
        while hi - lo > tol {
            let m = lo + (hi - lo) / 2.0;
            if self.decide(m)? == Side::Above {
                hi = m;
            } else {
                lo = m;
            }
        }
        Ok(hi)
    }
}

fn prepare(a: &Alphabet, config: &SolverConfig) -> Result<Alphabet> {
    if a.has_tail() && config.truncation > a.len() {
        a.extend(config.truncation - a.len())
    } else {
        Ok(a.clone())
    }
}

fn divergence_threshold(a: &Alphabet) -> f64 {
    if a.has_tail() {
        a.finiteness().sigma0
    } else {
        0.0
    }
}

/// Enclosure of `dim_H(J_F)`: the unique `s` with `r(L_{s,F}) = 1`.
pub fn dimension(a: &Alphabet, config: &SolverConfig) -> Result<DimensionEnclosure> {
    config.validate()?;
    let a = prepare(a, config)?;
    if a.is_singleton() {
        return Ok(DimensionEnclosure {
            enclosure: Interval::ZERO,
            warning: false,
            certified: true,
            truncation: 1,
            evaluations: 0,
        });
    }
    if !config.certified {
        return fast_dimension(&a, config);
    }
    let base = TransferOperator::new(&a, 1.0)?;
    let sigma0 = divergence_threshold(&a);
    let mut b = Bisector { base, config, warm: None, evaluations: 0, divergent_below: sigma0 };
    let tol = config.bisection_tol;
    let (mut lo, mut hi) = (sigma0, 1.0);
    if b.decide(1.0)? != Side::Above {
        // Only possible for alphabets as large as ℕ.
        lo = b.search_lower(lo, 1.0, tol)?;
        return Ok(finish(&a, config, lo, hi, b.evaluations));
    }
    while hi - lo > tol {
        let m = lo + (hi - lo) / 2.0;
        match b.decide(m)? {
            Side::Below => lo = m,
            Side::Above => hi = m,
            Side::Unresolved => {
                lo = b.search_lower(lo, m, tol / 2.0)?;
                hi = b.search_upper(m, hi, tol / 2.0)?;
                break;
            }
        }
    }
    Ok(finish(&a, config, lo, hi, b.evaluations))
}

fn finish(a: &Alphabet, config: &SolverConfig, lo: f64, hi: f64, evaluations: usize) -> DimensionEnclosure {
    let enclosure = Interval::new(lo, hi);
    DimensionEnclosure {
        enclosure,
        warning: enclosure.width() > config.bisection_tol * (1.0 + 1e-9),
        certified: true,
        truncation: a.len(),
        evaluations,
    }
}

/// Bisection on the collocation eigenvalue estimate; no rigour.
fn fast_dimension(a: &Alphabet, config: &SolverConfig) -> Result<DimensionEnclosure> {
    let base = TransferOperator::new(a, 1.0)?;
    let sigma0 = divergence_threshold(a);
    let (mut lo, mut hi) = (sigma0, 1.0);
    let mut warm: Option<GridFunction> = None;
    let mut evaluations = 0;
    while hi - lo > config.bisection_tol {
        let m = lo + (hi - lo) / 2.0;
        let op = base.at(m)?;
        let r = power_iterate_from(&op, config.mesh_size, warm.as_ref(), config.power_iters)?;
        evaluations += 1;
        if r.eigenvalue >= 1.0 {
            lo = m;
        } else {
            hi = m;
        }
        warm = Some(r.w);
    }
    Ok(DimensionEnclosure {
        enclosure: Interval::new(lo, hi),
        warning: false,
        certified: false,
        truncation: a.len(),
        evaluations,
    })
}

/// Outcome of comparing `dim(J_B) <= dim(J_A)` when `B` dominates `A` elementwise.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityReport {
    pub a: DimensionEnclosure,
    pub b: DimensionEnclosure,
    /// `enclosure(b).lo <= enclosure(a).hi`.
    pub pass: bool,
}

pub fn dimension_monotonicity_check(a: &Alphabet, b: &Alphabet, config: &SolverConfig) -> Result<MonotonicityReport> {
    if a.has_tail() || b.has_tail() || a.len() != b.len() {
        return Err(Error::Parameter("alphabets must be finite and of equal size".into()));
    }
    if a.elements().iter().zip(b.elements()).any(|(x, y)| y < x) {
        return Err(Error::Parameter("b must dominate a elementwise".into()));
    }
    let da = dimension(a, config)?;
    let db = dimension(b, config)?;
    let pass = db.lo() <= da.hi();
    Ok(MonotonicityReport { a: da, b: db, pass })
}

/// Dimension enclosures of the nested truncations of `a` to each size.
pub fn truncation_convergence_scan(
    a: &Alphabet,
    sizes: &[usize],
    config: &SolverConfig,
) -> Result<Vec<DimensionEnclosure>> {
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parameter("sizes must be strictly increasing".into()));
    }
    sizes
        .iter()
        .map(|&n| {
            let t = if a.family().is_explicit() {
                if n > a.len() {
                    return Err(Error::Parameter(format!("alphabet has only {} elements", a.len())));
                }
                Alphabet::explicit(a.elements()[..n].to_vec())?
            } else {
                Alphabet::make_family(a.family(), n)?
            };
            dimension(&t, config)
        })
        .collect()
}
