//! Dimension-spectrum structure: break points, the greedy construction and
//! certificates for spectrum gaps.

use num_bigint::BigUint;
use num_traits::One;

use crate::alphabets::{Alphabet, Family};
use crate::bounds::{self, constants, BoundReport, GapKind, Verdict};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::par;
use crate::solver::{dimension, DimensionEnclosure, SolverConfig};

/// Family members appended to a snapshot before the tail majorant takes over.
pub const TAIL_SNAPSHOT: usize = 40;
/// Snapshot lengths tried, in order, when a gap is not yet separated.
pub const TAIL_SCHEDULE: [usize; 4] = [8, 16, 32, 60];
/// Truncation lengths of `T` used when checking `dim(F ∪ T) >= s`.
pub const HYPOTHESIS_SCHEDULE: [usize; 4] = [40, 160, 640, 2560];
const MAX_PROBE: usize = 4096;
const MAX_GROWTH: usize = 2000;

/// Position of a dimension enclosure relative to a target `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `lo >= s`
    AtLeast,
    /// `hi < s`
    Below,
    Unresolved,
}

impl Side {
    pub fn of(d: &DimensionEnclosure, s: f64) -> Self {
        if d.lo() >= s {
            Side::AtLeast
        } else if d.hi() < s {
            Side::Below
        } else {
            Side::Unresolved
        }
    }
}

fn refine(config: &SolverConfig) -> SolverConfig {
    SolverConfig { bisection_tol: config.bisection_tol / 16.0, ..config.refined() }
}

/// Dimension of `a` compared with `s`, refining the solver once on a straddle.
pub fn compare(a: &Alphabet, s: f64, config: &SolverConfig) -> Result<(DimensionEnclosure, Side)> {
    let d = dimension(a, config)?;
    match Side::of(&d, s) {
        Side::Unresolved => {
            let d = dimension(a, &refine(config))?;
            let side = Side::of(&d, s);
            Ok((d, side))
        }
        side => Ok((d, side)),
    }
}

fn union(f: &Alphabet, extra: &[BigUint]) -> Result<Alphabet> {
    Alphabet::explicit(f.elements().iter().chain(extra).cloned())
}

#[derive(Clone, Debug, PartialEq)]
pub struct BreakPointRecord {
    pub f: Alphabet,
    pub s: f64,
    pub break_element: BigUint,
    /// 1-based position of the break element among the members above `max f`.
    pub index: usize,
    /// Proven strict; `false` means the solver could not separate a candidate from `s`.
    pub strict: bool,
    pub dim_f: DimensionEnclosure,
    /// `dim(F ∪ {break_element})`
    pub dim_f_plus: DimensionEnclosure,
    /// `dim(F ∪ {next member})`
    pub dim_next: DimensionEnclosure,
}

impl BreakPointRecord {
    /// `dim_f.hi < s <= dim_f_plus.lo`, and `dim_next.hi < s` when strict.
    pub fn is_consistent(&self) -> bool {
        let base = self.dim_f.hi() < self.s && self.dim_f_plus.lo() >= self.s;
        base && (!self.strict || self.dim_next.hi() < self.s)
    }
}

/// The member `a_{k0} > max f` of `parent` with `dim(F ∪ {a_{k0}}) >= s > dim(F ∪ {a_{k0+1}})`.
pub fn find_strict_break_point(
    parent: Family,
    f: &Alphabet,
    s: f64,
    config: &SolverConfig,
) -> Result<BreakPointRecord> {
    if f.has_tail() {
        return Err(Error::Parameter("break points need a finite alphabet".into()));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Range(format!("s must lie in (0, 1), got {s}")));
    }
    let (dim_f, side) = compare(f, s, config)?;
    if side != Side::Below {
        return Err(Error::Range(format!("dim of {f} is not certified below {s}")));
    }
    let mut members = Members { parent, above: f.max().clone(), cache: Vec::new() };
    let probe = |members: &mut Members, i: usize| -> Result<(DimensionEnclosure, Side)> {
        compare(&union(f, &[members.get(i)?])?, s, config)
    };

    let first = probe(&mut members, 0)?;
    match first.1 {
        Side::Below => {
            return Err(Error::NoBreakPoint(format!(
                "adding any member of {parent} above {} keeps dim below {s}",
                f.max()
            )))
        }
        Side::Unresolved => {
            let next = probe(&mut members, 1)?.0;
            return Ok(BreakPointRecord {
                f: f.clone(),
                s,
                break_element: members.get(0)?,
                index: 1,
                strict: false,
                dim_f,
                dim_f_plus: first.0,
                dim_next: next,
            });
        }
        Side::AtLeast => {}
    }
    // Gallop to a member below s, then bisect; dim(F ∪ {a}) decreases in a.
    let (mut lo, mut lo_d) = (0usize, first.0);
    let mut step = 1;
    let (mut hi, mut hi_d) = loop {
        let i = lo + step;
        if i >= MAX_PROBE {
            return Err(Error::NoBreakPoint(format!("no member below {s} among the first {MAX_PROBE}")));
        }
        let (d, side) = probe(&mut members, i)?;
        match side {
            Side::Below => break (i, d),
            Side::AtLeast => {
                lo = i;
                lo_d = d;
                step *= 2;
            }
            Side::Unresolved => return unresolved(f, s, dim_f, members.get(i)?, i, d, probe(&mut members, i + 1)?.0),
        }
    };
    while hi - lo > 1 {
        let m = lo + (hi - lo) / 2;
        let (d, side) = probe(&mut members, m)?;
        match side {
            Side::Below => {
                hi = m;
                hi_d = d;
            }
            Side::AtLeast => {
                lo = m;
                lo_d = d;
            }
            Side::Unresolved => return unresolved(f, s, dim_f, members.get(m)?, m, d, probe(&mut members, m + 1)?.0),
        }
    }
    Ok(BreakPointRecord {
        f: f.clone(),
        s,
        break_element: members.get(lo)?,
        index: lo + 1,
        strict: true,
        dim_f,
        dim_f_plus: lo_d,
        dim_next: hi_d,
    })
}

/// Members of a family above a bound, enumerated on demand.
struct Members {
    parent: Family,
    above: BigUint,
    cache: Vec<BigUint>,
}

impl Members {
    fn get(&mut self, i: usize) -> Result<BigUint> {
        if self.cache.len() <= i {
            self.cache = self.parent.members_above(&self.above, (i + 1).max(2 * self.cache.len()))?;
        }
        Ok(self.cache[i].clone())
    }
}

fn unresolved(
    f: &Alphabet,
    s: f64,
    dim_f: DimensionEnclosure,
    element: BigUint,
    i: usize,
    d: DimensionEnclosure,
    next: DimensionEnclosure,
) -> Result<BreakPointRecord> {
    Ok(BreakPointRecord {
        f: f.clone(),
        s,
        break_element: element,
        index: i + 1,
        strict: false,
        dim_f,
        dim_f_plus: d,
        dim_next: next,
    })
}

/// Outcome of checking `dim(F ∪ T) >= s` with `T` the members after the break point.
#[derive(Clone, Debug, PartialEq)]
pub enum Hypothesis {
    Holds(DimensionEnclosure),
    Violated(DimensionEnclosure),
    Unresolved(DimensionEnclosure),
    /// The family has no tail majorant.
    NotChecked,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GreedyRound {
    /// `F_n` with `dim(F_n) < s <= dim(F_n ∪ {next})`.
    pub f: Alphabet,
    pub dim: DimensionEnclosure,
    pub break_point: BreakPointRecord,
    pub hypothesis: Hypothesis,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GreedyStop {
    Completed,
    /// `dim(F ∪ T) < s` was certified: expected inside spectrum gaps.
    HypothesisViolated,
    Inconclusive(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GreedyOutcome {
    pub parent: Family,
    pub s: f64,
    pub rounds: Vec<GreedyRound>,
    pub stop: GreedyStop,
}

impl GreedyOutcome {
    pub fn hypothesis_violated(&self) -> bool {
        self.stop == GreedyStop::HypothesisViolated
    }

    /// Lower endpoints of `dim(F_n)` strictly increase and never pass `s`.
    pub fn is_monotone(&self) -> bool {
        self.rounds.windows(2).all(|w| w[0].dim.lo() < w[1].dim.lo())
            && self.rounds.iter().all(|r| r.dim.lo() <= self.s)
    }

    pub fn final_dim(&self) -> Option<&DimensionEnclosure> {
        self.rounds.last().map(|r| &r.dim)
    }
}

/// `F ∪ T` for the members `T` of `parent` after `element`, as a tail alphabet.
fn check_hypothesis(f: &Alphabet, parent: Family, bp: &BreakPointRecord, config: &SolverConfig) -> Result<Hypothesis> {
    let mut last = None;
    for n in HYPOTHESIS_SCHEDULE {
        // A finite truncation of F ∪ T bounds its dimension from below.
        let t = parent.members_above(&bp.break_element, n)?;
        let d = dimension(&union(f, &t)?, config)?;
        if d.lo() >= bp.s {
            return Ok(Hypothesis::Holds(d));
        }
        let a = match Alphabet::with_family_tail(f.elements().iter().chain(&t).cloned().collect(), parent) {
            Ok(a) => a,
            Err(Error::Unsupported(_)) => return Ok(Hypothesis::NotChecked),
            Err(e) => return Err(e),
        };
        let d = match dimension(&a, config) {
            Ok(d) => d,
            Err(Error::Unsupported(_)) => return Ok(Hypothesis::NotChecked),
            Err(e) => return Err(e),
        };
        if d.hi() < bp.s {
            return Ok(Hypothesis::Violated(d));
        }
        last = Some(d);
    }
    Ok(Hypothesis::Unresolved(last.expect("schedule is nonempty")))
}

/// The nested sets `F_1 ⊂ F_2 ⊂ ...` of the break-point construction for `s`.
pub fn greedy_spectrum_construct(
    parent: Family,
    s: f64,
    rounds: usize,
    config: &SolverConfig,
) -> Result<GreedyOutcome> {
    if parent.is_explicit() {
        return Err(Error::Parameter("the parent must be an infinite family".into()));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Range(format!("s must lie in (0, 1), got {s}")));
    }
    let mut out = GreedyOutcome { parent, s, rounds: Vec::new(), stop: GreedyStop::Completed };
    let first = parent.first(1)?;
    let mut f = Alphabet::explicit(first.clone())?;
    let mut last = first[0].clone();
    while out.rounds.len() < rounds {
        // Grow F by consecutive members while the union stays below s.
        let mut grown = 0;
        let dim = loop {
            let next = parent.members_above(&last, 1)?.remove(0);
            let (d, side) = compare(&union(&f, std::slice::from_ref(&next))?, s, config)?;
            match side {
                Side::Below => {
                    f = union(&f, std::slice::from_ref(&next))?;
                    last = next;
                }
                Side::AtLeast => break compare(&f, s, config)?.0,
                Side::Unresolved => {
                    out.stop =
                        GreedyStop::Inconclusive(format!("dim of {f} plus {next} straddles {s}: {}", d.enclosure));
                    return Ok(out);
                }
            }
            grown += 1;
            if grown > MAX_GROWTH {
                return Err(Error::Range(format!("no break point within {MAX_GROWTH} members")));
            }
        };
        let bp = find_strict_break_point(parent, &f, s, config)?;
        if !bp.strict {
            out.stop = GreedyStop::Inconclusive(format!("break point for {f} is not certified strict"));
            out.rounds.push(GreedyRound { f, dim, break_point: bp, hypothesis: Hypothesis::NotChecked });
            return Ok(out);
        }
        let hypothesis = check_hypothesis(&f, parent, &bp, config)?;
        let stop = match &hypothesis {
            Hypothesis::Violated(_) => Some(GreedyStop::HypothesisViolated),
            Hypothesis::Unresolved(d) => {
                Some(GreedyStop::Inconclusive(format!("dim(F ∪ T) = {} straddles {s}", d.enclosure)))
            }
            _ => None,
        };
        let element = bp.break_element.clone();
        out.rounds.push(GreedyRound { f: f.clone(), dim, break_point: bp, hypothesis });
        if let Some(stop) = stop {
            out.stop = stop;
            return Ok(out);
        }
        // Skip past the break point; its successor keeps F below s.
        let next = parent.members_above(&element, 1)?.remove(0);
        f = union(&f, std::slice::from_ref(&next))?;
        last = next;
    }
    Ok(out)
}

/// A dimension enclosure with the alphabet it belongs to.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedEnclosure {
    pub name: String,
    pub alphabet: Alphabet,
    pub enclosure: DimensionEnclosure,
}

impl NamedEnclosure {
    pub fn compute(name: &str, alphabet: Alphabet, config: &SolverConfig) -> Result<Self> {
        let enclosure = dimension(&alphabet, config)?;
        Ok(NamedEnclosure { name: name.to_string(), alphabet, enclosure })
    }

    pub fn interval(&self) -> Interval {
        self.enclosure.enclosure
    }
}

/// Certified ordering `left < right` of two dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct GapCertificate {
    pub family: Family,
    pub statement: String,
    pub left: NamedEnclosure,
    pub right: NamedEnclosure,
    /// `left.hi < right.lo`
    pub separation: bool,
    pub supporting: Vec<BoundReport>,
}

impl GapCertificate {
    pub fn new(family: Family, statement: String, left: NamedEnclosure, right: NamedEnclosure) -> Self {
        let separation = left.enclosure.hi() < right.enclosure.lo();
        GapCertificate { family, statement, left, right, separation, supporting: Vec::new() }
    }

    /// `right.lo - left.hi`; positive exactly when separated.
    pub fn margin(&self) -> f64 {
        self.right.enclosure.lo() - self.left.enclosure.hi()
    }

    /// Disproved when the enclosures are ordered the other way.
    pub fn contradicted(&self) -> bool {
        self.left.enclosure.lo() > self.right.enclosure.hi()
    }

    pub fn supported(&self) -> bool {
        self.supporting.iter().all(BoundReport::passed)
    }
}

fn tail_alphabet(finite: &[BigUint], parent: Family, after: &BigUint, snapshot: usize) -> Result<Alphabet> {
    let t = parent.members_above(after, snapshot)?;
    Alphabet::with_family_tail(finite.iter().chain(&t).cloned().collect(), parent)
}

/// `dim(F♯) < dim(F)` where `F♯` replaces `max F` by every member of `parent` above it.
/// The snapshot of `F♯` grows along [`TAIL_SCHEDULE`] until the two separate.
pub fn certify_fsharp(f: &Alphabet, parent: Family, config: &SolverConfig) -> Result<GapCertificate> {
    if f.len() < 2 || f.has_tail() {
        return Err(Error::Parameter("F must be finite with at least two elements".into()));
    }
    let right = NamedEnclosure::compute("dim_f", f.clone(), config)?;
    let head = &f.elements()[..f.len() - 1];
    let mut cert = None;
    for n in TAIL_SCHEDULE {
        let left = NamedEnclosure::compute("dim_f_sharp", tail_alphabet(head, parent, f.max(), n)?, config)?;
        let c = GapCertificate::new(parent, format!("fsharp f={f}"), left, right.clone());
        let done = c.separation;
        cert = Some(c);
        if done {
            break;
        }
    }
    Ok(cert.expect("schedule is nonempty"))
}

/// `μ^k < ν^k` for `P*_q`: `ν^k = dim{1, q, ..., q^k}` and `μ^k = dim(P*_q \ {q^k})`.
pub fn certify_pstar_gap(q: u32, k: u32, config: &SolverConfig) -> Result<GapCertificate> {
    if q < 2 || k < 1 || (q == 2 && k < 2) {
        return Err(Error::Range(format!("needs q >= 3, k >= 1 or q = 2, k >= 2; got q={q}, k={k}")));
    }
    let family = Family::PowersStar { q };
    let ik = Alphabet::make_family(family, k as usize + 1)?.truncation();
    let ik = Alphabet::explicit(ik.elements().to_vec())?;
    let mut cert = certify_fsharp(&ik, family, config)?;
    cert.statement = format!("pstar-gap q={q} k={k}");
    cert.left.name = format!("mu_{k}");
    cert.right.name = format!("nu_{k}");
    cert.supporting.push(bounds::pstar_contraction(q, k, cert.right.interval())?);
    Ok(cert)
}

/// Critical break point value `2q` for `M_q`, `q >= 11`.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalBreakPoint {
    pub q: u32,
    pub k_star: u64,
    /// `τ(q) > 1`
    pub tau: BoundReport,
    /// `μ(2/√q) < 1`
    pub mu: BoundReport,
}

impl CriticalBreakPoint {
    pub fn passed(&self) -> bool {
        self.tau.passed() && self.mu.passed()
    }
}

pub fn certify_critical_breakpoint(q: u32) -> Result<CriticalBreakPoint> {
    if q < 11 {
        return Err(Error::Range(format!("critical break point needs q >= 11, got {q}")));
    }
    Ok(CriticalBreakPoint { q, k_star: 2 * q as u64, tau: bounds::tau_report(q)?, mu: bounds::mq_upper(q)? })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MqShape {
    /// `DS(M_q) = [0, dim(J_{M_q})]`
    Full,
    /// Disjoint union of this many closed intervals.
    Intervals(usize),
    /// Finitely many intervals, count not determined.
    FiniteUnion,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MqStructure {
    pub q: u32,
    pub shape: MqShape,
    /// `dim(J_{M_q})` with the monomial tail.
    pub endpoint: Option<NamedEnclosure>,
    pub gaps: Vec<GapCertificate>,
    /// Other certified orderings the argument relies on.
    pub comparisons: Vec<GapCertificate>,
    pub reports: Vec<BoundReport>,
    pub critical: Option<CriticalBreakPoint>,
}

impl MqStructure {
    pub fn passed(&self) -> bool {
        self.gaps.iter().chain(&self.comparisons).all(|g| g.separation && g.supported())
            && self.reports.iter().all(BoundReport::passed)
            && self.critical.as_ref().is_none_or(CriticalBreakPoint::passed)
    }

    /// Endpoint enclosures of the intervals of `DS(M_q)`, left to right.
    pub fn intervals(&self) -> Vec<(Interval, Interval)> {
        let top = self.endpoint.as_ref().map_or(Interval::new(0.0, 1.0), NamedEnclosure::interval);
        let mut lows = vec![Interval::ZERO];
        let mut highs = Vec::new();
        for g in &self.gaps {
            highs.push(g.left.interval());
            lows.push(g.right.interval());
        }
        highs.push(top);
        lows.into_iter().zip(highs).collect()
    }
}

fn mq_without(
    q: u32,
    removed: u64,
    config: &SolverConfig,
    right: NamedEnclosure,
    statement: String,
) -> Result<GapCertificate> {
    let family = Family::Monomials { q };
    let mut cert = None;
    for n in TAIL_SCHEDULE {
        let finite: Vec<BigUint> = (1..=3u64).filter(|&m| m != removed).map(|m| BigUint::from(m).pow(q)).collect();
        let after = BigUint::from(3u64).pow(q);
        let alphabet = tail_alphabet(&finite, family, &after, n)?;
        let left = NamedEnclosure::compute(&format!("dim_mq_without_{removed}^{q}"), alphabet, config)?;
        let c = GapCertificate::new(family, statement.clone(), left, right.clone());
        let done = c.separation;
        cert = Some(c);
        if done {
            break;
        }
    }
    Ok(cert.expect("schedule is nonempty"))
}

fn gamma_reports(q: u32) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    if q == 1 {
        let s = Interval::ONE;
        out.push(BoundReport::new(
            "gamma",
            vec![("q", bounds::Param::Int(1)), ("n0", bounds::Param::Int(2)), ("s", bounds::Param::Real(s))],
            bounds::gamma_break(1, 2, s)?,
            1.0,
            Verdict::Above,
        ));
    }
    for (cq, n0, s, t) in constants::GAMMA_CHECKS.iter().chain(constants::GAMMA_CHECKS_LATE.iter()) {
        if *cq == q {
            let s = Interval::from_decimal(s).expect("literal");
            out.push(BoundReport::new(
                "gamma",
                vec![
                    ("q", bounds::Param::Int(q as u64)),
                    ("n0", bounds::Param::Int(*n0)),
                    ("s", bounds::Param::Real(s)),
                ],
                bounds::gamma_break(q, *n0, s)?,
                *t,
                Verdict::Above,
            ));
        }
    }
    let (pq, n0, s, t) = constants::GAMMA_PRIME_CHECK;
    if pq == q {
        let s = Interval::from_decimal(s).expect("literal");
        out.push(BoundReport::new(
            "gamma_prime",
            vec![("q", bounds::Param::Int(q as u64)), ("n0", bounds::Param::Int(n0)), ("s", bounds::Param::Real(s))],
            bounds::gamma_prime_break(q, n0, s)?,
            t,
            Verdict::Above,
        ));
    }
    Ok(out)
}

/// Structure of `DS(M_q)`: full for `q <= 5`, two intervals for `6 <= q <= 8`,
/// three for `q` in `{9, 10}`, and a finite union for `q >= 11`.
pub fn certify_mq_structure(q: u32, config: &SolverConfig) -> Result<MqStructure> {
    if q < 1 {
        return Err(Error::Parameter("q must be positive".into()));
    }
    let family = Family::Monomials { q };
    if q >= 11 {
        return Ok(MqStructure {
            q,
            shape: MqShape::FiniteUnion,
            endpoint: None,
            gaps: Vec::new(),
            comparisons: Vec::new(),
            reports: Vec::new(),
            critical: Some(certify_critical_breakpoint(q)?),
        });
    }
    let endpoint = NamedEnclosure::compute(
        &format!("dim_m{q}"),
        Alphabet::make_family(family, TAIL_SNAPSHOT)?.with_tail()?,
        config,
    )?;
    let mut reports = gamma_reports(q)?;
    if q >= 2 {
        reports.push(bounds::mq_crude_upper(q)?);
    }
    let mut gaps = Vec::new();
    let mut comparisons = Vec::new();
    let pow = |b: u64| BigUint::from(b).pow(q);
    let shape = match q {
        1..=5 => {
            if q == 5 {
                let singles: Vec<Alphabet> = vec![
                    Alphabet::explicit([BigUint::one(), pow(2)])?,
                    Alphabet::explicit(std::iter::once(BigUint::one()).chain((3..=100u64).map(pow)))?,
                ];
                let d = par::map(config.execution, &singles, |a| dimension(a, config));
                let mut d = d.into_iter();
                let left = NamedEnclosure {
                    name: "dim_1_2^5".into(),
                    alphabet: singles[0].clone(),
                    enclosure: d.next().unwrap()?,
                };
                let right = NamedEnclosure {
                    name: "dim_1_3^5..100^5".into(),
                    alphabet: singles[1].clone(),
                    enclosure: d.next().unwrap()?,
                };
                comparisons.push(GapCertificate::new(family, "mq5 comparison".into(), left, right));
            }
            MqShape::Full
        }
        6..=10 => {
            let right = NamedEnclosure::compute(
                &format!("dim_1_2^{q}"),
                Alphabet::explicit([BigUint::one(), pow(2)])?,
                config,
            )?;
            let mut g = mq_without(q, 2, config, right, format!("mq gap q={q} at 2^{q}"))?;
            g.supporting.push(bounds::mq_gap_bounds(q, GapKind::TwoPow)?);
            gaps.push(g);
            if q >= 9 {
                let right = NamedEnclosure::compute(
                    &format!("dim_1_2^{q}_3^{q}"),
                    Alphabet::explicit([BigUint::one(), pow(2), pow(3)])?,
                    config,
                )?;
                let mut g = mq_without(q, 3, config, right, format!("mq gap q={q} at 3^{q}"))?;
                g.supporting.push(bounds::mq_gap_bounds(q, GapKind::ThreePow)?);
                gaps.push(g);
                MqShape::Intervals(3)
            } else {
                MqShape::Intervals(2)
            }
        }
        _ => unreachable!(),
    };
    Ok(MqStructure { q, shape, endpoint: Some(endpoint), gaps, comparisons, reports, critical: None })
}

/// One grid point of a spectrum scan.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanPoint {
    pub s: f64,
    pub attained: bool,
    /// A subset whose dimension estimate is within tolerance of `s`.
    pub witness: Option<Alphabet>,
    /// Closest dimension estimates found on either side of `s`.
    pub nearest_below: Option<f64>,
    pub nearest_above: Option<f64>,
    /// The search hit its evaluation budget before finishing.
    pub exhausted: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanOptions {
    /// Number of leading family members considered.
    pub cutoff: usize,
    /// Accept a subset whose estimate is within this distance of `s`.
    pub tol: f64,
    /// Evaluation budget per grid point.
    pub budget: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { cutoff: 12, tol: 2e-3, budget: 20_000 }
    }
}

struct Search<'a> {
    members: &'a [BigUint],
    s: f64,
    max_size: usize,
    opts: &'a ScanOptions,
    config: SolverConfig,
    evals: usize,
    below: Option<f64>,
    above: Option<f64>,
}

impl Search<'_> {
    fn dim(&mut self, set: &[BigUint]) -> f64 {
        self.evals += 1;
        match Alphabet::explicit(set.to_vec()).and_then(|a| dimension(&a, &self.config)) {
            Ok(d) => d.enclosure.mid(),
            Err(_) => f64::NAN,
        }
    }

    fn note(&mut self, d: f64) {
        if d < self.s {
            self.below = Some(self.below.map_or(d, |b| b.max(d)));
        } else {
            self.above = Some(self.above.map_or(d, |a| a.min(d)));
        }
    }

    /// Depth-first over supersets of `chosen` drawn from `members[from..]`.
    fn run(&mut self, chosen: &mut Vec<BigUint>, from: usize) -> Option<Vec<BigUint>> {
        if self.evals >= self.opts.budget {
            return None;
        }
        if chosen.len() >= self.max_size || from >= self.members.len() {
            return None;
        }
        // Adding elements only increases the dimension.
        let mut all = chosen.clone();
        let room = self.max_size - chosen.len();
        all.extend(self.members[from..].iter().take(room).cloned());
        if chosen.len() + 1 < all.len() && self.dim(&all) < self.s - self.opts.tol {
            return None;
        }
        for i in from..self.members.len() {
            chosen.push(self.members[i].clone());
            let d = if chosen.len() == 1 { 0.0 } else { self.dim(chosen) };
            self.note(d);
            if (d - self.s).abs() <= self.opts.tol {
                return Some(chosen.clone());
            }
            if d < self.s {
                if let Some(w) = self.run(chosen, i + 1) {
                    return Some(w);
                }
            }
            chosen.pop();
            if self.evals >= self.opts.budget {
                return None;
            }
        }
        None
    }
}

/// Heuristic picture of `DS(parent)` on a grid: searches subsets of the first
/// members for a dimension estimate near each `s`. Not a certificate.
pub fn scan_spectrum(
    parent: Family,
    s_grid: &[f64],
    max_subset_size: usize,
    options: &ScanOptions,
    config: &SolverConfig,
) -> Result<Vec<ScanPoint>> {
    if max_subset_size < 1 {
        return Err(Error::Parameter("subset size must be positive".into()));
    }
    let members = parent.first(options.cutoff)?;
    let fast = SolverConfig { certified: false, mesh_size: config.mesh_size.min(64), ..config.clone() };
    let points = par::map(config.execution, s_grid, |&s| {
        let mut search = Search {
            members: &members,
            s,
            max_size: max_subset_size,
            opts: options,
            config: fast.clone(),
            evals: 0,
            below: None,
            above: None,
        };
        let witness = search.run(&mut Vec::new(), 0);
        ScanPoint {
            s,
            attained: witness.is_some(),
            witness: witness.and_then(|w| Alphabet::explicit(w).ok()),
            nearest_below: search.below,
            nearest_above: search.above,
            exhausted: search.evals >= options.budget,
        }
    });
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn explicit(d: &[u64]) -> Alphabet {
        Alphabet::explicit(d.iter().copied()).unwrap()
    }

    #[test]
    fn pstar_two_break_point() {
        let r = find_strict_break_point(Family::PowersStar { q: 2 }, &explicit(&[1]), 0.3, &SolverConfig::default())
            .unwrap();
        assert!(r.strict);
        assert_eq!(r.break_element, BigUint::from(8u32));
        assert!(r.is_consistent());
        assert!((r.dim_f_plus.lo() - 0.3336).abs() < 1e-3);
    }

    #[test]
    fn naturals_break_point() {
        let r = find_strict_break_point(Family::Monomials { q: 1 }, &explicit(&[1, 2]), 0.6, &SolverConfig::default())
            .unwrap();
        assert!(r.strict && r.is_consistent());
        assert!(r.dim_f_plus.lo() >= 0.6 && r.dim_next.hi() < 0.6);
        let e = find_strict_break_point(Family::Monomials { q: 1 }, &explicit(&[1]), 0.99, &SolverConfig::default());
        assert!(matches!(e, Err(Error::NoBreakPoint(_))));
    }

    #[test]
    fn fsharp_contracts_for_small_q() {
        for q in 3..=5u32 {
            let f = explicit(&[1, q as u64]);
            let c = certify_fsharp(&f, Family::PowersStar { q }, &SolverConfig::default()).unwrap();
            assert!(c.separation, "q={q}: {} vs {}", c.left.interval(), c.right.interval());
        }
    }

    #[test]
    fn pstar_gap_ranges() {
        assert!(matches!(certify_pstar_gap(2, 1, &SolverConfig::default()), Err(Error::Range(_))));
        let c = certify_pstar_gap(3, 1, &SolverConfig::default()).unwrap();
        assert!(c.separation && c.supported());
        assert!(c.left.enclosure.lo() > 0.0);
        assert!(c.right.interval().overlaps(Interval::new(0.454487, 0.454490)));
    }

    #[test]
    fn critical_breakpoint_range() {
        assert!(certify_critical_breakpoint(11).unwrap().passed());
        assert!(certify_critical_breakpoint(50).unwrap().passed());
        assert!(matches!(certify_critical_breakpoint(10), Err(Error::Range(_))));
    }
}
