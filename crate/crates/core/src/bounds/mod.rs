//! Closed-form dimension bounds and the scalar inequalities behind the
//! spectrum results, evaluated in interval arithmetic.

pub mod constants;
pub mod report;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::solver::tail::TailMajorant;
use crate::table;

pub use report::{BoundReport, Param, Verdict};

use constants::*;

/// The golden ratio `(1 + √5) / 2`.
pub fn golden() -> Interval {
    (Interval::ONE + Interval::point(5.0).sqrt()) / 2.0
}

fn dec(s: &str) -> Interval {
    Interval::from_decimal(s).expect("valid decimal literal")
}

fn int(n: u64) -> Interval {
    Interval::from_u64(n)
}

/// `base^q` enclosed exactly from the integer power.
fn ipow(base: u64, q: u32) -> Interval {
    Interval::from_biguint(&BigUint::from(base).pow(q))
}

fn check_convergent(p: Interval, what: &str) -> Result<()> {
    if p.lo() > 1.0 {
        Ok(())
    } else {
        Err(Error::DivergentTail(format!("{what} needs 2qs > 1, got {}", p.lo())))
    }
}

fn check_positive(s: Interval) -> Result<()> {
    if s.lo() > 0.0 {
        Ok(())
    } else {
        Err(Error::DivergentTail(format!("needs s > 0, got {}", s.lo())))
    }
}

/// `λ^{-2s}(1 + (λ/(n+λ-1))^{2s})`, decreasing in `s`.
pub fn golden_lower_fn(n: u64, s: Interval) -> Interval {
    let l = golden();
    let two_s = s * 2.0;
    l.pow(-two_s) * (Interval::ONE + (l / (int(n) + l - 1.0)).pow(two_s))
}

/// `λ^{-2s}(1 + ((λ+1)/(n+λ))^{2s})`, decreasing in `s`.
pub fn golden_upper_fn(n: u64, s: Interval) -> Interval {
    let l = golden();
    let two_s = s * 2.0;
    l.pow(-two_s) * (Interval::ONE + ((l + 1.0) / (int(n) + l)).pow(two_s))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GoldenBounds {
    /// Certified not to exceed the largest `s` with `golden_lower_fn >= 1`.
    pub s_minus: f64,
    /// Certified not below the smallest `s` with `golden_upper_fn <= 1`.
    pub s_plus: f64,
}

const GOLDEN_TOL: f64 = 1e-10;
const GOLDEN_MAX_ITERS: usize = 200;

/// Bounds `s_-(n) <= dim(J_{1,n}) <= s_+(n)` from the eigenfunction of the digit 1.
pub fn golden_bounds(n: u64) -> Result<GoldenBounds> {
    if n < 2 {
        return Err(Error::Parameter(format!("golden bounds need n >= 2, got {n}")));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..GOLDEN_MAX_ITERS {
        if hi - lo <= GOLDEN_TOL {
            break;
        }
        let m = lo + (hi - lo) / 2.0;
        if golden_lower_fn(n, Interval::point(m)).lo() >= 1.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    let s_minus = lo;
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..GOLDEN_MAX_ITERS {
        if hi - lo <= GOLDEN_TOL {
            break;
        }
        let m = lo + (hi - lo) / 2.0;
        if golden_upper_fn(n, Interval::point(m)).hi() <= 1.0 {
            hi = m;
        } else {
            lo = m;
        }
    }
    let s_plus = hi;
    if s_minus > s_plus {
        return Err(Error::Range(format!("inconsistent golden bracket for n = {n}")));
    }
    Ok(GoldenBounds { s_minus, s_plus })
}

/// `0.52679 / ln n`, a lower bound for `dim(J_{1,n})` when `n >= 4`.
pub fn generic_lower(n: u64) -> Result<Interval> {
    if n < 4 {
        return Err(Error::Range(format!("generic lower bound needs n >= 4, got {n}")));
    }
    Ok(dec("0.52679") / int(n).ln())
}

/// `λ^{-2s(x)} + (x+λ-1)^{-2s(x)}` with `s(x) = c / ln x`.
pub fn power_gap_h(x: Interval, c: Interval) -> Interval {
    let l = golden();
    let two_s = c / x.ln() * 2.0;
    l.pow(-two_s) + (x + l - 1.0).pow(-two_s)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLower {
    /// `1.0571 / (q ln 2)`
    pub bound: Interval,
    /// `1.525 / q`
    pub weak: Interval,
}

/// Lower bounds for `dim(J_{1,2^q})`, `q >= 12`.
pub fn power_lower_2q(q: u32) -> Result<PowerLower> {
    if q < 12 {
        return Err(Error::Range(format!("needs q >= 12, got {q}")));
    }
    let qi = int(q as u64);
    Ok(PowerLower { bound: dec("1.0571") / (qi * Interval::point(2.0).ln()), weak: dec("1.525") / qi })
}

/// `λ^{-2s} + (λ/2^q)^{2s}(1 + 2/(2qs-1))`.
pub fn mu(q: u32, s: Interval) -> Result<Interval> {
    let p = s * (2.0 * q as f64);
    check_convergent(p, "mu")?;
    let l = golden();
    let two_s = s * 2.0;
    Ok(l.pow(-two_s) + (l / ipow(2, q)).pow(two_s) * (Interval::ONE + Interval::point(2.0) / (p - 1.0)))
}

/// `λ^{-4/√x} + (λ/2^x)^{4/√x}(1 + 2/(4√x-1))`, i.e. `mu` at `s = 2/√x`.
pub fn mu_root_h(x: Interval) -> Interval {
    let l = golden();
    let e = Interval::point(4.0) / x.sqrt();
    let two_x = (x * Interval::point(2.0).ln()).exp();
    l.pow(-e) + (l / two_x).pow(e) * (Interval::ONE + Interval::point(2.0) / (x.sqrt() * 4.0 - 1.0))
}

/// Lower bound for the scaled derivative of `mu_root_h` on `x >= 11`.
pub fn g_monotone(x: Interval) -> Interval {
    let l = golden();
    let ll = l.ln();
    let ln2 = Interval::point(2.0).ln();
    let r11 = Interval::point(11.0).sqrt();
    let first = l.pow(-(Interval::point(8.0) / r11)) * (x.sqrt() * 4.0 * ln2).exp();
    let a = Interval::ONE + Interval::point(2.0) / (r11 * 4.0 - 1.0);
    let b = ln2 / ll * x + 1.0;
    let c = Interval::point(2.0) / (ll * (Interval::point(16.0) - Interval::point(8.0) / r11));
    first - (a * b + c)
}

/// `λ^{-2s}(1 + Σ_{n=2,3,4} ((λ+1)/(n^q+1))^{2s} + (λ+1)^{2s} 4^{1-2qs}/(2qs-1))`.
pub fn alpha(q: u32, s: Interval) -> Result<Interval> {
    let p = s * (2.0 * q as f64);
    check_convergent(p, "alpha")?;
    let l = golden();
    let two_s = s * 2.0;
    let mut sum = Interval::ONE;
    for n in 2..=4 {
        sum = sum + ((l + 1.0) / (ipow(n, q) + 1.0)).pow(two_s);
    }
    sum = sum + (l + 1.0).pow(two_s) * Interval::point(4.0).pow(Interval::ONE - p) / (p - 1.0);
    Ok(l.pow(-two_s) * sum)
}

fn ratio_pow(n0: u64, d: u64, p: Interval) -> Interval {
    (int(n0) / int(n0 + d)).pow(p)
}

/// `Σ_{i=1}^{3} (n0/(n0+i))^{2qs} + (n0/(n0+4))^{2qs} (n0+4)/(2qs-1)`.
pub fn gamma_break(q: u32, n0: u64, s: Interval) -> Result<Interval> {
    break_sum(q, n0, s, 4)
}

/// The same sum with five explicit terms and the remainder from `n0 + 6`.
pub fn gamma_prime_break(q: u32, n0: u64, s: Interval) -> Result<Interval> {
    break_sum(q, n0, s, 6)
}

fn break_sum(q: u32, n0: u64, s: Interval, last: u64) -> Result<Interval> {
    if n0 < 1 {
        return Err(Error::Parameter("n0 must be positive".into()));
    }
    let p = s * (2.0 * q as f64);
    check_convergent(p, "break-point sum")?;
    let mut sum = Interval::ZERO;
    for i in 1..last {
        sum = sum + ratio_pow(n0, i, p);
    }
    Ok(sum + ratio_pow(n0, last, p) * int(n0 + last) / (p - 1.0))
}

/// `((2q+1)/(2q+2))^{4√q} (2q+2)/(4√q-1)`.
pub fn tau(q: u32) -> Result<Interval> {
    if q < 11 {
        return Err(Error::Range(format!("tau needs q >= 11, got {q}")));
    }
    Ok(tau_at(int(q as u64)))
}

fn tau_at(q: Interval) -> Interval {
    let e = q.sqrt() * 4.0;
    ((q * 2.0 + 1.0) / (q * 2.0 + 2.0)).pow(e) * (q * 2.0 + 2.0) / (e - 1.0)
}

/// Geometric tail ratio `(e^{1/q^k}(1+1/q^k))^{2s} / (q^{2s}-1)`.
pub fn pstar_gap_gamma(q: u32, k: u32, s: Interval) -> Result<Interval> {
    check_positive(s)?;
    TailMajorant::geometric(q, k)?.relative_bound(s)
}

/// `e^{4s/q^k} / (q^{2s}-1)`.
pub fn pstar_gap_gamma_simplified(q: u32, k: u32, s: Interval) -> Result<Interval> {
    check_positive(s)?;
    TailMajorant::geometric(q, k)?.relative_bound_simplified(s)
}

/// `4^{2s}((e^{2/9}/10)^{2s} + (e^{8/27}/28)^{2s} + (e^{1/3}/27)^{2s}/(3^{2s}-1))`.
pub fn pstar_refined_3_1(s: Interval) -> Result<Interval> {
    check_positive(s)?;
    Ok(split_eval(s, refined_3_1_at))
}

fn refined_3_1_at(s: Interval) -> Interval {
    let t = s * 2.0;
    let e = |num: i64, den: i64| Interval::ratio(num, den).exp();
    let terms = (e(2, 9) / 10.0).pow(t)
        + (e(8, 27) / 28.0).pow(t)
        + (e(1, 3) / 27.0).pow(t) / (Interval::point(3.0).pow(t) - 1.0);
    Interval::point(4.0).pow(t) * terms
}

/// `5^{2s}((e^{1/8}/9)^{2s} + (e^{3/16}/17)^{2s} + (e^{1/4}/16)^{2s}/(2^{2s}-1))`.
pub fn pstar_refined_2_2(s: Interval) -> Result<Interval> {
    check_positive(s)?;
    Ok(split_eval(s, refined_2_2_at))
}

fn refined_2_2_at(s: Interval) -> Interval {
    let t = s * 2.0;
    let e = |num: i64, den: i64| Interval::ratio(num, den).exp();
    let terms = (e(1, 8) / 9.0).pow(t)
        + (e(3, 16) / 17.0).pow(t)
        + (e(1, 4) / 16.0).pow(t) / (Interval::point(2.0).pow(t) - 1.0);
    Interval::point(5.0).pow(t) * terms
}

const SPLIT_PIECES: usize = 32;

/// Hull of `f` over equal pieces of `s`, to limit dependency widening.
fn split_eval(s: Interval, f: impl Fn(Interval) -> Interval) -> Interval {
    if s.is_point() {
        return f(s);
    }
    let h = s.width() / SPLIT_PIECES as f64;
    (0..SPLIT_PIECES)
        .map(|i| {
            let a = if i == 0 { s.lo() } else { s.lo() + h * i as f64 };
            let b = if i + 1 == SPLIT_PIECES { s.hi() } else { s.lo() + h * (i + 1) as f64 };
            f(Interval::new(a, b))
        })
        .reduce(Interval::hull)
        .expect("at least one piece")
}

/// `e^{2s/2^q}(((2^q+1)/(3^q+1))^{2s} + ((2^q+1)/(4^q+1))^{2s} + ((2^q+1)/4^q)^{2s} 4/(2sq-1))`.
pub fn two_pow_gap(q: u32, s: Interval) -> Result<Interval> {
    let p = s * (2.0 * q as f64);
    check_convergent(p, "two-power gap")?;
    let t = s * 2.0;
    let a = ipow(2, q) + 1.0;
    let sum =
        (a / (ipow(3, q) + 1.0)).pow(t) + (a / (ipow(4, q) + 1.0)).pow(t) + (a / ipow(4, q)).pow(t) * 4.0 / (p - 1.0);
    Ok((t / ipow(2, q)).exp() * sum)
}

/// `2 e^{4s/2^q} / (2sq-1)`.
pub fn two_pow_gap_large_q(q: u32, s: Interval) -> Result<Interval> {
    let p = s * (2.0 * q as f64);
    check_convergent(p, "two-power gap")?;
    Ok((s * 4.0 / ipow(2, q)).exp() * 2.0 / (p - 1.0))
}

/// `e^{2s/3^q}(Σ_{n=4}^{k} ((3^q+1)/(n^q+1))^{2s} + ((3^q+1)/k^q)^{2s} k/(2sq-1))`.
pub fn three_pow_gap(q: u32, k: u32, s: Interval) -> Result<Interval> {
    if k < 4 {
        return Err(Error::Parameter(format!("three-power gap needs k >= 4, got {k}")));
    }
    let p = s * (2.0 * q as f64);
    check_convergent(p, "three-power gap")?;
    let t = s * 2.0;
    let a = ipow(3, q) + 1.0;
    let mut sum = Interval::ZERO;
    for n in 4..=k as u64 {
        sum = sum + (a / (ipow(n, q) + 1.0)).pow(t);
    }
    sum = sum + (a / ipow(k as u64, q)).pow(t) * (k as f64) / (p - 1.0);
    Ok((t / ipow(3, q)).exp() * sum)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerturbationConstants {
    pub c1: f64,
    pub c2: f64,
    /// Smallest `n` above `(c1/(1-σ))^{1/(2σ)}`.
    pub n_threshold: u64,
    /// `max(c1, 1/c2)`
    pub c_f: f64,
}

/// Constants of the two-sided estimate
/// `σ + n^{-2σ}/C_F < dim(J_{F∪{n}}) < σ + C_F n^{-2σ}` for large `n`.
pub fn perturbation_constants(f_size: usize, sigma: f64) -> Result<PerturbationConstants> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::Range(format!("sigma must lie in (0, 1), got {sigma}")));
    }
    if f_size < 1 {
        return Err(Error::Parameter("alphabet size must be positive".into()));
    }
    let c1 = 3f64.exp() / 2f64.ln() * (1.0 + C1_MARGIN);
    let c2 = sigma / (2.0 * 4f64.exp() * ((f_size + 1) as f64).ln());
    let n_threshold = (c1 / (1.0 - sigma)).powf(1.0 / (2.0 * sigma)).ceil() as u64;
    Ok(PerturbationConstants { c1, c2, n_threshold, c_f: c1.max(1.0 / c2) })
}

/// `ln 2 / (2 ln q)`: the spectrum of `P*_q` contains `[0, this]`.
pub fn initial_interval_end(q: u32) -> Result<Interval> {
    if q < 2 {
        return Err(Error::Parameter(format!("needs q >= 2, got {q}")));
    }
    let ln2 = Interval::point(2.0).ln();
    Ok(ln2 / (int(q as u64).ln() * 2.0))
}

fn real(x: Interval) -> Param {
    Param::Real(x)
}

fn pint(n: u64) -> Param {
    Param::Int(n)
}

/// `μ(2/√q) < 1`, giving `dim(J_{M_q}) <= 2/√q` for `q >= 11`.
pub fn mq_upper(q: u32) -> Result<BoundReport> {
    if q < 11 {
        return Err(Error::Range(format!("needs q >= 11, got {q}")));
    }
    let s = Interval::point(2.0) / int(q as u64).sqrt();
    let v = mu(q, s)?;
    Ok(BoundReport::new("mu", vec![("q", pint(q as u64)), ("s", real(s))], v, 1.0, Verdict::Below))
}

/// `g(11) > 0`.
pub fn g_check() -> BoundReport {
    let x = Interval::point(11.0);
    BoundReport::new("g", vec![("x", real(x))], g_monotone(x), 0.0, Verdict::Above)
}

/// `α(q, s_q) < 1`, giving `dim(J_{M_q}) <= s_q`.
pub fn mq_crude_upper(q: u32) -> Result<BoundReport> {
    let (_, s, _) = ALPHA_CHECKS
        .iter()
        .find(|c| c.0 == q)
        .ok_or_else(|| Error::Range(format!("crude upper bound needs 2 <= q <= 10, got {q}")))?;
    let s = dec(s);
    let v = alpha(q, s)?;
    Ok(BoundReport::new("alpha", vec![("q", pint(q as u64)), ("s", real(s))], v, 1.0, Verdict::Below))
}

/// The crude upper bound `s_q` for `dim(J_{M_q})`, `2 <= q <= 10`.
pub fn mq_crude_s(q: u32) -> Option<Interval> {
    ALPHA_CHECKS.iter().find(|c| c.0 == q).map(|c| dec(c.1))
}

pub fn tau_report(q: u32) -> Result<BoundReport> {
    let v = tau(q)?;
    let t = if q == 11 { TAU_11 } else { 1.0 };
    Ok(BoundReport::new("tau", vec![("q", pint(q as u64))], v, t, Verdict::Above))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapKind {
    /// `dim(M_q \ {2^q}) < dim({1, 2^q})`
    TwoPow,
    /// `dim(M_q \ {3^q}) < dim({1, 2^q, 3^q})`
    ThreePow,
}

/// Majorant behind the `M_q` gaps, evaluated at the reference band of the
/// relevant finite set.
pub fn mq_gap_bounds(q: u32, which: GapKind) -> Result<BoundReport> {
    match which {
        GapKind::TwoPow => {
            if let Some((_, t)) = TWO_POW_GAP_CHECKS.iter().find(|c| c.0 == q) {
                let s = table::band(&format!("{{1,2^{q}}}"));
                let v = two_pow_gap(q, s)?;
                Ok(BoundReport::new("two_pow_gap", vec![("q", pint(q as u64)), ("s", real(s))], v, *t, Verdict::Below))
            } else if q >= 12 {
                let s = power_lower_2q(q)?.weak;
                let v = two_pow_gap_large_q(q, s)?;
                Ok(BoundReport::new(
                    "two_pow_gap_large_q",
                    vec![("q", pint(q as u64)), ("s", real(s))],
                    v,
                    TWO_POW_GAP_LARGE_Q,
                    Verdict::Below,
                ))
            } else {
                Err(Error::Range(format!("two-power gap needs q >= 6, got {q}")))
            }
        }
        GapKind::ThreePow => {
            let (_, t) = THREE_POW_GAP_CHECKS
                .iter()
                .find(|c| c.0 == q)
                .ok_or_else(|| Error::Range(format!("three-power gap needs q in {{9, 10}}, got {q}")))?;
            let s = table::band(&format!("{{1,2^{q},3^{q}}}"));
            let k = THREE_POW_GAP_K;
            let v = three_pow_gap(q, k, s)?;
            Ok(BoundReport::new(
                "three_pow_gap",
                vec![("q", pint(q as u64)), ("k", pint(k as u64)), ("s", real(s))],
                v,
                *t,
                Verdict::Below,
            ))
        }
    }
}

/// Contraction ratio for `F = {1, q, ..., q^k}` at the dimension band `s` of `F`:
/// the refined sums for `(3, 1)` and `(2, 2)`, the plain ratio otherwise.
pub fn pstar_contraction(q: u32, k: u32, s: Interval) -> Result<BoundReport> {
    let inputs = |with_qk: bool| {
        let mut v = Vec::new();
        if with_qk {
            v.push(("q", pint(q as u64)));
            v.push(("k", pint(k as u64)));
        }
        v.push(("s", real(s)));
        v
    };
    match (q, k) {
        (3, 1) => Ok(BoundReport::new("pstar_refined_3_1", inputs(false), pstar_refined_3_1(s)?, 1.0, Verdict::Below)),
        (2, 2) => Ok(BoundReport::new("pstar_refined_2_2", inputs(false), pstar_refined_2_2(s)?, 1.0, Verdict::Below)),
        (2, 1) => Err(Error::Range("q = 2 needs k >= 2".into())),
        _ => Ok(BoundReport::new("pstar_gamma", inputs(true), pstar_gap_gamma(q, k, s)?, 1.0, Verdict::Below)),
    }
}

fn gamma_report(name: &str, q: u32, n0: u64, s: &str, t: f64) -> Result<BoundReport> {
    let si = dec(s);
    let v = if name == "gamma" { gamma_break(q, n0, si)? } else { gamma_prime_break(q, n0, si)? };
    Ok(BoundReport::new(name, vec![("q", pint(q as u64)), ("n0", pint(n0)), ("s", real(si))], v, t, Verdict::Above))
}

/// Every scalar inequality used by the spectrum results, with its expected outcome.
pub fn reference_checks() -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    let one_two = gamma_report("gamma", 1, 2, "1", 1.0)?;
    out.push(one_two);
    for (q, n0, s, t) in GAMMA_CHECKS.iter().chain(GAMMA_CHECKS_LATE.iter()) {
        out.push(gamma_report("gamma", *q, *n0, s, *t)?);
    }
    let (q, n0, s, t) = GAMMA_PRIME_CHECK;
    out.push(gamma_report("gamma_prime", q, n0, s, t)?);
    out.push(tau_report(11)?);
    let s31 = Interval::from_decimal_bounds(PSTAR_REFINED_3_1_S.0, PSTAR_REFINED_3_1_S.1).expect("literal");
    out.push(BoundReport::new(
        "pstar_refined_3_1",
        vec![("s", real(s31))],
        pstar_refined_3_1(s31)?,
        PSTAR_REFINED_3_1,
        Verdict::Below,
    ));
    let s22 = Interval::from_decimal_bounds(PSTAR_REFINED_2_2_S.0, PSTAR_REFINED_2_2_S.1).expect("literal");
    out.push(BoundReport::new(
        "pstar_refined_2_2",
        vec![("s", real(s22))],
        pstar_refined_2_2(s22)?,
        PSTAR_REFINED_2_2,
        Verdict::Below,
    ));
    // Plain ratios in the general cases, at the smallest admissible k and s.
    let s3 = dec("0.454");
    out.push(BoundReport::new(
        "pstar_gamma_simplified",
        vec![("q", pint(3)), ("k", pint(2)), ("s", real(s3))],
        pstar_gap_gamma_simplified(3, 2, s3)?,
        PSTAR_GAMMA_3,
        Verdict::Below,
    ));
    let s2 = dec("0.669");
    out.push(BoundReport::new(
        "pstar_gamma_simplified",
        vec![("q", pint(2)), ("k", pint(3)), ("s", real(s2))],
        pstar_gap_gamma_simplified(2, 3, s2)?,
        PSTAR_GAMMA_2,
        Verdict::Below,
    ));
    for (q, _) in TWO_POW_GAP_CHECKS {
        out.push(mq_gap_bounds(q, GapKind::TwoPow)?);
    }
    out.push(mq_gap_bounds(12, GapKind::TwoPow)?);
    for (q, _) in THREE_POW_GAP_CHECKS {
        out.push(mq_gap_bounds(q, GapKind::ThreePow)?);
    }
    for q in 2..=10 {
        out.push(mq_crude_upper(q)?);
    }
    let c = dec("0.52679");
    let x = Interval::point(4.0);
    out.push(BoundReport::new(
        "power_gap_h",
        vec![("x", real(x)), ("c", real(c))],
        power_gap_h(x, c),
        H4_THRESHOLD,
        Verdict::Above,
    ));
    let c = dec("1.0571");
    let x = Interval::point(4096.0);
    out.push(BoundReport::new(
        "power_gap_h",
        vec![("x", real(x)), ("c", real(c))],
        power_gap_h(x, c),
        H4096_THRESHOLD,
        Verdict::Above,
    ));
    out.push(mq_upper(11)?);
    out.push(g_check());
    Ok(out)
}

/// Value of the formula named by `report.name` at `report.inputs`.
pub fn evaluate(report: &BoundReport) -> Result<Interval> {
    let q = || report.input("q").and_then(Param::int).map(|v| v as u32);
    let s = || report.input("s").map(Param::real);
    match report.name.as_str() {
        "alpha" => alpha(q()?, s()?),
        "mu" => mu(q()?, s()?),
        "mu_root_h" => Ok(mu_root_h(report.input("x")?.real())),
        "g" => Ok(g_monotone(report.input("x")?.real())),
        "power_gap_h" => Ok(power_gap_h(report.input("x")?.real(), report.input("c")?.real())),
        "gamma" => gamma_break(q()?, report.input("n0")?.int()?, s()?),
        "gamma_prime" => gamma_prime_break(q()?, report.input("n0")?.int()?, s()?),
        "tau" => tau(q()?),
        "pstar_gamma" => pstar_gap_gamma(q()?, report.input("k")?.int()? as u32, s()?),
        "pstar_gamma_simplified" => pstar_gap_gamma_simplified(q()?, report.input("k")?.int()? as u32, s()?),
        "pstar_refined_3_1" => pstar_refined_3_1(s()?),
        "pstar_refined_2_2" => pstar_refined_2_2(s()?),
        "two_pow_gap" => two_pow_gap(q()?, s()?),
        "two_pow_gap_large_q" => two_pow_gap_large_q(q()?, s()?),
        "three_pow_gap" => three_pow_gap(q()?, report.input("k")?.int()? as u32, s()?),
        other => Err(Error::Parse(format!("unknown formula {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: f64) -> Interval {
        Interval::point(x)
    }

    #[test]
    fn golden_bounds_examples() {
        let g = golden_bounds(4).unwrap();
        assert!(g.s_minus >= 0.379998, "{}", g.s_minus);
        let g = golden_bounds(2).unwrap();
        assert!(g.s_minus <= 0.531277 && 0.531281 <= g.s_plus);
        let g = golden_bounds(64).unwrap();
        assert!(g.s_minus <= 0.215370 && 0.215371 <= g.s_plus);
        assert!(golden_bounds(1).is_err());
    }

    #[test]
    fn golden_root_oracle() {
        // Independent check: plain floating-point evaluation at the returned ends.
        let l = (1.0 + 5f64.sqrt()) / 2.0;
        let n = 8.0;
        let g = golden_bounds(8).unwrap();
        let f = |s: f64| l.powf(-2.0 * s) * (1.0 + (l / (n + l - 1.0)).powf(2.0 * s));
        assert!(f(g.s_minus) >= 1.0 && f(g.s_minus + 1e-9) < 1.0);
    }

    #[test]
    fn generic_lower_examples() {
        assert!((generic_lower(4).unwrap().mid() - 0.52679 / 4f64.ln()).abs() < 1e-12);
        assert!(generic_lower(256).unwrap().hi() < 0.176544);
        let v = generic_lower(55).unwrap();
        assert!((v.mid() - 0.131456).abs() < 1e-5);
        assert!(v.hi() < golden_bounds(55).unwrap().s_plus);
        assert!(matches!(generic_lower(3), Err(Error::Range(_))));
    }

    #[test]
    fn power_lower_examples() {
        let b = power_lower_2q(12).unwrap();
        assert!((b.bound.mid() - 0.12709).abs() < 1e-5);
        assert!(power_lower_2q(20).unwrap().weak.lo() >= 0.07625 - 1e-15);
        assert!(b.bound.lo() >= b.weak.hi());
        assert!(power_lower_2q(11).is_err());
        assert!(power_gap_h(p(4096.0), dec("1.0571")).lo() > 1.005);
        assert!(power_gap_h(p(4.0), dec("0.52679")).lo() > 1.0);
    }

    #[test]
    fn gamma_examples() {
        let v = gamma_break(1, 2, p(1.0)).unwrap();
        assert!(v.contains(1369.0 / 900.0));
        assert!(v.width() < 1e-14);
        assert!(gamma_break(2, 2, dec("0.4112")).unwrap().lo() >= 2.5);
        assert!(gamma_break(6, 4, dec("0.265")).unwrap().lo() > 1.3);
        assert!(gamma_prime_break(8, 3, dec("0.192786")).unwrap().lo() > 1.004);
        assert!(gamma_prime_break(1, 2, p(1.0)).unwrap().lo() >= v.hi());
        assert!(gamma_break(9, 3, dec("0.162510")).unwrap().lo() > 1.09);
        assert!(matches!(gamma_break(2, 2, p(0.25)), Err(Error::DivergentTail(_))));
    }

    #[test]
    fn gamma_monotone_on_grid() {
        for q in [3u32, 6] {
            for i in 0..10 {
                let s = 0.2 + 0.05 * i as f64;
                for n0 in 2..12u64 {
                    let a = gamma_break(q, n0, p(s)).unwrap();
                    assert!(gamma_break(q, n0, p(s + 0.05)).unwrap().hi() < a.lo());
                    assert!(gamma_break(q, n0 + 1, p(s)).unwrap().lo() > a.hi());
                }
            }
        }
    }

    #[test]
    fn tau_examples() {
        assert!(tau(11).unwrap().lo() >= 1.112);
        let mut prev = tau(11).unwrap();
        for q in 12..=100 {
            let t = tau(q).unwrap();
            assert!(t.lo() > 1.0 && t.hi() >= prev.lo(), "q={q}");
            prev = t;
        }
        assert!(tau(10).is_err());
    }

    #[test]
    fn mq_upper_examples() {
        let r = mq_upper(11).unwrap();
        assert!(r.passed(), "{r}");
        assert!((r.value.mid() - 0.5599).abs() < 1e-3);
        assert!(mq_upper(100).unwrap().passed());
        assert!(g_check().passed());
        assert!((g_monotone(p(11.0)).mid() - 3066.96).abs() < 0.1);
        assert!(mq_upper(10).is_err());
        // mu_root_h is mu at s = 2/sqrt(q).
        let s = p(2.0) / p(30.0).sqrt();
        assert!(mu_root_h(p(30.0)).overlaps(mu(30, s).unwrap()));
    }

    #[test]
    fn g_is_increasing_on_samples() {
        let mut prev = g_monotone(p(11.0));
        for i in 1..200 {
            let v = g_monotone(p(11.0 + i as f64 * 0.5));
            assert!(v.lo() > prev.hi());
            prev = v;
        }
    }

    #[test]
    fn crude_upper_bounds() {
        for (q, s, t) in ALPHA_CHECKS {
            let r = mq_crude_upper(q).unwrap();
            assert!(r.passed(), "{r}");
            let v = alpha(q, dec(s)).unwrap();
            if q == 10 {
                // The tabulated 0.9989 is a hair too small; the value still sits below 1.
                assert!(v.lo() > t && v.hi() < 0.99891, "{v}");
            } else {
                assert!(v.hi() < t, "q={q}: {v}");
            }
        }
        assert!(mq_crude_upper(11).is_err());
    }

    #[test]
    fn pstar_sums() {
        assert!(pstar_gap_gamma_simplified(3, 2, dec("0.454")).unwrap().hi() < 0.92);
        let s = Interval::new(0.454, 0.455);
        assert!(pstar_refined_3_1(s).unwrap().hi() < 0.899);
        assert!(pstar_refined_2_2(Interval::new(0.669, 0.67)).unwrap().hi() < 0.984);
        assert!(pstar_gap_gamma(3, 1, p(0.0)).is_err());
        // The plain ratio alone does not settle q = 3, k = 1.
        assert!(pstar_gap_gamma(3, 1, s).unwrap().hi() > 1.0);
    }

    #[test]
    fn refined_sum_dominates_series() {
        // Independent oracle: sum the series it majorises directly.
        let s = 0.4545;
        let series: f64 = (1..200)
            .map(|j| {
                let d = 3f64.powi(j + 1);
                (4.0 / (d + 1.0)).powf(2.0 * s) * (2.0 * s * (1.0 / 3.0 - 1.0 / d)).exp()
            })
            .sum();
        assert!(series <= pstar_refined_3_1(p(s)).unwrap().lo());
    }

    #[test]
    fn gap_reports() {
        let r = mq_gap_bounds(6, GapKind::TwoPow).unwrap();
        assert!(r.passed() && r.value.hi() < 0.96, "{r}");
        let r = mq_gap_bounds(12, GapKind::TwoPow).unwrap();
        assert!(r.passed() && r.value.hi() <= 0.98, "{r}");
        let r = mq_gap_bounds(9, GapKind::ThreePow).unwrap();
        assert!(r.passed(), "{r}");
        assert!(mq_gap_bounds(5, GapKind::TwoPow).is_err());
        assert!(mq_gap_bounds(8, GapKind::ThreePow).is_err());
    }

    #[test]
    fn perturbation_examples() {
        let c = perturbation_constants(2, 0.5313).unwrap();
        assert!((c.c1 - 28.978).abs() < 0.01);
        assert!((c.c2 - 0.5313 / (2.0 * 4f64.exp() * 3f64.ln())).abs() < 1e-15);
        assert!((c.c2 - 0.004428).abs() < 1e-5);
        let c9 = perturbation_constants(2, 0.9).unwrap();
        assert_eq!(c9.n_threshold, (c9.c1 / 0.1).powf(1.0 / 1.8).ceil() as u64);
        assert!(perturbation_constants(2, 1.0).is_err());
    }

    #[test]
    fn initial_interval_examples() {
        assert!(initial_interval_end(2).unwrap().contains(0.5));
        assert!(initial_interval_end(4).unwrap().contains(0.25));
        assert!((initial_interval_end(3).unwrap().mid() - 0.315465).abs() < 1e-6);
    }

    #[test]
    fn all_reference_checks_pass_and_reevaluate() {
        for r in reference_checks().unwrap() {
            assert!(r.passed(), "{r}");
            let again = r.reevaluate().unwrap();
            assert!(r.value.contains_interval(again.value));
        }
    }

    proptest! {
        #[test]
        fn golden_bracket_is_ordered(n in 2u64..100_000) {
            let g = golden_bounds(n).unwrap();
            prop_assert!(g.s_minus <= g.s_plus);
            prop_assert!(g.s_plus - g.s_minus < 0.05);
        }
    }
}
