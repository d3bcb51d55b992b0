//! Digit alphabets: explicit finite sets and the named infinite families.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Named infinite families of digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Explicit,
    /// `{q, q^2, q^3, ...}`
    Powers {
        q: u32,
    },
    /// `{1, q, q^2, ...}`
    PowersStar {
        q: u32,
    },
    /// `{1, 2^q, 3^q, ...}`
    Monomials {
        q: u32,
    },
    /// `{a + b, a + 2b, ...}`
    Progression {
        a: u64,
        b: u64,
    },
    Primes,
}

/// Infimum of the exponents for which the digit series converges.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FinitenessParameter {
    pub sigma0: f64,
    pub exact: bool,
}

impl Family {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::Powers { q } | Family::PowersStar { q } if q < 2 => {
                Err(Error::Parameter(format!("power family needs q >= 2, got {q}")))
            }
            Family::Monomials { q } if q < 1 => Err(Error::Parameter("monomial family needs q >= 1".into())),
            Family::Progression { a, b } if a >= b => {
                Err(Error::Parameter(format!("progression needs 0 <= a < b, got a={a}, b={b}")))
            }
            _ => Ok(()),
        }
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self, Family::Explicit)
    }

    /// First `count` members in increasing order.
    pub fn first(&self, count: usize) -> Result<Vec<BigUint>> {
        self.validate()?;
        if count == 0 {
            return Err(Error::EmptyAlphabet);
        }
        Ok(match *self {
            Family::Explicit => return Err(Error::Unsupported("explicit alphabets have no enumeration".into())),
            Family::Powers { q } => (1..=count as u32).map(|n| BigUint::from(q).pow(n)).collect(),
            Family::PowersStar { q } => (0..count as u32).map(|n| BigUint::from(q).pow(n)).collect(),
            Family::Monomials { q } => (1..=count as u64).map(|n| BigUint::from(n).pow(q)).collect(),
            Family::Progression { a, b } => {
                (1..=count as u64).map(|n| BigUint::from(a) + BigUint::from(b) * BigUint::from(n)).collect()
            }
            Family::Primes => first_primes(count).into_iter().map(BigUint::from).collect(),
        })
    }

    /// The `count` smallest members strictly greater than `bound`.
    pub fn members_above(&self, bound: &BigUint, count: usize) -> Result<Vec<BigUint>> {
        self.validate()?;
        let mut out = Vec::with_capacity(count);
        if count == 0 {
            return Ok(out);
        }
        match *self {
            Family::Explicit => return Err(Error::Unsupported("explicit alphabets have no tail".into())),
            Family::Powers { .. } | Family::PowersStar { .. } => {
                let q = match *self {
                    Family::Powers { q } | Family::PowersStar { q } => q,
                    _ => unreachable!(),
                };
                let mut p = if matches!(self, Family::Powers { .. }) { BigUint::from(q) } else { BigUint::one() };
                while out.len() < count {
                    if &p > bound {
                        out.push(p.clone());
                    }
                    p *= q;
                }
            }
            Family::Monomials { q } => {
                let mut n = bound.nth_root(q);
                if n.is_zero() {
                    n = BigUint::one();
                }
                while out.len() < count {
                    let v = n.pow(q);
                    if &v > bound {
                        out.push(v);
                    }
                    n += 1u32;
                }
            }
            Family::Progression { a, b } => {
                let (a, b) = (BigUint::from(a), BigUint::from(b));
                let mut n = if bound > &a { (bound - &a) / &b } else { BigUint::zero() };
                while out.len() < count {
                    let v = &a + &b * &n;
                    if !n.is_zero() && &v > bound {
                        out.push(v);
                    }
                    n += 1u32;
                }
            }
            Family::Primes => {
                let lo = bound.to_u64().ok_or_else(|| Error::Unsupported("prime enumeration beyond u64".into()))?;
                let mut hi = lo.saturating_mul(2).max(lo + 64);
                loop {
                    let found: Vec<u64> = primes_in(lo + 1, hi).into_iter().take(count).collect();
                    if found.len() == count {
                        out.extend(found.into_iter().map(BigUint::from));
                        break;
                    }
                    hi = hi.saturating_mul(2);
                }
            }
        }
        Ok(out)
    }

    pub fn contains(&self, n: &BigUint) -> bool {
        if n.is_zero() {
            return false;
        }
        match *self {
            Family::Explicit => false,
            Family::Powers { q } => n > &BigUint::one() && is_power_of(n, q),
            Family::PowersStar { q } => n.is_one() || is_power_of(n, q),
            Family::Monomials { q } => n.nth_root(q).pow(q) == *n,
            Family::Progression { a, b } => {
                let a = BigUint::from(a);
                n >= &(&a + BigUint::from(b)) && ((n - &a) % BigUint::from(b)).is_zero()
            }
            Family::Primes => n.to_u64().is_some_and(is_prime),
        }
    }

    pub fn finiteness(&self) -> FinitenessParameter {
        let sigma0 = match *self {
            Family::Explicit | Family::Powers { .. } | Family::PowersStar { .. } => 0.0,
            Family::Monomials { q } => 1.0 / (2.0 * q as f64),
            Family::Progression { .. } | Family::Primes => 0.5,
        };
        FinitenessParameter { sigma0, exact: true }
    }

    fn head(&self) -> (&'static str, String) {
        match *self {
            Family::Explicit => ("explicit", String::new()),
            Family::Powers { q } => ("P_q", format!("q={q}")),
            Family::PowersStar { q } => ("P_q_star", format!("q={q}")),
            Family::Monomials { q } => ("M_q", format!("q={q}")),
            Family::Progression { a, b } => ("progression", format!("a={a},b={b}")),
            Family::Primes => ("primes", String::new()),
        }
    }

    fn with_params(&self, extra: Option<usize>) -> String {
        let (name, params) = self.head();
        let mut parts: Vec<String> = Vec::new();
        if !params.is_empty() {
            parts.push(params);
        }
        if let Some(c) = extra {
            parts.push(format!("count={c}"));
        }
        format!("{name}({})", parts.join(","))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.with_params(None))
    }
}

fn is_power_of(n: &BigUint, q: u32) -> bool {
    let mut m = n.clone();
    if m.is_one() {
        return true;
    }
    let q = BigUint::from(q);
    while (&m % &q).is_zero() {
        m /= &q;
    }
    m.is_one()
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes in `[lo, hi)` by a segmented sieve.
fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi <= lo {
        return Vec::new();
    }
    let root = (hi as f64).sqrt() as u64 + 1;
    let small = sieve(root + 1);
    let mut mark = vec![true; (hi - lo) as usize];
    for &p in &small {
        let start = (lo.div_ceil(p) * p).max(p * p);
        let mut m = start;
        while m < hi {
            mark[(m - lo) as usize] = false;
            m += p;
        }
    }
    (lo..hi).zip(mark).filter(|&(n, ok)| ok && n >= 2).map(|(n, _)| n).collect()
}

fn sieve(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut is = vec![true; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if is[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                is[j] = false;
                j += i;
            }
        }
    }
    out
}

fn first_primes(count: usize) -> Vec<u64> {
    let n = count.max(6) as f64;
    let bound = (n * (n.ln() + n.ln().ln())) as u64 + 16;
    let mut p = sieve(bound);
    p.truncate(count);
    p
}

/// A digit set: a sorted finite snapshot, optionally continued by every member
/// of its family above the snapshot maximum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    elements: Vec<BigUint>,
    family: Family,
    tail: bool,
}

/// Outcome of the submultiplicativity check `a_n a_m >= a_{n+m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubmultiplicativeReport {
    pub max_index: usize,
    pub violations: Vec<(usize, usize)>,
    /// True when the family is only checked on a finite range, not proved.
    pub empirical: bool,
}

impl SubmultiplicativeReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Alphabet {
    /// Canonicalising constructor for a finite set.
    pub fn explicit<I, T>(elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<BigUint>,
    {
        let mut v: Vec<BigUint> = elements.into_iter().map(Into::into).collect();
        if v.iter().any(|n| n.is_zero()) {
            return Err(Error::Parameter("digits must be >= 1".into()));
        }
        v.sort();
        v.dedup();
        if v.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        Ok(Alphabet { elements: v, family: Family::Explicit, tail: false })
    }

    pub fn make_family(family: Family, count: usize) -> Result<Self> {
        let elements = family.first(count)?;
        Ok(Alphabet { elements, family, tail: false })
    }

    /// Finite elements of `family` plus the tail of `family` above their maximum.
    pub fn with_family_tail(elements: Vec<BigUint>, family: Family) -> Result<Self> {
        family.validate()?;
        if family.is_explicit() {
            return Err(Error::Unsupported("explicit alphabets have no tail".into()));
        }
        let mut a = Alphabet::explicit(elements)?;
        if let Some(bad) = a.elements.iter().find(|n| !family.contains(n)) {
            return Err(Error::Containment(bad.to_string(), family.to_string()));
        }
        a.family = family;
        a.tail = true;
        Ok(a)
    }

    pub fn elements(&self) -> &[BigUint] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Minimum digit.
    pub fn gamma(&self) -> &BigUint {
        &self.elements[0]
    }

    pub fn max(&self) -> &BigUint {
        self.elements.last().expect("alphabets are nonempty")
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn has_tail(&self) -> bool {
        self.tail
    }

    pub fn is_singleton(&self) -> bool {
        !self.tail && self.elements.len() == 1
    }

    pub fn finiteness(&self) -> FinitenessParameter {
        if self.tail {
            self.family.finiteness()
        } else {
            FinitenessParameter { sigma0: 0.0, exact: true }
        }
    }

    /// Same snapshot continued by the family tail.
    pub fn with_tail(&self) -> Result<Self> {
        if self.family.is_explicit() {
            return Err(Error::Unsupported("explicit alphabets have no tail".into()));
        }
        Ok(Alphabet { tail: true, ..self.clone() })
    }

    /// The finite snapshot alone.
    pub fn truncation(&self) -> Self {
        Alphabet { tail: false, ..self.clone() }
    }

    /// Snapshot enlarged by the next `extra` family members; the tail (if any)
    /// shrinks accordingly so the represented set is unchanged when `tail` is set.
    pub fn extend(&self, extra: usize) -> Result<Self> {
        if extra == 0 {
            return Ok(self.clone());
        }
        let more = self.family.members_above(self.max(), extra)?;
        let mut elements = self.elements.clone();
        elements.extend(more);
        Ok(Alphabet { elements, ..self.clone() })
    }

    /// Whether the snapshot is exactly the first `len` family members.
    pub fn is_family_prefix(&self) -> bool {
        !self.family.is_explicit() && self.family.first(self.elements.len()).ok().as_deref() == Some(&self.elements[..])
    }

    pub fn contains(&self, n: &BigUint) -> bool {
        self.elements.binary_search(n).is_ok() || (self.tail && n > self.max() && self.family.contains(n))
    }

    pub fn with_element(&self, n: BigUint) -> Result<Self> {
        let mut elements = self.elements.clone();
        elements.push(n);
        let mut a = Alphabet::explicit(elements)?;
        a.family = self.family;
        a.tail = self.tail;
        if a.tail && a.max() != self.max() {
            return Err(Error::Unsupported("cannot add a digit beyond a tail".into()));
        }
        Ok(a)
    }

    pub fn without_element(&self, n: &BigUint) -> Result<Self> {
        let elements: Vec<BigUint> = self.elements.iter().filter(|&m| m != n).cloned().collect();
        if elements.len() == self.elements.len() {
            return Err(Error::Containment(n.to_string(), self.to_string()));
        }
        if elements.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        Ok(Alphabet { elements, ..self.clone() })
    }

    /// Checks `a_n a_m >= a_{n+m}` for `1 <= n <= m`, `m >= 2`, `n + m <= max_index`.
    pub fn check_submultiplicative(&self, max_index: usize) -> Result<SubmultiplicativeReport> {
        if self.elements.len() < max_index {
            return Err(Error::Parameter(format!("need {max_index} enumerated digits, have {}", self.elements.len())));
        }
        if self.gamma().is_one() {
            return Err(Error::Inapplicable("the smallest digit must be at least 2".into()));
        }
        let a = |i: usize| &self.elements[i - 1];
        let mut violations = Vec::new();
        for m in 2..max_index {
            for n in 1..=m.min(max_index - m) {
                if a(n) * a(m) < *a(n + m) {
                    violations.push((n, m));
                }
            }
        }
        violations.sort();
        Ok(SubmultiplicativeReport { max_index, violations, empirical: matches!(self.family, Family::Primes) })
    }

    /// `(f \ max f)` joined with the first `tail_count` members of `parent`
    /// above `max f`, continued by the rest of `parent`.
    pub fn f_sharp(f: &Alphabet, parent: Family, tail_count: usize) -> Result<Self> {
        parent.validate()?;
        if tail_count == 0 {
            return Err(Error::Parameter("tail_count must be positive".into()));
        }
        if let Some(bad) = f.elements.iter().find(|n| !parent.contains(n)) {
            return Err(Error::Containment(bad.to_string(), parent.to_string()));
        }
        let top = f.max().clone();
        let mut elements: Vec<BigUint> = f.elements[..f.len() - 1].to_vec();
        elements.extend(parent.members_above(&top, tail_count)?);
        Ok(Alphabet { elements, family: parent, tail: true })
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.elements.iter().map(|n| n.to_f64().unwrap_or(f64::INFINITY)).collect()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_family_prefix() {
            write!(f, "family:{}", self.family.with_params(Some(self.elements.len())))?;
            if self.tail {
                f.write_str("+tail")?;
            }
            return Ok(());
        }
        let list: Vec<String> = self.elements.iter().map(|n| n.to_string()).collect();
        write!(f, "explicit:[{}]", list.join(","))?;
        if self.tail {
            write!(f, "+tail:{}", self.family)?;
        }
        Ok(())
    }
}

fn parse_u64(s: &str) -> Result<u64> {
    s.trim().parse().map_err(|_| Error::Parse(format!("expected an integer, got {s:?}")))
}

/// `n`, `b^e`, `x^q..y^q` or `x..y`.
fn parse_token(tok: &str, out: &mut Vec<BigUint>) -> Result<()> {
    let tok = tok.trim();
    if let Some((a, b)) = tok.split_once("..") {
        let (x, qx) = a.split_once('^').map_or((a, None), |(x, q)| (x, Some(q)));
        let (y, qy) = b.split_once('^').map_or((b, None), |(y, q)| (y, Some(q)));
        if qx.map(str::trim) != qy.map(str::trim) {
            return Err(Error::Parse(format!("mismatched exponents in {tok:?}")));
        }
        let q = qx.map(parse_u64).transpose()?.unwrap_or(1) as u32;
        let (x, y) = (parse_u64(x)?, parse_u64(y)?);
        if x > y || y - x > 1_000_000 {
            return Err(Error::Parse(format!("bad range {tok:?}")));
        }
        out.extend((x..=y).map(|n| BigUint::from(n).pow(q)));
        return Ok(());
    }
    if let Some((b, e)) = tok.split_once('^') {
        out.push(BigUint::from(parse_u64(b)?).pow(parse_u64(e)? as u32));
        return Ok(());
    }
    let n: BigUint = tok.parse().map_err(|_| Error::Parse(format!("expected an integer, got {tok:?}")))?;
    out.push(n);
    Ok(())
}

/// `NAME(k=v,...)` into a family and an optional `count`.
fn parse_family(s: &str) -> Result<(Family, Option<usize>)> {
    let s = s.trim();
    let (name, args) = match s.split_once('(') {
        Some((n, rest)) => {
            (n.trim(), rest.strip_suffix(')').ok_or_else(|| Error::Parse(format!("unclosed family {s:?}")))?)
        }
        None => (s, ""),
    };
    let mut q = None;
    let mut a = None;
    let mut b = None;
    let mut count = None;
    for kv in args.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::Parse(format!("bad parameter {kv:?}")))?;
        let v = parse_u64(v)?;
        match k.trim() {
            "q" => q = Some(v as u32),
            "a" => a = Some(v),
            "b" => b = Some(v),
            "count" => count = Some(v as usize),
            other => return Err(Error::Parse(format!("unknown parameter {other:?}"))),
        }
    }
    let need_q = || q.ok_or_else(|| Error::Parse(format!("family {name} needs q")));
    let family = match name {
        "P_q" => Family::Powers { q: need_q()? },
        "P_q_star" => Family::PowersStar { q: need_q()? },
        "M_q" => Family::Monomials { q: need_q()? },
        "progression" => Family::Progression {
            a: a.ok_or_else(|| Error::Parse("progression needs a".into()))?,
            b: b.ok_or_else(|| Error::Parse("progression needs b".into()))?,
        },
        "primes" => Family::Primes,
        other => return Err(Error::Parse(format!("unknown family {other:?}"))),
    };
    family.validate()?;
    Ok((family, count))
}

impl FromStr for Family {
    type Err = Error;

    /// `P_q(q=2)`, `P_q_star(q=3)`, `M_q(q=5)`, `progression(a=1,b=3)` or `primes`.
    fn from_str(s: &str) -> Result<Self> {
        match parse_family(s)? {
            (family, None) => Ok(family),
            (_, Some(_)) => Err(Error::Parse("a family name takes no count".into())),
        }
    }
}

impl FromStr for Alphabet {
    type Err = Error;

    /// `explicit:[1,2,4]`, `explicit:[1,9,27]+tail:P_q_star(q=3)`,
    /// `family:M_q(q=5,count=40)` or `family:M_q(q=5,count=40)+tail`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("explicit:") {
            let (list, tail) = match rest.split_once("+tail:") {
                Some((l, t)) => (l, Some(t)),
                None => (rest, None),
            };
            let inner = list
                .trim()
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("expected [..] in {s:?}")))?;
            let mut elements = Vec::new();
            for tok in inner.split(',').filter(|t| !t.trim().is_empty()) {
                parse_token(tok, &mut elements)?;
            }
            return match tail {
                None => Alphabet::explicit(elements),
                Some(t) => {
                    let (family, count) = parse_family(t)?;
                    if count.is_some() {
                        return Err(Error::Parse("tail family takes no count".into()));
                    }
                    Alphabet::with_family_tail(elements, family)
                }
            };
        }
        if let Some(rest) = s.strip_prefix("family:") {
            let (spec, tail) = match rest.strip_suffix("+tail") {
                Some(r) => (r, true),
                None => (rest, false),
            };
            let (family, count) = parse_family(spec)?;
            let count = count.ok_or_else(|| Error::Parse(format!("family needs count in {s:?}")))?;
            let a = Alphabet::make_family(family, count)?;
            return if tail { a.with_tail() } else { Ok(a) };
        }
        Err(Error::Parse(format!("alphabet must start with explicit: or family:, got {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(a: &Alphabet) -> Vec<u64> {
        a.elements().iter().map(|n| n.to_u64().unwrap()).collect()
    }

    #[test]
    fn family_snapshots() {
        let p2 = Alphabet::make_family(Family::Powers { q: 2 }, 4).unwrap();
        assert_eq!(ints(&p2), [2, 4, 8, 16]);
        let p3 = Alphabet::make_family(Family::PowersStar { q: 3 }, 4).unwrap();
        assert_eq!(ints(&p3), [1, 3, 9, 27]);
        let m5 = Alphabet::make_family(Family::Monomials { q: 5 }, 3).unwrap();
        assert_eq!(ints(&m5), [1, 32, 243]);
        let pr = Alphabet::make_family(Family::Primes, 6).unwrap();
        assert_eq!(ints(&pr), [2, 3, 5, 7, 11, 13]);
        let ap = Alphabet::make_family(Family::Progression { a: 1, b: 3 }, 3).unwrap();
        assert_eq!(ints(&ap), [4, 7, 10]);
    }

    #[test]
    fn family_errors() {
        assert!(matches!(Alphabet::make_family(Family::Powers { q: 1 }, 3), Err(Error::Parameter(_))));
        assert!(matches!(Alphabet::make_family(Family::Progression { a: 3, b: 3 }, 3), Err(Error::Parameter(_))));
        assert_eq!(Alphabet::make_family(Family::Primes, 0), Err(Error::EmptyAlphabet));
    }

    #[test]
    fn finiteness_parameters() {
        let m = Family::Monomials { q: 4 }.finiteness();
        assert_eq!(m.sigma0, 0.125);
        assert_eq!(Family::PowersStar { q: 2 }.finiteness().sigma0, 0.0);
        assert_eq!(Family::Primes.finiteness().sigma0, 0.5);
        let e = Alphabet::explicit([1u32, 2]).unwrap();
        assert_eq!(e.finiteness().sigma0, 0.0);
    }

    #[test]
    fn submultiplicative_checks() {
        let p2 = Alphabet::make_family(Family::Powers { q: 2 }, 20).unwrap();
        assert!(p2.check_submultiplicative(20).unwrap().passed());
        let primes = Alphabet::make_family(Family::Primes, 50).unwrap();
        let r = primes.check_submultiplicative(50).unwrap();
        assert!(r.passed() && r.empirical);
        let bad = Alphabet::explicit([2u32, 3, 100, 101]).unwrap();
        let r = bad.check_submultiplicative(3).unwrap();
        assert_eq!(r.violations, vec![(1, 2)]);
        let star = Alphabet::make_family(Family::PowersStar { q: 2 }, 5).unwrap();
        assert!(matches!(star.check_submultiplicative(5), Err(Error::Inapplicable(_))));
    }

    #[test]
    fn f_sharp_examples() {
        let f = Alphabet::explicit([1u32, 3]).unwrap();
        let g = Alphabet::f_sharp(&f, Family::PowersStar { q: 3 }, 3).unwrap();
        assert_eq!(ints(&g), [1, 9, 27, 81]);
        assert!(g.has_tail());
        let f = Alphabet::explicit([1u32, 2, 4]).unwrap();
        let g = Alphabet::f_sharp(&f, Family::PowersStar { q: 2 }, 2).unwrap();
        assert_eq!(ints(&g), [1, 2, 8, 16]);
        let f = Alphabet::explicit([1u32]).unwrap();
        let g = Alphabet::f_sharp(&f, Family::Monomials { q: 2 }, 2).unwrap();
        assert_eq!(ints(&g), [4, 9]);
        let f = Alphabet::explicit([1u32, 5]).unwrap();
        assert!(matches!(Alphabet::f_sharp(&f, Family::PowersStar { q: 2 }, 2), Err(Error::Containment(..))));
    }

    #[test]
    fn text_format_round_trips() {
        for s in [
            "explicit:[1,2,4]",
            "family:P_q(q=2,count=12)",
            "family:M_q(q=5,count=40)+tail",
            "explicit:[1,9,27,81]+tail:P_q_star(q=3)",
            "family:progression(a=1,b=3,count=5)",
            "family:primes(count=10)",
        ] {
            let a: Alphabet = s.parse().unwrap();
            assert_eq!(a.to_string(), s);
        }
        let a: Alphabet = "explicit:[1,2^10,3^10]".parse().unwrap();
        assert_eq!(ints(&a), [1, 1024, 59049]);
        let a: Alphabet = "explicit:[1,3^5..100^5]".parse().unwrap();
        assert_eq!(a.len(), 99);
        assert_eq!(a.max().to_u64(), Some(10_000_000_000));
        assert!("explicit:[0,1]".parse::<Alphabet>().is_err());
        assert!("family:P_q(q=2)".parse::<Alphabet>().is_err());
        assert!("nonsense".parse::<Alphabet>().is_err());
    }

    #[test]
    fn members_above_skips_snapshot() {
        let m = Family::Monomials { q: 3 };
        let v = m.members_above(&BigUint::from(27u32), 2).unwrap();
        assert_eq!(v, vec![BigUint::from(64u32), BigUint::from(125u32)]);
        let p = Family::Primes.members_above(&BigUint::from(13u32), 3).unwrap();
        assert_eq!(p, vec![BigUint::from(17u32), BigUint::from(19u32), BigUint::from(23u32)]);
        let ap = Family::Progression { a: 1, b: 3 };
        let v = ap.members_above(&BigUint::from(7u32), 2).unwrap();
        assert_eq!(v, vec![BigUint::from(10u32), BigUint::from(13u32)]);
    }

    fn family_strategy() -> impl Strategy<Value = Family> {
        prop_oneof![
            (2u32..6).prop_map(|q| Family::Powers { q }),
            (2u32..6).prop_map(|q| Family::PowersStar { q }),
            (1u32..6).prop_map(|q| Family::Monomials { q }),
            (0u64..5, 1u64..6).prop_map(|(a, d)| Family::Progression { a, b: a + d }),
            Just(Family::Primes),
        ]
    }

    proptest! {
        #[test]
        fn canonicalisation_is_idempotent(v in proptest::collection::vec(1u64..500, 1..20)) {
            let a = Alphabet::explicit(v.clone()).unwrap();
            let mut sorted = v;
            sorted.sort();
            sorted.dedup();
            let b = Alphabet::explicit(sorted).unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(a.gamma(), &a.elements()[0]);
            prop_assert!(a.elements().windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn snapshots_are_prefixes(f in family_strategy(), m in 1usize..25) {
            let a = f.first(m).unwrap();
            let b = f.first(m + 1).unwrap();
            prop_assert_eq!(&a[..], &b[..m]);
            prop_assert!(a.iter().all(|n| f.contains(n)));
            let next = f.members_above(a.last().unwrap(), 1).unwrap();
            prop_assert_eq!(&next[0], &b[m]);
        }

        #[test]
        fn f_sharp_drops_only_the_maximum(q in 2u32..5, k in 1usize..6, t in 1usize..4) {
            let parent = Family::PowersStar { q };
            let f = Alphabet::make_family(parent, k + 1).unwrap();
            let g = Alphabet::f_sharp(&f, parent, t).unwrap();
            prop_assert!(!g.elements().contains(f.max()));
            for n in &f.elements()[..f.len() - 1] {
                prop_assert!(g.elements().contains(n));
            }
        }
    }
}
