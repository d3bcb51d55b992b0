use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decimal::DecimalEnclosure;
use crate::error::{Error, Result};
use crate::interval::Interval;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// `value.lo > threshold`
    Above,
    /// `value.hi < threshold`
    Below,
    Inconclusive,
}

impl Verdict {
    pub fn of(value: Interval, threshold: f64) -> Self {
        if value.lo() > threshold {
            Verdict::Above
        } else if value.hi() < threshold {
            Verdict::Below
        } else {
            Verdict::Inconclusive
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Above => "above",
            Verdict::Below => "below",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "above" => Ok(Verdict::Above),
            "below" => Ok(Verdict::Below),
            "inconclusive" => Ok(Verdict::Inconclusive),
            other => Err(Error::Parse(format!("unknown verdict {other:?}"))),
        }
    }
}

/// A formula input: an integer or a real enclosure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Param {
    Int(u64),
    Real(Interval),
}

impl Param {
    pub fn int(self) -> Result<u64> {
        match self {
            Param::Int(n) => Ok(n),
            Param::Real(_) => Err(Error::Parse("expected an integer input".into())),
        }
    }

    pub fn real(self) -> Interval {
        match self {
            Param::Int(n) => Interval::from_u64(n),
            Param::Real(x) => x,
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Int(n) => write!(f, "{n}"),
            Param::Real(x) => write!(f, "{}", DecimalEnclosure::exact(*x)),
        }
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('[') {
            Ok(Param::Real(s.parse::<DecimalEnclosure>()?.to_interval()?))
        } else {
            s.parse().map(Param::Int).map_err(|_| Error::Parse(format!("bad input {s:?}")))
        }
    }
}

/// Value of a named closed-form expression compared against a threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub name: String,
    pub inputs: Vec<(String, Param)>,
    pub value: Interval,
    pub threshold: f64,
    /// The relation the check is meant to establish.
    pub expected: Verdict,
    pub verdict: Verdict,
}

impl BoundReport {
    pub fn new(name: &str, inputs: Vec<(&str, Param)>, value: Interval, threshold: f64, expected: Verdict) -> Self {
        BoundReport {
            name: name.to_string(),
            inputs: inputs.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            value,
            threshold,
            expected,
            verdict: Verdict::of(value, threshold),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == self.expected
    }

    pub fn input(&self, key: &str) -> Result<Param> {
        self.inputs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| Error::Parse(format!("report {} lacks input {key}", self.name)))
    }

    /// Recompute the value from the stored inputs.
    pub fn reevaluate(&self) -> Result<BoundReport> {
        let value = super::evaluate(self)?;
        Ok(BoundReport { value, verdict: Verdict::of(value, self.threshold), ..self.clone() })
    }

    /// Stable identifier, e.g. `gamma(q=6,n0=4,s=0.265)`.
    pub fn id(&self) -> String {
        let args: Vec<String> = self
            .inputs
            .iter()
            .map(|(k, v)| match v {
                Param::Int(n) => format!("{k}={n}"),
                Param::Real(x) if x.is_point() => format!("{k}={}", x.lo()),
                Param::Real(x) => format!("{k}=[{},{}]", x.lo(), x.hi()),
            })
            .collect();
        format!("{}({})", self.name, args.join(","))
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let relation = match self.expected {
            Verdict::Above => ">",
            Verdict::Below => "<",
            Verdict::Inconclusive => "?",
        };
        write!(
            f,
            "{} = {} {} {}: {}",
            self.id(),
            DecimalEnclosure::from_interval(self.value, 9),
            relation,
            self.threshold,
            if self.passed() { "ok" } else { "FAILED" }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_rules() {
        assert_eq!(Verdict::of(Interval::new(1.1, 1.2), 1.0), Verdict::Above);
        assert_eq!(Verdict::of(Interval::new(0.8, 0.9), 1.0), Verdict::Below);
        assert_eq!(Verdict::of(Interval::new(0.9, 1.1), 1.0), Verdict::Inconclusive);
        assert_eq!(Verdict::of(Interval::ONE, 1.0), Verdict::Inconclusive);
    }

    #[test]
    fn params_round_trip() {
        for p in
            [Param::Int(12), Param::Real(Interval::new(0.1, 0.30000000000000004)), Param::Real(Interval::point(0.265))]
        {
            assert_eq!(p.to_string().parse::<Param>().unwrap(), p);
        }
    }
}
