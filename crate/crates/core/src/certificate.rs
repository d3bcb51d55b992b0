//! Line-based certificate format with a JSON mirror, and re-verification.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundReport, Param, Verdict};
use crate::decimal::DecimalEnclosure;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::solver::SolverConfig;
use crate::statements::{self, Statement};

pub const SCHEMA_VERSION: u32 = 1;
const HEADER: &str = "cfdim certificate";
/// Slack allowed when a recomputed enclosure is compared against a stored one.
pub const CONTAINMENT_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertVerdict {
    Verified,
    Inconclusive,
    Failed,
}

impl CertVerdict {
    /// 0 verified, 2 inconclusive, 1 failed.
    pub fn exit_code(self) -> i32 {
        match self {
            CertVerdict::Verified => 0,
            CertVerdict::Inconclusive => 2,
            CertVerdict::Failed => 1,
        }
    }
}

impl fmt::Display for CertVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertVerdict::Verified => "verified",
            CertVerdict::Inconclusive => "inconclusive",
            CertVerdict::Failed => "failed",
        })
    }
}

impl FromStr for CertVerdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "verified" => Ok(CertVerdict::Verified),
            "inconclusive" => Ok(CertVerdict::Inconclusive),
            "failed" => Ok(CertVerdict::Failed),
            other => Err(Error::Parse(format!("unknown verdict {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimStatus {
    Holds,
    Fails,
    Unresolved,
}

impl fmt::Display for ClaimStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClaimStatus::Holds => "holds",
            ClaimStatus::Fails => "fails",
            ClaimStatus::Unresolved => "unresolved",
        })
    }
}

impl FromStr for ClaimStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "holds" => Ok(ClaimStatus::Holds),
            "fails" => Ok(ClaimStatus::Fails),
            "unresolved" => Ok(ClaimStatus::Unresolved),
            other => Err(Error::Parse(format!("unknown claim status {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Entry {
    Enclosure { name: String, alphabet: String, enclosure: Interval, truncation: usize, warning: bool },
    Bound(BoundReport),
    Claim { name: String, status: ClaimStatus },
}

impl Entry {
    pub fn name(&self) -> &str {
        match self {
            Entry::Enclosure { name, .. } | Entry::Claim { name, .. } => name,
            Entry::Bound(r) => &r.name,
        }
    }
}

fn exact(iv: Interval) -> String {
    DecimalEnclosure::exact(iv).to_string()
}

fn parse_interval(s: &str) -> Result<Interval> {
    s.parse::<DecimalEnclosure>()?.to_interval()
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Enclosure { name, alphabet, enclosure, truncation, warning } => write!(
                f,
                "enclosure {name} | {} | alphabet={alphabet} | truncation={truncation} | warning={warning}",
                exact(*enclosure)
            ),
            Entry::Bound(r) => {
                let inputs: Vec<String> = r.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
                write!(
                    f,
                    "bound {} | {} | inputs={} | threshold={} | expected={} | verdict={}",
                    r.name,
                    exact(r.value),
                    inputs.join("; "),
                    r.threshold,
                    r.expected,
                    r.verdict
                )
            }
            Entry::Claim { name, status } => write!(f, "claim {name} | {status}"),
        }
    }
}

fn field<'a>(part: Option<&'a str>, key: &str) -> Result<&'a str> {
    part.and_then(|p| p.trim().strip_prefix(key)?.strip_prefix('='))
        .ok_or_else(|| Error::Parse(format!("expected {key}=...")))
}

impl FromStr for Entry {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let (kind, rest) = line.split_once(' ').ok_or_else(|| Error::Parse(format!("bad entry {line:?}")))?;
        let mut parts = rest.split(" | ");
        let name = parts.next().unwrap_or("").trim().to_string();
        let bad = |what: &str| Error::Parse(format!("bad {what} in {line:?}"));
        match kind {
            "enclosure" => {
                let enclosure = parse_interval(parts.next().ok_or_else(|| bad("enclosure"))?)?;
                let alphabet = field(parts.next(), "alphabet")?.to_string();
                let truncation = field(parts.next(), "truncation")?.parse().map_err(|_| bad("truncation"))?;
                let warning = field(parts.next(), "warning")?.parse().map_err(|_| bad("warning"))?;
                Ok(Entry::Enclosure { name, alphabet, enclosure, truncation, warning })
            }
            "bound" => {
                let value = parse_interval(parts.next().ok_or_else(|| bad("value"))?)?;
                let inputs_text = field(parts.next(), "inputs")?;
                let mut inputs = Vec::new();
                for kv in inputs_text.split("; ").filter(|t| !t.trim().is_empty()) {
                    let (k, v) = kv.split_once('=').ok_or_else(|| bad("input"))?;
                    inputs.push((k.trim().to_string(), v.parse::<Param>()?));
                }
                let threshold = field(parts.next(), "threshold")?.parse().map_err(|_| bad("threshold"))?;
                let expected: Verdict = field(parts.next(), "expected")?.parse()?;
                let verdict: Verdict = field(parts.next(), "verdict")?.parse()?;
                Ok(Entry::Bound(BoundReport { name, inputs, value, threshold, expected, verdict }))
            }
            "claim" => {
                let status = parts.next().ok_or_else(|| bad("status"))?.parse()?;
                Ok(Entry::Claim { name, status })
            }
            other => Err(Error::Parse(format!("unknown entry kind {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub schema_version: u32,
    pub statement: Statement,
    pub config: SolverConfig,
    pub results: Vec<Entry>,
    pub verdict: CertVerdict,
    /// Wall-clock seconds; excluded from the body.
    pub timings: f64,
}

/// Verdict implied by the claims and bound reports.
pub fn derive_verdict(results: &[Entry]) -> CertVerdict {
    let mut verdict = CertVerdict::Verified;
    for e in results {
        let v = match e {
            Entry::Claim { status: ClaimStatus::Fails, .. } => CertVerdict::Failed,
            Entry::Claim { status: ClaimStatus::Unresolved, .. } => CertVerdict::Inconclusive,
            Entry::Bound(r) if r.verdict == Verdict::Inconclusive => CertVerdict::Inconclusive,
            Entry::Bound(r) if !r.passed() => CertVerdict::Failed,
            _ => CertVerdict::Verified,
        };
        verdict = match (verdict, v) {
            (CertVerdict::Failed, _) | (_, CertVerdict::Failed) => CertVerdict::Failed,
            (CertVerdict::Inconclusive, _) | (_, CertVerdict::Inconclusive) => CertVerdict::Inconclusive,
            _ => CertVerdict::Verified,
        };
    }
    verdict
}

impl Certificate {
    pub fn new(statement: Statement, config: SolverConfig, results: Vec<Entry>, timings: f64) -> Self {
        let verdict = derive_verdict(&results);
        Certificate { schema_version: SCHEMA_VERSION, statement, config, results, verdict, timings }
    }

    /// Everything except the timings line; identical for identical inputs.
    pub fn body(&self) -> String {
        let mut out = String::new();
        out.push_str(HEADER);
        out.push('\n');
        out.push_str(&format!("schema_version: {}\n", self.schema_version));
        out.push_str(&format!("statement: {}\n", self.statement));
        out.push_str(&format!("config: {}\n", self.config.canonical()));
        for e in &self.results {
            out.push_str(&format!("{e}\n"));
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out
    }

    pub fn to_text(&self) -> String {
        format!("{}timings: {:.3}\n", self.body(), self.timings)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some(HEADER) {
            return Err(Error::Parse("missing certificate header".into()));
        }
        let mut value = |key: &str| -> Result<String> {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing {key}")))?;
            line.strip_prefix(key)
                .and_then(|r| r.strip_prefix(": "))
                .map(str::to_string)
                .ok_or_else(|| Error::Parse(format!("expected {key}: ..., got {line:?}")))
        };
        let found: u32 = value("schema_version")?.parse().map_err(|_| Error::Parse("bad schema_version".into()))?;
        if found != SCHEMA_VERSION {
            return Err(Error::Schema { found, expected: SCHEMA_VERSION });
        }
        let statement: Statement = value("statement")?.parse()?;
        let config = SolverConfig::from_canonical(&value("config")?)?;
        let mut results = Vec::new();
        let mut verdict = None;
        let mut timings = None;
        for line in lines {
            if let Some(v) = line.strip_prefix("verdict: ") {
                verdict = Some(v.parse()?);
            } else if let Some(t) = line.strip_prefix("timings: ") {
                timings = Some(t.trim().parse().map_err(|_| Error::Parse("bad timings".into()))?);
            } else if !line.trim().is_empty() {
                if verdict.is_some() {
                    return Err(Error::Parse(format!("entry after verdict: {line:?}")));
                }
                results.push(line.parse()?);
            }
        }
        Ok(Certificate {
            schema_version: found,
            statement,
            config,
            results,
            verdict: verdict.ok_or_else(|| Error::Parse("missing verdict".into()))?,
            timings: timings.unwrap_or(0.0),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let json = JsonCertificate {
            schema_version: self.schema_version,
            statement: self.statement.id.clone(),
            params: self.statement.params.clone(),
            config: self.config.clone(),
            results: self.results.iter().map(JsonEntry::from).collect(),
            verdict: self.verdict,
            timings: self.timings,
        };
        serde_json::to_value(json).expect("certificate serialises")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let j: JsonCertificate = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        if j.schema_version != SCHEMA_VERSION {
            return Err(Error::Schema { found: j.schema_version, expected: SCHEMA_VERSION });
        }
        let params: Vec<(&str, String)> = j.params.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
        Ok(Certificate {
            schema_version: j.schema_version,
            statement: Statement::new(&j.statement, &params)?,
            config: j.config,
            results: j.results.into_iter().map(Entry::try_from).collect::<Result<_>>()?,
            verdict: j.verdict,
            timings: j.timings,
        })
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Serialize, Deserialize)]
struct JsonCertificate {
    schema_version: u32,
    statement: String,
    params: std::collections::BTreeMap<String, String>,
    config: SolverConfig,
    results: Vec<JsonEntry>,
    verdict: CertVerdict,
    timings: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum JsonEntry {
    Enclosure {
        name: String,
        alphabet: String,
        enclosure: DecimalEnclosure,
        truncation: usize,
        warning: bool,
    },
    Bound {
        name: String,
        inputs: Vec<(String, String)>,
        value: DecimalEnclosure,
        threshold: f64,
        expected: Verdict,
        verdict: Verdict,
    },
    Claim {
        name: String,
        status: ClaimStatus,
    },
}

impl From<&Entry> for JsonEntry {
    fn from(e: &Entry) -> Self {
        match e {
            Entry::Enclosure { name, alphabet, enclosure, truncation, warning } => JsonEntry::Enclosure {
                name: name.clone(),
                alphabet: alphabet.clone(),
                enclosure: DecimalEnclosure::exact(*enclosure),
                truncation: *truncation,
                warning: *warning,
            },
            Entry::Bound(r) => JsonEntry::Bound {
                name: r.name.clone(),
                inputs: r.inputs.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
                value: DecimalEnclosure::exact(r.value),
                threshold: r.threshold,
                expected: r.expected,
                verdict: r.verdict,
            },
            Entry::Claim { name, status } => JsonEntry::Claim { name: name.clone(), status: *status },
        }
    }
}

impl TryFrom<JsonEntry> for Entry {
    type Error = Error;

    fn try_from(e: JsonEntry) -> Result<Self> {
        Ok(match e {
            JsonEntry::Enclosure { name, alphabet, enclosure, truncation, warning } => {
                Entry::Enclosure { name, alphabet, enclosure: enclosure.to_interval()?, truncation, warning }
            }
            JsonEntry::Bound { name, inputs, value, threshold, expected, verdict } => Entry::Bound(BoundReport {
                name,
                inputs: inputs.into_iter().map(|(k, v)| Ok((k, v.parse()?))).collect::<Result<_>>()?,
                value: value.to_interval()?,
                threshold,
                expected,
                verdict,
            }),
            JsonEntry::Claim { name, status } => Entry::Claim { name, status },
        })
    }
}

/// Outcome of recomputing a certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct Verification {
    pub verdict: CertVerdict,
    /// Human-readable mismatches between stored and recomputed results.
    pub diffs: Vec<String>,
    pub recomputed: Certificate,
}

fn compare_entry(stored: &Entry, fresh: &Entry, exact_match: bool) -> Option<String> {
    match (stored, fresh) {
        (
            Entry::Enclosure { name, alphabet: a1, enclosure: e1, .. },
            Entry::Enclosure { alphabet: a2, enclosure: e2, .. },
        ) => {
            if a1 != a2 {
                return Some(format!("{name}: alphabet {a1} vs {a2}"));
            }
            let ok = if exact_match { stored == fresh } else { e1.contains_with_slack(*e2, CONTAINMENT_SLACK) };
            (!ok).then(|| format!("{name}: stored {} recomputed {}", exact(*e1), exact(*e2)))
        }
        (Entry::Bound(r1), Entry::Bound(r2)) => {
            if r1.name != r2.name {
                return Some(format!("bound {} vs {}", r1.name, r2.name));
            }
            let ok = if exact_match { r1 == r2 } else { r1.verdict == r2.verdict && r1.expected == r2.expected };
            (!ok).then(|| format!("{}: stored {} recomputed {}", r1.id(), exact(r1.value), exact(r2.value)))
        }
        (Entry::Claim { name: n1, status: s1 }, Entry::Claim { name: n2, status: s2 }) => {
            (n1 != n2 || s1 != s2).then(|| format!("claim {n1}: stored {s1} recomputed {n2} {s2}"))
        }
        _ => Some(format!("entry kinds differ at {}", stored.name())),
    }
}

/// Recompute `cert` from its statement, at its own config or at `config`.
/// At the stored config results must match exactly; at another config each
/// recomputed enclosure must lie inside the stored one.
pub fn verify(cert: &Certificate, config: Option<&SolverConfig>) -> Result<Verification> {
    let cfg = config.cloned().unwrap_or_else(|| cert.config.clone());
    let exact_match = cfg.canonical() == cert.config.canonical();
    let recomputed = statements::run(&cert.statement, &cfg)?;
    let mut diffs = Vec::new();
    if cert.results.len() != recomputed.results.len() {
        diffs.push(format!("{} stored results, {} recomputed", cert.results.len(), recomputed.results.len()));
    }
    for (s, f) in cert.results.iter().zip(&recomputed.results) {
        diffs.extend(compare_entry(s, f, exact_match));
    }
    let implied = derive_verdict(&cert.results);
    if cert.verdict != implied {
        diffs.push(format!("stored verdict {} but results imply {implied}", cert.verdict));
    }
    if cert.verdict != recomputed.verdict {
        diffs.push(format!("verdict: stored {} recomputed {}", cert.verdict, recomputed.verdict));
    }
    let verdict = if diffs.is_empty() { recomputed.verdict } else { CertVerdict::Failed };
    Ok(Verification { verdict, diffs, recomputed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gap_certificate() -> Certificate {
        statements::run(&"pstar-gap q=3 k=1".parse().unwrap(), &SolverConfig::default()).unwrap()
    }

    #[test]
    fn text_round_trip_is_exact() {
        let c = gap_certificate();
        assert_eq!(c.verdict, CertVerdict::Verified);
        let text = c.to_text();
        let back = Certificate::parse(&text).unwrap();
        assert_eq!(back.to_text(), text);
        assert_eq!(back.results, c.results);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let c = gap_certificate();
        let back = Certificate::from_json(&c.to_json()).unwrap();
        assert_eq!(back.results, c.results);
        assert_eq!(back.body(), c.body());
    }

    #[test]
    fn schema_mismatch_is_reported() {
        let text = gap_certificate().to_text().replace("schema_version: 1", "schema_version: 7");
        assert!(matches!(Certificate::parse(&text), Err(Error::Schema { found: 7, expected: 1 })));
    }

    #[test]
    fn fresh_certificate_verifies_and_tampering_fails() {
        let c = gap_certificate();
        assert_eq!(verify(&c, None).unwrap().verdict, CertVerdict::Verified);
        let mut t = c.clone();
        if let Entry::Enclosure { enclosure, .. } = &mut t.results[0] {
            *enclosure = Interval::new(enclosure.lo(), enclosure.hi() + 1e-3);
        }
        let v = verify(&t, None).unwrap();
        assert_eq!(v.verdict, CertVerdict::Failed);
        assert!(!v.diffs.is_empty());
    }

    #[test]
    fn determinism_of_bodies() {
        assert_eq!(gap_certificate().body(), gap_certificate().body());
    }
}
