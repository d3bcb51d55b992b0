//! Statement pipelines: each id maps to a computation whose results are
//! collected into a certificate.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::alphabets::{Alphabet, Family};
use crate::bounds::{self, BoundReport, Verdict};
use crate::certificate::{Certificate, ClaimStatus, Entry};
use crate::error::{Error, Result};
use crate::solver::{dimension, SolverConfig};
use crate::spectrum::{self, GapCertificate, NamedEnclosure};

/// Known statement ids with the parameters each expects.
pub const STATEMENTS: &[(&str, &[&str], &str)] = &[
    ("dim", &["alphabet"], "dimension enclosure of one alphabet"),
    ("pstar-gap", &["q", "k"], "gap (mu^k, nu^k) in the spectrum of P*_q"),
    ("fsharp", &["alphabet", "family"], "dim(F#) < dim(F) for a finite F inside a family"),
    ("mq-structure", &["q"], "interval structure of the spectrum of M_q"),
    ("critical-bp", &["q"], "critical break point value 2q of M_q, q >= 11"),
    ("bounds", &[], "every closed-form scalar inequality"),
];

/// A statement id with its parameters, e.g. `pstar-gap k=1 q=3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub id: String,
    pub params: BTreeMap<String, String>,
}

impl Statement {
    pub fn new(id: &str, params: &[(&str, String)]) -> Result<Self> {
        let (_, expected, _) = STATEMENTS
            .iter()
            .find(|(name, _, _)| *name == id)
            .ok_or_else(|| Error::Parse(format!("unknown statement {id:?}")))?;
        let params: BTreeMap<String, String> = params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        for key in *expected {
            if !params.contains_key(*key) {
                return Err(Error::Parameter(format!("statement {id} needs --{key}")));
            }
        }
        if let Some(extra) = params.keys().find(|k| !expected.contains(&k.as_str())) {
            return Err(Error::Parameter(format!("statement {id} takes no parameter {extra}")));
        }
        Ok(Statement { id: id.to_string(), params })
    }

    fn param(&self, key: &str) -> Result<&str> {
        self.params.get(key).map(String::as_str).ok_or_else(|| Error::Parameter(format!("missing parameter {key}")))
    }

    fn int(&self, key: &str) -> Result<u32> {
        self.param(key)?.parse().map_err(|_| Error::Parse(format!("parameter {key} must be an integer")))
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

impl FromStr for Statement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let id = parts.next().ok_or_else(|| Error::Parse("empty statement".into()))?;
        let params: Vec<(&str, String)> = parts
            .map(|kv| {
                kv.split_once('=')
                    .map(|(k, v)| (k, v.to_string()))
                    .ok_or_else(|| Error::Parse(format!("bad statement parameter {kv:?}")))
            })
            .collect::<Result<_>>()?;
        Statement::new(id, &params)
    }
}

fn enclosure_entry(n: &NamedEnclosure) -> Entry {
    Entry::Enclosure {
        name: n.name.clone(),
        alphabet: n.alphabet.to_string(),
        enclosure: n.enclosure.enclosure,
        truncation: n.enclosure.truncation,
        warning: n.enclosure.warning,
    }
}

fn gap_entries(g: &GapCertificate, out: &mut Vec<Entry>) {
    out.push(enclosure_entry(&g.left));
    out.push(enclosure_entry(&g.right));
    out.extend(g.supporting.iter().cloned().map(Entry::Bound));
    let status = if g.separation {
        ClaimStatus::Holds
    } else if g.contradicted() {
        ClaimStatus::Fails
    } else {
        ClaimStatus::Unresolved
    };
    out.push(Entry::Claim { name: format!("{} < {}", g.left.name, g.right.name), status });
}

fn bound_claim(name: String, reports: &[&BoundReport]) -> Entry {
    let status = if reports.iter().all(|r| r.passed()) {
        ClaimStatus::Holds
    } else if reports.iter().any(|r| r.verdict != Verdict::Inconclusive && !r.passed()) {
        ClaimStatus::Fails
    } else {
        ClaimStatus::Unresolved
    };
    Entry::Claim { name, status }
}

/// Run the pipeline of `statement` under `config`.
pub fn run(statement: &Statement, config: &SolverConfig) -> Result<Certificate> {
    let start = std::time::Instant::now();
    let mut results = Vec::new();
    match statement.id.as_str() {
        "dim" => {
            let a: Alphabet = statement.param("alphabet")?.parse()?;
            let d = dimension(&a, config)?;
            results.push(enclosure_entry(&NamedEnclosure { name: "dim".into(), alphabet: a, enclosure: d }));
        }
        "pstar-gap" => {
            let g = spectrum::certify_pstar_gap(statement.int("q")?, statement.int("k")?, config)?;
            gap_entries(&g, &mut results);
        }
        "fsharp" => {
            let f: Alphabet = statement.param("alphabet")?.parse()?;
            let family: Family = statement.param("family")?.parse()?;
            let g = spectrum::certify_fsharp(&f, family, config)?;
            gap_entries(&g, &mut results);
        }
        "mq-structure" => {
            let m = spectrum::certify_mq_structure(statement.int("q")?, config)?;
            if let Some(e) = &m.endpoint {
                results.push(enclosure_entry(e));
            }
            for g in m.gaps.iter().chain(&m.comparisons) {
                gap_entries(g, &mut results);
            }
            results.extend(m.reports.iter().cloned().map(Entry::Bound));
            if !m.reports.is_empty() {
                results.push(bound_claim("supporting inequalities".into(), &m.reports.iter().collect::<Vec<_>>()));
            }
            if let Some(c) = &m.critical {
                results.push(Entry::Bound(c.tau.clone()));
                results.push(Entry::Bound(c.mu.clone()));
                results.push(bound_claim(format!("critical break point {}", c.k_star), &[&c.tau, &c.mu]));
            }
            let shape = match m.shape {
                spectrum::MqShape::Full => "full".to_string(),
                spectrum::MqShape::Intervals(n) => format!("{n} intervals"),
                spectrum::MqShape::FiniteUnion => "finite union of intervals".to_string(),
            };
            let status = if m.passed() { ClaimStatus::Holds } else { ClaimStatus::Unresolved };
            results.push(Entry::Claim { name: format!("shape {shape}"), status });
        }
        "critical-bp" => {
            let c = spectrum::certify_critical_breakpoint(statement.int("q")?)?;
            results.push(Entry::Bound(c.tau.clone()));
            results.push(Entry::Bound(c.mu.clone()));
            results.push(bound_claim(format!("critical break point {}", c.k_star), &[&c.tau, &c.mu]));
        }
        "bounds" => {
            let reports = bounds::reference_checks()?;
            let claim = bound_claim("all inequalities".into(), &reports.iter().collect::<Vec<_>>());
            results.extend(reports.into_iter().map(Entry::Bound));
            results.push(claim);
        }
        other => return Err(Error::Parse(format!("unknown statement {other:?}"))),
    }
    Ok(Certificate::new(statement.clone(), config.clone(), results, start.elapsed().as_secs_f64()))
}
