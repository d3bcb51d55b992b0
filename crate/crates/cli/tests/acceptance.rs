//! End-to-end acceptance suite. Prints one line per criterion and exits
//! nonzero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use cfdim_core::bounds;
use cfdim_core::certificate::{self, CertVerdict, Certificate, ClaimStatus, Entry};
use cfdim_core::solver::{power_iterate, radius_enclosure};
use cfdim_core::spectrum::{self, GreedyStop};
use cfdim_core::table;
use cfdim_core::transfer::closed_form_eigenpair;
use cfdim_core::{dimension, Alphabet, Family, Interval, SolverConfig, TransferOperator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn table_regression() -> Outcome {
    let config = SolverConfig::default();
    let start = Instant::now();
    let rows = table::rows();
    let mut worst = 0f64;
    for row in &rows {
        let c = table::check_row(row, &config).map_err(|e| format!("{}: {e}", row.name))?;
        ensure(c.intersects, format!("{}: {} misses [{}, {}]", row.name, c.computed.enclosure, row.lo, row.hi))?;
        ensure(c.width_ok, format!("{}: width {:e}", row.name, c.computed.enclosure.width()))?;
        worst = worst.max(c.computed.enclosure.width());
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(180), format!("table took {t:?}"))?;
    Ok(format!("{} rows, max width {worst:.1e}, {:.1}s", rows.len(), t.as_secs_f64()))
}

fn singleton_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let config = SolverConfig::default();
    let mut worst = 0f64;
    for _ in 0..50 {
        let k: u32 = rng.random_range(1..=1000);
        let s: f64 = rng.random_range(0.05..1.0);
        let op = TransferOperator::new(&Alphabet::explicit([k]).unwrap(), s).map_err(|e| e.to_string())?;
        let w = power_iterate(&op, &config).map_err(|e| e.to_string())?;
        let r = radius_enclosure(&op, &w, &config).map_err(|e| e.to_string())?;
        let exact = closed_form_eigenpair(k as f64, s).map_err(|e| e.to_string())?.eigenvalue;
        ensure(r.contains_interval(exact), format!("k={k} s={s}: {r} does not contain {exact}"))?;
        ensure(r.width() < 1e-8, format!("k={k} s={s}: width {:e}", r.width()))?;
        worst = worst.max(r.width());
    }
    Ok(format!("50 singletons, max width {worst:.1e}"))
}

fn counting_anchor() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let config = SolverConfig::default();
    for _ in 0..20 {
        let size = rng.random_range(1..=12);
        let digits: Vec<u64> = (0..size).map(|_| rng.random_range(1..=1_000_000)).collect();
        let a = Alphabet::explicit(digits).unwrap();
        let op = TransferOperator::new(&a, 0.0).map_err(|e| e.to_string())?;
        let w = power_iterate(&op, &config).map_err(|e| e.to_string())?;
        let r = radius_enclosure(&op, &w, &config).map_err(|e| e.to_string())?;
        ensure(r.contains(a.len() as f64), format!("{a}: {r} does not contain {}", a.len()))?;
    }
    Ok("20 random alphabets at s=0".into())
}

fn golden_sandwich() -> Outcome {
    let config = SolverConfig::default();
    let mut ns = vec![2u64, 3];
    ns.extend((2..=11).map(|e| 1u64 << e));
    for &n in &ns {
        let g = bounds::golden_bounds(n).map_err(|e| e.to_string())?;
        let d = dimension(&Alphabet::explicit([1, n]).unwrap(), &config).map_err(|e| e.to_string())?;
        ensure(g.s_minus <= d.lo(), format!("n={n}: s_minus {} > {}", g.s_minus, d.lo()))?;
        ensure(d.hi() <= g.s_plus, format!("n={n}: {} > s_plus {}", d.hi(), g.s_plus))?;
    }
    let s4 = bounds::golden_bounds(4).map_err(|e| e.to_string())?.s_minus;
    ensure(s4 >= 0.379998, format!("s_minus(4) = {s4}"))?;
    Ok(format!("{} values of n, s_minus(4) = {s4:.6}", ns.len()))
}

fn scalar_checks() -> Outcome {
    let start = Instant::now();
    let reports = bounds::reference_checks().map_err(|e| e.to_string())?;
    let t = start.elapsed();
    if let Some(r) = reports.iter().find(|r| !r.passed()) {
        return Err(r.to_string());
    }
    ensure(t < Duration::from_secs(1), format!("took {t:?}"))?;
    Ok(format!("{} inequalities, {:.0} ms", reports.len(), t.as_secs_f64() * 1e3))
}

fn enclosure_of<'a>(cert: &'a Certificate, name: &str) -> Option<&'a Interval> {
    cert.results.iter().find_map(|e| match e {
        Entry::Enclosure { name: n, enclosure, .. } if n == name => Some(enclosure),
        _ => None,
    })
}

fn gap_certificates() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_cfdim");
    let runs: [&[&str]; 4] = [
        &["certify", "thm2", "--q", "3", "--k", "1"],
        &["certify", "thm2", "--q", "2", "--k", "2"],
        &["certify", "mq-structure", "--q", "6"],
        &["certify", "mq-structure", "--q", "9"],
    ];
    let mut summary = Vec::new();
    for args in runs {
        let label = args[1..].join(" ");
        let start = Instant::now();
        let out = Command::new(exe).args(args).output().map_err(|e| e.to_string())?;
        let t = start.elapsed();
        ensure(out.status.code() == Some(0), format!("{label}: exit {:?}", out.status.code()))?;
        let cert = Certificate::parse(&String::from_utf8_lossy(&out.stdout)).map_err(|e| e.to_string())?;
        ensure(cert.verdict == CertVerdict::Verified, format!("{label}: {}", cert.verdict))?;
        ensure(t < Duration::from_secs(120), format!("{label}: took {t:?}"))?;
        let mut min_margin = f64::INFINITY;
        for e in &cert.results {
            match e {
                Entry::Enclosure { name, truncation, .. } => {
                    ensure(*truncation <= 60, format!("{label}: {name} truncated at {truncation}"))?;
                }
                Entry::Claim { name, status } => {
                    ensure(*status == ClaimStatus::Holds, format!("{label}: claim {name} {status}"))?;
                    if let Some((l, r)) = name.split_once(" < ") {
                        let (l, r) = (enclosure_of(&cert, l), enclosure_of(&cert, r));
                        if let (Some(l), Some(r)) = (l, r) {
                            min_margin = min_margin.min(r.lo() - l.hi());
                        }
                    }
                }
                Entry::Bound(_) => {}
            }
        }
        ensure(min_margin > 0.0 && min_margin.is_finite(), format!("{label}: margin {min_margin}"))?;
        summary.push(format!("{label} margin {min_margin:.1e}"));
    }
    Ok(summary.join("; "))
}

fn perturbation() -> Outcome {
    let config = SolverConfig::default();
    let f = Alphabet::explicit([1u64, 2]).unwrap();
    let base = dimension(&f, &config).map_err(|e| e.to_string())?;
    let sigma = base.enclosure.mid();
    let c = bounds::perturbation_constants(f.len(), sigma).map_err(|e| e.to_string())?;
    let mut checked = Vec::new();
    let mut skipped = Vec::new();
    for n in [10u64, 50, 100, 500] {
        if n < c.n_threshold {
            skipped.push(n);
            continue;
        }
        let d = dimension(&f.with_element(n.into()).map_err(|e| e.to_string())?, &config).map_err(|e| e.to_string())?;
        let slack = base.enclosure.width() + d.enclosure.width();
        let eps = (n as f64).powf(-2.0 * sigma);
        let (lo, hi) = (sigma + eps / c.c_f, sigma + c.c_f * eps);
        ensure(d.lo() >= lo - slack, format!("n={n}: {} below {lo}", d.lo()))?;
        ensure(d.hi() <= hi + slack, format!("n={n}: {} above {hi}", d.hi()))?;
        checked.push(n);
    }
    ensure(!checked.is_empty(), "no n above threshold")?;
    Ok(format!("checked n={checked:?}, below threshold {} skipped {skipped:?}, C_F = {:.1}", c.n_threshold, c.c_f))
}

fn greedy() -> Outcome {
    let config = SolverConfig::default();
    let mut summary = Vec::new();
    for (family, s) in [(Family::Powers { q: 2 }, 0.4), (Family::Progression { a: 0, b: 1 }, 0.7)] {
        let start = Instant::now();
        let g = spectrum::greedy_spectrum_construct(family, s, 3, &config).map_err(|e| e.to_string())?;
        let t = start.elapsed();
        ensure(g.stop == GreedyStop::Completed, format!("{family} s={s}: stopped with {:?}", g.stop))?;
        ensure(g.rounds.len() == 3, format!("{family} s={s}: {} rounds", g.rounds.len()))?;
        ensure(g.is_monotone(), format!("{family} s={s}: lower endpoints not increasing"))?;
        let last = g.final_dim().unwrap();
        ensure(s - last.lo() <= 0.02, format!("{family} s={s}: final {} too far", last.lo()))?;
        ensure(t < Duration::from_secs(120), format!("{family}: took {t:?}"))?;
        summary.push(format!("{family} s={s} final {:.5}", last.lo()));
    }
    let gap = spectrum::certify_pstar_gap(3, 1, &config).map_err(|e| e.to_string())?;
    ensure(gap.separation, "P*_3 gap not certified")?;
    let mid = 0.5 * (gap.left.enclosure.hi() + gap.right.enclosure.lo());
    let g =
        spectrum::greedy_spectrum_construct(Family::PowersStar { q: 3 }, mid, 3, &config).map_err(|e| e.to_string())?;
    ensure(g.hypothesis_violated(), format!("P*_3 s={mid}: stopped with {:?}", g.stop))?;
    summary.push(format!("P*_3 s={mid:.5} hypothesis violated"));
    Ok(summary.join("; "))
}

fn refinement_soundness() -> Outcome {
    let dir = workspace_root().join("certificates");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    files.sort();
    ensure(!files.is_empty(), "no shipped certificates")?;
    for path in &files {
        let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        let cert = if path.extension().is_some_and(|e| e == "json") {
            let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            Certificate::from_json(&v)
        } else {
            Certificate::parse(&text)
        }
        .map_err(|e| format!("{}: {e}", path.display()))?;
        let refined = cert.config.refined();
        let v = certificate::verify(&cert, Some(&refined)).map_err(|e| e.to_string())?;
        ensure(v.verdict == CertVerdict::Verified, format!("{}: {} {:?}", path.display(), v.verdict, v.diffs))?;
    }
    Ok(format!("{} certificates re-verified at doubled mesh", files.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("table regression", table_regression),
        ("singleton closed form", singleton_oracle),
        ("counting anchor", counting_anchor),
        ("golden-bound sandwich", golden_sandwich),
        ("scalar inequalities", scalar_checks),
        ("gap certificates", gap_certificates),
        ("perturbation bound", perturbation),
        ("greedy construction", greedy),
        ("soundness under refinement", refinement_soundness),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    println!("{}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
