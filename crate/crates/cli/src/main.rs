use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use cfdim_core::bounds::{self, Param};
use cfdim_core::certificate::{self, CertVerdict, Certificate};
use cfdim_core::decimal::DecimalEnclosure;
use cfdim_core::spectrum::{self, ScanOptions};
use cfdim_core::statements::{self, Statement, STATEMENTS};
use cfdim_core::table;
use cfdim_core::{dimension, Alphabet, Error, Family, Interval, SolverConfig};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cfdim", version, about = "Certified Hausdorff dimension of continued-fraction Cantor sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug, Default)]
struct SolverFlags {
    /// Mesh size N.
    #[arg(long, global = true)]
    mesh: Option<usize>,
    /// Bisection tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Maximum cell subdivision depth.
    #[arg(long, global = true)]
    depth: Option<u32>,
    /// Power iteration steps.
    #[arg(long, global = true)]
    iters: Option<usize>,
    /// Interval-certified sandwich (the default).
    #[arg(long, global = true, conflicts_with = "fast")]
    certified: bool,
    /// Floating-point estimate without certification.
    #[arg(long, global = true)]
    fast: bool,
    /// Minimum snapshot length for alphabets with a tail.
    #[arg(long, global = true)]
    truncate: Option<usize>,
}

impl SolverFlags {
    fn any(&self) -> bool {
        self.mesh.is_some()
            || self.tol.is_some()
            || self.depth.is_some()
            || self.iters.is_some()
            || self.certified
            || self.fast
            || self.truncate.is_some()
    }

    fn apply(&self, mut c: SolverConfig) -> SolverConfig {
        if let Some(n) = self.mesh {
            c.mesh_size = n;
        }
        if let Some(t) = self.tol {
            c.bisection_tol = t;
        }
        if let Some(d) = self.depth {
            c.max_subdivision_depth = d;
        }
        if let Some(i) = self.iters {
            c.power_iters = i;
        }
        if self.fast {
            c.certified = false;
        }
        if let Some(m) = self.truncate {
            c.truncation = m;
        }
        c
    }

    fn config(&self) -> SolverConfig {
        self.apply(SolverConfig::default())
    }
}

#[derive(Args, Clone, Debug, Default)]
struct Output {
    /// Machine-readable JSON output.
    #[arg(long)]
    json: bool,
    /// Write the certificate to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Enclose the dimension of one alphabet.
    Dim {
        /// e.g. `explicit:[1,2]` or `family:M_q(q=5,count=40)`.
        alphabet: String,
        /// Continue a family alphabet by its infinite tail.
        #[arg(long)]
        tail: bool,
        /// Also produce a certificate.
        #[arg(long)]
        certify: bool,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Reproduce the reference table of dimension bands.
    Table {
        /// Row names, alphabet specs, or `all`.
        #[arg(default_value = "all")]
        selectors: Vec<String>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Run a statement pipeline and emit a certificate.
    Certify {
        /// Statement id; `list` shows them all.
        id: String,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long)]
        family: Option<String>,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Recompute a certificate and compare.
    Verify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Heuristic search for attained dimensions on a grid (not a certificate).
    Scan {
        /// Family name, e.g. `P_q_star(q=3)`.
        family: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, default_value_t = 5)]
        max_size: usize,
        #[arg(long, default_value_t = 12)]
        cutoff: usize,
        #[arg(long, default_value_t = 2e-3)]
        within: f64,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Evaluate closed-form bounds; without a name, run every reference check.
    Bounds {
        name: Option<String>,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        n0: Option<u64>,
        /// Real argument, a decimal or `[lo, hi]`.
        #[arg(long)]
        s: Option<String>,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Find the strict break point for (F, s) inside a family.
    Breakpoint {
        family: String,
        alphabet: String,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        solver: SolverFlags,
    },
}

/// Alternative statement ids accepted by `certify`.
const ALIASES: &[(&str, &str)] = &[("thm2", "pstar-gap")];

fn init_threads() {
    #[cfg(feature = "parallel")]
    if let Ok(n) = std::env::var("CFDIM_THREADS") {
        if let Ok(n) = n.trim().parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
}

fn enclosure_str(iv: Interval) -> String {
    DecimalEnclosure::from_interval(iv, 9).to_string()
}

fn real(text: &str) -> Result<Interval, Error> {
    if text.trim_start().starts_with('[') {
        text.parse::<DecimalEnclosure>()?.to_interval()
    } else {
        Interval::from_decimal(text).ok_or_else(|| Error::Parse(format!("bad number {text:?}")))
    }
}

fn emit(cert: &Certificate, output: &Output) -> Result<(), Error> {
    let text =
        if output.json { serde_json::to_string_pretty(&cert.to_json()).expect("json") + "\n" } else { cert.to_text() };
    match &output.out {
        Some(path) => fs::write(path, &text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn read_certificate(path: &PathBuf) -> Result<Certificate, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        Certificate::from_json(&v)
    } else {
        Certificate::parse(&text)
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Dim { alphabet, tail, certify, output, solver } => {
            let mut a: Alphabet = alphabet.parse()?;
            if tail && !a.has_tail() {
                a = a.with_tail()?;
            }
            let config = solver.config();
            if certify || output.out.is_some() {
                let st = Statement::new("dim", &[("alphabet", a.to_string())])?;
                let cert = statements::run(&st, &config)?;
                emit(&cert, &output)?;
                return Ok(cert.verdict.exit_code() as u8);
            }
            let d = dimension(&a, &config)?;
            if output.json {
                let v = serde_json::json!({
                    "alphabet": a.to_string(),
                    "enclosure": DecimalEnclosure::exact(d.enclosure),
                    "certified": d.certified,
                    "warning": d.warning,
                    "truncation": d.truncation,
                });
                println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            } else {
                println!("{}", enclosure_str(d.enclosure));
                if d.warning {
                    eprintln!("warning: tolerance not reached, width {:e}", d.enclosure.width());
                }
            }
            Ok(0)
        }
        Command::Table { selectors, json, solver } => {
            let config = solver.config();
            let rows = if selectors.iter().any(|s| s == "all") {
                table::rows()
            } else {
                selectors
                    .iter()
                    .map(|s| table::find(s).ok_or_else(|| Error::Parse(format!("no table row {s:?}"))))
                    .collect::<Result<Vec<_>, _>>()?
            };
            let checks: Vec<Result<table::RowCheck, Error>> =
                cfdim_core::par::map(config.execution, &rows, |r| table::check_row(r, &config));
            let mut misses = 0;
            let mut records = Vec::new();
            for c in checks {
                let c = c?;
                if !c.passed() {
                    misses += 1;
                }
                if json {
                    records.push(serde_json::json!({
                        "name": c.row.name,
                        "band": [c.row.lo, c.row.hi],
                        "enclosure": DecimalEnclosure::exact(c.computed.enclosure),
                        "intersects": c.intersects,
                        "width_ok": c.width_ok,
                        "pass": c.passed(),
                    }));
                } else {
                    println!(
                        "{:<16} [{}, {}]  {}  width {:.1e}  {}",
                        c.row.name,
                        c.row.lo,
                        c.row.hi,
                        enclosure_str(c.computed.enclosure),
                        c.computed.enclosure.width(),
                        if c.passed() { "pass" } else { "MISS" }
                    );
                }
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&records).expect("json"));
            } else {
                println!("{}/{} pass", rows.len() - misses, rows.len());
            }
            Ok(if misses == 0 { 0 } else { 1 })
        }
        Command::Certify { id, q, k, alphabet, family, output, solver } => {
            let id = ALIASES.iter().find(|(a, _)| *a == id).map_or(id, |(_, name)| name.to_string());
            if id == "list" {
                for (name, params, what) in STATEMENTS {
                    let flags: Vec<String> = params.iter().map(|p| format!("--{p}")).collect();
                    println!("{name:<14} {:<22} {what}", flags.join(" "));
                }
                return Ok(0);
            }
            let mut params = Vec::new();
            if let Some(q) = q {
                params.push(("q", q.to_string()));
            }
            if let Some(k) = k {
                params.push(("k", k.to_string()));
            }
            if let Some(a) = alphabet {
                params.push(("alphabet", a.parse::<Alphabet>()?.to_string()));
            }
            if let Some(f) = family {
                params.push(("family", f.parse::<Family>()?.to_string()));
            }
            let st = Statement::new(&id, &params)?;
            let cert = statements::run(&st, &solver.config())?;
            emit(&cert, &output)?;
            if output.out.is_some() {
                eprintln!("{}: {}", st, cert.verdict);
            }
            Ok(cert.verdict.exit_code() as u8)
        }
        Command::Verify { file, json, solver } => {
            let cert = read_certificate(&file)?;
            let config = solver.any().then(|| solver.apply(cert.config.clone()));
            let v = certificate::verify(&cert, config.as_ref())?;
            if json {
                let out = serde_json::json!({ "verdict": v.verdict, "diffs": v.diffs });
                println!("{}", serde_json::to_string_pretty(&out).expect("json"));
            } else {
                for d in &v.diffs {
                    println!("diff: {d}");
                }
                println!("verdict: {}", v.verdict);
            }
            Ok(v.verdict.exit_code() as u8)
        }
        Command::Scan { family, from, to, steps, max_size, cutoff, within, json, solver } => {
            let family: Family = family.parse()?;
            if steps == 0 || from.partial_cmp(&to) != Some(std::cmp::Ordering::Less) {
                return Err(Error::Parameter("need from < to and steps >= 1".into()));
            }
            let grid: Vec<f64> = if steps == 1 {
                vec![from]
            } else {
                (0..steps).map(|i| from + (to - from) * i as f64 / (steps - 1) as f64).collect()
            };
            let opts = ScanOptions { cutoff, tol: within, ..ScanOptions::default() };
            let points = spectrum::scan_spectrum(family, &grid, max_size, &opts, &solver.config())?;
            if json {
                let v: Vec<_> = points
                    .iter()
                    .map(|p| {
                        serde_json::json!({
                            "s": p.s,
                            "attained": p.attained,
                            "witness": p.witness.as_ref().map(ToString::to_string),
                            "nearest_below": p.nearest_below,
                            "nearest_above": p.nearest_above,
                            "exhausted": p.exhausted,
                        })
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            } else {
                println!("heuristic scan of {family}, not a certificate");
                for p in &points {
                    let w = p.witness.as_ref().map_or_else(|| "-".to_string(), ToString::to_string);
                    let near = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"));
                    println!(
                        "{:.6} {:<5} below {} above {} {}{}",
                        p.s,
                        p.attained,
                        near(p.nearest_below),
                        near(p.nearest_above),
                        w,
                        if p.exhausted { " (budget exhausted)" } else { "" }
                    );
                }
            }
            Ok(0)
        }
        Command::Bounds { name, q, k, n, n0, s, x, c, sigma, size, json } => {
            let need = |v: Option<u32>, what: &str| v.ok_or_else(|| Error::Parameter(format!("needs --{what}")));
            let need_real = |v: &Option<String>, what: &str| -> Result<Interval, Error> {
                real(v.as_deref().ok_or_else(|| Error::Parameter(format!("needs --{what}")))?)
            };
            let Some(name) = name else {
                let reports = bounds::reference_checks()?;
                let failed = reports.iter().filter(|r| !r.passed()).count();
                for r in &reports {
                    println!("{r}");
                }
                println!("{}/{} pass", reports.len() - failed, reports.len());
                return Ok(if failed == 0 { 0 } else { 1 });
            };
            let value: serde_json::Value = match name.as_str() {
                "golden" => {
                    let g = bounds::golden_bounds(n.ok_or_else(|| Error::Parameter("needs --n".into()))?)?;
                    serde_json::json!({ "s_minus": g.s_minus, "s_plus": g.s_plus })
                }
                "generic-lower" => {
                    let v = bounds::generic_lower(n.ok_or_else(|| Error::Parameter("needs --n".into()))?)?;
                    serde_json::json!({ "value": DecimalEnclosure::exact(v) })
                }
                "power-lower" => {
                    let p = bounds::power_lower_2q(need(q, "q")?)?;
                    serde_json::json!({ "bound": DecimalEnclosure::exact(p.bound), "weak": DecimalEnclosure::exact(p.weak) })
                }
                "perturbation" => {
                    let p = bounds::perturbation_constants(
                        size.ok_or_else(|| Error::Parameter("needs --size".into()))?,
                        sigma.ok_or_else(|| Error::Parameter("needs --sigma".into()))?,
                    )?;
                    serde_json::json!({ "c1": p.c1, "c2": p.c2, "n_threshold": p.n_threshold, "c_f": p.c_f })
                }
                "initial-interval" => {
                    serde_json::json!({ "value": DecimalEnclosure::exact(bounds::initial_interval_end(need(q, "q")?)?) })
                }
                "mq-gap" => {
                    let kind = if k == Some(3) { bounds::GapKind::ThreePow } else { bounds::GapKind::TwoPow };
                    let r = bounds::mq_gap_bounds(need(q, "q")?, kind)?;
                    serde_json::json!({ "report": r.to_string(), "passed": r.passed() })
                }
                formula => {
                    // Any named formula, evaluated through the report dispatcher.
                    let mut inputs: Vec<(&str, Param)> = Vec::new();
                    if let Some(q) = q {
                        inputs.push(("q", Param::Int(q as u64)));
                    }
                    if let Some(k) = k {
                        inputs.push(("k", Param::Int(k as u64)));
                    }
                    if let Some(n0) = n0 {
                        inputs.push(("n0", Param::Int(n0)));
                    }
                    if s.is_some() {
                        inputs.push(("s", Param::Real(need_real(&s, "s")?)));
                    }
                    if x.is_some() {
                        inputs.push(("x", Param::Real(need_real(&x, "x")?)));
                    }
                    if c.is_some() {
                        inputs.push(("c", Param::Real(need_real(&c, "c")?)));
                    }
                    let probe = bounds::BoundReport::new(formula, inputs, Interval::ZERO, 1.0, bounds::Verdict::Below);
                    let v = bounds::evaluate(&probe)?;
                    serde_json::json!({ "name": formula, "value": DecimalEnclosure::exact(v) })
                }
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&value).expect("json"));
            } else if let Some(obj) = value.as_object() {
                for (k, v) in obj {
                    match v {
                        serde_json::Value::Object(o) if o.contains_key("lo") => {
                            println!("{k}: [{}, {}]", o["lo"].as_str().unwrap_or(""), o["hi"].as_str().unwrap_or(""))
                        }
                        serde_json::Value::String(s) => println!("{k}: {s}"),
                        other => println!("{k}: {other}"),
                    }
                }
            }
            Ok(0)
        }
        Command::Breakpoint { family, alphabet, s, json, solver } => {
            let family: Family = family.parse()?;
            let f: Alphabet = alphabet.parse()?;
            let r = spectrum::find_strict_break_point(family, &f, s, &solver.config())?;
            if json {
                let v = serde_json::json!({
                    "f": r.f.to_string(),
                    "s": r.s,
                    "break_element": r.break_element.to_string(),
                    "index": r.index,
                    "strict": r.strict,
                    "dim_f": DecimalEnclosure::exact(r.dim_f.enclosure),
                    "dim_f_plus": DecimalEnclosure::exact(r.dim_f_plus.enclosure),
                    "dim_next": DecimalEnclosure::exact(r.dim_next.enclosure),
                });
                println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            } else {
                println!("break element {} (member {} above max F)", r.break_element, r.index);
                println!("dim F          {}", enclosure_str(r.dim_f.enclosure));
                println!("dim F + break  {}", enclosure_str(r.dim_f_plus.enclosure));
                println!("dim F + next   {}", enclosure_str(r.dim_next.enclosure));
                println!("strict: {}", if r.strict { "yes" } else { "inconclusive" });
            }
            Ok(if r.strict { 0 } else { 2 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(CertVerdict::Failed.exit_code() as u8)
        }
    }
}
