use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::Execution;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Number of cells `N` of the uniform mesh.
    pub mesh_size: usize,
    pub bisection_tol: f64,
    pub max_subdivision_depth: u32,
    pub power_iters: usize,
    /// Interval-certified sandwich; `false` samples ratios in floating point.
    pub certified: bool,
    /// Minimum snapshot length for alphabets with an infinite tail.
    pub truncation: usize,
    #[serde(default)]
    pub execution: Execution,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            mesh_size: 200,
            bisection_tol: 1e-6,
            max_subdivision_depth: 12,
            power_iters: 100,
            certified: true,
            truncation: 0,
            execution: Execution::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.mesh_size < 8 {
            return Err(Error::Parameter(format!("mesh size must be >= 8, got {}", self.mesh_size)));
        }
        if !(self.bisection_tol > 0.0) {
            return Err(Error::Parameter("bisection tolerance must be positive".into()));
        }
        if self.power_iters == 0 {
            return Err(Error::Parameter("power_iters must be positive".into()));
        }
        Ok(())
    }

    pub fn fast() -> Self {
        SolverConfig { certified: false, ..Self::default() }
    }

    /// Doubled mesh and two extra subdivision levels.
    pub fn refined(&self) -> Self {
        SolverConfig {
            mesh_size: self.mesh_size * 2,
            max_subdivision_depth: self.max_subdivision_depth + 2,
            ..self.clone()
        }
    }

    pub fn with_execution(&self, execution: Execution) -> Self {
        SolverConfig { execution, ..self.clone() }
    }

    /// Canonical one-line description embedded in certificates.
    pub fn canonical(&self) -> String {
        format!(
            "mesh={} tol={:e} depth={} iters={} certified={} truncation={}",
            self.mesh_size,
            self.bisection_tol,
            self.max_subdivision_depth,
            self.power_iters,
            self.certified,
            self.truncation
        )
    }

    /// Inverse of [`SolverConfig::canonical`]; execution falls back to the default.
    pub fn from_canonical(text: &str) -> Result<Self> {
        let mut c = SolverConfig::default();
        let bad = |k: &str, v: &str| Error::Parse(format!("bad config value {k}={v}"));
        for kv in text.split_whitespace() {
            let (k, v) = kv.split_once('=').ok_or_else(|| Error::Parse(format!("bad config entry {kv:?}")))?;
            match k {
                "mesh" => c.mesh_size = v.parse().map_err(|_| bad(k, v))?,
                "tol" => c.bisection_tol = v.parse().map_err(|_| bad(k, v))?,
                "depth" => c.max_subdivision_depth = v.parse().map_err(|_| bad(k, v))?,
                "iters" => c.power_iters = v.parse().map_err(|_| bad(k, v))?,
                "certified" => c.certified = v.parse().map_err(|_| bad(k, v))?,
                "truncation" => c.truncation = v.parse().map_err(|_| bad(k, v))?,
                other => return Err(Error::Parse(format!("unknown config key {other:?}"))),
            }
        }
        c.validate()?;
        Ok(c)
    }
}
