//! Candidate eigenfunctions by power iteration on the collocation matrix.

use crate::error::{Error, Result};
use crate::grid::{uniform_nodes, GridFunction};
use crate::interval::Interval;
use crate::solver::config::SolverConfig;
use crate::transfer::TransferOperator;

/// Collocation of the operator at the mesh nodes with four-point Lagrange
/// interpolation between nodes.
struct Collocation {
    n: usize,
    offsets: Vec<usize>,
    /// First stencil node and the four weights, already scaled by `(n+x)^{-2s}`.
    entries: Vec<(usize, [f64; 4])>,
    /// Approximate tail mass, attached to the value at 0.
    tail_weight: f64,
}

impl Collocation {
    fn new(op: &TransferOperator, n: usize) -> Self {
        let e = -2.0 * op.s();
        let mut offsets = Vec::with_capacity(n + 2);
        let mut entries = Vec::with_capacity((n + 1) * op.digits_f64().len());
        for &x in &uniform_nodes(n) {
            offsets.push(entries.len());
            for &d in op.digits_f64() {
                let t = d + x;
                let u = n as f64 / t;
                let j = (u as usize).min(n - 1);
                let j0 = j.saturating_sub(1).min(n - 3);
                let c = if e == 0.0 { 1.0 } else { t.powf(e) };
                let r = u - j0 as f64;
                let l = [
                    -(r - 1.0) * (r - 2.0) * (r - 3.0) / 6.0,
                    r * (r - 2.0) * (r - 3.0) / 2.0,
                    -r * (r - 1.0) * (r - 3.0) / 2.0,
                    r * (r - 1.0) * (r - 2.0) / 6.0,
                ];
                entries.push((j0, l.map(|v| c * v)));
            }
        }
        offsets.push(entries.len());
        let tail_weight = op.tail().and_then(|t| t.sum_bound(Interval::point(op.s())).ok()).map_or(0.0, |b| b.mid());
        Collocation { n, offsets, entries, tail_weight }
    }

    fn apply(&self, w: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate().take(self.n + 1) {
            let mut acc = self.tail_weight * w[0];
            for (j, l) in &self.entries[self.offsets[i]..self.offsets[i + 1]] {
                acc += l[0] * w[*j] + l[1] * w[j + 1] + l[2] * w[j + 2] + l[3] * w[j + 3];
            }
            *o = acc;
        }
    }
}

/// Candidate eigenfunction, sup-normalised, plus the collocation eigenvalue estimate.
#[derive(Clone, Debug)]
pub struct PowerResult {
    pub w: GridFunction,
    pub eigenvalue: f64,
    pub iterations: usize,
}

/// Power iteration from `start` (or the constant function) for at most `iters` steps.
pub fn power_iterate_from(
    op: &TransferOperator,
    mesh_size: usize,
    start: Option<&GridFunction>,
    iters: usize,
) -> Result<PowerResult> {
    if mesh_size < 4 {
        return Err(Error::Parameter("mesh too small".into()));
    }
    let col = Collocation::new(op, mesh_size);
    let mut w: Vec<f64> = match start {
        Some(g) if g.mesh_size() == mesh_size => g.values().to_vec(),
        _ => vec![1.0; mesh_size + 1],
    };
    let mut next = vec![0.0; mesh_size + 1];
    let mut eigenvalue = 0.0;
    let mut done = 0;
    for it in 0..iters {
        col.apply(&w, &mut next);
        let m = next.iter().cloned().fold(0.0, f64::max);
        eigenvalue = m;
        let mut change: f64 = 0.0;
        for (a, b) in w.iter_mut().zip(&next) {
            let v = b / m;
            change = change.max((v - *a).abs());
            *a = v;
        }
        done = it + 1;
        if change < 1e-15 {
            break;
        }
    }
    // Guard against underflow for extreme parameters.
    for v in &mut w {
        if !(*v > 0.0) {
            *v = f64::MIN_POSITIVE;
        }
    }
    Ok(PowerResult { w: GridFunction::uniform(w)?, eigenvalue, iterations: done })
}

/// Candidate for the sandwich with `config.mesh_size` cells and `config.power_iters` steps.
pub fn power_iterate(op: &TransferOperator, config: &SolverConfig) -> Result<GridFunction> {
    config.validate()?;
    Ok(power_iterate_from(op, config.mesh_size, None, config.power_iters)?.w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabets::Alphabet;
    use crate::grid::PositiveFunction;
    use crate::transfer::closed_form_eigenpair;

    fn op(d: &[u32], s: f64) -> TransferOperator {
        TransferOperator::new(&Alphabet::explicit(d.iter().copied()).unwrap(), s).unwrap()
    }

    #[test]
    fn singleton_matches_closed_form() {
        for k in [1u32, 2, 5] {
            let w = power_iterate(&op(&[k], 0.5), &SolverConfig::default()).unwrap();
            let v = closed_form_eigenpair(k as f64, 0.5).unwrap().eigenfunction;
            // Proportionality up to the best constant.
            let ratios: Vec<f64> = w.nodes().iter().zip(w.values()).map(|(&x, &y)| y / v.eval(x)).collect();
            let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = ratios.iter().cloned().fold(0.0, f64::max);
            let c = (lo + hi) / 2.0;
            for (&x, &y) in w.nodes().iter().zip(w.values()) {
                let err = (y - c * v.eval(x)).abs();
                assert!(err < 1e-6, "k={k} x={x} err={err}");
            }
        }
    }

    #[test]
    fn candidate_is_decreasing() {
        let w = power_iterate(&op(&[1, 2], 0.531), &SolverConfig::default()).unwrap();
        assert!(w.values().windows(2).all(|p| p[1] <= p[0]));
        assert_eq!(w.sup_norm(), 1.0);
    }

    #[test]
    fn counting_operator_keeps_constants() {
        let cfg = SolverConfig { mesh_size: 16, ..SolverConfig::default() };
        let w = power_iterate(&op(&[1, 2], 0.0), &cfg).unwrap();
        assert!(w.values().iter().all(|&v| (v - 1.0).abs() < 1e-13));
    }
}
