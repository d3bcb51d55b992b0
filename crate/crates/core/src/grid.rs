//! Positive test functions on `[0, 1]`.

use crate::error::{Error, Result};
use crate::interval::Interval;

/// A strictly positive function on `[0, 1]` that can be enclosed over intervals.
pub trait PositiveFunction: Sync {
    fn eval(&self, x: f64) -> f64;

    /// Range enclosure over `x ∩ [0, 1]`.
    fn enclose(&self, x: Interval) -> Interval;

    /// Enclosure of the derivative almost everywhere on `x ∩ [0, 1]`.
    fn enclose_derivative(&self, x: Interval) -> Interval;

    /// Natural cells for the sandwich: the breakpoints of the function, or a
    /// uniform partition with `fallback` cells.
    fn cells(&self, fallback: usize) -> Vec<Interval> {
        uniform_cells(fallback)
    }
}

pub(crate) fn uniform_nodes(n: usize) -> Vec<f64> {
    (0..=n).map(|i| i as f64 / n as f64).collect()
}

pub(crate) fn uniform_cells(n: usize) -> Vec<Interval> {
    let nodes = uniform_nodes(n);
    nodes.windows(2).map(|w| Interval::new(w[0], w[1])).collect()
}

/// Piecewise-linear function given by its values on a mesh `0 = x_0 < ... < x_N = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    nodes: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<Interval>,
    uniform: bool,
}

impl GridFunction {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() < 3 || nodes.len() != values.len() {
            return Err(Error::Parameter("need at least two cells and one value per node".into()));
        }
        if nodes[0] != 0.0 || *nodes.last().unwrap() != 1.0 {
            return Err(Error::Parameter("mesh must run from 0 to 1".into()));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter("mesh must be strictly increasing".into()));
        }
        if let Some(i) = values.iter().position(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::Positivity(i));
        }
        let n = nodes.len() - 1;
        let uniform = nodes == uniform_nodes(n);
        let slopes = (0..n)
            .map(|j| {
                let dv = Interval::point(values[j + 1]) - Interval::point(values[j]);
                let dx = Interval::point(nodes[j + 1]) - Interval::point(nodes[j]);
                dv / dx
            })
            .collect();
        Ok(GridFunction { nodes, values, slopes, uniform })
    }

    /// Uniform mesh with `values.len() - 1` cells.
    pub fn uniform(values: Vec<f64>) -> Result<Self> {
        let n = values.len().saturating_sub(1);
        GridFunction::new(uniform_nodes(n), values)
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let nodes = uniform_nodes(n);
        let values = nodes.iter().map(|&x| f(x)).collect();
        GridFunction::new(nodes, values)
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        GridFunction::from_fn(n, |_| c)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of cells `N`.
    pub fn mesh_size(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    /// Index `j` of a cell `[x_j, x_{j+1}]` containing `x` (clamped into `[0, 1]`).
    pub fn segment(&self, x: f64) -> usize {
        let n = self.mesh_size();
        let x = x.clamp(0.0, 1.0);
        let mut j = if self.uniform {
            ((x * n as f64) as usize).min(n - 1)
        } else {
            self.nodes.partition_point(|&t| t <= x).saturating_sub(1).min(n - 1)
        };
        while j > 0 && self.nodes[j] > x {
            j -= 1;
        }
        while j + 1 < n && self.nodes[j + 1] < x {
            j += 1;
        }
        j
    }

    fn enclose_at(&self, y: f64, j: usize) -> Interval {
        if y == self.nodes[j] {
            return Interval::point(self.values[j]);
        }
        if y == self.nodes[j + 1] {
            return Interval::point(self.values[j + 1]);
        }
        Interval::point(self.values[j]) + self.slopes[j] * (Interval::point(y) - Interval::point(self.nodes[j]))
    }

    /// Values at the nodes are scaled so the maximum is one.
    pub fn normalized(&self) -> GridFunction {
        let m = self.sup_norm();
        let values = self.values.iter().map(|v| v / m).collect();
        GridFunction::new(self.nodes.clone(), values).expect("scaling keeps positivity")
    }
}

impl PositiveFunction for GridFunction {
    fn eval(&self, x: f64) -> f64 {
        let j = self.segment(x);
        let (x0, x1) = (self.nodes[j], self.nodes[j + 1]);
        let t = (x.clamp(0.0, 1.0) - x0) / (x1 - x0);
        self.values[j] + t * (self.values[j + 1] - self.values[j])
    }

    fn enclose(&self, x: Interval) -> Interval {
        let x = x.clamp_to(0.0, 1.0);
        let ja = self.segment(x.lo());
        let jb = self.segment(x.hi());
        let mut r = self.enclose_at(x.lo(), ja).hull(self.enclose_at(x.hi(), jb));
        for k in ja + 1..=jb {
            r = r.hull(Interval::point(self.values[k]));
        }
        r
    }

    fn enclose_derivative(&self, x: Interval) -> Interval {
        let x = x.clamp_to(0.0, 1.0);
        let ja = self.segment(x.lo());
        let jb = self.segment(x.hi());
        self.slopes[ja..=jb].iter().fold(self.slopes[ja], |acc, s| acc.hull(*s))
    }

    fn cells(&self, _fallback: usize) -> Vec<Interval> {
        self.nodes.windows(2).map(|w| Interval::new(w[0], w[1])).collect()
    }
}

/// `x ↦ (λ + x)^{-2s}`, the exact eigenfunction for a single digit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedFormEigenfunction {
    pub lambda: Interval,
    pub s: f64,
}

impl PositiveFunction for ClosedFormEigenfunction {
    fn eval(&self, x: f64) -> f64 {
        (self.lambda.mid() + x).powf(-2.0 * self.s)
    }

    fn enclose(&self, x: Interval) -> Interval {
        let x = x.clamp_to(0.0, 1.0);
        (self.lambda + x).powf(-2.0 * self.s)
    }

    fn enclose_derivative(&self, x: Interval) -> Interval {
        let x = x.clamp_to(0.0, 1.0);
        let two_s = Interval::point(2.0 * self.s);
        -(two_s * (self.lambda + x).pow(-two_s - Interval::ONE))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_bad_meshes() {
        assert!(matches!(GridFunction::uniform(vec![1.0, 0.0, 1.0]), Err(Error::Positivity(1))));
        assert!(GridFunction::new(vec![0.0, 0.6, 0.5, 1.0], vec![1.0; 4]).is_err());
        assert!(GridFunction::uniform(vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn interpolates_linearly() {
        let g = GridFunction::uniform(vec![2.0, 1.0, 3.0]).unwrap();
        assert_eq!(g.eval(0.25), 1.5);
        assert_eq!(g.eval(0.75), 2.0);
        let r = g.enclose(Interval::new(0.25, 0.75));
        assert!(r.contains(1.0) && r.contains(2.0) && r.contains(1.5));
        assert!(r.lo() >= 1.0 - 1e-15 && r.hi() <= 2.0 + 1e-15);
        let d = g.enclose_derivative(Interval::new(0.25, 0.75));
        assert!(d.contains(-2.0) && d.contains(4.0));
    }

    #[test]
    fn constant_is_exact() {
        let g = GridFunction::constant(16, 1.0).unwrap();
        assert_eq!(g.enclose(Interval::new(0.1, 0.9)), Interval::ONE);
        assert_eq!(g.enclose_derivative(Interval::new(0.1, 0.9)), Interval::ZERO);
    }

    proptest! {
        #[test]
        fn enclosure_contains_samples(
            vals in proptest::collection::vec(0.1f64..5.0, 9),
            a in 0.0f64..1.0, b in 0.0f64..1.0, t in 0.0f64..1.0,
        ) {
            let g = GridFunction::uniform(vals).unwrap();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let x = lo + t * (hi - lo);
            let r = g.enclose(Interval::new(lo, hi));
            prop_assert!(r.lo() <= g.eval(x) + 1e-12 && g.eval(x) <= r.hi() + 1e-12);
        }

        #[test]
        fn closed_form_enclosure_contains_samples(k in 1.0f64..50.0, s in 0.05f64..1.0, x in 0.0f64..1.0) {
            let lambda = (Interval::point(k) + (Interval::point(k * k) + 4.0).sqrt()) / 2.0;
            let v = ClosedFormEigenfunction { lambda, s };
            prop_assert!(v.enclose(Interval::new(0.0, 1.0)).contains(v.eval(x)));
        }
    }
}
