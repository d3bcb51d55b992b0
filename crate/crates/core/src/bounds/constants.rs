//! Numerical constants and check thresholds used by the closed-form bounds.

/// `c` with `c / ln n < dim(J_{1,n})` for all `n >= 4`.
pub const GENERIC_LOWER_C: f64 = 0.52679;
/// `c` with `c / (q ln 2) <= dim(J_{1,2^q})` for `q >= 12`.
pub const POWER_LOWER_C: f64 = 1.0571;
/// Weaker form `1.525 / q` of the same lower bound.
pub const POWER_LOWER_WEAK: f64 = 1.525;

/// `h(4)` at `c = GENERIC_LOWER_C` exceeds this.
pub const H4_THRESHOLD: f64 = 1.0;
/// `h(2^12)` at `c = POWER_LOWER_C` exceeds this.
pub const H4096_THRESHOLD: f64 = 1.005;

/// `(q, s_q, threshold)`: `α(q, s_q)` stays below the threshold.
pub const ALPHA_CHECKS: [(u32, &str, f64); 9] = [
    (2, "0.67", 0.986),
    (3, "0.485", 0.967),
    (4, "0.38", 0.975),
    (5, "0.31", 0.995),
    (6, "0.265", 0.99985),
    (7, "0.234", 0.9983),
    (8, "0.21", 0.998),
    (9, "0.191", 0.998),
    (10, "0.175", 0.9989),
];

/// `(q, threshold)`: the two-power gap majorant at the `{1,2^q}` band.
pub const TWO_POW_GAP_CHECKS: [(u32, f64); 6] = [(6, 0.96), (7, 0.85), (8, 0.78), (9, 0.72), (10, 0.67), (11, 0.63)];
/// Large-`q` two-power gap majorant bound.
pub const TWO_POW_GAP_LARGE_Q: f64 = 0.98;

/// `(q, threshold)`: three-power gap majorant with `k = 8` at the `{1,2^q,3^q}` band.
pub const THREE_POW_GAP_CHECKS: [(u32, f64); 2] = [(9, 0.99), (10, 0.94)];
pub const THREE_POW_GAP_K: u32 = 8;

/// Refined geometric-tail sums.
pub const PSTAR_REFINED_3_1: f64 = 0.899;
pub const PSTAR_REFINED_3_1_S: (&str, &str) = ("0.454", "0.455");
pub const PSTAR_REFINED_2_2: f64 = 0.984;
pub const PSTAR_REFINED_2_2_S: (&str, &str) = ("0.669", "0.67");
/// Plain tail ratio bounds for `q = 3, k >= 2` and `q = 2, k >= 3`.
pub const PSTAR_GAMMA_3: f64 = 0.92;
pub const PSTAR_GAMMA_2: f64 = 0.915;

/// `τ(11)` is at least this.
pub const TAU_11: f64 = 1.112;

/// `(q, n0, s, threshold)`: break-point sums `γ(q, n0, s)` exceeding the threshold.
pub const GAMMA_CHECKS: [(u32, u64, &str, f64); 14] = [
    (2, 3, "0.67", 1.3),
    (2, 2, "0.4112", 2.5),
    (3, 3, "0.485", 1.1),
    (3, 2, "0.334", 1.5),
    (4, 3, "0.38", 1.01),
    (4, 2, "0.281", 1.14),
    (5, 4, "0.31", 1.4),
    (5, 3, "0.273", 1.25),
    (6, 4, "0.265", 1.3),
    (7, 4, "0.234", 1.2),
    (8, 4, "0.21", 1.2),
    (6, 3, "0.238626", 1.13),
    (7, 3, "0.212933", 1.05),
    (9, 3, "0.162510", 1.09),
];
/// Further break-point sums for the three-interval regime.
pub const GAMMA_CHECKS_LATE: [(u32, u64, &str, f64); 3] =
    [(10, 3, "0.150820", 1.02), (9, 4, "0.191", 1.1), (10, 4, "0.175", 1.1)];
/// Six-term refinement `γ'(8, 3, 0.192786) > 1.004`.
pub const GAMMA_PRIME_CHECK: (u32, u64, &str, f64) = (8, 3, "0.192786", 1.004);

/// Perturbation constant `C_1` is taken this factor above `e^3 / ln 2`.
pub const C1_MARGIN: f64 = 1e-6;

/// Every named constant, for listing.
pub const TABLE: &[(&str, f64)] = &[
    ("generic_lower_c", GENERIC_LOWER_C),
    ("power_lower_c", POWER_LOWER_C),
    ("power_lower_weak", POWER_LOWER_WEAK),
    ("h4_threshold", H4_THRESHOLD),
    ("h4096_threshold", H4096_THRESHOLD),
    ("two_pow_gap_large_q", TWO_POW_GAP_LARGE_Q),
    ("pstar_refined_3_1", PSTAR_REFINED_3_1),
    ("pstar_refined_2_2", PSTAR_REFINED_2_2),
    ("pstar_gamma_3", PSTAR_GAMMA_3),
    ("pstar_gamma_2", PSTAR_GAMMA_2),
    ("tau_11", TAU_11),
    ("c1_margin", C1_MARGIN),
];
