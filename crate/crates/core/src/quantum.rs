//! Even-correlation-state statistics and quantum violation curves.
//!
//! Each of |V| observers measures spin in the xz-plane (0 = +z, π/2 = +x)
//! on one particle of the even-correlation state. The joint probabilities
//! in context m̃ are
//!
//! ```text
//! P(x̃) = (1/2^{|V|}) (1 + (−1)^{|x̃∩2̃|} cos Σ_i θ_{i,m_i})
//! ```
//!
//! so the multideviation profile is as sparse as it gets: Q^∅, the
//! full-order term, and nothing in between. The violation of the simplest
//! even/odd inequalities is then a one-dimensional problem in the spread
//! parameter d, minimized here by grid scan plus golden-section refinement.
//!
//! This module is the one floating-point corner of the crate; everything it
//! feeds back into the exact layers goes through the 2^64-grid ingestion of
//! the contexts module.

use crate::contexts::{EventSpace, MultiContextDistribution};
use crate::error::{domain, refused, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Measurement angles: two xz-plane directions per observer.
#[derive(Clone, Debug)]
pub struct SpinConfig {
    angles: Vec<[f64; 2]>,
}

impl SpinConfig {
    pub fn new(angles: Vec<[f64; 2]>) -> Result<Self> {
        if angles.is_empty() {
            return domain("need at least one observer");
        }
        if angles.iter().flatten().any(|a| !a.is_finite()) {
            return domain("angles must be finite");
        }
        Ok(SpinConfig { angles })
    }

    pub fn observers(&self) -> usize {
        self.angles.len()
    }

    pub fn angle(&self, observer: usize, setting: u8) -> f64 {
        self.angles[observer][setting as usize]
    }

    /// The settings that realize the d-open violation curve for the
    /// (φ = ∅, m = 1) simplest inequality: θ_{i,0} = a/|V| with
    /// a = π − d(|V|+1)/|V|, and θ_{i,1} = θ_{i,0} + 2d/|V|.
    pub fn for_violation(observers: usize, d: f64) -> Result<Self> {
        if observers < 2 {
            return domain("violation settings need at least two observers");
        }
        let v = observers as f64;
        let a = PI - d * (v + 1.0) / v;
        let theta0 = a / v;
        let theta1 = theta0 + 2.0 * d / v;
        SpinConfig::new(vec![[theta0, theta1]; observers])
    }
}

/// Joint probability of outcomes x̃ (0 = spin-up) in context m̃.
pub fn joint_probability(cfg: &SpinConfig, settings: &[u8], outcomes: &[u8]) -> f64 {
    let v = cfg.observers();
    assert_eq!(settings.len(), v);
    assert_eq!(outcomes.len(), v);
    let theta: f64 = (0..v).map(|i| cfg.angle(i, settings[i])).sum();
    let downs = outcomes.iter().filter(|&&x| x == 1).count();
    let sign = if downs % 2 == 0 { 1.0 } else { -1.0 };
    (1.0 + sign * theta.cos()) / 2f64.powi(v as i32)
}

/// All joint probabilities of a context in encode order (first observer
/// most significant).
pub fn context_probabilities(cfg: &SpinConfig, settings: &[u8]) -> Vec<f64> {
    let v = cfg.observers();
    (0..(1usize << v))
        .map(|code| {
            let outcomes: Vec<u8> =
                (0..v).map(|i| ((code >> (v - 1 - i)) & 1) as u8).collect();
            joint_probability(cfg, settings, &outcomes)
        })
        .collect()
}

/// The full multiple-context statistics on the binary space 2_V, ingested
/// exactly (2^64 grid, parameter independence checked at 1e-9).
pub fn statistics(cfg: &SpinConfig) -> Result<MultiContextDistribution> {
    let v = cfg.observers();
    let space = EventSpace::binary(v);
    let mut per_context = Vec::with_capacity(space.n_contexts());
    for k in 0..space.n_contexts() {
        // context index digits are the settings, first observer most
        // significant, matching EventSpace::binary's context order
        let mut settings = vec![0u8; v];
        let mut rest = k;
        for i in (0..v).rev() {
            settings[i] = (rest % 2) as u8;
            rest /= 2;
        }
        per_context.push(context_probabilities(cfg, &settings));
    }
    MultiContextDistribution::from_floats(space, per_context)
}

/// The sparse multideviation profile of one context: Q^∅ = 1/2^{|V|},
/// the full-order table, and zero at every intermediate order.
#[derive(Clone, Debug)]
pub struct QmMultidevs {
    pub q_empty: f64,
    /// Q^{full}(x̃) indexed by encoded x̃: (−1)^{|x̃∩2̃|} cos(Σθ) / 2^{|V|}.
    pub top: Vec<f64>,
}

pub fn qm_multideviations(cfg: &SpinConfig, settings: &[u8]) -> QmMultidevs {
    let v = cfg.observers();
    let theta: f64 = (0..v).map(|i| cfg.angle(i, settings[i])).sum();
    let norm = 2f64.powi(v as i32);
    let top = (0..(1usize << v))
        .map(|code| {
            let downs = (code as u32).count_ones() as usize;
            let sign = if downs % 2 == 0 { 1.0 } else { -1.0 };
            sign * theta.cos() / norm
        })
        .collect();
    QmMultidevs { q_empty: 1.0 / norm, top }
}

/// cos^n(x), computed in log space for large n to dodge underflow of the
/// repeated product. Requires cos(x) ≥ 0 for the log path, which holds on
/// the violation curve (x = d/|V| ≤ π/2).
pub fn cos_pow(x: f64, n: u64) -> f64 {
    let c = x.cos();
    if n <= 50 {
        return c.powi(n as i32);
    }
    if c > 0.0 {
        (n as f64 * c.ln()).exp()
    } else if c == 0.0 {
        0.0
    } else if n % 2 == 0 {
        (n as f64 * (-c).ln()).exp()
    } else {
        -((n as f64 * (-c).ln()).exp())
    }
}

/// Aggregated violation-curve parameters: the angle sums a = Σa_i and
/// d = Σd_i for |V| ≥ 2 observers.
#[derive(Clone, Copy, Debug)]
pub struct ViolationParams {
    pub a: f64,
    pub d: f64,
    pub observers: usize,
}

impl ViolationParams {
    pub fn new(a: f64, d: f64, observers: usize) -> Result<Self> {
        if observers < 2 {
            return domain("violation curves need at least two observers");
        }
        if !a.is_finite() || !d.is_finite() {
            return domain("angles must be finite");
        }
        Ok(ViolationParams { a, d, observers })
    }

    /// Fixed spread d_i = π/(2|V|): ½ − (½ cos a + sin a · cos^{|V|}(π/(2|V|))).
    /// Ignores the stored d.
    pub fn lhs_a_form(&self) -> f64 {
        violation_lhs_a_form(self.a, self.observers)
    }

    /// d open, a eliminated at π − d(|V|+1)/|V|:
    /// ½ − (−½ cos(d + d/|V|) + cos^{|V|+1}(d/|V|)). Ignores the stored a.
    pub fn lhs_d_open(&self) -> f64 {
        violation_lhs_d_open(self.d, self.observers)
    }

    /// The two-parameter form ½ − (½ cos a − cos(a+d) cos^{|V|}(d/|V|)).
    pub fn lhs_general(&self) -> f64 {
        violation_lhs_general(self.a, self.d, self.observers)
    }
}

/// The violation curve at fixed spread d_i = π/(2|V|):
/// ½ − (½ cos a + sin a · cos^{|V|}(π/(2|V|))).
pub fn violation_lhs_a_form(a: f64, observers: usize) -> f64 {
    let v = observers as f64;
    0.5 - (0.5 * a.cos() + a.sin() * cos_pow(PI / (2.0 * v), observers as u64))
}

/// The violation curve with d open, a eliminated at π − d(|V|+1)/|V|:
/// ½ − (−½ cos(d + d/|V|) + cos^{|V|+1}(d/|V|)).
pub fn violation_lhs_d_open(d: f64, observers: usize) -> f64 {
    let v = observers as f64;
    0.5 - (-0.5 * (d + d / v).cos() + cos_pow(d / v, observers as u64 + 1))
}

/// The two-parameter form ½ − (½ cos a − cos(a+d) cos^{|V|}(d/|V|)),
/// before a is eliminated.
pub fn violation_lhs_general(a: f64, d: f64, observers: usize) -> f64 {
    let v = observers as f64;
    0.5 - (0.5 * a.cos() - (a + d).cos() * cos_pow(d / v, observers as u64))
}

const GRID_STEP: f64 = PI * 1e-4;
const GOLDEN_TOL: f64 = 1e-10;

fn golden_section_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut b = hi - inv_phi * (hi - lo);
    let mut c = lo + inv_phi * (hi - lo);
    let mut fb = f(b);
    let mut fc = f(c);
    while hi - lo > tol {
        if fb < fc {
            hi = c;
            c = b;
            fc = fb;
            b = hi - inv_phi * (hi - lo);
            fb = f(b);
        } else {
            lo = b;
            b = c;
            fb = fc;
            c = lo + inv_phi * (hi - lo);
            fc = f(c);
        }
    }
    0.5 * (lo + hi)
}

/// Minimizes the d-open violation curve over d ∈ (0, π]: deterministic grid
/// scan at step π·10⁻⁴ followed by golden-section refinement to |Δd| < 1e-10.
/// Returns (d, value); negative values are quantum violations.
pub fn maximize_violation(observers: usize) -> Result<(f64, f64)> {
    if observers < 2 {
        return domain("violation search needs at least two observers");
    }
    let f = |d: f64| violation_lhs_d_open(d, observers);
    let mut best_d = GRID_STEP;
    let mut best = f(best_d);
    let steps = (PI / GRID_STEP).round() as usize;
    for k in 2..=steps {
        let d = k as f64 * GRID_STEP;
        let v = f(d);
        if v < best {
            best = v;
            best_d = d;
        }
    }
    let lo = (best_d - GRID_STEP).max(GRID_STEP * 0.5);
    let hi = (best_d + GRID_STEP).min(PI);
    let d = golden_section_min(f, lo, hi, GOLDEN_TOL);
    Ok((d, f(d)))
}

/// Coarse scan of the full (a, d) rectangle [0, 2π) × (0, π] of the
/// two-parameter form. Reports the smallest value seen; used to flag any
/// violation below the d-open curve rather than to assert optimality.
pub fn full_scan_min(observers: usize, steps: usize) -> (f64, f64, f64) {
    let mut best = (0.0, GRID_STEP, f64::INFINITY);
    for ka in 0..(2 * steps) {
        let a = ka as f64 * PI / steps as f64;
        for kd in 1..=steps {
            let d = kd as f64 * PI / steps as f64;
            let v = violation_lhs_general(a, d, observers);
            if v < best.2 {
                best = (a, d, v);
            }
        }
    }
    best
}

/// The even-correlation state: amplitudes (−1)^{|σ|/2} / √(2^{|V|−1}) on
/// basis states with an even number of spin-downs (σ = the down set), zero
/// elsewhere. Statevector size 2^{|V|} limits this to |V| ≤ 12.
pub fn even_correlation_state(observers: usize) -> Result<Vec<Complex64>> {
    if observers == 0 {
        return domain("need at least one observer");
    }
    if observers > 12 {
        return refused(format!(
            "statevector for |V| = {observers} would have 2^{observers} amplitudes (limit |V| ≤ 12)"
        ));
    }
    let norm = 1.0 / 2f64.powi(observers as i32 - 1).sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << observers];
    for (code, amp) in amps.iter_mut().enumerate() {
        let downs = (code as u32).count_ones();
        if downs % 2 == 0 {
            let sign = if downs % 4 == 0 { 1.0 } else { -1.0 };
            *amp = Complex64::new(sign * norm, 0.0);
        }
    }
    Ok(amps)
}

/// Table-2-shaped row: observer count, optimizing d/π, minimal value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ViolationRow {
    pub observers: usize,
    pub d_over_pi: f64,
    pub value: f64,
}

pub fn violation_table(rows: &[usize]) -> Result<Vec<ViolationRow>> {
    rows.iter()
        .map(|&v| {
            let (d, value) = maximize_violation(v)?;
            Ok(ViolationRow { observers: v, d_over_pi: d / PI, value })
        })
        .collect()
}
