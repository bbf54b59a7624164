//! Resistively and capacitively shunted junction dynamics.
//!
//! In normalized time τ = (2 q_e I_C R / ħ) t the phase obeys
//! β_c φ'' + φ' + sin φ = i, with i = I / I_C. The DC voltage is
//! ⟨V⟩ = I_C R ⟨φ'⟩, measured over whole phase slips.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RcsjParams {
    /// Stewart-McCumber parameter.
    pub beta_c: f64,
    /// Integration steps per reference period 2π / max(i_max, 1).
    pub n_steps: usize,
    pub settle_periods: usize,
    pub average_periods: usize,
}

impl Default for RcsjParams {
    fn default() -> Self {
        Self {
            beta_c: 0.1,
            n_steps: 1000,
            settle_periods: 50,
            average_periods: 200,
        }
    }
}

impl RcsjParams {
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.beta_c >= 0.0) {
            out.push(format!("beta_c must be >= 0 (got {})", self.beta_c));
        }
        if self.n_steps < 1000 {
            out.push(format!("n_steps must be >= 1000 (got {})", self.n_steps));
        }
        if self.average_periods < 2 {
            out.push(format!(
                "average_periods must be >= 2 (got {})",
                self.average_periods
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IvPoint {
    /// Bias current (A).
    pub i: f64,
    /// Time-averaged voltage (V).
    pub v: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IvCurve {
    pub points: Vec<IvPoint>,
}

#[derive(Debug, Clone, Copy)]
struct Phase {
    phi: f64,
    omega: f64,
}

/// Phase-slip bookkeeping over one averaging window.
#[derive(Debug, Default)]
struct SlipLog {
    first: Option<(i64, f64)>,
    last: Option<(i64, f64)>,
}

impl SlipLog {
    fn record(&mut self, k: i64, t: f64) {
        if self.first.is_none() {
            self.first = Some((k, t));
        }
        self.last = Some((k, t));
    }

    /// Mean dφ/dτ over whole slips; zero when fewer than one complete slip happened.
    fn mean_rate(&self) -> Option<f64> {
        match (self.first, self.last) {
            (Some((k0, t0)), Some((k1, t1))) if k1 != k0 && t1 > t0 => {
                Some(TAU * (k1 - k0) as f64 / (t1 - t0))
            }
            _ => None,
        }
    }
}

fn rk4_step(y: Phase, i: f64, beta_c: f64, dt: f64) -> Phase {
    let f = |p: Phase| -> Phase {
        if beta_c == 0.0 {
            let d = i - p.phi.sin();
            Phase { phi: d, omega: 0.0 }
        } else {
            Phase {
                phi: p.omega,
                omega: (i - p.phi.sin() - p.omega) / beta_c,
            }
        }
    };
    let add = |a: Phase, b: Phase, h: f64| Phase {
        phi: a.phi + h * b.phi,
        omega: a.omega + h * b.omega,
    };
    let k1 = f(y);
    let k2 = f(add(y, k1, 0.5 * dt));
    let k3 = f(add(y, k2, 0.5 * dt));
    let k4 = f(add(y, k3, dt));
    let mut next = Phase {
        phi: y.phi + dt / 6.0 * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi),
        omega: y.omega + dt / 6.0 * (k1.omega + 2.0 * k2.omega + 2.0 * k3.omega + k4.omega),
    };
    if beta_c == 0.0 {
        next.omega = i - next.phi.sin();
    }
    next
}

/// Integrates one bias point starting from `y`, returning the mean normalized
/// voltage and the final phase state.
fn run_point(
    mut y: Phase,
    i: f64,
    params: &RcsjParams,
    dt: f64,
    steps_settle: usize,
    steps_avg: usize,
) -> Result<(f64, Phase)> {
    for _ in 0..steps_settle {
        y = rk4_step(y, i, params.beta_c, dt);
    }
    // Re-centre the phase so slip indices stay small.
    let shift = (y.phi / TAU).floor() * TAU;
    y.phi -= shift;

    let half = steps_avg / 2;
    let mut windows = [SlipLog::default(), SlipLog::default()];
    let mut all = SlipLog::default();
    let mut t = 0.0;
    for step in 0..steps_avg {
        let next = rk4_step(y, i, params.beta_c, dt);
        let k_prev = (y.phi / TAU).floor() as i64;
        let k_next = (next.phi / TAU).floor() as i64;
        if k_next != k_prev {
            // crossing of a multiple of 2π, located by linear interpolation
            let k = k_prev.max(k_next);
            let target = k as f64 * TAU;
            let frac = (target - y.phi) / (next.phi - y.phi);
            let tc = t + frac * dt;
            let w = usize::from(step >= half);
            windows[w].record(k, tc);
            all.record(k, tc);
        }
        y = next;
        t += dt;
    }

    let rate = all.mean_rate().unwrap_or(0.0);
    let a = windows[0].mean_rate();
    let b = windows[1].mean_rate();
    let converged = match (a, b) {
        (Some(a), Some(b)) => ((a - b) / a.abs().max(b.abs())).abs() <= 1e-3,
        (None, None) => true,
        _ => false,
    };
    if !converged {
        return Err(Error::Numeric {
            message: "time-averaged voltage did not converge".into(),
            diagnostics: format!(
                "i/I_C = {i}, beta_c = {}, window rates = {a:?} / {b:?}",
                params.beta_c
            ),
        });
    }
    Ok((rate, y))
}

/// Sweeps the bias points in order, carrying the phase state between points so
/// that underdamped junctions show their hysteresis.
pub fn rcsj_iv(i_c: f64, r: f64, i_points: &[f64], params: &RcsjParams) -> Result<IvCurve> {
    let v = params.violations();
    if !v.is_empty() {
        return Err(Error::Config(v));
    }
    if !(i_c > 0.0) || !(r > 0.0) {
        return Err(Error::Domain(format!(
            "RCSJ needs I_C > 0 and R > 0 (got {i_c} A, {r} Ω)"
        )));
    }
    if let Some(bad) = i_points.iter().find(|i| !i.is_finite() || **i < 0.0) {
        return Err(Error::Domain(format!(
            "bias currents must be finite and non-negative (got {bad})"
        )));
    }
    let i_max = i_points.iter().fold(1.0_f64, |m, &i| m.max(i / i_c));
    let period = TAU / i_max;
    let dt = period / params.n_steps as f64;
    let steps_settle = params.settle_periods * params.n_steps;
    let steps_avg = params.average_periods * params.n_steps;

    let mut y = Phase {
        phi: 0.0,
        omega: 0.0,
    };
    let mut points = Vec::with_capacity(i_points.len());
    for &i in i_points {
        let (rate, next) = run_point(y, i / i_c, params, dt, steps_settle, steps_avg)?;
        y = next;
        points.push(IvPoint {
            i,
            v: i_c * r * rate,
        });
    }
    Ok(IvCurve { points })
}
