//! Scalar Preisach hysteresis for the ferroelectric layer.
//!
//! The model is a triangular grid of rectangular relays (hysterons) on the
//! half-plane α ≥ β. A relay switches up once the input reaches its α and down
//! once the input falls to its β. The state is the full relay occupancy, so
//! minor loops, wipe-out and congruency are exact on the grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ferroelectric material parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FerroelectricParams {
    /// Coercive voltage (V).
    pub v_c: f64,
    /// Spread of the switching thresholds around ±v_c (V).
    pub sigma_v: f64,
    /// Saturation polarization (C/m²).
    pub p_s: f64,
    /// Hysteron grid resolution per axis.
    pub grid_n: usize,
}

impl Default for FerroelectricParams {
    fn default() -> Self {
        Self {
            v_c: 1.2,
            sigma_v: 0.15,
            // 30 µC/cm²
            p_s: 0.30,
            grid_n: 64,
        }
    }
}

impl FerroelectricParams {
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.v_c > 0.0) {
            out.push(format!("v_c must be > 0 V (got {})", self.v_c));
        }
        if !(self.sigma_v > 0.0) {
            out.push(format!("sigma_v must be > 0 V (got {})", self.sigma_v));
        }
        if !(self.p_s > 0.0) {
            out.push(format!("p_s must be > 0 (got {})", self.p_s));
        }
        if self.grid_n < 16 {
            out.push(format!("grid_n must be >= 16 (got {})", self.grid_n));
        }
        out
    }
}

/// Discretized Preisach plane with normalized hysteron weights.
#[derive(Debug, Clone, PartialEq)]
pub struct PreisachModel {
    params: FerroelectricParams,
    /// Threshold values shared by both axes (cell centres), ascending.
    thresholds: Vec<f64>,
    /// Weights in packed lower-triangular order: index(i, j) = i(i+1)/2 + j, j <= i,
    /// where i indexes α and j indexes β.
    weights: Vec<f64>,
}

/// Relay occupancy plus the last applied voltage.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PreisachState {
    relay_up: Vec<bool>,
    last_v_bits: u64,
}

impl PreisachState {
    pub fn last_v(&self) -> f64 {
        f64::from_bits(self.last_v_bits)
    }

    pub fn relays(&self) -> &[bool] {
        &self.relay_up
    }

    fn set_last_v(&mut self, v: f64) {
        // Normalize -0.0 so equal histories compare equal.
        self.last_v_bits = if v == 0.0 { 0 } else { v.to_bits() };
    }
}

#[inline]
fn tri(i: usize) -> usize {
    i * (i + 1) / 2
}

impl PreisachModel {
    pub fn new(params: FerroelectricParams) -> Result<Self> {
        let v = params.violations();
        if !v.is_empty() {
            return Err(Error::Config(v));
        }
        let n = params.grid_n;
        let extent = params.v_c + 5.0 * params.sigma_v;
        let step = 2.0 * extent / n as f64;
        let thresholds: Vec<f64> = (0..n).map(|k| -extent + (k as f64 + 0.5) * step).collect();

        // Independent Gaussians on α (around +v_c) and β (around -v_c); equivalently a
        // product of Gaussians in the rotated (coercive, bias) frame centred at (v_c, 0).
        let s2 = params.sigma_v * params.sigma_v;
        let mut weights = Vec::with_capacity(tri(n));
        for &alpha in &thresholds {
            for &beta in thresholds.iter().take_while(|&&b| b <= alpha) {
                let a = alpha - params.v_c;
                let b = beta + params.v_c;
                weights.push((-(a * a + b * b) / (2.0 * s2)).exp());
            }
        }
        debug_assert_eq!(weights.len(), tri(n));
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);

        Ok(Self {
            params,
            thresholds,
            weights,
        })
    }

    pub fn params(&self) -> &FerroelectricParams {
        &self.params
    }

    pub fn grid_n(&self) -> usize {
        self.params.grid_n
    }

    /// Input magnitude that switches every relay on the grid.
    pub fn saturation_voltage(&self) -> f64 {
        self.params.v_c + 5.0 * self.params.sigma_v
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// All relays down, as after negative saturation and return to 0 V.
    pub fn negative_state(&self) -> PreisachState {
        PreisachState {
            relay_up: vec![false; self.weights.len()],
            last_v_bits: 0,
        }
    }

    /// All relays up, as after positive saturation and return to 0 V.
    pub fn positive_state(&self) -> PreisachState {
        PreisachState {
            relay_up: vec![true; self.weights.len()],
            last_v_bits: 0,
        }
    }

    /// AC-demagnetized state: relays below the α = -β diagonal are up, relays on it
    /// alternate so the net polarization is close to zero.
    pub fn demagnetized_state(&self) -> PreisachState {
        let n = self.grid_n();
        let mut relay_up = vec![false; self.weights.len()];
        for i in 0..n {
            for j in 0..=i {
                relay_up[tri(i) + j] = i + j < n - 1 || (i + j == n - 1 && i % 2 == 0);
            }
        }
        PreisachState {
            relay_up,
            last_v_bits: 0,
        }
    }

    /// Applies `v` and returns the resulting polarization (C/m²).
    pub fn apply_voltage(&self, state: &mut PreisachState, v: f64) -> f64 {
        debug_assert!(v.is_finite());
        let last = state.last_v();
        let n = self.grid_n();
        if v > last {
            let top = self.thresholds.partition_point(|&a| a <= v);
            for i in 0..top {
                state.relay_up[tri(i)..=tri(i) + i].fill(true);
            }
        } else if v < last {
            let bottom = self.thresholds.partition_point(|&b| b < v);
            for i in bottom..n {
                state.relay_up[tri(i) + bottom..=tri(i) + i].fill(false);
            }
        }
        state.set_last_v(v);
        self.polarization(state)
    }

    /// Folds `apply_voltage` over a waveform, returning the polarization trace.
    pub fn apply_waveform(&self, state: &mut PreisachState, samples: &[f64]) -> Result<Vec<f64>> {
        if samples.is_empty() {
            return Err(Error::Usage("waveform must contain at least one sample".into()));
        }
        if let Some(bad) = samples.iter().find(|v| !v.is_finite()) {
            return Err(Error::Usage(format!("non-finite voltage sample {bad}")));
        }
        Ok(samples.iter().map(|&v| self.apply_voltage(state, v)).collect())
    }

    /// Polarization of the current occupancy (C/m²).
    pub fn polarization(&self, state: &PreisachState) -> f64 {
        self.params.p_s * self.signed_sum(state.relay_up.iter().copied())
    }

    /// P(v = 0) / P_s for the current history, leaving `state` untouched.
    pub fn remnant_fraction(&self, state: &PreisachState) -> f64 {
        let last = state.last_v();
        let n = self.grid_n();
        let mut sum = 0.0;
        for i in 0..n {
            let alpha = self.thresholds[i];
            for j in 0..=i {
                let beta = self.thresholds[j];
                let up = state.relay_up[tri(i) + j];
                let up = if last > 0.0 {
                    up && beta < 0.0
                } else if last < 0.0 {
                    up || alpha <= 0.0
                } else {
                    up
                };
                let w = self.weights[tri(i) + j];
                sum += if up { w } else { -w };
            }
        }
        sum
    }

    /// Total weight of relays whose occupancy differs between two states.
    pub fn flipped_weight(&self, a: &PreisachState, b: &PreisachState) -> f64 {
        a.relay_up
            .iter()
            .zip(&b.relay_up)
            .zip(&self.weights)
            .filter(|((x, y), _)| x != y)
            .map(|(_, w)| w)
            .sum()
    }

    /// Area of the major loop, Σ 2 P_s w (α - β) over all relays (J/m² per V·C/m²).
    pub fn major_loop_area(&self) -> f64 {
        let n = self.grid_n();
        let mut area = 0.0;
        for i in 0..n {
            for j in 0..=i {
                area += self.weights[tri(i) + j] * (self.thresholds[i] - self.thresholds[j]);
            }
        }
        2.0 * self.params.p_s * area
    }

    fn signed_sum(&self, relays: impl Iterator<Item = bool>) -> f64 {
        relays
            .zip(&self.weights)
            .map(|(up, w)| if up { *w } else { -*w })
            .sum()
    }
}

/// Triangular sweep 0 → +amp → -amp → 0, repeated `cycles` times.
pub fn triangle_wave(amplitude: f64, points_per_quarter: usize, cycles: usize) -> Vec<f64> {
    let q = points_per_quarter.max(1);
    let mut out = Vec::with_capacity(4 * q * cycles + 1);
    out.push(0.0);
    for _ in 0..cycles {
        for k in 1..=q {
            out.push(amplitude * k as f64 / q as f64);
        }
        for k in 1..=2 * q {
            out.push(amplitude * (1.0 - k as f64 / q as f64));
        }
        for k in 1..=q {
            out.push(-amplitude + amplitude * k as f64 / q as f64);
        }
    }
    out
}
