//! Ferroelectric SQUID: a Preisach ferroelectric gating a superconducting loop.
//!
//! The SQUID is reduced to one effective junction at zero applied flux. Its
//! critical current follows the remnant polarization through T_C, the BCS gap
//! and the Ambegaokar-Baratoff relation.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::physics::{critical_current_at, SuperconductorParams};
use crate::preisach::{PreisachModel, PreisachState};
use crate::rcsj::{rcsj_iv, IvCurve, RcsjParams};

/// Which of the two remnant states the ferroelectric holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RemnantState {
    /// P_R⁻: highest T_C, I_C,high.
    Negative,
    /// P_R⁺: lowest T_C, I_C,low.
    Positive,
}

impl RemnantState {
    pub fn label(self) -> &'static str {
        match self {
            RemnantState::Negative => "PR-",
            RemnantState::Positive => "PR+",
        }
    }

    /// Write polarity that leaves this remnant state behind.
    pub fn write_sign(self) -> f64 {
        match self {
            RemnantState::Negative => -1.0,
            RemnantState::Positive => 1.0,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            RemnantState::Negative => RemnantState::Positive,
            RemnantState::Positive => RemnantState::Negative,
        }
    }
}

/// Electrical parameters of the FeSQUID beyond the superconductor itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeSquidParams {
    /// Operating temperature (K).
    pub t_op: f64,
    /// Resistive-branch resistance in the P_R⁺ (low I_C) state (Ω).
    pub r_low_state: f64,
    /// Resistive-branch resistance in the P_R⁻ (high I_C) state (Ω).
    pub r_high_state: f64,
}

impl Default for FeSquidParams {
    fn default() -> Self {
        Self {
            t_op: 4.0,
            r_low_state: 1.8e3,
            r_high_state: 0.9e3,
        }
    }
}

impl FeSquidParams {
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.r_low_state > 0.0) {
            out.push(format!("r_low_state must be > 0 Ω (got {})", self.r_low_state));
        }
        if !(self.r_high_state > 0.0) {
            out.push(format!("r_high_state must be > 0 Ω (got {})", self.r_high_state));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeSquidDevice {
    model: Arc<PreisachModel>,
    fe: PreisachState,
    pub sc: SuperconductorParams,
    pub params: FeSquidParams,
}

impl FeSquidDevice {
    /// A device whose ferroelectric starts AC-demagnetized.
    pub fn new(model: Arc<PreisachModel>, sc: SuperconductorParams, params: FeSquidParams) -> Self {
        let fe = model.demagnetized_state();
        Self {
            model,
            fe,
            sc,
            params,
        }
    }

    pub fn model(&self) -> &PreisachModel {
        &self.model
    }

    pub fn fe_state(&self) -> &PreisachState {
        &self.fe
    }

    /// Applies a voltage across the ferroelectric and returns P (C/m²).
    pub fn apply_voltage(&mut self, v: f64) -> f64 {
        self.model.apply_voltage(&mut self.fe, v)
    }

    /// Pulses `v` and returns to 0 V.
    pub fn pulse(&mut self, v: f64) {
        self.apply_voltage(v);
        self.apply_voltage(0.0);
    }

    pub fn remnant_fraction(&self) -> f64 {
        self.model.remnant_fraction(&self.fe)
    }

    pub fn stored_state(&self) -> RemnantState {
        if self.remnant_fraction() < 0.0 {
            RemnantState::Negative
        } else {
            RemnantState::Positive
        }
    }

    pub fn critical_current(&self) -> Result<f64> {
        critical_current_at(self.remnant_fraction(), self.params.t_op, &self.sc)
    }

    /// Resistance of the resistive branch for the stored remnant state.
    pub fn state_resistance(&self) -> f64 {
        match self.stored_state() {
            RemnantState::Positive => self.params.r_low_state,
            RemnantState::Negative => self.params.r_high_state,
        }
    }

    /// Behavioral I-V: zero up to the critical current, ohmic above it.
    pub fn branch_voltage(&self, i: f64) -> Result<f64> {
        Ok(branch_voltage_with(i, self.critical_current()?, self.state_resistance()))
    }

    /// Time-averaged RCSJ I-V at the device's present critical current, shunted by R_N.
    pub fn simulate_rcsj_iv(&self, i_points: &[f64], params: &RcsjParams) -> Result<IvCurve> {
        rcsj_iv(self.critical_current()?, self.sc.r_n, i_points, params)
    }
}

pub(crate) fn branch_voltage_with(i: f64, i_c: f64, r: f64) -> f64 {
    if i <= i_c {
        0.0
    } else {
        i * r
    }
}
