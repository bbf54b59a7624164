//! Heater cryotron access device: a threshold switch between a superconducting
//! and a resistive channel.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelState {
    Superconducting,
    Resistive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HtronParams {
    /// Gate critical current (A).
    pub i_g_crit: f64,
    /// Channel critical current at zero gate drive (A).
    pub i_ch_crit: f64,
    /// Resistive channel resistance (Ω).
    pub r_off: f64,
    /// Superconducting → resistive switching latency (s).
    pub t_switch: f64,
}

impl Default for HtronParams {
    fn default() -> Self {
        Self {
            i_g_crit: 20e-6,
            i_ch_crit: 60e-6,
            r_off: 50e3,
            t_switch: 0.3e-9,
        }
    }
}

impl HtronParams {
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.i_g_crit > 0.0) {
            out.push(format!("hTron i_g_crit must be > 0 A (got {})", self.i_g_crit));
        }
        if !(self.i_ch_crit > 0.0) {
            out.push(format!("hTron i_ch_crit must be > 0 A (got {})", self.i_ch_crit));
        }
        if !(self.r_off > 0.0) {
            out.push(format!("hTron r_off must be > 0 Ω (got {})", self.r_off));
        }
        if !(self.t_switch > 0.0) {
            out.push(format!("hTron t_switch must be > 0 s (got {})", self.t_switch));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HtronDevice {
    pub params: HtronParams,
    state: ChannelState,
    switch_events: u64,
}

impl HtronDevice {
    pub fn new(params: HtronParams) -> Self {
        Self {
            params,
            state: ChannelState::Superconducting,
            switch_events: 0,
        }
    }

    pub fn state(&self) -> ChannelState {
        self.state
    }

    /// Recomputes the channel state for a gate current `i_g` and channel bias `i_b`.
    ///
    /// Thresholds are strict: a drive exactly at a critical current leaves the
    /// channel superconducting.
    pub fn apply_drive(&mut self, i_g: f64, i_b: f64) -> ChannelState {
        let next = if i_g > self.params.i_g_crit || i_b > self.params.i_ch_crit {
            ChannelState::Resistive
        } else {
            ChannelState::Superconducting
        };
        if self.state == ChannelState::Superconducting && next == ChannelState::Resistive {
            self.switch_events += 1;
        }
        self.state = next;
        next
    }

    pub fn channel_resistance(&self) -> f64 {
        match self.state {
            ChannelState::Superconducting => 0.0,
            ChannelState::Resistive => self.params.r_off,
        }
    }

    /// Number of superconducting → resistive transitions so far.
    pub fn switch_events(&self) -> u64 {
        self.switch_events
    }

    /// Accumulated switching latency, t_switch per transition.
    pub fn switching_time(&self) -> f64 {
        self.switch_events as f64 * self.params.t_switch
    }
}

impl Default for HtronDevice {
    fn default() -> Self {
        Self::new(HtronParams::default())
    }
}
