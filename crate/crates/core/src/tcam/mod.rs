//! FeSQUID/hTron ternary CAM.
//!
//! A cell is two branches in parallel, each an hTron in series with a FeSQUID.
//! FeSQUID 1 holds the data bit and FeSQUID 2 its complement. All cells of a
//! row share the read word line, which doubles as the match line.
//!
//! Encoding:
//!
//! | value | FeSQUID 1 | FeSQUID 2 | search gates (ht1, ht2) |
//! |-------|-----------|-----------|-------------------------|
//! | 1     | P_R⁻      | P_R⁺      | (on, off)               |
//! | 0     | P_R⁺      | P_R⁻      | (off, on)               |
//! | d     |           |           | (on, on)                |
//!
//! A gate that is "on" makes its hTron resistive, so search current is steered
//! into the branch whose hTron stays superconducting.

pub mod formula;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fesquid::{FeSquidDevice, FeSquidParams, RemnantState};
use crate::htron::{ChannelState, HtronDevice, HtronParams};
use crate::physics::{critical_current_at, SuperconductorParams};
use crate::preisach::{FerroelectricParams, PreisachModel};

pub use formula::{
    calibrate_exact_bias, decode_n_match, exact_mode_averages, ml_voltage_closed_form, search_energy,
    ExactCalibration,
};

/// Published average 1-bit search energies used to calibrate the exact-mode bias (J).
pub const BINARY_AVG_TARGET: f64 = 1.36e-18;
pub const TERNARY_AVG_TARGET: f64 = 26.5e-18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Trit {
    Zero,
    One,
    DontCare,
}

impl Trit {
    pub fn from_bit(b: bool) -> Self {
        if b {
            Trit::One
        } else {
            Trit::Zero
        }
    }

    fn as_char(self) -> char {
        match self {
            Trit::Zero => '0',
            Trit::One => '1',
            Trit::DontCare => 'd',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SearchKey(pub Vec<Trit>);

impl SearchKey {
    pub fn from_bits(bits: &[bool]) -> Self {
        SearchKey(bits.iter().map(|&b| Trit::from_bit(b)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for SearchKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(Trit::Zero),
                '1' => Ok(Trit::One),
                'd' | 'D' | 'x' | 'X' => Ok(Trit::DontCare),
                other => Err(Error::Usage(format!("invalid search trit {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(SearchKey)
    }
}

impl fmt::Display for SearchKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|t| write!(f, "{}", t.as_char()))
    }
}

/// Parses a stored word of '0'/'1' characters.
pub fn parse_word(s: &str) -> Result<Vec<bool>> {
    s.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Usage(format!("invalid stored bit {other:?}"))),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exact,
    Hd,
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SearchMode::Exact),
            "hd" => Ok(SearchMode::Hd),
            other => Err(Error::Usage(format!("unknown search mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasConfig {
    /// Per-cell RWL current in exact-search mode (A).
    pub i_rwl_exact: f64,
    /// Per-cell RWL current in HD mode (A).
    pub i_rwl_hd: f64,
    /// Gate current of an asserted RBL (A).
    pub i_rbl_on: f64,
    /// Write voltage (V).
    pub v_write: f64,
    /// Search duration (s).
    pub t_search: f64,
    /// Resistance of a switched FeSQUID at the exact-mode bias (Ω).
    pub r_fs_exact: f64,
}

impl Default for BiasConfig {
    fn default() -> Self {
        let cal = calibrate_exact_bias(
            BINARY_AVG_TARGET,
            TERNARY_AVG_TARGET,
            formula::T_SEARCH,
            formula::R_HTRON_OFF,
        )
        .expect("published targets are feasible");
        Self {
            i_rwl_exact: cal.i_rwl,
            i_rwl_hd: formula::I_RWL_HD,
            i_rbl_on: 2.0 * HtronParams::default().i_g_crit,
            v_write: 2.0,
            t_search: formula::T_SEARCH,
            r_fs_exact: cal.r_fs,
        }
    }
}

/// Every physical parameter needed to build an array.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TcamParams {
    pub superconductor: SuperconductorParams,
    pub ferroelectric: FerroelectricParams,
    pub fesquid: FeSquidParams,
    pub htron: HtronParams,
    pub bias: BiasConfig,
}

impl TcamParams {
    /// I_C of a FeSQUID left in (P_R⁺, P_R⁻) by a full write pulse.
    pub fn written_critical_currents(&self) -> Result<(f64, f64)> {
        let model = Arc::new(PreisachModel::new(self.ferroelectric)?);
        let mut dev = FeSquidDevice::new(model, self.superconductor, self.fesquid);
        dev.pulse(self.bias.v_write);
        let lo = dev.critical_current()?;
        dev.pulse(-self.bias.v_write);
        let hi = dev.critical_current()?;
        Ok((lo, hi))
    }

    fn write_violations(&self) -> Vec<String> {
        let b = &self.bias;
        let v_c = self.ferroelectric.v_c;
        if !(b.v_write / 2.0 < v_c && v_c < b.v_write) {
            vec![format!(
                "V/2 write scheme requires |V_WRITE|/2 < |V_C| < |V_WRITE| (V_WRITE = {} V, V_C = {} V)",
                b.v_write, v_c
            )]
        } else {
            Vec::new()
        }
    }

    fn exact_violations(&self, ic: Option<(f64, f64)>) -> Vec<String> {
        match ic {
            Some((lo, hi)) if !(lo < self.bias.i_rwl_exact && self.bias.i_rwl_exact < hi) => {
                vec![format!(
                    "exact mode requires I_C,low < I_RWL < I_C,high (I_C,low = {:.4} µA, I_RWL = {:.4} µA, I_C,high = {:.4} µA)",
                    lo * 1e6,
                    self.bias.i_rwl_exact * 1e6,
                    hi * 1e6
                )]
            }
            _ => Vec::new(),
        }
    }

    fn hd_violations(&self, ic: Option<(f64, f64)>) -> Vec<String> {
        match ic {
            Some((_, hi)) if !(self.bias.i_rwl_hd > hi) => vec![format!(
                "HD mode requires I_RWL > I_C,high (I_RWL = {:.4} µA, I_C,high = {:.4} µA)",
                self.bias.i_rwl_hd * 1e6,
                hi * 1e6
            )],
            _ => Vec::new(),
        }
    }

    /// All violated constraints across devices, write scheme and both bias windows.
    pub fn violations(&self) -> Vec<String> {
        let mut out = self.superconductor.violations(self.fesquid.t_op);
        out.extend(self.ferroelectric.violations());
        out.extend(self.fesquid.violations());
        out.extend(self.htron.violations());
        let b = &self.bias;
        for (name, v) in [
            ("i_rwl_exact", b.i_rwl_exact),
            ("i_rwl_hd", b.i_rwl_hd),
            ("t_search", b.t_search),
            ("r_fs_exact", b.r_fs_exact),
            ("v_write", b.v_write),
        ] {
            if !(v > 0.0) {
                out.push(format!("{name} must be > 0 (got {v})"));
            }
        }
        if !(b.i_rbl_on > self.htron.i_g_crit) {
            out.push(format!(
                "asserted RBL current ({} A) must exceed the hTron gate threshold ({} A)",
                b.i_rbl_on, self.htron.i_g_crit
            ));
        }
        out.extend(self.write_violations());
        if out.is_empty() {
            match self.written_critical_currents() {
                Ok(ic) => {
                    out.extend(self.exact_violations(Some(ic)));
                    out.extend(self.hd_violations(Some(ic)));
                }
                Err(e) => out.push(e.to_string()),
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(v))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TcamCell {
    pub fs1: FeSquidDevice,
    pub fs2: FeSquidDevice,
    pub ht1: HtronDevice,
    pub ht2: HtronDevice,
}

impl TcamCell {
    pub fn remnant_states(&self) -> (RemnantState, RemnantState) {
        (self.fs1.stored_state(), self.fs2.stored_state())
    }

    /// Stored bit, if the two FeSQUIDs hold a valid complementary pair.
    pub fn stored_bit(&self) -> Option<bool> {
        match self.remnant_states() {
            (RemnantState::Negative, RemnantState::Positive) => Some(true),
            (RemnantState::Positive, RemnantState::Negative) => Some(false),
            _ => None,
        }
    }
}

/// Match-line outcome of one row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchLineResult {
    /// Match-line voltage (V).
    pub v_ml: f64,
    /// Columns whose stored bit equals the key bit (or whose key trit is d).
    pub n_match: usize,
    /// Total RWL current into the row (A).
    pub i_total: f64,
    /// I_total · V_ML (W).
    pub power: f64,
    /// power · t_search (J).
    pub energy: f64,
    /// Search latency (s): one hTron switching event.
    pub latency: f64,
}

/// Resolved electrical state of one cell under search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellSolve {
    /// Parallel conductance of the two branches (S); `None` for a superconducting short.
    pub conductance: Option<f64>,
    pub fs_resistive: [bool; 2],
    pub htron: [ChannelState; 2],
    pub branch_current: [f64; 2],
}

#[derive(Debug, Clone)]
pub struct TcamArray {
    rows: usize,
    cols: usize,
    cells: Vec<TcamCell>,
    params: TcamParams,
}

impl TcamArray {
    /// Builds an array of virgin (demagnetized) cells. Parameters are validated as a whole.
    pub fn new(rows: usize, cols: usize, params: TcamParams) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Usage(format!("array must be non-empty (got {rows}×{cols})")));
        }
        params.validate()?;
        let model = Arc::new(PreisachModel::new(params.ferroelectric)?);
        let fs = FeSquidDevice::new(model, params.superconductor, params.fesquid);
        let ht = HtronDevice::new(params.htron);
        let cell = TcamCell {
            fs1: fs.clone(),
            fs2: fs,
            ht1: ht.clone(),
            ht2: ht,
        };
        Ok(Self {
            rows,
            cols,
            cells: vec![cell; rows * cols],
            params,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn params(&self) -> &TcamParams {
        &self.params
    }

    pub fn bias(&self) -> &BiasConfig {
        &self.params.bias
    }

    /// Replaces the bias after re-validating every constraint.
    pub fn set_bias(&mut self, bias: BiasConfig) -> Result<()> {
        let next = TcamParams { bias, ..self.params };
        next.validate()?;
        self.params = next;
        Ok(())
    }

    pub fn cell(&self, row: usize, col: usize) -> &TcamCell {
        &self.cells[row * self.cols + col]
    }

    pub fn remnant_states(&self) -> Vec<(RemnantState, RemnantState)> {
        self.cells.iter().map(TcamCell::remnant_states).collect()
    }

    /// Stored word of a row; `None` where a cell holds no valid pair.
    pub fn stored_word(&self, row: usize) -> Vec<Option<bool>> {
        (0..self.cols).map(|c| self.cell(row, c).stored_bit()).collect()
    }

    fn check_index(&self, row: usize, col: usize) -> Result<()> {
        if row >= self.rows || col >= self.cols {
            return Err(Error::Usage(format!(
                "cell ({row}, {col}) outside {}×{} array",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    /// V/2 write: the selected cell sees ±V_WRITE, cells sharing its row or
    /// column see half of it, every other cell sees 0 V.
    pub fn write_bit(&mut self, row: usize, col: usize, value: bool) -> Result<()> {
        self.check_index(row, col)?;
        let v = self.params.write_violations();
        if !v.is_empty() {
            return Err(Error::Config(v));
        }
        let stored = if value {
            RemnantState::Negative
        } else {
            RemnantState::Positive
        };
        let v1 = stored.write_sign() * self.params.bias.v_write;
        let v2 = -v1;
        for r in 0..self.rows {
            for c in 0..self.cols {
                let scale = match (r == row, c == col) {
                    (true, true) => 1.0,
                    (true, false) | (false, true) => 0.5,
                    (false, false) => continue,
                };
                let cell = &mut self.cells[r * self.cols + c];
                cell.fs1.pulse(scale * v1);
                cell.fs2.pulse(scale * v2);
            }
        }
        Ok(())
    }

    pub fn store_word(&mut self, row: usize, bits: &[bool]) -> Result<()> {
        if bits.len() != self.cols {
            return Err(Error::Usage(format!(
                "word has {} bits, array is {} columns wide",
                bits.len(),
                self.cols
            )));
        }
        if row >= self.rows {
            return Err(Error::Usage(format!("row {row} outside {} rows", self.rows)));
        }
        for (c, &b) in bits.iter().enumerate() {
            self.write_bit(row, c, b)?;
        }
        Ok(())
    }

    pub fn search_exact(&self, key: &SearchKey) -> Result<Vec<MatchLineResult>> {
        self.check_key(key)?;
        let ic = self.params.written_critical_currents()?;
        let v = self.params.exact_violations(Some(ic));
        if !v.is_empty() {
            return Err(Error::Config(v));
        }
        self.search(key, SearchMode::Exact)
    }

    pub fn search_hd(&self, key: &SearchKey) -> Result<Vec<MatchLineResult>> {
        self.check_key(key)?;
        if key.0.contains(&Trit::DontCare) {
            return Err(Error::UnsupportedMode(
                "HD mode has no don't-care term; key contains 'd'".into(),
            ));
        }
        let ic = self.params.written_critical_currents()?;
        let v = self.params.hd_violations(Some(ic));
        if !v.is_empty() {
            return Err(Error::Config(v));
        }
        self.search(key, SearchMode::Hd)
    }

    pub fn search_mode(&self, key: &SearchKey, mode: SearchMode) -> Result<Vec<MatchLineResult>> {
        match mode {
            SearchMode::Exact => self.search_exact(key),
            SearchMode::Hd => self.search_hd(key),
        }
    }

    fn check_key(&self, key: &SearchKey) -> Result<()> {
        if key.len() != self.cols {
            return Err(Error::Usage(format!(
                "key has {} trits, array is {} columns wide",
                key.len(),
                self.cols
            )));
        }
        Ok(())
    }

    fn rwl_current(&self, mode: SearchMode) -> f64 {
        match mode {
            SearchMode::Exact => self.params.bias.i_rwl_exact,
            SearchMode::Hd => self.params.bias.i_rwl_hd,
        }
    }

    fn search(&self, key: &SearchKey, mode: SearchMode) -> Result<Vec<MatchLineResult>> {
        (0..self.rows).map(|r| self.search_row(r, key, mode)).collect()
    }

    /// Circuit-level solve of one row: per-cell device states under the cell's
    /// RWL share, then the parallel conductance network of the match line.
    pub fn search_row(&self, row: usize, key: &SearchKey, mode: SearchMode) -> Result<MatchLineResult> {
        self.check_key(key)?;
        let i_cell = self.rwl_current(mode);
        let mut g_total = 0.0;
        let mut shorted = false;
        let mut n_match = 0;
        for (c, &trit) in key.0.iter().enumerate() {
            let cell = self.cell(row, c);
            let solve = self.solve_cell(cell, trit, mode, i_cell)?;
            match solve.conductance {
                Some(g) => g_total += g,
                None => shorted = true,
            }
            let matched = match (trit, cell.stored_bit()) {
                (Trit::DontCare, _) => true,
                (Trit::One, Some(b)) | (Trit::Zero, Some(b)) => b == (trit == Trit::One),
                (_, None) => false,
            };
            n_match += usize::from(matched);
        }
        let i_total = i_cell * self.cols as f64;
        let v_ml = if shorted || i_total == 0.0 {
            0.0
        } else {
            i_total / g_total
        };
        let t = self.params.bias.t_search;
        let power = i_total * v_ml;
        Ok(MatchLineResult {
            v_ml,
            n_match,
            i_total,
            power,
            energy: power * t,
            latency: self.params.htron.t_switch,
        })
    }

    /// Self-consistent state of one cell carrying `i_cell`.
    ///
    /// Devices start superconducting; a FeSQUID switches once its branch current
    /// exceeds its critical current, an hTron once its gate or channel current
    /// exceeds threshold. Switching only goes superconducting → resistive.
    pub fn solve_cell(&self, cell: &TcamCell, trit: Trit, mode: SearchMode, i_cell: f64) -> Result<CellSolve> {
        let on = self.params.bias.i_rbl_on;
        let gates = match trit {
            Trit::One => [on, 0.0],
            Trit::Zero => [0.0, on],
            Trit::DontCare => [on, on],
        };
        let fs = [&cell.fs1, &cell.fs2];
        let ic = [
            critical_current_at(fs[0].remnant_fraction(), fs[0].params.t_op, &fs[0].sc)?,
            critical_current_at(fs[1].remnant_fraction(), fs[1].params.t_op, &fs[1].sc)?,
        ];
        let r_fs = match mode {
            SearchMode::Exact => [self.params.bias.r_fs_exact; 2],
            SearchMode::Hd => [fs[0].state_resistance(), fs[1].state_resistance()],
        };
        let mut ht = [cell.ht1.clone(), cell.ht2.clone()];
        for k in 0..2 {
            ht[k].apply_drive(gates[k], 0.0);
        }
        let mut fs_res = [false; 2];
        let mut current = [0.0; 2];
        for _ in 0..8 {
            let r = [0, 1].map(|k| ht[k].channel_resistance() + if fs_res[k] { r_fs[k] } else { 0.0 });
            let zeros = r.iter().filter(|&&x| x == 0.0).count();
            current = if zeros > 0 {
                r.map(|x| if x == 0.0 { i_cell / zeros as f64 } else { 0.0 })
            } else {
                let g = r.map(|x| 1.0 / x);
                let gs = g[0] + g[1];
                g.map(|x| i_cell * x / gs)
            };
            let mut changed = false;
            for k in 0..2 {
                if !fs_res[k] && current[k] > ic[k] {
                    fs_res[k] = true;
                    changed = true;
                }
                let before = ht[k].state();
                if ht[k].apply_drive(gates[k], current[k]) != before {
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let r = [0, 1].map(|k| ht[k].channel_resistance() + if fs_res[k] { r_fs[k] } else { 0.0 });
        let conductance = if r.contains(&0.0) {
            None
        } else {
            Some(1.0 / r[0] + 1.0 / r[1])
        };
        Ok(CellSolve {
            conductance,
            fs_resistive: fs_res,
            htron: [ht[0].state(), ht[1].state()],
            branch_current: current,
        })
    }
}

/// Average exact-mode row energy of a 1-bit array over the four binary
/// (data, search) cases and over the six ternary cases (J).
pub fn measured_average_energies(params: &TcamParams) -> Result<(f64, f64)> {
    let mut binary = Vec::with_capacity(4);
    let mut ternary = Vec::with_capacity(6);
    for data in [false, true] {
        let mut a = TcamArray::new(1, 1, *params)?;
        a.write_bit(0, 0, data)?;
        for trit in [Trit::Zero, Trit::One, Trit::DontCare] {
            let e = a.search_exact(&SearchKey(vec![trit]))?[0].energy;
            if trit != Trit::DontCare {
                binary.push(e);
            }
            ternary.push(e);
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    Ok((mean(&binary), mean(&ternary)))
}

/// `base` with the exact-mode RWL current and switched-FeSQUID resistance
/// replaced by the values that reproduce the given average energies.
pub fn calibrated_bias(base: BiasConfig, r_off: f64, binary_avg: f64, ternary_avg: f64) -> Result<BiasConfig> {
    let cal = calibrate_exact_bias(binary_avg, ternary_avg, base.t_search, r_off)?;
    Ok(BiasConfig {
        i_rwl_exact: cal.i_rwl,
        r_fs_exact: cal.r_fs,
        ..base
    })
}
