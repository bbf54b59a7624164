//! Python bindings for the cryocam simulator.

use std::sync::Arc;

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cryocam::error::Category;
use cryocam::fesquid::{FeSquidDevice, FeSquidParams, RemnantState};
use cryocam::hdc::{self, BlockPlan, Corpus, Engine};
use cryocam::htron::{ChannelState, HtronDevice, HtronParams};
use cryocam::physics::{self, SuperconductorParams};
use cryocam::preisach::{self, FerroelectricParams};
use cryocam::rcsj::{self, RcsjParams};
use cryocam::tcam::{self, formula, SearchKey, SearchMode, TcamParams};

fn py_err(e: cryocam::Error) -> PyErr {
    match e.category() {
        Category::Io => PyIOError::new_err(e.to_string()),
        Category::Numeric => PyRuntimeError::new_err(e.to_string()),
        Category::Usage | Category::Validation => PyValueError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for cryocam::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

/// BCS gap Δ(T) in joules.
#[pyfunction]
fn bcs_gap(t: f64, t_c: f64) -> PyResult<f64> {
    physics::bcs_gap(t, t_c).py()
}

/// Ambegaokar-Baratoff critical current in amperes.
#[pyfunction]
fn ab_critical_current(delta: f64, t: f64, r_n: f64) -> PyResult<f64> {
    physics::ab_critical_current(delta, t, r_n).py()
}

/// Critical current at remnant polarization fraction `p` (-1 = PR-, +1 = PR+).
#[pyfunction]
#[pyo3(signature = (p, t, t_c_base = 9.2, delta_tc = 2.4, r_n = 700.0))]
fn critical_current(p: f64, t: f64, t_c_base: f64, delta_tc: f64, r_n: f64) -> PyResult<f64> {
    let sc = SuperconductorParams {
        t_c_base,
        delta_tc,
        r_n,
    };
    physics::critical_current_at(p, t, &sc).py()
}

#[pyfunction]
#[pyo3(signature = (n_bits, n_match, i_rwl_per_bit = formula::I_RWL_HD))]
fn ml_voltage(n_bits: usize, n_match: usize, i_rwl_per_bit: f64) -> PyResult<f64> {
    formula::ml_voltage_closed_form(n_bits, n_match, i_rwl_per_bit).py()
}

#[pyfunction]
#[pyo3(signature = (n_bits, v_ml, i_rwl_per_bit = formula::I_RWL_HD))]
fn decode_n_match(n_bits: usize, v_ml: f64, i_rwl_per_bit: f64) -> PyResult<usize> {
    formula::decode_n_match(n_bits, v_ml, i_rwl_per_bit).py()
}

#[pyfunction]
#[pyo3(signature = (v_ml, n_bits, i_rwl_per_bit = formula::I_RWL_HD, t_search = formula::T_SEARCH))]
fn search_energy(v_ml: f64, n_bits: usize, i_rwl_per_bit: f64, t_search: f64) -> f64 {
    formula::search_energy(v_ml, n_bits, i_rwl_per_bit, t_search)
}

/// Returns (I_RWL in A, switched FeSQUID resistance in Ω).
#[pyfunction]
#[pyo3(signature = (binary_avg = tcam::BINARY_AVG_TARGET, ternary_avg = tcam::TERNARY_AVG_TARGET))]
fn calibrate_exact_bias(binary_avg: f64, ternary_avg: f64) -> PyResult<(f64, f64)> {
    let c = formula::calibrate_exact_bias(binary_avg, ternary_avg, formula::T_SEARCH, formula::R_HTRON_OFF).py()?;
    Ok((c.i_rwl, c.r_fs))
}

/// Time-averaged RCSJ I-V as a list of (I, V) pairs.
#[pyfunction]
#[pyo3(signature = (i_c, r, currents, beta_c = 0.1))]
fn rcsj_iv(i_c: f64, r: f64, currents: Vec<f64>, beta_c: f64) -> PyResult<Vec<(f64, f64)>> {
    let p = RcsjParams {
        beta_c,
        ..Default::default()
    };
    let c = rcsj::rcsj_iv(i_c, r, &currents, &p).py()?;
    Ok(c.points.iter().map(|p| (p.i, p.v)).collect())
}

type SweepTuple = (usize, usize, f64, Option<f64>);

/// Rows of (d_bits, block_size, energy_J, sram_reference_J or None).
#[pyfunction]
#[pyo3(signature = (dims, block_sizes, match_fraction = 0.5))]
fn energy_sweep(
    dims: Vec<usize>,
    block_sizes: Vec<usize>,
    match_fraction: f64,
) -> PyResult<Vec<SweepTuple>> {
    let rows = hdc::energy_sweep(&dims, &block_sizes, match_fraction, &BlockPlan::default()).py()?;
    Ok(rows
        .iter()
        .map(|r| (r.d_bits, r.block_size, r.energy_fesquid, r.energy_sram_ref))
        .collect())
}

/// Preisach ferroelectric with its own relay state.
#[pyclass(name = "Preisach")]
struct PyPreisach {
    model: preisach::PreisachModel,
    state: preisach::PreisachState,
}

#[pymethods]
impl PyPreisach {
    #[new]
    #[pyo3(signature = (v_c = 1.2, sigma_v = 0.15, p_s = 0.30, grid_n = 64))]
    fn new(v_c: f64, sigma_v: f64, p_s: f64, grid_n: usize) -> PyResult<Self> {
        let model = preisach::PreisachModel::new(FerroelectricParams {
            v_c,
            sigma_v,
            p_s,
            grid_n,
        })
        .py()?;
        let state = model.demagnetized_state();
        Ok(Self { model, state })
    }

    /// Applies a voltage; returns P in C/m².
    fn apply(&mut self, v: f64) -> f64 {
        self.model.apply_voltage(&mut self.state, v)
    }

    fn apply_waveform(&mut self, samples: Vec<f64>) -> PyResult<Vec<f64>> {
        self.model.apply_waveform(&mut self.state, &samples).py()
    }

    fn polarization(&self) -> f64 {
        self.model.polarization(&self.state)
    }

    fn remnant_fraction(&self) -> f64 {
        self.model.remnant_fraction(&self.state)
    }

    fn reset(&mut self) {
        self.state = self.model.demagnetized_state();
    }
}

fn remnant_label(s: RemnantState) -> &'static str {
    s.label()
}

#[pyclass(name = "FeSquid")]
struct PyFeSquid {
    dev: FeSquidDevice,
}

#[pymethods]
impl PyFeSquid {
    #[new]
    fn new() -> PyResult<Self> {
        let model = Arc::new(preisach::PreisachModel::new(FerroelectricParams::default()).py()?);
        Ok(Self {
            dev: FeSquidDevice::new(model, SuperconductorParams::default(), FeSquidParams::default()),
        })
    }

    fn pulse(&mut self, v: f64) {
        self.dev.pulse(v);
    }

    /// "PR-" or "PR+".
    fn stored_state(&self) -> &'static str {
        remnant_label(self.dev.stored_state())
    }

    fn remnant_fraction(&self) -> f64 {
        self.dev.remnant_fraction()
    }

    fn critical_current(&self) -> PyResult<f64> {
        self.dev.critical_current().py()
    }

    fn branch_voltage(&self, i: f64) -> PyResult<f64> {
        self.dev.branch_voltage(i).py()
    }
}

#[pyclass(name = "Htron")]
struct PyHtron {
    dev: HtronDevice,
}

#[pymethods]
impl PyHtron {
    #[new]
    fn new() -> Self {
        Self {
            dev: HtronDevice::new(HtronParams::default()),
        }
    }

    /// Drives gate and channel currents; returns True when the channel is resistive.
    fn drive(&mut self, i_gate: f64, i_channel: f64) -> bool {
        self.dev.apply_drive(i_gate, i_channel) == ChannelState::Resistive
    }

    fn channel_resistance(&self) -> f64 {
        self.dev.channel_resistance()
    }
}

#[pyclass(name = "Tcam")]
struct PyTcam {
    array: tcam::TcamArray,
}

#[pymethods]
impl PyTcam {
    #[new]
    fn new(rows: usize, cols: usize) -> PyResult<Self> {
        Ok(Self {
            array: tcam::TcamArray::new(rows, cols, TcamParams::default()).py()?,
        })
    }

    /// Stores a word given as a string of 0/1.
    fn store_word(&mut self, row: usize, word: &str) -> PyResult<()> {
        let bits = tcam::parse_word(word).py()?;
        self.array.store_word(row, &bits).py()
    }

    fn write_bit(&mut self, row: usize, col: usize, value: bool) -> PyResult<()> {
        self.array.write_bit(row, col, value).py()
    }

    /// Searches every row; `mode` is "exact" or "hd". Returns one dict per row.
    #[pyo3(signature = (key, mode = "exact"))]
    fn search<'py>(&self, py: Python<'py>, key: &str, mode: &str) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let key: SearchKey = key.parse().py()?;
        let mode: SearchMode = mode.parse().py()?;
        let rows = self.array.search_mode(&key, mode).py()?;
        rows.iter()
            .map(|r| {
                let d = PyDict::new(py);
                d.set_item("v_ml", r.v_ml)?;
                d.set_item("n_match", r.n_match)?;
                d.set_item("power", r.power)?;
                d.set_item("energy", r.energy)?;
                d.set_item("latency", r.latency)?;
                Ok(d)
            })
            .collect()
    }
}

#[pyclass(name = "HdcModel")]
struct PyHdcModel {
    model: hdc::HdcModel,
}

#[pymethods]
impl PyHdcModel {
    /// Trains on {label: [texts]}.
    #[staticmethod]
    #[pyo3(signature = (corpus, dim = 10_000, n_gram = 3, seed = 2024))]
    fn train(corpus: Vec<(String, Vec<String>)>, dim: usize, n_gram: usize, seed: u64) -> PyResult<Self> {
        let corpus = Corpus {
            classes: corpus
                .into_iter()
                .map(|(label, texts)| hdc::ClassTexts { label, texts })
                .collect(),
        };
        Ok(Self {
            model: hdc::HdcModel::train(&corpus, dim, n_gram, seed).py()?,
        })
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(Self {
            model: hdc::HdcModel::from_json(s).py()?,
        })
    }

    fn to_json(&self) -> String {
        self.model.to_json()
    }

    fn labels(&self) -> Vec<String> {
        self.model.labels().into_iter().map(String::from).collect()
    }

    /// (label, per-class Hamming distances) from the popcount oracle.
    fn infer_exact(&self, text: &str) -> PyResult<(String, Vec<usize>)> {
        let q = self.model.encode(text).py()?;
        let r = self.model.infer_exact(&q).py()?;
        Ok((r.label, r.distances))
    }

    /// (label, per-class Hamming distances, per-class energy in J) via HD-mode TCAM blocks.
    #[pyo3(signature = (text, block_size = 100))]
    fn infer_tcam(&self, text: &str, block_size: usize) -> PyResult<(String, Vec<usize>, Vec<f64>)> {
        let q = self.model.encode(text).py()?;
        let r = self.model.infer_tcam(&q, &BlockPlan::new(block_size)).py()?;
        Ok((r.label, r.distances, r.energies))
    }

    /// Accuracy on [(label, text)] with the TCAM engine (block_size > 0) or the oracle.
    #[pyo3(signature = (samples, block_size = 0))]
    fn accuracy(&self, samples: Vec<(String, String)>, block_size: usize) -> PyResult<f64> {
        let mut corpus = Corpus::default();
        for (label, text) in samples {
            match corpus.classes.iter_mut().find(|c| c.label == label) {
                Some(c) => c.texts.push(text),
                None => corpus.classes.push(hdc::ClassTexts {
                    label,
                    texts: vec![text],
                }),
            }
        }
        let engine = if block_size == 0 {
            Engine::Exact
        } else {
            Engine::Tcam(BlockPlan::new(block_size))
        };
        self.model.accuracy_eval(&corpus, &engine).py()
    }
}

/// Seeded synthetic corpus: list of (label, [texts]).
#[pyfunction]
#[pyo3(signature = (n_classes, texts_per_class, text_len, seed = 2024, stream = 0))]
fn synthetic_corpus(
    n_classes: usize,
    texts_per_class: usize,
    text_len: usize,
    seed: u64,
    stream: u64,
) -> Vec<(String, Vec<String>)> {
    hdc::SyntheticLanguages::new(n_classes, seed)
        .corpus(texts_per_class, text_len, stream)
        .classes
        .into_iter()
        .map(|c| (c.label, c.texts))
        .collect()
}

#[pymodule]
fn pycryocam(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(bcs_gap, m)?)?;
    m.add_function(wrap_pyfunction!(ab_critical_current, m)?)?;
    m.add_function(wrap_pyfunction!(critical_current, m)?)?;
    m.add_function(wrap_pyfunction!(ml_voltage, m)?)?;
    m.add_function(wrap_pyfunction!(decode_n_match, m)?)?;
    m.add_function(wrap_pyfunction!(search_energy, m)?)?;
    m.add_function(wrap_pyfunction!(calibrate_exact_bias, m)?)?;
    m.add_function(wrap_pyfunction!(rcsj_iv, m)?)?;
    m.add_function(wrap_pyfunction!(energy_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(synthetic_corpus, m)?)?;
    m.add_class::<PyPreisach>()?;
    m.add_class::<PyFeSquid>()?;
    m.add_class::<PyHtron>()?;
    m.add_class::<PyTcam>()?;
    m.add_class::<PyHdcModel>()?;
    Ok(())
}
