//! TOML run configuration.
//!
//! Keys carry their unit in the name (`i_rwl_hd_uA`, `t_search_ns`, ...). Every
//! key is optional; omitted keys take the documented defaults, and
//! [`RunConfig::to_toml`] echoes the fully resolved file.
//!
//! ```toml
//! [superconductor]
//! t_c_base_K = 9.2
//! delta_tc_K = 2.4
//! r_n_ohm = 700.0
//!
//! [ferroelectric]
//! v_c_V = 1.2
//! sigma_v_V = 0.15
//! p_s_uC_cm2 = 30.0
//! grid_n = 64
//!
//! [fesquid]
//! t_op_K = 4.0
//! r_low_state_kohm = 1.8
//! r_high_state_kohm = 0.9
//!
//! [htron]
//! i_g_crit_uA = 20.0
//! i_ch_crit_uA = 60.0
//! r_off_kohm = 50.0
//! t_switch_ns = 0.3
//!
//! [bias]
//! i_rwl_exact_uA = 3.1995833
//! i_rwl_hd_uA = 5.0
//! i_rbl_on_uA = 40.0
//! v_write_V = 2.0
//! t_search_ns = 0.3
//! r_fs_exact_kohm = 0.9016176
//!
//! [rcsj]
//! beta_c = 0.1
//! n_steps = 1000
//! settle_periods = 50
//! average_periods = 200
//!
//! [hdc]
//! dim = 10000
//! n_gram = 3
//! block_size = 100
//!
//! [run]
//! seed = 2024
//! output_dir = "out"
//! ```
#![allow(non_snake_case)]

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fesquid::FeSquidParams;
use crate::htron::HtronParams;
use crate::physics::SuperconductorParams;
use crate::preisach::FerroelectricParams;
use crate::rcsj::RcsjParams;
use crate::tcam::{BiasConfig, TcamParams};

/// Display units per SI unit.
const UA: f64 = 1e6;
const NS: f64 = 1e9;
const KOHM: f64 = 1e-3;
/// µC/cm² per C/m².
const UC_CM2: f64 = 1e2;

fn to_si(x: f64, per_si: f64) -> f64 {
    if per_si >= 1.0 {
        x / per_si
    } else {
        x * (1.0 / per_si)
    }
}

/// Shortest decimal in display units that converts back to exactly `si`.
fn from_si(si: f64, per_si: f64) -> f64 {
    let approx = si * per_si;
    (0..17)
        .filter_map(|digits| format!("{approx:.digits$e}").parse::<f64>().ok())
        .find(|&d| to_si(d, per_si) == si)
        .unwrap_or(approx)
}

pub const DEFAULT_SEED: u64 = 2024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HdcSettings {
    pub dim: usize,
    pub n_gram: usize,
    pub block_size: usize,
}

impl Default for HdcSettings {
    fn default() -> Self {
        Self {
            dim: 10_000,
            n_gram: 3,
            block_size: 100,
        }
    }
}

/// Fully resolved configuration in SI units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub tcam: TcamParams,
    pub rcsj: RcsjParams,
    pub hdc: HdcSettings,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tcam: TcamParams::default(),
            rcsj: RcsjParams::default(),
            hdc: HdcSettings::default(),
            seed: DEFAULT_SEED,
            output_dir: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperconductorSection {
    pub t_c_base_K: Option<f64>,
    pub delta_tc_K: Option<f64>,
    pub r_n_ohm: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FerroelectricSection {
    pub v_c_V: Option<f64>,
    pub sigma_v_V: Option<f64>,
    pub p_s_uC_cm2: Option<f64>,
    pub grid_n: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeSquidSection {
    pub t_op_K: Option<f64>,
    pub r_low_state_kohm: Option<f64>,
    pub r_high_state_kohm: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HtronSection {
    pub i_g_crit_uA: Option<f64>,
    pub i_ch_crit_uA: Option<f64>,
    pub r_off_kohm: Option<f64>,
    pub t_switch_ns: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiasSection {
    pub i_rwl_exact_uA: Option<f64>,
    pub i_rwl_hd_uA: Option<f64>,
    pub i_rbl_on_uA: Option<f64>,
    pub v_write_V: Option<f64>,
    pub t_search_ns: Option<f64>,
    pub r_fs_exact_kohm: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RcsjSection {
    pub beta_c: Option<f64>,
    pub n_steps: Option<usize>,
    pub settle_periods: Option<usize>,
    pub average_periods: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HdcSection {
    pub dim: Option<usize>,
    pub n_gram: Option<usize>,
    pub block_size: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
}

/// The on-disk layout, with every key optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub superconductor: SuperconductorSection,
    #[serde(default)]
    pub ferroelectric: FerroelectricSection,
    #[serde(default)]
    pub fesquid: FeSquidSection,
    #[serde(default)]
    pub htron: HtronSection,
    #[serde(default)]
    pub bias: BiasSection,
    #[serde(default)]
    pub rcsj: RcsjSection,
    #[serde(default)]
    pub hdc: HdcSection,
    #[serde(default)]
    pub run: RunSection,
}

fn scaled(v: Option<f64>, per_si: f64, default: f64) -> f64 {
    v.map_or(default, |x| to_si(x, per_si))
}

impl ConfigFile {
    pub fn resolve(&self) -> RunConfig {
        let d = RunConfig::default();
        let (sc, fe, fs, ht, b) = (
            d.tcam.superconductor,
            d.tcam.ferroelectric,
            d.tcam.fesquid,
            d.tcam.htron,
            d.tcam.bias,
        );
        let s = &self.superconductor;
        let f = &self.ferroelectric;
        let q = &self.fesquid;
        let h = &self.htron;
        let bi = &self.bias;
        let r = &self.rcsj;
        let hd = &self.hdc;
        RunConfig {
            tcam: TcamParams {
                superconductor: SuperconductorParams {
                    t_c_base: s.t_c_base_K.unwrap_or(sc.t_c_base),
                    delta_tc: s.delta_tc_K.unwrap_or(sc.delta_tc),
                    r_n: s.r_n_ohm.unwrap_or(sc.r_n),
                },
                ferroelectric: FerroelectricParams {
                    v_c: f.v_c_V.unwrap_or(fe.v_c),
                    sigma_v: f.sigma_v_V.unwrap_or(fe.sigma_v),
                    p_s: scaled(f.p_s_uC_cm2, UC_CM2, fe.p_s),
                    grid_n: f.grid_n.unwrap_or(fe.grid_n),
                },
                fesquid: FeSquidParams {
                    t_op: q.t_op_K.unwrap_or(fs.t_op),
                    r_low_state: scaled(q.r_low_state_kohm, KOHM, fs.r_low_state),
                    r_high_state: scaled(q.r_high_state_kohm, KOHM, fs.r_high_state),
                },
                htron: HtronParams {
                    i_g_crit: scaled(h.i_g_crit_uA, UA, ht.i_g_crit),
                    i_ch_crit: scaled(h.i_ch_crit_uA, UA, ht.i_ch_crit),
                    r_off: scaled(h.r_off_kohm, KOHM, ht.r_off),
                    t_switch: scaled(h.t_switch_ns, NS, ht.t_switch),
                },
                bias: BiasConfig {
                    i_rwl_exact: scaled(bi.i_rwl_exact_uA, UA, b.i_rwl_exact),
                    i_rwl_hd: scaled(bi.i_rwl_hd_uA, UA, b.i_rwl_hd),
                    i_rbl_on: scaled(bi.i_rbl_on_uA, UA, b.i_rbl_on),
                    v_write: bi.v_write_V.unwrap_or(b.v_write),
                    t_search: scaled(bi.t_search_ns, NS, b.t_search),
                    r_fs_exact: scaled(bi.r_fs_exact_kohm, KOHM, b.r_fs_exact),
                },
            },
            rcsj: RcsjParams {
                beta_c: r.beta_c.unwrap_or(d.rcsj.beta_c),
                n_steps: r.n_steps.unwrap_or(d.rcsj.n_steps),
                settle_periods: r.settle_periods.unwrap_or(d.rcsj.settle_periods),
                average_periods: r.average_periods.unwrap_or(d.rcsj.average_periods),
            },
            hdc: HdcSettings {
                dim: hd.dim.unwrap_or(d.hdc.dim),
                n_gram: hd.n_gram.unwrap_or(d.hdc.n_gram),
                block_size: hd.block_size.unwrap_or(d.hdc.block_size),
            },
            seed: self.run.seed.unwrap_or(d.seed),
            output_dir: self.run.output_dir.clone(),
        }
    }
}

impl From<&RunConfig> for ConfigFile {
    fn from(c: &RunConfig) -> Self {
        let t = &c.tcam;
        ConfigFile {
            superconductor: SuperconductorSection {
                t_c_base_K: Some(t.superconductor.t_c_base),
                delta_tc_K: Some(t.superconductor.delta_tc),
                r_n_ohm: Some(t.superconductor.r_n),
            },
            ferroelectric: FerroelectricSection {
                v_c_V: Some(t.ferroelectric.v_c),
                sigma_v_V: Some(t.ferroelectric.sigma_v),
                p_s_uC_cm2: Some(from_si(t.ferroelectric.p_s, UC_CM2)),
                grid_n: Some(t.ferroelectric.grid_n),
            },
            fesquid: FeSquidSection {
                t_op_K: Some(t.fesquid.t_op),
                r_low_state_kohm: Some(from_si(t.fesquid.r_low_state, KOHM)),
                r_high_state_kohm: Some(from_si(t.fesquid.r_high_state, KOHM)),
            },
            htron: HtronSection {
                i_g_crit_uA: Some(from_si(t.htron.i_g_crit, UA)),
                i_ch_crit_uA: Some(from_si(t.htron.i_ch_crit, UA)),
                r_off_kohm: Some(from_si(t.htron.r_off, KOHM)),
                t_switch_ns: Some(from_si(t.htron.t_switch, NS)),
            },
            bias: BiasSection {
                i_rwl_exact_uA: Some(from_si(t.bias.i_rwl_exact, UA)),
                i_rwl_hd_uA: Some(from_si(t.bias.i_rwl_hd, UA)),
                i_rbl_on_uA: Some(from_si(t.bias.i_rbl_on, UA)),
                v_write_V: Some(t.bias.v_write),
                t_search_ns: Some(from_si(t.bias.t_search, NS)),
                r_fs_exact_kohm: Some(from_si(t.bias.r_fs_exact, KOHM)),
            },
            rcsj: RcsjSection {
                beta_c: Some(c.rcsj.beta_c),
                n_steps: Some(c.rcsj.n_steps),
                settle_periods: Some(c.rcsj.settle_periods),
                average_periods: Some(c.rcsj.average_periods),
            },
            hdc: HdcSection {
                dim: Some(c.hdc.dim),
                n_gram: Some(c.hdc.n_gram),
                block_size: Some(c.hdc.block_size),
            },
            run: RunSection {
                seed: Some(c.seed),
                output_dir: c.output_dir.clone(),
            },
        }
    }
}

fn line_of(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].matches('\n').count() + 1
}

impl RunConfig {
    /// Parses without validating, so that flag overrides can be applied first.
    pub fn parse_unvalidated(src: &str, path: &Path) -> Result<Self> {
        let file: ConfigFile = toml::from_str(src).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.span().map_or(1, |s| line_of(src, s.start)),
            message: e.message().to_string(),
        })?;
        Ok(file.resolve())
    }

    pub fn from_toml_str(src: &str, path: &Path) -> Result<Self> {
        let c = Self::parse_unvalidated(src, path)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading config {}", path.display()), e))?;
        Self::from_toml_str(&src, path)
    }

    /// Every violated constraint, across devices, bias windows, RCSJ and HDC settings.
    pub fn violations(&self) -> Vec<String> {
        let mut out = self.tcam.violations();
        out.extend(self.rcsj.violations());
        if self.hdc.dim == 0 {
            out.push("hdc dim must be >= 1".into());
        }
        if self.hdc.n_gram == 0 {
            out.push("hdc n_gram must be >= 1".into());
        }
        if self.hdc.block_size == 0 {
            out.push("hdc block_size must be >= 1".into());
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

    /// The resolved configuration as a complete TOML file.
    pub fn to_toml(&self) -> String {
        toml::to_string(&ConfigFile::from(self)).expect("config serializes")
    }
}
