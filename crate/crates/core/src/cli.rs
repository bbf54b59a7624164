//! Command-line front end.
//!
//! Every subcommand writes its artifacts plus `manifest.json` into the output
//! directory, chosen by `--out-dir`, then `CRYOCAM_OUT_DIR`, then
//! `[run] output_dir` in the config, then the working directory.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::fesquid::{FeSquidDevice, RemnantState};
use crate::hdc::{energy_sweep, BlockPlan, Corpus, Engine, HdcModel, SyntheticLanguages};
use crate::preisach::{triangle_wave, PreisachModel};
use crate::tcam::{
    calibrated_bias, measured_average_energies, parse_word, SearchKey, SearchMode, TcamArray,
    BINARY_AVG_TARGET, TERNARY_AVG_TARGET,
};

pub const OUT_DIR_ENV: &str = "CRYOCAM_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "cryocam", version, about = "FeSQUID/hTron TCAM and HDC simulator")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for artifacts.
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    out_dir: Option<PathBuf>,
    /// Seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// FeSQUID device characteristics.
    #[command(subcommand)]
    Device(DeviceCmd),
    /// Ferroelectric hysteresis.
    #[command(subcommand)]
    Fe(FeCmd),
    /// TCAM array operations.
    #[command(subcommand)]
    Tcam(TcamCmd),
    /// Hyperdimensional language recognition.
    #[command(subcommand)]
    Hdc(HdcCmd),
}

#[derive(Debug, Subcommand)]
enum DeviceCmd {
    /// Current-voltage curve of a FeSQUID in one remnant state.
    Iv(IvArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StateArg {
    #[value(name = "pr-")]
    PrMinus,
    #[value(name = "pr+")]
    PrPlus,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum IvModel {
    Rcsj,
    Behavioral,
}

#[derive(Debug, Args)]
struct IvArgs {
    #[arg(long, value_enum, default_value = "pr+")]
    state: StateArg,
    #[arg(long, value_enum, default_value = "rcsj")]
    model: IvModel,
    #[arg(long, default_value_t = 0.0)]
    i_start_ua: f64,
    #[arg(long, default_value_t = 10.0)]
    i_stop_ua: f64,
    #[arg(long, default_value_t = 51)]
    points: usize,
    /// Sweep back down after the up sweep.
    #[arg(long)]
    bidirectional: bool,
    #[arg(long)]
    beta_c: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum FeCmd {
    /// Triangular voltage sweep of the Preisach ferroelectric.
    Sweep(FeSweepArgs),
}

#[derive(Debug, Args)]
struct FeSweepArgs {
    /// Peak voltage (V); defaults to the write voltage.
    #[arg(long)]
    amplitude_v: Option<f64>,
    #[arg(long, default_value_t = 50)]
    points_per_quarter: usize,
    #[arg(long, default_value_t = 2)]
    cycles: usize,
}

#[derive(Debug, Subcommand)]
enum TcamCmd {
    /// Store words and search keys; input is words, a `---` line, then keys.
    Search(TcamSearchArgs),
    /// Solve the exact-mode bias from target average energies.
    Calibrate(CalibrateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Hd,
}

#[derive(Debug, Args)]
struct TcamSearchArgs {
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    i_rwl_ua: Option<f64>,
}

#[derive(Debug, Args)]
struct CalibrateArgs {
    #[arg(long, default_value_t = BINARY_AVG_TARGET * 1e18)]
    binary_aj: f64,
    #[arg(long, default_value_t = TERNARY_AVG_TARGET * 1e18)]
    ternary_aj: f64,
}

#[derive(Debug, Subcommand)]
enum HdcCmd {
    /// Train class vectors and write the model file.
    Train(TrainArgs),
    /// Classify a labeled corpus with a trained model.
    Infer(InferArgs),
    /// Per-comparison energy over dimensions and block sizes.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct CorpusArgs {
    /// Directory with one subdirectory of UTF-8 texts per label; omitted means a
    /// seeded synthetic corpus.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    classes: usize,
    #[arg(long, default_value_t = 10)]
    texts_per_class: usize,
    #[arg(long, default_value_t = 1000)]
    text_len: usize,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    n_gram: Option<usize>,
    #[arg(long, default_value = "model.json")]
    model_out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EngineArg {
    Tcam,
    Exact,
}

#[derive(Debug, Args)]
struct InferArgs {
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long, value_enum, default_value = "tcam")]
    engine: EngineArg,
    #[arg(long)]
    block_size: Option<usize>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Hypervector dimensions.
    #[arg(long = "d", value_delimiter = ',', default_value = "10000")]
    dims: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "10,50,100,500")]
    blocks: Vec<usize>,
    /// Fraction of matching bits per block.
    #[arg(long = "match", default_value_t = 0.5)]
    match_fraction: f64,
    /// Also train on the synthetic corpus at each D and report held-out accuracy.
    #[arg(long)]
    accuracy: bool,
}

/// Collected outputs of one run.
struct Run {
    out_dir: PathBuf,
    outputs: Vec<String>,
    summary: Value,
}

impl Run {
    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        write_atomic(&self.out_dir.join(name), contents.as_bytes())?;
        self.outputs.push(name.to_string());
        Ok(())
    }
}

/// Writes via a temporary file in the target directory and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| Error::io(format!("creating temporary file in {}", dir.display()), e))?;
    tmp.write_all(bytes)
        .map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
    tmp.persist(path)
        .map_err(|e| Error::io(format!("renaming into {}", path.display()), e.error))?;
    Ok(())
}

/// Shortest round-trip representation; locale independent.
fn num(x: f64) -> String {
    format!("{x:e}")
}

/// Parses argv, runs the subcommand and returns the process exit code.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 2,
            };
            let _ = e.print();
            if code != 0 {
                report(&Error::Usage(e.kind().to_string()));
            }
            return code;
        }
    };
    match execute(cli, &argv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("cryocam: {e}");
            report(&e);
            e.category().exit_code()
        }
    }
}

/// One JSON line on stderr for callers that parse failures.
fn report(e: &Error) {
    eprintln!(
        "{}",
        json!({"error": {"category": e.category().as_str(), "message": e.to_string()}})
    );
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => {
            let src = std::fs::read_to_string(p)
                .map_err(|e| Error::io(format!("reading config {}", p.display()), e))?;
            RunConfig::parse_unvalidated(&src, p)?
        }
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn execute(cli: Cli, argv: &[std::ffi::OsString]) -> Result<()> {
    let started = Instant::now();
    let mut cfg = load_config(&cli)?;
    apply_overrides(&mut cfg, &cli.command);
    cfg.validate()?;

    let out_dir = cli
        .out_dir
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let mut run = Run {
        out_dir,
        outputs: Vec::new(),
        summary: Value::Null,
    };
    let name = match &cli.command {
        Command::Device(DeviceCmd::Iv(a)) => {
            device_iv(&cfg, a, &mut run)?;
            "device iv"
        }
        Command::Fe(FeCmd::Sweep(a)) => {
            fe_sweep(&cfg, a, &mut run)?;
            "fe sweep"
        }
        Command::Tcam(TcamCmd::Search(a)) => {
            tcam_search(&cfg, a, &mut run)?;
            "tcam search"
        }
        Command::Tcam(TcamCmd::Calibrate(a)) => {
            tcam_calibrate(&cfg, a, &mut run)?;
            "tcam calibrate"
        }
        Command::Hdc(HdcCmd::Train(a)) => {
            hdc_train(&cfg, a, &mut run)?;
            "hdc train"
        }
        Command::Hdc(HdcCmd::Infer(a)) => {
            hdc_infer(&cfg, a, &mut run)?;
            "hdc infer"
        }
        Command::Hdc(HdcCmd::Sweep(a)) => {
            hdc_sweep(&cfg, a, &mut run)?;
            "hdc sweep"
        }
    };

    let manifest = json!({
        "tool": "cryocam",
        "version": env!("CARGO_PKG_VERSION"),
        "command": name,
        "argv": argv.iter().map(|a| a.to_string_lossy().into_owned()).collect::<Vec<_>>(),
        "seed": cfg.seed,
        "config_toml": cfg.to_toml(),
        "parameters_si": cfg,
        "outputs": run.outputs,
        "summary": run.summary,
        "wall_time_s": started.elapsed().as_secs_f64(),
    });
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_atomic(&run.out_dir.join("manifest.json"), text.as_bytes())?;
    Ok(())
}

/// Flags that map onto configuration values; applied before validation.
fn apply_overrides(cfg: &mut RunConfig, cmd: &Command) {
    match cmd {
        Command::Device(DeviceCmd::Iv(a)) => {
            if let Some(b) = a.beta_c {
                cfg.rcsj.beta_c = b;
            }
        }
        Command::Tcam(TcamCmd::Search(a)) => {
            if let Some(i) = a.i_rwl_ua {
                match a.mode {
                    ModeArg::Exact => cfg.tcam.bias.i_rwl_exact = i / 1e6,
                    ModeArg::Hd => cfg.tcam.bias.i_rwl_hd = i / 1e6,
                }
            }
        }
        Command::Hdc(HdcCmd::Train(a)) => {
            if let Some(d) = a.dim {
                cfg.hdc.dim = d;
            }
            if let Some(n) = a.n_gram {
                cfg.hdc.n_gram = n;
            }
        }
        Command::Hdc(HdcCmd::Infer(a)) => {
            if let Some(b) = a.block_size {
                cfg.hdc.block_size = b;
            }
        }
        _ => {}
    }
}

fn device_iv(cfg: &RunConfig, a: &IvArgs, run: &mut Run) -> Result<()> {
    if a.points < 2 {
        return Err(Error::Usage("--points must be >= 2".into()));
    }
    if !(a.i_start_ua >= 0.0 && a.i_stop_ua > a.i_start_ua) {
        return Err(Error::Usage(
            "bias range needs 0 <= --i-start-ua < --i-stop-ua".into(),
        ));
    }
    let t = &cfg.tcam;
    let model = Arc::new(PreisachModel::new(t.ferroelectric)?);
    let mut dev = FeSquidDevice::new(model, t.superconductor, t.fesquid);
    let state = match a.state {
        StateArg::PrMinus => RemnantState::Negative,
        StateArg::PrPlus => RemnantState::Positive,
    };
    dev.pulse(state.write_sign() * t.bias.v_write);
    let step = (a.i_stop_ua - a.i_start_ua) / (a.points - 1) as f64;
    let mut bias: Vec<f64> = (0..a.points)
        .map(|k| (a.i_start_ua + k as f64 * step) * 1e-6)
        .collect();
    if a.bidirectional {
        let down: Vec<f64> = bias.iter().rev().skip(1).copied().collect();
        bias.extend(down);
    }
    let (volts, model_name): (Vec<f64>, &str) = match a.model {
        IvModel::Rcsj => (
            dev.simulate_rcsj_iv(&bias, &cfg.rcsj)?
                .points
                .iter()
                .map(|p| p.v)
                .collect(),
            "rcsj",
        ),
        IvModel::Behavioral => (
            bias.iter()
                .map(|&i| dev.branch_voltage(i))
                .collect::<Result<_>>()?,
            "behavioral",
        ),
    };
    let mut csv = String::from("i_bias_A,v_avg_V,state_label,model\n");
    for (i, v) in bias.iter().zip(&volts) {
        let _ = writeln!(csv, "{},{},{},{}", num(*i), num(*v), state.label(), model_name);
    }
    run.write("device_iv.csv", &csv)?;
    run.summary = json!({
        "state": state.label(),
        "critical_current_A": dev.critical_current()?,
        "points": bias.len(),
    });
    println!(
        "{} I_C = {:.4} µA, {} points written to device_iv.csv",
        state.label(),
        dev.critical_current()? * 1e6,
        bias.len()
    );
    Ok(())
}

fn fe_sweep(cfg: &RunConfig, a: &FeSweepArgs, run: &mut Run) -> Result<()> {
    if a.points_per_quarter == 0 || a.cycles == 0 {
        return Err(Error::Usage("--points-per-quarter and --cycles must be >= 1".into()));
    }
    let amp = a.amplitude_v.unwrap_or(cfg.tcam.bias.v_write);
    if !(amp > 0.0) {
        return Err(Error::Usage(format!("--amplitude-v must be > 0 (got {amp})")));
    }
    let model = PreisachModel::new(cfg.tcam.ferroelectric)?;
    let mut state = model.demagnetized_state();
    let wave = triangle_wave(amp, a.points_per_quarter, a.cycles);
    let trace = model.apply_waveform(&mut state, &wave)?;
    let mut csv = String::from("v_V,p_C_m2,branch\n");
    let mut prev = 0.0;
    for (&v, &p) in wave.iter().zip(&trace) {
        // the first sample continues the rising branch from 0 V
        let branch = if v >= prev { "up" } else { "down" };
        let _ = writeln!(csv, "{},{},{}", num(v), num(p), branch);
        prev = v;
    }
    run.write("fe_sweep.csv", &csv)?;
    run.summary = json!({"amplitude_V": amp, "samples": wave.len()});
    println!("{} samples written to fe_sweep.csv", wave.len());
    Ok(())
}

/// Stored words and search keys of a `tcam search` input file.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchInput {
    pub words: Vec<Vec<bool>>,
    pub keys: Vec<SearchKey>,
}

/// Parses words (0/1), a `---` separator, then keys (0/1/d). Blank lines and
/// `#` comments are ignored.
pub fn parse_search_input(src: &str, path: &Path) -> Result<SearchInput> {
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut words = Vec::new();
    let mut keys = Vec::new();
    let mut in_keys = false;
    for (k, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line == "---" {
            if in_keys {
                return Err(err(k + 1, "second '---' separator".into()));
            }
            in_keys = true;
            continue;
        }
        if in_keys {
            keys.push(line.parse::<SearchKey>().map_err(|e| err(k + 1, e.to_string()))?);
        } else {
            words.push(parse_word(line).map_err(|e| err(k + 1, e.to_string()))?);
        }
    }
    let last = src.lines().count().max(1);
    if !in_keys {
        return Err(err(last, "missing '---' line between words and keys".into()));
    }
    if words.is_empty() || keys.is_empty() {
        return Err(err(last, "need at least one word and one key".into()));
    }
    let width = words[0].len();
    if words.iter().any(|w| w.len() != width) || keys.iter().any(|k| k.len() != width) {
        return Err(err(last, format!("all words and keys must be {width} symbols wide")));
    }
    Ok(SearchInput { words, keys })
}

fn tcam_search(cfg: &RunConfig, a: &TcamSearchArgs, run: &mut Run) -> Result<()> {
    let src = std::fs::read_to_string(&a.input)
        .map_err(|e| Error::io(format!("reading {}", a.input.display()), e))?;
    let input = parse_search_input(&src, &a.input)?;
    let mut array = TcamArray::new(input.words.len(), input.words[0].len(), cfg.tcam)?;
    for (r, w) in input.words.iter().enumerate() {
        array.store_word(r, w)?;
    }
    let mode = match a.mode {
        ModeArg::Exact => SearchMode::Exact,
        ModeArg::Hd => SearchMode::Hd,
    };
    let mut csv = String::from("key,row,v_ml_mV,n_match,power_nW,energy_aJ\n");
    let mut total = 0.0;
    for key in &input.keys {
        for (r, res) in array.search_mode(key, mode)?.iter().enumerate() {
            let _ = writeln!(
                csv,
                "{key},{r},{},{},{},{}",
                num(res.v_ml * 1e3),
                res.n_match,
                num(res.power * 1e9),
                num(res.energy * 1e18)
            );
            total += res.energy;
        }
    }
    run.write("tcam_search.csv", &csv)?;
    run.summary = json!({
        "mode": format!("{mode:?}").to_lowercase(),
        "rows": input.words.len(),
        "keys": input.keys.len(),
        "total_energy_J": total,
    });
    println!(
        "{} keys x {} rows written to tcam_search.csv",
        input.keys.len(),
        input.words.len()
    );
    Ok(())
}

fn tcam_calibrate(cfg: &RunConfig, a: &CalibrateArgs, run: &mut Run) -> Result<()> {
    let bias = calibrated_bias(
        cfg.tcam.bias,
        cfg.tcam.htron.r_off,
        a.binary_aj * 1e-18,
        a.ternary_aj * 1e-18,
    )?;
    let mut params = cfg.tcam;
    params.bias = bias;
    params.validate()?;
    let (b, t) = measured_average_energies(&params)?;
    let out = json!({
        "i_rwl_exact_uA": bias.i_rwl_exact * 1e6,
        "r_fs_exact_kohm": bias.r_fs_exact * 1e-3,
        "target_binary_avg_aJ": a.binary_aj,
        "target_ternary_avg_aJ": a.ternary_aj,
        "measured_binary_avg_aJ": b * 1e18,
        "measured_ternary_avg_aJ": t * 1e18,
    });
    let text = serde_json::to_string_pretty(&out).expect("calibration serializes");
    run.write("calibration.json", &text)?;
    run.summary = out;
    println!(
        "I_RWL = {:.5} µA, r_fs = {:.2} Ω; averages {:.3} aJ / {:.3} aJ",
        bias.i_rwl_exact * 1e6,
        bias.r_fs_exact,
        b * 1e18,
        t * 1e18
    );
    Ok(())
}

/// Synthetic text stream used for training; held-out text uses the next one.
const TRAIN_STREAM: u64 = 0;
const HELD_OUT_STREAM: u64 = 1;
/// Held-out synthetic texts are shorter than training texts.
const HELD_OUT_LEN_DIVISOR: usize = 5;

fn corpus_for(cfg: &RunConfig, a: &CorpusArgs, held_out: bool) -> Result<Corpus> {
    match &a.corpus {
        Some(dir) => Corpus::from_dir(dir),
        None => {
            if a.classes == 0 || a.texts_per_class == 0 || a.text_len == 0 {
                return Err(Error::Usage(
                    "--classes, --texts-per-class and --text-len must be >= 1".into(),
                ));
            }
            let langs = SyntheticLanguages::new(a.classes, cfg.seed);
            Ok(if held_out {
                langs.corpus(
                    a.texts_per_class,
                    (a.text_len / HELD_OUT_LEN_DIVISOR).max(cfg.hdc.n_gram),
                    HELD_OUT_STREAM,
                )
            } else {
                langs.corpus(a.texts_per_class, a.text_len, TRAIN_STREAM)
            })
        }
    }
}

fn hdc_train(cfg: &RunConfig, a: &TrainArgs, run: &mut Run) -> Result<()> {
    let corpus = corpus_for(cfg, &a.corpus, false)?;
    let model = HdcModel::train(&corpus, cfg.hdc.dim, cfg.hdc.n_gram, cfg.seed)?;
    let path = if a.model_out.is_absolute() {
        a.model_out.clone()
    } else {
        run.out_dir.join(&a.model_out)
    };
    write_atomic(&path, model.to_json().as_bytes())?;
    run.outputs.push(path.display().to_string());
    run.summary = json!({
        "classes": model.labels(),
        "texts": corpus.len(),
        "dim": model.dim(),
        "n_gram": model.n_gram(),
    });
    println!(
        "trained {} classes at D = {} from {} texts -> {}",
        model.classes().len(),
        model.dim(),
        corpus.len(),
        path.display()
    );
    Ok(())
}

fn hdc_infer(cfg: &RunConfig, a: &InferArgs, run: &mut Run) -> Result<()> {
    let model = HdcModel::load(&a.model)?;
    // A synthetic held-out corpus must come from the languages the model was trained on.
    let mut seeded = cfg.clone();
    seeded.seed = model.seed();
    seeded.hdc.n_gram = model.n_gram();
    let corpus = corpus_for(&seeded, &a.corpus, true)?;
    if corpus.is_empty() {
        return Err(Error::Usage("inference corpus has no texts".into()));
    }
    let plan = BlockPlan {
        block_size: cfg.hdc.block_size,
        i_rwl_per_bit: cfg.tcam.bias.i_rwl_hd,
        t_search: cfg.tcam.bias.t_search,
    };
    let labels = model.labels();
    let mut csv = String::from("sample,true_label,predicted_label,hamming_distance,energy_J\n");
    let mut correct = 0usize;
    let mut energy_total = 0.0;
    for (k, (label, text)) in corpus.samples().enumerate() {
        let q = model.encode(text)?;
        let (idx, hd, energy) = match a.engine {
            EngineArg::Tcam => {
                let r = model.infer_tcam(&q, &plan)?;
                (r.class_index, r.distances[r.class_index], r.total_energy())
            }
            EngineArg::Exact => {
                let r = model.infer_exact(&q)?;
                (r.class_index, r.distances[r.class_index], 0.0)
            }
        };
        correct += usize::from(labels[idx] == label);
        energy_total += energy;
        let _ = writeln!(csv, "{k},{label},{},{hd},{}", labels[idx], num(energy));
    }
    let accuracy = correct as f64 / corpus.len() as f64;
    run.write("hdc_infer.csv", &csv)?;
    run.summary = json!({
        "engine": format!("{:?}", a.engine).to_lowercase(),
        "accuracy": accuracy,
        "samples": corpus.len(),
        "total_energy_J": energy_total,
    });
    println!("accuracy {accuracy:.4} over {} texts", corpus.len());
    Ok(())
}

fn hdc_sweep(cfg: &RunConfig, a: &SweepArgs, run: &mut Run) -> Result<()> {
    let plan = BlockPlan {
        block_size: cfg.hdc.block_size,
        i_rwl_per_bit: cfg.tcam.bias.i_rwl_hd,
        t_search: cfg.tcam.bias.t_search,
    };
    let mut rows = energy_sweep(&a.dims, &a.blocks, a.match_fraction, &plan)?;
    if a.accuracy {
        let langs = SyntheticLanguages::new(3, cfg.seed);
        let train = langs.corpus(10, 1000, TRAIN_STREAM);
        let test = langs.corpus(30, 1000 / HELD_OUT_LEN_DIVISOR, HELD_OUT_STREAM);
        for &d in &a.dims {
            let model = HdcModel::train(&train, d, cfg.hdc.n_gram, cfg.seed)?;
            for r in rows.iter_mut().filter(|r| r.d_bits == d) {
                let p = BlockPlan {
                    block_size: r.block_size,
                    ..plan
                };
                r.accuracy = Some(model.accuracy_eval(&test, &Engine::Tcam(p))?);
            }
        }
    }
    let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
    let mut csv = String::from("d_bits,block_size,energy_J_fesquid,energy_J_sram_ref,accuracy\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            r.d_bits,
            r.block_size,
            num(r.energy_fesquid),
            opt(r.energy_sram_ref),
            opt(r.accuracy)
        );
    }
    run.write("hdc_sweep.csv", &csv)?;
    run.summary = json!({"rows": rows.len(), "match_fraction": a.match_fraction});
    for r in &rows {
        println!(
            "D = {:>6}, block {:>4}: {:.3} fJ",
            r.d_bits,
            r.block_size,
            r.energy_fesquid * 1e15
        );
    }
    Ok(())
}
