use std::path::Path;

use serde::{Deserialize, Serialize};

use super::corpus::Corpus;
use super::encode::{ItemMemory, NgramEncoder};
use super::hypervector::{Bundler, Hypervector};
use crate::error::{Error, Result};
use crate::tcam::formula::{decode_n_match, ml_voltage_closed_form, search_energy, I_RWL_HD, T_SEARCH};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassVector {
    pub label: String,
    pub vector: Hypervector,
}

/// Trained class vectors plus the item memory they were encoded with.
#[derive(Debug, Clone, PartialEq)]
pub struct HdcModel {
    n_gram: usize,
    item: ItemMemory,
    classes: Vec<ClassVector>,
}

/// Splits a D-bit comparison into TCAM rows of `block_size` bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockPlan {
    pub block_size: usize,
    /// RWL current per bit (A).
    pub i_rwl_per_bit: f64,
    /// Search time per block (s).
    pub t_search: f64,
}

impl BlockPlan {
    pub fn new(block_size: usize) -> Self {
        Self {
            block_size,
            i_rwl_per_bit: I_RWL_HD,
            t_search: T_SEARCH,
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.block_size == 0 {
            out.push("block_size must be >= 1".to_string());
        }
        if !(self.i_rwl_per_bit > 0.0) {
            out.push(format!("i_rwl_per_bit must be > 0 A (got {})", self.i_rwl_per_bit));
        }
        if !(self.t_search > 0.0) {
            out.push(format!("t_search must be > 0 s (got {})", self.t_search));
        }
        out
    }

    pub fn n_blocks(&self, dim: usize) -> usize {
        dim.div_ceil(self.block_size)
    }
}

impl Default for BlockPlan {
    fn default() -> Self {
        Self::new(100)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactInference {
    pub class_index: usize,
    pub label: String,
    pub distances: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TcamInference {
    pub class_index: usize,
    pub label: String,
    /// Hamming distance per class, reassembled from decoded block match counts.
    pub distances: Vec<usize>,
    /// Search energy per class comparison (J).
    pub energies: Vec<f64>,
}

impl TcamInference {
    pub fn total_energy(&self) -> f64 {
        self.energies.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Engine {
    Exact,
    Tcam(BlockPlan),
}

fn argmin(distances: &[usize]) -> usize {
    // `min_by_key` keeps the first minimum, i.e. the lowest index on ties.
    distances
        .iter()
        .enumerate()
        .min_by_key(|&(_, d)| *d)
        .map(|(k, _)| k)
        .unwrap_or(0)
}

/// Number of positions in `start..end` where `a` and `b` agree; positions at or
/// beyond the vector dimension are zero padding on both sides and always agree.
fn block_matches(a: &Hypervector, b: &Hypervector, start: usize, end: usize) -> usize {
    let dim = a.dim();
    let real_end = end.min(dim);
    let padding = end - real_end.max(start);
    let mut diff = 0usize;
    let mut i = start;
    while i < real_end {
        let w = i / 64;
        let lo = i % 64;
        let hi = (real_end - w * 64).min(64);
        let x = a.words()[w] ^ b.words()[w];
        let x = x >> lo;
        let width = hi - lo;
        let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        diff += (x & mask).count_ones() as usize;
        i = w * 64 + hi;
    }
    (real_end.saturating_sub(start) - diff) + padding
}

impl HdcModel {
    /// Class vector = bitwise majority of the per-text encodings of that class.
    pub fn train(corpus: &Corpus, dim: usize, n_gram: usize, seed: u64) -> Result<Self> {
        if corpus.classes.is_empty() {
            return Err(Error::Training("corpus has no classes".into()));
        }
        let item = ItemMemory::new(dim, seed)?;
        let enc = NgramEncoder::new(&item, n_gram)?;
        let mut classes: Vec<ClassVector> = Vec::with_capacity(corpus.classes.len());
        for class in &corpus.classes {
            if classes.iter().any(|c| c.label == class.label) {
                return Err(Error::Training(format!("duplicate label {:?}", class.label)));
            }
            if class.texts.is_empty() {
                return Err(Error::Training(format!("class {:?} has no texts", class.label)));
            }
            let mut bundle = Bundler::new(dim);
            for text in &class.texts {
                let v = enc.encode(text).map_err(|e| {
                    Error::Training(format!("class {:?}: {e}", class.label))
                })?;
                bundle.add(&v);
            }
            classes.push(ClassVector {
                label: class.label.clone(),
                vector: bundle.majority(item.tie_break()),
            });
        }
        Ok(Self {
            n_gram,
            item,
            classes,
        })
    }

    pub fn from_parts(item: ItemMemory, n_gram: usize, classes: Vec<ClassVector>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::Model("model has no classes".into()));
        }
        for (k, c) in classes.iter().enumerate() {
            if c.vector.dim() != item.dim() {
                return Err(Error::Model(format!(
                    "class {:?} has dimension {}, expected {}",
                    c.label,
                    c.vector.dim(),
                    item.dim()
                )));
            }
            if classes[..k].iter().any(|o| o.label == c.label) {
                return Err(Error::Model(format!("duplicate label {:?}", c.label)));
            }
        }
        if n_gram == 0 {
            return Err(Error::Model("n_gram must be >= 1".into()));
        }
        Ok(Self {
            n_gram,
            item,
            classes,
        })
    }

    pub fn dim(&self) -> usize {
        self.item.dim()
    }

    pub fn n_gram(&self) -> usize {
        self.n_gram
    }

    pub fn seed(&self) -> u64 {
        self.item.seed()
    }

    pub fn item_memory(&self) -> &ItemMemory {
        &self.item
    }

    pub fn classes(&self) -> &[ClassVector] {
        &self.classes
    }

    pub fn labels(&self) -> Vec<&str> {
        self.classes.iter().map(|c| c.label.as_str()).collect()
    }

    pub fn encode(&self, text: &str) -> Result<Hypervector> {
        NgramEncoder::new(&self.item, self.n_gram)?.encode(text)
    }

    fn check_query(&self, query: &Hypervector) -> Result<()> {
        if query.dim() != self.dim() {
            return Err(Error::Usage(format!(
                "query dimension {} does not match model dimension {}",
                query.dim(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Software popcount Hamming oracle.
    pub fn infer_exact(&self, query: &Hypervector) -> Result<ExactInference> {
        self.check_query(query)?;
        let distances = self
            .classes
            .iter()
            .map(|c| c.vector.hamming(query))
            .collect::<Result<Vec<_>>>()?;
        let k = argmin(&distances);
        Ok(ExactInference {
            class_index: k,
            label: self.classes[k].label.clone(),
            distances,
        })
    }

    /// Hamming distance through HD-mode TCAM blocks: each block's match-line
    /// voltage is evaluated in closed form and decoded back to a match count.
    pub fn infer_tcam(&self, query: &Hypervector, plan: &BlockPlan) -> Result<TcamInference> {
        self.check_query(query)?;
        let v = plan.violations();
        if !v.is_empty() {
            return Err(Error::Config(v));
        }
        let bs = plan.block_size;
        let n_blocks = plan.n_blocks(self.dim());
        let mut distances = Vec::with_capacity(self.classes.len());
        let mut energies = Vec::with_capacity(self.classes.len());
        for c in &self.classes {
            let mut hd = 0usize;
            let mut energy = 0.0;
            for b in 0..n_blocks {
                let m = block_matches(&c.vector, query, b * bs, (b + 1) * bs);
                let v_ml = ml_voltage_closed_form(bs, m, plan.i_rwl_per_bit)?;
                let decoded = decode_n_match(bs, v_ml, plan.i_rwl_per_bit)?;
                hd += bs - decoded;
                energy += search_energy(v_ml, bs, plan.i_rwl_per_bit, plan.t_search);
            }
            distances.push(hd);
            energies.push(energy);
        }
        let k = argmin(&distances);
        Ok(TcamInference {
            class_index: k,
            label: self.classes[k].label.clone(),
            distances,
            energies,
        })
    }

    pub fn classify(&self, query: &Hypervector, engine: &Engine) -> Result<usize> {
        Ok(match engine {
            Engine::Exact => self.infer_exact(query)?.class_index,
            Engine::Tcam(plan) => self.infer_tcam(query, plan)?.class_index,
        })
    }

    /// Fraction of texts whose predicted label equals their own. Labels not
    /// known to the model always count as misses.
    pub fn accuracy_eval(&self, test: &Corpus, engine: &Engine) -> Result<f64> {
        if test.is_empty() {
            return Err(Error::Usage("test corpus is empty".into()));
        }
        let enc = NgramEncoder::new(&self.item, self.n_gram)?;
        let mut correct = 0usize;
        let mut total = 0usize;
        for (label, text) in test.samples() {
            let q = enc.encode(text)?;
            let k = self.classify(&q, engine)?;
            correct += usize::from(self.classes[k].label == label);
            total += 1;
        }
        Ok(correct as f64 / total as f64)
    }

    pub fn to_file(&self) -> ModelFile {
        ModelFile {
            format: MODEL_FORMAT.to_string(),
            version: MODEL_VERSION,
            seed: self.seed(),
            dim: self.dim(),
            n_gram: self.n_gram,
            classes: self
                .classes
                .iter()
                .map(|c| ModelClass {
                    label: c.label.clone(),
                    bits: c.vector.to_hex(),
                })
                .collect(),
        }
    }

    pub fn from_file(file: &ModelFile) -> Result<Self> {
        if file.format != MODEL_FORMAT {
            return Err(Error::Model(format!("unknown model format {:?}", file.format)));
        }
        if file.version != MODEL_VERSION {
            return Err(Error::Model(format!(
                "unsupported model version {} (expected {MODEL_VERSION})",
                file.version
            )));
        }
        let item = ItemMemory::new(file.dim, file.seed)?;
        let classes = file
            .classes
            .iter()
            .map(|c| {
                Ok(ClassVector {
                    label: c.label.clone(),
                    vector: Hypervector::from_hex(file.dim, &c.bits)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(item, file.n_gram, classes)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("model file serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: ModelFile =
            serde_json::from_str(s).map_err(|e| Error::Model(format!("invalid model JSON: {e}")))?;
        Self::from_file(&file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading model {}", path.display()), e))?;
        Self::from_json(&s)
    }
}

pub const MODEL_FORMAT: &str = "cryocam-hdc-model";
pub const MODEL_VERSION: u32 = 1;

/// On-disk model. Class bits are hex, 16 digits per 64-bit word, lowest word first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format: String,
    pub version: u32,
    pub seed: u64,
    pub dim: usize,
    pub n_gram: usize,
    pub classes: Vec<ModelClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelClass {
    pub label: String,
    pub bits: String,
}
