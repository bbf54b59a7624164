//! Binary hyperdimensional language recognition on top of HD-mode TCAM search.

pub mod corpus;
pub mod encode;
pub mod hypervector;
pub mod model;
pub mod sweep;

pub use corpus::{ClassTexts, Corpus, MarkovLanguage, SyntheticLanguages};
pub use encode::{encode_text, symbol_index, ItemMemory, ALPHABET_SIZE};
pub use hypervector::{Bundler, Hypervector};
pub use model::{
    BlockPlan, ClassVector, Engine, ExactInference, HdcModel, ModelFile, TcamInference,
};
pub use sweep::{comparison_energy, energy_sweep, sram_reference, SweepRow, SRAM_REF_D10000_BLOCK10};
