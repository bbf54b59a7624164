use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::hypervector::{Bundler, Hypervector};
use crate::error::{Error, Result};

/// Symbols: `a`..`z`, space, and one catch-all "other".
pub const ALPHABET_SIZE: usize = 28;
pub const SPACE: usize = 26;
pub const OTHER: usize = 27;

/// Maps a character onto the alphabet. Letters fold to lower case and any
/// whitespace counts as a space.
pub fn symbol_index(c: char) -> usize {
    let c = c.to_ascii_lowercase();
    if c.is_ascii_lowercase() {
        c as usize - 'a' as usize
    } else if c.is_whitespace() {
        SPACE
    } else {
        OTHER
    }
}

/// Seeded random hypervector per symbol, plus the tie-break vector used by
/// majority bundling.
#[derive(Debug, Clone, PartialEq)]
pub struct ItemMemory {
    dim: usize,
    seed: u64,
    items: Vec<Hypervector>,
    tie_break: Hypervector,
}

impl ItemMemory {
    pub fn new(dim: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Usage("hypervector dimension must be >= 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let items = (0..ALPHABET_SIZE)
            .map(|_| Hypervector::random(dim, &mut rng))
            .collect();
        let tie_break = Hypervector::random(dim, &mut rng);
        Ok(Self {
            dim,
            seed,
            items,
            tie_break,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn item(&self, symbol: usize) -> &Hypervector {
        &self.items[symbol]
    }

    pub fn items(&self) -> &[Hypervector] {
        &self.items
    }

    pub fn tie_break(&self) -> &Hypervector {
        &self.tie_break
    }
}

/// Streams n-gram bindings of a text into a bundler.
pub(crate) struct NgramEncoder<'a> {
    item: &'a ItemMemory,
    /// rotated[k][s]: item vector of symbol s rotated by k.
    rotated: Vec<Vec<Hypervector>>,
    n_gram: usize,
}

impl<'a> NgramEncoder<'a> {
    pub(crate) fn new(item: &'a ItemMemory, n_gram: usize) -> Result<Self> {
        if n_gram == 0 {
            return Err(Error::Usage("n_gram must be >= 1".into()));
        }
        let rotated = (0..n_gram)
            .map(|k| item.items().iter().map(|v| v.rotate(k)).collect())
            .collect();
        Ok(Self {
            item,
            rotated,
            n_gram,
        })
    }

    /// XOR of the rotated symbol vectors; the symbol at offset k is rotated by k.
    pub(crate) fn bind(&self, gram: &[usize]) -> Hypervector {
        let mut v = Hypervector::zeros(self.item.dim());
        for (k, &s) in gram.iter().enumerate() {
            v.xor_assign(&self.rotated[k][s]);
        }
        v
    }

    pub(crate) fn add_text(&self, bundler: &mut Bundler, text: &str) -> Result<()> {
        let symbols: Vec<usize> = text.chars().map(symbol_index).collect();
        if symbols.len() < self.n_gram {
            return Err(Error::Usage(format!(
                "text of {} symbols is shorter than n_gram = {}",
                symbols.len(),
                self.n_gram
            )));
        }
        for gram in symbols.windows(self.n_gram) {
            bundler.add(&self.bind(gram));
        }
        Ok(())
    }

    pub(crate) fn encode(&self, text: &str) -> Result<Hypervector> {
        let mut b = Bundler::new(self.item.dim());
        self.add_text(&mut b, text)?;
        Ok(b.majority(self.item.tie_break()))
    }
}

/// Bundles every n-gram of `text` into one hypervector.
pub fn encode_text(text: &str, item: &ItemMemory, n_gram: usize) -> Result<Hypervector> {
    NgramEncoder::new(item, n_gram)?.encode(text)
}
