use std::path::Path;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Texts sharing one label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassTexts {
    pub label: String,
    pub texts: Vec<String>,
}

/// Labeled texts, grouped by class in a fixed order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub classes: Vec<ClassTexts>,
}

impl Corpus {
    pub fn labels(&self) -> Vec<&str> {
        self.classes.iter().map(|c| c.label.as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.classes.iter().map(|c| c.texts.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// (label, text) pairs in class order.
    pub fn samples(&self) -> impl Iterator<Item = (&str, &str)> {
        self.classes
            .iter()
            .flat_map(|c| c.texts.iter().map(move |t| (c.label.as_str(), t.as_str())))
    }

    /// Reads `dir/<label>/<file>` as UTF-8 text. Labels and files are taken in
    /// lexicographic order; hidden entries are skipped.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let mut label_dirs = sorted_entries(dir)?;
        label_dirs.retain(|p| p.is_dir());
        if label_dirs.is_empty() {
            return Err(Error::Training(format!(
                "corpus directory {} has no label subdirectories",
                dir.display()
            )));
        }
        let mut classes = Vec::new();
        for ld in label_dirs {
            let label = ld
                .file_name()
                .and_then(|n| n.to_str())
                .ok_or_else(|| Error::Training(format!("non-UTF-8 label directory {}", ld.display())))?
                .to_string();
            let mut texts = Vec::new();
            for f in sorted_entries(&ld)?.into_iter().filter(|p| p.is_file()) {
                let text = std::fs::read_to_string(&f)
                    .map_err(|e| Error::io(format!("reading {}", f.display()), e))?;
                texts.push(text);
            }
            classes.push(ClassTexts { label, texts });
        }
        Ok(Self { classes })
    }
}

fn sorted_entries(dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    let rd = std::fs::read_dir(dir).map_err(|e| Error::io(format!("listing {}", dir.display()), e))?;
    let mut out = Vec::new();
    for entry in rd {
        let entry = entry.map_err(|e| Error::io(format!("listing {}", dir.display()), e))?;
        if entry.file_name().to_string_lossy().starts_with('.') {
            continue;
        }
        out.push(entry.path());
    }
    out.sort();
    Ok(out)
}

/// First-order Markov chain over `a`..`z` and space. Every symbol has a small
/// random successor set with random weights, so distinct languages share few
/// trigrams.
#[derive(Debug, Clone)]
pub struct MarkovLanguage {
    successors: Vec<Vec<usize>>,
    dists: Vec<WeightedIndex<f64>>,
}

const LETTERS: usize = 27;

fn symbol_char(s: usize) -> char {
    if s == 26 {
        ' '
    } else {
        (b'a' + s as u8) as char
    }
}

impl MarkovLanguage {
    pub fn random<R: Rng + ?Sized>(branching: usize, rng: &mut R) -> Self {
        let branching = branching.clamp(1, LETTERS);
        let mut successors = Vec::with_capacity(LETTERS);
        let mut dists = Vec::with_capacity(LETTERS);
        for _ in 0..LETTERS {
            let next: Vec<usize> = sample(rng, LETTERS, branching).into_vec();
            let w: Vec<f64> = (0..branching).map(|_| rng.random_range(0.2..1.0)).collect();
            successors.push(next);
            dists.push(WeightedIndex::new(w).expect("positive weights"));
        }
        Self { successors, dists }
    }

    pub fn generate<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> String {
        let mut s = rng.random_range(0..LETTERS);
        let mut out = String::with_capacity(len);
        for _ in 0..len {
            out.push(symbol_char(s));
            s = self.successors[s][self.dists[s].sample(rng)];
        }
        out
    }
}

/// A seeded family of synthetic languages labeled `lang0`, `lang1`, ...
#[derive(Debug, Clone)]
pub struct SyntheticLanguages {
    seed: u64,
    languages: Vec<MarkovLanguage>,
}

impl SyntheticLanguages {
    pub const BRANCHING: usize = 3;

    pub fn new(n_classes: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let languages = (0..n_classes)
            .map(|_| MarkovLanguage::random(Self::BRANCHING, &mut rng))
            .collect();
        Self { seed, languages }
    }

    pub fn n_classes(&self) -> usize {
        self.languages.len()
    }

    pub fn label(k: usize) -> String {
        format!("lang{k}")
    }

    pub fn language(&self, k: usize) -> &MarkovLanguage {
        &self.languages[k]
    }

    /// Draws a corpus from text stream `stream`; different streams give
    /// independent texts from the same languages (e.g. train vs held-out).
    pub fn corpus(&self, texts_per_class: usize, text_len: usize, stream: u64) -> Corpus {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream + 1);
        let classes = self
            .languages
            .iter()
            .enumerate()
            .map(|(k, lang)| ClassTexts {
                label: Self::label(k),
                texts: (0..texts_per_class).map(|_| lang.generate(text_len, &mut rng)).collect(),
            })
            .collect();
        Corpus { classes }
    }
}
