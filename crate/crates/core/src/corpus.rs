//! Corpus ingestion, inverted index and co-occurrence counts.
//!
//! Only presence matters: a document either contains a term or it does not.
//! All probabilities downstream are ratios of document counts.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{IndexSet, QwebError, Result};

/// Splits text into normalised terms.
///
/// Terms are maximal runs of Unicode alphanumeric characters. Everything
/// else is a separator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tokenizer {
    pub lowercase: bool,
    /// Tokens shorter than this many characters are dropped.
    pub min_len: usize,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Tokenizer {
            lowercase: true,
            min_len: 1,
        }
    }
}

impl Tokenizer {
    pub fn normalize(&self, term: &str) -> String {
        if self.lowercase {
            term.to_lowercase()
        } else {
            term.to_owned()
        }
    }

    /// Deduplicated token set of `text`.
    pub fn tokenize(&self, text: &str) -> BTreeSet<String> {
        text.split(|c: char| !c.is_alphanumeric())
            .filter(|t| !t.is_empty() && t.chars().count() >= self.min_len.max(1))
            .map(|t| self.normalize(t))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: usize,
    pub name: String,
    pub tokens: BTreeSet<String>,
}

impl Document {
    pub fn contains(&self, term: &str) -> bool {
        self.tokens.contains(term)
    }
}

/// An ordered collection of documents with its inverted index.
#[derive(Debug, Clone)]
pub struct Corpus {
    documents: Vec<Document>,
    postings: BTreeMap<String, IndexSet>,
    tokenizer: Tokenizer,
}

impl Corpus {
    /// Builds a corpus from `(name, text)` pairs. Ids follow the iteration
    /// order.
    pub fn from_texts<I, N, T>(texts: I, tokenizer: Tokenizer) -> Result<Self>
    where
        I: IntoIterator<Item = (N, T)>,
        N: Into<String>,
        T: AsRef<str>,
    {
        let documents: Vec<Document> = texts
            .into_iter()
            .enumerate()
            .map(|(id, (name, text))| Document {
                id,
                name: name.into(),
                tokens: tokenizer.tokenize(text.as_ref()),
            })
            .collect();
        Self::from_documents(documents, tokenizer)
    }

    fn from_documents(documents: Vec<Document>, tokenizer: Tokenizer) -> Result<Self> {
        if documents.is_empty() {
            return Err(QwebError::EmptyCorpus);
        }
        let mut raw: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for doc in &documents {
            for t in &doc.tokens {
                raw.entry(t.clone()).or_default().push(doc.id);
            }
        }
        // ids are pushed in increasing order, so each list is already sorted
        let postings = raw
            .into_iter()
            .map(|(t, ids)| (t, IndexSet::from_sorted_unchecked(ids)))
            .collect();
        Ok(Corpus {
            documents,
            postings,
            tokenizer,
        })
    }

    pub fn n(&self) -> usize {
        self.documents.len()
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn postings(&self) -> &BTreeMap<String, IndexSet> {
        &self.postings
    }

    pub fn tokenizer(&self) -> &Tokenizer {
        &self.tokenizer
    }

    pub fn vocabulary_size(&self) -> usize {
        self.postings.len()
    }

    /// Documents containing `term` (after normalisation). Unknown terms give
    /// the empty set.
    pub fn posting(&self, term: &str) -> IndexSet {
        self.postings
            .get(&self.tokenizer.normalize(term))
            .cloned()
            .unwrap_or_default()
    }

    /// Ids of the documents containing every term in `terms`.
    ///
    /// An empty term list matches every document.
    pub fn doc_set<S: AsRef<str>>(&self, terms: &[S]) -> IndexSet {
        let mut iter = terms.iter();
        let Some(first) = iter.next() else {
            return IndexSet::full(self.n());
        };
        let mut acc = self.posting(first.as_ref());
        for t in iter {
            if acc.is_empty() {
                break;
            }
            acc = acc.intersection(&self.posting(t.as_ref()));
        }
        acc
    }

    /// Occurrence and co-occurrence counts of the triple `(a, b, x)`.
    pub fn counts(&self, a: &str, b: &str, x: &str) -> CooccurrenceStats {
        CooccurrenceStats {
            n: self.n() as u64,
            n_a: self.doc_set(&[a]).len() as u64,
            n_b: self.doc_set(&[b]).len() as u64,
            n_ab: self.doc_set(&[a, b]).len() as u64,
            n_ax: self.doc_set(&[a, x]).len() as u64,
            n_bx: self.doc_set(&[b, x]).len() as u64,
            n_abx: self.doc_set(&[a, b, x]).len() as u64,
        }
    }

    /// The inverted index as JSON `{term: [ids…]}` with sorted terms.
    pub fn index_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&self.postings)?;
        s.push('\n');
        Ok(s)
    }
}

/// Reads every `.txt` file directly inside `dir` into a corpus.
///
/// Document ids follow the lexicographic order of the file names. Files are
/// read in parallel; the merge is by id so the result is deterministic.
pub fn ingest(dir: impl AsRef<Path>, tokenizer: &Tokenizer) -> Result<Corpus> {
    let dir = dir.as_ref();
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| QwebError::Io { path, source }
    };
    let mut files: Vec<PathBuf> = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err(dir))? {
        let entry = entry.map_err(io_err(dir))?;
        let path = entry.path();
        let is_txt = path.extension().is_some_and(|e| e == "txt");
        if is_txt && entry.file_type().map_err(io_err(&path))?.is_file() {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));

    let documents = files
        .par_iter()
        .enumerate()
        .map(|(id, path)| {
            let bytes = fs::read(path).map_err(io_err(path))?;
            let text = String::from_utf8(bytes)
                .map_err(|_| QwebError::NotUtf8 { path: path.clone() })?;
            Ok(Document {
                id,
                name: path
                    .file_name()
                    .map(|f| f.to_string_lossy().into_owned())
                    .unwrap_or_default(),
                tokens: tokenizer.tokenize(&text),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Corpus::from_documents(documents, tokenizer.clone())
}

/// Document counts for a term triple `(A, B, X)`.
///
/// `n_AX` counts documents containing both A and X, `n_ABX` all three, and
/// so on. Serialised with the field names `n, n_A, n_B, n_AB, n_AX, n_BX,
/// n_ABX`, all required.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CooccurrenceStats {
    pub n: u64,
    #[serde(rename = "n_A")]
    pub n_a: u64,
    #[serde(rename = "n_B")]
    pub n_b: u64,
    #[serde(rename = "n_AB")]
    pub n_ab: u64,
    #[serde(rename = "n_AX")]
    pub n_ax: u64,
    #[serde(rename = "n_BX")]
    pub n_bx: u64,
    #[serde(rename = "n_ABX")]
    pub n_abx: u64,
}

/// `(μ_A, μ_B, μ_AB target)` from counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frequencies {
    pub mu_a: f64,
    pub mu_b: f64,
    pub mu_ab_target: f64,
}

impl CooccurrenceStats {
    /// Parses and validates the stats JSON literal.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let stats: CooccurrenceStats = serde_json::from_str(s)?;
        stats.validate()?;
        Ok(stats)
    }

    /// Documents containing A but not X.
    pub fn n_axp(&self) -> u64 {
        self.n_a - self.n_ax
    }

    /// Documents containing B but not X.
    pub fn n_bxp(&self) -> u64 {
        self.n_b - self.n_bx
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(QwebError::InvalidStats(msg));
        let s = self;
        if s.n_ab > s.n_a.min(s.n_b) {
            return bad(format!("n_AB={} exceeds min(n_A, n_B)", s.n_ab));
        }
        if s.n_ax > s.n_a {
            return bad(format!("n_AX={} exceeds n_A={}", s.n_ax, s.n_a));
        }
        if s.n_bx > s.n_b {
            return bad(format!("n_BX={} exceeds n_B={}", s.n_bx, s.n_b));
        }
        if s.n_abx > s.n_ab.min(s.n_ax).min(s.n_bx) {
            return bad(format!(
                "n_ABX={} exceeds min(n_AB, n_AX, n_BX)",
                s.n_abx
            ));
        }
        if s.n_a > s.n || s.n_b > s.n {
            return bad(format!("term counts exceed n={}", s.n));
        }
        if s.n_a + s.n_b - s.n_ab > s.n {
            return bad(format!(
                "n_A + n_B - n_AB = {} exceeds n={}",
                s.n_a + s.n_b - s.n_ab,
                s.n
            ));
        }
        Ok(())
    }

    pub fn mu_a(&self) -> Result<f64> {
        ratio(self.n_ax, self.n_a, "n_A")
    }

    pub fn mu_b(&self) -> Result<f64> {
        ratio(self.n_bx, self.n_b, "n_B")
    }

    /// `n_ABX / n_AB`, the probability a combined-concept model must reproduce.
    pub fn mu_ab_target(&self) -> Result<f64> {
        ratio(self.n_abx, self.n_ab, "n_AB")
    }

    pub fn relative_frequencies(&self) -> Result<Frequencies> {
        Ok(Frequencies {
            mu_a: self.mu_a()?,
            mu_b: self.mu_b()?,
            mu_ab_target: self.mu_ab_target()?,
        })
    }
}

fn ratio(num: u64, den: u64, name: &'static str) -> Result<f64> {
    if den == 0 {
        return Err(QwebError::UndefinedFrequency(name));
    }
    Ok(num as f64 / den as f64)
}
