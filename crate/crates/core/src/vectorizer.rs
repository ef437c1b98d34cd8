//! Tokenisation, term counting and tf-idf weighting.
//!
//! Weights are `tf · ln(N / df)`, then each document is scaled to unit
//! length. Terms present in every document get weight zero and are dropped.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use crate::{Error, Result, Scalar, SparseVector};

/// Lowercased alphabetic tokens of at least two characters.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphabetic())
        .filter(|t| t.chars().nth(1).is_some())
        .map(str::to_lowercase)
        .collect()
}

/// Term dictionary: term id ↔ term string.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Id of `term`, assigning the next free id on first sight.
    pub fn intern(&mut self, term: &str) -> usize {
        if let Some(&id) = self.index.get(term) {
            return id;
        }
        let id = self.terms.len();
        self.terms.push(term.to_owned());
        self.index.insert(term.to_owned(), id);
        id
    }

    pub fn id(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, id: usize) -> Option<&str> {
        self.terms.get(id).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// A corpus as raw term-frequency vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct DocTermMatrix<T> {
    pub docs: Vec<SparseVector<T>>,
    /// Absent when the matrix came from a numeric file.
    pub vocab: Option<Vocabulary>,
    pub doc_ids: Vec<String>,
    pub labels: Option<Vec<String>>,
    pub n_terms: usize,
}

impl<T: Scalar> DocTermMatrix<T> {
    /// Checks the shape invariants and assembles a matrix.
    pub fn new(
        docs: Vec<SparseVector<T>>,
        doc_ids: Vec<String>,
        labels: Option<Vec<String>>,
        n_terms: usize,
        vocab: Option<Vocabulary>,
    ) -> Result<Self> {
        if doc_ids.len() != docs.len() {
            return Err(Error::Inconsistent(format!(
                "{} document ids for {} documents",
                doc_ids.len(),
                docs.len()
            )));
        }
        if let Some(l) = &labels {
            if l.len() != docs.len() {
                return Err(Error::LabelCount {
                    labels: l.len(),
                    docs: docs.len(),
                });
            }
        }
        if let Some(d) = docs.iter().find(|d| d.dim() != n_terms) {
            return Err(Error::DimensionMismatch(n_terms, d.dim()));
        }
        let mut seen = HashSet::with_capacity(doc_ids.len());
        for id in &doc_ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateDocId(id.clone()));
            }
        }
        Ok(Self {
            docs,
            vocab,
            doc_ids,
            labels,
            n_terms,
        })
    }

    pub fn n_docs(&self) -> usize {
        self.docs.len()
    }

    /// Keeps only the documents at `keep` (in that order).
    pub fn select(&self, keep: &[usize]) -> Self {
        Self {
            docs: keep.iter().map(|&i| self.docs[i].clone()).collect(),
            vocab: self.vocab.clone(),
            doc_ids: keep.iter().map(|&i| self.doc_ids[i].clone()).collect(),
            labels: self
                .labels
                .as_ref()
                .map(|l| keep.iter().map(|&i| l[i].clone()).collect()),
            n_terms: self.n_terms,
        }
    }
}

/// Counts terms in `(doc_id, text)` pairs. Term ids follow first appearance.
pub fn build_matrix<T: Scalar>(
    docs: &[(String, String)],
    labels: Option<Vec<String>>,
) -> Result<DocTermMatrix<T>> {
    build_matrix_with_stopwords(docs, labels, &HashSet::new())
}

pub fn build_matrix_with_stopwords<T: Scalar>(
    docs: &[(String, String)],
    labels: Option<Vec<String>>,
    stopwords: &HashSet<String>,
) -> Result<DocTermMatrix<T>> {
    let mut vocab = Vocabulary::new();
    let mut counts: Vec<HashMap<usize, usize>> = Vec::with_capacity(docs.len());
    for (_, text) in docs {
        let mut tf = HashMap::new();
        for tok in tokenize(text) {
            if stopwords.contains(&tok) {
                continue;
            }
            *tf.entry(vocab.intern(&tok)).or_insert(0) += 1;
        }
        counts.push(tf);
    }
    let m = vocab.len();
    let vectors = counts
        .into_iter()
        .map(|tf| {
            let entries = tf.into_iter().map(|(t, c)| (t, T::of_usize(c))).collect();
            SparseVector::from_unsorted(m, entries)
        })
        .collect::<Result<Vec<_>>>()?;
    let ids = docs.iter().map(|(id, _)| id.clone()).collect();
    DocTermMatrix::new(vectors, ids, labels, m, Some(vocab))
}

/// `(doc_id, text)` pairs and their class labels, in the same order.
pub type LabelledTexts = (Vec<(String, String)>, Vec<String>);

/// Reads `<root>/<class_label>/<doc_id>.txt`. Classes and files are visited
/// in name order. Invalid UTF-8 is replaced.
pub fn read_corpus_dir(root: &Path) -> Result<LabelledTexts> {
    let mut classes: Vec<_> = fs::read_dir(root)?
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .filter(|e| e.path().is_dir())
        .collect();
    classes.sort_by_key(|e| e.file_name());

    let mut docs = Vec::new();
    let mut labels = Vec::new();
    for class in classes {
        let label = class.file_name().to_string_lossy().into_owned();
        let mut files: Vec<_> = fs::read_dir(class.path())?
            .collect::<std::io::Result<Vec<_>>>()?
            .into_iter()
            .map(|e| e.path())
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "txt"))
            .collect();
        files.sort();
        for path in files {
            let bytes = fs::read(&path)?;
            let id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            docs.push((id, String::from_utf8_lossy(&bytes).into_owned()));
            labels.push(label.clone());
        }
    }
    Ok((docs, labels))
}

/// Document frequencies of each term.
#[derive(Debug, Clone, PartialEq)]
pub struct TfIdfModel {
    pub doc_freq: Vec<usize>,
    pub n_docs: usize,
}

impl TfIdfModel {
    /// `ln(N / df)`, or zero for a term never seen.
    pub fn idf<T: Scalar>(&self, term: usize) -> T {
        match self.doc_freq[term] {
            0 => T::zero(),
            df => (T::of_usize(self.n_docs) / T::of_usize(df)).ln(),
        }
    }
}

pub fn fit_idf<T: Scalar>(matrix: &DocTermMatrix<T>) -> Result<TfIdfModel> {
    if matrix.n_docs() == 0 {
        return Err(Error::Empty("cannot fit idf on an empty corpus"));
    }
    let mut doc_freq = vec![0usize; matrix.n_terms];
    for d in &matrix.docs {
        for (t, w) in d.iter() {
            if w > T::zero() {
                doc_freq[t] += 1;
            }
        }
    }
    Ok(TfIdfModel {
        doc_freq,
        n_docs: matrix.n_docs(),
    })
}

/// Unit-length vectors for the documents that survived weighting.
#[derive(Debug, Clone, PartialEq)]
pub struct Transformed<T> {
    pub vectors: Vec<SparseVector<T>>,
    /// Original index of each entry in `vectors`.
    pub kept: Vec<usize>,
    /// Documents whose weighted vector had zero norm.
    pub zero_norm: Vec<usize>,
}

/// tf-idf weighting followed by unit normalisation.
pub fn transform<T: Scalar>(matrix: &DocTermMatrix<T>, model: &TfIdfModel) -> Result<Transformed<T>> {
    if model.doc_freq.len() != matrix.n_terms {
        return Err(Error::DimensionMismatch(model.doc_freq.len(), matrix.n_terms));
    }
    let idf: Vec<T> = (0..matrix.n_terms).map(|t| model.idf(t)).collect();
    normalize_each(matrix, |t, w| w * idf[t])
}

/// Unit normalisation of the raw weights, with no idf factor.
pub fn normalize_rows<T: Scalar>(matrix: &DocTermMatrix<T>) -> Result<Transformed<T>> {
    normalize_each(matrix, |_, w| w)
}

fn normalize_each<T: Scalar>(
    matrix: &DocTermMatrix<T>,
    weight: impl Fn(usize, T) -> T,
) -> Result<Transformed<T>> {
    let mut out = Transformed {
        vectors: Vec::with_capacity(matrix.n_docs()),
        kept: Vec::with_capacity(matrix.n_docs()),
        zero_norm: Vec::new(),
    };
    for (i, d) in matrix.docs.iter().enumerate() {
        let entries = d
            .iter()
            .map(|(t, w)| (t, weight(t, w)))
            .filter(|&(_, w)| w != T::zero())
            .collect();
        let v = SparseVector::new(d.dim(), entries)?;
        match v.normalize() {
            Ok(u) => {
                out.vectors.push(u);
                out.kept.push(i);
            }
            Err(Error::ZeroNorm) => out.zero_norm.push(i),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
