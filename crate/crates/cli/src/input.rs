//! Loading a corpus from any supported source into unit-length vectors.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use textclust::datasets::{self, SyntheticSpec};
use textclust::vectorizer::{self, Transformed};
use textclust::{Matrix, SparseVec};

#[derive(Debug, Args)]
pub struct InputArgs {
    /// CLUTO `.mat` file.
    #[arg(long, conflicts_with = "corpus")]
    pub input: Option<PathBuf>,

    /// Class labels, one per row. Defaults to `<input>.rclass` when present.
    #[arg(long)]
    pub rclass: Option<PathBuf>,

    /// Directory laid out as `<root>/<class_label>/<doc_id>.txt`.
    #[arg(long)]
    pub corpus: Option<PathBuf>,

    /// Skip idf weighting; only normalise rows to unit length.
    #[arg(long)]
    pub no_tfidf: bool,

    /// Drop documents whose weighted vector is zero instead of failing.
    #[arg(long)]
    pub drop_empty: bool,

    /// File of stop words (whitespace separated) removed from text corpora.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
}

/// Unit vectors plus the ids and labels of the documents that survived.
pub struct Prepared {
    pub name: String,
    pub docs: Vec<SparseVec>,
    pub doc_ids: Vec<String>,
    pub labels: Option<Vec<String>>,
    pub n_terms: usize,
}

fn read_stopwords(path: &Path) -> Result<HashSet<String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(text.split_whitespace().map(str::to_lowercase).collect())
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_owned())
}

impl InputArgs {
    pub fn load_matrix(&self) -> Result<(String, Matrix)> {
        if let Some(dir) = &self.corpus {
            let stop = match &self.stopwords {
                Some(p) => read_stopwords(p)?,
                None => HashSet::new(),
            };
            let (docs, labels) = vectorizer::read_corpus_dir(dir)
                .with_context(|| format!("reading corpus {}", dir.display()))?;
            let m = vectorizer::build_matrix_with_stopwords(&docs, Some(labels), &stop)?;
            return Ok((stem(dir), m));
        }
        let Some(mat) = &self.input else {
            bail!("one of --input or --corpus is required");
        };
        let rclass = match &self.rclass {
            Some(p) => Some(p.clone()),
            None => {
                let mut guess = mat.as_os_str().to_owned();
                guess.push(".rclass");
                let guess = PathBuf::from(guess);
                guess.is_file().then_some(guess)
            }
        };
        let m = datasets::load_cluto(mat, rclass.as_deref())
            .with_context(|| format!("loading {}", mat.display()))?;
        Ok((stem(mat), m))
    }

    pub fn prepare(&self) -> Result<Prepared> {
        let (name, m) = self.load_matrix()?;
        weigh(name, &m, self.no_tfidf, self.drop_empty)
    }
}

pub fn weigh(name: String, m: &Matrix, no_tfidf: bool, drop_empty: bool) -> Result<Prepared> {
    if m.n_docs() == 0 {
        bail!("corpus has no documents");
    }
    let Transformed {
        vectors,
        kept,
        zero_norm,
    } = if no_tfidf {
        vectorizer::normalize_rows(m)?
    } else {
        vectorizer::transform(m, &vectorizer::fit_idf(m)?)?
    };
    if !zero_norm.is_empty() {
        let ids: Vec<&str> = zero_norm.iter().map(|&i| m.doc_ids[i].as_str()).collect();
        if !drop_empty {
            bail!(
                "{} document(s) have zero-norm vectors (rerun with --drop-empty to skip them): {}",
                ids.len(),
                ids.join(" ")
            );
        }
        eprintln!("dropping {} zero-norm document(s): {}", ids.len(), ids.join(" "));
    }
    let kept_m = m.select(&kept);
    Ok(Prepared {
        name,
        docs: vectors,
        doc_ids: kept_m.doc_ids,
        labels: kept_m.labels,
        n_terms: m.n_terms,
    })
}

#[derive(Debug, Args)]
pub struct SyntheticArgs {
    /// Generate a labelled synthetic corpus instead of reading one.
    #[arg(long, conflicts_with_all = ["input", "corpus"])]
    pub synthetic: bool,
    #[arg(long, default_value_t = SyntheticSpec::default().n_classes)]
    pub classes: usize,
    #[arg(long, default_value_t = SyntheticSpec::default().docs_per_class)]
    pub docs_per_class: usize,
    #[arg(long, default_value_t = SyntheticSpec::default().vocab_per_class)]
    pub vocab_per_class: usize,
    #[arg(long, default_value_t = SyntheticSpec::default().shared_vocab)]
    pub shared_vocab: usize,
    #[arg(long, default_value_t = SyntheticSpec::default().doc_length)]
    pub doc_length: usize,
    /// Fraction of tokens drawn from the shared vocabulary.
    #[arg(long, default_value_t = SyntheticSpec::default().noise_fraction)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub synthetic_seed: u64,
}

impl SyntheticArgs {
    pub fn spec(&self) -> SyntheticSpec {
        SyntheticSpec {
            n_classes: self.classes,
            docs_per_class: self.docs_per_class,
            vocab_per_class: self.vocab_per_class,
            shared_vocab: self.shared_vocab,
            doc_length: self.doc_length,
            noise_fraction: self.noise,
            rng_seed: self.synthetic_seed,
        }
    }
}
