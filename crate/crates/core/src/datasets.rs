//! CLUTO sparse-matrix files and a labelled synthetic corpus generator.
//!
//! The `.mat` dialect: the first line is `n_rows n_cols n_nonzeros`; each
//! following line holds one row as space-separated `col value` pairs with
//! 1-based columns. An empty line is an empty row. `.rclass` files hold one
//! class label per row and `.rlabel` files one row (document) id per row.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::rng::{Stream, GENERATOR_STREAM};
use crate::vectorizer::Vocabulary;
use crate::{DocTermMatrix, Error, Result, Scalar, SparseVector};

/// Raw contents of a `.mat` file, columns converted to 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct ClutoMatrix {
    pub n_rows: usize,
    pub n_cols: usize,
    pub n_nonzeros: usize,
    pub rows: Vec<Vec<(usize, f64)>>,
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

impl ClutoMatrix {
    /// Parses the sparse dialect. `path` is only used in error messages.
    pub fn parse<R: BufRead>(reader: R, path: &Path) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let header = loop {
            match lines.next() {
                Some((_, l)) => {
                    let l = l?;
                    if !l.trim().is_empty() {
                        break l;
                    }
                }
                None => return Err(parse_err(path, 1, "missing header")),
            }
        };
        let fields: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(path, 1, format!("bad header `{header}`: {e}")))?;
        let [n_rows, n_cols, n_nonzeros] = fields[..] else {
            return Err(parse_err(
                path,
                1,
                format!("header must be `n_rows n_cols n_nonzeros`, got `{header}`"),
            ));
        };

        let mut rows = Vec::with_capacity(n_rows);
        let mut seen = 0usize;
        for (idx, line) in lines {
            let lineno = idx + 1;
            let line = line?;
            if rows.len() == n_rows {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(parse_err(path, lineno, format!("more than {n_rows} rows")));
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if !toks.len().is_multiple_of(2) {
                return Err(parse_err(path, lineno, "odd number of fields; expected `col value` pairs"));
            }
            let mut row = Vec::with_capacity(toks.len() / 2);
            for pair in toks.chunks(2) {
                let col: usize = pair[0]
                    .parse()
                    .map_err(|e| parse_err(path, lineno, format!("bad column `{}`: {e}", pair[0])))?;
                let val: f64 = pair[1]
                    .parse()
                    .map_err(|e| parse_err(path, lineno, format!("bad value `{}`: {e}", pair[1])))?;
                if col == 0 || col > n_cols {
                    return Err(parse_err(path, lineno, format!("column {col} outside 1..={n_cols}")));
                }
                if !val.is_finite() {
                    return Err(parse_err(path, lineno, format!("non-finite value `{}`", pair[1])));
                }
                row.push((col - 1, val));
            }
            seen += row.len();
            rows.push(row);
        }
        if rows.len() != n_rows {
            return Err(parse_err(
                path,
                rows.len() + 2,
                format!("header declares {n_rows} rows, found {}", rows.len()),
            ));
        }
        if seen != n_nonzeros {
            return Err(parse_err(
                path,
                1,
                format!("header declares {n_nonzeros} nonzeros, found {seen}"),
            ));
        }
        Ok(Self {
            n_rows,
            n_cols,
            n_nonzeros,
            rows,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(BufReader::new(File::open(path)?), path)
    }

    pub fn into_vectors<T: Scalar>(self) -> Result<Vec<SparseVector<T>>> {
        let n_cols = self.n_cols;
        self.rows
            .into_iter()
            .map(|row| SparseVector::from_unsorted(n_cols, row.into_iter().map(|(c, v)| (c, T::of(v))).collect()))
            .collect()
    }
}

/// One non-empty line per entry; trailing blank lines are ignored.
pub fn read_lines(path: &Path) -> Result<Vec<String>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out: Vec<String> = reader
        .lines()
        .map(|l| l.map(|s| s.trim().to_owned()))
        .collect::<std::io::Result<_>>()?;
    while out.last().is_some_and(String::is_empty) {
        out.pop();
    }
    Ok(out)
}

/// `<mat>.rlabel` next to a matrix file, or the same with `.mat` replaced.
fn sibling(mat_path: &Path, ext: &str) -> PathBuf {
    let mut s = mat_path.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// Loads a `.mat` file and, when given, its `.rclass` labels. Row ids come
/// from `<mat>.rlabel` when that file exists, else the 0-based row index.
pub fn load_cluto<T: Scalar>(mat_path: &Path, rclass_path: Option<&Path>) -> Result<DocTermMatrix<T>> {
    let mat = ClutoMatrix::read(mat_path)?;
    let n = mat.n_rows;
    let n_cols = mat.n_cols;

    let labels = match rclass_path {
        Some(p) => {
            let labels = read_lines(p)?;
            if labels.len() != n {
                return Err(Error::LabelCount {
                    labels: labels.len(),
                    docs: n,
                });
            }
            Some(labels)
        }
        None => None,
    };
    let rlabel = sibling(mat_path, "rlabel");
    let doc_ids = if rlabel.is_file() {
        let ids = read_lines(&rlabel)?;
        if ids.len() != n {
            return Err(parse_err(&rlabel, ids.len(), format!("{} row ids for {n} rows", ids.len())));
        }
        ids
    } else {
        (0..n).map(|i| i.to_string()).collect()
    };
    DocTermMatrix::new(mat.into_vectors()?, doc_ids, labels, n_cols, None)
}

/// Writes vectors in the `.mat` dialect. Values use the shortest decimal
/// form that parses back to the same float.
pub fn write_mat<T: Scalar, W: Write>(docs: &[SparseVector<T>], n_cols: usize, w: W) -> Result<()> {
    let mut w = BufWriter::new(w);
    let nnz: usize = docs.iter().map(SparseVector::nnz).sum();
    writeln!(w, "{} {} {}", docs.len(), n_cols, nnz)?;
    for d in docs {
        let mut first = true;
        for (t, v) in d.iter() {
            if !first {
                w.write_all(b" ")?;
            }
            first = false;
            write!(w, "{} {}", t + 1, v.to_f64_lossy())?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_lines<S: AsRef<str>, W: Write>(lines: &[S], w: W) -> Result<()> {
    let mut w = BufWriter::new(w);
    for l in lines {
        writeln!(w, "{}", l.as_ref())?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `<mat_path>`, plus `<mat_path>.rclass` when labels are present and
/// `<mat_path>.rlabel` with the document ids.
pub fn save_cluto<T: Scalar>(matrix: &DocTermMatrix<T>, mat_path: &Path) -> Result<()> {
    write_mat(&matrix.docs, matrix.n_terms, File::create(mat_path)?)?;
    if let Some(labels) = &matrix.labels {
        write_lines(labels, File::create(sibling(mat_path, "rclass"))?)?;
    }
    write_lines(&matrix.doc_ids, File::create(sibling(mat_path, "rlabel"))?)?;
    Ok(())
}

/// Shape of a generated corpus. Each class owns a private block of
/// `vocab_per_class` terms; all classes share a block of `shared_vocab`.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub n_classes: usize,
    pub docs_per_class: usize,
    pub vocab_per_class: usize,
    pub shared_vocab: usize,
    /// Tokens drawn per document.
    pub doc_length: usize,
    /// Probability that a token comes from the shared block.
    pub noise_fraction: f64,
    pub rng_seed: u64,
}

impl Default for SyntheticSpec {
    /// 15 classes of 100 documents each.
    fn default() -> Self {
        Self {
            n_classes: 15,
            docs_per_class: 100,
            vocab_per_class: 60,
            shared_vocab: 120,
            doc_length: 50,
            noise_fraction: 0.3,
            rng_seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("n_classes", self.n_classes),
            ("docs_per_class", self.docs_per_class),
            ("vocab_per_class", self.vocab_per_class),
            ("shared_vocab", self.shared_vocab),
            ("doc_length", self.doc_length),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, c)| *c == 0) {
            return Err(Error::InvalidParameter(format!("{name} must be at least 1")));
        }
        if !(0.0..1.0).contains(&self.noise_fraction) {
            return Err(Error::InvalidParameter(format!(
                "noise_fraction {} outside [0, 1)",
                self.noise_fraction
            )));
        }
        Ok(())
    }
}

/// Draws a labelled term-frequency corpus. Documents are grouped by class.
pub fn generate_synthetic<T: Scalar>(spec: &SyntheticSpec) -> Result<DocTermMatrix<T>> {
    spec.validate()?;
    let private = spec.n_classes * spec.vocab_per_class;
    let m = private + spec.shared_vocab;

    let mut vocab = Vocabulary::new();
    for c in 0..spec.n_classes {
        for j in 0..spec.vocab_per_class {
            vocab.intern(&format!("c{c:02}w{j:03}"));
        }
    }
    for j in 0..spec.shared_vocab {
        vocab.intern(&format!("sharedw{j:03}"));
    }

    let mut rng = Stream::new(spec.rng_seed, GENERATOR_STREAM);
    let n = spec.n_classes * spec.docs_per_class;
    let mut docs = Vec::with_capacity(n);
    let mut ids = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for c in 0..spec.n_classes {
        let label = format!("class{c:02}");
        for i in 0..spec.docs_per_class {
            let mut counts = vec![0usize; m];
            for _ in 0..spec.doc_length {
                let term = if rng.unit() < spec.noise_fraction {
                    private + rng.below(spec.shared_vocab)
                } else {
                    c * spec.vocab_per_class + rng.below(spec.vocab_per_class)
                };
                counts[term] += 1;
            }
            let entries = counts
                .iter()
                .enumerate()
                .filter(|&(_, &n)| n > 0)
                .map(|(t, &n)| (t, T::of_usize(n)))
                .collect();
            docs.push(SparseVector::new(m, entries)?);
            ids.push(format!("{label}-{i:04}"));
            labels.push(label.clone());
        }
    }
    DocTermMatrix::new(docs, ids, Some(labels), m, Some(vocab))
}
