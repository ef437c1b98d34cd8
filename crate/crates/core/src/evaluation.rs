//! Entropy of a clustering against ground-truth class labels.
//!
//! A cluster's entropy is `−(1/ln q) Σ_i p_i ln p_i` over its class
//! proportions, with `0·ln 0 = 0`, so it lies in `[0, 1]`. The total is the
//! size-weighted mean over clusters. `q` is the number of distinct labels in
//! the dataset.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use crate::numfmt::fixed6;
use crate::{ClusteringSolution, Error, Result, Scalar};

/// Normalised entropy of one cluster's class counts, natural log.
pub fn cluster_entropy<T: Scalar>(counts: &[usize], q: usize) -> Result<T> {
    cluster_entropy_with(counts, q, T::ln)
}

/// Same as [`cluster_entropy`] but with logarithms in `base`.
pub fn cluster_entropy_base<T: Scalar>(counts: &[usize], q: usize, base: T) -> Result<T> {
    cluster_entropy_with(counts, q, |x: T| x.log(base))
}

fn cluster_entropy_with<T: Scalar>(counts: &[usize], q: usize, log: impl Fn(T) -> T) -> Result<T> {
    if q < 2 {
        return Err(Error::TooFewClasses(q));
    }
    let size: usize = counts.iter().sum();
    if size == 0 {
        return Err(Error::Empty("entropy of an empty cluster"));
    }
    let size = T::of_usize(size);
    let h: T = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = T::of_usize(c) / size;
            p * log(p)
        })
        .sum();
    Ok((-h / log(T::of_usize(q))).max(T::zero()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterEntropy<T> {
    pub cluster: usize,
    pub size: usize,
    pub entropy: T,
    pub class_counts: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport<T> {
    /// Nonempty clusters in index order.
    pub per_cluster: Vec<ClusterEntropy<T>>,
    pub total: T,
    pub q: usize,
    pub n: usize,
}

/// Entropy report for `assignment` (document → cluster index) against
/// `labels`. Cluster indices that receive no document are skipped.
pub fn total_entropy<T: Scalar, S: AsRef<str>>(assignment: &[usize], labels: &[S]) -> Result<EntropyReport<T>> {
    if labels.len() != assignment.len() {
        return Err(Error::LabelCount {
            labels: labels.len(),
            docs: assignment.len(),
        });
    }
    let classes: BTreeSet<&str> = labels.iter().map(AsRef::as_ref).collect();
    let q = classes.len();
    let n = assignment.len();

    let mut by_cluster: BTreeMap<usize, BTreeMap<String, usize>> = BTreeMap::new();
    for (&r, label) in assignment.iter().zip(labels) {
        *by_cluster
            .entry(r)
            .or_default()
            .entry(label.as_ref().to_owned())
            .or_insert(0) += 1;
    }

    let mut per_cluster = Vec::with_capacity(by_cluster.len());
    let mut total = T::zero();
    for (cluster, class_counts) in by_cluster {
        let counts: Vec<usize> = class_counts.values().copied().collect();
        let size = counts.iter().sum();
        let entropy = cluster_entropy::<T>(&counts, q)?;
        total += T::of_usize(size) / T::of_usize(n) * entropy;
        per_cluster.push(ClusterEntropy {
            cluster,
            size,
            entropy,
            class_counts,
        });
    }
    Ok(EntropyReport {
        per_cluster,
        total,
        q,
        n,
    })
}

pub fn solution_entropy<T: Scalar, S: AsRef<str>>(
    sol: &ClusteringSolution<T>,
    labels: &[S],
) -> Result<EntropyReport<T>> {
    total_entropy(sol.assignment(), labels)
}

impl<T: Scalar> EntropyReport<T> {
    fn classes_field(counts: &BTreeMap<String, usize>) -> String {
        counts
            .iter()
            .map(|(l, c)| format!("{l}:{c}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Line-oriented report: one line per cluster, then the total.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "cluster\tsize\tentropy\tclasses")?;
        for c in &self.per_cluster {
            writeln!(
                w,
                "{}\t{}\t{}\t{}",
                c.cluster,
                c.size,
                fixed6(c.entropy.to_f64_lossy()),
                Self::classes_field(&c.class_counts)
            )?;
        }
        writeln!(
            w,
            "total\t{}\t{}\tq={}",
            self.n,
            fixed6(self.total.to_f64_lossy()),
            self.q
        )?;
        Ok(())
    }

    /// CSV with header `cluster,size,entropy,classes`; the last row has
    /// cluster `total`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["cluster", "size", "entropy", "classes"])?;
        for c in &self.per_cluster {
            out.write_record([
                c.cluster.to_string(),
                c.size.to_string(),
                fixed6(c.entropy.to_f64_lossy()),
                Self::classes_field(&c.class_counts),
            ])?;
        }
        out.write_record([
            "total".to_owned(),
            self.n.to_string(),
            fixed6(self.total.to_f64_lossy()),
            String::new(),
        ])?;
        out.flush()?;
        Ok(())
    }
}
