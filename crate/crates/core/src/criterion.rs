//! The internal criterion `T = Σ_r Σ_{d∈S_r} cos(d, C_r)` and incremental
//! single-document moves.
//!
//! For unit-length documents `Σ_{d∈S_r} cos(d, C_r) = ‖D_r‖`, where `D_r` is
//! the composite (sum) of cluster `r`. The solution therefore tracks one
//! dense composite per cluster together with its norm, and `T` is the sum of
//! those norms. [`criterion_value`] evaluates the cosine sum directly and
//! serves as the independent check.

use crate::{DenseAccumulator, Error, Result, Scalar, SparseVector};

/// Moves between full-scratch audits in debug builds.
const AUDIT_INTERVAL: usize = 1_000;

/// Hard partition of `N` documents into `K` nonempty clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringSolution<T> {
    assignment: Vec<usize>,
    composites: Vec<DenseAccumulator<T>>,
    norms: Vec<T>,
    sizes: Vec<usize>,
    cached_t: T,
    accepted: usize,
}

impl<T: Scalar> ClusteringSolution<T> {
    /// Builds composites, sizes and `T` for `assignment` (document index →
    /// cluster index in `0..k`). Every cluster must receive a document.
    pub fn from_assignment(docs: &[SparseVector<T>], assignment: Vec<usize>, k: usize) -> Result<Self> {
        if assignment.len() != docs.len() {
            return Err(Error::Inconsistent(format!(
                "assignment covers {} documents, corpus has {}",
                assignment.len(),
                docs.len()
            )));
        }
        let dim = docs.first().map_or(0, SparseVector::dim);
        let mut composites = vec![DenseAccumulator::new(dim); k];
        let mut sizes = vec![0usize; k];
        for (d, &r) in docs.iter().zip(&assignment) {
            if r >= k {
                return Err(Error::ClusterOutOfRange { cluster: r, k });
            }
            composites[r].add(d)?;
            sizes[r] += 1;
        }
        if let Some(r) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::EmptyCluster(r));
        }
        let norms: Vec<T> = composites.iter().map(DenseAccumulator::norm).collect();
        let cached_t = norms.iter().copied().sum();
        Ok(Self {
            assignment,
            composites,
            norms,
            sizes,
            cached_t,
            accepted: 0,
        })
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn n_docs(&self) -> usize {
        self.assignment.len()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn cluster_of(&self, doc: usize) -> usize {
        self.assignment[doc]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn composite(&self, r: usize) -> &DenseAccumulator<T> {
        &self.composites[r]
    }

    /// Cached `‖D_r‖`.
    pub fn composite_norm(&self, r: usize) -> T {
        self.norms[r]
    }

    /// Current criterion value, maintained as `Σ_r ‖D_r‖`.
    pub fn criterion(&self) -> T {
        self.cached_t
    }

    pub fn members(&self, r: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&i| self.assignment[i] == r)
            .collect()
    }

    fn check_move(&self, docs: &[SparseVector<T>], doc: usize, to: usize) -> Result<usize> {
        if docs.len() != self.assignment.len() {
            return Err(Error::Inconsistent("document list does not match solution".into()));
        }
        if doc >= self.assignment.len() {
            return Err(Error::DocOutOfRange {
                doc,
                n: self.assignment.len(),
            });
        }
        if to >= self.k() {
            return Err(Error::ClusterOutOfRange { cluster: to, k: self.k() });
        }
        let from = self.assignment[doc];
        if from == to {
            return Err(Error::SameCluster { doc, cluster: to });
        }
        if self.sizes[from] < 2 {
            return Err(Error::SoleMember { doc, cluster: from });
        }
        Ok(from)
    }

    /// `T_after − T_before` for moving `doc` to cluster `to`, without
    /// mutating. Positive means improvement.
    pub fn move_delta(&self, docs: &[SparseVector<T>], doc: usize, to: usize) -> Result<T> {
        let from = self.check_move(docs, doc, to)?;
        let d = &docs[doc];
        let dd = d.norm_sq();
        let two = T::of(2.0);

        // ‖D ± d‖ − ‖D‖ written as (‖D ± d‖² − ‖D‖²) / (‖D ± d‖ + ‖D‖)
        // to avoid cancellation between nearly equal norms.
        let grow = |norm: T, num: T| -> T {
            let new = (norm * norm + num).max(T::zero()).sqrt();
            let den = new + norm;
            if den > T::zero() {
                num / den
            } else {
                T::zero()
            }
        };
        let d_from = grow(self.norms[from], dd - two * self.composites[from].dot(d)?);
        let d_to = grow(self.norms[to], dd + two * self.composites[to].dot(d)?);
        Ok(d_from + d_to)
    }

    /// Moves `doc` to cluster `to` and returns the predicted delta. Norms of
    /// the two touched composites are recomputed from the dense vectors.
    pub fn apply_move(&mut self, docs: &[SparseVector<T>], doc: usize, to: usize) -> Result<T> {
        let delta = self.move_delta(docs, doc, to)?;
        let from = self.assignment[doc];
        let d = &docs[doc];
        self.composites[from].sub(d)?;
        self.composites[to].add(d)?;
        self.sizes[from] -= 1;
        self.sizes[to] += 1;
        self.assignment[doc] = to;
        self.norms[from] = self.composites[from].norm();
        self.norms[to] = self.composites[to].norm();
        self.cached_t = self.norms.iter().copied().sum();

        self.accepted += 1;
        if cfg!(debug_assertions) && self.accepted.is_multiple_of(AUDIT_INTERVAL) {
            if let Err(e) = self.check_consistency(docs) {
                panic!("clustering state drifted after {} moves: {e}", self.accepted);
            }
        }
        Ok(delta)
    }

    /// Recomputes everything from scratch and compares: sizes exactly,
    /// composites within 1e-7 per coordinate, `T` within 1e-6.
    pub fn check_consistency(&self, docs: &[SparseVector<T>]) -> Result<()> {
        let fresh = Self::from_assignment(docs, self.assignment.clone(), self.k())?;
        if fresh.sizes != self.sizes {
            return Err(Error::Inconsistent(format!(
                "sizes {:?} != recomputed {:?}",
                self.sizes, fresh.sizes
            )));
        }
        let coord_tol = T::of(1e-7);
        for (r, (a, b)) in self.composites.iter().zip(&fresh.composites).enumerate() {
            if a.dim() != b.dim() {
                return Err(Error::DimensionMismatch(a.dim(), b.dim()));
            }
            if let Some(i) = (0..a.dim()).find(|&i| (a.as_slice()[i] - b.as_slice()[i]).abs() > coord_tol) {
                return Err(Error::Inconsistent(format!("composite {r} drifted at term {i}")));
            }
        }
        if (fresh.cached_t - self.cached_t).abs() > T::of(1e-6) {
            return Err(Error::Inconsistent(format!(
                "cached T {} != recomputed {}",
                self.cached_t, fresh.cached_t
            )));
        }
        Ok(())
    }
}

/// `Σ_r Σ_{d∈S_r} cos(d, C_r)` evaluated directly from centroids.
pub fn criterion_value<T: Scalar>(docs: &[SparseVector<T>], sol: &ClusteringSolution<T>) -> Result<T> {
    if docs.len() != sol.n_docs() {
        return Err(Error::Inconsistent("document list does not match solution".into()));
    }
    let mut total = T::zero();
    for r in 0..sol.k() {
        let members = sol.members(r);
        let centroid = SparseVector::centroid(members.iter().map(|&i| &docs[i]))?;
        for &i in &members {
            total += docs[i].cosine(&centroid)?;
        }
    }
    Ok(total)
}
