//! Sparse term-weight vectors and a dense accumulator for cluster composites.

use std::cmp::Ordering;

use crate::{Error, Result, Scalar};

/// A sparse vector over a term space of dimension `dim`.
///
/// Entries are kept sorted by strictly increasing term id and never store an
/// exact zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector<T> {
    dim: usize,
    indices: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> SparseVector<T> {
    /// Builds a vector from entries already sorted by term id.
    pub fn new(dim: usize, entries: Vec<(usize, T)>) -> Result<Self> {
        let mut indices = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        for (term, w) in entries {
            if term >= dim {
                return Err(Error::TermOutOfRange { term, dim });
            }
            if let Some(&last) = indices.last() {
                if term <= last {
                    return Err(Error::InvalidEntries("term ids must be strictly increasing"));
                }
            }
            if w.is_nan() {
                return Err(Error::InvalidEntries("NaN weight"));
            }
            if w == T::zero() {
                return Err(Error::InvalidEntries("stored weight is zero"));
            }
            indices.push(term);
            values.push(w);
        }
        Ok(Self {
            dim,
            indices,
            values,
        })
    }

    /// Builds a vector from entries in any order, summing repeated term ids
    /// and dropping entries whose total is exactly zero.
    pub fn from_unsorted(dim: usize, mut entries: Vec<(usize, T)>) -> Result<Self> {
        entries.sort_by_key(|&(t, _)| t);
        let mut merged: Vec<(usize, T)> = Vec::with_capacity(entries.len());
        for (t, w) in entries {
            match merged.last_mut() {
                Some((lt, lw)) if *lt == t => *lw += w,
                _ => merged.push((t, w)),
            }
        }
        merged.retain(|&(_, w)| w != T::zero());
        Self::new(dim, merged)
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored (nonzero) entries.
    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, T)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }

    pub fn get(&self, term: usize) -> T {
        match self.indices.binary_search(&term) {
            Ok(i) => self.values[i],
            Err(_) => T::zero(),
        }
    }

    pub fn norm_sq(&self) -> T {
        self.values.iter().map(|&v| v * v).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    /// Inner product by a two-finger merge over the sorted supports.
    pub fn dot(&self, other: &Self) -> Result<T> {
        self.check_dim(other)?;
        let (a, b) = (&self.indices, &other.indices);
        let (mut i, mut j) = (0, 0);
        let mut acc = T::zero();
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    acc += self.values[i] * other.values[j];
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(acc)
    }

    pub fn cosine(&self, other: &Self) -> Result<T> {
        self.check_dim(other)?;
        let na = self.norm();
        let nb = other.norm();
        if na == T::zero() || nb == T::zero() {
            return Err(Error::ZeroNorm);
        }
        Ok(self.dot(other)? / (na * nb))
    }

    /// `‖a − b‖₂`, computed by direct subtraction over the merged supports.
    pub fn euclidean(&self, other: &Self) -> Result<T> {
        self.check_dim(other)?;
        let (a, b) = (&self.indices, &other.indices);
        let (mut i, mut j) = (0, 0);
        let mut acc = T::zero();
        while i < a.len() || j < b.len() {
            let d = if j == b.len() || (i < a.len() && a[i] < b[j]) {
                i += 1;
                self.values[i - 1]
            } else if i == a.len() || b[j] < a[i] {
                j += 1;
                other.values[j - 1]
            } else {
                i += 1;
                j += 1;
                self.values[i - 1] - other.values[j - 1]
            };
            acc += d * d;
        }
        Ok(acc.sqrt())
    }

    /// Multiplies every weight by `alpha`. A zero factor yields the zero vector.
    pub fn scale(&self, alpha: T) -> Self {
        if alpha == T::zero() {
            return Self::zeros(self.dim);
        }
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= alpha;
        }
        // underflow can produce exact zeros
        out.retain_nonzero();
        out
    }

    fn retain_nonzero(&mut self) {
        if self.values.iter().all(|&v| v != T::zero()) {
            return;
        }
        let (indices, values): (Vec<_>, Vec<_>) = self
            .iter()
            .filter(|&(_, v)| v != T::zero())
            .unzip();
        self.indices = indices;
        self.values = values;
    }

    /// The unit vector parallel to `self`.
    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if n == T::zero() {
            return Err(Error::ZeroNorm);
        }
        let mut out = self.clone();
        for v in &mut out.values {
            *v /= n;
        }
        Ok(out)
    }

    /// Elementwise sum of a nonempty list of vectors.
    pub fn composite<'a, I>(vs: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Self>,
    {
        let mut iter = vs.into_iter();
        let first = iter.next().ok_or(Error::Empty("composite of no vectors"))?;
        let mut acc = DenseAccumulator::new(first.dim);
        acc.add(first)?;
        for v in iter {
            acc.add(v)?;
        }
        Ok(acc.to_sparse())
    }

    /// Composite divided by the number of vectors.
    pub fn centroid<'a, I>(vs: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Self>,
    {
        let mut count = 0usize;
        let mut iter = vs.into_iter().inspect(|_| count += 1);
        let first = iter.next().ok_or(Error::Empty("centroid of no vectors"))?;
        let mut acc = DenseAccumulator::new(first.dim);
        acc.add(first)?;
        for v in iter {
            acc.add(v)?;
        }
        let inv = T::one() / T::of_usize(count);
        Ok(acc.to_sparse().scale(inv))
    }
}

/// Dense running sum of sparse vectors, used for cluster composites.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseAccumulator<T> {
    values: Vec<T>,
}

impl<T: Scalar> DenseAccumulator<T> {
    pub fn new(dim: usize) -> Self {
        Self {
            values: vec![T::zero(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.values
    }

    fn check_dim(&self, v: &SparseVector<T>) -> Result<()> {
        if v.dim != self.values.len() {
            return Err(Error::DimensionMismatch(self.values.len(), v.dim));
        }
        Ok(())
    }

    pub fn add(&mut self, v: &SparseVector<T>) -> Result<()> {
        self.check_dim(v)?;
        for (t, w) in v.iter() {
            self.values[t] += w;
        }
        Ok(())
    }

    pub fn sub(&mut self, v: &SparseVector<T>) -> Result<()> {
        self.check_dim(v)?;
        for (t, w) in v.iter() {
            self.values[t] -= w;
        }
        Ok(())
    }

    /// Inner product with a sparse vector, O(nnz).
    pub fn dot(&self, v: &SparseVector<T>) -> Result<T> {
        self.check_dim(v)?;
        Ok(v.iter().map(|(t, w)| self.values[t] * w).sum())
    }

    pub fn norm_sq(&self) -> T {
        self.values.iter().map(|&v| v * v).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    /// Sparse copy; only exact zeros are dropped.
    pub fn to_sparse(&self) -> SparseVector<T> {
        let (indices, values) = self
            .values
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v != T::zero())
            .map(|(i, &v)| (i, v))
            .unzip();
        SparseVector {
            dim: self.values.len(),
            indices,
            values,
        }
    }
}

impl<T: Scalar> From<&SparseVector<T>> for DenseAccumulator<T> {
    fn from(v: &SparseVector<T>) -> Self {
        let mut acc = Self::new(v.dim);
        for (t, w) in v.iter() {
            acc.values[t] = w;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sv(dim: usize, e: &[(usize, f64)]) -> SparseVector<f64> {
        SparseVector::new(dim, e.to_vec()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn dot_examples() {
        assert_eq!(sv(2, &[(0, 1.0)]).dot(&sv(2, &[(1, 1.0)])).unwrap(), 0.0);
        let u = sv(2, &[(0, 0.6), (1, 0.8)]);
        assert!(close(u.dot(&u).unwrap(), 1.0, 1e-12));
        let w = sv(2, &[(0, 0.8), (1, 0.6)]);
        assert!(close(u.dot(&w).unwrap(), 0.96, 1e-12));
        assert_eq!(u.dot(&w).unwrap(), w.dot(&u).unwrap());
    }

    #[test]
    fn dot_dimension_mismatch() {
        let r = sv(2, &[(0, 1.0)]).dot(&sv(3, &[(0, 1.0)]));
        assert!(matches!(r, Err(Error::DimensionMismatch(2, 3))));
    }

    #[test]
    fn cosine_examples() {
        assert!(close(sv(1, &[(0, 2.0)]).cosine(&sv(1, &[(0, 5.0)])).unwrap(), 1.0, 1e-12));
        assert_eq!(sv(2, &[(0, 1.0)]).cosine(&sv(2, &[(1, 1.0)])).unwrap(), 0.0);
        let c = sv(2, &[(0, 3.0), (1, 4.0)]).cosine(&sv(2, &[(0, 4.0), (1, 3.0)])).unwrap();
        assert!(close(c, 0.96, 1e-12));
        assert!(matches!(
            SparseVector::<f64>::zeros(2).cosine(&sv(2, &[(0, 1.0)])),
            Err(Error::ZeroNorm)
        ));
    }

    #[test]
    fn euclidean_examples() {
        let u = sv(2, &[(0, 0.6), (1, 0.8)]);
        assert_eq!(u.euclidean(&u).unwrap(), 0.0);
        let ortho = sv(2, &[(0, 1.0)]).euclidean(&sv(2, &[(1, 1.0)])).unwrap();
        assert!(close(ortho, 2f64.sqrt(), 1e-12));
        // (0.6-0.8)^2 + (0.8-0.6)^2 = 0.08 = 2 - 2*0.96
        let d = u.euclidean(&sv(2, &[(0, 0.8), (1, 0.6)])).unwrap();
        assert!(close(d, 0.08f64.sqrt(), 1e-12));
        assert!(close(d, 0.282_842_712_474_619, 1e-12));
    }

    #[test]
    fn normalize_examples() {
        let n = sv(2, &[(0, 3.0), (1, 4.0)]).normalize().unwrap();
        assert!(close(n.get(0), 0.6, 1e-12) && close(n.get(1), 0.8, 1e-12));
        let n = sv(3, &[(2, 7.0)]).normalize().unwrap();
        assert_eq!(n.iter().collect::<Vec<_>>(), vec![(2, 1.0)]);
        assert!(matches!(SparseVector::<f64>::zeros(4).normalize(), Err(Error::ZeroNorm)));
    }

    #[test]
    fn composite_and_centroid_examples() {
        let v = sv(2, &[(0, 0.6), (1, 0.8)]);
        assert_eq!(SparseVector::composite([&v]).unwrap(), v);
        assert_eq!(SparseVector::centroid([&v]).unwrap(), v);

        let a = sv(2, &[(0, 1.0)]);
        let b = sv(2, &[(1, 1.0)]);
        let c = SparseVector::composite([&a, &b]).unwrap();
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![(0, 1.0), (1, 1.0)]);
        let m = SparseVector::centroid([&a, &b]).unwrap();
        assert_eq!(m.iter().collect::<Vec<_>>(), vec![(0, 0.5), (1, 0.5)]);
        assert!(close(m.norm(), 2f64.sqrt() / 2.0, 1e-12));

        let three = SparseVector::composite([&v, &v, &v]).unwrap();
        assert!(close(three.norm(), 3.0, 1e-12));
        let mean = SparseVector::centroid([&v, &v, &v]).unwrap();
        assert!(close(mean.get(0), 0.6, 1e-12) && close(mean.get(1), 0.8, 1e-12));

        let none: [&SparseVector<f64>; 0] = [];
        assert!(SparseVector::composite(none).is_err());
        assert!(SparseVector::centroid(none).is_err());
        assert!(SparseVector::composite([&a, &sv(3, &[(0, 1.0)])]).is_err());
    }

    #[test]
    fn construction_rejects_bad_entries() {
        assert!(SparseVector::new(2, vec![(1, 1.0), (0, 1.0)]).is_err());
        assert!(SparseVector::new(2, vec![(0, 1.0), (0, 1.0)]).is_err());
        assert!(SparseVector::new(2, vec![(2, 1.0)]).is_err());
        assert!(SparseVector::new(2, vec![(0, 0.0)]).is_err());
        let v = SparseVector::from_unsorted(3, vec![(2, 1.0), (0, 2.0), (2, -1.0), (0, 1.0)]).unwrap();
        assert_eq!(v.iter().collect::<Vec<_>>(), vec![(0, 3.0)]);
    }

    #[test]
    fn dense_round_trip_drops_only_exact_zeros() {
        let a = sv(5, &[(0, 1e-300), (3, 2.0)]);
        let mut acc = DenseAccumulator::new(5);
        acc.add(&a).unwrap();
        assert_eq!(acc.to_sparse(), a);
        acc.sub(&a).unwrap();
        assert!(acc.to_sparse().is_empty());
    }

    #[test]
    fn generic_over_f32() {
        let u = SparseVector::<f32>::new(2, vec![(0, 3.0), (1, 4.0)]).unwrap();
        let n = u.normalize().unwrap();
        assert!((n.norm() - 1.0).abs() < 1e-6);
    }

    fn arb_sparse(dim: usize) -> impl Strategy<Value = SparseVector<f64>> {
        proptest::collection::btree_map(0..dim, 0.01f64..10.0, 1..dim.min(8) + 1)
            .prop_map(move |m| SparseVector::new(dim, m.into_iter().collect()).unwrap())
    }

    proptest! {
        #[test]
        fn chord_identity(a in arb_sparse(12), b in arb_sparse(12)) {
            let (a, b) = (a.normalize().unwrap(), b.normalize().unwrap());
            let d = a.euclidean(&b).unwrap();
            let c = a.dot(&b).unwrap();
            prop_assert!((d * d - (2.0 - 2.0 * c)).abs() < 1e-9);
        }

        #[test]
        fn cosine_scale_invariant(a in arb_sparse(10), b in arb_sparse(10),
                                  alpha in 0.01f64..100.0, beta in 0.01f64..100.0) {
            let c0 = a.cosine(&b).unwrap();
            let c1 = a.scale(alpha).cosine(&b.scale(beta)).unwrap();
            prop_assert!((c0 - c1).abs() < 1e-9);
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&c0));
        }

        #[test]
        fn dot_distributes_over_composite(x in arb_sparse(10),
                                          vs in proptest::collection::vec(arb_sparse(10), 1..6)) {
            let lhs = x.dot(&SparseVector::composite(&vs).unwrap()).unwrap();
            let rhs: f64 = vs.iter().map(|v| x.dot(v).unwrap()).sum();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * vs.len() as f64 * (1.0 + rhs.abs()));
        }

        #[test]
        fn normalize_idempotent(a in arb_sparse(15)) {
            let n1 = a.normalize().unwrap();
            let n2 = n1.normalize().unwrap();
            prop_assert!((n1.norm() - 1.0).abs() < 1e-9);
            prop_assert!(n1.euclidean(&n2).unwrap() < 1e-12);
        }
    }
}
