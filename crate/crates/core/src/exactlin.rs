//! Exact linear algebra: sparse vectors, canonical subspaces, dense matrices.
//!
//! A [`Subspace`] is stored as its fully reduced row echelon basis, so two
//! subspaces are equal exactly when their stored bases are equal.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sparse vector: strictly increasing indices, no negligible entries.
#[derive(Clone, PartialEq)]
pub struct SparseVec<F> {
    entries: Vec<(usize, F)>,
}

impl<F: Scalar> fmt::Debug for SparseVec<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (n, (i, c)) in self.entries.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{i}:{c}")?;
        }
        f.write_str("]")
    }
}

impl<F: Scalar> Default for SparseVec<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Scalar> SparseVec<F> {
    pub fn zero() -> Self {
        Self {
            entries: Vec::new(),
        }
    }

    pub fn unit(i: usize) -> Self {
        Self {
            entries: vec![(i, F::one())],
        }
    }

    /// Builds from arbitrary entries, summing duplicates.
    pub fn from_entries(mut entries: Vec<(usize, F)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, F)> = Vec::with_capacity(entries.len());
        for (i, c) in entries {
            match out.last_mut() {
                Some((j, d)) if *j == i => *d = d.clone() + c,
                _ => out.push((i, c)),
            }
        }
        out.retain(|(_, c)| !c.is_negligible());
        Self { entries: out }
    }

    pub fn from_dense(values: &[F]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_negligible())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        Self { entries }
    }

    pub fn to_dense(&self, n: usize) -> Vec<F> {
        let mut out = vec![F::zero(); n];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, F)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, F)> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> F {
        match self.entries.binary_search_by_key(&i, |e| e.0) {
            Ok(p) => self.entries[p].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn leading(&self) -> Option<usize> {
        self.entries.first().map(|e| e.0)
    }

    /// One past the largest index, or 0 for the zero vector.
    pub fn bound(&self) -> usize {
        self.entries.last().map_or(0, |e| e.0 + 1)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_negligible() {
            return Self::zero();
        }
        Self::from_entries(
            self.entries
                .iter()
                .map(|(i, x)| (*i, x.clone() * c.clone()))
                .collect(),
        )
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &Self, c: &F) -> Self {
        if c.is_negligible() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (
            self.entries.iter().peekable(),
            other.entries.iter().peekable(),
        );
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y.clone() * c.clone()));
                        b.next();
                    } else {
                        let s = x.clone() + y.clone() * c.clone();
                        if !s.is_negligible() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y.clone() * c.clone()));
                    b.next();
                }
                (None, None) => break,
            }
        }
        out.retain(|(_, c)| !c.is_negligible());
        Self { entries: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, &F::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, &(-F::one()))
    }

    pub fn neg(&self) -> Self {
        self.scale(&(-F::one()))
    }

    /// Renumbers indices through `f`; `f` must be injective on the support.
    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> Self {
        Self::from_entries(
            self.entries
                .iter()
                .map(|(i, c)| (f(*i), c.clone()))
                .collect(),
        )
    }

    /// Dot product with a dense vector.
    pub fn dot_dense(&self, dense: &[F]) -> F {
        let mut acc = F::zero();
        for (i, c) in &self.entries {
            acc = acc + c.clone() * dense[*i].clone();
        }
        acc
    }

    /// `sum_k coeffs[k] * vectors[k]` for sparse `coeffs`.
    pub fn combine(coeffs: &SparseVec<F>, vectors: &[SparseVec<F>]) -> Self {
        let mut acc = Accumulator::new();
        for (k, c) in &coeffs.entries {
            acc.add_scaled(&vectors[*k], c);
        }
        acc.finish()
    }
}

/// Sums many sparse vectors without repeated merging.
#[derive(Default)]
pub struct Accumulator<F> {
    map: BTreeMap<usize, F>,
}

impl<F: Scalar> Accumulator<F> {
    pub fn new() -> Self {
        Self {
            map: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, i: usize, c: F) {
        let slot = self.map.entry(i).or_insert_with(F::zero);
        *slot = slot.clone() + c;
    }

    pub fn add_scaled(&mut self, v: &SparseVec<F>, c: &F) {
        for (i, x) in v.entries() {
            self.add_term(*i, x.clone() * c.clone());
        }
    }

    pub fn finish(self) -> SparseVec<F> {
        let entries = self
            .map
            .into_iter()
            .filter(|(_, c)| !c.is_negligible())
            .collect();
        SparseVec { entries }
    }
}

const NO_ROW: u32 = u32::MAX;

/// Incrementally maintained fully reduced echelon basis.
///
/// Invariant: every row has leading coefficient one at its pivot and zero
/// entries at the pivots of all other rows.
#[derive(Clone)]
pub struct EchelonBuilder<F> {
    ambient: usize,
    rows: Vec<SparseVec<F>>,
    row_of_pivot: Vec<u32>,
}

impl<F: Scalar> EchelonBuilder<F> {
    pub fn new(ambient: usize) -> Self {
        Self {
            ambient,
            rows: Vec::new(),
            row_of_pivot: vec![NO_ROW; ambient],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn pivot_row(&self, col: usize) -> Option<usize> {
        match self.row_of_pivot.get(col) {
            Some(&r) if r != NO_ROW => Some(r as usize),
            _ => None,
        }
    }

    /// Remainder of `v` after clearing every pivot column.
    pub fn reduce(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let hits: Vec<(usize, &F)> = v
            .entries()
            .iter()
            .filter_map(|(i, c)| self.pivot_row(*i).map(|r| (r, c)))
            .collect();
        match hits.len() {
            0 => v.clone(),
            1 => v.add_scaled(&self.rows[hits[0].0], &(-hits[0].1.clone())),
            _ => {
                let mut acc = Accumulator::new();
                acc.add_scaled(v, &F::one());
                for (r, c) in hits {
                    acc.add_scaled(&self.rows[r], &(-c.clone()));
                }
                acc.finish()
            }
        }
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec<F>) -> Result<bool> {
        if v.bound() > self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: v.bound(),
            });
        }
        let r = self.reduce(v);
        let Some(p) = r.leading() else {
            return Ok(false);
        };
        let inv = F::one() / r.get(p);
        let r = r.scale(&inv);
        for row in self.rows.iter_mut() {
            let c = row.get(p);
            if !c.is_negligible() {
                *row = row.add_scaled(&r, &(-c));
            }
        }
        self.row_of_pivot[p] = self.rows.len() as u32;
        self.rows.push(r);
        Ok(true)
    }

    pub fn finish(self) -> Subspace<F> {
        let mut rows = self.rows;
        rows.sort_by_key(|r| r.leading());
        Subspace::from_reduced_rows(self.ambient, rows)
    }
}

/// Subspace of `F^ambient` in canonical reduced echelon form.
#[derive(Clone)]
pub struct Subspace<F> {
    ambient: usize,
    rows: Vec<SparseVec<F>>,
    row_of_pivot: Vec<u32>,
}

impl<F: Scalar> PartialEq for Subspace<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.rows == other.rows
    }
}

impl<F: Scalar> fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subspace")
            .field("ambient", &self.ambient)
            .field("basis", &self.rows)
            .finish()
    }
}

impl<F: Scalar> Subspace<F> {
    fn from_reduced_rows(ambient: usize, rows: Vec<SparseVec<F>>) -> Self {
        let mut row_of_pivot = vec![NO_ROW; ambient];
        for (k, r) in rows.iter().enumerate() {
            row_of_pivot[r.leading().expect("nonzero row")] = k as u32;
        }
        Self {
            ambient,
            rows,
            row_of_pivot,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Self::from_reduced_rows(ambient, Vec::new())
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_reduced_rows(ambient, (0..ambient).map(SparseVec::unit).collect())
    }

    /// Span of the given vectors.
    pub fn span<'a>(
        ambient: usize,
        vectors: impl IntoIterator<Item = &'a SparseVec<F>>,
    ) -> Result<Self> {
        let mut b = EchelonBuilder::new(ambient);
        for v in vectors {
            b.insert(v)?;
        }
        Ok(b.finish())
    }

    /// Span of vectors given by value.
    pub fn span_owned(
        ambient: usize,
        vectors: impl IntoIterator<Item = SparseVec<F>>,
    ) -> Result<Self> {
        let mut b = EchelonBuilder::new(ambient);
        for v in vectors {
            b.insert(&v)?;
        }
        Ok(b.finish())
    }

    /// Span of coordinate vectors spanned by a subset of the standard basis.
    pub fn coordinate(ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut idx: Vec<usize> = indices.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        Self::from_reduced_rows(ambient, idx.into_iter().map(SparseVec::unit).collect())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    /// Canonical basis, sorted by pivot.
    pub fn basis(&self) -> &[SparseVec<F>] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.leading().expect("nonzero row"))
            .collect()
    }

    fn pivot_row(&self, col: usize) -> Option<usize> {
        match self.row_of_pivot.get(col) {
            Some(&r) if r != NO_ROW => Some(r as usize),
            _ => None,
        }
    }

    pub fn to_builder(&self) -> EchelonBuilder<F> {
        EchelonBuilder {
            ambient: self.ambient,
            rows: self.rows.clone(),
            row_of_pivot: self.row_of_pivot.clone(),
        }
    }

    /// Remainder of `v` modulo this subspace; zero at every pivot column.
    pub fn reduce(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut acc: Option<Accumulator<F>> = None;
        for (i, c) in v.entries() {
            if let Some(r) = self.pivot_row(*i) {
                let a = acc.get_or_insert_with(|| {
                    let mut a = Accumulator::new();
                    a.add_scaled(v, &F::one());
                    a
                });
                a.add_scaled(&self.rows[r], &(-c.clone()));
            }
        }
        match acc {
            Some(a) => a.finish(),
            None => v.clone(),
        }
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        v.bound() <= self.ambient && self.reduce(v).is_zero()
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.rows.iter().all(|r| other.contains(r))
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &SparseVec<F>) -> Option<SparseVec<F>> {
        if !self.contains(v) {
            return None;
        }
        Some(SparseVec::from_entries(
            v.entries()
                .iter()
                .filter_map(|(i, c)| self.pivot_row(*i).map(|r| (r, c.clone())))
                .collect(),
        ))
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let (big, small) = if self.dim() >= other.dim() {
            (self, other)
        } else {
            (other, self)
        };
        let mut b = big.to_builder();
        for r in &small.rows {
            b.insert(r)?;
        }
        Ok(b.finish())
    }

    /// Intersection via the kernel of the residual map modulo `other`.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let (a, b) = if self.dim() <= other.dim() {
            (self, other)
        } else {
            (other, self)
        };
        let residuals: Vec<SparseVec<F>> = a.rows.iter().map(|r| b.reduce(r)).collect();
        let kernel = kernel_of_columns(&residuals, self.ambient)?;
        Subspace::span_owned(
            self.ambient,
            kernel.rows.iter().map(|y| SparseVec::combine(y, &a.rows)),
        )
    }

    /// Complement of `small` inside `self`, spanned by basis vectors of `self`.
    pub fn complement(&self, small: &Self) -> Result<Self> {
        let q = self.quotient(small)?;
        Subspace::span(self.ambient, q.reps())
    }

    /// Coset data for `self / small`.
    pub fn quotient(&self, small: &Self) -> Result<QuotientData<F>> {
        QuotientData::new(self.clone(), small)
    }

    /// Image under a linear map given by the images of the standard basis.
    pub fn image_under(&self, columns: &[SparseVec<F>], codomain: usize) -> Result<Self> {
        if columns.len() != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: columns.len(),
            });
        }
        Subspace::span_owned(
            codomain,
            self.rows.iter().map(|r| SparseVec::combine(r, columns)),
        )
    }

    /// Dense matrix whose rows are the canonical basis.
    pub fn to_mat(&self) -> Mat<F> {
        Mat::from_rows(
            self.ambient,
            self.rows.iter().map(|r| r.to_dense(self.ambient)).collect(),
        )
    }
}

/// Kernel of the linear map `F^n -> F^codomain` whose `k`-th column is
/// `columns[k]`.
pub fn kernel_of_columns<F: Scalar>(
    columns: &[SparseVec<F>],
    codomain: usize,
) -> Result<Subspace<F>> {
    let n = columns.len();
    let mut b = EchelonBuilder::new(codomain + n);
    for (k, c) in columns.iter().enumerate() {
        if c.bound() > codomain {
            return Err(Error::DimensionMismatch {
                expected: codomain,
                found: c.bound(),
            });
        }
        let mut entries = c.entries().to_vec();
        entries.push((codomain + k, F::one()));
        b.insert(&SparseVec { entries })?;
    }
    let kernel_rows = b
        .rows
        .into_iter()
        .filter(|r| r.leading().is_some_and(|p| p >= codomain))
        .map(|r| r.map_indices(|i| i - codomain))
        .collect::<Vec<_>>();
    Subspace::span_owned(n, kernel_rows)
}

/// Rank of a family of sparse vectors.
pub fn rank_of<F: Scalar>(vectors: &[SparseVec<F>], ambient: usize) -> Result<usize> {
    Ok(Subspace::span(ambient, vectors)?.dim())
}

/// `big / small` with a fixed complement of `small` spanned by basis
/// vectors of `big`.
///
/// Coordinates of `small` in the basis of `big` are brought to reduced
/// echelon form; the basis vectors of `big` at the non-pivot positions,
/// smallest position first, are the coset representatives.
#[derive(Clone, Debug)]
pub struct QuotientData<F: Scalar> {
    big: Subspace<F>,
    small: Subspace<F>,
    small_coords: Subspace<F>,
    free: Vec<usize>,
    reps: Vec<SparseVec<F>>,
}

impl<F: Scalar> QuotientData<F> {
    pub fn new(big: Subspace<F>, small: &Subspace<F>) -> Result<Self> {
        big.check_ambient(small)?;
        let mut coords = Vec::with_capacity(small.dim());
        for r in small.basis() {
            coords.push(big.coordinates(r).ok_or(Error::NotSubspace)?);
        }
        let small_coords = Subspace::span_owned(big.dim(), coords)?;
        let piv: Vec<bool> = {
            let mut p = vec![false; big.dim()];
            for q in small_coords.pivots() {
                p[q] = true;
            }
            p
        };
        let free: Vec<usize> = (0..big.dim()).filter(|&i| !piv[i]).collect();
        let reps = free.iter().map(|&i| big.basis()[i].clone()).collect();
        Ok(Self {
            big,
            small: small.clone(),
            small_coords,
            free,
            reps,
        })
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn big(&self) -> &Subspace<F> {
        &self.big
    }

    pub fn small(&self) -> &Subspace<F> {
        &self.small
    }

    /// Coset representatives, one per quotient basis vector.
    pub fn reps(&self) -> &[SparseVec<F>] {
        &self.reps
    }

    /// Quotient coordinates of `v`, which must lie in `big`.
    pub fn project(&self, v: &SparseVec<F>) -> Result<SparseVec<F>> {
        let c = self.big.coordinates(v).ok_or(Error::NotSubspace)?;
        let rem = self.small_coords.reduce(&c);
        let mut out = Vec::with_capacity(rem.nnz());
        for (i, x) in rem.into_entries() {
            let k = self
                .free
                .binary_search(&i)
                .map_err(|_| Error::Internal("reduced coordinate at a pivot".into()))?;
            out.push((k, x));
        }
        Ok(SparseVec { entries: out })
    }

    /// Representative of the coset with the given quotient coordinates.
    pub fn lift(&self, coords: &SparseVec<F>) -> SparseVec<F> {
        SparseVec::combine(coords, &self.reps)
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Mat<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<F: Scalar> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<F>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Self {
            rows: n,
            cols,
            data,
        }
    }

    /// Matrix with the given sparse columns.
    pub fn from_columns(rows: usize, columns: &[SparseVec<F>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, x) in c.entries() {
                m.set(*i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> SparseVec<F> {
        SparseVec::from_dense(
            &(0..self.rows)
                .map(|r| self.get(r, c).clone())
                .collect::<Vec<_>>(),
        )
    }

    pub fn columns(&self) -> Vec<SparseVec<F>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_negligible() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).clone() + a.clone() * other.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &SparseVec<F>) -> Result<SparseVec<F>> {
        if v.bound() > self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.bound(),
            });
        }
        let dense: Vec<F> = (0..self.rows).map(|r| v.dot_dense(self.row(r))).collect();
        Ok(SparseVec::from_dense(&dense))
    }

    /// Reduced row echelon form with zero rows dropped, and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_negligible()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = F::one() / m.get(r, c).clone();
            for j in 0..m.cols {
                let v = m.get(r, j).clone() * inv.clone();
                m.set(r, j, v);
            }
            m.set(r, c, F::one());
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_negligible() {
                    continue;
                }
                for j in 0..m.cols {
                    let v = m.get(i, j).clone() - f.clone() * m.get(r, j).clone();
                    m.set(i, j, if v.is_negligible() { F::zero() } else { v });
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.data.truncate(r * m.cols);
        m.rows = r;
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Null space `{ x : self * x = 0 }`.
    pub fn kernel(&self) -> Subspace<F> {
        kernel_of_columns(&self.columns(), self.rows).expect("columns fit the row count")
    }

    /// Column space.
    pub fn image(&self) -> Subspace<F> {
        Subspace::span_owned(self.rows, self.columns()).expect("columns fit the row count")
    }

    /// One solution of `self * x = b`, free variables set to zero.
    pub fn solve(&self, b: &[F]) -> Result<Option<Vec<F>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for (r, br) in b.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, br.clone());
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![F::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = red.get(r, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, F::one());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c).clone());
            }
        }
        Some(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn v(entries: &[(usize, i64)]) -> SparseVec<Q> {
        SparseVec::from_entries(entries.iter().map(|&(i, c)| (i, q(c))).collect())
    }

    #[test]
    fn rref_example() {
        let m = Mat::from_rows(2, vec![vec![q(1), q(2)], vec![q(2), q(4)]]);
        let (r, piv) = m.rref();
        assert_eq!(r, Mat::from_rows(2, vec![vec![q(1), q(2)]]));
        let (r, _) = Mat::from_rows(2, vec![vec![q(0), q(1)], vec![q(1), q(1)]]).rref();
        assert_eq!(r, Mat::identity(2));
        assert_eq!(piv, vec![0]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(Mat::<Q>::identity(3).kernel().is_zero());
        assert!(Mat::<Q>::zeros(2, 2).kernel().is_full());
        let k = Mat::from_rows(3, vec![vec![q(1), q(1), q(0)]]).kernel();
        assert_eq!(
            k,
            Subspace::span_owned(3, vec![v(&[(0, 1), (1, -1)]), v(&[(2, 1)])]).unwrap()
        );
    }

    #[test]
    fn kernel_example() {
        let m = Mat::from_rows(2, vec![vec![q(1), q(2)], vec![q(2), q(4)]]);
        let k = m.kernel();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&v(&[(0, -2), (1, 1)])));
    }

    #[test]
    fn intersect_example() {
        let a = Subspace::span_owned(3, vec![v(&[(0, 1)]), v(&[(1, 1)])]).unwrap();
        let b = Subspace::span_owned(3, vec![v(&[(1, 1)]), v(&[(2, 1)])]).unwrap();
        let i = a.intersect(&b).unwrap();
        assert_eq!(i, Subspace::coordinate(3, [1]));
        assert_eq!(a.sum(&b).unwrap(), Subspace::full(3));
    }

    #[test]
    fn canonical_form_is_unique() {
        let a = Subspace::span_owned(3, vec![v(&[(0, 1), (1, 1)]), v(&[(1, 1), (2, 1)])]).unwrap();
        let b = Subspace::span_owned(3, vec![v(&[(0, 2), (2, -2)]), v(&[(0, 1), (1, 2), (2, 1)])])
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn quotient_uses_smallest_free_coordinates() {
        let big = Subspace::full(3);
        let small = Subspace::span_owned(3, vec![v(&[(1, 1), (2, 1)])]).unwrap();
        let qd = big.quotient(&small).unwrap();
        assert_eq!(qd.reps(), &[v(&[(0, 1)]), v(&[(2, 1)])]);
        assert_eq!(qd.project(&v(&[(1, 1)])).unwrap(), v(&[(1, -1)]));
        assert!(qd.project(&v(&[(1, 1), (2, 1)])).unwrap().is_zero());
    }

    #[test]
    fn quotient_rejects_non_subspace() {
        let big = Subspace::<Q>::coordinate(3, [0]);
        let small = Subspace::coordinate(3, [1]);
        assert_eq!(big.quotient(&small).unwrap_err(), Error::NotSubspace);
    }

    #[test]
    fn solve_and_inverse() {
        let m = Mat::from_rows(2, vec![vec![q(1), q(1)], vec![q(1), q(-1)]]);
        assert_eq!(m.solve(&[q(2), q(0)]).unwrap(), Some(vec![q(1), q(1)]));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Mat::identity(2));
        let sing = Mat::from_rows(2, vec![vec![q(1), q(1)], vec![q(1), q(1)]]);
        assert_eq!(sing.solve(&[q(1), q(0)]).unwrap(), None);
        assert!(sing.inverse().is_none());
    }
}
