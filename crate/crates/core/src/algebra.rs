//! Finite-dimensional Leibniz algebras with sparse structure constants.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactlin::{kernel_of_columns, Accumulator, Mat, SparseVec, Subspace};
use crate::scalar::Scalar;

type Product<F> = ((usize, usize), SparseVec<F>);

/// Algebra with basis `b_0..b_{n-1}` and products `[b_i, b_j]`.
///
/// `table[i]` lists the nonzero products `[b_i, b_j]` sorted by `j`.
/// `generators` always generates the algebra; it is the full basis unless a
/// constructor knows a smaller generating set.
#[derive(Clone)]
pub struct Algebra<F> {
    name: String,
    labels: Vec<String>,
    table: Vec<Vec<(usize, SparseVec<F>)>>,
    generators: Vec<SparseVec<F>>,
}

impl<F: Scalar> fmt::Debug for Algebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (dim {})", self.name, self.dim())?;
        for (i, j, v) in self.products() {
            writeln!(
                f,
                "  [{}, {}] = {}",
                self.labels[i],
                self.labels[j],
                self.format_vector(v)
            )?;
        }
        Ok(())
    }
}

/// First failing basis triple (0-based) with residual `lhs - rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeibnizReport<F: Scalar> {
    pub holds: bool,
    pub witness: Option<((usize, usize, usize), SparseVec<F>)>,
}

impl<F: Scalar> Algebra<F> {
    /// Builds an algebra from nonzero products; indices are 0-based.
    ///
    /// Does not check the Leibniz identity.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        products: impl IntoIterator<Item = ((usize, usize), SparseVec<F>)>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut table: Vec<Vec<(usize, SparseVec<F>)>> = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for ((i, j), v) in products {
            for k in [i, j] {
                if k >= n {
                    return Err(Error::Index {
                        index: k + 1,
                        dim: n,
                    });
                }
            }
            if v.bound() > n {
                return Err(Error::Index {
                    index: v.bound(),
                    dim: n,
                });
            }
            if !seen.insert((i, j)) {
                return Err(Error::Schema {
                    path: "brackets".into(),
                    message: format!("duplicate product ({}, {})", i + 1, j + 1),
                });
            }
            if !v.is_zero() {
                table[i].push((j, v));
            }
        }
        for row in &mut table {
            row.sort_by_key(|e| e.0);
        }
        let generators = (0..n).map(SparseVec::unit).collect();
        Ok(Self {
            name: name.into(),
            labels,
            table,
            generators,
        })
    }

    /// Labels `e1..en`.
    pub fn default_labels(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("e{i}")).collect()
    }

    /// Replaces the generating set; the caller guarantees it generates.
    pub(crate) fn with_generators(mut self, generators: Vec<SparseVec<F>>) -> Self {
        self.generators = generators;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generators(&self) -> &[SparseVec<F>] {
        &self.generators
    }

    pub fn basis_vector(&self, i: usize) -> SparseVec<F> {
        SparseVec::unit(i)
    }

    /// Nonzero products `(i, j, [b_i, b_j])` in lexicographic order.
    pub fn products(&self) -> impl Iterator<Item = (usize, usize, &SparseVec<F>)> {
        self.table
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn product_count(&self) -> usize {
        self.table.iter().map(Vec::len).sum()
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Option<&SparseVec<F>> {
        let row = &self.table[i];
        row.binary_search_by_key(&j, |e| e.0)
            .ok()
            .map(|p| &row[p].1)
    }

    pub fn bracket(&self, x: &SparseVec<F>, y: &SparseVec<F>) -> SparseVec<F> {
        let mut acc = Accumulator::new();
        for (i, a) in x.entries() {
            let row = &self.table[*i];
            if row.len() <= y.nnz() {
                for (j, v) in row {
                    let b = y.get(*j);
                    if !b.is_negligible() {
                        acc.add_scaled(v, &(a.clone() * b));
                    }
                }
            } else {
                for (j, b) in y.entries() {
                    if let Some(v) = self.bracket_basis(*i, *j) {
                        acc.add_scaled(v, &(a.clone() * b.clone()));
                    }
                }
            }
        }
        acc.finish()
    }

    /// `[x, y] + [y, x]`.
    pub fn sym_bracket(&self, x: &SparseVec<F>, y: &SparseVec<F>) -> SparseVec<F> {
        self.bracket(x, y).add(&self.bracket(y, x))
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(Vec::is_empty)
    }

    /// Same dimension and identical structure constants, ignoring labels.
    pub fn same_table(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.table == other.table
    }

    /// Checks `[x,[y,z]] = [[x,y],z] - [[x,z],y]` on all basis triples.
    pub fn check_leibniz(&self) -> LeibnizReport<F> {
        let n = self.dim();
        let first = (0..n)
            .into_par_iter()
            .filter_map(|i| {
                let ei = SparseVec::unit(i);
                for j in 0..n {
                    let ij = self.bracket_basis(i, j);
                    for k in 0..n {
                        let jk = self.bracket_basis(j, k);
                        let ik = self.bracket_basis(i, k);
                        if ij.is_none() && jk.is_none() && ik.is_none() {
                            continue;
                        }
                        let lhs = jk.map_or_else(SparseVec::zero, |v| self.bracket(&ei, v));
                        let r1 = ij
                            .map_or_else(SparseVec::zero, |v| self.bracket(v, &SparseVec::unit(k)));
                        let r2 = ik
                            .map_or_else(SparseVec::zero, |v| self.bracket(v, &SparseVec::unit(j)));
                        let residual = lhs.sub(&r1.sub(&r2));
                        if !residual.is_zero() {
                            return Some(((i, j, k), residual));
                        }
                    }
                }
                None
            })
            .min_by_key(|(t, _)| *t);
        LeibnizReport {
            holds: first.is_none(),
            witness: first,
        }
    }

    /// Errors with the first failing triple (1-based) unless the identity holds.
    pub fn ensure_leibniz(&self) -> Result<()> {
        match self.check_leibniz().witness {
            None => Ok(()),
            Some(((i, j, k), r)) => Err(Error::IdentityFailure {
                triple: (i + 1, j + 1, k + 1),
                residual: self.format_vector(&r),
            }),
        }
    }

    /// Whether `s` is closed under brackets with the algebra on both sides.
    ///
    /// Closure under the generating set suffices: the left-normed words in
    /// the generators span the algebra, and the Leibniz identity propagates
    /// closure from words of length `l` to length `l + 1`.
    pub fn is_two_sided_ideal(&self, s: &Subspace<F>) -> bool {
        s.ambient() == self.dim()
            && s.basis().par_iter().all(|h| {
                self.generators
                    .iter()
                    .all(|x| s.contains(&self.bracket(h, x)) && s.contains(&self.bracket(x, h)))
            })
    }

    /// Certifies `s` as a two-sided ideal.
    pub fn ideal(&self, s: Subspace<F>) -> Result<Ideal<F>> {
        if s.ambient() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: s.ambient(),
            });
        }
        if !self.is_two_sided_ideal(&s) {
            return Err(Error::Internal(format!(
                "subspace is not a two-sided ideal of {}",
                self.name
            )));
        }
        Ok(Ideal {
            space: s,
            two_sided: true,
        })
    }

    pub fn zero_ideal(&self) -> Ideal<F> {
        Ideal {
            space: Subspace::zero(self.dim()),
            two_sided: true,
        }
    }

    pub fn whole(&self) -> Ideal<F> {
        Ideal {
            space: Subspace::full(self.dim()),
            two_sided: true,
        }
    }

    /// Smallest two-sided ideal containing `vectors`.
    pub fn ideal_closure<'a>(
        &self,
        vectors: impl IntoIterator<Item = &'a SparseVec<F>>,
    ) -> Result<Ideal<F>> {
        let mut b = crate::exactlin::EchelonBuilder::new(self.dim());
        let mut queue = Vec::new();
        for v in vectors {
            if b.insert(v)? {
                queue.push(v.clone());
            }
        }
        while let Some(h) = queue.pop() {
            for x in &self.generators {
                for p in [self.bracket(&h, x), self.bracket(x, &h)] {
                    if b.insert(&p)? {
                        queue.push(p);
                    }
                }
            }
        }
        Ok(Ideal {
            space: b.finish(),
            two_sided: true,
        })
    }

    /// Quotient by a two-sided ideal, with basis given by the fixed
    /// complement of the ideal and the canonical projection.
    pub fn quotient(self: &Arc<Self>, ideal: &Ideal<F>) -> Result<(Arc<Self>, Morphism<F>)> {
        if !ideal.two_sided {
            return Err(Error::Internal(
                "quotient by a subspace that is not a two-sided ideal".into(),
            ));
        }
        let qd = Subspace::full(self.dim()).quotient(&ideal.space)?;
        let reps = qd.reps().to_vec();
        let labels: Vec<String> = reps.iter().map(|r| self.format_vector(r)).collect();
        let n = reps.len();
        let rows: Vec<Vec<Product<F>>> = (0..n)
            .into_par_iter()
            .map(|a| {
                let mut out = Vec::new();
                for b in 0..n {
                    let p = self.bracket(&reps[a], &reps[b]);
                    if p.is_zero() {
                        continue;
                    }
                    let c = qd.project(&p).expect("products lie in the algebra");
                    if !c.is_zero() {
                        out.push(((a, b), c));
                    }
                }
                out
            })
            .collect();
        let columns: Vec<SparseVec<F>> = (0..self.dim())
            .map(|i| {
                qd.project(&SparseVec::unit(i))
                    .expect("unit vectors lie in the algebra")
            })
            .collect();
        let gens: Vec<SparseVec<F>> = self
            .generators
            .iter()
            .map(|g| SparseVec::combine(g, &columns))
            .filter(|g| !g.is_zero())
            .collect();
        let q = Algebra::new(
            format!("{}/I", self.name),
            labels,
            rows.into_iter().flatten(),
        )?
        .with_generators(gens);
        let q = Arc::new(q);
        let proj = Morphism::certified(self.clone(), q.clone(), columns);
        Ok((q, proj))
    }

    /// Direct sum with `other`; the basis of `other` is appended.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let n = self.dim();
        let mut labels = self.labels.clone();
        let clash = other.labels.iter().any(|l| labels.contains(l));
        labels.extend(
            other
                .labels
                .iter()
                .map(|l| if clash { format!("{l}'") } else { l.clone() }),
        );
        let products = self
            .products()
            .map(|(i, j, v)| ((i, j), v.clone()))
            .chain(
                other
                    .products()
                    .map(|(i, j, v)| ((n + i, n + j), v.map_indices(|k| n + k))),
            )
            .collect::<Vec<_>>();
        let gens = self
            .generators
            .iter()
            .cloned()
            .chain(other.generators.iter().map(|g| g.map_indices(|k| n + k)))
            .collect();
        Ok(
            Algebra::new(format!("{}+{}", self.name, other.name), labels, products)?
                .with_generators(gens),
        )
    }

    /// Human-readable linear combination of basis labels.
    pub fn format_vector(&self, v: &SparseVec<F>) -> String {
        format_combination(v, &self.labels)
    }
}

/// `"2*e1 - e3"`, or `"0"` for the zero vector.
pub fn format_combination<F: Scalar>(v: &SparseVec<F>, labels: &[String]) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (n, (i, c)) in v.entries().iter().enumerate() {
        let label = labels
            .get(*i)
            .cloned()
            .unwrap_or_else(|| format!("#{}", i + 1));
        let text = c.to_string();
        let (neg, mag) = match text.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, text),
        };
        if n == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if mag != "1" {
            s.push_str(&mag);
            s.push('*');
        }
        s.push_str(&label);
    }
    s
}

/// Subspace certified as a two-sided ideal.
#[derive(Clone, Debug, PartialEq)]
pub struct Ideal<F: Scalar> {
    pub space: Subspace<F>,
    pub two_sided: bool,
}

impl<F: Scalar> Ideal<F> {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// Linear map between algebras; `columns[i]` is the image of `b_i`.
#[derive(Clone)]
pub struct Morphism<F> {
    pub domain: Arc<Algebra<F>>,
    pub codomain: Arc<Algebra<F>>,
    columns: Vec<SparseVec<F>>,
    /// Whether brackets are preserved.
    pub is_hom: bool,
    /// First basis pair (0-based) whose bracket is not preserved.
    pub witness: Option<(usize, usize)>,
}

impl<F: Scalar> fmt::Debug for Morphism<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Morphism")
            .field("domain", &self.domain.name())
            .field("codomain", &self.codomain.name())
            .field("columns", &self.columns)
            .field("is_hom", &self.is_hom)
            .field("witness", &self.witness)
            .finish()
    }
}

impl<F: Scalar> Morphism<F> {
    /// Checks bracket preservation on every basis pair; never fails on a
    /// non-homomorphism, which is reported through `is_hom` and `witness`.
    pub fn hom(
        domain: Arc<Algebra<F>>,
        codomain: Arc<Algebra<F>>,
        columns: Vec<SparseVec<F>>,
    ) -> Result<Self> {
        if columns.len() != domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                found: columns.len(),
            });
        }
        if let Some(c) = columns.iter().find(|c| c.bound() > codomain.dim()) {
            return Err(Error::DimensionMismatch {
                expected: codomain.dim(),
                found: c.bound(),
            });
        }
        let mut m = Self {
            domain,
            codomain,
            columns,
            is_hom: false,
            witness: None,
        };
        m.witness = m.first_violation();
        m.is_hom = m.witness.is_none();
        Ok(m)
    }

    /// From a dense matrix whose columns are images of the domain basis.
    pub fn from_matrix(
        domain: Arc<Algebra<F>>,
        codomain: Arc<Algebra<F>>,
        matrix: &Mat<F>,
    ) -> Result<Self> {
        if matrix.rows() != codomain.dim() {
            return Err(Error::DimensionMismatch {
                expected: codomain.dim(),
                found: matrix.rows(),
            });
        }
        Self::hom(domain, codomain, matrix.columns())
    }

    pub(crate) fn certified(
        domain: Arc<Algebra<F>>,
        codomain: Arc<Algebra<F>>,
        columns: Vec<SparseVec<F>>,
    ) -> Self {
        Self {
            domain,
            codomain,
            columns,
            is_hom: true,
            witness: None,
        }
    }

    /// Pairs where either side of the homomorphism condition can be nonzero.
    fn first_violation(&self) -> Option<(usize, usize)> {
        let mut pairs: BTreeSet<(usize, usize)> =
            self.domain.products().map(|(i, j, _)| (i, j)).collect();
        let live: Vec<usize> = (0..self.columns.len())
            .filter(|&i| !self.columns[i].is_zero())
            .collect();
        for &i in &live {
            for &j in &live {
                pairs.insert((i, j));
            }
        }
        let pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        pairs
            .par_iter()
            .find_first(|&&(i, j)| {
                let lhs = self
                    .domain
                    .bracket_basis(i, j)
                    .map_or_else(SparseVec::zero, |v| self.apply(v));
                let rhs = self.codomain.bracket(&self.columns[i], &self.columns[j]);
                lhs != rhs
            })
            .copied()
    }

    pub fn columns(&self) -> &[SparseVec<F>] {
        &self.columns
    }

    pub fn matrix(&self) -> Mat<F> {
        Mat::from_columns(self.codomain.dim(), &self.columns)
    }

    pub fn apply(&self, v: &SparseVec<F>) -> SparseVec<F> {
        SparseVec::combine(v, &self.columns)
    }

    /// Kernel; certified two-sided when the map is a homomorphism.
    pub fn kernel(&self) -> Result<Ideal<F>> {
        let space = kernel_of_columns(&self.columns, self.codomain.dim())?;
        Ok(Ideal {
            space,
            two_sided: self.is_hom,
        })
    }

    pub fn image(&self) -> Result<Subspace<F>> {
        Subspace::span(self.codomain.dim(), &self.columns)
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.image()?.is_full())
    }

    pub fn image_of(&self, s: &Subspace<F>) -> Result<Subspace<F>> {
        s.image_under(&self.columns, self.codomain.dim())
    }

    /// `{ x : f(x) in s }`.
    pub fn preimage(&self, s: &Subspace<F>) -> Result<Subspace<F>> {
        let residuals: Vec<SparseVec<F>> = self.columns.iter().map(|c| s.reduce(c)).collect();
        kernel_of_columns(&residuals, self.codomain.dim())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Morphism<F>) -> Result<Morphism<F>> {
        if !Arc::ptr_eq(&self.codomain, &other.domain) && self.codomain.dim() != other.domain.dim()
        {
            return Err(Error::DimensionMismatch {
                expected: self.codomain.dim(),
                found: other.domain.dim(),
            });
        }
        let columns = self.columns.iter().map(|c| other.apply(c)).collect();
        if self.is_hom && other.is_hom {
            Ok(Morphism::certified(
                self.domain.clone(),
                other.codomain.clone(),
                columns,
            ))
        } else {
            Morphism::hom(self.domain.clone(), other.codomain.clone(), columns)
        }
    }
}

/// Kernel of a morphism, as an ideal of its domain.
pub fn kernel_of<F: Scalar>(f: &Morphism<F>) -> Result<Ideal<F>> {
    f.kernel()
}

/// Image of a morphism, as a subspace of its codomain.
pub fn image_of<F: Scalar>(f: &Morphism<F>) -> Result<Subspace<F>> {
    f.image()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn one(i: usize) -> SparseVec<Q> {
        SparseVec::unit(i)
    }

    fn alg(n: usize, products: &[((usize, usize), usize)]) -> Algebra<Q> {
        Algebra::new(
            "t",
            Algebra::<Q>::default_labels(n),
            products.iter().map(|&(p, v)| (p, one(v))),
        )
        .unwrap()
    }

    #[test]
    fn non_leibniz_table_is_rejected_with_first_triple() {
        let a = alg(2, &[((0, 0), 1), ((1, 0), 0)]);
        let rep = a.check_leibniz();
        assert!(!rep.holds);
        let ((i, j, k), r) = rep.witness.unwrap();
        assert_eq!((i, j, k), (0, 1, 0));
        assert_eq!(r, one(1));
        assert_eq!(a.ensure_leibniz().unwrap_err().code(), "IDENTITY_FAIL");
    }

    #[test]
    fn q2_is_leibniz() {
        let a = alg(2, &[((1, 1), 0)]);
        assert!(a.check_leibniz().holds);
    }

    #[test]
    fn duplicate_products_rejected() {
        let e = Algebra::<Q>::new(
            "d",
            Algebra::<Q>::default_labels(2),
            vec![((0, 0), one(1)), ((0, 0), one(1))],
        );
        assert_eq!(e.unwrap_err().code(), "SCHEMA_ERROR");
        let e = Algebra::<Q>::new("d", Algebra::<Q>::default_labels(2), vec![((0, 2), one(1))]);
        assert_eq!(e.unwrap_err().code(), "INDEX_ERROR");
    }

    #[test]
    fn ideal_closure_and_quotient() {
        // q2: [e2, e2] = e1
        let a = Arc::new(alg(2, &[((1, 1), 0)]));
        let i = a.ideal_closure([&one(1)]).unwrap();
        assert!(i.space.is_full());
        let j = a.ideal_closure([&one(0)]).unwrap();
        assert_eq!(j.dim(), 1);
        let (q, p) = a.quotient(&j).unwrap();
        assert_eq!(q.dim(), 1);
        assert!(q.is_abelian());
        assert!(p.is_hom && p.is_surjective().unwrap());
        assert_eq!(p.kernel().unwrap().space, j.space);
    }

    #[test]
    fn hom_reports_witness_without_failing() {
        let q2 = Arc::new(alg(2, &[((1, 1), 0)]));
        let swap = Morphism::hom(q2.clone(), q2.clone(), vec![one(1), one(0)]).unwrap();
        assert!(!swap.is_hom);
        assert_eq!(swap.witness, Some((0, 0)));
        let id = Morphism::hom(q2.clone(), q2, vec![one(0), one(1)]).unwrap();
        assert!(id.is_hom);
    }

    #[test]
    fn direct_sum_keeps_blocks_apart() {
        let q2 = alg(2, &[((1, 1), 0)]);
        let k = alg(1, &[]);
        let s = q2.direct_sum(&k).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(s.product_count(), 1);
        assert!(s.check_leibniz().holds);
    }

    #[test]
    fn formats_combinations() {
        let a = alg(3, &[]);
        let v = SparseVec::from_entries(vec![(0, Q::from_i64(2)), (2, Q::from_i64(-1))]);
        assert_eq!(a.format_vector(&v), "2*e1 - e3");
    }
}
