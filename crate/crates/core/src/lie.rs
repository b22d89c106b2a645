//! Lie-commutators, Lie-centralizers and the Lie-central series.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Algebra, Ideal, Morphism};
use crate::error::{Error, Result};
use crate::exactlin::{kernel_of_columns, SparseVec, Subspace};
use crate::scalar::Scalar;

/// `span{[x,x]}`, equivalently `span{[x,y] + [y,x]}`, over all basis pairs.
pub fn ann<F: Scalar>(a: &Algebra<F>) -> Result<Ideal<F>> {
    let n = a.dim();
    let vecs: Vec<SparseVec<F>> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            (i..n)
                .map(move |j| a.sym_bracket(&SparseVec::unit(i), &SparseVec::unit(j)))
                .filter(|v| !v.is_zero())
        })
        .collect();
    a.ideal(Subspace::span_owned(n, vecs)?)
}

/// `A / ann(A)`, the largest Lie algebra quotient.
pub fn liezation<F: Scalar>(a: &Arc<Algebra<F>>) -> Result<(Arc<Algebra<F>>, Morphism<F>)> {
    let i = ann(a)?;
    let (q, p) = a.quotient(&i)?;
    let q = Arc::new((*q).clone().with_name(format!("{}_Lie", a.name())));
    let p = Morphism::hom(a.clone(), q.clone(), p.columns().to_vec())?;
    Ok((q, p))
}

/// `span{[m,n] + [n,m]}` over basis vectors of `m` and `n`.
pub fn lie_commutator<F: Scalar>(
    a: &Algebra<F>,
    m: &Subspace<F>,
    n: &Subspace<F>,
) -> Result<Subspace<F>> {
    let vecs: Vec<SparseVec<F>> = m
        .basis()
        .par_iter()
        .flat_map_iter(|x| n.basis().iter().map(move |y| a.sym_bracket(x, y)))
        .filter(|v| !v.is_zero())
        .collect();
    Subspace::span_owned(a.dim(), vecs)
}

/// `[I, A]_Lie` for an ideal `I`, using only the generators of `A`.
///
/// For an ideal, the symmetric products with generators already span the
/// full Lie-commutator with the algebra.
pub fn lie_commutator_with_algebra<F: Scalar>(
    a: &Algebra<F>,
    i: &Subspace<F>,
) -> Result<Subspace<F>> {
    let vecs: Vec<SparseVec<F>> = i
        .basis()
        .par_iter()
        .flat_map_iter(|x| a.generators().iter().map(move |g| a.sym_bracket(x, g)))
        .filter(|v| !v.is_zero())
        .collect();
    Subspace::span_owned(a.dim(), vecs)
}

/// `{ q : [q,m] + [m,q] in n for all m in m_space }`.
pub fn lie_centralizer<F: Scalar>(
    a: &Algebra<F>,
    m_space: &Subspace<F>,
    n: &Subspace<F>,
) -> Result<Subspace<F>> {
    let dim = a.dim();
    let ms = m_space.basis();
    let columns: Vec<SparseVec<F>> = (0..dim)
        .into_par_iter()
        .map(|i| {
            let q = SparseVec::unit(i);
            let mut entries = Vec::new();
            for (k, m) in ms.iter().enumerate() {
                let r = n.reduce(&a.sym_bracket(&q, m));
                entries.extend(r.into_entries().into_iter().map(|(j, c)| (k * dim + j, c)));
            }
            SparseVec::from_entries(entries)
        })
        .collect();
    kernel_of_columns(&columns, dim * ms.len().max(1))
}

/// Lie-center `C(A, 0)`.
pub fn lie_center<F: Scalar>(a: &Algebra<F>) -> Result<Ideal<F>> {
    let z = lie_centralizer(a, &Subspace::full(a.dim()), &Subspace::zero(a.dim()))?;
    a.ideal(z)
}

/// `gamma_{c+1}^Lie(A, N)`: `c` Lie-commutators of the ideal `N` with `A`.
pub fn relative_gamma<F: Scalar>(a: &Algebra<F>, n: &Subspace<F>, c: usize) -> Result<Subspace<F>> {
    let mut cur = n.clone();
    for _ in 0..c {
        if cur.is_zero() {
            break;
        }
        cur = lie_commutator_with_algebra(a, &cur)?;
    }
    Ok(cur)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    LowerLie,
    UpperLie,
    LowerAbsolute,
}

/// Terms of a series until it reaches zero, the whole algebra, or repeats.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesReport<F: Scalar> {
    pub kind: SeriesKind,
    /// Ideal the lower series starts from; `None` means the whole algebra.
    pub relative_to: Option<Subspace<F>>,
    pub terms: Vec<Subspace<F>>,
    /// Nilpotency class, `None` when the series never reaches its end.
    pub cls: Option<usize>,
    pub stabilized: bool,
}

impl<F: Scalar> SeriesReport<F> {
    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(Subspace::dim).collect()
    }

    /// Term `i` with the series' own numbering (lower from 1, upper from 0),
    /// extended by its final value.
    pub fn term(&self, i: usize) -> &Subspace<F> {
        let k = match self.kind {
            SeriesKind::UpperLie => i,
            _ => i.saturating_sub(1),
        };
        &self.terms[k.min(self.terms.len() - 1)]
    }
}

/// `gamma_1 = N`, `gamma_{i+1} = [gamma_i, A]_Lie`; `N` defaults to `A`.
pub fn lower_lie_series<F: Scalar>(
    a: &Algebra<F>,
    relative: Option<&Ideal<F>>,
) -> Result<SeriesReport<F>> {
    let start = match relative {
        Some(i) => {
            if !i.two_sided || !a.is_two_sided_ideal(&i.space) {
                return Err(Error::Internal(
                    "relative term is not a two-sided ideal".into(),
                ));
            }
            i.space.clone()
        }
        None => Subspace::full(a.dim()),
    };
    let mut terms = vec![start];
    loop {
        let last = terms.last().expect("nonempty");
        if last.is_zero() {
            break;
        }
        let next = lie_commutator_with_algebra(a, last)?;
        if !a.is_two_sided_ideal(&next) {
            return Err(Error::Internal(
                "Lie-central series term is not a two-sided ideal".into(),
            ));
        }
        if !next.is_subspace_of(last) {
            return Err(Error::Internal(
                "Lie-central series is not descending".into(),
            ));
        }
        if !lie_commutator(a, last, last)?.is_subspace_of(&next) {
            return Err(Error::Internal(
                "consecutive Lie-central quotient is not Lie-abelian".into(),
            ));
        }
        if &next == last {
            break;
        }
        terms.push(next);
    }
    let cls = terms
        .last()
        .expect("nonempty")
        .is_zero()
        .then(|| terms.len() - 1);
    Ok(SeriesReport {
        kind: SeriesKind::LowerLie,
        relative_to: relative.map(|i| i.space.clone()),
        terms,
        cls,
        stabilized: true,
    })
}

/// `zeta_0 = 0`, `zeta_i = C(A, zeta_{i-1})`.
pub fn upper_lie_series<F: Scalar>(a: &Algebra<F>) -> Result<SeriesReport<F>> {
    let full = Subspace::full(a.dim());
    let mut terms = vec![Subspace::zero(a.dim())];
    loop {
        let last = terms.last().expect("nonempty");
        if last.is_full() {
            break;
        }
        let next = lie_centralizer(a, &full, last)?;
        if !a.is_two_sided_ideal(&next) {
            return Err(Error::Internal(
                "upper Lie-central term is not a two-sided ideal".into(),
            ));
        }
        if !last.is_subspace_of(&next) {
            return Err(Error::Internal(
                "upper Lie-central series is not ascending".into(),
            ));
        }
        if &next == last {
            break;
        }
        terms.push(next);
    }
    let cls = terms
        .last()
        .expect("nonempty")
        .is_full()
        .then(|| terms.len() - 1);
    Ok(SeriesReport {
        kind: SeriesKind::UpperLie,
        relative_to: None,
        terms,
        cls,
        stabilized: true,
    })
}

/// `zeta_c^Lie(A)` without computing terms past `c`.
pub fn upper_lie_term<F: Scalar>(a: &Algebra<F>, c: usize) -> Result<Subspace<F>> {
    let full = Subspace::full(a.dim());
    let mut cur = Subspace::zero(a.dim());
    for _ in 0..c {
        if cur.is_full() {
            break;
        }
        let next = lie_centralizer(a, &full, &cur)?;
        if next == cur {
            break;
        }
        cur = next;
    }
    Ok(cur)
}

/// Lie nilpotency class; the zero algebra has class 0.
pub fn lie_class<F: Scalar>(a: &Algebra<F>) -> Result<Option<usize>> {
    Ok(lower_lie_series(a, None)?.cls)
}

/// Class `c >= 2` with `dim A/gamma_2 = 2` and one-dimensional
/// `gamma_j / gamma_{j+1}` for `2 <= j <= c`.
pub fn is_maximal_lie_class<F: Scalar>(a: &Algebra<F>) -> Result<bool> {
    let s = lower_lie_series(a, None)?;
    let Some(c) = s.cls else { return Ok(false) };
    if c < 2 {
        return Ok(false);
    }
    let d = s.dims();
    Ok(d[0] - d[1] == 2 && (1..c).all(|j| d[j] - d[j + 1] == 1))
}

/// Absolute lower central series: `gamma_{i+1} = [gamma_i, A] + [A, gamma_i]`.
pub fn absolute_lower_series<F: Scalar>(a: &Algebra<F>) -> Result<SeriesReport<F>> {
    let n = a.dim();
    let mut terms = vec![Subspace::full(n)];
    loop {
        let last = terms.last().expect("nonempty");
        if last.is_zero() {
            break;
        }
        let vecs: Vec<SparseVec<F>> = last
            .basis()
            .par_iter()
            .flat_map_iter(|g| {
                (0..n).flat_map(move |i| {
                    let e = SparseVec::unit(i);
                    [a.bracket(g, &e), a.bracket(&e, g)]
                })
            })
            .filter(|v| !v.is_zero())
            .collect();
        let next = Subspace::span_owned(n, vecs)?;
        if &next == last {
            break;
        }
        terms.push(next);
    }
    let cls = terms
        .last()
        .expect("nonempty")
        .is_zero()
        .then(|| terms.len() - 1);
    Ok(SeriesReport {
        kind: SeriesKind::LowerAbsolute,
        relative_to: None,
        terms,
        cls,
        stabilized: true,
    })
}

/// Absolute nilpotency class, `None` if not nilpotent.
pub fn absolute_class<F: Scalar>(a: &Algebra<F>) -> Result<Option<usize>> {
    Ok(absolute_lower_series(a)?.cls)
}
