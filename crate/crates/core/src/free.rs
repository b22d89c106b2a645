//! Truncated free Leibniz algebras on tensor words.
//!
//! The word `w1 w2 ... wn` stands for the left-normed bracket
//! `[[...[w1, w2], ...], wn]`. Words are ordered by length, then
//! lexicographically, and products of total length above `m` vanish.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{Algebra, Morphism};
use crate::error::{Error, Result};
use crate::exactlin::{Accumulator, SparseVec, Subspace};
use crate::lie::absolute_class;
use crate::scalar::Scalar;

/// Default bound on the dimension of materialized truncations.
pub const DEFAULT_DIM_CAP: usize = 20_000;

/// `F / gamma_{m+1}(F)` for the free Leibniz algebra `F` on `d` letters.
#[derive(Clone)]
pub struct FreeTruncation<F> {
    d: usize,
    m: usize,
    /// `offsets[n]` is the index of the first word of length `n` (1-based lengths).
    offsets: Vec<usize>,
    algebra: Arc<Algebra<F>>,
}

/// Dimension `d + d^2 + ... + d^m`, or `None` on overflow.
pub fn truncation_dim(d: usize, m: usize) -> Option<usize> {
    let mut total = 0usize;
    let mut p = 1usize;
    for _ in 0..m {
        p = p.checked_mul(d)?;
        total = total.checked_add(p)?;
    }
    Some(total)
}

fn letter_name(d: usize, a: usize) -> String {
    if d <= 3 {
        ["x", "y", "z"][a].to_string()
    } else {
        format!("x{}", a + 1)
    }
}

impl<F: Scalar> FreeTruncation<F> {
    /// Builds the truncation; `d = 0` gives the zero algebra.
    pub fn new(d: usize, m: usize, cap: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument(
                "truncation level must be at least 1".into(),
            ));
        }
        if d > 255 {
            return Err(Error::InvalidArgument(
                "at most 255 generators are supported".into(),
            ));
        }
        let dim = truncation_dim(d, m).ok_or(Error::TooLarge {
            dim: usize::MAX,
            cap,
        })?;
        if dim > cap {
            return Err(Error::TooLarge { dim, cap });
        }
        let mut offsets = vec![0usize; m + 2];
        let mut p = 1usize;
        for n in 1..=m {
            offsets[n + 1] = offsets[n] + p * d;
            p *= d;
        }
        let shell = Self {
            d,
            m,
            offsets,
            algebra: Arc::new(Algebra::new("", Vec::new(), Vec::new())?),
        };
        let labels: Vec<String> = (0..dim).map(|i| shell.word_label(i)).collect();
        let products = shell.compute_products();
        let gens = (0..d).map(SparseVec::unit).collect();
        let algebra =
            Algebra::new(format!("free({d},{m})"), labels, products)?.with_generators(gens);
        Ok(Self {
            algebra: Arc::new(algebra),
            ..shell
        })
    }

    pub fn generators(&self) -> usize {
        self.d
    }

    pub fn level(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.offsets[self.m + 1]
    }

    pub fn algebra(&self) -> &Arc<Algebra<F>> {
        &self.algebra
    }

    /// Length of the word with index `i`.
    pub fn degree(&self, i: usize) -> usize {
        (1..=self.m)
            .find(|&n| i < self.offsets[n + 1])
            .expect("index in range")
    }

    /// Index range of words of length `n`.
    pub fn degree_range(&self, n: usize) -> std::ops::Range<usize> {
        self.offsets[n]..self.offsets[n + 1]
    }

    /// Letters (0-based) of the word with index `i`.
    pub fn word(&self, i: usize) -> Vec<usize> {
        let n = self.degree(i);
        let mut v = i - self.offsets[n];
        let mut letters = vec![0; n];
        for k in (0..n).rev() {
            letters[k] = v % self.d;
            v /= self.d;
        }
        letters
    }

    pub fn word_index(&self, letters: &[usize]) -> Option<usize> {
        let n = letters.len();
        if n == 0 || n > self.m || letters.iter().any(|&a| a >= self.d) {
            return None;
        }
        Some(self.offsets[n] + letters.iter().fold(0, |v, &a| v * self.d + a))
    }

    pub fn word_label(&self, i: usize) -> String {
        self.word(i)
            .into_iter()
            .map(|a| letter_name(self.d, a))
            .collect()
    }

    /// Index of `w z` for a word `w` and letter `z`, if it fits.
    fn append(&self, w: usize, z: usize) -> Option<usize> {
        let n = self.degree(w);
        if n + 1 > self.m {
            return None;
        }
        Some(self.offsets[n + 1] + (w - self.offsets[n]) * self.d + z)
    }

    /// Span of all words of length at least `k`.
    pub fn words_from_degree(&self, k: usize) -> Subspace<F> {
        let start = if k > self.m {
            self.dim()
        } else {
            self.offsets[k.max(1)]
        };
        Subspace::coordinate(self.dim(), start..self.dim())
    }

    /// All products `[u, v]` with `|u| + |v| <= m`, by increasing `|v|`.
    ///
    /// `[u, z] = uz` for a letter `z`; otherwise, with `v = v'z`,
    /// `[u, v'z] = [[u, v'], z] - [uz, v']`.
    fn compute_products(&self) -> Vec<((usize, usize), SparseVec<F>)> {
        let mut known: HashMap<(usize, usize), SparseVec<F>> = HashMap::new();
        for lv in 1..self.m {
            let batch: Vec<((usize, usize), SparseVec<F>)> = self
                .degree_range(lv)
                .into_par_iter()
                .flat_map_iter(|v| {
                    let known = &known;
                    (0..self.offsets[self.m - lv + 1])
                        .map(move |u| ((u, v), self.word_bracket_step(u, v, known)))
                })
                .collect();
            known.extend(batch);
        }
        let mut out: Vec<_> = known.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        out.sort_by_key(|e| e.0);
        out
    }

    fn word_bracket_step(
        &self,
        u: usize,
        v: usize,
        known: &HashMap<(usize, usize), SparseVec<F>>,
    ) -> SparseVec<F> {
        let letters = self.word(v);
        let z = *letters.last().expect("nonempty word");
        if letters.len() == 1 {
            return self
                .append(u, z)
                .map_or_else(SparseVec::zero, SparseVec::unit);
        }
        let vp = self
            .word_index(&letters[..letters.len() - 1])
            .expect("prefix is a word");
        let mut acc = Accumulator::new();
        for (w, c) in known[&(u, vp)].entries() {
            if let Some(wz) = self.append(*w, z) {
                acc.add_term(wz, c.clone());
            }
        }
        if let Some(uz) = self.append(u, z) {
            if let Some(p) = known.get(&(uz, vp)) {
                acc.add_scaled(p, &(-F::one()));
            }
        }
        acc.finish()
    }

    /// `[u, v]` for words given as letter sequences.
    pub fn word_bracket(&self, u: &[usize], v: &[usize]) -> Result<SparseVec<F>> {
        let (Some(i), Some(j)) = (self.word_index(u), self.word_index(v)) else {
            return Err(Error::InvalidArgument(
                "words must be nonempty, in range and at most m letters".into(),
            ));
        };
        Ok(self
            .algebra
            .bracket_basis(i, j)
            .cloned()
            .unwrap_or_default())
    }

    /// The homomorphism sending letter `a` to `images[a]`.
    ///
    /// Requires `gamma_{m+1}(target) = 0`, so that truncation is compatible.
    pub fn evaluation_hom(
        &self,
        images: &[SparseVec<F>],
        target: Arc<Algebra<F>>,
    ) -> Result<Morphism<F>> {
        if images.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: images.len(),
            });
        }
        match absolute_class(&target)? {
            None => return Err(Error::NotNilpotent),
            Some(k) if k > self.m => {
                return Err(Error::LevelTooSmall {
                    level: self.m,
                    class: k,
                })
            }
            _ => {}
        }
        let mut columns: Vec<SparseVec<F>> = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let letters = self.word(i);
            let z = *letters.last().expect("nonempty word");
            let col = if letters.len() == 1 {
                images[z].clone()
            } else {
                let prefix = self
                    .word_index(&letters[..letters.len() - 1])
                    .expect("prefix is a word");
                target.bracket(&columns[prefix], &images[z])
            };
            columns.push(col);
        }
        let f = Morphism::hom(self.algebra.clone(), target, columns)?;
        if !f.is_hom {
            return Err(Error::Internal(
                "evaluation map failed homomorphism certification".into(),
            ));
        }
        Ok(f)
    }
}
