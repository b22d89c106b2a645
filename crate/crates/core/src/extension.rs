//! Lie-central extensions, Lie-stem extensions and Lie-stem covers.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{Algebra, Ideal, Morphism};
use crate::baer::{self, induced_map_with, nilpotency_class, LevelData, LevelPolicy};
use crate::error::{Error, Result};
use crate::exactlin::{Accumulator, EchelonBuilder, SparseVec, Subspace};
use crate::lie::{relative_gamma, upper_lie_term};
use crate::scalar::Scalar;

/// `0 -> N -> G -> Q -> 0` with `pi` a certified surjective homomorphism.
#[derive(Clone, Debug)]
pub struct Extension<F: Scalar> {
    pub total: Arc<Algebra<F>>,
    pub base: Arc<Algebra<F>>,
    pub pi: Morphism<F>,
    pub kernel: Ideal<F>,
}

impl<F: Scalar> Extension<F> {
    /// Errors with a 1-based witness pair when `pi` does not preserve
    /// brackets, or with `NOT_SURJECTIVE`.
    pub fn new(pi: Morphism<F>) -> Result<Self> {
        if let Some((i, j)) = pi.witness {
            return Err(Error::NotHomomorphism {
                witness: (i + 1, j + 1),
            });
        }
        if !pi.is_hom {
            return Err(Error::Internal(
                "morphism is neither certified nor refuted".into(),
            ));
        }
        if !pi.is_surjective()? {
            return Err(Error::NotSurjective);
        }
        let kernel = pi.kernel()?;
        debug_assert_eq!(pi.domain.dim(), pi.codomain.dim() + kernel.dim());
        Ok(Self {
            total: pi.domain.clone(),
            base: pi.codomain.clone(),
            pi,
            kernel,
        })
    }

    /// `G -> G / N`.
    pub fn from_quotient(total: &Arc<Algebra<F>>, n: &Ideal<F>) -> Result<Self> {
        let (_, p) = total.quotient(n)?;
        Self::new(p)
    }
}

/// `gamma_{c+1}^Lie(G, N) = 0`, cross-checked against `N ⊆ zeta_c^Lie(G)`.
pub fn is_c_lie_central<F: Scalar>(e: &Extension<F>, c: usize) -> Result<bool> {
    let by_commutator = relative_gamma(&e.total, &e.kernel.space, c)?.is_zero();
    let by_center = e.kernel.space.is_subspace_of(&upper_lie_term(&e.total, c)?);
    if by_commutator != by_center {
        return Err(Error::Agreement(format!(
            "gamma_{}(G, N) = 0 is {by_commutator} but N ⊆ zeta_{c}(G) is {by_center}",
            c + 1
        )));
    }
    Ok(by_commutator)
}

/// `N ⊆ gamma_{c+1}^Lie(G)` for a c-Lie-central extension, cross-checked
/// against `dim G / gamma_{c+1}(G) = dim Q / gamma_{c+1}(Q)`.
pub fn is_c_lie_stem<F: Scalar>(e: &Extension<F>, c: usize) -> Result<bool> {
    if !is_c_lie_central(e, c)? {
        return Err(Error::NotCentral);
    }
    stem_unchecked(e, c)
}

fn stem_unchecked<F: Scalar>(e: &Extension<F>, c: usize) -> Result<bool> {
    let gg = relative_gamma(&e.total, &Subspace::full(e.total.dim()), c)?;
    let gq = relative_gamma(&e.base, &Subspace::full(e.base.dim()), c)?;
    let by_inclusion = e.kernel.space.is_subspace_of(&gg);
    let by_dimension = e.total.dim() - gg.dim() == e.base.dim() - gq.dim();
    if by_inclusion != by_dimension {
        return Err(Error::Agreement(format!(
            "N ⊆ gamma_{}(G) is {by_inclusion} but the top quotients have equal dimension is {by_dimension}",
            c + 1
        )));
    }
    Ok(by_inclusion)
}

/// Outcome of the stem-cover test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StemCoverReport {
    pub c: usize,
    pub central: bool,
    pub stem: bool,
    pub dim_kernel: usize,
    pub dim_multiplier: usize,
    pub multiplier_level: usize,
    pub multiplier_stabilized: bool,
    /// Rank of `M(G) -> M(Q)`; `None` when `G` is not absolutely nilpotent.
    pub induced_rank: Option<usize>,
    pub is_cover: bool,
}

impl StemCoverReport {
    pub fn induced_map_status(&self) -> String {
        match self.induced_rank {
            Some(r) => format!("rank {r}"),
            None => "not evaluated".into(),
        }
    }
}

/// Stem extension whose kernel has the dimension of `M^(c)(Q)`; when `G` is
/// absolutely nilpotent, also requires `M(G) -> M(Q)` to vanish.
pub fn is_c_lie_stem_cover<F: Scalar>(
    e: &Extension<F>,
    c: usize,
    policy: &LevelPolicy,
) -> Result<StemCoverReport> {
    let central = is_c_lie_central(e, c)?;
    let stem = central && stem_unchecked(e, c)?;
    let mult = baer::multiplier(&e.base, c, policy)?;
    let dims_match = e.kernel.dim() == mult.dim;
    let induced_rank = match nilpotency_class(&e.total) {
        Ok(_) => {
            Some(induced_map_with(&e.total, &e.kernel, c, None, policy.mode, policy.cap)?.rank)
        }
        Err(Error::NotNilpotent) => None,
        Err(err) => return Err(err),
    };
    let is_cover = stem && dims_match;
    if is_cover && induced_rank.is_some_and(|r| r != 0) {
        return Err(Error::Agreement(format!(
            "stem cover but the induced map on multipliers has rank {}",
            induced_rank.unwrap_or_default()
        )));
    }
    Ok(StemCoverReport {
        c,
        central,
        stem,
        dim_kernel: e.kernel.dim(),
        dim_multiplier: mult.dim,
        multiplier_level: mult.level,
        multiplier_stabilized: mult.stabilized,
        induced_rank,
        is_cover,
    })
}

/// A constructed c-Lie-stem cover `Q* -> Q`.
#[derive(Clone, Debug)]
pub struct StemCover<F: Scalar> {
    pub algebra: Arc<Algebra<F>>,
    pub extension: Extension<F>,
    pub level: usize,
    pub dim_multiplier: usize,
    pub report: StemCoverReport,
}

/// No ideal complement of the multiplier exists at any tried level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NoIdealComplement {
    pub c: usize,
    pub levels_tried: Vec<usize>,
    pub dim_multiplier: usize,
    /// The multiplier had stabilized over the tried levels.
    pub after_window: bool,
    /// Lie-class of `Q`; `c` above it with a nonzero multiplier rules out covers.
    pub lie_class: Option<usize>,
}

#[derive(Clone, Debug)]
pub enum StemCoverOutcome<F: Scalar> {
    Constructed(Box<StemCover<F>>),
    NoIdealComplement(NoIdealComplement),
}

impl<F: Scalar> StemCoverOutcome<F> {
    pub fn cover(&self) -> Option<&StemCover<F>> {
        match self {
            Self::Constructed(s) => Some(s),
            Self::NoIdealComplement(_) => None,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            Self::Constructed(_) => "CONSTRUCTED",
            Self::NoIdealComplement(_) => "NO_IDEAL_COMPLEMENT",
        }
    }
}

/// Builds `F / S` for an ideal `S` of `F` with `S + X = R` and `S ∩ X = Y`.
///
/// Complements of `X / Y` in `R / Y` are graphs `c_i -> c_i + sum_j t_ij m_j`
/// over a fixed complement `{c_i}` of `X` in `R`; being an ideal is linear
/// in `t`. The first level in the window with a solution is used. Without an
/// explicit `m_max` the window is two levels.
pub fn stem_cover_construct<F: Scalar>(
    q: &Arc<Algebra<F>>,
    c: usize,
    policy: &LevelPolicy,
) -> Result<StemCoverOutcome<F>> {
    if c == 0 {
        return Err(Error::InvalidArgument("c must be at least 1".into()));
    }
    let k = nilpotency_class(q)?;
    let m_start = policy.m_start.unwrap_or(k + c).max(k).max(1);
    let m_max = policy.m_max.unwrap_or(m_start + 1).max(m_start);
    let mut tried = Vec::new();
    let mut dims = Vec::new();
    for m in m_start..=m_max {
        let data = baer::level_data(q, c, m, policy.mode, policy.cap)?;
        tried.push(m);
        dims.push(data.dim_multiplier());
        if let Some(s) = ideal_complement(&data)? {
            return finish(q, c, data, s, policy)
                .map(|s| StemCoverOutcome::Constructed(Box::new(s)));
        }
    }
    let dim_multiplier = *dims.last().expect("at least one level");
    Ok(StemCoverOutcome::NoIdealComplement(NoIdealComplement {
        c,
        after_window: dims.len() > 1 && dims.windows(2).last().is_some_and(|w| w[0] == w[1]),
        levels_tried: tried,
        dim_multiplier,
        lie_class: crate::lie::lie_class(q)?,
    }))
}

/// Solves for the graph coefficients; `None` when the system is infeasible.
///
/// Works in `R / Y`: the multiplier is `X' = X / Y` in reduced echelon form,
/// and the fixed complement is spanned by unit vectors at its non-pivot
/// columns, so splitting a vector needs only a reduction modulo `X'`.
fn ideal_complement<F: Scalar>(data: &LevelData<F>) -> Result<Option<Subspace<F>>> {
    let f = data.presentation.algebra();
    let r = &data.presentation.kernel;
    let y = &data.relative;
    let ry = r.quotient(y)?;
    let xp = Subspace::span_owned(
        ry.dim(),
        data.meet
            .basis()
            .iter()
            .map(|v| ry.project(v))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let x_pivots = xp.pivots();
    let mut slot = vec![usize::MAX; ry.dim()];
    let mut is_pivot = vec![false; ry.dim()];
    for &p in &x_pivots {
        is_pivot[p] = true;
    }
    let mut free_cols = Vec::new();
    for p in 0..ry.dim() {
        if !is_pivot[p] {
            slot[p] = free_cols.len();
            free_cols.push(p);
        }
    }
    let (nc, nm) = (free_cols.len(), xp.dim());
    let cs: Vec<SparseVec<F>> = free_cols
        .iter()
        .map(|&p| ry.lift(&SparseVec::unit(p)))
        .collect();
    let ms: Vec<SparseVec<F>> = xp.basis().iter().map(|v| ry.lift(v)).collect();
    if nc == 0 || nm == 0 {
        return Ok(Some(Subspace::span(f.dim(), cs.iter().chain(y.basis()))?));
    }
    // (a, b): complement and multiplier coordinates of w in R / Y.
    let split = |w: &SparseVec<F>| -> Result<(SparseVec<F>, SparseVec<F>)> {
        let w = ry.project(w)?;
        let b = SparseVec::from_entries(
            x_pivots
                .iter()
                .enumerate()
                .map(|(j, &p)| (j, w.get(p)))
                .filter(|e| !e.1.is_negligible())
                .collect(),
        );
        let a = xp.reduce(&w).map_indices(|p| slot[p]);
        Ok((a, b))
    };
    let unknowns = nc * nm;
    let unknown = |i: usize, j: usize| i * nm + j;
    let mut system = EchelonBuilder::new(unknowns + 1);
    for g in f.generators() {
        for left in [false, true] {
            let mul = |v: &SparseVec<F>| {
                if left {
                    f.bracket(g, v)
                } else {
                    f.bracket(v, g)
                }
            };
            // by_row[j]: (j', coefficient of m_j in [m_j', g]).
            let mut by_row: Vec<Vec<(usize, F)>> = vec![Vec::new(); nm];
            for (jp, mj) in ms.iter().enumerate() {
                let (a, b) = split(&mul(mj))?;
                if !a.is_zero() {
                    return Err(Error::Internal("X is not an ideal of F".into()));
                }
                for (j, v) in b.into_entries() {
                    by_row[j].push((jp, v));
                }
            }
            for (i, ci) in cs.iter().enumerate() {
                let (a, b) = split(&mul(ci))?;
                for (j, terms) in by_row.iter().enumerate() {
                    let mut acc = Accumulator::new();
                    for (jp, v) in terms {
                        acc.add_term(unknown(i, *jp), v.clone());
                    }
                    for (l, al) in a.entries() {
                        acc.add_term(unknown(*l, j), -al.clone());
                    }
                    acc.add_term(unknowns, -b.get(j));
                    let eq = system.reduce(&acc.finish());
                    match eq.leading() {
                        None => {}
                        Some(p) if p == unknowns => return Ok(None),
                        Some(_) => {
                            system.insert(&eq)?;
                        }
                    }
                }
            }
        }
    }
    // Free unknowns are zero; each pivot unknown equals its row's constant.
    let solution = system.finish();
    let mut coeffs = vec![Vec::new(); nc];
    for row in solution.basis() {
        let p = row.leading().expect("nonzero row");
        let v = row.get(unknowns);
        if !v.is_negligible() {
            coeffs[p / nm].push((p % nm, v));
        }
    }
    let graph: Vec<SparseVec<F>> = cs
        .iter()
        .zip(coeffs)
        .map(|(ci, t)| ci.add(&SparseVec::combine(&SparseVec::from_entries(t), &ms)))
        .collect();
    Ok(Some(Subspace::span(
        f.dim(),
        graph.iter().chain(y.basis()),
    )?))
}

fn finish<F: Scalar>(
    q: &Arc<Algebra<F>>,
    c: usize,
    data: LevelData<F>,
    s: Subspace<F>,
    policy: &LevelPolicy,
) -> Result<StemCover<F>> {
    let f = data.presentation.algebra().clone();
    let r = &data.presentation.kernel;
    if !f.is_two_sided_ideal(&s) {
        return Err(Error::Internal("solved complement is not an ideal".into()));
    }
    if s.intersect(&data.meet)? != data.relative || s.sum(&data.meet)? != *r {
        return Err(Error::Internal(
            "solved subspace is not a complement of the multiplier".into(),
        ));
    }
    let (qs, proj) = f.quotient(&f.ideal(s.clone())?)?;
    let reps = Subspace::full(f.dim()).quotient(&s)?.reps().to_vec();
    debug_assert!(reps
        .iter()
        .enumerate()
        .all(|(i, v)| proj.apply(v) == SparseVec::unit(i)));
    let qs = Arc::new((*qs).clone().with_name(format!("{}*", q.name())));
    let columns = reps
        .iter()
        .map(|v| data.presentation.rho.apply(v))
        .collect();
    let pi = Morphism::hom(qs.clone(), q.clone(), columns)?;
    let extension = Extension::new(pi)?;
    let dim_multiplier = data.dim_multiplier();
    if qs.dim() != q.dim() + dim_multiplier {
        return Err(Error::Assertion(format!(
            "cover has dimension {} but dim Q + dim M = {}",
            qs.dim(),
            q.dim() + dim_multiplier
        )));
    }
    let report = is_c_lie_stem_cover(&extension, c, policy)?;
    if !report.is_cover {
        return Err(Error::Assertion(
            "constructed extension is not a c-Lie-stem cover".into(),
        ));
    }
    Ok(StemCover {
        algebra: qs,
        extension,
        level: data.level(),
        dim_multiplier,
        report,
    })
}
