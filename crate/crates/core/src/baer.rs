//! Relative Baer invariants through truncated free presentations.
//!
//! For a presentation `0 -> R -> F -> Q -> 0` truncated at word length `m`,
//! with `G = gamma_{c+1}^Lie(F)` and `Y = gamma_{c+1}^Lie(F, R)`:
//!
//! * the multiplier `M^(c)(Q)` is `(R ∩ G) / Y`,
//! * `gamma*_{c+1}(Q)` is `G / Y`,
//! * `Z*(Q)` is the image of `zeta_c^Lie(F / Y)` in `Q`.
//!
//! If `Q` has absolute class `k`, every level `m >= k + c` gives the
//! untruncated values: `R` contains all words longer than `k`, so the part
//! of `G` above degree `k + c` already lies in `Y`. Reports still sweep a
//! window of levels and flag two-level agreement as `stabilized`.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{format_combination, Algebra, Ideal};
use crate::error::{Error, Result};
use crate::exactlin::{Mat, QuotientData, SparseVec, Subspace};
use crate::free::{truncation_dim, FreeTruncation, DEFAULT_DIM_CAP};
use crate::lie::{absolute_lower_series, ann, relative_gamma, upper_lie_term};
use crate::scalar::Scalar;

static SUM_IDENTITY_CHECKS: AtomicUsize = AtomicUsize::new(0);
static SUM_IDENTITY_FAILURES: AtomicUsize = AtomicUsize::new(0);

/// Process-wide count of `dim M + dim gamma_{c+1}(Q) = dim gamma*` checks
/// performed and failed.
pub fn sum_identity_counters() -> (usize, usize) {
    (
        SUM_IDENTITY_CHECKS.load(Ordering::Relaxed),
        SUM_IDENTITY_FAILURES.load(Ordering::Relaxed),
    )
}

fn record_sum_identity(ok: bool) {
    SUM_IDENTITY_CHECKS.fetch_add(1, Ordering::Relaxed);
    if !ok {
        SUM_IDENTITY_FAILURES.fetch_add(1, Ordering::Relaxed);
    }
}

/// Which generators a presentation uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Lifts of a basis of `Q / gamma_2(Q)`.
    Minimal,
    /// One generator per basis vector of `Q`.
    Full,
}

/// Level window and resource limits for Baer-invariant sweeps.
#[derive(Clone, Debug)]
pub struct LevelPolicy {
    /// First level; defaults to `k + c`.
    pub m_start: Option<usize>,
    /// Last level; defaults to `k + c + 3`.
    pub m_max: Option<usize>,
    pub mode: Mode,
    /// Largest free truncation dimension that will be materialized.
    pub cap: usize,
    /// Evaluate levels two at a time on the thread pool.
    pub parallel: bool,
}

impl Default for LevelPolicy {
    fn default() -> Self {
        Self {
            m_start: None,
            m_max: None,
            mode: Mode::Minimal,
            cap: DEFAULT_DIM_CAP,
            parallel: false,
        }
    }
}

impl LevelPolicy {
    /// A single fixed level.
    pub fn at_level(m: usize) -> Self {
        Self {
            m_start: Some(m),
            m_max: Some(m),
            ..Self::default()
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }
}

/// Truncated free presentation `F_m -> Q` with kernel `R`.
#[derive(Clone)]
pub struct Presentation<F: Scalar> {
    pub target: Arc<Algebra<F>>,
    pub mode: Mode,
    /// Absolute nilpotency class of the target.
    pub class: usize,
    pub free: FreeTruncation<F>,
    pub rho: crate::algebra::Morphism<F>,
    pub kernel: Subspace<F>,
}

impl<F: Scalar> Presentation<F> {
    pub fn level(&self) -> usize {
        self.free.level()
    }

    pub fn algebra(&self) -> &Arc<Algebra<F>> {
        self.free.algebra()
    }

    /// `rho^{-1}(n)` for a subspace `n` of the target.
    pub fn preimage(&self, n: &Subspace<F>) -> Result<Subspace<F>> {
        self.rho.preimage(n)
    }
}

/// Absolute class, or `NOT_NILPOTENT`.
pub fn nilpotency_class<F: Scalar>(q: &Algebra<F>) -> Result<usize> {
    absolute_lower_series(q)?.cls.ok_or(Error::NotNilpotent)
}

fn generator_images<F: Scalar>(q: &Algebra<F>, mode: Mode) -> Result<Vec<SparseVec<F>>> {
    match mode {
        Mode::Full => Ok((0..q.dim()).map(SparseVec::unit).collect()),
        Mode::Minimal => {
            let s = absolute_lower_series(q)?;
            let g2 = s
                .terms
                .get(1)
                .cloned()
                .unwrap_or_else(|| Subspace::zero(q.dim()));
            Ok(Subspace::full(q.dim()).quotient(&g2)?.reps().to_vec())
        }
    }
}

/// Presentation of `q` at level `m`.
pub fn presentation<F: Scalar>(
    q: &Arc<Algebra<F>>,
    mode: Mode,
    m: usize,
    cap: usize,
) -> Result<Presentation<F>> {
    let class = nilpotency_class(q)?;
    if m < class {
        return Err(Error::LevelTooSmall { level: m, class });
    }
    let images = generator_images(q, mode)?;
    let free = FreeTruncation::new(images.len(), m, cap)?;
    let rho = free.evaluation_hom(&images, q.clone())?;
    if !rho.is_surjective()? {
        return Err(Error::Internal("presentation map is not surjective".into()));
    }
    let kernel = rho.kernel()?.space;
    Ok(Presentation {
        target: q.clone(),
        mode,
        class,
        free,
        rho,
        kernel,
    })
}

/// Everything computed at one truncation level.
#[derive(Clone)]
pub struct LevelData<F: Scalar> {
    pub presentation: Presentation<F>,
    pub c: usize,
    /// `gamma_{c+1}^Lie(F)`.
    pub gamma: Subspace<F>,
    /// `gamma_{c+1}^Lie(F, R)`.
    pub relative: Subspace<F>,
    /// `R ∩ gamma_{c+1}^Lie(F)`.
    pub meet: Subspace<F>,
}

impl<F: Scalar> LevelData<F> {
    pub fn level(&self) -> usize {
        self.presentation.level()
    }

    pub fn dim_multiplier(&self) -> usize {
        self.meet.dim() - self.relative.dim()
    }

    pub fn dim_gamma_star(&self) -> usize {
        self.gamma.dim() - self.relative.dim()
    }

    pub fn multiplier_quotient(&self) -> Result<QuotientData<F>> {
        self.meet.quotient(&self.relative)
    }
}

/// Computes `G`, `Y` and `R ∩ G` at level `m`.
pub fn level_data<F: Scalar>(
    q: &Arc<Algebra<F>>,
    c: usize,
    m: usize,
    mode: Mode,
    cap: usize,
) -> Result<LevelData<F>> {
    let p = presentation(q, mode, m, cap)?;
    level_data_for(p, c)
}

fn level_data_for<F: Scalar>(p: Presentation<F>, c: usize) -> Result<LevelData<F>> {
    let f = p.algebra().clone();
    let gamma = relative_gamma(&f, &Subspace::full(f.dim()), c)?;
    let relative = relative_gamma(&f, &p.kernel, c)?;
    let meet = p.kernel.intersect(&gamma)?;
    if !relative.is_subspace_of(&meet) {
        return Err(Error::Internal(
            "gamma(F, R) is not contained in R ∩ gamma(F)".into(),
        ));
    }
    Ok(LevelData {
        presentation: p,
        c,
        gamma,
        relative,
        meet,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LevelDims {
    pub level: usize,
    pub dim_multiplier: usize,
    pub dim_gamma_star: usize,
}

/// Multiplier sweep result.
#[derive(Clone, Debug)]
pub struct MultiplierReport<F: Scalar> {
    pub c: usize,
    pub mode: Mode,
    /// Absolute class `k` of the input.
    pub class: usize,
    pub dim: usize,
    /// Level the reported values were read at.
    pub level: usize,
    /// Two consecutive levels agreed.
    pub stabilized: bool,
    /// The level is at least `k + c`.
    pub exact: bool,
    /// The sweep stopped because the next level exceeded the resource cap.
    pub capped: bool,
    pub per_level_dims: Vec<LevelDims>,
    /// Coset representatives of a multiplier basis, as words.
    pub basis_words: Vec<String>,
    pub basis: Vec<SparseVec<F>>,
    pub dim_gamma_star: usize,
    pub dim_gamma_c1_q: usize,
}

/// `dim M^(c)(Q)` over a window of levels.
pub fn multiplier<F: Scalar>(
    q: &Arc<Algebra<F>>,
    c: usize,
    policy: &LevelPolicy,
) -> Result<MultiplierReport<F>> {
    multiplier_with_data(q, c, policy).map(|(r, _)| r)
}

/// As [`multiplier`], also returning the data of the reported level.
pub fn multiplier_with_data<F: Scalar>(
    q: &Arc<Algebra<F>>,
    c: usize,
    policy: &LevelPolicy,
) -> Result<(MultiplierReport<F>, LevelData<F>)> {
    if c == 0 {
        return Err(Error::InvalidArgument("c must be at least 1".into()));
    }
    let k = nilpotency_class(q)?;
    let d = generator_images(q, policy.mode)?.len();
    let m_start = policy.m_start.unwrap_or(k + c).max(k).max(1);
    let m_max = policy.m_max.unwrap_or(k + c + 3).max(m_start);
    let dim_gamma_q = relative_gamma(q, &Subspace::full(q.dim()), c)?.dim();

    let fits = |m: usize| truncation_dim(d, m).is_some_and(|n| n <= policy.cap);
    let compute = |m: usize| level_data(q, c, m, policy.mode, policy.cap);

    let mut per_level: Vec<LevelDims> = Vec::new();
    let mut last: Option<LevelData<F>> = None;
    let mut stabilized = false;
    let mut capped = false;
    let mut m = m_start;
    'sweep: while m <= m_max {
        let batch: Vec<usize> = if policy.parallel {
            vec![m, m + 1]
        } else {
            vec![m]
        }
        .into_iter()
        .filter(|&l| l <= m_max)
        .collect();
        let runnable: Vec<usize> = batch.iter().copied().take_while(|&l| fits(l)).collect();
        let results: Vec<Result<LevelData<F>>> = if runnable.len() > 1 {
            let (a, b) = rayon::join(|| compute(runnable[0]), || compute(runnable[1]));
            vec![a, b]
        } else {
            runnable.iter().map(|&l| compute(l)).collect()
        };
        for data in results {
            let data = data?;
            let dims = LevelDims {
                level: data.level(),
                dim_multiplier: data.dim_multiplier(),
                dim_gamma_star: data.dim_gamma_star(),
            };
            let ok = dims.dim_gamma_star == dims.dim_multiplier + dim_gamma_q;
            record_sum_identity(ok);
            if !ok {
                return Err(Error::Assertion(format!(
                    "level {}: dim gamma* = {} but dim M + dim gamma_{}(Q) = {} + {}",
                    dims.level,
                    dims.dim_gamma_star,
                    c + 1,
                    dims.dim_multiplier,
                    dim_gamma_q
                )));
            }
            if let Some(prev) = per_level.last() {
                if dims.dim_multiplier < prev.dim_multiplier {
                    return Err(Error::Assertion(format!(
                        "multiplier dimension decreased from {} at level {} to {} at level {}",
                        prev.dim_multiplier, prev.level, dims.dim_multiplier, dims.level
                    )));
                }
                if dims.dim_multiplier == prev.dim_multiplier
                    && dims.dim_gamma_star == prev.dim_gamma_star
                {
                    stabilized = true;
                }
            }
            per_level.push(dims);
            last = Some(data);
            if stabilized {
                break 'sweep;
            }
        }
        if runnable.len() < batch.len() {
            capped = true;
            break;
        }
        m += batch.len();
    }
    let Some(data) = last else {
        return Err(Error::TooLarge {
            dim: truncation_dim(d, m_start).unwrap_or(usize::MAX),
            cap: policy.cap,
        });
    };
    let qd = data.multiplier_quotient()?;
    let labels = data.presentation.algebra().labels().to_vec();
    let report = MultiplierReport {
        c,
        mode: policy.mode,
        class: k,
        dim: data.dim_multiplier(),
        level: data.level(),
        stabilized,
        exact: data.level() >= k + c,
        capped,
        per_level_dims: per_level,
        basis_words: qd
            .reps()
            .iter()
            .map(|r| format_combination(r, &labels))
            .collect(),
        basis: qd.reps().to_vec(),
        dim_gamma_star: data.dim_gamma_star(),
        dim_gamma_c1_q: dim_gamma_q,
    };
    Ok((report, data))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaStarReport {
    pub c: usize,
    pub dim: usize,
    pub dim_multiplier: usize,
    pub dim_gamma_c1_q: usize,
    pub level: usize,
    pub stabilized: bool,
    pub exact: bool,
}

/// `dim gamma*_{c+1}(Q)`, asserting `dim gamma* = dim M + dim gamma_{c+1}(Q)`.
pub fn gamma_star<F: Scalar>(
    q: &Arc<Algebra<F>>,
    c: usize,
    policy: &LevelPolicy,
) -> Result<GammaStarReport> {
    let r = multiplier(q, c, policy)?;
    Ok(GammaStarReport {
        c,
        dim: r.dim_gamma_star,
        dim_multiplier: r.dim,
        dim_gamma_c1_q: r.dim_gamma_c1_q,
        level: r.level,
        stabilized: r.stabilized,
        exact: r.exact,
    })
}

/// The map `M(Q) -> M(Q/N)` built from one presentation of `Q`.
#[derive(Clone, Debug)]
pub struct InducedMap<F: Scalar> {
    pub c: usize,
    pub level: usize,
    /// Columns are images of the basis of `M(Q)` in coordinates of `M(Q/N)`.
    pub matrix: Mat<F>,
    pub dim_source: usize,
    pub dim_target: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    /// `dim (R ∩ gamma(F, S)) / gamma(F, R)`, computed separately from the rank.
    pub kernel_term_dim: usize,
    /// `dim gamma(F, S) / gamma(F, R)`.
    pub dim_gamma_fs_over_fr: usize,
    /// `dim gamma(F) / gamma(F, R)`.
    pub dim_gamma_star: usize,
}

impl<F: Scalar> InducedMap<F> {
    pub fn is_injective(&self) -> bool {
        self.kernel_dim == 0
    }
}

/// Smallest level at which values are exact for `q` and `c`.
pub fn exact_level<F: Scalar>(q: &Algebra<F>, c: usize) -> Result<usize> {
    Ok((nilpotency_class(q)? + c).max(1))
}

/// `M(Q) -> M(Q/N)` at `level` (default `k + c`), minimal presentation.
pub fn induced_multiplier_map<F: Scalar>(
    q: &Arc<Algebra<F>>,
    n: &Ideal<F>,
    c: usize,
    level: Option<usize>,
) -> Result<InducedMap<F>> {
    induced_map_with(q, n, c, level, Mode::Minimal, DEFAULT_DIM_CAP)
}

pub fn induced_map_with<F: Scalar>(
    q: &Arc<Algebra<F>>,
    n: &Ideal<F>,
    c: usize,
    level: Option<usize>,
    mode: Mode,
    cap: usize,
) -> Result<InducedMap<F>> {
    if c == 0 {
        return Err(Error::InvalidArgument("c must be at least 1".into()));
    }
    if !n.two_sided || !q.is_two_sided_ideal(&n.space) {
        return Err(Error::InvalidArgument("N must be a two-sided ideal".into()));
    }
    let m = match level {
        Some(m) => m,
        None => exact_level(q, c)?,
    };
    let data = level_data(q, c, m, mode, cap)?;
    let f = data.presentation.algebra().clone();
    let s = data.presentation.preimage(&n.space)?;
    if !data.presentation.kernel.is_subspace_of(&s) {
        return Err(Error::Internal(
            "R is not contained in the preimage of N".into(),
        ));
    }
    let rel_s = relative_gamma(&f, &s, c)?;
    let meet_s = s.intersect(&data.gamma)?;
    if !data.relative.is_subspace_of(&rel_s) || !rel_s.is_subspace_of(&meet_s) {
        return Err(Error::Internal(
            "relative Lie-commutators are not nested".into(),
        ));
    }
    let source = data.multiplier_quotient()?;
    let target = meet_s.quotient(&rel_s)?;
    let columns = source
        .reps()
        .iter()
        .map(|r| target.project(r))
        .collect::<Result<Vec<_>>>()?;
    let rank = Subspace::span(target.dim(), &columns)?.dim();
    let kernel_term_dim = data.presentation.kernel.intersect(&rel_s)?.dim() - data.relative.dim();
    let im = InducedMap {
        c,
        level: m,
        matrix: Mat::from_columns(target.dim(), &columns),
        dim_source: source.dim(),
        dim_target: target.dim(),
        rank,
        kernel_dim: source.dim() - rank,
        kernel_term_dim,
        dim_gamma_fs_over_fr: rel_s.dim() - data.relative.dim(),
        dim_gamma_star: data.dim_gamma_star(),
    };
    if im.kernel_dim != im.kernel_term_dim {
        return Err(Error::Agreement(format!(
            "kernel of the induced map has dimension {} but (R ∩ gamma(F,S))/gamma(F,R) has dimension {}",
            im.kernel_dim, im.kernel_term_dim
        )));
    }
    Ok(im)
}

/// One named relation with both sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub name: String,
    pub lhs: i64,
    pub rhs: i64,
    /// `"="` or `"<="`.
    pub op: String,
    pub holds: bool,
}

impl Relation {
    fn eq(name: &str, lhs: usize, rhs: usize) -> Self {
        Self {
            name: name.into(),
            lhs: lhs as i64,
            rhs: rhs as i64,
            op: "=".into(),
            holds: lhs == rhs,
        }
    }

    fn le(name: &str, lhs: usize, rhs: usize) -> Self {
        Self {
            name: name.into(),
            lhs: lhs as i64,
            rhs: rhs as i64,
            op: "<=".into(),
            holds: lhs <= rhs,
        }
    }
}

/// Dimension table of the four-term exact sequence
/// `0 -> (R ∩ gamma(F,S))/gamma(F,R) -> M(Q) -> M(Q/N) -> (N ∩ gamma(Q))/gamma(Q,N) -> 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FourTermReport {
    pub c: usize,
    pub level: usize,
    pub term_kernel: usize,
    pub dim_m_q: usize,
    pub dim_m_quotient: usize,
    pub term_cokernel: usize,
    pub rank: usize,
    pub dim_n: usize,
    pub dim_n_cap_gamma_q: usize,
    pub dim_gamma_q_n: usize,
    pub dim_gamma_q: usize,
    pub dim_q_lie: usize,
    pub n_is_central: bool,
    pub relations: Vec<Relation>,
}

impl FourTermReport {
    pub fn holds(&self) -> bool {
        self.relations.iter().all(|r| r.holds)
    }

    pub fn table(&self) -> String {
        let mut s = format!(
            "level {}, c = {}: terms [{}, {}, {}, {}], rank {}\n",
            self.level,
            self.c,
            self.term_kernel,
            self.dim_m_q,
            self.dim_m_quotient,
            self.term_cokernel,
            self.rank
        );
        for r in &self.relations {
            s.push_str(&format!(
                "  {:<32} {} {} {}  {}\n",
                r.name,
                r.lhs,
                r.op,
                r.rhs,
                if r.holds { "ok" } else { "FAIL" }
            ));
        }
        s
    }
}

/// Computes the four terms and every dimension relation between them.
pub fn four_term_check<F: Scalar>(
    q: &Arc<Algebra<F>>,
    n: &Ideal<F>,
    c: usize,
    level: Option<usize>,
) -> Result<FourTermReport> {
    four_term_check_with(q, n, c, level, Mode::Minimal, DEFAULT_DIM_CAP)
}

pub fn four_term_check_with<F: Scalar>(
    q: &Arc<Algebra<F>>,
    n: &Ideal<F>,
    c: usize,
    level: Option<usize>,
    mode: Mode,
    cap: usize,
) -> Result<FourTermReport> {
    let im = induced_map_with(q, n, c, level, mode, cap)?;
    let full = Subspace::full(q.dim());
    let gq = relative_gamma(q, &full, c)?;
    let gqn = relative_gamma(q, &n.space, c)?;
    let n_cap = n.space.intersect(&gq)?;
    let term_cokernel = n_cap.dim() - gqn.dim();
    let dim_q_lie = q.dim() - ann(q)?.dim();
    let n_is_central = gqn.is_zero();

    let (t1, t2, t3, t4) = (
        im.kernel_term_dim,
        im.dim_source,
        im.dim_target,
        term_cokernel,
    );
    let mut relations = vec![
        Relation::eq("exactness at M(Q)", t2 - im.rank, t1),
        Relation::eq("exactness at M(Q/N)", t3 - im.rank, t4),
        Relation::eq("alternating sum", t1 + t3, t2 + t4),
        Relation::le("(b) M(Q/N) bound", t3, t2 + t4),
        Relation::eq("(c) with gamma(Q,N)", t2 + n_cap.dim(), t3 + gqn.dim() + t1),
        Relation::eq(
            "(d) with gamma(F,S)/gamma(F,R)",
            t2 + n_cap.dim(),
            t3 + im.dim_gamma_fs_over_fr,
        ),
        Relation::eq("(e) gamma* splitting", im.dim_gamma_star, t2 + gq.dim()),
    ];
    if t2 == 0 {
        relations.push(Relation::eq("(f) M(Q) = 0", t3, t4));
    }
    if n_is_central {
        let bound = n.dim() * dim_q_lie.pow(c as u32);
        relations.push(Relation::le(
            "(g) central bound",
            t2 + n_cap.dim(),
            t3 + bound,
        ));
    }
    record_sum_identity(relations[6].holds);
    let report = FourTermReport {
        c,
        level: im.level,
        term_kernel: t1,
        dim_m_q: t2,
        dim_m_quotient: t3,
        term_cokernel: t4,
        rank: im.rank,
        dim_n: n.dim(),
        dim_n_cap_gamma_q: n_cap.dim(),
        dim_gamma_q_n: gqn.dim(),
        dim_gamma_q: gq.dim(),
        dim_q_lie,
        n_is_central,
        relations,
    };
    if !report.holds() {
        return Err(Error::Assertion(format!(
            "four-term relations fail\n{}",
            report.table()
        )));
    }
    Ok(report)
}

/// `Z*(Q)` sweep result.
#[derive(Clone, Debug)]
pub struct ZStarReport<F: Scalar> {
    pub c: usize,
    pub subspace: Subspace<F>,
    pub level: usize,
    pub stabilized: bool,
    pub exact: bool,
    pub per_level_dims: Vec<(usize, usize)>,
}

/// `Z*(Q)` at one level: the image of `zeta_c^Lie(F / Y)` in `Q`.
pub fn z_star_at_level<F: Scalar>(
    q: &Arc<Algebra<F>>,
    c: usize,
    m: usize,
    mode: Mode,
    cap: usize,
) -> Result<Subspace<F>> {
    let data = level_data(q, c, m, mode, cap)?;
    let f = data.presentation.algebra().clone();
    let y = f.ideal(data.relative.clone())?;
    let (w, proj) = f.quotient(&y)?;
    let zeta = upper_lie_term(&w, c)?;
    let lifts: Vec<SparseVec<F>> = {
        let qd = Subspace::full(f.dim()).quotient(&data.relative)?;
        zeta.basis().iter().map(|z| qd.lift(z)).collect()
    };
    debug_assert!(lifts
        .iter()
        .zip(zeta.basis())
        .all(|(l, z)| &proj.apply(l) == z));
    Subspace::span_owned(
        q.dim(),
        lifts.iter().map(|l| data.presentation.rho.apply(l)),
    )
}

/// `Z*(Q)` with stabilization sweep and post-assertions
/// `Z* ⊆ zeta_c^Lie(Q)` and `Z*(Q / Z*) = 0`.
pub fn z_star<F: Scalar>(
    q: &Arc<Algebra<F>>,
    c: usize,
    policy: &LevelPolicy,
) -> Result<ZStarReport<F>> {
    let r = z_star_sweep(q, c, policy)?;
    let zeta = upper_lie_term(q, c)?;
    if !r.subspace.is_subspace_of(&zeta) {
        return Err(Error::Assertion(
            "Z*(Q) is not contained in zeta_c^Lie(Q)".into(),
        ));
    }
    if !r.subspace.is_zero() {
        let z = q.ideal(r.subspace.clone())?;
        let (quot, _) = q.quotient(&z)?;
        let inner = z_star_sweep(&quot, c, policy)?;
        if !inner.subspace.is_zero() {
            return Err(Error::Assertion("Z*(Q / Z*(Q)) is not zero".into()));
        }
    }
    Ok(r)
}

fn z_star_sweep<F: Scalar>(
    q: &Arc<Algebra<F>>,
    c: usize,
    policy: &LevelPolicy,
) -> Result<ZStarReport<F>> {
    if c == 0 {
        return Err(Error::InvalidArgument("c must be at least 1".into()));
    }
    let k = nilpotency_class(q)?;
    let d = generator_images(q, policy.mode)?.len();
    let m_start = policy.m_start.unwrap_or(k + c).max(k).max(1);
    let m_max = policy.m_max.unwrap_or(k + c + 3).max(m_start);
    let mut per_level = Vec::new();
    let mut last: Option<(usize, Subspace<F>)> = None;
    let mut stabilized = false;
    for m in m_start..=m_max {
        if truncation_dim(d, m).is_none_or(|n| n > policy.cap) {
            break;
        }
        let z = z_star_at_level(q, c, m, policy.mode, policy.cap)?;
        per_level.push((m, z.dim()));
        if let Some((_, prev)) = &last {
            if !z.is_subspace_of(prev) {
                return Err(Error::Assertion(format!(
                    "Z* at level {m} is not contained in the previous level"
                )));
            }
            if prev == &z {
                stabilized = true;
            }
        }
        last = Some((m, z));
        if stabilized {
            break;
        }
    }
    let Some((level, subspace)) = last else {
        return Err(Error::TooLarge {
            dim: truncation_dim(d, m_start).unwrap_or(usize::MAX),
            cap: policy.cap,
        });
    };
    Ok(ZStarReport {
        c,
        subspace,
        level,
        stabilized,
        exact: level >= k + c,
        per_level_dims: per_level,
    })
}

/// `Z*(Q) = 0`.
pub fn is_c_lie_capable<F: Scalar>(
    q: &Arc<Algebra<F>>,
    c: usize,
    policy: &LevelPolicy,
) -> Result<bool> {
    Ok(z_star(q, c, policy)?.subspace.is_zero())
}

/// Per-vector capability test on one basis vector of `zeta_c^Lie(Q)` or `Z*`.
#[derive(Clone, Debug)]
pub struct VectorTest<F: Scalar> {
    pub vector: SparseVec<F>,
    /// The induced map `M(Q) -> M(Q / <x>)` is injective.
    pub injective: bool,
    pub in_z_star: bool,
}

/// Cross-check of `Z*` against injectivity of `M(Q) -> M(Q/<x>)`.
#[derive(Clone, Debug)]
pub struct CapabilityCheck<F: Scalar> {
    pub c: usize,
    pub level: usize,
    pub stabilized: bool,
    pub z_star: Subspace<F>,
    pub zeta_c: Subspace<F>,
    pub tests: Vec<VectorTest<F>>,
    pub capable: bool,
}

impl<F: Scalar> CapabilityCheck<F> {
    /// Every tested vector is injective exactly when it lies in `Z*`.
    pub fn agrees(&self) -> bool {
        self.tests.iter().all(|t| t.injective == t.in_z_star)
    }
}

/// Runs both capability routes; errors with `AGREEMENT_FAIL` if they differ.
pub fn capability_cross_check<F: Scalar>(
    q: &Arc<Algebra<F>>,
    c: usize,
    policy: &LevelPolicy,
) -> Result<CapabilityCheck<F>> {
    let zs = z_star(q, c, policy)?;
    let zeta = upper_lie_term(q, c)?;
    let mut candidates: Vec<SparseVec<F>> = zeta.basis().to_vec();
    for v in zs.subspace.basis() {
        if !candidates.contains(v) {
            candidates.push(v.clone());
        }
    }
    let mut tests = Vec::new();
    for x in candidates {
        let n = q.ideal_closure([&x])?;
        let im = induced_map_with(q, &n, c, None, policy.mode, policy.cap)?;
        tests.push(VectorTest {
            injective: im.is_injective(),
            in_z_star: zs.subspace.contains(&x),
            vector: x,
        });
    }
    let check = CapabilityCheck {
        c,
        level: zs.level,
        stabilized: zs.stabilized,
        capable: zs.subspace.is_zero(),
        z_star: zs.subspace,
        zeta_c: zeta,
        tests,
    };
    if !check.agrees() {
        return Err(Error::Agreement(
            "per-vector injectivity disagrees with Z*".into(),
        ));
    }
    Ok(check)
}
