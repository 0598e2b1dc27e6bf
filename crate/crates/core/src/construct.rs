//! Builds crescent configurations of any size by repeated apex-point
//! addition followed by a circumcenter completion.
//!
//! Growth step: a set of `m` affinely independent points in `R^(m-1)` lies
//! on a unique hypersphere within its span; a new point on the line through
//! that sphere's center perpendicular to the span is equidistant from all
//! old points, at squared distance `R^2 + delta` for any `delta > 0`. The
//! final step adds the circumcenter itself, contributing one distance `m`
//! times without raising the dimension.
//!
//! Free choices (the base triangle's second side and each apex offset) are
//! drawn from a fixed schedule and re-drawn on any exact failure: a distance
//! collision or a verification violation excludes finitely many schedule
//! values, so bounded retry converts genericity into determinism.

use crate::geometry::{
    circumradius_sq, cm_is_zero, general_position, is_crescent_spectrum, spectrum,
    verify_crescent, GeometryError, SqDistConfig,
};
use crate::rational::{format_rational, rat, ratio, Rational};
use num_traits::Signed;

/// One apex placement: the squared height above the current circumcenter.
/// The new squared distance to every existing point is `R^2 + delta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApexChoice {
    pub delta: Rational,
}

/// Reproducibility record: replaying a trace rebuilds the same matrix
/// bit for bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionTrace {
    /// Target point count.
    pub n: usize,
    /// Squared side lengths (s, t) of the starting isosceles triangle.
    pub base: (Rational, Rational),
    /// Apex offsets actually used, in placement order.
    pub apexes: Vec<ApexChoice>,
    /// Total failed attempts across all choice points.
    pub retries: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructError {
    #[error("base triangle is degenerate or equilateral (s={0}, t={1})")]
    DegenerateTriangle(String, String),
    #[error("squared distance {0} already present in the configuration")]
    DistanceCollision(String),
    #[error("apex offset must be positive, got {0}")]
    NonPositiveDelta(String),
    #[error("configuration must be m affinely independent points with dim = m-1")]
    DimensionMismatch,
    #[error("point count must be at least 3, got {0}")]
    PointCountTooSmall(usize),
    #[error("retry budget exhausted after {retries} failed attempts")]
    RetryBudgetExhausted {
        retries: u64,
        trace: Box<ConstructionTrace>,
    },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Where apex offsets (and replacement base sides) come from.
#[derive(Debug, Clone)]
pub enum DeltaSchedule {
    /// 1, 1/2, 2, 1/3, 3, 1/4, 4, ... (unbounded).
    Standard,
    /// A fixed list; exhausting it ends the retry budget early.
    Explicit(Vec<Rational>),
}

impl DeltaSchedule {
    pub fn get(&self, i: usize) -> Option<Rational> {
        match self {
            DeltaSchedule::Standard => Some(if i == 0 {
                rat(1)
            } else if i % 2 == 1 {
                ratio(1, ((i + 3) / 2) as i64)
            } else {
                rat(((i + 2) / 2) as i64)
            }),
            DeltaSchedule::Explicit(v) => v.get(i).cloned(),
        }
    }
}

/// Seed parameters for [`construct_crescent`].
#[derive(Debug, Clone)]
pub struct ConstructParams {
    /// Squared sides (s, t) of the first base triangle tried.
    pub base: (Rational, Rational),
    pub schedule: DeltaSchedule,
    /// Maximum failed attempts per choice point.
    pub retry_budget: usize,
}

impl Default for ConstructParams {
    fn default() -> Self {
        ConstructParams {
            base: (rat(1), rat(2)),
            schedule: DeltaSchedule::Standard,
            retry_budget: 64,
        }
    }
}

/// Isosceles-but-not-equilateral starting triangle: squared sides
/// `{s, s, t}`, claimed dimension 2.
///
/// Nondegeneracy needs `0 < t < 4s` (triangle inequality, strict) and the
/// crescent spectrum needs `t != s`.
pub fn base_config(s: &Rational, t: &Rational) -> Result<SqDistConfig, ConstructError> {
    let degenerate = || {
        ConstructError::DegenerateTriangle(format_rational(s), format_rational(t))
    };
    if !s.is_positive() || !t.is_positive() || s == t || *t >= rat(4) * s {
        return Err(degenerate());
    }
    Ok(SqDistConfig::from_fn(2, 3, |i, j| match (i, j) {
        (0, 1) | (0, 2) => s.clone(),
        _ => t.clone(),
    })?)
}

/// Add a point equidistant from every existing point, one dimension up.
///
/// The new squared distance is `circumradius_sq(config) + choice.delta`;
/// it must not already occur. The result has `m+1` points, claimed
/// dimension `m`, and gains one spectrum value with multiplicity `m`.
pub fn apex_extend(
    config: &SqDistConfig,
    choice: &ApexChoice,
) -> Result<SqDistConfig, ConstructError> {
    if !choice.delta.is_positive() {
        return Err(ConstructError::NonPositiveDelta(format_rational(
            &choice.delta,
        )));
    }
    let m = config.n();
    if config.dim() != m - 1 {
        return Err(ConstructError::DimensionMismatch);
    }
    let r_sq = circumradius_sq(config)?;
    let s = r_sq + &choice.delta;
    if config.has_distance(&s) {
        return Err(ConstructError::DistanceCollision(format_rational(&s)));
    }
    let next = config.extended(&vec![s; m], m);
    // Contractual post-check: the grown set is affinely independent.
    let all: Vec<usize> = (0..next.n()).collect();
    if cm_is_zero(&next, &all)? {
        return Err(ConstructError::DimensionMismatch);
    }
    Ok(next)
}

/// Complete a configuration with the center of its circumsphere.
///
/// The center lies in the affine span, so the claimed dimension stays at
/// `m - 1` while the point count reaches `m + 1`; the new value `R^2`
/// occurs exactly `m` times.
pub fn add_circumcenter(config: &SqDistConfig) -> Result<SqDistConfig, ConstructError> {
    let m = config.n();
    if config.dim() != m - 1 {
        return Err(ConstructError::DimensionMismatch);
    }
    let r_sq = circumradius_sq(config)?;
    if config.has_distance(&r_sq) {
        return Err(ConstructError::DistanceCollision(format_rational(&r_sq)));
    }
    Ok(config.extended(&vec![r_sq; m], config.dim()))
}

/// The 3-point crescent on a line: squared distances (1, 1, 4) in `R^1`.
fn line_config() -> SqDistConfig {
    SqDistConfig::from_fn(1, 3, |i, j| if (i, j) == (0, 2) { rat(4) } else { rat(1) })
        .expect("static config")
}

/// An intermediate m-point stage must itself be a crescent configuration
/// at its claimed dimension.
fn stage_is_valid(config: &SqDistConfig) -> bool {
    general_position(config).is_ok() && is_crescent_spectrum(&spectrum(config), config.n())
}

/// A growth stage: the configuration together with its exact squared
/// circumradius, maintained by recurrence. With the circumcenter of the
/// current stage at squared radius `R^2` and the next apex at squared
/// height `delta` above it, the grown set's center stays on the same
/// perpendicular line and
/// `R_new^2 = R^2 + (delta - R^2)^2 / (4*delta)`.
/// This tracks the determinant-based [`circumradius_sq`] value exactly
/// (the replay tests pin the two routes against each other) while keeping
/// each level to a constant number of rational operations.
#[derive(Clone)]
struct Stage {
    config: SqDistConfig,
    r_sq: Rational,
}

impl Stage {
    fn from_base(config: SqDistConfig) -> Result<Stage, ConstructError> {
        let r_sq = circumradius_sq(&config)?;
        Ok(Stage { config, r_sq })
    }

    /// Apply one apex offset; `None` on collision, degeneracy, or a stage
    /// that fails re-verification.
    fn apex(&self, delta: &Rational) -> Option<Stage> {
        if !delta.is_positive() {
            return None;
        }
        let m = self.config.n();
        let s = &self.r_sq + delta;
        if self.config.has_distance(&s) {
            return None;
        }
        let next = self.config.extended(&vec![s; m], m);
        let all: Vec<usize> = (0..next.n()).collect();
        if cm_is_zero(&next, &all).ok()? {
            return None;
        }
        if !stage_is_valid(&next) {
            return None;
        }
        let offset = delta - &self.r_sq;
        let r_sq = &self.r_sq + &offset * &offset / (rat(4) * delta);
        Some(Stage { config: next, r_sq })
    }

    /// Circumcenter completion, accepted only if it verifies as a crescent
    /// configuration. This completion check is what makes per-level retry
    /// sufficient: the hyperplane conditions the final verification needs
    /// unroll exactly into "each prefix circumcenter avoids the faces of
    /// its prefix simplex", which only the completed prefix can reveal. A
    /// right isosceles base, for example, has its circumcenter on the
    /// hypotenuse, which no later apex offset can repair; checking the
    /// completion rejects it at the level that caused it.
    fn completion(&self) -> Option<SqDistConfig> {
        if self.config.has_distance(&self.r_sq) {
            return None;
        }
        let m = self.config.n();
        let done = self
            .config
            .extended(&vec![self.r_sq.clone(); m], self.config.dim());
        verify_crescent(&done).ok()?;
        Some(done)
    }
}

/// Build an n-point crescent configuration in `R^(n-2)`.
///
/// `n = 3` is the line configuration; for `n >= 4` the base triangle is
/// grown by `n - 4` apex additions and completed with the circumcenter.
/// Each level draws its free value (the base side `t`, then one apex
/// offset per level) from the schedule until the stage and its completion
/// both verify; each failure excludes finitely many schedule values, so
/// the budget bounds work without ever revisiting earlier levels.
pub fn construct_crescent(
    n: usize,
    params: &ConstructParams,
) -> Result<(SqDistConfig, ConstructionTrace), ConstructError> {
    if n < 3 {
        return Err(ConstructError::PointCountTooSmall(n));
    }
    if n == 3 {
        let config = line_config();
        let trace = ConstructionTrace {
            n,
            base: (rat(1), rat(4)),
            apexes: Vec::new(),
            retries: 0,
        };
        debug_assert!(verify_crescent(&config).is_ok());
        return Ok((config, trace));
    }

    let s = params.base.0.clone();
    let apex_levels = n - 4;
    let mut retries: u64 = 0;
    let mut deltas: Vec<ApexChoice> = Vec::with_capacity(apex_levels);

    // Candidate base sides: the seed first, then schedule values that make
    // a valid non-equilateral isosceles triangle.
    let t_candidate = |idx: usize| -> Option<Rational> {
        if idx == 0 {
            return Some(params.base.1.clone());
        }
        let mut seen = idx - 1;
        let mut i = 0usize;
        loop {
            let v = params.schedule.get(i)?;
            i += 1;
            if v.is_positive() && v != s && v < rat(4) * &s {
                if seen == 0 {
                    return Some(v);
                }
                seen -= 1;
            }
        }
    };

    let exhausted = |retries: u64, t: &Rational, deltas: &[ApexChoice]| {
        ConstructError::RetryBudgetExhausted {
            retries,
            trace: Box::new(ConstructionTrace {
                n,
                base: (s.clone(), t.clone()),
                apexes: deltas.to_vec(),
                retries,
            }),
        }
    };

    // Level 0: the base triangle.
    let mut t_pos = 0usize;
    let (mut stage, mut completed, t) = loop {
        let t = match t_candidate(t_pos) {
            Some(t) => t,
            None => return Err(exhausted(retries, &params.base.1, &deltas)),
        };
        t_pos += 1;
        if let Ok(base) = base_config(&s, &t) {
            if stage_is_valid(&base) {
                let candidate = Stage::from_base(base)?;
                if let Some(done) = candidate.completion() {
                    break (candidate, done, t);
                }
            }
        }
        retries += 1;
        if t_pos > params.retry_budget {
            return Err(exhausted(retries, &t, &deltas));
        }
    };

    // Apex levels: each accepts the first offset whose stage and completion
    // both verify.
    for _ in 0..apex_levels {
        let mut pos = 0usize;
        let accepted = loop {
            let delta = match params.schedule.get(pos) {
                Some(d) => d,
                None => return Err(exhausted(retries, &t, &deltas)),
            };
            pos += 1;
            if let Some(next) = stage.apex(&delta) {
                if let Some(done) = next.completion() {
                    break (next, done, ApexChoice { delta });
                }
            }
            retries += 1;
            if pos > params.retry_budget {
                return Err(exhausted(retries, &t, &deltas));
            }
        };
        stage = accepted.0;
        completed = accepted.1;
        deltas.push(accepted.2);
    }

    debug_assert_eq!(completed.n(), n);
    debug_assert_eq!(completed.dim(), n - 2);
    Ok((
        completed,
        ConstructionTrace {
            n,
            base: (s.clone(), t),
            apexes: deltas,
            retries,
        },
    ))
}

/// Rebuild the exact configuration a trace records.
pub fn replay(trace: &ConstructionTrace) -> Result<SqDistConfig, ConstructError> {
    if trace.n < 3 {
        return Err(ConstructError::PointCountTooSmall(trace.n));
    }
    if trace.n == 3 {
        return Ok(line_config());
    }
    let mut config = base_config(&trace.base.0, &trace.base.1)?;
    for choice in &trace.apexes {
        config = apex_extend(&config, choice)?;
    }
    add_circumcenter(&config)
}
