//! Coordinate-free exact predicates over squared-distance matrices.
//!
//! A point configuration is represented by its matrix of exact squared
//! distances plus a claimed ambient dimension; every predicate needed here
//! (affine degeneracy, cosphericity, circumradius, embeddability) is a
//! rational determinant of squared distances, so no coordinates and no
//! irrational numbers ever appear.
//!
//! Sign conventions are pinned by tests: for `k` affinely independent
//! points realizable in Euclidean space, `(-1)^k * cm_det > 0`, and the
//! squared circumradius is `-det(D) / (2 * cm_det)` with `D` the plain
//! squared-distance matrix.

use crate::det::{det_is_zero, det_rational, psd_rank, PsdOutcome};
use crate::rational::{format_rational, Rational};
use num_traits::{Signed, Zero};
use std::fmt;

/// Errors from malformed inputs to the exact predicates.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("point index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("duplicate point index {index}")]
    DuplicateIndex { index: usize },
    #[error("subset of {got} points where {expected} required")]
    BadSubsetSize { expected: usize, got: usize },
    #[error("affinely degenerate point set has no circumsphere")]
    DegenerateSimplex,
    #[error("cosphericity undefined: contained subset {0:?} is affinely degenerate")]
    PrerequisiteViolated(Vec<usize>),
    #[error("squared-distance matrix is not square")]
    NotSquare,
    #[error("matrix entry ({i},{j}) breaks symmetry")]
    NotSymmetric { i: usize, j: usize },
    #[error("diagonal entry ({i},{i}) must be zero")]
    NonzeroDiagonal { i: usize },
    #[error("squared distance ({i},{j}) is negative")]
    NegativeEntry { i: usize, j: usize },
    #[error("ambient dimension must be at least 1")]
    ZeroDimension,
    #[error("point {i} has {got} coordinates, expected {expected}")]
    BadCoordinateLength { i: usize, expected: usize, got: usize },
    #[error("points {i} and {j} coincide")]
    CoincidentPoints { i: usize, j: usize },
}

/// Symmetric matrix of exact squared distances plus a claimed ambient
/// dimension. The coordinate-free representation of a point configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqDistConfig {
    n: usize,
    dim: usize,
    m: Vec<Rational>, // row-major n*n
}

impl SqDistConfig {
    /// Build from explicit rows. Validates shape: square, symmetric, zero
    /// diagonal, no negative entries. Zero off-diagonal entries are accepted
    /// here and reported as `CoincidentPoints` by the verifiers.
    pub fn new(dim: usize, rows: Vec<Vec<Rational>>) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::ZeroDimension);
        }
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(GeometryError::NotSquare);
        }
        for i in 0..n {
            if !rows[i][i].is_zero() {
                return Err(GeometryError::NonzeroDiagonal { i });
            }
            for j in i + 1..n {
                if rows[i][j] != rows[j][i] {
                    return Err(GeometryError::NotSymmetric { i, j });
                }
                if rows[i][j].is_negative() {
                    return Err(GeometryError::NegativeEntry { i, j });
                }
            }
        }
        let m = rows.into_iter().flatten().collect();
        Ok(SqDistConfig { n, dim, m })
    }

    /// Build the matrix from a generator over unordered pairs `i < j`.
    pub fn from_fn<F>(dim: usize, n: usize, mut sq: F) -> Result<Self, GeometryError>
    where
        F: FnMut(usize, usize) -> Rational,
    {
        let mut rows = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = sq(i, j);
                rows[i][j] = v.clone();
                rows[j][i] = v;
            }
        }
        Self::new(dim, rows)
    }

    /// Exact squared-distance matrix of explicit rational coordinates.
    pub fn from_points(dim: usize, points: &[Vec<Rational>]) -> Result<Self, GeometryError> {
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(GeometryError::BadCoordinateLength {
                    i,
                    expected: dim,
                    got: p.len(),
                });
            }
        }
        Self::from_fn(dim, points.len(), |i, j| {
            points[i]
                .iter()
                .zip(&points[j])
                .map(|(a, b)| {
                    let d = a - b;
                    &d * &d
                })
                .sum()
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Exact squared distance between points `i` and `j`.
    pub fn sq_dist(&self, i: usize, j: usize) -> &Rational {
        &self.m[i * self.n + j]
    }

    /// Rows of the matrix, for serialization.
    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.n)
            .map(|i| self.m[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    /// Same distances with every entry multiplied by `factor` (> 0).
    pub fn scaled(&self, factor: &Rational) -> SqDistConfig {
        SqDistConfig {
            n: self.n,
            dim: self.dim,
            m: self.m.iter().map(|e| e * factor).collect(),
        }
    }

    /// Grow by one point at the given squared distances from the existing
    /// points, with a new claimed dimension.
    pub(crate) fn extended(&self, new_dists: &[Rational], new_dim: usize) -> SqDistConfig {
        assert_eq!(new_dists.len(), self.n);
        let n = self.n + 1;
        let mut m = vec![Rational::zero(); n * n];
        for i in 0..self.n {
            for j in 0..self.n {
                m[i * n + j] = self.m[i * self.n + j].clone();
            }
            m[i * n + self.n] = new_dists[i].clone();
            m[self.n * n + i] = new_dists[i].clone();
        }
        SqDistConfig { n, dim: new_dim, m }
    }

    /// True if the exact value `v` occurs as an off-diagonal entry.
    pub fn has_distance(&self, v: &Rational) -> bool {
        (0..self.n).any(|i| (i + 1..self.n).any(|j| self.sq_dist(i, j) == v))
    }
}

/// Multiset of (squared-distance value, multiplicity), sorted ascending by
/// value. The object the crescent property is defined on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    entries: Vec<(Rational, usize)>,
}

impl Spectrum {
    pub fn entries(&self) -> &[(Rational, usize)] {
        &self.entries
    }

    /// Multiplicities in ascending value order.
    pub fn counts(&self) -> Vec<usize> {
        self.entries.iter().map(|(_, c)| *c).collect()
    }

    /// Total number of pairs covered; equals C(n,2) for an n-point source.
    pub fn total_pairs(&self) -> usize {
        self.entries.iter().map(|(_, c)| c).sum()
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (v, c)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({}, {})", format_rational(v), c)?;
        }
        write!(f, "]")
    }
}

/// Why a configuration fails verification, with a witness subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    CoincidentPoints,
    NotEmbeddable,
    HyperplaneDegeneracy,
    Cosphericity,
    BadSpectrum,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::CoincidentPoints => "CoincidentPoints",
            ViolationKind::NotEmbeddable => "NotEmbeddable",
            ViolationKind::HyperplaneDegeneracy => "HyperplaneDegeneracy",
            ViolationKind::Cosphericity => "Cosphericity",
            ViolationKind::BadSpectrum => "BadSpectrum",
        };
        f.write_str(s)
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, witness {:?}", self.kind, self.witness)
    }
}

fn check_subset(config: &SqDistConfig, points: &[usize]) -> Result<(), GeometryError> {
    let n = config.n();
    for (pos, &p) in points.iter().enumerate() {
        if p >= n {
            return Err(GeometryError::IndexOutOfRange { index: p, n });
        }
        if points[..pos].contains(&p) {
            return Err(GeometryError::DuplicateIndex { index: p });
        }
    }
    Ok(())
}

fn cm_matrix(config: &SqDistConfig, points: &[usize]) -> Vec<Vec<Rational>> {
    let k = points.len();
    let mut m = vec![vec![Rational::zero(); k + 1]; k + 1];
    for j in 1..=k {
        m[0][j] = Rational::from_integer(1.into());
        m[j][0] = Rational::from_integer(1.into());
    }
    for (a, &pa) in points.iter().enumerate() {
        for (b, &pb) in points.iter().enumerate() {
            if a != b {
                m[a + 1][b + 1] = config.sq_dist(pa, pb).clone();
            }
        }
    }
    m
}

fn plain_matrix(config: &SqDistConfig, points: &[usize]) -> Vec<Vec<Rational>> {
    points
        .iter()
        .map(|&pa| {
            points
                .iter()
                .map(|&pb| {
                    if pa == pb {
                        Rational::zero()
                    } else {
                        config.sq_dist(pa, pb).clone()
                    }
                })
                .collect()
        })
        .collect()
}

/// Cayley-Menger determinant of a point subset.
///
/// For `k` chosen points this is the determinant of the (k+1)x(k+1) bordered
/// matrix with a zero corner, a border of ones, and the squared distances in
/// the interior. It vanishes exactly when the points are affinely dependent;
/// for a realizable nondegenerate set the sign is `(-1)^k`.
pub fn cm_det(config: &SqDistConfig, points: &[usize]) -> Result<Rational, GeometryError> {
    check_subset(config, points)?;
    let k = points.len();
    if k < 2 {
        return Err(GeometryError::BadSubsetSize { expected: 2, got: k });
    }
    Ok(det_rational(&cm_matrix(config, points)))
}

/// Exact test `cm_det == 0` (affine dependence), taking the modular
/// nonzero-certification fast path.
pub(crate) fn cm_is_zero(config: &SqDistConfig, points: &[usize]) -> Result<bool, GeometryError> {
    check_subset(config, points)?;
    let k = points.len();
    if k < 2 {
        return Err(GeometryError::BadSubsetSize { expected: 2, got: k });
    }
    Ok(det_is_zero(&cm_matrix(config, points)))
}

/// Exact squared circumradius of an affinely independent configuration:
/// the unique hypersphere through all points within their affine span.
///
/// `R^2 = -det(D) / (2 * cm_det)` with `D` the plain squared-distance matrix.
pub fn circumradius_sq(config: &SqDistConfig) -> Result<Rational, GeometryError> {
    let all: Vec<usize> = (0..config.n()).collect();
    let cm = cm_det(config, &all)?;
    if cm.is_zero() {
        return Err(GeometryError::DegenerateSimplex);
    }
    let d = det_rational(&plain_matrix(config, &all));
    Ok(-d / (cm * Rational::from_integer(2.into())))
}

/// Whether `dim + 2` chosen points lie on a common hypersphere of `R^dim`.
///
/// Criterion: with no contained (dim+1)-subset affinely degenerate, the
/// points are cospherical iff the plain squared-distance determinant of the
/// subset vanishes.
pub fn cospherical(config: &SqDistConfig, points: &[usize]) -> Result<bool, GeometryError> {
    check_subset(config, points)?;
    let want = config.dim() + 2;
    if points.len() != want {
        return Err(GeometryError::BadSubsetSize {
            expected: want,
            got: points.len(),
        });
    }
    // Caller contract: hyperplane degeneracies are screened first.
    for omit in 0..points.len() {
        let sub: Vec<usize> = points
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != omit)
            .map(|(_, &p)| p)
            .collect();
        if cm_is_zero(config, &sub)? {
            return Err(GeometryError::PrerequisiteViolated(sub));
        }
    }
    Ok(det_is_zero(&plain_matrix(config, points)))
}

/// Anchored Gram matrix: `G[i][j] = (d(0,i)^2 + d(0,j)^2 - d(i,j)^2) / 2`
/// over points `1..n`, with point 0 as the origin.
pub(crate) fn anchored_gram(config: &SqDistConfig) -> Vec<Vec<Rational>> {
    let n = config.n();
    let two = Rational::from_integer(2.into());
    (1..n)
        .map(|i| {
            (1..n)
                .map(|j| {
                    (config.sq_dist(0, i) + config.sq_dist(0, j) - config.sq_dist(i, j)) / &two
                })
                .collect()
        })
        .collect()
}

/// Whether some point set in `R^d` realizes the matrix exactly.
///
/// Classical criterion: the anchored Gram matrix is positive semidefinite
/// with rank at most `d`. Total over well-formed configurations.
pub fn embeddable_in(config: &SqDistConfig, d: usize) -> bool {
    if config.n() <= 1 {
        return true;
    }
    match psd_rank(&anchored_gram(config)) {
        PsdOutcome::Psd { rank } => rank <= d,
        PsdOutcome::Indefinite => false,
    }
}

/// Exact multiset of off-diagonal values with multiplicities, ascending.
pub fn spectrum(config: &SqDistConfig) -> Spectrum {
    let mut map: std::collections::BTreeMap<Rational, usize> = Default::default();
    for i in 0..config.n() {
        for j in i + 1..config.n() {
            *map.entry(config.sq_dist(i, j).clone()).or_insert(0) += 1;
        }
    }
    Spectrum {
        entries: map.into_iter().collect(),
    }
}

/// True iff the multiset of multiplicities is exactly `{1, 2, ..., n-1}`.
pub fn is_crescent_spectrum(s: &Spectrum, n: usize) -> bool {
    let mut counts = s.counts();
    counts.sort_unstable();
    counts.len() + 1 == n && counts.iter().enumerate().all(|(i, &c)| c == i + 1)
}

/// Lexicographic k-subset odometer over `0..n`.
struct Combinations {
    n: usize,
    k: usize,
    cur: Vec<usize>,
    started: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            k,
            cur: (0..k).collect(),
            started: false,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.k > self.n {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.cur.clone());
        }
        // Rightmost index that can still advance.
        let mut i = self.k;
        while i > 0 {
            i -= 1;
            if self.cur[i] + (self.k - i) < self.n {
                self.cur[i] += 1;
                for j in i + 1..self.k {
                    self.cur[j] = self.cur[j - 1] + 1;
                }
                return Some(self.cur.clone());
            }
        }
        None
    }
}

fn scan_violations(config: &SqDistConfig, exhaustive: bool) -> Vec<Violation> {
    let n = config.n();
    let d = config.dim();
    let mut out = Vec::new();

    // Coincident points are rejected before any other check.
    for i in 0..n {
        for j in i + 1..n {
            if config.sq_dist(i, j).is_zero() {
                out.push(Violation {
                    kind: ViolationKind::CoincidentPoints,
                    witness: vec![i, j],
                });
                if !exhaustive {
                    return out;
                }
            }
        }
    }
    if !out.is_empty() {
        // Degenerate input: later predicates assume distinct points.
        return out;
    }

    if !embeddable_in(config, d) {
        out.push(Violation {
            kind: ViolationKind::NotEmbeddable,
            witness: (0..n).collect(),
        });
        return out;
    }

    let mut hyperplane_clean = true;
    if n > d {
        for subset in Combinations::new(n, d + 1) {
            if cm_is_zero(config, &subset).expect("valid subset") {
                hyperplane_clean = false;
                out.push(Violation {
                    kind: ViolationKind::HyperplaneDegeneracy,
                    witness: subset,
                });
                if !exhaustive {
                    return out;
                }
            }
        }
    }

    if n >= d + 2 {
        for subset in Combinations::new(n, d + 2) {
            match cospherical(config, &subset) {
                Ok(true) => {
                    out.push(Violation {
                        kind: ViolationKind::Cosphericity,
                        witness: subset,
                    });
                    if !exhaustive {
                        return out;
                    }
                }
                Ok(false) => {}
                Err(GeometryError::PrerequisiteViolated(_)) => {
                    // Already reported as a hyperplane degeneracy.
                    debug_assert!(!hyperplane_clean);
                }
                Err(e) => unreachable!("subset generation is valid: {e}"),
            }
        }
    }
    out
}

/// General-position check: no `d+1` points on a common hyperplane and no
/// `d+2` on a common hypersphere. Returns the lexicographically first
/// violation; coincident points and non-embeddability are reported first.
pub fn general_position(config: &SqDistConfig) -> Result<(), Violation> {
    match scan_violations(config, false).into_iter().next() {
        None => Ok(()),
        Some(v) => Err(v),
    }
}

/// Exhaustive variant of [`general_position`]: every violation, in scan order.
pub fn general_position_all(config: &SqDistConfig) -> Vec<Violation> {
    scan_violations(config, true)
}

/// Full crescent verification: embeddable, in general position, and the
/// multiplicities are exactly `{1, ..., n-1}`.
pub fn verify_crescent(config: &SqDistConfig) -> Result<(), Violation> {
    general_position(config)?;
    if !is_crescent_spectrum(&spectrum(config), config.n()) {
        return Err(Violation {
            kind: ViolationKind::BadSpectrum,
            witness: Vec::new(),
        });
    }
    Ok(())
}
