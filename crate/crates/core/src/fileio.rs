//! Persistent file formats and floating-point realization.
//!
//! Configurations are stored as JSON with every rational serialized as a
//! decimal string `"p"` or `"p/q"`, never as a float, so files are exact
//! and diffable and round-trip bit for bit. Search output is one compact
//! JSON record per line.

use crate::construct::{ApexChoice, ConstructionTrace};
use crate::geometry::{anchored_gram, embeddable_in, GeometryError, SqDistConfig};
use crate::lattice::{to_exact_config, LatticePoint};
use crate::rational::{format_rational, parse_rational, rational_to_f64, ParseRationalError};
use crate::search::SearchResult;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

pub const FORMAT_VERSION: u32 = 1;

/// A configuration file: the exact matrix plus optional provenance
/// (lattice coordinates, a construction trace, float coordinates).
#[derive(Debug, Clone)]
pub struct ConfigFile {
    pub config: SqDistConfig,
    pub lattice_points: Option<Vec<LatticePoint>>,
    pub coords_float: Option<Vec<Vec<f64>>>,
    pub trace: Option<ConstructionTrace>,
}

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format_version {0}")]
    UnsupportedVersion(u32),
    #[error(transparent)]
    BadRational(#[from] ParseRationalError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("sqdist has {got} rows for declared n = {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("lattice_points do not reproduce the stored sqdist matrix")]
    LatticeMismatch,
    #[error("trace is inconsistent with the stored configuration")]
    TraceMismatch,
}

#[derive(Serialize, Deserialize)]
struct RawConfigFile {
    format_version: u32,
    n: usize,
    dimension: usize,
    sqdist: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    lattice_points: Option<Vec<[i64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    coords_float: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    trace: Option<RawTrace>,
}

#[derive(Serialize, Deserialize)]
struct RawTrace {
    n: usize,
    base: [String; 2],
    apexes: Vec<String>,
    retries: u64,
}

impl ConfigFile {
    pub fn new(config: SqDistConfig) -> Self {
        ConfigFile {
            config,
            lattice_points: None,
            coords_float: None,
            trace: None,
        }
    }

    /// Build from lattice points, keeping them alongside the exact matrix.
    pub fn from_lattice_points(points: Vec<LatticePoint>) -> Result<Self, FileError> {
        let config = to_exact_config(&points)?;
        Ok(ConfigFile {
            config,
            lattice_points: Some(points),
            coords_float: None,
            trace: None,
        })
    }

    pub fn with_trace(mut self, trace: ConstructionTrace) -> Self {
        self.trace = Some(trace);
        self
    }

    pub fn to_json(&self) -> String {
        let raw = RawConfigFile {
            format_version: FORMAT_VERSION,
            n: self.config.n(),
            dimension: self.config.dim(),
            sqdist: self
                .config
                .rows()
                .iter()
                .map(|row| row.iter().map(format_rational).collect())
                .collect(),
            lattice_points: self
                .lattice_points
                .as_ref()
                .map(|pts| pts.iter().map(|p| [p.a, p.b]).collect()),
            coords_float: self.coords_float.clone(),
            trace: self.trace.as_ref().map(|t| RawTrace {
                n: t.n,
                base: [format_rational(&t.base.0), format_rational(&t.base.1)],
                apexes: t.apexes.iter().map(|a| format_rational(&a.delta)).collect(),
                retries: t.retries,
            }),
        };
        serde_json::to_string_pretty(&raw).expect("config files always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, FileError> {
        let raw: RawConfigFile = serde_json::from_str(text)?;
        if raw.format_version != FORMAT_VERSION {
            return Err(FileError::UnsupportedVersion(raw.format_version));
        }
        if raw.sqdist.len() != raw.n {
            return Err(FileError::SizeMismatch {
                expected: raw.n,
                got: raw.sqdist.len(),
            });
        }
        let mut rows = Vec::with_capacity(raw.n);
        for row in &raw.sqdist {
            if row.len() != raw.n {
                return Err(FileError::SizeMismatch {
                    expected: raw.n,
                    got: row.len(),
                });
            }
            rows.push(
                row.iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        let config = SqDistConfig::new(raw.dimension, rows)?;

        let lattice_points = match raw.lattice_points {
            None => None,
            Some(pairs) => {
                let pts: Vec<LatticePoint> =
                    pairs.iter().map(|&[a, b]| LatticePoint::new(a, b)).collect();
                let derived = to_exact_config(&pts)?;
                // The stored matrix must be exactly the lattice distances,
                // dimension included.
                if derived != config {
                    return Err(FileError::LatticeMismatch);
                }
                Some(pts)
            }
        };

        let trace = match raw.trace {
            None => None,
            Some(t) => {
                if t.n != raw.n {
                    return Err(FileError::TraceMismatch);
                }
                Some(ConstructionTrace {
                    n: t.n,
                    base: (parse_rational(&t.base[0])?, parse_rational(&t.base[1])?),
                    apexes: t
                        .apexes
                        .iter()
                        .map(|s| parse_rational(s).map(|delta| ApexChoice { delta }))
                        .collect::<Result<Vec<_>, _>>()?,
                    retries: t.retries,
                })
            }
        };

        Ok(ConfigFile {
            config,
            lattice_points,
            coords_float: raw.coords_float,
            trace,
        })
    }

    pub fn write_to(&self, path: &Path) -> Result<(), FileError> {
        let mut text = self.to_json();
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }

    pub fn read_from(path: &Path) -> Result<Self, FileError> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

/// One search result as a JSON-lines record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchRecord {
    pub points: Vec<[i64; 2]>,
    pub spectrum: Vec<(String, usize)>,
}

impl SearchRecord {
    pub fn from_result(r: &SearchResult) -> Self {
        SearchRecord {
            points: r.points.iter().map(|p| [p.a, p.b]).collect(),
            spectrum: r
                .spectrum
                .entries()
                .iter()
                .map(|(v, c)| (format_rational(v), *c))
                .collect(),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("search records always serialize")
    }
}

/// Serialize results as JSON lines, one record per line, in input order.
pub fn results_to_jsonl(results: &[SearchResult]) -> String {
    let mut out = String::new();
    for r in results {
        out.push_str(&SearchRecord::from_result(r).to_json_line());
        out.push('\n');
    }
    out
}

#[derive(Debug, thiserror::Error)]
pub enum RealizeError {
    #[error("configuration is not embeddable in dimension {0}")]
    NotEmbeddable(usize),
}

/// Floating realization of the exact matrix, anchored at point 0.
///
/// The anchored Gram matrix `G[i][j] = (d(0,i)^2 + d(0,j)^2 - d(i,j)^2)/2`
/// is factored by diagonally pivoted rank-revealing Cholesky into at most
/// `dim` columns; any isometric realization is acceptable, only the
/// round-trip residual is contractual.
pub fn realize(config: &SqDistConfig) -> Result<Vec<Vec<f64>>, RealizeError> {
    let dim = config.dim();
    if !embeddable_in(config, dim) {
        return Err(RealizeError::NotEmbeddable(dim));
    }
    let n = config.n();
    let m = n - 1;
    let mut coords = vec![vec![0.0f64; dim]; n];
    if m == 0 {
        return Ok(coords);
    }
    let gram = anchored_gram(config);
    let mut resid: Vec<Vec<f64>> = gram
        .iter()
        .map(|row| row.iter().map(rational_to_f64).collect())
        .collect();
    let scale = (0..m).map(|i| resid[i][i]).fold(0.0f64, f64::max);
    let tol = scale * 1e-12;

    for col in 0..dim {
        let (pivot, diag) = (0..m)
            .map(|i| (i, resid[i][i]))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("nonempty Gram matrix");
        if diag <= tol {
            break;
        }
        let root = diag.sqrt();
        let column: Vec<f64> = (0..m).map(|i| resid[i][pivot] / root).collect();
        for i in 0..m {
            for j in 0..m {
                resid[i][j] -= column[i] * column[j];
            }
        }
        for i in 0..m {
            coords[i + 1][col] = column[i];
        }
    }
    Ok(coords)
}

/// Largest relative error between recomputed float squared distances and
/// the exact matrix: `|rec - exact| / max(1, exact)`, maximized over pairs.
pub fn realization_residual(config: &SqDistConfig, coords: &[Vec<f64>]) -> f64 {
    let n = config.n();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            let rec: f64 = coords[i]
                .iter()
                .zip(&coords[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            let exact = rational_to_f64(config.sq_dist(i, j));
            let rel = (rec - exact).abs() / exact.max(1.0);
            worst = worst.max(rel);
        }
    }
    worst
}
