//! Exact-arithmetic toolkit for crescent configurations.
//!
//! A crescent configuration is a set of `n` points in general position in
//! `R^d` (no `d+1` on a hyperplane, no `d+2` on a hypersphere) determining
//! exactly `n-1` distinct distances with multiplicities exactly
//! `1, 2, ..., n-1`. This crate provides:
//!
//! - [`geometry`]: coordinate-free exact predicates over squared-distance
//!   matrices — affine degeneracy, cosphericity, embeddability,
//!   circumradius, spectra, and the full crescent verifier. All arithmetic
//!   is arbitrary-precision rational; nothing ever rounds.
//! - [`construct`]: builds an n-point crescent configuration in `R^(n-2)`
//!   for any `n >= 3` by repeated apex-point addition plus a circumcenter
//!   completion, with deterministic retry over a fixed offset schedule.
//! - [`lattice`]: the unit triangular lattice in integer coordinates, with
//!   pure-integer collinearity and concyclicity predicates.
//! - [`mod@search`]: exhaustive, pruned, deterministic, parallel search
//!   for crescent configurations among subsets of a lattice region.
//! - [`fileio`]: exact JSON formats and optional floating-point
//!   realization of a configuration.

// Index loops mirror the matrix algebra throughout.
#![allow(clippy::needless_range_loop)]

pub mod construct;
mod det;
pub mod fileio;
pub mod geometry;
pub mod lattice;
pub mod rational;
pub mod search;

pub use construct::{
    add_circumcenter, apex_extend, base_config, construct_crescent, replay, ApexChoice,
    ConstructError, ConstructParams, ConstructionTrace, DeltaSchedule,
};
pub use fileio::{
    realization_residual, realize, results_to_jsonl, ConfigFile, FileError, RealizeError,
    SearchRecord,
};
pub use geometry::{
    circumradius_sq, cm_det, cospherical, embeddable_in, general_position, general_position_all,
    is_crescent_spectrum, spectrum, verify_crescent, GeometryError, SqDistConfig, Spectrum,
    Violation, ViolationKind,
};
pub use lattice::{
    bounding_hex, collinear, concyclic, enumerate_region, figure1_lattice_points, hex_around,
    point_group_apply, sq_norm, to_exact_config, HexRegion, LatticePoint, POINT_GROUP_ORDER,
};
pub use rational::{format_rational, parse_rational, rational_to_f64, Rational};
pub use search::{
    canonicalize, search, search_with_options, spectrum_feasible, Region, SearchError,
    SearchOptions, SearchResult, SearchSpec, SearchStats,
};
