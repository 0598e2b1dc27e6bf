//! Exhaustive, pruned, deterministic, parallel search for n-point crescent
//! configurations among subsets of a lattice region.
//!
//! The tree is a depth-first walk over index-increasing subsets of the
//! region's lexicographically sorted point list. A candidate point is
//! rejected if it is collinear with any chosen pair, concyclic with any
//! chosen triple, or if the partial distance multiplicities can no longer
//! complete to `{1, ..., n-1}`. Complete subsets are handed to the exact
//! verifier, which is authoritative over all incremental pruning.
//!
//! Parallelism splits the tree at a fixed prefix depth into independent
//! tasks for a worker pool; results are merged and emitted in global
//! lexicographic order, so output is identical for any thread count.

use crate::geometry::{spectrum, verify_crescent, Spectrum};
use crate::lattice::{
    collinear, concyclic, enumerate_region, point_group_apply, sq_norm, to_exact_config,
    HexRegion, LatticePoint, POINT_GROUP_ORDER,
};
use rayon::prelude::*;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

/// Where to search: a centered hexagon or an explicit point list.
#[derive(Debug, Clone)]
pub enum Region {
    Hex(HexRegion),
    Points(Vec<LatticePoint>),
}

impl Region {
    /// The region's points, sorted lexicographically, duplicates removed.
    pub fn points(&self) -> Vec<LatticePoint> {
        match self {
            Region::Hex(h) => enumerate_region(*h),
            Region::Points(v) => {
                let mut v = v.clone();
                v.sort();
                v.dedup();
                v
            }
        }
    }
}

/// A search problem: region, target point count, and engine knobs.
#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub region: Region,
    pub n: usize,
    /// Emit one canonical representative per isometry class.
    pub symmetry_reduce: bool,
    /// Subset-tree depth at which work splits into parallel tasks.
    pub prefix_depth: usize,
}

impl SearchSpec {
    pub fn new(region: Region, n: usize) -> Self {
        SearchSpec {
            region,
            n,
            symmetry_reduce: false,
            prefix_depth: 2,
        }
    }
}

/// A found configuration: sorted points plus their exact spectrum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub points: Vec<LatticePoint>,
    pub spectrum: Spectrum,
}

/// Exact work counters. Totals are independent of the thread count.
#[derive(Debug, Clone, Default)]
pub struct SearchStats {
    pub nodes_visited: u64,
    pub pruned_by_collinear: u64,
    pub pruned_by_concyclic: u64,
    pub pruned_by_spectrum: u64,
    pub results_found: u64,
    pub elapsed: Duration,
}

impl SearchStats {
    fn absorb(&mut self, other: &SearchStats) {
        self.nodes_visited += other.nodes_visited;
        self.pruned_by_collinear += other.pruned_by_collinear;
        self.pruned_by_concyclic += other.pruned_by_concyclic;
        self.pruned_by_spectrum += other.pruned_by_spectrum;
        self.results_found += other.results_found;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("region has {region_size} points, fewer than the {n} requested")]
    RegionTooSmall { region_size: usize, n: usize },
    #[error("target point count must be at least 3, got {0}")]
    BadPointCount(usize),
    #[error("search cancelled")]
    Cancelled,
}

/// Runtime knobs that do not affect the result set.
#[derive(Debug, Default)]
pub struct SearchOptions<'a> {
    /// Emit a progress line to stderr every this many finished tasks
    /// (0 = silent).
    pub progress_interval: u64,
    /// External stop signal, checked at task boundaries.
    pub cancel: Option<&'a AtomicBool>,
}

/// Necessary condition for partial distance counts to complete to the
/// crescent multiset `{1, ..., n-1}`.
///
/// Checks: at most `n-1` distinct values, and (counts can only grow) the
/// counts sorted descending are dominated by `n-1, n-2, ...` — which is
/// exactly the greedy-matching bound for injectively assigning each current
/// value a distinct final multiplicity at least as large.
pub fn spectrum_feasible(counts: &[usize], k: usize, n: usize) -> bool {
    debug_assert!(k <= n);
    debug_assert_eq!(counts.iter().sum::<usize>(), k * (k.saturating_sub(1)) / 2);
    if counts.len() + 1 > n {
        return false;
    }
    let mut sorted = counts.to_vec();
    sorted.sort_unstable_by(|x, y| y.cmp(x));
    sorted.iter().enumerate().all(|(i, &c)| c + i < n)
}

/// Canonical form of a point set under the 12 lattice point-group elements
/// composed with translation: the lexicographically least among the images
/// translated so their minimum point sits at the origin. Idempotent.
pub fn canonicalize(points: &[LatticePoint]) -> Vec<LatticePoint> {
    let mut best: Option<Vec<LatticePoint>> = None;
    for e in 0..POINT_GROUP_ORDER {
        let mut image: Vec<LatticePoint> =
            points.iter().map(|&p| point_group_apply(e, p)).collect();
        let min = *image.iter().min().expect("nonempty point set");
        for p in &mut image {
            *p = LatticePoint::new(p.a - min.a, p.b - min.b);
        }
        image.sort();
        if best.as_ref().map_or(true, |b| image < *b) {
            best = Some(image);
        }
    }
    best.expect("nonempty point set")
}

/// Small multiset of (squared distance, multiplicity) for the chosen prefix.
#[derive(Debug, Clone, Default)]
struct CountSet {
    entries: Vec<(u64, u32)>,
}

impl CountSet {
    fn add(&mut self, v: u64) {
        match self.entries.iter_mut().find(|(d, _)| *d == v) {
            Some((_, c)) => *c += 1,
            None => self.entries.push((v, 1)),
        }
    }

    fn remove(&mut self, v: u64) {
        let i = self
            .entries
            .iter()
            .position(|(d, _)| *d == v)
            .expect("removing a distance that was added");
        self.entries[i].1 -= 1;
        if self.entries[i].1 == 0 {
            self.entries.swap_remove(i);
        }
    }

    fn counts(&self) -> Vec<usize> {
        self.entries.iter().map(|(_, c)| *c as usize).collect()
    }
}

struct Walker<'a> {
    pts: &'a [LatticePoint],
    dist: &'a [u64],
    n: usize,
    chosen: Vec<usize>,
    counts: CountSet,
    stats: SearchStats,
    results: Vec<SearchResult>,
}

impl<'a> Walker<'a> {
    fn new(pts: &'a [LatticePoint], dist: &'a [u64], n: usize) -> Self {
        Walker {
            pts,
            dist,
            n,
            chosen: Vec::with_capacity(n),
            counts: CountSet::default(),
            stats: SearchStats::default(),
            results: Vec::new(),
        }
    }

    fn d(&self, i: usize, j: usize) -> u64 {
        self.dist[i * self.pts.len() + j]
    }

    /// Try to append candidate region-index `cand`; true if accepted (the
    /// caller must later call `pop`).
    fn push(&mut self, cand: usize) -> bool {
        self.stats.nodes_visited += 1;
        let k = self.chosen.len();
        let p = self.pts[cand];

        for a in 0..k {
            for b in a + 1..k {
                if collinear(self.pts[self.chosen[a]], self.pts[self.chosen[b]], p) {
                    self.stats.pruned_by_collinear += 1;
                    return false;
                }
            }
        }
        for a in 0..k {
            for b in a + 1..k {
                for c in b + 1..k {
                    if concyclic(
                        self.pts[self.chosen[a]],
                        self.pts[self.chosen[b]],
                        self.pts[self.chosen[c]],
                        p,
                    ) {
                        self.stats.pruned_by_concyclic += 1;
                        return false;
                    }
                }
            }
        }

        for a in 0..k {
            let v = self.d(self.chosen[a], cand);
            self.counts.add(v);
        }
        if !spectrum_feasible(&self.counts.counts(), k + 1, self.n) {
            for a in 0..k {
                let v = self.d(self.chosen[a], cand);
                self.counts.remove(v);
            }
            self.stats.pruned_by_spectrum += 1;
            return false;
        }
        self.chosen.push(cand);
        true
    }

    fn pop(&mut self) {
        let cand = self.chosen.pop().expect("pop without push");
        for a in 0..self.chosen.len() {
            let v = self.d(self.chosen[a], cand);
            self.counts.remove(v);
        }
    }

    /// Exhaust the subtree below the current prefix.
    fn run(&mut self, start: usize) {
        if self.chosen.len() == self.n {
            self.finish();
            return;
        }
        // Leave room for the remaining points.
        let remaining = self.n - self.chosen.len();
        let last_start = self.pts.len() + 1 - remaining;
        for cand in start..last_start {
            if self.push(cand) {
                self.run(cand + 1);
                self.pop();
            }
        }
    }

    /// Full exact verification at depth n; pruning never has the last word.
    fn finish(&mut self) {
        let points: Vec<LatticePoint> = self.chosen.iter().map(|&i| self.pts[i]).collect();
        let config = to_exact_config(&points).expect("region points are distinct");
        if verify_crescent(&config).is_ok() {
            let spectrum = spectrum(&config);
            self.stats.results_found += 1;
            self.results.push(SearchResult { points, spectrum });
        }
    }
}

/// A subtree task: a surviving prefix of region indices.
#[derive(Debug, Clone)]
struct Task {
    prefix: Vec<usize>,
}

/// Run a search with default options.
pub fn search(
    spec: &SearchSpec,
    threads: usize,
) -> Result<(Vec<SearchResult>, SearchStats), SearchError> {
    search_with_options(spec, threads, &SearchOptions::default())
}

/// Run a search with progress reporting and cancellation.
pub fn search_with_options(
    spec: &SearchSpec,
    threads: usize,
    options: &SearchOptions<'_>,
) -> Result<(Vec<SearchResult>, SearchStats), SearchError> {
    let started = Instant::now();
    if spec.n < 3 {
        return Err(SearchError::BadPointCount(spec.n));
    }
    let pts = spec.region.points();
    if pts.len() < spec.n {
        return Err(SearchError::RegionTooSmall {
            region_size: pts.len(),
            n: spec.n,
        });
    }
    let n = spec.n;
    let side = pts.len();
    let mut dist = vec![0u64; side * side];
    for i in 0..side {
        for j in 0..side {
            dist[i * side + j] = sq_norm(pts[i], pts[j]);
        }
    }

    // Enumerate surviving prefixes at the split depth; the walk above the
    // split is sequential, so its counters are counted exactly once.
    let split = spec.prefix_depth.min(n.saturating_sub(1));
    let mut root = Walker::new(&pts, &dist, n);
    let mut tasks: Vec<Task> = Vec::new();
    collect_tasks(&mut root, 0, split, &mut tasks);
    let mut stats = std::mem::take(&mut root.stats);
    debug_assert!(root.results.is_empty());

    let cancelled = AtomicBool::new(false);
    let done_counter = AtomicU64::new(0);
    let total_tasks = tasks.len() as u64;
    let run_task = |task: &Task| -> (Vec<SearchResult>, SearchStats) {
        if cancelled.load(Ordering::Relaxed)
            || options.cancel.is_some_and(|c| c.load(Ordering::Relaxed))
        {
            cancelled.store(true, Ordering::Relaxed);
            return (Vec::new(), SearchStats::default());
        }
        let mut w = Walker::new(&pts, &dist, n);
        for &i in &task.prefix {
            let ok = w.push(i);
            debug_assert!(ok, "task prefixes were pre-screened");
        }
        // Do not double count the prefix nodes the root walk already saw.
        w.stats = SearchStats::default();
        let start = task.prefix.last().map_or(0, |&i| i + 1);
        w.run(start);
        let done = done_counter.fetch_add(1, Ordering::Relaxed) + 1;
        if options.progress_interval > 0 && done % options.progress_interval == 0 {
            eprintln!(
                "search: {done}/{total_tasks} tasks, prefix {:?}, {} nodes in task",
                task.prefix, w.stats.nodes_visited
            );
        }
        (w.results, w.stats)
    };

    let per_task: Vec<(Vec<SearchResult>, SearchStats)> = if threads <= 1 {
        tasks.iter().map(run_task).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("worker pool");
        pool.install(|| tasks.par_iter().map(run_task).collect())
    };
    if cancelled.load(Ordering::Relaxed) {
        return Err(SearchError::Cancelled);
    }

    // Tasks are generated in lexicographic order and each task emits in
    // lexicographic order, so concatenation is globally sorted.
    let mut results = Vec::new();
    for (mut rs, st) in per_task {
        stats.absorb(&st);
        results.append(&mut rs);
    }
    debug_assert!(results.windows(2).all(|pair| pair[0].points < pair[1].points));

    if spec.symmetry_reduce {
        let mut canonical: Vec<SearchResult> = results
            .into_iter()
            .map(|r| SearchResult {
                points: canonicalize(&r.points),
                spectrum: r.spectrum,
            })
            .collect();
        canonical.sort_by(|x, y| x.points.cmp(&y.points));
        canonical.dedup_by(|x, y| x.points == y.points);
        results = canonical;
    }
    stats.results_found = results.len() as u64;
    stats.elapsed = started.elapsed();
    Ok((results, stats))
}

/// Sequential pruned walk down to the split depth, recording surviving
/// prefixes as tasks.
fn collect_tasks(w: &mut Walker<'_>, start: usize, split: usize, tasks: &mut Vec<Task>) {
    if w.chosen.len() == split {
        tasks.push(Task {
            prefix: w.chosen.clone(),
        });
        return;
    }
    let remaining = w.n - w.chosen.len();
    let last_start = w.pts.len() + 1 - remaining;
    for cand in start..last_start {
        if w.push(cand) {
            collect_tasks(w, cand + 1, split, tasks);
            w.pop();
        }
    }
}
