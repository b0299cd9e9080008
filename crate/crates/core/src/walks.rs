//! Pivot rules as walks on an orientation, the exact expected walk length, and
//! the per-step bookkeeping of skipped neighbors.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numerics::{rational_int, Rational, RngStream};
use crate::orientations::Auso;
use crate::reach::t_reach;

pub const MAX_EXACT_DP_VERTICES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PivotRule {
    RandomEdge,
    GreatestDecrease,
    RandomFacet,
}

impl PivotRule {
    pub fn as_str(self) -> &'static str {
        match self {
            PivotRule::RandomEdge => "random-edge",
            PivotRule::GreatestDecrease => "greatest-decrease",
            PivotRule::RandomFacet => "random-facet",
        }
    }
}

impl fmt::Display for PivotRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PivotRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "random-edge" => Ok(PivotRule::RandomEdge),
            "greatest-decrease" => Ok(PivotRule::GreatestDecrease),
            "random-facet" => Ok(PivotRule::RandomFacet),
            other => Err(format!("unknown pivot rule `{other}`")),
        }
    }
}

/// One realized pivot path from the start vertex to the sink.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkTrace {
    pub vertices: Vec<usize>,
    pub rule: PivotRule,
    /// Stream the walk started from, for randomized rules.
    pub stream: Option<RngStream>,
}

impl WalkTrace {
    /// Number of vertices on the path, start and sink included.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn steps(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    /// Consecutive vertices adjacent, ranks strictly decreasing, ending at a sink.
    pub fn is_valid_for(&self, auso: &Auso) -> bool {
        let g = auso.graph();
        self.vertices
            .windows(2)
            .all(|w| g.are_adjacent(w[0], w[1]) && auso.rank(w[0]) > auso.rank(w[1]))
            && self.vertices.last().is_some_and(|&v| auso.out_degree(v) == 0)
    }
}

/// `S(v_i)`: out-neighbors of `v_i` ranked above the successor `v_{i+1}`, per step.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SkipRecord {
    pub sets: Vec<Vec<usize>>,
}

impl SkipRecord {
    /// Skipped sets are pairwise disjoint and avoid every vertex of `trace`.
    pub fn disjoint_from(&self, trace: &WalkTrace) -> bool {
        let mut all: Vec<usize> = self.sets.iter().flatten().copied().collect();
        all.extend_from_slice(&trace.vertices);
        let total = all.len();
        all.sort_unstable();
        all.dedup();
        all.len() == total
    }
}

/// Skipped sets of an arbitrary trace.
pub fn skip_record(auso: &Auso, trace: &WalkTrace) -> SkipRecord {
    let sets = trace
        .vertices
        .windows(2)
        .map(|w| {
            let floor = auso.rank(w[1]);
            auso.out_set(w[0]).into_iter().filter(|&u| auso.rank(u) > floor).collect()
        })
        .collect();
    SkipRecord { sets }
}

/// Random-Edge from `start`, at most `max_steps` steps. Calls `on_step(v, out, j)`
/// with the rank-descending out-set of `v` and the drawn index `j`; the
/// skipped set is `out[..j]`. Returns the final vertex and the advanced stream.
fn random_edge_core(
    auso: &Auso,
    start: usize,
    mut stream: RngStream,
    max_steps: usize,
    mut on_step: impl FnMut(usize, &[usize], usize),
) -> (usize, RngStream) {
    let mut v = start;
    let mut out = Vec::with_capacity(auso.dim());
    for _ in 0..max_steps {
        auso.out_set_into(v, &mut out);
        if out.is_empty() {
            break;
        }
        let j = stream.draw_below(out.len() as u64) as usize;
        on_step(v, &out, j);
        v = out[j];
    }
    (v, stream)
}

pub fn random_edge_walk(auso: &Auso, start: usize, stream: RngStream) -> (WalkTrace, SkipRecord) {
    let mut vertices = vec![start];
    let mut sets = Vec::new();
    random_edge_core(auso, start, stream, usize::MAX, |_, out, j| {
        vertices.push(out[j]);
        sets.push(out[..j].to_vec());
    });
    (
        WalkTrace { vertices, rule: PivotRule::RandomEdge, stream: Some(stream) },
        SkipRecord { sets },
    )
}

/// Vertex reached by Random-Edge after `steps` steps (the sink if reached earlier).
pub fn random_edge_after(auso: &Auso, start: usize, steps: usize, stream: RngStream) -> usize {
    random_edge_core(auso, start, stream, steps, |_, _, _| {}).0
}

/// `|S~_t(v)|`: vertices of the t-reach of `v` ranked above the vertex that
/// Random-Edge reaches after `t` steps. `reach` must be `t_reach(auso, v, t)`.
pub fn reach_skip_size(auso: &Auso, v: usize, t: usize, reach: &[usize], stream: RngStream) -> usize {
    let end = auso.rank(random_edge_after(auso, v, t, stream));
    reach.iter().filter(|&&u| auso.rank(u) > end).count()
}

/// Always steps to the lowest-ranked out-neighbor.
pub fn greatest_decrease_walk(auso: &Auso, start: usize) -> WalkTrace {
    let mut vertices = vec![start];
    let mut v = start;
    while let Some(next) = auso.graph().neighbors(v).filter(|&w| auso.rank(w) < auso.rank(v)).min_by_key(|&w| auso.rank(w))
    {
        vertices.push(next);
        v = next;
    }
    WalkTrace { vertices, rule: PivotRule::GreatestDecrease, stream: None }
}

/// Random-Facet on a cube orientation.
///
/// In face `F` at vertex `v`: pick a free coordinate `i` uniformly, solve the
/// facet of `F` through `v` with `i` fixed, and if its sink `w` is not the sink
/// of `F`, cross coordinate `i` and solve `F` again from there.
pub fn random_facet_walk(auso: &Auso, start: usize, stream: RngStream) -> Result<WalkTrace> {
    if !auso.graph().is_cube() {
        return Err(Error::Domain("Random-Facet is implemented for cube instances only".into()));
    }
    let free = crate::polytopes::low_mask(auso.dim());
    let mut vertices = vec![start];
    let mut s = stream;
    facet_solve(auso, free, start, &mut s, &mut vertices);
    Ok(WalkTrace { vertices, rule: PivotRule::RandomFacet, stream: Some(stream) })
}

fn facet_solve(auso: &Auso, free: u64, v: usize, stream: &mut RngStream, trace: &mut Vec<usize>) -> usize {
    if free == 0 {
        return v;
    }
    let pick = stream.draw_below(u64::from(free.count_ones()));
    let coord = (0..64).filter(|&i| free >> i & 1 == 1).nth(pick as usize).unwrap();
    let w = facet_solve(auso, free & !(1 << coord), v, stream, trace);
    let across = w ^ (1 << coord);
    if auso.rank(across) > auso.rank(w) {
        return w;
    }
    trace.push(across);
    facet_solve(auso, free, across, stream, trace)
}

/// Runs `rule` once from `start` with `stream`.
pub fn run_rule(auso: &Auso, start: usize, rule: PivotRule, stream: RngStream) -> Result<WalkTrace> {
    match rule {
        PivotRule::RandomEdge => Ok(random_edge_walk(auso, start, stream).0),
        PivotRule::GreatestDecrease => Ok(greatest_decrease_walk(auso, start)),
        PivotRule::RandomFacet => random_facet_walk(auso, start, stream),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DpMode {
    Float,
    Exact,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExpectedVisits {
    Float(f64),
    Exact(Rational),
}

impl ExpectedVisits {
    pub fn to_f64(&self) -> f64 {
        match self {
            ExpectedVisits::Float(x) => *x,
            ExpectedVisits::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

/// Expected Random-Edge path length (vertices) from every vertex, in floating point.
pub fn expected_visits_f64(auso: &Auso) -> Vec<f64> {
    let mut e = vec![0.0f64; auso.vertex_count()];
    let mut out = Vec::new();
    for &v in auso.vertices_by_rank() {
        let v = v as usize;
        auso.out_set_into(v, &mut out);
        e[v] = if out.is_empty() {
            1.0
        } else {
            1.0 + out.iter().map(|&w| e[w]).sum::<f64>() / out.len() as f64
        };
    }
    e
}

/// Exact expected Random-Edge path length from every vertex.
pub fn expected_visits_exact(auso: &Auso) -> Result<Vec<Rational>> {
    let n = auso.vertex_count();
    if n > MAX_EXACT_DP_VERTICES {
        return Err(Error::GuardExceeded { estimate: n as f64, limit: MAX_EXACT_DP_VERTICES as f64 });
    }
    let mut e = vec![Rational::zero(); n];
    let mut out = Vec::new();
    for &v in auso.vertices_by_rank() {
        let v = v as usize;
        auso.out_set_into(v, &mut out);
        e[v] = if out.is_empty() {
            Rational::one()
        } else {
            let sum = out.iter().fold(Rational::zero(), |acc, &w| acc + &e[w]);
            Rational::one() + sum / rational_int(out.len() as i64)
        };
    }
    Ok(e)
}

/// `E[|pi|]` for Random-Edge from `start`: `E[sink] = 1`,
/// `E[v] = 1 + mean of E over out(v)`, filled in increasing rank order.
pub fn exact_expected_visits(auso: &Auso, start: usize, mode: DpMode) -> Result<ExpectedVisits> {
    match mode {
        DpMode::Float => Ok(ExpectedVisits::Float(expected_visits_f64(auso)[start])),
        DpMode::Exact => Ok(ExpectedVisits::Exact(expected_visits_exact(auso)?.swap_remove(start))),
    }
}

/// Visits of out-degree-`k` vertices and how many of them skipped at least `floor(k/2)` neighbors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SkipTally {
    pub visits: u64,
    pub skipped_half: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryStats {
    pub trials: u64,
    pub mean: f64,
    pub stderr: f64,
    pub min: usize,
    pub max: usize,
    pub histogram: BTreeMap<usize, u64>,
    /// Visited vertices by out-degree `k` (`n_k` summed over trials), sink included.
    pub visits_by_out_degree: Vec<u64>,
    /// Indexed by out-degree; only non-sink steps are tallied.
    pub skip_tally: Vec<SkipTally>,
    /// Traces whose skipped sets overlapped each other or the trace.
    pub disjointness_violations: u64,
}

struct TrialOutcome {
    length: usize,
    by_degree: Vec<u32>,
    skipped_half: Vec<u32>,
    disjoint: bool,
}

fn run_trial(auso: &Auso, start: usize, rule: PivotRule, stream: RngStream) -> Result<TrialOutcome> {
    let d = auso.dim();
    let mut by_degree = vec![0u32; d + 1];
    let mut skipped_half = vec![0u32; d + 1];
    let mut seen = Vec::new();
    let length = match rule {
        PivotRule::RandomEdge => {
            let mut length = 1;
            seen.push(start);
            let (end, _) = random_edge_core(auso, start, stream, usize::MAX, |_, out, j| {
                let k = out.len();
                by_degree[k] += 1;
                skipped_half[k] += u32::from(j >= k / 2);
                seen.extend_from_slice(&out[..j]);
                seen.push(out[j]);
                length += 1;
            });
            by_degree[auso.out_degree(end)] += 1;
            length
        }
        _ => {
            let trace = run_rule(auso, start, rule, stream)?;
            let skips = skip_record(auso, &trace);
            for (v, set) in trace.vertices.iter().zip(&skips.sets) {
                let k = auso.out_degree(*v);
                by_degree[k] += 1;
                skipped_half[k] += u32::from(set.len() >= k / 2);
                seen.extend_from_slice(set);
            }
            by_degree[auso.out_degree(*trace.vertices.last().unwrap())] += 1;
            seen.extend_from_slice(&trace.vertices);
            trace.len()
        }
    };
    let total = seen.len();
    seen.sort_unstable();
    seen.dedup();
    Ok(TrialOutcome { length, by_degree, skipped_half, disjoint: seen.len() == total })
}

/// Monte Carlo estimate of `E[|pi|]`. Trial `i` uses stream `(seed, i)`; results
/// are reduced in trial order, so the outcome does not depend on scheduling.
pub fn monte_carlo(auso: &Auso, start: usize, rule: PivotRule, trials: u64, seed: u64) -> Result<SummaryStats> {
    if trials == 0 {
        return Err(Error::Domain("monte carlo needs at least one trial".into()));
    }
    let trial = |i: u64| run_trial(auso, start, rule, RngStream::new(seed, i));

    #[cfg(feature = "parallel")]
    let outcomes: Vec<TrialOutcome> = {
        use rayon::prelude::*;
        (0..trials).into_par_iter().map(trial).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<TrialOutcome> = (0..trials).map(trial).collect::<Result<_>>()?;

    let d = auso.dim();
    let mut histogram = BTreeMap::new();
    let mut visits_by_out_degree = vec![0u64; d + 1];
    let mut skip_tally = vec![SkipTally::default(); d + 1];
    let mut disjointness_violations = 0;
    let (mut sum, mut min, mut max) = (0.0f64, usize::MAX, 0usize);
    for o in &outcomes {
        *histogram.entry(o.length).or_insert(0) += 1;
        sum += o.length as f64;
        min = min.min(o.length);
        max = max.max(o.length);
        disjointness_violations += u64::from(!o.disjoint);
        for k in 0..=d {
            visits_by_out_degree[k] += u64::from(o.by_degree[k]);
            skip_tally[k].skipped_half += u64::from(o.skipped_half[k]);
        }
    }
    // Steps leave every visited vertex but the last, so step tallies are the
    // visit counts minus one terminal sink per trial.
    for k in 0..=d {
        skip_tally[k].visits = visits_by_out_degree[k];
    }
    skip_tally[0].visits = 0;

    let n = trials as f64;
    let mean = sum / n;
    let var = if trials > 1 {
        outcomes.iter().map(|o| (o.length as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok(SummaryStats {
        trials,
        mean,
        stderr: (var / n).sqrt(),
        min,
        max,
        histogram,
        visits_by_out_degree,
        skip_tally,
        disjointness_violations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Subpath {
    pub start_index: usize,
    /// Number of arcs: 1, or `t` for a long subpath unless it ends at the sink.
    pub length: usize,
    pub is_long: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionReport {
    pub t: usize,
    pub k: usize,
    pub subpaths: Vec<Subpath>,
    /// Number of long subpaths.
    pub n_long: usize,
    /// `S_t(x_i)` for each long subpath `(x_i, y_i)`: the t-reach of `x_i`
    /// ranked above `y_i`.
    pub long_skip_sets: Vec<Vec<usize>>,
    /// Long subpaths whose skip set has at least `g/2` vertices.
    pub eta: usize,
}

impl PartitionReport {
    pub fn skip_sets_disjoint(&self) -> bool {
        let mut all: Vec<usize> = self.long_skip_sets.iter().flatten().copied().collect();
        let total = all.len();
        all.sort_unstable();
        all.dedup();
        all.len() == total
    }
}

/// Left-to-right split of `trace` into long subpaths of `t` arcs starting at
/// (t,k)-good vertices and single arcs elsewhere. A long subpath that meets the
/// sink early stops there, like the walk `w_t`. `g = None` means no vertex is
/// good anywhere and `eta` is 0.
pub fn partition_walk(
    trace: &WalkTrace,
    auso: &Auso,
    t: usize,
    k: usize,
    good: impl Fn(usize) -> bool,
    g: Option<usize>,
) -> PartitionReport {
    let arcs = trace.steps();
    let mut subpaths = Vec::new();
    let mut long_skip_sets = Vec::new();
    let mut eta = 0;
    let mut j = 0;
    while j < arcs {
        let x = trace.vertices[j];
        if t >= 1 && good(x) {
            let len = t.min(arcs - j);
            let floor = auso.rank(trace.vertices[j + len]);
            let skipped: Vec<usize> = t_reach(auso, x, t).into_iter().filter(|&u| auso.rank(u) > floor).collect();
            if g.is_some_and(|g| 2 * skipped.len() >= g) {
                eta += 1;
            }
            long_skip_sets.push(skipped);
            subpaths.push(Subpath { start_index: j, length: len, is_long: true });
            j += len;
        } else {
            subpaths.push(Subpath { start_index: j, length: 1, is_long: false });
            j += 1;
        }
    }
    PartitionReport { t, k, n_long: long_skip_sets.len(), subpaths, long_skip_sets, eta }
}
