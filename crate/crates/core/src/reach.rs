//! Directed reach structures around a vertex (t-reach, its boundary, (t,k)-goodness)
//! and the undirected neighborhood count gamma(t,k) on cubes.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::rc::Rc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::numerics::{binomial, falling_factorial, Rational};
use crate::orientations::Auso;

/// Vertices at directed distance at most `t` from `v`, sorted.
pub fn t_reach(auso: &Auso, v: usize, t: usize) -> Vec<usize> {
    let mut dist: HashMap<usize, usize> = HashMap::from([(v, 0)]);
    let mut queue = VecDeque::from([v]);
    let mut out = Vec::new();
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        if du == t {
            continue;
        }
        auso.out_set_into(u, &mut out);
        for &w in &out {
            dist.entry(w).or_insert_with(|| {
                queue.push_back(w);
                du + 1
            });
        }
    }
    let mut reach: Vec<usize> = dist.into_keys().collect();
    reach.sort_unstable();
    reach
}

/// Layers `L_0 = {v}`, `L_{l+1} = out(L_l)`: `L_l` holds the endpoints of
/// directed paths of length exactly `l`.
pub fn reach_layers(auso: &Auso, v: usize, t: usize) -> Vec<Vec<usize>> {
    let mut layers = vec![vec![v]];
    let mut out = Vec::new();
    for _ in 0..t {
        let mut next = Vec::new();
        for &u in layers.last().unwrap() {
            auso.out_set_into(u, &mut out);
            next.extend_from_slice(&out);
        }
        next.sort_unstable();
        next.dedup();
        layers.push(next);
    }
    layers
}

/// Boundary of the t-reach: endpoints of directed paths of length exactly `t`.
pub fn reach_boundary(auso: &Auso, v: usize, t: usize) -> Vec<usize> {
    reach_layers(auso, v, t).pop().unwrap()
}

/// Every vertex within directed distance `t - 1` of `v` has out-degree at least `k`.
pub fn is_good(auso: &Auso, v: usize, t: usize, k: usize) -> bool {
    if t == 0 || k == 0 {
        return true;
    }
    t_reach(auso, v, t - 1).into_iter().all(|w| auso.out_degree(w) >= k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachReport {
    pub t: usize,
    pub k: usize,
    pub good: Vec<bool>,
    pub good_count: usize,
    /// Number of vertices that are not (t,k)-good.
    pub f: usize,
    /// Minimum boundary size over good vertices; `None` when no vertex is good.
    pub g: Option<usize>,
    /// Boundary size -> number of good vertices with that boundary size.
    pub boundary_histogram: BTreeMap<usize, usize>,
}

pub fn reach_report(auso: &Auso, t: usize, k: usize) -> ReachReport {
    let n = auso.vertex_count();
    let mut good = vec![false; n];
    let mut histogram = BTreeMap::new();
    for (v, slot) in good.iter_mut().enumerate() {
        if is_good(auso, v, t, k) {
            *slot = true;
            *histogram.entry(reach_boundary(auso, v, t).len()).or_insert(0) += 1;
        }
    }
    let good_count = good.iter().filter(|&&g| g).count();
    ReachReport {
        t,
        k,
        good,
        good_count,
        f: n - good_count,
        g: histogram.keys().next().copied(),
        boundary_histogram: histogram,
    }
}

pub const GAMMA_ENUMERATION_LIMIT: f64 = 1e8;
pub const MAX_GAMMA_DIM: usize = 7;

/// Number of (t,k)-neighborhood choice trees of one vertex: `T(0) = 1`,
/// `T(s) = C(d,k) * T(s-1)^k`.
pub fn gamma_enumeration_estimate(d: usize, t: usize, k: usize) -> f64 {
    let choices = binomial(d as u64, k as u64).to_string().parse::<f64>().unwrap_or(f64::INFINITY);
    (0..t).fold(1.0f64, |acc, _| choices * acc.powi(k as i32))
}

type Neighborhoods = Rc<Vec<u128>>;

struct GammaSearch {
    d: usize,
    k: usize,
    memo: HashMap<(usize, usize), Neighborhoods>,
}

impl GammaSearch {
    fn k_subsets(&self) -> Vec<Vec<usize>> {
        let mut subsets = Vec::new();
        for mask in 0u32..(1 << self.d) {
            if mask.count_ones() as usize == self.k {
                subsets.push((0..self.d).filter(|&i| mask >> i & 1 == 1).collect());
            }
        }
        subsets
    }

    /// All (s,k)-neighborhoods of `u` as vertex bitsets, one per choice tree.
    fn neighborhoods(&mut self, u: usize, s: usize) -> Neighborhoods {
        if let Some(hit) = self.memo.get(&(u, s)) {
            return hit.clone();
        }
        let result = if s == 0 {
            vec![1u128 << u]
        } else {
            let mut all = Vec::new();
            for subset in self.k_subsets() {
                let lists: Vec<Neighborhoods> =
                    subset.iter().map(|&i| self.neighborhoods(u ^ (1 << i), s - 1)).collect();
                product_unions(&lists, 0, 0, &mut |set| all.push(set));
            }
            all
        };
        let result = Rc::new(result);
        self.memo.insert((u, s), result.clone());
        result
    }
}

fn product_unions(lists: &[Neighborhoods], idx: usize, acc: u128, emit: &mut impl FnMut(u128)) {
    if idx == lists.len() {
        emit(acc);
        return;
    }
    for &set in lists[idx].iter() {
        product_unions(lists, idx + 1, acc | set, emit);
    }
}

fn min_sphere_count(lists: &[Neighborhoods], idx: usize, acc: u128, sphere: u128, best: &mut u32) {
    let count = (acc & sphere).count_ones();
    if count >= *best {
        return;
    }
    if idx == lists.len() {
        *best = count;
        return;
    }
    for &set in lists[idx].iter() {
        min_sphere_count(lists, idx + 1, acc | set, sphere, best);
    }
}

/// gamma(t,k) on the `d`-cube by exhaustive enumeration of (t,k)-neighborhoods of
/// vertex 0 (the cube is vertex-transitive).
///
/// Choice trees are enumerated without deduplicating equal unions; a branch is
/// cut only once its partial union already meets the best count, which can
/// never decrease along a branch.
pub fn gamma_brute(d: usize, t: usize, k: usize) -> Result<u64> {
    if d == 0 || k == 0 || k > d {
        return Err(Error::Domain(format!("gamma needs 1 <= k <= d, got d={d} k={k}")));
    }
    if d > MAX_GAMMA_DIM {
        return Err(Error::DimensionTooLarge { d, max: MAX_GAMMA_DIM });
    }
    let estimate = gamma_enumeration_estimate(d, t, k);
    if estimate > GAMMA_ENUMERATION_LIMIT {
        return Err(Error::GuardExceeded { estimate, limit: GAMMA_ENUMERATION_LIMIT });
    }
    if t == 0 {
        return Ok(1);
    }
    let sphere = (0..1usize << d)
        .filter(|v| v.count_ones() as usize == t)
        .fold(0u128, |m, v| m | 1u128 << v);
    let mut search = GammaSearch { d, k, memo: HashMap::new() };
    let mut best = u32::MAX;
    for subset in search.k_subsets() {
        let lists: Vec<Neighborhoods> = subset.iter().map(|&i| search.neighborhoods(1 << i, t - 1)).collect();
        min_sphere_count(&lists, 0, 0, sphere, &mut best);
    }
    Ok(u64::from(best))
}

/// Lower bound `k^t/t! - sum_{i=1}^{t-1} k^i / t^{(i)} * C(d-1, t-i-1)` on gamma(t,k),
/// where `t^{(i)}` is the falling factorial.
pub fn gamma_lower_formula(d: usize, t: usize, k: usize) -> Rational {
    let kb = BigInt::from(k);
    let t64 = t as u64;
    let mut value = Rational::new(kb.pow(t as u32), BigInt::from(falling_factorial(t64, t64)));
    for i in 1..t {
        let term = Rational::new(
            kb.pow(i as u32) * BigInt::from(binomial(d.saturating_sub(1) as u64, (t - i - 1) as u64)),
            BigInt::from(falling_factorial(t64, i as u64)),
        );
        value -= term;
    }
    value
}
