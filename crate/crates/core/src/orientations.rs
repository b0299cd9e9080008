//! Acyclic unique sink orientations represented by vertex ranks.
//!
//! An edge points from the endpoint with the higher rank to the one with the
//! lower rank, so rank 0 is the global sink and every walk decreases rank.

use std::cmp::Reverse;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::polytopes::{
    build_hypercube, parse_header, parse_number, CubeFace, GraphKind, PolytopeGraph, StackedGeometry,
    MAX_FACE_ENUM_DIM,
};
use crate::numerics::{rational_int, Rational, RngStream};

pub const MAX_KLEE_MINTY_DIM: usize = 20;
const MAX_RESAMPLES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Auso {
    graph: PolytopeGraph,
    rank: Vec<u32>,
    by_rank: Vec<u32>,
}

/// Numeric objective values backing an [`Auso`], where one exists.
#[derive(Clone, Debug, PartialEq)]
pub struct ObjectiveValues {
    pub values: Vec<Rational>,
}

impl ObjectiveValues {
    /// `rank(v) < rank(w)` iff `value(v) < value(w)` for all pairs.
    pub fn consistent_with(&self, auso: &Auso) -> bool {
        self.values.len() == auso.vertex_count()
            && auso
                .vertices_by_rank()
                .windows(2)
                .all(|w| self.values[w[0] as usize] < self.values[w[1] as usize])
    }
}

impl Auso {
    pub fn graph(&self) -> &PolytopeGraph {
        &self.graph
    }

    pub fn dim(&self) -> usize {
        self.graph.dim()
    }

    pub fn vertex_count(&self) -> usize {
        self.rank.len()
    }

    pub fn rank(&self, v: usize) -> u32 {
        self.rank[v]
    }

    pub fn ranks(&self) -> &[u32] {
        &self.rank
    }

    /// Vertex ids sorted by increasing rank; entry 0 is the sink.
    pub fn vertices_by_rank(&self) -> &[u32] {
        &self.by_rank
    }

    pub fn sink(&self) -> usize {
        self.by_rank[0] as usize
    }

    /// The vertex of maximum rank.
    pub fn source(&self) -> usize {
        *self.by_rank.last().expect("nonempty graph") as usize
    }

    /// Out-neighbors of `v` in decreasing rank order.
    pub fn out_set(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.dim());
        self.out_set_into(v, &mut out);
        out
    }

    /// Like [`Auso::out_set`] but reuses `buf`.
    pub fn out_set_into(&self, v: usize, buf: &mut Vec<usize>) {
        buf.clear();
        let r = self.rank[v];
        buf.extend(self.graph.neighbors(v).filter(|&w| self.rank[w] < r));
        buf.sort_unstable_by_key(|&w| Reverse(self.rank[w]));
    }

    pub fn out_degree(&self, v: usize) -> usize {
        let r = self.rank[v];
        self.graph.neighbors(v).filter(|&w| self.rank[w] < r).count()
    }

    /// In-neighbors (higher rank) of `v`.
    pub fn in_set(&self, v: usize) -> Vec<usize> {
        let r = self.rank[v];
        self.graph.neighbors(v).filter(|&w| self.rank[w] > r).collect()
    }

    pub fn h_vector(&self) -> HVector {
        let mut h = vec![0u64; self.dim() + 1];
        for v in 0..self.vertex_count() {
            h[self.out_degree(v)] += 1;
        }
        HVector(h)
    }
}

/// Ranks from distinct values: the smallest value gets rank 0.
fn ranks_from_values<T: Ord>(values: &[T]) -> Result<Vec<u32>> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].cmp(&values[b]));
    if let Some(w) = order.windows(2).find(|w| values[w[0]] == values[w[1]]) {
        return Err(Error::NonGeneric(format!("vertices {} and {} tie", w[0], w[1])));
    }
    let mut rank = vec![0u32; values.len()];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r as u32;
    }
    Ok(rank)
}

fn invert(rank: &[u32]) -> Vec<u32> {
    let mut by_rank = vec![0u32; rank.len()];
    for (v, &r) in rank.iter().enumerate() {
        by_rank[r as usize] = v as u32;
    }
    by_rank
}

/// Wraps a rank permutation; does not check axiom (iii).
pub fn auso_from_ranks(graph: PolytopeGraph, ranks: Vec<u32>) -> Result<Auso> {
    let n = graph.vertex_count();
    if ranks.len() != n {
        return Err(Error::NonGeneric(format!("{} ranks for {n} vertices", ranks.len())));
    }
    let mut seen = vec![false; n];
    for (v, &r) in ranks.iter().enumerate() {
        let slot = seen
            .get_mut(r as usize)
            .ok_or_else(|| Error::NonGeneric(format!("rank {r} of vertex {v} is out of range")))?;
        if *slot {
            return Err(Error::NonGeneric(format!("rank {r} is used twice")));
        }
        *slot = true;
    }
    let by_rank = invert(&ranks);
    Ok(Auso { graph, rank: ranks, by_rank })
}

/// Builds an orientation from explicit arcs `(from, to)`, one per edge, ranking
/// vertices by a topological order.
pub fn auso_from_arcs(graph: PolytopeGraph, arcs: &[(usize, usize)]) -> Result<Auso> {
    let n = graph.vertex_count();
    if arcs.len() != graph.edge_count() {
        return Err(Error::InvariantViolation(format!(
            "{} arcs given for {} edges",
            arcs.len(),
            graph.edge_count()
        )));
    }
    let mut out_deg = vec![0usize; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut covered = std::collections::HashSet::new();
    for &(a, b) in arcs {
        if a >= n || b >= n || !graph.are_adjacent(a, b) {
            return Err(Error::InvariantViolation(format!("arc {a}->{b} is not an edge")));
        }
        if !covered.insert((a.min(b), a.max(b))) {
            return Err(Error::InvariantViolation(format!("edge {a}-{b} is oriented twice")));
        }
        out_deg[a] += 1;
        preds[b].push(a);
    }
    // Peel sinks: the k-th vertex removed gets rank k.
    let mut ready: Vec<usize> = (0..n).filter(|&v| out_deg[v] == 0).collect();
    ready.reverse();
    let mut rank = vec![u32::MAX; n];
    let mut next = 0u32;
    while let Some(v) = ready.pop() {
        rank[v] = next;
        next += 1;
        for &u in &preds[v] {
            out_deg[u] -= 1;
            if out_deg[u] == 0 {
                ready.push(u);
            }
        }
    }
    if let Some(v) = rank.iter().position(|&r| r == u32::MAX) {
        return Err(Error::Cyclic(v));
    }
    auso_from_ranks(graph, rank)
}

/// Orientation induced by `v -> v . weights` on the `d`-cube.
pub fn linear_auso_cube(d: usize, weights: &[i64]) -> Result<Auso> {
    let graph = build_hypercube(d)?;
    if weights.len() != d {
        return Err(Error::Domain(format!("expected {d} weights, got {}", weights.len())));
    }
    if weights.contains(&0) {
        return Err(Error::NonGeneric("zero weight".into()));
    }
    let n = graph.vertex_count();
    let mut values = vec![0i128; n];
    for v in 1..n {
        let low = v.trailing_zeros() as usize;
        values[v] = values[v & (v - 1)] + i128::from(weights[low]);
    }
    let rank = ranks_from_values(&values)?;
    auso_from_ranks(graph, rank)
}

/// Random linear orientation of the `d`-cube: weights uniform in `[1, 2^40]`
/// with random signs, redrawn until all vertex values are distinct.
pub fn random_linear_auso_cube(d: usize, stream: RngStream) -> Result<Auso> {
    let mut stream = stream;
    for _ in 0..MAX_RESAMPLES {
        let weights: Vec<i64> = (0..d)
            .map(|_| {
                let magnitude = 1 + stream.draw_below(1 << 40) as i64;
                if stream.draw_below(2) == 0 {
                    magnitude
                } else {
                    -magnitude
                }
            })
            .collect();
        match linear_auso_cube(d, &weights) {
            Err(Error::NonGeneric(_)) => continue,
            other => return other,
        }
    }
    Err(Error::NonGeneric(format!("no generic weights after {MAX_RESAMPLES} draws")))
}

/// Scaled Klee-Minty objective `3^d * x_d` at vertex `v` (epsilon = 1/3).
///
/// Bit `i - 1` of `v` selects the upper (`1`) or lower (`0`) bound of coordinate `i`.
pub fn klee_minty_scaled_value(d: usize, v: usize) -> u64 {
    let mut x = 0u64;
    let mut pow = 1u64;
    for i in 0..d {
        pow *= 3;
        if v >> i & 1 == 1 {
            x = pow - x;
        }
    }
    x
}

/// The Klee-Minty cube, minimizing `x_d`.
pub fn klee_minty_auso(d: usize) -> Result<(Auso, ObjectiveValues)> {
    if d > MAX_KLEE_MINTY_DIM {
        return Err(Error::DimensionTooLarge { d, max: MAX_KLEE_MINTY_DIM });
    }
    let graph = build_hypercube(d)?;
    let scaled: Vec<u64> = (0..graph.vertex_count()).map(|v| klee_minty_scaled_value(d, v)).collect();
    let rank = ranks_from_values(&scaled)?;
    let scale = rational_int(BigInt::from(3u32).pow(d as u32));
    let values = scaled.iter().map(|&x| rational_int(x) / &scale).collect();
    Ok((auso_from_ranks(graph, rank)?, ObjectiveValues { values }))
}

/// Linear objective `c . a` on the dual of a stacked polytope, where the dual
/// vertex of a facet is its normal `a`.
pub fn dual_stacked_linear_auso(
    graph: &PolytopeGraph,
    geometry: &StackedGeometry,
    stream: RngStream,
) -> Result<(Auso, ObjectiveValues)> {
    if geometry.facet_normals.len() != graph.vertex_count() {
        return Err(Error::InvariantViolation("geometry does not match graph".into()));
    }
    let mut stream = stream;
    for _ in 0..MAX_RESAMPLES {
        let c: Vec<Rational> = (0..geometry.dim)
            .map(|_| rational_int(stream.draw_below(1 << 21) as i64 - (1 << 20)))
            .collect();
        if c.iter().all(Zero::is_zero) {
            continue;
        }
        let values: Vec<Rational> = geometry
            .facet_normals
            .iter()
            .map(|a| a.iter().zip(&c).fold(Rational::zero(), |acc, (x, y)| acc + x * y))
            .collect();
        match ranks_from_values(&values) {
            Ok(rank) => return Ok((auso_from_ranks(graph.clone(), rank)?, ObjectiveValues { values })),
            Err(Error::NonGeneric(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NonGeneric(format!("no generic objective after {MAX_RESAMPLES} draws")))
}

/// Counts `h_0, ..., h_d` of vertices by out-degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HVector(pub Vec<u64>);

impl HVector {
    pub fn dim(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn vertex_count(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn get(&self, k: usize) -> u64 {
        self.0.get(k).copied().unwrap_or(0)
    }

    /// `h_{<k}`: vertices of out-degree below `k`.
    pub fn below(&self, k: usize) -> u64 {
        self.0.iter().take(k).sum()
    }
}

pub fn h_vector(auso: &Auso) -> HVector {
    auso.h_vector()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceViolation {
    pub face: CubeFace,
    pub sinks: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub faces_checked: u64,
    pub violating_faces: u64,
    /// Up to ten offending faces, in face-index order.
    pub examples: Vec<FaceViolation>,
    pub global_sinks: usize,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.violating_faces == 0 && self.global_sinks == 1
    }
}

/// Checks that every nonempty face of a cube orientation has exactly one sink.
///
/// A vertex `v` is the sink of exactly the faces through `v` whose free
/// coordinates all point into `v`, so one pass over `v` and the subsets of its
/// in-directions tallies the sinks of all `3^d` faces.
pub fn validate_cube_faces(auso: &Auso) -> Result<ValidationReport> {
    let d = auso.dim();
    if !auso.graph().is_cube() {
        return Err(Error::Domain("face validation needs a cube instance".into()));
    }
    if d > MAX_FACE_ENUM_DIM {
        return Err(Error::DimensionTooLarge { d, max: MAX_FACE_ENUM_DIM });
    }
    let pow3: Vec<usize> = (0..=d).map(|i| 3usize.pow(i as u32)).collect();
    // Digit per coordinate: 0 or 1 = fixed at that value, 2 = free.
    let mut sinks = vec![0u8; pow3[d]];
    for v in 0..auso.vertex_count() {
        let r = auso.rank(v);
        let in_mask = (0..d).filter(|&i| auso.rank(v ^ (1 << i)) > r).fold(0usize, |m, i| m | 1 << i);
        let base: usize = (0..d).filter(|&i| v >> i & 1 == 1).map(|i| pow3[i]).sum();
        let mut sub = in_mask;
        loop {
            let idx = base
                + (0..d)
                    .filter(|&i| sub >> i & 1 == 1)
                    .map(|i| (2 - (v >> i & 1)) * pow3[i])
                    .sum::<usize>();
            sinks[idx] = sinks[idx].saturating_add(1);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & in_mask;
        }
    }

    let mut violating = 0u64;
    let mut examples = Vec::new();
    for (idx, &count) in sinks.iter().enumerate() {
        if count == 1 {
            continue;
        }
        violating += 1;
        if examples.len() < 10 {
            let mut face = CubeFace { fixed_mask: 0, fixed_values: 0 };
            let mut rest = idx;
            for i in 0..d {
                match rest % 3 {
                    0 => face.fixed_mask |= 1 << i,
                    1 => {
                        face.fixed_mask |= 1 << i;
                        face.fixed_values |= 1 << i;
                    }
                    _ => {}
                }
                rest /= 3;
            }
            examples.push(FaceViolation { face, sinks: u32::from(count) });
        }
    }
    Ok(ValidationReport {
        faces_checked: pow3[d] as u64,
        violating_faces: violating,
        examples,
        global_sinks: global_sink_count(auso),
    })
}

/// Number of vertices with empty out-set. Rank orientations are acyclic by
/// construction, so this is the whole check available without a face oracle.
pub fn global_sink_count(auso: &Auso) -> usize {
    (0..auso.vertex_count()).filter(|&v| auso.out_degree(v) == 0).count()
}

/// Acyclicity and unique global sink; for cubes also every face.
pub fn validate(auso: &Auso) -> Result<ValidationReport> {
    if auso.graph().is_cube() {
        return validate_cube_faces(auso);
    }
    let sinks = global_sink_count(auso);
    Ok(ValidationReport {
        faces_checked: 0,
        violating_faces: u64::from(sinks != 1),
        examples: Vec::new(),
        global_sinks: sinks,
    })
}

/// Writes the AUSO v1 text format.
pub fn write_auso<W: Write>(auso: &Auso, mut out: W) -> Result<()> {
    let kind = if auso.graph().is_cube() { "cube" } else { "general" };
    writeln!(out, "AUSO v1")?;
    writeln!(out, "kind={kind} d={} n={}", auso.dim(), auso.vertex_count())?;
    for (v, r) in auso.ranks().iter().enumerate() {
        writeln!(out, "{v} {r}")?;
    }
    Ok(())
}

pub fn auso_to_string(auso: &Auso) -> String {
    let mut buf = Vec::new();
    write_auso(auso, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

/// Reads the AUSO v1 text format. `kind=general` files need the graph they orient.
pub fn read_auso<R: BufRead>(input: R, graph: Option<&PolytopeGraph>) -> Result<Auso> {
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, magic) = lines.next().ok_or_else(|| Error::parse(1, "empty file"))?;
    if magic?.trim_end() != "AUSO v1" {
        return Err(Error::parse(1, "expected `AUSO v1`"));
    }
    let (_, header) = lines.next().ok_or_else(|| Error::parse(2, "missing header line"))?;
    let fields = parse_header(2, &header?, &["kind", "d", "n"])?;
    let d: usize = parse_number(2, "dimension", &fields[1])?;
    let n: usize = parse_number(2, "vertex count", &fields[2])?;
    let graph = match fields[0].as_str() {
        "cube" => {
            let cube = build_hypercube(d)?;
            if cube.vertex_count() != n {
                return Err(Error::parse(2, format!("a {d}-cube has {} vertices, not {n}", cube.vertex_count())));
            }
            cube
        }
        "general" => {
            let g = graph.ok_or_else(|| {
                Error::Domain("a kind=general orientation needs its GRAPH v1 file".into())
            })?;
            if g.dim() != d || g.vertex_count() != n || g.kind() == GraphKind::Cube {
                return Err(Error::InvariantViolation(format!(
                    "orientation header d={d} n={n} does not match graph d={} n={}",
                    g.dim(),
                    g.vertex_count()
                )));
            }
            g.clone()
        }
        other => return Err(Error::parse(2, format!("unknown orientation kind `{other}`"))),
    };

    let mut ranks = Vec::with_capacity(n);
    for (line_no, line) in lines {
        let line = line?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() != 2 {
            return Err(Error::parse(line_no, "expected `<vertex-id> <rank>`"));
        }
        let v: usize = parse_number(line_no, "vertex id", tokens[0])?;
        let r: u32 = parse_number(line_no, "rank", tokens[1])?;
        if v != ranks.len() {
            return Err(Error::parse(line_no, format!("expected vertex {} next, found {v}", ranks.len())));
        }
        ranks.push(r);
    }
    if ranks.len() != n {
        return Err(Error::parse(n + 2, format!("expected {n} vertex lines, found {}", ranks.len())));
    }
    auso_from_ranks(graph, ranks)
}

pub fn save_auso(auso: &Auso, path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut out = std::io::BufWriter::new(file);
    write_auso(auso, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn load_auso(path: impl AsRef<Path>, graph: Option<&PolytopeGraph>) -> Result<Auso> {
    read_auso(BufReader::new(std::fs::File::open(path)?), graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::binomial;
    use crate::polytopes::{build_dual_stacked, enumerate_cube_faces};
    use proptest::prelude::*;

    fn binomial_row(d: usize) -> Vec<u64> {
        (0..=d as u64).map(|k| binomial(d as u64, k).try_into().unwrap()).collect()
    }

    /// Face-by-face sink count, independent of the tally in `validate_cube_faces`.
    fn brute_face_violations(auso: &Auso) -> u64 {
        let d = auso.dim();
        enumerate_cube_faces(d)
            .unwrap()
            .filter(|face| {
                let sinks = face
                    .vertices(d)
                    .filter(|&v| (0..d).all(|i| face.fixed_mask >> i & 1 == 1 || auso.rank(v ^ (1 << i)) > auso.rank(v)))
                    .count();
                sinks != 1
            })
            .count() as u64
    }

    #[test]
    fn binary_weights_rank_equals_id() {
        let auso = linear_auso_cube(3, &[1, 2, 4]).unwrap();
        assert!((0..8).all(|v| auso.rank(v) == v as u32));
        assert_eq!((auso.sink(), auso.source()), (0, 7));
        assert_eq!(auso.out_set(7), vec![0b110, 0b101, 0b011]);
        assert_eq!(auso.out_set(0b101), vec![0b100, 0b001]);
        assert!(auso.out_set(0).is_empty());
        assert_eq!(auso.h_vector(), HVector(vec![1, 3, 3, 1]));
    }

    #[test]
    fn tied_weights_are_rejected() {
        assert!(matches!(linear_auso_cube(2, &[1, 1]), Err(Error::NonGeneric(_))));
        assert!(matches!(linear_auso_cube(2, &[1, 0]), Err(Error::NonGeneric(_))));
    }

    #[test]
    fn power_of_two_weights_give_binomial_h_vector() {
        for d in 1..=12 {
            let weights: Vec<i64> = (0..d).map(|i| 1 << i).collect();
            let auso = linear_auso_cube(d, &weights).unwrap();
            assert_eq!(auso.h_vector().0, binomial_row(d));
        }
    }

    #[test]
    fn random_linear_is_deterministic_and_valid() {
        for seed in 0..10 {
            let a = random_linear_auso_cube(5, RngStream::new(seed, 0)).unwrap();
            let b = random_linear_auso_cube(5, RngStream::new(seed, 0)).unwrap();
            assert_eq!(a, b);
            assert!(validate_cube_faces(&a).unwrap().pass());
        }
        for seed in 0..100 {
            let auso = random_linear_auso_cube(6, RngStream::new(seed, 0)).unwrap();
            assert_eq!(auso.h_vector().0, vec![1, 6, 15, 20, 15, 6, 1]);
        }
    }

    #[test]
    fn klee_minty_small() {
        let (km1, _) = klee_minty_auso(1).unwrap();
        assert_eq!(km1.out_set(1), vec![0]);

        let (km2, values) = klee_minty_auso(2).unwrap();
        // Masks: bit 0 is coordinate 1. "10" = 1, "11" = 3, "01" = 2.
        let scaled: Vec<u64> = (0..4).map(|v| klee_minty_scaled_value(2, v)).collect();
        assert_eq!(scaled, vec![0, 3, 9, 6]);
        assert_eq!(km2.vertices_by_rank(), &[0, 1, 3, 2]);
        assert_eq!(km2.source(), 2);
        assert_eq!(km2.out_set(2), vec![3, 0]);
        assert_eq!(km2.out_set(3), vec![1]);
        assert_eq!(km2.out_set(1), vec![0]);
        assert!(values.consistent_with(&km2));
        assert_eq!(km2.h_vector(), HVector(vec![1, 2, 1]));

        for d in 1..=10 {
            let (km, values) = klee_minty_auso(d).unwrap();
            assert!(validate_cube_faces(&km).unwrap().pass(), "d={d}");
            assert!(values.consistent_with(&km));
        }
        assert!(klee_minty_auso(21).is_err());
    }

    #[test]
    fn double_sink_square_fails() {
        let cube = build_hypercube(2).unwrap();
        // 00:0, 11:1, 01:3, 10:2: both 00 and 11 are sinks of the square.
        let auso = auso_from_ranks(cube, vec![0, 3, 2, 1]).unwrap();
        let report = validate_cube_faces(&auso).unwrap();
        assert!(!report.pass());
        assert_eq!(report.violating_faces, 1);
        assert_eq!(report.examples, vec![FaceViolation { face: CubeFace { fixed_mask: 0, fixed_values: 0 }, sinks: 2 }]);
        assert_eq!(brute_face_violations(&auso), 1);
    }

    #[test]
    fn random_permutations_usually_fail() {
        let cube = build_hypercube(3).unwrap();
        let mut stream = RngStream::new(1, 0);
        let mut failures = 0;
        for _ in 0..50 {
            let mut ranks: Vec<u32> = (0..8).collect();
            for i in (1..8).rev() {
                ranks.swap(i, stream.draw_below(i as u64 + 1) as usize);
            }
            let auso = auso_from_ranks(cube.clone(), ranks).unwrap();
            let report = validate_cube_faces(&auso).unwrap();
            assert_eq!(report.violating_faces, brute_face_violations(&auso));
            failures += usize::from(!report.pass());
        }
        assert!(failures > 25, "{failures} of 50 random orders failed");
    }

    #[test]
    fn from_ranks_rejects_non_permutations() {
        let cube = build_hypercube(2).unwrap();
        assert!(matches!(auso_from_ranks(cube.clone(), vec![0, 1, 1, 2]), Err(Error::NonGeneric(_))));
        assert!(matches!(auso_from_ranks(cube.clone(), vec![0, 1, 2, 4]), Err(Error::NonGeneric(_))));
        assert!(matches!(auso_from_ranks(cube, vec![0, 1, 2]), Err(Error::NonGeneric(_))));
    }

    #[test]
    fn identity_ranks_sink_is_rank_zero() {
        let auso = auso_from_ranks(build_hypercube(2).unwrap(), vec![0, 1, 2, 3]).unwrap();
        assert_eq!(auso.sink(), 0);
        assert_eq!(global_sink_count(&auso), 1);
    }

    #[test]
    fn arcs_with_a_cycle_are_rejected() {
        let cube = build_hypercube(2).unwrap();
        // 0 -> 1 -> 3 -> 2 -> 0
        let arcs = [(0, 1), (1, 3), (3, 2), (2, 0)];
        assert!(matches!(auso_from_arcs(cube.clone(), &arcs), Err(Error::Cyclic(_))));
        let acyclic = [(1, 0), (2, 0), (3, 1), (3, 2)];
        let auso = auso_from_arcs(cube.clone(), &acyclic).unwrap();
        assert_eq!((auso.sink(), auso.out_degree(3)), (0, 2));
        assert!(auso_from_arcs(cube, &[(0, 3), (1, 3), (2, 3), (0, 1)]).is_err());
    }

    #[test]
    fn dual_stacked_orientations() {
        let (g, geo) = build_dual_stacked(2, 1, 0).unwrap();
        let (auso, values) = dual_stacked_linear_auso(&g, &geo, RngStream::new(3, 0)).unwrap();
        assert_eq!(global_sink_count(&auso), 1);
        assert_eq!(auso.h_vector(), HVector(vec![1, 2, 1]));
        assert!(values.consistent_with(&auso));

        for d in 2..=4 {
            for cuts in 1..=6 {
                let (g, geo) = build_dual_stacked(d, cuts, cuts as u64).unwrap();
                let (auso, values) = dual_stacked_linear_auso(&g, &geo, RngStream::new(7, 1)).unwrap();
                assert!(validate(&auso).unwrap().pass());
                assert!(values.consistent_with(&auso));
                let n = g.vertex_count() as u64;
                let h = auso.h_vector();
                assert_eq!((h.get(0), h.get(d)), (1, 1));
                assert!((1..d).all(|k| h.get(k) * (d as u64 - 1) == n - 2), "{h:?}");
            }
        }
    }

    #[test]
    fn auso_text_round_trip() {
        let (km, _) = klee_minty_auso(4).unwrap();
        let text = auso_to_string(&km);
        assert!(text.starts_with("AUSO v1\nkind=cube d=4 n=16\n0 0\n"));
        assert_eq!(read_auso(text.as_bytes(), None).unwrap(), km);

        let (g, geo) = build_dual_stacked(3, 3, 2).unwrap();
        let (auso, _) = dual_stacked_linear_auso(&g, &geo, RngStream::new(1, 0)).unwrap();
        let text = auso_to_string(&auso);
        assert!(read_auso(text.as_bytes(), None).is_err());
        assert_eq!(read_auso(text.as_bytes(), Some(&g)).unwrap(), auso);
    }

    #[test]
    fn auso_parse_errors() {
        let dup = "AUSO v1\nkind=cube d=2 n=4\n0 0\n1 1\n2 1\n3 3\n";
        assert!(matches!(read_auso(dup.as_bytes(), None), Err(Error::NonGeneric(_))));
        let order = "AUSO v1\nkind=cube d=2 n=4\n0 0\n2 1\n1 2\n3 3\n";
        assert!(matches!(read_auso(order.as_bytes(), None), Err(Error::Parse { line: 4, .. })));
        let short = "AUSO v1\nkind=cube d=2 n=4\n0 0\n1 1\n";
        assert!(matches!(read_auso(short.as_bytes(), None), Err(Error::Parse { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn linear_orientations_are_ausos(d in 1usize..8, seed in any::<u64>()) {
            let auso = random_linear_auso_cube(d, RngStream::new(seed, 0)).unwrap();
            let report = validate_cube_faces(&auso).unwrap();
            prop_assert!(report.pass());
            let h = auso.h_vector();
            prop_assert_eq!(h.0, binomial_row(d));
            prop_assert_eq!(global_sink_count(&auso), 1);
            let sources = (0..auso.vertex_count()).filter(|&v| auso.out_degree(v) == d).count();
            prop_assert_eq!(sources, 1);
        }

        #[test]
        fn out_and_in_sets_partition_neighbors(seed in any::<u64>(), v in 0usize..32) {
            let auso = random_linear_auso_cube(5, RngStream::new(seed, 3)).unwrap();
            let mut all = auso.out_set(v);
            all.extend(auso.in_set(v));
            all.sort_unstable();
            let neighbors: Vec<usize> = auso.graph().neighbors(v).collect();
            prop_assert_eq!(all, neighbors);
        }

        #[test]
        fn tally_matches_face_by_face_count(seed in any::<u64>()) {
            let cube = build_hypercube(3).unwrap();
            let mut stream = RngStream::new(seed, 0);
            let mut ranks: Vec<u32> = (0..8).collect();
            for i in (1..8).rev() {
                ranks.swap(i, stream.draw_below(i as u64 + 1) as usize);
            }
            let auso = auso_from_ranks(cube, ranks).unwrap();
            prop_assert_eq!(validate_cube_faces(&auso).unwrap().violating_faces, brute_face_violations(&auso));
        }
    }
}
