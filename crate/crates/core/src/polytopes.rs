//! Vertex-edge graphs of simple polytopes: hypercubes (with a face oracle) and
//! duals of stacked simplicial polytopes (with exact geometry).

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numerics::{rational_int, solve_linear_system, Rational, RngStream};

pub const MAX_CUBE_DIM: usize = 30;
pub const MAX_FACE_ENUM_DIM: usize = 14;
pub const MAX_STACKED_DIM: usize = 8;
pub const MAX_STACKED_CUTS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphKind {
    Cube,
    DualStacked,
    General,
}

impl GraphKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphKind::Cube => "cube",
            GraphKind::DualStacked => "dual_stacked",
            GraphKind::General => "general",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GraphKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cube" => Ok(GraphKind::Cube),
            "dual_stacked" => Ok(GraphKind::DualStacked),
            "general" => Ok(GraphKind::General),
            other => Err(format!("unknown graph kind `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Adjacency {
    /// Neighbors of `v` are `v ^ (1 << i)`; nothing is stored.
    Cube,
    Lists(Vec<Vec<usize>>),
}

/// Undirected, `d`-regular vertex-edge graph of a simple `d`-polytope.
///
/// Vertices are dense ids in `0..n`. For cubes a vertex id is its coordinate bitmask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeGraph {
    dim: usize,
    n: usize,
    kind: GraphKind,
    adjacency: Adjacency,
}

/// Neighbors of a vertex in increasing id order.
pub enum Neighbors<'a> {
    Cube { v: usize, dim: usize, step: usize },
    List(std::slice::Iter<'a, usize>),
}

impl Iterator for Neighbors<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        match self {
            Neighbors::List(it) => it.next().copied(),
            Neighbors::Cube { v, dim, step } => {
                // Set bits from high to low give v - 2^i ascending, then unset bits
                // from low to high give v + 2^i ascending.
                while *step < 2 * *dim {
                    let s = *step;
                    *step += 1;
                    if s < *dim {
                        let bit = 1usize << (*dim - 1 - s);
                        if *v & bit != 0 {
                            return Some(*v ^ bit);
                        }
                    } else {
                        let bit = 1usize << (s - *dim);
                        if *v & bit == 0 {
                            return Some(*v ^ bit);
                        }
                    }
                }
                None
            }
        }
    }
}

impl PolytopeGraph {
    /// Builds a graph from explicit adjacency lists and checks every structural invariant.
    pub fn from_adjacency(kind: GraphKind, dim: usize, mut lists: Vec<Vec<usize>>) -> Result<Self> {
        let n = lists.len();
        if dim == 0 {
            return Err(Error::InvariantViolation("dimension must be positive".into()));
        }
        if n == 0 {
            return Err(Error::InvariantViolation("graph has no vertices".into()));
        }
        for (v, list) in lists.iter_mut().enumerate() {
            list.sort_unstable();
            if list.len() != dim {
                return Err(Error::InvariantViolation(format!(
                    "vertex {v} has {} neighbors, expected {dim}",
                    list.len()
                )));
            }
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvariantViolation(format!("vertex {v} has a repeated neighbor")));
            }
            if let Some(&w) = list.iter().find(|&&w| w == v || w >= n) {
                return Err(Error::InvariantViolation(format!("vertex {v} has invalid neighbor {w}")));
            }
        }
        for (v, list) in lists.iter().enumerate() {
            for &w in list {
                if lists[w].binary_search(&v).is_err() {
                    return Err(Error::InvariantViolation(format!("edge {v}-{w} is not symmetric")));
                }
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &w in &lists[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        if reached != n {
            return Err(Error::InvariantViolation(format!(
                "graph is disconnected ({reached} of {n} vertices reachable from 0)"
            )));
        }

        if kind == GraphKind::Cube {
            if dim > MAX_CUBE_DIM || n != 1usize << dim {
                return Err(Error::InvariantViolation(format!(
                    "cube of dimension {dim} must have 2^{dim} vertices, found {n}"
                )));
            }
            for (v, list) in lists.iter().enumerate() {
                if let Some(&w) = list.iter().find(|&&w| (v ^ w).count_ones() != 1) {
                    return Err(Error::InvariantViolation(format!(
                        "cube vertices {v} and {w} differ in more than one coordinate"
                    )));
                }
            }
            return Ok(PolytopeGraph { dim, n, kind, adjacency: Adjacency::Cube });
        }
        Ok(PolytopeGraph { dim, n, kind, adjacency: Adjacency::Lists(lists) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.n * self.dim / 2
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn is_cube(&self) -> bool {
        self.kind == GraphKind::Cube
    }

    pub fn neighbors(&self, v: usize) -> Neighbors<'_> {
        match &self.adjacency {
            Adjacency::Cube => Neighbors::Cube { v, dim: self.dim, step: 0 },
            Adjacency::Lists(lists) => Neighbors::List(lists[v].iter()),
        }
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        match &self.adjacency {
            Adjacency::Cube => (u ^ v).count_ones() == 1,
            Adjacency::Lists(lists) => lists[u].binary_search(&v).is_ok(),
        }
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn degree_histogram(&self) -> HashMap<usize, usize> {
        let mut hist = HashMap::new();
        for v in 0..self.n {
            *hist.entry(self.neighbors(v).count()).or_insert(0) += 1;
        }
        hist
    }
}

pub fn build_hypercube(d: usize) -> Result<PolytopeGraph> {
    if d == 0 {
        return Err(Error::Domain("cube dimension must be positive".into()));
    }
    if d > MAX_CUBE_DIM {
        return Err(Error::DimensionTooLarge { d, max: MAX_CUBE_DIM });
    }
    Ok(PolytopeGraph { dim: d, n: 1 << d, kind: GraphKind::Cube, adjacency: Adjacency::Cube })
}

/// A nonempty face of the `d`-cube: coordinates in `fixed_mask` are pinned to
/// the matching bits of `fixed_values`, the rest are free.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CubeFace {
    pub fixed_mask: u64,
    pub fixed_values: u64,
}

impl CubeFace {
    pub fn full() -> Self {
        CubeFace { fixed_mask: 0, fixed_values: 0 }
    }

    pub fn free_mask(&self, d: usize) -> u64 {
        !self.fixed_mask & low_mask(d)
    }

    pub fn dim(&self, d: usize) -> usize {
        self.free_mask(d).count_ones() as usize
    }

    pub fn contains(&self, v: usize) -> bool {
        (v as u64) & self.fixed_mask == self.fixed_values
    }

    /// Vertices of the face in increasing order.
    pub fn vertices(&self, d: usize) -> impl Iterator<Item = usize> {
        let free = self.free_mask(d);
        let base = self.fixed_values;
        let count = 1u64 << free.count_ones();
        let mut sub = 0u64;
        (0..count).map(move |_| {
            let v = base | sub;
            sub = (sub.wrapping_sub(free)) & free;
            v as usize
        })
    }
}

pub(crate) fn low_mask(d: usize) -> u64 {
    if d >= 64 {
        u64::MAX
    } else {
        (1u64 << d) - 1
    }
}

/// Every nonempty face of the `d`-cube exactly once: `3^d` items.
pub struct CubeFaces {
    d: usize,
    mask: u64,
    sub: u64,
    done: bool,
}

impl Iterator for CubeFaces {
    type Item = CubeFace;

    fn next(&mut self) -> Option<CubeFace> {
        if self.done {
            return None;
        }
        let face = CubeFace { fixed_mask: self.mask, fixed_values: self.sub };
        if self.sub == 0 {
            self.mask += 1;
            if self.mask > low_mask(self.d) {
                self.done = true;
            }
            self.sub = self.mask;
        } else {
            self.sub = (self.sub - 1) & self.mask;
        }
        Some(face)
    }
}

pub fn enumerate_cube_faces(d: usize) -> Result<CubeFaces> {
    enumerate_cube_faces_with_guard(d, MAX_FACE_ENUM_DIM)
}

pub fn enumerate_cube_faces_with_guard(d: usize, max_d: usize) -> Result<CubeFaces> {
    if d > max_d || d > 40 {
        return Err(Error::DimensionTooLarge { d, max: max_d.min(40) });
    }
    Ok(CubeFaces { d, mask: 0, sub: 0, done: false })
}

/// Exact geometry of a stacked simplicial polytope containing the origin.
///
/// Each facet `F` carries the normal `a` with `a . p = 1` for `p` in `F` and
/// `a . p < 1` for every other point; facet `i` is vertex `i` of the dual graph.
#[derive(Clone, Debug, PartialEq)]
pub struct StackedGeometry {
    pub dim: usize,
    pub points: Vec<Vec<Rational>>,
    pub facets: Vec<Vec<usize>>,
    pub facet_normals: Vec<Vec<Rational>>,
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

impl StackedGeometry {
    fn normal_of(points: &[Vec<Rational>], facet: &[usize]) -> Result<Vec<Rational>> {
        let rows: Vec<Vec<Rational>> = facet.iter().map(|&i| points[i].clone()).collect();
        let ones = vec![Rational::one(); facet.len()];
        solve_linear_system(&rows, &ones)
    }

    /// `a . p` for the normal of `facet` and point `point`.
    pub fn evaluate(&self, facet: usize, point: usize) -> Rational {
        dot(&self.facet_normals[facet], &self.points[point])
    }

    /// Checks `a . p = 1` on every facet and `a . p < 1` off it.
    pub fn check(&self) -> Result<()> {
        for (f, facet) in self.facets.iter().enumerate() {
            for p in 0..self.points.len() {
                let value = self.evaluate(f, p);
                let on_facet = facet.contains(&p);
                if on_facet && !value.is_one() {
                    return Err(Error::InvariantViolation(format!("point {p} is off its facet {f}")));
                }
                if !on_facet && value >= Rational::one() {
                    return Err(Error::InvariantViolation(format!(
                        "point {p} is not strictly beneath facet {f}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Facet adjacency graph: two facets are adjacent iff they share `d - 1` points.
    pub fn dual_graph(&self) -> Result<PolytopeGraph> {
        let mut ridges: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for (f, facet) in self.facets.iter().enumerate() {
            for skip in 0..facet.len() {
                let ridge: Vec<usize> =
                    facet.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &p)| p).collect();
                ridges.entry(ridge).or_default().push(f);
            }
        }
        let mut lists = vec![Vec::with_capacity(self.dim); self.facets.len()];
        for (ridge, owners) in &ridges {
            if owners.len() != 2 {
                return Err(Error::InvariantViolation(format!(
                    "ridge {ridge:?} lies in {} facets",
                    owners.len()
                )));
            }
            lists[owners[0]].push(owners[1]);
            lists[owners[1]].push(owners[0]);
        }
        PolytopeGraph::from_adjacency(GraphKind::DualStacked, self.dim, lists)
    }
}

/// Graph of the dual of a stacked `d`-polytope after `cuts` stacking operations.
///
/// Starts from the simplex on `e_1, ..., e_d, -(1, ..., 1)`. Each cut picks a
/// facet uniformly (stream `(seed, 0)`) and adds a point just beyond it, at
/// `barycenter * (1 + delta)` with `delta` halved from 1 until the point is
/// beneath every other facet.
pub fn build_dual_stacked(d: usize, cuts: usize, seed: u64) -> Result<(PolytopeGraph, StackedGeometry)> {
    if d < 2 {
        return Err(Error::Domain(format!("dual stacked polytopes need d >= 2, got {d}")));
    }
    if d > MAX_STACKED_DIM {
        return Err(Error::DimensionTooLarge { d, max: MAX_STACKED_DIM });
    }
    if cuts > MAX_STACKED_CUTS {
        return Err(Error::GuardExceeded { estimate: cuts as f64, limit: MAX_STACKED_CUTS as f64 });
    }

    let mut points: Vec<Vec<Rational>> = (0..d)
        .map(|i| (0..d).map(|j| rational_int(i64::from(i == j))).collect())
        .collect();
    points.push(vec![rational_int(-1); d]);

    let mut facets: Vec<Vec<usize>> =
        (0..=d).map(|skip| (0..=d).filter(|&p| p != skip).collect()).collect();
    let mut normals = facets
        .iter()
        .map(|f| StackedGeometry::normal_of(&points, f))
        .collect::<Result<Vec<_>>>()?;

    let mut stream = RngStream::new(seed, 0);
    let d_rat = rational_int(d as i64);
    for _ in 0..cuts {
        let target = stream.draw_below(facets.len() as u64) as usize;
        let barycenter: Vec<Rational> = (0..d)
            .map(|c| facets[target].iter().fold(Rational::zero(), |acc, &p| acc + &points[p][c]) / &d_rat)
            .collect();

        let mut delta = Rational::one();
        let new_point = loop {
            let scale = Rational::one() + &delta;
            let q: Vec<Rational> = barycenter.iter().map(|x| x * &scale).collect();
            let beneath_others = normals
                .iter()
                .enumerate()
                .all(|(f, a)| f == target || dot(a, &q) < Rational::one());
            if beneath_others {
                break q;
            }
            delta /= rational_int(2);
        };

        let q_id = points.len();
        points.push(new_point);
        let old = facets[target].clone();
        let mut replacement = old.iter().map(|&drop| {
            let mut f: Vec<usize> = old.iter().copied().filter(|&p| p != drop).collect();
            f.push(q_id);
            f
        });
        let first = replacement.next().expect("facet has d >= 2 points");
        normals[target] = StackedGeometry::normal_of(&points, &first)?;
        facets[target] = first;
        for f in replacement {
            normals.push(StackedGeometry::normal_of(&points, &f)?);
            facets.push(f);
        }
    }

    let geometry = StackedGeometry { dim: d, points, facets, facet_normals: normals };
    let graph = geometry.dual_graph()?;
    Ok((graph, geometry))
}

/// Writes the GRAPH v1 text format.
pub fn write_graph<W: Write>(graph: &PolytopeGraph, mut out: W) -> Result<()> {
    writeln!(out, "GRAPH v1")?;
    writeln!(out, "kind={} d={} n={}", graph.kind(), graph.dim(), graph.vertex_count())?;
    for (u, v) in graph.edges() {
        writeln!(out, "e {u} {v}")?;
    }
    Ok(())
}

pub fn graph_to_string(graph: &PolytopeGraph) -> String {
    let mut buf = Vec::new();
    write_graph(graph, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

/// Parses `key=value` tokens of a header line, requiring exactly the given keys in order.
pub(crate) fn parse_header(line_no: usize, line: &str, keys: &[&str]) -> Result<Vec<String>> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() != keys.len() {
        return Err(Error::parse(line_no, format!("expected header `{}`", keys.join("=.. ") + "=..")));
    }
    tokens
        .iter()
        .zip(keys)
        .map(|(tok, key)| {
            tok.strip_prefix(key)
                .and_then(|rest| rest.strip_prefix('='))
                .map(str::to_owned)
                .ok_or_else(|| Error::parse(line_no, format!("expected `{key}=...`, found `{tok}`")))
        })
        .collect()
}

pub(crate) fn parse_number<T: FromStr>(line_no: usize, what: &str, s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::parse(line_no, format!("invalid {what} `{s}`")))
}

/// Reads the GRAPH v1 text format.
pub fn read_graph<R: BufRead>(input: R) -> Result<PolytopeGraph> {
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, magic) = lines.next().ok_or_else(|| Error::parse(1, "empty file"))?;
    if magic?.trim_end() != "GRAPH v1" {
        return Err(Error::parse(1, "expected `GRAPH v1`"));
    }
    let (_, header) = lines.next().ok_or_else(|| Error::parse(2, "missing header line"))?;
    let fields = parse_header(2, &header?, &["kind", "d", "n"])?;
    let kind: GraphKind = fields[0].parse().map_err(|e: String| Error::parse(2, e))?;
    let d: usize = parse_number(2, "dimension", &fields[1])?;
    let n: usize = parse_number(2, "vertex count", &fields[2])?;
    if n > 1 << MAX_CUBE_DIM.min(26) {
        return Err(Error::parse(2, format!("vertex count {n} is too large")));
    }

    let mut lists = vec![Vec::new(); n];
    for (line_no, line) in lines {
        let line = line?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() != 3 || tokens[0] != "e" {
            return Err(Error::parse(line_no, "expected `e <u> <v>`"));
        }
        let u: usize = parse_number(line_no, "vertex id", tokens[1])?;
        let v: usize = parse_number(line_no, "vertex id", tokens[2])?;
        if u >= v {
            return Err(Error::parse(line_no, format!("edge `{u} {v}` must be listed with u < v")));
        }
        if v >= n {
            return Err(Error::parse(line_no, format!("vertex {v} out of range for n={n}")));
        }
        if lists[u].contains(&v) {
            return Err(Error::parse(line_no, format!("duplicate edge {u}-{v}")));
        }
        lists[u].push(v);
        lists[v].push(u);
    }
    PolytopeGraph::from_adjacency(kind, d, lists)
}

pub fn save_graph(graph: &PolytopeGraph, path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut out = std::io::BufWriter::new(file);
    write_graph(graph, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<PolytopeGraph> {
    read_graph(BufReader::new(std::fs::File::open(path)?))
}
