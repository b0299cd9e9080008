//! Browser bindings for the ausolab demo page.
//!
//! Everything crossing the boundary is a flat numeric array so the page can
//! stay framework-free.

use ausolab::bounds::{check_dehn_sommerville, check_unimodal, dual_bound, maxmin_bound, theorem1_bound};
use ausolab::orientations::{klee_minty_auso, random_linear_auso_cube};
use ausolab::walks::{expected_visits_f64, greatest_decrease_walk, monte_carlo, random_edge_walk, PivotRule};
use ausolab::{Auso, HVector, Rational, RngStream};
use num_traits::ToPrimitive;
use wasm_bindgen::prelude::*;

pub const MAX_SWEEP_DIM: u32 = 16;
pub const MAX_CUBE_DIM: u32 = 8;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn sweep_rows(max_d: u32) -> Result<Vec<f64>, String> {
    if max_d == 0 || max_d > MAX_SWEEP_DIM {
        return Err(format!("max_d must be in 1..={MAX_SWEEP_DIM}"));
    }
    let mut rows = Vec::with_capacity(4 * max_d as usize);
    for d in 1..=max_d as usize {
        let (km, _) = klee_minty_auso(d).map_err(|e| e.to_string())?;
        let expected = expected_visits_f64(&km)[km.source()];
        let t1 = theorem1_bound(km.vertex_count() as u64, d as u64).map_err(|e| e.to_string())?;
        rows.extend([d as f64, expected, ratio(&maxmin_bound(&km.h_vector())), t1.to_f64()]);
    }
    Ok(rows)
}

fn bounds_row(h: Vec<u32>) -> Result<Vec<f64>, String> {
    if h.len() < 2 {
        return Err("an h-vector needs at least two entries".into());
    }
    let hvec = HVector(h.into_iter().map(u64::from).collect());
    let duals = [(1, 4), (1, 2), (1, 1)].map(|(a, b)| ratio(&dual_bound(&hvec, &Rational::new(a.into(), b.into()))));
    let t1 = theorem1_bound(hvec.vertex_count(), hvec.dim() as u64).map(|b| b.to_f64()).unwrap_or(f64::NAN);
    let flag = |b: bool| if b { 1.0 } else { 0.0 };
    let mut out = vec![ratio(&maxmin_bound(&hvec))];
    out.extend(duals);
    out.extend([t1, flag(check_dehn_sommerville(&hvec)), flag(check_unimodal(&hvec))]);
    Ok(out)
}

fn build_cube(family: &str, d: u32, seed: u32) -> Result<Auso, String> {
    if d == 0 || d > MAX_CUBE_DIM {
        return Err(format!("d must be in 1..={MAX_CUBE_DIM}"));
    }
    let auso = match family {
        "klee-minty" => klee_minty_auso(d as usize).map(|(a, _)| a),
        "cube-linear" => random_linear_auso_cube(d as usize, RngStream::new(seed.into(), 0)),
        other => return Err(format!("unknown family `{other}`")),
    };
    auso.map_err(|e| e.to_string())
}

fn ratio(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Rows of `[d, expected, maxmin, 13n/sqrt(d)]` for Klee-Minty cubes of
/// dimension `1..=max_d`, flattened.
#[wasm_bindgen]
pub fn klee_minty_sweep(max_d: u32) -> Result<Vec<f64>, JsError> {
    sweep_rows(max_d).map_err(js_err)
}

/// `[maxmin, dual(1/4), dual(1/2), dual(1), 13n/sqrt(d), symmetric, unimodal]`
/// for an h-vector typed by hand.
#[wasm_bindgen]
pub fn hvector_bounds(h: Vec<u32>) -> Result<Vec<f64>, JsError> {
    bounds_row(h).map_err(js_err)
}

/// A small cube orientation the page can draw and walk on.
#[wasm_bindgen]
pub struct Cube {
    auso: Auso,
}

#[wasm_bindgen]
impl Cube {
    /// `family` is `klee-minty` or `cube-linear`; `seed` only matters for the latter.
    #[wasm_bindgen(constructor)]
    pub fn new(family: &str, d: u32, seed: u32) -> Result<Cube, JsError> {
        build_cube(family, d, seed).map(|auso| Cube { auso }).map_err(js_err)
    }

    pub fn dim(&self) -> u32 {
        self.auso.dim() as u32
    }

    pub fn ranks(&self) -> Vec<u32> {
        self.auso.ranks().to_vec()
    }

    pub fn source(&self) -> u32 {
        self.auso.source() as u32
    }

    /// Expected number of vertices a random-edge walk visits from `start`.
    pub fn expected(&self, start: u32) -> f64 {
        expected_visits_f64(&self.auso)[start as usize]
    }

    pub fn random_edge(&self, start: u32, seed: u32) -> Vec<u32> {
        let (trace, _) = random_edge_walk(&self.auso, start as usize, RngStream::new(seed.into(), 0));
        trace.vertices.into_iter().map(|v| v as u32).collect()
    }

    pub fn greatest_decrease(&self, start: u32) -> Vec<u32> {
        greatest_decrease_walk(&self.auso, start as usize).vertices.into_iter().map(|v| v as u32).collect()
    }

    /// `[mean, stderr]` of the random-edge walk length over `trials` runs.
    pub fn sample(&self, start: u32, trials: u32, seed: u32) -> Result<Vec<f64>, JsError> {
        let stats = monte_carlo(&self.auso, start as usize, PivotRule::RandomEdge, trials.into(), seed.into())
            .map_err(js_err)?;
        Ok(vec![stats.mean, stats.stderr])
    }
}
