//! Upper bounds on the expected Random-Edge path length and the combinatorial
//! estimates they are assembled from.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numerics::{binary_entropy, binomial, rational, rational_int, Rational};
use crate::orientations::{Auso, HVector};
use crate::reach::{gamma_lower_formula, reach_report};
use crate::walks::{expected_visits_exact, DpMode};

/// `13 n / sqrt(d)`, kept symbolic so comparisons stay exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Theorem1Bound {
    pub n: u64,
    pub d: u64,
}

impl Theorem1Bound {
    pub fn to_f64(&self) -> f64 {
        13.0 * self.n as f64 / (self.d as f64).sqrt()
    }

    /// The bound as a rational when `d` is a perfect square.
    pub fn exact(&self) -> Option<Rational> {
        let root = self.d.sqrt();
        (root * root == self.d).then(|| Rational::new(BigInt::from(13u64) * self.n, BigInt::from(root)))
    }

    /// `r <= 13 n / sqrt(d)`, decided as `r^2 d <= 169 n^2` for `r >= 0`.
    pub fn admits(&self, r: &Rational) -> bool {
        if r.is_negative() {
            return true;
        }
        let lhs = r * r * rational_int(self.d);
        let n = BigInt::from(self.n);
        lhs <= Rational::from_integer(BigInt::from(169) * &n * &n)
    }
}

impl fmt::Display for Theorem1Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact() {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "{:.6}", self.to_f64()),
        }
    }
}

pub fn theorem1_bound(n: u64, d: u64) -> Result<Theorem1Bound> {
    if d < 1 || n < d + 1 {
        return Err(Error::Domain(format!("13n/sqrt(d) needs n >= d+1 >= 2, got n={n}, d={d}")));
    }
    Ok(Theorem1Bound { n, d })
}

fn cost(k: usize) -> Rational {
    rational(k as i64 + 3, 4)
}

/// `max { sum x_k : sum (k+3)/4 x_k = n, 0 <= x_k <= h_k }`, filled greedily
/// from the cheapest degree up. Returns `n` if the caps run out first.
pub fn maxmin_bound(hvec: &HVector) -> Rational {
    let n = rational_int(hvec.vertex_count());
    let mut budget = n.clone();
    let mut total = Rational::zero();
    for (k, &h) in hvec.0.iter().enumerate() {
        let c = cost(k);
        let full = &c * rational_int(h);
        if full <= budget {
            budget -= full;
            total += rational_int(h);
        } else {
            return total + budget / c;
        }
    }
    n
}

/// `sum_k h_k max{y, 1 - (k-1)/4 y}`.
pub fn dual_bound(hvec: &HVector, y: &Rational) -> Rational {
    hvec.0
        .iter()
        .enumerate()
        .map(|(k, &h)| {
            let other = Rational::one() - rational(k as i64 - 1, 4) * y;
            rational_int(h) * std::cmp::max(y.clone(), other)
        })
        .fold(Rational::zero(), |acc, x| acc + x)
}

/// Sample points for [`dual_bound`]: 1/4, 1/2, 1 and `1/sqrt(d)` to three decimals.
pub fn dual_samples(d: usize) -> Vec<Rational> {
    let mut ys = vec![rational(1, 4), rational(1, 2), rational(1, 1)];
    if d >= 1 {
        let approx = (1000.0 / (d as f64).sqrt()).round() as i64;
        ys.push(rational(approx, 1000));
    }
    ys
}

pub fn check_dehn_sommerville(hvec: &HVector) -> bool {
    let h = &hvec.0;
    h.iter().eq(h.iter().rev())
}

pub fn check_unimodal(hvec: &HVector) -> bool {
    let half = hvec.dim() / 2;
    hvec.0[..=half.min(hvec.0.len().saturating_sub(1))].windows(2).all(|w| w[0] <= w[1])
}

/// `C(d, floor(4 sqrt d)) <= 2^d / (d - 8 sqrt d)` on the cube h-vector, decided
/// exactly as `C d - 2^d <= 8 C sqrt d`.
pub fn hsqrt_inequality_check(d: u64) -> Result<bool> {
    if d <= 64 {
        return Err(Error::Domain(format!("the middle h-vector estimate needs d > 64, got {d}")));
    }
    let m = (16 * d).sqrt();
    let c = BigInt::from(binomial(d, m));
    let lhs = &c * d - (BigInt::one() << d);
    if !lhs.is_positive() {
        return Ok(true);
    }
    Ok(&lhs * &lhs <= BigInt::from(64u64 * d) * &c * &c)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyCheck {
    pub d: u64,
    /// `sum_{i < floor(d/4)} C(d, i)`.
    pub h_below: BigUint,
    /// `H(1/4) d`, the base-2 logarithm of the bound.
    pub bound_log2: f64,
    pub ok: bool,
}

fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().log2();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().log2() + shift as f64
}

pub fn entropy_sum_check(d: u64) -> Result<EntropyCheck> {
    if d < 8 {
        return Err(Error::Domain(format!("entropy estimate needs d >= 8, got {d}")));
    }
    let h_below: BigUint = (0..d / 4).map(|i| binomial(d, i)).sum();
    let bound_log2 = binary_entropy(0.25)? * d as f64;
    let ok = log2_big(&h_below) <= bound_log2 * (1.0 + 2f64.powi(-20));
    Ok(EntropyCheck { d, h_below, bound_log2, ok })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundFCheck {
    pub f_actual: usize,
    /// `(d^t - 1)/(d - 1) h_{<k}`, summed as `sum_{i<t} d^i h_{<k}`.
    pub f_bound: BigUint,
    pub ok: bool,
}

fn reach_volume(d: u64, t: usize) -> BigUint {
    (0..t).map(|i| BigUint::from(d).pow(i as u32)).sum()
}

pub fn bound_f_check(auso: &Auso, t: usize, k: usize) -> Result<BoundFCheck> {
    if t == 0 {
        return Err(Error::Domain("bound on f(t,k) needs t >= 1".into()));
    }
    let f_actual = reach_report(auso, t, k).f;
    let f_bound = reach_volume(auso.dim() as u64, t) * auso.h_vector().below(k);
    Ok(BoundFCheck { ok: BigUint::from(f_actual) <= f_bound, f_actual, f_bound })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReachGen {
    Value(Rational),
    Inapplicable(String),
}

impl ReachGen {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            ReachGen::Value(v) => Some(v),
            ReachGen::Inapplicable(_) => None,
        }
    }
}

/// `4 t d^t n / (g (g - 2t)) + f`. `g = None` stands for no good vertex.
pub fn reachgen_bound(n: &BigUint, d: u64, t: usize, g: Option<&Rational>, f: &BigUint) -> Result<ReachGen> {
    if t < 2 {
        return Err(Error::Domain("the reach bound needs t >= 2".into()));
    }
    let Some(g) = g else {
        return Ok(ReachGen::Inapplicable("no (t,k)-good vertex".into()));
    };
    let two_t = rational_int(2 * t as i64);
    if *g <= two_t {
        return Ok(ReachGen::Inapplicable(format!("g = {g} <= 2t = {two_t}")));
    }
    let numer = rational_int(BigInt::from(4 * t as u64) * BigInt::from(d).pow(t as u32) * BigInt::from(n.clone()));
    let first = numer / (g * (g - two_t));
    Ok(ReachGen::Value(first + Rational::from_integer(BigInt::from(f.clone()))))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CubeReachReport {
    pub d: u64,
    pub t: usize,
    /// `floor(d/4)`.
    pub k: usize,
    pub g_lb: Rational,
    pub h_below: BigUint,
    pub f_ub: BigUint,
    pub bound: ReachGen,
    /// Whether the bound is smaller than the number of vertices `2^d`.
    pub below_vertex_count: Option<bool>,
}

/// Reach bound valid for every AUSO of the `d`-cube, with `k = floor(d/4)`.
pub fn cube_reach_bound(d: u64, t: usize) -> Result<CubeReachReport> {
    if t < 2 || d < 4 * t as u64 {
        return Err(Error::Domain(format!("cube reach bound needs t >= 2 and d >= 4t, got d={d}, t={t}")));
    }
    let k = (d / 4) as usize;
    let g_lb = gamma_lower_formula(d as usize, t, k);
    let h_below: BigUint = (0..k as u64).map(|i| binomial(d, i)).sum();
    let f_ub = reach_volume(d, t) * &h_below;
    let n = BigUint::one() << d;
    let bound = reachgen_bound(&n, d, t, Some(&g_lb), &f_ub)?;
    let below_vertex_count = bound.value().map(|v| *v < Rational::from_integer(BigInt::from(n)));
    Ok(CubeReachReport { d, t, k, g_lb, h_below, f_ub, bound, below_vertex_count })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TkBounds {
    pub t: usize,
    pub k: usize,
    pub f: usize,
    pub g: Option<usize>,
    /// `None` for `t < 2`.
    pub reachgen: Option<ReachGen>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundSheet {
    pub family: String,
    pub d: usize,
    pub n: usize,
    pub hvec: HVector,
    pub exact_expected: Option<Rational>,
    pub theorem1: Option<Theorem1Bound>,
    pub maxmin: Rational,
    pub dual: Vec<(Rational, Rational)>,
    pub per_tk: Vec<TkBounds>,
}

impl BoundSheet {
    /// Names of bounds that fall below the exact expectation.
    pub fn violations(&self) -> Vec<String> {
        let Some(e) = &self.exact_expected else {
            return Vec::new();
        };
        let mut bad = Vec::new();
        if self.theorem1.is_some_and(|b| !b.admits(e)) {
            bad.push("theorem1".to_string());
        }
        if *e > self.maxmin {
            bad.push("maxmin".to_string());
        }
        for (y, v) in &self.dual {
            if e > v {
                bad.push(format!("dual(y={y})"));
            }
        }
        for tk in &self.per_tk {
            if let Some(ReachGen::Value(v)) = &tk.reachgen {
                if e > v {
                    bad.push(format!("reachgen(t={},k={})", tk.t, tk.k));
                }
            }
        }
        bad
    }
}

/// Evaluates every bound on `auso`; the exact expectation from the source is
/// included when `mode` is given and the instance is within the DP guard.
pub fn bound_sheet(auso: &Auso, family: &str, mode: Option<DpMode>, tks: &[(usize, usize)]) -> Result<BoundSheet> {
    let d = auso.dim();
    let n = auso.vertex_count();
    let hvec = auso.h_vector();
    let exact_expected = match mode {
        Some(_) => Some(expected_visits_exact(auso)?.swap_remove(auso.source())),
        None => None,
    };
    let maxmin = maxmin_bound(&hvec);
    let dual = dual_samples(d).into_iter().map(|y| {
        let v = dual_bound(&hvec, &y);
        (y, v)
    });
    let per_tk = tks
        .iter()
        .map(|&(t, k)| {
            let report = reach_report(auso, t, k);
            let reachgen = if t >= 2 {
                let g = report.g.map(|g| rational_int(g as i64));
                Some(reachgen_bound(&BigUint::from(n), d as u64, t, g.as_ref(), &BigUint::from(report.f))?)
            } else {
                None
            };
            Ok(TkBounds { t, k, f: report.f, g: report.g, reachgen })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundSheet {
        family: family.to_string(),
        d,
        n,
        exact_expected,
        theorem1: theorem1_bound(n as u64, d as u64).ok(),
        maxmin,
        dual: dual.collect(),
        per_tk,
        hvec,
    })
}
