//! Exact arithmetic, combinatorial counts and the counter-based random stream
//! that every randomized routine in the crate draws from.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rational_int(value: impl Into<BigInt>) -> Rational {
    Rational::from_integer(value.into())
}

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc * (n - i) is always divisible by (i + 1) at this point.
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Falling factorial power `a (a-1) ... (a-b+1)`.
pub fn falling_factorial(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    (0..b).fold(BigUint::one(), |acc, i| acc * (a - i))
}

/// Base-2 binary entropy `x log(1/x) + (1-x) log(1/(1-x))`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("binary entropy needs 0 < x < 1, got {x}")));
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// Solves `a * x = b` exactly by Gauss-Jordan elimination.
pub fn solve_linear_system(a: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Rational>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::Domain(format!(
            "expected a square {n}x{n} system with {n} right-hand sides"
        )));
    }
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::SingularMatrix)?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for entry in m[col][col..].iter_mut() {
            *entry *= &inv;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (entry, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *entry -= &factor * p;
            }
        }
    }
    Ok(m.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Keyed counter-based random stream.
///
/// The word at position `counter` is a pure function of `(seed, stream_id, counter)`,
/// so trial `i` of an experiment can be handed `stream_id = i` and reproduced in
/// isolation, on any worker, in any order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
    pub counter: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id, counter: 0 }
    }

    fn key(&self) -> u64 {
        mix64(self.seed ^ mix64(self.stream_id.wrapping_add(0x6A09_E667_F3BC_C909)))
    }

    /// The word at the current position, without advancing.
    pub fn peek(&self) -> u64 {
        let key = self.key();
        let x = key.wrapping_add(self.counter.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
        mix64(mix64(x) ^ key.rotate_left(17))
    }

    pub fn next_u64(self) -> (u64, RngStream) {
        let word = self.peek();
        (word, RngStream { counter: self.counter.wrapping_add(1), ..self })
    }

    /// Unbiased draw from `[0, n)` (Lemire's multiply-and-reject).
    ///
    /// Panics if `n == 0`.
    pub fn uniform_below(self, n: u64) -> (u64, RngStream) {
        assert!(n > 0, "uniform_below needs n >= 1");
        let mut stream = self;
        let threshold = n.wrapping_neg() % n;
        loop {
            let (word, next) = stream.next_u64();
            stream = next;
            let product = u128::from(word) * u128::from(n);
            if (product as u64) >= threshold {
                return ((product >> 64) as u64, stream);
            }
        }
    }

    /// Uniform float in `[0, 1)` with 53 random bits.
    pub fn next_f64(self) -> (f64, RngStream) {
        let (word, next) = self.next_u64();
        ((word >> 11) as f64 * (1.0 / (1u64 << 53) as f64), next)
    }

    /// In-place variant of [`RngStream::uniform_below`].
    pub fn draw_below(&mut self, n: u64) -> u64 {
        let (value, next) = self.uniform_below(n);
        *self = next;
        value
    }

    pub fn draw_u64(&mut self) -> u64 {
        let (value, next) = self.next_u64();
        *self = next;
        value
    }
}
