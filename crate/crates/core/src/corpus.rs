//! Seeded random test cases: parameter pairs, trigonometric boundary data and disc points.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boundary::{BoundaryFunction, TrigPolynomial};
use crate::kernels::{DiskPoint, Params};

/// Highest frequency in corpus boundary data.
pub const MAX_DEGREE: i64 = 8;

/// One `(params, f)` pair.
#[derive(Debug, Clone)]
pub struct Case {
    pub params: Params,
    pub f: BoundaryFunction,
}

/// Deterministic stream of cases and points.
pub struct Corpus {
    rng: ChaCha8Rng,
}

impl Corpus {
    pub fn new(seed: u64) -> Self {
        Corpus { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// `alpha, beta` in `[-0.8, 2]` with `alpha + beta` in `(0.1, 3)` or `(-0.9, -0.1)`.
    pub fn params(&mut self, positive: bool) -> Params {
        loop {
            let a = self.rng.gen_range(-0.8..2.0);
            let b = self.rng.gen_range(-0.8..2.0);
            let s = a + b;
            let ok = if positive { s > 0.1 && s < 3.0 } else { s > -0.9 && s < -0.1 };
            if ok {
                return Params::new(a, b).expect("range excludes negative integers");
            }
        }
    }

    /// Trigonometric polynomial of degree `1..=8` with coefficients decaying like `1/(1+|k|)`.
    pub fn trig(&mut self) -> TrigPolynomial {
        let d = self.rng.gen_range(1..=MAX_DEGREE);
        let mut coeffs = Vec::new();
        for k in -d..=d {
            let scale = 1.0 / (1.0 + k.abs() as f64);
            let c = Complex64::new(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0)) * scale;
            coeffs.push((k, c));
        }
        TrigPolynomial::new(coeffs)
    }

    /// Boundary data with nonnegative frequencies only.
    pub fn analytic_trig(&mut self) -> TrigPolynomial {
        let t = self.trig();
        TrigPolynomial::new(t.coeffs().range(0..).map(|(&k, &c)| (k, c)))
    }

    /// A case whose parameter sum is positive for even `i` and negative for odd `i`.
    pub fn case(&mut self, i: usize) -> Case {
        let params = self.params(i.is_multiple_of(2));
        let f = BoundaryFunction::trig(self.trig()).expect("degree below Nyquist");
        Case { params, f }
    }

    pub fn cases(&mut self, n: usize) -> Vec<Case> {
        (0..n).map(|i| self.case(i)).collect()
    }

    /// Uniform point of the disc `|z| <= rmax`.
    pub fn point(&mut self, rmax: f64) -> DiskPoint {
        let r = rmax * self.rng.gen_range(0.0f64..1.0).sqrt();
        let t = self.rng.gen_range(0.0..2.0 * PI);
        DiskPoint::from_polar(r, t).expect("rmax < 1")
    }

    pub fn points(&mut self, n: usize, rmax: f64) -> Vec<DiskPoint> {
        (0..n).map(|_| self.point(rmax)).collect()
    }
}
