//! The `(alpha, beta)` Poisson kernel family.
//!
//! `K_{a,b}(z) = (1 - |z|^2)^{a+b+1} / ((1 - z)^{a+1} (1 - zbar)^{b+1})`, its Wirtinger
//! derivatives, the radial integrals `I_lambda(r)` and the radial solutions
//! `M_{alpha,beta}` and `M_{alpha,beta,k}`.
//!
//! Powers of `1 - z` use the principal branch. `Re(1 - z) > 0` on the open disc,
//! so the branch cut is never crossed and `(1 - zbar)^s` is the conjugate of
//! `(1 - z)^s` for real `s`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::special_fn::{self, gamma, hyp2f1, HypParams};

/// The parameter pair `(alpha, beta)`; neither may be a negative integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub alpha: f64,
    pub beta: f64,
}

fn negative_integer(x: f64) -> bool {
    special_fn::nonpositive_integer(x).is_some_and(|m| m < 0)
}

impl Params {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(domain("alpha and beta must be finite"));
        }
        if negative_integer(alpha) || negative_integer(beta) {
            return Err(domain(format!("({alpha}, {beta}): alpha and beta must not be negative integers")));
        }
        Ok(Params { alpha, beta })
    }

    pub fn sum(&self) -> f64 {
        self.alpha + self.beta
    }

    /// `(beta, alpha)`: `u` is `(alpha, beta)`-harmonic iff `conj(u)` is `(beta, alpha)`-harmonic.
    pub fn swapped(&self) -> Params {
        Params { alpha: self.beta, beta: self.alpha }
    }

    /// Poisson integrals need `alpha + beta > -1`.
    pub fn require_poisson(&self) -> Result<()> {
        if self.sum() > -1.0 {
            Ok(())
        } else {
            Err(domain(format!("alpha + beta = {} must exceed -1", self.sum())))
        }
    }
}

impl serde::Serialize for Params {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.alpha, self.beta].serialize(s)
    }
}

/// A point of the open unit disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(pub(crate) Complex64);

impl DiskPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) || z.norm() >= 1.0 {
            return Err(domain(format!("{z} is not in the open unit disc")));
        }
        Ok(DiskPoint(z))
    }

    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&r) {
            return Err(domain(format!("radius {r} outside [0, 1)")));
        }
        Self::new(Complex64::from_polar(r, theta))
    }

    pub fn real(x: f64) -> Result<Self> {
        Self::new(Complex64::new(x, 0.0))
    }

    pub fn z(&self) -> Complex64 {
        self.0
    }

    pub fn r(&self) -> f64 {
        self.0.norm()
    }

    pub fn theta(&self) -> f64 {
        self.0.arg()
    }

    /// `|z|^2`
    pub fn r2(&self) -> f64 {
        self.0.norm_sqr()
    }
}

/// `(1 - |z|^2)^e / ((1 - z)^{s1} (1 - zbar)^{s2})` via polar form of `1 - z`.
pub(crate) fn kernel_factor(e: f64, s1: f64, s2: f64, z: Complex64) -> Complex64 {
    let w = Complex64::new(1.0 - z.re, -z.im);
    let m = 1.0 - z.norm_sqr();
    let ln_abs = 0.5 * w.norm_sqr().ln();
    let arg = w.arg();
    Complex64::from_polar((e * m.ln() - (s1 + s2) * ln_abs).exp(), -(s1 - s2) * arg)
}

/// Unnormalised kernel `K_{a,b}` for arbitrary real exponents.
pub fn weighted_kernel(a: f64, b: f64, z: DiskPoint) -> Complex64 {
    kernel_factor(a + b + 1.0, a + 1.0, b + 1.0, z.z())
}

/// Normalisation constant `Gamma(alpha+1) Gamma(beta+1) / Gamma(alpha+beta+1)`.
pub fn c_alpha_beta(p: &Params) -> Result<f64> {
    Ok(gamma(p.alpha + 1.0)? * gamma(p.beta + 1.0)? * special_fn::recip_gamma(p.sum() + 1.0))
}

/// `lim_{r -> 1} I_lambda(r) = Gamma(lambda) / Gamma(lambda/2 + 1/2)^2` for `lambda > 0`.
pub fn c_lambda(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(domain(format!("c_lambda needs lambda > 0, got {lambda}")));
    }
    let h = gamma(0.5 * lambda + 0.5)?;
    Ok(gamma(lambda)? / (h * h))
}

/// `K_{alpha,beta}(z)`.
pub fn kernel_k(p: &Params, z: DiskPoint) -> Complex64 {
    weighted_kernel(p.alpha, p.beta, z)
}

/// `P_{alpha,beta}(z) = c_{alpha,beta} K_{alpha,beta}(z)`.
pub fn poisson_kernel(p: &Params, z: DiskPoint) -> Result<Complex64> {
    Ok(c_alpha_beta(p)? * kernel_k(p, z))
}

/// `d_z K_{alpha,beta}` in closed form.
pub fn kernel_dz(p: &Params, z: DiskPoint) -> Complex64 {
    let (a, b) = (p.alpha, p.beta);
    let z = z.z();
    (a + 1.0) * kernel_factor(a + b, a + 2.0, b, z) - b * z.conj() * kernel_factor(a + b, a + 1.0, b + 1.0, z)
}

/// `d_zbar K_{alpha,beta}` in closed form.
pub fn kernel_dzbar(p: &Params, z: DiskPoint) -> Complex64 {
    let (a, b) = (p.alpha, p.beta);
    let z = z.z();
    (b + 1.0) * kernel_factor(a + b, a, b + 2.0, z) - a * z * kernel_factor(a + b, a + 1.0, b + 1.0, z)
}

/// Trapezoid node count for circle integrals at radius `r`; the kernel peak has
/// width of order `1 - r`.
pub fn quadrature_nodes(r: f64) -> usize {
    let boost = (64.0 / (1.0 - r)).ceil();
    if boost.is_finite() && boost > 1024.0 {
        boost as usize
    } else {
        1024
    }
}

/// `I_lambda(r) = (1/2pi) int (1 - r^2)^lambda / |1 - r e^{-it}|^{lambda+1} dt`.
pub fn i_lambda(lambda: f64, r: f64) -> Result<f64> {
    if !(lambda > -1.0) {
        return Err(domain(format!("I_lambda needs lambda > -1, got {lambda}")));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(domain(format!("radius {r} outside [0, 1)")));
    }
    let n = quadrature_nodes(r);
    let scale = (lambda * (1.0 - r * r).ln()).exp();
    let d = (1.0 - r) * (1.0 - r);
    let sum: f64 = (0..n)
        .map(|j| {
            let s = (PI * j as f64 / n as f64).sin();
            // |1 - r e^{-it}|^2 = (1 - r)^2 + 4 r sin^2(t/2)
            (d + 4.0 * r * s * s).powf(-0.5 * (lambda + 1.0))
        })
        .sum();
    Ok(scale * sum / n as f64)
}

/// `M_{alpha,beta}(r) = c_{alpha,beta} F(-alpha, -beta; 1; r^2)`, the extension of the constant 1.
pub fn m_radial(p: &Params, r: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(domain(format!("radius {r} outside [0, 1)")));
    }
    let f = hyp2f1(&HypParams::new(-p.alpha, -p.beta, 1.0)?, r * r)?;
    Ok(c_alpha_beta(p)? * f)
}

/// `(a)_n / n!` as a running product.
pub(crate) fn rising_over_factorial(a: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, j| acc * (a + j as f64) / (j as f64 + 1.0))
}

/// `M_{alpha,beta,k} = P_{alpha,beta}[e^{ik theta}]` for `k >= 0`:
/// `c ((alpha+1)_k / k!) F(-alpha, k - beta; k + 1; |z|^2) z^k`.
pub fn m_k(p: &Params, k: u32, z: DiskPoint) -> Result<Complex64> {
    let kf = k as f64;
    let f = hyp2f1(&HypParams::new(-p.alpha, kf - p.beta, kf + 1.0)?, z.r2())?;
    let pref = c_alpha_beta(p)? * rising_over_factorial(p.alpha + 1.0, k);
    Ok(pref * f * z.z().powu(k))
}

/// `d_zbar M_{alpha,beta,k}` in the Euler-transformed form
/// `-c ((k - beta)(alpha)_{k+1} / (k+1)!) (1 - |z|^2)^{alpha+beta} F(k+alpha+1, beta+1; k+2; |z|^2) z^{k+1}`.
pub fn m_k_dzbar(p: &Params, k: u32, z: DiskPoint) -> Result<Complex64> {
    let kf = k as f64;
    let pref = -c_alpha_beta(p)? * (kf - p.beta) * rising_over_factorial(p.alpha, k + 1);
    if pref == 0.0 || special_fn::is_integer(kf - p.beta) && (kf - p.beta).round() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let x = z.r2();
    let f = hyp2f1(&HypParams::new(kf + p.alpha + 1.0, p.beta + 1.0, kf + 2.0)?, x)?;
    Ok(pref * (1.0 - x).powf(p.sum()) * f * z.z().powu(k + 1))
}

/// Parameters of the weighted operator `T_alpha`, whose solutions are exactly the
/// `(alpha/2, alpha/2)`-harmonic functions.
pub fn t_alpha_params(alpha: f64) -> Result<Params> {
    if !(alpha > -1.0) {
        return Err(Error::Domain(format!("T_alpha needs alpha > -1, got {alpha}")));
    }
    Params::new(0.5 * alpha, 0.5 * alpha)
}
