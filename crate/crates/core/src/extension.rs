//! Extensions of boundary data into the disc.
//!
//! Two independent routes are provided. Quadrature evaluators ([`KernelIntegral`])
//! integrate a kernel against boundary samples with the trapezoid rule, and
//! [`Expansion`] sums the hypergeometric series whose coefficients come from the
//! boundary Fourier coefficients through Gauss summation.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::{self, BoundaryFunction, TrigPolynomial};
use crate::error::{Error, Result};
use crate::kernels::{self, c_alpha_beta, kernel_factor, quadrature_nodes, DiskPoint, Params};
use crate::ring;
use crate::special_fn::{self, hyp2f1, hyp2f1_at_one, pochhammer, HypParams};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default finite-difference step.
pub const FD_STEP: f64 = 1e-4;

/// A function on the open disc, evaluated pointwise or on a whole circle.
pub trait DiskEval {
    fn eval(&self, z: DiskPoint) -> Result<Complex64>;

    /// Values at `r e^{2 pi i j / n}`, `j = 0..n`.
    fn eval_ring(&self, r: f64, n: usize) -> Result<Vec<Complex64>> {
        (0..n).map(|j| self.eval(DiskPoint::from_polar(r, 2.0 * PI * j as f64 / n as f64)?)).collect()
    }
}

impl<F: Fn(DiskPoint) -> Result<Complex64>> DiskEval for F {
    fn eval(&self, z: DiskPoint) -> Result<Complex64> {
        self(z)
    }
}

#[derive(Debug, Clone, Copy)]
enum Kernel {
    Weighted { a: f64, b: f64 },
    Dz(Params),
    Dzbar(Params),
}

impl Kernel {
    fn at(&self, w: Complex64) -> Complex64 {
        match *self {
            Kernel::Weighted { a, b } => kernel_factor(a + b + 1.0, a + 1.0, b + 1.0, w),
            Kernel::Dz(p) => kernels::kernel_dz(&p, DiskPoint(w)),
            Kernel::Dzbar(p) => kernels::kernel_dzbar(&p, DiskPoint(w)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Factor {
    One,
    Z,
    Zbar,
}

#[derive(Debug)]
struct Term {
    kernel: Kernel,
    scale: Complex64,
    g: BoundaryFunction,
    factor: Factor,
}

/// `z -> sum_t scale_t m_t(z) (1/N) sum_j K_t(z e^{-i theta_j}) g_t(theta_j)`, where
/// `m_t` is `1`, `z` or `zbar`. The node count is the sample count of `g`,
/// doubled until it reaches [`quadrature_nodes`]`(|z|)`.
/// Density samples keyed by `(term, grid size)`.
type GridCache = BTreeMap<(usize, usize), Arc<Vec<Complex64>>>;

#[derive(Debug)]
pub struct KernelIntegral {
    terms: Vec<Term>,
    grids: Mutex<GridCache>,
}

impl KernelIntegral {
    fn new(terms: Vec<Term>) -> Self {
        KernelIntegral { terms, grids: Mutex::new(BTreeMap::new()) }
    }

    fn grid(&self, t: usize, m: usize) -> Arc<Vec<Complex64>> {
        let mut cache = self.grids.lock().unwrap_or_else(|e| e.into_inner());
        cache.entry((t, m)).or_insert_with(|| Arc::new(self.terms[t].g.on_grid(m))).clone()
    }
}

fn factor_at(f: Factor, z: Complex64) -> Complex64 {
    match f {
        Factor::One => Complex64::new(1.0, 0.0),
        Factor::Z => z,
        Factor::Zbar => z.conj(),
    }
}

impl DiskEval for KernelIntegral {
    fn eval(&self, z: DiskPoint) -> Result<Complex64> {
        let z = z.z();
        let nodes = quadrature_nodes(z.norm());
        let mut total = ZERO;
        for (t, term) in self.terms.iter().enumerate() {
            let m = ring::ring_size(term.g.len(), nodes);
            let g = self.grid(t, m);
            let sum: Complex64 = g
                .iter()
                .enumerate()
                .map(|(j, &gj)| term.kernel.at(z * Complex64::from_polar(1.0, -2.0 * PI * j as f64 / m as f64)) * gj)
                .sum();
            total += term.scale * factor_at(term.factor, z) * sum / m as f64;
        }
        Ok(total)
    }

    fn eval_ring(&self, r: f64, n: usize) -> Result<Vec<Complex64>> {
        if !(0.0..1.0).contains(&r) {
            return Err(crate::error::domain(format!("radius {r} outside [0, 1)")));
        }
        if n == 0 {
            return Ok(Vec::new());
        }
        let mut out = vec![ZERO; n];
        for (t, term) in self.terms.iter().enumerate() {
            let m = ring::ring_size(n, quadrature_nodes(r).max(term.g.len()));
            let g = self.grid(t, m);
            let conv = ring::convolve_on_circle(|w| term.kernel.at(w), &g, r);
            let step = m / n;
            for (i, o) in out.iter_mut().enumerate() {
                let z = Complex64::from_polar(r, 2.0 * PI * i as f64 / n as f64);
                *o += term.scale * factor_at(term.factor, z) * conv[i * step];
            }
        }
        Ok(out)
    }
}

fn weighted(a: f64, b: f64, scale: Complex64, g: BoundaryFunction, factor: Factor) -> Term {
    Term { kernel: Kernel::Weighted { a, b }, scale, g, factor }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `u = P_{alpha,beta}[f]` by quadrature.
pub fn poisson_extension(p: &Params, f: &BoundaryFunction) -> Result<KernelIntegral> {
    p.require_poisson()?;
    let c = c_alpha_beta(p)?;
    Ok(KernelIntegral::new(vec![weighted(p.alpha, p.beta, real(c), f.clone(), Factor::One)]))
}

/// `P_{alpha,beta}[f](z)`.
pub fn poisson_extend(p: &Params, f: &BoundaryFunction, z: DiskPoint) -> Result<Complex64> {
    poisson_extension(p, f)?.eval(z)
}

/// `d_z u` by differentiating the kernel under the integral.
pub fn dz_extension(p: &Params, f: &BoundaryFunction) -> Result<KernelIntegral> {
    p.require_poisson()?;
    let c = c_alpha_beta(p)?;
    Ok(KernelIntegral::new(vec![Term { kernel: Kernel::Dz(*p), scale: real(c), g: f.twist(-1), factor: Factor::One }]))
}

/// `d_zbar u` by differentiating the kernel under the integral.
pub fn dzbar_extension(p: &Params, f: &BoundaryFunction) -> Result<KernelIntegral> {
    p.require_poisson()?;
    let c = c_alpha_beta(p)?;
    Ok(KernelIntegral::new(vec![Term { kernel: Kernel::Dzbar(*p), scale: real(c), g: f.twist(1), factor: Factor::One }]))
}

/// `d_theta u = P_{alpha,beta}[fdot]`.
pub fn dtheta_extension(p: &Params, f: &BoundaryFunction) -> Result<KernelIntegral> {
    poisson_extension(p, &boundary::derivative(f))
}

/// `d_theta u (z)`.
pub fn dtheta(p: &Params, f: &BoundaryFunction, z: DiskPoint) -> Result<Complex64> {
    dtheta_extension(p, f)?.eval(z)
}

/// `z d_z u = -i c ( K_{alpha,beta-1}[fdot] + i beta zbar K_{alpha-1,beta}[f_1] )`.
pub fn zdz_extension(p: &Params, f: &BoundaryFunction) -> Result<KernelIntegral> {
    p.require_poisson()?;
    let c = c_alpha_beta(p)?;
    let (a, b) = (p.alpha, p.beta);
    let mut terms = vec![weighted(a, b - 1.0, -I * c, boundary::derivative(f), Factor::One)];
    if b != 0.0 {
        terms.push(weighted(a - 1.0, b, real(c * b), boundary::times_eit(f), Factor::Zbar));
    }
    Ok(KernelIntegral::new(terms))
}

/// `z d_z u (z)` through the kernel decomposition.
pub fn zdz_decomposition(p: &Params, f: &BoundaryFunction, z: DiskPoint) -> Result<Complex64> {
    zdz_extension(p, f)?.eval(z)
}

/// `zbar d_zbar u = i c ( K_{alpha-1,beta}[fdot] - i alpha z K_{alpha,beta-1}[e^{-it} f] )`.
pub fn zbar_dzbar_extension(p: &Params, f: &BoundaryFunction) -> Result<KernelIntegral> {
    p.require_poisson()?;
    let c = c_alpha_beta(p)?;
    let (a, b) = (p.alpha, p.beta);
    let mut terms = vec![weighted(a - 1.0, b, I * c, boundary::derivative(f), Factor::One)];
    if a != 0.0 {
        terms.push(weighted(a, b - 1.0, real(c * a), f.twist(-1), Factor::Z));
    }
    Ok(KernelIntegral::new(terms))
}

/// `zbar d_zbar u (z)` through the kernel decomposition.
pub fn zbar_dzbar_decomposition(p: &Params, f: &BoundaryFunction, z: DiskPoint) -> Result<Complex64> {
    zbar_dzbar_extension(p, f)?.eval(z)
}

/// Series representation `sum_k c_k F(-alpha, k-beta; k+1; |z|^2) z^k + sum_k c_{-k} F(-beta, k-alpha; k+1; |z|^2) zbar^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub params: Params,
    pub coeffs: TrigPolynomial,
}

#[derive(Serialize, Deserialize)]
struct ExpansionJson {
    alpha: f64,
    beta: f64,
    coeffs: TrigPolynomial,
}

impl Serialize for Expansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExpansionJson { alpha: self.params.alpha, beta: self.params.beta, coeffs: self.coeffs.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Expansion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ExpansionJson::deserialize(d)?;
        let params = Params::new(raw.alpha, raw.beta).map_err(serde::de::Error::custom)?;
        Ok(Expansion { params, coeffs: raw.coeffs })
    }
}

fn radial(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    hyp2f1(&HypParams::new(a, b, c)?, x)
}

impl Expansion {
    pub fn new(params: Params, coeffs: TrigPolynomial) -> Self {
        Expansion { params, coeffs }
    }

    /// The coefficients of `P_{alpha,beta}[f]`.
    pub fn from_boundary(p: &Params, f: &BoundaryFunction) -> Result<Self> {
        coeffs_from_boundary(p, &f.coefficients())
    }

    /// Expansion of `conj(u)`: parameters swapped and `c'_k = conj(c_{-k})`.
    pub fn conj_swapped(&self) -> Self {
        Expansion { params: self.params.swapped(), coeffs: TrigPolynomial::new(self.coeffs.coeffs().iter().map(|(&k, c)| (-k, c.conj()))) }
    }

    /// Closed form of the circle mean `u_n(r)`, taken on the positive real axis.
    pub fn circle_mean_closed(&self, n: i64, r: f64) -> Result<Complex64> {
        if !(0.0..1.0).contains(&r) {
            return Err(crate::error::domain(format!("radius {r} outside [0, 1)")));
        }
        let (a, b) = (self.params.alpha, self.params.beta);
        let c = self.coeffs.get(n);
        if c == ZERO {
            return Ok(ZERO);
        }
        let m = n.unsigned_abs() as f64;
        let f = if n >= 0 { radial(-a, m - b, m + 1.0, r * r)? } else { radial(-b, m - a, m + 1.0, r * r)? };
        Ok(c * f * r.powi(n.unsigned_abs() as i32))
    }
}

impl DiskEval for Expansion {
    fn eval(&self, z: DiskPoint) -> Result<Complex64> {
        eval_series(self, z)
    }
}

/// `c_k = fhat(k) / F(-alpha, k-beta; k+1; 1)`, `c_{-k} = fhat(-k) / F(-beta, k-alpha; k+1; 1)`.
pub fn coeffs_from_boundary(p: &Params, fhat: &TrigPolynomial) -> Result<Expansion> {
    p.require_poisson()?;
    let mut out = Vec::with_capacity(fhat.coeffs().len());
    for (&k, &v) in fhat.coeffs() {
        let m = k.unsigned_abs() as f64;
        let hp = if k >= 0 { HypParams::new(-p.alpha, m - p.beta, m + 1.0)? } else { HypParams::new(-p.beta, m - p.alpha, m + 1.0)? };
        let den = hyp2f1_at_one(&hp)?;
        if den == 0.0 {
            return Err(Error::DegenerateCoefficient { k });
        }
        out.push((k, v / den));
    }
    Ok(Expansion::new(*p, TrigPolynomial::new(out)))
}

/// The series at `z`.
pub fn eval_series(e: &Expansion, z: DiskPoint) -> Result<Complex64> {
    let (a, b) = (e.params.alpha, e.params.beta);
    let x = z.r2();
    let z = z.z();
    let mut total = ZERO;
    for (&k, &c) in e.coeffs.coeffs() {
        let m = k.unsigned_abs();
        let mf = m as f64;
        total += if k >= 0 {
            c * radial(-a, mf - b, mf + 1.0, x)? * z.powu(m as u32)
        } else {
            c * radial(-b, mf - a, mf + 1.0, x)? * z.conj().powu(m as u32)
        };
    }
    Ok(total)
}

/// `d_z` of the series, term by term.
pub fn dz_series(e: &Expansion, z: DiskPoint) -> Result<Complex64> {
    let (a, b) = (e.params.alpha, e.params.beta);
    let x = z.r2();
    let w = 1.0 - x;
    let z = z.z();
    let zb = z.conj();
    let mut total = ZERO;
    for (&k, &c) in e.coeffs.coeffs() {
        let m = k.unsigned_abs() as u32;
        let mf = m as f64;
        if k >= 0 {
            let pref = -a * (mf - b) / (mf + 1.0);
            if pref != 0.0 {
                let f = radial(mf + a + 1.0, b + 1.0, mf + 2.0, x)?;
                total += c * pref * w.powf(a + b) * f * zb * z.powu(m);
            }
            if m >= 1 {
                total += c * mf * radial(-a, mf - b, mf + 1.0, x)? * z.powu(m - 1);
            }
        } else {
            let pref = -b * (mf - a) / (mf + 1.0);
            if pref != 0.0 {
                let f = radial(mf + b + 1.0, a + 1.0, mf + 2.0, x)?;
                total += c * pref * w.powf(a + b) * f * zb.powu(m + 1);
            }
        }
    }
    Ok(total)
}

/// `d_zbar` of the series, via `d_zbar u = conj(d_z conj(u))`.
pub fn dzbar_series(e: &Expansion, z: DiskPoint) -> Result<Complex64> {
    Ok(dz_series(&e.conj_swapped(), z)?.conj())
}

/// `u_n(r) = (1/N) sum_j u(r e^{i theta_j}) e^{-i n theta_j}`.
pub fn circle_mean(u: &(impl DiskEval + ?Sized), n: i64, r: f64, samples: usize) -> Result<Complex64> {
    if samples == 0 {
        return Err(crate::error::domain("circle mean needs at least one sample"));
    }
    let vals = u.eval_ring(r, samples)?;
    let sum: Complex64 = vals
        .iter()
        .enumerate()
        .map(|(j, v)| v * Complex64::from_polar(1.0, -2.0 * PI * ring::bin(n * j as i64, samples) as f64 / samples as f64))
        .sum();
    Ok(sum / samples as f64)
}

fn shifted(z: Complex64, d: Complex64) -> DiskPoint {
    DiskPoint(z + d)
}

fn check_step(z: DiskPoint, h: f64) -> Result<()> {
    if !(h > 0.0) || z.r() + 2.0 * h >= 1.0 {
        return Err(Error::StepTooLarge(h));
    }
    Ok(())
}

/// Central-difference Wirtinger derivatives `(d_z u, d_zbar u)`.
pub fn wirtinger_fd(u: &(impl DiskEval + ?Sized), z: DiskPoint, h: f64) -> Result<(Complex64, Complex64)> {
    check_step(z, h)?;
    let w = z.z();
    let ux = (u.eval(shifted(w, real(h)))? - u.eval(shifted(w, real(-h)))?) / (2.0 * h);
    let uy = (u.eval(shifted(w, I * h))? - u.eval(shifted(w, -I * h))?) / (2.0 * h);
    Ok(((ux - I * uy) * 0.5, (ux + I * uy) * 0.5))
}

/// `(1-|z|^2)[(1-|z|^2) d_z d_zbar u + alpha z d_z u + beta zbar d_zbar u - alpha beta u]`
/// with central stencils of step `h`.
pub fn operator_residual(p: &Params, u: &(impl DiskEval + ?Sized), z: DiskPoint, h: f64) -> Result<Complex64> {
    check_step(z, h)?;
    let w = z.z();
    let u0 = u.eval(z)?;
    let e = u.eval(shifted(w, real(h)))?;
    let west = u.eval(shifted(w, real(-h)))?;
    let n = u.eval(shifted(w, I * h))?;
    let s = u.eval(shifted(w, -I * h))?;
    let lap = (e + west + n + s - 4.0 * u0) / (h * h);
    let ux = (e - west) / (2.0 * h);
    let uy = (n - s) / (2.0 * h);
    let dz = (ux - I * uy) * 0.5;
    let dzbar = (ux + I * uy) * 0.5;
    let m = 1.0 - z.r2();
    Ok(m * (m * lap * 0.25 + p.alpha * w * dz + p.beta * w.conj() * dzbar - p.alpha * p.beta * u0))
}

/// One graded piece `K_k(z) = H_k(z) + G_k(zbar)` of a polyharmonic function.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct PolyharmonicPart {
    /// `n -> coefficient of z^n`
    pub analytic: BTreeMap<u32, Complex64>,
    /// `n -> coefficient of zbar^n`
    pub conjugate: BTreeMap<u32, Complex64>,
}

/// `u(z) = sum_k K_k(z) |z|^{2k}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyharmonicDecomposition {
    pub parts: Vec<PolyharmonicPart>,
}

impl DiskEval for PolyharmonicDecomposition {
    fn eval(&self, z: DiskPoint) -> Result<Complex64> {
        let x = z.r2();
        let z = z.z();
        let mut total = ZERO;
        let mut weight = 1.0;
        for part in &self.parts {
            let h: Complex64 = part.analytic.iter().map(|(&n, &c)| c * z.powu(n)).sum();
            let g: Complex64 = part.conjugate.iter().map(|(&n, &c)| c * z.conj().powu(n)).sum();
            total += (h + g) * weight;
            weight *= x;
        }
        Ok(total)
    }
}

fn push(map: &mut BTreeMap<u32, Complex64>, n: u32, v: Complex64) {
    if v != ZERO {
        *map.entry(n).or_insert(ZERO) += v;
    }
}

/// Splits the series of an integer-`alpha` expansion into `alpha + 1` graded parts.
pub fn polyharmonic_decompose(e: &Expansion) -> Result<PolyharmonicDecomposition> {
    let (a, b) = (e.params.alpha, e.params.beta);
    if !(a >= 1.0 && special_fn::is_integer(a)) {
        return Err(Error::PreconditionFailed(format!("alpha = {a} is not a positive integer")));
    }
    let order = a.round() as u32;
    let a = order as f64;
    for (&k, c) in e.coeffs.coeffs().range(..-(order as i64)) {
        if c.norm() > 1e-10 {
            return Err(Error::PreconditionFailed(format!("coefficient c_{k} = {c} must vanish for alpha = {order}")));
        }
    }
    let mut parts = vec![PolyharmonicPart::default(); order as usize + 1];
    for (&k, &c) in e.coeffs.coeffs() {
        if k >= 0 {
            let n = k as f64;
            for (j, part) in parts.iter_mut().enumerate() {
                let j32 = j as u32;
                let w = kernels::rising_over_factorial(-a, j32) * pochhammer(n - b, j32) / pochhammer(n + 1.0, j32);
                push(&mut part.analytic, k as u32, c * w);
            }
        } else if k >= -(order as i64) {
            // F(-beta, n-alpha; n+1; x) terminates at degree alpha - n
            let n = -k;
            let nf = n as f64;
            for (j, part) in parts.iter_mut().enumerate().take((order as i64 - n) as usize + 1) {
                let j32 = j as u32;
                let w = kernels::rising_over_factorial(-b, j32) * pochhammer(nf - a, j32) / pochhammer(nf + 1.0, j32);
                push(&mut part.conjugate, n as u32, c * w);
            }
        }
    }
    Ok(PolyharmonicDecomposition { parts })
}

/// `n -> (in)^l fhat(n)` for `n >= 0`.
pub fn riesz_projected_derivative(f: &BoundaryFunction, l: u32) -> TrigPolynomial {
    let il = I.powu(l);
    boundary::riesz_project(f).map(|n, c| il * (n as f64).powi(l as i32) * c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{kernel_k, m_k, m_radial};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pt(re: f64, im: f64) -> DiskPoint {
        DiskPoint::new(c(re, im)).unwrap()
    }

    fn trig(pairs: &[(i64, Complex64)]) -> BoundaryFunction {
        BoundaryFunction::trig(TrigPolynomial::new(pairs.iter().copied())).unwrap()
    }

    fn params(a: f64, b: f64) -> Params {
        Params::new(a, b).unwrap()
    }

    const POINTS: [(f64, f64); 5] = [(0.0, 0.0), (0.3, -0.2), (-0.5, 0.4), (0.1, 0.85), (-0.6, -0.55)];

    #[test]
    fn extension_of_constants_and_monomials() {
        let one = BoundaryFunction::constant(c(1.0, 0.0));
        let eit = trig(&[(1, c(1.0, 0.0))]);
        for (a, b) in [(1.0, 1.0), (0.5, -0.2), (-0.25, -0.25), (2.0, -0.5)] {
            let p = params(a, b);
            for &(x, y) in &POINTS {
                let z = pt(x, y);
                let v = poisson_extend(&p, &one, z).unwrap();
                assert!((v - m_radial(&p, z.r()).unwrap()).norm() < 1e-8, "{a},{b} {z:?}");
            }
        }
        for &(x, y) in &POINTS {
            let z = pt(x, y);
            assert!((poisson_extend(&params(0.0, 0.0), &eit, z).unwrap() - z.z()).norm() < 1e-12);
            let want = (2.0 - z.r2()) * z.z();
            assert!((poisson_extend(&params(1.0, 0.0), &eit, z).unwrap() - want).norm() < 1e-12);
        }
    }

    #[test]
    fn coefficient_examples() {
        let fhat = TrigPolynomial::new([(2, c(1.0, 2.0)), (-3, c(0.5, 0.0)), (0, c(1.0, 0.0))]);
        let e = coeffs_from_boundary(&params(0.0, 0.0), &fhat).unwrap();
        for (&k, &v) in fhat.coeffs() {
            assert!((e.coeffs.get(k) - v).norm() < 1e-15);
        }
        let e = coeffs_from_boundary(&params(1.0, 0.0), &TrigPolynomial::monomial(1)).unwrap();
        assert!((e.coeffs.get(1) - 2.0).norm() < 1e-14);
        assert!(coeffs_from_boundary(&params(0.3, 0.3), &TrigPolynomial::default()).unwrap().coeffs.is_empty());
    }

    #[test]
    fn series_examples() {
        let p = params(0.7, -0.3);
        let e = Expansion::new(p, TrigPolynomial::new([(0, c(2.0, -1.0))]));
        let z = pt(0.4, 0.3);
        let want = c(2.0, -1.0) * hyp2f1(&HypParams::new(-0.7, 0.3, 1.0).unwrap(), 0.25).unwrap();
        assert!((eval_series(&e, z).unwrap() - want).norm() < 1e-14);
        let h = Expansion::new(params(0.0, 0.0), TrigPolynomial::new([(2, c(1.0, 0.0)), (-1, c(0.0, 1.0))]));
        let want = z.z().powu(2) + I * z.z().conj();
        assert!((eval_series(&h, z).unwrap() - want).norm() < 1e-14);
    }

    #[test]
    fn series_derivatives_match_closed_forms() {
        let e = Expansion::new(params(1.0, 0.0), TrigPolynomial::new([(1, c(2.0, 0.0))]));
        for &(x, y) in &POINTS {
            let z = pt(x, y);
            assert!((dz_series(&e, z).unwrap() - (2.0 - 2.0 * z.r2())).norm() < 1e-13);
            assert!((dzbar_series(&e, z).unwrap() + z.z() * z.z()).norm() < 1e-13);
        }
        let h = Expansion::new(params(0.0, 0.0), TrigPolynomial::new([(3, c(1.0, 0.0)), (-2, c(0.0, 1.0))]));
        let z = pt(0.2, -0.5);
        assert!((dz_series(&h, z).unwrap() - 3.0 * z.z().powu(2)).norm() < 1e-13);
        assert!((dzbar_series(&h, z).unwrap() - 2.0 * I * z.z().conj()).norm() < 1e-13);
    }

    #[test]
    fn series_derivatives_match_finite_differences() {
        let fhat = TrigPolynomial::new([(0, c(0.3, 0.1)), (1, c(1.0, -0.5)), (-2, c(0.2, 0.4)), (3, c(-0.6, 0.0))]);
        for (a, b) in [(1.0, 1.0), (0.4, -0.7), (-0.25, -0.25), (2.0, -1.5), (0.0, 0.6)] {
            let e = coeffs_from_boundary(&params(a, b), &fhat).unwrap();
            for &(x, y) in &POINTS[1..] {
                let z = pt(x, y);
                let (fz, fzb) = wirtinger_fd(&e, z, 1e-5).unwrap();
                let dz = dz_series(&e, z).unwrap();
                let dzb = dzbar_series(&e, z).unwrap();
                assert!((dz - fz).norm() < 1e-5 * dz.norm().max(1.0), "{a},{b}");
                assert!((dzb - fzb).norm() < 1e-5 * dzb.norm().max(1.0), "{a},{b}");
            }
        }
    }

    #[test]
    fn real_symmetric_data_gives_conjugate_derivatives() {
        let f = trig(&[(0, c(1.0, 0.0)), (2, c(0.3, 0.2)), (-2, c(0.3, -0.2))]);
        let e = Expansion::from_boundary(&params(0.6, 0.6), &f).unwrap();
        let z = pt(0.35, -0.45);
        assert!((dzbar_series(&e, z).unwrap() - dz_series(&e, z).unwrap().conj()).norm() < 1e-13);
    }

    #[test]
    fn decompositions_match_series() {
        let f = trig(&[(0, c(0.3, 0.0)), (1, c(1.0, 0.5)), (-1, c(0.2, -0.1)), (2, c(0.0, 0.7)), (-3, c(0.4, 0.0))]);
        for (a, b) in [(1.0, 1.0), (0.5, 0.2), (2.0, -0.5), (-0.3, -0.4), (0.0, 0.8), (0.8, 0.0)] {
            let p = params(a, b);
            let e = Expansion::from_boundary(&p, &f).unwrap();
            for &(x, y) in &POINTS {
                let z = pt(x, y);
                let zdz = zdz_decomposition(&p, &f, z).unwrap();
                let zbdzb = zbar_dzbar_decomposition(&p, &f, z).unwrap();
                assert!((zdz - z.z() * dz_series(&e, z).unwrap()).norm() < 1e-9, "{a},{b} {z:?}");
                assert!((zbdzb - z.z().conj() * dzbar_series(&e, z).unwrap()).norm() < 1e-9, "{a},{b} {z:?}");
                let dt = dtheta(&p, &f, z).unwrap();
                assert!((dt - I * (zdz - zbdzb)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn decomposition_examples() {
        let one = BoundaryFunction::constant(c(1.0, 0.0));
        let eit = trig(&[(1, c(1.0, 0.0))]);
        let z = pt(0.5, 0.0);
        assert!(zdz_decomposition(&params(0.0, 0.0), &one, z).unwrap().norm() < 1e-14);
        assert!((zdz_decomposition(&params(1.0, 0.0), &eit, z).unwrap() - 0.75).norm() < 1e-12);
        assert!(zbar_dzbar_decomposition(&params(0.0, 0.0), &one, z).unwrap().norm() < 1e-14);
        // conj(u) for u = (2 - |z|^2) z is (0,1)-harmonic; zbar d_zbar of it at 0.5 is 0.75
        let emit = trig(&[(-1, c(1.0, 0.0))]);
        assert!((zbar_dzbar_decomposition(&params(0.0, 1.0), &emit, z).unwrap() - 0.75).norm() < 1e-12);
    }

    #[test]
    fn kernel_derivative_extensions() {
        let f = trig(&[(1, c(1.0, 0.5)), (-2, c(0.2, -0.1)), (0, c(0.5, 0.0))]);
        let p = params(0.6, -0.2);
        let e = Expansion::from_boundary(&p, &f).unwrap();
        let dz = dz_extension(&p, &f).unwrap();
        let dzb = dzbar_extension(&p, &f).unwrap();
        for &(x, y) in &POINTS {
            let z = pt(x, y);
            assert!((dz.eval(z).unwrap() - dz_series(&e, z).unwrap()).norm() < 1e-9);
            assert!((dzb.eval(z).unwrap() - dzbar_series(&e, z).unwrap()).norm() < 1e-9);
        }
    }

    #[test]
    fn ring_evaluation_matches_pointwise() {
        let f = trig(&[(1, c(1.0, 0.5)), (-2, c(0.2, -0.1)), (5, c(0.1, 0.0))]);
        let p = params(-0.3, 0.5);
        for u in [poisson_extension(&p, &f).unwrap(), zdz_extension(&p, &f).unwrap(), zbar_dzbar_extension(&p, &f).unwrap()] {
            for r in [0.0, 0.5, 0.95] {
                let ring = u.eval_ring(r, 16).unwrap();
                for (j, v) in ring.iter().enumerate() {
                    let z = DiskPoint::from_polar(r, 2.0 * PI * j as f64 / 16.0).unwrap();
                    assert!((v - u.eval(z).unwrap()).norm() < 1e-11);
                }
            }
        }
    }

    #[test]
    fn circle_mean_examples() {
        let id = |z: DiskPoint| Ok(z.z());
        assert!((circle_mean(&id, 1, 0.7, 64).unwrap() - 0.7).norm() < 1e-15);
        assert!(circle_mean(&id, 0, 0.7, 64).unwrap().norm() < 1e-15);
        let e = Expansion::new(params(0.4, -0.6), TrigPolynomial::new([(2, c(1.0, 1.0)), (-1, c(0.5, 0.0)), (0, c(0.2, 0.0))]));
        for n in -2..=3 {
            for r in [0.2, 0.6, 0.9] {
                let q = circle_mean(&e, n, r, 64).unwrap();
                assert!((q - e.circle_mean_closed(n, r).unwrap()).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn residual_examples() {
        for (a, b) in [(1.0, 1.0), (-0.25, -0.25), (0.5, 2.0)] {
            let p = params(a, b);
            let kk = |z: DiskPoint| Ok(kernel_k(&p, z));
            let mk = |z: DiskPoint| m_k(&p, 2, z);
            for &(x, y) in &POINTS {
                let z = pt(x * 0.9, y * 0.9);
                assert!(operator_residual(&p, &kk, z, FD_STEP).unwrap().norm() < 1e-3);
                assert!(operator_residual(&p, &mk, z, FD_STEP).unwrap().norm() < 1e-3);
            }
        }
        let sq = |z: DiskPoint| Ok(z.z() * z.z());
        assert!(operator_residual(&params(0.0, 0.0), &sq, pt(0.3, 0.2), FD_STEP).unwrap().norm() < 1e-6);
        assert!(matches!(operator_residual(&params(0.0, 0.0), &sq, pt(0.9999, 0.0), FD_STEP), Err(Error::StepTooLarge(_))));
    }

    #[test]
    fn polyharmonic_examples() {
        let b = 0.4;
        let e = Expansion::new(params(1.0, b), TrigPolynomial::new([(0, c(1.0, 0.0))]));
        let d = polyharmonic_decompose(&e).unwrap();
        assert_eq!(d.parts.len(), 2);
        assert_eq!(d.parts[0].analytic[&0], c(1.0, 0.0));
        assert!((d.parts[1].analytic[&0] - b).norm() < 1e-15);
        let z = pt(0.3, 0.6);
        assert!((d.eval(z).unwrap() - (1.0 + b * z.r2())).norm() < 1e-14);

        let zero = polyharmonic_decompose(&Expansion::new(params(2.0, 0.3), TrigPolynomial::default())).unwrap();
        assert_eq!(zero.parts.len(), 3);
        assert!(zero.parts.iter().all(|p| p.analytic.is_empty() && p.conjugate.is_empty()));

        let bad = Expansion::new(params(1.0, 0.0), TrigPolynomial::monomial(-2));
        assert!(matches!(polyharmonic_decompose(&bad), Err(Error::PreconditionFailed(_))));
        let frac = Expansion::new(params(1.5, 0.0), TrigPolynomial::monomial(0));
        assert!(matches!(polyharmonic_decompose(&frac), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn polyharmonic_reconstruction_matches_series() {
        for (a, b) in [(1.0, -1.5), (2.0, -0.7), (3.0, 0.25)] {
            let order = a as i64;
            let coeffs: Vec<_> = (-order..=6).map(|k| (k, c(0.3 + 0.1 * k as f64, 0.2 - 0.05 * k as f64))).collect();
            let e = Expansion::new(params(a, b), TrigPolynomial::new(coeffs));
            let d = polyharmonic_decompose(&e).unwrap();
            for &(x, y) in &POINTS {
                let z = pt(x, y);
                assert!((d.eval(z).unwrap() - eval_series(&e, z).unwrap()).norm() < 1e-10, "{a},{b}");
            }
        }
    }

    #[test]
    fn riesz_derivative_examples() {
        let f = trig(&[(1, c(1.0, 0.0)), (-1, c(1.0, 0.0)), (0, c(0.5, 0.0))]);
        assert_eq!(riesz_projected_derivative(&f, 0), boundary::riesz_project(&f));
        let eit = trig(&[(1, c(1.0, 0.0))]);
        assert_eq!(riesz_projected_derivative(&eit, 2), TrigPolynomial::new([(1, c(-1.0, 0.0))]));
        let emit = trig(&[(-1, c(1.0, 0.0))]);
        assert!(riesz_projected_derivative(&emit, 3).is_empty());
    }

    #[test]
    fn expansion_json_round_trip() {
        let e = Expansion::new(params(0.5, -0.25), TrigPolynomial::new([(-1, c(1.0, 2.0)), (3, c(0.0, -0.5))]));
        let text = serde_json::to_string(&e).unwrap();
        assert_eq!(serde_json::from_str::<Expansion>(&text).unwrap(), e);
        let e = Expansion::from_boundary(&params(0.3, 0.6), &trig(&[(2, c(0.1, 1.0 / 3.0)), (-1, c(PI, 0.7))])).unwrap();
        let text = serde_json::to_string(&e).unwrap();
        assert_eq!(serde_json::from_str::<Expansion>(&text).unwrap(), e);
        assert!(serde_json::from_str::<Expansion>(r#"{"alpha":-1,"beta":0,"coeffs":{}}"#).is_err());
    }
}
