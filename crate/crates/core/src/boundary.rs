//! Boundary data on the unit circle.
//!
//! A [`BoundaryFunction`] holds `N` uniform samples `f(2 pi j / N)` (`N` a power
//! of two) and, when the data is a trigonometric polynomial, the exact
//! coefficient map as well. Spectral operations (derivative, Hilbert transform,
//! shifts) act on the exact map when present and on the DFT otherwise.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::ring;

/// Default number of boundary samples.
pub const DEFAULT_SAMPLES: usize = 2048;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Finite Fourier series `sum_k c_k e^{ik theta}`; zero coefficients are not stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigPolynomial {
    coeffs: BTreeMap<i64, Complex64>,
}

impl TrigPolynomial {
    pub fn new(coeffs: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        let mut map = BTreeMap::new();
        for (k, c) in coeffs {
            *map.entry(k).or_insert(ZERO) += c;
        }
        map.retain(|_, c| *c != ZERO);
        TrigPolynomial { coeffs: map }
    }

    /// `e^{ik theta}`
    pub fn monomial(k: i64) -> Self {
        Self::new([(k, Complex64::new(1.0, 0.0))])
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Complex64> {
        &self.coeffs
    }

    pub fn get(&self, k: i64) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or(ZERO)
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|k|` in the support (0 for the empty map).
    pub fn max_freq(&self) -> u64 {
        self.coeffs.keys().map(|k| k.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        self.coeffs.iter().map(|(&k, &c)| c * Complex64::from_polar(1.0, k as f64 * theta)).sum()
    }

    /// Coefficient-wise map; zero results are dropped.
    pub fn map(&self, mut f: impl FnMut(i64, Complex64) -> Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|(&k, &c)| (k, f(k, c))))
    }

    /// Samples on the `n`-point grid using exact roots of unity.
    fn sample(&self, n: usize) -> Vec<Complex64> {
        let roots: Vec<Complex64> = (0..n).map(|m| unit_root(m, n)).collect();
        (0..n).map(|j| self.coeffs.iter().map(|(&k, &c)| c * roots[ring::bin(k * j as i64, n)]).sum()).collect()
    }

    /// `{"k": [re, im], ...}`
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Object(self.coeffs.iter().map(|(k, c)| (k.to_string(), serde_json::json!([c.re, c.im]))).collect())
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let raw: BTreeMap<String, [f64; 2]> =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("trig polynomial: {e}")))?;
        let mut pairs = Vec::with_capacity(raw.len());
        for (k, [re, im]) in raw {
            let k: i64 = k.trim().parse().map_err(|_| Error::Parse(format!("frequency key {k:?} is not an integer")))?;
            pairs.push((k, Complex64::new(re, im)));
        }
        Ok(Self::new(pairs))
    }
}

impl Serialize for TrigPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for TrigPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        TrigPolynomial::from_json(&v).map_err(serde::de::Error::custom)
    }
}

fn unit_root(m: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * m as f64 / n as f64)
}

/// Uniform samples of a `2 pi`-periodic function, optionally with its exact series.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFunction {
    samples: Vec<Complex64>,
    exact: Option<TrigPolynomial>,
}

fn check_len(n: usize) -> Result<()> {
    if n < 4 || !n.is_power_of_two() {
        return Err(domain(format!("sample count {n} must be a power of two >= 4")));
    }
    Ok(())
}

impl BoundaryFunction {
    pub fn from_samples(samples: Vec<Complex64>) -> Result<Self> {
        check_len(samples.len())?;
        Ok(BoundaryFunction { samples, exact: None })
    }

    /// Samples a trigonometric polynomial on `n` points; `n` must exceed twice its degree.
    pub fn from_trig(poly: TrigPolynomial, n: usize) -> Result<Self> {
        check_len(n)?;
        if n as u64 <= 2 * poly.max_freq() {
            return Err(domain(format!("{n} samples cannot resolve frequency {}", poly.max_freq())));
        }
        Ok(BoundaryFunction { samples: poly.sample(n), exact: Some(poly) })
    }

    /// [`from_trig`](Self::from_trig) with [`DEFAULT_SAMPLES`] points.
    pub fn trig(poly: TrigPolynomial) -> Result<Self> {
        Self::from_trig(poly, DEFAULT_SAMPLES)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::trig(TrigPolynomial::new([(0, c)])).expect("constant fits any grid")
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn exact(&self) -> Option<&TrigPolynomial> {
        self.exact.as_ref()
    }

    pub fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.len() as f64
    }

    /// The full spectrum: the exact map, or the DFT restricted below Nyquist.
    pub fn coefficients(&self) -> TrigPolynomial {
        match &self.exact {
            Some(p) => p.clone(),
            None => self.dft_coefficients(self.len() / 2 - 1),
        }
    }

    fn dft_coefficients(&self, kmax: usize) -> TrigPolynomial {
        let n = self.len();
        let mut spec = self.samples.clone();
        ring::fft(&mut spec);
        let scale = 1.0 / n as f64;
        let k = kmax as i64;
        TrigPolynomial::new((-k..=k).map(|f| (f, spec[ring::bin(f, n)] * scale)))
    }

    /// Samples on an `m`-point grid by trigonometric interpolation (exact for
    /// band-limited data). `m` must be at least `len()` or divide it.
    pub fn on_grid(&self, m: usize) -> Vec<Complex64> {
        let n = self.len();
        if m == n {
            return self.samples.clone();
        }
        if m < n {
            assert!(n.is_multiple_of(m), "grid of {m} points does not divide {n}");
            return self.samples.iter().step_by(n / m).copied().collect();
        }
        match &self.exact {
            Some(p) if (m as u64) > 2 * p.max_freq() => {
                let mut buf = vec![ZERO; m];
                for (&k, &c) in p.coeffs() {
                    buf[ring::bin(k, m)] += c;
                }
                ring::ifft(&mut buf);
                buf
            }
            _ => ring::upsample(&self.samples, m),
        }
    }

    /// Spectral multiplier `c_k -> mult(k) c_k` below Nyquist; the Nyquist mode is removed.
    fn spectral(&self, mult: impl Fn(i64) -> Complex64) -> Self {
        if let Some(p) = &self.exact {
            let q = p.map(|k, c| mult(k) * c);
            return BoundaryFunction::from_trig(q, self.len()).expect("support unchanged");
        }
        let n = self.len();
        let mut spec = self.samples.clone();
        ring::fft(&mut spec);
        for (j, c) in spec.iter_mut().enumerate() {
            let k = ring::freq(j, n);
            *c = if k == (n / 2) as i64 { ZERO } else { *c * mult(k) };
        }
        ring::ifft(&mut spec);
        let scale = 1.0 / n as f64;
        spec.iter_mut().for_each(|v| *v *= scale);
        BoundaryFunction { samples: spec, exact: None }
    }

    /// Pointwise product with `e^{im theta}`; spectrally a shift by `m`.
    pub fn twist(&self, m: i64) -> Self {
        let n = self.len();
        let samples = self.samples.iter().enumerate().map(|(j, &v)| v * unit_root(ring::bin(m * j as i64, n), n)).collect();
        let exact = self
            .exact
            .as_ref()
            .map(|p| TrigPolynomial::new(p.coeffs().iter().map(|(&k, &c)| (k + m, c))))
            .filter(|p| (n as u64) > 2 * p.max_freq());
        BoundaryFunction { samples, exact }
    }

    pub fn conj(&self) -> Self {
        BoundaryFunction {
            samples: self.samples.iter().map(|v| v.conj()).collect(),
            exact: self.exact.as_ref().map(|p| TrigPolynomial::new(p.coeffs().iter().map(|(&k, c)| (-k, c.conj())))),
        }
    }
}

/// `fhat(k) = (1/N) sum_j f(theta_j) e^{-ik theta_j}` for `|k| <= kmax`.
pub fn fourier_coefficients(f: &BoundaryFunction, kmax: usize) -> Result<TrigPolynomial> {
    if kmax + 1 > f.len() / 2 {
        return Err(domain(format!("frequency cutoff {kmax} not below Nyquist for {} samples", f.len())));
    }
    Ok(match f.exact() {
        Some(p) => TrigPolynomial::new(p.coeffs().iter().filter(|(k, _)| k.unsigned_abs() <= kmax as u64).map(|(&k, &c)| (k, c))),
        None => f.dft_coefficients(kmax),
    })
}

/// Spectral derivative `d/dtheta`: coefficients multiplied by `ik`.
pub fn derivative(f: &BoundaryFunction) -> BoundaryFunction {
    f.spectral(|k| Complex64::new(0.0, k as f64))
}

/// `f_1(e^{it}) = e^{it} f(e^{it})`.
pub fn times_eit(f: &BoundaryFunction) -> BoundaryFunction {
    f.twist(1)
}

/// Normalised `L^p` norm on the sample grid; `p = inf` gives the sample maximum.
pub fn lp_norm(f: &BoundaryFunction, p: f64) -> Result<f64> {
    grid_lp(f.samples(), p)
}

pub(crate) fn grid_lp(values: &[Complex64], p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(domain(format!("L^p norm needs p >= 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(values.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    let mean = values.iter().map(|v| v.norm().powf(p)).sum::<f64>() / values.len() as f64;
    Ok(mean.powf(1.0 / p))
}

/// Conjugate-function multiplier `m_n = -i sign(n)`, `m_0 = 0`.
pub fn hilbert_transform(f: &BoundaryFunction) -> BoundaryFunction {
    f.spectral(|k| Complex64::new(0.0, -(k.signum() as f64)))
}

/// Riesz projection: the non-negative part of the spectrum.
pub fn riesz_project(f: &BoundaryFunction) -> TrigPolynomial {
    let all = f.coefficients();
    TrigPolynomial::new(all.coeffs().range(0..).map(|(&k, &c)| (k, c)))
}

fn parse_err(path: &Path, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{}: {msg}", path.display()))
}

/// Reads `theta, re[, im]` rows; a non-numeric first row is taken as a header.
/// The angles must be the uniform grid `2 pi j / N`.
pub fn read_samples_csv(path: &Path) -> Result<BoundaryFunction> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| parse_err(path, e))?;
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| parse_err(path, e))?;
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) if v.len() == 2 || v.len() == 3 => rows.push(v),
            Err(_) if line == 0 => continue,
            _ => return Err(parse_err(path, format!("row {}: expected 2 or 3 numeric columns", line + 1))),
        }
    }
    let n = rows.len();
    check_len(n).map_err(|e| parse_err(path, e))?;
    let mut samples = Vec::with_capacity(n);
    for (j, row) in rows.iter().enumerate() {
        let expected = 2.0 * PI * j as f64 / n as f64;
        if (row[0] - expected).abs() > 1e-9 {
            return Err(parse_err(path, format!("row {j}: angle {} is not 2 pi {j}/{n}", row[0])));
        }
        samples.push(Complex64::new(row[1], row.get(2).copied().unwrap_or(0.0)));
    }
    BoundaryFunction::from_samples(samples)
}

/// Reads a `{"k": [re, im]}` coefficient map.
pub fn read_trig_json(path: &Path) -> Result<TrigPolynomial> {
    let text = std::fs::read_to_string(path)?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| parse_err(path, e))?;
    TrigPolynomial::from_json(&v).map_err(|e| parse_err(path, e))
}

/// Dispatches on the file extension (`.json` coefficient map, otherwise CSV samples).
pub fn read_boundary(path: &Path, n: usize) -> Result<BoundaryFunction> {
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("json") => BoundaryFunction::from_trig(read_trig_json(path)?, n),
        _ => read_samples_csv(path),
    }
}
