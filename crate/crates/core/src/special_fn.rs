//! Real-argument Gamma, Pochhammer symbols and the Gauss hypergeometric
//! function `F(a, b; c; x)` together with the identities the rest of the
//! crate relies on: the Euler transformation, the derivative rule, Gauss
//! summation at `x = 1` and the logarithmic coefficient of the balanced case.

use std::f64::consts::PI;

use statrs::function::gamma::digamma;

use crate::error::{domain, Error, Result};

/// Distance below which a parameter is treated as an exact integer.
pub const SNAP_TOL: f64 = 1e-12;

/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 100_000;

const SERIES_EPS: f64 = 1e-15;

/// Above this argument the direct series needs tens of thousands of terms;
/// switch to the `1 - x` connection formula when `c - a - b` allows it.
const NEAR_ONE: f64 = 0.999;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Returns `Some(-m)` when `x` lies within [`SNAP_TOL`] of a non-positive integer.
pub fn nonpositive_integer(x: f64) -> Option<i64> {
    let r = x.round();
    if r <= 0.0 && (x - r).abs() <= SNAP_TOL {
        Some(r as i64)
    } else {
        None
    }
}

pub(crate) fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() <= SNAP_TOL
}

/// `sin(pi x)` with exact zeros at the integers.
fn sin_pi(x: f64) -> f64 {
    let mut y = x % 2.0;
    if y < 0.0 {
        y += 2.0;
    }
    if y == 0.0 || y == 1.0 {
        return 0.0;
    }
    if y > 1.0 {
        return -sin_pi(y - 1.0);
    }
    if y > 0.5 {
        y = 1.0 - y;
    }
    (PI * y).sin()
}

fn lanczos_sum(xm1: f64) -> f64 {
    LANCZOS_COEF[1..].iter().enumerate().fold(LANCZOS_COEF[0], |acc, (i, c)| acc + c / (xm1 + (i + 1) as f64))
}

/// Gamma function on the real line (Lanczos, g = 7, with reflection below 1/2).
pub fn gamma(x: f64) -> Result<f64> {
    if nonpositive_integer(x).is_some() {
        return Err(Error::Pole(x));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        PI / (sin_pi(x) * gamma_unchecked(1.0 - x))
    } else {
        let xm1 = x - 1.0;
        let t = xm1 + LANCZOS_G + 0.5;
        // split the power so that it does not overflow before exp(-t) is applied
        let half = t.powf(0.5 * (xm1 + 0.5));
        (2.0 * PI).sqrt() * half * (half * (-t).exp()) * lanczos_sum(xm1)
    }
}

/// `1 / Gamma(x)`, which is entire: zero at the poles of Gamma.
pub fn recip_gamma(x: f64) -> f64 {
    if nonpositive_integer(x).is_some() {
        0.0
    } else {
        1.0 / gamma_unchecked(x)
    }
}

/// `(ln |Gamma(x)|, sign Gamma(x))`.
pub fn ln_gamma_abs(x: f64) -> Result<(f64, f64)> {
    if nonpositive_integer(x).is_some() {
        return Err(Error::Pole(x));
    }
    if x < 0.5 {
        let s = sin_pi(x);
        let (lg, _) = ln_gamma_abs(1.0 - x)?;
        Ok((PI.ln() - s.abs().ln() - lg, s.signum()))
    } else {
        let xm1 = x - 1.0;
        let t = xm1 + LANCZOS_G + 0.5;
        let lg = 0.5 * (2.0 * PI).ln() + (xm1 + 0.5) * t.ln() - t + lanczos_sum(xm1).ln();
        Ok((lg, 1.0))
    }
}

/// `prod Gamma(num) / prod Gamma(den)`. A pole in the denominator yields 0.
pub fn gamma_ratio(num: &[f64], den: &[f64]) -> Result<f64> {
    for &x in num {
        if nonpositive_integer(x).is_some() {
            return Err(Error::Pole(x));
        }
    }
    if den.iter().any(|&x| nonpositive_integer(x).is_some()) {
        return Ok(0.0);
    }
    let small = num.iter().chain(den).all(|x| x.abs() <= 60.0);
    if small {
        let n: f64 = num.iter().map(|&x| gamma_unchecked(x)).product();
        let d: f64 = den.iter().map(|&x| recip_gamma(x)).product();
        return Ok(n * d);
    }
    let mut log = 0.0;
    let mut sign = 1.0;
    for &x in num {
        let (l, s) = ln_gamma_abs(x)?;
        log += l;
        sign *= s;
    }
    for &x in den {
        let (l, s) = ln_gamma_abs(x)?;
        log -= l;
        sign *= s;
    }
    Ok(sign * log.exp())
}

/// Rising factorial `(a)_n = a (a + 1) ... (a + n - 1)`, by direct product.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, j| acc * (a + j as f64))
}

/// Parameters `(a, b, c)` of `F(a, b; c; x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl HypParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(domain("hypergeometric parameters must be finite"));
        }
        if nonpositive_integer(c).is_some() {
            return Err(Error::InvalidHypParams(c));
        }
        Ok(HypParams { a, b, c })
    }

    /// `c - a - b`; its sign decides the behaviour at `x = 1`.
    pub fn excess(&self) -> f64 {
        self.c - self.a - self.b
    }

    /// Degree of the polynomial when `a` or `b` is a non-positive integer.
    pub fn terminating_degree(&self) -> Option<u32> {
        let da = nonpositive_integer(self.a).map(|m| (-m) as u32);
        let db = nonpositive_integer(self.b).map(|m| (-m) as u32);
        match (da, db) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (d, None) | (None, d) => d,
        }
    }
}

fn snap(x: f64) -> f64 {
    if is_integer(x) {
        x.round()
    } else {
        x
    }
}

fn check_arg(x: f64) -> Result<()> {
    if !(x > -1.0 && x < 1.0) {
        return Err(domain(format!("hypergeometric argument {x} outside (-1, 1)")));
    }
    Ok(())
}

/// Plain power series. Terminating cases are summed to their exact degree.
fn direct_series(a: f64, b: f64, c: f64, x: f64, degree: Option<u32>) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    if let Some(m) = degree {
        for n in 0..m {
            let nf = n as f64;
            term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
            sum += term;
        }
        return Ok(sum);
    }
    let mut small = 0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
        sum += term;
        if term.abs() < SERIES_EPS * sum.abs() {
            small += 1;
            if small == 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NoConvergence { x, terms: MAX_TERMS })
}

/// Gauss hypergeometric function `F(a, b; c; x)` for real `x` in `(-1, 1)`.
///
/// Terminating parameters (within [`SNAP_TOL`] of a non-positive integer) are
/// snapped and summed exactly. Otherwise the series is summed until three
/// consecutive terms fall below `1e-15` of the partial sum. For `c - a - b < 0`
/// and `x > 0.9` the Euler-transformed series is summed instead; for
/// `x > 0.999` the `1 - x` connection formula is used, in its logarithmic
/// form when `c - a - b` is an integer.
pub fn hyp2f1(p: &HypParams, x: f64) -> Result<f64> {
    check_arg(x)?;
    let (a, b, c) = (snap(p.a), snap(p.b), p.c);
    if let Some(m) = p.terminating_degree() {
        return direct_series(a, b, c, x, Some(m));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let s = c - a - b;
    if x > NEAR_ONE {
        return if is_integer(s) { log_connection(a, b, c, x, s.round() as i64) } else { connection_near_one(a, b, c, x) };
    }
    if s < 0.0 && x > 0.9 {
        let q = HypParams { a: snap(c - a), b: snap(c - b), c };
        return Ok((1.0 - x).powf(s) * direct_series(q.a, q.b, q.c, x, q.terminating_degree())?);
    }
    direct_series(a, b, c, x, None)
}

/// `F(a,b;c;x) = A F(a,b;1-s;1-x) + B (1-x)^s F(c-a,c-b;1+s;1-x)` with `s = c-a-b`.
fn connection_near_one(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let s = c - a - b;
    let y = 1.0 - x;
    let first = gamma_ratio(&[c, s], &[c - a, c - b])?;
    let second = gamma_ratio(&[c, -s], &[a, b])?;
    let mut out = 0.0;
    if first != 0.0 {
        let q = HypParams { a, b, c: 1.0 - s };
        out += first * direct_series(a, b, 1.0 - s, y, q.terminating_degree())?;
    }
    if second != 0.0 {
        let q = HypParams { a: snap(c - a), b: snap(c - b), c: 1.0 + s };
        out += second * y.powf(s) * direct_series(q.a, q.b, q.c, y, q.terminating_degree())?;
    }
    Ok(out)
}

/// Connection formula for `c = a + b + m`, `m` an integer, where the two
/// branches of the generic formula merge into a `log(1 - x)` series.
fn log_connection(a: f64, b: f64, c: f64, x: f64, m: i64) -> Result<f64> {
    let y = 1.0 - x;
    if m < 0 {
        let q = HypParams { a: snap(c - a), b: snap(c - b), c };
        let inner = match q.terminating_degree() {
            Some(d) => direct_series(q.a, q.b, c, x, Some(d))?,
            None => log_connection(q.a, q.b, c, x, -m)?,
        };
        return Ok(y.powi(m as i32) * inner);
    }
    let mu = m as f64;
    let mut finite = 0.0;
    if m > 0 {
        let mut t = 1.0;
        let mut fact = (1..m).map(|j| j as f64).product::<f64>();
        for k in 0..m {
            finite += t * fact;
            let kf = k as f64;
            t *= (a + kf) * (b + kf) / (kf + 1.0) * -y;
            if k + 1 < m {
                fact /= (m - k - 1) as f64;
            }
        }
        finite *= gamma_ratio(&[c], &[a + mu, b + mu])?;
    }
    let outer = gamma_ratio(&[c], &[a, b])?;
    if outer == 0.0 {
        return Ok(finite);
    }
    let ly = y.ln();
    let mut u = 1.0 / (1..=m).map(|j| j as f64).product::<f64>();
    let mut sum = 0.0;
    let mut small = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let bracket = ly - digamma(kf + 1.0) - digamma(kf + mu + 1.0) + digamma(a + kf + mu) + digamma(b + kf + mu);
        let term = u * bracket;
        sum += term;
        if term.abs() < SERIES_EPS * sum.abs() || term == 0.0 {
            small += 1;
            if small == 3 {
                return Ok(finite - (-y).powi(m as i32) * outer * sum);
            }
        } else {
            small = 0;
        }
        u *= (a + mu + kf) * (b + mu + kf) / ((kf + 1.0) * (kf + mu + 1.0)) * y;
    }
    Err(Error::NoConvergence { x, terms: MAX_TERMS })
}

/// Right-hand side of the Euler transformation,
/// `(1 - x)^{c-a-b} F(c - a, c - b; c; x)`.
pub fn euler_transform(p: &HypParams, x: f64) -> Result<f64> {
    check_arg(x)?;
    let q = HypParams::new(p.c - p.a, p.c - p.b, p.c)?;
    Ok((1.0 - x).powf(p.excess()) * hyp2f1(&q, x)?)
}

/// `d/dx F(a, b; c; x) = (ab / c) F(a + 1, b + 1; c + 1; x)`.
pub fn hyp2f1_derivative(p: &HypParams, x: f64) -> Result<f64> {
    check_arg(x)?;
    let pref = p.a * p.b / p.c;
    if pref == 0.0 || nonpositive_integer(p.a).is_some_and(|m| m == 0) || nonpositive_integer(p.b).is_some_and(|m| m == 0) {
        return Ok(0.0);
    }
    let q = HypParams::new(p.a + 1.0, p.b + 1.0, p.c + 1.0)?;
    Ok(pref * hyp2f1(&q, x)?)
}

/// Gauss summation: `F(a, b; c; 1) = Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b))`
/// for `c - a - b > 0`. A pole of a denominator Gamma gives the exact value 0.
pub fn hyp2f1_at_one(p: &HypParams) -> Result<f64> {
    let s = p.excess();
    if s <= 0.0 {
        return Err(domain(format!("F(a,b;c;1) diverges: c - a - b = {s} <= 0")));
    }
    if let Some(m) = p.terminating_degree() {
        // Chu-Vandermonde: (c - b)_m / (c)_m with b the non-terminating parameter
        let other = if nonpositive_integer(p.a) == Some(-(m as i64)) { p.b } else { p.a };
        return Ok(pochhammer(p.c - other, m) / pochhammer(p.c, m));
    }
    gamma_ratio(&[p.c, s], &[p.c - p.a, p.c - p.b])
}

/// Coefficient of `log(1 - x)` in `F(a, b; a + b; x)` as `x -> 1-`:
/// `-Gamma(a + b) / (Gamma(a) Gamma(b))`.
pub fn gauss_log_coefficient(a: f64, b: f64) -> Result<f64> {
    if nonpositive_integer(a).is_some() {
        return Err(Error::Pole(a));
    }
    if nonpositive_integer(b).is_some() {
        return Err(Error::Pole(b));
    }
    Ok(-gamma(a + b)? * recip_gamma(a) * recip_gamma(b))
}
