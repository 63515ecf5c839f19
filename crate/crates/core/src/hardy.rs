//! Circle means `M_p(r, u)`, growth fits, norm-bound verification and the
//! membership decision table.

use num_complex::Complex64;
use serde::Serialize;

use crate::boundary::{self, grid_lp, BoundaryFunction};
use crate::error::{domain, Error, Result};
use crate::extension::{dtheta_extension, zbar_dzbar_extension, zdz_extension, DiskEval};
use crate::kernels::{c_alpha_beta, c_lambda, i_lambda, m_k_dzbar, DiskPoint, Params};
use crate::special_fn::{self, SNAP_TOL};

/// Allowed negative slack in bound checks.
pub const SLACK_TOL: f64 = 1e-6;

/// Default radii for growth fits.
pub const GROWTH_RADII: [f64; 5] = [0.95, 0.97, 0.99, 0.995, 0.999];

/// Radii close enough to the boundary that lower-order corrections to the
/// blow-up rate are below the fit tolerance.
pub const WITNESS_RADII: [f64; 5] = [0.999, 0.9995, 0.9999, 0.99995, 0.99999];

/// `M_p(r, u) = ((1/N) sum_j |u(r e^{i theta_j})|^p)^{1/p}`; the grid maximum for `p = inf`.
pub fn hardy_mean(u: &(impl DiskEval + ?Sized), p: f64, r: f64, n: usize) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(domain(format!("Hardy mean needs p >= 1, got {p}")));
    }
    if n == 0 {
        return Err(domain("Hardy mean needs at least one sample"));
    }
    grid_lp(&u.eval_ring(r, n)?, p)
}

/// Least-squares fit `log M = gamma log(1 - r^2) + const`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthFit {
    pub gamma: f64,
    /// RMS of the fit residuals in log space.
    pub residual: f64,
}

/// Sampled `r -> M_p(r, u)` with an optional growth fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HardyProfile {
    #[serde(serialize_with = "ser_p")]
    pub p: f64,
    pub radii: Vec<f64>,
    pub means: Vec<f64>,
    pub fit: Option<GrowthFit>,
}

fn ser_p<S: serde::Serializer>(p: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if p.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*p)
    }
}

fn check_radii(radii: &[f64]) -> Result<()> {
    if radii.is_empty() {
        return Err(domain("radius list is empty"));
    }
    if radii.iter().any(|r| !(0.0..1.0).contains(r)) {
        return Err(domain("radii must lie in [0, 1)"));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(domain("radii must be strictly increasing"));
    }
    Ok(())
}

fn fit_log_log(radii: &[f64], means: &[f64]) -> Result<GrowthFit> {
    if means.iter().all(|&m| m < 1e-14) {
        return Err(Error::DegenerateFit("all means are below 1e-14".into()));
    }
    if means.iter().any(|&m| !(m > 0.0) || !m.is_finite()) {
        return Err(Error::DegenerateFit("a mean is zero or not finite".into()));
    }
    let xs: Vec<f64> = radii.iter().map(|r| (1.0 - r * r).ln()).collect();
    let ys: Vec<f64> = means.iter().map(|m| m.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let gamma = sxy / sxx;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - my - gamma * (x - mx)).powi(2)).sum();
    Ok(GrowthFit { gamma, residual: (rss / n).sqrt() })
}

/// Blow-up exponent `gamma` in `M_p(r, u) ~ C (1 - r^2)^gamma` from at least four radii above 0.9.
pub fn growth_exponent(u: &(impl DiskEval + ?Sized), p: f64, radii: &[f64], n: usize) -> Result<GrowthFit> {
    check_radii(radii)?;
    if radii.len() < 4 || radii.iter().any(|&r| r <= 0.9) {
        return Err(domain("growth fit needs at least 4 radii, all above 0.9"));
    }
    let means = radii.iter().map(|&r| hardy_mean(u, p, r, n)).collect::<Result<Vec<_>>>()?;
    fit_log_log(radii, &means)
}

/// Means over `radii`; the fit uses the radii above 0.9 when there are at least four.
pub fn hardy_profile(u: &(impl DiskEval + ?Sized), p: f64, radii: &[f64], n: usize) -> Result<HardyProfile> {
    check_radii(radii)?;
    let means = radii.iter().map(|&r| hardy_mean(u, p, r, n)).collect::<Result<Vec<_>>>()?;
    let (outer_r, outer_m): (Vec<f64>, Vec<f64>) = radii.iter().zip(&means).filter(|(r, _)| **r > 0.9).map(|(r, m)| (*r, *m)).unzip();
    let fit = if outer_r.len() >= 4 { fit_log_log(&outer_r, &outer_m).ok() } else { None };
    Ok(HardyProfile { p, radii: radii.to_vec(), means, fit })
}

/// `max (|d_z u| + |d_zbar u|) / (|d_z u| - |d_zbar u|)` over `grid`; `+inf` when a denominator is not positive.
pub fn quasiregularity_constant(u_dz: &(impl DiskEval + ?Sized), u_dzbar: &(impl DiskEval + ?Sized), grid: &[DiskPoint]) -> Result<f64> {
    let mut k = 1.0f64;
    for &z in grid {
        let a = u_dz.eval(z)?.norm();
        let b = u_dzbar.eval(z)?.norm();
        if a - b <= 0.0 {
            return Ok(f64::INFINITY);
        }
        k = k.max((a + b) / (a - b));
    }
    Ok(k)
}

/// Result of checking `lhs(r) <= rhs(r)` on a radius grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub case: String,
    pub params: [f64; 2],
    #[serde(serialize_with = "ser_p")]
    pub p: f64,
    pub radii: Vec<f64>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub slack: Vec<f64>,
    /// Norm of the boundary trace, the `r -> 1` limit of the left side, when it is known.
    pub trace_lhs: Option<f64>,
    /// `sup` of the left side over the radii and the trace.
    pub norm_lhs: f64,
    pub pass: bool,
}

impl BoundReport {
    fn build(case: &str, p: &Params, lp: f64, radii: &[f64], lhs: Vec<f64>, rhs: Vec<f64>, trace: Option<(f64, f64)>) -> Self {
        let slack: Vec<f64> = rhs.iter().zip(&lhs).map(|(r, l)| r - l).collect();
        let mut pass = slack.iter().all(|&s| s >= -SLACK_TOL);
        let mut norm_lhs = lhs.iter().copied().fold(0.0, f64::max);
        if let Some((t, bound)) = trace {
            pass &= bound - t >= -SLACK_TOL;
            norm_lhs = norm_lhs.max(t);
        }
        BoundReport {
            case: case.to_string(),
            params: [p.alpha, p.beta],
            p: lp,
            radii: radii.to_vec(),
            lhs,
            rhs,
            slack,
            trace_lhs: trace.map(|t| t.0),
            norm_lhs,
            pass,
        }
    }
}

/// `L^p` norm of boundary data on an 8x refined grid, closer to the essential sup for `p = inf`.
pub fn boundary_norm(f: &BoundaryFunction, p: f64) -> Result<f64> {
    grid_lp(&f.on_grid(8 * f.len()), p)
}

fn ring_samples(f: &BoundaryFunction) -> usize {
    f.len().max(256)
}

/// Checks `M_p(r, d_theta u) <= |c_{alpha,beta}| c_{alpha+beta+1} ||fdot||_p`, including the boundary trace.
pub fn verify_dtheta_bound(p: &Params, f: &BoundaryFunction, lp: f64, radii: &[f64]) -> Result<BoundReport> {
    p.require_poisson()?;
    check_radii(radii)?;
    let fdot = boundary::derivative(f);
    let norm = boundary_norm(&fdot, lp)?;
    let rhs = c_alpha_beta(p)?.abs() * c_lambda(p.sum() + 1.0)? * norm;
    let u = dtheta_extension(p, f)?;
    let n = ring_samples(f);
    let lhs = radii.iter().map(|&r| hardy_mean(&u, lp, r, n)).collect::<Result<Vec<_>>>()?;
    Ok(BoundReport::build("angular-derivative-bound", p, lp, radii, lhs, vec![rhs; radii.len()], Some((norm, rhs))))
}

/// Checks the per-radius bounds for `z d_z u` and `zbar d_zbar u` with `I_{alpha+beta}(r)`
/// and, when `alpha + beta > 0`, the uniform bounds with `c_{alpha+beta}`.
pub fn verify_dz_bounds(p: &Params, f: &BoundaryFunction, lp: f64, radii: &[f64]) -> Result<Vec<BoundReport>> {
    p.require_poisson()?;
    check_radii(radii)?;
    let c = c_alpha_beta(p)?.abs();
    let fdot = boundary_norm(&boundary::derivative(f), lp)?;
    let fnorm = boundary_norm(f, lp)?;
    let data_z = fdot + p.beta.abs() * fnorm;
    let data_zbar = fdot + p.alpha.abs() * fnorm;
    let n = ring_samples(f);
    let zdz = zdz_extension(p, f)?;
    let zbdzb = zbar_dzbar_extension(p, f)?;
    let lhs_z = radii.iter().map(|&r| hardy_mean(&zdz, lp, r, n)).collect::<Result<Vec<_>>>()?;
    let lhs_zb = radii.iter().map(|&r| hardy_mean(&zbdzb, lp, r, n)).collect::<Result<Vec<_>>>()?;
    let i_r = radii.iter().map(|&r| i_lambda(p.sum(), r)).collect::<Result<Vec<_>>>()?;
    let mut out = vec![
        BoundReport::build("zdz-radial", p, lp, radii, lhs_z.clone(), i_r.iter().map(|i| c * i * data_z).collect(), None),
        BoundReport::build("zbar-dzbar-radial", p, lp, radii, lhs_zb.clone(), i_r.iter().map(|i| c * i * data_zbar).collect(), None),
    ];
    if p.sum() > 0.0 {
        let cl = c_lambda(p.sum())?;
        out.push(BoundReport::build("zdz-uniform", p, lp, radii, lhs_z, vec![c * cl * data_z; radii.len()], None));
        out.push(BoundReport::build("zbar-dzbar-uniform", p, lp, radii, lhs_zb, vec![c * cl * data_zbar; radii.len()], None));
    }
    Ok(out)
}

/// Closed or open range of exponents `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PRange {
    pub lo: f64,
    pub hi: f64,
    pub closed: bool,
}

impl PRange {
    pub const ALL: PRange = PRange { lo: 1.0, hi: f64::INFINITY, closed: true };
    pub const OPEN: PRange = PRange { lo: 1.0, hi: f64::INFINITY, closed: false };

    pub fn contains(&self, p: f64) -> bool {
        if self.closed {
            p >= self.lo && p <= self.hi
        } else {
            p > self.lo && p < self.hi
        }
    }
}

/// What the theory says about the first derivatives of `u = P_{alpha,beta}[f]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Classification {
    /// Both derivatives lie in the Hardy space for every `p` in the range.
    HardyMember(PRange),
    /// Derivatives are area-integrable for `p < p_bound`, with no circle-mean control.
    AreaLebesgueOnly {
        p_bound: f64,
    },
    /// A derivative in `H^1` forces `u = 0`.
    RigidityZero,
    /// A derivative in `H^1` forces `u` to be polyharmonic of the given order.
    RigidityPolyharmonic {
        order: u32,
    },
    /// Membership holds iff the conjugate function of `fdot` is in `L^p`.
    HilbertConditional,
    Inadmissible,
}

/// A classification, the area-integrability statement when one applies, and the rule that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    pub classification: Classification,
    pub area: Option<Classification>,
    pub provenance: &'static str,
}

fn natural(x: f64) -> Option<u32> {
    (x > -0.5 && special_fn::is_integer(x)).then(|| x.round() as u32)
}

fn inadmissible() -> Verdict {
    Verdict { classification: Classification::Inadmissible, area: None, provenance: "parameter-check" }
}

/// Decision table from the parameters alone.
pub fn membership_verdict(p: &Params, lp: f64) -> Verdict {
    let s = p.sum();
    if !(s > -1.0) || !(lp >= 1.0) {
        return inadmissible();
    }
    let (a, b) = (p.alpha, p.beta);
    if s.abs() <= SNAP_TOL {
        if a == 0.0 && b == 0.0 {
            return if PRange::OPEN.contains(lp) {
                Verdict { classification: Classification::HardyMember(PRange::OPEN), area: None, provenance: "classical-riesz" }
            } else {
                Verdict { classification: Classification::HilbertConditional, area: None, provenance: "classical-riesz" }
            };
        }
        return Verdict { classification: Classification::RigidityZero, area: None, provenance: "balanced-rigidity" };
    }
    if s > 0.0 {
        return Verdict { classification: Classification::HardyMember(PRange::ALL), area: None, provenance: "positive-weight-hardy" };
    }
    let bound = -1.0 / s;
    let area = (lp < bound).then_some(Classification::AreaLebesgueOnly { p_bound: bound });
    let (classification, provenance) = match (natural(a), natural(b)) {
        (Some(m), _) | (_, Some(m)) => (Classification::RigidityPolyharmonic { order: m + 1 }, "integer-polyharmonic"),
        _ => (Classification::RigidityZero, "non-integer-rigidity"),
    };
    Verdict { classification, area, provenance }
}

/// [`membership_verdict`] from raw numbers; invalid parameters are inadmissible.
pub fn classify(alpha: f64, beta: f64, lp: f64) -> Verdict {
    match Params::new(alpha, beta) {
        Ok(p) => membership_verdict(&p, lp),
        Err(_) => inadmissible(),
    }
}

/// `||H(fdot)||_p` on the refined grid; finite values mean the conjugate-function
/// condition holds for the sampled data.
pub fn hilbert_condition(f: &BoundaryFunction, lp: f64) -> Result<f64> {
    boundary_norm(&boundary::hilbert_transform(&boundary::derivative(f)), lp)
}

/// `d_zbar M_{alpha,beta,k}`, or its mirror `conj(d_zbar M_{beta,alpha,k})` when `alpha` is a
/// non-negative integer; `|witness| ~ (1 - |z|^2)^{alpha+beta}` near the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RigidityWitness {
    pub params: Params,
    pub k: u32,
    pub mirrored: bool,
}

impl DiskEval for RigidityWitness {
    fn eval(&self, z: DiskPoint) -> Result<Complex64> {
        if self.mirrored {
            Ok(m_k_dzbar(&self.params.swapped(), self.k, z)?.conj())
        } else {
            m_k_dzbar(&self.params, self.k, z)
        }
    }
}

/// Chooses `k` so that the witness prefactor is nonzero: `k = beta + 1` for integer
/// `beta`, the mirror with `k = alpha + 1` for integer `alpha`, and `k = 0` otherwise.
pub fn rigidity_witness(p: &Params) -> Result<RigidityWitness> {
    let s = p.sum();
    if !(s > -1.0 && s < 0.0) {
        return Err(domain(format!("witnesses need alpha + beta in (-1, 0), got {s}")));
    }
    Ok(match (natural(p.alpha), natural(p.beta)) {
        (_, Some(b)) => RigidityWitness { params: *p, k: b + 1, mirrored: false },
        (Some(a), None) => RigidityWitness { params: *p, k: a + 1, mirrored: true },
        (None, None) => RigidityWitness { params: *p, k: 0, mirrored: false },
    })
}

/// Ring samples for witness growth fits.
pub const WITNESS_SAMPLES: usize = 64;
