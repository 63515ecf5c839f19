//! Randomized invariants across the library.

use std::f64::consts::PI;

use abharmonic::boundary::{self, BoundaryFunction, TrigPolynomial};
use abharmonic::extension::{dtheta, dz_series, dzbar_series, operator_residual, poisson_extend, poisson_extension, Expansion, FD_STEP};
use abharmonic::hardy::{classify, hardy_mean};
use abharmonic::kernels::{c_lambda, i_lambda, kernel_dz, kernel_dzbar, kernel_k, m_k, m_radial, poisson_kernel, DiskPoint, Params};
use abharmonic::special_fn::{euler_transform, gamma, hyp2f1, hyp2f1_at_one, hyp2f1_derivative, HypParams};
use abharmonic::Complex64;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = Params> {
    (-0.8f64..2.0, -0.8f64..2.0)
        .prop_filter("alpha + beta must stay clear of -1 and 0", |(a, b)| {
            let s = a + b;
            s > -0.9 && s.abs() > 0.05
        })
        .prop_map(|(a, b)| Params::new(a, b).unwrap())
}

fn point(rmax: f64) -> impl Strategy<Value = DiskPoint> {
    (0.0f64..1.0, 0.0f64..2.0 * PI).prop_map(move |(s, t)| DiskPoint::from_polar(rmax * s.sqrt(), t).unwrap())
}

fn trig() -> impl Strategy<Value = TrigPolynomial> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=17).prop_map(|v| {
        let d = (v.len() / 2) as i64;
        TrigPolynomial::new(v.into_iter().enumerate().map(|(j, (re, im))| {
            let k = j as i64 - d;
            (k, Complex64::new(re, im) / (1.0 + k.abs() as f64))
        }))
    })
}

fn away_from_poles(c: f64) -> bool {
    c > 0.05 || (c - c.round()).abs() > 0.05
}

fn horner_terminating(a: i64, b: f64, c: f64, x: f64) -> f64 {
    let m = -a;
    let mut acc = 1.0;
    for n in (0..m).rev() {
        let nf = n as f64;
        acc = 1.0 + (a as f64 + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x * acc;
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn terminating_series_is_a_polynomial(m in 0i64..12, b in -5.0f64..5.0, c in 0.1f64..6.0, x in 0.0f64..0.99) {
        let p = HypParams::new(-m as f64, b, c).unwrap();
        let want = horner_terminating(-m, b, c, x);
        let got = hyp2f1(&p, x).unwrap();
        // rounding is relative to the largest partial terms when they cancel
        let mut term = 1.0f64;
        let mut scale = 1.0;
        for n in 0..m {
            let nf = n as f64;
            term *= (nf - m as f64) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
            scale += term.abs();
        }
        prop_assert!((got - want).abs() <= 1e-13 * scale, "{got} vs {want}");
    }

    #[test]
    fn euler_identity(a in -5.0f64..5.0, b in -5.0f64..5.0, c in (-5.0f64..5.0).prop_filter("pole", |c| away_from_poles(*c))) {
        let p = HypParams::new(a, b, c).unwrap();
        for j in 0..=9 {
            let x = 0.1 * j as f64;
            let f = hyp2f1(&p, x).unwrap();
            let e = euler_transform(&p, x).unwrap();
            prop_assert!((f - e).abs() <= 1e-10 * (1.0 + f.abs()), "x={x}: {f} vs {e}");
        }
    }

    #[test]
    fn derivative_matches_central_differences(a in -2.0f64..2.0, b in -2.0f64..2.0, c in 1.0f64..4.0) {
        let p = HypParams::new(a, b, c).unwrap();
        let h = 1e-6;
        for j in 0..=8 {
            let x = 0.1 * j as f64;
            let fd = (hyp2f1(&p, x + h).unwrap() - hyp2f1(&p, x - h).unwrap()) / (2.0 * h);
            let d = hyp2f1_derivative(&p, x).unwrap();
            prop_assert!((fd - d).abs() <= 1e-6, "x={x}: {fd} vs {d}");
        }
    }

    #[test]
    fn gauss_summation(a in 0.05f64..3.0, b in 0.05f64..3.0, s in 0.8f64..3.0) {
        let p = HypParams::new(a, b, a + b + s).unwrap();
        let limit = hyp2f1_at_one(&p).unwrap();
        let near = hyp2f1(&p, 1.0 - 1e-6).unwrap();
        prop_assert!((near - limit).abs() <= 1e-3 * limit.abs(), "{near} vs {limit}");
    }

    #[test]
    fn gamma_recurrence(x in 0.1f64..10.0) {
        let lhs = gamma(x + 1.0).unwrap();
        let rhs = x * gamma(x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
    }

    #[test]
    fn radial_integral_bounds(lam in 0.01f64..4.0, r in 0.0f64..0.999) {
        prop_assert!(i_lambda(lam, r).unwrap() <= c_lambda(lam).unwrap() * (1.0 + 1e-6));
        let neg = -lam.min(0.95);
        prop_assert!(i_lambda(neg, r).unwrap() <= c_lambda(-neg).unwrap() * (1.0 - r * r).powf(neg) * (1.0 + 1e-6));
    }

    #[test]
    fn kernel_mean_is_the_radial_solution(p in params(), z in point(0.95)) {
        let n = 4096;
        let mean: Complex64 = (0..n)
            .map(|j| {
                let w = z.z() * Complex64::from_polar(1.0, -2.0 * PI * j as f64 / n as f64);
                poisson_kernel(&p, DiskPoint::new(w).unwrap()).unwrap()
            })
            .sum::<Complex64>()
            / n as f64;
        let m = m_radial(&p, z.r()).unwrap();
        prop_assert!((mean - m).norm() <= 1e-8, "{mean} vs {m}");
    }

    #[test]
    fn kernel_derivatives_match_finite_differences(p in params(), z in point(0.9)) {
        let h = 1e-5;
        let at = |w: Complex64| kernel_k(&p, DiskPoint::new(w).unwrap());
        let ux = (at(z.z() + h) - at(z.z() - h)) / (2.0 * h);
        let uy = (at(z.z() + Complex64::i() * h) - at(z.z() - Complex64::i() * h)) / (2.0 * h);
        let dz = (ux - Complex64::i() * uy) * 0.5;
        let dzb = (ux + Complex64::i() * uy) * 0.5;
        let (kz, kzb) = (kernel_dz(&p, z), kernel_dzbar(&p, z));
        prop_assert!((dz - kz).norm() <= 1e-5 * kz.norm().max(1.0), "{dz} vs {kz}");
        prop_assert!((dzb - kzb).norm() <= 1e-5 * kzb.norm().max(1.0), "{dzb} vs {kzb}");
    }

    #[test]
    fn radial_modes_are_annihilated(p in params(), k in 0u32..5, z in point(0.8)) {
        let u = |w: DiskPoint| m_k(&p, k, w);
        prop_assert!(operator_residual(&p, &u, z, FD_STEP).unwrap().norm() <= 1e-4);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quadrature_and_series_agree(p in params(), f in trig(), z in point(0.9)) {
        let f = BoundaryFunction::trig(f).unwrap();
        let e = Expansion::from_boundary(&p, &f).unwrap();
        let quad = poisson_extend(&p, &f, z).unwrap();
        let series = abharmonic::extension::eval_series(&e, z).unwrap();
        prop_assert!((quad - series).norm() <= 1e-7, "{quad} vs {series}");
    }

    #[test]
    fn angular_derivative_identity(p in params(), f in trig(), z in point(0.9)) {
        let f = BoundaryFunction::trig(f).unwrap();
        let e = Expansion::from_boundary(&p, &f).unwrap();
        let w = z.z();
        let want = Complex64::i() * (w * dz_series(&e, z).unwrap() - w.conj() * dzbar_series(&e, z).unwrap());
        prop_assert!((dtheta(&p, &f, z).unwrap() - want).norm() <= 1e-6);
    }

    #[test]
    fn extensions_are_annihilated(p in params(), f in trig(), z in point(0.8)) {
        let f = BoundaryFunction::trig(f).unwrap();
        let u = poisson_extension(&p, &f).unwrap();
        prop_assert!(operator_residual(&p, &u, z, FD_STEP).unwrap().norm() <= 1e-3);
    }

    #[test]
    fn boundary_values_are_approached(p in params(), f in trig()) {
        let f = BoundaryFunction::trig(f).unwrap();
        let u = poisson_extension(&p, &f).unwrap();
        let gap = |r: f64| -> f64 {
            let ring = abharmonic::extension::DiskEval::eval_ring(&u, r, f.len()).unwrap();
            ring.iter().zip(f.samples()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
        };
        prop_assert!(gap(0.999) < gap(0.9));
    }

    #[test]
    fn hardy_means_increase_with_p(p in params(), f in trig(), r in 0.1f64..0.99) {
        let f = BoundaryFunction::trig(f).unwrap();
        let u = poisson_extension(&p, &f).unwrap();
        let m1 = hardy_mean(&u, 1.0, r, 256).unwrap();
        let m2 = hardy_mean(&u, 2.0, r, 256).unwrap();
        let mi = hardy_mean(&u, f64::INFINITY, r, 256).unwrap();
        prop_assert!(m1 <= m2 + 1e-10 && m2 <= mi + 1e-10, "{m1} {m2} {mi}");
    }

    #[test]
    fn riesz_projection_recovers_the_analytic_completion(f in trig()) {
        let real = BoundaryFunction::trig(f.map(|_, v| v * 0.5)).unwrap();
        let real = BoundaryFunction::from_samples(
            real.samples().iter().zip(real.conj().samples()).map(|(a, b)| a + b).collect(),
        ).unwrap();
        let h = boundary::hilbert_transform(&real);
        let mean = boundary::fourier_coefficients(&real, 0).unwrap().get(0);
        let plus = BoundaryFunction::from_trig(boundary::riesz_project(&real), real.len()).unwrap();
        for j in 0..real.len() {
            let lhs = real.samples()[j] + Complex64::i() * h.samples()[j] + mean;
            prop_assert!((lhs - 2.0 * plus.samples()[j]).norm() <= 1e-12);
        }
    }

    #[test]
    fn verdicts_are_pure(a in -1.5f64..3.0, b in -1.5f64..3.0, lp in 1.0f64..10.0) {
        let first = format!("{:?}", classify(a, b, lp));
        for _ in 0..100 {
            prop_assert_eq!(format!("{:?}", classify(a, b, lp)), first.clone());
        }
    }
}
