use std::f64::consts::PI;

use roughharm::weierstrass::lifted_lacunary;
use roughharm::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn ball_volumes_and_annuli() {
    assert_eq!(unit_ball_volume(1).unwrap(), 2.0);
    assert!(close(unit_ball_volume(2).unwrap(), PI, 1e-15));
    assert!(close(unit_ball_volume(3).unwrap(), 4.0 * PI / 3.0, 1e-14));
    let s2 = build_sphere_quadrature(3, 8, QuadratureMode::Product, None).unwrap();
    let ball = build_annulus_rule(3, 0.0, 1.0, 8, s2).unwrap();
    assert!(close(ball.volume(), 4.0 * PI / 3.0, 1e-13));
    let s1 = build_sphere_quadrature(2, 8, QuadratureMode::Product, None).unwrap();
    let ring = build_annulus_rule(2, 1.0, 2.0, 8, s1.clone()).unwrap();
    assert!(close(ring.volume(), 3.0 * PI, 1e-13));
    assert!(build_annulus_rule(2, 1.0, 1.0, 8, s1).is_err());
}

#[test]
fn sphere_moments() {
    let s1 = build_sphere_quadrature(2, 1, QuadratureMode::Product, None).unwrap();
    assert!(close(s1.integrate(|_| 1.0), 2.0 * PI, 1e-14));
    let s2 = build_sphere_quadrature(3, 4, QuadratureMode::Product, None).unwrap();
    assert!(close(s2.integrate(|x| x[0] * x[0]), 4.0 * PI / 3.0, 1e-13));
    assert!(close(s2.integrate(|x| (x[0] * x[1]).powi(2)), 4.0 * PI / 15.0, 1e-13));
    // Monte Carlo agrees to its statistical accuracy.
    let mc = build_sphere_quadrature(3, 200_000, QuadratureMode::MonteCarlo, Some(5)).unwrap();
    assert!(close(mc.integrate(|x| (x[0] * x[1]).powi(2)), 4.0 * PI / 15.0, 0.02));
}

#[test]
fn dimensions_and_eigenvalues() {
    assert_eq!(harmonic_dimension(2, 5).unwrap(), 2);
    assert_eq!(harmonic_dimension(3, 2).unwrap(), 5);
    for n in 2..9 {
        assert_eq!(harmonic_dimension(n, 0).unwrap(), 1);
    }
    assert_eq!(laplace_beltrami_eigenvalue(4, 0), 0.0);
    assert_eq!(laplace_beltrami_eigenvalue(3, 1), 2.0);
    assert_eq!(laplace_beltrami_eigenvalue(2, 3), 9.0);
}

#[test]
fn highest_weight_values_and_norms() {
    let e1 = [1.0, 0.0, 0.0];
    for k in 0..40 {
        assert_eq!(highest_weight_eval(k, &e1), 1.0);
    }
    let x = [0.3, -0.5, (1.0f64 - 0.34).sqrt()];
    assert!(close(highest_weight_eval(2, &x), 0.09 - 0.25, 1e-15));
    assert!(close(highest_weight_l2_norm(2, 1).unwrap(), PI.sqrt(), 1e-14));
    assert!(close(highest_weight_l2_norm(3, 1).unwrap(), (4.0 * PI / 3.0).sqrt(), 1e-14));
    let rule = build_sphere_quadrature(3, 130, QuadratureMode::Product, None).unwrap();
    let quad = rule.integrate(|x| highest_weight_eval(64, x).powi(2)).sqrt();
    let closed = highest_weight_l2_norm(3, 64).unwrap();
    assert!((quad - closed).abs() / closed < 1e-8);
}

#[test]
fn zonal_and_basis_elements() {
    let pole = SpherePoint::e1(2).unwrap();
    let z = HarmonicFunction::zonal(2, 5, pole.clone()).unwrap();
    let t = 0.7f64;
    assert!(close(z.eval(&[t.cos(), t.sin()]), (5.0 * t).cos() / PI.sqrt(), 1e-14));
    let pole3 = SpherePoint::new(vec![0.0, 0.6, 0.8]).unwrap();
    let z3 = HarmonicFunction::zonal(3, 6, pole3.clone()).unwrap();
    let at_pole = z3.eval(pole3.coords());
    let rule = build_sphere_quadrature(3, 40, QuadratureMode::Product, None).unwrap();
    assert!(rule.nodes().all(|x| z3.eval(x) <= at_pole + 1e-12));
    let z1 = HarmonicFunction::zonal(3, 1, pole3).unwrap();
    assert!(close(rule.integrate(|x| z1.eval(x).powi(2)), 1.0, 1e-12));
    let b0 = orthonormal_basis(3, 0).unwrap();
    assert_eq!(b0.len(), 1);
    assert!(close(b0[0].eval(&[0.0, 0.0, 1.0]), 1.0 / (4.0 * PI).sqrt(), 1e-15));
    assert_eq!(orthonormal_basis(3, 1).unwrap().len(), 3);
}

#[test]
fn random_harmonics_are_unit_and_reproducible() {
    let a = random_unit_harmonic(3, 12, 9).unwrap();
    let b = random_unit_harmonic(3, 12, 9).unwrap();
    assert_eq!(a.coefficients(), b.coefficients());
    let c = a.coefficients().unwrap();
    assert!(close(c.iter().map(|v| v * v).sum::<f64>(), 1.0, 1e-12));
    let rule = build_sphere_quadrature(3, 26, QuadratureMode::Product, None).unwrap();
    assert!(close(rule.integrate(|x| a.eval(x).powi(2)), 1.0, 1e-10));
    let sup = estimate_sup_norm(&a).unwrap();
    assert!(sup.value <= a.sup_norm_bound() + 1e-12);
}

#[test]
fn schedule_and_series_certificates() {
    let u = build_series(SeriesVariant::NotCbeta, 3, 1 << 10, 1.0).unwrap();
    assert_eq!(u.terms().len(), 10);
    assert!(close(u.normal_certificate().bound, PI * PI / 6.0, 1e-14));
    let h = build_series(SeriesVariant::AnynHolder { alpha: 0.5 }, 3, 1 << 10, 1.0).unwrap();
    assert!(close(h.normal_certificate().bound, 1.0 / (2f64.sqrt() - 1.0), 1e-13));
    let e1 = [1.0, 0.0, 0.0];
    let v = u.eval(&e1, 1.0).unwrap();
    assert!((v.value - PI * PI / 6.0).abs() <= v.tail_bound);
    let w = h.eval(&e1, 1.0).unwrap();
    assert!((w.value - 1.0 / (2f64.sqrt() - 1.0)).abs() <= w.tail_bound);
    // Interior series at the origin: only the constant term survives.
    let c = BallSeries::custom_highest_weight(3, &[(0, 0.75), (4, 2.0)], 1.0).unwrap();
    assert!(close(c.value_unchecked(&[0.0, 0.0, 0.0]), 0.75, 1e-15));
}

#[test]
fn kelvin_transform_exponents() {
    let u = BallSeries::custom_highest_weight(2, &[(3, 1.5)], 1.0).unwrap();
    let k = u.kelvin_transform().unwrap();
    let (r, t) = (1.7f64, 0.4f64);
    assert!(close(k.value_unchecked(&[r * t.cos(), r * t.sin()]), 1.5 * r.powi(-3) * (3.0 * t).cos(), 1e-14));
    let one = BallSeries::custom_highest_weight(3, &[(1, 2.0)], 1.0).unwrap();
    let ko = one.kelvin_transform().unwrap();
    let x = [2.0 * 0.6, 2.0 * 0.8, 0.0];
    assert!(close(ko.value_unchecked(&x), 2.0 * 0.25 * 0.6, 1e-15));
    let theta = [0.6, 0.0, 0.8];
    let v = build_series(SeriesVariant::NotCbeta, 3, 64, 1.0).unwrap();
    assert!(close(v.kelvin_transform().unwrap().value_unchecked(&theta), v.value_unchecked(&theta), 1e-14));
}

#[test]
fn finite_difference_and_mean_value_checks() {
    let points = vec![vec![0.1, 0.2, 0.3], vec![-0.4, 0.1, 0.2]];
    let affine = FnField::new(3, |x: &[f64]| 2.0 * x[0] - x[1] + 0.5);
    assert!(check_harmonic_fd(&affine, &points, 1e-3).unwrap().max_abs_residual <= 1e-10);
    let quad = FnField::new(3, |x: &[f64]| x[0] * x[0] - x[1] * x[1]);
    assert!(check_harmonic_fd(&quad, &points, 1e-3).unwrap().max_abs_residual <= 1e-8);
    let bowl = FnField::new(3, |x: &[f64]| x.iter().map(|c| c * c).sum());
    let rep = check_harmonic_fd(&bowl, &points, 1e-3).unwrap();
    assert!(close(rep.max_abs_residual, 6.0, 1e-5));
    assert!(!rep.is_harmonic(1e-4));
    let rule = build_sphere_quadrature(3, 20, QuadratureMode::Product, None).unwrap();
    assert!(mean_value_check(&bowl, &[0.0; 3], 0.3, &rule).unwrap() > 0.09 - 1e-12);
    let u = build_series(SeriesVariant::NotCbeta, 3, 8, 1.0).unwrap();
    assert!(mean_value_check(&u, &[0.1, 0.0, 0.2], 0.5, &rule).unwrap() < 1e-12);
}

#[test]
fn circle_lifts_are_lacunary_series() {
    let u = build_series(SeriesVariant::NotCbeta, 3, 1 << 12, 1.0).unwrap();
    let hardy = lifted_lacunary(&u).unwrap();
    let reference = LacunaryCosineSeries::hardy(2, 12).unwrap();
    for t in [0.0, 0.3, 2.1, 5.9] {
        assert!(close(circle_lift(&u, t).unwrap().value, reference.value(t), 1e-13));
    }
    assert_eq!(hardy.base(), 2);
    let h = build_series(SeriesVariant::AnynHolder { alpha: 0.5 }, 2, 1 << 12, 1.0).unwrap();
    let t = 1.3f64;
    let direct: f64 = (1..=12).map(|j| 2f64.powf(-0.5 * j as f64) * (2f64.powi(j) * t).cos()).sum();
    assert!(close(circle_lift(&h, t).unwrap().value, direct, 1e-13));
}

#[test]
fn series_json_round_trip() {
    let u = build_series(SeriesVariant::NotHs { seed: 4 }, 3, 64, 0.5).unwrap();
    let back = BallSeries::from_json(&u.to_json().unwrap()).unwrap();
    let x = [0.2, -0.3, 0.5];
    assert!(close(back.value_unchecked(&x), u.value_unchecked(&x), 1e-15));
    assert_eq!(back.variant(), u.variant());
}
