//! Spherical harmonics: dimension counts, eigenvalues, highest-weight and
//! zonal families, real orthonormal bases for n = 2, 3, random unit
//! harmonics and sup-norm estimation.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::special::{
    binomial, gegenbauer, legendre_row_xs, legendre_single_xs, ln_gamma_half_ratio, ln_gegenbauer_norm_sq,
};
use crate::sphere::{sphere_area, SpherePoint};

/// dim H_k for harmonics on S^{n-1}, exact.
pub fn harmonic_dimension(n: usize, k: usize) -> Result<u128> {
    if n < 2 {
        return domain("harmonic_dimension requires n >= 2");
    }
    if k == 0 {
        return Ok(1);
    }
    let top = binomial((k + n - 1) as u64, (n - 1) as u64).ok_or(Error::Overflow("d_k"))?;
    let low = if k + n >= 3 {
        binomial((k + n - 3) as u64, (n - 1) as u64).ok_or(Error::Overflow("d_k"))?
    } else {
        0
    };
    Ok(top - low)
}

/// Eigenvalue k(k+n-2) of minus the Laplace-Beltrami operator on H_k.
pub fn laplace_beltrami_eigenvalue(n: usize, k: usize) -> f64 {
    let k = k as f64;
    k * (k + n as f64 - 2.0)
}

/// (x1 + i x2)^k by binary powering.
pub fn complex_power(x1: f64, x2: f64, k: u64) -> Complex64 {
    let mut base = Complex64::new(x1, x2);
    let mut acc = Complex64::new(1.0, 0.0);
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        e >>= 1;
        if e > 0 {
            base *= base;
        }
    }
    acc
}

/// Re (theta_1 + i theta_2)^k. Also the homogeneous extension when applied to
/// an arbitrary point x.
pub fn highest_weight_eval(k: u64, theta: &[f64]) -> f64 {
    complex_power(theta[0], theta[1], k).re
}

/// ln of the squared L^2(S^{n-1}) norm of Q_k, for k >= 1.
pub fn ln_highest_weight_l2_norm_sq(n: usize, k: u64) -> Result<f64> {
    if k == 0 {
        return domain("the closed-form norm of Q_k is used only for k >= 1 (Q_0 = 1 has squared norm |S^{n-1}|)");
    }
    if n < 2 {
        return domain("n must be >= 2");
    }
    // ln Gamma(k + n/2) - ln Gamma(k + 1), as a product of the integer
    // steps and (for odd n) the half-integer ratio.
    let kf = k as f64;
    let ratio = if n.is_multiple_of(2) {
        (1..n / 2).map(|i| (kf + i as f64).ln()).sum::<f64>()
    } else {
        (0..(n - 1) / 2).map(|i| (kf + 0.5 + i as f64).ln()).sum::<f64>() + ln_gamma_half_ratio(kf)
    };
    Ok(0.5 * n as f64 * PI.ln() - ratio)
}

/// L^2(S^{n-1}) norm of Q_k, k >= 1.
pub fn highest_weight_l2_norm(n: usize, k: u64) -> Result<f64> {
    Ok((0.5 * ln_highest_weight_l2_norm_sq(n, k)?).exp())
}

/// L^2 normalisation constant of the zonal polynomial of degree k with pole
/// p: the factor N with int (C_k(<p, .>)/N)^2 = 1. For n = 2 the zonal
/// function is cos(k angle), for n >= 3 it is the Gegenbauer polynomial.
pub fn zonal_norm(n: usize, k: usize) -> Result<f64> {
    match n {
        0 | 1 => domain("n must be >= 2"),
        2 => Ok(if k == 0 { (2.0 * PI).sqrt() } else { PI.sqrt() }),
        _ => {
            let lambda = 0.5 * (n as f64 - 2.0);
            let lower = sphere_area(n - 1)?;
            Ok((0.5 * (lower.ln() + ln_gegenbauer_norm_sq(k, lambda))).exp())
        }
    }
}

/// Unit-norm zonal harmonic of degree k with the given pole.
pub fn zonal_eval(n: usize, k: usize, pole: &SpherePoint, theta: &[f64]) -> Result<f64> {
    if pole.dim() != n || theta.len() != n {
        return domain("pole and point must lie in R^n");
    }
    let norm = zonal_norm(n, k)?;
    let p = pole.coords();
    if n == 2 {
        let cross = p[0] * theta[1] - p[1] * theta[0];
        let dot = p[0] * theta[0] + p[1] * theta[1];
        return Ok((k as f64 * cross.atan2(dot)).cos() / norm);
    }
    let dot: f64 = p.iter().zip(theta).map(|(a, b)| a * b).sum();
    Ok(gegenbauer(k, 0.5 * (n as f64 - 2.0), dot.clamp(-1.0, 1.0))? / norm)
}

/// Trigonometric factor of a real basis element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trig {
    Cos,
    Sin,
}

/// (order m, trig factor) of basis index j in degree k for n = 2, 3.
/// Index 0 is the cosine (or constant) element of order 0 in S^2 and the
/// cosine element in S^1; then order m contributes cos at 2m-1, sin at 2m.
pub fn basis_index(n: usize, k: usize, index: usize) -> Result<(usize, Trig)> {
    let d = harmonic_dimension(n, k)? as usize;
    if index >= d {
        return domain(format!("basis index {index} out of range for d_k = {d}"));
    }
    match n {
        2 => Ok((k, if index == 0 { Trig::Cos } else { Trig::Sin })),
        3 => Ok(if index == 0 {
            (0, Trig::Cos)
        } else if index % 2 == 1 {
            (index.div_ceil(2), Trig::Cos)
        } else {
            (index / 2, Trig::Sin)
        }),
        _ => Err(Error::UnsupportedDimension {
            n,
            what: "orthonormal bases",
        }),
    }
}

/// What a [`HarmonicFunction`] is.
#[derive(Debug, Clone, PartialEq)]
pub enum HarmonicKind {
    /// Re (theta_1 + i theta_2)^k, any n.
    HighestWeight,
    /// Unit-norm zonal harmonic around a pole, any n.
    Zonal { pole: SpherePoint },
    /// Element of [`orthonormal_basis`], n in {2, 3}.
    BasisElement { index: usize },
    /// Unit coefficient vector over the orthonormal basis, n in {2, 3}.
    Random { seed: u64, coefficients: Vec<f64> },
}

/// A spherical harmonic of fixed degree on S^{n-1}.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicFunction {
    dim: usize,
    degree: usize,
    kind: HarmonicKind,
}

fn check_low_dim(n: usize) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension {
            n,
            what: "orthonormal bases",
        })
    }
}

impl HarmonicFunction {
    pub fn highest_weight(n: usize, k: usize) -> Result<Self> {
        if n < 2 {
            return domain("n must be >= 2");
        }
        Ok(Self {
            dim: n,
            degree: k,
            kind: HarmonicKind::HighestWeight,
        })
    }

    pub fn zonal(n: usize, k: usize, pole: SpherePoint) -> Result<Self> {
        if pole.dim() != n {
            return domain("pole dimension mismatch");
        }
        if n >= 3 && k > crate::special::GEGENBAUER_MAX_DEGREE {
            return domain("zonal degree exceeds the supported Gegenbauer range");
        }
        Ok(Self {
            dim: n,
            degree: k,
            kind: HarmonicKind::Zonal { pole },
        })
    }

    pub fn basis_element(n: usize, k: usize, index: usize) -> Result<Self> {
        check_low_dim(n)?;
        basis_index(n, k, index)?;
        Ok(Self {
            dim: n,
            degree: k,
            kind: HarmonicKind::BasisElement { index },
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn kind(&self) -> &HarmonicKind {
        &self.kind
    }

    /// Basis coefficients of a random harmonic.
    pub fn coefficients(&self) -> Option<&[f64]> {
        match &self.kind {
            HarmonicKind::Random { coefficients, .. } => Some(coefficients),
            _ => None,
        }
    }

    /// Value at a point of S^{n-1} (coordinates assumed unit length).
    pub fn eval(&self, theta: &[f64]) -> f64 {
        debug_assert_eq!(theta.len(), self.dim);
        let k = self.degree;
        match &self.kind {
            HarmonicKind::HighestWeight => highest_weight_eval(k as u64, theta),
            HarmonicKind::Zonal { pole } => {
                zonal_eval(self.dim, k, pole, theta).expect("degree validated at construction")
            }
            HarmonicKind::BasisElement { index } => eval_basis(self.dim, k, *index, theta),
            HarmonicKind::Random { coefficients, .. } => eval_combination(self.dim, k, coefficients, theta),
        }
    }

    /// Value of the degree-k homogeneous extension |x|^k Y(x/|x|) at any x.
    pub fn eval_extension(&self, x: &[f64]) -> f64 {
        if let HarmonicKind::HighestWeight = self.kind {
            return highest_weight_eval(self.degree as u64, x);
        }
        let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        if r == 0.0 {
            return if self.degree == 0 {
                self.eval(&unit_e1(self.dim))
            } else {
                0.0
            };
        }
        let theta: Vec<f64> = x.iter().map(|c| c / r).collect();
        r.powi(self.degree as i32) * self.eval(&theta)
    }

    /// Certified bound on sup |Y| over the sphere.
    pub fn sup_norm_bound(&self) -> f64 {
        let n = self.dim;
        let k = self.degree;
        match &self.kind {
            HarmonicKind::HighestWeight => 1.0,
            HarmonicKind::Zonal { .. } => addition_bound(n, k),
            HarmonicKind::BasisElement { .. } => match n {
                2 => {
                    if k == 0 {
                        1.0 / (2.0 * PI).sqrt()
                    } else {
                        1.0 / PI.sqrt()
                    }
                }
                // |Y_km|^2 <= sum over the degree = (2k+1)/(4 pi)
                _ => addition_bound(n, k),
            },
            HarmonicKind::Random { .. } => addition_bound(n, k),
        }
    }

    /// L^2 norm (exact: 1 except for the highest-weight family).
    pub fn l2_norm(&self) -> f64 {
        match &self.kind {
            HarmonicKind::HighestWeight => {
                if self.degree == 0 {
                    sphere_area(self.dim).map(f64::sqrt).unwrap_or(f64::NAN)
                } else {
                    highest_weight_l2_norm(self.dim, self.degree as u64).unwrap_or(f64::NAN)
                }
            }
            _ => 1.0,
        }
    }
}

/// sqrt(d_k / |S^{n-1}|): sup of any unit-norm degree-k harmonic.
pub fn addition_bound(n: usize, k: usize) -> f64 {
    let d = harmonic_dimension(n, k).map(|d| d as f64).unwrap_or(f64::INFINITY);
    (d / sphere_area(n).unwrap_or(f64::NAN)).sqrt()
}

fn unit_e1(n: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[0] = 1.0;
    v
}

fn eval_basis(n: usize, k: usize, index: usize, theta: &[f64]) -> f64 {
    let (m, trig) = basis_index(n, k, index).expect("index validated at construction");
    let phi = theta[1].atan2(theta[0]);
    let angular = match trig {
        Trig::Cos => (m as f64 * phi).cos(),
        Trig::Sin => (m as f64 * phi).sin(),
    };
    if n == 2 {
        return if k == 0 {
            1.0 / (2.0 * PI).sqrt()
        } else {
            angular / PI.sqrt()
        };
    }
    let s = theta[0].hypot(theta[1]);
    let p = legendre_single_xs(k, m, theta[2], s);
    if m == 0 {
        p
    } else {
        std::f64::consts::SQRT_2 * p * angular
    }
}

fn eval_combination(n: usize, k: usize, coeffs: &[f64], theta: &[f64]) -> f64 {
    let phi = theta[1].atan2(theta[0]);
    if n == 2 {
        if k == 0 {
            return coeffs[0] / (2.0 * PI).sqrt();
        }
        let (s, c) = (k as f64 * phi).sin_cos();
        return (coeffs[0] * c + coeffs[1] * s) / PI.sqrt();
    }
    let s = theta[0].hypot(theta[1]);
    let row = legendre_row_xs(k, theta[2], s);
    let mut total = coeffs[0] * row[0];
    let step = Complex64::from_polar(1.0, phi);
    let mut rot = Complex64::new(1.0, 0.0);
    for m in 1..=k {
        rot *= step;
        if m % 64 == 0 {
            // Re-anchor the rotation to keep its phase accurate.
            rot = Complex64::from_polar(1.0, m as f64 * phi);
        }
        total += std::f64::consts::SQRT_2 * row[m] * (coeffs[2 * m - 1] * rot.re + coeffs[2 * m] * rot.im);
    }
    total
}

/// Real orthonormal basis of H_k on S^1 or S^2, ordered as in [`basis_index`].
pub fn orthonormal_basis(n: usize, k: usize) -> Result<Vec<HarmonicFunction>> {
    check_low_dim(n)?;
    let d = harmonic_dimension(n, k)? as usize;
    (0..d).map(|j| HarmonicFunction::basis_element(n, k, j)).collect()
}

/// Uniformly distributed unit-norm harmonic of degree k (Gaussian
/// coefficients, normalised). Each (seed, k) pair selects its own stream.
pub fn random_unit_harmonic(n: usize, k: usize, seed: u64) -> Result<HarmonicFunction> {
    check_low_dim(n)?;
    let d = harmonic_dimension(n, k)? as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    let mut coefficients: Vec<f64> = loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
        if v.iter().any(|c: &f64| *c != 0.0) {
            break v;
        }
    };
    let norm = coefficients.iter().map(|c| c * c).sum::<f64>().sqrt();
    for c in coefficients.iter_mut() {
        *c /= norm;
    }
    Ok(HarmonicFunction {
        dim: n,
        degree: k,
        kind: HarmonicKind::Random { seed, coefficients },
    })
}

/// Grid-based lower estimate of sup |Y|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupEstimate {
    /// Largest |Y| found on the grid (a lower bound for the sup-norm).
    pub value: f64,
    /// Largest angular gap between neighbouring grid points, in radians.
    pub spacing: f64,
    pub points: usize,
}

/// Estimate sup |Y| on a dense grid. n = 2: at least 2^16 uniform angles;
/// n = 3: at least 2^16 points on a (4k x 2k)-shaped latitude/azimuth grid,
/// evaluated ring by ring with one Legendre row and an FFT per ring.
pub fn estimate_sup_norm(y: &HarmonicFunction) -> Result<SupEstimate> {
    let k = y.degree();
    match y.dim() {
        2 => {
            let m = (1usize << 16).max(16 * k);
            let mut best = 0.0f64;
            for j in 0..m {
                let t = 2.0 * PI * j as f64 / m as f64;
                best = best.max(y.eval(&[t.cos(), t.sin()]).abs());
            }
            Ok(SupEstimate {
                value: best,
                spacing: 2.0 * PI / m as f64,
                points: m,
            })
        }
        3 => {
            let mut az = (4 * k).max(256).next_power_of_two();
            let mut rings = (2 * k).max(128);
            while az * rings < (1 << 16) {
                az *= 2;
                rings *= 2;
            }
            sup_on_s2_grid(y, az, rings)
        }
        n => Err(Error::UnsupportedDimension {
            n,
            what: "sup-norm grid estimation",
        }),
    }
}

fn sup_on_s2_grid(y: &HarmonicFunction, az: usize, rings: usize) -> Result<SupEstimate> {
    let k = y.degree();
    // Azimuthal Fourier amplitudes per order m, without the Legendre factor.
    let amp: Vec<Complex64> = match y.kind() {
        HarmonicKind::Random { coefficients, .. } => (0..=k)
            .map(|m| {
                if m == 0 {
                    Complex64::new(coefficients[0], 0.0)
                } else {
                    std::f64::consts::SQRT_2 * Complex64::new(coefficients[2 * m - 1], -coefficients[2 * m])
                }
            })
            .collect(),
        HarmonicKind::BasisElement { index } => {
            let (m0, trig) = basis_index(3, k, *index)?;
            (0..=k)
                .map(|m| match (m == m0, m0 == 0, trig) {
                    (false, _, _) => Complex64::new(0.0, 0.0),
                    (true, true, _) => Complex64::new(1.0, 0.0),
                    (true, false, Trig::Cos) => Complex64::new(std::f64::consts::SQRT_2, 0.0),
                    (true, false, Trig::Sin) => Complex64::new(0.0, -std::f64::consts::SQRT_2),
                })
                .collect()
        }
        _ => return sup_pointwise(y, az, rings),
    };
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_inverse(az);
    let mut buf = vec![Complex64::new(0.0, 0.0); az];
    let mut best = 0.0f64;
    for i in 0..rings {
        // Polar angles at ring midpoints, poles excluded then added below.
        let polar = PI * (i as f64 + 0.5) / rings as f64;
        let (s, x) = polar.sin_cos();
        let row = legendre_row_xs(k, x, s);
        buf.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
        for m in 0..=k {
            buf[m % az] += amp[m] * row[m];
        }
        fft.process(&mut buf);
        for b in &buf {
            best = best.max(b.re.abs());
        }
    }
    for pole in [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]] {
        best = best.max(y.eval(&pole).abs());
    }
    Ok(SupEstimate {
        value: best,
        spacing: (2.0 * PI / az as f64).max(PI / rings as f64),
        points: az * rings + 2,
    })
}

fn sup_pointwise(y: &HarmonicFunction, az: usize, rings: usize) -> Result<SupEstimate> {
    let mut best = 0.0f64;
    for i in 0..rings {
        let polar = PI * (i as f64 + 0.5) / rings as f64;
        for j in 0..az {
            let p = SpherePoint::from_angles(2.0 * PI * j as f64 / az as f64, polar);
            best = best.max(y.eval(p.coords()).abs());
        }
    }
    Ok(SupEstimate {
        value: best,
        spacing: (2.0 * PI / az as f64).max(PI / rings as f64),
        points: az * rings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::{build_sphere_quadrature, QuadratureMode};

    #[test]
    fn dimensions() {
        assert_eq!(harmonic_dimension(2, 5).unwrap(), 2);
        assert_eq!(harmonic_dimension(3, 2).unwrap(), 5);
        assert_eq!(harmonic_dimension(7, 0).unwrap(), 1);
        assert_eq!(harmonic_dimension(4, 3).unwrap(), 16);
        assert_eq!(harmonic_dimension(5, 1).unwrap(), 5);
        assert!(matches!(harmonic_dimension(200, 400), Err(Error::Overflow(_))));
    }

    #[test]
    fn eigenvalues() {
        assert_eq!(laplace_beltrami_eigenvalue(3, 0), 0.0);
        assert_eq!(laplace_beltrami_eigenvalue(3, 1), 2.0);
        assert_eq!(laplace_beltrami_eigenvalue(2, 3), 9.0);
    }

    #[test]
    fn highest_weight_values() {
        assert_eq!(highest_weight_eval(37, &[1.0, 0.0, 0.0]), 1.0);
        let t = [0.6, 0.48, 0.64];
        assert!((highest_weight_eval(2, &t) - (0.36 - 0.2304)).abs() < 1e-15);
        assert!(highest_weight_l2_norm(3, 0).is_err());
        assert!((highest_weight_l2_norm(2, 1).unwrap() - PI.sqrt()).abs() < 1e-14);
        assert!((highest_weight_l2_norm(3, 1).unwrap() - (4.0 * PI / 3.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn zonal_normalisation_and_peak() {
        let pole = SpherePoint::new(vec![0.3, -0.2, 0.9]).unwrap();
        let q = build_sphere_quadrature(3, 24, QuadratureMode::Product, None).unwrap();
        for k in [1usize, 5, 11] {
            let z = HarmonicFunction::zonal(3, k, pole.clone()).unwrap();
            let norm = q.integrate(|x| z.eval(x).powi(2));
            assert!((norm - 1.0).abs() < 1e-12, "k={k}: {norm}");
            let peak = z.eval(pole.coords());
            assert!(q.nodes().all(|x| z.eval(x) <= peak + 1e-12));
        }
        let e1 = SpherePoint::e1(2).unwrap();
        let t: f64 = 0.7;
        let v = zonal_eval(2, 4, &e1, &[t.cos(), t.sin()]).unwrap();
        assert!((v - (4.0 * t).cos() / PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn basis_is_orthonormal_small() {
        let q = build_sphere_quadrature(3, 12, QuadratureMode::Product, None).unwrap();
        let all: Vec<HarmonicFunction> = (0..=6).flat_map(|k| orthonormal_basis(3, k).unwrap()).collect();
        for a in &all {
            for b in &all {
                let g = q.integrate(|x| a.eval(x) * b.eval(x));
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((g - want).abs() < 1e-12);
            }
        }
        assert_eq!(orthonormal_basis(3, 1).unwrap().len(), 3);
        let c = orthonormal_basis(3, 0).unwrap()[0].eval(&[0.0, 0.0, 1.0]);
        assert!((c - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15);
        assert!(orthonormal_basis(4, 1).is_err());
    }

    #[test]
    fn random_harmonic_is_unit_and_deterministic() {
        let a = random_unit_harmonic(3, 17, 5).unwrap();
        let b = random_unit_harmonic(3, 17, 5).unwrap();
        assert_eq!(a, b);
        let c = a.coefficients().unwrap();
        assert!((c.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        let q = build_sphere_quadrature(3, 40, QuadratureMode::Product, None).unwrap();
        assert!((q.integrate(|x| a.eval(x).powi(2)) - 1.0).abs() < 1e-10);
        assert_ne!(random_unit_harmonic(3, 17, 6).unwrap(), a);
    }

    #[test]
    fn fft_sup_matches_pointwise_grid() {
        let y = random_unit_harmonic(3, 9, 1).unwrap();
        let fast = sup_on_s2_grid(&y, 64, 32).unwrap();
        let slow = sup_pointwise(&y, 64, 32).unwrap();
        assert!((fast.value - slow.value.max(y.eval(&[0.0, 0.0, 1.0]).abs()).max(y.eval(&[0.0, 0.0, -1.0]).abs())).abs() < 1e-12);
        assert!(fast.value <= addition_bound(3, 9) + 1e-12);
    }
}
