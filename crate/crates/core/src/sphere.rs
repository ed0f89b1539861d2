//! Geometry of the unit ball and sphere: points, surface quadrature rules and
//! radial x angular volume rules.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::special::{gauss_legendre, gauss_legendre_on, ln_gamma, CompensatedSum};

/// Volume of the unit ball in R^n.
pub fn unit_ball_volume(n: usize) -> Result<f64> {
    if n < 1 {
        return domain("unit_ball_volume requires n >= 1");
    }
    let nf = n as f64;
    if n <= 300 {
        // pi^{n/2} / Gamma(n/2 + 1) by the recursion V_n = 2 pi V_{n-2} / n.
        let mut v = if n.is_multiple_of(2) { 1.0 } else { 2.0 };
        let mut m = n % 2;
        while m < n {
            m += 2;
            v *= 2.0 * PI / m as f64;
        }
        return Ok(v);
    }
    Ok((0.5 * nf * PI.ln() - ln_gamma(0.5 * nf + 1.0)).exp())
}

/// Surface area of the unit sphere S^{n-1} in R^n, i.e. n times the ball volume.
pub fn sphere_area(n: usize) -> Result<f64> {
    Ok(n as f64 * unit_ball_volume(n)?)
}

/// A point on the unit sphere S^{n-1}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    coords: Vec<f64>,
}

impl SpherePoint {
    /// Normalises `coords`; rejects dimension < 2 and near-zero vectors.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return domain("sphere points need dimension n >= 2");
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return domain("sphere point coordinates must be finite");
        }
        // Scale first so the norm neither underflows nor overflows.
        let big = coords.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if big < 1e-300 {
            return domain("cannot normalise a vector with norm below 1e-300");
        }
        let scaled: Vec<f64> = coords.iter().map(|c| c / big).collect();
        let norm = scaled.iter().map(|c| c * c).sum::<f64>().sqrt();
        Ok(Self {
            coords: scaled.into_iter().map(|c| c / norm).collect(),
        })
    }

    /// The first coordinate vector e_1 in R^n.
    pub fn e1(n: usize) -> Result<Self> {
        let mut v = vec![0.0; n];
        if n >= 1 {
            v[0] = 1.0;
        }
        Self::new(v)
    }

    /// (cos t, sin t, 0, ..., 0) in R^n.
    pub fn on_circle(n: usize, t: f64) -> Result<Self> {
        if n < 2 {
            return domain("sphere points need dimension n >= 2");
        }
        let mut v = vec![0.0; n];
        v[0] = t.cos();
        v[1] = t.sin();
        Ok(Self { coords: v })
    }

    /// Point on S^2 from azimuth and polar angle.
    pub fn from_angles(azimuth: f64, polar: f64) -> Self {
        let s = polar.sin();
        Self {
            coords: vec![s * azimuth.cos(), s * azimuth.sin(), polar.cos()],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dot(&self, other: &SpherePoint) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }
}

/// How a surface rule is constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureMode {
    Product,
    MonteCarlo,
}

/// Tensor structure of a product rule on S^2: nodes are stored ring by ring,
/// `azimuth_count` uniform azimuths per ring of constant polar cosine.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductLayout {
    pub azimuth_count: usize,
    pub cos_polar: Vec<f64>,
}

/// Weighted nodes on S^{n-1}; weights are in surface-measure units.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    dim: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    degree: usize,
    layout: Option<ProductLayout>,
}

impl QuadratureRule {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Polynomial exactness; 0 for Monte Carlo rules.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn nodes(&self) -> impl Iterator<Item = &[f64]> {
        self.nodes.chunks_exact(self.dim)
    }

    pub fn sphere_point(&self, i: usize) -> SpherePoint {
        SpherePoint {
            coords: self.node(i).to_vec(),
        }
    }

    pub fn layout(&self) -> Option<&ProductLayout> {
        self.layout.as_ref()
    }

    /// Sum of weights times integrand values, compensated.
    pub fn integrate<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        let mut acc = CompensatedSum::new();
        for (x, w) in self.nodes().zip(&self.weights) {
            acc.add(w * f(x));
        }
        acc.value()
    }

    /// Fails unless the rule is exact to at least `needed`.
    pub fn require_degree(&self, needed: usize) -> Result<()> {
        if self.degree < needed {
            return Err(Error::InsufficientDegree {
                needed,
                have: self.degree,
            });
        }
        Ok(())
    }
}

/// Build a surface rule on S^{n-1}.
///
/// Product mode (n = 2, 3) is exact for spherical polynomials of degree
/// `<= resolution`. Monte Carlo mode draws `resolution` uniform points with
/// equal weights (default seed 0).
pub fn build_sphere_quadrature(
    n: usize,
    resolution: usize,
    mode: QuadratureMode,
    seed: Option<u64>,
) -> Result<QuadratureRule> {
    if n < 2 {
        return domain("sphere quadrature needs n >= 2");
    }
    if resolution < 1 {
        return domain("quadrature resolution must be >= 1");
    }
    match mode {
        QuadratureMode::Product => match n {
            2 => Ok(circle_rule(resolution)),
            3 => Ok(s2_product_rule(resolution)),
            _ => Err(Error::UnsupportedDimension {
                n,
                what: "product quadrature",
            }),
        },
        QuadratureMode::MonteCarlo => monte_carlo_rule(n, resolution, seed.unwrap_or(0)),
    }
}

fn circle_rule(degree: usize) -> QuadratureRule {
    let m = degree + 1;
    let w = 2.0 * PI / m as f64;
    let mut nodes = Vec::with_capacity(2 * m);
    for j in 0..m {
        let t = 2.0 * PI * j as f64 / m as f64;
        nodes.push(t.cos());
        nodes.push(t.sin());
    }
    QuadratureRule {
        dim: 2,
        nodes,
        weights: vec![w; m],
        degree,
        layout: Some(ProductLayout {
            azimuth_count: m,
            cos_polar: vec![0.0],
        }),
    }
}

fn s2_product_rule(degree: usize) -> QuadratureRule {
    let m = degree + 1;
    let rings = degree / 2 + 1;
    let (x, gw) = gauss_legendre(rings);
    let (sin_az, cos_az): (Vec<f64>, Vec<f64>) = (0..m)
        .map(|j| (2.0 * PI * j as f64 / m as f64).sin_cos())
        .unzip();
    let mut nodes = Vec::with_capacity(3 * m * rings);
    let mut weights = Vec::with_capacity(m * rings);
    for (xi, wi) in x.iter().zip(&gw) {
        let s = (1.0 - xi * xi).max(0.0).sqrt();
        let w = wi * 2.0 * PI / m as f64;
        for j in 0..m {
            nodes.extend_from_slice(&[s * cos_az[j], s * sin_az[j], *xi]);
            weights.push(w);
        }
    }
    QuadratureRule {
        dim: 3,
        nodes,
        weights,
        degree,
        layout: Some(ProductLayout {
            azimuth_count: m,
            cos_polar: x,
        }),
    }
}

fn monte_carlo_rule(n: usize, count: usize, seed: u64) -> Result<QuadratureRule> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let area = sphere_area(n)?;
    let mut nodes = Vec::with_capacity(n * count);
    let mut v = vec![0.0; n];
    for _ in 0..count {
        loop {
            for c in v.iter_mut() {
                *c = StandardNormal.sample(&mut rng);
            }
            let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            if norm > 1e-12 {
                nodes.extend(v.iter().map(|c| c / norm));
                break;
            }
        }
    }
    Ok(QuadratureRule {
        dim: n,
        nodes,
        weights: vec![area / count as f64; count],
        degree: 0,
        layout: None,
    })
}

/// Nodes and plain `dr` weights on a radial interval.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Polynomial degree integrated exactly (per panel for composite rules).
    pub degree: usize,
}

/// Which end of a radial interval a graded rule refines towards.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    TowardInner,
    TowardOuter,
}

impl RadialRule {
    /// Single Gauss-Legendre panel on [a, b].
    pub fn gauss(a: f64, b: f64, order: usize) -> Result<Self> {
        check_interval(a, b)?;
        if order < 1 {
            return domain("radial order must be >= 1");
        }
        let (nodes, weights) = gauss_legendre_on(order, a, b);
        Ok(Self {
            nodes,
            weights,
            degree: 2 * order - 1,
        })
    }

    /// Composite Gauss rule whose panels halve in width towards one endpoint,
    /// `levels` halvings deep. Resolves boundary layers such as r^k for large k.
    pub fn graded(a: f64, b: f64, order: usize, levels: usize, toward: Grading) -> Result<Self> {
        check_interval(a, b)?;
        if order < 1 {
            return domain("radial order must be >= 1");
        }
        let len = b - a;
        // Breakpoints as fractions of the interval measured from the graded end.
        let mut fractions = vec![0.0];
        for l in (0..levels).rev() {
            fractions.push(0.5f64.powi(l as i32 + 1));
        }
        fractions.push(1.0);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for pair in fractions.windows(2) {
            let (lo, hi) = match toward {
                Grading::TowardOuter => (b - pair[1] * len, b - pair[0] * len),
                Grading::TowardInner => (a + pair[0] * len, a + pair[1] * len),
            };
            let (x, w) = gauss_legendre_on(order, lo, hi);
            nodes.extend(x);
            weights.extend(w);
        }
        Ok(Self {
            nodes,
            weights,
            degree: 2 * order - 1,
        })
    }

    pub fn inner(&self) -> f64 {
        self.nodes.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a >= 0.0 && a < b && b.is_finite()) {
        return domain(format!("radial interval requires 0 <= r_in < r_out, got [{a}, {b}]"));
    }
    Ok(())
}

/// Volume rule on {r_in < |x| < r_out}: radial rule times a surface rule,
/// with the r^{n-1} Jacobian applied at integration time.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusRule {
    dim: usize,
    inner_radius: f64,
    outer_radius: f64,
    radial: RadialRule,
    angular: QuadratureRule,
}

/// Build an annulus rule with a single Gauss radial panel.
pub fn build_annulus_rule(
    n: usize,
    r_in: f64,
    r_out: f64,
    radial_order: usize,
    angular: QuadratureRule,
) -> Result<AnnulusRule> {
    AnnulusRule::new(n, r_in, r_out, RadialRule::gauss(r_in, r_out, radial_order)?, angular)
}

impl AnnulusRule {
    pub fn new(
        n: usize,
        r_in: f64,
        r_out: f64,
        radial: RadialRule,
        angular: QuadratureRule,
    ) -> Result<Self> {
        check_interval(r_in, r_out)?;
        if angular.dim() != n {
            return Err(Error::Invalid(format!(
                "angular rule has dimension {}, expected {n}",
                angular.dim()
            )));
        }
        Ok(Self {
            dim: n,
            inner_radius: r_in,
            outer_radius: r_out,
            radial,
            angular,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    pub fn radial(&self) -> &RadialRule {
        &self.radial
    }

    pub fn angular(&self) -> &QuadratureRule {
        &self.angular
    }

    /// Integrate f(r, theta) r^{n-1} dr dsigma(theta).
    pub fn integrate_polar<F: FnMut(f64, &[f64]) -> f64>(&self, mut f: F) -> f64 {
        let mut acc = CompensatedSum::new();
        for (r, wr) in self.radial.nodes.iter().zip(&self.radial.weights) {
            let jac = wr * r.powi(self.dim as i32 - 1);
            for (theta, wt) in self.angular.nodes().zip(self.angular.weights()) {
                acc.add(jac * wt * f(*r, theta));
            }
        }
        acc.value()
    }

    /// Integrate f(x) over the annulus.
    pub fn integrate<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        let mut x = vec![0.0; self.dim];
        self.integrate_polar(|r, theta| {
            for (xi, ti) in x.iter_mut().zip(theta) {
                *xi = r * ti;
            }
            f(&x)
        })
    }

    pub fn volume(&self) -> f64 {
        self.integrate_polar(|_, _| 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(1).unwrap() - 2.0).abs() < 1e-14);
        assert!((unit_ball_volume(2).unwrap() - PI).abs() < 1e-14);
        assert!((unit_ball_volume(3).unwrap() - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!(unit_ball_volume(0).is_err());
        assert!((sphere_area(3).unwrap() - 4.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn sphere_point_normalises_and_rejects_zero() {
        let p = SpherePoint::new(vec![3.0, 4.0]).unwrap();
        assert!((p.coords()[0] - 0.6).abs() < 1e-15);
        assert!(SpherePoint::new(vec![0.0, 1e-301]).is_err());
        assert!(SpherePoint::new(vec![1.0]).is_err());
        let tiny = SpherePoint::new(vec![1e-200, 1e-200, 0.0]).unwrap();
        let norm: f64 = tiny.coords().iter().map(|c| c * c).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circle_rule_total_measure() {
        for res in [1, 2, 7, 100] {
            let q = build_sphere_quadrature(2, res, QuadratureMode::Product, None).unwrap();
            assert!((q.integrate(|_| 1.0) - 2.0 * PI).abs() < 1e-12);
        }
    }

    #[test]
    fn s2_rule_moments() {
        let q = build_sphere_quadrature(3, 2, QuadratureMode::Product, None).unwrap();
        assert!((q.integrate(|x| x[0] * x[0]) - 4.0 * PI / 3.0).abs() < 1e-12);
        let q = build_sphere_quadrature(3, 4, QuadratureMode::Product, None).unwrap();
        let v = q.integrate(|x| x[0] * x[0] * x[1] * x[1]);
        assert!((v - 4.0 * PI / 15.0).abs() < 1e-12);
        assert!((q.weights().iter().sum::<f64>() - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn product_rule_rejects_high_dimension() {
        assert!(matches!(
            build_sphere_quadrature(4, 4, QuadratureMode::Product, None),
            Err(Error::UnsupportedDimension { n: 4, .. })
        ));
        let mc = build_sphere_quadrature(5, 1000, QuadratureMode::MonteCarlo, Some(3)).unwrap();
        assert_eq!(mc.degree(), 0);
        let area = sphere_area(5).unwrap();
        assert!((mc.weights().iter().sum::<f64>() - area).abs() / area < 1e-12);
    }

    #[test]
    fn annulus_volumes() {
        let ang3 = build_sphere_quadrature(3, 2, QuadratureMode::Product, None).unwrap();
        let ball = build_annulus_rule(3, 0.0, 1.0, 4, ang3).unwrap();
        assert!((ball.volume() - 4.0 * PI / 3.0).abs() < 1e-12);
        let ang2 = build_sphere_quadrature(2, 2, QuadratureMode::Product, None).unwrap();
        let ring = build_annulus_rule(2, 1.0, 2.0, 4, ang2.clone()).unwrap();
        assert!((ring.volume() - 3.0 * PI).abs() < 1e-12);
        assert!(build_annulus_rule(2, 1.0, 1.0, 4, ang2).is_err());
    }

    #[test]
    fn graded_rule_resolves_high_powers() {
        let r = RadialRule::graded(0.0, 1.0, 16, 12, Grading::TowardOuter).unwrap();
        let k = 1024;
        let got: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(k)).sum();
        let want = 1.0 / (k as f64 + 1.0);
        assert!((got - want).abs() / want < 1e-10, "{got} vs {want}");
        let w: f64 = r.weights.iter().sum();
        assert!((w - 1.0).abs() < 1e-14);
        let r = RadialRule::graded(1.0, 2.0, 16, 12, Grading::TowardInner).unwrap();
        let got: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(-k)).sum();
        let want = (1.0 - 2f64.powi(1 - k)) / (k as f64 - 1.0);
        assert!((got - want).abs() / want < 1e-10);
    }
}
