//! Explicit nonlinear transmission problems on the ball of radius 2 with the
//! unit ball as inclusion: the data (Psi, Phi, F, G, h), the candidate
//! solution pair, the weak normal-derivative jump, and numerical
//! certificates for the structural conditions on F and G.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::regularity::{dyadic_scales, holder_modulus_with, ModulusTable};
use crate::series::{
    build_series, check_harmonic_fd, BallSeries, RadialMap, SeriesDocument, SeriesValue, SeriesVariant,
    TailBound,
};
use crate::special::{gauss_legendre, CompensatedSum};
use crate::sphere::{build_sphere_quadrature, QuadratureMode, QuadratureRule};
use crate::weierstrass::{cos_sin_of_multiple, LacunaryCosineSeries};

/// Radius of the outer domain.
pub const OUTER_RADIUS: f64 = 2.0;

/// Default margin: rho = (1 - margin) / M so that sup |Phi| <= 1 - margin.
pub const DEFAULT_RHO_MARGIN: f64 = 1e-3;

/// Psi(t) = t for |t| <= 1, t^3 otherwise.
pub fn psi(t: f64) -> f64 {
    if t.abs() <= 1.0 {
        t
    } else {
        t * t * t
    }
}

/// Solve t + Psi(t) = z. The map is a strictly increasing bijection with
/// slope >= 2, so the solution is unique.
pub fn invert_id_plus_psi(z: f64, tol: f64) -> Result<f64> {
    if !z.is_finite() {
        return domain("cannot invert at a non-finite value");
    }
    if z.abs() <= 2.0 {
        return Ok(0.5 * z);
    }
    // t^3 + t = |z| with t > 1: Newton from the right of the root (the
    // cubic is convex there) decreases monotonically onto it.
    let target = z.abs();
    let mut t = target.cbrt();
    for _ in 0..200 {
        let g = t * t * t + t - target;
        if g.abs() <= tol * target.max(1.0) {
            return Ok(t.copysign(z));
        }
        let next = t - g / (3.0 * t * t + 1.0);
        if !(next < t) {
            // No further progress possible in floating point.
            return Ok(t.copysign(z));
        }
        t = next.max(1.0);
    }
    Err(Error::NonConvergence(format!("inverting t + Psi(t) = {z}")))
}

/// Which explicit example is built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum TransmissionVariant {
    /// Random unit harmonics with inverse-square dyadic coefficients (n = 2, 3).
    Example { seed: u64 },
    /// Highest-weight harmonics with inverse-square dyadic coefficients.
    Tilde,
    /// Highest-weight harmonics with coefficients 2^{-j alpha}.
    Holder { alpha: f64 },
}

impl TransmissionVariant {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Example { .. } => "example",
            Self::Tilde => "tilde",
            Self::Holder { .. } => "holder",
        }
    }

    pub fn parse(name: &str, seed: Option<u64>, alpha: Option<f64>) -> Result<Self> {
        match name {
            "example" => Ok(Self::Example { seed: seed.unwrap_or(0) }),
            "tilde" => Ok(Self::Tilde),
            "holder" => {
                let alpha = alpha.ok_or_else(|| Error::Invalid("variant holder needs alpha".into()))?;
                if !(alpha > 0.0 && alpha < 1.0) {
                    return domain("holder variant needs 0 < alpha < 1");
                }
                Ok(Self::Holder { alpha })
            }
            other => Err(Error::Invalid(format!("unknown transmission variant '{other}'"))),
        }
    }

    /// The series construction of the inner solution.
    pub fn series_variant(&self) -> SeriesVariant {
        match *self {
            Self::Example { seed } => SeriesVariant::NotHs { seed },
            Self::Tilde => SeriesVariant::NotCbeta,
            Self::Holder { alpha } => SeriesVariant::AnynHolder { alpha },
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            Self::Example { seed } => Some(*seed),
            _ => None,
        }
    }

    fn alpha(&self) -> Option<f64> {
        match self {
            Self::Holder { alpha } => Some(*alpha),
            _ => None,
        }
    }
}

/// One explicit transmission problem with its candidate solution, truncated
/// at degree K.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionInstance {
    dim: usize,
    variant: TransmissionVariant,
    rho: f64,
    k_max: u64,
    /// u^i = sum rho a_k r^k Y_k on the closed unit ball.
    inner: BallSeries,
    /// u^o = -(u^i)^* on 1 <= r <= 2.
    outer: BallSeries,
    /// Bound M on sup |Phi| for the rho-scaled boundary function.
    sup_bound: TailBound,
}

impl TransmissionInstance {
    /// Build the instance; `rho = None` selects the default scale
    /// (1 - 1e-3) / M with M the normal-convergence bound of the unscaled Phi.
    pub fn new(variant: TransmissionVariant, n: usize, k_max: u64, rho: Option<f64>) -> Result<Self> {
        if let TransmissionVariant::Holder { alpha } = variant {
            if !(alpha > 0.0 && alpha < 1.0) {
                return domain("holder variant needs 0 < alpha < 1");
            }
        }
        let base = build_series(variant.series_variant(), n, k_max, 1.0)?;
        let unit = base.normal_certificate();
        let rho = match rho {
            Some(r) if r.is_finite() && r > 0.0 => r,
            Some(r) => return domain(format!("scale rho = {r} must be positive")),
            None => (1.0 - DEFAULT_RHO_MARGIN) / unit.bound,
        };
        let inner = base.scaled(rho)?;
        let outer = inner.kelvin_transform_to(OUTER_RADIUS)?.negated();
        Ok(Self {
            dim: n,
            variant,
            rho,
            k_max,
            inner,
            outer,
            sup_bound: TailBound {
                bound: rho * unit.bound,
                certified: unit.certified,
            },
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn variant(&self) -> TransmissionVariant {
        self.variant
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn k_max(&self) -> u64 {
        self.k_max
    }

    pub fn inner(&self) -> &BallSeries {
        &self.inner
    }

    pub fn outer(&self) -> &BallSeries {
        &self.outer
    }

    /// Bound M on sup |Phi| (rho included).
    pub fn sup_bound(&self) -> TailBound {
        self.sup_bound
    }

    /// Whether the bound on |Phi| exceeds 1, so Psi may act non-trivially
    /// on the trace and the interface identity can fail.
    pub fn trace_exceeds_unit(&self) -> bool {
        self.sup_bound.bound > 1.0
    }

    /// Truncated boundary function Phi_K(theta).
    pub fn phi(&self, theta: &[f64]) -> f64 {
        self.inner.value_unchecked(theta)
    }

    /// Phi(theta) with a tail bound. For the highest-weight variants the
    /// lacunary sum is continued past the truncation (up to 1000 dyadic
    /// terms) until the certified remainder is below `tol`.
    pub fn phi_eval(&self, theta: &[f64], tol: f64) -> Result<SeriesValue> {
        if theta.len() != self.dim {
            return domain("point dimension does not match the instance");
        }
        let norm = theta.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return domain("Phi is evaluated on the unit sphere");
        }
        if !(tol > 0.0) {
            return domain("tolerance must be positive");
        }
        if matches!(self.variant, TransmissionVariant::Example { .. }) {
            return self.inner.eval(theta, tol);
        }
        let schedule = self.inner.schedule();
        let m = theta[0].hypot(theta[1]).min(1.0);
        let t = theta[1].atan2(theta[0]);
        let mut acc = CompensatedSum::new();
        let mut j = 0u32;
        let mut bound = f64::INFINITY;
        // a_j is non-increasing, so the remainder after J is at most the
        // schedule tail and, for m < 1, at most a_{J+1} m^{2^{J+1}}/(1 - m^{2^{J+1}}).
        while j < MAX_PHI_TERMS {
            j += 1;
            let a = schedule_term(schedule, j);
            let radial = if m == 1.0 { 1.0 } else { (2f64.powi(j as i32) * m.ln()).exp() };
            if radial > 0.0 {
                acc.add(a * radial * cos_sin_of_multiple(2, j, t).0);
            }
            let schedule_tail = schedule_tail_after(schedule, j);
            let next_radial = if m == 1.0 { 1.0 } else { (2f64.powi(j as i32 + 1) * m.ln()).exp() };
            let geometric = if next_radial < 1.0 {
                schedule_term(schedule, j + 1) * next_radial / (1.0 - next_radial)
            } else {
                f64::INFINITY
            };
            bound = schedule_tail.min(geometric);
            // Stop on the unscaled remainder (times max(1, scale)) so that the
            // number of terms does not depend on a scale <= 1.
            if bound / schedule.scale * schedule.scale.max(1.0) <= tol {
                break;
            }
        }
        Ok(SeriesValue {
            value: acc.value(),
            tail_bound: bound,
            certified: true,
            warning: bound > tol,
        })
    }

    /// F(theta, t) = Psi(t) - 2 Phi_K(theta).
    pub fn f_eval(&self, theta: &[f64], t: f64) -> f64 {
        psi(t) - 2.0 * self.phi(theta)
    }

    /// G(t, theta) = (n - 2) Phi_K(theta), independent of t.
    pub fn g_eval(&self, theta: &[f64], _t: f64) -> f64 {
        (self.dim as f64 - 2.0) * self.phi(theta)
    }

    pub fn f_g_eval(&self, theta: &[f64], t: f64) -> (f64, f64) {
        let phi = self.phi(theta);
        (psi(t) - 2.0 * phi, (self.dim as f64 - 2.0) * phi)
    }

    /// The t with t + F(theta, t) = y.
    pub fn invert_id_plus_f(&self, theta: &[f64], y: f64, tol: f64) -> Result<f64> {
        invert_id_plus_psi(y + 2.0 * self.phi(theta), tol)
    }

    /// Coefficients -a_k 2^{2-n-k} of the outer Dirichlet datum h.
    pub fn h_coefficients(&self) -> Vec<(u64, f64)> {
        let n = self.dim as f64;
        self.inner
            .terms()
            .iter()
            .map(|t| (t.k, -t.a * (2.0 - n - t.k as f64).exp2()))
            .collect()
    }

    /// h(x) for |x| = 2, summed from its own coefficients.
    pub fn h_eval(&self, x: &[f64]) -> f64 {
        let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        let theta: Vec<f64> = x.iter().map(|c| c / r).collect();
        let n = self.dim as f64;
        // angular_factors carry a_k; the radial factor is -2^{2-n-k}.
        self.inner
            .angular_factors(&theta)
            .iter()
            .zip(self.inner.terms())
            .map(|(f, t)| -f * (2.0 - n - t.k as f64).exp2())
            .sum()
    }

    /// Term-wise jump of the truncated pair at r = 1: (k, outer radial
    /// derivative minus inner radial derivative coefficient, (n - 2) a_k).
    pub fn closed_form_jump(&self) -> Vec<(u64, f64, f64)> {
        termwise_jump(&self.outer, &self.inner)
            .into_iter()
            .zip(self.inner.terms())
            .map(|((k, jump), t)| (k, jump, (self.dim as f64 - 2.0) * t.a))
            .collect()
    }

    /// Configuration document: the inner series plus variant and scale.
    pub fn config(&self) -> Result<InstanceConfig> {
        Ok(InstanceConfig {
            variant: self.variant.name().to_string(),
            dim: self.dim,
            rho: self.rho,
            k_max: self.k_max,
            alpha: self.variant.alpha(),
            seed: self.variant.seed(),
            series: self.inner.document()?,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(&self.config()?).map_err(|e| Error::NotSerializable(e.to_string()))
    }

    pub fn from_config(config: &InstanceConfig) -> Result<Self> {
        let variant = TransmissionVariant::parse(&config.variant, config.seed, config.alpha)?;
        let inst = Self::new(variant, config.dim, config.k_max, Some(config.rho))?;
        let rebuilt = BallSeries::from_document(&config.series)?;
        if rebuilt != inst.inner {
            return Err(Error::Invalid(
                "instance series document disagrees with its variant and scale".into(),
            ));
        }
        Ok(inst)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: InstanceConfig =
            serde_json::from_str(text).map_err(|e| Error::Invalid(format!("instance JSON: {e}")))?;
        Self::from_config(&config)
    }
}

/// Most dyadic terms summed by [`TransmissionInstance::phi_eval`].
const MAX_PHI_TERMS: u32 = 1000;

/// Unscaled-law coefficient of dyadic index j, times the schedule scale.
fn schedule_term(schedule: &crate::schedule::CoefficientSchedule, j: u32) -> f64 {
    use crate::schedule::ScheduleVariant as V;
    let jf = j as f64;
    schedule.scale
        * match schedule.variant {
            V::DyadicHolder { alpha } => (-jf * alpha).exp2(),
            _ => 1.0 / (jf * jf),
        }
}

/// Certified bound on sum_{i > j} of the dyadic coefficients.
fn schedule_tail_after(schedule: &crate::schedule::CoefficientSchedule, j: u32) -> f64 {
    use crate::schedule::ScheduleVariant as V;
    let jf = j as f64;
    schedule.scale
        * match schedule.variant {
            V::DyadicHolder { alpha } => (-jf * alpha).exp2() / (alpha.exp2() - 1.0),
            _ => 1.0 / (jf + 0.5),
        }
}

/// Serialisable instance description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceConfig {
    pub variant: String,
    pub dim: usize,
    pub rho: f64,
    pub k_max: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub series: SeriesDocument,
}

/// (k, jump coefficient) with jump = d/dr outer - d/dr inner at r = 1, per
/// matching term. Terms are matched by position.
pub fn termwise_jump(outer: &BallSeries, inner: &BallSeries) -> Vec<(u64, f64)> {
    let d_out = outer.radial_derivative_factors(1.0);
    let d_in = inner.radial_derivative_factors(1.0);
    outer
        .terms()
        .iter()
        .zip(inner.terms())
        .zip(d_out.iter().zip(&d_in))
        .map(|((o, i), (dout, din))| (i.k, o.a * dout - i.a * din))
        .collect()
}

/// phi(x) = exp(1 - 1/(1 - |x - c|^2 / radius^2)) inside the ball B(c, radius).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BumpTestFunction {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl BumpTestFunction {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.len() < 2 || center.iter().any(|c| !c.is_finite()) {
            return domain("bump centre must be a finite point of dimension >= 2");
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return domain("bump radius must be positive");
        }
        Ok(Self { center, radius })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Support strictly inside the ball of the given radius.
    pub fn inside_ball(&self, outer_radius: f64) -> bool {
        self.center_norm() + self.radius < outer_radius
    }

    pub fn center_norm(&self) -> f64 {
        self.center.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    fn s(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / (self.radius * self.radius)
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let s = self.s(x);
        if s >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - s)).exp()
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let s = self.s(x);
        if s >= 1.0 {
            return vec![0.0; x.len()];
        }
        let q = 1.0 - s;
        let factor = -(1.0 - 1.0 / q).exp() * 2.0 / (self.radius * self.radius * q * q);
        x.iter().zip(&self.center).map(|(a, b)| factor * (a - b)).collect()
    }

    pub fn laplacian(&self, x: &[f64]) -> f64 {
        let s = self.s(x);
        if s >= 1.0 {
            return 0.0;
        }
        let q = 1.0 - s;
        let phi = (1.0 - 1.0 / q).exp();
        if phi == 0.0 {
            return 0.0;
        }
        let r2 = self.radius * self.radius;
        let n = x.len() as f64;
        // phi = e^g(s), g' = -1/q^2, g'' = -2/q^3, |grad s|^2 = 4 s / r^2,
        // Laplacian of s = 2n / r^2.
        phi * ((1.0 / q.powi(4) - 2.0 / q.powi(3)) * 4.0 * s / r2 - 2.0 * n / (r2 * q * q))
    }

    /// x . grad phi(x) / |x|: the derivative along the outward radial unit
    /// vector.
    pub fn radial_derivative(&self, x: &[f64]) -> f64 {
        let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        self.gradient(x).iter().zip(x).map(|(g, c)| g * c).sum::<f64>() / r
    }
}

/// Deterministic bumps straddling the unit sphere, supported inside the
/// ball of radius 2.
pub fn standard_bumps(n: usize, count: usize) -> Result<Vec<BumpTestFunction>> {
    if n < 2 {
        return domain("bumps need n >= 2");
    }
    // (azimuth, elevation, centre radius, bump radius)
    const LAYOUT: [(f64, f64, f64, f64); 5] = [
        (0.0, 0.0, 1.0, 0.5),
        (1.0, 0.0, 1.0, 0.4),
        (2.5, 0.3, 1.1, 0.6),
        (0.7, 1.2, 1.0, 0.45),
        (4.0, -0.4, 1.05, 0.35),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x6275_6d70);
    (0..count)
        .map(|i| {
            let (az, el, rc, rb) = if i < LAYOUT.len() {
                LAYOUT[i]
            } else {
                let u: f64 = StandardNormal.sample(&mut rng);
                let v: f64 = StandardNormal.sample(&mut rng);
                let w: f64 = StandardNormal.sample(&mut rng);
                (u * PI, v.tanh(), 0.9 + 0.1 * w.tanh(), 0.3 + 0.1 * (u * v).tanh().abs())
            };
            let mut c = vec![0.0; n];
            let elevation = if n == 2 { 0.0 } else { el };
            let azimuth = az;
            c[0] = rc * elevation.cos() * azimuth.cos();
            c[1] = rc * elevation.cos() * azimuth.sin();
            if n >= 3 {
                c[2] = rc * elevation.sin();
            }
            BumpTestFunction::new(c, rb)
        })
        .collect()
}

/// Quadrature settings of the weak jump pairing. The angular rule is a
/// product rule; along each ray the radial integrals run over the chord
/// where the bump is nonzero, split into Gauss panels and graded towards
/// r = 1, where the profiles r^k and r^{2-n-k} form boundary layers.
#[derive(Debug, Clone, PartialEq)]
pub struct PairingRules {
    pub angular: QuadratureRule,
    /// Gauss order of each radial panel.
    pub order: usize,
    /// Lower order used on the same panels for the error estimate.
    pub check_order: Option<usize>,
    /// Largest harmonic degree to be resolved radially.
    pub k_eff: u64,
}

/// Gauss order of the radial panels.
pub const PAIRING_ORDER: usize = 24;
const PAIRING_CHECK_ORDER: usize = 16;
/// Chord panels are at most this fraction of the bump radius wide ...
const CHORD_PANEL_FRACTION: f64 = 0.125;
/// ... and every chord gets at least this many.
const MIN_CHORD_PANELS: f64 = 4.0;

impl PairingRules {
    /// Angular degree max(2 k_eff, 64, 400 / radius) on S^{n-1}, n = 2, 3.
    pub fn for_bump(n: usize, k_eff: u64, bump: &BumpTestFunction) -> Result<Self> {
        Ok(Self::with_angular(angular_rule(n, k_eff, bump.radius)?, k_eff))
    }

    pub fn with_angular(angular: QuadratureRule, k_eff: u64) -> Self {
        Self {
            angular,
            order: PAIRING_ORDER,
            check_order: Some(PAIRING_CHECK_ORDER),
            k_eff: k_eff.max(1),
        }
    }
}

/// Product rule resolving degree-k_eff harmonics against bumps of the given
/// radius (n = 2, 3).
pub fn angular_rule(n: usize, k_eff: u64, bump_radius: f64) -> Result<QuadratureRule> {
    if !(n == 2 || n == 3) {
        return Err(Error::UnsupportedDimension {
            n,
            what: "weak jump pairing (needs a product rule)",
        });
    }
    let for_bump = (400.0 / bump_radius).ceil() as usize;
    let degree = (2 * k_eff as usize).max(64).max(for_bump);
    build_sphere_quadrature(n, degree, QuadratureMode::Product, None)
}

/// Gauss panels on [lo, hi]: uniform of width <= `width`, the panel at the
/// end equal to 1 (if any) graded towards it.
struct ChordRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl ChordRule {
    fn new(gauss: &(Vec<f64>, Vec<f64>), lo: f64, hi: f64, width: f64, k_eff: u64) -> Self {
        let mut rule = Self {
            nodes: Vec::new(),
            weights: Vec::new(),
        };
        let len = hi - lo;
        if !(len > 0.0) {
            return rule;
        }
        let panels = (len / width).ceil().max(MIN_CHORD_PANELS) as usize;
        let step = len / panels as f64;
        let grade_hi = (hi - 1.0).abs() < 1e-14;
        let grade_lo = (lo - 1.0).abs() < 1e-14;
        let levels = ((k_eff as f64 * step).log2().ceil().max(0.0) as usize) + 2;
        let mut push = |a: f64, b: f64| {
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            for (x, w) in gauss.0.iter().zip(&gauss.1) {
                rule.nodes.push(mid + half * x);
                rule.weights.push(half * w);
            }
        };
        for p in 0..panels {
            let a = lo + p as f64 * step;
            let b = if p + 1 == panels { hi } else { a + step };
            let graded_toward_b = grade_hi && p + 1 == panels;
            let graded_toward_a = grade_lo && p == 0;
            if graded_toward_b || graded_toward_a {
                // Breakpoints halving towards the graded end.
                let mut cuts = vec![0.0];
                for l in (0..levels).rev() {
                    cuts.push(0.5f64.powi(l as i32 + 1));
                }
                cuts.push(1.0);
                for pair in cuts.windows(2) {
                    if graded_toward_b {
                        push(b - pair[1] * (b - a), b - pair[0] * (b - a));
                    } else {
                        push(a + pair[0] * (b - a), a + pair[1] * (b - a));
                    }
                }
            } else {
                push(a, b);
            }
        }
        rule
    }
}

/// The three integrals of the weak jump pairing and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairingResult {
    pub value: f64,
    /// int_{S} (w^o - w^i) d_r phi
    pub interface: f64,
    /// int_{1<|x|<2} w^o Laplacian(phi)
    pub annulus: f64,
    /// int_{|x|<1} w^i Laplacian(phi)
    pub ball: f64,
    /// |value - value with lower-order radial panels|, when requested.
    pub error_estimate: Option<f64>,
}

/// Weak normal-derivative jump <[d_nu w^o - d_nu w^i]_w, phi> of the pair
/// (w^o on 1 <= r <= 2, w^i on r <= 1).
pub fn weak_jump_pairing(
    outer: &BallSeries,
    inner: &BallSeries,
    bump: &BumpTestFunction,
    rules: &PairingRules,
) -> Result<PairingResult> {
    let n = inner.dim();
    if outer.dim() != n || bump.dim() != n || rules.angular.dim() != n {
        return domain("dimension mismatch in weak jump pairing");
    }
    if !bump.inside_ball(OUTER_RADIUS) {
        return domain("bump support must lie strictly inside the ball of radius 2");
    }
    if rules.order < 1 {
        return domain("radial order must be >= 1");
    }
    let main = pairing_integrals(outer, inner, bump, rules, rules.order);
    let error_estimate = rules.check_order.map(|order| {
        let check = pairing_integrals(outer, inner, bump, rules, order);
        (check.0 + check.1 + check.2 - main.0 - main.1 - main.2).abs()
    });
    Ok(PairingResult {
        value: main.0 + main.1 + main.2,
        interface: main.0,
        annulus: main.1,
        ball: main.2,
        error_estimate,
    })
}

/// (interface, annulus, ball) integrals with radial panels of the given order.
fn pairing_integrals(
    outer: &BallSeries,
    inner: &BallSeries,
    bump: &BumpTestFunction,
    rules: &PairingRules,
    order: usize,
) -> (f64, f64, f64) {
    let n = inner.dim();
    let gauss = gauss_legendre(order);
    let width = CHORD_PANEL_FRACTION * bump.radius;
    let c = &bump.center;
    let c2: f64 = c.iter().map(|v| v * v).sum();
    let rb2 = bump.radius * bump.radius;
    let mut interface = CompensatedSum::new();
    let mut ann = CompensatedSum::new();
    let mut bal = CompensatedSum::new();
    let mut x = vec![0.0; n];
    let angular = &rules.angular;
    for (i, &w) in angular.weights().iter().enumerate() {
        let theta = angular.node(i);
        // The ray r theta meets the bump on the chord |r - p| < h.
        let p: f64 = theta.iter().zip(c).map(|(a, b)| a * b).sum();
        let d2 = c2 - p * p;
        if d2 >= rb2 {
            continue;
        }
        let h = (rb2 - d2).sqrt();
        let (chord_lo, chord_hi) = ((p - h).max(0.0), (p + h).min(OUTER_RADIUS));
        if chord_hi <= chord_lo {
            continue;
        }
        let a_out = outer.angular_factors(theta);
        let a_in = inner.angular_factors(theta);
        if chord_lo < 1.0 && chord_hi > 1.0 {
            let jump: f64 = a_out.iter().sum::<f64>() - a_in.iter().sum::<f64>();
            interface.add(w * jump * bump.radial_derivative(theta));
        }
        let mut region = |lo: f64, hi: f64, series: &BallSeries, factors: &[f64], acc: &mut CompensatedSum| {
            if hi <= lo {
                return;
            }
            let rule = ChordRule::new(&gauss, lo, hi, width, rules.k_eff);
            let mut dir = 0.0;
            for (&r, &wr) in rule.nodes.iter().zip(&rule.weights) {
                for (xk, tk) in x.iter_mut().zip(theta) {
                    *xk = r * tk;
                }
                let lap = bump.laplacian(&x);
                if lap == 0.0 {
                    continue;
                }
                let u: f64 = factors.iter().zip(series.radial_factors(r)).map(|(a, b)| a * b).sum();
                dir += wr * r.powi(n as i32 - 1) * lap * u;
            }
            acc.add(w * dir);
        };
        region(chord_lo, chord_hi.min(1.0), inner, &a_in, &mut bal);
        region(chord_lo.max(1.0), chord_hi, outer, &a_out, &mut ann);
    }
    (interface.value(), ann.value(), bal.value())
}

/// int_S (d_r w^o - d_r w^i) phi dsigma: the classical jump tested against phi.
pub fn classical_jump_integral(
    outer: &BallSeries,
    inner: &BallSeries,
    bump: &BumpTestFunction,
    angular: &QuadratureRule,
) -> f64 {
    let d_out = outer.radial_derivative_factors(1.0);
    let d_in = inner.radial_derivative_factors(1.0);
    angular_integral(bump, angular, |theta| {
        let o: f64 = outer.angular_factors(theta).iter().zip(&d_out).map(|(a, b)| a * b).sum();
        let i: f64 = inner.angular_factors(theta).iter().zip(&d_in).map(|(a, b)| a * b).sum();
        o - i
    })
}

/// int_S f(theta) phi(theta) dsigma, visiting only nodes in the support.
fn angular_integral<F: Fn(&[f64]) -> f64>(bump: &BumpTestFunction, angular: &QuadratureRule, f: F) -> f64 {
    let mut acc = CompensatedSum::new();
    for (i, &w) in angular.weights().iter().enumerate() {
        let theta = angular.node(i);
        let phi = bump.value(theta);
        if phi != 0.0 {
            acc.add(w * phi * f(theta));
        }
    }
    acc.value()
}

/// int_S G(., u^i) phi dsigma = (n - 2) int_S Phi_K phi dsigma.
pub fn jump_right_hand_side(inst: &TransmissionInstance, bump: &BumpTestFunction, angular: &QuadratureRule) -> f64 {
    let factor = inst.dim as f64 - 2.0;
    if factor == 0.0 {
        return 0.0;
    }
    factor * angular_integral(bump, angular, |theta| inst.phi(theta))
}

/// A point where a check was evaluated, with the offending value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub location: Vec<f64>,
    pub value: f64,
    pub note: String,
}

/// One verified condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub witnesses: Vec<Witness>,
}

impl ConditionReport {
    fn new(name: &str, residual: f64, tolerance: f64, witnesses: Vec<Witness>) -> Self {
        let pass = residual <= tolerance;
        Self {
            name: name.to_string(),
            residual,
            tolerance,
            pass,
            witnesses: if pass { Vec::new() } else { witnesses },
        }
    }
}

/// Growth constants for F and G with grid evidence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthCertificate {
    pub c1: f64,
    pub c2: f64,
    pub delta1: f64,
    pub delta2: f64,
    /// The bound M on |Phi| the constants are built from.
    pub sup_bound: f64,
    pub sup_bound_certified: bool,
    /// Both branches of Psi satisfy |F| >= c1 |t|^3 - 1/c1 analytically
    /// (c1 <= 1 and 1/c1 >= 2M).
    pub analytic_branches: bool,
    pub min_slack_f: f64,
    pub min_slack_g: f64,
    pub grid_points: usize,
    pub pass: bool,
    pub witnesses: Vec<Witness>,
}

/// c1 = min(1, 1/(2M)), c2 = (n - 2) M, delta1 = 3, delta2 = 0, checked on
/// the grid: |F| >= c1 |t|^3 - 1/c1 and |G| <= c2 (1 + |F|)^0.
pub fn certify_growth(inst: &TransmissionInstance, t_grid: &[f64], theta_grid: &[Vec<f64>]) -> GrowthCertificate {
    let m = inst.sup_bound.bound;
    let c1 = 1.0f64.min(1.0 / (2.0 * m));
    let c2 = (inst.dim as f64 - 2.0) * m;
    let mut min_f = f64::INFINITY;
    let mut min_g = f64::INFINITY;
    let mut witnesses = Vec::new();
    for theta in theta_grid {
        let phi = inst.phi(theta);
        let g = (inst.dim as f64 - 2.0) * phi;
        let slack_g = c2 - g.abs();
        min_g = min_g.min(slack_g);
        for &t in t_grid {
            let f = psi(t) - 2.0 * phi;
            let slack_f = f.abs() - (c1 * t.abs().powi(3) - 1.0 / c1);
            min_f = min_f.min(slack_f);
            if (slack_f < 0.0 || slack_g < 0.0) && witnesses.len() < 16 {
                let mut location = theta.clone();
                location.push(t);
                witnesses.push(Witness {
                    location,
                    value: slack_f.min(slack_g),
                    note: "negative growth slack at (theta, t)".into(),
                });
            }
        }
    }
    // 1/c1 >= 2M holds by construction; allow for the rounding of 1/(2M).
    let analytic_branches = c1 <= 1.0 && 2.0 * m * c1 <= 1.0 + 4.0 * f64::EPSILON;
    let pass = min_f >= 0.0 && min_g >= 0.0 && analytic_branches;
    GrowthCertificate {
        c1,
        c2,
        delta1: 3.0,
        delta2: 0.0,
        sup_bound: m,
        sup_bound_certified: inst.sup_bound.certified,
        analytic_branches,
        min_slack_f: min_f,
        min_slack_g: min_g,
        grid_points: t_grid.len() * theta_grid.len(),
        pass,
        witnesses: if pass { Vec::new() } else { witnesses },
    }
}

/// `count` uniform values on [-10, 10].
pub fn default_t_grid(count: usize) -> Vec<f64> {
    let count = count.max(2);
    (0..count).map(|i| -10.0 + 20.0 * i as f64 / (count - 1) as f64).collect()
}

/// Deterministic directions: e_1 first, then uniform angles (n = 2) or
/// seeded uniform samples of the sphere.
pub fn direction_grid(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(count.max(1));
    let mut e1 = vec![0.0; n];
    e1[0] = 1.0;
    out.push(e1);
    if n == 2 {
        for i in 1..count {
            let t = 2.0 * PI * i as f64 / count as f64;
            out.push(vec![t.cos(), t.sin()]);
        }
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let r = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if r > 1e-12 {
            out.push(v.into_iter().map(|c| c / r).collect());
        }
    }
    out
}

/// Empirical Hoelder exponents of Phi along the circle, of G(., Phi), and of
/// the pointwise inverse of id + F applied to the zero function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition3Report {
    pub alpha: f64,
    pub threshold: f64,
    pub phi_exponent: f64,
    /// None for n = 2, where G vanishes identically.
    pub g_exponent: Option<f64>,
    pub inverse_exponent: f64,
    pub pass: bool,
    pub phi_modulus: ModulusTable,
}

/// Number of dyadic terms used for the untruncated circle function.
const CONDITION3_TERMS: u32 = 60;

/// Hoelder moduli for the Hoelder variant (report only).
pub fn condition3_check(
    inst: &TransmissionInstance,
    scales: Option<&[f64]>,
    sample_count: usize,
    seed: u64,
) -> Result<Condition3Report> {
    let TransmissionVariant::Holder { alpha } = inst.variant else {
        return Err(Error::Invalid("the Hoelder-preservation check applies to the holder variant".into()));
    };
    let default_scales = dyadic_scales(20, 2);
    let scales = scales.unwrap_or(&default_scales);
    let lift = LacunaryCosineSeries::weierstrass(2, alpha, CONDITION3_TERMS)?.starting_at(1)?;
    let rho = inst.rho;
    let interval = (0.0, 2.0 * PI);
    let phi_modulus = holder_modulus_with(|t, d| rho * lift.increment(t, d), interval, scales, sample_count, seed)?;
    let g_factor = inst.dim as f64 - 2.0;
    let g_exponent = if g_factor == 0.0 {
        None
    } else {
        Some(
            holder_modulus_with(|t, d| g_factor * rho * lift.increment(t, d), interval, scales, sample_count, seed)?
                .slope,
        )
    };
    let inverse = |t: f64| invert_id_plus_psi(2.0 * rho * lift.value(t), 1e-15).unwrap_or(f64::NAN);
    let inverse_modulus =
        holder_modulus_with(|t, d| inverse(t + d) - inverse(t), interval, scales, sample_count, seed)?;
    let threshold = alpha - 0.05;
    let pass = phi_modulus.slope >= threshold
        && inverse_modulus.slope >= threshold
        && g_exponent.is_none_or(|g| g >= threshold);
    Ok(Condition3Report {
        alpha,
        threshold,
        phi_exponent: phi_modulus.slope,
        g_exponent,
        inverse_exponent: inverse_modulus.slope,
        pass,
        phi_modulus,
    })
}

/// Tolerances of [`verify_instance`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyTolerances {
    /// Relative finite-difference Laplacian residual.
    pub harmonic: f64,
    /// Interface identity, on top of the truncation allowance.
    pub boundary: f64,
    /// Weak jump residual relative to max(1, |right-hand side|).
    pub weak: f64,
    /// Outer Dirichlet datum, on top of the truncation allowance.
    pub dirichlet: f64,
    pub fd_step: f64,
    pub directions: usize,
}

impl Default for VerifyTolerances {
    fn default() -> Self {
        Self {
            harmonic: 1e-4,
            boundary: 1e-10,
            weak: 1e-3,
            dirichlet: 1e-10,
            fd_step: 1e-3,
            directions: 256,
        }
    }
}

/// Non-gating observation attached to a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub name: String,
    pub value: f64,
    pub note: String,
}

/// Per-bump detail of the weak-jump check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BumpCheck {
    pub bump: BumpTestFunction,
    pub pairing: PairingResult,
    pub right_hand_side: f64,
    pub residual: f64,
    /// Bound on the pairing change from the omitted terms:
    /// tail * (2 int_S |d_r phi| + int |Laplacian phi|) + (n-2) tail int_S |phi|.
    pub truncation_allowance: f64,
}

/// Verification of the five lines of the transmission problem plus the
/// growth and monotonicity certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub variant: String,
    pub dim: usize,
    pub rho: f64,
    pub k_max: u64,
    pub sup_bound: f64,
    pub sup_bound_certified: bool,
    pub conditions: Vec<ConditionReport>,
    pub bumps: Vec<BumpCheck>,
    pub monotone_inverse: ConditionReport,
    pub growth: GrowthCertificate,
    pub diagnostics: Vec<Diagnostic>,
    pub pass: bool,
}

impl VerificationReport {
    /// All witnesses of failed checks.
    pub fn witnesses(&self) -> Vec<Witness> {
        self.conditions
            .iter()
            .chain(std::iter::once(&self.monotone_inverse))
            .flat_map(|c| c.witnesses.iter().cloned())
            .chain(self.growth.witnesses.iter().cloned())
            .collect()
    }
}

/// Check the candidate pair against all lines of the problem.
pub fn verify_instance(
    inst: &TransmissionInstance,
    bumps: &[BumpTestFunction],
    tol: &VerifyTolerances,
) -> Result<VerificationReport> {
    let n = inst.dim;
    let mut conditions = Vec::new();

    // Harmonicity of both components.
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut sample_points = |lo: f64, hi: f64| -> Vec<Vec<f64>> {
        (0..25)
            .map(|i| {
                let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
                let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt().max(1e-12);
                let r = lo + (hi - lo) * (i as f64 + 0.5) / 25.0;
                v.into_iter().map(|c| r * c / norm).collect()
            })
            .collect()
    };
    let outer_points = sample_points(1.1, 1.9);
    let inner_points = sample_points(0.1, 0.9);
    for (name, series, points) in [
        ("harmonic_outer", &inst.outer, outer_points),
        ("harmonic_inner", &inst.inner, inner_points),
    ] {
        let report = check_harmonic_fd(series, &points, tol.fd_step)?;
        conditions.push(ConditionReport::new(
            name,
            report.max_relative_residual,
            tol.harmonic,
            vec![Witness {
                location: report.worst_point.clone(),
                value: report.max_abs_residual,
                note: "largest finite-difference Laplacian".into(),
            }],
        ));
    }

    // Interface identity u^o = F(., u^i) on the unit sphere.
    let directions = direction_grid(n, tol.directions, 29);
    let tail = inst.inner.tail_bound(1.0);
    let mut worst = (0.0f64, Vec::new());
    for theta in &directions {
        let ui = inst.inner.value_unchecked(theta);
        let uo = inst.outer.value_unchecked(theta);
        let residual = (uo - (psi(ui) - 2.0 * ui)).abs();
        if residual > worst.0 {
            worst = (residual, theta.clone());
        }
    }
    // Psi has Lipschitz constant 3 near |t| = 1, so the untruncated identity
    // can differ from the truncated one by at most (1 + 3) tail.
    conditions.push(ConditionReport::new(
        "interface_trace",
        worst.0,
        tol.boundary + 4.0 * tail.bound,
        vec![Witness {
            location: worst.1,
            value: worst.0,
            note: "|u^o - F(theta, u^i)| on the unit sphere".into(),
        }],
    ));

    // Weak normal-derivative jump against each bump.
    let k_eff = inst.inner.terms().iter().map(|t| t.k).max().unwrap_or(1).max(1);
    let min_radius = bumps.iter().map(|b| b.radius).fold(f64::INFINITY, f64::min);
    let angular = angular_rule(n, k_eff, if min_radius.is_finite() { min_radius } else { 1.0 })?;
    let mut bump_checks = Vec::new();
    let mut worst_weak = 0.0f64;
    let mut weak_witnesses = Vec::new();
    for bump in bumps {
        let rules = PairingRules::with_angular(angular.clone(), k_eff);
        let pairing = weak_jump_pairing(&inst.outer, &inst.inner, bump, &rules)?;
        let rhs = jump_right_hand_side(inst, bump, &angular);
        let residual = (pairing.value - rhs).abs() / rhs.abs().max(1.0);
        let allowance = truncation_allowance(inst, bump, &rules.angular, tail.bound);
        if residual > tol.weak {
            weak_witnesses.push(Witness {
                location: bump.center.clone(),
                value: residual,
                note: format!("bump radius {}: pairing {} vs {}", bump.radius, pairing.value, rhs),
            });
        }
        worst_weak = worst_weak.max(residual);
        bump_checks.push(BumpCheck {
            bump: bump.clone(),
            pairing,
            right_hand_side: rhs,
            residual,
            truncation_allowance: allowance,
        });
    }
    conditions.push(ConditionReport::new("weak_jump", worst_weak, tol.weak, weak_witnesses));

    // Outer Dirichlet datum h on the sphere of radius 2.
    let outer_tail = inst.outer.tail_bound(OUTER_RADIUS).bound;
    let mut worst = (0.0f64, Vec::new());
    for theta in &directions {
        let x: Vec<f64> = theta.iter().map(|c| OUTER_RADIUS * c).collect();
        let residual = (inst.outer.value_unchecked(&x) - inst.h_eval(&x)).abs();
        if residual > worst.0 {
            worst = (residual, x);
        }
    }
    conditions.push(ConditionReport::new(
        "outer_dirichlet",
        worst.0,
        tol.dirichlet * inst.sup_bound.bound.max(1.0) + outer_tail,
        vec![Witness {
            location: worst.1,
            value: worst.0,
            note: "|u^o - h| on the sphere of radius 2".into(),
        }],
    ));

    let monotone_inverse = check_monotone_inverse(inst, &directions[..directions.len().min(16)])?;
    let growth = certify_growth(inst, &default_t_grid(401), &directions);

    let mut diagnostics = Vec::new();
    if inst.inner.is_highest_weight() {
        // Every Q_k equals 1 at e_1, so Phi(e_1) is the full coefficient sum.
        let phi_e1 = inst.inner.schedule().abs_sum();
        let value = (psi(phi_e1) - phi_e1).abs();
        let note = if phi_e1 > 1.0 {
            format!(
                "Phi(e_1) = {phi_e1} exceeds 1: Psi(Phi) != Phi and the interface identity fails for the untruncated data"
            )
        } else {
            format!("Phi(e_1) = {phi_e1} <= 1: Psi acts as the identity on the trace")
        };
        diagnostics.push(Diagnostic {
            name: "interface_residual_at_e1".into(),
            value,
            note,
        });
    }
    if inst.trace_exceeds_unit() {
        diagnostics.push(Diagnostic {
            name: "rho_exceeds_default".into(),
            value: inst.sup_bound.bound,
            note: "sup bound on |Phi| exceeds 1; choose rho <= 1/M for the identity Psi(Phi) = Phi".into(),
        });
    }
    if !inst.sup_bound.certified {
        diagnostics.push(Diagnostic {
            name: "sup_bound_uncertified".into(),
            value: inst.sup_bound.bound,
            note: "the bound on |Phi| rests on typical sizes of random harmonics".into(),
        });
    }

    let pass = conditions.iter().all(|c| c.pass) && monotone_inverse.pass && growth.pass;
    Ok(VerificationReport {
        variant: inst.variant.name().to_string(),
        dim: n,
        rho: inst.rho,
        k_max: inst.k_max,
        sup_bound: inst.sup_bound.bound,
        sup_bound_certified: inst.sup_bound.certified,
        conditions,
        bumps: bump_checks,
        monotone_inverse,
        growth,
        diagnostics,
        pass,
    })
}

fn truncation_allowance(inst: &TransmissionInstance, bump: &BumpTestFunction, angular: &QuadratureRule, tail: f64) -> f64 {
    let n = inst.dim;
    let surface_dr = angular_integral_abs(bump, angular, |x| bump.radial_derivative(x));
    let surface_phi = angular_integral_abs(bump, angular, |x| bump.value(x));
    // int |Laplacian phi| over the bump ball, by Gauss in r over the support.
    let c = bump.center_norm();
    let (lo, hi) = ((c - bump.radius).max(0.0), c + bump.radius);
    let (nodes, weights) = gauss_legendre(64);
    let mut volume = 0.0;
    for (xg, wg) in nodes.iter().zip(&weights) {
        let r = 0.5 * (lo + hi) + 0.5 * (hi - lo) * xg;
        let wr = 0.5 * (hi - lo) * wg * r.powi(n as i32 - 1);
        volume += wr
            * angular_integral_abs(bump, angular, |theta| {
                let x: Vec<f64> = theta.iter().map(|c| r * c).collect();
                bump.laplacian(&x)
            });
    }
    tail * (2.0 * surface_dr + volume) + (n as f64 - 2.0) * tail * surface_phi
}

/// int_S |f| over the sphere of radius 1 restricted to where the bump may
/// be nonzero (f is expected to vanish elsewhere).
fn angular_integral_abs<F: Fn(&[f64]) -> f64>(bump: &BumpTestFunction, angular: &QuadratureRule, f: F) -> f64 {
    let c2: f64 = bump.center.iter().map(|v| v * v).sum();
    let rb2 = bump.radius * bump.radius;
    let mut acc = 0.0;
    for (i, &w) in angular.weights().iter().enumerate() {
        let theta = angular.node(i);
        // Skip rays that miss the bump ball.
        let p: f64 = theta.iter().zip(&bump.center).map(|(a, b)| a * b).sum();
        if c2 - p * p >= rb2 || p + bump.radius <= 0.0 && c2 > rb2 {
            continue;
        }
        acc += w * f(theta).abs();
    }
    acc
}

/// t + F(theta, t) is increasing with slope >= 1 and its inverse is
/// nondecreasing in y on a grid.
fn check_monotone_inverse(inst: &TransmissionInstance, directions: &[Vec<f64>]) -> Result<ConditionReport> {
    let ys = default_t_grid(201).into_iter().map(|v| 3.0 * v).collect::<Vec<_>>();
    let mut worst = 0.0f64;
    let mut witnesses = Vec::new();
    for theta in directions {
        let mut prev = f64::NEG_INFINITY;
        for &y in &ys {
            let t = inst.invert_id_plus_f(theta, y, 1e-14)?;
            let back = t + inst.f_eval(theta, t);
            let miss = (back - y).abs() / y.abs().max(1.0);
            let drop = (prev - t).max(0.0);
            let bad = miss.max(drop);
            if bad > worst {
                worst = bad;
            }
            if bad > 1e-12 && witnesses.len() < 8 {
                let mut location = theta.clone();
                location.push(y);
                witnesses.push(Witness {
                    location,
                    value: bad,
                    note: "inverse of id + F not monotone or not exact".into(),
                });
            }
            prev = t;
        }
    }
    Ok(ConditionReport::new("monotone_inverse", worst, 1e-12, witnesses))
}

/// Which radial profile a series uses (convenience for reports).
pub fn is_exterior(series: &BallSeries) -> bool {
    series.radial() == RadialMap::Kelvin
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_branches() {
        assert_eq!(psi(0.5), 0.5);
        assert_eq!(psi(2.0), 8.0);
        assert_eq!(psi(-1.0), -1.0);
        assert_eq!(psi(-2.0), -8.0);
    }

    #[test]
    fn inverse_closed_forms() {
        assert_eq!(invert_id_plus_psi(1.0, 1e-15).unwrap(), 0.5);
        assert!((invert_id_plus_psi(10.0, 1e-15).unwrap() - 2.0).abs() < 1e-14);
        assert!((invert_id_plus_psi(-10.0, 1e-15).unwrap() + 2.0).abs() < 1e-14);
    }

    #[test]
    fn bump_derivatives_match_differences() {
        let b = BumpTestFunction::new(vec![0.9, 0.2, -0.1], 0.5).unwrap();
        let x = [1.0, 0.35, 0.0];
        let h = 1e-4;
        let g = b.gradient(&x);
        let mut lap = 0.0;
        for i in 0..3 {
            let mut p = x;
            let mut m = x;
            p[i] += h;
            m[i] -= h;
            let fd = (b.value(&p) - b.value(&m)) / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-6, "{fd} vs {}", g[i]);
            lap += (b.value(&p) - 2.0 * b.value(&x) + b.value(&m)) / (h * h);
        }
        assert!((lap - b.laplacian(&x)).abs() < 1e-6 * b.laplacian(&x).abs().max(1.0));
        assert_eq!(b.value(&[3.0, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn tilde_phi_at_pole_is_basel() {
        let inst = TransmissionInstance::new(TransmissionVariant::Tilde, 3, 1 << 10, Some(1.0)).unwrap();
        let v = inst.phi_eval(&[1.0, 0.0, 0.0], 1e-3).unwrap();
        assert!(!v.warning);
        assert!((v.value - PI * PI / 6.0).abs() <= 1e-3);
        let half = TransmissionInstance::new(TransmissionVariant::Tilde, 3, 1 << 10, Some(0.5)).unwrap();
        let w = half.phi_eval(&[1.0, 0.0, 0.0], 1e-3).unwrap();
        assert!((w.value - 0.5 * v.value).abs() < 1e-15);
    }

    #[test]
    fn default_rho_keeps_trace_below_one() {
        let inst = TransmissionInstance::new(TransmissionVariant::Tilde, 2, 64, None).unwrap();
        assert!((inst.sup_bound().bound - (1.0 - DEFAULT_RHO_MARGIN)).abs() < 1e-15);
        assert!(!inst.trace_exceeds_unit());
    }

    #[test]
    fn jump_is_n_minus_two_times_coefficient() {
        for n in [2, 3, 5] {
            let inst = TransmissionInstance::new(TransmissionVariant::Holder { alpha: 0.5 }, n, 1 << 10, None).unwrap();
            for (_, jump, want) in inst.closed_form_jump() {
                assert!((jump - want).abs() <= 1e-10 * want.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn traces_cancel_and_h_matches() {
        let inst = TransmissionInstance::new(TransmissionVariant::Tilde, 3, 1 << 8, None).unwrap();
        for theta in direction_grid(3, 50, 3) {
            let sum = inst.outer.value_unchecked(&theta) + inst.inner.value_unchecked(&theta);
            assert!(sum.abs() < 1e-12);
            let x: Vec<f64> = theta.iter().map(|c| 2.0 * c).collect();
            assert!((inst.outer.value_unchecked(&x) - inst.h_eval(&x)).abs() < 1e-14);
        }
    }

    #[test]
    fn growth_constants_for_basel_bound() {
        let inst = TransmissionInstance::new(TransmissionVariant::Tilde, 3, 1 << 10, Some(1.0)).unwrap();
        let cert = certify_growth(&inst, &default_t_grid(101), &direction_grid(3, 64, 1));
        assert!((cert.c1 - 3.0 / (PI * PI)).abs() < 1e-15);
        assert!((cert.c2 - PI * PI / 6.0).abs() < 1e-15);
        assert!(cert.pass, "{cert:?}");
    }

    #[test]
    fn pairing_vanishes_inside_the_ball() {
        let inst = TransmissionInstance::new(TransmissionVariant::Tilde, 2, 16, None).unwrap();
        let bump = BumpTestFunction::new(vec![0.3, 0.1], 0.4).unwrap();
        let rules = PairingRules::for_bump(2, 16, &bump).unwrap();
        let p = weak_jump_pairing(&inst.outer, &inst.inner, &bump, &rules).unwrap();
        assert!(p.value.abs() < 1e-10, "{p:?}");
        let outside = BumpTestFunction::new(vec![1.8, 0.0], 0.3).unwrap();
        assert!(weak_jump_pairing(&inst.outer, &inst.inner, &outside, &rules).is_err());
    }

    #[test]
    fn pairing_matches_classical_jump_for_truncations() {
        let inst = TransmissionInstance::new(TransmissionVariant::Tilde, 3, 16, None).unwrap();
        for bump in standard_bumps(3, 5).unwrap() {
            let rules = PairingRules::for_bump(3, 16, &bump).unwrap();
            let p = weak_jump_pairing(&inst.outer, &inst.inner, &bump, &rules).unwrap();
            let classical = classical_jump_integral(&inst.outer, &inst.inner, &bump, &rules.angular);
            assert!((p.value - classical).abs() < 1e-6, "{} vs {classical}", p.value);
        }
    }

    #[test]
    fn config_round_trip() {
        let inst = TransmissionInstance::new(TransmissionVariant::Holder { alpha: 0.5 }, 3, 1 << 6, None).unwrap();
        let back = TransmissionInstance::from_json(&inst.to_json().unwrap()).unwrap();
        assert_eq!(back, inst);
    }
}
