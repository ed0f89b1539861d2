//! Regularity diagnostics: spherical-harmonic coefficients, spectral Sobolev
//! partial sums and their classification, Dirichlet energy on the disk,
//! empirical Hoelder moduli and Fourier-coefficient decay certificates.

use std::f64::consts::{LN_2, PI, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::harmonics::{
    complex_power, harmonic_dimension, highest_weight_l2_norm, laplace_beltrami_eigenvalue,
    HarmonicKind,
};
use crate::schedule::CoefficientSchedule;
use crate::series::{BallSeries, SeriesVariant};
use crate::special::{legendre_table, CompensatedSum};
use crate::sphere::{build_annulus_rule, build_sphere_quadrature, QuadratureMode, QuadratureRule};
use crate::weierstrass::LacunaryCosineSeries;

/// Inner products <u, Y_{k,j}> against the orthonormal basis, k <= k_max.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralCoefficients {
    pub dim: usize,
    pub k_max: usize,
    /// `by_degree[k][j]` in the basis ordering of `orthonormal_basis`.
    pub by_degree: Vec<Vec<f64>>,
}

impl SpectralCoefficients {
    /// sum_j <u, Y_{k,j}>^2.
    pub fn degree_energy(&self, k: usize) -> f64 {
        self.by_degree.get(k).map(|c| c.iter().map(|v| v * v).sum()).unwrap_or(0.0)
    }
}

/// Project sampled boundary values onto degrees 0..=k_max using a product
/// rule of degree >= 2 k_max (n = 2, 3).
pub fn spectral_coefficients<F: Fn(&[f64]) -> f64>(
    u: F,
    n: usize,
    k_max: usize,
    rule: &QuadratureRule,
) -> Result<SpectralCoefficients> {
    if !(n == 2 || n == 3) {
        return Err(Error::UnsupportedDimension {
            n,
            what: "spectral coefficients",
        });
    }
    if rule.dim() != n {
        return domain("quadrature rule dimension mismatch");
    }
    rule.require_degree(2 * k_max)?;
    let layout = rule.layout().ok_or(Error::InsufficientDegree {
        needed: 2 * k_max,
        have: 0,
    })?;
    let m = layout.azimuth_count;
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(m);
    let mut by_degree: Vec<Vec<f64>> = (0..=k_max)
        .map(|k| vec![0.0; harmonic_dimension(n, k).map(|d| d as usize).unwrap_or(0)])
        .collect();
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (ring, &x) in layout.cos_polar.iter().enumerate() {
        let base = ring * m;
        for (j, b) in buf.iter_mut().enumerate() {
            *b = Complex64::new(u(rule.node(base + j)), 0.0);
        }
        fft.process(&mut buf);
        // All nodes of a ring share one weight.
        let w = rule.weights()[base];
        if n == 2 {
            by_degree[0][0] += w * buf[0].re / (2.0 * PI).sqrt();
            for k in 1..=k_max {
                by_degree[k][0] += w * buf[k].re / PI.sqrt();
                by_degree[k][1] -= w * buf[k].im / PI.sqrt();
            }
            continue;
        }
        let table = legendre_table(k_max, x);
        for k in 0..=k_max {
            let row = &table[k];
            let c = &mut by_degree[k];
            c[0] += w * row[0] * buf[0].re;
            for mm in 1..=k {
                c[2 * mm - 1] += w * SQRT_2 * row[mm] * buf[mm].re;
                c[2 * mm] -= w * SQRT_2 * row[mm] * buf[mm].im;
            }
        }
    }
    Ok(SpectralCoefficients { dim: n, k_max, by_degree })
}

/// Sparse per-degree energies e_k = sum_j |<u, Y_{k,j}>|^2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeEnergies {
    pub dim: usize,
    /// (k, e_k) increasing in k, zero entries omitted.
    pub entries: Vec<(u64, f64)>,
}

impl DegreeEnergies {
    /// Exact energies of a series: e_k = a_k^2 ||Y_k||_2^2.
    pub fn from_series(u: &BallSeries) -> Self {
        let entries = u
            .terms()
            .iter()
            .map(|t| (t.k, t.a * t.a * t.harmonic.l2_norm().powi(2)))
            .filter(|e| e.1 != 0.0)
            .collect();
        Self { dim: u.dim(), entries }
    }

    /// Exact energies of a named series up to `k_max` from its schedule
    /// alone (no harmonics are constructed).
    pub fn from_variant(variant: SeriesVariant, n: usize, k_max: u64, scale: f64) -> Result<Self> {
        let (schedule, unit_harmonics) = match variant {
            SeriesVariant::NotHs { .. } => {
                if !(n == 2 || n == 3) {
                    return Err(Error::IncompatibleVariant {
                        variant: variant.name().into(),
                        n,
                    });
                }
                (CoefficientSchedule::dyadic_inverse_square(), true)
            }
            SeriesVariant::NotCbeta => (CoefficientSchedule::dyadic_inverse_square(), false),
            SeriesVariant::AnynHolder { alpha } => (CoefficientSchedule::dyadic_holder(alpha)?, false),
            SeriesVariant::Hadamard2d => {
                if n != 2 {
                    return Err(Error::IncompatibleVariant {
                        variant: variant.name().into(),
                        n,
                    });
                }
                (CoefficientSchedule::hadamard(), false)
            }
            SeriesVariant::Custom => {
                return Err(Error::Invalid("custom energies come from a built series".into()))
            }
        };
        let schedule = schedule.with_scale(scale)?;
        let entries = schedule
            .support(k_max)
            .into_iter()
            .map(|(k, a)| {
                let norm_sq = if unit_harmonics {
                    1.0
                } else {
                    highest_weight_l2_norm(n, k)?.powi(2)
                };
                Ok((k, a * a * norm_sq))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dim: n, entries })
    }

    /// Energies measured from quadrature coefficients.
    pub fn from_coefficients(c: &SpectralCoefficients) -> Self {
        let entries = (0..=c.k_max)
            .map(|k| (k as u64, c.degree_energy(k)))
            .filter(|e| e.1 != 0.0)
            .collect();
        Self { dim: c.dim, entries }
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.1).sum()
    }
}

/// S_K(sigma) = sum_{k <= K} (k(k+n-2))^sigma e_k.
pub fn sobolev_partial_sum(energies: &DegreeEnergies, sigma: f64, k_max: u64) -> f64 {
    let mut acc = CompensatedSum::new();
    for &(k, e) in energies.entries.iter().take_while(|e| e.0 <= k_max) {
        acc.add(laplace_beltrami_eigenvalue(energies.dim, k as usize).powf(sigma) * e);
    }
    acc.value()
}

/// Dyadic block increments Delta_j = S_{2^j} - S_{2^{j-1}} (j >= 1, with
/// Delta_0 = S_1), for 2^j <= k_max.
pub fn block_increments(energies: &DegreeEnergies, sigma: f64, k_max: u64) -> Vec<(u32, f64)> {
    let j_max = if k_max == 0 { 0 } else { 63 - k_max.leading_zeros() };
    let mut blocks = vec![0.0; j_max as usize + 1];
    for &(k, e) in energies.entries.iter().take_while(|e| e.0 <= k_max) {
        let j = if k <= 1 { 0 } else { 64 - (k - 1).leading_zeros() } as usize;
        blocks[j] += laplace_beltrami_eigenvalue(energies.dim, k as usize).powf(sigma) * e;
    }
    blocks.into_iter().enumerate().map(|(j, d)| (j as u32, d)).collect()
}

/// Outcome of a Sobolev partial-sum scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SobolevVerdict {
    Convergent,
    Divergent,
    /// Increments neither grow nor decay geometrically and decay no faster
    /// than 1/j: the partial sums grow like a power of log K.
    DivergentMarginal,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SobolevBlock {
    #[serde(rename = "K")]
    pub k: u64,
    #[serde(rename = "S_K")]
    pub s_k: f64,
}

/// Partial sums at dyadic K with a verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SobolevScan {
    pub sigma: f64,
    /// The interior exponent s = sigma + 1/2 matching this boundary exponent.
    pub interior_exponent: f64,
    pub blocks: Vec<SobolevBlock>,
    pub verdict: SobolevVerdict,
    /// Growth of block increments per doubling of K (log2 of the ratio).
    pub fitted_exponent: Option<f64>,
    /// Power of log K multiplying the geometric increment law.
    pub fitted_log_power: Option<f64>,
    pub r_squared: Option<f64>,
    /// For convergent scans: partial sum plus the fitted model's tail.
    pub limit_estimate: Option<f64>,
}

/// Thresholds of the Sobolev classifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifierSettings {
    pub min_blocks: usize,
    pub min_r_squared: f64,
    /// |growth exponent| below this counts as non-geometric.
    pub exponent_epsilon: f64,
    /// Log powers above -1 + margin are marginally divergent, below
    /// -1 - margin convergent.
    pub log_power_margin: f64,
}

impl Default for ClassifierSettings {
    fn default() -> Self {
        Self {
            min_blocks: 6,
            min_r_squared: 0.99,
            exponent_epsilon: 1e-3,
            log_power_margin: 0.1,
        }
    }
}

/// Classify S_K(sigma) for each sigma from dyadic blocks up to `k_max`.
///
/// The trailing block increments (at least `min_blocks`, at least half of
/// the blocks) are fitted to ln Delta_j = A + B j + P ln j. The growth
/// exponent g = B / ln 2 decides geometric growth or decay; when g is
/// negligible the log power P decides between marginal divergence and
/// power-law convergence.
pub fn classify_sobolev(
    energies: &DegreeEnergies,
    sigma_grid: &[f64],
    k_max: u64,
    settings: &ClassifierSettings,
) -> Result<Vec<SobolevScan>> {
    sigma_grid
        .iter()
        .map(|&sigma| {
            if !(0.0..=2.0).contains(&sigma) {
                return domain(format!("sigma = {sigma} outside [0, 2]"));
            }
            Ok(classify_one(energies, sigma, k_max, settings))
        })
        .collect()
}

fn classify_one(energies: &DegreeEnergies, sigma: f64, k_max: u64, settings: &ClassifierSettings) -> SobolevScan {
    let increments = block_increments(energies, sigma, k_max);
    let mut blocks = Vec::with_capacity(increments.len());
    let mut running = CompensatedSum::new();
    for &(j, d) in &increments {
        running.add(d);
        blocks.push(SobolevBlock {
            k: 1u64 << j,
            s_k: running.value(),
        });
    }
    let total = running.value();
    let mut scan = SobolevScan {
        sigma,
        interior_exponent: sigma + 0.5,
        blocks,
        verdict: SobolevVerdict::Inconclusive,
        fitted_exponent: None,
        fitted_log_power: None,
        r_squared: None,
        limit_estimate: None,
    };
    let beyond: f64 = energies.entries.iter().filter(|e| e.0 > k_max).map(|e| e.1).sum();
    let window = settings.min_blocks.max(increments.len().div_ceil(2));
    let trailing = &increments[increments.len().saturating_sub(window)..];
    if trailing.iter().all(|b| b.1 == 0.0) && beyond == 0.0 && !energies.entries.is_empty()
        || energies.entries.is_empty()
    {
        // Finitely supported in the scanned range: the sum is exact.
        scan.verdict = SobolevVerdict::Convergent;
        scan.limit_estimate = Some(total);
        return scan;
    }
    let points: Vec<(f64, f64)> = trailing
        .iter()
        .filter(|b| b.1 > 0.0 && b.0 >= 1)
        .map(|b| (b.0 as f64, b.1.ln()))
        .collect();
    if points.len() < settings.min_blocks {
        return scan;
    }
    let cols = vec![
        vec![1.0; points.len()],
        points.iter().map(|p| p.0).collect(),
        points.iter().map(|p| p.0.ln()).collect(),
    ];
    let y: Vec<f64> = points.iter().map(|p| p.1).collect();
    let Some(fit) = least_squares(&cols, &y) else {
        return scan;
    };
    let (a, b, p) = (fit.coefficients[0], fit.coefficients[1], fit.coefficients[2]);
    let g = b / LN_2;
    scan.fitted_exponent = Some(g);
    scan.fitted_log_power = Some(p);
    scan.r_squared = Some(fit.r_squared);
    // R^2 is meaningless for (numerically) constant data; an essentially
    // exact fit is accepted on its residual instead.
    if fit.r_squared < settings.min_r_squared && fit.rms_residual > EXACT_FIT_RESIDUAL {
        return scan;
    }
    let last_j = increments.last().map(|b| b.0).unwrap_or(0) as f64;
    let eps = settings.exponent_epsilon;
    if g > eps {
        scan.verdict = SobolevVerdict::Divergent;
    } else if g < -eps {
        scan.verdict = SobolevVerdict::Convergent;
        scan.limit_estimate = Some(total + model_tail_direct(a, b, p, last_j));
    } else if p > -1.0 + settings.log_power_margin {
        scan.verdict = SobolevVerdict::DivergentMarginal;
    } else if p < -1.0 - settings.log_power_margin {
        scan.verdict = SobolevVerdict::Convergent;
        scan.limit_estimate = Some(total + power_tail(a, p, last_j));
    }
    scan
}

/// Log-space RMS residual below which a fit counts as exact.
const EXACT_FIT_RESIDUAL: f64 = 1e-8;

/// sum_{j > J} exp(A + B j + P ln j) for B < 0, summed until negligible.
fn model_tail_direct(a: f64, b: f64, p: f64, last_j: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    let mut j = last_j + 1.0;
    loop {
        let term = (a + b * j + p * j.ln()).exp();
        acc.add(term);
        if term <= 1e-17 * acc.value().abs() || j > last_j + 1e6 {
            break;
        }
        j += 1.0;
    }
    acc.value()
}

/// sum_{j > J} e^A j^P for P < -1 by Euler-Maclaurin at x = J.
fn power_tail(a: f64, p: f64, last_j: f64) -> f64 {
    let c = a.exp();
    let jj = last_j;
    let integral = jj.powf(p + 1.0) / (-p - 1.0);
    let f = jj.powf(p);
    let f1 = p * jj.powf(p - 1.0);
    let f3 = p * (p - 1.0) * (p - 2.0) * jj.powf(p - 3.0);
    let f5 = p * (p - 1.0) * (p - 2.0) * (p - 3.0) * (p - 4.0) * jj.powf(p - 5.0);
    c * (integral - 0.5 * f - f1 / 12.0 + f3 / 720.0 - f5 / 30240.0)
}

struct LeastSquares {
    coefficients: Vec<f64>,
    r_squared: f64,
    rms_residual: f64,
}

/// Least squares y ~ sum c_i col_i by modified Gram-Schmidt.
fn least_squares(cols: &[Vec<f64>], y: &[f64]) -> Option<LeastSquares> {
    let p = cols.len();
    let m = y.len();
    if m < p {
        return None;
    }
    let mut q: Vec<Vec<f64>> = cols.to_vec();
    let mut r = vec![vec![0.0; p]; p];
    for i in 0..p {
        for k in 0..i {
            let dot: f64 = (0..m).map(|t| q[k][t] * q[i][t]).sum();
            r[k][i] = dot;
            for t in 0..m {
                q[i][t] -= dot * q[k][t];
            }
        }
        let norm = q[i].iter().map(|v| v * v).sum::<f64>().sqrt();
        let scale = cols[i].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= 1e-13 * scale.max(1e-300) {
            return None;
        }
        r[i][i] = norm;
        for v in q[i].iter_mut() {
            *v /= norm;
        }
    }
    let qty: Vec<f64> = (0..p).map(|i| (0..m).map(|t| q[i][t] * y[t]).sum()).collect();
    let mut c = vec![0.0; p];
    for i in (0..p).rev() {
        let s: f64 = (i + 1..p).map(|k| r[i][k] * c[k]).sum();
        c[i] = (qty[i] - s) / r[i][i];
    }
    let mean = y.iter().sum::<f64>() / m as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let ss_res: f64 = (0..m)
        .map(|t| {
            let pred: f64 = (0..p).map(|i| c[i] * cols[i][t]).sum();
            (y[t] - pred).powi(2)
        })
        .sum();
    let r_squared = if ss_tot <= 1e-24 * (1.0 + mean * mean) * m as f64 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Some(LeastSquares {
        coefficients: c,
        r_squared,
        rms_residual: (ss_res / m as f64).sqrt(),
    })
}

/// Straight-line fit y = c0 + c1 x; returns (c1, c0, rms residual).
pub fn fit_line(x: &[f64], y: &[f64]) -> Option<(f64, f64, f64)> {
    let fit = least_squares(&[vec![1.0; x.len()], x.to_vec()], y)?;
    let (c0, c1) = (fit.coefficients[0], fit.coefficients[1]);
    let rms = (x.iter().zip(y).map(|(a, b)| (b - c0 - c1 * a).powi(2)).sum::<f64>() / x.len() as f64).sqrt();
    Some((c1, c0, rms))
}

/// How the Dirichlet energy is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyMode {
    /// pi sum k a_k^2.
    Formula,
    /// Quadrature of |grad u|^2 over the disk.
    Quadrature,
}

/// Dirichlet energy of the truncation to degrees <= k_max of a disk series
/// sum a_k r^k cos(k t).
pub fn dirichlet_energy_2d(u: &BallSeries, k_max: u64, mode: EnergyMode) -> Result<f64> {
    if u.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            n: u.dim(),
            what: "Dirichlet energy on the disk",
        });
    }
    if !u.terms().iter().all(|t| matches!(t.harmonic.kind(), HarmonicKind::HighestWeight)) {
        return domain("energy requires terms of the form a_k r^k cos(k t)");
    }
    let terms: Vec<(u64, f64)> = u.terms().iter().filter(|t| t.k <= k_max).map(|t| (t.k, t.a)).collect();
    match mode {
        EnergyMode::Formula => Ok(PI * terms.iter().map(|&(k, a)| k as f64 * a * a).sum::<f64>()),
        EnergyMode::Quadrature => {
            let k_top = terms.last().map(|t| t.0).unwrap_or(0).max(1) as usize;
            // |f'(z)|^2 r has radial degree 2K - 1 and angular degree 2K - 2.
            let angular = build_sphere_quadrature(2, 2 * k_top + 1, QuadratureMode::Product, None)?;
            let rule = build_annulus_rule(2, 0.0, 1.0, k_top, angular)?;
            Ok(rule.integrate(|x| {
                // u = Re f, f(z) = sum a_k z^k, |grad u| = |f'(z)|.
                let mut d = Complex64::new(0.0, 0.0);
                for &(k, a) in &terms {
                    if k > 0 {
                        d += complex_power(x[0], x[1], k - 1) * (k as f64 * a);
                    }
                }
                d.norm_sqr()
            }))
        }
    }
}

/// Empirical modulus of continuity at dyadic scales.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusTable {
    /// Increasing scales.
    pub deltas: Vec<f64>,
    /// Running maxima of |f(t + delta) - f(t)|, non-decreasing.
    pub omegas: Vec<f64>,
    /// Least-squares slope of ln omega against ln delta.
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
    /// Index range [lo, hi) of the scales used in the fit.
    pub fit_range: (usize, usize),
    pub sample_count: usize,
    pub seed: u64,
}

impl ModulusTable {
    /// CSV with header `delta,omega`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("delta,omega\n");
        for (d, w) in self.deltas.iter().zip(&self.omegas) {
            out.push_str(&format!("{d:.16e},{w:.16e}\n"));
        }
        out
    }
}

/// 2^{-e} for e = hi_exp..=lo_exp, increasing.
pub fn dyadic_scales(finest_exp: i32, coarsest_exp: i32) -> Vec<f64> {
    (coarsest_exp..=finest_exp).rev().map(|e| 2f64.powi(-e)).collect()
}

/// Modulus of continuity of f on [a, b] from `sample_count` uniform points.
pub fn holder_modulus<F: Fn(f64) -> f64>(
    f: F,
    interval: (f64, f64),
    scales: &[f64],
    sample_count: usize,
    seed: u64,
) -> Result<ModulusTable> {
    holder_modulus_with(|t, d| f(t + d) - f(t), interval, scales, sample_count, seed)
}

/// As [`holder_modulus`] with a user-supplied increment (t, delta) ->
/// f(t + delta) - f(t), for functions with a cancellation-free form.
pub fn holder_modulus_with<G: Fn(f64, f64) -> f64>(
    increment: G,
    interval: (f64, f64),
    scales: &[f64],
    sample_count: usize,
    seed: u64,
) -> Result<ModulusTable> {
    let (a, b) = interval;
    if !(a < b) || sample_count == 0 {
        return domain("modulus sampling needs a < b and at least one sample");
    }
    if scales.len() < 2 || scales.iter().any(|d| !(*d > 0.0)) {
        return domain("modulus needs at least two positive scales");
    }
    let mut deltas = scales.to_vec();
    deltas.sort_by(f64::total_cmp);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut omegas = vec![0.0f64; deltas.len()];
    for _ in 0..sample_count {
        let t = rng.random_range(a..b);
        for (w, &d) in omegas.iter_mut().zip(&deltas) {
            *w = w.max(increment(t, d).abs());
        }
    }
    for i in 1..omegas.len() {
        omegas[i] = omegas[i].max(omegas[i - 1]);
    }
    // Boundary-of-range scales are excluded from the fit when enough remain.
    let fit_range = if deltas.len() >= 7 { (2, deltas.len() - 2) } else { (0, deltas.len()) };
    let xs: Vec<f64> = deltas[fit_range.0..fit_range.1].iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = omegas[fit_range.0..fit_range.1].iter().map(|w| w.max(1e-300).ln()).collect();
    let (slope, intercept, rms_residual) =
        fit_line(&xs, &ys).ok_or_else(|| Error::NonConvergence("degenerate modulus fit".into()))?;
    Ok(ModulusTable {
        deltas,
        omegas,
        slope,
        intercept,
        rms_residual,
        fit_range,
        sample_count,
        seed,
    })
}

/// Cosine coefficients c_k of a 2 pi-periodic function, f ~ sum c_k cos(k t).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierCoefficients {
    /// (k, c_k), increasing k; k is stored as f64 so lacunary frequencies
    /// far beyond the integer range can be represented exactly (powers of 2).
    pub entries: Vec<(f64, f64)>,
}

impl FourierCoefficients {
    /// c_k for k = 0..=k_max from N uniform samples f(2 pi j / N), N a power
    /// of two and k_max <= N / 4.
    pub fn from_samples(samples: &[f64], k_max: usize) -> Result<Self> {
        let n = samples.len();
        if n < 4 || !n.is_power_of_two() {
            return domain("sample count must be a power of two >= 4");
        }
        if k_max > n / 4 {
            return domain(format!(
                "requested frequency {k_max} beyond N/4 = {} (aliasing margin)",
                n / 4
            ));
        }
        let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let entries = (0..=k_max)
            .map(|k| {
                let scale = if k == 0 { 1.0 } else { 2.0 };
                (k as f64, scale * buf[k].re / n as f64)
            })
            .collect();
        Ok(Self { entries })
    }

    /// Sample f at N uniform points of [0, 2 pi) and transform.
    pub fn from_function<F: Fn(f64) -> f64>(f: F, n: usize, k_max: usize) -> Result<Self> {
        let samples: Vec<f64> = (0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).collect();
        Self::from_samples(&samples, k_max)
    }

    /// Exact coefficients of a lacunary cosine series (c_{b^j} = a_j).
    pub fn from_lacunary(s: &LacunaryCosineSeries) -> Self {
        Self {
            entries: s.spectrum(),
        }
    }

    pub fn get(&self, k: f64) -> Option<f64> {
        self.entries.iter().find(|e| e.0 == k).map(|e| e.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayVerdict {
    Bounded,
    Growing,
}

/// C_m = max |c_k| k^alpha over the dyadic window 2^m <= k < 2^{m+1}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayWindow {
    pub m: u32,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayCertificate {
    pub alpha: f64,
    pub windows: Vec<DecayWindow>,
    /// Slope of log2 C_m against m over the trailing half of the windows.
    pub trailing_slope: f64,
    pub verdict: DecayVerdict,
}

/// Relative size below which coefficients are treated as zero.
pub const COEFFICIENT_FLOOR: f64 = 1e-10;

/// Growth of log2 C per window above which C is declared growing.
pub const GROWTH_SLOPE_THRESHOLD: f64 = 0.01;

/// Window-wise constants C with |c_k| <= C k^{-alpha}, and whether they grow.
pub fn fourier_decay_certificate(coeffs: &FourierCoefficients, alpha: f64) -> Result<DecayCertificate> {
    if !(alpha > 0.0) {
        return domain("decay exponent must be positive");
    }
    let max = coeffs.entries.iter().filter(|e| e.0 >= 1.0).map(|e| e.1.abs()).fold(0.0, f64::max);
    let mut windows: Vec<DecayWindow> = Vec::new();
    for &(k, c) in coeffs.entries.iter().filter(|e| e.0 >= 1.0) {
        if c.abs() < COEFFICIENT_FLOOR * max {
            continue;
        }
        let m = k.log2().floor() as u32;
        let value = c.abs() * k.powf(alpha);
        match windows.last_mut() {
            Some(w) if w.m == m => w.c = w.c.max(value),
            _ => windows.push(DecayWindow { m, c: value }),
        }
    }
    let take = (windows.len() / 2).max(4).min(windows.len());
    let trailing = &windows[windows.len() - take..];
    let trailing_slope = if trailing.len() >= 2 {
        let xs: Vec<f64> = trailing.iter().map(|w| w.m as f64).collect();
        let ys: Vec<f64> = trailing.iter().map(|w| w.c.log2()).collect();
        fit_line(&xs, &ys).map(|f| f.0).unwrap_or(0.0)
    } else {
        0.0
    };
    let verdict = if trailing.len() >= 4 && trailing_slope > GROWTH_SLOPE_THRESHOLD {
        DecayVerdict::Growing
    } else {
        DecayVerdict::Bounded
    };
    Ok(DecayCertificate {
        alpha,
        windows,
        trailing_slope,
        verdict,
    })
}
