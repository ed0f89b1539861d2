//! Truncated ball series u(x) = sum a_k r^k Y_k(theta) with certified
//! truncation tails, their Kelvin transforms, and harmonicity diagnostics.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::field::Field;
use crate::harmonics::{complex_power, random_unit_harmonic, HarmonicFunction, HarmonicKind};
use crate::schedule::{CoefficientSchedule, ScheduleVariant};
use crate::sphere::QuadratureRule;

/// Which construction a series comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SeriesVariant {
    /// Inverse-square dyadic schedule with random unit harmonics (n = 2, 3).
    NotHs { seed: u64 },
    /// Inverse-square dyadic schedule with highest-weight harmonics.
    NotCbeta,
    /// Hoelder dyadic schedule 2^{-j alpha} with highest-weight harmonics.
    AnynHolder { alpha: f64 },
    /// a_{4^j} = 2^{-j} with cos(k t) on the disk.
    Hadamard2d,
    /// Explicit finite list of terms.
    Custom,
}

impl SeriesVariant {
    pub fn name(&self) -> &'static str {
        match self {
            SeriesVariant::NotHs { .. } => "notHs",
            SeriesVariant::NotCbeta => "notCbeta",
            SeriesVariant::AnynHolder { .. } => "anyn_holder",
            SeriesVariant::Hadamard2d => "hadamard_2d",
            SeriesVariant::Custom => "custom",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            SeriesVariant::NotHs { seed } => Some(*seed),
            _ => None,
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            SeriesVariant::AnynHolder { alpha } => Some(*alpha),
            _ => None,
        }
    }

    /// Parse a variant name with its optional parameters.
    pub fn parse(name: &str, seed: Option<u64>, alpha: Option<f64>) -> Result<Self> {
        let v = match name.parse::<VariantName>()? {
            VariantName::NotHs => SeriesVariant::NotHs {
                seed: seed.unwrap_or(0),
            },
            VariantName::NotCbeta => SeriesVariant::NotCbeta,
            VariantName::AnynHolder => SeriesVariant::AnynHolder {
                alpha: alpha.ok_or_else(|| Error::Invalid("variant anyn_holder needs alpha".into()))?,
            },
            VariantName::Hadamard2d => SeriesVariant::Hadamard2d,
            VariantName::Custom => SeriesVariant::Custom,
        };
        Ok(v)
    }
}

impl fmt::Display for SeriesVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VariantName {
    NotHs,
    NotCbeta,
    AnynHolder,
    Hadamard2d,
    Custom,
}

impl FromStr for VariantName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "noths" | "not_hs" => Ok(Self::NotHs),
            "notcbeta" | "not_cbeta" => Ok(Self::NotCbeta),
            "anyn_holder" | "holder" => Ok(Self::AnynHolder),
            "hadamard" | "hadamard_2d" => Ok(Self::Hadamard2d),
            "custom" => Ok(Self::Custom),
            other => Err(Error::Invalid(format!("unknown series variant '{other}'"))),
        }
    }
}

/// Radial profile of the terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialMap {
    /// r^k on the closed unit ball.
    Interior,
    /// r^{2-n-k} on 1 <= r <= outer radius.
    Kelvin,
}

/// One retained term a_k r^k Y_k.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTerm {
    pub k: u64,
    pub a: f64,
    pub harmonic: HarmonicFunction,
    /// Certified bound on sup |Y_k|.
    pub sup_bound: f64,
}

/// Bound on the omitted part of a series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub bound: f64,
    /// False when the bound rests on a typical-size estimate of random
    /// harmonics rather than a proof.
    pub certified: bool,
}

/// Truncated value with its tail bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
    pub certified: bool,
    /// Set when the tail bound exceeds the requested tolerance.
    pub warning: bool,
}

/// Radius below which tails exploit the geometric factor r^k.
pub const GEOMETRIC_TAIL_RADIUS: f64 = 0.99;

/// Slack on radial-range checks.
const RADIAL_SLACK: f64 = 1e-12;

/// A truncated series sum_{k <= K} a_k rho_k(r) Y_k(theta).
#[derive(Debug, Clone, PartialEq)]
pub struct BallSeries {
    dim: usize,
    variant: SeriesVariant,
    schedule: CoefficientSchedule,
    k_max: u64,
    terms: Vec<SeriesTerm>,
    radial: RadialMap,
    outer_radius: f64,
    highest_weight: bool,
    /// +1, or -1 after [`BallSeries::negated`].
    sign: f64,
}

/// Build one of the named series truncated at degree `k_max`.
pub fn build_series(variant: SeriesVariant, n: usize, k_max: u64, scale: f64) -> Result<BallSeries> {
    if n < 2 {
        return domain("series need n >= 2");
    }
    let incompatible = || Error::IncompatibleVariant {
        variant: variant.name().to_string(),
        n,
    };
    let schedule = match variant {
        SeriesVariant::NotHs { .. } => {
            if !(n == 2 || n == 3) {
                return Err(incompatible());
            }
            CoefficientSchedule::dyadic_inverse_square()
        }
        SeriesVariant::NotCbeta => CoefficientSchedule::dyadic_inverse_square(),
        SeriesVariant::AnynHolder { alpha } => CoefficientSchedule::dyadic_holder(alpha)?,
        SeriesVariant::Hadamard2d => {
            if n != 2 {
                return Err(incompatible());
            }
            CoefficientSchedule::hadamard()
        }
        SeriesVariant::Custom => {
            return Err(Error::Invalid(
                "custom series are built with BallSeries::custom".into(),
            ))
        }
    }
    .with_scale(scale)?;
    let terms = schedule
        .support(k_max)
        .into_iter()
        .map(|(k, a)| {
            let harmonic = match variant {
                SeriesVariant::NotHs { seed } => random_unit_harmonic(n, k as usize, seed)?,
                _ => HarmonicFunction::highest_weight(n, k as usize)?,
            };
            Ok(SeriesTerm {
                k,
                a,
                sup_bound: harmonic.sup_norm_bound(),
                harmonic,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BallSeries::assemble(n, variant, schedule, k_max, terms))
}

impl BallSeries {
    fn assemble(
        dim: usize,
        variant: SeriesVariant,
        schedule: CoefficientSchedule,
        k_max: u64,
        terms: Vec<SeriesTerm>,
    ) -> Self {
        let highest_weight = terms
            .iter()
            .all(|t| matches!(t.harmonic.kind(), HarmonicKind::HighestWeight));
        Self {
            dim,
            variant,
            schedule,
            k_max,
            terms,
            radial: RadialMap::Interior,
            outer_radius: 1.0,
            highest_weight,
            sign: 1.0,
        }
    }

    /// Finite series from explicit (k, a_k, Y_k) terms with distinct degrees.
    pub fn custom(n: usize, terms: Vec<(u64, f64, HarmonicFunction)>, scale: f64) -> Result<Self> {
        let mut terms = terms;
        terms.sort_by_key(|t| t.0);
        for t in &terms {
            if t.2.dim() != n || t.2.degree() as u64 != t.0 {
                return domain("custom term harmonic does not match its degree or dimension");
            }
        }
        let schedule = CoefficientSchedule::new(
            ScheduleVariant::Custom {
                terms: terms.iter().map(|t| (t.0, t.1)).collect(),
            },
            scale,
        )?;
        let k_max = terms.last().map(|t| t.0).unwrap_or(0);
        let terms = terms
            .into_iter()
            .map(|(k, a, harmonic)| SeriesTerm {
                k,
                a: a * scale,
                sup_bound: harmonic.sup_norm_bound(),
                harmonic,
            })
            .collect();
        Ok(Self::assemble(n, SeriesVariant::Custom, schedule, k_max, terms))
    }

    /// Finite series of highest-weight harmonics sum a_k Re(x_1 + i x_2)^k.
    pub fn custom_highest_weight(n: usize, terms: &[(u64, f64)], scale: f64) -> Result<Self> {
        let terms = terms
            .iter()
            .map(|&(k, a)| Ok((k, a, HarmonicFunction::highest_weight(n, k as usize)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::custom(n, terms, scale)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn variant(&self) -> SeriesVariant {
        self.variant
    }

    pub fn schedule(&self) -> &CoefficientSchedule {
        &self.schedule
    }

    pub fn scale(&self) -> f64 {
        self.schedule.scale
    }

    pub fn k_max(&self) -> u64 {
        self.k_max
    }

    pub fn terms(&self) -> &[SeriesTerm] {
        &self.terms
    }

    pub fn radial(&self) -> RadialMap {
        self.radial
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    /// True when every retained harmonic is Re(theta_1 + i theta_2)^k.
    pub fn is_highest_weight(&self) -> bool {
        self.highest_weight
    }

    /// Radial interval on which the series is evaluated.
    pub fn radial_range(&self) -> (f64, f64) {
        match self.radial {
            RadialMap::Interior => (0.0, 1.0),
            RadialMap::Kelvin => (1.0, self.outer_radius),
        }
    }

    /// Same series with every coefficient multiplied by rho > 0.
    pub fn scaled(&self, rho: f64) -> Result<Self> {
        let schedule = self.schedule.with_scale(self.schedule.scale * rho)?;
        let mut out = self.clone();
        out.schedule = schedule;
        for t in out.terms.iter_mut() {
            t.a *= rho;
        }
        Ok(out)
    }

    /// The series -u (tails and certificates are unchanged).
    pub fn negated(&self) -> Self {
        let mut out = self.clone();
        out.sign = -self.sign;
        for t in out.terms.iter_mut() {
            t.a = -t.a;
        }
        out
    }

    /// +1 or -1.
    pub fn sign(&self) -> f64 {
        self.sign
    }

    /// a_k Y_k(theta) for each retained term, theta on the unit sphere.
    pub fn angular_factors(&self, theta: &[f64]) -> Vec<f64> {
        if !self.highest_weight {
            return self.terms.iter().map(|t| t.a * t.harmonic.eval(theta)).collect();
        }
        let mut power = Complex64::new(1.0, 0.0);
        let mut exponent = 0u64;
        self.terms
            .iter()
            .map(|t| {
                power = if exponent > 0 && t.k == 2 * exponent {
                    power * power
                } else {
                    complex_power(theta[0], theta[1], t.k)
                };
                exponent = t.k;
                t.a * power.re
            })
            .collect()
    }

    /// Exponent e_k of the radial profile r^{e_k} of each term.
    fn radial_exponent(&self, k: u64) -> f64 {
        match self.radial {
            RadialMap::Interior => k as f64,
            RadialMap::Kelvin => 2.0 - self.dim as f64 - k as f64,
        }
    }

    /// Radial profiles r^{e_k} of the retained terms at radius r > 0, so that
    /// u(r theta) = sum angular_factors(theta) * radial_factors(r).
    pub fn radial_factors(&self, r: f64) -> Vec<f64> {
        let ln_r = r.ln();
        self.terms
            .iter()
            .map(|t| {
                let e = self.radial_exponent(t.k);
                if e == 0.0 {
                    1.0
                } else {
                    (e * ln_r).exp()
                }
            })
            .collect()
    }

    /// d/dr of the radial profiles at radius r > 0.
    pub fn radial_derivative_factors(&self, r: f64) -> Vec<f64> {
        let ln_r = r.ln();
        self.terms
            .iter()
            .map(|t| {
                let e = self.radial_exponent(t.k);
                if e == 0.0 {
                    0.0
                } else {
                    e * ((e - 1.0) * ln_r).exp()
                }
            })
            .collect()
    }

    /// Kelvin transform u*(x) = |x|^{2-n} u(x/|x|^2) on 1 <= r <= 2, term-wise
    /// r^k -> r^{2-n-k}. No sign is applied.
    pub fn kelvin_transform(&self) -> Result<Self> {
        self.kelvin_transform_to(2.0)
    }

    /// Kelvin transform valid up to the given outer radius.
    pub fn kelvin_transform_to(&self, outer_radius: f64) -> Result<Self> {
        if self.radial == RadialMap::Kelvin {
            return Err(Error::DoubleKelvin);
        }
        if !(outer_radius > 1.0 && outer_radius.is_finite()) {
            return domain("Kelvin outer radius must exceed 1");
        }
        let mut out = self.clone();
        out.radial = RadialMap::Kelvin;
        out.outer_radius = outer_radius;
        Ok(out)
    }

    /// Truncation to degrees <= k (tails are recomputed from the schedule).
    pub fn truncated(&self, k: u64) -> Self {
        let mut out = self.clone();
        out.k_max = k.min(self.k_max);
        // Dropped terms stay in the schedule, so tails account for them.
        out.terms.retain(|t| t.k <= k);
        out
    }

    fn check_radius(&self, r: f64) -> Result<()> {
        let (lo, hi) = self.radial_range();
        if r < lo - RADIAL_SLACK || r > hi + RADIAL_SLACK || !r.is_finite() {
            return Err(Error::OutsideRange { radius: r, lo, hi });
        }
        Ok(())
    }

    /// Value of the truncated series at x (no range check).
    pub fn value_unchecked(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().map(|c| c * c).sum();
        if self.highest_weight {
            return self.value_highest_weight(x, r2);
        }
        let r = r2.sqrt();
        if r == 0.0 {
            return self
                .terms
                .iter()
                .filter(|t| t.k == 0)
                .map(|t| t.a * t.harmonic.eval_extension(x))
                .sum();
        }
        let theta: Vec<f64> = x.iter().map(|c| c / r).collect();
        let ln_r = r.ln();
        let n = self.dim as f64;
        self.terms
            .iter()
            .map(|t| {
                let exponent = match self.radial {
                    RadialMap::Interior => t.k as f64,
                    RadialMap::Kelvin => 2.0 - n - t.k as f64,
                };
                let radial = if exponent == 0.0 { 1.0 } else { (exponent * ln_r).exp() };
                t.a * radial * t.harmonic.eval(&theta)
            })
            .sum()
    }

    fn value_highest_weight(&self, x: &[f64], r2: f64) -> f64 {
        let (z, prefactor) = match self.radial {
            RadialMap::Interior => (Complex64::new(x[0], x[1]), 1.0),
            RadialMap::Kelvin => (
                Complex64::new(x[0] / r2, x[1] / r2),
                r2.powf(0.5 * (2.0 - self.dim as f64)),
            ),
        };
        let mut power = Complex64::new(1.0, 0.0);
        let mut exponent = 0u64;
        let mut total = 0.0;
        for t in &self.terms {
            power = if exponent > 0 && t.k == 2 * exponent {
                power * power
            } else {
                complex_power(z.re, z.im, t.k)
            };
            exponent = t.k;
            total += t.a * power.re;
        }
        prefactor * total
    }

    /// Evaluate with a tail bound; warns when the bound exceeds `tol`.
    pub fn eval(&self, x: &[f64], tol: f64) -> Result<SeriesValue> {
        if x.len() != self.dim {
            return domain(format!("point has dimension {}, series has {}", x.len(), self.dim));
        }
        if !(tol > 0.0) {
            return domain("tolerance must be positive");
        }
        let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        self.check_radius(r)?;
        let tail = self.tail_bound(r.clamp(self.radial_range().0, self.radial_range().1));
        Ok(SeriesValue {
            value: self.value_unchecked(x),
            tail_bound: tail.bound,
            certified: tail.certified,
            warning: tail.bound > tol,
        })
    }

    /// log of a sup-norm bound for the degree-2^{log2k} harmonic family used
    /// by this series, with whether it is a certified bound.
    fn tail_weight_ln(&self, log2k: f64, certified_only: bool) -> (f64, bool) {
        match self.variant {
            SeriesVariant::NotHs { .. } => {
                if self.dim == 2 {
                    (-0.5 * PI.ln(), true)
                } else {
                    // d_k = 2k + 1 on S^2, in log form so huge k do not overflow.
                    let ln_d = (log2k + 1.0) * std::f64::consts::LN_2 + (-(log2k + 1.0)).exp2().ln_1p();
                    if certified_only {
                        (0.5 * (ln_d - (4.0 * PI).ln()), true)
                    } else {
                        (typical_sup_ln(ln_d), false)
                    }
                }
            }
            SeriesVariant::Custom => (
                self.terms
                    .iter()
                    .map(|t| t.sup_bound)
                    .fold(1.0f64, f64::max)
                    .ln(),
                true,
            ),
            _ => (0.0, true),
        }
    }

    /// Bound on the omitted terms at radius r (within the valid range).
    pub fn tail_bound(&self, r: f64) -> TailBound {
        let (r_eff, prefactor) = match self.radial {
            RadialMap::Interior => (r, 1.0),
            RadialMap::Kelvin => (1.0 / r, r.powf(2.0 - self.dim as f64)),
        };
        let mut tail = if let ScheduleVariant::Custom { terms } = &self.schedule.variant {
            // Custom terms beyond the truncation: explicit sum with |r^k| <= 1.
            let ln_w = self.tail_weight_ln(0.0, true).0;
            let bound = terms
                .iter()
                .filter(|t| t.0 > self.k_max)
                .map(|t| self.schedule.scale * t.1.abs() * ln_w.exp() * r_eff.min(1.0).powf(t.0 as f64))
                .sum();
            TailBound { bound, certified: true }
        } else if r_eff <= GEOMETRIC_TAIL_RADIUS {
            self.geometric_tail(r_eff)
        } else {
            self.boundary_tail()
        };
        tail.bound *= prefactor;
        tail
    }

    fn geometric_tail(&self, r: f64) -> TailBound {
        if r == 0.0 {
            return TailBound {
                bound: 0.0,
                certified: true,
            };
        }
        let ln_r = r.ln();
        let mut sum = 0.0;
        for (log2k, a) in self.schedule.tail_terms(self.k_max) {
            let k = log2k.exp2();
            let (ln_w, _) = self.tail_weight_ln(log2k, true);
            sum += (a.ln() + ln_w + k * ln_r).exp();
            if k * ln_r < -800.0 {
                // Later terms are below exp(-1600) times a polynomial factor.
                sum += 1e-300;
                break;
            }
        }
        TailBound {
            bound: sum,
            certified: true,
        }
    }

    fn boundary_tail(&self) -> TailBound {
        match self.variant {
            SeriesVariant::NotHs { .. } if self.dim == 3 => {
                // No finite certified bound exists at r = 1: sum the
                // typical-size estimate explicitly, then a power-law remainder.
                let mut sum = 0.0;
                let mut last_j = 0.0;
                for (count, (log2k, a)) in self.schedule.tail_terms(self.k_max).enumerate() {
                    if count >= 20_000 {
                        break;
                    }
                    sum += a * self.tail_weight_ln(log2k, false).0.exp();
                    last_j = log2k;
                }
                // a_j <= scale j^{-2}, weight <= c sqrt(j + 2) => remainder <= scale c 2 sqrt(2) / sqrt(J).
                let c = typical_sup_ln(std::f64::consts::LN_2).exp() / std::f64::consts::LN_2.sqrt();
                sum += self.schedule.scale * c * 2.0 * 2f64.sqrt() / last_j.max(1.0).sqrt();
                TailBound {
                    bound: sum,
                    certified: false,
                }
            }
            _ => {
                let w = self.tail_weight_ln(0.0, true).0.exp();
                TailBound {
                    bound: w * self.schedule.tail_abs_sum(self.k_max),
                    certified: true,
                }
            }
        }
    }

    /// Bound on sup |u| over the closed ball for the full (untruncated)
    /// series: sum |a_k| sup|Y_k|.
    pub fn normal_certificate(&self) -> TailBound {
        let head: f64 = self.terms.iter().map(|t| t.a.abs() * t.sup_bound).sum();
        match self.variant {
            SeriesVariant::NotHs { .. } if self.dim == 3 => {
                let head: f64 = self
                    .terms
                    .iter()
                    .map(|t| t.a.abs() * typical_sup_ln((2.0 * t.k as f64 + 1.0).ln()).exp())
                    .sum();
                let tail = self.boundary_tail();
                TailBound {
                    bound: head + tail.bound,
                    certified: false,
                }
            }
            SeriesVariant::Custom => TailBound {
                bound: head,
                certified: true,
            },
            _ => {
                let w = self.tail_weight_ln(0.0, true).0.exp();
                TailBound {
                    bound: w * self.schedule.abs_sum(),
                    certified: true,
                }
            }
        }
    }

    /// Serialise to the JSON series document.
    pub fn to_json(&self) -> Result<String> {
        let doc = self.document()?;
        serde_json::to_string_pretty(&doc).map_err(|e| Error::NotSerializable(e.to_string()))
    }

    /// The serialisable description of this series.
    pub fn document(&self) -> Result<SeriesDocument> {
        if self.variant == SeriesVariant::Custom && !self.highest_weight {
            return Err(Error::NotSerializable(
                "custom series with non-highest-weight harmonics cannot be reconstructed".into(),
            ));
        }
        Ok(SeriesDocument {
            dim: self.dim,
            variant: self.variant.name().to_string(),
            scale: self.schedule.scale,
            seed: self.variant.seed(),
            alpha: self.variant.alpha(),
            k_max: self.k_max,
            terms: self.terms.iter().map(|t| TermDocument { k: t.k, a: t.a }).collect(),
            radial: self.radial,
            outer_radius: (self.radial == RadialMap::Kelvin).then_some(self.outer_radius),
            sign: self.sign,
        })
    }

    /// Rebuild a series from its JSON document; harmonic factors are
    /// regenerated from the variant and seed.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SeriesDocument =
            serde_json::from_str(text).map_err(|e| Error::Invalid(format!("series JSON: {e}")))?;
        Self::from_document(&doc)
    }

    pub fn from_document(doc: &SeriesDocument) -> Result<Self> {
        let variant = SeriesVariant::parse(&doc.variant, doc.seed, doc.alpha)?;
        let base = if variant == SeriesVariant::Custom {
            let unscaled: Vec<(u64, f64)> = doc.terms.iter().map(|t| (t.k, t.a / (doc.scale * doc.sign))).collect();
            Self::custom_highest_weight(doc.dim, &unscaled, doc.scale)?
        } else {
            build_series(variant, doc.dim, doc.k_max, doc.scale)?
        };
        let base = if doc.sign < 0.0 { base.negated() } else { base };
        if base.terms.len() != doc.terms.len()
            || base
                .terms
                .iter()
                .zip(&doc.terms)
                .any(|(t, d)| t.k != d.k || (t.a - d.a).abs() > 1e-14 * t.a.abs().max(1e-300))
        {
            return Err(Error::Invalid(
                "series document terms disagree with the declared variant".into(),
            ));
        }
        match doc.radial {
            RadialMap::Interior => Ok(base),
            RadialMap::Kelvin => base.kelvin_transform_to(doc.outer_radius.unwrap_or(2.0)),
        }
    }
}

/// ln of the typical sup-norm size 2 sqrt(2 ln d / |S^2|) of a random unit
/// harmonic of dimension d on S^2 (an estimate, not a bound).
fn typical_sup_ln(ln_d: f64) -> f64 {
    (2.0 * (2.0 * ln_d.max(1.0) / (4.0 * PI)).sqrt()).ln()
}

impl Field for BallSeries {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.value_unchecked(x)
    }

    fn radial_range(&self) -> (f64, f64) {
        BallSeries::radial_range(self)
    }

    fn laplacian_scale(&self) -> f64 {
        let s: f64 = self
            .terms
            .iter()
            .map(|t| t.a.abs() * t.sup_bound * (t.k as f64).powi(2))
            .sum();
        if s > 0.0 {
            s
        } else {
            1.0
        }
    }
}

/// JSON form of a series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesDocument {
    pub dim: usize,
    pub variant: String,
    pub scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub k_max: u64,
    pub terms: Vec<TermDocument>,
    pub radial: RadialMap,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_radius: Option<f64>,
    /// -1 for a negated series.
    #[serde(default = "unit_sign", skip_serializing_if = "is_unit_sign")]
    pub sign: f64,
}

fn unit_sign() -> f64 {
    1.0
}

fn is_unit_sign(s: &f64) -> bool {
    *s == 1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermDocument {
    pub k: u64,
    pub a: f64,
}

/// Result of a finite-difference Laplacian test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicityReport {
    /// max |Delta_h u| / laplacian_scale over the points.
    pub max_relative_residual: f64,
    pub max_abs_residual: f64,
    pub worst_point: Vec<f64>,
    pub step: f64,
}

impl HarmonicityReport {
    /// Whether the relative residual is within `tol`.
    pub fn is_harmonic(&self, tol: f64) -> bool {
        self.max_relative_residual <= tol
    }
}

/// Apply the (2n+1)-point Laplacian stencil with step h at each point.
pub fn check_harmonic_fd<F: Field + ?Sized>(u: &F, points: &[Vec<f64>], h: f64) -> Result<HarmonicityReport> {
    if !(h > 0.0) {
        return domain("stencil step must be positive");
    }
    let (lo, hi) = u.radial_range();
    let n = u.dim();
    let scale = u.laplacian_scale();
    let mut report = HarmonicityReport {
        max_relative_residual: 0.0,
        max_abs_residual: 0.0,
        worst_point: Vec::new(),
        step: h,
    };
    let mut y = vec![0.0; n];
    for x in points {
        if x.len() != n {
            return domain("stencil point has the wrong dimension");
        }
        let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        if r > hi - 2.0 * h || (lo > 0.0 && r < lo + 2.0 * h) {
            return Err(Error::OutsideRange {
                radius: r,
                lo: lo + if lo > 0.0 { 2.0 * h } else { 0.0 },
                hi: hi - 2.0 * h,
            });
        }
        let centre = u.value(x);
        let mut lap = 0.0;
        for i in 0..n {
            y.copy_from_slice(x);
            y[i] = x[i] + h;
            let plus = u.value(&y);
            y[i] = x[i] - h;
            let minus = u.value(&y);
            lap += plus + minus - 2.0 * centre;
        }
        lap /= h * h;
        if lap.abs() >= report.max_abs_residual {
            report.max_abs_residual = lap.abs();
            report.worst_point = x.clone();
        }
        report.max_relative_residual = report.max_relative_residual.max(lap.abs() / scale);
    }
    Ok(report)
}

/// |average of u over the sphere of given centre and radius - u(centre)|.
pub fn mean_value_check<F: Field + ?Sized>(
    u: &F,
    center: &[f64],
    radius: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    let n = u.dim();
    if center.len() != n || rule.dim() != n {
        return domain("mean-value check dimension mismatch");
    }
    if !(radius > 0.0) {
        return domain("mean-value radius must be positive");
    }
    let (lo, hi) = u.radial_range();
    let c = center.iter().map(|v| v * v).sum::<f64>().sqrt();
    if c + radius > hi + RADIAL_SLACK || (lo > 0.0 && c - radius < lo - RADIAL_SLACK) {
        return Err(Error::OutsideRange {
            radius: c + radius,
            lo,
            hi,
        });
    }
    let area: f64 = rule.weights().iter().sum();
    let mut y = vec![0.0; n];
    let avg = rule.integrate(|theta| {
        for i in 0..n {
            y[i] = center[i] + radius * theta[i];
        }
        u.value(&y)
    }) / area;
    Ok((avg - u.value(center)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FnField;
    use crate::sphere::{build_sphere_quadrature, QuadratureMode, SpherePoint};

    #[test]
    fn support_counts() {
        let u = build_series(SeriesVariant::NotCbeta, 3, 1 << 10, 1.0).unwrap();
        assert_eq!(u.terms().len(), 10);
        assert_eq!(u.terms()[0].k, 2);
        assert!(build_series(SeriesVariant::Hadamard2d, 3, 16, 1.0).is_err());
        assert!(build_series(SeriesVariant::NotHs { seed: 1 }, 4, 16, 1.0).is_err());
    }

    #[test]
    fn certificates() {
        let u = build_series(SeriesVariant::NotCbeta, 3, 1 << 10, 1.0).unwrap();
        assert!((u.normal_certificate().bound - PI * PI / 6.0).abs() < 1e-14);
        let v = build_series(SeriesVariant::AnynHolder { alpha: 0.5 }, 3, 1 << 10, 1.0).unwrap();
        assert!((v.normal_certificate().bound - 1.0 / (2f64.sqrt() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn boundary_values_at_e1() {
        let e1 = SpherePoint::e1(3).unwrap();
        let u = build_series(SeriesVariant::NotCbeta, 3, 1 << 20, 1.0).unwrap();
        let v = u.eval(e1.coords(), 1.0).unwrap();
        assert!((v.value - PI * PI / 6.0).abs() <= v.tail_bound);
        assert!(v.certified);
        let h = build_series(SeriesVariant::AnynHolder { alpha: 0.5 }, 3, 1 << 40, 1.0).unwrap();
        let v = h.eval(e1.coords(), 1e-3).unwrap();
        assert!((v.value - 1.0 / (2f64.sqrt() - 1.0)).abs() <= v.tail_bound + 1e-13);
        assert!(!v.warning);
    }

    #[test]
    fn origin_value_and_range() {
        let u = BallSeries::custom_highest_weight(3, &[(0, 2.5), (3, 1.0)], 1.0).unwrap();
        assert_eq!(u.eval(&[0.0, 0.0, 0.0], 1.0).unwrap().value, 2.5);
        assert!(matches!(
            u.eval(&[1.5, 0.0, 0.0], 1.0),
            Err(Error::OutsideRange { .. })
        ));
    }

    #[test]
    fn kelvin_exponents() {
        let u = BallSeries::custom_highest_weight(3, &[(1, 0.7)], 1.0).unwrap();
        let k = u.kelvin_transform().unwrap();
        let x = [2.0 * 0.6, 2.0 * 0.8, 0.0];
        let want = 0.7 * 0.25 * 0.6;
        assert!((k.value_unchecked(&x) - want).abs() < 1e-15);
        assert!(matches!(k.kelvin_transform(), Err(Error::DoubleKelvin)));
        let d = BallSeries::custom_highest_weight(2, &[(3, 1.0)], 1.0).unwrap().kelvin_transform().unwrap();
        let t: f64 = 0.4;
        let r: f64 = 1.7;
        let got = d.value_unchecked(&[r * t.cos(), r * t.sin()]);
        assert!((got - r.powi(-3) * (3.0 * t).cos()).abs() < 1e-14);
    }

    #[test]
    fn kelvin_agrees_on_unit_sphere_for_random_terms() {
        let u = build_series(SeriesVariant::NotHs { seed: 3 }, 3, 64, 1.0).unwrap();
        let k = u.kelvin_transform().unwrap();
        let q = build_sphere_quadrature(3, 6, QuadratureMode::Product, None).unwrap();
        for x in q.nodes() {
            assert!((u.value_unchecked(x) - k.value_unchecked(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn fd_residuals() {
        let affine = FnField::new(3, |x: &[f64]| 0.125 + 0.5 * x[0] - 0.25 * x[2]);
        let pts = vec![vec![0.1, 0.2, 0.3], vec![-0.4, 0.1, 0.0]];
        assert!(check_harmonic_fd(&affine, &pts, 1e-3).unwrap().max_abs_residual <= 1e-10);
        let quad = BallSeries::custom_highest_weight(3, &[(2, 1.0)], 1.0).unwrap();
        assert!(check_harmonic_fd(&quad, &pts, 1e-3).unwrap().max_relative_residual <= 1e-8);
        let sq = FnField::new(3, |x: &[f64]| x.iter().map(|c| c * c).sum());
        let rep = check_harmonic_fd(&sq, &pts, 1e-3).unwrap();
        assert!((rep.max_abs_residual - 6.0).abs() < 1e-6);
        assert!(!rep.is_harmonic(1e-4));
        let bounded = FnField::new(3, |x: &[f64]| x[0]).with_range(0.0, 1.0);
        assert!(check_harmonic_fd(&bounded, &[vec![0.999, 0.0, 0.0]], 1e-3).is_err());
    }

    #[test]
    fn mean_values() {
        let q = build_sphere_quadrature(3, 12, QuadratureMode::Product, None).unwrap();
        let c = FnField::new(3, |_: &[f64]| 4.0);
        assert!(mean_value_check(&c, &[0.1, 0.0, 0.0], 0.5, &q).unwrap() < 1e-14);
        let sq = FnField::new(3, |x: &[f64]| x.iter().map(|c| c * c).sum());
        assert!((mean_value_check(&sq, &[0.0; 3], 0.3, &q).unwrap() - 0.09).abs() < 1e-14);
        let u = build_series(SeriesVariant::NotCbeta, 3, 4, 1.0).unwrap();
        assert!(mean_value_check(&u, &[0.1, 0.2, 0.0], 0.6, &q).unwrap() < 1e-12);
        assert!(mean_value_check(&u, &[0.5, 0.0, 0.0], 0.6, &q).is_err());
    }

    #[test]
    fn json_round_trip() {
        let u = build_series(SeriesVariant::NotHs { seed: 7 }, 2, 256, 0.5).unwrap();
        let back = BallSeries::from_json(&u.to_json().unwrap()).unwrap();
        assert_eq!(back, u);
        let k = build_series(SeriesVariant::AnynHolder { alpha: 0.3 }, 4, 64, 1.0)
            .unwrap()
            .kelvin_transform()
            .unwrap();
        assert_eq!(BallSeries::from_json(&k.to_json().unwrap()).unwrap(), k);
        let c = BallSeries::custom_highest_weight(3, &[(1, 2.0), (5, -1.0)], 0.25).unwrap();
        assert_eq!(BallSeries::from_json(&c.to_json().unwrap()).unwrap(), c);
        let z = HarmonicFunction::zonal(3, 2, SpherePoint::e1(3).unwrap()).unwrap();
        let bad = BallSeries::custom(3, vec![(2, 1.0, z)], 1.0).unwrap();
        assert!(matches!(bad.to_json(), Err(Error::NotSerializable(_))));
    }
}
