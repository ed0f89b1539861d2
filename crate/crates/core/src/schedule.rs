//! Sparse coefficient schedules {a_k} supported on dyadic or 4-adic degrees.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// The coefficient law of a schedule (before the scale multiplier).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum ScheduleVariant {
    /// a_k = j^{-2} at k = 2^j, j >= 1.
    DyadicInverseSquare,
    /// a_k = 2^{-j alpha} at k = 2^j, j >= 1.
    DyadicHolder { alpha: f64 },
    /// a_k = 2^{-j} at k = 2^{2j}, j >= 0.
    Hadamard,
    /// Finite list of (k, a_k), strictly increasing in k.
    Custom { terms: Vec<(u64, f64)> },
}

/// A coefficient schedule times a positive scale factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSchedule {
    pub variant: ScheduleVariant,
    pub scale: f64,
}

/// Largest schedule index j handled explicitly (k = 2^j must fit in u64).
pub const MAX_INDEX: u32 = 62;

impl CoefficientSchedule {
    pub fn new(variant: ScheduleVariant, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return domain("schedule scale must be a positive finite number");
        }
        match &variant {
            ScheduleVariant::DyadicHolder { alpha } if !(*alpha > 0.0 && alpha.is_finite()) => {
                return domain("Hoelder schedule needs alpha > 0");
            }
            ScheduleVariant::Custom { terms } => {
                if terms.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return domain("custom schedule degrees must be strictly increasing");
                }
                if terms.iter().any(|t| !t.1.is_finite()) {
                    return domain("custom coefficients must be finite");
                }
            }
            _ => {}
        }
        Ok(Self { variant, scale })
    }

    pub fn dyadic_inverse_square() -> Self {
        Self {
            variant: ScheduleVariant::DyadicInverseSquare,
            scale: 1.0,
        }
    }

    pub fn dyadic_holder(alpha: f64) -> Result<Self> {
        Self::new(ScheduleVariant::DyadicHolder { alpha }, 1.0)
    }

    pub fn hadamard() -> Self {
        Self {
            variant: ScheduleVariant::Hadamard,
            scale: 1.0,
        }
    }

    pub fn custom(terms: Vec<(u64, f64)>) -> Result<Self> {
        Self::new(ScheduleVariant::Custom { terms }, 1.0)
    }

    pub fn with_scale(&self, scale: f64) -> Result<Self> {
        Self::new(self.variant.clone(), scale)
    }

    /// First schedule index (j) carrying a coefficient.
    fn first_index(&self) -> u32 {
        match self.variant {
            ScheduleVariant::Hadamard => 0,
            _ => 1,
        }
    }

    /// Degree and unscaled coefficient of the j-th support point, for the
    /// lacunary variants.
    fn law(&self, j: u32) -> Option<(u64, f64)> {
        match &self.variant {
            ScheduleVariant::DyadicInverseSquare => {
                (1..=MAX_INDEX).contains(&j).then(|| (1u64 << j, 1.0 / (j as f64 * j as f64)))
            }
            ScheduleVariant::DyadicHolder { alpha } => {
                (1..=MAX_INDEX).contains(&j).then(|| (1u64 << j, (-(j as f64) * alpha * std::f64::consts::LN_2).exp()))
            }
            ScheduleVariant::Hadamard => {
                (2 * j <= MAX_INDEX).then(|| (1u64 << (2 * j), 0.5f64.powi(j as i32)))
            }
            ScheduleVariant::Custom { .. } => None,
        }
    }

    /// Scaled coefficient a_k (zero off the support).
    pub fn coefficient(&self, k: u64) -> f64 {
        match &self.variant {
            ScheduleVariant::Custom { terms } => terms
                .binary_search_by_key(&k, |t| t.0)
                .map(|i| self.scale * terms[i].1)
                .unwrap_or(0.0),
            _ => {
                if k == 0 || !k.is_power_of_two() {
                    return 0.0;
                }
                let e = k.trailing_zeros();
                let j = match self.variant {
                    ScheduleVariant::Hadamard if e.is_multiple_of(2) => e / 2,
                    ScheduleVariant::Hadamard => return 0.0,
                    _ => e,
                };
                self.law(j).map(|(_, a)| self.scale * a).unwrap_or(0.0)
            }
        }
    }

    /// Nonzero (k, a_k) with k <= k_max, increasing in k, scaled.
    pub fn support(&self, k_max: u64) -> Vec<(u64, f64)> {
        match &self.variant {
            ScheduleVariant::Custom { terms } => terms
                .iter()
                .filter(|t| t.0 <= k_max && t.1 != 0.0)
                .map(|&(k, a)| (k, self.scale * a))
                .collect(),
            _ => (self.first_index()..=MAX_INDEX)
                .map_while(|j| self.law(j))
                .take_while(|&(k, _)| k <= k_max)
                .map(|(k, a)| (k, self.scale * a))
                .collect(),
        }
    }

    /// (log2 k, scaled |a_k|) for the support strictly beyond `k_max`, in
    /// increasing k. Unbounded for the lacunary laws; degrees are reported
    /// by their base-2 logarithm so they may exceed the u64 range.
    pub fn tail_terms(&self, k_max: u64) -> Box<dyn Iterator<Item = (f64, f64)> + '_> {
        let scale = self.scale;
        match &self.variant {
            ScheduleVariant::Custom { terms } => Box::new(
                terms
                    .iter()
                    .filter(move |t| t.0 > k_max)
                    .map(move |&(k, a)| ((k as f64).log2(), scale * a.abs())),
            ),
            ScheduleVariant::DyadicInverseSquare => {
                let j0 = first_beyond(k_max, 1);
                Box::new((j0..).map(move |j| (j as f64, scale / (j as f64 * j as f64))))
            }
            ScheduleVariant::DyadicHolder { alpha } => {
                let alpha = *alpha;
                let j0 = first_beyond(k_max, 1);
                Box::new((j0..).map(move |j| (j as f64, scale * (-(j as f64) * alpha * std::f64::consts::LN_2).exp())))
            }
            ScheduleVariant::Hadamard => {
                let j0 = first_beyond_hadamard(k_max);
                Box::new((j0..).map(move |j| (2.0 * j as f64, scale * 0.5f64.powi(j as i32))))
            }
        }
    }

    /// Certified bound on sum_{k > k_max} |a_k|.
    pub fn tail_abs_sum(&self, k_max: u64) -> f64 {
        let s = self.scale;
        match &self.variant {
            ScheduleVariant::Custom { terms } => {
                terms.iter().filter(|t| t.0 > k_max).map(|t| s * t.1.abs()).sum()
            }
            ScheduleVariant::DyadicInverseSquare => {
                // sum_{j > J} j^{-2} <= 1/(J + 1/2) by convexity of x^{-2}.
                let last = first_beyond(k_max, 1) - 1;
                s / (last as f64 + 0.5)
            }
            ScheduleVariant::DyadicHolder { alpha } => {
                let last = first_beyond(k_max, 1) - 1;
                s * (-(last as f64) * alpha * std::f64::consts::LN_2).exp() / (2f64.powf(*alpha) - 1.0)
            }
            ScheduleVariant::Hadamard => {
                let next = first_beyond_hadamard(k_max);
                s * 2.0 * 0.5f64.powi(next as i32)
            }
        }
    }

    /// sum_k |a_k| over the whole (infinite) schedule.
    pub fn abs_sum(&self) -> f64 {
        let s = self.scale;
        match &self.variant {
            ScheduleVariant::DyadicInverseSquare => s * std::f64::consts::PI.powi(2) / 6.0,
            ScheduleVariant::DyadicHolder { alpha } => s / (2f64.powf(*alpha) - 1.0),
            ScheduleVariant::Hadamard => 2.0 * s,
            ScheduleVariant::Custom { terms } => terms.iter().map(|t| s * t.1.abs()).sum(),
        }
    }

    /// Short name used in JSON documents.
    pub fn law_name(&self) -> &'static str {
        match self.variant {
            ScheduleVariant::DyadicInverseSquare => "dyadic_inverse_square",
            ScheduleVariant::DyadicHolder { .. } => "dyadic_holder",
            ScheduleVariant::Hadamard => "hadamard",
            ScheduleVariant::Custom { .. } => "custom",
        }
    }
}

/// Smallest j >= j_min with 2^j > k_max.
fn first_beyond(k_max: u64, j_min: u32) -> u32 {
    let j = if k_max == 0 { 0 } else { 64 - k_max.leading_zeros() };
    j.max(j_min)
}

/// Smallest j >= 0 with 4^j > k_max.
fn first_beyond_hadamard(k_max: u64) -> u32 {
    let mut j = 0u32;
    while j < 32 && (1u64 << (2 * j)) <= k_max {
        j += 1;
    }
    j
}
