//! One-dimensional lacunary cosine series (Weierstrass and Hardy type), the
//! explicit Hoelder constant, and lifts of ball series to the unit circle.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::series::{BallSeries, RadialMap, SeriesValue, SeriesVariant};
use crate::special::CompensatedSum;

/// Amplitude law of a lacunary cosine series sum a_j cos(b^j t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum AmplitudeLaw {
    /// a_j = b^{-j alpha}, summed from j = 0.
    Weierstrass { alpha: f64 },
    /// a_j = j^{-2}, summed from j = 1.
    Hardy,
}

/// sum_{j = start}^{start + terms - 1} a_j cos(b^j t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LacunaryCosineSeries {
    base: u32,
    law: AmplitudeLaw,
    start: u32,
    terms: u32,
}

impl LacunaryCosineSeries {
    pub fn weierstrass(base: u32, alpha: f64, terms: u32) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return domain("Weierstrass exponent alpha must lie in (0, 1)");
        }
        Self::new(base, AmplitudeLaw::Weierstrass { alpha }, 0, terms)
    }

    pub fn hardy(base: u32, terms: u32) -> Result<Self> {
        Self::new(base, AmplitudeLaw::Hardy, 1, terms)
    }

    fn new(base: u32, law: AmplitudeLaw, start: u32, terms: u32) -> Result<Self> {
        if base < 2 {
            return domain("lacunary base b must be an integer >= 2");
        }
        if let AmplitudeLaw::Weierstrass { alpha } = law {
            if !(alpha > 0.0 && alpha.is_finite()) {
                return domain("Weierstrass exponent must be positive");
            }
        }
        if law == AmplitudeLaw::Hardy && start == 0 {
            return domain("the Hardy law starts at j = 1");
        }
        Ok(Self {
            base,
            law,
            start,
            terms,
        })
    }

    /// Same amplitudes, summation starting at index `start`.
    pub fn starting_at(self, start: u32) -> Result<Self> {
        Self::new(self.base, self.law, start, self.terms)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn law(&self) -> AmplitudeLaw {
        self.law
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn terms(&self) -> u32 {
        self.terms
    }

    /// a_j.
    pub fn amplitude(&self, j: u32) -> f64 {
        match self.law {
            AmplitudeLaw::Weierstrass { alpha } => (-(j as f64) * alpha * (self.base as f64).ln()).exp(),
            AmplitudeLaw::Hardy => 1.0 / (j as f64 * j as f64),
        }
    }

    fn indices(&self) -> std::ops::Range<u32> {
        self.start..self.start + self.terms
    }

    /// Certified bound on the omitted terms sum_{j >= start + terms} a_j.
    pub fn tail_bound(&self) -> f64 {
        let first = self.start + self.terms;
        match self.law {
            AmplitudeLaw::Weierstrass { alpha } => {
                let q = (self.base as f64).powf(-alpha);
                self.amplitude(first) / (1.0 - q)
            }
            // sum_{j >= m} j^{-2} <= 1/(m - 1/2).
            AmplitudeLaw::Hardy => 1.0 / (first as f64 - 0.5),
        }
    }

    /// Truncated value.
    pub fn value(&self, t: f64) -> f64 {
        let mut acc = CompensatedSum::new();
        for j in self.indices() {
            acc.add(self.amplitude(j) * cos_sin_of_multiple(self.base, j, t).0);
        }
        acc.value()
    }

    /// Truncated value with certified tail bound.
    pub fn eval(&self, t: f64, tol: f64) -> SeriesValue {
        let tail = self.tail_bound();
        SeriesValue {
            value: self.value(t),
            tail_bound: tail,
            certified: true,
            warning: tail > tol,
        }
    }

    /// f(t + delta) - f(t) of the truncation, computed without cancellation
    /// as -2 sum a_j sin(b^j t + b^j delta / 2) sin(b^j delta / 2).
    pub fn increment(&self, t: f64, delta: f64) -> f64 {
        let mut acc = CompensatedSum::new();
        for j in self.indices() {
            let (c_t, s_t) = cos_sin_of_multiple(self.base, j, t);
            let (c_h, s_h) = cos_sin_of_multiple(self.base, j, 0.5 * delta);
            // sin(x + h) = sin x cos h + cos x sin h
            let mid = s_t * c_h + c_t * s_h;
            acc.add(-2.0 * self.amplitude(j) * mid * s_h);
        }
        acc.value()
    }

    /// Frequencies and amplitudes of the retained terms, with frequencies as
    /// f64 (exact for b^j < 2^53, and for every power of two).
    pub fn spectrum(&self) -> Vec<(f64, f64)> {
        self.indices()
            .map(|j| ((self.base as f64).powi(j as i32), self.amplitude(j)))
            .collect()
    }
}

/// (cos(b^j t), sin(b^j t)) with the product b^j t formed exactly enough
/// that only the final trigonometric evaluation rounds.
pub fn cos_sin_of_multiple(b: u32, j: u32, t: f64) -> (f64, f64) {
    if b.is_power_of_two() {
        // Scaling by a power of two is exact.
        let x = t * (b as f64).powi(j as i32);
        return (x.cos(), x.sin());
    }
    let Some(m) = (b as u128).checked_pow(j) else {
        let x = t * (b as f64).powi(j as i32);
        return (x.cos(), x.sin());
    };
    cos_sin_of_integer_multiple(m, t)
}

/// (cos(m t), sin(m t)) for an integer m: m is split into 26-bit digits so
/// each partial product t 2^{26 i} c_i is formed exactly (two-product), and
/// the angles are combined by complex multiplication.
fn cos_sin_of_integer_multiple(m: u128, t: f64) -> (f64, f64) {
    const DIGIT: u32 = 26;
    let mut re = 1.0f64;
    let mut im = 0.0f64;
    let mut rest = m;
    let mut scale = t;
    while rest > 0 {
        let c = (rest & ((1u128 << DIGIT) - 1)) as f64;
        if c != 0.0 {
            let p = scale * c;
            let e = scale.mul_add(c, -p);
            let (sp, cp) = p.sin_cos();
            let (se, ce) = e.sin_cos();
            let (cr, ci) = (cp * ce - sp * se, sp * ce + cp * se);
            let next_re = re * cr - im * ci;
            im = re * ci + im * cr;
            re = next_re;
        }
        rest >>= DIGIT;
        scale *= (1u64 << DIGIT) as f64;
    }
    (re, im)
}

/// C = 1/(1 - b^{alpha-1}) + 2/(1 - b^{-alpha}), a constant with
/// |f(t+delta) - f(t)| <= C |delta|^alpha for |delta| < 1 and the Weierstrass
/// function with base b and exponent alpha.
pub fn holder_bound_constant(b: u32, alpha: f64) -> Result<f64> {
    if b < 2 {
        return domain("base b must be an integer >= 2");
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain("alpha must lie in (0, 1)");
    }
    let bf = b as f64;
    Ok(1.0 / (1.0 - bf.powf(alpha - 1.0)) + 2.0 / (1.0 - bf.powf(-alpha)))
}

/// u(cos t, sin t, 0, ..., 0) for an interior ball series, with the tail
/// bound on the unit sphere.
pub fn circle_lift(u: &BallSeries, t: f64) -> Result<SeriesValue> {
    if u.radial() != RadialMap::Interior {
        return domain("circle lifts are taken of interior series");
    }
    let value = if u.is_highest_weight() {
        // Q_k(cos t, sin t, 0, ...) = cos(k t).
        let mut acc = CompensatedSum::new();
        for term in u.terms() {
            acc.add(term.a * cos_of_integer_multiple(term.k, t));
        }
        acc.value()
    } else {
        let mut x = vec![0.0; u.dim()];
        x[0] = t.cos();
        x[1] = t.sin();
        u.value_unchecked(&x)
    };
    let tail = u.tail_bound(1.0);
    Ok(SeriesValue {
        value,
        tail_bound: tail.bound,
        certified: tail.certified,
        warning: false,
    })
}

fn cos_of_integer_multiple(k: u64, t: f64) -> f64 {
    if k.is_power_of_two() {
        (t * k as f64).cos()
    } else {
        cos_sin_of_integer_multiple(k as u128, t).0
    }
}

/// The one-dimensional series whose values the circle lift of `u`
/// reproduces term by term, for the highest-weight dyadic constructions.
pub fn lifted_lacunary(u: &BallSeries) -> Option<LacunaryCosineSeries> {
    let terms = u.terms().len() as u32;
    let scale_one = (u.scale() - 1.0).abs() < 1e-15;
    if !scale_one || u.radial() != RadialMap::Interior {
        return None;
    }
    match u.variant() {
        SeriesVariant::NotCbeta => LacunaryCosineSeries::hardy(2, terms).ok(),
        SeriesVariant::AnynHolder { alpha } if alpha < 1.0 => LacunaryCosineSeries::weierstrass(2, alpha, terms)
            .ok()?
            .starting_at(1)
            .ok(),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::build_series;
    use std::f64::consts::PI;

    #[test]
    fn weierstrass_at_zero() {
        let w = LacunaryCosineSeries::weierstrass(2, 0.5, 80).unwrap();
        let v = w.eval(0.0, 1e-9);
        let want = 1.0 / (1.0 - 0.5f64.sqrt());
        assert!((v.value - want).abs() <= v.tail_bound + 1e-13);
        assert!((want - 3.414213562373095).abs() < 1e-12);
    }

    #[test]
    fn hardy_at_zero() {
        let h = LacunaryCosineSeries::hardy(2, 1000).unwrap();
        let v = h.eval(0.0, 1e-2);
        assert!((v.value - PI * PI / 6.0).abs() <= v.tail_bound);
        assert!(!v.warning);
    }

    #[test]
    fn periodic_for_integer_base() {
        // 2 pi itself rounds, so keep b^J |2 pi - fl(2 pi)| small.
        let w = LacunaryCosineSeries::weierstrass(3, 0.4, 20).unwrap();
        for t in [0.3, 1.7, -2.2] {
            assert!((w.value(t + 2.0 * PI) - w.value(t)).abs() < 1e-9);
        }
    }

    #[test]
    fn increments_match_differences() {
        let w = LacunaryCosineSeries::weierstrass(3, 0.3, 25).unwrap();
        // Dyadic t and delta keep t + delta exact.
        for (t, d) in [(0.375, 0.0009765625), (2.0, 0.25), (-1.0, 2f64.powi(-20))] {
            let direct = w.value(t + d) - w.value(t);
            assert!((w.increment(t, d) - direct).abs() < 1e-9);
        }
    }

    #[test]
    fn exact_multiples_for_odd_base() {
        // Reference values from 50-digit arithmetic on the f64 nearest 0.1.
        let (c, s) = cos_sin_of_multiple(3, 30, 0.1);
        assert!((c - 0.989_461_315_905_005_9).abs() < 1e-15);
        assert!((s + 0.144_797_459_672_240_7).abs() < 1e-15);
        let (c, _) = cos_sin_of_multiple(3, 60, 0.1);
        assert!((c + 0.236_597_002_769_136_1).abs() < 1e-15);
    }

    #[test]
    fn holder_constant_values() {
        let c = holder_bound_constant(2, 0.5).unwrap();
        assert!((c - 3.0 / (1.0 - 0.5f64.sqrt())).abs() < 1e-12);
        assert!((c - 10.2426).abs() < 1e-4);
        let mut prev = f64::INFINITY;
        for b in [2u32, 4, 16, 256, 65536] {
            let c = holder_bound_constant(b, 0.5).unwrap();
            assert!(c < prev && c > 3.0);
            prev = c;
        }
        assert!(holder_bound_constant(2, 1.0).is_err());
    }

    #[test]
    fn lifts_reproduce_one_dimensional_series() {
        let u = build_series(SeriesVariant::NotCbeta, 3, 1 << 12, 1.0).unwrap();
        let h = lifted_lacunary(&u).unwrap();
        let v = build_series(SeriesVariant::AnynHolder { alpha: 0.5 }, 4, 1 << 12, 1.0).unwrap();
        let w = lifted_lacunary(&v).unwrap();
        for i in 0..32 {
            let t = 0.2 * i as f64;
            assert!((circle_lift(&u, t).unwrap().value - h.value(t)).abs() < 1e-13);
            assert!((circle_lift(&v, t).unwrap().value - w.value(t)).abs() < 1e-13);
            let q = build_series(SeriesVariant::NotCbeta, 3, 8, 1.0).unwrap();
            let x = [t.cos(), t.sin(), 0.0];
            assert!((circle_lift(&q, t).unwrap().value - q.value_unchecked(&x)).abs() < 1e-13);
        }
    }
}
