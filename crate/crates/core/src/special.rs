//! Special functions: log-gamma, binomials, Gauss-Legendre nodes, Gegenbauer
//! polynomials and orthonormalised associated Legendre functions.

use crate::error::{domain, Error, Result};

/// Natural log of the gamma function for positive arguments.
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// ln Gamma(x + 1/2) - ln Gamma(x + 1) for x >= 0, without the
/// cancellation of a difference of two large log-gammas.
pub fn ln_gamma_half_ratio(x: f64) -> f64 {
    const SHIFT: f64 = 16.0;
    if x < SHIFT {
        // ratio(y + 1) = ratio(y) + ln((y + 1/2)/(y + 1)).
        let n = (SHIFT - x).ceil();
        let mut acc = ln_gamma_half_ratio(x + n);
        for i in 0..n as usize {
            acc -= (-0.5 / (x + i as f64 + 1.0)).ln_1p();
        }
        return acc;
    }
    // Asymptotic expansion: the Bernoulli-polynomial differences reduce to
    // (2^-m - 2) B_{m+1} for odd m.
    const BERNOULLI: [f64; 7] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
    ];
    let mut acc = -0.5 * x.ln();
    let inv = 1.0 / x;
    let mut pow = inv;
    for (i, b) in BERNOULLI.iter().enumerate() {
        let m = (2 * i + 1) as f64;
        acc += (0.5f64.powi(2 * i as i32 + 1) - 2.0) * b / (m * (m + 1.0)) * pow;
        pow *= inv * inv;
    }
    acc
}

/// Exact binomial coefficient, `None` on `u128` overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "Gauss-Legendre order must be positive");
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Gauss-Legendre rule mapped to [a, b].
pub fn gauss_legendre_on(order: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        x.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|v| half * v).collect(),
    )
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 1..n {
        let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Largest degree accepted by [`gegenbauer`].
pub const GEGENBAUER_MAX_DEGREE: usize = 1 << 14;

/// Gegenbauer polynomial C_k^(lambda)(x) by the three-term recurrence.
pub fn gegenbauer(k: usize, lambda: f64, x: f64) -> Result<f64> {
    if k > GEGENBAUER_MAX_DEGREE {
        return Err(Error::Domain(format!(
            "Gegenbauer degree {k} exceeds the supported maximum {GEGENBAUER_MAX_DEGREE}"
        )));
    }
    if lambda <= 0.0 {
        return domain("Gegenbauer parameter must be positive");
    }
    if k == 0 {
        return Ok(1.0);
    }
    let mut c0 = 1.0;
    let mut c1 = 2.0 * lambda * x;
    for m in 2..=k {
        let m_f = m as f64;
        let c2 = (2.0 * x * (m_f + lambda - 1.0) * c1 - (m_f + 2.0 * lambda - 2.0) * c0) / m_f;
        c0 = c1;
        c1 = c2;
    }
    Ok(c1)
}

/// log of int_{-1}^{1} C_k^(lambda)(t)^2 (1 - t^2)^(lambda - 1/2) dt.
pub fn ln_gegenbauer_norm_sq(k: usize, lambda: f64) -> f64 {
    let k_f = k as f64;
    std::f64::consts::PI.ln() + (1.0 - 2.0 * lambda) * std::f64::consts::LN_2 + ln_gamma(k_f + 2.0 * lambda)
        - ln_gamma(k_f + 1.0)
        - (k_f + lambda).ln()
        - 2.0 * ln_gamma(lambda)
}

/// Orthonormalised associated Legendre functions p_k^m(x), m = 0..=k, for a
/// single degree k. Normalised so that int_{-1}^{1} p_k^m(x)^2 dx = 1/(2 pi),
/// which makes p_k^0 and sqrt(2) p_k^m cos(m phi), sqrt(2) p_k^m sin(m phi)
/// orthonormal on S^2. No Condon-Shortley phase.
pub fn legendre_row(k: usize, x: f64) -> Vec<f64> {
    legendre_row_xs(k, x, (1.0 - x * x).max(0.0).sqrt())
}

/// Single orthonormalised associated Legendre value p_k^m, given x = cos and
/// s = sin of the polar angle (passing s separately keeps accuracy near the poles).
pub fn legendre_single_xs(k: usize, m: usize, x: f64, s: f64) -> f64 {
    assert!(m <= k, "order must not exceed degree");
    let mut pmm = 1.0 / (4.0 * std::f64::consts::PI).sqrt();
    for i in 1..=m {
        pmm *= ((2 * i + 1) as f64 / (2 * i) as f64).sqrt() * s;
    }
    recur_to_degree(k, m, x, pmm)
}

/// As [`legendre_row`] with the polar sine supplied.
pub fn legendre_row_xs(k: usize, x: f64, s: f64) -> Vec<f64> {
    let mut row = vec![0.0; k + 1];
    let mut pmm = 1.0 / (4.0 * std::f64::consts::PI).sqrt();
    for m in 0..=k {
        if m > 0 {
            pmm *= ((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * s;
        }
        if pmm == 0.0 {
            // Deep in the evanescent zone; remaining orders underflow too.
            break;
        }
        row[m] = recur_to_degree(k, m, x, pmm);
    }
    row
}

/// Triangular table p_l^m(x) for all 0 <= m <= l <= k_max, indexed
/// `table[l][m]`.
pub fn legendre_table(k_max: usize, x: f64) -> Vec<Vec<f64>> {
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut table: Vec<Vec<f64>> = (0..=k_max).map(|l| vec![0.0; l + 1]).collect();
    let mut pmm = 1.0 / (4.0 * std::f64::consts::PI).sqrt();
    for m in 0..=k_max {
        if m > 0 {
            pmm *= ((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * s;
        }
        table[m][m] = pmm;
        if m < k_max {
            let mut prev = pmm;
            let mut cur = ((2 * m + 3) as f64).sqrt() * x * pmm;
            table[m + 1][m] = cur;
            for l in (m + 2)..=k_max {
                let next = step(l, m, x, cur, prev);
                table[l][m] = next;
                prev = cur;
                cur = next;
            }
        }
    }
    table
}

fn recur_to_degree(k: usize, m: usize, x: f64, pmm: f64) -> f64 {
    if k == m {
        return pmm;
    }
    let mut prev = pmm;
    let mut cur = ((2 * m + 3) as f64).sqrt() * x * pmm;
    for l in (m + 2)..=k {
        let next = step(l, m, x, cur, prev);
        prev = cur;
        cur = next;
    }
    cur
}

#[inline]
fn step(l: usize, m: usize, x: f64, cur: f64, prev: f64) -> f64 {
    let l_f = l as f64;
    let m_f = m as f64;
    let a = ((4.0 * l_f * l_f - 1.0) / (l_f * l_f - m_f * m_f)).sqrt();
    let lm1 = l_f - 1.0;
    let b = ((lm1 * lm1 - m_f * m_f) / (4.0 * lm1 * lm1 - 1.0)).sqrt();
    a * (x * cur - b * prev)
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_ratio_matches_recurrence() {
        // Gamma(k + 1/2)/Gamma(k + 1) = sqrt(pi) prod_{i<k} (i + 1/2)/(i + 1)
        let mut r = std::f64::consts::PI.sqrt();
        for k in 0..40u32 {
            if k > 0 {
                r *= (k as f64 - 0.5) / k as f64;
            }
            let got = ln_gamma_half_ratio(k as f64).exp();
            assert!((got - r).abs() < 2e-15 * r, "k = {k}: {got} vs {r}");
        }
        // Large argument: ratio ~ x^{-1/2} (1 - 1/(8x) + ...)
        let x = 2f64.powi(40);
        let want = -0.5 * x.ln() - 1.0 / (8.0 * x);
        assert!((ln_gamma_half_ratio(x) - want).abs() < 1e-15 * want.abs());
    }
    use std::f64::consts::PI;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(xs), 2.0);
    }

    #[test]
    fn ln_gamma_matches_factorials() {
        let mut fact = 1.0f64;
        for n in 1..30u32 {
            fact *= n as f64;
            let rel = (ln_gamma(n as f64 + 1.0) - fact.ln()).abs() / fact.ln().max(1.0);
            assert!(rel < 1e-13, "n = {n}");
        }
        assert!((ln_gamma(0.5) - PI.sqrt().ln()).abs() < 1e-14);
    }

    #[test]
    fn binomial_small_and_overflow() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(60, 30), Some(118264581564861424));
        assert_eq!(binomial(3, 4), Some(0));
        assert_eq!(binomial(1000, 500), None);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for order in [1usize, 2, 5, 16, 64, 257] {
            let (x, w) = gauss_legendre(order);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            let deg = 2 * order - 1;
            let exact = if deg % 2 == 0 { 2.0 / (deg + 1) as f64 } else { 0.0 };
            let even = deg - (deg % 2);
            let got: f64 = x.iter().zip(&w).map(|(t, v)| v * t.powi(even as i32)).sum();
            let want = 2.0 / (even + 1) as f64;
            assert!((got - want).abs() < 1e-13, "order {order}: {got} vs {want}");
            let _ = exact;
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn gegenbauer_reduces_to_legendre_at_half() {
        // C_k^(1/2) = P_k
        let x = 0.3;
        let p3 = 0.5 * (5.0 * x * x * x - 3.0 * x);
        assert!((gegenbauer(3, 0.5, x).unwrap() - p3).abs() < 1e-15);
        assert!(gegenbauer(GEGENBAUER_MAX_DEGREE + 1, 0.5, x).is_err());
    }

    #[test]
    fn gegenbauer_norm_closed_form_against_quadrature() {
        let (x, w) = gauss_legendre(80);
        for (k, lambda) in [(3usize, 1.0), (7, 1.0), (5, 0.5)] {
            // lambda = 1: weight (1-t^2)^(1/2), handled by t = cos(phi)
            let num: f64 = if lambda == 1.0 {
                // int C^2 sqrt(1-t^2) dt = int_0^pi C(cos p)^2 sin^2 p dp
                let (p, pw) = gauss_legendre_on(80, 0.0, PI);
                p.iter()
                    .zip(&pw)
                    .map(|(t, v)| v * gegenbauer(k, lambda, t.cos()).unwrap().powi(2) * t.sin().powi(2))
                    .sum()
            } else {
                x.iter().zip(&w).map(|(t, v)| v * gegenbauer(k, lambda, *t).unwrap().powi(2)).sum()
            };
            let closed = ln_gegenbauer_norm_sq(k, lambda).exp();
            assert!((num - closed).abs() / closed < 1e-12, "k={k} lambda={lambda}");
        }
    }

    #[test]
    fn legendre_row_matches_table_and_normalisation() {
        let table = legendre_table(12, 0.37);
        let row = legendre_row(12, 0.37);
        for m in 0..=12 {
            assert!((table[12][m] - row[m]).abs() < 1e-14);
        }
        let (x, w) = gauss_legendre(40);
        for (l, m) in [(0usize, 0usize), (5, 0), (5, 3), (12, 12), (9, 4)] {
            let norm: f64 = x.iter().zip(&w).map(|(t, v)| v * legendre_table(l, *t)[l][m].powi(2)).sum();
            assert!((norm - 1.0 / (2.0 * PI)).abs() < 1e-13, "l={l} m={m}: {norm}");
        }
    }
}
