//! One function per subcommand, each producing an [`Output`].

use std::f64::consts::PI;

use roughharm::regularity::fit_line;
use roughharm::transmission::Witness;
use roughharm::*;
use serde_json::{json, Value};
use std::result::Result;

use crate::args::*;
use crate::output::{Cell, Output};
use crate::CliError;

/// Largest truncation for which the disk energy quadrature is run.
pub const ENERGY_QUADRATURE_LIMIT: u64 = 4096;

/// Highest degree for which `spectrum` runs its projection.
pub const SPECTRUM_DEGREE_LIMIT: usize = 512;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn series_variant(a: &SeriesArgs) -> Result<SeriesVariant, CliError> {
    Ok(SeriesVariant::parse(&a.variant, a.seed, a.alpha)?)
}

pub fn dims(a: &DimsArgs) -> Result<Output, CliError> {
    let (lo, hi) = a.k;
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for k in lo..=hi {
        let d = harmonic_dimension(a.n, k)?;
        let mu = laplace_beltrami_eigenvalue(a.n, k);
        rows.push(vec![Cell::from(k), d.into(), mu.into()]);
        entries.push(json!({ "k": k, "d_k": d as f64, "mu_k": mu }));
    }
    Ok(Output {
        header: vec!["k", "d_k", "mu_k"],
        rows,
        json: json!({ "n": a.n, "rows": entries }),
    })
}

pub fn eval(a: &EvalArgs) -> Result<Output, CliError> {
    let base = build_series(series_variant(&a.series)?, a.series.n, a.series.k_max, a.series.scale)?;
    let u = if a.kelvin { base.kelvin_transform()? } else { base };
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for Point(p) in &a.points {
        if p.len() != a.series.n {
            return Err(usage(format!("point {p:?} does not have {} coordinates", a.series.n)));
        }
        let v = u.eval(p, a.tol)?;
        let coords = p.iter().map(|c| format!("{c:.16e}")).collect::<Vec<_>>().join(" ");
        rows.push(vec![
            Cell::from(coords),
            v.value.into(),
            v.tail_bound.into(),
            v.certified.into(),
            v.warning.into(),
        ]);
        entries.push(json!({ "point": p, "value": v }));
    }
    Ok(Output {
        header: vec!["point", "value", "tail_bound", "certified", "warning"],
        rows,
        json: json!({
            "variant": u.variant().name(),
            "n": u.dim(),
            "K": u.k_max(),
            "kelvin": a.kelvin,
            "values": entries,
        }),
    })
}

pub fn spectrum(a: &SpectrumArgs) -> Result<Output, CliError> {
    let s = &a.series;
    if !(s.n == 2 || s.n == 3) {
        return Err(usage("spectrum supports n = 2 and n = 3"));
    }
    let degree = a.degree.unwrap_or(s.k_max as usize);
    if degree > SPECTRUM_DEGREE_LIMIT {
        return Err(usage(format!("spectrum degree {degree} exceeds {SPECTRUM_DEGREE_LIMIT}")));
    }
    let u = build_series(series_variant(s)?, s.n, s.k_max, s.scale)?;
    let rule = build_sphere_quadrature(s.n, 2 * degree.max(1), QuadratureMode::Product, None)?;
    let coeffs = spectral_coefficients(|x| u.value_unchecked(x), s.n, degree, &rule)?;
    let exact = DegreeEnergies::from_series(&u);
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for k in 0..=degree {
        let measured = coeffs.degree_energy(k);
        let want = exact.entries.iter().find(|e| e.0 == k as u64).map_or(0.0, |e| e.1);
        rows.push(vec![Cell::from(k), measured.into(), want.into()]);
        entries.push(json!({ "k": k, "measured": measured, "exact": want }));
    }
    Ok(Output {
        header: vec!["k", "measured_energy", "exact_energy"],
        rows,
        json: json!({
            "variant": u.variant().name(),
            "n": s.n,
            "K": s.k_max,
            "quadrature_points": rule.len(),
            "degrees": entries,
        }),
    })
}

pub fn sobolev(a: &SobolevArgs) -> Result<Output, CliError> {
    let s = &a.series;
    if a.sigma.is_empty() {
        return Err(usage("--sigma needs at least one exponent"));
    }
    let energies = DegreeEnergies::from_variant(series_variant(s)?, s.n, s.k_max, s.scale)?;
    let settings = ClassifierSettings {
        min_blocks: a.min_blocks,
        min_r_squared: a.min_r_squared,
        ..ClassifierSettings::default()
    };
    let scans = classify_sobolev(&energies, &a.sigma, s.k_max, &settings)?;
    let mut rows = Vec::new();
    for scan in &scans {
        let verdict = serde_json::to_value(&scan.verdict)?;
        let verdict = verdict.as_str().unwrap_or_default().to_string();
        for b in &scan.blocks {
            rows.push(vec![
                Cell::from(scan.sigma),
                b.k.into(),
                b.s_k.into(),
                verdict.clone().into(),
                scan.fitted_exponent.into(),
                scan.limit_estimate.into(),
            ]);
        }
    }
    Ok(Output {
        header: vec!["sigma", "K", "S_K", "verdict", "fitted_exponent", "limit_estimate"],
        rows,
        json: json!({
            "variant": s.variant,
            "n": s.n,
            "K": s.k_max,
            "seed": s.seed,
            "scans": scans,
        }),
    })
}

pub fn energy(a: &EnergyArgs) -> Result<Output, CliError> {
    let alpha = a.alpha;
    let variant = SeriesVariant::parse(&a.variant, None, alpha)?;
    let k_max = match (a.terms, a.k_max) {
        (Some(j), _) => {
            if j == 0 {
                return Err(usage("--terms must be at least 1"));
            }
            match variant {
                // Terms sit at 4^0, 4^1, ...
                SeriesVariant::Hadamard2d => 4u64.checked_pow(j - 1),
                // Terms sit at 2^1, 2^2, ...
                _ => 2u64.checked_pow(j),
            }
            .ok_or_else(|| usage(format!("{j} terms overflow the degree range")))?
        }
        (None, Some(k)) => k,
        (None, None) => return Err(usage("energy needs --terms or --K")),
    };
    let u = build_series(variant, 2, k_max, 1.0)?;
    let formula = dirichlet_energy_2d(&u, k_max, EnergyMode::Formula)?;
    let quadrature = if a.formula_only || k_max > ENERGY_QUADRATURE_LIMIT {
        None
    } else {
        Some(dirichlet_energy_2d(&u, k_max, EnergyMode::Quadrature)?)
    };
    let terms = u.terms().len();
    let reference = matches!(variant, SeriesVariant::Hadamard2d).then(|| PI * terms as f64);
    Ok(Output {
        header: vec!["terms", "K", "formula", "quadrature", "reference"],
        rows: vec![vec![terms.into(), k_max.into(), formula.into(), quadrature.into(), reference.into()]],
        json: json!({
            "variant": variant.name(),
            "terms": terms,
            "k_max": k_max,
            "formula": formula,
            "quadrature": quadrature,
            "reference": reference,
        }),
    })
}

fn lacunary(a: &LacunaryArgs) -> Result<LacunaryCosineSeries, CliError> {
    Ok(match a.function {
        Lacunary::Weierstrass => LacunaryCosineSeries::weierstrass(a.b, a.alpha, a.terms)?,
        Lacunary::Hardy => LacunaryCosineSeries::hardy(a.b, a.terms)?,
    })
}

fn lacunary_json(a: &LacunaryArgs) -> Value {
    match a.function {
        Lacunary::Weierstrass => json!({ "function": "weierstrass", "b": a.b, "alpha": a.alpha, "terms": a.terms }),
        Lacunary::Hardy => json!({ "function": "hardy", "b": a.b, "terms": a.terms }),
    }
}

pub fn holder(a: &HolderArgs) -> Result<Output, CliError> {
    let f = lacunary(&a.series)?;
    let scales = dyadic_scales(a.finest, a.coarsest);
    let table = holder_modulus_with(|t, d| f.increment(t, d), (0.0, 2.0 * PI), &scales, a.samples, a.seed)?;
    let rows = table
        .deltas
        .iter()
        .zip(&table.omegas)
        .map(|(d, w)| vec![Cell::from(*d), (*w).into()])
        .collect();
    let constant = match a.series.function {
        Lacunary::Weierstrass => Some(holder_bound_constant(a.series.b, a.series.alpha)?),
        Lacunary::Hardy => None,
    };
    Ok(Output {
        header: vec!["delta", "omega"],
        rows,
        json: json!({ "series": lacunary_json(&a.series), "bound_constant": constant, "modulus": table }),
    })
}

pub fn fourier(a: &FourierArgs) -> Result<Output, CliError> {
    let f = lacunary(&a.series)?;
    let n = usize::try_from(a.samples).map_err(|_| usage("--N too large"))?;
    let coeffs = if a.exact {
        FourierCoefficients::from_lacunary(&f)
    } else {
        let k_max = match a.kmax {
            Some(k) => usize::try_from(k).map_err(|_| usage("--kmax too large"))?,
            None => n / 4,
        };
        FourierCoefficients::from_function(|t| f.value(t), n, k_max)?
    };
    let alphas = a.decay.clone().unwrap_or_else(|| match a.series.function {
        Lacunary::Weierstrass => vec![a.series.alpha],
        Lacunary::Hardy => vec![0.05, 0.1, 0.2],
    });
    let certificates = alphas
        .iter()
        .map(|&al| fourier_decay_certificate(&coeffs, al))
        .collect::<Result<Vec<_>, _>>()?;
    // Report the dyadic frequencies, where a lacunary spectrum lives.
    let rows = coeffs
        .entries
        .iter()
        .filter(|e| e.0 >= 1.0 && e.0.log2().fract() == 0.0)
        .map(|&(k, c)| vec![Cell::from(k), c.into()])
        .collect();
    Ok(Output {
        header: vec!["k", "c_k"],
        rows,
        json: json!({
            "series": lacunary_json(&a.series),
            "samples": if a.exact { Value::Null } else { json!(n) },
            "certificates": certificates,
        }),
    })
}

pub fn weierstrass(a: &WeierstrassArgs) -> Result<Output, CliError> {
    let f = lacunary(&a.series)?;
    let ts = match &a.t {
        Some(ts) => ts.clone(),
        None => (0..a.grid).map(|j| 2.0 * PI * j as f64 / a.grid as f64).collect(),
    };
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for &t in &ts {
        let v = f.eval(t, a.tol);
        rows.push(vec![Cell::from(t), v.value.into(), v.tail_bound.into(), v.warning.into()]);
        values.push(json!({ "t": t, "value": v }));
    }
    let constant = match a.series.function {
        Lacunary::Weierstrass => Some(holder_bound_constant(a.series.b, a.series.alpha)?),
        Lacunary::Hardy => None,
    };
    Ok(Output {
        header: vec!["t", "value", "tail_bound", "warning"],
        rows,
        json: json!({ "series": lacunary_json(&a.series), "bound_constant": constant, "values": values }),
    })
}

pub fn neuheisel(a: &NeuheiselArgs) -> Result<Output, CliError> {
    if a.seeds == 0 {
        return Err(usage("--seeds must be positive"));
    }
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for &k in &a.k {
        if k < 2 {
            return Err(usage(format!("degree {k} must be at least 2")));
        }
        let norm = (k as f64).ln().sqrt();
        let mut ratios = Vec::new();
        for seed in a.first_seed..a.first_seed + a.seeds {
            let y = random_unit_harmonic(a.n, k, seed)?;
            let sup = estimate_sup_norm(&y)?;
            let ratio = sup.value / norm;
            rows.push(vec![Cell::from(k), seed.into(), sup.value.into(), ratio.into()]);
            ratios.push(ratio);
        }
        ratios.sort_by(f64::total_cmp);
        let m = ratios.len();
        let median = if m % 2 == 1 { ratios[m / 2] } else { 0.5 * (ratios[m / 2 - 1] + ratios[m / 2]) };
        summary.push(json!({ "k": k, "median_ratio": median, "min_ratio": ratios[0], "max_ratio": ratios[m - 1] }));
    }
    // Fitted p in median sup ~ (ln k)^p, for reference.
    let trend = if summary.len() >= 2 {
        let xs: Vec<f64> = summary.iter().map(|s| (s["k"].as_f64().unwrap_or(2.0)).ln().ln()).collect();
        let ys: Vec<f64> = summary
            .iter()
            .zip(&xs)
            .map(|(s, x)| s["median_ratio"].as_f64().unwrap_or(1.0).ln() + 0.5 * x)
            .collect();
        fit_line(&xs, &ys).map(|f| f.0)
    } else {
        None
    };
    Ok(Output {
        header: vec!["k", "seed", "sup", "ratio"],
        rows,
        json: json!({ "n": a.n, "seeds": a.seeds, "first_seed": a.first_seed, "summary": summary, "log_exponent": trend }),
    })
}

/// Result of `transmission-verify`: the report plus its witnesses.
pub struct Verification {
    pub output: Output,
    pub pass: bool,
    pub witnesses: Vec<Witness>,
}

pub fn transmission_verify(a: &TransmissionArgs) -> Result<Verification, CliError> {
    let variant = TransmissionVariant::parse(&a.variant, a.seed, a.alpha)?;
    let inst = TransmissionInstance::new(variant, a.n, a.k_max, a.rho)?;
    let bumps = standard_bumps(a.n, a.bumps)?;
    let tol = VerifyTolerances {
        directions: a.directions,
        ..VerifyTolerances::default()
    };
    let report = verify_instance(&inst, &bumps, &tol)?;
    let mut witnesses = report.witnesses();
    if !report.pass && witnesses.is_empty() {
        // Every failure must point somewhere; name the failing checks.
        for c in report.conditions.iter().chain(std::iter::once(&report.monotone_inverse)).filter(|c| !c.pass) {
            witnesses.push(Witness {
                location: Vec::new(),
                value: c.residual,
                note: format!("{} residual above tolerance {:e}", c.name, c.tolerance),
            });
        }
        if !report.growth.pass {
            witnesses.push(Witness {
                location: Vec::new(),
                value: report.growth.min_slack_f.min(report.growth.min_slack_g),
                note: "growth certificate".into(),
            });
        }
    }
    let mut rows: Vec<Vec<Cell>> = report
        .conditions
        .iter()
        .chain(std::iter::once(&report.monotone_inverse))
        .map(|c| vec![Cell::from(c.name.as_str()), c.residual.into(), c.tolerance.into(), c.pass.into()])
        .collect();
    rows.push(vec![
        "growth".into(),
        report.growth.min_slack_f.min(report.growth.min_slack_g).into(),
        0.0.into(),
        report.growth.pass.into(),
    ]);
    let mut json = serde_json::to_value(&report)?;
    json["witnesses"] = serde_json::to_value(&witnesses)?;
    Ok(Verification {
        output: Output {
            header: vec!["condition", "residual", "tolerance", "pass"],
            rows,
            json,
        },
        pass: report.pass,
        witnesses,
    })
}
