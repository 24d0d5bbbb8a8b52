//! Least-squares extraction of small-time expansion coefficients from sampled
//! heat traces, and coefficientwise comparison of series.

use crate::error::{Error, Result};
use crate::geometry::AsymptoticSeries;
use crate::numkit::Scalar;
use crate::spectra::{heat_trace_grid, Spectrum};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Row weighting of the least-squares problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    /// Plain residuals.
    None,
    /// Residuals divided by the data value.
    #[default]
    Relative,
}

/// Sampling grid and model basis `t^(n/2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    /// Strictly decreasing positive sample times.
    pub t_grid: Vec<f64>,
    /// Distinct exponents `n` of the basis functions `t^(n/2)`.
    pub exponents: Vec<i32>,
    pub weighting: Weighting,
    /// Largest acceptable condition number of the scaled design matrix.
    pub condition_cap: f64,
}

/// Default condition cap, inside the backward-stable range of Householder QR.
pub const DEFAULT_CONDITION_CAP: f64 = 1e8;

/// `n` log-spaced points from `t_max` down to `t_min`.
pub fn log_grid(t_min: f64, t_max: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![t_max];
    }
    let (a, b) = (t_max.ln(), t_min.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

impl FitConfig {
    pub fn new(t_grid: Vec<f64>, exponents: Vec<i32>) -> Self {
        Self {
            t_grid,
            exponents,
            weighting: Weighting::Relative,
            condition_cap: DEFAULT_CONDITION_CAP,
        }
    }

    /// Round sphere: `[0.02, 0.2]`, 15 points, exponents `{-2, 0, 2, 4}`.
    pub fn sphere_default() -> Self {
        Self::new(log_grid(0.02, 0.2, 15), vec![-2, 0, 2, 4])
    }

    /// Lune: `[0.001, 0.01]`, 15 points, exponents `-2..=4`. The lune
    /// coefficients grow roughly like `k^n`, so the window sits lower than
    /// for the sphere.
    pub fn lune_default() -> Self {
        Self::new(log_grid(0.001, 0.01, 15), (-2..=4).collect())
    }

    pub fn validate(&self) -> Result<()> {
        let need = self.exponents.len() + 2;
        if self.t_grid.len() < need {
            return Err(Error::InsufficientSamples {
                have: self.t_grid.len(),
                need,
            });
        }
        if self.t_grid.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::Domain("sample times must be positive".into()));
        }
        if self.t_grid.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Domain(
                "sample times must be strictly decreasing".into(),
            ));
        }
        let distinct: BTreeSet<_> = self.exponents.iter().collect();
        if distinct.len() != self.exponents.len() || self.exponents.is_empty() {
            return Err(Error::Domain(
                "exponents must be distinct and nonempty".into(),
            ));
        }
        if !(self.condition_cap > 1.0) {
            return Err(Error::Domain("condition cap must exceed 1".into()));
        }
        Ok(())
    }
}

/// Fitted coefficients with diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// Coefficient of `t^(n/2)` keyed by `n`.
    pub coefficients: BTreeMap<i32, f64>,
    /// Relative RMS misfit in the fitted norm: RMS of `(model - data)/data`
    /// for relative weighting, `|model - data| / |data|` otherwise.
    pub residual_norm: f64,
    /// 2-norm condition number of the column-scaled design matrix.
    pub condition_estimate: f64,
}

impl FitResult {
    pub fn coeff(&self, n: i32) -> Option<f64> {
        self.coefficients.get(&n).copied()
    }
}

/// Solves `value ~ sum_n c_n t^(n/2)` by Householder QR on the weighted,
/// column-scaled design matrix. The sample times are taken from `samples`;
/// the configuration supplies the basis, weighting and conditioning cap.
pub fn fit_series(samples: &[(f64, f64)], config: &FitConfig) -> Result<FitResult> {
    let need = config.exponents.len() + 2;
    if samples.len() < need {
        return Err(Error::InsufficientSamples {
            have: samples.len(),
            need,
        });
    }
    if samples
        .iter()
        .any(|(t, v)| !(t.is_finite() && *t > 0.0 && v.is_finite()))
    {
        return Err(Error::Domain(
            "samples need positive times and finite values".into(),
        ));
    }
    if config.weighting == Weighting::Relative && samples.iter().any(|(_, v)| *v == 0.0) {
        return Err(Error::Domain(
            "relative weighting needs nonzero values".into(),
        ));
    }
    let distinct: BTreeSet<_> = config.exponents.iter().collect();
    if distinct.len() != config.exponents.len() {
        return Err(Error::Domain("exponents must be distinct".into()));
    }
    let rows = samples.len();
    let cols = config.exponents.len();
    let weight = |v: f64| match config.weighting {
        Weighting::None => 1.0,
        Weighting::Relative => 1.0 / v,
    };
    let mut a = DMatrix::<f64>::zeros(rows, cols);
    let mut b = DVector::<f64>::zeros(rows);
    for (i, &(t, v)) in samples.iter().enumerate() {
        let w = weight(v);
        for (j, &n) in config.exponents.iter().enumerate() {
            a[(i, j)] = w * t.powf(n as f64 / 2.0);
        }
        b[i] = w * v;
    }
    let scales: Vec<f64> = (0..cols).map(|j| a.column(j).norm()).collect();
    for (j, s) in scales.iter().enumerate() {
        if *s == 0.0 {
            return Err(Error::IllConditioned {
                condition: f64::INFINITY,
                cap: config.condition_cap,
            });
        }
        a.column_mut(j).scale_mut(1.0 / s);
    }
    let sv = a.clone().singular_values();
    let (smax, smin) = sv.iter().fold((0.0f64, f64::INFINITY), |(hi, lo), &s| {
        (hi.max(s), lo.min(s))
    });
    let condition = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    if condition > config.condition_cap {
        return Err(Error::IllConditioned {
            condition,
            cap: config.condition_cap,
        });
    }
    let qr = a.clone().qr();
    let qtb = qr.q().transpose() * &b;
    let y = qr
        .r()
        .solve_upper_triangular(&qtb)
        .ok_or(Error::IllConditioned {
            condition,
            cap: config.condition_cap,
        })?;
    let resid = &a * &y - &b;
    let residual_norm = match config.weighting {
        Weighting::Relative => resid.norm() / (rows as f64).sqrt(),
        Weighting::None => resid.norm() / b.norm(),
    };
    let coefficients = config
        .exponents
        .iter()
        .zip(y.iter().zip(&scales))
        .map(|(&n, (c, s))| (n, c / s))
        .collect();
    Ok(FitResult {
        coefficients,
        residual_norm,
        condition_estimate: condition,
    })
}

/// Samples the heat trace of `spectrum` on the configured grid and fits it.
pub fn fit_spectrum(spectrum: &Spectrum, config: &FitConfig, rel_tol: f64) -> Result<FitResult> {
    config.validate()?;
    let traces = heat_trace_grid(spectrum, &config.t_grid, rel_tol)?;
    let samples: Vec<(f64, f64)> = traces.iter().map(|v| (v.t, v.value)).collect();
    fit_series(&samples, config)
}

/// Largest coefficientwise difference `|a_n - b_n|`; exact when both series are.
pub fn series_residual(a: &AsymptoticSeries, b: &AsymptoticSeries) -> Result<Scalar> {
    let diff = a.minus(b)?;
    let mut best = Scalar::zero(diff.is_exact());
    for (_, c) in diff.terms() {
        let mag = if c.signum() < 0 { c.neg() } else { c.clone() };
        if mag.to_f64() > best.to_f64() || best.is_zero() {
            best = mag;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::rat;

    #[test]
    fn grid_shape() {
        let g = log_grid(0.02, 0.2, 15);
        assert_eq!(g.len(), 15);
        assert!((g[0] - 0.2).abs() < 1e-15 && (g[14] - 0.02).abs() < 1e-15);
        assert!(FitConfig::sphere_default().validate().is_ok());
        assert!(FitConfig::lune_default().validate().is_ok());
    }

    #[test]
    fn exact_linear_model_is_recovered() {
        let cfg = FitConfig::new(log_grid(0.01, 0.1, 12), vec![-2, -1, 0, 1, 2]);
        let truth = [(-2, 0.7), (-1, -0.3), (0, 0.25), (1, 0.1), (2, -0.05)];
        let samples: Vec<_> = cfg
            .t_grid
            .iter()
            .map(|&t| {
                (
                    t,
                    truth.iter().map(|(n, c)| c * t.powf(*n as f64 / 2.0)).sum(),
                )
            })
            .collect();
        let fit = fit_series(&samples, &cfg).unwrap();
        for (n, c) in truth {
            assert!(
                (fit.coeff(n).unwrap() - c).abs() <= 1e-10 * c.abs().max(1.0),
                "n={n}"
            );
        }
        assert!(fit.residual_norm < 1e-13);
    }

    #[test]
    fn too_few_samples() {
        let cfg = FitConfig::new(log_grid(0.01, 0.1, 4), vec![-2, 0, 2]);
        let samples: Vec<_> = cfg.t_grid.iter().map(|&t| (t, 1.0 / t)).collect();
        assert_eq!(
            fit_series(&samples, &cfg),
            Err(Error::InsufficientSamples { have: 4, need: 5 })
        );
    }

    #[test]
    fn condition_cap_rejects() {
        let mut cfg = FitConfig::new(log_grid(0.01, 0.011, 10), vec![-2, -1, 0, 1, 2]);
        cfg.condition_cap = 1e3;
        let samples: Vec<_> = cfg.t_grid.iter().map(|&t| (t, 1.0 / t)).collect();
        assert!(matches!(
            fit_series(&samples, &cfg),
            Err(Error::IllConditioned { .. })
        ));
    }

    #[test]
    fn sphere_fit_matches_closed_form() {
        let s = Spectrum::sphere(1.0).unwrap();
        let fit = fit_spectrum(&s, &FitConfig::sphere_default(), 1e-14).unwrap();
        assert!((fit.coeff(-2).unwrap() - 1.0).abs() < 1e-4);
        assert!((fit.coeff(0).unwrap() - 1.0 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn residual_of_identical_series_is_exact_zero() {
        let mut a = AsymptoticSeries::new(-2, 4, true);
        a.add_to(0, &Scalar::rational(rat(1, 3)));
        let r = series_residual(&a, &a).unwrap();
        assert_eq!(r, Scalar::zero(true));
        let mut b = a.clone();
        b.add_to(2, &Scalar::rational(rat(-1, 7)));
        assert_eq!(
            series_residual(&a, &b).unwrap(),
            Scalar::rational(rat(1, 7))
        );
        let c = AsymptoticSeries::new(-2, 6, true);
        assert!(matches!(
            series_residual(&a, &c),
            Err(Error::RangeMismatch(_))
        ));
    }
}
