//! Explicit Laplace spectra of the round sphere, spherical lunes and the
//! `Z_k`, `D_k` sphere quotients, with certified heat-trace truncation.
//!
//! Every spectrum here is indexed by a degree `l` with eigenvalue
//! `l (l + 1) / r^2` and a multiplicity bounded by `2l + 1`.

use crate::error::{Error, Result};
use crate::numkit::CompensatedSum;
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default cap on the number of degrees summed.
pub const DEFAULT_TERM_CAP: u64 = 10_000_000;

/// Symmetry group of a sphere quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuotientGroup {
    /// Rotations about one axis by multiples of `2 pi / k`.
    Cyclic,
    /// The cyclic rotations together with `k` reflections through planes
    /// containing the axis.
    Dihedral,
}

/// Which explicit spectrum to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpectrumKind {
    Sphere,
    /// Dirichlet lune of angle `pi / k`.
    Lune {
        k: u64,
    },
    /// Quotient of the sphere by `Z_k` or `D_k`.
    Quotient {
        group: QuotientGroup,
        k: u64,
    },
}

/// A degree-indexed spectrum on a sphere of radius `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub kind: SpectrumKind,
    pub radius: f64,
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("radius must be positive, got {r}")))
    }
}

impl Spectrum {
    pub fn sphere(r: f64) -> Result<Self> {
        check_radius(r)?;
        Ok(Self {
            kind: SpectrumKind::Sphere,
            radius: r,
        })
    }

    pub fn lune(k: u64, r: f64) -> Result<Self> {
        check_radius(r)?;
        if k < 1 {
            return Err(Error::Domain("lune needs k >= 1".into()));
        }
        Ok(Self {
            kind: SpectrumKind::Lune { k },
            radius: r,
        })
    }

    pub fn quotient(group: QuotientGroup, k: u64, r: f64) -> Result<Self> {
        check_radius(r)?;
        if k < 2 {
            return Err(Error::Domain("quotient needs k >= 2".into()));
        }
        Ok(Self {
            kind: SpectrumKind::Quotient { group, k },
            radius: r,
        })
    }

    /// Multiplicity of the eigenvalue of degree `l` (possibly zero).
    pub fn multiplicity(&self, l: u64) -> u64 {
        match self.kind {
            SpectrumKind::Sphere => 2 * l + 1,
            SpectrumKind::Lune { k } => l / k,
            SpectrumKind::Quotient {
                group: QuotientGroup::Cyclic,
                k,
            } => 2 * (l / k) + 1,
            SpectrumKind::Quotient {
                group: QuotientGroup::Dihedral,
                k,
            } => l / k + 1,
        }
    }

    /// Eigenvalue of degree `l`.
    pub fn eigenvalue(&self, l: u64) -> f64 {
        let l = l as f64;
        l * (l + 1.0) / (self.radius * self.radius)
    }

    /// Smallest degree with nonzero multiplicity.
    pub fn first_degree(&self) -> u64 {
        match self.kind {
            SpectrumKind::Lune { k } => k,
            _ => 0,
        }
    }

    /// `(eigenvalue, multiplicity)` in increasing order, zero multiplicities skipped.
    pub fn iter(&self) -> impl Iterator<Item = (f64, u64)> + '_ {
        (self.first_degree()..)
            .map(move |l| (self.eigenvalue(l), self.multiplicity(l)))
            .filter(|(_, m)| *m > 0)
    }
}

/// A truncated heat trace with a proven bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceValue {
    pub t: f64,
    pub value: f64,
    pub tail_bound: f64,
    pub terms_used: u64,
}

/// Bound on `sum_(l > last) (2l + 1) exp(-l (l + 1) tau)`, valid once the
/// summand is decreasing beyond `last`, i.e. `(2 last + 1)^2 tau >= 2`.
pub fn degree_tail_bound(last: u64, tau: f64) -> Option<f64> {
    let l = last as f64;
    if (2.0 * l + 1.0).powi(2) * tau < 2.0 {
        return None;
    }
    Some((-l * (l + 1.0) * tau).exp() * (1.0 / tau + 1.0))
}

/// Heat trace `sum m_i exp(-lambda_i t)` to relative accuracy `rel_tol`.
pub fn heat_trace(spec: &Spectrum, t: f64, rel_tol: f64) -> Result<TraceValue> {
    heat_trace_capped(spec, t, rel_tol, DEFAULT_TERM_CAP)
}

/// As [`heat_trace`] with an explicit cap on the number of degrees.
pub fn heat_trace_capped(spec: &Spectrum, t: f64, rel_tol: f64, cap: u64) -> Result<TraceValue> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::Domain(format!(
            "rel_tol must lie in (0, 1), got {rel_tol}"
        )));
    }
    let tau = t / (spec.radius * spec.radius);
    let mut sum = CompensatedSum::new();
    let mut used = 0u64;
    let mut l = spec.first_degree();
    loop {
        let m = spec.multiplicity(l);
        if m > 0 {
            sum.add(m as f64 * (-(l as f64) * (l as f64 + 1.0) * tau).exp());
            used += 1;
        }
        if let Some(bound) = degree_tail_bound(l, tau) {
            let s = sum.value();
            if bound <= rel_tol * s || bound == 0.0 {
                return Ok(TraceValue {
                    t,
                    value: s,
                    tail_bound: bound,
                    terms_used: used,
                });
            }
        }
        if used >= cap || l - spec.first_degree() >= cap {
            return Err(Error::NonConvergent(format!(
                "heat trace at t = {t} needs more than {cap} terms"
            )));
        }
        l += 1;
    }
}

/// Heat traces over a grid of times, evaluated in parallel.
pub fn heat_trace_grid(spec: &Spectrum, ts: &[f64], rel_tol: f64) -> Result<Vec<TraceValue>> {
    ts.par_iter()
        .map(|&t| heat_trace(spec, t, rel_tol))
        .collect()
}

/// Heat traces of the `Z_k` and `D_k` sphere quotients and of the lune of
/// angle `pi / k`, for the relation `Z_(Z_k) - Z_(D_k) = Z_lune`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub k: u64,
    pub t: f64,
    pub cyclic: TraceValue,
    pub dihedral: TraceValue,
    pub lune: TraceValue,
    /// `|Z_cyclic - Z_dihedral - Z_lune|`.
    pub residual: f64,
    /// Sum of the three certified tail bounds.
    pub tail_sum: f64,
}

impl RelationCheck {
    /// Residual within the certified tail bounds, up to the rounding error
    /// of the three compensated sums, and below the absolute bound `tol`.
    pub fn holds(&self, tol: f64) -> bool {
        let rounding =
            16.0 * f64::EPSILON * (self.cyclic.value + self.dihedral.value + self.lune.value);
        self.residual <= tol && self.residual <= self.tail_sum + rounding
    }
}

/// Evaluates the quotient relation on the unit sphere at time `t`.
pub fn quotient_relation(k: u64, t: f64, rel_tol: f64) -> Result<RelationCheck> {
    let z = heat_trace(
        &Spectrum::quotient(QuotientGroup::Cyclic, k, 1.0)?,
        t,
        rel_tol,
    )?;
    let d = heat_trace(
        &Spectrum::quotient(QuotientGroup::Dihedral, k, 1.0)?,
        t,
        rel_tol,
    )?;
    let l = heat_trace(&Spectrum::lune(k, 1.0)?, t, rel_tol)?;
    Ok(RelationCheck {
        k,
        t,
        cyclic: z,
        dihedral: d,
        lune: l,
        residual: (z.value - d.value - l.value).abs(),
        tail_sum: z.tail_bound + d.tail_bound + l.tail_bound,
    })
}

/// Real spherical harmonics of degree `l` at colatitude `theta` and
/// azimuth `phi`: `Q_l^m(cos theta) cos(m phi)` for `m = 0..=l`, then
/// `Q_l^m(cos theta) sin(m phi)` for `m = 1..=l`, where
/// `Q_l^m = sqrt((l-m)!/(l+m)!) P_l^m` keeps every entry of order one.
fn real_harmonics(l: usize, theta: f64, phi: f64) -> Vec<f64> {
    let (x, s) = (theta.cos(), theta.sin());
    let mut q = vec![0.0; l + 1];
    let mut diag = 1.0;
    for m in 0..=l {
        if m > 0 {
            diag *= -((2 * m - 1) as f64 / (2 * m) as f64).sqrt() * s;
        }
        // upward recurrence in degree at fixed order m
        let (mut prev, mut cur) = (0.0, diag);
        for d in m + 1..=l {
            let df = d as f64;
            let mf = m as f64;
            let next = ((2.0 * df - 1.0) * x * cur - ((df - 1.0).powi(2) - mf * mf).sqrt() * prev)
                / (df * df - mf * mf).sqrt();
            prev = cur;
            cur = next;
        }
        q[m] = cur;
    }
    let mut out: Vec<f64> = (0..=l).map(|m| q[m] * (m as f64 * phi).cos()).collect();
    out.extend((1..=l).map(|m| q[m] * (m as f64 * phi).sin()));
    out
}

/// Multiplicity of degree `l` found by symmetrizing the real spherical
/// harmonics over the symmetry group of the spectrum and measuring the rank
/// of the result on a point sample. Rotations act by `phi -> phi + 2 pi j / k`
/// and reflections by `phi -> 2 pi j / k - phi`. Quotients keep invariant
/// functions; the Dirichlet lune keeps functions odd under every reflection.
pub fn symmetrized_multiplicity(kind: SpectrumKind, l: u64) -> u64 {
    let l = l as usize;
    // (rotation count, include reflections, reflection sign)
    let (k, reflect, sign) = match kind {
        SpectrumKind::Sphere => (1, false, 1.0),
        SpectrumKind::Lune { k } => (k as usize, true, -1.0),
        SpectrumKind::Quotient {
            group: QuotientGroup::Cyclic,
            k,
        } => (k as usize, false, 1.0),
        SpectrumKind::Quotient {
            group: QuotientGroup::Dihedral,
            k,
        } => (k as usize, true, 1.0),
    };
    let dim = 2 * l + 1;
    let samples = 2 * dim + 7;
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut m = DMatrix::<f64>::zeros(samples, dim);
    for i in 0..samples {
        // Fibonacci points, nudged off the poles
        let z = 1.0 - 2.0 * (i as f64 + 0.5) / samples as f64;
        let (theta, phi0) = (z.acos(), golden * i as f64 + 0.1);
        let mut row = vec![0.0; dim];
        for j in 0..k {
            let shift = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
            for (acc, v) in row.iter_mut().zip(real_harmonics(l, theta, phi0 + shift)) {
                *acc += v;
            }
            if reflect {
                for (acc, v) in row.iter_mut().zip(real_harmonics(l, theta, shift - phi0)) {
                    *acc += sign * v;
                }
            }
        }
        for (c, v) in row.into_iter().enumerate() {
            m[(i, c)] = v;
        }
    }
    // entries are sums of at most 2k harmonics of size at most one, so a
    // surviving direction has singular value of order sqrt(samples)
    let floor = 1e-8 * (samples as f64).sqrt();
    m.singular_values().iter().filter(|&&x| x > floor).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_entries() {
        let s = Spectrum::sphere(1.0).unwrap();
        let first: Vec<_> = s.iter().take(3).collect();
        assert_eq!(first, vec![(0.0, 1), (2.0, 3), (6.0, 5)]);
        let s2 = Spectrum::sphere(2.0).unwrap();
        assert_eq!(s2.eigenvalue(1), 0.5);
        assert!(Spectrum::sphere(0.0).is_err());
    }

    #[test]
    fn weyl_count() {
        let r = 1.5;
        let s = Spectrum::sphere(r).unwrap();
        let lam = 4.0e6;
        let count: u64 = s
            .iter()
            .take_while(|(e, _)| *e <= lam)
            .map(|(_, m)| m)
            .sum();
        assert!((count as f64 / lam - r * r).abs() < 1e-3);
    }

    #[test]
    fn lune_entries() {
        let one = Spectrum::lune(1, 1.0).unwrap();
        let first: Vec<_> = one.iter().take(3).collect();
        assert_eq!(first, vec![(2.0, 1), (6.0, 2), (12.0, 3)]);
        let three = Spectrum::lune(3, 1.0).unwrap();
        assert_eq!(three.multiplicity(3), 1);
        assert_eq!(three.multiplicity(7), 2);
        assert_eq!(three.iter().next(), Some((12.0, 1)));
    }

    #[test]
    fn quotient_entries() {
        for k in 2..9 {
            let z = Spectrum::quotient(QuotientGroup::Cyclic, k, 1.0).unwrap();
            let d = Spectrum::quotient(QuotientGroup::Dihedral, k, 1.0).unwrap();
            assert_eq!(z.multiplicity(0), 1);
            assert_eq!(d.multiplicity(0), 1);
            assert_eq!(z.multiplicity(k), 3);
            assert_eq!(d.multiplicity(k), 2);
        }
        assert!(Spectrum::quotient(QuotientGroup::Cyclic, 1, 1.0).is_err());
    }

    #[test]
    fn large_time_sphere_tends_to_one() {
        let s = Spectrum::sphere(1.0).unwrap();
        let v = heat_trace(&s, 50.0, 1e-12).unwrap();
        assert!((v.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tail_bound_is_certified() {
        let s = Spectrum::sphere(1.0).unwrap();
        let v = heat_trace(&s, 0.01, 1e-13).unwrap();
        assert!(v.tail_bound <= 1e-13 * v.value);
        let reference = heat_trace(&s, 0.01, 1e-15).unwrap();
        assert!((reference.value - v.value).abs() <= v.tail_bound + 1e-13 * v.value);
    }

    #[test]
    fn cap_is_enforced() {
        let s = Spectrum::sphere(1.0).unwrap();
        let e = heat_trace_capped(&s, 1e-6, 1e-12, 100).unwrap_err();
        assert!(e.is_numerical());
    }

    #[test]
    fn grid_matches_pointwise() {
        let s = Spectrum::lune(3, 1.0).unwrap();
        let ts = [0.05, 0.1, 0.5];
        let grid = heat_trace_grid(&s, &ts, 1e-12).unwrap();
        for (g, &t) in grid.iter().zip(&ts) {
            assert_eq!(*g, heat_trace(&s, t, 1e-12).unwrap());
        }
    }

    #[test]
    fn quotient_relation_holds() {
        for k in [2, 3, 4, 6] {
            for t in [0.1, 0.5, 1.0] {
                let r = quotient_relation(k, t, 1e-14).unwrap();
                assert!(r.holds(1e-10), "{r:?}");
            }
        }
    }

    #[test]
    fn harmonic_symmetrization_matches_formulas() {
        for k in [2u64, 3, 5] {
            let kinds = [
                SpectrumKind::Sphere,
                SpectrumKind::Lune { k },
                SpectrumKind::Quotient {
                    group: QuotientGroup::Cyclic,
                    k,
                },
                SpectrumKind::Quotient {
                    group: QuotientGroup::Dihedral,
                    k,
                },
            ];
            for kind in kinds {
                let spec = Spectrum { kind, radius: 1.0 };
                for l in 0..=12 {
                    assert_eq!(
                        symmetrized_multiplicity(kind, l),
                        spec.multiplicity(l),
                        "{kind:?} l={l}"
                    );
                }
            }
        }
    }
}
