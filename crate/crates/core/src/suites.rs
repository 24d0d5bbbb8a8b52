//! Verification suites shared by the command line and the acceptance
//! tests. Each returns one row per check with its residual and tolerance.

use crate::error::{Error, Result};
use crate::geometry::Angle;
use crate::invariants::hyper_vertex_coeff;
use crate::numkit::to_f64;
use crate::specimens::{
    orbifold_round_trip, polygon_round_trip, random_orbifold, random_polygon, RoundTrip,
};
use crate::spectra::{quotient_relation, RelationCheck};
use crate::trigsums::{closed_sum, identity_residual, trig_sum_direct};
use crate::wedgekernel::{
    heat_kernel_h2, heat_kernel_h2_spectral, max_boundary_value, sector_fit, sector_fit_config,
    vertex_fit, vertex_fit_config,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::ops::RangeInclusive;

/// Which trigonometric check a row reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrigCheck {
    /// Bernoulli side against trigonometric side, index `eta`.
    Identity,
    /// Closed form of the power sum against direct summation, index `n`.
    ClosedSum,
}

impl TrigCheck {
    pub fn as_str(&self) -> &'static str {
        match self {
            TrigCheck::Identity => "identity",
            TrigCheck::ClosedSum => "closed_sum",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigRow {
    pub check: TrigCheck,
    pub k: usize,
    pub index: usize,
    pub residual: f64,
    pub tol: f64,
}

impl TrigRow {
    pub fn pass(&self) -> bool {
        self.residual <= self.tol
    }
}

fn check_k_range(ks: &RangeInclusive<usize>) -> Result<()> {
    if *ks.start() < 2 || ks.is_empty() {
        return Err(Error::Domain(format!(
            "k range must be nonempty with k >= 2, got {ks:?}"
        )));
    }
    Ok(())
}

/// Residuals of the Bernoulli/trigonometric identities over `ks x etas`.
pub fn trig_identity_suite(
    ks: RangeInclusive<usize>,
    etas: RangeInclusive<usize>,
    tol: f64,
) -> Result<Vec<TrigRow>> {
    check_k_range(&ks)?;
    let pairs: Vec<(usize, usize)> = ks.flat_map(|k| etas.clone().map(move |e| (k, e))).collect();
    Ok(pairs
        .par_iter()
        .map(|&(k, eta)| TrigRow {
            check: TrigCheck::Identity,
            k,
            index: eta,
            residual: identity_residual(k, eta),
            tol,
        })
        .collect())
}

/// Relative residuals of the closed power sums against direct summation.
pub fn closed_sum_suite(
    ks: RangeInclusive<usize>,
    powers: RangeInclusive<u32>,
    tol: f64,
) -> Result<Vec<TrigRow>> {
    check_k_range(&ks)?;
    let pairs: Vec<(usize, u32)> = ks
        .flat_map(|k| powers.clone().map(move |n| (k, n)))
        .collect();
    pairs
        .par_iter()
        .map(|&(k, n)| {
            let exact = to_f64(&closed_sum(n, k)?);
            let direct = trig_sum_direct(k, n);
            Ok(TrigRow {
                check: TrigCheck::ClosedSum,
                k,
                index: n as usize,
                residual: (exact - direct).abs() / exact.abs(),
                tol,
            })
        })
        .collect()
}

/// The quotient relation on the unit sphere over `ks x ts`.
pub fn relation_suite(ks: &[u64], ts: &[f64], rel_tol: f64) -> Result<Vec<RelationCheck>> {
    let pairs: Vec<(u64, f64)> = ks
        .iter()
        .flat_map(|&k| ts.iter().map(move |&t| (k, t)))
        .collect();
    pairs
        .par_iter()
        .map(|&(k, t)| quotient_relation(k, t, rel_tol))
        .collect()
}

/// One check of the wedge and kernel suite.
#[derive(Debug, Clone, PartialEq)]
pub struct WedgeRow {
    pub check: &'static str,
    pub parameter: String,
    pub value: f64,
    pub expected: f64,
    pub residual: f64,
    pub tol: f64,
}

impl WedgeRow {
    pub fn pass(&self) -> bool {
        self.residual <= self.tol
    }
}

/// Boundary angles used by the wedge suite.
pub const WEDGE_ORDERS: [u32; 4] = [2, 3, 4, 6];

/// `(d, t)` pairs on which the two heat kernel formulas are compared.
pub const DUAL_KERNEL_SAMPLE: [(f64, f64); 3] = [(0.5, 0.1), (1.0, 0.5), (2.0, 1.0)];

/// Boundary vanishing of the image kernel on 50 random pairs per order,
/// the dual heat kernel formulas, the vertex integral fit and the sector
/// trace fit.
pub fn wedge_suite() -> Result<Vec<WedgeRow>> {
    let mut rows = Vec::new();
    for k in WEDGE_ORDERS {
        let worst = max_boundary_value(k, 50, 11, 0.2)?;
        rows.push(WedgeRow {
            check: "boundary",
            parameter: format!("k={k}"),
            value: worst,
            expected: 0.0,
            residual: worst,
            tol: 1e-12,
        });
    }
    for (d, t) in DUAL_KERNEL_SAMPLE {
        let direct = heat_kernel_h2(d, t)?;
        let spectral = heat_kernel_h2_spectral(d, t)?;
        rows.push(WedgeRow {
            check: "dual_kernel",
            parameter: format!("d={d} t={t}"),
            value: spectral,
            expected: direct,
            residual: (spectral - direct).abs() / direct.abs(),
            tol: 1e-8,
        });
    }
    let angles = [
        Angle::pi_over(2),
        Angle::pi_over(3),
        Angle::exact(2, 3),
        Angle::radians(1.0),
    ];
    let vertex: Vec<Result<WedgeRow>> = angles
        .par_iter()
        .map(|gamma| {
            let fit = vertex_fit(gamma.to_radians(), &vertex_fit_config())?;
            let got = fit.coeff(0).unwrap_or(f64::NAN);
            let want = hyper_vertex_coeff(0, gamma).to_f64();
            Ok(WedgeRow {
                check: "vertex_fit",
                parameter: format!("gamma={gamma}"),
                value: got,
                expected: want,
                residual: (got - want).abs(),
                tol: 1e-4,
            })
        })
        .collect();
    for r in vertex {
        rows.push(r?);
    }
    for k in [2u32, 3] {
        let fit = sector_fit(k, 1.0, &sector_fit_config())?;
        let got = fit.coeff(0).unwrap_or(f64::NAN);
        let want = hyper_vertex_coeff(0, &Angle::pi_over(k as u64)).to_f64();
        rows.push(WedgeRow {
            check: "sector_fit",
            parameter: format!("k={k} r=1"),
            value: got,
            expected: want,
            residual: (got - want).abs(),
            tol: 1e-3,
        });
    }
    Ok(rows)
}

/// Kind of specimen in a round-trip row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecimenKind {
    Polygon,
    Orbifold,
}

impl SpecimenKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpecimenKind::Polygon => "polygon",
            SpecimenKind::Orbifold => "orbifold",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundTripRow {
    pub kind: SpecimenKind,
    pub index: usize,
    pub outcome: RoundTrip,
}

/// Seeded random polygons and orbisurfaces recovered from their own series
/// of order `max_n`. Recovery errors become failing rows.
pub fn roundtrip_suite(
    polygons: usize,
    orbifolds: usize,
    seed: u64,
    max_n: i32,
) -> Vec<RoundTripRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polys: Vec<_> = (0..polygons).map(|_| random_polygon(&mut rng)).collect();
    let orbs: Vec<_> = (0..orbifolds).map(|_| random_orbifold(&mut rng)).collect();
    let failed = |input: String, e: Error| RoundTrip {
        input,
        recovered: String::new(),
        pass: false,
        detail: e.to_string(),
    };
    let mut rows: Vec<RoundTripRow> = polys
        .par_iter()
        .enumerate()
        .map(|(i, p)| RoundTripRow {
            kind: SpecimenKind::Polygon,
            index: i,
            outcome: polygon_round_trip(p, max_n).unwrap_or_else(|e| failed(format!("{p:?}"), e)),
        })
        .collect();
    rows.extend(
        orbs.par_iter()
            .enumerate()
            .map(|(i, o)| RoundTripRow {
                kind: SpecimenKind::Orbifold,
                index: i,
                outcome: orbifold_round_trip(o, max_n)
                    .unwrap_or_else(|e| failed(format!("{o:?}"), e)),
            })
            .collect::<Vec<_>>(),
    );
    rows
}

/// Default check times for the quotient relation.
pub const RELATION_TIMES: [f64; 3] = [0.1, 0.5, 1.0];

/// Default orders for the quotient relation.
pub const RELATION_ORDERS: [u64; 4] = [2, 3, 4, 6];
