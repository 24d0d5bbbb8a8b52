//! Spectra of sphere quotients and lunes: multiplicities checked against a
//! symmetrization of spherical harmonics, the trace relation
//! `Z_cyclic - Z_dihedral = Z_lune`, and the same relation between the exact
//! expansions.
//!
//! Run with `cargo run --example quotient_spectra`.

use specgeo::fitting::series_residual;
use specgeo::invariants::{lune_series, orbifold_series, sphere_mod_cyclic, sphere_mod_dihedral};
use specgeo::numkit::int;
use specgeo::spectra::{quotient_relation, symmetrized_multiplicity, QuotientGroup, Spectrum};
use specgeo::Scalar;

fn main() -> specgeo::Result<()> {
    let k = 3;
    let spectra = [
        ("cyclic", Spectrum::quotient(QuotientGroup::Cyclic, k, 1.0)?),
        (
            "dihedral",
            Spectrum::quotient(QuotientGroup::Dihedral, k, 1.0)?,
        ),
        ("lune", Spectrum::lune(k, 1.0)?),
    ];
    println!("degree  formula/symmetrized for k = {k}");
    for l in 0..=9 {
        let cells: Vec<String> = spectra
            .iter()
            .map(|(name, s)| {
                format!(
                    "{name} {}/{}",
                    s.multiplicity(l),
                    symmetrized_multiplicity(s.kind, l)
                )
            })
            .collect();
        println!("{l:>6}  {}", cells.join("  "));
    }

    println!("\ntrace relation on the unit sphere:");
    for t in [0.1, 0.5, 1.0] {
        let r = quotient_relation(k, t, 1e-12)?;
        println!(
            "  t = {t}: residual {:.2e}, tail bounds {:.2e}, holds: {}",
            r.residual,
            r.tail_sum,
            r.holds(1e-10)
        );
    }

    let one = Scalar::integer(1);
    let cyclic = orbifold_series(&sphere_mod_cyclic(k as u32, int(1)), 12)?;
    let dihedral = orbifold_series(
        &sphere_mod_dihedral(k as u32, int(1)).expect("square curvature"),
        12,
    )?;
    let lune = lune_series(k as u32, &one, 12)?;
    let gap = series_residual(&cyclic.minus(&dihedral)?, &lune)?;
    println!("\nexpansions: max |(cyclic - dihedral) - lune| = {gap}");
    Ok(())
}
