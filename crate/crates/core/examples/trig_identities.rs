//! Cosecant power sums: the Bernoulli identities and the closed forms.
//!
//! Run with `cargo run --example trig_identities`.

use specgeo::numkit::to_f64;
use specgeo::suites::{closed_sum_suite, trig_identity_suite};
use specgeo::trigsums::{closed_sum, identity_lhs, identity_rhs, trig_sum_direct};

fn main() -> specgeo::Result<()> {
    for (k, eta) in [(3, 0), (5, 2), (12, 6)] {
        let lhs = identity_lhs(k, eta);
        println!(
            "k = {k:>2}, eta = {eta}: exact side {lhs} = {:.15e}, trigonometric side {:.15e}",
            to_f64(&lhs),
            identity_rhs(k, eta)
        );
    }
    for n in 1..=3 {
        let k = 7;
        println!(
            "sum_j csc(j pi/{k})^{}: closed {} vs direct {:.15e}",
            2 * n,
            closed_sum(n, k)?,
            trig_sum_direct(k, n)
        );
    }
    let rows = trig_identity_suite(2..=40, 0..=8, 1e-9)?;
    let worst = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    println!("\nidentities for k in 2..=40, eta in 0..=8: worst residual {worst:.2e}");
    let sums = closed_sum_suite(2..=200, 1..=3, 1e-10)?;
    let worst = sums.iter().map(|r| r.residual).fold(0.0, f64::max);
    println!("closed sums for k in 2..=200, n in 1..=3: worst relative residual {worst:.2e}");
    Ok(())
}
