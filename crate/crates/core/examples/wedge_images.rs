//! Image-method heat kernels on hyperbolic wedges of angle pi/k and the
//! vertex contribution to the heat trace.
//!
//! Run with `cargo run --release --example wedge_images`.

use specgeo::invariants::hyper_vertex_coeff;
use specgeo::wedgekernel::{
    heat_kernel_h2, heat_kernel_h2_spectral, max_boundary_value, sector_fit, sector_fit_config,
    vertex_fit, vertex_fit_config, wedge_kernel_images, HPoint,
};
use specgeo::Angle;

fn main() -> specgeo::Result<()> {
    for (d, t) in [(0.5, 0.1), (2.0, 1.0)] {
        println!(
            "K(d={d}, t={t}): closed {:.15e}, spectral {:.15e}",
            heat_kernel_h2(d, t)?,
            heat_kernel_h2_spectral(d, t)?
        );
    }
    let x = HPoint::new(0.9, 0.3)?;
    let y = HPoint::new(0.6, 0.7)?;
    println!(
        "\nwedge pi/3 kernel between interior points: {:.6e}",
        wedge_kernel_images(3, &x, &y, 0.2)?
    );
    for k in [2, 3, 4, 6] {
        println!(
            "  largest boundary value for pi/{k}: {:.1e}",
            max_boundary_value(k, 50, 11, 0.2)?
        );
    }

    println!("\nvertex integral fitted at small t against c^H_0:");
    for gamma in [Angle::pi_over(2), Angle::exact(2, 3), Angle::radians(1.0)] {
        let fit = vertex_fit(gamma.to_radians(), &vertex_fit_config())?;
        println!(
            "  {gamma}: fitted {:.10}, exact {:.10}",
            fit.coeff(0).unwrap(),
            hyper_vertex_coeff(0, &gamma).to_f64()
        );
    }
    println!("\ngeodesic sector of radius 1, constant term of the image part:");
    for k in [2u32, 3] {
        let fit = sector_fit(k, 1.0, &sector_fit_config())?;
        println!(
            "  pi/{k}: fitted {:.7}, exact {:.7}",
            fit.coeff(0).unwrap(),
            hyper_vertex_coeff(0, &Angle::pi_over(k as u64)).to_f64()
        );
    }
    Ok(())
}
