//! Quadrature-backed kernels of the hyperbolic plane: the heat kernel, the
//! half-plane and wedge image kernels, Legendre functions of the second
//! kind, the Mehler and Green's function identities, and the wedge vertex
//! term.

pub mod identities;
pub mod kernel;
pub mod legendre;
pub mod quad;
pub mod sector;

pub use identities::{
    green_plane, green_plane_check, green_plane_residual, green_suite, mehler_identity,
    mehler_identity_residual, mehler_suite, IdentityCheck, GREEN_SAMPLE, MEHLER_SAMPLE,
};
pub use kernel::{
    half_plane_kernel, heat_kernel_h2, heat_kernel_h2_shifted, heat_kernel_h2_spectral,
    heat_kernel_mass, hyp_distance, max_boundary_value, wedge_images, wedge_kernel_images, HPoint,
};
pub use legendre::{conical_p, legendre_q, ln_gamma, product_bound};
pub use quad::{integrate, tanh_sinh, QuadResult, QuadValue, QuadratureSpec};
pub use sector::{
    sector_fit, sector_fit_config, vertex_fit, vertex_fit_config, vertex_term_integral,
    wedge_sector_parts, wedge_sector_trace, SectorTrace,
};
