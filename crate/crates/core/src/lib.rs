pub mod couplings;
pub mod feasibility;
pub mod optics;
pub mod params;
pub mod reduction;
pub mod scattering;

pub use num_complex::Complex64;
