//! Exact sheaf cohomology of monad bundles, slope-stability certificates,
//! K3 lattice arithmetic and Picard bounds by point counting.

pub mod cli;
pub mod cohom;
pub mod k3lat;
pub mod monad;
pub mod poly;
pub mod stability;
pub mod zeta;
