//! Intrinsic torsion of G2 structures and the SU(3) structures they induce on
//! oriented hypersurfaces, computed in an orthonormal frame.

pub mod exterior;
pub mod framegeom;
pub mod g2;
pub mod linalg;
pub mod pipeline;
pub mod su3;
pub mod scalar;
