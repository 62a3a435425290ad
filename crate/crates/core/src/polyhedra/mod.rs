//! Exact rational convex geometry: hulls, cones, slices, volumes and lattice
//! points. All arithmetic is over big rationals.

pub mod cone;
pub mod dd;
pub mod polytope;

pub use cone::{extreme_rays, RationalCone};
pub use dd::{cone_from_constraints, ConeGenerators};
pub use polytope::RationalPolytope;
