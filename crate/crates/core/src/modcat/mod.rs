//! Finite-dimensional modules over presented categories: morphisms, projective
//! covers, minimal resolutions, Ext, Tor and tensor products.

mod derived;
mod free;
mod rep;
mod resolution;

pub use derived::{
    ext, ext_dims, ext_from_resolution, hom_coboundary, tensor_boundary, tensor_over_cat, tor, tor_from_resolution,
    HomologyGroup,
};
pub use free::{projective_cover, simple, top_generators, yoneda_projective, Cover, FreeMap, FreeModule};
pub use rep::{hom_space, Rep, RepMorphism};
pub use resolution::{lift_chain_map, resolve, AugmentedComplex, ProjDim, Resolution};
