//! A-infinity structures through the Koszul dual cooperad, contractions and homotopy transfer.

mod contraction;
mod koszul;
mod structure;
mod transfer;

pub use contraction::{contraction_from_complex, Contraction, PivotOrder};
pub use koszul::{build_as_koszul_cooperad, mu_name};
pub use structure::{ainf_to_conv, conv_to_ainf, morphism_components, morphism_from_components, AInfinityStructure};
pub use transfer::{homotopy_transfer, induced_structure, triple_massey, MasseyCoset, Transferred};
