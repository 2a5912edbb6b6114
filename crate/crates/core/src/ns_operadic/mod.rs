//! Non-symmetric cooperads, convolution algebras and ∞-morphisms.

mod conv;
mod cooperad;
mod formality;
mod lie;
mod morphism;
mod tensor;

pub use conv::ConvElement;
pub use cooperad::{CoopElement, DecompTerm, NsCooperad, NsCooperadBuilder, PartialTerm, COUNIT};
pub use formality::{
    as_vanishing_bound, bounded_weight_cap, decide_gauge_formal_bounded, decide_gauge_n_formal, operadic_trivialize,
    operadic_truncated_kaledin, FormalityVerdict, IsotopyCertificate, ObstructionCertificate,
};
pub use lie::ConvLie;
pub use morphism::{act_on_structure, adjoint, check_infinity_morphism, infinity_morphism_defect, invert_infinity_iso, is_isotopy};
pub use tensor::Tensor;
