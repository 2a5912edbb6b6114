//! Weight-graded dg Lie algebras: Maurer-Cartan calculus, gauge actions and truncated classes.

mod algebra;
mod kaledin;
mod lie;
mod mc;

pub use algebra::{BasisKey, LieElement, WeightGradedDgLie};
pub use kaledin::{
    class_rank_data, class_vanishes, hbar_bracket, hbar_twisted_differential, kaledin_cycle, prismatic,
    prismatic_gauge, rigidity_check, series_mc_defect, trivializing_gauge, truncated_kaledin_class,
    FormalDeformation, KaledinClassRep,
};
pub use lie::{HbarSeries, LieModel};
pub(crate) use kaledin::twisted_block;
pub use mc::{
    bch_to, check_maurer_cartan, exp_ad, exp_ad_to, first_mc_defect, gauge_action, gauge_action_to,
    truncated_bch, twist, Twisted,
};
