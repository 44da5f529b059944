//! Transition cocycles over finite covers of simplicial complexes.

pub mod bundle;
pub mod classifying;
pub mod cocycle;
pub mod cover;
pub mod gerbe;
pub mod group;
pub mod json;
pub mod label;
pub mod search;
pub mod simplicial;

pub use label::Label;
