pub mod census;
pub mod constructions;
pub mod gf2;
pub mod group;
pub mod invariants;
pub mod iso;
pub mod json;
pub mod ramification;
