pub mod graph;
pub mod homology;
pub mod invariants;
pub mod rational;
pub mod surface;
pub mod cut;
pub mod decision;
pub mod dot;
pub mod format;
pub mod moves;
pub mod iso;
pub mod generator;
