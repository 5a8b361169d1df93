pub mod bundle;
pub mod decomposition;
pub mod formula;
pub mod graph;
pub mod reductions;
pub mod selftest;
pub mod solvers;
pub mod suite;
pub mod verify;
