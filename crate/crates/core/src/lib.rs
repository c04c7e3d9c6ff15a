//! Exact discrete Ricci curvature on graphs and digraphs.

pub mod graph;
pub mod measures;
pub mod par;
pub mod rational;
pub mod transport;
pub mod curvature;
pub mod directed;
pub mod netalgo;
pub mod cli;
