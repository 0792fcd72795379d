pub mod algebraic;
pub mod automaton;
pub mod error;
pub mod poly;
pub mod samples;
pub mod word;
pub mod spectral;
pub mod numeration;
pub mod vdc;
pub mod discrepancy;
pub mod brs;
pub mod beta;
pub mod cli;
