//! Two-subspace systems.

pub mod cli;
pub mod finsys;
pub mod linalg;
pub mod seqclassify;
pub mod seqmodel;
