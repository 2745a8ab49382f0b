//! A seedable workbench for entanglement-based key distribution with CHSH
//! eavesdropper detection, the classical ciphers it protects (a mod-30
//! one-time pad and RSA), and desk-scale quantum algorithms that break them.

pub mod algorithms;
pub mod classical;
pub mod e91;
pub mod qsim;
pub mod report;
pub mod rng;
