//! Independent ground truth: a Fock-space engine on occupation bitstrings and
//! brute-force Levi-Civita contractions of the covariants.

pub mod contraction;
pub mod fock;

pub use contraction::{brute_covariant, brute_k, brute_l, brute_m, brute_n, permutations, Covariant};
pub use fock::{apply_mode_op, apply_ops, exp_cluster, ClusterOperator, FockVector, ModeOp, Monomial};
