//! Constructive bridges between the nonnegative, stochastic and doubly
//! stochastic inverse eigenvalue problems.
//!
//! The exact half works over arbitrary-precision rationals: column
//! balancing with its least Perron shift, the rank-`r` eigenvalue
//! replacement `A + XC`, the Frobenius-nearest matrix with unit row and
//! column sums, and characteristic-polynomial certificates of
//! cospectrality. The floating-point half embeds `(n-1)×(n-1)` blocks
//! through an orthogonal basis whose first column is the normalized ones
//! vector, which realizes any spectrum `(1; λ_2, …, λ_n)` by a matrix with
//! unit row and column sums.
//!
//! Batch sweeps run on rayon when the default `parallel` feature is on.

pub mod balance;
pub mod batch;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod nearness;
pub mod orthogonal;
pub mod par;
pub mod poly;
pub mod rado;
pub mod random;
pub mod rational;
pub mod report;
pub mod spectrum;
pub mod stochastic;

pub use balance::{
    balance, balance_minimal, balance_offsets, balance_to_order_multiple, epsilon_threshold,
    normalize_to_stochastic, y_threshold, BalanceReport,
};
pub use error::{Error, Result};
pub use linalg::{nullspace, unit_eigenspaces_nonorthogonal};
pub use matrix::{format_float_matrix, format_matrix, parse_float_matrix, parse_matrix, FloatMatrix, RatMatrix};
pub use nearness::{column_slack_condition, cospectral_ds, nearest_ds, nearest_ds_distance, ColumnSlackReport};
pub use orthogonal::{embed, extract, realize_cospectral, realize_nonneg, OrthoBasis};
pub use par::Execution;
pub use poly::{charpoly, companion, cospectral, Poly};
pub use rado::{rado_update, shift, shift_nonneg_threshold, RadoUpdate};
pub use rational::Rational;
pub use spectrum::{parse_spectrum, poly_from_spectrum, SpectrumList};
pub use stochastic::{classify, column_stats, constant_j, frobenius_distance, StochClass, StochTag};
