//! Numerical toolkit for `(alpha, beta)`-harmonic functions on the unit disc.
//!
//! A function is `(alpha, beta)`-harmonic when it is annihilated by
//!
//! ```text
//! (1 - |z|^2) [ (1 - |z|^2) d_z d_zbar + alpha z d_z + beta zbar d_zbar - alpha beta ]
//! ```
//!
//! The crate evaluates the associated Poisson kernels and their derivatives,
//! builds harmonic extensions of boundary data both by quadrature and through
//! the hypergeometric series expansion, and measures circle means (Hardy norms)
//! of the extensions and of their first partial derivatives.
//!
//! Modules, bottom-up:
//!
//! * [`special_fn`]: Gamma, Pochhammer, `2F1` and its identities.
//! * [`kernels`]: parameters, kernels, radial integrals and radial solutions.
//! * [`boundary`]: boundary data on the circle and its Fourier analysis.
//! * [`extension`]: extensions, derivatives, circle means and the operator residual.
//! * [`hardy`]: Hardy means, growth fits, norm bounds and the membership table.
//! * [`cli`]: the `abharmonic` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod extension;
pub mod hardy;
pub mod kernels;
pub mod special_fn;

mod ring;

pub use error::{Error, Result};
pub use num_complex::Complex64;
