//! Exact symbolic evaluation of coefficients of the q-Dyson product
//!
//! ```text
//! prod_{1 <= i < j <= n} (x_i/x_j; q)_{a_i} (q x_j/x_i; q)_{a_j}
//! ```
//!
//! The coefficient of `x_1^{d_1} ... x_n^{d_n}` (with `sum d_i = 0`) is computed as
//! `R_d(q, z_1..z_n)` times the q-multinomial coefficient, where `z_i` stands for
//! `q^{a_i}`. The computation uses the quantitative Combinatorial Nullstellensatz
//! over geometric grids: only finitely many grid points (parametrized by a
//! permutation and a budget vector) contribute, and each contribution is a ratio
//! of q-Pochhammer symbols with affine-linear indices in the `a_i`.
//!
//! Module map:
//! - [`exactalg`]: exact integers, q-polynomials, Laurent polynomials and the
//!   factored rational-function type [`RationalQZ`].
//! - [`symforms`]: affine, quadratic and parity forms in the symbolic `a_i`.
//! - [`qpochhammer`]: Pochhammer rewriting, grid evaluation and normalization.
//! - [`latticepoints`]: enumeration of the contributing grid points and shifts.
//! - [`engine`]: the end-to-end pipeline.
//! - [`oracle`]: brute-force expansion and the verification sweep.

pub mod engine;
pub mod error;
pub mod exactalg;
pub mod latticepoints;
pub mod oracle;
pub mod par;
pub mod qpochhammer;
pub mod symforms;

pub use engine::{
    CoefficientQuery, CombinedResult, ShiftPolicy, SplitResult, coefficient_combined, coefficient_split,
    combine_sum, constant_term_identity,
};
pub use error::{Error, Result};
pub use exactalg::{Atom, LaurentPoly, QPolynomial, Rational, RationalQZ, ZqMonomial, ZqPolynomial};
pub use latticepoints::{EvaluationPoint, EvaluationSet, Permutation, ShiftVector};
pub use oracle::{SweepConfig, SweepSummary, VerificationReport};
pub use par::Execution;
pub use symforms::{AffineForm, ParityForm, QuadForm, SignClass};
