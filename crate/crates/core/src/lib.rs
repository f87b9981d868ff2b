//! Exact commutator calculus in free Milnor groups.
//!
//! The crate is organised bottom-up:
//!
//! * [`word`] and [`parse`]: free-group words over a declared alphabet,
//!   commutator expressions, free reduction and substitution.
//! * [`magnus`]: the squarefree non-commutative power-series ring and the
//!   Magnus expansion of words into it.
//! * [`lie`]: multilinear bracket trees, their tensor expansions, exact
//!   rational linear algebra and the degree-five computations built on them.
//! * [`obstruction`]: the band-sum polynomial system, arithmetic in
//!   `Q(sqrt 3)`, the rational solution families and bounded integer search.
//! * [`hopf`]: the substitution calculation for the Hopf link.
//!
//! Everything is exact: integers are arbitrary precision and linear algebra
//! runs over `BigRational`.

pub mod error;
pub mod hopf;
pub mod lie;
pub mod magnus;
pub mod obstruction;
pub mod parse;
pub mod word;

pub use error::{Error, Result};
pub use lie::{CommTree, RationalMatrix, TensorVec};
pub use magnus::{LcsDegree, MagnusPoly, Monomial, VariableSet};
pub use obstruction::{PolySystem, QuadExt, SysPolynomial, SysVariable};

pub use parse::parse_expr;
pub use word::{Alphabet, CommExpr, Generator, GroupWord, Letter};
