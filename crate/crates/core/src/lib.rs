//! Complex structures on finite-dimensional real normed spaces.
//!
//! A complex Banach space is modelled as a real space `X` together with an
//! *i-operator* `A` (`A² = -I` and every rotation `αI + βA`, `α² + β² = 1`,
//! is an isometry). This crate provides
//!
//! * [`spaces`]: real normed spaces, direct sums and the integral
//!   complexification norm,
//! * [`complex_structures`]: validation, conjugation, the natural i-operator
//!   on `X ⊕ X` and a heuristic search for i-operators,
//! * [`morphisms`]: operators that respect i-operators, canonical injections
//!   and surjections, composition and isomorphism tests,
//! * [`theory`]: explicit constructions (conjugation involutions, the
//!   complexification witness, the squares isomorphism) with verifiers for the
//!   Cartesian-square factorization identities and the ideal theorems,
//! * [`ideals`]: ideal-norm functionals, membership oracles and the
//!   complexification / real-form / conjugate transforms,
//! * [`pelczynski`]: a multiset rewriting checker for decomposition chains.
//!
//! Everything is dense, double precision and desk-scale.

pub mod complex_structures;
pub mod corpus;
pub mod error;
pub mod ideals;
pub mod linalg;
pub mod morphisms;
pub mod pelczynski;
pub mod quadrature;
pub mod report;
pub mod sampling;
pub mod spaces;
pub mod theory;
pub mod tolerance;

pub use complex_structures::{
    complex_scalar_action, conjugate_structure, natural_i_operator, search_i_operator,
    validate_i_operator, Certificate, ComplexStructure, IsometryWitness, SearchOutcome,
    ValidationOptions,
};
pub use error::{Error, Result};
pub use ideals::{Functional, IdealNormValue, IdealOracle, OracleKind};
pub use linalg::Matrix;
pub use morphisms::{CanonicalMap, IsomorphismOutcome, RespectingOperator};
pub use report::{Status, VerificationReport};
pub use spaces::{complexification_norm, direct_sum, NormDescriptor, NormedSpace, SumMode, Vector};
pub use tolerance::Tolerances;
