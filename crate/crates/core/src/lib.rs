//! Exact Kazhdan-Lusztig polynomials for Whittaker and generalized Verma
//! modules over finite Weyl groups.
//!
//! The pipeline is: enumerate the Weyl group ([`rootsys`]), form the right
//! cosets of a parabolic subgroup ([`quotient`]), run the layer-by-layer
//! recursion in the Hecke module ([`klcore`], on top of [`heckemod`] and
//! [`laurent`]) and check the result ([`verify`]).

pub mod exec;
pub mod heckemod;
pub mod klcore;
pub mod laurent;
pub mod quotient;
pub mod rootsys;
pub mod verify;

pub use exec::Parallelism;
pub use heckemod::{AntisphericalModule, Basis, HeckeAlgebra, HeckeElement, HeckeError, ModuleElement};
pub use klcore::{
    compute_generalized_verma, compute_ordinary_kl, compute_whittaker_kl, multiplicities, KlError, KlOptions,
    KlTable, MultiplicityMatrix, TableKind,
};
pub use laurent::{ArithmeticError, LaurentPoly};
pub use quotient::{CosetAction, CosetId, DescentChoice, ParabolicQuotient, ThetaError, ThetaSubset};
pub use rootsys::{build_root_system, CartanDatum, CartanError, CartanType, ElementId, Family, WeylGroup};
pub use verify::{run_checks, CheckName, CheckOutcome, CheckStatus, Counterexample, VerifyReport};
