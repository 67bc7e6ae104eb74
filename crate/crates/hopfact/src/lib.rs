//! Exact-arithmetic construction and certification of inner actions of
//! pointed Hopf algebras on matrix algebras.
//!
//! The crate is organized bottom-up:
//!
//! * [`cyclo`] — the scalar field: cyclotomic numbers with exact rational
//!   coordinates.
//! * [`groups`] — finite abelian groups, characters, bicharacters.
//! * [`gradedmat`] — exact matrices and group gradings of `M_m` (elementary,
//!   division, mixed), plus recovery of a grading from a group action.
//! * [`hopf`] — presentations of the pointed Hopf algebras under study and
//!   their named families (Taft, Drinfeld double, small quantum sl2, book
//!   algebras, a rank-one example over a group of order p^2).
//! * [`actions`] — inner action maps, normalization, and the two independent
//!   certification routes (relation extraction and the brute-force operator
//!   oracle).
//! * [`classify`] — canonical-form catalogs, the isomorphism decision
//!   procedure, and desk-scale enumeration into isomorphism classes.
//! * [`json`] — the serialization schemas shared with the CLI.

pub mod actions;
pub mod classify;
pub mod cyclo;
pub mod error;
pub mod gradedmat;
pub mod groups;
pub mod hopf;
pub mod json;
pub mod poly;
mod roots;

pub use error::HopfError;
