//! Exact computations with Fitting ideals over group rings of finite abelian
//! groups, together with the Stickelberger side of the same story.
//!
//! The crate is organized bottom-up:
//!
//! * [`zmod_linalg`] — Howell normal forms, span tests and kernels over Z/p^M;
//! * [`group_ring`] — (Z/p^M)[G] for finite abelian G, ideals in canonical
//!   form, fractional ideals, unit lifting along quotient maps;
//! * [`poly_symbolic`] — the generic integer matrices behind the resolution
//!   combinatorics, with exact multivariate arithmetic;
//! * [`fitting`] — presentations, minor ideals, the explicit resolution of the
//!   one-relation quotient modules and the three routes to their shifted
//!   Fitting ideal;
//! * [`stickelberger`] — depleted/smoothed Stickelberger elements for the
//!   cyclotomic fields Q(zeta_m)/Q in exact rational arithmetic;
//! * [`verify`] — the named check suites that the command-line tool exposes,
//!   producing deterministic JSON reports.

pub mod catalog;
pub mod combinatorics;
pub mod error;
pub mod fitting;
pub mod formats;
pub mod group_ring;
pub mod poly_symbolic;
pub mod stickelberger;
pub mod verify;
pub mod zmod_linalg;

pub use error::{Error, Result};
