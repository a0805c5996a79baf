//! Exact symbolic workbench for coupling Dirac structures on Poisson fiber
//! bundles.
//!
//! Geometric data `(V, Γ, 𝔽)` on a fibered coordinate patch is checked for
//! integrability, turned into its coupling Dirac structure, and verified for
//! isotropy and Courant closure with exact zero tests.

pub mod constructions;
pub mod corpus;
pub mod coupling;
pub mod fibered;
pub mod linalg;
pub mod manifest;
pub mod symexpr;
pub mod tensorcalc;
