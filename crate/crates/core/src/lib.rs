//! Exact computational verification toolkit for finite-group cohomology and
//! nonarchimedean analytic group actions.
//!
//! Everything is integer/residue arithmetic: no floating point anywhere.
//! The crate is organized around:
//!
//! * [`linalg`] — F_p and Z/p^k linear algebra with a streaming rank engine;
//! * [`groups`] — finite permutation groups (closure, Sylow, quotients);
//! * [`gmodule`] — finite G-modules and their constructions;
//! * [`cohomology`] — inhomogeneous cochains and H^n verdicts;
//! * [`spectral`] — finite-level Hochschild–Serre E_2 data;
//! * [`tate`] — truncated Laurent/Tate series in characteristic p;
//! * [`gamma`] — p-adic group actions on series, gain certificates, solvers;
//! * [`homotopy`] — grid-level chain homotopy and contraction machinery;
//! * [`catalog`] — named constructors for the standard example scenarios.

pub mod catalog;
pub mod cohomology;
pub mod error;
pub mod gamma;
pub mod gmodule;
pub mod groups;
pub mod homotopy;
pub mod linalg;
pub mod spectral;
pub mod suite;
pub mod tate;

pub use error::{Error, Result};

/// Configure the global worker pool size. All results are deterministic and
/// byte-identical for any worker count; this only affects wall-clock time.
/// A size of 0 keeps the default. Without the `parallel` feature this is a
/// no-op.
pub fn configure_jobs(n: usize) {
    #[cfg(feature = "parallel")]
    if n > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
}
