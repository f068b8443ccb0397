//! Numerical toolkit for planar harmonic maps `f = h + conj(g)` on the unit
//! disk: coefficient tests and geometric oracles for uniformly convex,
//! absolutely convex and uniformly starlike maps, integral operators between
//! these classes, growth/area bounds, and hypergeometric example families.

pub mod bounds;
pub mod crosscheck;
pub mod error;
pub mod families;
pub mod geometry;
pub mod operators;
pub mod quadrature;
pub mod series;
pub mod special;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use series::{ComplexCoeffSeq, Derivatives, DiskPoint, HarmonicMap, DEFAULT_ORDER};

/// Caps rayon's global pool at `HARMONIC_ATLAS_THREADS` threads when the
/// variable holds a positive integer. Later calls are no-ops.
pub fn init_thread_pool() {
    if let Some(n) = std::env::var("HARMONIC_ATLAS_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}
