//! Bent Boolean functions that are linear on the elements of a spread,
//! their duals, and the ovals, hyperovals and line ovals attached to them.
//!
//! * [`gf`]: the tower F = GF(2^m) inside K = GF(2^2m), unit circle, polar form.
//! * [`boolfn`]: truth tables, Walsh spectra, duals, ANF and EA invariants.
//! * [`niho`]: univariate Niho bent functions f(lambda u) = tr(lambda g(u)) and their duals.
//! * [`geometry`]: lines of K, ovals, line ovals, rho-polynomials, oval to bent.
//! * [`spread`]: prequasifields, transposes, Knuth orbits, Kantor and Lüneburg spreads.
//! * [`spreadbent`]: bivariate bent functions linear on a spread and their line ovals.

pub mod boolfn;
pub mod error;
pub mod geometry;
pub mod gf;
pub mod linalg;
pub mod niho;
pub mod spread;
pub mod spreadbent;

pub use boolfn::{BooleanFunction, Duality, WalshSpectrum};
pub use error::{Error, Result};
pub use gf::{BinaryField, FieldElement, FieldParams, PolarForm, TowerElement};
pub use niho::{NihoFamily, NihoSpec, UnitCircleMap};
pub use spread::{Carrier, Prequasifield, Shape};
pub use spreadbent::SpreadBentSpec;
