//! Order-theoretic geometry of proper open convex cones.
//!
//! Gauges and the Funk, reverse-Funk, Hilbert and Thompson metrics; star maps
//! and classification of gauge-preserving/-reversing maps; the bilinear form
//! attached to a gauge-reversing involution; horofunctions and detour costs;
//! splitting of Thompson isometries into homogeneous and anti-homogeneous parts.

pub mod classify;
pub mod cone;
pub mod dd;
pub mod decomp;
pub mod error;
pub mod form;
pub mod gauge;
pub mod horo;
pub mod linalg;
pub mod lp;
pub mod maps;
pub mod plot;
pub mod suite;

pub use cone::{ConeDesc, ConeSpec, CrossSection, Extremals, Face};
pub use error::{Error, Result};
pub use linalg::Point;

use rand::SeedableRng;

pub type Rng64 = rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    Rng64::seed_from_u64(seed)
}
