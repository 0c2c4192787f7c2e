//! Arnold-scrambling / Lucas-masking image cipher and the attacks that break it.
//!
//! The cipher permutes the pixels of a square 8-bit grayscale image with `T`
//! rounds of the Arnold cat map and then XORs the result, in raster order,
//! with the Lucas sequence reduced modulo 256 starting at position `S`.
//!
//! Everything needed to take it apart lives here too: the cat-map and Lucas
//! periods ([`number_theory`]), equivalent-key reduction and weak keys
//! ([`keyspace`]), and the attacks themselves ([`attacks`]).

pub mod attacks;
pub mod cipher;
mod error;
pub mod image;
pub mod image_io;
pub mod keyspace;
pub mod number_theory;

pub use cipher::{decrypt, encrypt, keystream, Key, LucasCycle, LUCAS_CYCLE_LEN};
pub use error::{Error, PgmError, Result};
pub use image::Image;
pub use keyspace::CanonicalKey;
pub use number_theory::{arnold_period, BoundCase, PeriodInfo};
