//! Hamburger-cheeseburger words and the critical FK planar maps they encode.
//!
//! The crate samples and reduces words over the five-letter burger/order
//! alphabet, computes matches and the lattice walk, reads off FK loops around
//! the root, builds the finite decorated map as a graph-level oracle, and
//! estimates the scaling exponents and limit laws by Monte Carlo.
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! ```text
//! cargo run --release --example reduce_word
//! cargo run --release --example matches_and_walk
//! cargo run --release --example root_loops
//! cargo run --release --example build_map
//! cargo run --release --example tail_exponents
//! cargo run --release --example cone_events
//! cargo run --release --example meander
//! cargo run --release --example renewal_age
//! ```

pub mod cli;
pub mod continuum;
pub mod error;
pub mod loops;
pub mod mapbuild;
pub mod matching;
pub mod parallel;
pub mod params;
pub mod renewal;
pub mod rng;
pub mod stats;
pub mod walk;
pub mod word;

pub use error::{Error, Result};
pub use params::ModelParams;
pub use word::{ReducedWord, Symbol, Word};
