//! Physics-prior image dehazing and evaluation toolkit.
//!
//! The crate builds everything on the atmospheric scattering model
//! `I = J t + A (1 - t)`: two classic prior dehazers (dark channel prior
//! and boundary constraint + contextual regularization), a learned
//! perceptual fusion of their outputs with a refined transmission map, a
//! physical-consistency loss that trains the fusion on unpaired hazy
//! photos, a haze simulator for ground-truthed test data, and
//! full-reference quality metrics.
//!
//! Start with the runnable examples:
//!
//! ```bash
//! cargo run --release --example dehaze_basic
//! cargo run --release --example compare_priors
//! cargo run --release --example fuse_priors
//! cargo run --release --example synthesize_dataset
//! cargo run --release --example train_fusion
//! cargo run --release --example evaluate_metrics
//! cargo run --release --example inspect_pipeline
//! ```
//!
//! The same capabilities are packaged behind the `hazeforge` binary with
//! `dehaze`, `synth`, `eval`, `train`, and `inspect` subcommands.

pub mod bccr;
pub mod cli;
pub mod config;
pub mod dcp;
pub mod error;
pub mod fusion;
pub mod guided;
pub mod hazesim;
pub mod io;
pub mod loss;
pub mod metrics;
pub mod raster;
pub mod rng;

pub use dcp::{Atmosphere, DcpConfig, PriorResult};
pub use error::{HazeError, Result};
pub use raster::{ExtremumMode, PlanarImage, WindowSpec};
