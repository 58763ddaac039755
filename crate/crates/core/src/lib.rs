pub mod cli;
pub mod error;
pub mod exponent;
pub mod families;
pub(crate) mod fft;
pub mod grid;
pub mod harness;
pub mod norms;
pub mod quantize;
pub mod region;
pub mod tfa;
