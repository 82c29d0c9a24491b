//! Pulse-compression radar processing for single-receiver SDR radars whose
//! transmit epoch wanders by an unknown transport delay.
//!
//! The direct antenna-to-antenna return is used as the timing reference: the
//! A-scan is rotated so its peak sits in bin 0, which puts every target echo
//! at its true round-trip bin regardless of the delay.

pub mod alignment;
pub mod channel;
pub mod codes;
pub mod correlator;
pub mod error;
pub mod export;
pub mod iq;
pub mod pipeline;
pub mod scenario;
pub mod selftest;
pub mod simulation;

pub use error::{Error, ErrorCategory, Result};
