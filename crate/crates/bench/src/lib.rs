//! Fixtures shared by the kernel benchmarks.

use std::f64::consts::TAU;

use xducer::reduction::ThreeModeSystem;

pub const G: f64 = TAU * 10e6;
pub const DELTA_M: f64 = TAU * 100e6;
pub const KAPPA: f64 = 2.0 * G * G / DELTA_M;

pub fn matched_three_mode() -> ThreeModeSystem {
    ThreeModeSystem::matched(G, G, DELTA_M, true).expect("reference design is valid")
}
