//! Fixed inputs shared by the benchmarks.

use inthull::arith::Int;
use inthull::families::{morgan_family, power_of_two_knapsack, vs_extremal_instance};
use inthull::model::{KnapsackInstance, LinearSystem};
use inthull::random::{random_bounded_systems, SystemShape};

pub fn pow2(n: u32) -> KnapsackInstance {
    power_of_two_knapsack(n).expect("n >= 1")
}

pub fn vs(s: u32) -> KnapsackInstance {
    vs_extremal_instance(s).expect("s >= 2")
}

/// Morgan system for `nu = 2^exponent` at 64-bit precision.
pub fn morgan(exponent: u32) -> LinearSystem {
    morgan_family(&(Int::from(1) << exponent), 64).expect("valid parameters")
}

pub fn random_systems(count: usize) -> Vec<LinearSystem> {
    random_bounded_systems(&SystemShape::default(), count, 42)
}
