//! Shared fixtures for the integration suites: the two worked examples and
//! reference values frozen from 50-digit computations.
//!
//! Each test target pulls in the subset it needs.
#![allow(dead_code)]

use igm_core::{Matrix64, Prm64};

pub fn a1() -> Prm64 {
    let m = Matrix64::from_rows(&[
        vec![1.0, 2.0, 4.0, 8.0],
        vec![0.5, 1.0, 2.0, 4.0],
        vec![0.25, 0.5, 1.0, 2.0],
        vec![0.125, 0.25, 0.5, 1.0],
    ]);
    Prm64::validate(m).expect("consistent example is valid")
}

pub fn a2() -> Prm64 {
    let third = 1.0 / 3.0;
    let m = Matrix64::from_rows(&[
        vec![1.0, 4.0, 3.0, 1.0, 3.0, 4.0],
        vec![0.25, 1.0, 7.0, 3.0, 0.2, 1.0],
        vec![third, 1.0 / 7.0, 1.0, 0.2, 0.2, 1.0 / 6.0],
        vec![1.0, third, 5.0, 1.0, 1.0, third],
        vec![third, 5.0, 5.0, 1.0, 1.0, 3.0],
        vec![0.25, 1.0, 6.0, 3.0, third, 1.0],
    ]);
    Prm64::validate(m).expect("school example is valid")
}

pub const A1_WEIGHTS: [f64; 4] = [8.0 / 15.0, 4.0 / 15.0, 2.0 / 15.0, 1.0 / 15.0];

pub const A2_REDUCED_INVERSE_ROW_SUMS: [f64; 6] = [
    0.655154848054691,
    0.147686529372016,
    0.0548882479670335,
    0.177274630753592,
    0.345686052289945,
    0.197870289813612,
];
