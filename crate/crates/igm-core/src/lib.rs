//! Priority weights from pairwise reciprocal matrices via inverse Gram
//! matrix methods, together with the machinery to verify at runtime that the
//! methods coincide and solve the constrained least-squares program:
//!
//! * [`prm`] — validated judgment matrices, scales, priority vectors, and
//!   eigenvalue-based consistency diagnostics.
//! * [`gram`] — the design matrix and the full / reduced / shifted / bordered
//!   Gram forms.
//! * [`linalg`] — LU factorization, solves, inversion, power iteration.
//! * [`methods`] — the prioritization methods themselves.
//! * [`wls`] — an independent simplex-projected optimizer plus analytic and
//!   finite-difference first-order checks.
//! * [`sim`] — the reproducible Monte Carlo verification harness.
//!
//! The numeric core is generic over [`scalar::Real`] (`f32` or `f64`); the
//! `*64` aliases below pin `f64`, which is what the CLI uses.

pub mod error;
pub mod gram;
pub mod linalg;
pub mod matrix;
pub mod methods;
pub mod prm;
pub mod scalar;
pub mod sim;
pub mod wls;

pub use error::{Error, Result};
pub use gram::{
    gram_elementwise, gram_from_design, lagrangian_gram, reduced_gram, shifted_gram, DesignMatrix,
    GramFlavor, GramMatrix,
};
pub use linalg::{invert, lu_factor, principal_eigen, solve, LuFactors};
pub use matrix::Matrix;
pub use methods::{blankmeyer, ligm, nigm, pigm, Diagnostic, MethodLabel, MethodResult};
pub use prm::{
    random_index, ConsistencyReport, JudgmentScale, PairwiseReciprocalMatrix, PriorityVector,
};
pub use scalar::Real;
pub use sim::{
    replay_trial, round_to_places, rounded_discrepancy, run_igm_equivalence,
    run_wls_verification, trial_seed, SimulationMode, SimulationReport, TrialRecord,
    VerificationConfig, MIN_ABS_SHIFT,
};
pub use wls::{
    finite_diff_gradient, kkt_residual, optimize_wls, KktResidual, OptimizerConfig, WlsSolution,
};

/// Double-precision aliases for the generic core types.
pub type Matrix64 = Matrix<f64>;
pub type Prm64 = PairwiseReciprocalMatrix<f64>;
pub type PriorityVector64 = PriorityVector<f64>;
pub type JudgmentScale64 = JudgmentScale<f64>;
pub type ConsistencyReport64 = ConsistencyReport<f64>;
pub type DesignMatrix64 = DesignMatrix<f64>;
pub type GramMatrix64 = GramMatrix<f64>;
pub type MethodResult64 = MethodResult<f64>;
pub type MethodLabel64 = MethodLabel<f64>;
pub type OptimizerConfig64 = OptimizerConfig<f64>;
pub type WlsSolution64 = WlsSolution<f64>;
pub type KktResidual64 = KktResidual<f64>;

#[cfg(test)]
pub(crate) mod fixtures {
    //! The two worked examples shared across the unit tests, plus reference
    //! values frozen from 50-digit computations run with two independent
    //! tools.

    use crate::matrix::Matrix;
    use crate::prm::PairwiseReciprocalMatrix;

    /// Perfectly consistent 4x4 example (weights 8:4:2:1).
    pub fn a1() -> PairwiseReciprocalMatrix<f64> {
        let m = Matrix::from_rows(&[
            vec![1.0, 2.0, 4.0, 8.0],
            vec![0.5, 1.0, 2.0, 4.0],
            vec![0.25, 0.5, 1.0, 2.0],
            vec![0.125, 0.25, 0.5, 1.0],
        ]);
        PairwiseReciprocalMatrix::validate(m).expect("consistent example is valid")
    }

    /// Inconsistent 6x6 school-selection example.
    pub fn a2() -> PairwiseReciprocalMatrix<f64> {
        let third = 1.0 / 3.0;
        let m = Matrix::from_rows(&[
            vec![1.0, 4.0, 3.0, 1.0, 3.0, 4.0],
            vec![0.25, 1.0, 7.0, 3.0, 0.2, 1.0],
            vec![third, 1.0 / 7.0, 1.0, 0.2, 0.2, 1.0 / 6.0],
            vec![1.0, third, 5.0, 1.0, 1.0, third],
            vec![third, 5.0, 5.0, 1.0, 1.0, 3.0],
            vec![0.25, 1.0, 6.0, 3.0, third, 1.0],
        ]);
        PairwiseReciprocalMatrix::validate(m).expect("school example is valid")
    }

    /// Weights every method produces for the 6x6 example.
    pub const A2_WEIGHTS: [f64; 6] = [
        0.415033067961173,
        0.0935577193144556,
        0.0347710743748779,
        0.112301441547458,
        0.21898814190154,
        0.125348554900496,
    ];

    /// Row sums of the inverse of the unshifted reduced Gram matrix.
    pub const A2_REDUCED_INVERSE_ROW_SUMS: [f64; 6] = [
        0.655154848054691,
        0.147686529372016,
        0.0548882479670335,
        0.177274630753592,
        0.345686052289945,
        0.197870289813612,
    ];

    /// Constraint multiplier from the bordered solve with a unit shift.
    pub const A2_LIGM1_LAMBDA: f64 = -1.63348850915704;

    /// Constraint multiplier from the bordered solve with no shift. Also
    /// equal to minus the minimal objective value.
    pub const A2_LIGM0_LAMBDA: f64 = -0.633488509157039;

    /// Minimal value of the squared-residual objective on the unit simplex.
    pub const A2_MIN_OBJECTIVE: f64 = 0.633488509157039;

    /// Objective evaluated at the 3-decimal published weights.
    pub const A2_OBJECTIVE_AT_PUBLISHED: f64 = 0.6335126637528345;

    /// Dominant eigenvalue of the 6x6 example.
    pub const A2_LAMBDA_MAX: f64 = 7.419870101921265;

    /// Consistency index `(lambda_max - 6) / 5`.
    pub const A2_CI: f64 = 0.283974020384253;

    /// Consistency ratio with the order-6 random index of 1.24.
    pub const A2_CR: f64 = 0.229011306761494;
}
