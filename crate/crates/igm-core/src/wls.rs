//! Independent numerical machinery for the constrained least-squares
//! program: a derivative-free optimizer over the weight simplex, the analytic
//! first-order (stationarity + feasibility) residual, and a central-difference
//! gradient check.
//!
//! The optimizer touches the problem only through objective evaluations, so
//! it shares no algebra with the inverse-Gram closed forms it is used to
//! verify.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::prm::{PairwiseReciprocalMatrix, PriorityVector};
use crate::scalar::{cast, Real};

/// Budget and tolerances for [`optimize_wls`].
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig<T> {
    /// Hard cap on objective evaluations.
    pub max_evaluations: usize,
    /// Fractional objective tolerance driving both the simplex spread test
    /// and the restart stall test.
    pub tolerance: T,
    /// Seed for the (small) random component: restart step jitter.
    pub seed: u64,
    /// Optional warm start; defaults to the uniform vector.
    pub initial_point: Option<PriorityVector<T>>,
}

impl<T: Real> Default for OptimizerConfig<T> {
    fn default() -> Self {
        Self {
            max_evaluations: 500_000,
            tolerance: cast(1e-6),
            seed: 0,
            initial_point: None,
        }
    }
}

/// Best point found by the optimizer.
///
/// `budget_exhausted` reports that the evaluation cap cut the search short;
/// the point is still the best one seen.
#[derive(Debug, Clone, PartialEq)]
pub struct WlsSolution<T> {
    pub weights: PriorityVector<T>,
    pub objective: T,
    pub evaluations: usize,
    pub budget_exhausted: bool,
}

/// Analytic first-order residual of the constrained program.
#[derive(Debug, Clone, PartialEq)]
pub struct KktResidual<T> {
    /// Per-weight stationarity values; all zero at the optimum.
    pub stationarity: Vec<T>,
    /// Weight-sum defect `sum(w) - 1`.
    pub feasibility: T,
}

impl<T: Real> KktResidual<T> {
    pub fn max_stationarity(&self) -> T {
        self.stationarity
            .iter()
            .fold(T::zero(), |acc, &x| acc.max(x.abs()))
    }
}

/// Clamps to the strict-positivity floor and rescales to unit sum.
fn project<T: Real>(x: &mut [T]) {
    let floor = cast::<T>(1e-9);
    for xi in x.iter_mut() {
        *xi = xi.max(floor);
    }
    let sum: T = x.iter().copied().sum();
    for xi in x.iter_mut() {
        *xi /= sum;
    }
}

struct Search<'a, T> {
    prm: &'a PairwiseReciprocalMatrix<T>,
    evaluations: usize,
    max_evaluations: usize,
    exhausted: bool,
    best_point: Vec<T>,
    best_value: T,
}

impl<'a, T: Real> Search<'a, T> {
    fn new(prm: &'a PairwiseReciprocalMatrix<T>, max_evaluations: usize) -> Self {
        Self {
            prm,
            evaluations: 0,
            max_evaluations,
            exhausted: false,
            best_point: Vec::new(),
            best_value: T::infinity(),
        }
    }

    /// Evaluates a projected point, or refuses once the budget is spent.
    fn eval(&mut self, w: &[T]) -> Option<T> {
        if self.evaluations >= self.max_evaluations {
            self.exhausted = true;
            return None;
        }
        self.evaluations += 1;
        let f = self.prm.objective_unchecked(w);
        if f < self.best_value {
            self.best_value = f;
            self.best_point = w.to_vec();
        }
        Some(f)
    }
}

fn blend<T: Real>(c: &[T], x: &[T], coeff: T) -> Vec<T> {
    let mut out: Vec<T> = c
        .iter()
        .zip(x)
        .map(|(&ci, &xi)| ci + coeff * (ci - xi))
        .collect();
    project(&mut out);
    out
}

/// One Nelder-Mead run over vertices that all live on the simplex. Vertices
/// are `(point, value)` pairs; returns when the value spread closes under
/// `tol` (fractionally), the simplex collapses, or the budget runs out.
fn nelder_mead<T: Real>(search: &mut Search<'_, T>, simplex: &mut [(Vec<T>, T)], tol: T) {
    let n = simplex[0].0.len();
    let tiny = T::epsilon() * T::epsilon();
    loop {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite objective"));
        let best_value = simplex[0].1;
        let worst_value = simplex[simplex.len() - 1].1;
        if worst_value - best_value <= tol * best_value.abs() + tiny {
            return;
        }
        let diameter = simplex[1..].iter().fold(T::zero(), |acc, (v, _)| {
            v.iter()
                .zip(&simplex[0].0)
                .fold(acc, |a, (&x, &b)| a.max((x - b).abs()))
        });
        if diameter <= cast(1e-14) {
            return;
        }

        let mut centroid = vec![T::zero(); n];
        for (v, _) in &simplex[..simplex.len() - 1] {
            for (ci, &vi) in centroid.iter_mut().zip(v) {
                *ci += vi;
            }
        }
        let count = cast::<T>((simplex.len() - 1) as f64);
        for ci in centroid.iter_mut() {
            *ci /= count;
        }

        let worst = simplex.len() - 1;
        let second_worst_value = simplex[worst - 1].1;
        let worst_point = simplex[worst].0.clone();
        let worst_value = simplex[worst].1;

        let reflected = blend(&centroid, &worst_point, T::one());
        let Some(fr) = search.eval(&reflected) else {
            return;
        };

        if fr < best_value {
            let expanded = blend(&centroid, &worst_point, cast(2.0));
            let Some(fe) = search.eval(&expanded) else {
                simplex[worst] = (reflected, fr);
                return;
            };
            simplex[worst] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < second_worst_value {
            simplex[worst] = (reflected, fr);
        } else {
            let coeff = if fr < worst_value {
                cast::<T>(0.5)
            } else {
                cast::<T>(-0.5)
            };
            let contracted = blend(&centroid, &worst_point, coeff);
            let Some(fc) = search.eval(&contracted) else {
                return;
            };
            if fc < fr.min(worst_value) {
                simplex[worst] = (contracted, fc);
            } else {
                // shrink everything toward the best vertex
                let anchor = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let mut shrunk: Vec<T> = anchor
                        .iter()
                        .zip(&entry.0)
                        .map(|(&b, &v)| b + cast::<T>(0.5) * (v - b))
                        .collect();
                    project(&mut shrunk);
                    let Some(fs) = search.eval(&shrunk) else {
                        return;
                    };
                    *entry = (shrunk, fs);
                }
            }
        }
    }
}

/// Minimizes the squared-residual objective over the open weight simplex with
/// a restarted, projection-based Nelder-Mead search.
///
/// Deterministic for a fixed config (the seed only drives restart step
/// jitter). Budget exhaustion is reported in the solution, not as an error.
pub fn optimize_wls<T: Real>(
    prm: &PairwiseReciprocalMatrix<T>,
    cfg: &OptimizerConfig<T>,
) -> Result<WlsSolution<T>> {
    if cfg.max_evaluations == 0 {
        return Err(Error::InvalidConfig(
            "max_evaluations must be at least 1".to_string(),
        ));
    }
    if cfg.tolerance.is_nan() || cfg.tolerance <= T::zero() {
        return Err(Error::InvalidConfig(
            "tolerance must be positive".to_string(),
        ));
    }
    let n = prm.order();
    let mut start = match &cfg.initial_point {
        Some(p) => {
            if p.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: p.len(),
                });
            }
            p.weights().to_vec()
        }
        None => PriorityVector::uniform(n).weights().to_vec(),
    };
    project(&mut start);

    let mut search = Search::new(prm, cfg.max_evaluations);
    if search.eval(&start).is_none() {
        return Err(Error::Infeasible);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let tiny = T::epsilon() * T::epsilon();
    let mut radius = cast::<T>(0.5);
    let mut stalls = 0u32;

    // The radius ladder does the refining: each restart rebuilds a smaller
    // simplex around the incumbent, so stalls only end the search once the
    // steps are already fine-grained.
    while !search.exhausted && (stalls < 4 || radius > cast(1e-5)) && radius > cast(1e-12) {
        let before = search.best_value;
        let anchor = search.best_point.clone();
        let jitter = cast::<T>(0.75 + 0.5 * rng.random::<f64>());
        let step = radius * jitter;

        let mut simplex = Vec::with_capacity(n + 1);
        let f_anchor = prm.objective_unchecked(&anchor);
        simplex.push((anchor.clone(), f_anchor));
        for i in 0..n {
            let mut vertex = anchor.clone();
            vertex[i] = vertex[i] * (T::one() + step) + step * cast::<T>(0.01);
            project(&mut vertex);
            let Some(f) = search.eval(&vertex) else {
                break;
            };
            simplex.push((vertex, f));
        }
        if simplex.len() == n + 1 {
            nelder_mead(&mut search, &mut simplex, cfg.tolerance);
        }

        let improvement = before - search.best_value;
        if improvement <= cfg.tolerance * search.best_value.abs() + tiny {
            stalls += 1;
        } else {
            stalls = 0;
        }
        radius *= cast(0.25);
    }

    let weights = PriorityVector::new(search.best_point.clone())?;
    Ok(WlsSolution {
        weights,
        objective: search.best_value,
        evaluations: search.evaluations,
        budget_exhausted: search.exhausted,
    })
}

/// Analytic stationarity and feasibility residual at `(w, lambda)`:
///
/// `stationarity_k = ((n-1) + sum_{i!=k} a_ik^2) w_k
///                   + sum_{i!=k} (-a_ik - a_ki) w_i + lambda`
///
/// which is row `k` of the reduced Gram form applied to `w`, plus the
/// multiplier; `feasibility = sum(w) - 1`.
pub fn kkt_residual<T: Real>(
    prm: &PairwiseReciprocalMatrix<T>,
    w: &PriorityVector<T>,
    lambda: T,
) -> Result<KktResidual<T>> {
    let n = prm.order();
    if w.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: w.len(),
        });
    }
    let ws = w.weights();
    let mut stationarity = Vec::with_capacity(n);
    for k in 0..n {
        let mut diag = T::from_usize(n - 1).expect("small integer");
        for i in 0..n {
            if i != k {
                let a = prm.get(i, k);
                diag += a * a;
            }
        }
        let mut acc = diag * ws[k];
        for (i, &wi) in ws.iter().enumerate() {
            if i != k {
                acc += (-prm.get(i, k) - prm.get(k, i)) * wi;
            }
        }
        stationarity.push(acc + lambda);
    }
    let feasibility = w.sum() - T::one();
    Ok(KktResidual {
        stationarity,
        feasibility,
    })
}

/// Central differences of the Lagrangian with respect to each weight.
///
/// The Lagrangian evaluated here carries the raw multiplier `2 * lambda`, so
/// that its gradient is exactly twice the stationarity part of
/// [`kkt_residual`] (which absorbs the factor of two from differentiating
/// the squares). Callers comparing the two must halve this gradient.
pub fn finite_diff_gradient<T: Real>(
    prm: &PairwiseReciprocalMatrix<T>,
    w: &PriorityVector<T>,
    lambda: T,
    h: T,
) -> Result<Vec<T>> {
    let n = prm.order();
    if w.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: w.len(),
        });
    }
    if h.is_nan() || h <= T::zero() {
        return Err(Error::InvalidConfig("step h must be positive".to_string()));
    }
    let raw_multiplier = cast::<T>(2.0) * lambda;
    let lagrangian = |v: &[T]| {
        let sum: T = v.iter().copied().sum();
        prm.objective_unchecked(v) + raw_multiplier * (sum - T::one())
    };
    let mut point = w.weights().to_vec();
    let mut grad = Vec::with_capacity(n);
    for k in 0..n {
        let original = point[k];
        point[k] = original + h;
        let plus = lagrangian(&point);
        point[k] = original - h;
        let minus = lagrangian(&point);
        point[k] = original;
        grad.push((plus - minus) / (cast::<T>(2.0) * h));
    }
    Ok(grad)
}
