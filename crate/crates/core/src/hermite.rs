//! Gauss-Hermite rules.
//!
//! The normalized solution `y(x) = lambda e^{-x^2/2} H_n(x)` of
//! `y'' + (2n+1 - x^2) y = 0` starts from exact initial values at `x = 0`
//! (`(1, 0)` for even degree, `(0, 1)` for odd) and is marched along the
//! positive axis by local Taylor series while the fixed-point iteration
//! collects the `floor(n/2)` positive zeros in increasing order. Weights come
//! from the stored derivative values and one moment normalization; the
//! negative half of the rule is mirrored.

use crate::error::{Error, Result};
use crate::rule::{QuadratureKind, QuadratureRule};
use crate::scalar::{compensated_sum, RealScalar};
use crate::solver::{
    sweep, CoefficientModel, Direction, Evaluator, Monotonicity, MonotoneSpan, StopRule,
    SweepConfig, SweepOutcome, SweepStop, TermLimits,
};

/// Coefficient `A(x) = 2n + 1 - x^2`; decreasing for positive `x`.
#[derive(Clone, Debug)]
pub struct HermiteCoefficient {
    pub n: usize,
}

impl HermiteCoefficient {
    fn two_n_plus_one<S: RealScalar>(&self) -> S {
        S::from_i64(2 * self.n as i64 + 1)
    }
}

impl<S: RealScalar> CoefficientModel<S> for HermiteCoefficient {
    fn a(&self, x: &S) -> S {
        self.two_n_plus_one::<S>() - x.clone() * x.clone()
    }
    fn a_prime(&self, x: &S) -> S {
        -(S::from_i64(2) * x.clone())
    }
    fn monotonicity(&self) -> Vec<MonotoneSpan<S>> {
        vec![MonotoneSpan {
            lo: Some(S::zero()),
            hi: None,
            direction: Monotonicity::Decreasing,
        }]
    }
}

/// How the Taylor step `h` is formed from an iterate update.
///
/// `DifferenceAfterRounding` (the reliable order) rounds the target first and
/// uses `h = target - center`; `PrecomputedDelta` uses the raw step before the
/// addition rounded it, which measurably accumulates node error and exists for
/// error-propagation experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StepFormation {
    #[default]
    DifferenceAfterRounding,
    PrecomputedDelta,
}

/// Which moment fixes the weight normalization constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Normalization {
    /// mu_1 = integral of x^2 e^{-x^2} = sqrt(pi)/2 (the default).
    #[default]
    FirstMoment,
    /// mu_0 = sqrt(pi); cross-checking alternative.
    ZerothMoment,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct HermiteOptions {
    pub normalization: Normalization,
    pub step_formation: StepFormation,
}

/// Derivative table of `y` at a center point; rows satisfy
/// `y^(k+2) = -(2n+1-x^2) y^(k) + 2k x y^(k-1) + k(k-1) y^(k-2)`.
#[derive(Clone, Debug)]
pub struct HermiteTaylorState<S> {
    n: usize,
    center: S,
    a_at_center: S,
    derivs: Vec<S>,
}

/// State centered at 0 with the exact parity initial values.
pub fn initial_state<S: RealScalar>(n: usize) -> HermiteTaylorState<S> {
    let (y0, y1) = if n % 2 == 0 {
        (S::one(), S::zero())
    } else {
        (S::zero(), S::one())
    };
    HermiteTaylorState::new(n, S::zero(), y0, y1)
}

impl<S: RealScalar> HermiteTaylorState<S> {
    pub fn new(n: usize, center: S, y: S, yp: S) -> Self {
        let a = S::from_i64(2 * n as i64 + 1) - center.clone() * center.clone();
        HermiteTaylorState {
            n,
            center,
            a_at_center: a,
            derivs: vec![y, yp],
        }
    }

    pub fn center(&self) -> &S {
        &self.center
    }

    pub fn value(&self) -> (&S, &S) {
        (&self.derivs[0], &self.derivs[1])
    }

    fn grow_to(&mut self, order: usize) {
        let two_x = S::from_i64(2) * self.center.clone();
        while self.derivs.len() <= order {
            let k = self.derivs.len() - 2;
            let mut v = -(self.a_at_center.clone() * self.derivs[k].clone());
            if k >= 1 {
                v = v + S::from_i64(k as i64) * two_x.clone() * self.derivs[k - 1].clone();
            }
            if k >= 2 {
                v = v + S::from_i64((k * (k - 1)) as i64) * self.derivs[k - 2].clone();
            }
            self.derivs.push(v);
        }
    }

    /// Sums the local series for `(y, y')` at `target` and re-centers there.
    ///
    /// The step must be `target - center` formed after `target` was rounded
    /// to working precision; callers with a precomputed raw step use
    /// [`Self::evaluate_with_raw_step`].
    pub fn evaluate_at(
        &mut self,
        target: &S,
        tol: &S,
        limits: &TermLimits,
    ) -> Result<(S, S, u32)> {
        let h = target.clone() - self.center.clone();
        self.evaluate_with_step(h, target.clone(), tol, limits)
    }

    /// Error-propagation experiment variant: uses the raw step value instead
    /// of re-deriving it from the rounded target.
    pub fn evaluate_with_raw_step(
        &mut self,
        raw_step: &S,
        target: &S,
        tol: &S,
        limits: &TermLimits,
    ) -> Result<(S, S, u32)> {
        self.evaluate_with_step(raw_step.clone(), target.clone(), tol, limits)
    }

    fn evaluate_with_step(
        &mut self,
        h: S,
        new_center: S,
        tol: &S,
        limits: &TermLimits,
    ) -> Result<(S, S, u32)> {
        if h.is_zero() {
            return Ok((self.derivs[0].clone(), self.derivs[1].clone(), 1));
        }
        let mut sum_y = S::zero();
        let mut sum_yp = S::zero();
        let mut hpow = S::one(); // h^i / i!
        let mut terms = 0u32;
        let habs = h.abs();
        loop {
            let i = terms as usize;
            self.grow_to(i + 1);
            let t_y = self.derivs[i].clone() * hpow.clone();
            let t_yp = self.derivs[i + 1].clone() * hpow.clone();
            sum_y = sum_y + t_y.clone();
            sum_yp = sum_yp + t_yp.clone();
            terms += 1;
            if terms >= limits.min_terms {
                // Scale-aware termination: near a zero of y the pair
                // (|y|, |h y'|) still carries the local magnitude.
                let scale = sum_y.abs() + habs.clone() * sum_yp.abs();
                let tol_scale = tol.clone() * scale;
                if t_y.abs() <= tol_scale && t_yp.abs() * habs.clone() <= tol_scale {
                    break;
                }
            }
            if terms >= limits.max_terms {
                return Err(Error::TermLimitExceeded(limits.max_terms));
            }
            hpow = hpow * h.clone() / S::from_i64(terms as i64);
        }
        self.center = new_center;
        self.a_at_center =
            S::from_i64(2 * self.n as i64 + 1) - self.center.clone() * self.center.clone();
        self.derivs.clear();
        self.derivs.push(sum_y.clone());
        self.derivs.push(sum_yp.clone());
        Ok((sum_y, sum_yp, terms))
    }

    /// As [`Self::evaluate_at`] with recursive step halving when the term
    /// budget is exceeded: legs the budget rejects are split at the midpoint
    /// and retried, bounded by a total split count.
    pub fn evaluate_splitting(
        &mut self,
        target: &S,
        tol: &S,
        limits: &TermLimits,
    ) -> Result<(S, S, u32)> {
        const MAX_SPLITS: u32 = 12;
        let mut stack = vec![target.clone()];
        let mut splits = 0u32;
        let mut total_terms = 0u32;
        let mut last = None;
        while let Some(t) = stack.last().cloned() {
            match self.evaluate_at(&t, tol, limits) {
                Ok((y, yp, terms)) => {
                    total_terms += terms;
                    stack.pop();
                    last = Some((y, yp));
                }
                Err(Error::TermLimitExceeded(_)) if splits < MAX_SPLITS => {
                    splits += 1;
                    let mid = (self.center.clone() + t.clone()).half();
                    if mid == self.center || mid == t {
                        return Err(Error::TermLimitExceeded(limits.max_terms));
                    }
                    stack.push(mid);
                }
                Err(e) => return Err(e),
            }
        }
        let (y, yp) = last.expect("at least one leg evaluated");
        Ok((y, yp, total_terms))
    }
}

/// Sweep evaluator: local Taylor series on the normalized Hermite solution.
pub struct HermiteEvaluator<S: RealScalar> {
    state: HermiteTaylorState<S>,
    tol: S,
    limits: TermLimits,
    step_formation: StepFormation,
    cost: u64,
}

impl<S: RealScalar> HermiteEvaluator<S> {
    pub fn new(n: usize, digits: u32, step_formation: StepFormation) -> Self {
        let tol = pow10_neg::<S>(digits);
        HermiteEvaluator {
            state: initial_state(n),
            tol,
            limits: TermLimits::for_digits(digits),
            step_formation,
            cost: 0,
        }
    }

    pub fn state(&self) -> &HermiteTaylorState<S> {
        &self.state
    }
}

pub(crate) fn pow10_neg<S: RealScalar>(digits: u32) -> S {
    (-(S::from_i64(digits as i64) * S::from_i64(10).ln())).exp()
}

impl<S: RealScalar> Evaluator<S> for HermiteEvaluator<S> {
    fn eval_at(&mut self, target: &S, raw_step: &S) -> Result<(S, S)> {
        let (y, yp, terms) = match self.step_formation {
            StepFormation::DifferenceAfterRounding => {
                self.state.evaluate_splitting(target, &self.tol, &self.limits)?
            }
            StepFormation::PrecomputedDelta => {
                self.state
                    .evaluate_with_raw_step(raw_step, target, &self.tol, &self.limits)?
            }
        };
        self.cost += terms as u64;
        Ok((y, yp))
    }

    fn cost(&self) -> u64 {
        self.cost
    }
}

/// Positive zeros of the degree-n solution, in increasing order, with the
/// sweep-normalized derivative values.
pub fn nodes<S: RealScalar>(n: usize, stop: &StopRule<S>) -> Result<SweepOutcome<S>> {
    nodes_with_options(n, stop, StepFormation::DifferenceAfterRounding)
}

pub fn nodes_with_options<S: RealScalar>(
    n: usize,
    stop: &StopRule<S>,
    step_formation: StepFormation,
) -> Result<SweepOutcome<S>> {
    if n == 0 {
        return Err(Error::DegreeZero);
    }
    let model = HermiteCoefficient { n };
    let mut evaluator = HermiteEvaluator::new(n, stop.digits, step_formation);
    let cfg = SweepConfig {
        start: S::zero(),
        direction: Direction::Ascending,
        stop_after: SweepStop::Count(n / 2),
        rule: stop.clone(),
        atanh_recovery_floor: None,
    };
    sweep(&cfg, &model, &mut evaluator)
}

/// Weights for the positive nodes from their derivative values.
///
/// Returns `(weights, scaled_weights, center_weight)` where the center values
/// apply to the node at 0 for odd degree. `w_bar_i = |y'|^{-2} e^{-x^2}` are
/// normalized through one moment: by default `mu_1 = sqrt(pi)/2`, matched
/// against `mu_bar_1 = 2 sum w_bar_j x_j^2`.
pub fn weights<S: RealScalar>(
    n: usize,
    positive_nodes: &[S],
    derivatives: &[S],
    normalization: Normalization,
) -> Result<(Vec<S>, Vec<S>, Option<(S, S)>)> {
    if positive_nodes.len() != derivatives.len() {
        return Err(Error::CountMismatch {
            expected: positive_nodes.len(),
            got: derivatives.len(),
        });
    }
    let odd = n % 2 == 1;
    let sqrt_pi = S::pi().sqrt();

    let mut scaled_bar = Vec::with_capacity(positive_nodes.len());
    let mut unscaled_bar = Vec::with_capacity(positive_nodes.len());
    for (x, yp) in positive_nodes.iter().zip(derivatives.iter()) {
        if yp.is_zero() {
            return Err(Error::ZeroDerivative(x.to_f64()));
        }
        let om = (yp.clone() * yp.clone()).recip();
        let w = om.clone() * (-(x.clone() * x.clone())).exp();
        scaled_bar.push(om);
        unscaled_bar.push(w);
    }

    // Normalization constant C with w_i = w_bar_i / C.
    let use_zeroth = matches!(normalization, Normalization::ZerothMoment) || positive_nodes.is_empty();
    let c = if use_zeroth {
        // sqrt(pi) = [w_0 if odd] + 2 sum w_j
        let sum = compensated_sum(unscaled_bar.iter().cloned());
        let center = if odd { S::one() } else { S::zero() };
        (center + S::from_i64(2) * sum) / sqrt_pi
    } else {
        // sqrt(pi)/2 = sum over all nodes of w x^2 = 2 sum_{pos} w_j x_j^2
        let mu_bar = S::from_i64(2)
            * compensated_sum(
                unscaled_bar
                    .iter()
                    .zip(positive_nodes.iter())
                    .map(|(w, x)| w.clone() * x.clone() * x.clone()),
            );
        mu_bar / (sqrt_pi.half())
    };

    let weights = unscaled_bar.into_iter().map(|w| w / c.clone()).collect();
    let scaled = scaled_bar.into_iter().map(|o| o / c.clone()).collect();
    // Center node (odd degree): y'(0) = 1 exactly, so w_bar = omega_bar = 1.
    let center = odd.then(|| (c.clone().recip(), c.recip()));
    Ok((weights, scaled, center))
}

/// The full n-point Gauss-Hermite rule at the working precision of `S`.
pub fn rule<S: RealScalar>(n: usize) -> Result<QuadratureRule<S>> {
    rule_with_options(n, HermiteOptions::default())
}

pub fn rule_with_options<S: RealScalar>(
    n: usize,
    options: HermiteOptions,
) -> Result<QuadratureRule<S>> {
    let stop = StopRule::for_digits(S::digits());
    let outcome = nodes_with_options::<S>(n, &stop, options.step_formation)?;
    let (w_pos, om_pos, center) = weights(
        n,
        &outcome.nodes,
        &outcome.derivatives,
        options.normalization,
    )?;
    Ok(assemble(n, outcome, w_pos, om_pos, center))
}

fn assemble<S: RealScalar>(
    n: usize,
    outcome: SweepOutcome<S>,
    w_pos: Vec<S>,
    om_pos: Vec<S>,
    center: Option<(S, S)>,
) -> QuadratureRule<S> {
    let m = outcome.nodes.len();
    let total = 2 * m + usize::from(n % 2 == 1);
    debug_assert_eq!(total, n);
    let mut nodes = Vec::with_capacity(total);
    let mut weights = Vec::with_capacity(total);
    let mut scaled = Vec::with_capacity(total);
    let mut derivs = Vec::with_capacity(total);

    // Negative half mirrored exactly; derivative parity:
    // even n: y'(-x) = -y'(x); odd n: y'(-x) = y'(x).
    for i in (0..m).rev() {
        nodes.push(-outcome.nodes[i].clone());
        weights.push(w_pos[i].clone());
        scaled.push(om_pos[i].clone());
        let d = outcome.derivatives[i].clone();
        derivs.push(if n % 2 == 0 { -d } else { d });
    }
    if let Some((w0, om0)) = center {
        nodes.push(S::zero());
        weights.push(w0);
        scaled.push(om0);
        derivs.push(S::one());
    }
    for i in 0..m {
        nodes.push(outcome.nodes[i].clone());
        weights.push(w_pos[i].clone());
        scaled.push(om_pos[i].clone());
        derivs.push(outcome.derivatives[i].clone());
    }

    QuadratureRule {
        kind: QuadratureKind::Hermite,
        degree: n,
        nodes,
        weights,
        scaled_weights: scaled,
        derivatives: derivs,
        boundary_weight: None,
        stats: outcome.stats,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn initial_values_follow_parity() {
        let s = initial_state::<f64>(4);
        assert_eq!(s.value(), (&1.0, &0.0));
        let s = initial_state::<f64>(7);
        assert_eq!(s.value(), (&0.0, &1.0));
    }

    #[test]
    fn second_derivative_at_zero_from_ode() {
        // y''(0) = -(2n+1) y(0) = -9 for n = 4
        let mut s = initial_state::<f64>(4);
        s.grow_to(2);
        assert_eq!(s.derivs[2], -9.0);
        // parity: odd derivatives vanish at 0 for even n
        s.grow_to(7);
        assert_eq!(s.derivs[3], 0.0);
        assert_eq!(s.derivs[5], 0.0);
        assert_eq!(s.derivs[7], 0.0);
    }

    #[test]
    fn taylor_eval_matches_closed_form_degree_two() {
        // y = e^{-x^2/2} (1 - 2 x^2) with y(0) = 1
        let mut s = initial_state::<f64>(2);
        let limits = TermLimits::for_digits(16);
        let h = 0.1;
        let (y, yp, _) = s.evaluate_at(&h, &1e-16, &limits).unwrap();
        let f = |x: f64| (-x * x / 2.0).exp() * (1.0 - 2.0 * x * x);
        let fp = |x: f64| (-x * x / 2.0).exp() * (-x * (1.0 - 2.0 * x * x) - 4.0 * x);
        assert!(rel(y, f(h)) < 1e-15);
        assert!(rel(yp, fp(h)) < 1e-14);
        // identity evaluation: one term, values unchanged
        let (y2, yp2, terms) = s.evaluate_at(&h, &1e-16, &limits).unwrap();
        assert_eq!(terms, 1);
        assert_eq!((y2, yp2), (y, yp));
    }

    #[test]
    fn taylor_step_count_stays_moderate_at_n_1000() {
        let mut s = initial_state::<f64>(1000);
        let limits = TermLimits::for_digits(16);
        let h = std::f64::consts::PI / (2001f64).sqrt();
        let (_, _, terms) = s.evaluate_at(&h, &1e-16, &limits).unwrap();
        assert!((20..=34).contains(&terms), "terms = {terms}");
    }

    #[test]
    fn nodes_match_closed_forms_small_degrees() {
        let stop = StopRule::for_digits(16);
        // n = 2: positive root of H_2 = 4x^2 - 2 is 1/sqrt(2)
        let out = nodes::<f64>(2, &stop).unwrap();
        assert_eq!(out.nodes.len(), 1);
        assert!(rel(out.nodes[0], 0.5f64.sqrt()) < 1e-15);
        // n = 3: positive root of H_3 = 8x^3 - 12x is sqrt(3/2)
        let out = nodes::<f64>(3, &stop).unwrap();
        assert!(rel(out.nodes[0], 1.5f64.sqrt()) < 1e-15);
        // n = 5 from an independent eigenvalue run
        let out = nodes::<f64>(5, &stop).unwrap();
        assert!(rel(out.nodes[0], 0.9585724646138185) < 1e-14);
        assert!(rel(out.nodes[1], 2.0201828704560856) < 1e-14);
        // n = 1: no positive nodes
        let out = nodes::<f64>(1, &stop).unwrap();
        assert!(out.nodes.is_empty());
    }

    #[test]
    fn largest_node_n10() {
        let stop = StopRule::for_digits(16);
        let out = nodes::<f64>(10, &stop).unwrap();
        assert!(rel(out.nodes[4], 3.436159118837738) < 1e-15);
    }

    #[test]
    fn weights_two_and_three_point_rules() {
        let sp = std::f64::consts::PI.sqrt();
        let r = rule::<f64>(2).unwrap();
        assert!(rel(r.weights[0], sp / 2.0) < 1e-14);
        assert!(rel(r.weights[1], sp / 2.0) < 1e-14);

        let r = rule::<f64>(3).unwrap();
        assert!(rel(r.weights[1], 2.0 * sp / 3.0) < 1e-14);
        assert!(rel(r.weights[0], sp / 6.0) < 1e-14);
        assert!(rel(r.weights[2], sp / 6.0) < 1e-14);
    }

    #[test]
    fn degree_one_rule_is_single_node_at_origin() {
        let r = rule::<f64>(1).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert!(rel(r.weights[0], std::f64::consts::PI.sqrt()) < 1e-15);
    }

    #[test]
    fn rule_is_symmetric_and_sums_to_sqrt_pi() {
        for n in [2usize, 5, 8, 13, 40] {
            let r = rule::<f64>(n).unwrap();
            assert_eq!(r.nodes.len(), n);
            for i in 0..n {
                assert_eq!(r.nodes[i], -r.nodes[n - 1 - i], "n={n} i={i}");
                assert_eq!(r.weights[i], r.weights[n - 1 - i]);
            }
            let sum: f64 = r.weights.iter().sum();
            assert!(rel(sum, std::f64::consts::PI.sqrt()) < 1e-13, "n={n}");
        }
    }

    #[test]
    fn zeroth_moment_normalization_agrees() {
        for n in [4usize, 9] {
            let a = rule::<f64>(n).unwrap();
            let b = rule_with_options::<f64>(
                n,
                HermiteOptions {
                    normalization: Normalization::ZerothMoment,
                    ..Default::default()
                },
            )
            .unwrap();
            for (wa, wb) in a.weights.iter().zip(b.weights.iter()) {
                assert!(rel(*wa, *wb) < 1e-13);
            }
        }
    }

    #[test]
    fn small_node_weights_follow_asymptotic_estimate() {
        // w_i ~ pi/sqrt(2n) e^{-x^2} for the smallest nodes, within 2%.
        let n = 100;
        let r = rule::<f64>(n).unwrap();
        let lead = std::f64::consts::PI / (2.0 * n as f64).sqrt();
        for i in 0..6 {
            let idx = n / 2 + i; // smallest positive nodes
            let x = r.nodes[idx];
            let est = lead * (-x * x).exp();
            assert!(
                rel(r.weights[idx], est) < 0.02,
                "node {x}: {} vs {est}",
                r.weights[idx]
            );
        }
    }

    #[test]
    fn scaled_weights_are_stationary_at_nodes() {
        // omega(x) = |y'(x)|^{-2} has omega'(x_i) = 0: a symmetric wiggle of
        // the node changes omega at second order only.
        let n = 10;
        let stop = StopRule::for_digits(16);
        let out = nodes::<f64>(n, &stop).unwrap();
        let x1 = out.nodes[1];
        let limits = TermLimits::for_digits(16);
        let eps = 1e-5;
        let omega_at = |x: f64| -> f64 {
            let mut s = initial_state::<f64>(n);
            let (_, yp, _) = s.evaluate_at(&x, &1e-16, &limits).unwrap();
            yp.powi(-2)
        };
        let om_m = omega_at(x1 - eps);
        let om_0 = omega_at(x1);
        let om_p = omega_at(x1 + eps);
        let first_order = (om_p - om_m).abs() / (2.0 * eps) * eps / om_0;
        let second_order = (om_p + om_m - 2.0 * om_0).abs() / om_0;
        // The centered difference (first order in eps) is comparable to the
        // quadratic term, not to an O(eps) drift.
        assert!(first_order < 10.0 * second_order.max(1e-12));
        assert!(second_order < 1e-6);
    }

    #[test]
    fn iteration_budget_at_n_100() {
        let r = rule::<f64>(100).unwrap();
        assert!(r.stats.mean_iterations() <= 2.5, "{}", r.stats.mean_iterations());
        assert!(r.stats.mean_terms() <= 1.6 * 69.0, "{}", r.stats.mean_terms());
    }

    #[test]
    fn underflowed_weights_store_zero_with_finite_scaled() {
        // At n = 400 the outermost nodes have e^{-x^2} below the double
        // underflow threshold; the unscaled weight is exact 0 there while
        // the scaled weight stays finite and positive.
        let r = rule::<f64>(400).unwrap();
        assert_eq!(r.weights[0], 0.0);
        assert!(r.scaled_weights[0].is_finite() && r.scaled_weights[0] > 0.0);
        assert!(r.weights[200] > 0.0);
    }

    #[test]
    fn nodes_of_consecutive_degrees_interlace() {
        let stop = StopRule::for_digits(16);
        for n in [4usize, 9, 16] {
            let a = nodes::<f64>(n, &stop).unwrap().nodes;
            let b = nodes::<f64>(n + 1, &stop).unwrap().nodes;
            // Positive halves interlace with the even-degree rule's node
            // first (the odd rule spends a zero at the origin).
            let (first_seq, second_seq) = if n % 2 == 0 { (&a, &b) } else { (&b, &a) };
            let mut merged = Vec::new();
            for i in 0..first_seq.len().min(second_seq.len()) {
                merged.push(first_seq[i]);
                merged.push(second_seq[i]);
            }
            for w in merged.windows(2) {
                assert!(w[0] < w[1], "interlacing broken at n={n}: {:?}", w);
            }
        }
    }
}
