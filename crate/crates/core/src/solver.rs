//! Globally convergent fourth-order fixed-point iteration for the zeros of
//! solutions of `y'' + A(x) y = 0` with monotonic coefficient.
//!
//! The step map is `T_j(x) = x - arctan_j(sqrt(A) y/y') / sqrt(A)` with the
//! branch-corrected arctangent; its only fixed points are the zeros of `y`,
//! iterates move monotonically opposite to the growth of `A`, and convergence
//! is fourth order. Where `A < 0` (at most one zero lives there) the step
//! switches to an atanh form.

use crate::error::{Error, Result};
use crate::rule::IterationStats;
use crate::scalar::RealScalar;

/// Sweep direction. Ascending computes zeros in increasing order (requires
/// `A` decreasing, `j = -1`); descending the opposite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Ascending,
    Descending,
}

impl Direction {
    pub fn j(self) -> i8 {
        match self {
            Direction::Ascending => -1,
            Direction::Descending => 1,
        }
    }
}

/// Declared monotonicity of `A` on one span of the sweep domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotonicity {
    Decreasing,
    Increasing,
}

/// One span of the monotonicity partition; `None` bounds are unbounded.
#[derive(Clone, Debug)]
pub struct MonotoneSpan<S> {
    pub lo: Option<S>,
    pub hi: Option<S>,
    pub direction: Monotonicity,
}

/// Normal-form ODE coefficient with its monotonicity structure.
pub trait CoefficientModel<S: RealScalar> {
    fn a(&self, z: &S) -> S;
    fn a_prime(&self, z: &S) -> S;
    /// Ordered, disjoint spans covering the sweep domain.
    fn monotonicity(&self) -> Vec<MonotoneSpan<S>>;
    /// Interior maximum of `A`, if any.
    fn extremum(&self) -> Option<S> {
        None
    }
}

/// Supplies `(y, y')` at requested points, consistently normalized within one
/// sweep (one unknown global constant).
pub trait Evaluator<S: RealScalar> {
    /// Evaluates at `target`. `raw_step` is the unrounded step the solver
    /// added to the previous point; series-based evaluators must ignore it and
    /// re-derive the step as `target - center` after `target` has been rounded
    /// to working precision.
    fn eval_at(&mut self, target: &S, raw_step: &S) -> Result<(S, S)>;

    /// Notification that `node` was accepted; evaluators may re-anchor.
    fn node_accepted(&mut self, _node: &S) -> Result<()> {
        Ok(())
    }

    /// Cumulative evaluation cost (Taylor terms or CF quotients).
    fn cost(&self) -> u64;
}

/// Stopping rule: two consecutive estimates closer than
/// `tau = 6^(1/4) 10^(-D/4)` certify a relative error near `10^-D`.
#[derive(Clone, Debug)]
pub struct StopRule<S> {
    pub digits: u32,
    pub tau: S,
    pub max_iterations: u32,
    /// Take one extra confirmation step after the criterion fires.
    pub confirm_step: bool,
}

impl<S: RealScalar> StopRule<S> {
    pub fn for_digits(digits: u32) -> Self {
        let six_fourth = S::from_i64(6).sqrt().sqrt();
        let exponent = -(S::from_i64(digits as i64) / S::from_i64(4));
        let tau = six_fourth * (S::from_i64(10).ln() * exponent).exp();
        StopRule {
            digits,
            tau,
            max_iterations: 40,
            confirm_step: false,
        }
    }

    pub fn with_confirmation(mut self) -> Self {
        self.confirm_step = true;
        self
    }
}

/// Term budget for one local Taylor evaluation: at least 20 terms, at most
/// `ceil(50 E^1.5)` with `E = max(1, log2(D) - 3)`.
#[derive(Clone, Copy, Debug)]
pub struct TermLimits {
    pub min_terms: u32,
    pub max_terms: u32,
}

impl TermLimits {
    pub fn for_digits(digits: u32) -> Self {
        let e = ((digits as f64).log2() - 3.0).max(1.0);
        TermLimits {
            min_terms: 20,
            max_terms: (50.0 * e.powf(1.5)).ceil() as u32,
        }
    }
}

/// Branch-corrected arctangent of Eq. `arctan_j`: total on the extended reals.
pub fn arctan_branch<S: RealScalar>(j: i8, zeta: &S) -> S {
    debug_assert!(j == 1 || j == -1);
    let jpi = if j > 0 { S::pi() } else { -S::pi() };
    if !zeta.is_finite() {
        return jpi.half();
    }
    let j_zeta_positive = if j > 0 {
        *zeta > S::zero()
    } else {
        *zeta < S::zero()
    };
    if j_zeta_positive {
        zeta.atan()
    } else {
        zeta.atan() + jpi
    }
}

/// One fixed-point step where `A > 0`. Returns the new iterate.
pub fn t_step<S: RealScalar>(z: &S, y: &S, yp: &S, a_at_z: &S, j: i8) -> Result<S> {
    t_step_parts(z, y, yp, a_at_z, j).map(|(_, target)| target)
}

/// As [`t_step`] but also returns the raw step `delta` with
/// `target = z + delta`; series evaluators need the pair to honor the
/// step-formation contract.
pub fn t_step_parts<S: RealScalar>(z: &S, y: &S, yp: &S, a_at_z: &S, j: i8) -> Result<(S, S)> {
    if *a_at_z <= S::zero() {
        return Err(Error::NonPositiveCoefficient(a_at_z.to_f64()));
    }
    if y.is_zero() && yp.is_zero() {
        return Err(Error::DegenerateState(z.to_f64()));
    }
    let sqrt_a = a_at_z.sqrt();
    let angle = if yp.is_zero() {
        // zeta = ±infinity
        let jpi = if j > 0 { S::pi() } else { -S::pi() };
        jpi.half()
    } else {
        let zeta = sqrt_a.clone() * y.clone() / yp.clone();
        arctan_branch(j, &zeta)
    };
    let delta = -(angle / sqrt_a);
    let target = z.clone() + delta.clone();
    Ok((delta, target))
}

/// Modified step for the region `A < 0` (at most one zero lives there).
pub fn t_step_negative<S: RealScalar>(z: &S, y: &S, yp: &S, a_at_z: &S) -> Result<S> {
    t_step_negative_parts(z, y, yp, a_at_z).map(|(_, t)| t)
}

pub fn t_step_negative_parts<S: RealScalar>(z: &S, y: &S, yp: &S, a_at_z: &S) -> Result<(S, S)> {
    if *a_at_z >= S::zero() {
        return Err(Error::NonNegativeCoefficient(a_at_z.to_f64()));
    }
    if yp.is_zero() {
        return Err(Error::AtanhDomain(f64::INFINITY));
    }
    let sqrt_neg_a = (-a_at_z.clone()).sqrt();
    let arg = sqrt_neg_a.clone() * y.clone() / yp.clone();
    if arg.abs() >= S::one() {
        return Err(Error::AtanhDomain(arg.to_f64()));
    }
    let delta = -(arg.atanh() / sqrt_neg_a);
    let target = z.clone() + delta.clone();
    Ok((delta, target))
}

/// How a sweep decides it is done.
#[derive(Clone, Debug)]
pub enum SweepStop<S> {
    /// Exactly this many nodes.
    Count(usize),
    /// At most this many nodes, or as soon as an iterate passes the bound in
    /// the sweep direction (iterates are monotone, so no zero is skipped).
    CountOrBound(usize, S),
}

#[derive(Clone, Debug)]
pub struct SweepConfig<S> {
    pub start: S,
    pub direction: Direction,
    pub stop_after: SweepStop<S>,
    pub rule: StopRule<S>,
    /// Bracketing bound toward which the atanh-domain recovery bisects once.
    pub atanh_recovery_floor: Option<S>,
}

/// Nodes and derivative values produced by one sweep, in computation order.
#[derive(Clone, Debug)]
pub struct SweepOutcome<S> {
    pub nodes: Vec<S>,
    pub derivatives: Vec<S>,
    pub stats: IterationStats,
}

/// Undoes a spurious full-period jump.
///
/// `T_j` steps by the full period `pi/sqrt(A)` only from an exact zero; a
/// mid-iteration step within `tau` of the period therefore means the iterate
/// itself sat within `tau` of a zero and floating point placed it a hair past
/// the fixed point, sending the map to the neighboring zero. Subtracting the
/// period recovers the short step onto the zero at hand.
fn undo_period_jump<S: RealScalar>(
    delta: S,
    est: S,
    x_cur: &S,
    a: &S,
    j: i8,
    tau: &S,
) -> (S, S) {
    if *a <= S::zero() {
        return (delta, est);
    }
    let period = S::pi() / a.sqrt();
    let full = if j < 0 { period } else { -period };
    if (delta.clone() - full.clone()).abs() < *tau {
        let d = delta - full;
        let e = x_cur.clone() + d.clone();
        (d, e)
    } else {
        (delta, est)
    }
}

/// Runs the fixed-point method from `cfg.start`, collecting zeros in the sweep
/// direction until the stop condition fires.
pub fn sweep<S, M, E>(cfg: &SweepConfig<S>, model: &M, evaluator: &mut E) -> Result<SweepOutcome<S>>
where
    S: RealScalar,
    M: CoefficientModel<S>,
    E: Evaluator<S>,
{
    let j = cfg.direction.j();
    let (count_target, bound) = match &cfg.stop_after {
        SweepStop::Count(c) => (*c, None),
        SweepStop::CountOrBound(c, b) => (*c, Some(b.clone())),
    };
    // Slack of 32 roundoffs: the Dimitrov bound is attained exactly at n = 2,
    // so a converging iterate may sit a few ulps past it.
    let bound_slacked = bound.map(|b| {
        let slack = S::unit_roundoff() * S::from_i64(32);
        b.clone() + b.abs() * slack
    });

    let mut out = SweepOutcome {
        nodes: Vec::with_capacity(count_target),
        derivatives: Vec::with_capacity(count_target),
        stats: IterationStats::default(),
    };
    if count_target == 0 {
        return Ok(out);
    }

    // The sweep direction must match the declared monotonicity on its side
    // of the start point (decreasing A for ascending sweeps and vice versa).
    debug_assert!(
        {
            let expected = match cfg.direction {
                Direction::Ascending => Monotonicity::Decreasing,
                Direction::Descending => Monotonicity::Increasing,
            };
            model.monotonicity().iter().any(|span| {
                span.direction == expected
                    && span.lo.as_ref().is_none_or(|lo| *lo <= cfg.start)
                    && span.hi.as_ref().is_none_or(|hi| cfg.start <= *hi)
            })
        },
        "sweep direction inconsistent with the coefficient's monotonicity"
    );

    let mut x_cur = cfg.start.clone();
    let mut raw_step = S::zero();
    // The start point carries genuine (y, y') information; accepted nodes are
    // treated as exact zeros afterwards.
    let mut at_accepted_zero = false;

    'nodes: while out.nodes.len() < count_target {
        let node_index = out.nodes.len();
        let cost_at_start = evaluator.cost();
        let mut iterations = 0u32;
        let mut t_apps = 0u32;
        let mut first = true;
        let mut recovered = false;

        if at_accepted_zero {
            // First estimate from a known zero: x + j-directed pi/sqrt(A).
            // The residual y at the accepted node cannot be trusted for the
            // branch choice (its sign decides between re-converging to the
            // same zero and stepping to the next one).
            let a = model.a(&x_cur);
            if a <= S::zero() {
                return Err(Error::NonPositiveCoefficient(a.to_f64()));
            }
            let delta = match cfg.direction {
                Direction::Ascending => S::pi() / a.sqrt(),
                Direction::Descending => -(S::pi() / a.sqrt()),
            };
            let est = x_cur.clone() + delta.clone();
            t_apps = 1;
            first = false;
            if let Some(b) = &bound_slacked {
                let beyond = match cfg.direction {
                    Direction::Ascending => est > *b,
                    Direction::Descending => est < *b,
                };
                if beyond {
                    break 'nodes;
                }
            }
            raw_step = delta;
            x_cur = est;
        }

        loop {
            if t_apps >= cfg.rule.max_iterations {
                return Err(Error::MaxIterationsExceeded {
                    node_index,
                    max_iter: cfg.rule.max_iterations,
                });
            }
            let (y, yp) = evaluator.eval_at(&x_cur, &raw_step)?;
            let a = model.a(&x_cur);
            let step = if a > S::zero() {
                t_step_parts(&x_cur, &y, &yp, &a, j)
            } else {
                t_step_negative_parts(&x_cur, &y, &yp, &a)
            };
            let (delta, est) = match step {
                Ok(pair) => pair,
                Err(Error::AtanhDomain(_)) if !recovered && cfg.atanh_recovery_floor.is_some() => {
                    // Bisect once toward the bracketing bound and retry.
                    recovered = true;
                    let floor = cfg.atanh_recovery_floor.clone().unwrap();
                    let retry = (x_cur.clone() + floor).half();
                    raw_step = retry.clone() - x_cur.clone();
                    x_cur = retry;
                    t_apps += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            t_apps += 1;
            // The sweep-start application is exempt: a start placed exactly
            // on a zero (odd-degree symmetry point) legitimately takes the
            // full-period step.
            let (delta, est) = if first {
                (delta, est)
            } else {
                undo_period_jump(delta, est, &x_cur, &a, j, &cfg.rule.tau)
            };

            {
                if !first {
                    iterations += 1;
                }
                // A sub-threshold step accepts even on the first application:
                // it certifies the iterate already sat on the node (the sweep
                // start can land there when the zero bounds are attained).
                if delta.abs() < cfg.rule.tau {
                    iterations = iterations.max(1);
                    // est is the node candidate.
                    let (node, last_raw) = if cfg.rule.confirm_step {
                        let (y2, yp2) = evaluator.eval_at(&est, &delta)?;
                        let a2 = model.a(&est);
                        let (d2, est2) = if a2 > S::zero() {
                            t_step_parts(&est, &y2, &yp2, &a2, j)?
                        } else {
                            t_step_negative_parts(&est, &y2, &yp2, &a2)?
                        };
                        let (d2, est2) = undo_period_jump(d2, est2, &est, &a2, j, &cfg.rule.tau);
                        iterations += 1;
                        // A confirmation step can only shrink the error.
                        if d2.abs() < cfg.rule.tau {
                            (est2, d2)
                        } else {
                            (est.clone(), delta.clone())
                        }
                    } else {
                        (est.clone(), delta.clone())
                    };
                    let (_, yp_node) = evaluator.eval_at(&node, &last_raw)?;
                    if yp_node.is_zero() {
                        return Err(Error::ZeroDerivative(node.to_f64()));
                    }
                    out.nodes.push(node.clone());
                    out.derivatives.push(yp_node);
                    evaluator.node_accepted(&node)?;
                    out.stats
                        .record(iterations.max(1), (evaluator.cost() - cost_at_start) as u32);
                    x_cur = node;
                    raw_step = S::zero();
                    at_accepted_zero = true;
                    continue 'nodes;
                }
            }
            first = false;

            if let Some(b) = &bound_slacked {
                let beyond = match cfg.direction {
                    Direction::Ascending => est > *b,
                    Direction::Descending => est < *b,
                };
                if beyond {
                    // Iterates are monotone: nothing left inside the bound.
                    break 'nodes;
                }
            }

            // Steps from t_step always move with the sweep; a reversal of a
            // size the stopping rule cannot absorb means the evaluator and
            // the coefficient disagree.
            debug_assert!(
                a <= S::zero()
                    || delta.abs() < cfg.rule.tau
                    || match cfg.direction {
                        Direction::Ascending => delta > S::zero(),
                        Direction::Descending => delta < S::zero(),
                    },
                "non-monotone iterate at {:?}",
                est.to_f64()
            );

            raw_step = delta;
            x_cur = est;
        }
    }

    if let SweepStop::Count(c) = &cfg.stop_after {
        if out.nodes.len() != *c {
            return Err(Error::CountMismatch {
                expected: *c,
                got: out.nodes.len(),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oscillator with constant coefficient `A = w^2`: y = sin(w x).
    struct SineEvaluator {
        w: f64,
        cost: u64,
        trace: Vec<f64>,
    }

    impl Evaluator<f64> for SineEvaluator {
        fn eval_at(&mut self, target: &f64, _raw: &f64) -> Result<(f64, f64)> {
            self.cost += 1;
            self.trace.push(*target);
            Ok(((self.w * target).sin(), self.w * (self.w * target).cos()))
        }
        fn cost(&self) -> u64 {
            self.cost
        }
    }

    struct ConstCoefficient {
        a: f64,
        declared: Monotonicity,
    }

    impl CoefficientModel<f64> for ConstCoefficient {
        fn a(&self, _z: &f64) -> f64 {
            self.a
        }
        fn a_prime(&self, _z: &f64) -> f64 {
            0.0
        }
        fn monotonicity(&self) -> Vec<MonotoneSpan<f64>> {
            vec![MonotoneSpan {
                lo: None,
                hi: None,
                direction: self.declared,
            }]
        }
    }

    #[test]
    fn arctan_branch_on_extended_reals() {
        // (-1, +inf) -> -pi/2
        let v = arctan_branch(-1, &f64::INFINITY);
        assert!((v + std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        // (-1, 1) -> atan(1) - pi
        let v = arctan_branch(-1, &1.0);
        assert!((v - (std::f64::consts::FRAC_PI_4 - std::f64::consts::PI)).abs() < 1e-15);
        // (+1, tan(2.5)): atan(tan 2.5) + pi = 2.5
        let v = arctan_branch(1, &2.5f64.tan());
        assert!((v - 2.5).abs() < 1e-14);
        // range: (0, pi] for j=+1, [-pi, 0) for j=-1
        for &z in &[-3.0, -0.2, 0.0, 0.7, 11.0] {
            let p = arctan_branch(1, &z);
            assert!(p > 0.0 && p <= std::f64::consts::PI + 1e-15);
            let m = arctan_branch(-1, &z);
            assert!(m < 0.0 && m >= -std::f64::consts::PI - 1e-15);
        }
    }

    #[test]
    fn t_step_is_exact_for_constant_coefficient() {
        // A = 1, y = sin: from 0.5 with j = -1 the step lands on pi.
        let t = t_step(&0.5, &0.5f64.sin(), &0.5f64.cos(), &1.0, -1).unwrap();
        assert!((t - std::f64::consts::PI).abs() < 1e-15);
        // From 2.5 with j = +1 it lands on 0.
        let t = t_step(&2.5, &2.5f64.sin(), &2.5f64.cos(), &1.0, 1).unwrap();
        assert!(t.abs() < 2e-15);
    }

    #[test]
    fn t_step_handles_infinite_h() {
        // y' = 0 at the start: zeta = inf, step is pi/(2 sqrt(A)); this is the
        // Hermite even-degree first step with A(0) = 2n+1.
        let n = 6.0;
        let a = 2.0 * n + 1.0;
        let t = t_step(&0.0, &1.0, &0.0, &a, -1).unwrap();
        assert!((t - std::f64::consts::PI / (2.0 * a.sqrt())).abs() < 1e-16);
    }

    #[test]
    fn t_step_rejects_bad_inputs() {
        assert!(matches!(
            t_step(&1.0, &0.5, &0.5, &-2.0, -1),
            Err(Error::NonPositiveCoefficient(_))
        ));
        assert!(matches!(
            t_step(&1.0, &0.0, &0.0, &2.0, -1),
            Err(Error::DegenerateState(_))
        ));
    }

    #[test]
    fn t_step_negative_is_exact_for_constant_coefficient() {
        // A = -1, y = sinh(z - 1): zero at 1, one step from 1.5.
        let y = 0.5f64.sinh();
        let yp = 0.5f64.cosh();
        let t = t_step_negative(&1.5, &y, &yp, &-1.0).unwrap();
        assert!((t - 1.0).abs() < 1e-15);
        // At the zero itself it is a fixed point.
        let t = t_step_negative(&1.0, &0.0, &1.0, &-1.0).unwrap();
        assert!((t - 1.0).abs() < 1e-16);
    }

    #[test]
    fn t_step_negative_rejects_out_of_basin() {
        // |arg| >= 1 signals the iterate is outside the convergence basin.
        let r = t_step_negative(&2.0, &3.0, &1.0, &-1.0);
        assert!(matches!(r, Err(Error::AtanhDomain(_))));
        let r = t_step_negative(&2.0, &0.1, &1.0, &4.0);
        assert!(matches!(r, Err(Error::NonNegativeCoefficient(_))));
    }

    #[test]
    fn sweep_collects_arithmetic_progression_for_constant_a() {
        // A = 4: zeros of sin(2x) at k pi / 2, spacing pi / sqrt(A).
        let mut eval = SineEvaluator {
            w: 2.0,
            cost: 0,
            trace: Vec::new(),
        };
        let model = ConstCoefficient { a: 4.0, declared: Monotonicity::Decreasing };
        let cfg = SweepConfig {
            start: 0.2,
            direction: Direction::Ascending,
            stop_after: SweepStop::Count(5),
            rule: StopRule::for_digits(16),
            atanh_recovery_floor: None,
        };
        let out = sweep(&cfg, &model, &mut eval).unwrap();
        assert_eq!(out.nodes.len(), 5);
        for (k, node) in out.nodes.iter().enumerate() {
            let expect = (k + 1) as f64 * std::f64::consts::FRAC_PI_2;
            assert!(
                (node - expect).abs() < 1e-14,
                "node {k}: {node} vs {expect}"
            );
        }
        // spacing pi / sqrt(A) to working precision
        for w in out.nodes.windows(2) {
            assert!((w[1] - w[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
        }
        assert_eq!(out.stats.node_count(), 5);
        assert!(out.stats.iterations().iter().all(|&c| c >= 1));
    }

    #[test]
    fn sweep_descending_with_positive_j() {
        let mut eval = SineEvaluator {
            w: 1.0,
            cost: 0,
            trace: Vec::new(),
        };
        let model = ConstCoefficient {
            a: 1.0,
            declared: Monotonicity::Increasing,
        };
        let cfg = SweepConfig {
            start: 9.8,
            direction: Direction::Descending,
            stop_after: SweepStop::Count(3),
            rule: StopRule::for_digits(16),
            atanh_recovery_floor: None,
        };
        let out = sweep(&cfg, &model, &mut eval).unwrap();
        let pi = std::f64::consts::PI;
        for (node, expect) in out.nodes.iter().zip([3.0 * pi, 2.0 * pi, pi]) {
            assert!((node - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn sweep_iterates_are_monotone_within_each_node() {
        let mut eval = SineEvaluator {
            w: 1.0,
            cost: 0,
            trace: Vec::new(),
        };
        let model = ConstCoefficient {
            a: 1.0,
            declared: Monotonicity::Decreasing,
        };
        let cfg = SweepConfig {
            start: 0.4,
            direction: Direction::Ascending,
            stop_after: SweepStop::Count(4),
            rule: StopRule::for_digits(16),
            atanh_recovery_floor: None,
        };
        sweep(&cfg, &model, &mut eval).unwrap();
        // The trace of requested targets never decreases beyond roundoff.
        for w in eval.trace.windows(2) {
            assert!(w[1] >= w[0] - 1e-12, "regression in trace: {:?}", w);
        }
    }

    #[test]
    fn sweep_bound_stop_ends_without_error() {
        // Only zeros pi and 2pi lie below 7; ask for up to 10 with bound 7.
        let mut eval = SineEvaluator {
            w: 1.0,
            cost: 0,
            trace: Vec::new(),
        };
        let model = ConstCoefficient {
            a: 1.0,
            declared: Monotonicity::Decreasing,
        };
        let cfg = SweepConfig {
            start: 0.5,
            direction: Direction::Ascending,
            stop_after: SweepStop::CountOrBound(10, 7.0),
            rule: StopRule::for_digits(16),
            atanh_recovery_floor: None,
        };
        let out = sweep(&cfg, &model, &mut eval).unwrap();
        assert_eq!(out.nodes.len(), 2);
    }

    #[test]
    fn term_limits_follow_digit_count() {
        let t = TermLimits::for_digits(16);
        assert_eq!((t.min_terms, t.max_terms), (20, 50));
        let t = TermLimits::for_digits(1024);
        // E = 7 -> 50 * 7^1.5
        assert_eq!(t.max_terms, (50.0 * 7f64.powf(1.5)).ceil() as u32);
        // Sub-16-digit counts clamp E at 1.
        let t = TermLimits::for_digits(8);
        assert_eq!(t.max_terms, 50);
    }

    #[test]
    fn stop_rule_threshold_matches_digits() {
        let r: StopRule<f64> = StopRule::for_digits(16);
        assert!((r.tau - 6f64.powf(0.25) * 1e-4).abs() < 1e-18);
        assert!(r.max_iterations >= 5);
        let r64: StopRule<f64> = StopRule::for_digits(64);
        assert!((r64.tau.log10() - (-16.0 + 0.25 * 6f64.log10())).abs() < 1e-10);
    }

    #[test]
    fn fourth_order_tail_constant() {
        // For A(x) = 2n+1-x^2 the error relation gives
        // |c - b| <= (|A'(c)|/12) |b - a|^4 within slack; reproduce it on a
        // Hermite-like model using the closed-form solution for n = 0:
        // y = e^{-x^2/2} has no zeros, so instead verify on sin with a mild
        // linear perturbation is out of closed-form reach; the Hermite module
        // exercises the real thing. Here: sanity-check the constant on the
        // documented relation with synthetic errors.
        let a_prime: f64 = 2.0;
        let e_prev: f64 = 1e-3;
        let e_next = a_prime / 12.0 * e_prev.powi(4);
        assert!(e_next < e_prev);
    }
}
