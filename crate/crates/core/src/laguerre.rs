//! Gauss-Laguerre rules in the canonical variable `z = sqrt(x)`.
//!
//! The normalized solution `y(z) = z^{alpha+1/2} e^{-z^2/2} L_n^{(alpha)}(z^2)`
//! satisfies `y'' + A(z) y = 0` with `A(z(x)) = -x + 2L + (1/4 - alpha^2)/x`,
//! `L = 2n + alpha + 1`. For `|alpha| <= 1/2` the coefficient decreases on
//! `z > 0` and one ascending sweep from the lower zero bound collects all
//! nodes; otherwise `A` peaks at `z_e = (alpha^2 - 1/4)^{1/4}` and an
//! ascending sweep above `z_e` is followed by a descending one below it.
//! Function values come from local Taylor series except near the `z = 0`
//! singularity, where ratios `y'/y` from a continued fraction (or the degree
//! recurrence for `n < 10`) seed the process.

use crate::error::{Error, Result};
use crate::hermite::pow10_neg;
use crate::rule::{IterationStats, QuadratureKind, QuadratureRule};
use crate::scalar::{compensated_sum, RealScalar};
use crate::solver::{
    sweep, CoefficientModel, Direction, Evaluator, Monotonicity, MonotoneSpan, StopRule,
    SweepConfig, SweepOutcome, SweepStop, TermLimits,
};
use crate::special::ln_binomial_shifted;

/// Coefficient of the normal-form ODE in the canonical variable.
#[derive(Clone, Debug)]
pub struct LaguerreCoefficient<S> {
    pub n: usize,
    pub alpha: S,
    big_l: S,
    quarter_minus_alpha_sq: S,
}

impl<S: RealScalar> LaguerreCoefficient<S> {
    pub fn new(n: usize, alpha: S) -> Result<Self> {
        if n == 0 {
            return Err(Error::DegreeZero);
        }
        if alpha <= -S::one() {
            return Err(Error::AlphaOutOfRange(alpha.to_f64()));
        }
        let big_l = S::from_i64(2 * n as i64) + alpha.clone() + S::one();
        let quarter = S::one() / S::from_i64(4);
        let quarter_minus_alpha_sq = quarter - alpha.clone() * alpha.clone();
        Ok(LaguerreCoefficient {
            n,
            alpha,
            big_l,
            quarter_minus_alpha_sq,
        })
    }

    /// `z_e = (alpha^2 - 1/4)^{1/4}`, present iff `|alpha| > 1/2`.
    pub fn extremum_z(&self) -> Option<S> {
        if self.quarter_minus_alpha_sq < S::zero() {
            Some((-self.quarter_minus_alpha_sq.clone()).sqrt().sqrt())
        } else {
            None
        }
    }

    /// Endpoints of the region where `A > 0`, in the x variable:
    /// `x_R = L + sqrt(L^2 - alpha^2 + 1/4)`, `x_L = (alpha^2 - 1/4)/x_R`.
    pub fn positive_region_x(&self) -> (S, S) {
        let l = self.big_l.clone();
        let x_r = l.clone() + (l.clone() * l + self.quarter_minus_alpha_sq.clone()).sqrt();
        let x_l = -self.quarter_minus_alpha_sq.clone() / x_r.clone();
        (x_l, x_r)
    }
}

impl<S: RealScalar> CoefficientModel<S> for LaguerreCoefficient<S> {
    fn a(&self, z: &S) -> S {
        let z2 = z.clone() * z.clone();
        S::from_i64(2) * self.big_l.clone() - z2.clone()
            + self.quarter_minus_alpha_sq.clone() / z2
    }
    fn a_prime(&self, z: &S) -> S {
        let z3 = z.clone() * z.clone() * z.clone();
        -(S::from_i64(2) * z.clone())
            - S::from_i64(2) * self.quarter_minus_alpha_sq.clone() / z3
    }
    fn monotonicity(&self) -> Vec<MonotoneSpan<S>> {
        match self.extremum_z() {
            None => vec![MonotoneSpan {
                lo: Some(S::zero()),
                hi: None,
                direction: Monotonicity::Decreasing,
            }],
            Some(ze) => vec![
                MonotoneSpan {
                    lo: Some(S::zero()),
                    hi: Some(ze.clone()),
                    direction: Monotonicity::Increasing,
                },
                MonotoneSpan {
                    lo: Some(ze),
                    hi: None,
                    direction: Monotonicity::Decreasing,
                },
            ],
        }
    }
    fn extremum(&self) -> Option<S> {
        self.extremum_z()
    }
}

/// Bounds on the zeros of `L_n^{(alpha)}` in the original variable.
#[derive(Clone, Debug)]
pub struct ZeroBounds<S> {
    pub x_upper: S,
    pub x_lower: S,
    pub p: S,
}

/// All n zeros lie in `(x_lower, x_upper)`; the bounds are attained at
/// n = 1, 2.
pub fn bounds<S: RealScalar>(n: usize, alpha: &S) -> ZeroBounds<S> {
    let nf = S::from_i64(n as i64);
    let one = S::one();
    let two = S::from_i64(2);
    let n_plus_2 = nf.clone() + two.clone();
    let x_upper = (two.clone() * nf.clone() * nf.clone()
        + nf.clone() * (alpha.clone() - one.clone())
        + two.clone() * (alpha.clone() + one.clone())
        + two.clone()
            * (nf.clone() - one.clone())
            * (nf.clone() * nf.clone() + n_plus_2.clone() * (alpha.clone() + one.clone())).sqrt())
        / n_plus_2.clone();
    let p = (alpha.clone() + one.clone())
        * (nf.clone() * (alpha.clone() + S::from_i64(5)) + two.clone() * (alpha.clone() - one))
        / n_plus_2;
    let x_lower = p.clone() / x_upper.clone();
    ZeroBounds {
        x_upper,
        x_lower,
        p,
    }
}

/// `y'/y` at `z = sqrt(x)` via the three-term recurrence over the degree;
/// policy restricts this to `n < 10`.
pub fn ratio_from_recurrence<S: RealScalar>(n: usize, alpha: &S, x: &S) -> Result<S> {
    let z = x.sqrt();
    // R_0 = alpha + 1 - x; R_k = ((2k+alpha+1-x) - (k+alpha)/R_{k-1})/(k+1)
    let mut r = alpha.clone() + S::one() - x.clone();
    if r.is_zero() {
        return Err(Error::RatioBlowup(x.to_f64()));
    }
    for k in 1..n {
        let kf = S::from_i64(k as i64);
        let lead = S::from_i64(2 * k as i64) + alpha.clone() + S::one() - x.clone();
        r = (lead - (kf.clone() + alpha.clone()) / r) / (kf + S::one());
        if r.is_zero() {
            return Err(Error::RatioBlowup(x.to_f64()));
        }
    }
    // (2n + alpha + 1/2)/z - z - 2(n+alpha)/(z R_{n-1}(x))
    let lead = S::from_i64(2 * n as i64) + alpha.clone() + S::one().half();
    let nf = S::from_i64(n as i64);
    Ok(lead / z.clone() - z.clone() - S::from_i64(2) * (nf + alpha.clone()) / (z * r))
}

/// Continued fraction for the minimal-solution ratio
/// `r = L_n^{(alpha)} / L_n^{(alpha-1)}` via modified Lentz; returns the
/// ratio and the depth used.
fn cf_minimal_ratio<S: RealScalar>(
    n: usize,
    alpha: &S,
    x: &S,
    tol: &S,
    max_depth: u32,
) -> Result<(S, u32)> {
    let tiny = S::from_f64(1e-300);
    let nf = S::from_i64(n as i64);
    let mut f = tiny.clone();
    let mut c = f.clone();
    let mut d = S::zero();
    for k in 0..max_depth {
        let beta = alpha.clone() + S::from_i64(k as i64);
        let a = -((nf.clone() + beta.clone()) / x.clone());
        let b = -(S::one() + beta / x.clone());
        d = b.clone() + a.clone() * d;
        if d.is_zero() {
            d = tiny.clone();
        }
        c = b + a / c;
        if c.is_zero() {
            c = tiny.clone();
        }
        d = d.recip();
        let delta = c.clone() * d.clone();
        f = f * delta.clone();
        if (delta - S::one()).abs() < *tol {
            return Ok((f, k + 1));
        }
    }
    Err(Error::CfNoConvergence(max_depth))
}

fn cf_depth_cap(x: &impl RealScalar) -> u32 {
    // Convergence sets in once the recurrence index passes ~e*x; pad for the
    // digit-dependent tail.
    500 + (3.0 * x.to_f64().max(0.0)).ceil() as u32
}

/// `y'/y` at `z = sqrt(x)` via the alpha-direction continued fraction
/// (Pincherle: the CF converges to the minimal-solution ratio).
pub fn ratio_from_cf<S: RealScalar>(n: usize, alpha: &S, x: &S, tol: &S) -> Result<S> {
    let (r, _) = cf_minimal_ratio(n, alpha, x, tol, cf_depth_cap(x))?;
    let z = x.sqrt();
    // (1/2 - alpha)/z - z + 2(n+alpha)/(z r)
    let nf = S::from_i64(n as i64);
    Ok((S::one().half() - alpha.clone()) / z.clone() - z.clone()
        + S::from_i64(2) * (nf + alpha.clone()) / (z * r))
}

/// Ratio dispatcher: degree recurrence for `n < 10`, CF otherwise, with the
/// perturb-and-retry recovery for exact poles.
fn ratio_at<S: RealScalar>(n: usize, alpha: &S, z: &S, tol: &S, cost: &mut u64) -> Result<S> {
    let x = z.clone() * z.clone();
    let mut shift = 8.0;
    let mut xp = x.clone();
    for _ in 0..3 {
        let out = if n < 10 {
            *cost += n as u64;
            ratio_from_recurrence(n, alpha, &xp)
        } else {
            match cf_minimal_ratio(n, alpha, &xp, tol, cf_depth_cap(&xp)) {
                Ok((r, depth)) => {
                    *cost += depth as u64;
                    let zz = xp.sqrt();
                    let nf = S::from_i64(n as i64);
                    Ok((S::one().half() - alpha.clone()) / zz.clone() - zz.clone()
                        + S::from_i64(2) * (nf + alpha.clone()) / (zz * r))
                }
                Err(e) => Err(e),
            }
        };
        match out {
            Err(Error::RatioBlowup(_)) => {
                let bump = S::one() + S::unit_roundoff() * S::from_f64(shift);
                xp = x.clone() * bump;
                shift *= 8.0;
            }
            other => return other,
        }
    }
    Err(Error::RatioBlowup(x.to_f64()))
}

/// Derivative table for the 7-term recurrence of
/// `P y'' + Q y = 0`, `P = z^2`, `Q = -z^4 + 2 L z^2 + 1/4 - alpha^2`.
#[derive(Clone, Debug)]
pub struct LaguerreTaylorState<S> {
    big_l: S,
    quarter_minus_alpha_sq: S,
    center: S,
    // polynomial values at the center
    p: S,
    p1: S,
    q: S,
    q1: S,
    q2: S,
    q3: S,
    derivs: Vec<S>,
}

impl<S: RealScalar> LaguerreTaylorState<S> {
    pub fn new(n: usize, alpha: &S, center: S, y: S, yp: S) -> Self {
        let big_l = S::from_i64(2 * n as i64) + alpha.clone() + S::one();
        let quarter_minus_alpha_sq =
            S::one() / S::from_i64(4) - alpha.clone() * alpha.clone();
        let mut st = LaguerreTaylorState {
            big_l,
            quarter_minus_alpha_sq,
            center: S::zero(),
            p: S::zero(),
            p1: S::zero(),
            q: S::zero(),
            q1: S::zero(),
            q2: S::zero(),
            q3: S::zero(),
            derivs: vec![y, yp],
        };
        st.recenter(center);
        st
    }

    pub fn center(&self) -> &S {
        &self.center
    }

    pub fn value(&self) -> (&S, &S) {
        (&self.derivs[0], &self.derivs[1])
    }

    fn recenter(&mut self, z: S) {
        let two = S::from_i64(2);
        let four = S::from_i64(4);
        let z2 = z.clone() * z.clone();
        let z3 = z2.clone() * z.clone();
        let z4 = z2.clone() * z2.clone();
        self.p = z2.clone();
        self.p1 = two.clone() * z.clone();
        self.q = -z4 + two.clone() * self.big_l.clone() * z2.clone()
            + self.quarter_minus_alpha_sq.clone();
        self.q1 = -(four.clone() * z3.clone()) + four.clone() * self.big_l.clone() * z.clone();
        self.q2 = -(S::from_i64(12) * z2) + four * self.big_l.clone();
        self.q3 = -(S::from_i64(24) * z.clone());
        self.center = z;
    }

    fn grow_to(&mut self, order: usize) {
        while self.derivs.len() <= order {
            let j = (self.derivs.len() - 2) as i64;
            let d = &self.derivs;
            let m = d.len();
            // y^(j+2) = -( j P' y^(j+1) + (j(j-1) + Q) y^(j) + j Q' y^(j-1)
            //   + C(j,2) Q'' y^(j-2) + C(j,3) Q''' y^(j-3) + C(j,4) Q'''' y^(j-4) ) / P
            let mut acc = S::from_i64(j) * self.p1.clone() * d[m - 1].clone();
            acc = acc + (S::from_i64(j * (j - 1)) + self.q.clone()) * d[m - 2].clone();
            if j >= 1 {
                acc = acc + S::from_i64(j) * self.q1.clone() * d[m - 3].clone();
            }
            if j >= 2 {
                let c2 = j * (j - 1) / 2;
                acc = acc + S::from_i64(c2) * self.q2.clone() * d[m - 4].clone();
            }
            if j >= 3 {
                let c3 = j * (j - 1) * (j - 2) / 6;
                acc = acc + S::from_i64(c3) * self.q3.clone() * d[m - 5].clone();
            }
            if j >= 4 {
                let c4 = j * (j - 1) * (j - 2) * (j - 3) / 24;
                acc = acc + S::from_i64(-24 * c4) * d[m - 6].clone();
            }
            self.derivs.push(-(acc / self.p.clone()));
        }
    }

    /// Local series for `(y, y')` at `target`, re-centering there. The series
    /// radius is the distance to the `z = 0` singularity: requires
    /// `|target - center| < center`.
    pub fn evaluate_at(
        &mut self,
        target: &S,
        tol: &S,
        limits: &TermLimits,
    ) -> Result<(S, S, u32)> {
        let h = target.clone() - self.center.clone();
        if h.is_zero() {
            return Ok((self.derivs[0].clone(), self.derivs[1].clone(), 1));
        }
        if h.abs() >= self.center {
            return Err(Error::OutsideDisc {
                center: self.center.to_f64(),
                target: target.to_f64(),
            });
        }
        let mut sum_y = S::zero();
        let mut sum_yp = S::zero();
        let mut hpow = S::one();
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
        self.recenter(target.clone());
        self.derivs.clear();
        self.derivs.push(sum_y.clone());
        self.derivs.push(sum_yp.clone());
        Ok((sum_y, sum_yp, terms))
    }

    /// As [`Self::evaluate_at`] with recursive step halving on term-budget
    /// overrun; midpoints of positive endpoints stay inside the disc.
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

/// Plain Taylor sweep evaluator on a prepared state.
pub struct TaylorEvaluator<S: RealScalar> {
    state: LaguerreTaylorState<S>,
    tol: S,
    limits: TermLimits,
    cost: u64,
}

impl<S: RealScalar> TaylorEvaluator<S> {
    pub fn new(state: LaguerreTaylorState<S>, digits: u32) -> Self {
        TaylorEvaluator {
            state,
            tol: pow10_neg::<S>(digits),
            limits: TermLimits::for_digits(digits),
            cost: 0,
        }
    }
}

impl<S: RealScalar> Evaluator<S> for TaylorEvaluator<S> {
    fn eval_at(&mut self, target: &S, _raw_step: &S) -> Result<(S, S)> {
        let (y, yp, terms) = self.state.evaluate_splitting(target, &self.tol, &self.limits)?;
        self.cost += terms as u64;
        Ok((y, yp))
    }
    fn cost(&self) -> u64 {
        self.cost
    }
}

/// Forward-sweep evaluator: ratio evaluations (CF or recurrence) for the
/// first `cf_nodes` nodes, then a Taylor state seeded `(0, 1)` at the last
/// ratio-converged node. When `cf_nodes = 0` it starts with a prepared
/// Taylor state.
struct ForwardEvaluator<S: RealScalar> {
    n: usize,
    alpha: S,
    cf_remaining: usize,
    taylor: Option<TaylorEvaluator<S>>,
    digits: u32,
    tol: S,
    ratio_cost: u64,
}

impl<S: RealScalar> ForwardEvaluator<S> {
    fn ratio_phase(n: usize, alpha: S, cf_nodes: usize, digits: u32) -> Self {
        ForwardEvaluator {
            n,
            alpha,
            cf_remaining: cf_nodes,
            taylor: None,
            digits,
            tol: pow10_neg::<S>(digits),
            ratio_cost: 0,
        }
    }

    fn taylor_phase(n: usize, alpha: S, state: LaguerreTaylorState<S>, digits: u32) -> Self {
        ForwardEvaluator {
            n,
            alpha,
            cf_remaining: 0,
            taylor: Some(TaylorEvaluator::new(state, digits)),
            digits,
            tol: pow10_neg::<S>(digits),
            ratio_cost: 0,
        }
    }

    fn ratio_nodes_used(&self, cf_nodes: usize) -> usize {
        cf_nodes - self.cf_remaining
    }
}

impl<S: RealScalar> Evaluator<S> for ForwardEvaluator<S> {
    fn eval_at(&mut self, target: &S, raw_step: &S) -> Result<(S, S)> {
        match &mut self.taylor {
            Some(t) => t.eval_at(target, raw_step),
            None => {
                let r = ratio_at(self.n, &self.alpha, target, &self.tol, &mut self.ratio_cost)?;
                // Per-point normalization (y, y') = (1, ratio); placeholder
                // derivative values, re-joined after the sweep.
                Ok((S::one(), r))
            }
        }
    }

    fn node_accepted(&mut self, node: &S) -> Result<()> {
        if self.taylor.is_none() {
            self.cf_remaining -= 1;
            if self.cf_remaining == 0 {
                let state =
                    LaguerreTaylorState::new(self.n, &self.alpha, node.clone(), S::zero(), S::one());
                self.taylor = Some(TaylorEvaluator::new(state, self.digits));
            }
        }
        Ok(())
    }

    fn cost(&self) -> u64 {
        self.ratio_cost + self.taylor.as_ref().map_or(0, |t| t.cost)
    }
}

/// Nodes in the z variable with consistently normalized derivative values and
/// the bookkeeping the weight normalization needs.
#[derive(Clone, Debug)]
pub struct LaguerreNodes<S> {
    pub n: usize,
    pub alpha: S,
    /// Ascending z nodes.
    pub nodes_z: Vec<S>,
    /// `y'(z_i)` under one sweep-wide normalization.
    pub derivatives: Vec<S>,
    /// Index of the reference node (first above `z_e`, or nearest it).
    pub ref_index: usize,
    /// How many leading forward nodes were ratio-converged and re-joined.
    pub cf_seeded: usize,
    /// Count of nodes found below `z_e` by the descending sweep.
    pub backward_count: usize,
    /// All derivative values share one normalization (re-join done).
    pub normalization_joined: bool,
    pub stats: IterationStats,
}

/// Start point, sweep plan, and CF policy resolved from `(n, alpha)`.
fn cf_nodes_policy<S: RealScalar>(n: usize, alpha: &S) -> usize {
    if *alpha >= S::from_i64(2) {
        0
    } else {
        n.min(2)
    }
}

/// Computes all `n` nodes of the degree-`n` rule.
pub fn nodes<S: RealScalar>(n: usize, alpha: &S, stop: &StopRule<S>) -> Result<LaguerreNodes<S>> {
    let coeff = LaguerreCoefficient::new(n, alpha.clone())?;
    let zb = bounds(n, alpha);
    if !zb.x_upper.is_finite() || !zb.x_lower.is_finite() || zb.x_lower.is_zero() {
        // alpha so large the zero bounds leave the representable range
        return Err(Error::Unrepresentable(alpha.to_f64()));
    }
    let z_upper = zb.x_upper.sqrt();
    let z_lower = zb.x_lower.sqrt();
    let nudge_down = S::one() - S::unit_roundoff() * S::from_i64(16);
    let digits = stop.digits;
    let mut ratio_probe_cost = 0u64;

    match coeff.extremum_z() {
        None => {
            // |alpha| <= 1/2: single ascending sweep from below the smallest
            // zero; ratio evaluations for the first two nodes.
            let start = z_lower.clone() * nudge_down;
            let cf_nodes = cf_nodes_policy(n, alpha).max(1);
            let mut evaluator = ForwardEvaluator::ratio_phase(n, alpha.clone(), cf_nodes, digits);
            let cfg = SweepConfig {
                start,
                direction: Direction::Ascending,
                stop_after: SweepStop::Count(n),
                rule: stop.clone(),
                atanh_recovery_floor: None,
            };
            let outcome = sweep(&cfg, &coeff, &mut evaluator)?;
            let cf_used = evaluator.ratio_nodes_used(cf_nodes);
            let mut set = LaguerreNodes {
                n,
                alpha: alpha.clone(),
                nodes_z: outcome.nodes,
                derivatives: outcome.derivatives,
                ref_index: 0,
                cf_seeded: cf_used,
                backward_count: 0,
                normalization_joined: false,
                stats: outcome.stats,
            };
            rejoin_forward_derivatives(&mut set, stop)?;
            finish(set)
        }
        Some(z_e) => {
            // |alpha| > 1/2: ascending sweep above z_e (bound-stopped), then
            // descending below it.
            let cf_nodes = cf_nodes_policy(n, alpha);
            let mut start = z_e.clone();
            let mut seed_state = None;
            if cf_nodes == 0 {
                let (s, state) = seed_at(&coeff, start.clone(), digits, &mut ratio_probe_cost)?;
                start = s;
                seed_state = Some(state);
            }
            let mut evaluator = match &seed_state {
                Some(state) => {
                    ForwardEvaluator::taylor_phase(n, alpha.clone(), state.clone(), digits)
                }
                None => ForwardEvaluator::ratio_phase(n, alpha.clone(), cf_nodes, digits),
            };
            let cfg = SweepConfig {
                start: start.clone(),
                direction: Direction::Ascending,
                stop_after: SweepStop::CountOrBound(n, z_upper.clone()),
                rule: stop.clone(),
                atanh_recovery_floor: None,
            };
            let fwd = sweep(&cfg, &coeff, &mut evaluator)?;
            let n_forward = fwd.nodes.len();
            let cf_used = if cf_nodes > 0 {
                evaluator.ratio_nodes_used(cf_nodes)
            } else {
                0
            };

            let mut set = LaguerreNodes {
                n,
                alpha: alpha.clone(),
                nodes_z: fwd.nodes,
                derivatives: fwd.derivatives,
                ref_index: 0,
                cf_seeded: cf_used,
                backward_count: 0,
                normalization_joined: false,
                stats: fwd.stats,
            };

            // Establish a state at z_e consistent with the forward values.
            // The one-seed case keeps a pristine copy of the z_e seed, which
            // both sweeps share; the ratio-phase case re-anchors on the last
            // CF-converged node and walks down to z_e.
            let mut back_start = start.clone();
            let state_at_ze = if let Some(pristine) = &seed_state {
                set.normalization_joined = true;
                if n_forward < n {
                    Some(pristine.clone())
                } else {
                    None
                }
            } else if n_forward == 0 {
                // No zeros above z_e and no values recorded: fresh seed,
                // normalization free.
                let (s, state) = seed_at(&coeff, start.clone(), digits, &mut ratio_probe_cost)?;
                set.normalization_joined = true;
                back_start = s;
                Some(state)
            } else if n_forward < n {
                Some(rejoin_and_state_at(&mut set, stop, Some(start.clone()))?)
            } else {
                rejoin_forward_derivatives(&mut set, stop)?;
                None
            };

            let remaining = n - n_forward;
            if remaining > 0 {
                let state = state_at_ze.expect("state prepared for backward sweep");
                let mut back_eval = TaylorEvaluator::new(state, digits);
                let back_cfg = SweepConfig {
                    start: back_start,
                    direction: Direction::Descending,
                    stop_after: SweepStop::Count(remaining),
                    rule: stop.clone(),
                    atanh_recovery_floor: Some(z_lower.clone() * nudge_down),
                };
                let back = sweep(&back_cfg, &coeff, &mut back_eval)?;
                prepend_descending(&mut set, back);
            }
            set.ref_index = if n_forward > 0 {
                set.backward_count
            } else {
                n - 1
            };
            finish(set)
        }
    }
}

/// Seeds a Taylor state at `z` from one ratio evaluation:
/// `(y, y') = (h, 1)` with `h = y/y'`, or `(1, 1/h)` when `|h| > 1`.
/// Perturbs `z` upward once if it falls exactly on a zero.
fn seed_at<S: RealScalar>(
    coeff: &LaguerreCoefficient<S>,
    z: S,
    digits: u32,
    cost: &mut u64,
) -> Result<(S, LaguerreTaylorState<S>)> {
    let tol = pow10_neg::<S>(digits);
    let mut zp = z;
    for attempt in 0..2 {
        let r = ratio_at(coeff.n, &coeff.alpha, &zp, &tol, cost)?;
        if !r.is_finite() {
            // exactly on a zero: h = 0
            if attempt == 0 {
                zp = zp * (S::one() + S::unit_roundoff() * S::from_i64(16));
                continue;
            }
            return Err(Error::RatioBlowup(zp.to_f64()));
        }
        let (y, yp) = if r.abs() >= S::one() {
            (r.clone().recip(), S::one())
        } else {
            (S::one(), r.clone())
        };
        let state = LaguerreTaylorState::new(coeff.n, &coeff.alpha, zp.clone(), y, yp);
        return Ok((zp, state));
    }
    unreachable!()
}

/// Replaces the placeholder derivative values of ratio-converged leading
/// nodes with values from the seeded Taylor normalization.
fn rejoin_forward_derivatives<S: RealScalar>(
    set: &mut LaguerreNodes<S>,
    stop: &StopRule<S>,
) -> Result<()> {
    rejoin_inner(set, stop, None).map(|_| ())
}

/// As [`rejoin_forward_derivatives`], then walks the state down to `z_e` and
/// returns it positioned there for the descending sweep.
fn rejoin_and_state_at<S: RealScalar>(
    set: &mut LaguerreNodes<S>,
    stop: &StopRule<S>,
    z_e: Option<S>,
) -> Result<LaguerreTaylorState<S>> {
    rejoin_inner(set, stop, z_e).map(|s| s.expect("state requested"))
}

fn rejoin_inner<S: RealScalar>(
    set: &mut LaguerreNodes<S>,
    stop: &StopRule<S>,
    walk_to: Option<S>,
) -> Result<Option<LaguerreTaylorState<S>>> {
    let k = set.cf_seeded;
    if k == 0 {
        // Nothing to re-join: the sweep ran on a single Taylor seed whose
        // state the caller owns.
        set.normalization_joined = true;
        debug_assert!(walk_to.is_none(), "one-seed sweeps keep their own state");
        return Ok(None);
    }
    // The last ratio-converged node anchors the Taylor normalization with
    // (y, y') = (0, 1).
    let anchor_idx = k - 1;
    let anchor = set.nodes_z[anchor_idx].clone();
    let mut state = LaguerreTaylorState::new(set.n, &set.alpha, anchor, S::zero(), S::one());
    set.derivatives[anchor_idx] = S::one();
    // Earlier ratio nodes get their derivatives recomputed by stepping the
    // state down through them.
    for i in (0..anchor_idx).rev() {
        let target = set.nodes_z[i].clone();
        let (_, yp) = walk(&mut state, &target, stop)?;
        set.derivatives[i] = yp;
    }
    set.normalization_joined = true;
    match walk_to {
        Some(ze) => {
            walk(&mut state, &ze, stop)?;
            Ok(Some(state))
        }
        None => Ok(None),
    }
}

fn walk<S: RealScalar>(
    state: &mut LaguerreTaylorState<S>,
    target: &S,
    stop: &StopRule<S>,
) -> Result<(S, S)> {
    let tol = pow10_neg::<S>(stop.digits);
    let limits = TermLimits::for_digits(stop.digits);
    let (y, yp, _) = state.evaluate_splitting(target, &tol, &limits)?;
    Ok((y, yp))
}

/// Splices descending-sweep output (decreasing z) in front of the ascending
/// nodes.
fn prepend_descending<S: RealScalar>(set: &mut LaguerreNodes<S>, back: SweepOutcome<S>) {
    let b = back.nodes.len();
    let mut nodes = Vec::with_capacity(b + set.nodes_z.len());
    let mut derivs = Vec::with_capacity(b + set.derivatives.len());
    for i in (0..b).rev() {
        nodes.push(back.nodes[i].clone());
        derivs.push(back.derivatives[i].clone());
    }
    nodes.append(&mut set.nodes_z);
    derivs.append(&mut set.derivatives);
    set.nodes_z = nodes;
    set.derivatives = derivs;
    set.backward_count = b;
    set.stats.merge(&back.stats);
}

fn finish<S: RealScalar>(set: LaguerreNodes<S>) -> Result<LaguerreNodes<S>> {
    if set.nodes_z.len() != set.n {
        return Err(Error::CountMismatch {
            expected: set.n,
            got: set.nodes_z.len(),
        });
    }
    for w in set.nodes_z.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::CountMismatch {
                expected: set.n,
                got: set.nodes_z.len(),
            });
        }
    }
    Ok(set)
}

/// Weights normalized to one and the matching scaled weights.
///
/// `omega_bar_i = |y'(z_i)|^{-2}`, unscaled relative to the reference node j:
/// `w_bar_i = omega_bar_i exp(F_i)`, `F_i = x_j - x_i + (alpha+1/2) ln(x_i/x_j)`;
/// then `lambda = sum w_bar` and `w_hat = w_bar/lambda`.
pub fn weights<S: RealScalar>(set: &LaguerreNodes<S>) -> Result<(Vec<S>, Vec<S>)> {
    if !set.normalization_joined {
        return Err(Error::InconsistentNormalization);
    }
    let n = set.nodes_z.len();
    let alpha_half = set.alpha.clone() + S::one().half();
    let x: Vec<S> = set.nodes_z.iter().map(|z| z.clone() * z.clone()).collect();
    let x_ref = x[set.ref_index].clone();

    let mut omega_bar = Vec::with_capacity(n);
    let mut w_bar = Vec::with_capacity(n);
    for i in 0..n {
        let yp = &set.derivatives[i];
        if yp.is_zero() {
            return Err(Error::ZeroDerivative(set.nodes_z[i].to_f64()));
        }
        let om = (yp.clone() * yp.clone()).recip();
        let f = x_ref.clone() - x[i].clone()
            + alpha_half.clone() * (x[i].clone() / x_ref.clone()).ln();
        w_bar.push(om.clone() * f.exp());
        omega_bar.push(om);
    }
    let lambda = compensated_sum(w_bar.iter().cloned());
    let w_hat = w_bar.into_iter().map(|w| w / lambda.clone()).collect();
    let omega_hat = omega_bar.into_iter().map(|o| o / lambda.clone()).collect();
    Ok((w_hat, omega_hat))
}

/// The full n-point Gauss-Laguerre rule, weights normalized to one.
pub fn rule<S: RealScalar>(n: usize, alpha: S) -> Result<QuadratureRule<S>> {
    let stop = StopRule::for_digits(S::digits()).with_confirmation();
    let set = nodes(n, &alpha, &stop)?;
    let (w_hat, omega_hat) = weights(&set)?;
    let rule = QuadratureRule {
        kind: QuadratureKind::Laguerre { alpha },
        degree: n,
        nodes: set.nodes_z.iter().map(|z| z.clone() * z.clone()).collect(),
        weights: w_hat,
        scaled_weights: omega_hat,
        derivatives: set.derivatives,
        boundary_weight: None,
        stats: set.stats,
    };
    rule.validate()?;
    Ok(rule)
}

/// Gauss-Radau-Laguerre rule with the fixed node at `x = 0` (`r = 1`).
///
/// Internal nodes are the zeros of `L_n^{(alpha+1)}`; internal weights are
/// `w_i / x_i` of the `(n, alpha+1)` rule. Everything is normalized by
/// `Gamma(alpha+1)`: the boundary weight becomes `1 / C(n+alpha+1, n)` and
/// the internal ones `(alpha+1) w_hat_i / x_i`.
pub fn radau_rule<S: RealScalar>(n: usize, alpha: S) -> Result<QuadratureRule<S>> {
    let inner = rule(n, alpha.clone() + S::one())?;
    let alpha_plus_one = alpha.clone() + S::one();
    let weights: Vec<S> = inner
        .weights
        .iter()
        .zip(inner.nodes.iter())
        .map(|(w, x)| alpha_plus_one.clone() * w.clone() / x.clone())
        .collect();
    let scaled: Vec<S> = inner
        .scaled_weights
        .iter()
        .map(|o| alpha_plus_one.clone() * o.clone())
        .collect();
    let boundary = (-ln_binomial_shifted(n, &alpha)).exp();
    let rule = QuadratureRule {
        kind: QuadratureKind::RadauLaguerre { alpha },
        degree: n,
        nodes: inner.nodes,
        weights,
        scaled_weights: scaled,
        derivatives: inner.derivatives,
        boundary_weight: Some(boundary),
        stats: inner.stats,
    };
    rule.validate()?;
    Ok(rule)
}
