//! Finished quadrature rules and their serialization.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::scalar::RealScalar;

/// Which classical rule a [`QuadratureRule`] represents.
#[derive(Clone, Debug, PartialEq)]
pub enum QuadratureKind<S: RealScalar> {
    Hermite,
    Laguerre { alpha: S },
    RadauLaguerre { alpha: S },
}

impl<S: RealScalar> QuadratureKind<S> {
    pub fn alpha(&self) -> Option<&S> {
        match self {
            QuadratureKind::Hermite => None,
            QuadratureKind::Laguerre { alpha } | QuadratureKind::RadauLaguerre { alpha } => {
                Some(alpha)
            }
        }
    }

    /// Weight integrability requires alpha > -1 for the Laguerre families.
    pub fn validate(&self) -> Result<()> {
        if let Some(a) = self.alpha() {
            if *a <= -S::one() {
                return Err(Error::AlphaOutOfRange(a.to_f64()));
            }
        }
        Ok(())
    }

    fn name(&self) -> &'static str {
        match self {
            QuadratureKind::Hermite => "hermite",
            QuadratureKind::Laguerre { .. } => "laguerre",
            QuadratureKind::RadauLaguerre { .. } => "radau-laguerre",
        }
    }
}

/// Per-node iteration counts and Taylor-term totals for one rule build.
#[derive(Clone, Debug, Default)]
pub struct IterationStats {
    per_node_iterations: Vec<u32>,
    per_node_terms: Vec<u32>,
    mean_iterations: f64,
    mean_terms: f64,
}

impl IterationStats {
    pub fn record(&mut self, iterations: u32, terms: u32) {
        self.per_node_iterations.push(iterations);
        self.per_node_terms.push(terms);
        let n = self.per_node_iterations.len() as f64;
        self.mean_iterations = self.per_node_iterations.iter().map(|&v| v as f64).sum::<f64>() / n;
        self.mean_terms = self.per_node_terms.iter().map(|&v| v as f64).sum::<f64>() / n;
    }

    pub fn merge(&mut self, other: &IterationStats) {
        for (&it, &tm) in other
            .per_node_iterations
            .iter()
            .zip(other.per_node_terms.iter())
        {
            self.record(it, tm);
        }
    }

    pub fn from_means(mean_iterations: f64, mean_terms: f64) -> Self {
        IterationStats {
            per_node_iterations: Vec::new(),
            per_node_terms: Vec::new(),
            mean_iterations,
            mean_terms,
        }
    }

    pub fn node_count(&self) -> usize {
        self.per_node_iterations.len()
    }

    pub fn iterations(&self) -> &[u32] {
        &self.per_node_iterations
    }

    pub fn taylor_terms(&self) -> &[u32] {
        &self.per_node_terms
    }

    pub fn mean_iterations(&self) -> f64 {
        self.mean_iterations
    }

    pub fn mean_terms(&self) -> f64 {
        self.mean_terms
    }
}

/// A finished n-point rule.
///
/// Nodes are ascending in the original variable. Hermite weights are the
/// unscaled `w_i` summing to sqrt(pi); Laguerre weights are normalized to one.
/// Scaled weights have the dominant elementary factor removed and stay finite
/// even where the unscaled weight underflows to zero. `derivatives` holds the
/// derivative of the normalized ODE solution at each node in the canonical
/// variable (x for Hermite, z = sqrt(x) for Laguerre); it feeds the
/// barycentric interpolation weights.
#[derive(Clone, Debug)]
pub struct QuadratureRule<S: RealScalar> {
    pub kind: QuadratureKind<S>,
    pub degree: usize,
    pub nodes: Vec<S>,
    pub weights: Vec<S>,
    pub scaled_weights: Vec<S>,
    pub derivatives: Vec<S>,
    /// Radau boundary weight at x = 0, normalized by Gamma(alpha+1).
    pub boundary_weight: Option<S>,
    pub stats: IterationStats,
}

impl<S: RealScalar> QuadratureRule<S> {
    /// Checks the structural invariants: ascending nodes, matching lengths,
    /// weights nonnegative.
    pub fn validate(&self) -> Result<()> {
        self.kind.validate()?;
        if self.degree == 0 {
            return Err(Error::DegreeZero);
        }
        let n = self.nodes.len();
        if n != self.degree
            || self.weights.len() != n
            || self.scaled_weights.len() != n
            || self.derivatives.len() != n
        {
            return Err(Error::CountMismatch {
                expected: self.degree,
                got: n,
            });
        }
        for w in self.nodes.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Serialization("nodes not strictly increasing".into()));
            }
        }
        if self
            .weights
            .iter()
            .chain(self.scaled_weights.iter())
            .any(|w| w.is_negative())
        {
            return Err(Error::Serialization("negative weight".into()));
        }
        Ok(())
    }

    /// JSON with decimal strings at full working precision (bit-exact
    /// round-trip at fixed precision).
    pub fn to_json(&self) -> String {
        self.to_json_value(None).to_string()
    }

    /// JSON value; `sig` limits significant digits (None = full precision).
    pub fn to_json_value(&self, sig: Option<usize>) -> Value {
        let fmt = |v: &S| -> Value {
            Value::String(match sig {
                Some(d) => v.to_decimal_string(d),
                None => v.to_decimal_string_full(),
            })
        };
        let mut obj = Map::new();
        obj.insert("kind".into(), Value::String(self.kind.name().into()));
        obj.insert("n".into(), json!(self.degree));
        if let Some(a) = self.kind.alpha() {
            obj.insert("alpha".into(), fmt(a));
        }
        obj.insert(
            "nodes".into(),
            Value::Array(self.nodes.iter().map(&fmt).collect()),
        );
        obj.insert(
            "weights".into(),
            Value::Array(self.weights.iter().map(&fmt).collect()),
        );
        obj.insert(
            "scaled_weights".into(),
            Value::Array(self.scaled_weights.iter().map(&fmt).collect()),
        );
        obj.insert(
            "derivatives".into(),
            Value::Array(self.derivatives.iter().map(&fmt).collect()),
        );
        if let Some(b) = &self.boundary_weight {
            obj.insert("boundary_weight".into(), fmt(b));
        }
        obj.insert(
            "stats".into(),
            json!({
                "mean_iterations": self.stats.mean_iterations(),
                "mean_terms": self.stats.mean_terms(),
            }),
        );
        Value::Object(obj)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: Value =
            serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Serialization("expected object".into()))?;
        let get = |k: &str| -> Result<&Value> {
            obj.get(k)
                .ok_or_else(|| Error::Serialization(format!("missing field {k}")))
        };
        let parse_scalar = |v: &Value| -> Result<S> {
            let s = v
                .as_str()
                .ok_or_else(|| Error::Serialization("expected decimal string".into()))?;
            S::parse_decimal(s).ok_or_else(|| Error::Serialization(format!("bad number {s}")))
        };
        let parse_vec = |v: &Value| -> Result<Vec<S>> {
            v.as_array()
                .ok_or_else(|| Error::Serialization("expected array".into()))?
                .iter()
                .map(&parse_scalar)
                .collect()
        };

        let kind_name = get("kind")?
            .as_str()
            .ok_or_else(|| Error::Serialization("bad kind".into()))?;
        let kind = match kind_name {
            "hermite" => QuadratureKind::Hermite,
            "laguerre" => QuadratureKind::Laguerre {
                alpha: parse_scalar(get("alpha")?)?,
            },
            "radau-laguerre" => QuadratureKind::RadauLaguerre {
                alpha: parse_scalar(get("alpha")?)?,
            },
            other => return Err(Error::Serialization(format!("unknown kind {other}"))),
        };
        let degree = get("n")?
            .as_u64()
            .ok_or_else(|| Error::Serialization("bad n".into()))? as usize;
        let stats_v = get("stats")?;
        let stats = IterationStats::from_means(
            stats_v["mean_iterations"].as_f64().unwrap_or(0.0),
            stats_v["mean_terms"].as_f64().unwrap_or(0.0),
        );
        let rule = QuadratureRule {
            kind,
            degree,
            nodes: parse_vec(get("nodes")?)?,
            weights: parse_vec(get("weights")?)?,
            scaled_weights: parse_vec(get("scaled_weights")?)?,
            derivatives: parse_vec(get("derivatives")?)?,
            boundary_weight: match obj.get("boundary_weight") {
                Some(b) => Some(parse_scalar(b)?),
                None => None,
            },
            stats,
        };
        rule.validate()?;
        Ok(rule)
    }

    /// Applies `f(x_i) * w_i` summed with compensation; the basic use of a rule.
    pub fn integrate(&self, f: impl Fn(&S) -> S) -> S {
        crate::scalar::compensated_sum(
            self.nodes
                .iter()
                .zip(self.weights.iter())
                .map(|(x, w)| f(x) * w.clone()),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_rule() -> QuadratureRule<f64> {
        let mut stats = IterationStats::default();
        stats.record(2, 40);
        stats.record(1, 25);
        QuadratureRule {
            kind: QuadratureKind::Laguerre { alpha: 0.5 },
            degree: 2,
            nodes: vec![0.5857864376269049, 3.414213562373095],
            weights: vec![0.8535533905932737, 0.14644660940672624],
            scaled_weights: vec![1.25, 0.75],
            derivatives: vec![-1.5, 0.25],
            boundary_weight: None,
            stats,
        }
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let rule = toy_rule();
        let s = rule.to_json();
        let back = QuadratureRule::<f64>::from_json(&s).unwrap();
        assert_eq!(back.nodes, rule.nodes);
        assert_eq!(back.weights, rule.weights);
        assert_eq!(back.scaled_weights, rule.scaled_weights);
        assert_eq!(back.derivatives, rule.derivatives);
        assert_eq!(back.to_json(), s);
    }

    #[test]
    fn stats_means_are_sums_over_node_count() {
        let mut st = IterationStats::default();
        st.record(2, 75);
        st.record(2, 70);
        st.record(1, 50);
        assert!((st.mean_iterations() - 5.0 / 3.0).abs() < 1e-15);
        assert!((st.mean_terms() - 65.0).abs() < 1e-12);
        assert!(st.iterations().iter().all(|&c| c >= 1));
    }

    #[test]
    fn validation_rejects_bad_shapes() {
        let mut rule = toy_rule();
        rule.nodes.reverse();
        assert!(rule.validate().is_err());

        let mut rule = toy_rule();
        rule.weights[0] = -1.0;
        assert!(rule.validate().is_err());

        let rule = QuadratureRule::<f64> {
            kind: QuadratureKind::Laguerre { alpha: -1.0 },
            ..toy_rule()
        };
        assert!(rule.validate().is_err());
    }

    #[test]
    fn alpha_below_minus_one_rejected() {
        let kind = QuadratureKind::Laguerre { alpha: -1.5 };
        assert!(matches!(kind.validate(), Err(Error::AlphaOutOfRange(_))));
        let kind = QuadratureKind::Laguerre { alpha: -0.999 };
        assert!(kind.validate().is_ok());
    }
}
