//! Command-line front end: emits Gauss-Hermite, Gauss-Laguerre, and
//! Radau-Laguerre rules as CSV or JSON at a chosen working precision.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use gaussquad::barycentric;
use gaussquad::mp::{self, MpFloat};
use gaussquad::special::ln_gamma;
use gaussquad::{Error, QuadratureRule, RealScalar};

#[derive(Parser)]
#[command(
    name = "gaussquad",
    about = "Gauss-Hermite and Gauss-Laguerre quadrature nodes and weights",
    version
)]
struct Cli {
    #[command(subcommand)]
    family: Family,
}

#[derive(Subcommand)]
enum Family {
    /// Gauss-Hermite rule: weight e^(-x^2) on the whole real line.
    Hermite(CommonArgs),
    /// Gauss-Laguerre rule: weight x^alpha e^(-x) on x > 0.
    Laguerre(LaguerreArgs),
    /// Gauss-Radau-Laguerre rule with a fixed node at x = 0.
    RadauLaguerre(LaguerreArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Number of nodes (internal nodes for radau-laguerre).
    #[arg(long)]
    n: usize,
    /// Working precision in decimal digits (8..=16 runs in double precision,
    /// larger values in big-float arithmetic).
    #[arg(long, default_value_t = 16)]
    digits: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Drop rows whose unscaled weight falls below this value; scaled weights
    /// of retained rows are unaffected.
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,
    /// Add the barycentric interpolation weight column v.
    #[arg(long)]
    barycentric: bool,
    /// Append mean iteration and Taylor-term counts per node.
    #[arg(long)]
    stats: bool,
}

#[derive(Args)]
struct LaguerreArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Laguerre parameter; must exceed -1.
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    /// Emit weights scaled by Gamma(alpha+1) instead of normalized to one.
    #[arg(long)]
    gamma_scale: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

struct Request<'a> {
    kind: &'static str,
    n: usize,
    alpha: Option<&'a str>,
    digits: u32,
    format: Format,
    threshold: f64,
    barycentric: bool,
    stats: bool,
    gamma_scale: bool,
}

/// Everything the two output formats need, numbers already rendered.
struct Table {
    kind: &'static str,
    n: usize,
    alpha: Option<String>,
    /// (index in the full rule, x, w, omega, v)
    rows: Vec<(usize, String, String, String, Option<String>)>,
    boundary_weight: Option<String>,
    stats: Option<(f64, f64)>,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = Cli::parse();
    let (common, alpha, gamma_scale, kind) = match &cli.family {
        Family::Hermite(c) => (c, None, false, "hermite"),
        Family::Laguerre(a) => (&a.common, Some(a.alpha.as_str()), a.gamma_scale, "laguerre"),
        Family::RadauLaguerre(a) => (
            &a.common,
            Some(a.alpha.as_str()),
            a.gamma_scale,
            "radau-laguerre",
        ),
    };
    if common.n < 1 {
        eprintln!("error: --n must be at least 1");
        return 2;
    }
    if common.digits < 8 {
        eprintln!("error: --digits must be at least 8");
        return 2;
    }
    if !(common.threshold >= 0.0) {
        eprintln!("error: --threshold must be nonnegative");
        return 2;
    }
    let req = Request {
        kind,
        n: common.n,
        alpha,
        digits: common.digits,
        format: common.format,
        threshold: common.threshold,
        barycentric: common.barycentric,
        stats: common.stats,
        gamma_scale,
    };

    let table = if req.digits <= 16 {
        build_table::<f64>(&req)
    } else {
        mp::with_digits(req.digits, || build_table::<MpFloat>(&req))
    };
    match table {
        Ok(table) => {
            let mut out = String::new();
            match req.format {
                Format::Csv => write_csv(&table, &mut out),
                Format::Json => write_json(&table, &mut out),
            }
            println!("{out}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::DegreeZero | Error::AlphaOutOfRange(_) | Error::Unrepresentable(_) => 2,
                _ => 1,
            }
        }
    }
}

fn build_table<S: RealScalar>(req: &Request) -> Result<Table, Error> {
    let alpha: Option<S> = match req.alpha {
        Some(s) => Some(
            S::parse_decimal(s.trim())
                .filter(|a| a.is_finite())
                .ok_or(Error::AlphaOutOfRange(f64::NAN))?,
        ),
        None => None,
    };

    let rule: QuadratureRule<S> = match req.kind {
        "hermite" => gaussquad::hermite_rule(req.n)?,
        "laguerre" => gaussquad::laguerre_rule(req.n, alpha.clone().unwrap())?,
        "radau-laguerre" => gaussquad::radau_laguerre_rule(req.n, alpha.clone().unwrap())?,
        _ => unreachable!(),
    };

    // Optional rescale of the normalized Laguerre weights by Gamma(alpha+1).
    let (weights, scaled, boundary) = if req.gamma_scale {
        let a1 = alpha.clone().unwrap() + S::one();
        let lg = ln_gamma(&a1);
        let g = lg.exp();
        if !g.is_finite() || g.is_zero() {
            return Err(Error::Unrepresentable(lg.to_f64()));
        }
        (
            rule.weights.iter().map(|w| w.clone() * g.clone()).collect(),
            rule.scaled_weights
                .iter()
                .map(|o| o.clone() * g.clone())
                .collect::<Vec<_>>(),
            rule.boundary_weight.clone().map(|b| b * g),
        )
    } else {
        (
            rule.weights.clone(),
            rule.scaled_weights.clone(),
            rule.boundary_weight.clone(),
        )
    };

    let v = if req.barycentric {
        Some(barycentric::weights(&rule)?)
    } else {
        None
    };

    let d = req.digits as usize;
    let threshold = S::from_f64(req.threshold);
    let mut rows = Vec::new();
    for i in 0..rule.nodes.len() {
        if weights[i] < threshold {
            continue;
        }
        rows.push((
            i + 1,
            rule.nodes[i].to_decimal_string(d),
            weights[i].to_decimal_string(d),
            scaled[i].to_decimal_string(d),
            v.as_ref().map(|v| v[i].to_decimal_string(d)),
        ));
    }

    Ok(Table {
        kind: req.kind,
        n: req.n,
        alpha: alpha.map(|a| a.to_decimal_string(d)),
        rows,
        boundary_weight: boundary.map(|b| b.to_decimal_string(d)),
        stats: req
            .stats
            .then(|| (rule.stats.mean_iterations(), rule.stats.mean_terms())),
    })
}

fn write_csv(table: &Table, out: &mut String) {
    if let Some(a) = &table.alpha {
        out.push_str(&format!("# alpha={a}\n"));
    }
    let header = if table.rows.first().is_some_and(|r| r.4.is_some()) {
        "i,x,w,omega,v"
    } else {
        "i,x,w,omega"
    };
    out.push_str(header);
    for (i, x, w, om, v) in &table.rows {
        out.push('\n');
        match v {
            Some(v) => out.push_str(&format!("{i},{x},{w},{om},{v}")),
            None => out.push_str(&format!("{i},{x},{w},{om}")),
        }
    }
    if let Some(b) = &table.boundary_weight {
        out.push_str(&format!("\n# boundary_weight={b}"));
    }
    if let Some((mi, mt)) = table.stats {
        out.push_str(&format!("\n# mean_iterations={mi}"));
        out.push_str(&format!("\n# mean_terms={mt}"));
    }
}

fn write_json(table: &Table, out: &mut String) {
    let mut obj = Map::new();
    obj.insert("kind".into(), Value::String(table.kind.into()));
    obj.insert("n".into(), json!(table.n));
    if let Some(a) = &table.alpha {
        obj.insert("alpha".into(), Value::String(a.clone()));
    }
    let col = |f: fn(&(usize, String, String, String, Option<String>)) -> Value| {
        Value::Array(table.rows.iter().map(f).collect())
    };
    obj.insert("indices".into(), col(|r| json!(r.0)));
    obj.insert("nodes".into(), col(|r| Value::String(r.1.clone())));
    obj.insert("weights".into(), col(|r| Value::String(r.2.clone())));
    obj.insert("scaled_weights".into(), col(|r| Value::String(r.3.clone())));
    if table.rows.first().is_some_and(|r| r.4.is_some()) {
        obj.insert(
            "barycentric".into(),
            col(|r| Value::String(r.4.clone().unwrap())),
        );
    }
    if let Some(b) = &table.boundary_weight {
        obj.insert("boundary_weight".into(), Value::String(b.clone()));
    }
    if let Some((mi, mt)) = table.stats {
        obj.insert(
            "stats".into(),
            json!({"mean_iterations": mi, "mean_terms": mt}),
        );
    }
    out.push_str(&Value::Object(obj).to_string());
}
