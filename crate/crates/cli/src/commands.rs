//! Subcommand arguments and implementations.

use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use weierdim_core::dimension::{box_count, fit_box_dimension, theoretical_dim, UNDERCOUNT_NOTE};
use weierdim_core::measures::{
    default_depth, density_histogram, local_dim_estimate, mean_and_stderr, radius_ladder,
    sample_graph_lift, sample_sbr, sample_transversal, Points, SampleSet,
};
use weierdim_core::series::{eval_f_raw, eval_s, eval_y, eval_y_dgamma, eval_y_dx};
use weierdim_core::star::{
    published_certificates, search_certificate, verify_certificate, StarCertificate,
};
use weierdim_core::thresholds::{beta_of, solve_lambda_b, solve_tilde_lambda_b};
use weierdim_core::transversality::{
    analytic_transversality_check, empirical_delta, tsujii_e_estimate, two_var_delta, DeltaConfig,
    TangencyQuery,
};
use weierdim_core::Params;

use crate::error::{usage, CliError};
use crate::parse;
use crate::report::{Report, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum What {
    #[value(name = "f")]
    F,
    #[value(name = "Y")]
    Y,
    #[value(name = "Ydx")]
    Ydx,
    #[value(name = "Ydgamma")]
    Ydgamma,
    #[value(name = "S")]
    S,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub b: u32,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub x: f64,
    #[arg(long, value_enum, default_value = "f")]
    pub what: What,
    /// Explicit digits, e.g. `0110` or `10,3,7`.
    #[arg(long, default_value = "")]
    pub word: String,
    /// Continuation after the explicit digits: `zero` or `random:SEED`.
    #[arg(long, default_value = "zero")]
    pub tail: String,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Graph function for `f`: `cos`, `zero`, or `cos:K:A,sin:K:A,const:C`.
    #[arg(long, default_value = "cos")]
    pub phi: String,
    /// Function for `S`; defaults to the derivative of `--phi`.
    #[arg(long)]
    pub psi: Option<String>,
    /// Comma-separated phases θ_n for `f`.
    #[arg(long)]
    pub phases: Option<String>,
}

pub fn eval(a: &EvalArgs) -> Result<Report, CliError> {
    let mut r = Report::new("eval");
    r.setting("b", a.b)
        .setting("lambda", a.lambda)
        .setting("x", a.x)
        .setting("word", a.word.clone())
        .setting("tail", a.tail.clone())
        .setting("tol", a.tol)
        .setting("phi", a.phi.clone());
    r.setting(
        "what",
        match a.what {
            What::F => "f",
            What::Y => "Y",
            What::Ydx => "Ydx",
            What::Ydgamma => "Ydgamma",
            What::S => "S",
        },
    );
    let phi = parse::phi(&a.phi)?;
    let value = if a.what == What::F {
        let phases = a.phases.as_deref().map(parse::reals).transpose()?;
        if let Some(p) = &a.phases {
            r.setting("phases", p.clone());
        }
        eval_f_raw(a.b, a.lambda, &phi, a.x, phases.as_deref(), a.tol)?
    } else {
        let p = Params::new(a.b, a.lambda)?;
        r.setting("gamma", p.gamma());
        let word = parse::word(&a.word, parse::tail(&a.tail)?, a.b)?;
        match a.what {
            What::Y => eval_y(&p, &word, a.x, a.tol)?,
            What::Ydx => eval_y_dx(&p, &word, a.x, a.tol)?,
            What::Ydgamma => eval_y_dgamma(&p, &word, a.x, a.tol)?,
            _ => {
                let psi = match &a.psi {
                    Some(s) => parse::phi(s)?,
                    None => phi.derivative(),
                };
                r.setting("psi", a.psi.clone().unwrap_or_else(|| format!("d/dx {}", a.phi)));
                eval_s(&p, &psi, &word, a.x, a.tol)?
            }
        }
    };
    r.put("value", value.value)
        .put("tail_bound", value.tail_bound)
        .put("terms_used", value.terms_used);
    Ok(r)
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// Bases `A..B` (inclusive) or a single base.
    #[arg(long, default_value = "2..12")]
    pub b_range: String,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Ignore the published (*)-certificates.
    #[arg(long)]
    pub no_certificates: bool,
}

pub fn thresholds(a: &ThresholdArgs) -> Result<Report, CliError> {
    let (lo, hi) = parse::b_range(&a.b_range)?;
    let certs = if a.no_certificates {
        Vec::new()
    } else {
        published_certificates().to_vec()
    };
    let mut r = Report::new("thresholds");
    r.setting("b_range", a.b_range.clone())
        .setting("tol", a.tol)
        .setting("certificates", !a.no_certificates);
    let mut rows = Vec::new();
    for b in lo..=hi {
        let l = solve_lambda_b(b, a.tol)?;
        let t = solve_tilde_lambda_b(b, a.tol, &certs)?;
        rows.push(vec![
            json!(b),
            json!(l.lo),
            json!(l.hi),
            json!(t.lower),
            json!(t.upper),
            json!(format!("{:?}", t.method)),
            t.certificate.map_or(Value::Null, |c| json!(c.lambda)),
        ]);
    }
    r.table = Some(Table {
        columns: vec![
            "b",
            "lambda_b_lo",
            "lambda_b_hi",
            "tilde_lambda_lower",
            "tilde_lambda_upper",
            "tilde_method",
            "certificate_lambda0",
        ],
        rows,
    });
    Ok(r)
}

#[derive(Debug, Args)]
pub struct StarArgs {
    /// Verify the three published certificates.
    #[arg(long)]
    pub published: bool,
    #[arg(long)]
    pub beta: Option<f64>,
    /// With `--lambda0`, take `β = β(b, λ₀)`.
    #[arg(long)]
    pub b: Option<u32>,
    #[arg(long)]
    pub lambda0: Option<f64>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    /// Search for a certificate with `t ≥ --t-target` instead of verifying.
    #[arg(long)]
    pub search: bool,
    #[arg(long, default_value_t = 0.5)]
    pub t_target: f64,
    #[arg(long, default_value_t = 6)]
    pub k_max: u32,
    #[arg(long, default_value_t = 4001)]
    pub eta_grid: usize,
}

fn cert_row(label: String, c: &StarCertificate) -> Vec<Value> {
    let rep = verify_certificate(c);
    vec![
        json!(label),
        json!(c.beta()),
        json!(c.k()),
        json!(c.eta()),
        json!(c.t()),
        json!(rep.g_value),
        json!(rep.g_prime_value),
        json!(rep.margin),
        json!(rep.valid),
        json!(rep.borderline),
    ]
}

const CERT_COLUMNS: [&str; 10] =
    ["label", "beta", "k", "eta", "t", "g", "g_prime", "margin", "valid", "borderline"];

pub fn star_verify(a: &StarArgs) -> Result<Report, CliError> {
    let mut r = Report::new("star-verify");
    let mut rows = Vec::new();
    if a.published {
        r.setting("published", true);
        for c in published_certificates() {
            rows.push(cert_row(format!("b={} lambda0={}", c.b, c.lambda), &c.cert));
        }
    } else {
        let beta = match (a.beta, a.b, a.lambda0) {
            (Some(beta), None, None) => beta,
            (None, Some(b), Some(l)) => {
                r.setting("b", b).setting("lambda0", l);
                beta_of(b, l)?
            }
            _ => return Err(usage("give either --beta or both --b and --lambda0")),
        };
        r.setting("beta", beta);
        if a.search {
            r.setting("t_target", a.t_target)
                .setting("k_max", a.k_max)
                .setting("eta_grid", a.eta_grid);
            match search_certificate(beta, a.t_target, a.k_max, a.eta_grid)? {
                Some(c) => {
                    r.put("found", true);
                    rows.push(cert_row("search".into(), &c));
                }
                None => {
                    r.put("found", false);
                }
            }
        } else {
            let (Some(k), Some(eta), Some(t)) = (a.k, a.eta, a.t) else {
                return Err(usage("verification needs --k, --eta and --t"));
            };
            r.setting("k", k).setting("eta", eta).setting("t", t);
            let c = StarCertificate::new(beta, k, eta, t)?;
            let rep = verify_certificate(&c);
            r.put("valid", rep.valid);
            rows.push(cert_row("given".into(), &c));
        }
    }
    r.table = Some(Table {
        columns: CERT_COLUMNS.to_vec(),
        rows,
    });
    Ok(r)
}

#[derive(Debug, Args)]
pub struct TransversalityArgs {
    #[arg(long)]
    pub b: u32,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value_t = 400)]
    pub x_grid: usize,
    #[arg(long, default_value_t = 40)]
    pub depth: usize,
    #[arg(long, default_value_t = 256)]
    pub words: usize,
    #[arg(long, default_value_t = 16)]
    pub refine: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also estimate e(1, 1; δ̂/γ, δ̂/γ).
    #[arg(long)]
    pub tangency: bool,
    /// Also run the two-variable estimate over γ.
    #[arg(long)]
    pub two_var: bool,
    #[arg(long, default_value_t = 0.05)]
    pub eps_margin: f64,
    #[arg(long, default_value_t = 20)]
    pub gamma_grid: usize,
}

pub fn transversality(a: &TransversalityArgs) -> Result<Report, CliError> {
    let p = Params::new(a.b, a.lambda)?;
    let cfg = DeltaConfig {
        x_grid: a.x_grid,
        depth: a.depth,
        words: a.words,
        refine: a.refine,
        seed: a.seed,
    };
    let mut r = Report::new("transversality");
    r.setting("b", a.b)
        .setting("lambda", a.lambda)
        .setting("gamma", p.gamma())
        .setting("x_grid", a.x_grid)
        .setting("depth", a.depth)
        .setting("words", a.words)
        .setting("refine", a.refine)
        .setting("seed", a.seed);
    let v = analytic_transversality_check(a.b, a.lambda)?;
    r.put("analytic_holds", v.holds).put("analytic_margin", v.margin);
    let d = empirical_delta(a.b, p.gamma(), &cfg)?;
    r.put("delta_hat", d.delta_hat)
        .put("argmin_x", d.argmin_x)
        .put("argmin_word_i", parse::word_string(&d.argmin_pair.0))
        .put("argmin_word_j", parse::word_string(&d.argmin_pair.1))
        .put("tail_slack", d.tail_slack)
        .put("probe_words", d.words);
    if a.tangency {
        let q = TangencyQuery::new(1, 1, d.delta_hat / p.gamma(), d.delta_hat / p.gamma());
        r.setting("tangency_depth", q.depth)
            .setting("tangency_grid_per_interval", q.grid_per_interval)
            .setting("tangency_random_tails", q.random_tails);
        let e = if d.delta_hat > 0.0 {
            json!(tsujii_e_estimate(&p, &q, a.seed)?)
        } else {
            Value::Null
        };
        r.put("e_1_1", e);
    }
    if a.two_var {
        r.setting("eps_margin", a.eps_margin).setting("gamma_grid", a.gamma_grid);
        let t = two_var_delta(a.b, a.eps_margin, a.gamma_grid, &cfg)?;
        r.put("two_var_delta_hat", t.delta_hat)
            .put("two_var_argmin_x", t.argmin_x)
            .put("two_var_argmin_gamma", t.argmin_gamma);
    }
    Ok(r)
}

#[derive(Debug, Args)]
pub struct BoxdimArgs {
    #[arg(long)]
    pub b: u32,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value_t = 14)]
    pub levels: usize,
    #[arg(long, default_value_t = 64)]
    pub samples_per_column: usize,
    #[arg(long, default_value = "cos")]
    pub phi: String,
    #[arg(long, default_value_t = 2)]
    pub drop_coarsest: usize,
}

pub fn boxdim(a: &BoxdimArgs) -> Result<Report, CliError> {
    let p = Params::new(a.b, a.lambda)?;
    let phi = parse::phi(&a.phi)?;
    let mut r = Report::new("boxdim");
    r.setting("b", a.b)
        .setting("lambda", a.lambda)
        .setting("levels", a.levels)
        .setting("samples_per_column", a.samples_per_column)
        .setting("phi", a.phi.clone())
        .setting("drop_coarsest", a.drop_coarsest);
    let t = box_count(&p, &phi, a.levels, a.samples_per_column)?;
    let f = fit_box_dimension(&t, a.drop_coarsest)?;
    r.put("slope", f.slope)
        .put("intercept", f.intercept)
        .put("stderr", f.stderr)
        .put("theoretical_D", theoretical_dim(&p))
        .put("note", UNDERCOUNT_NOTE);
    r.table = Some(Table {
        columns: vec!["level", "epsilon", "boxes_hit"],
        rows: t
            .levels
            .iter()
            .enumerate()
            .map(|(j, l)| vec![json!(j + 1), json!(l.epsilon), json!(l.boxes_hit)])
            .collect(),
    });
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Transversal,
    Sbr,
    Lift,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long)]
    pub b: u32,
    #[arg(long)]
    pub lambda: f64,
    /// Base point for the transversal measure.
    #[arg(long, default_value_t = 0.3)]
    pub x: f64,
    #[arg(long, default_value_t = 10_000)]
    pub count: usize,
    /// Digits per sample; defaults to a truncation tail below 1e-9.
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 32)]
    pub bins: usize,
    /// Graph function for `lift`.
    #[arg(long, default_value = "cos")]
    pub phi: String,
    /// Function for `sbr`; defaults to the derivative of `cos 2πx`.
    #[arg(long)]
    pub psi: Option<String>,
    /// Add a local-dimension fit.
    #[arg(long)]
    pub local_dim: bool,
    #[arg(long, default_value_t = 0.02)]
    pub r0: f64,
    #[arg(long, default_value_t = 6)]
    pub radii: usize,
    #[arg(long, default_value_t = 200)]
    pub centers: usize,
    /// Emit the samples (one per row) instead of the histogram.
    #[arg(long)]
    pub points: bool,
}

pub fn measure(a: &MeasureArgs) -> Result<Report, CliError> {
    let p = Params::new(a.b, a.lambda)?;
    let depth = a.depth.unwrap_or_else(|| default_depth(p.gamma()));
    let mut r = Report::new("measure");
    r.setting("kind", format!("{:?}", a.kind).to_lowercase())
        .setting("b", a.b)
        .setting("lambda", a.lambda)
        .setting("gamma", p.gamma())
        .setting("count", a.count)
        .setting("seed", a.seed)
        .setting("bins", a.bins);
    let s: SampleSet = match a.kind {
        Kind::Transversal => {
            r.setting("x", a.x).setting("depth", depth);
            sample_transversal(&p, a.x, a.count, depth, a.seed)?
        }
        Kind::Sbr => {
            let psi = match &a.psi {
                Some(s) => parse::phi(s)?,
                None => weierdim_core::PhiSpec::weierstrass_derivative(),
            };
            r.setting("psi", a.psi.clone().unwrap_or_else(|| "d/dx cos".into()))
                .setting("depth", depth);
            sample_sbr(&p, &psi, a.count, depth, a.seed)?
        }
        Kind::Lift => {
            r.setting("phi", a.phi.clone());
            sample_graph_lift(&p, &parse::phi(&a.phi)?, a.count, a.seed)?
        }
    };
    let values = s.points.values();
    let (mean, stderr) = mean_and_stderr(&values)?;
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    r.put("mean", mean)
        .put("stderr", stderr)
        .put("min", min)
        .put("max", max)
        .put("tail_bound", s.tail_bound)
        .put("terms", s.depth);
    if a.local_dim {
        r.setting("r0", a.r0).setting("radii", a.radii).setting("centers", a.centers);
        let f = local_dim_estimate(&s, &radius_ladder(a.r0, a.radii), a.centers, a.seed)?;
        r.put("local_dim", f.slope).put("local_dim_stderr", f.stderr);
    }
    r.table = Some(if a.points {
        match &s.points {
            Points::Scalar(v) => Table {
                columns: vec!["index", "value"],
                rows: v.iter().enumerate().map(|(i, y)| vec![json!(i), json!(y)]).collect(),
            },
            Points::Pairs(v) => Table {
                columns: vec!["index", "x", "value"],
                rows: v
                    .iter()
                    .enumerate()
                    .map(|(i, (x, y))| vec![json!(i), json!(x), json!(y)])
                    .collect(),
            },
        }
    } else {
        Table {
            columns: vec!["bin_lo", "bin_hi", "mass"],
            rows: density_histogram(&s, a.bins)?
                .iter()
                .map(|h| vec![json!(h.lo), json!(h.hi), json!(h.mass)])
                .collect(),
        }
    });
    Ok(r)
}
