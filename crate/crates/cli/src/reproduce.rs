//! One-shot check of the published numeric claims.

use clap::Args;
use serde_json::{json, Value};

use weierdim_core::star::{published_certificates, verify_certificate, LambdaCertificate};
use weierdim_core::thresholds::{
    big_h, h, h_gamma_form, solve_lambda_b, solve_tilde_lambda_b, tilde_big_h, DEFAULT_TOL,
};
use weierdim_core::transversality::{
    case_bounds_b2, empirical_delta, tsujii_e_estimate, DeltaConfig, TangencyQuery,
};
use weierdim_core::Params;

use crate::error::CliError;
use crate::report::{Report, Table};

/// Margin a published certificate must clear.
const CERT_MARGIN: f64 = 1e-6;

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Added to `η` of the `b = 3` certificate before verification.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub perturb_eta: f64,
    /// Seed for the tangency spot checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

struct Claim {
    name: String,
    observed: Value,
    pass: bool,
}

fn claim(out: &mut Vec<Claim>, name: impl Into<String>, observed: impl Into<Value>, pass: bool) {
    out.push(Claim {
        name: name.into(),
        observed: observed.into(),
        pass,
    });
}

fn negative(out: &mut Vec<Claim>, name: &str, v: f64) {
    claim(out, format!("{name} < 0"), v, v < 0.0);
}

fn positive(out: &mut Vec<Claim>, name: &str, v: f64) {
    claim(out, format!("{name} > 0"), v, v > 0.0);
}

/// Returns the report and whether every claim passed.
pub fn reproduce(a: &ReproduceArgs) -> Result<(Report, bool), CliError> {
    let mut c = Vec::new();

    positive(&mut c, "h_2(0.9)", h(2, 0.9)?);
    negative(&mut c, "h_2(0.9352)", h(2, 0.9352)?);
    negative(&mut c, "h_3(0.7269)", h(3, 0.7269)?);
    negative(&mut c, "h_4(0.6083)", h(4, 0.6083)?);
    negative(&mut c, "H_3(1)", big_h(3, 1.0)?);
    negative(&mut c, "H_5(0.5448)", big_h(5, 0.5448)?);
    negative(&mut c, "tilde_H_5(1.04/sqrt 5)", tilde_big_h(5, 1.04 / 5f64.sqrt())?);

    let l2 = solve_lambda_b(2, DEFAULT_TOL)?;
    claim(&mut c, "lambda_2 in (0.9, 0.9352)", json!([l2.lo, l2.hi]), l2.lo > 0.9 && l2.hi < 0.9352);
    let mut worst = 0.0f64;
    for b in 5..=20 {
        worst = worst.max(solve_lambda_b(b, DEFAULT_TOL)?.hi);
    }
    claim(&mut c, "lambda_b < 0.5448 for b in 5..=20", worst, worst < 0.5448);
    let big = solve_lambda_b(10_000, DEFAULT_TOL)?.midpoint();
    let gap = (big - std::f64::consts::FRAC_1_PI).abs();
    claim(&mut c, "|lambda_10000 - 1/pi| < 0.01", gap, gap < 0.01);

    let mut certs: Vec<LambdaCertificate> = published_certificates().to_vec();
    for cert in certs.iter_mut().filter(|x| x.b == 3) {
        cert.cert = cert.cert.with_eta(cert.cert.eta() + a.perturb_eta)?;
    }
    for cert in &certs {
        let rep = verify_certificate(&cert.cert);
        claim(
            &mut c,
            format!(
                "certificate b={} (k={}, eta={}, t={}) margin > 1e-6",
                cert.b,
                cert.cert.k(),
                cert.cert.eta(),
                cert.cert.t()
            ),
            rep.margin,
            rep.valid && rep.margin > CERT_MARGIN,
        );
    }
    for (b, bound) in [(2u32, 0.81), (3, 0.55), (4, 0.44)] {
        let t = solve_tilde_lambda_b(b, DEFAULT_TOL, &certs)?;
        claim(&mut c, format!("tilde_lambda_{b} <= {bound}"), t.upper, t.upper <= bound);
    }
    let t5 = solve_tilde_lambda_b(5, DEFAULT_TOL, &certs)?;
    let bound5 = 1.04 / 5f64.sqrt();
    claim(&mut c, "tilde_lambda_5 <= 1.04/sqrt 5", t5.upper, t5.upper <= bound5);
    let t_big = solve_tilde_lambda_b(10_000, DEFAULT_TOL, &certs)?;
    let scaled = 100.0 * 0.5 * (t_big.lower + t_big.upper);
    let gap = (scaled - 1.0 / std::f64::consts::PI.sqrt()).abs();
    claim(&mut c, "|sqrt(10000) tilde_lambda_10000 - 1/sqrt pi| < 0.02", gap, gap < 0.02);
    let mut ordered = true;
    for b in 2..=12 {
        ordered &= solve_tilde_lambda_b(b, DEFAULT_TOL, &certs)?.upper < solve_lambda_b(b, DEFAULT_TOL)?.lo;
    }
    claim(&mut c, "tilde_lambda_b < lambda_b for b in 2..=12", ordered, ordered);

    let cfg = DeltaConfig {
        seed: a.seed,
        ..DeltaConfig::default()
    };
    for b in 2..=4 {
        let lambda = solve_lambda_b(b, DEFAULT_TOL)?.hi + 0.05;
        let p = Params::new(b, lambda)?;
        let d = empirical_delta(b, p.gamma(), &cfg)?;
        let scaled = d.delta_hat / p.gamma();
        let e = if d.delta_hat > 0.0 {
            tsujii_e_estimate(&p, &TangencyQuery::new(1, 1, scaled, scaled), a.seed)?
        } else {
            0
        };
        claim(
            &mut c,
            format!("e(1,1; delta/gamma) = 1 for b={b} at lambda_b + 0.05"),
            json!({"delta_hat": d.delta_hat, "e": e}),
            d.delta_hat > 0.0 && e == 1,
        );
    }

    let mut worst = 0.0f64;
    for j in 1..=100 {
        let g = 0.5 + (1.0 / 0.81 / 2.0 - 0.5) * f64::from(j) / 101.0;
        let m = case_bounds_b2(g)?.into_iter().fold(f64::NEG_INFINITY, f64::max);
        worst = worst.max((m - h_gamma_form(2, g)?).abs());
    }
    claim(&mut c, "max case bound = h_gamma_form(2, gamma)", worst, worst <= 1e-12);

    let all = c.iter().all(|x| x.pass);
    let mut r = Report::new("reproduce");
    r.setting("perturb_eta", a.perturb_eta)
        .setting("seed", a.seed)
        .setting("tol", DEFAULT_TOL)
        .setting("delta_x_grid", cfg.x_grid)
        .setting("delta_depth", cfg.depth)
        .setting("delta_words", cfg.words)
        .setting("delta_refine", cfg.refine);
    r.put("claims", c.len())
        .put("failed", c.iter().filter(|x| !x.pass).count())
        .put("all_pass", all);
    r.table = Some(Table {
        columns: vec!["claim", "observed", "pass"],
        rows: c
            .into_iter()
            .map(|x| vec![json!(x.name), x.observed, json!(x.pass)])
            .collect(),
    });
    Ok((r, all))
}
