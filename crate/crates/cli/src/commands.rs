//! One driver per subcommand. Each renders its complete output in memory so
//! nothing is written when a computation fails.

use std::f64::consts::PI;

use serde::Serialize;
use serde_json::json;
use vibstring::ambarzumyan::{self, AmbVerdict, CheckOptions, Extremum};
use vibstring::analysis::{self, Lattice};
use vibstring::eigen::{self, EigenOptions, DEFAULT_GRID};
use vibstring::export::{fmt_real, write_csv};
use vibstring::liouville::{self, DEFAULT_SAMPLES};
use vibstring::problem::POSITIVITY_FLOOR;
use vibstring::{CoefficientFn, Error, Result, SpectralProblem};

use crate::config::{
    BoundsArgs, CheckArgs, CommonArgs, CurveArgs, Format, LiouvilleArgs, SignmapArgs, SpectrumArgs, Theorem, TraceArgs,
    Which,
};

/// Rendered output of a command and whether it reports an unmet condition.
pub struct Report {
    pub body: String,
    pub unsatisfied: bool,
}

impl Report {
    fn ok(body: String) -> Self {
        Report { body, unsatisfied: false }
    }
}

fn json_text(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("output serializes");
    text.push('\n');
    text
}

fn csv_text<R>(header: &[&str], rows: impl IntoIterator<Item = R>, fields: impl FnMut(&R) -> Vec<String>) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, header, rows, fields).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

fn into_string(write: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> String {
    let mut buf = Vec::new();
    write(&mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("utf-8 output")
}

fn required<'a>(value: &'a Option<String>, flag: &str) -> Result<&'a str> {
    value.as_deref().ok_or_else(|| Error::Usage(format!("`--{flag}` is required for this command")))
}

pub struct Context {
    pub common: CommonArgs,
}

impl Context {
    fn format(&self) -> Format {
        self.common.format.unwrap_or(Format::Csv)
    }

    fn eigen_options(&self) -> EigenOptions {
        let mut o = EigenOptions::default();
        if let Some(tol) = self.common.tol {
            o.lambda_tol = tol;
        }
        o
    }

    fn density(&self, value: &Option<String>, flag: &str) -> Result<CoefficientFn> {
        CoefficientFn::parse_density(required(value, flag)?, (0.0, 1.0), POSITIVITY_FLOOR)
    }

    fn potential(&self, value: &Option<String>, flag: &str) -> Result<CoefficientFn> {
        CoefficientFn::parse(required(value, flag)?, (0.0, PI))
    }

    fn string_angles(&self) -> (f64, f64) {
        (self.common.alpha.unwrap_or(PI), self.common.beta.unwrap_or(0.0))
    }

    fn sl_angles(&self) -> (f64, f64) {
        (self.common.gamma.unwrap_or(PI), self.common.delta.unwrap_or(0.0))
    }

    /// The string problem when `--p` is given, the Sturm-Liouville problem for `--q`.
    fn problem(&self) -> Result<(SpectralProblem, &'static str)> {
        match (&self.common.p, &self.common.q) {
            (Some(_), Some(_)) => Err(Error::Usage("give either `--p` or `--q`, not both".into())),
            (Some(_), None) => {
                let (a, b) = self.string_angles();
                Ok((SpectralProblem::string(self.density(&self.common.p, "p")?, a, b)?, "string"))
            }
            (None, Some(_)) => {
                let (g, d) = self.sl_angles();
                Ok((SpectralProblem::sturm_liouville(self.potential(&self.common.q, "q")?, g, d)?, "sturm-liouville"))
            }
            (None, None) => Err(Error::Usage("a coefficient is required: `--p` or `--q`".into())),
        }
    }
}

pub fn spectrum(ctx: &Context, args: &SpectrumArgs) -> Result<Report> {
    let (problem, kind) = ctx.problem()?;
    let o = ctx.eigen_options();
    if let Some(n) = args.eigenfunction {
        let pair = eigen::eigenfunction(&problem, n, args.grid.unwrap_or(DEFAULT_GRID), &o)?;
        let body = match ctx.format() {
            Format::Csv => into_string(|buf| pair.write_csv(buf)),
            Format::Json => json_text(&json!({
                "problem": kind,
                "n": pair.n,
                "lambda": pair.value,
                "normalization": pair.normalization,
                "x": pair.samples.iter().map(|s| s.x).collect::<Vec<_>>(),
                "u": pair.samples.iter().map(|s| s.u).collect::<Vec<_>>(),
                "du": pair.samples.iter().map(|s| s.du).collect::<Vec<_>>(),
            })),
        };
        return Ok(Report::ok(body));
    }
    let count = args.count.unwrap_or(5);
    if count == 0 {
        return Err(Error::Usage("`--count` must be positive".into()));
    }
    let values = eigen::spectrum(&problem, count, &o)?;
    let body = match ctx.format() {
        Format::Csv => {
            csv_text(&["n", "lambda"], values.iter().enumerate(), |(n, v)| vec![n.to_string(), fmt_real(**v)])
        }
        Format::Json => json_text(&json!({
            "problem": kind,
            "eigenvalues": values.iter().enumerate().map(|(n, v)| json!({"n": n, "lambda": v})).collect::<Vec<_>>(),
        })),
    };
    Ok(Report::ok(body))
}

fn curve_report(ctx: &Context, samples: usize) -> Result<Report> {
    if samples < 2 {
        return Err(Error::Usage("`--samples` must be at least 2".into()));
    }
    let points = analysis::curve_samples(samples);
    let body = match ctx.format() {
        Format::Csv => into_string(|buf| analysis::write_curve_csv(&points, buf)),
        Format::Json => json_text(&points.iter().map(|(a, b)| json!({"alpha": a, "beta": b})).collect::<Vec<_>>()),
    };
    Ok(Report::ok(body))
}

pub fn signmap(ctx: &Context, args: &SignmapArgs) -> Result<Report> {
    if args.curve_only {
        return curve_report(ctx, args.samples.unwrap_or(200));
    }
    let p = ctx.density(&ctx.common.p, "p")?;
    let base = Lattice::standard(args.alpha_count.unwrap_or(21), args.beta_count.unwrap_or(21));
    let lattice = Lattice {
        alpha: (args.alpha_min.unwrap_or(base.alpha.0), args.alpha_max.unwrap_or(base.alpha.1)),
        beta: (args.beta_min.unwrap_or(base.beta.0), args.beta_max.unwrap_or(base.beta.1)),
        ..base
    };
    let rows = analysis::sign_map(&lattice, &p, &ctx.eigen_options())?;
    let body = match ctx.format() {
        Format::Csv => into_string(|buf| analysis::write_sign_map_csv(&rows, buf)),
        Format::Json => json_text(
            &rows
                .iter()
                .map(|r| match &r.lambda0 {
                    Ok(v) => json!({"alpha": r.alpha, "beta": r.beta, "class": r.class, "lambda0": v}),
                    Err(e) => json!({
                        "alpha": r.alpha, "beta": r.beta, "class": r.class, "lambda0": null, "error": e.to_string()
                    }),
                })
                .collect::<Vec<_>>(),
        ),
    };
    Ok(Report::ok(body))
}

pub fn curve(ctx: &Context, args: &CurveArgs) -> Result<Report> {
    curve_report(ctx, args.samples.unwrap_or(200))
}

#[derive(Serialize)]
struct BoundsRow {
    problem: &'static str,
    lower: f64,
    upper: f64,
    reference: f64,
    value: f64,
    contained: bool,
}

pub fn bounds(ctx: &Context, _args: &BoundsArgs) -> Result<Report> {
    let (problem, kind) = ctx.problem()?;
    let o = ctx.eigen_options();
    let b = if kind == "string" {
        let (a, be) = ctx.string_angles();
        analysis::lambda0_bounds(problem.weight(), a, be, &o)?
    } else {
        let (g, d) = ctx.sl_angles();
        analysis::mu0_bounds(problem.potential(), g, d, &o)?
    };
    let value = eigen::eigenvalue(&problem, 0, &o)?;
    let slack = 10.0 * o.lambda_tol * value.abs().max(1.0);
    let row = BoundsRow {
        problem: kind,
        lower: b.lower,
        upper: b.upper,
        reference: b.reference,
        value,
        contained: b.contains(value, slack),
    };
    let body = match ctx.format() {
        Format::Csv => csv_text(&["lower", "upper", "reference", "value", "contained"], [&row], |r| {
            vec![
                fmt_real(r.lower),
                fmt_real(r.upper),
                fmt_real(r.reference),
                fmt_real(r.value),
                r.contained.to_string(),
            ]
        }),
        Format::Json => json_text(&row),
    };
    Ok(Report::ok(body))
}

pub fn check(ctx: &Context, args: &CheckArgs) -> Result<Report> {
    let theorem = args.theorem.ok_or_else(|| Error::Usage("`--theorem` is required".into()))?;
    let mut o = CheckOptions { grid: args.grid.unwrap_or(DEFAULT_GRID), ..CheckOptions::default() };
    if let Some(tol) = ctx.common.tol {
        o.rel_tol = tol;
    }
    let which: Extremum = args.which.unwrap_or(Which::Max).into();
    let verdict: AmbVerdict = match theorem {
        Theorem::T2_1 | Theorem::T2_2 | Theorem::T2_3 => {
            let p = ctx.density(&ctx.common.p, "p")?;
            let pref = ctx.density(&ctx.common.pref, "pref")?;
            let (a, b) = ctx.string_angles();
            match theorem {
                Theorem::T2_1 => ambarzumyan::check_extremal(&p, &pref, a, b, which, &o)?,
                Theorem::T2_2 => ambarzumyan::check_weighted_mean(&p, &pref, a, b, &o)?,
                _ => ambarzumyan::check_nth(&p, &pref, a, b, args.n.unwrap_or(1), which, &o)?,
            }
        }
        Theorem::T1_2 | Theorem::T1_3 => {
            let q = ctx.potential(&ctx.common.q, "q")?;
            let qref = ctx.potential(&ctx.common.qref, "qref")?;
            let (g, d) = ctx.sl_angles();
            if theorem == Theorem::T1_2 {
                ambarzumyan::sl_check_yurko(&q, &qref, g, d, &o)?
            } else {
                ambarzumyan::sl_check_extremal(&q, &qref, g, d, which, &o)?
            }
        }
    };
    let body = match ctx.format() {
        Format::Json => {
            let mut text = verdict.to_json();
            text.push('\n');
            text
        }
        Format::Csv => csv_text(
            &["target", "condition", "residual", "satisfied", "scale_factor", "reconstruction_residual"],
            [&verdict],
            |v| {
                vec![
                    fmt_real(v.target),
                    fmt_real(v.condition),
                    fmt_real(v.residual),
                    v.satisfied.to_string(),
                    fmt_real(v.scale_factor),
                    v.reconstruction_residual.map(fmt_real).unwrap_or_default(),
                ]
            },
        ),
    };
    Ok(Report { body, unsatisfied: !verdict.satisfied })
}

pub fn liouville(ctx: &Context, args: &LiouvilleArgs) -> Result<Report> {
    let p = ctx.density(&ctx.common.p, "p")?;
    let (a, b) = ctx.string_angles();
    let grid = args.grid.unwrap_or(DEFAULT_SAMPLES);
    if let Some(n_max) = args.consistency {
        let rows = liouville::consistency_check(&p, a, b, n_max, grid, &ctx.eigen_options())?;
        let body = match ctx.format() {
            Format::Csv => csv_text(&["n", "direct", "transformed", "rel_gap"], &rows, |r| {
                vec![r.n.to_string(), fmt_real(r.direct), fmt_real(r.transformed), fmt_real(r.rel_gap)]
            }),
            Format::Json => json_text(&rows),
        };
        return Ok(Report::ok(body));
    }
    let image = liouville::transform(&p, a, b, grid)?;
    let body = match ctx.format() {
        Format::Csv => into_string(|buf| image.write_csv(buf)),
        Format::Json => json_text(&json!({
            "c": image.c,
            "gamma": image.gamma,
            "delta": image.delta,
            "x": image.s_of_x.nodes().collect::<Vec<_>>(),
            "s": image.s_of_x.values,
            "q": image.q_samples,
        })),
    };
    Ok(Report::ok(body))
}

pub fn trace(ctx: &Context, args: &TraceArgs) -> Result<Report> {
    let q = ctx.potential(&ctx.common.q, "q")?;
    let (g, d) = ctx.sl_angles();
    let check = analysis::trace_formula_check(&q, g, d, args.t_nodes.unwrap_or(32), &ctx.eigen_options())?;
    let body = match ctx.format() {
        Format::Csv => csv_text(&["lhs", "rhs", "gap", "free"], [&check], |c| {
            vec![fmt_real(c.lhs), fmt_real(c.rhs), fmt_real(c.gap), fmt_real(c.free)]
        }),
        Format::Json => json_text(&check),
    };
    Ok(Report::ok(body))
}
