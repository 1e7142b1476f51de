//! Subcommand implementations.

use coulomb_annulus::asymptotics::{EdgeScaling, IntervalAngle, IntervalScaling, Parity};
use coulomb_annulus::experiments::{
    bessel_check, edge_convergence, interval_convergence, lambda_table, linspace, sigma_table, strictly_decreasing,
    ConvergenceRow,
};
use coulomb_annulus::kernels::{kernel_elliptic, kernel_radial_sym, RadialSymSpec};
use coulomb_annulus::quadrature::{kernel_trace, orthogonality_matrix, QuadratureSpec};
use coulomb_annulus::sampler::{SampleConfig, Sampler};
use coulomb_annulus::{AnnulusSpec, Complex64, ComplexPoint, Error, ModelKind};
use serde_json::json;

use crate::output::{emit, json_text};
use crate::table::{Cell, Table};
use crate::{AnnulusArgs, Cli, Command, EndAngle, ParityArg, Regime};

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn numeric(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::InvalidParameter(_) => CliError::usage(e.to_string()),
            Error::ToleranceNotMet { .. } | Error::EnvelopeExceeded { .. } | Error::RejectBudgetExhausted(_) => {
                CliError::numeric(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::usage(format!("cannot write output: {e}"))
    }
}

/// Result of a successful run; `passed = false` maps to exit code 1.
pub struct Outcome {
    pub passed: bool,
    pub message: Option<String>,
}

impl Outcome {
    fn ok() -> Self {
        Self { passed: true, message: None }
    }

    fn check(passed: bool, message: String) -> Self {
        Self { passed, message: Some(message) }
    }
}

type CmdResult = Result<Outcome, CliError>;

fn model(label: &str) -> Result<ModelKind, CliError> {
    ModelKind::from_label(label).ok_or_else(|| CliError::usage(format!("unknown model {label:?}; use I, II, III or IV")))
}

fn annulus(a: &AnnulusArgs) -> Result<AnnulusSpec, CliError> {
    Ok(AnnulusSpec::new(a.inner, a.outer)?)
}

fn positive(name: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(CliError::usage(format!("--{name} must be positive, got {x}")))
    }
}

fn ensure_finite(values: &[f64]) -> Result<(), CliError> {
    if values.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(CliError::numeric("non-finite value in report"))
    }
}

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub fn run(cli: &Cli) -> CmdResult {
    positive("tol", cli.tol)?;
    let out = cli.out.as_deref();
    match &cli.command {
        Command::VerifyOrthogonality { model: m, nmax, annulus: a, threshold } => {
            let m = model(m)?;
            let spec = annulus(a)?;
            let q = QuadratureSpec::for_degree(*nmax, cli.tol)?;
            let r = orthogonality_matrix(m, *nmax, &spec, &q)?;
            let flat: Vec<f64> = r.gram.iter().flatten().copied().chain(r.reference.iter().copied()).collect();
            ensure_finite(&flat)?;
            ensure_finite(&[r.max_offdiag, r.max_diag_relerr])?;
            let table: Vec<_> = (0..=*nmax)
                .map(|n| {
                    json!({
                        "n": n,
                        "gram": r.gram[n][n],
                        "reference": r.reference[n],
                        "relerr": (r.gram[n][n] - r.reference[n]).abs() / r.reference[n],
                    })
                })
                .collect();
            let passed = r.max_offdiag <= *threshold && r.max_diag_relerr <= *threshold;
            let report = json!({
                "command": "verify-orthogonality",
                "version": env!("CARGO_PKG_VERSION"),
                "model": m.label(),
                "nmax": nmax,
                "R": spec.inner(),
                "v": spec.outer(),
                "tol": cli.tol,
                "threshold": threshold,
                "max_offdiag": r.max_offdiag,
                "max_diag_relerr": r.max_diag_relerr,
                "passed": passed,
                "table": table,
                "gram": r.gram,
            });
            emit(out, &json_text(&report))?;
            Ok(Outcome::check(
                passed,
                format!(
                    "{m}: max_offdiag {:.3e}, max_diag_relerr {:.3e}",
                    r.max_offdiag, r.max_diag_relerr
                ),
            ))
        }
        Command::Figure1 { vs, points } => {
            let t = sigma_table(vs, *points)?;
            let mut header = vec!["psi".to_string()];
            header.extend(vs.iter().map(|v| format!("sigma_v={v}")));
            let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
            let mut tab = Table::new("figure1", &[("v", list(vs)), ("points", points.to_string())], &header_refs);
            for (k, psi) in t.psi.iter().enumerate() {
                let mut row = vec![Cell::Num(*psi)];
                row.extend(t.sigma.iter().map(|s| Cell::Num(s[k])));
                tab.push(row);
            }
            let mut norm = vec![Cell::from("norm")];
            norm.extend(t.norms.iter().map(|&x| Cell::Num(x)));
            tab.push(norm);
            emit(out, &tab.render())?;
            Ok(Outcome::ok())
        }
        Command::Figure2 { tau, phi_max, points } => {
            let rows = lambda_table(*tau, *phi_max, *points)?;
            let mut tab = Table::new(
                "figure2",
                &[("tau", tau.to_string()), ("phi_max", phi_max.to_string()), ("points", points.to_string())],
                &["varphi", "lambda"],
            );
            for (phi, l) in rows {
                tab.push(vec![phi.into(), l.into()]);
            }
            emit(out, &tab.render())?;
            Ok(Outcome::ok())
        }
        Command::Convergence {
            regime,
            model: m,
            ns,
            v,
            psi,
            depth,
            u,
            t1,
            t2,
            phi1,
            phi2,
            angle,
            parity,
            require_decreasing,
        } => {
            let m = model(m)?;
            if ns.is_empty() || ns.windows(2).any(|w| w[1] <= w[0]) {
                return Err(CliError::usage("--n must be a non-empty ascending list"));
            }
            let (rows, params) = match regime {
                Regime::Edge => {
                    let (depth, t1, t2, phi1, phi2) =
                        (depth.unwrap_or(3.0), t1.unwrap_or(1.0), t2.unwrap_or(1.4), phi1.unwrap_or(0.3), phi2.unwrap_or(-0.2));
                    let e = EdgeScaling::new(*v, *psi, depth, t1, t2, phi1, phi2, ns[0])?;
                    let rows = edge_convergence(m, &e, ns).map_err(scaled_point_error)?;
                    let params = vec![
                        ("regime", "edge".to_string()),
                        ("model", m.label().to_string()),
                        ("N", list(ns)),
                        ("v", v.to_string()),
                        ("psi", psi.to_string()),
                        ("T", depth.to_string()),
                        ("t", format!("{t1},{t2}")),
                        ("phi", format!("{phi1},{phi2}")),
                    ];
                    (rows, params)
                }
                Regime::Bulk | Regime::IntervalEdge => {
                    let (depth, t1, t2, phi1, phi2) =
                        (depth.unwrap_or(0.2), t1.unwrap_or(0.5), t2.unwrap_or(0.7), phi1.unwrap_or(0.3), phi2.unwrap_or(-0.4));
                    let psi_i = match (regime, angle) {
                        (Regime::Bulk, _) => IntervalAngle::HalfPi,
                        (_, EndAngle::Zero) => IntervalAngle::Zero,
                        (_, EndAngle::Pi) => IntervalAngle::Pi,
                    };
                    let i = IntervalScaling::new(*u, depth, psi_i, Complex64::new(t1, phi1), Complex64::new(t2, phi2))?;
                    let p = match (regime, parity) {
                        (Regime::Bulk, Some(_)) => return Err(CliError::usage("--parity applies to the interval-edge regime")),
                        (_, Some(ParityArg::Plus)) => Some(Parity::Plus),
                        (_, Some(ParityArg::Minus)) => Some(Parity::Minus),
                        (_, None) => None,
                    };
                    let rows = interval_convergence(m, &i, ns, p).map_err(scaled_point_error)?;
                    let mut params = vec![
                        ("regime", if matches!(regime, Regime::Bulk) { "bulk" } else { "interval-edge" }.to_string()),
                        ("model", m.label().to_string()),
                        ("N", list(ns)),
                        ("psi", format!("{}", psi_i.radians())),
                        ("u", u.to_string()),
                        ("T", depth.to_string()),
                        ("t", format!("{t1},{t2}")),
                        ("phi", format!("{phi1},{phi2}")),
                    ];
                    if let Some(p) = p {
                        params.push(("parity", p.label().to_string()));
                    }
                    (rows, params)
                }
            };
            convergence_output(out, &rows, &params, *require_decreasing)
        }
        Command::KernelEval { model: label, n, annulus: a, gamma, z1, z2 } => {
            if z1.len() != 2 || z2.len() != 2 {
                return Err(CliError::usage("--z1 and --z2 take two coordinates, x,y"));
            }
            let (p1, p2) = (ComplexPoint::new(z1[0], z1[1]), ComplexPoint::new(z2[0], z2[1]));
            let (value, label) = if label.eq_ignore_ascii_case("rs") {
                let rs = RadialSymSpec::new(*gamma, a.inner, a.outer)?;
                (kernel_radial_sym(&rs, *n, p1, p2)?, "RS".to_string())
            } else {
                let m = model(label)?;
                (kernel_elliptic(m, *n, p1, p2, &annulus(a)?)?, m.label().to_string())
            };
            ensure_finite(&[value.re, value.im])?;
            let mut report = json!({
                "command": "kernel-eval",
                "version": env!("CARGO_PKG_VERSION"),
                "model": label,
                "N": n,
                "R": a.inner,
                "v": a.outer,
                "z1": [p1.x, p1.y],
                "z2": [p2.x, p2.y],
                "re": value.re,
                "im": value.im,
            });
            if label == "RS" {
                report["gamma"] = json!(gamma);
            }
            emit(out, &json_text(&report))?;
            Ok(Outcome::ok())
        }
        Command::Sample {
            model: m,
            n,
            annulus: a,
            count,
            envelope_grid,
            envelope_safety,
            max_rejects,
        } => {
            let cfg = SampleConfig {
                envelope_grid: *envelope_grid,
                envelope_safety: *envelope_safety,
                max_rejects: *max_rejects,
                ..SampleConfig::new(model(m)?, *n, annulus(a)?, cli.seed)
            };
            let mut sampler = Sampler::new(cfg)?;
            let mut tab = Table::new(
                "sample",
                &[
                    ("model", cfg.model.label().to_string()),
                    ("N", n.to_string()),
                    ("R", a.inner.to_string()),
                    ("v", a.outer.to_string()),
                    ("count", count.to_string()),
                    ("seed", cli.seed.to_string()),
                ],
                &["sample", "index", "x", "y"],
            );
            for s in 0..*count {
                for (k, z) in sampler.draw()?.into_iter().enumerate() {
                    tab.push(vec![s.into(), k.into(), z.x.into(), z.y.into()]);
                }
            }
            emit(out, &tab.render())?;
            Ok(Outcome::ok())
        }
        Command::BesselCheck { points, min, max, n, threshold } => {
            if !(*min > 0.0 && max > min && *points >= 1) {
                return Err(CliError::usage("need 0 < --min < --max and --points >= 1"));
            }
            let rows = bessel_check(&linspace(*min, *max, *points), *n)?;
            let mut tab = Table::new(
                "bessel-check",
                &[("points", points.to_string()), ("range", format!("{min},{max}")), ("N", n.to_string())],
                &["a", "phi1", "phi2", "bessel", "closed_form", "rel_error"],
            );
            let mut worst = 0.0f64;
            for r in &rows {
                worst = worst.max(r.rel_error);
                tab.push(vec![r.a.into(), r.phi1.into(), r.phi2.into(), r.bessel.into(), r.closed_form.into(), r.rel_error.into()]);
            }
            emit(out, &tab.render())?;
            Ok(Outcome::check(worst <= *threshold, format!("max relative error {worst:.3e}")))
        }
        Command::TraceCheck { models, ns, annulus: a, threshold } => {
            let spec = annulus(a)?;
            let ms = models.iter().map(|m| model(m)).collect::<Result<Vec<_>, _>>()?;
            if ns.contains(&0) {
                return Err(CliError::usage("--n entries must be positive"));
            }
            let mut tab = Table::new(
                "trace-check",
                &[("models", list(models)), ("N", list(ns)), ("R", a.inner.to_string()), ("v", a.outer.to_string())],
                &["model", "N", "trace", "rel_error"],
            );
            let mut worst = 0.0f64;
            for m in ms {
                for &n in ns {
                    let q = QuadratureSpec::for_degree(n, cli.tol)?;
                    let t = kernel_trace(m, n, &spec, &q)?;
                    let err = (t - n as f64).abs() / n as f64;
                    worst = worst.max(err);
                    tab.push(vec![m.label().into(), n.into(), t.into(), err.into()]);
                }
            }
            emit(out, &tab.render())?;
            Ok(Outcome::check(worst <= *threshold, format!("max relative trace error {worst:.3e}")))
        }
    }
}

/// Scaled points outside the annulus are a numerical-validity failure for that N.
fn scaled_point_error(e: Error) -> CliError {
    match e {
        Error::Domain(msg) => CliError::numeric(msg),
        other => other.into(),
    }
}

fn convergence_output(
    out: Option<&std::path::Path>,
    rows: &[ConvergenceRow],
    params: &[(&str, String)],
    require_decreasing: bool,
) -> CmdResult {
    let mut tab = Table::new(
        "convergence",
        params,
        &["N", "finite_value_re", "finite_value_im", "limit_value_re", "limit_value_im", "rel_error"],
    );
    for r in rows {
        ensure_finite(&[r.finite.re, r.finite.im, r.limit.re, r.limit.im, r.rel_error])?;
        tab.push(vec![
            r.n.into(),
            r.finite.re.into(),
            r.finite.im.into(),
            r.limit.re.into(),
            r.limit.im.into(),
            r.rel_error.into(),
        ]);
    }
    emit(out, &tab.render())?;
    let decreasing = strictly_decreasing(rows);
    let passed = decreasing || !require_decreasing;
    Ok(Outcome::check(
        passed,
        format!("relative error {} across N", if decreasing { "strictly decreasing" } else { "not strictly decreasing" }),
    ))
}
