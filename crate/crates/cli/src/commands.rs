//! The six commands.

use crate::compare::{ball_comparison, halfspace_comparison, BallProblem, Comparison};
use crate::config::{need, Command, Constant, Geometry, Regime, RunConfig, Variant};
use crate::error::{CliError, Result};
use crate::output::{fmt_f64, samples_csv, Cell, Outcome, Table};
use crate::selftest::{all_checks, checks_table};
use harmeas_core::ball_hyperbolic::{kernel_mass, poisson_kernel_ball, BallKernel, BallQuery};
use harmeas_core::ball_ou::{
    poisson_kernel_ou_as_printed, poisson_kernel_ou_ball, OuBallKernel, OuBallQuery, OuVariant,
};
use harmeas_core::contour::ContourSpec;
use harmeas_core::halfspace::{
    asym_boundary_limit, asym_large_y, asym_large_y_as_stated, normalization, poisson_kernel,
    HalfSpaceQuery,
};
use std::f64::consts::PI;

/// Default tolerance of `validate-normalization` per geometry.
pub fn default_mass_tol(g: Geometry) -> f64 {
    match g {
        Geometry::Halfspace => 1e-6,
        Geometry::Hball | Geometry::Ouball => 1e-3,
    }
}

/// Gauss-Legendre nodes in phi for ball masses.
const MASS_NODES: usize = 64;

/// Smallest half-space start height covered by the Monte Carlo validation.
const CORONA_HALFSPACE: f64 = 1.01;
/// Largest `|x| / r` covered by the Monte Carlo validation.
const CORONA_BALL: f64 = 0.95;

/// Runs `cfg.command`.
pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    cfg.quadrature_spec().validate()?;
    cfg.contour_spec().validate()?;
    match cfg.command {
        Command::Eval => eval(cfg),
        Command::Tabulate => tabulate(cfg),
        Command::ValidateAsymptotics => validate_asymptotics(cfg),
        Command::ValidateNormalization => validate_normalization(cfg),
        Command::McCompare => mc_compare(cfg),
        Command::SpecfunSelftest => specfun_selftest(),
    }
}

fn variant(cfg: &RunConfig) -> OuVariant {
    match cfg.variant.unwrap_or_default() {
        Variant::Derived => OuVariant::Derived,
        Variant::AsPrinted => OuVariant::AsPrinted,
    }
}

fn variant_name(cfg: &RunConfig) -> &'static str {
    match cfg.variant.unwrap_or_default() {
        Variant::Derived => "derived",
        Variant::AsPrinted => "as-printed",
    }
}

/// The OU contour settings: the printed line for the printed form unless overridden.
fn ou_spec(cfg: &RunConfig, n: u32) -> ContourSpec {
    let spec = cfg.contour_spec();
    if variant(cfg) != OuVariant::AsPrinted {
        return spec;
    }
    let classic = ContourSpec::classic(n);
    ContourSpec {
        c: spec.c.or(classic.c),
        height: spec.height.or(classic.height),
        nodes: spec.nodes.or(classic.nodes),
        rel_tol: spec.rel_tol,
    }
}

struct BallArgs {
    n: u32,
    r: f64,
    xnorm: f64,
    lambda: Option<f64>,
}

fn ball_args(cfg: &RunConfig, g: Geometry) -> Result<BallArgs> {
    let c = cfg.command;
    let p = &cfg.point;
    let lambda = match g {
        Geometry::Ouball => Some(need(p.lambda, "lambda", c)?),
        _ => None,
    };
    Ok(BallArgs {
        n: need(p.n, "n", c)?,
        r: need(p.r, "r", c)?,
        xnorm: need(p.xnorm, "xnorm", c)?,
        lambda,
    })
}

fn eval(cfg: &RunConfig) -> Result<Outcome> {
    let g = cfg.geometry()?;
    let c = cfg.command;
    let p = &cfg.point;
    let table = match g {
        Geometry::Halfspace => {
            let q = HalfSpaceQuery::new(
                need(p.n, "n", c)?,
                need(p.xn, "xn", c)?,
                need(p.rho, "rho", c)?,
            )?;
            let v = poisson_kernel(&q, &cfg.quadrature_spec())?;
            let mut t = Table::new(&["geometry", "n", "xn", "rho", "p"]);
            t.push(vec![
                g.name().into(),
                q.n.into(),
                q.x_n.into(),
                q.rho.into(),
                v.into(),
            ]);
            t
        }
        Geometry::Hball => {
            let b = ball_args(cfg, g)?;
            let q = BallQuery::new(b.n, b.r, b.xnorm, need(p.phi, "phi", c)?)?;
            let v = poisson_kernel_ball(&q, &cfg.contour_spec())?;
            let mut t = Table::new(&["geometry", "n", "r", "xnorm", "phi", "p"]);
            t.push(vec![
                g.name().into(),
                b.n.into(),
                b.r.into(),
                b.xnorm.into(),
                q.phi.into(),
                v.into(),
            ]);
            t
        }
        Geometry::Ouball => {
            let b = ball_args(cfg, g)?;
            let lambda = b.lambda.unwrap();
            let q = OuBallQuery::new(b.n, lambda, b.r, b.xnorm, need(p.phi, "phi", c)?)?;
            let v = poisson_kernel_ou_ball(&q, &ou_spec(cfg, b.n), variant(cfg))?;
            let mut t = Table::new(&[
                "geometry", "variant", "n", "lambda", "r", "xnorm", "phi", "p",
            ]);
            t.push(vec![
                g.name().into(),
                variant_name(cfg).into(),
                b.n.into(),
                lambda.into(),
                b.r.into(),
                b.xnorm.into(),
                q.phi.into(),
                v.into(),
            ]);
            t
        }
    };
    Ok(Outcome::new(table))
}

fn grid(cfg: &RunConfig, lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    let (lo, hi) = (cfg.grid.min.unwrap_or(lo), cfg.grid.max.unwrap_or(hi));
    let m = cfg.grid.points.unwrap_or(points);
    if m < 2 || !(hi > lo) {
        return Err(CliError::Usage(format!(
            "grid needs max > min and at least 2 points, got [{lo}, {hi}] x {m}"
        )));
    }
    Ok((0..m)
        .map(|k| lo + (hi - lo) * k as f64 / (m - 1) as f64)
        .collect())
}

fn tabulate(cfg: &RunConfig) -> Result<Outcome> {
    let g = cfg.geometry()?;
    let c = cfg.command;
    let p = &cfg.point;
    let table = match g {
        Geometry::Halfspace => {
            let (n, xn) = (need(p.n, "n", c)?, need(p.xn, "xn", c)?);
            let spec = cfg.quadrature_spec();
            let mut t = Table::new(&["geometry", "n", "xn", "rho", "p"]);
            for rho in grid(cfg, 0.0, 10.0, 51)? {
                let v = poisson_kernel(&HalfSpaceQuery::new(n, xn, rho)?, &spec)?;
                t.push(vec![
                    g.name().into(),
                    n.into(),
                    xn.into(),
                    rho.into(),
                    v.into(),
                ]);
            }
            t
        }
        Geometry::Hball => {
            let b = ball_args(cfg, g)?;
            let k = BallKernel::new(b.n, b.r, b.xnorm, &cfg.contour_spec())?;
            let mut t = Table::new(&["geometry", "n", "r", "xnorm", "phi", "p"]);
            for phi in grid(cfg, 0.0, PI, 37)? {
                t.push(vec![
                    g.name().into(),
                    b.n.into(),
                    b.r.into(),
                    b.xnorm.into(),
                    phi.into(),
                    k.eval(phi)?.into(),
                ]);
            }
            t
        }
        Geometry::Ouball => {
            let b = ball_args(cfg, g)?;
            let lambda = b.lambda.unwrap();
            let spec = ou_spec(cfg, b.n);
            let derived = match variant(cfg) {
                OuVariant::Derived => Some(OuBallKernel::new(b.n, lambda, b.r, b.xnorm, &spec)?),
                OuVariant::AsPrinted => None,
            };
            let mut t = Table::new(&[
                "geometry", "variant", "n", "lambda", "r", "xnorm", "phi", "p",
            ]);
            let mut undefined = Vec::new();
            for phi in grid(cfg, 0.0, PI, 37)? {
                let v = match variant(cfg) {
                    OuVariant::Derived => derived.as_ref().unwrap().eval(phi)?,
                    OuVariant::AsPrinted => {
                        match poisson_kernel_ou_as_printed(
                            &OuBallQuery::new(b.n, lambda, b.r, b.xnorm, phi)?,
                            &spec,
                        ) {
                            Ok(v) => v,
                            Err(harmeas_core::Error::Domain(msg)) => {
                                undefined.push(format!("phi={}: {msg}", fmt_f64(phi)));
                                f64::NAN
                            }
                            Err(e) => return Err(e.into()),
                        }
                    }
                };
                t.push(vec![
                    g.name().into(),
                    variant_name(cfg).into(),
                    b.n.into(),
                    lambda.into(),
                    b.r.into(),
                    b.xnorm.into(),
                    phi.into(),
                    v.into(),
                ]);
            }
            let mut out = Outcome::new(t);
            out.notes
                .extend(undefined.into_iter().map(|m| format!("undefined: {m}")));
            return Ok(out);
        }
    };
    Ok(Outcome::new(table))
}

fn validate_asymptotics(cfg: &RunConfig) -> Result<Outcome> {
    let g = cfg.geometry()?;
    if g != Geometry::Halfspace {
        return Err(CliError::Usage(
            "validate-asymptotics supports --geometry halfspace only".into(),
        ));
    }
    let c = cfg.command;
    let p = &cfg.point;
    let (n, xn, rho) = (
        need(p.n, "n", c)?,
        need(p.xn, "xn", c)?,
        need(p.rho, "rho", c)?,
    );
    let spec = cfg.quadrature_spec();
    let kernel = poisson_kernel(&HalfSpaceQuery::new(n, xn, rho)?, &spec)?;
    let regime = cfg.validation.regime.unwrap_or_default();
    let constant = cfg.validation.constant.unwrap_or_default();
    let (name, ratio, target, tol) = match regime {
        Regime::LargeY => {
            let ratio = kernel * rho.powi(2 * n as i32 - 2) / (xn - 1.0);
            let target = match constant {
                Constant::Derived => asym_large_y(n, xn)?,
                Constant::Stated => asym_large_y_as_stated(n, xn)?,
            };
            ("large-y", ratio, target, 1e-2)
        }
        Regime::Boundary => (
            "boundary",
            kernel / (xn - 1.0),
            asym_boundary_limit(n, rho, &spec)?,
            1e-2,
        ),
    };
    let tol = cfg.validation.tol.unwrap_or(tol);
    let rel = ((ratio - target) / target).abs();
    let mut t = Table::new(&[
        "geometry",
        "regime",
        "constant",
        "n",
        "xn",
        "rho",
        "p",
        "ratio",
        "limit",
        "rel_error",
        "tol",
        "pass",
    ]);
    let constant_name = match (regime, constant) {
        (Regime::Boundary, _) => "derived",
        (_, Constant::Derived) => "derived",
        (_, Constant::Stated) => "stated",
    };
    t.push(vec![
        g.name().into(),
        name.into(),
        constant_name.into(),
        n.into(),
        xn.into(),
        rho.into(),
        kernel.into(),
        ratio.into(),
        target.into(),
        rel.into(),
        tol.into(),
        (rel <= tol).into(),
    ]);
    let mut out = Outcome::new(t);
    out.passed = rel <= tol;
    Ok(out)
}

fn validate_normalization(cfg: &RunConfig) -> Result<Outcome> {
    let g = cfg.geometry()?;
    let c = cfg.command;
    let p = &cfg.point;
    let tol = cfg.validation.tol.unwrap_or(default_mass_tol(g));
    let nodes = cfg.validation.nodes.unwrap_or(MASS_NODES);
    let (params, mass): (Vec<(&str, Cell)>, f64) = match g {
        Geometry::Halfspace => {
            let (n, xn) = (need(p.n, "n", c)?, need(p.xn, "xn", c)?);
            (
                vec![("n", n.into()), ("xn", xn.into())],
                normalization(n, xn, &cfg.quadrature_spec())?,
            )
        }
        Geometry::Hball => {
            let b = ball_args(cfg, g)?;
            let k = BallKernel::new(b.n, b.r, b.xnorm, &cfg.contour_spec())?;
            let mass = kernel_mass(b.n, b.r, |phi| k.eval(phi), nodes)?;
            (
                vec![
                    ("n", b.n.into()),
                    ("r", b.r.into()),
                    ("xnorm", b.xnorm.into()),
                ],
                mass,
            )
        }
        Geometry::Ouball => {
            let b = ball_args(cfg, g)?;
            let lambda = b.lambda.unwrap();
            let spec = ou_spec(cfg, b.n);
            let mass = match variant(cfg) {
                OuVariant::Derived => {
                    let k = OuBallKernel::new(b.n, lambda, b.r, b.xnorm, &spec)?;
                    kernel_mass(b.n, b.r, |phi| k.eval(phi), nodes)?
                }
                OuVariant::AsPrinted => kernel_mass(
                    b.n,
                    b.r,
                    |phi| {
                        poisson_kernel_ou_as_printed(
                            &OuBallQuery::new(b.n, lambda, b.r, b.xnorm, phi)?,
                            &spec,
                        )
                    },
                    nodes,
                )?,
            };
            let params = vec![
                ("variant", variant_name(cfg).into()),
                ("n", b.n.into()),
                ("lambda", lambda.into()),
                ("r", b.r.into()),
                ("xnorm", b.xnorm.into()),
            ];
            (params, mass)
        }
    };
    let err = (mass - 1.0).abs();
    let mut cols = vec!["geometry"];
    cols.extend(params.iter().map(|(k, _)| *k));
    cols.extend(["mass", "abs_error", "tol", "pass"]);
    let mut t = Table::new(&cols);
    let mut row: Vec<Cell> = vec![g.name().into()];
    row.extend(params.into_iter().map(|(_, v)| v));
    row.extend([mass.into(), err.into(), tol.into(), (err <= tol).into()]);
    t.push(row);
    let mut out = Outcome::new(t);
    out.passed = err <= tol;
    Ok(out)
}

/// Runs the histogram comparison described by `cfg`.
pub fn comparison(cfg: &RunConfig) -> Result<Comparison> {
    let g = cfg.geometry()?;
    let c = cfg.command;
    let p = &cfg.point;
    let mc = cfg.mc_config();
    let keep = cfg.output.samples.is_some();
    match g {
        Geometry::Halfspace => {
            let (n, xn) = (need(p.n, "n", c)?, need(p.xn, "xn", c)?);
            let rho_max = cfg.grid.max.unwrap_or(4.0 * xn);
            halfspace_comparison(n, xn, rho_max, cfg.bins(), mc, &cfg.quadrature_spec(), keep)
        }
        Geometry::Hball | Geometry::Ouball => {
            let b = ball_args(cfg, g)?;
            let problem = match b.lambda {
                Some(lambda) => BallProblem::Ou { lambda },
                None => BallProblem::Hyperbolic,
            };
            ball_comparison(
                problem,
                b.n,
                b.r,
                b.xnorm,
                cfg.bins(),
                mc,
                &cfg.contour_spec(),
                keep,
            )
        }
    }
}

/// Evaluation parameters carried by every `mc-compare` row.
fn mc_parameters(cfg: &RunConfig) -> Result<Vec<(&'static str, Cell)>> {
    let g = cfg.geometry()?;
    let mc = cfg.mc_config();
    let p = &cfg.point;
    let mut v: Vec<(&'static str, Cell)> = vec![
        ("geometry", g.name().into()),
        ("n", need(p.n, "n", cfg.command)?.into()),
    ];
    match g {
        Geometry::Halfspace => v.push(("xn", need(p.xn, "xn", cfg.command)?.into())),
        Geometry::Hball | Geometry::Ouball => {
            let b = ball_args(cfg, g)?;
            if let Some(lambda) = b.lambda {
                v.push(("lambda", lambda.into()));
            }
            v.push(("r", b.r.into()));
            v.push(("xnorm", b.xnorm.into()));
        }
    }
    v.extend([
        ("dt", mc.dt.into()),
        ("paths", mc.n_paths.into()),
        ("seed", mc.seed.into()),
    ]);
    Ok(v)
}

fn with_parameters(table: Table, params: Vec<(&'static str, Cell)>) -> Table {
    let mut cols: Vec<&str> = params.iter().map(|(k, _)| *k).collect();
    cols.extend(table.columns.iter().map(String::as_str));
    let mut out = Table::new(&cols);
    for row in table.rows {
        let mut r: Vec<Cell> = params.iter().map(|(_, v)| v.clone()).collect();
        r.extend(row);
        out.push(r);
    }
    out
}

fn mc_compare(cfg: &RunConfig) -> Result<Outcome> {
    let z_max = cfg.validation.z_max.unwrap_or(3.0);
    let cmp = comparison(cfg)?;
    if let (Some(path), Some([fk, sde])) = (&cfg.output.samples, &cmp.samples) {
        std::fs::write(path, samples_csv(&[("fk", fk), ("sde", sde)]))?;
    }
    let mut out = Outcome::new(with_parameters(cmp.table(), mc_parameters(cfg)?));
    let mass = cmp.fk_mass;
    out.notes.push(format!(
        "fk_mass: {} se {} z {}",
        fmt_f64(mass.mean),
        fmt_f64(mass.std_error),
        fmt_f64(mass.z_score(1.0))
    ));
    if let Some(m) = cmp.fk_as_printed_mass {
        out.notes.push(format!(
            "fk_mass_as_printed_weight: {} se {} z {}",
            fmt_f64(m.mean),
            fmt_f64(m.std_error),
            fmt_f64(m.z_score(1.0))
        ));
    }
    out.notes.push(format!(
        "budget_failures: fk {} sde {}",
        cmp.budget_failures[0], cmp.budget_failures[1]
    ));
    out.notes.push(format!(
        "max_abs_z: fk-kernel {} sde-kernel {} fk-sde {} (limit {})",
        fmt_f64(Comparison::max_abs(&cmp.z_fk_kernel)),
        fmt_f64(Comparison::max_abs(&cmp.z_sde_kernel)),
        fmt_f64(Comparison::max_abs(&cmp.z_fk_sde)),
        fmt_f64(z_max)
    ));
    if let Some(note) = corona_note(cfg) {
        log::warn!("{note}");
        out.notes.push(note);
    }
    out.passed = cmp.max_abs_z() < z_max;
    Ok(out)
}

/// Start points closer to the boundary than the validated range.
fn corona_note(cfg: &RunConfig) -> Option<String> {
    let p = &cfg.point;
    match cfg.geometry().ok()? {
        Geometry::Halfspace => {
            let xn = p.xn?;
            (xn < CORONA_HALFSPACE)
                .then(|| format!("unvalidated: x_n = {xn} is below {CORONA_HALFSPACE}"))
        }
        Geometry::Hball | Geometry::Ouball => {
            let (r, x) = (p.r?, p.xnorm?);
            (x > CORONA_BALL * r).then(|| format!("unvalidated: |x| = {x} exceeds {CORONA_BALL} r"))
        }
    }
}

fn specfun_selftest() -> Result<Outcome> {
    let checks = all_checks()?;
    let mut out = Outcome::new(checks_table(&checks));
    let failed = checks.iter().filter(|c| !c.passed()).count();
    out.notes
        .push(format!("checks: {} failed: {failed}", checks.len()));
    out.passed = failed == 0;
    Ok(out)
}
