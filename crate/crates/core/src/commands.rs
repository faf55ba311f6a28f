//! The report-producing commands behind the CLI.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::catalog::{example_by_name, Provenance};
use crate::error::{CommandError, ManifestError};
use crate::lie::CurvatureData;
use crate::manifest::{LoadedManifest, Manifest};
use crate::report::{Check, Report, Status};
use crate::scalar::{Rational, Scalar};
use crate::structure::{
    fundamental_tensor, is_cosymplectic, is_f1, is_sasaki_like, lee_forms, sasaki_model,
    AcbmManifold, FundamentalIdentities, AXIOM_TOL,
};
use crate::tensor::{eval_covariant, scalar_json, FrameTensor};
use crate::transform::{
    check_branch, detect_branch, Branch, SolitonKind, SourceGeometry, DEFAULT_POINTS, ID_LEE_ROUTES,
};

pub const DEFAULT_SEED: u64 = 1;

/// Label attached to the scalar curvature relations of the transformation.
pub const SCALAR_RELATION_LABEL: &str = "formula-level, homothetic-justified";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Rational,
    Double,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Rational => "rational",
            Mode::Double => "double",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rational" | "exact" => Ok(Mode::Rational),
            "double" | "f64" => Ok(Mode::Double),
            _ => Err(format!("unknown mode {s:?}; expected rational or double")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolitonOptions {
    pub branch: Option<Branch>,
    pub points: usize,
    pub seed: u64,
    pub sigma: Option<f64>,
}

impl Default for SolitonOptions {
    fn default() -> Self {
        SolitonOptions {
            branch: None,
            points: DEFAULT_POINTS,
            seed: DEFAULT_SEED,
            sigma: None,
        }
    }
}

fn status_check(name: &str, ok: bool, detail: Option<String>) -> Check {
    let c = Check::pass_if(name, ok);
    match detail {
        Some(d) => c.detail(d),
        None => c,
    }
}

fn at(idx: &[usize]) -> String {
    let parts: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
    format!("first failure at ({})", parts.join(", "))
}

/// Exact comparison in rational mode, `tol` in double mode.
fn exact_check<T: Scalar>(name: &str, residual: f64, tol: f64) -> Check {
    if T::EXACT {
        let mut c = Check::pass_if(name, residual == 0.0);
        c.residual = Some(residual);
        c.tolerance = Some(0.0);
        c
    } else {
        Check::residual(name, residual, tol)
    }
}

fn verify_checks<T: Scalar>(m: &AcbmManifold<T>) -> Vec<Check> {
    let s = &m.structure;
    let mut out = Vec::new();
    for a in s.validate().checks {
        out.push(status_check(
            &format!("axiom: {}", a.axiom.label()),
            a.passed,
            a.at.as_deref().map(at),
        ));
    }
    out.push(status_check(
        "Jacobi identity",
        m.alg.jacobi_defect().is_none(),
        m.alg.jacobi_defect().map(|d| at(&d)),
    ));
    let conn = match m.connection() {
        Ok(c) => c,
        Err(e) => {
            out.push(Check::new("Levi-Civita connection", Status::Fail).detail(e.to_string()));
            return out;
        }
    };
    let torsion = conn.torsion_defect(&m.alg);
    out.push(status_check(
        "connection torsion-free",
        torsion.is_none(),
        torsion.map(|d| at(&d)),
    ));
    let compat = conn.metric_defect(&s.metric);
    out.push(status_check(
        "connection metric",
        compat.is_none(),
        compat.map(|d| at(&d)),
    ));
    let curv = CurvatureData::compute(&conn, &m.alg, &s.metric, &s.phi);
    for (name, defect) in curv.symmetry_defects() {
        out.push(status_check(name, defect.is_none(), defect.map(|d| at(&d))));
    }
    let f = fundamental_tensor(s, &conn);
    let ids = FundamentalIdentities::compute(s, &conn, &f);
    out.push(exact_check::<T>(
        "F(X,Y,Z) = F(X,Z,Y)",
        ids.symmetry,
        AXIOM_TOL,
    ));
    out.push(exact_check::<T>(
        "F(X,Y,Z) = F(X,phi Y,phi Z) + eta(Y)F(X,xi,Z) + eta(Z)F(X,Y,xi)",
        ids.phi_shift,
        AXIOM_TOL,
    ));
    out.push(exact_check::<T>(
        "g(nabla_X xi, Y) = F(X,phi Y,xi)",
        ids.reeb,
        AXIOM_TOL,
    ));
    let lee = lee_forms(&f, s);
    let (star, om) = lee.identity_residuals(s);
    out.push(exact_check::<T>(
        "theta* o phi = -theta o phi^2",
        star,
        AXIOM_TOL,
    ));
    out.push(exact_check::<T>("omega(xi) = 0", om, AXIOM_TOL));
    out
}

fn new_report(command: &str, mode: Mode, inputs: Value) -> Report {
    Report::new(command, mode.name(), inputs)
}

/// Structure axioms, connection and curvature identities, and the Lee form
/// identities.
pub fn cmd_verify(m: &LoadedManifest, mode: Mode, inputs: Value) -> Report {
    let mut r = new_report("verify", mode, inputs);
    let checks = match mode {
        Mode::Rational => verify_checks(&m.manifold),
        Mode::Double => verify_checks(&m.manifold.to_f64()),
    };
    r.extend(checks);
    r
}

fn support_json<T: Scalar>(t: &FrameTensor<T>) -> Value {
    Value::Array(
        t.support(0.0)
            .into_iter()
            .map(|(idx, v)| {
                let key: String = idx.iter().map(|i| i.to_string()).collect();
                json!({ "index": key, "value": scalar_json(&v) })
            })
            .collect(),
    )
}

fn curvature_report<T: Scalar>(m: &AcbmManifold<T>, r: &mut Report) {
    let s = &m.structure;
    let conn = match m.connection() {
        Ok(c) => c,
        Err(e) => {
            r.push(Check::new("Levi-Civita connection", Status::Fail).detail(e.to_string()));
            return;
        }
    };
    let curv = CurvatureData::compute(&conn, &m.alg, &s.metric, &s.phi);
    for (name, defect) in curv.symmetry_defects() {
        r.push(status_check(name, defect.is_none(), defect.map(|d| at(&d))));
    }
    let rho_xi_xi = eval_covariant(&curv.ricci, &[&s.xi, &s.xi]);
    // Γ stored as [i, j, k] = Γ^k_{ij}
    r.set_data("christoffel", support_json(conn.coefficients()));
    r.set_data("riemann", support_json(&curv.riemann));
    r.set_data("ricci", curv.ricci.to_json());
    r.set_data("tau", scalar_json(&curv.tau));
    r.set_data("tau_star", scalar_json(&curv.tau_star));
    r.set_data("rho_xi_xi", scalar_json(&rho_xi_xi));
}

/// Christoffel symbols, Riemann tensor, Ricci tensor, `τ`, `τ*`.
pub fn cmd_curvature(m: &LoadedManifest, mode: Mode, inputs: Value) -> Report {
    let mut r = new_report("curvature", mode, inputs);
    match mode {
        Mode::Rational => curvature_report(&m.manifold, &mut r),
        Mode::Double => curvature_report(&m.manifold.to_f64(), &mut r),
    }
    r
}

fn classify_report<T: Scalar>(m: &AcbmManifold<T>, r: &mut Report) -> Vec<&'static str> {
    let s = &m.structure;
    let report = s.validate();
    r.push(status_check(
        "structure axioms",
        report.passed(),
        (!report.passed()).then(|| report.summary()),
    ));
    if !report.passed() {
        return Vec::new();
    }
    let conn = match m.connection() {
        Ok(c) => c,
        Err(e) => {
            r.push(Check::new("Levi-Civita connection", Status::Fail).detail(e.to_string()));
            return Vec::new();
        }
    };
    let f = fundamental_tensor(s, &conn);
    let lee = lee_forms(&f, s);
    let mut classes = Vec::new();
    let yes_no = |b: bool| if b { "member" } else { "not a member" };

    let f0 = is_cosymplectic(&f);
    let mut c = Check::info("class F0 (cosymplectic)", yes_no(f0));
    c.residual = Some(f.max_abs());
    r.push(c);
    if f0 {
        classes.push("F0");
    }
    let sl = is_sasaki_like(&f, s).unwrap_or(false);
    let mut c = Check::info("Sasaki-like", yes_no(sl));
    c.residual = Some(f.max_abs_diff(&sasaki_model(s)));
    r.push(c);
    if sl {
        classes.push("Sasaki-like");
    }
    let f1 = is_f1(&f, s, &lee);
    let mut c = Check::info("class F1", yes_no(f1.member));
    c.residual = Some(f1.residual);
    r.push(c);
    if f1.member {
        classes.push("F1");
    }
    r.set_data(
        "lee_forms",
        json!({
            "theta": lee.theta.to_json(),
            "theta_star": lee.theta_star.to_json(),
            "omega": lee.omega.to_json(),
        }),
    );
    classes
}

/// `F₀`, Sasaki-like and `F₁` verdicts; with functions present, also the
/// `F₁` test for the transformed structure at sampled points.
pub fn cmd_classify(
    m: &LoadedManifest,
    mode: Mode,
    inputs: Value,
    points: usize,
    seed: u64,
) -> Result<Report, CommandError> {
    let mut r = new_report("classify", mode, inputs);
    let classes = match mode {
        Mode::Rational => classify_report(&m.manifold, &mut r),
        Mode::Double => classify_report(&m.manifold.to_f64(), &mut r),
    };
    r.set_data("classes", json!(classes));
    if let (Some(tt), true) = (&m.functions, r.passed) {
        r.seed = Some(seed);
        let src = source_geometry(m, mode)?;
        let pts = tt.sample_points(points, seed)?;
        let mut worst = 0.0f64;
        for p in &pts {
            let ts = src.transform_at(&tt.jet(p)?)?;
            let res = is_f1(&ts.f_bar, &ts.structure, &ts.traced_lee()).residual;
            worst = worst.max(res);
        }
        let member = worst < crate::structure::F1_TOL;
        let mut c = Check::info(
            "transformed class F1",
            format!(
                "{} at {} sampled points",
                if member { "member" } else { "not a member" },
                pts.len()
            ),
        );
        c.residual = Some(worst);
        c.tolerance = Some(crate::structure::F1_TOL);
        r.push(c);
        let transformed: Vec<&str> = if member { vec!["F1"] } else { Vec::new() };
        r.set_data("transformed_classes", json!(transformed));
    }
    Ok(r)
}

fn source_geometry(m: &LoadedManifest, mode: Mode) -> Result<SourceGeometry, CommandError> {
    Ok(match mode {
        Mode::Rational => SourceGeometry::new(&m.manifold)?,
        Mode::Double => SourceGeometry::new(&m.manifold.to_f64())?,
    })
}

fn identity_provenance(name: &str) -> Provenance {
    if name == ID_LEE_ROUTES {
        Provenance::Structural
    } else {
        Provenance::Published
    }
}

/// Transformation conditions, identities and the soliton equation at sampled
/// points.
pub fn cmd_soliton(
    m: &LoadedManifest,
    mode: Mode,
    inputs: Value,
    opts: &SolitonOptions,
) -> Result<Report, CommandError> {
    let tt = m.functions.as_ref().ok_or_else(|| {
        CommandError::Usage("soliton needs functions u, v, w in the manifest".into())
    })?;
    let src = source_geometry(m, mode)?;
    let branch = match opts.branch {
        Some(b) => b,
        None => detect_branch(&src).ok_or_else(|| {
            CommandError::Usage("source manifold is neither cosymplectic nor Sasaki-like".into())
        })?,
    };
    let sigma = opts.sigma.or_else(|| m.sigma.as_ref().map(Scalar::to_f64));
    let pts = tt.sample_points(opts.points, opts.seed)?;
    let verdict = check_branch(branch, &src, tt, &pts, sigma)?;

    let mut r = new_report("soliton", mode, inputs);
    r.seed = Some(opts.seed);
    for c in &verdict.conditions {
        let mut check =
            Check::residual(c.name, c.max, c.tolerance).provenance(Provenance::Published.name());
        if !c.passed {
            check = check.detail(format!("worst at point {}", c.worst_point));
        }
        r.push(check);
    }
    for c in &verdict.identities {
        let mut check = Check::residual(c.name, c.max, c.tolerance)
            .provenance(identity_provenance(c.name).name());
        if !verdict.conditions_hold {
            check.status = Status::Info;
            check = check.detail("not asserted: transformation conditions fail");
        }
        r.push(check);
    }
    r.push(
        Check::info(
            "scalar curvature of the transformed metric",
            format!(
                "tau_bar, tau_bar* from the source scalars tau = {}, tau* = {}, rho(xi,xi) = {}",
                src.tau, src.tau_star, src.rho_xi_xi
            ),
        )
        .provenance(SCALAR_RELATION_LABEL),
    );
    match sigma {
        Some(s) => {
            let matching: Vec<_> = verdict
                .points
                .iter()
                .filter(|p| p.tau_equals_sigma)
                .collect();
            let ok = verdict.conditions_hold && matching.iter().all(|p| p.soliton);
            let detail = format!(
                "holds at {} of {} points; tau_bar != sigma_bar at {} points",
                verdict.soliton_points,
                verdict.points.len(),
                verdict.tau_sigma_mismatches
            );
            let status = if matching.is_empty() {
                Status::Info
            } else {
                Status::from_bool(ok)
            };
            r.push(Check::new("soliton equation where tau_bar = sigma_bar", status).detail(detail));
            r.push(Check::info("soliton type", SolitonKind::of(s).name()));
        }
        None => r.push(Check::info(
            "soliton constant",
            "sigma_bar not given; taken as tau_bar at each point",
        )),
    }
    let (lo, hi) = verdict
        .points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.tau_bar), hi.max(p.tau_bar))
        });
    r.set_data("branch", json!(branch.name()));
    r.set_data("points", json!(pts.len()));
    r.set_data("conditions_hold", json!(verdict.conditions_hold));
    r.set_data("verified", json!(verdict.verified));
    r.set_data("killing_residual", json!(verdict.killing));
    r.set_data("f1_residual", json!(verdict.f1_residual));
    r.set_data("sigma_bar", json!(sigma));
    r.set_data(
        "soliton_kind",
        json!(verdict.soliton_kind.map(|k| k.name())),
    );
    r.set_data("soliton_points", json!(verdict.soliton_points));
    r.set_data("tau_sigma_mismatches", json!(verdict.tau_sigma_mismatches));
    r.set_data("tau_bar_range", json!([lo, hi]));
    r.points = verdict
        .points
        .iter()
        .map(|p| serde_json::to_value(p).expect("point serialises"))
        .collect();
    Ok(r)
}

/// Manifest JSON for a built-in example.
pub fn export_example(
    name: &str,
    lambda: &Rational,
    mu: &Rational,
) -> Result<Manifest, ManifestError> {
    example_by_name(name, lambda, mu)
        .map(|ex| Manifest::from_example(&ex))
        .ok_or_else(|| {
            ManifestError::field(
                "example",
                format!(
                    "unknown example {name:?}; available: {}",
                    crate::catalog::EXAMPLE_NAMES.join(", ")
                ),
            )
        })
}
