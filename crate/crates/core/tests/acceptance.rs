mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use acbm_core::catalog::{example_abelian_f0, example_functions, example_sasaki5};
use acbm_core::commands::{cmd_curvature, cmd_soliton, cmd_verify, Mode, SolitonOptions};
use acbm_core::expr::{Expression, LatticeSampler, Point};
use acbm_core::lie::CurvatureData;
use acbm_core::manifest::Manifest;
use acbm_core::scalar::{rat, Rational};
use acbm_core::structure::{fundamental_tensor, lee_forms, AcbmManifold, LeeForms};
use acbm_core::tensor::{Covector, FrameTensor};
use acbm_core::transform::{
    alpha_beta, check_theorem1, check_theorem2, lie_derivative_reeb, scalar_transform,
    soliton_residual, transform_f, transform_lee, transform_structure, SolitonKind, SourceGeometry,
    COND_DU_XI, COND_DV_XI_ONE, COND_DV_XI_ZERO, COND_DW, ID_F_MODEL, ID_KILLING, ID_LEE_FORMS,
    ID_RECONSTRUCTION,
};
use common::{close, fd_partial, r};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn json_loaded(m: &AcbmManifold<Rational>) -> acbm_core::manifest::LoadedManifest {
    Manifest::from_manifold(None, m).load().unwrap()
}

/// All index tuples generated from `R_{ijkl}` by the curvature symmetries,
/// with their signs.
fn orbit(idx: [usize; 4], v: i64) -> Vec<([usize; 4], i64)> {
    let mut out: BTreeMap<[usize; 4], i64> = BTreeMap::new();
    let mut stack = vec![(idx, v)];
    while let Some((i, s)) = stack.pop() {
        if out.insert(i, s).is_some() {
            continue;
        }
        let [a, b, c, d] = i;
        stack.push(([b, a, c, d], -s));
        stack.push(([a, b, d, c], -s));
        stack.push(([c, d, a, b], s));
    }
    out.into_iter().collect()
}

fn curvature_regression() -> Outcome {
    let published: [([usize; 4], i64); 10] = [
        ([0, 1, 1, 0], 1),
        ([0, 2, 2, 0], 1),
        ([0, 3, 3, 0], -1),
        ([0, 4, 4, 0], -1),
        ([1, 2, 3, 4], 1),
        ([1, 4, 3, 2], 1),
        ([2, 3, 4, 1], 1),
        ([3, 4, 1, 2], 1),
        ([1, 3, 3, 1], 1),
        ([2, 4, 4, 2], 1),
    ];
    let mut expected: BTreeMap<String, String> = BTreeMap::new();
    for (idx, v) in published {
        for (i, s) in orbit(idx, v) {
            let key: String = i.iter().map(|k| k.to_string()).collect();
            if let Some(prev) = expected.insert(key.clone(), s.to_string()) {
                ensure(
                    prev == s.to_string(),
                    format!("inconsistent table at {key}"),
                )?;
            }
        }
    }
    let start = Instant::now();
    for (l, m) in [(0, 0), (1, 2)] {
        let ex = example_sasaki5(&r(l), &r(m));
        let report = cmd_curvature(&json_loaded(&ex.manifold), Mode::Rational, Value::Null);
        ensure(report.passed, "curvature report has failing checks")?;
        let got: BTreeMap<String, String> = report.data["riemann"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| {
                (
                    e["index"].as_str().unwrap().to_string(),
                    e["value"].as_str().unwrap().to_string(),
                )
            })
            .collect();
        ensure(
            got == expected,
            format!("lambda={l}, mu={m}: support differs from the table"),
        )?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(1), format!("took {t:?}"))?;
    Ok(format!(
        "{} non-zero components, both parameter pairs, {t:.0?}",
        expected.len()
    ))
}

fn ricci_regression() -> Outcome {
    let ex = example_sasaki5(&r(0), &r(0));
    let m = &ex.manifold;
    let conn = m.connection().unwrap();
    let c = CurvatureData::compute(&conn, &m.alg, &m.structure.metric, &m.structure.phi);
    let eta = &m.structure.eta.0;
    let rho = FrameTensor::from_fn(5, c.ricci.slots().to_vec(), |i| {
        r(4) * eta[i[0]].clone() * eta[i[1]].clone()
    });
    ensure(c.ricci == rho, "rho != 4 eta (x) eta")?;
    ensure(c.tau == r(4), format!("tau = {}", c.tau))?;
    ensure(c.tau_star == r(0), format!("tau* = {}", c.tau_star))?;
    Ok("rho = 4 eta (x) eta, tau = 4, tau* = 0".into())
}

fn lee_regression() -> Outcome {
    let ex = example_sasaki5(&r(0), &r(0));
    let m = &ex.manifold;
    let f = fundamental_tensor(&m.structure, &m.connection().unwrap());
    let lee = lee_forms(&f, &m.structure);
    ensure(
        lee.theta == m.structure.eta.scale(&r(-4)),
        format!("theta = {:?}", lee.theta),
    )?;
    ensure(lee.theta_star == Covector::zeros(5), "theta* != 0")?;
    ensure(lee.omega == Covector::zeros(5), "omega != 0")?;
    Ok("theta = -4 eta, theta* = 0, omega = 0".into())
}

/// `F_{ijk} = g(∇_i(φE_j) − φ∇_iE_j, E_k)` straight from the connection.
fn f_direct(m: &AcbmManifold<Rational>) -> FrameTensor<Rational> {
    let s = &m.structure;
    let conn = m.connection().unwrap();
    let e = s.basis();
    let pe = s.phi_basis();
    FrameTensor::from_fn(5, vec![acbm_core::tensor::Variance::Co; 3], |i| {
        let a = conn.nabla(&e[i[0]], &pe[i[1]]);
        let b = acbm_core::tensor::endo_apply(&s.phi, &conn.nabla(&e[i[0]], &e[i[1]]));
        s.g(&a.sub(&b), &e[i[2]])
    })
}

fn structure_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut manifolds = vec![
        (
            "sasaki5".to_string(),
            example_sasaki5(&r(0), &r(0)).manifold,
        ),
        (
            "sasaki5(1,2)".to_string(),
            example_sasaki5(&r(1), &r(2)).manifold,
        ),
        ("abelian5".to_string(), example_abelian_f0().manifold),
    ];
    for k in 0..20 {
        manifolds.push((format!("random #{k}"), common::random_manifold(&mut rng)));
    }
    let mut checks = 0;
    for (name, m) in &manifolds {
        let report = cmd_verify(&json_loaded(m), Mode::Rational, Value::Null);
        let fails: Vec<_> = report.failures().map(|c| c.name.clone()).collect();
        ensure(fails.is_empty(), format!("{name}: {fails:?}"))?;
        for c in &report.checks {
            if let Some(res) = c.residual {
                ensure(res == 0.0, format!("{name}: {} residual {res}", c.name))?;
            }
        }
        checks += report.checks.len();
        let f = fundamental_tensor(&m.structure, &m.connection().unwrap());
        ensure(f == f_direct(m), format!("{name}: F differs from direct"))?;
    }
    Ok(format!(
        "{} manifolds, {checks} exact checks",
        manifolds.len()
    ))
}

fn max_diff(a: &Covector<f64>, b: &Covector<f64>) -> f64 {
    a.max_abs_diff(b)
}

fn sasaki_branch() -> Outcome {
    let start = Instant::now();
    let ex = example_sasaki5(&r(0), &r(0));
    let src = SourceGeometry::new(&ex.manifold).unwrap();
    let tt = example_functions();
    let pts = tt.sample_points(100, 5).unwrap();
    let v = check_theorem2(&src, &tt, &pts, None).unwrap();
    for name in [COND_DU_XI, COND_DV_XI_ONE, COND_DW] {
        let c = v.condition(name).unwrap();
        ensure(c.max < 1e-9, format!("{name}: {:e}", c.max))?;
    }
    ensure(v.killing < 1e-8, format!("L_xibar gbar {:e}", v.killing))?;
    ensure(
        v.f1_residual < 1e-8,
        format!("F1 residual {:e}", v.f1_residual),
    )?;
    let s = &src.structure;
    let mut worst = 0.0f64;
    for p in &pts {
        let jet = tt.jet(p).unwrap();
        ensure(jet.du.apply(&s.xi).abs() < 1e-9, "du(xi)")?;
        ensure((jet.dv.apply(&s.xi) - 1.0).abs() < 1e-9, "dv(xi)")?;
        let lee = src.transform_at(&jet).unwrap().traced_lee();
        worst = worst
            .max(max_diff(&lee.theta, &jet.du.compose(&s.phi).scale(&8.0)))
            .max(max_diff(&lee.theta_star, &jet.du.scale(&8.0)))
            .max(lee.omega.max_abs());
    }
    ensure(worst < 1e-8, format!("Lee forms off by {worst:e}"))?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(10), format!("took {t:?}"))?;
    Ok(format!(
        "100 points, Killing {:.1e}, F1 {:.1e}, Lee {worst:.1e}, {t:.0?}",
        v.killing, v.f1_residual
    ))
}

fn cosymplectic_branch() -> Outcome {
    let ex = example_abelian_f0();
    let src = SourceGeometry::new(&ex.manifold).unwrap();
    let tt = ex.functions.unwrap();
    let pts = tt.sample_points(100, 6).unwrap();
    let v = check_theorem1(&src, &tt, &pts, None).unwrap();
    for name in [COND_DU_XI, COND_DV_XI_ZERO, COND_DW] {
        let c = v.condition(name).unwrap();
        ensure(c.max < 1e-9, format!("{name}: {:e}", c.max))?;
    }
    for name in [ID_KILLING, ID_F_MODEL, ID_RECONSTRUCTION, ID_LEE_FORMS] {
        let c = v.identity(name).unwrap();
        ensure(c.max < 1e-8, format!("{name}: {:e}", c.max))?;
    }
    let s = &src.structure;
    let phi2 = s.phi_squared();
    let mut worst = 0.0f64;
    for p in &pts {
        let jet = tt.jet(p).unwrap();
        let lee = src.transform_at(&jet).unwrap().traced_lee();
        let theta = jet
            .du
            .compose(&s.phi)
            .sub(&jet.dv.compose(&phi2))
            .scale(&4.0);
        let star = jet
            .du
            .compose(&phi2)
            .add(&jet.dv.compose(&s.phi))
            .scale(&-4.0);
        worst = worst
            .max(max_diff(&lee.theta, &theta))
            .max(max_diff(&lee.theta_star, &star))
            .max(lee.omega.max_abs());
    }
    ensure(worst < 1e-8, format!("Lee forms off by {worst:e}"))?;
    Ok(format!(
        "100 points, Killing {:.1e}, Lee {worst:.1e}",
        v.killing
    ))
}

fn scalar_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (u, v, w) = (
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        );
        let (tau, star) = scalar_transform(4.0, 0.0, 4.0, u, v, w);
        let want = 4.0 * (-2.0 * w).exp();
        let rel = (tau - want).abs() / want;
        worst = worst.max(rel);
        ensure(
            rel <= 1e-12,
            format!("tau_bar at ({u}, {v}, {w}): rel {rel:e}"),
        )?;
        ensure(star == 0.0, format!("tau_bar* = {star:e}"))?;
    }
    Ok(format!("100 samples, worst relative {worst:.1e}"))
}

fn soliton_at_w_zero() -> Outcome {
    let ex = example_sasaki5(&r(0), &r(0));
    let src = SourceGeometry::new(&ex.manifold).unwrap();
    let tt = example_functions();
    let pts = LatticeSampler::new(5)
        .pin(0, r(0))
        .sample(&tt.expressions(), 50, 8)
        .unwrap();
    let v = check_theorem2(&src, &tt, &pts, Some(4.0)).unwrap();
    ensure(
        v.soliton_kind == Some(SolitonKind::Shrinking),
        "sigma_bar = 4 not shrinking",
    )?;
    let mut worst = 0.0f64;
    for p in &pts {
        let jet = tt.jet(p).unwrap();
        ensure(jet.w == 0.0, "w != 0")?;
        let ts = src.transform_at(&jet).unwrap();
        let res = soliton_residual(&ts.lie, &ts.structure.metric.g, ts.tau_bar, 4.0);
        worst = worst.max(res);
    }
    ensure(worst < 1e-8, format!("residual {worst:e}"))?;
    ensure(v.soliton_points == pts.len(), "report disagrees")?;
    let mut loaded = Manifest::from_example(&ex).load().unwrap();
    loaded.sigma = Some(rat(4, 1));
    let report = cmd_soliton(
        &loaded,
        Mode::Rational,
        Value::Null,
        &SolitonOptions::default(),
    )
    .unwrap();
    ensure(
        report.data["soliton_kind"] == "shrinking",
        "report does not say shrinking",
    )?;
    Ok(format!(
        "{} points with w = 0, residual {worst:.1e}, shrinking",
        pts.len()
    ))
}

fn two_routes() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for k in 0..100 {
        let m = common::random_manifold(&mut rng);
        let src = SourceGeometry::new(&m).unwrap();
        let tt = common::random_triple(&mut rng, 5);
        let p = common::random_point(&mut rng, 5);
        let jet = tt.jet(&p).unwrap();
        let s = &src.structure;
        let bar = transform_structure(s, &jet).unwrap();
        let f_bar = transform_f(s, &src.f, &jet);
        let traced = lee_forms(&f_bar, &bar);
        let (alpha, beta) = alpha_beta(&jet.du, &jet.dv, &s.phi);
        let rule: LeeForms<f64> = transform_lee(&src.lee, &alpha, &beta, &jet.dw, &s.phi, 2);
        let d = traced.max_abs_diff(&rule);
        worst = worst.max(d);
        ensure(d < 1e-8, format!("pair {k}: {d:e}"))?;
        ensure(
            lie_derivative_reeb(&bar, &f_bar).max_abs().is_finite(),
            "non-finite",
        )?;
    }
    Ok(format!("100 pairs, worst {worst:.1e}"))
}

fn ad_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut seen = [0usize; common::NODE_KINDS.len()];
    let mut pairs = 0;
    let mut attempts = 0;
    let mut worst = 0.0f64;
    while pairs < 500 {
        attempts += 1;
        ensure(attempts < 200_000, "generator rejects too often")?;
        let dim = rng.gen_range(1..=5);
        let node = common::random_node(&mut rng, dim, 4);
        let e = Expression::new(node, dim).unwrap();
        let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let p = Point::from_f64(&x);
        if e.check_regular(&p, 1e-2).is_err() {
            continue;
        }
        let Ok(ad) = e.differential_f64(&p) else {
            continue;
        };
        let value = e.eval_f64(&x).unwrap();
        if !value.is_finite() || value.abs() > 1e6 || ad.max_abs() > 1e6 {
            continue;
        }
        for (i, &a) in ad.0.iter().enumerate() {
            let (fd, err) = [1e-1, 1e-2, 1e-3, 1e-4]
                .into_iter()
                .map(|h| fd_partial(&e, &x, i, h))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            // Floor for partials that vanish: the oracle's error bound plus
            // rounding in the AD sweep.
            let noise = 10.0 * err + 1e-12 * value.abs().max(1.0);
            let rel = (a - fd).abs() / a.abs().max(fd.abs()).max(1e-300);
            if !close(a, fd, 1e-6, noise) {
                return Err(format!("{e} at {x:?}, d/dx{i}: AD {a}, FD {fd}"));
            }
            if (a - fd).abs() > noise {
                worst = worst.max(rel);
            }
        }
        common::visit(e.root(), &mut |n| seen[common::node_kind(n)] += 1);
        pairs += 1;
    }
    let missing: Vec<_> = common::NODE_KINDS
        .iter()
        .zip(seen)
        .filter(|(_, c)| *c == 0)
        .map(|(k, _)| *k)
        .collect();
    ensure(
        missing.is_empty(),
        format!("node kinds not covered: {missing:?}"),
    )?;
    Ok(format!(
        "500 pairs, all {} node kinds, worst relative {worst:.1e}",
        seen.len()
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("curvature regression", curvature_regression),
        ("Ricci and scalar curvature", ricci_regression),
        ("Lee forms", lee_regression),
        ("structure and connection suite", structure_suite),
        ("Sasaki-like transformation end to end", sasaki_branch),
        (
            "cosymplectic transformation end to end",
            cosymplectic_branch,
        ),
        ("scalar curvature transform", scalar_identity),
        ("soliton residual at w = 0", soliton_at_w_zero),
        ("two-route Lee forms", two_routes),
        ("automatic differentiation", ad_correctness),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{t:.1?}]", k + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why} [{t:.1?}]", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
