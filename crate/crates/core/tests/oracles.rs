//! Independent recomputations of engine results.

mod common;

use acbm_core::catalog::{example_abelian_f0, example_sasaki5};
use acbm_core::lie::CurvatureData;
use acbm_core::scalar::Rational;
use acbm_core::structure::{fundamental_tensor, lee_forms, AlmostContactStructure};
use acbm_core::tensor::{endo_apply, FrameTensor, Variance, Vector};
use acbm_core::transform::{
    check_theorem1, lie_derivative_reeb, transform_f, transform_structure, SourceGeometry,
    TransformJet, TransformTriple,
};
use common::r;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const D: usize = 5;

/// `ḡ` and `∂_k ḡ_ij` for a structure with constant coefficients in the
/// coordinate frame, written out from the definition.
fn metric_and_derivatives(
    s: &AlmostContactStructure<f64>,
    jet: &TransformJet,
) -> (DMatrix<f64>, Vec<DMatrix<f64>>) {
    let gt = s.associated_metric();
    let eta = &s.eta.0;
    let e2u = (2.0 * jet.u).exp();
    let a = e2u * (2.0 * jet.v).cos();
    let b = e2u * (2.0 * jet.v).sin();
    let c = (2.0 * jet.w).exp();
    let build = |a: f64, b: f64, c: f64| {
        DMatrix::from_fn(D, D, |i, j| {
            a * s.metric.g.get(&[i, j]) + b * gt.get(&[i, j]) + (c - a - b) * eta[i] * eta[j]
        })
    };
    let g = build(a, b, c);
    let dg = (0..D)
        .map(|k| {
            let (uk, vk, wk) = (jet.du.0[k], jet.dv.0[k], jet.dw.0[k]);
            build(
                2.0 * a * uk - 2.0 * b * vk,
                2.0 * b * uk + 2.0 * a * vk,
                2.0 * c * wk,
            )
        })
        .collect();
    (g, dg)
}

/// `F̄_ijk = ḡ(∇̄_i(φE_j) − φ∇̄_iE_j, E_k)` from the Christoffel symbols of ḡ.
fn levi_civita_f_bar(s: &AlmostContactStructure<f64>, jet: &TransformJet) -> FrameTensor<f64> {
    let (g, dg) = metric_and_derivatives(s, jet);
    let g_inv = g.clone().try_inverse().expect("invertible");
    // first kind: ḡ(∇_i E_j, E_k)
    let low = |i: usize, j: usize, k: usize| 0.5 * (dg[i][(j, k)] + dg[j][(i, k)] - dg[k][(i, j)]);
    let phi = |a: usize, b: usize| *s.phi.get(&[a, b]);
    let g_phi = |a: usize, k: usize| (0..D).map(|c| phi(c, a) * g[(c, k)]).sum::<f64>();
    FrameTensor::from_fn(D, vec![Variance::Co; 3], |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let first: f64 = (0..D).map(|a| phi(a, j) * low(i, a, k)).sum();
        let second: f64 = (0..D)
            .map(|a| {
                let gamma: f64 = (0..D).map(|b| g_inv[(a, b)] * low(i, j, b)).sum();
                gamma * g_phi(a, k)
            })
            .sum();
        first - second
    })
}

/// `(L_V ḡ)_ij = V^k ∂_k ḡ_ij + ḡ_kj ∂_i V^k + ḡ_ik ∂_j V^k` with
/// `V = e^{−w} ξ` and `ξ` constant.
fn direct_lie_derivative(s: &AlmostContactStructure<f64>, jet: &TransformJet) -> FrameTensor<f64> {
    let (g, dg) = metric_and_derivatives(s, jet);
    let ew = (-jet.w).exp();
    let v: Vec<f64> = s.xi.0.iter().map(|x| ew * x).collect();
    let dv = |i: usize, k: usize| -jet.dw.0[i] * ew * s.xi.0[k];
    FrameTensor::from_fn(D, vec![Variance::Co; 2], |idx| {
        let (i, j) = (idx[0], idx[1]);
        (0..D)
            .map(|k| v[k] * dg[k][(i, j)] + g[(k, j)] * dv(i, k) + g[(i, k)] * dv(j, k))
            .sum()
    })
}

fn scale(t: &FrameTensor<f64>) -> f64 {
    t.max_abs().max(1.0)
}

#[test]
fn f_bar_matches_levi_civita_of_g_bar() {
    let ex = example_abelian_f0();
    let src = SourceGeometry::new(&ex.manifold).unwrap();
    let s = &src.structure;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..60 {
        let tt = common::random_triple(&mut rng, D);
        let jet = tt.jet(&common::random_point(&mut rng, D)).unwrap();
        let engine = transform_f(s, &src.f, &jet);
        let oracle = levi_civita_f_bar(s, &jet);
        let d = engine.max_abs_diff(&oracle) / scale(&oracle);
        assert!(d < 1e-10, "relative difference {d:e}");
    }
}

#[test]
fn f_bar_oracle_in_a_skew_frame() {
    // Same flat group in a constant non-orthonormal frame.
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let ex = example_abelian_f0();
    for _ in 0..10 {
        let a = common::random_frame(&mut rng, D);
        let m = ex.manifold.change_frame(&a).unwrap();
        let src = SourceGeometry::new(&m).unwrap();
        let tt = common::random_triple(&mut rng, D);
        let jet = tt.jet(&common::random_point(&mut rng, D)).unwrap();
        let engine = transform_f(&src.structure, &src.f, &jet);
        let oracle = levi_civita_f_bar(&src.structure, &jet);
        let d = engine.max_abs_diff(&oracle) / scale(&oracle);
        assert!(d < 1e-10, "relative difference {d:e}");
    }
}

#[test]
fn reeb_lie_derivative_matches_definition() {
    let ex = example_abelian_f0();
    let src = SourceGeometry::new(&ex.manifold).unwrap();
    let s = &src.structure;
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..60 {
        let tt = common::random_triple(&mut rng, D);
        let jet = tt.jet(&common::random_point(&mut rng, D)).unwrap();
        let bar = transform_structure(s, &jet).unwrap();
        let engine = lie_derivative_reeb(&bar, &transform_f(s, &src.f, &jet));
        let oracle = direct_lie_derivative(s, &jet);
        let d = engine.max_abs_diff(&oracle) / scale(&oracle);
        assert!(d < 1e-10, "relative difference {d:e}");
    }
}

/// `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_{[X,Y]} Z`, lowered with `g`.
#[test]
fn curvature_matches_second_covariant_derivatives() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let mut ms = vec![example_sasaki5(&r(1), &r(2)).manifold];
    ms.extend((0..6).map(|_| common::random_manifold(&mut rng)));
    for m in ms {
        let conn = m.connection().unwrap();
        let c = CurvatureData::compute(&conn, &m.alg, &m.structure.metric, &m.structure.phi);
        let e: Vec<Vector<Rational>> = (0..D).map(|i| Vector::basis(D, i)).collect();
        for i in 0..D {
            for j in 0..D {
                let bracket = m.alg.bracket(&e[i], &e[j]);
                for k in 0..D {
                    let rz = conn
                        .nabla(&e[i], &conn.nabla(&e[j], &e[k]))
                        .sub(&conn.nabla(&e[j], &conn.nabla(&e[i], &e[k])))
                        .sub(&conn.nabla(&bracket, &e[k]));
                    for l in 0..D {
                        assert_eq!(
                            c.riemann.get(&[i, j, k, l]),
                            &m.structure.g(&rz, &e[l]),
                            "R{i}{j}{k}{l}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn sasaki_like_example_has_nabla_xi_equal_minus_phi() {
    let m = example_sasaki5(&r(0), &r(0)).manifold;
    let conn = m.connection().unwrap();
    let s = &m.structure;
    for i in 0..D {
        let e = Vector::basis(D, i);
        let lhs = conn.nabla(&e, &s.xi);
        let rhs = endo_apply(&s.phi, &e).scale(&r(-1));
        assert_eq!(lhs, rhs, "E{i}");
    }
}

#[test]
fn homothetic_transformation_keeps_f0() {
    let ex = example_abelian_f0();
    let src = SourceGeometry::new(&ex.manifold).unwrap();
    let tt = TransformTriple::parse("1/3", "-2/5", "3/4", D).unwrap();
    let pts = tt.sample_points(10, 3).unwrap();
    let v = check_theorem1(&src, &tt, &pts, None).unwrap();
    assert!(v.verified);
    let jet = tt.jet(&pts[0]).unwrap();
    let ts = src.transform_at(&jet).unwrap();
    assert_eq!(ts.f_bar.max_abs(), 0.0);
    let lee = lee_forms(&ts.f_bar, &ts.structure);
    assert_eq!(lee.theta.max_abs(), 0.0);
    assert_eq!(lee.theta_star.max_abs(), 0.0);
}

#[test]
fn exact_and_double_source_agree() {
    let m = example_sasaki5(&r(1), &r(2)).manifold;
    let exact = SourceGeometry::new(&m).unwrap();
    let double = SourceGeometry::new(&m.to_f64()).unwrap();
    assert!(exact.f.max_abs_diff(&double.f) < 1e-12);
    assert!((exact.tau - double.tau).abs() < 1e-12);
    let f = fundamental_tensor(&m.structure, &m.connection().unwrap());
    assert_eq!(f.to_f64(), exact.f);
}
