//! Contact conformal transformations `(u, v, w)` of an almost contact
//! B-metric manifold, evaluated pointwise in double precision, and the
//! Yamabe soliton checks built on them.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ExprError, GeometryError};
use crate::expr::{Expression, LatticeSampler, Point};
use crate::lie::CurvatureData;
use crate::scalar::Scalar;
use crate::structure::{
    fundamental_tensor, is_cosymplectic, is_f1, is_sasaki_like, lee_forms, AcbmManifold,
    AlmostContactStructure, LeeForms, F1_TOL,
};
use crate::tensor::{eval_covariant, Covector, FrameTensor, MetricPair, Variance, Vector};

use Variance::Co;

/// Tolerance for the conditions on `du`, `dv`, `dw`.
pub const CONDITION_TOL: f64 = 1e-9;

/// Tolerance for tensor identities and the soliton equation.
pub const IDENTITY_TOL: f64 = 1e-8;

pub const DEFAULT_POINTS: usize = 100;

/// The functions `(u, v, w)` on a coordinate chart together with the
/// constant matrix `P` relating chart fields to the frame,
/// `E_a = Σ_i P[i][a] ∂_i`.
#[derive(Debug, Clone)]
pub struct TransformTriple {
    pub u: Expression,
    pub v: Expression,
    pub w: Expression,
    pub chart_to_frame: Option<FrameTensor<f64>>,
}

impl TransformTriple {
    pub fn new(u: Expression, v: Expression, w: Expression) -> Self {
        TransformTriple {
            u,
            v,
            w,
            chart_to_frame: None,
        }
    }

    pub fn parse(u: &str, v: &str, w: &str, dim: usize) -> Result<Self, ExprError> {
        Ok(TransformTriple::new(
            Expression::parse(u, dim)?,
            Expression::parse(v, dim)?,
            Expression::parse(w, dim)?,
        ))
    }

    pub fn with_chart(mut self, p: FrameTensor<f64>) -> Self {
        self.chart_to_frame = Some(p);
        self
    }

    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    pub fn expressions(&self) -> [&Expression; 3] {
        [&self.u, &self.v, &self.w]
    }

    fn to_frame(&self, c: Covector<f64>) -> Covector<f64> {
        match &self.chart_to_frame {
            Some(p) => c.compose(p),
            None => c,
        }
    }

    /// Values and frame differentials at `p`.
    pub fn jet(&self, p: &Point) -> Result<TransformJet, ExprError> {
        let x = p.to_f64();
        Ok(TransformJet {
            u: self.u.eval_f64(&x)?,
            v: self.v.eval_f64(&x)?,
            w: self.w.eval_f64(&x)?,
            du: self.to_frame(self.u.differential_f64(p)?),
            dv: self.to_frame(self.v.differential_f64(p)?),
            dw: self.to_frame(self.w.differential_f64(p)?),
        })
    }

    /// Seeded regular points for all three functions.
    pub fn sample_points(&self, count: usize, seed: u64) -> Result<Vec<Point>, ExprError> {
        LatticeSampler::new(self.dim()).sample(&self.expressions(), count, seed)
    }
}

/// `(u, v, w)` and their differentials in the frame at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformJet {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub du: Covector<f64>,
    pub dv: Covector<f64>,
    pub dw: Covector<f64>,
}

impl TransformJet {
    /// Constant functions, so every differential vanishes.
    pub fn constant(dim: usize, u: f64, v: f64, w: f64) -> Self {
        TransformJet {
            u,
            v,
            w,
            du: Covector::zeros(dim),
            dv: Covector::zeros(dim),
            dw: Covector::zeros(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.du.dim()
    }

    fn trig(&self) -> Trig {
        let e2u = (2.0 * self.u).exp();
        Trig {
            e2u,
            e2w: (2.0 * self.w).exp(),
            cos: (2.0 * self.v).cos(),
            sin: (2.0 * self.v).sin(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Trig {
    e2u: f64,
    e2w: f64,
    cos: f64,
    sin: f64,
}

fn tensor3(d: usize, f: impl FnMut(&[usize]) -> f64) -> FrameTensor<f64> {
    FrameTensor::from_fn(d, vec![Co, Co, Co], f)
}

fn tensor2(d: usize, f: impl FnMut(&[usize]) -> f64) -> FrameTensor<f64> {
    FrameTensor::from_fn(d, vec![Co, Co], f)
}

/// `α = du∘φ + dv`, `β = du − dv∘φ`.
pub fn alpha_beta(
    du: &Covector<f64>,
    dv: &Covector<f64>,
    phi: &FrameTensor<f64>,
) -> (Covector<f64>, Covector<f64>) {
    (du.compose(phi).add(dv), du.sub(&dv.compose(phi)))
}

/// The barred structure `(φ, ξ̄, η̄, ḡ)`.
pub fn transform_structure(
    s: &AlmostContactStructure<f64>,
    jet: &TransformJet,
) -> Result<AlmostContactStructure<f64>, GeometryError> {
    let t = jet.trig();
    let (c, sn) = (t.e2u * t.cos, t.e2u * t.sin);
    let g = &s.metric.g;
    let gt = s.associated_metric();
    let eta = &s.eta.0;
    let entry = |i: usize, j: usize| {
        c * g.get(&[i, j]) + sn * gt.get(&[i, j]) + (t.e2w - c - sn) * eta[i] * eta[j]
    };
    // Symmetrised so that rounding in g̃ cannot make ḡ asymmetric.
    let g_bar = tensor2(s.dim(), |i| 0.5 * (entry(i[0], i[1]) + entry(i[1], i[0])));
    Ok(AlmostContactStructure {
        phi: s.phi.clone(),
        xi: s.xi.scale(&(-jet.w).exp()),
        eta: s.eta.scale(&jet.w.exp()),
        metric: MetricPair::new(g_bar)?,
    })
}

/// Point-independent pieces of the transformed fundamental tensor.
#[derive(Debug, Clone)]
pub struct FTerms {
    f: FrameTensor<f64>,
    /// `F(φY,Z,X) − F(Y,φZ,X) + F(X,φY,ξ)η(Z)` at `[x,y,z]`.
    a: FrameTensor<f64>,
    /// `F(X,Y,ξ) + F(φY,φX,ξ)` at `[x,y]`.
    b: FrameTensor<f64>,
    gpp: FrameTensor<f64>,
    gxp: FrameTensor<f64>,
    eta: Vec<f64>,
    phi: FrameTensor<f64>,
}

impl FTerms {
    pub fn new(s: &AlmostContactStructure<f64>, f: &FrameTensor<f64>) -> Self {
        let d = s.dim();
        let e = s.basis();
        let pe = s.phi_basis();
        let ev = |x: &Vector<f64>, y: &Vector<f64>, z: &Vector<f64>| eval_covariant(f, &[x, y, z]);
        let a = tensor3(d, |i| {
            let (x, y, z) = (i[0], i[1], i[2]);
            ev(&pe[y], &e[z], &e[x]) - ev(&e[y], &pe[z], &e[x])
                + ev(&e[x], &pe[y], &s.xi) * s.eta.0[z]
        });
        let b = tensor2(d, |i| {
            ev(&e[i[0]], &e[i[1]], &s.xi) + ev(&pe[i[1]], &pe[i[0]], &s.xi)
        });
        FTerms {
            f: f.clone(),
            a,
            b,
            gpp: s.g_phi_phi(),
            gxp: s.g_x_phi(),
            eta: s.eta.0.clone(),
            phi: s.phi.clone(),
        }
    }

    /// All thirteen terms of the transformed `F̄`.
    pub fn transform(&self, jet: &TransformJet) -> FrameTensor<f64> {
        let t = jet.trig();
        let (c, sn) = (t.e2u * t.cos, t.e2u * t.sin);
        let (al, bt) = alpha_beta(&jet.du, &jet.dv, &self.phi);
        let dwp = jet.dw.compose(&self.phi);
        let (al, bt, dwp, eta) = (&al.0, &bt.0, &dwp.0, &self.eta);
        let g2 = |t: &FrameTensor<f64>, i: usize, j: usize| *t.get(&[i, j]);
        tensor3(self.f.dim(), |i| {
            let (x, y, z) = (i[0], i[1], i[2]);
            let twice = 2.0 * c * self.f.get(i)
                + sn * (self.a.get(&[x, y, z]) + self.a.get(&[x, z, y]))
                + (t.e2w - c)
                    * (g2(&self.b, x, y) * eta[z]
                        + g2(&self.b, x, z) * eta[y]
                        + g2(&self.b, y, z) * eta[x]
                        + g2(&self.b, z, y) * eta[x])
                - 2.0 * (c * al[z] + sn * bt[z]) * g2(&self.gpp, x, y)
                - 2.0 * (c * al[y] + sn * bt[y]) * g2(&self.gpp, x, z)
                - 2.0 * (c * bt[z] - sn * al[z]) * g2(&self.gxp, x, y)
                - 2.0 * (c * bt[y] - sn * al[y]) * g2(&self.gxp, x, z)
                + 2.0 * t.e2w * eta[x] * (eta[y] * dwp[z] + eta[z] * dwp[y]);
            0.5 * twice
        })
    }
}

/// `F̄` at one point, from the source `F`.
pub fn transform_f(
    s: &AlmostContactStructure<f64>,
    f: &FrameTensor<f64>,
    jet: &TransformJet,
) -> FrameTensor<f64> {
    FTerms::new(s, f).transform(jet)
}

/// `θ̄ = θ + 2nα`, `θ̄* = θ* + 2nβ`, `ω̄ = ω + dw∘φ`.
pub fn transform_lee(
    lee: &LeeForms<f64>,
    alpha: &Covector<f64>,
    beta: &Covector<f64>,
    dw: &Covector<f64>,
    phi: &FrameTensor<f64>,
    n: usize,
) -> LeeForms<f64> {
    let two_n = 2.0 * n as f64;
    LeeForms {
        theta: lee.theta.add(&alpha.scale(&two_n)),
        theta_star: lee.theta_star.add(&beta.scale(&two_n)),
        omega: lee.omega.add(&dw.compose(phi)),
    }
}

/// `(L_ξ̄ ḡ)(X,Y) = F̄(X,φY,ξ̄) + F̄(Y,φX,ξ̄)`.
pub fn lie_derivative_reeb(
    bar: &AlmostContactStructure<f64>,
    f_bar: &FrameTensor<f64>,
) -> FrameTensor<f64> {
    let e = bar.basis();
    let pe = bar.phi_basis();
    let d = bar.dim();
    let m = FrameTensor::from_fn(d, vec![Co, Co], |i| {
        eval_covariant(f_bar, &[&e[i[0]], &pe[i[1]], &bar.xi])
    });
    tensor2(d, |i| m.get(&[i[0], i[1]]) + m.get(&[i[1], i[0]]))
}

fn phi_phi(s: &AlmostContactStructure<f64>) -> FrameTensor<f64> {
    s.phi_squared()
}

/// `L_ξ̄ ḡ` in closed form for a cosymplectic source.
pub fn lie_cosymplectic_model(
    s: &AlmostContactStructure<f64>,
    jet: &TransformJet,
) -> FrameTensor<f64> {
    let t = jet.trig();
    let k = (2.0 * jet.u - jet.w).exp();
    let (du, dv) = (jet.du.apply(&s.xi), jet.dv.apply(&s.xi));
    let (gpp, gxp) = (s.g_phi_phi(), s.g_x_phi());
    let dw2 = jet.dw.compose(&phi_phi(s));
    let ew = jet.w.exp();
    let eta = &s.eta.0;
    tensor2(s.dim(), |i| {
        let (x, y) = (i[0], i[1]);
        -2.0 * k * (t.cos * du - t.sin * dv) * gpp.get(i)
            + 2.0 * k * (t.cos * dv + t.sin * du) * gxp.get(i)
            + ew * (eta[x] * dw2.0[y] + eta[y] * dw2.0[x])
    })
}

/// `L_ξ̄ ḡ` in closed form for a Sasaki-like source.
pub fn lie_sasaki_model(s: &AlmostContactStructure<f64>, jet: &TransformJet) -> FrameTensor<f64> {
    let t = jet.trig();
    let k = (2.0 * jet.u - jet.w).exp();
    let (du, dv) = (jet.du.apply(&s.xi), jet.dv.apply(&s.xi));
    let (gpp, gxp) = (s.g_phi_phi(), s.g_x_phi());
    let dw2 = jet.dw.compose(&phi_phi(s));
    let ew = jet.w.exp();
    let eta = &s.eta.0;
    tensor2(s.dim(), |i| {
        let (x, y) = (i[0], i[1]);
        2.0 * k
            * ((t.sin * du - t.cos * (1.0 - dv)) * gxp.get(i)
                - (t.cos * du + t.sin * (1.0 - dv)) * gpp.get(i))
            + ew * (dw2.0[x] * eta[y] + dw2.0[y] * eta[x])
    })
}

/// `F̄` in closed form for a cosymplectic source.
pub fn f_cosymplectic_model(
    s: &AlmostContactStructure<f64>,
    jet: &TransformJet,
) -> FrameTensor<f64> {
    let t = jet.trig();
    let (al, bt) = alpha_beta(&jet.du, &jet.dv, &s.phi);
    let dwp = jet.dw.compose(&s.phi);
    let (gpp, gxp) = (s.g_phi_phi(), s.g_x_phi());
    let (al, bt, dwp, eta) = (&al.0, &bt.0, &dwp.0, &s.eta.0);
    tensor3(s.dim(), |i| {
        let (x, y, z) = (i[0], i[1], i[2]);
        -t.e2u
            * ((t.cos * al[z] + t.sin * bt[z]) * gpp.get(&[x, y])
                + (t.cos * al[y] + t.sin * bt[y]) * gpp.get(&[x, z])
                + (t.cos * bt[z] - t.sin * al[z]) * gxp.get(&[x, y])
                + (t.cos * bt[y] - t.sin * al[y]) * gxp.get(&[x, z]))
            + t.e2w * eta[x] * (eta[y] * dwp[z] + eta[z] * dwp[y])
    })
}

/// `F̄` in closed form for a Sasaki-like source when `du(ξ) = 0`,
/// `dv(ξ) = 1` and `dw = dw(ξ)η`.
pub fn f_sasaki_model(s: &AlmostContactStructure<f64>, jet: &TransformJet) -> FrameTensor<f64> {
    let t = jet.trig();
    let (al, bt) = alpha_beta(&jet.du, &jet.dv, &s.phi);
    let a = al.sub(&s.eta);
    let (gpp, gxp) = (s.g_phi_phi(), s.g_x_phi());
    let (a, bt) = (&a.0, &bt.0);
    tensor3(s.dim(), |i| {
        let (x, y, z) = (i[0], i[1], i[2]);
        -t.e2u
            * ((t.cos * a[z] + t.sin * bt[z]) * gpp.get(&[x, y])
                + (t.cos * bt[z] - t.sin * a[z]) * gxp.get(&[x, y])
                + (t.cos * a[y] + t.sin * bt[y]) * gpp.get(&[x, z])
                + (t.cos * bt[y] - t.sin * a[y]) * gxp.get(&[x, z]))
    })
}

/// `ḡ(φX,φY)α(φ²Z) + ḡ(X,φY)β(φ²Z) + (Y ↔ Z)`.
pub fn f_alpha_beta_model(
    bar: &AlmostContactStructure<f64>,
    alpha: &Covector<f64>,
    beta: &Covector<f64>,
) -> FrameTensor<f64> {
    let phi2 = bar.phi_squared();
    let (a2, b2) = (alpha.compose(&phi2), beta.compose(&phi2));
    let (gpp, gxp) = (bar.g_phi_phi(), bar.g_x_phi());
    tensor3(bar.dim(), |i| {
        let (x, y, z) = (i[0], i[1], i[2]);
        gpp.get(&[x, y]) * a2.0[z]
            + gxp.get(&[x, y]) * b2.0[z]
            + gpp.get(&[x, z]) * a2.0[y]
            + gxp.get(&[x, z]) * b2.0[y]
    })
}

/// `(1/2n){θ̄(φ²Z)ḡ(φX,φY) + θ̄(φZ)ḡ(X,φY) + (Y ↔ Z)}`, the `F₁` form
/// rebuilt from `θ̄` alone.
pub fn f1_from_theta(bar: &AlmostContactStructure<f64>, theta: &Covector<f64>) -> FrameTensor<f64> {
    let t2 = theta.compose(&bar.phi_squared());
    let t1 = theta.compose(&bar.phi);
    let (gpp, gxp) = (bar.g_phi_phi(), bar.g_x_phi());
    let two_n = 2.0 * bar.n() as f64;
    tensor3(bar.dim(), |i| {
        let (x, y, z) = (i[0], i[1], i[2]);
        (t2.0[z] * gpp.get(&[x, y])
            + t1.0[z] * gxp.get(&[x, y])
            + t2.0[y] * gpp.get(&[x, z])
            + t1.0[y] * gxp.get(&[x, z]))
            / two_n
    })
}

/// Residual of `ḡ(φX,φY) = e^{2u}cos2v g(φX,φY) − e^{2u}sin2v g(X,φY)` and
/// `ḡ(X,φY) = e^{2u}cos2v g(X,φY) + e^{2u}sin2v g(φX,φY)`.
pub fn metric_relation_residual(
    s: &AlmostContactStructure<f64>,
    bar: &AlmostContactStructure<f64>,
    jet: &TransformJet,
) -> f64 {
    let t = jet.trig();
    let (c, sn) = (t.e2u * t.cos, t.e2u * t.sin);
    let (gpp, gxp) = (s.g_phi_phi(), s.g_x_phi());
    let m1 = gpp.combine(&c, &gxp, &(-sn));
    let m2 = gxp.combine(&c, &gpp, &sn);
    bar.g_phi_phi()
        .max_abs_diff(&m1)
        .max(bar.g_x_phi().max_abs_diff(&m2))
}

/// `(τ̄, τ̄*)` from the source scalars.
pub fn scalar_transform(
    tau: f64,
    tau_star: f64,
    rho_xi_xi: f64,
    u: f64,
    v: f64,
    w: f64,
) -> (f64, f64) {
    let k = (-2.0 * u).exp();
    let (c, s) = ((2.0 * v).cos(), (2.0 * v).sin());
    let trace = tau - rho_xi_xi;
    (
        k * (c * trace - s * tau_star) + (-2.0 * w).exp() * rho_xi_xi,
        k * (s * trace + c * tau_star),
    )
}

/// `max |½L − (τ̄ − σ̄)ḡ|`.
pub fn soliton_residual(
    lie: &FrameTensor<f64>,
    g_bar: &FrameTensor<f64>,
    tau_bar: f64,
    sigma_bar: f64,
) -> f64 {
    lie.combine(&0.5, g_bar, &(sigma_bar - tau_bar)).max_abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Cosymplectic,
    SasakiLike,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Cosymplectic => "cosymplectic",
            Branch::SasakiLike => "sasaki-like",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolitonKind {
    Shrinking,
    Steady,
    Expanding,
}

impl SolitonKind {
    pub fn of(sigma: f64) -> Self {
        if sigma > 0.0 {
            SolitonKind::Shrinking
        } else if sigma < 0.0 {
            SolitonKind::Expanding
        } else {
            SolitonKind::Steady
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SolitonKind::Shrinking => "shrinking",
            SolitonKind::Steady => "steady",
            SolitonKind::Expanding => "expanding",
        }
    }
}

/// Source tensors that do not depend on the point, in double precision.
#[derive(Debug, Clone)]
pub struct SourceGeometry {
    pub structure: AlmostContactStructure<f64>,
    pub f: FrameTensor<f64>,
    pub lee: LeeForms<f64>,
    pub tau: f64,
    pub tau_star: f64,
    pub rho_xi_xi: f64,
    pub cosymplectic: bool,
    pub sasaki_like: bool,
    terms: FTerms,
}

impl SourceGeometry {
    /// Computes the source data in the manifold's own scalar type, exactly for
    /// rational input, then rounds once.
    pub fn new<T: Scalar>(m: &AcbmManifold<T>) -> Result<Self, GeometryError> {
        let report = m.structure.validate();
        if !report.passed() {
            return Err(GeometryError::InvalidStructure(report.summary()));
        }
        let conn = m.connection()?;
        let f = fundamental_tensor(&m.structure, &conn);
        let lee = lee_forms(&f, &m.structure);
        let curv = CurvatureData::compute(&conn, &m.alg, &m.structure.metric, &m.structure.phi);
        let xi = &m.structure.xi;
        let rho_xi_xi = eval_covariant(&curv.ricci, &[xi, xi]);
        let structure = m.structure.to_f64();
        let f64f = f.to_f64();
        Ok(SourceGeometry {
            cosymplectic: is_cosymplectic(&f),
            sasaki_like: is_sasaki_like(&f, &m.structure)?,
            terms: FTerms::new(&structure, &f64f),
            structure,
            f: f64f,
            lee: lee.map(Scalar::to_f64),
            tau: curv.tau.to_f64(),
            tau_star: curv.tau_star.to_f64(),
            rho_xi_xi: rho_xi_xi.to_f64(),
        })
    }

    pub fn n(&self) -> usize {
        self.structure.n()
    }

    /// Everything about the transformed manifold at one point.
    pub fn transform_at(&self, jet: &TransformJet) -> Result<TransformedStructure, GeometryError> {
        let s = &self.structure;
        let bar = transform_structure(s, jet)?;
        let f_bar = self.terms.transform(jet);
        let (alpha, beta) = alpha_beta(&jet.du, &jet.dv, &s.phi);
        let lee_bar = transform_lee(&self.lee, &alpha, &beta, &jet.dw, &s.phi, self.n());
        let lie = lie_derivative_reeb(&bar, &f_bar);
        let (tau_bar, tau_star_bar) =
            scalar_transform(self.tau, self.tau_star, self.rho_xi_xi, jet.u, jet.v, jet.w);
        Ok(TransformedStructure {
            structure: bar,
            f_bar,
            alpha,
            beta,
            lee_bar,
            lie,
            tau_bar,
            tau_star_bar,
        })
    }
}

/// The barred tensors at one point.
#[derive(Debug, Clone)]
pub struct TransformedStructure {
    pub structure: AlmostContactStructure<f64>,
    pub f_bar: FrameTensor<f64>,
    pub alpha: Covector<f64>,
    pub beta: Covector<f64>,
    /// Lee forms from the transformation rule.
    pub lee_bar: LeeForms<f64>,
    pub lie: FrameTensor<f64>,
    pub tau_bar: f64,
    pub tau_star_bar: f64,
}

impl TransformedStructure {
    /// Lee forms traced directly from `F̄` with `ḡ⁻¹`.
    pub fn traced_lee(&self) -> LeeForms<f64> {
        lee_forms(&self.f_bar, &self.structure)
    }

    /// `max |transform_lee − lee_forms(F̄)|`.
    pub fn two_route_residual(&self) -> f64 {
        self.lee_bar.max_abs_diff(&self.traced_lee())
    }
}

/// Maximum of one residual over the sampled points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub name: &'static str,
    pub max: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Index of the point with the largest residual.
    pub worst_point: usize,
}

impl Residual {
    fn aggregate(name: &'static str, tolerance: f64, values: impl Iterator<Item = f64>) -> Self {
        let mut max = 0.0f64;
        let mut worst_point = 0;
        for (i, v) in values.enumerate() {
            // NaN counts as the worst possible value.
            if v.is_nan() || v > max {
                max = if v.is_nan() { f64::INFINITY } else { v };
                worst_point = i;
            }
        }
        Residual {
            name,
            max,
            tolerance,
            passed: max < tolerance,
            worst_point,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointReport {
    pub index: usize,
    pub coords: Vec<f64>,
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub tau_bar: f64,
    pub tau_star_bar: f64,
    pub sigma_bar: f64,
    pub soliton_residual: f64,
    pub soliton: bool,
    pub tau_equals_sigma: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolitonVerdict {
    pub branch: Branch,
    pub conditions: Vec<Residual>,
    pub conditions_hold: bool,
    pub identities: Vec<Residual>,
    pub killing: f64,
    pub f1_residual: f64,
    pub sigma_input: Option<f64>,
    pub soliton_kind: Option<SolitonKind>,
    pub points: Vec<PointReport>,
    /// Points where the soliton equation holds.
    pub soliton_points: usize,
    /// Points where `τ̄ ≠ σ̄`.
    pub tau_sigma_mismatches: usize,
    pub verified: bool,
}

impl SolitonVerdict {
    pub fn condition(&self, name: &str) -> Option<&Residual> {
        self.conditions.iter().find(|r| r.name == name)
    }

    pub fn identity(&self, name: &str) -> Option<&Residual> {
        self.identities.iter().find(|r| r.name == name)
    }

    pub fn failed_conditions(&self) -> Vec<&'static str> {
        self.conditions
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }
}

pub const COND_DU_XI: &str = "du(xi) = 0";
pub const COND_DV_XI_ZERO: &str = "dv(xi) = 0";
pub const COND_DV_XI_ONE: &str = "dv(xi) = 1";
pub const COND_DW: &str = "dw = dw(xi) eta";

pub const ID_KILLING: &str = "L_xibar gbar = 0";
pub const ID_LIE_MODEL: &str = "L_xibar gbar closed form";
pub const ID_F_MODEL: &str = "Fbar closed form";
pub const ID_RECONSTRUCTION: &str = "Fbar F1 reconstruction";
pub const ID_F1: &str = "Fbar in F1";
pub const ID_LEE_ROUTES: &str = "Lee forms two-route";
pub const ID_LEE_FORMS: &str = "Lee forms closed form";
pub const ID_ALPHA_THETA: &str = "alpha, beta from thetabar";
pub const ID_METRIC_RELATION: &str = "gbar(phi, phi), gbar(., phi) relation";
pub const ID_AXIOMS: &str = "barred structure axioms";

struct PointMetrics {
    conditions: [f64; 3],
    identities: Vec<f64>,
    killing: f64,
    f1: f64,
    report: PointReport,
}

fn point_metrics(
    src: &SourceGeometry,
    branch: Branch,
    tt: &TransformTriple,
    index: usize,
    p: &Point,
    sigma: Option<f64>,
) -> Result<PointMetrics, GeometryError> {
    let s = &src.structure;
    let n2 = 2.0 * src.n() as f64;
    let jet = tt.jet(p)?;
    let ts = src.transform_at(&jet)?;
    let bar = &ts.structure;

    let du_xi = jet.du.apply(&s.xi);
    let dv_xi = jet.dv.apply(&s.xi);
    let dw_xi = jet.dw.apply(&s.xi);
    let dv_target = match branch {
        Branch::Cosymplectic => 0.0,
        Branch::SasakiLike => 1.0,
    };
    let conditions = [
        du_xi.abs(),
        (dv_xi - dv_target).abs(),
        jet.dw.max_abs_diff(&s.eta.scale(&dw_xi)),
    ];

    let killing = ts.lie.max_abs();
    let traced = ts.traced_lee();
    let f1 = is_f1(&ts.f_bar, bar, &traced).residual;
    let phi2 = s.phi_squared();
    let (lie_model, f_model, reconstruction, expected_star) = match branch {
        Branch::Cosymplectic => (
            lie_cosymplectic_model(s, &jet),
            f_cosymplectic_model(s, &jet),
            f_alpha_beta_model(bar, &ts.alpha, &ts.beta),
            jet.du
                .compose(&phi2)
                .add(&jet.dv.compose(&s.phi))
                .scale(&(-n2)),
        ),
        Branch::SasakiLike => (
            lie_sasaki_model(s, &jet),
            f_sasaki_model(s, &jet),
            f1_from_theta(bar, &ts.lee_bar.theta),
            jet.du.sub(&jet.dv.compose(&s.phi)).scale(&n2),
        ),
    };
    let expected = LeeForms {
        theta: jet
            .du
            .compose(&s.phi)
            .sub(&jet.dv.compose(&phi2))
            .scale(&n2),
        theta_star: expected_star,
        omega: Covector::zeros(s.dim()),
    };
    let alpha_theta = match branch {
        Branch::Cosymplectic => 0.0,
        Branch::SasakiLike => {
            let th = &ts.lee_bar.theta;
            let a = th.compose(&phi2).scale(&(-1.0 / n2)).add(&s.eta);
            let b = th.compose(&s.phi).scale(&(-1.0 / n2));
            ts.alpha.max_abs_diff(&a).max(ts.beta.max_abs_diff(&b))
        }
    };
    let axioms = if bar.validate().passed() { 0.0 } else { 1.0 };

    let identities = vec![
        killing,
        ts.lie.max_abs_diff(&lie_model),
        ts.f_bar.max_abs_diff(&f_model),
        ts.f_bar.max_abs_diff(&reconstruction),
        f1,
        ts.lee_bar.max_abs_diff(&traced),
        ts.lee_bar.max_abs_diff(&expected),
        alpha_theta,
        metric_relation_residual(s, bar, &jet),
        axioms,
    ];

    let sigma_bar = sigma.unwrap_or(ts.tau_bar);
    let residual = soliton_residual(&ts.lie, &bar.metric.g, ts.tau_bar, sigma_bar);
    let report = PointReport {
        index,
        coords: p.to_f64(),
        u: jet.u,
        v: jet.v,
        w: jet.w,
        tau_bar: ts.tau_bar,
        tau_star_bar: ts.tau_star_bar,
        sigma_bar,
        soliton_residual: residual,
        soliton: residual < IDENTITY_TOL,
        tau_equals_sigma: (ts.tau_bar - sigma_bar).abs() < IDENTITY_TOL,
    };
    Ok(PointMetrics {
        conditions,
        identities,
        killing,
        f1,
        report,
    })
}

fn check_theorem(
    branch: Branch,
    src: &SourceGeometry,
    tt: &TransformTriple,
    points: &[Point],
    sigma: Option<f64>,
) -> Result<SolitonVerdict, GeometryError> {
    if tt.dim() != src.structure.dim() {
        return Err(ExprError::PointDimension {
            expected: src.structure.dim(),
            found: tt.dim(),
        }
        .into());
    }
    let metrics: Vec<PointMetrics> = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| point_metrics(src, branch, tt, i, p, sigma))
        .collect::<Result<_, _>>()?;

    let cond_names = [
        COND_DU_XI,
        match branch {
            Branch::Cosymplectic => COND_DV_XI_ZERO,
            Branch::SasakiLike => COND_DV_XI_ONE,
        },
        COND_DW,
    ];
    let conditions: Vec<Residual> = cond_names
        .iter()
        .enumerate()
        .map(|(k, name)| {
            Residual::aggregate(name, CONDITION_TOL, metrics.iter().map(|m| m.conditions[k]))
        })
        .collect();
    let id_names = [
        ID_KILLING,
        ID_LIE_MODEL,
        ID_F_MODEL,
        ID_RECONSTRUCTION,
        ID_F1,
        ID_LEE_ROUTES,
        ID_LEE_FORMS,
        ID_ALPHA_THETA,
        ID_METRIC_RELATION,
        ID_AXIOMS,
    ];
    let identities: Vec<Residual> = id_names
        .iter()
        .enumerate()
        .filter(|(_, name)| branch == Branch::SasakiLike || **name != ID_ALPHA_THETA)
        .map(|(k, name)| {
            let tol = if *name == ID_F1 { F1_TOL } else { IDENTITY_TOL };
            Residual::aggregate(name, tol, metrics.iter().map(|m| m.identities[k]))
        })
        .collect();

    let conditions_hold = conditions.iter().all(|c| c.passed);
    let verified = conditions_hold && identities.iter().all(|r| r.passed);
    let killing = metrics.iter().map(|m| m.killing).fold(0.0, f64::max);
    let f1_residual = metrics.iter().map(|m| m.f1).fold(0.0, f64::max);
    let points: Vec<PointReport> = metrics.into_iter().map(|m| m.report).collect();
    Ok(SolitonVerdict {
        branch,
        conditions,
        conditions_hold,
        identities,
        killing,
        f1_residual,
        sigma_input: sigma,
        soliton_kind: sigma.map(SolitonKind::of),
        soliton_points: points.iter().filter(|p| p.soliton).count(),
        tau_sigma_mismatches: points.iter().filter(|p| !p.tau_equals_sigma).count(),
        points,
        verified,
    })
}

/// Cosymplectic source: `du(ξ) = 0`, `dv(ξ) = 0`, `dw = dw(ξ)η`.
pub fn check_theorem1(
    src: &SourceGeometry,
    tt: &TransformTriple,
    points: &[Point],
    sigma: Option<f64>,
) -> Result<SolitonVerdict, GeometryError> {
    if !src.cosymplectic {
        return Err(GeometryError::WrongBranch {
            expected: Branch::Cosymplectic.name(),
        });
    }
    check_theorem(Branch::Cosymplectic, src, tt, points, sigma)
}

/// Sasaki-like source: `du(ξ) = 0`, `dv(ξ) = 1`, `dw = dw(ξ)η`.
pub fn check_theorem2(
    src: &SourceGeometry,
    tt: &TransformTriple,
    points: &[Point],
    sigma: Option<f64>,
) -> Result<SolitonVerdict, GeometryError> {
    if !src.sasaki_like {
        return Err(GeometryError::WrongBranch {
            expected: Branch::SasakiLike.name(),
        });
    }
    check_theorem(Branch::SasakiLike, src, tt, points, sigma)
}

/// The branch matching the source class, cosymplectic first.
pub fn detect_branch(src: &SourceGeometry) -> Option<Branch> {
    if src.cosymplectic {
        Some(Branch::Cosymplectic)
    } else if src.sasaki_like {
        Some(Branch::SasakiLike)
    } else {
        None
    }
}

pub fn check_branch(
    branch: Branch,
    src: &SourceGeometry,
    tt: &TransformTriple,
    points: &[Point],
    sigma: Option<f64>,
) -> Result<SolitonVerdict, GeometryError> {
    match branch {
        Branch::Cosymplectic => check_theorem1(src, tt, points, sigma),
        Branch::SasakiLike => check_theorem2(src, tt, points, sigma),
    }
}
