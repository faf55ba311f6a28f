//! Almost contact B-metric structures `(φ, ξ, η, g)` and the tensors built
//! from them: the associated metric, the fundamental tensor `F`, the three
//! Lee forms, and the class tests for cosymplectic, Sasaki-like and `F₁`
//! manifolds.

use serde::Serialize;

use crate::error::{GeometryError, TensorError};
use crate::lie::{koszul_connection, Connection, LieAlgebra};
use crate::scalar::Scalar;
use crate::tensor::{
    endo_apply, endo_compose, eval_covariant, invert_metric, Covector, FrameTensor, MetricPair,
    Variance, Vector,
};

use Variance::{Co, Contra};

/// Absolute tolerance for axiom checks in double mode, scaled by the size of
/// the metric components.
pub const AXIOM_TOL: f64 = 1e-10;

/// Tolerance for the `F₁` reconstruction residual in double mode.
pub const F1_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axiom {
    #[serde(rename = "phi xi = 0")]
    PhiXi,
    #[serde(rename = "phi^2 = -I + eta (x) xi")]
    PhiSquared,
    #[serde(rename = "eta o phi = 0")]
    EtaPhi,
    #[serde(rename = "eta(xi) = 1")]
    EtaXi,
    #[serde(rename = "g symmetric")]
    MetricSymmetric,
    #[serde(rename = "g(X,Y) = -g(phi X, phi Y) + eta(X) eta(Y)")]
    Compatibility,
    #[serde(rename = "signature (n+1, n)")]
    Signature,
}

impl Axiom {
    pub fn label(self) -> &'static str {
        match self {
            Axiom::PhiXi => "phi xi = 0",
            Axiom::PhiSquared => "phi^2 = -I + eta (x) xi",
            Axiom::EtaPhi => "eta o phi = 0",
            Axiom::EtaXi => "eta(xi) = 1",
            Axiom::MetricSymmetric => "g symmetric",
            Axiom::Compatibility => "g(X,Y) = -g(phi X, phi Y) + eta(X) eta(Y)",
            Axiom::Signature => "signature (n+1, n)",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub passed: bool,
    /// First offending frame index tuple.
    pub at: Option<Vec<usize>>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, axiom: Axiom) -> &AxiomCheck {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .expect("every axiom is checked")
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn summary(&self) -> String {
        self.failures()
            .map(|c| match &c.at {
                Some(at) => format!("{} at {:?}", c.axiom.label(), at),
                None => c.axiom.label().to_string(),
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// The pointwise data `(φ, ξ, η, g)` in a frame.
#[derive(Debug, Clone, PartialEq)]
pub struct AlmostContactStructure<T> {
    /// Endomorphism with slots `[Contra, Co]`.
    pub phi: FrameTensor<T>,
    pub xi: Vector<T>,
    pub eta: Covector<T>,
    pub metric: MetricPair<T>,
}

impl<T: Scalar> AlmostContactStructure<T> {
    pub fn new(
        phi: FrameTensor<T>,
        xi: Vector<T>,
        eta: Covector<T>,
        g: FrameTensor<T>,
    ) -> Result<Self, GeometryError> {
        let d = g.dim();
        if d.is_multiple_of(2) {
            return Err(GeometryError::EvenDimension(d));
        }
        if phi.dim() != d || phi.slots() != [Contra, Co] || xi.dim() != d || eta.dim() != d {
            return Err(
                TensorError::Shape("structure tensors do not match the metric".into()).into(),
            );
        }
        let metric = MetricPair::new(g)?;
        Ok(AlmostContactStructure {
            phi,
            xi,
            eta,
            metric,
        })
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    /// `n` in `dim = 2n + 1`.
    pub fn n(&self) -> usize {
        (self.dim() - 1) / 2
    }

    pub fn basis(&self) -> Vec<Vector<T>> {
        (0..self.dim())
            .map(|i| Vector::basis(self.dim(), i))
            .collect()
    }

    /// `φ E_i` for every frame vector.
    pub fn phi_basis(&self) -> Vec<Vector<T>> {
        self.basis()
            .iter()
            .map(|e| endo_apply(&self.phi, e))
            .collect()
    }

    pub fn phi_squared(&self) -> FrameTensor<T> {
        endo_compose(&self.phi, &self.phi)
    }

    pub fn g(&self, x: &Vector<T>, y: &Vector<T>) -> T {
        self.metric.apply(x, y)
    }

    /// `g(φX, φY)` on the frame.
    pub fn g_phi_phi(&self) -> FrameTensor<T> {
        let pe = self.phi_basis();
        FrameTensor::from_fn(self.dim(), vec![Co, Co], |i| self.g(&pe[i[0]], &pe[i[1]]))
    }

    /// `g(X, φY)` on the frame.
    pub fn g_x_phi(&self) -> FrameTensor<T> {
        let e = self.basis();
        let pe = self.phi_basis();
        FrameTensor::from_fn(self.dim(), vec![Co, Co], |i| self.g(&e[i[0]], &pe[i[1]]))
    }

    fn tol(&self) -> f64 {
        AXIOM_TOL * self.metric.g.max_abs().max(1.0)
    }

    /// Checks every algebraic axiom and reports the first offending index of
    /// each failure.
    pub fn validate(&self) -> ValidationReport {
        let d = self.dim();
        let tol = self.tol();
        let e = self.basis();
        let mut checks = Vec::new();
        let mut push = |axiom, at: Option<Vec<usize>>, residual: f64| {
            checks.push(AxiomCheck {
                axiom,
                passed: at.is_none(),
                at,
                residual,
            })
        };

        let phi_xi = endo_apply(&self.phi, &self.xi);
        push(
            Axiom::PhiXi,
            phi_xi
                .0
                .iter()
                .position(|x| !x.is_negligible(tol))
                .map(|a| vec![a]),
            phi_xi.max_abs(),
        );

        let phi2 = self.phi_squared();
        let mut worst = 0.0f64;
        let mut first = None;
        for i in 0..d {
            let lhs = endo_apply(&phi2, &e[i]);
            let rhs = self.xi.scale(&self.eta.0[i]).sub(&e[i]);
            let diff = lhs.sub(&rhs);
            worst = worst.max(diff.max_abs());
            if first.is_none() && diff.0.iter().any(|x| !x.is_negligible(tol)) {
                first = Some(vec![i]);
            }
        }
        push(Axiom::PhiSquared, first, worst);

        let eta_phi = self.eta.compose(&self.phi);
        push(
            Axiom::EtaPhi,
            eta_phi
                .0
                .iter()
                .position(|x| !x.is_negligible(tol))
                .map(|i| vec![i]),
            eta_phi.max_abs(),
        );

        let eta_xi = self.eta.apply(&self.xi) - T::one();
        push(
            Axiom::EtaXi,
            (!eta_xi.is_negligible(tol)).then(Vec::new),
            eta_xi.to_f64().abs(),
        );

        let g = &self.metric.g;
        let sym = g.first_difference(&g.transpose(0, 1), tol);
        push(
            Axiom::MetricSymmetric,
            sym,
            g.max_abs_diff(&g.transpose(0, 1)),
        );

        let gpp = self.g_phi_phi();
        let model = FrameTensor::from_fn(d, vec![Co, Co], |i| {
            -gpp.get(i).clone() + self.eta.0[i[0]].clone() * self.eta.0[i[1]].clone()
        });
        push(
            Axiom::Compatibility,
            g.first_difference(&model, tol),
            g.max_abs_diff(&model),
        );

        let (pos, neg, zero) = self.metric.signature();
        let n = self.n();
        push(
            Axiom::Signature,
            (!(pos == n + 1 && neg == n && zero == 0)).then(Vec::new),
            0.0,
        );

        ValidationReport { checks }
    }

    /// `g̃(X,Y) = g(X, φY) + η(X)η(Y)`.
    pub fn associated_metric(&self) -> FrameTensor<T> {
        let gxp = self.g_x_phi();
        FrameTensor::from_fn(self.dim(), vec![Co, Co], |i| {
            gxp.get(i).clone() + self.eta.0[i[0]].clone() * self.eta.0[i[1]].clone()
        })
    }

    pub fn to_f64(&self) -> AlmostContactStructure<f64> {
        AlmostContactStructure {
            phi: self.phi.to_f64(),
            xi: self.xi.map(Scalar::to_f64),
            eta: self.eta.map(Scalar::to_f64),
            metric: self.metric.to_f64(),
        }
    }

    /// Re-expresses the structure in the frame `E'_a = Σ_b A[b][a] E_b`.
    pub fn change_frame(&self, a: &FrameTensor<T>) -> Result<Self, GeometryError> {
        let (inv, d) = frame_inverse(a)?;
        let col = |m: usize| Vector((0..d).map(|b| a.get(&[b, m]).clone()).collect());
        let cols: Vec<_> = (0..d).map(col).collect();
        let to_new = |v: &Vector<T>| endo_apply(&inv, v);
        let g = FrameTensor::from_fn(d, vec![Co, Co], |i| self.g(&cols[i[0]], &cols[i[1]]));
        let phi_cols: Vec<_> = cols
            .iter()
            .map(|c| to_new(&endo_apply(&self.phi, c)))
            .collect();
        let phi = FrameTensor::from_fn(d, vec![Contra, Co], |i| phi_cols[i[1]].0[i[0]].clone());
        let xi = to_new(&self.xi);
        let eta = Covector(cols.iter().map(|c| self.eta.apply(c)).collect());
        AlmostContactStructure::new(phi, xi, eta, g)
    }
}

/// Inverse of a frame-change matrix (any invertible matrix, not just a metric).
fn frame_inverse<T: Scalar>(a: &FrameTensor<T>) -> Result<(FrameTensor<T>, usize), GeometryError> {
    let d = a.dim();
    // A^{-1} = (Aᵀ A)^{-1} Aᵀ, with Aᵀ A symmetric.
    let ata = FrameTensor::from_fn(d, vec![Co, Co], |i| {
        (0..d).fold(T::zero(), |acc, k| {
            acc + a.get(&[k, i[0]]).clone() * a.get(&[k, i[1]]).clone()
        })
    });
    let ata_inv = invert_metric(&ata)?;
    let inv = FrameTensor::from_fn(d, vec![Contra, Co], |i| {
        (0..d).fold(T::zero(), |acc, k| {
            acc + ata_inv.get(&[i[0], k]).clone() * a.get(&[i[1], k]).clone()
        })
    });
    Ok((inv, d))
}

/// A Lie group with a left-invariant almost contact B-metric structure.
#[derive(Debug, Clone, PartialEq)]
pub struct AcbmManifold<T> {
    pub alg: LieAlgebra<T>,
    pub structure: AlmostContactStructure<T>,
}

impl<T: Scalar> AcbmManifold<T> {
    pub fn new(
        alg: LieAlgebra<T>,
        structure: AlmostContactStructure<T>,
    ) -> Result<Self, GeometryError> {
        if alg.dim() != structure.dim() {
            return Err(
                TensorError::Shape("algebra and structure dimensions differ".into()).into(),
            );
        }
        Ok(AcbmManifold { alg, structure })
    }

    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    pub fn n(&self) -> usize {
        self.structure.n()
    }

    pub fn connection(&self) -> Result<Connection<T>, GeometryError> {
        koszul_connection(&self.alg, &self.structure.metric)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> AcbmManifold<U> {
        let s = &self.structure;
        AcbmManifold {
            alg: self.alg.map(f),
            structure: AlmostContactStructure {
                phi: s.phi.map(f),
                xi: s.xi.map(f),
                eta: s.eta.map(f),
                metric: MetricPair {
                    g: s.metric.g.map(f),
                    g_inv: s.metric.g_inv.map(f),
                },
            },
        }
    }

    pub fn to_f64(&self) -> AcbmManifold<f64> {
        self.map(Scalar::to_f64)
    }

    /// Same manifold in the frame `E'_a = Σ_b A[b][a] E_b`.
    pub fn change_frame(&self, a: &FrameTensor<T>) -> Result<Self, GeometryError> {
        let (inv, d) = frame_inverse(a)?;
        let cols: Vec<Vector<T>> = (0..d)
            .map(|m| Vector((0..d).map(|b| a.get(&[b, m]).clone()).collect()))
            .collect();
        let brackets: Vec<Vec<Vector<T>>> = cols
            .iter()
            .map(|x| {
                cols.iter()
                    .map(|y| endo_apply(&inv, &self.alg.bracket(x, y)))
                    .collect()
            })
            .collect();
        let c = FrameTensor::from_fn(d, vec![Contra, Co, Co], |i| {
            brackets[i[1]][i[2]].0[i[0]].clone()
        });
        AcbmManifold::new(LieAlgebra::new(c)?, self.structure.change_frame(a)?)
    }

    /// First frame index `X` where `∇_X ξ ≠ -φX`.
    pub fn reeb_sasaki_defect(&self, conn: &Connection<T>) -> Option<usize> {
        let s = &self.structure;
        let tol = s.tol();
        let pe = s.phi_basis();
        s.basis().iter().zip(&pe).position(|(e, pe)| {
            conn.nabla(e, &s.xi)
                .add(pe)
                .0
                .iter()
                .any(|x| !x.is_negligible(tol))
        })
    }
}

/// `F(X,Y,Z) = g((∇_X φ)Y, Z)` with `(∇_X φ)Y = ∇_X(φY) - φ(∇_X Y)`.
pub fn fundamental_tensor<T: Scalar>(
    s: &AlmostContactStructure<T>,
    conn: &Connection<T>,
) -> FrameTensor<T> {
    let d = s.dim();
    let e = s.basis();
    let pe = s.phi_basis();
    let mut dphi = vec![vec![Vector::zeros(d); d]; d];
    for x in 0..d {
        for y in 0..d {
            dphi[x][y] = conn
                .nabla(&e[x], &pe[y])
                .sub(&endo_apply(&s.phi, &conn.nabla_basis(x, y)));
        }
    }
    FrameTensor::from_fn(d, vec![Co, Co, Co], |i| s.g(&dphi[i[0]][i[1]], &e[i[2]]))
}

/// Residuals of the general identities satisfied by any fundamental tensor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FundamentalIdentities {
    /// `max |F(X,Y,Z) - F(X,Z,Y)|`.
    pub symmetry: f64,
    /// `max |F(X,Y,Z) - F(X,φY,φZ) - η(Y)F(X,ξ,Z) - η(Z)F(X,Y,ξ)|`.
    pub phi_shift: f64,
    /// `max |g(∇_X ξ, Y) - F(X, φY, ξ)|`.
    pub reeb: f64,
}

impl FundamentalIdentities {
    pub fn compute<T: Scalar>(
        s: &AlmostContactStructure<T>,
        conn: &Connection<T>,
        f: &FrameTensor<T>,
    ) -> Self {
        let d = s.dim();
        let e = s.basis();
        let pe = s.phi_basis();
        let fx = |a: &Vector<T>, b: &Vector<T>, c: &Vector<T>| eval_covariant(f, &[a, b, c]);
        let mut symmetry = 0.0f64;
        let mut phi_shift = 0.0f64;
        let mut reeb = 0.0f64;
        for x in 0..d {
            for y in 0..d {
                let nxi_y = s.g(&conn.nabla(&e[x], &s.xi), &e[y]);
                reeb = reeb.max((nxi_y - fx(&e[x], &pe[y], &s.xi)).to_f64().abs());
                for z in 0..d {
                    let v = f.get(&[x, y, z]).clone();
                    symmetry = symmetry.max((v.clone() - f.get(&[x, z, y]).clone()).to_f64().abs());
                    let rhs = fx(&e[x], &pe[y], &pe[z])
                        + s.eta.0[y].clone() * fx(&e[x], &s.xi, &e[z])
                        + s.eta.0[z].clone() * fx(&e[x], &e[y], &s.xi);
                    phi_shift = phi_shift.max((v - rhs).to_f64().abs());
                }
            }
        }
        FundamentalIdentities {
            symmetry,
            phi_shift,
            reeb,
        }
    }
}

/// Lee forms `θ = g^{ij}F(E_i,E_j,·)`, `θ* = g^{ij}F(E_i,φE_j,·)`,
/// `ω = F(ξ,ξ,·)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeeForms<T> {
    pub theta: Covector<T>,
    pub theta_star: Covector<T>,
    pub omega: Covector<T>,
}

impl<T: Scalar> LeeForms<T> {
    pub fn zero(dim: usize) -> Self {
        LeeForms {
            theta: Covector::zeros(dim),
            theta_star: Covector::zeros(dim),
            omega: Covector::zeros(dim),
        }
    }

    /// `(|θ*∘φ + θ∘φ²|_max, |ω(ξ)|)`.
    pub fn identity_residuals(&self, s: &AlmostContactStructure<T>) -> (f64, f64) {
        let phi2 = s.phi_squared();
        let lhs = self
            .theta_star
            .compose(&s.phi)
            .add(&self.theta.compose(&phi2));
        (lhs.max_abs(), self.omega.apply(&s.xi).to_f64().abs())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.theta
            .max_abs_diff(&other.theta)
            .max(self.theta_star.max_abs_diff(&other.theta_star))
            .max(self.omega.max_abs_diff(&other.omega))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> LeeForms<U> {
        LeeForms {
            theta: self.theta.map(f),
            theta_star: self.theta_star.map(f),
            omega: self.omega.map(f),
        }
    }
}

/// Lee forms with the trace taken over the contact distribution `ker η`,
/// that is with `g^{ij} − ξ^i ξ^j` in place of `g^{ij}`.
pub fn lee_forms<T: Scalar>(f: &FrameTensor<T>, s: &AlmostContactStructure<T>) -> LeeForms<T> {
    let h = horizontal_inverse(s);
    let d = s.dim();
    let e = s.basis();
    let pe = s.phi_basis();
    let mut theta = Covector::zeros(d);
    let mut theta_star = Covector::zeros(d);
    for k in 0..d {
        let mut t = T::zero();
        let mut ts = T::zero();
        for i in 0..d {
            for j in 0..d {
                let hij = h.get(&[i, j]);
                if hij.is_zero() {
                    continue;
                }
                t = t + hij.clone() * f.get(&[i, j, k]).clone();
                ts = ts + hij.clone() * eval_covariant(f, &[&e[i], &pe[j], &e[k]]);
            }
        }
        theta.0[k] = t;
        theta_star.0[k] = ts;
    }
    let omega = Covector(
        e.iter()
            .map(|ek| eval_covariant(f, &[&s.xi, &s.xi, ek]))
            .collect(),
    );
    LeeForms {
        theta,
        theta_star,
        omega,
    }
}

/// `g^{ij} − ξ^i ξ^j`, the inverse of `g` restricted to `ker η`.
pub fn horizontal_inverse<T: Scalar>(s: &AlmostContactStructure<T>) -> FrameTensor<T> {
    let xi = &s.xi.0;
    FrameTensor::from_fn(s.dim(), vec![Contra, Contra], |i| {
        s.metric.g_inv.get(i).clone() - xi[i[0]].clone() * xi[i[1]].clone()
    })
}

/// `F = 0`, exactly in rational mode or to `1e-10` in double mode.
pub fn is_cosymplectic<T: Scalar>(f: &FrameTensor<T>) -> bool {
    f.is_negligible(crate::scalar::DOUBLE_ZERO_TOL)
}

/// `g(φX,φY)η(Z) + g(φX,φZ)η(Y)`.
pub fn sasaki_model<T: Scalar>(s: &AlmostContactStructure<T>) -> FrameTensor<T> {
    let gpp = s.g_phi_phi();
    FrameTensor::from_fn(s.dim(), vec![Co, Co, Co], |i| {
        let (x, y, z) = (i[0], i[1], i[2]);
        gpp.get(&[x, y]).clone() * s.eta.0[z].clone()
            + gpp.get(&[x, z]).clone() * s.eta.0[y].clone()
    })
}

/// `F` equals the Sasaki-like model tensor. Refuses structures that fail the
/// axioms.
pub fn is_sasaki_like<T: Scalar>(
    f: &FrameTensor<T>,
    s: &AlmostContactStructure<T>,
) -> Result<bool, GeometryError> {
    let report = s.validate();
    if !report.passed() {
        return Err(GeometryError::InvalidStructure(report.summary()));
    }
    Ok(f.first_difference(&sasaki_model(s), s.tol()).is_none())
}

/// `(1/2n){g(φX,φY)θ(φ²Z) + g(X,φY)θ*(φ²Z) + g(φX,φZ)θ(φ²Y) + g(X,φZ)θ*(φ²Y)}`.
pub fn f1_model<T: Scalar>(s: &AlmostContactStructure<T>, lee: &LeeForms<T>) -> FrameTensor<T> {
    let gpp = s.g_phi_phi();
    let gxp = s.g_x_phi();
    let phi2 = s.phi_squared();
    let t = lee.theta.compose(&phi2);
    let ts = lee.theta_star.compose(&phi2);
    let two_n = T::from_i64(2 * s.n() as i64);
    FrameTensor::from_fn(s.dim(), vec![Co, Co, Co], |i| {
        let (x, y, z) = (i[0], i[1], i[2]);
        (gpp.get(&[x, y]).clone() * t.0[z].clone()
            + gxp.get(&[x, y]).clone() * ts.0[z].clone()
            + gpp.get(&[x, z]).clone() * t.0[y].clone()
            + gxp.get(&[x, z]).clone() * ts.0[y].clone())
            / two_n.clone()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct F1Verdict {
    pub member: bool,
    pub residual: f64,
}

/// Membership in `F₁` decided by rebuilding `F` from its own Lee forms.
pub fn is_f1<T: Scalar>(
    f: &FrameTensor<T>,
    s: &AlmostContactStructure<T>,
    lee: &LeeForms<T>,
) -> F1Verdict {
    let model = f1_model(s, lee);
    let residual = f.max_abs_diff(&model);
    let member = if T::EXACT {
        residual == 0.0 && f.first_difference(&model, 0.0).is_none()
    } else {
        residual < F1_TOL
    };
    F1Verdict { member, residual }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    fn r(n: i64) -> Rational {
        rat(n, 1)
    }

    fn standard(g33: i64) -> AlmostContactStructure<Rational> {
        let mut phi = FrameTensor::zeros(5, vec![Contra, Co]);
        phi.set(&[3, 1], r(1));
        phi.set(&[4, 2], r(1));
        phi.set(&[1, 3], r(-1));
        phi.set(&[2, 4], r(-1));
        let g = FrameTensor::from_fn(5, vec![Co, Co], |i| {
            if i[0] != i[1] {
                r(0)
            } else {
                match i[0] {
                    0..=2 => r(1),
                    3 => r(g33),
                    _ => r(-1),
                }
            }
        });
        AlmostContactStructure::new(phi, Vector::basis(5, 0), Covector(Vector::basis(5, 0).0), g)
            .unwrap()
    }

    #[test]
    fn standard_structure_is_valid() {
        let report = standard(-1).validate();
        assert!(report.passed(), "{}", report.summary());
    }

    #[test]
    fn corrupted_phi_fails_phi_squared_at_e1() {
        let mut s = standard(-1);
        s.phi.set(&[3, 1], r(0));
        s.phi.set(&[4, 1], r(1));
        let report = s.validate();
        let c = report.check(Axiom::PhiSquared);
        assert!(!c.passed);
        assert_eq!(c.at, Some(vec![1]));
    }

    #[test]
    fn flipped_signature_fails_compatibility_at_e1_e1() {
        let report = standard(1).validate();
        let c = report.check(Axiom::Compatibility);
        assert!(!c.passed);
        assert_eq!(c.at, Some(vec![1, 1]));
        assert!(!report.check(Axiom::Signature).passed);
    }

    #[test]
    fn associated_metric_components() {
        let s = standard(-1);
        let gt = s.associated_metric();
        assert_eq!(gt.get(&[1, 3]), &r(-1));
        assert_eq!(gt.get(&[0, 0]), &r(1));
        assert_eq!(gt.get(&[1, 1]), &r(0));
        assert_eq!(gt, gt.transpose(0, 1));
        assert_eq!(crate::tensor::signature(&gt), (3, 2, 0));
    }

    #[test]
    fn zero_tensor_classification() {
        let s = standard(-1);
        let f = FrameTensor::<Rational>::zeros(5, vec![Co, Co, Co]);
        assert!(is_cosymplectic(&f));
        assert!(!is_sasaki_like(&f, &s).unwrap());
        let lee = lee_forms(&f, &s);
        assert_eq!(lee, LeeForms::zero(5));
        assert!(is_f1(&f, &s, &lee).member);
    }

    #[test]
    fn lee_trace_skips_the_reeb_direction() {
        let s = standard(-1);
        let mut f = FrameTensor::<Rational>::zeros(5, vec![Co, Co, Co]);
        f.set(&[0, 0, 1], r(1));
        f.set(&[0, 1, 0], r(1));
        let lee = lee_forms(&f, &s);
        assert_eq!(lee.theta, Covector::zeros(5));
        assert_eq!(lee.omega.0[1], r(1));
        assert_eq!(lee.identity_residuals(&s), (0.0, 0.0));
    }

    #[test]
    fn small_component_is_not_cosymplectic() {
        let mut f = FrameTensor::<f64>::zeros(5, vec![Co, Co, Co]);
        f.set(&[1, 2, 3], 1e-3);
        assert!(!is_cosymplectic(&f));
    }

    #[test]
    fn sasaki_test_refuses_invalid_structures() {
        let s = standard(1);
        let f = sasaki_model(&s);
        assert!(matches!(
            is_sasaki_like(&f, &s),
            Err(GeometryError::InvalidStructure(_))
        ));
    }

    #[test]
    fn frame_change_preserves_axioms() {
        let s = standard(-1);
        let a = FrameTensor::from_fn(5, vec![Contra, Co], |i| {
            if i[0] == i[1] {
                r(1)
            } else if i[0] + 1 == i[1] {
                rat(1, 2)
            } else {
                r(0)
            }
        });
        let t = s.change_frame(&a).unwrap();
        assert!(t.validate().passed(), "{}", t.validate().summary());
        assert_ne!(t.metric.g, s.metric.g);
    }
}
