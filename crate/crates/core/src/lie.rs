//! Levi-Civita geometry of left-invariant metrics on Lie groups.
//!
//! Everything is expressed in a left-invariant frame `{E_i}`, where the metric
//! components are constant and the Levi-Civita connection is fixed by the
//! structure constants through the Koszul formula
//!
//! ```text
//! 2 g(∇_{E_i} E_j, E_k) = g([E_i,E_j],E_k) - g([E_j,E_k],E_i) + g([E_k,E_i],E_j).
//! ```
//!
//! Curvature uses `R(X,Y)Z = ∇_X∇_Y Z - ∇_Y∇_X Z - ∇_{[X,Y]} Z` and
//! `R_{ijkl} = g(R(E_i,E_j)E_k, E_l)`; the Ricci tensor is
//! `ρ(Y,Z) = g^{ij} R(E_i,Y,Z,E_j)`. With these conventions a Sasaki-like
//! manifold has `R(X,ξ,ξ,X) = g(φX,φX)`-type components of unit size and
//! `ρ(ξ,ξ) = 2n`.

use crate::error::GeometryError;
use crate::scalar::Scalar;
use crate::tensor::{apply_endomorphism, contract, FrameTensor, MetricPair, Variance, Vector};

use Variance::{Co, Contra};

/// Structure constants `[E_i, E_j] = C^k_{ij} E_k`, stored at `[k, i, j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra<T> {
    c: FrameTensor<T>,
}

impl<T: Scalar> LieAlgebra<T> {
    pub fn new(c: FrameTensor<T>) -> Result<Self, GeometryError> {
        if c.slots() != [Contra, Co, Co] {
            return Err(crate::error::TensorError::Shape(
                "structure constants need slots [Contra, Co, Co]".into(),
            )
            .into());
        }
        let d = c.dim();
        for k in 0..d {
            for i in 0..d {
                for j in i..d {
                    let s = c.get(&[k, i, j]).clone() + c.get(&[k, j, i]).clone();
                    if !s.is_negligible(1e-12) {
                        return Err(GeometryError::NonAntisymmetric { i, j, k });
                    }
                }
            }
        }
        Ok(LieAlgebra { c })
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            c: FrameTensor::zeros(dim, vec![Contra, Co, Co]),
        }
    }

    /// Builds from sparse `(i, j, k, c)` entries meaning `C^k_{ij} = c`;
    /// the antisymmetric partner is filled in. Repeated entries for the same
    /// slot must agree.
    pub fn from_brackets(
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, T)>,
    ) -> Result<Self, GeometryError> {
        let mut c = FrameTensor::zeros(dim, vec![Contra, Co, Co]);
        let mut seen = vec![false; dim * dim * dim];
        for (i, j, k, value) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(crate::error::TensorError::Shape(format!(
                    "bracket index ({i},{j},{k}) out of range"
                ))
                .into());
            }
            if i == j {
                if !value.is_zero() {
                    return Err(GeometryError::NonAntisymmetric { i, j, k });
                }
                continue;
            }
            let (a, b, v) = if i < j { (i, j, value) } else { (j, i, -value) };
            let slot = (k * dim + a) * dim + b;
            if seen[slot] && *c.get(&[k, a, b]) != v {
                return Err(GeometryError::NonAntisymmetric { i, j, k });
            }
            seen[slot] = true;
            c.set(&[k, b, a], -v.clone());
            c.set(&[k, a, b], v);
        }
        Ok(LieAlgebra { c })
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    /// `C^k_{ij}`.
    pub fn constant(&self, k: usize, i: usize, j: usize) -> &T {
        self.c.get(&[k, i, j])
    }

    pub fn constants(&self) -> &FrameTensor<T> {
        &self.c
    }

    pub fn bracket(&self, x: &Vector<T>, y: &Vector<T>) -> Vector<T> {
        let d = self.dim();
        let mut out = Vector::<T>::zeros(d);
        for i in 0..d {
            if x.0[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y.0[j].is_zero() {
                    continue;
                }
                let xy = x.0[i].clone() * y.0[j].clone();
                for k in 0..d {
                    let c = self.constant(k, i, j);
                    if !c.is_zero() {
                        out.0[k] = out.0[k].clone() + xy.clone() * c.clone();
                    }
                }
            }
        }
        out
    }

    /// First `(i, j, k, m)` where `Σ_cyclic C^m_{il} C^l_{jk}` does not vanish.
    pub fn jacobi_defect(&self) -> Option<[usize; 4]> {
        let d = self.dim();
        let tol = 1e-10;
        let term = |i: usize, j: usize, k: usize, m: usize| {
            (0..d).fold(T::zero(), |acc, l| {
                acc + self.constant(m, i, l).clone() * self.constant(l, j, k).clone()
            })
        };
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for m in 0..d {
                        let s = term(i, j, k, m) + term(j, k, i, m) + term(k, i, j, m);
                        if !s.is_negligible(tol) {
                            return Some([i, j, k, m]);
                        }
                    }
                }
            }
        }
        None
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> LieAlgebra<U> {
        LieAlgebra { c: self.c.map(f) }
    }
}

/// Connection coefficients `∇_{E_i} E_j = Γ^k_{ij} E_k`, stored at `[i, j, k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection<T> {
    gamma: FrameTensor<T>,
}

impl<T: Scalar> Connection<T> {
    pub fn from_coefficients(gamma: FrameTensor<T>) -> Self {
        Connection { gamma }
    }

    pub fn dim(&self) -> usize {
        self.gamma.dim()
    }

    /// `Γ^k_{ij}`.
    pub fn coefficient(&self, i: usize, j: usize, k: usize) -> &T {
        self.gamma.get(&[i, j, k])
    }

    pub fn coefficients(&self) -> &FrameTensor<T> {
        &self.gamma
    }

    /// `∇_{E_i} E_j`.
    pub fn nabla_basis(&self, i: usize, j: usize) -> Vector<T> {
        Vector(
            (0..self.dim())
                .map(|k| self.coefficient(i, j, k).clone())
                .collect(),
        )
    }

    /// `∇_X Y` for fields with constant frame coefficients.
    pub fn nabla(&self, x: &Vector<T>, y: &Vector<T>) -> Vector<T> {
        let d = self.dim();
        let mut out = Vector::<T>::zeros(d);
        for i in 0..d {
            if x.0[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y.0[j].is_zero() {
                    continue;
                }
                let xy = x.0[i].clone() * y.0[j].clone();
                for k in 0..d {
                    out.0[k] = out.0[k].clone() + xy.clone() * self.coefficient(i, j, k).clone();
                }
            }
        }
        out
    }

    /// First `(i, j, k)` where `Γ^k_{ij} - Γ^k_{ji} ≠ C^k_{ij}`.
    pub fn torsion_defect(&self, alg: &LieAlgebra<T>) -> Option<[usize; 3]> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let t = self.coefficient(i, j, k).clone()
                        - self.coefficient(j, i, k).clone()
                        - alg.constant(k, i, j).clone();
                    if !t.is_negligible(1e-10) {
                        return Some([i, j, k]);
                    }
                }
            }
        }
        None
    }

    /// First `(i, j, k)` where `g(∇_i E_j, E_k) + g(E_j, ∇_i E_k) ≠ 0`.
    pub fn metric_defect(&self, metric: &MetricPair<T>) -> Option<[usize; 3]> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let ej = Vector::basis(d, j);
                    let ek = Vector::basis(d, k);
                    let s = metric.apply(&self.nabla_basis(i, j), &ek)
                        + metric.apply(&ej, &self.nabla_basis(i, k));
                    if !s.is_negligible(1e-10) {
                        return Some([i, j, k]);
                    }
                }
            }
        }
        None
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Connection<U> {
        Connection {
            gamma: self.gamma.map(f),
        }
    }
}

/// Levi-Civita connection of a left-invariant metric.
pub fn koszul_connection<T: Scalar>(
    alg: &LieAlgebra<T>,
    metric: &MetricPair<T>,
) -> Result<Connection<T>, GeometryError> {
    let d = alg.dim();
    if metric.dim() != d {
        return Err(crate::error::TensorError::Shape(
            "metric and algebra dimensions differ".into(),
        )
        .into());
    }
    // Lowered brackets: cl[i][j][k] = g([E_i, E_j], E_k).
    let cl = FrameTensor::from_fn(d, vec![Co, Co, Co], |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        (0..d).fold(T::zero(), |acc, m| {
            acc + alg.constant(m, i, j).clone() * metric.g.get(&[m, k]).clone()
        })
    });
    let two = T::from_i64(2);
    // Lowered connection: low[i][j][k] = g(∇_{E_i} E_j, E_k).
    let low = FrameTensor::from_fn(d, vec![Co, Co, Co], |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        (cl.get(&[i, j, k]).clone() - cl.get(&[j, k, i]).clone() + cl.get(&[k, i, j]).clone())
            / two.clone()
    });
    let gamma = FrameTensor::from_fn(d, vec![Co, Co, Contra], |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        (0..d).fold(T::zero(), |acc, m| {
            acc + metric.g_inv.get(&[k, m]).clone() * low.get(&[i, j, m]).clone()
        })
    });
    Ok(Connection { gamma })
}

/// Riemann tensor `R_{ijkl} = g(R(E_i,E_j)E_k, E_l)` for a left-invariant
/// connection.
pub fn curvature<T: Scalar>(
    conn: &Connection<T>,
    alg: &LieAlgebra<T>,
    metric: &MetricPair<T>,
) -> FrameTensor<T> {
    let d = conn.dim();
    // R^p_{ijk} = Γ^m_{jk} Γ^p_{im} - Γ^m_{ik} Γ^p_{jm} - C^m_{ij} Γ^p_{mk}
    let up = FrameTensor::from_fn(d, vec![Co, Co, Co, Contra], |idx| {
        let (i, j, k, p) = (idx[0], idx[1], idx[2], idx[3]);
        (0..d).fold(T::zero(), |acc, m| {
            acc + conn.coefficient(j, k, m).clone() * conn.coefficient(i, m, p).clone()
                - conn.coefficient(i, k, m).clone() * conn.coefficient(j, m, p).clone()
                - alg.constant(m, i, j).clone() * conn.coefficient(m, k, p).clone()
        })
    });
    FrameTensor::from_fn(d, vec![Co, Co, Co, Co], |idx| {
        let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
        (0..d).fold(T::zero(), |acc, p| {
            acc + up.get(&[i, j, k, p]).clone() * metric.g.get(&[p, l]).clone()
        })
    })
}

/// Ricci tensor and the two scalar curvatures `τ = g^{ij}ρ_{ij}` and
/// `τ* = g^{ij}ρ(E_i, φE_j)`.
pub fn ricci_and_scalars<T: Scalar>(
    riemann: &FrameTensor<T>,
    metric: &MetricPair<T>,
    phi: &FrameTensor<T>,
) -> (FrameTensor<T>, T, T) {
    let ricci = contract(riemann, &metric.g_inv, (0, 3)).expect("rank-4 covariant tensor");
    let tau = contract(&ricci, &metric.g_inv, (0, 1))
        .expect("rank-2 covariant tensor")
        .get(&[])
        .clone();
    let ricci_phi = apply_endomorphism(&ricci, phi, 1).expect("covariant slot");
    let tau_star = contract(&ricci_phi, &metric.g_inv, (0, 1))
        .expect("rank-2 covariant tensor")
        .get(&[])
        .clone();
    (ricci, tau, tau_star)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureData<T> {
    pub riemann: FrameTensor<T>,
    pub ricci: FrameTensor<T>,
    pub tau: T,
    pub tau_star: T,
}

/// Name and first offending index of each algebraic curvature identity.
pub type SymmetryDefects = Vec<(&'static str, Option<[usize; 4]>)>;

impl<T: Scalar> CurvatureData<T> {
    pub fn compute(
        conn: &Connection<T>,
        alg: &LieAlgebra<T>,
        metric: &MetricPair<T>,
        phi: &FrameTensor<T>,
    ) -> Self {
        let riemann = curvature(conn, alg, metric);
        let (ricci, tau, tau_star) = ricci_and_scalars(&riemann, metric, phi);
        CurvatureData {
            riemann,
            ricci,
            tau,
            tau_star,
        }
    }

    /// Checks `R_{ijkl} = -R_{jikl} = -R_{ijlk} = R_{klij}`, the first Bianchi
    /// identity and the symmetry of `ρ`.
    pub fn symmetry_defects(&self) -> SymmetryDefects {
        let r = &self.riemann;
        let d = r.dim();
        let tol = 1e-10;
        let find = |f: &dyn Fn(usize, usize, usize, usize) -> T| {
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        for l in 0..d {
                            if !f(i, j, k, l).is_negligible(tol) {
                                return Some([i, j, k, l]);
                            }
                        }
                    }
                }
            }
            None
        };
        let at = |i, j, k, l| r.get(&[i, j, k, l]).clone();
        let ricci_defect = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .find(|&(i, j)| {
                !(self.ricci.get(&[i, j]).clone() - self.ricci.get(&[j, i]).clone())
                    .is_negligible(tol)
            })
            .map(|(i, j)| [i, j, 0, 0]);
        vec![
            (
                "R_ijkl = -R_jikl",
                find(&|i, j, k, l| at(i, j, k, l) + at(j, i, k, l)),
            ),
            (
                "R_ijkl = -R_ijlk",
                find(&|i, j, k, l| at(i, j, k, l) + at(i, j, l, k)),
            ),
            (
                "R_ijkl = R_klij",
                find(&|i, j, k, l| at(i, j, k, l) - at(k, l, i, j)),
            ),
            (
                "first Bianchi identity",
                find(&|i, j, k, l| at(i, j, k, l) + at(j, k, i, l) + at(k, i, j, l)),
            ),
            ("Ricci symmetric", ricci_defect),
        ]
    }
}
