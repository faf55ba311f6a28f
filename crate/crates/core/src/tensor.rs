//! Dense tensors over a fixed frame `{E_0, ..., E_{d-1}}`.
//!
//! Components are stored row-major in slot order, so `F(E_x, E_y, E_z)` lives
//! at `[x, y, z]` and `R(E_i, E_j, E_k, E_l)` at `[i, j, k, l]`. An
//! endomorphism `φ` is a tensor with slots `[Contra, Co]` whose component
//! `[a, b]` is the `E_a`-coefficient of `φ E_b`.

use serde::Serialize;

use crate::error::TensorError;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Variance {
    /// Lower index, eats a vector.
    Co,
    /// Upper index, eats a covector.
    Contra,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameTensor<T> {
    dim: usize,
    slots: Vec<Variance>,
    data: Vec<T>,
}

/// Iterates all multi-indices of `rank` slots over `0..dim` in row-major order.
pub fn multi_indices(dim: usize, rank: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = dim.pow(rank as u32);
    (0..total).map(move |mut flat| {
        let mut idx = vec![0; rank];
        for slot in (0..rank).rev() {
            idx[slot] = flat % dim;
            flat /= dim;
        }
        idx
    })
}

impl<T: Scalar> FrameTensor<T> {
    pub fn zeros(dim: usize, slots: Vec<Variance>) -> Self {
        let len = dim.pow(slots.len() as u32);
        FrameTensor {
            dim,
            slots,
            data: vec![T::zero(); len],
        }
    }

    pub fn from_fn(dim: usize, slots: Vec<Variance>, mut f: impl FnMut(&[usize]) -> T) -> Self {
        let data = multi_indices(dim, slots.len()).map(|idx| f(&idx)).collect();
        FrameTensor { dim, slots, data }
    }

    /// Rank-zero tensor.
    pub fn scalar(dim: usize, value: T) -> Self {
        FrameTensor {
            dim,
            slots: Vec::new(),
            data: vec![value],
        }
    }

    /// Builds a rank-2 tensor from rows; `rows[a][b]` is component `[a, b]`.
    pub fn from_rows(slots: [Variance; 2], rows: Vec<Vec<T>>) -> Result<Self, TensorError> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(TensorError::Shape(format!("expected a {dim}x{dim} matrix")));
        }
        Ok(FrameTensor {
            dim,
            slots: slots.to_vec(),
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity_endomorphism(dim: usize) -> Self {
        Self::from_fn(dim, vec![Variance::Contra, Variance::Co], |i| {
            if i[0] == i[1] {
                T::one()
            } else {
                T::zero()
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[Variance] {
        &self.slots
    }

    pub fn components(&self) -> &[T] {
        &self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank());
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dim);
            acc * self.dim + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> &T {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: T) {
        let off = self.offset(idx);
        self.data[off] = value;
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> FrameTensor<U> {
        FrameTensor {
            dim: self.dim,
            slots: self.slots.clone(),
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> FrameTensor<f64> {
        self.map(Scalar::to_f64)
    }

    /// Component-wise linear combination `a·self + b·other`.
    pub fn combine(&self, a: &T, other: &Self, b: &T) -> Self {
        assert_eq!(self.slots, other.slots, "combine needs equal valence");
        FrameTensor {
            dim: self.dim,
            slots: self.slots.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| a.clone() * x.clone() + b.clone() * y.clone())
                .collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|x| x.to_f64().abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.data.len(), other.data.len());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| (x.clone() - y.clone()).to_f64().abs())
            .fold(0.0, f64::max)
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.data.iter().all(|x| x.is_negligible(tol))
    }

    /// Multi-indices (row-major) of components that are not negligible.
    pub fn support(&self, tol: f64) -> Vec<(Vec<usize>, T)> {
        multi_indices(self.dim, self.rank())
            .zip(&self.data)
            .filter(|(_, v)| !v.is_negligible(tol))
            .map(|(i, v)| (i, v.clone()))
            .collect()
    }

    /// Returns the first multi-index where `self` and `other` differ.
    pub fn first_difference(&self, other: &Self, tol: f64) -> Option<Vec<usize>> {
        multi_indices(self.dim, self.rank())
            .zip(self.data.iter().zip(&other.data))
            .find(|(_, (a, b))| !((*a).clone() - (*b).clone()).is_negligible(tol))
            .map(|(i, _)| i)
    }

    /// Swaps two slots (e.g. the transpose of a matrix).
    pub fn transpose(&self, a: usize, b: usize) -> Self {
        let mut slots = self.slots.clone();
        slots.swap(a, b);
        FrameTensor::from_fn(self.dim, slots, |idx| {
            let mut src = idx.to_vec();
            src.swap(a, b);
            self.get(&src).clone()
        })
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        assert_eq!(self.rank(), 2);
        self.data.chunks(self.dim).map(|c| c.to_vec()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        fn nest<T: Scalar>(data: &[T], dim: usize, rank: usize) -> serde_json::Value {
            if rank == 0 {
                return scalar_json(&data[0]);
            }
            let chunk = data.len() / dim;
            serde_json::Value::Array(data.chunks(chunk).map(|c| nest(c, dim, rank - 1)).collect())
        }
        nest(&self.data, self.dim, self.rank())
    }
}

/// JSON form of a scalar: `"p/q"` strings in exact mode, numbers otherwise.
pub fn scalar_json<T: Scalar>(v: &T) -> serde_json::Value {
    v.to_json()
}

/// Column vector in the frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector<T>(pub Vec<T>);

/// Row covector in the frame; `components[i] = θ(E_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Covector<T>(pub Vec<T>);

impl<T: Scalar> Vector<T> {
    pub fn basis(dim: usize, i: usize) -> Self {
        Vector(
            (0..dim)
                .map(|k| if k == i { T::one() } else { T::zero() })
                .collect(),
        )
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![T::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn scale(&self, s: &T) -> Self {
        Vector(self.0.iter().map(|x| s.clone() * x.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Vector<U> {
        Vector(self.0.iter().map(f).collect())
    }
}

impl<T: Scalar> Covector<T> {
    pub fn zeros(dim: usize) -> Self {
        Covector(vec![T::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, v: &Vector<T>) -> T {
        self.0
            .iter()
            .zip(&v.0)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// `θ ∘ φ`, i.e. `(θ∘φ)(E_i) = θ(φ E_i)`.
    pub fn compose(&self, phi: &FrameTensor<T>) -> Self {
        let d = self.dim();
        Covector(
            (0..d)
                .map(|i| {
                    (0..d).fold(T::zero(), |acc, j| {
                        acc + self.0[j].clone() * phi.get(&[j, i]).clone()
                    })
                })
                .collect(),
        )
    }

    pub fn scale(&self, s: &T) -> Self {
        Covector(self.0.iter().map(|x| s.clone() * x.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Covector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Covector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.0.iter().all(|x| x.is_negligible(tol))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Covector<U> {
        Covector(self.0.iter().map(f).collect())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.0.iter().map(scalar_json).collect())
    }
}

/// `φ v` for an endomorphism `φ` with slots `[Contra, Co]`.
pub fn endo_apply<T: Scalar>(phi: &FrameTensor<T>, v: &Vector<T>) -> Vector<T> {
    let d = phi.dim();
    Vector(
        (0..d)
            .map(|a| {
                (0..d).fold(T::zero(), |acc, b| {
                    acc + phi.get(&[a, b]).clone() * v.0[b].clone()
                })
            })
            .collect(),
    )
}

/// Matrix product of endomorphisms `(φ ψ)`.
pub fn endo_compose<T: Scalar>(phi: &FrameTensor<T>, psi: &FrameTensor<T>) -> FrameTensor<T> {
    let d = phi.dim();
    FrameTensor::from_fn(d, vec![Variance::Contra, Variance::Co], |i| {
        (0..d).fold(T::zero(), |acc, k| {
            acc + phi.get(&[i[0], k]).clone() * psi.get(&[k, i[1]]).clone()
        })
    })
}

/// `t(v_0, v_1, ...)` for a fully covariant tensor. Only the non-zero
/// components of the arguments are visited.
pub fn eval_covariant<T: Scalar>(t: &FrameTensor<T>, args: &[&Vector<T>]) -> T {
    assert_eq!(t.rank(), args.len());
    let support: Vec<Vec<(usize, &T)>> = args
        .iter()
        .map(|v| {
            v.0.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .collect()
        })
        .collect();
    let mut acc = T::zero();
    if support.iter().any(Vec::is_empty) {
        return acc;
    }
    let d = t.dim();
    let mut pos = vec![0usize; args.len()];
    loop {
        let flat = pos
            .iter()
            .zip(&support)
            .fold(0, |f, (&p, sup)| f * d + sup[p].0);
        let c = &t.components()[flat];
        if !c.is_zero() {
            let term = pos
                .iter()
                .zip(&support)
                .fold(c.clone(), |term, (&p, sup)| term * sup[p].1.clone());
            acc = acc + term;
        }
        let mut slot = pos.len();
        loop {
            if slot == 0 {
                return acc;
            }
            slot -= 1;
            pos[slot] += 1;
            if pos[slot] < support[slot].len() {
                break;
            }
            pos[slot] = 0;
        }
    }
}

/// Inverse of a symmetric metric by Gauss-Jordan elimination.
///
/// Exact in rational mode; partial pivoting in double mode.
pub fn invert_metric<T: Scalar>(g: &FrameTensor<T>) -> Result<FrameTensor<T>, TensorError> {
    if g.slots() != [Variance::Co, Variance::Co] {
        return Err(TensorError::WrongVariance(0));
    }
    let d = g.dim();
    for i in 0..d {
        for j in i + 1..d {
            let (a, b) = (g.get(&[i, j]), g.get(&[j, i]));
            let scale = a.to_f64().abs().max(b.to_f64().abs()).max(1.0);
            if !(a.clone() - b.clone()).is_negligible(1e-12 * scale) {
                return Err(TensorError::AsymmetricMetric(i, j));
            }
        }
    }
    let mut a = g.rows();
    let mut inv: Vec<Vec<T>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect();
    for col in 0..d {
        let pivot = if T::EXACT {
            (col..d).find(|&r| !a[r][col].is_zero())
        } else {
            (col..d)
                .filter(|&r| a[r][col].to_f64().abs() > 1e-300)
                .max_by(|&x, &y| {
                    a[x][col]
                        .to_f64()
                        .abs()
                        .total_cmp(&a[y][col].to_f64().abs())
                })
        };
        let p = pivot.ok_or(TensorError::SingularMetric)?;
        a.swap(col, p);
        inv.swap(col, p);
        let pv = a[col][col].clone();
        for k in 0..d {
            a[col][k] = a[col][k].clone() / pv.clone();
            inv[col][k] = inv[col][k].clone() / pv.clone();
        }
        for r in 0..d {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for k in 0..d {
                a[r][k] = a[r][k].clone() - factor.clone() * a[col][k].clone();
                inv[r][k] = inv[r][k].clone() - factor.clone() * inv[col][k].clone();
            }
        }
    }
    FrameTensor::from_rows([Variance::Contra, Variance::Contra], inv)
}

/// Counts `(positive, negative, zero)` eigenvalue signs of a symmetric bilinear
/// form by congruence diagonalisation.
pub fn signature<T: Scalar>(g: &FrameTensor<T>) -> (usize, usize, usize) {
    let d = g.dim();
    let mut a = g.rows();
    let tol = 1e-12;
    let mut signs = (0, 0, 0);
    let mut active: Vec<usize> = (0..d).collect();
    while !active.is_empty() {
        let diag = active
            .iter()
            .copied()
            .find(|&i| !a[i][i].is_negligible(tol));
        let p = match diag {
            Some(p) => p,
            None => {
                let off = active.iter().copied().find_map(|i| {
                    active
                        .iter()
                        .copied()
                        .find(|&j| j != i && !a[i][j].is_negligible(tol))
                        .map(|j| (i, j))
                });
                match off {
                    Some((i, j)) => {
                        // Replace row/column i by row/column i + j.
                        for k in 0..d {
                            a[i][k] = a[i][k].clone() + a[j][k].clone();
                        }
                        for k in 0..d {
                            a[k][i] = a[k][i].clone() + a[k][j].clone();
                        }
                        i
                    }
                    None => {
                        signs.2 += active.len();
                        break;
                    }
                }
            }
        };
        let pv = a[p][p].clone();
        if pv.to_f64() > 0.0 {
            signs.0 += 1;
        } else {
            signs.1 += 1;
        }
        active.retain(|&i| i != p);
        for &r in &active {
            let factor = a[r][p].clone() / pv.clone();
            for &c in &active {
                a[r][c] = a[r][c].clone() - factor.clone() * a[p][c].clone();
            }
        }
    }
    signs
}

/// Metric contraction `g^{ij} t(..., E_i, ..., E_j, ...)` over two covariant
/// slots `a < b` or `a > b`.
pub fn contract<T: Scalar>(
    t: &FrameTensor<T>,
    g_inv: &FrameTensor<T>,
    slots: (usize, usize),
) -> Result<FrameTensor<T>, TensorError> {
    let (a, b) = slots;
    let rank = t.rank();
    for s in [a, b] {
        if s >= rank {
            return Err(TensorError::SlotOutOfRange { slot: s, rank });
        }
        if t.slots()[s] != Variance::Co {
            return Err(TensorError::WrongVariance(s));
        }
    }
    if a == b {
        return Err(TensorError::Shape("contraction slots must differ".into()));
    }
    let d = t.dim();
    let rest: Vec<Variance> = t
        .slots()
        .iter()
        .enumerate()
        .filter(|(s, _)| *s != a && *s != b)
        .map(|(_, v)| *v)
        .collect();
    Ok(FrameTensor::from_fn(d, rest, |out| {
        let mut full = vec![0; rank];
        let mut it = out.iter();
        for (s, slot) in full.iter_mut().enumerate() {
            if s != a && s != b {
                *slot = *it.next().unwrap();
            }
        }
        let mut acc = T::zero();
        for i in 0..d {
            for j in 0..d {
                let gij = g_inv.get(&[i, j]);
                if gij.is_zero() {
                    continue;
                }
                full[a] = i;
                full[b] = j;
                acc = acc + gij.clone() * t.get(&full).clone();
            }
        }
        acc
    }))
}

/// Precomposes a covariant slot with an endomorphism:
/// `t'(..., E_i, ...) = t(..., φ E_i, ...)`.
pub fn apply_endomorphism<T: Scalar>(
    t: &FrameTensor<T>,
    phi: &FrameTensor<T>,
    slot: usize,
) -> Result<FrameTensor<T>, TensorError> {
    let rank = t.rank();
    if slot >= rank {
        return Err(TensorError::SlotOutOfRange { slot, rank });
    }
    if t.slots()[slot] != Variance::Co {
        return Err(TensorError::WrongVariance(slot));
    }
    let d = t.dim();
    Ok(FrameTensor::from_fn(d, t.slots().to_vec(), |idx| {
        let mut src = idx.to_vec();
        (0..d).fold(T::zero(), |acc, j| {
            let p = phi.get(&[j, idx[slot]]);
            if p.is_zero() {
                return acc;
            }
            src[slot] = j;
            acc + t.get(&src).clone() * p.clone()
        })
    }))
}

/// A nondegenerate symmetric metric together with its inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricPair<T> {
    pub g: FrameTensor<T>,
    pub g_inv: FrameTensor<T>,
}

impl<T: Scalar> MetricPair<T> {
    pub fn new(g: FrameTensor<T>) -> Result<Self, TensorError> {
        let g_inv = invert_metric(&g)?;
        Ok(MetricPair { g, g_inv })
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn apply(&self, x: &Vector<T>, y: &Vector<T>) -> T {
        let d = self.dim();
        let mut acc = T::zero();
        for i in 0..d {
            if x.0[i].is_zero() {
                continue;
            }
            for j in 0..d {
                acc = acc + x.0[i].clone() * self.g.get(&[i, j]).clone() * y.0[j].clone();
            }
        }
        acc
    }

    pub fn lower(&self, v: &Vector<T>) -> Covector<T> {
        let d = self.dim();
        Covector(
            (0..d)
                .map(|j| {
                    (0..d).fold(T::zero(), |acc, i| {
                        acc + v.0[i].clone() * self.g.get(&[i, j]).clone()
                    })
                })
                .collect(),
        )
    }

    pub fn raise(&self, c: &Covector<T>) -> Vector<T> {
        let d = self.dim();
        Vector(
            (0..d)
                .map(|i| {
                    (0..d).fold(T::zero(), |acc, j| {
                        acc + self.g_inv.get(&[i, j]).clone() * c.0[j].clone()
                    })
                })
                .collect(),
        )
    }

    pub fn signature(&self) -> (usize, usize, usize) {
        signature(&self.g)
    }

    pub fn to_f64(&self) -> MetricPair<f64> {
        MetricPair {
            g: self.g.to_f64(),
            g_inv: self.g_inv.to_f64(),
        }
    }
}
