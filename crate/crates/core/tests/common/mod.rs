#![allow(dead_code)]

use acbm_core::catalog::standard_structure;
use acbm_core::expr::{Expression, Func, Node, Point};
use acbm_core::lie::LieAlgebra;
use acbm_core::scalar::{rat, Rational};
use acbm_core::structure::AcbmManifold;
use acbm_core::tensor::{FrameTensor, Variance};
use acbm_core::transform::TransformTriple;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn r(n: i64) -> Rational {
    rat(n, 1)
}

/// `ℝ ⋉_D ℝ⁴` with `[E₀, E_i] = Σ_j D_ji E_j` and the standard structure.
pub fn semidirect<R: Rng>(rng: &mut R) -> AcbmManifold<Rational> {
    let mut entries = Vec::new();
    for i in 1..5 {
        for j in 1..5 {
            let d = rng.gen_range(-2..=2);
            if d != 0 {
                entries.push((0, i, j, r(d)));
            }
        }
    }
    let alg = LieAlgebra::from_brackets(5, entries).unwrap();
    AcbmManifold::new(alg, standard_structure()).unwrap()
}

/// Two-step nilpotent: `[E_i, E_j] = ω_ij E₀` for `i, j ≥ 1`.
pub fn nilpotent<R: Rng>(rng: &mut R) -> AcbmManifold<Rational> {
    let mut entries = Vec::new();
    for i in 1..5 {
        for j in (i + 1)..5 {
            let w = rng.gen_range(-2..=2);
            if w != 0 {
                entries.push((i, j, 0, r(w)));
            }
        }
    }
    let alg = LieAlgebra::from_brackets(5, entries).unwrap();
    AcbmManifold::new(alg, standard_structure()).unwrap()
}

/// `(I + L) · D · (I + U)` with small integer entries and `D = diag(±1, ±2)`.
pub fn random_frame<R: Rng>(rng: &mut R, d: usize) -> FrameTensor<Rational> {
    let slots = vec![Variance::Contra, Variance::Co];
    let lower = FrameTensor::from_fn(d, slots.clone(), |i| match i[0].cmp(&i[1]) {
        std::cmp::Ordering::Equal => r(1),
        std::cmp::Ordering::Greater => r(rng.gen_range(-1..=1)),
        std::cmp::Ordering::Less => r(0),
    });
    let diag: Vec<Rational> = (0..d)
        .map(|_| *[1, -1, 2, -2].choose(rng).unwrap())
        .map(|k| rat(k, 1))
        .collect();
    let upper = FrameTensor::from_fn(d, slots.clone(), |i| match i[0].cmp(&i[1]) {
        std::cmp::Ordering::Equal => r(1),
        std::cmp::Ordering::Less => rat(rng.gen_range(-2..=2), 2),
        std::cmp::Ordering::Greater => r(0),
    });
    FrameTensor::from_fn(d, slots, |i| {
        (0..d)
            .map(|k| {
                lower.get(&[i[0], k]).clone() * diag[k].clone() * upper.get(&[k, i[1]]).clone()
            })
            .fold(r(0), |a, b| a + b)
    })
}

/// A random valid manifold from one of the two families, in a random frame
/// half the time.
pub fn random_manifold<R: Rng>(rng: &mut R) -> AcbmManifold<Rational> {
    let m = if rng.gen_bool(0.5) {
        semidirect(rng)
    } else {
        nilpotent(rng)
    };
    if rng.gen_bool(0.5) {
        let a = random_frame(rng, m.dim());
        m.change_frame(&a).unwrap()
    } else {
        m
    }
}

/// Smooth functions without singularities.
pub fn random_smooth<R: Rng>(rng: &mut R, dim: usize) -> Expression {
    let mut terms = Vec::new();
    for _ in 0..3 {
        let i = rng.gen_range(0..dim);
        let j = rng.gen_range(0..dim);
        let c = rat(rng.gen_range(-3..=3), 8);
        let t = match rng.gen_range(0..4) {
            0 => Node::mul(Node::Var(i), Node::Var(j)),
            1 => Node::call(Func::Sin, Node::Var(i)),
            2 => Node::call(Func::Cos, Node::mul(Node::Var(i), Node::Var(j))),
            _ => Node::Var(i),
        };
        terms.push(Node::mul(Node::Const(c), t));
    }
    let root = terms.into_iter().reduce(Node::add).unwrap();
    Expression::new(root, dim).unwrap()
}

pub fn random_triple<R: Rng>(rng: &mut R, dim: usize) -> TransformTriple {
    TransformTriple::new(
        random_smooth(rng, dim),
        random_smooth(rng, dim),
        random_smooth(rng, dim),
    )
}

pub fn random_point<R: Rng>(rng: &mut R, dim: usize) -> Point {
    Point::from_rationals((0..dim).map(|_| rat(rng.gen_range(-8..=8), 4)).collect())
}

/// Node kinds in the order used by [`node_kind`].
pub const NODE_KINDS: [&str; 14] = [
    "const", "var", "neg", "add", "sub", "mul", "div", "pow", "sin", "cos", "arctan", "ln", "exp",
    "sqrt",
];

pub fn node_kind(n: &Node) -> usize {
    match n {
        Node::Const(_) => 0,
        Node::Var(_) => 1,
        Node::Neg(_) => 2,
        Node::Add(..) => 3,
        Node::Sub(..) => 4,
        Node::Mul(..) => 5,
        Node::Div(..) => 6,
        Node::Pow(..) => 7,
        Node::Call(f, _) => 8 + Func::ALL.iter().position(|g| g == f).unwrap(),
    }
}

pub fn visit(n: &Node, f: &mut impl FnMut(&Node)) {
    f(n);
    match n {
        Node::Const(_) | Node::Var(_) => {}
        Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => visit(a, f),
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
            visit(a, f);
            visit(b, f);
        }
    }
}

/// Random tree of depth at most `depth`. `ln` and `sqrt` get a positive
/// argument `1 + a²` often enough to keep most samples regular.
pub fn random_node<R: Rng>(rng: &mut R, dim: usize, depth: usize) -> Node {
    if depth == 0 || rng.gen_bool(0.2) {
        return if rng.gen_bool(0.5) {
            Node::Const(rat(rng.gen_range(-6..=6), rng.gen_range(1..=4)))
        } else {
            Node::Var(rng.gen_range(0..dim))
        };
    }
    let sub = |rng: &mut R| random_node(rng, dim, depth - 1);
    match rng.gen_range(0..12) {
        0 => Node::neg(sub(rng)),
        1 => Node::add(sub(rng), sub(rng)),
        2 => Node::sub(sub(rng), sub(rng)),
        3 => Node::mul(sub(rng), sub(rng)),
        4 => Node::div(sub(rng), sub(rng)),
        5 => Node::pow(sub(rng), rng.gen_range(-2..=3)),
        k => {
            let f = Func::ALL[k - 6];
            let a = sub(rng);
            let a = match f {
                Func::Ln | Func::Sqrt if rng.gen_bool(0.6) => {
                    Node::add(Node::Const(r(1)), Node::pow(a, 2))
                }
                _ => a,
            };
            Node::call(f, a)
        }
    }
}

/// Central differences with Ridders' extrapolation, starting from step `h`.
/// Returns the estimate and its error bound.
pub fn fd_partial(e: &Expression, x: &[f64], i: usize, h: f64) -> (f64, f64) {
    const SHRINK: f64 = 1.4;
    const N: usize = 12;
    let central = |h: f64| {
        let at = |t: f64| {
            let mut y = x.to_vec();
            y[i] += t;
            e.eval_f64(&y).unwrap_or(f64::NAN)
        };
        (at(h) - at(-h)) / (2.0 * h)
    };
    let mut table = vec![vec![0.0; N]; N];
    let mut step = h;
    table[0][0] = central(step);
    let (mut best, mut err) = (table[0][0], f64::INFINITY);
    for k in 1..N {
        step /= SHRINK;
        table[0][k] = central(step);
        let mut fac = SHRINK * SHRINK;
        for j in 1..=k {
            table[j][k] = (table[j - 1][k] * fac - table[j - 1][k - 1]) / (fac - 1.0);
            fac *= SHRINK * SHRINK;
            let e1 = (table[j][k] - table[j - 1][k]).abs();
            let e2 = (table[j][k] - table[j - 1][k - 1]).abs();
            if e1.max(e2) <= err {
                err = e1.max(e2);
                best = table[j][k];
            }
        }
        if (table[k][k] - table[k - 1][k - 1]).abs() >= 2.0 * err {
            break;
        }
    }
    (best, err)
}

/// `|a − b| ≤ max(tol · max(|a|, |b|), floor)`.
pub fn close(a: f64, b: f64, tol: f64, floor: f64) -> bool {
    (a - b).abs() <= (tol * a.abs().max(b.abs())).max(floor)
}
