//! Named subspaces and states, plus seeded random generators.
//!
//! Exact constructions keep their integer (unnormalized) amplitudes; use
//! [`Subspace::to_float`] for a normalized float copy.

use nalgebra::DMatrix;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, Result};
use crate::hierarchy::{MixedState, Subspace};
use crate::linalg::{gaussian, independent_columns, GaussianRational, Scalar, C64};
use crate::tensor::TensorSpace;

type Q = GaussianRational;

fn zero_vec(n: usize) -> Vec<Q> {
    vec![gaussian(0, 0); n]
}

/// Integer-amplitude vector on `d_a x d_b` from `(a, b, coefficient)` terms.
fn ket(d_b: usize, n: usize, terms: &[(usize, usize, i64)]) -> Vec<Q> {
    let mut v = zero_vec(n);
    for &(a, b, c) in terms {
        v[a * d_b + b] = v[a * d_b + b].clone() + gaussian(c, 0);
    }
    v
}

fn example1_vectors() -> Vec<Vec<Q>> {
    let k = |t: &[(usize, usize, i64)]| ket(4, 16, t);
    vec![
        k(&[(0, 0, 1), (1, 1, 1), (2, 2, 1), (3, 3, 1)]),
        k(&[(0, 0, 1), (1, 1, -1), (2, 2, 1), (3, 3, -1)]),
        k(&[(0, 1, 1), (1, 2, 1), (2, 3, 1)]),
        k(&[(1, 0, 1), (2, 1, 1), (3, 2, 1)]),
        k(&[(0, 1, 1), (1, 2, 2), (2, 3, 3)]),
        k(&[(1, 0, 1), (2, 1, 2), (3, 2, 3)]),
        k(&[(0, 2, 1), (1, 3, 1)]),
        k(&[(2, 0, 1), (3, 1, 1)]),
    ]
}

fn space44() -> TensorSpace {
    TensorSpace::bipartite(4, 4).expect("valid dims")
}

/// Eight vectors in 4 x 4 spanning an entangled subspace certified at level 1.
pub fn example1_subspace() -> Subspace<Q> {
    Subspace::new(space44(), example1_vectors()).expect("independent basis")
}

/// `span{x_1, x_3, x_4}` of the first example, 2-entangled.
pub fn example2_subspace() -> Subspace<Q> {
    let x = example1_vectors();
    Subspace::new(space44(), vec![x[0].clone(), x[2].clone(), x[3].clone()]).expect("independent basis")
}

/// The first example's eight vectors plus `|00> + |11> - |22> - |33>` (scaled by 2).
pub fn example3_subspace() -> Subspace<Q> {
    let mut x = example1_vectors();
    x.push(ket(4, 16, &[(0, 0, 1), (1, 1, 1), (2, 2, -1), (3, 3, -1)]));
    Subspace::new(space44(), x).expect("independent basis")
}

/// The five Tiles UPB product vectors on 3 x 3, unnormalized.
pub fn tiles_upb() -> Vec<Vec<Q>> {
    let prod = |a: [i64; 3], b: [i64; 3]| -> Vec<Q> { (0..9).map(|i| gaussian(a[i / 3] * b[i % 3], 0)).collect() };
    vec![
        prod([1, 0, 0], [1, -1, 0]),
        prod([0, 0, 1], [0, 1, -1]),
        prod([1, -1, 0], [0, 0, 1]),
        prod([0, 1, -1], [1, 0, 0]),
        prod([1, 1, 1], [1, 1, 1]),
    ]
}

/// `ρ = (I - Σ |v><v| / <v|v>) / (D - |U|)` for an orthogonal product set `U`.
pub fn upb_state(space: TensorSpace, upb: &[Vec<Q>]) -> Result<MixedState<Q>> {
    let n = space.total_dim();
    if upb.len() >= n {
        return domain("a UPB must have fewer vectors than the space dimension");
    }
    let mut m: Vec<Vec<Q>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { gaussian(1, 0) } else { gaussian(0, 0) }).collect()).collect();
    for v in upb {
        let norm = v.iter().fold(gaussian(0, 0), |acc, x| acc + x.clone() * x.conj());
        for i in 0..n {
            for j in 0..n {
                if !v[i].is_zero() && !v[j].is_zero() {
                    m[i][j] = m[i][j].clone() - v[i].clone() * v[j].conj() / norm.clone();
                }
            }
        }
    }
    let scale = Q::from_ratio(1, (n - upb.len()) as i64);
    for row in &mut m {
        row.iter_mut().for_each(|x| *x = x.clone() * scale.clone());
    }
    MixedState::new(space, m)
}

/// The rank-4 PPT entangled state built from the Tiles UPB.
pub fn tiles_upb_state() -> MixedState<Q> {
    upb_state(TensorSpace::bipartite(3, 3).expect("valid dims"), &tiles_upb()).expect("valid state")
}

/// `ρ = (1/3) Σ_j |x_j><x_j|` on 4 x 4 with three normalized vectors; rank 3.
pub fn example5_state() -> MixedState<Q> {
    let k = |t: &[(usize, usize, i64)]| ket(4, 16, t);
    let xs = [
        k(&[(0, 0, 1), (1, 1, 1), (2, 2, 1), (3, 3, 1)]),
        k(&[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]),
        k(&[(0, 2, 1), (1, 3, 1), (2, 0, 1), (3, 1, -1)]),
    ];
    // each vector has squared norm 4
    let w = Q::from_ratio(1, 12);
    let m = (0..16)
        .map(|i| {
            (0..16)
                .map(|j| xs.iter().fold(gaussian(0, 0), |acc, x| acc + x[i].clone() * x[j].conj()) * w.clone())
                .collect()
        })
        .collect();
    MixedState::new(space44(), m).expect("valid state")
}

/// Maximally mixed state `I / (d_A d_B)`.
pub fn maximally_mixed_state(d_a: usize, d_b: usize) -> Result<MixedState<Q>> {
    let space = TensorSpace::bipartite(d_a, d_b)?;
    let n = space.total_dim();
    let w = Q::from_ratio(1, n as i64);
    let m = (0..n).map(|i| (0..n).map(|j| if i == j { w.clone() } else { gaussian(0, 0) }).collect()).collect();
    MixedState::new(space, m)
}

/// Completely entangled subspace of dimension `d_A d_B d_C - d_A - d_B - d_C + 2`
/// spanned by `|i_A i_B i_C> - |j_A j_B j_C>` with equal index sums.
pub fn bhat_ces(dims: [usize; 3]) -> Result<Subspace<Q>> {
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return domain(format!("every party needs dimension at least 2, got {d}"));
    }
    let space = TensorSpace::new(dims.to_vec())?;
    let n = space.total_dim();
    let sum = |flat: usize| -> usize { space.unflatten(flat).expect("in range").iter().sum() };
    let mut generators = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if sum(i) == sum(j) {
                let mut v = zero_vec(n);
                v[i] = gaussian(1, 0);
                v[j] = gaussian(-1, 0);
                generators.push(v);
            }
        }
    }
    let basis = independent_columns(&generators, 0.0).into_iter().map(|c| generators[c].clone()).collect();
    Subspace::new(space, basis)
}

/// Entangled subspace of dimension `(d_A - 1)(d_B - 1)`: vectors supported on
/// the diagonals `b - a = s` whose coefficients sum to zero. It is the
/// orthogonal complement of the product vectors
/// `(1, λ, ..., λ^{d_A-1}) ⊗ (λ^{d_B-1}, ..., λ, 1)`.
pub fn diagonal_subspace(d_a: usize, d_b: usize) -> Result<Subspace<Q>> {
    if d_a < 2 || d_b < 2 {
        return domain("both local dimensions must be at least 2");
    }
    let space = TensorSpace::bipartite(d_a, d_b)?;
    let n = space.total_dim();
    let mut basis = Vec::new();
    for s in -(d_a as isize - 1)..d_b as isize {
        let cells: Vec<usize> = (0..d_a)
            .filter_map(|a| {
                let b = a as isize + s;
                (0..d_b as isize).contains(&b).then(|| a * d_b + b as usize)
            })
            .collect();
        for m in 1..cells.len() {
            let mut v = zero_vec(n);
            v[cells[0]] = gaussian(1, 0);
            v[cells[m]] = gaussian(-1, 0);
            basis.push(v);
        }
    }
    Subspace::new(space, basis)
}

/// The five Pyramid UPB states on 3 x 3 (float amplitudes).
pub fn pyramid_upb() -> Vec<Vec<C64>> {
    let h = 0.5 * (1.0 + 5f64.sqrt()).sqrt();
    let n = 2.0 / (5.0 + 5f64.sqrt()).sqrt();
    let v = |i: usize| -> [f64; 3] {
        let t = 2.0 * std::f64::consts::PI * i as f64 / 5.0;
        [n * t.cos(), n * t.sin(), n * h]
    };
    (0..5)
        .map(|i| {
            let (a, b) = (v(i), v((2 * i) % 5));
            (0..9).map(|p| C64::new(a[p / 3] * b[p % 3], 0.0)).collect()
        })
        .collect()
}

/// PPT entangled state built from the Pyramid UPB.
pub fn pyramid_upb_state() -> Result<MixedState<C64>> {
    let upb = pyramid_upb();
    let m = (0..9)
        .map(|i| {
            (0..9)
                .map(|j| {
                    let id = if i == j { 1.0 } else { 0.0 };
                    let proj: C64 = upb.iter().map(|v| v[i] * v[j].conj()).sum();
                    (C64::new(id, 0.0) - proj) / 4.0
                })
                .collect()
        })
        .collect();
    MixedState::new(TensorSpace::bipartite(3, 3)?, m)
}

/// `(|0...0> + |1...1>)/√2` on qubits, as an exact subspace (unnormalized).
pub fn ghz_line(parties: usize) -> Result<Subspace<Q>> {
    let space = TensorSpace::new(vec![2; parties])?;
    let n = space.total_dim();
    let mut v = zero_vec(n);
    v[0] = gaussian(1, 0);
    v[n - 1] = gaussian(1, 0);
    Subspace::new(space, vec![v])
}

/// Span of the computational basis state `|multi>`.
pub fn product_line(dims: &[usize], multi: &[usize]) -> Result<Subspace<Q>> {
    let space = TensorSpace::new(dims.to_vec())?;
    let mut v = zero_vec(space.total_dim());
    v[space.flatten(multi)?] = gaussian(1, 0);
    Subspace::new(space, vec![v])
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex standard Gaussian sample.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Columns of the Q factor of a complex Gaussian `n x m` matrix.
fn haar_columns<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Vec<Vec<C64>> {
    let g = DMatrix::from_fn(n, m, |_, _| complex_gaussian(rng));
    let q = g.qr().q();
    (0..m).map(|j| q.column(j).iter().copied().collect()).collect()
}

/// Haar-random `d_S`-dimensional subspace with an orthonormal basis.
pub fn random_subspace(space: &TensorSpace, d_s: usize, seed: u64) -> Result<Subspace<C64>> {
    let n = space.total_dim();
    if d_s == 0 || d_s > n {
        return domain(format!("subspace dimension must lie in 1..={n}, got {d_s}"));
    }
    let mut rng = seeded_rng(seed);
    Subspace::new(space.clone(), haar_columns(&mut rng, n, d_s))
}

/// Random fully product vector `u_1 ⊗ ... ⊗ u_p`.
pub fn random_product_vector<R: Rng + ?Sized>(rng: &mut R, space: &TensorSpace) -> Vec<C64> {
    space.dims().iter().fold(vec![C64::new(1.0, 0.0)], |acc, &d| {
        let u = gaussian_vector(rng, d);
        acc.iter().flat_map(|a| u.iter().map(move |b| a * b)).collect()
    })
}

/// Random vector that is product across the cut `left | rest`, in the
/// original party ordering.
pub fn random_bipartition_product<R: Rng + ?Sized>(
    rng: &mut R,
    space: &TensorSpace,
    left: &[usize],
) -> Result<Vec<C64>> {
    let (bi, perm) = space.regroup_bipartition(left)?;
    let (d_l, d_r) = (bi.dims()[0], bi.dims()[1]);
    let u = gaussian_vector(rng, d_l);
    let w = gaussian_vector(rng, d_r);
    let mut out = vec![C64::new(0.0, 0.0); space.total_dim()];
    for (pos, &orig) in perm.iter().enumerate() {
        out[orig] = u[pos / d_r] * w[pos % d_r];
    }
    Ok(out)
}

/// Random vector of Schmidt rank `s` (with probability one) on `d_A x d_B`.
pub fn random_schmidt_rank_vector<R: Rng + ?Sized>(rng: &mut R, d_a: usize, d_b: usize, s: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); d_a * d_b];
    for _ in 0..s {
        let u = gaussian_vector(rng, d_a);
        let w = gaussian_vector(rng, d_b);
        for a in 0..d_a {
            for b in 0..d_b {
                out[a * d_b + b] += u[a] * w[b];
            }
        }
    }
    out
}

fn planted(space: &TensorSpace, d_s: usize, seed: u64, left: Option<&[usize]>) -> Result<Subspace<C64>> {
    let n = space.total_dim();
    if d_s == 0 || d_s > n {
        return domain(format!("subspace dimension must lie in 1..={n}, got {d_s}"));
    }
    let mut rng = seeded_rng(seed);
    let first = match left {
        Some(l) => random_bipartition_product(&mut rng, space, l)?,
        None => random_product_vector(&mut rng, space),
    };
    let mut basis = vec![first];
    basis.extend(haar_columns(&mut rng, n, d_s - 1));
    Subspace::new(space.clone(), basis)
}

/// One random product vector (first basis vector) plus `d_S - 1` Haar-random
/// vectors.
pub fn planted_product_subspace(space: &TensorSpace, d_s: usize, seed: u64) -> Result<Subspace<C64>> {
    planted(space, d_s, seed, None)
}

/// Like [`planted_product_subspace`], but the planted vector is only product
/// across the cut `left | rest`.
pub fn planted_bipartition_subspace(
    space: &TensorSpace,
    left: &[usize],
    d_s: usize,
    seed: u64,
) -> Result<Subspace<C64>> {
    planted(space, d_s, seed, Some(left))
}

/// Haar-random `n x n` unitary, as rows.
pub fn random_unitary(n: usize, seed: u64) -> Vec<Vec<C64>> {
    let cols = haar_columns(&mut seeded_rng(seed), n, n);
    (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect()
}

/// A construction exported by name.
#[derive(Clone, Debug)]
pub enum NamedObject {
    Subspace(Subspace<Q>),
    State(MixedState<Q>),
    FloatState(MixedState<C64>),
}

#[derive(Clone, Debug)]
pub struct NamedConstruction {
    pub name: &'static str,
    pub description: &'static str,
    pub object: NamedObject,
}

pub const CONSTRUCTION_NAMES: &[&str] = &[
    "example1",
    "example2",
    "example3",
    "tiles",
    "example5",
    "pyramid",
    "maximally-mixed",
    "bhat-222",
    "bhat-223",
    "bhat-233",
    "ghz-line-222",
    "product-line-222",
];

pub fn named_construction(name: &str) -> Result<NamedConstruction> {
    use NamedObject::*;
    let (description, object) = match name {
        "example1" => ("eight-dimensional entangled subspace of 4x4", Subspace(example1_subspace())),
        "example2" => ("three-dimensional 2-entangled subspace of 4x4", Subspace(example2_subspace())),
        "example3" => ("nine-dimensional entangled subspace of 4x4", Subspace(example3_subspace())),
        "tiles" => ("PPT entangled state from the Tiles UPB", State(tiles_upb_state())),
        "example5" => ("rank-3 state on 4x4 with Schmidt number 3", State(example5_state())),
        "pyramid" => ("PPT entangled state from the Pyramid UPB", FloatState(pyramid_upb_state()?)),
        "maximally-mixed" => ("maximally mixed state on 2x2", State(maximally_mixed_state(2, 2)?)),
        "bhat-222" => ("completely entangled subspace of 2x2x2", Subspace(bhat_ces([2, 2, 2])?)),
        "bhat-223" => ("completely entangled subspace of 2x2x3", Subspace(bhat_ces([2, 2, 3])?)),
        "bhat-233" => ("completely entangled subspace of 2x3x3", Subspace(bhat_ces([2, 3, 3])?)),
        "ghz-line-222" => ("span of the three-qubit GHZ vector", Subspace(ghz_line(3)?)),
        "product-line-222" => ("span of |000>", Subspace(product_line(&[2, 2, 2], &[0, 0, 0])?)),
        other => return domain(format!("unknown construction '{other}'; known: {}", CONSTRUCTION_NAMES.join(", "))),
    };
    let name = CONSTRUCTION_NAMES.iter().find(|n| **n == name).expect("listed");
    Ok(NamedConstruction { name, description, object })
}
