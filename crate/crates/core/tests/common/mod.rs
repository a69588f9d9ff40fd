//! Dense brute-force oracles shared by the integration tests. Every projector
//! here is an explicit matrix built from permutation operators, independent of
//! the implicit determinant-based code paths in the library.

#![allow(dead_code)]

use entcert_core::linalg::C64;
use nalgebra::DMatrix;

/// Operator permuting tensor factors: factor `q` of the output is factor
/// `perm[q]` of the input.
pub fn factor_permutation(dims: &[usize], perm: &[usize]) -> DMatrix<C64> {
    let n: usize = dims.iter().product();
    let out_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut m = DMatrix::zeros(n, n);
    for src in 0..n {
        let digits = unflatten(dims, src);
        let out: Vec<usize> = perm.iter().map(|&p| digits[p]).collect();
        m[(flatten(&out_dims, &out), src)] = C64::new(1.0, 0.0);
    }
    m
}

pub fn flatten(dims: &[usize], digits: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

pub fn unflatten(dims: &[usize], mut flat: usize) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for q in (0..dims.len()).rev() {
        out[q] = flat % dims[q];
        flat /= dims[q];
    }
    out
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn parity(p: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                odd = !odd;
            }
        }
    }
    odd
}

pub fn kron(vs: &[&[C64]]) -> Vec<C64> {
    vs.iter().fold(vec![C64::new(1.0, 0.0)], |acc, v| {
        let mut out = Vec::with_capacity(acc.len() * v.len());
        for a in &acc {
            out.extend(v.iter().map(|b| a * b));
        }
        out
    })
}

/// `(P∧_{A,t} ⊗ P∧_{B,t} ⊗ I) P∨_{AB,t+k-1}` on `(C^{d_A} ⊗ C^{d_B})^{⊗(t+k-1)}`,
/// as a dense matrix with factor order `A_1 B_1 A_2 B_2 ...`.
pub fn dense_phi(d_a: usize, d_b: usize, t: usize, k: usize) -> DMatrix<C64> {
    let copies = t + k - 1;
    let dims: Vec<usize> = (0..copies).flat_map(|_| [d_a, d_b]).collect();
    let n: usize = dims.iter().product();

    let mut sym = DMatrix::zeros(n, n);
    let perms = permutations(copies);
    for p in &perms {
        let factor_perm: Vec<usize> = p.iter().flat_map(|&c| [2 * c, 2 * c + 1]).collect();
        sym += factor_permutation(&dims, &factor_perm);
    }
    sym /= C64::new(perms.len() as f64, 0.0);

    let antisym = |offset: usize| -> DMatrix<C64> {
        let mut m = DMatrix::zeros(n, n);
        let ps = permutations(t);
        for p in &ps {
            let mut factor_perm: Vec<usize> = (0..dims.len()).collect();
            for (i, &pi) in p.iter().enumerate() {
                factor_perm[2 * i + offset] = 2 * pi + offset;
            }
            let sign = if parity(p) { -1.0 } else { 1.0 };
            m += factor_permutation(&dims, &factor_perm) * C64::new(sign, 0.0);
        }
        m / C64::new(ps.len() as f64, 0.0)
    };
    antisym(0) * antisym(1) * sym
}

/// Rank of a dense matrix by SVD with the usual `max(m, n) ε σ_max` cutoff.
pub fn dense_rank(m: &DMatrix<C64>) -> usize {
    let s = m.clone().svd(false, false).singular_values;
    let top = s.iter().copied().fold(0.0, f64::max);
    let tol = m.nrows().max(m.ncols()) as f64 * f64::EPSILON * top;
    s.iter().filter(|&&v| v > tol).count()
}

/// Dimension of the CES range for three or more parties, built from explicit
/// two-copy projectors `P∧_L ⊗ P∧_R` for each listed cut and regrouped back to
/// the original factor order.
pub fn dense_ces_dim(dims: &[usize], cuts: &[Vec<usize>]) -> usize {
    let p = dims.len();
    let d: usize = dims.iter().product();
    let two_copy: Vec<usize> = dims.iter().chain(dims).copied().collect();
    let mut blocks: Vec<DMatrix<C64>> = Vec::new();
    for left in cuts {
        let right: Vec<usize> = (0..p).filter(|q| !left.contains(q)).collect();
        // swap copy 1 and copy 2 on the parties in `group`
        let swap = |group: &[usize]| -> DMatrix<C64> {
            let perm: Vec<usize> = (0..2 * p)
                .map(|f| {
                    let (copy, party) = (f / p, f % p);
                    if group.contains(&party) {
                        (1 - copy) * p + party
                    } else {
                        f
                    }
                })
                .collect();
            factor_permutation(&two_copy, &perm)
        };
        let id = DMatrix::<C64>::identity(d * d, d * d);
        let half = C64::new(0.5, 0.0);
        let proj = (&id - swap(left)) * half * (&id - swap(&right)) * half;
        blocks.push(proj);
    }
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut all = DMatrix::zeros(d * d, cols);
    let mut at = 0;
    for b in &blocks {
        all.columns_mut(at, b.ncols()).copy_from(b);
        at += b.ncols();
    }
    dense_rank(&all)
}
