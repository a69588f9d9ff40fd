use crate::error::{domain, Result};
use crate::linalg::{GaussianRational, Mode, Scalar, SparseMatrix, TolPolicy, C64};
use crate::tensor::TensorSpace;

/// A subspace given by a linearly independent basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<T> {
    space: TensorSpace,
    basis: Vec<Vec<T>>,
}

impl<T: Scalar> Subspace<T> {
    /// Rejects empty, wrongly sized or linearly dependent bases.
    pub fn new(space: TensorSpace, basis: Vec<Vec<T>>) -> Result<Self> {
        let dim = space.total_dim();
        if basis.is_empty() {
            return domain("a subspace needs at least one basis vector");
        }
        if basis.len() > dim {
            return domain(format!("{} basis vectors in a {dim}-dimensional space", basis.len()));
        }
        if let Some(i) = basis.iter().position(|v| v.len() != dim) {
            return domain(format!("basis vector {i} has length {}, expected {dim}", basis[i].len()));
        }
        let m = SparseMatrix::from_dense_columns(dim, &basis)?;
        let rank = T::rank(&m, TolPolicy::Default, 0.0)?;
        if !rank.full_column_rank {
            return domain(format!("basis vectors are linearly dependent (rank {} of {})", rank.rank, basis.len()));
        }
        Ok(Self { space, basis })
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn mode(&self) -> Mode {
        T::MODE
    }

    /// New basis `y_j = Σ_i mix[j][i] x_i`; the span is unchanged when `mix`
    /// is invertible.
    pub fn recombine(&self, mix: &[Vec<T>]) -> Result<Self> {
        if mix.len() != self.dim() || mix.iter().any(|row| row.len() != self.dim()) {
            return domain("mixing matrix must be d_S x d_S");
        }
        let n = self.space.total_dim();
        let basis = mix
            .iter()
            .map(|row| {
                (0..n)
                    .map(|p| row.iter().zip(&self.basis).fold(T::zero(), |acc, (c, x)| acc + c.clone() * x[p].clone()))
                    .collect()
            })
            .collect();
        Self::new(self.space.clone(), basis)
    }
}

impl Subspace<GaussianRational> {
    /// Float copy with every basis vector normalized.
    pub fn to_float(&self) -> Subspace<C64> {
        let basis = self
            .basis
            .iter()
            .map(|v| {
                let f: Vec<C64> = v.iter().map(|x| x.to_c64()).collect();
                normalized(f)
            })
            .collect();
        Subspace { space: self.space.clone(), basis }
    }
}

pub(crate) fn normalized(mut v: Vec<C64>) -> Vec<C64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|z| *z /= n);
    }
    v
}
