use nalgebra::{DMatrix, SymmetricEigen};

use super::{certify_bipartite, Certificate, CertifyOptions, RangeExtraction, Subspace, Target};
use crate::error::{domain, Result};
use crate::linalg::{independent_columns, Mode, Scalar, C64};
use crate::tensor::TensorSpace;

/// Default eigenvalue cutoff, relative to the largest eigenvalue.
pub const RANGE_CUTOFF: f64 = 1e-10;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-10;

/// A bipartite density matrix, stored as rows.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedState<T> {
    space: TensorSpace,
    matrix: Vec<Vec<T>>,
}

impl<T: Scalar> MixedState<T> {
    pub fn new(space: TensorSpace, matrix: Vec<Vec<T>>) -> Result<Self> {
        if space.parties() != 2 {
            return domain("a mixed state needs a bipartite space");
        }
        let n = space.total_dim();
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return domain(format!("density matrix must be {n}x{n}"));
        }
        let exact = T::MODE == Mode::Rational;
        for (i, row) in matrix.iter().enumerate() {
            for (j, x) in row.iter().enumerate().skip(i) {
                let diff = x.clone() - matrix[j][i].conj();
                if (exact && !diff.is_zero()) || diff.magnitude() >= HERMITIAN_TOL {
                    return domain(format!("matrix is not Hermitian at ({i}, {j})"));
                }
            }
        }
        let trace = (0..n).fold(T::zero(), |acc, i| acc + matrix[i][i].clone());
        let off = trace - T::one();
        if (exact && !off.is_zero()) || off.magnitude() > TRACE_TOL {
            return domain("density matrix must have unit trace");
        }
        let state = Self { space, matrix };
        let lowest = state.eigenvalues().first().copied().unwrap_or(0.0);
        if lowest < -PSD_TOL {
            return domain(format!("matrix is not positive semidefinite (eigenvalue {lowest:e})"));
        }
        Ok(state)
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn matrix(&self) -> &[Vec<T>] {
        &self.matrix
    }

    fn to_dmatrix(&self) -> DMatrix<C64> {
        let n = self.matrix.len();
        DMatrix::from_fn(n, n, |i, j| self.matrix[i][j].to_c64())
    }

    /// Eigenvalues in nondecreasing order (floating point in both modes).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.to_dmatrix()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Basis of the range. Float mode keeps the eigenvectors whose eigenvalue
    /// exceeds `rel_cutoff * λ_max`; rational mode returns an exact column
    /// basis and reports the float eigenvalue estimates it treats as zero.
    pub fn range_basis(&self, rel_cutoff: f64) -> Result<(Vec<Vec<T>>, RangeExtraction)> {
        let eig = SymmetricEigen::new(self.to_dmatrix());
        let top = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if top <= 0.0 {
            return domain("density matrix is numerically zero");
        }
        let cutoff = rel_cutoff * top;
        let discarded: Vec<f64> = eig.eigenvalues.iter().copied().filter(|&l| l <= cutoff).collect();
        let basis: Vec<Vec<T>> = match T::MODE {
            Mode::Float => eig
                .eigenvalues
                .iter()
                .enumerate()
                .filter(|(_, &l)| l > cutoff)
                .map(|(i, _)| {
                    eig.eigenvectors
                        .column(i)
                        .iter()
                        .map(|&z| T::from_c64(z).expect("float mode accepts doubles"))
                        .collect()
                })
                .collect(),
            Mode::Rational => {
                let n = self.matrix.len();
                let cols: Vec<Vec<T>> = (0..n).map(|j| (0..n).map(|i| self.matrix[i][j].clone()).collect()).collect();
                independent_columns(&cols, 0.0).into_iter().map(|j| cols[j].clone()).collect()
            }
        };
        let info = RangeExtraction { rank: basis.len(), relative_cutoff: rel_cutoff, discarded_eigenvalues: discarded };
        Ok((basis, info))
    }

    /// `ρ^{T_B}`, transposing the second factor.
    pub fn partial_transpose(&self) -> Vec<Vec<T>> {
        let (d_a, d_b) = (self.space.dims()[0], self.space.dims()[1]);
        let n = d_a * d_b;
        let mut out = vec![vec![T::zero(); n]; n];
        for a in 0..d_a {
            for b in 0..d_b {
                for a2 in 0..d_a {
                    for b2 in 0..d_b {
                        out[a * d_b + b][a2 * d_b + b2] = self.matrix[a * d_b + b2][a2 * d_b + b].clone();
                    }
                }
            }
        }
        out
    }

    /// Smallest eigenvalue of the partial transpose.
    pub fn min_partial_transpose_eigenvalue(&self) -> f64 {
        let pt = self.partial_transpose();
        let n = pt.len();
        let m = DMatrix::from_fn(n, n, |i, j| pt[i][j].to_c64());
        SymmetricEigen::new(m).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_ppt(&self, tol: f64) -> bool {
        self.min_partial_transpose_eigenvalue() >= -tol
    }
}

/// Certifies `sn(ρ) >= r + 1` by running the level-`k` r-entanglement test on
/// the range of `ρ`.
pub fn schmidt_number_bound<T: Scalar>(
    rho: &MixedState<T>,
    r: usize,
    k: usize,
    rel_cutoff: f64,
    opts: &CertifyOptions,
) -> Result<Certificate> {
    let (basis, info) = rho.range_basis(rel_cutoff)?;
    let sub = Subspace::new(rho.space.clone(), basis)?;
    let mut cert = certify_bipartite(&sub, r, k, opts)?;
    cert.target = Target::SchmidtNumberAtLeast { bound: r + 1 };
    cert.range = Some(info);
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::Verdict;
    use crate::linalg::{gaussian, GaussianRational};

    fn maximally_mixed() -> MixedState<GaussianRational> {
        let n = 4;
        let m = (0..n)
            .map(|i| (0..n).map(|j| if i == j { GaussianRational::from_ratio(1, 4) } else { gaussian(0, 0) }).collect())
            .collect();
        MixedState::new(TensorSpace::bipartite(2, 2).unwrap(), m).unwrap()
    }

    #[test]
    fn rejects_invalid_matrices() {
        let s = TensorSpace::bipartite(2, 2).unwrap();
        let mut m = maximally_mixed().matrix().to_vec();
        m[0][1] = gaussian(1, 0);
        assert!(MixedState::new(s.clone(), m).is_err());
        let mut m = maximally_mixed().matrix().to_vec();
        m[0][0] = gaussian(1, 0);
        assert!(MixedState::new(s.clone(), m).is_err());
        let mut m = maximally_mixed().matrix().to_vec();
        m[0][0] = GaussianRational::from_ratio(-1, 4);
        m[1][1] = GaussianRational::from_ratio(3, 4);
        assert!(MixedState::new(s, m).is_err());
    }

    #[test]
    fn maximally_mixed_is_not_certified() {
        let rho = maximally_mixed();
        assert!(rho.is_ppt(1e-12));
        let (basis, info) = rho.range_basis(RANGE_CUTOFF).unwrap();
        assert_eq!(basis.len(), 4);
        assert!(info.discarded_eigenvalues.is_empty());
        for k in 1..=2 {
            let cert = schmidt_number_bound(&rho, 1, k, RANGE_CUTOFF, &CertifyOptions::default()).unwrap();
            assert_eq!(cert.verdict, Verdict::NotCertifiedAtLevel { level: k });
        }
    }

    #[test]
    fn bell_state_has_negative_partial_transpose() {
        let h = C64::new(0.5, 0.0);
        let z = C64::new(0.0, 0.0);
        let m = vec![vec![h, z, z, h], vec![z; 4], vec![z; 4], vec![h, z, z, h]];
        let rho = MixedState::new(TensorSpace::bipartite(2, 2).unwrap(), m).unwrap();
        assert!((rho.min_partial_transpose_eigenvalue() + 0.5).abs() < 1e-12);
        let (basis, info) = rho.range_basis(RANGE_CUTOFF).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(info.discarded_eigenvalues.len(), 3);
        let cert = schmidt_number_bound(&rho, 1, 1, RANGE_CUTOFF, &CertifyOptions::default()).unwrap();
        assert!(cert.is_certified());
        assert_eq!(cert.target, Target::SchmidtNumberAtLeast { bound: 2 });
    }
}
