use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub eigenvalue: f64,
    pub eigenvector: DVector<f64>,
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Eigenpairs of a symmetric matrix, eigenvalues descending.
pub fn symmetric_eigen(a: &DMatrix<f64>) -> Vec<EigenPair> {
    let eig = SymmetricEigen::new(symmetrize(a));
    let mut pairs: Vec<EigenPair> = eig
        .eigenvalues
        .iter()
        .zip(eig.eigenvectors.column_iter())
        .map(|(l, v)| EigenPair {
            eigenvalue: *l,
            eigenvector: v.into_owned(),
        })
        .collect();
    pairs.sort_by(|a, b| b.eigenvalue.total_cmp(&a.eigenvalue));
    pairs
}

/// Solves `A v = λ B v` for symmetric `A` and symmetric positive-definite `B`.
///
/// Reduces to a standard symmetric problem through the Cholesky factor
/// `B = L Lᵀ`. Eigenvalues are returned descending and eigenvectors are
/// scaled so that `vᵀ B v = 1`.
pub fn generalized_eigen(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<Vec<EigenPair>> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(Error::InvalidParameters(format!(
            "pencil shapes {:?} and {:?} differ",
            a.shape(),
            b.shape()
        )));
    }
    let chol = symmetrize(b).cholesky().ok_or(Error::NotPositiveDefinite)?;
    let l = chol.l();
    let linv_a = l
        .solve_lower_triangular(&symmetrize(a))
        .ok_or(Error::NotPositiveDefinite)?;
    let c = l
        .solve_lower_triangular(&linv_a.transpose())
        .ok_or(Error::NotPositiveDefinite)?;
    let lt = l.transpose();
    symmetric_eigen(&c)
        .into_iter()
        .map(|p| {
            let v = lt
                .solve_upper_triangular(&p.eigenvector)
                .ok_or(Error::NotPositiveDefinite)?;
            Ok(EigenPair {
                eigenvalue: p.eigenvalue,
                eigenvector: v,
            })
        })
        .collect()
}
