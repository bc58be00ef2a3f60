use nalgebra::DMatrix;

use super::basis::ModeBasis;
use super::state::{Amplitude, PureState, ZERO};
use super::{ANALYTIC_TOL, EIGEN_TOL};
use crate::error::{Error, Result};

/// Hermitian, unit-trace, positive semidefinite operator over a labeled basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    basis: ModeBasis,
    matrix: DMatrix<Amplitude>,
}

impl DensityMatrix {
    /// Validates Hermiticity and trace to 1e-12 and eigenvalues to −1e-10.
    pub fn new(basis: ModeBasis, matrix: DMatrix<Amplitude>) -> Result<Self> {
        let d = basis.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: matrix.nrows(),
            });
        }
        if matrix
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::NonFinite("density matrix"));
        }
        let herm = hermiticity_defect(&matrix);
        if herm > ANALYTIC_TOL {
            return Err(Error::InvalidDensity("Hermiticity"));
        }
        let tr: Amplitude = matrix.trace();
        if (tr.re - 1.0).abs() > ANALYTIC_TOL || tr.im.abs() > ANALYTIC_TOL {
            return Err(Error::InvalidDensity("unit trace"));
        }
        let rho = Self { basis, matrix };
        if rho.min_eigenvalue() < -EIGEN_TOL {
            return Err(Error::InvalidDensity("positivity"));
        }
        Ok(rho)
    }

    pub fn from_pure(s: &PureState) -> Self {
        let v = nalgebra::DVector::from_column_slice(s.amplitudes());
        Self {
            basis: s.basis().clone(),
            matrix: &v * v.adjoint(),
        }
    }

    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Amplitude> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        // tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
        self.matrix.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|a| a.re).collect()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0)
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, s: &PureState) -> Result<f64> {
        if s.basis() != &self.basis {
            return Err(Error::BasisMismatch);
        }
        let v = nalgebra::DVector::from_column_slice(s.amplitudes());
        Ok((v.adjoint() * &self.matrix * &v)[(0, 0)].re)
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        Ok((&self.matrix - &other.matrix)
            .iter()
            .map(|a| a.norm())
            .fold(0.0, f64::max))
    }

    /// Matrix elements `⟨b_i|ρ|b_j⟩` in the span of the given orthonormal vectors.
    pub fn compress(&self, vectors: &[&PureState]) -> Result<DMatrix<Amplitude>> {
        let k = vectors.len();
        let mut cols = Vec::with_capacity(k);
        for v in vectors {
            if v.basis() != &self.basis {
                return Err(Error::BasisMismatch);
            }
            cols.push(nalgebra::DVector::from_column_slice(v.amplitudes()));
        }
        let mut out = DMatrix::from_element(k, k, ZERO);
        for i in 0..k {
            let left = cols[i].adjoint() * &self.matrix;
            for j in 0..k {
                out[(i, j)] = (&left * &cols[j])[(0, 0)];
            }
        }
        Ok(out)
    }

    /// Reduced state of tensor factor `keep`.
    pub fn partial_trace(&self, keep: usize) -> Result<DensityMatrix> {
        if !self.basis.is_product() {
            return Err(Error::NotProductBasis);
        }
        let factors = self.basis.factors();
        if keep >= factors.len() {
            return Err(Error::SubsystemIndex {
                index: keep,
                count: factors.len(),
            });
        }
        let dims: Vec<usize> = factors.iter().map(ModeBasis::dim).collect();
        let d = dims[keep];
        let pre: usize = dims[..keep].iter().product();
        let post: usize = dims[keep + 1..].iter().product();
        let mut out = DMatrix::from_element(d, d, ZERO);
        for a in 0..d {
            for b in 0..d {
                let mut acc = ZERO;
                for p in 0..pre {
                    for q in 0..post {
                        let i = (p * d + a) * post + q;
                        let j = (p * d + b) * post + q;
                        acc += self.matrix[(i, j)];
                    }
                }
                out[(a, b)] = acc;
            }
        }
        DensityMatrix::new(factors[keep].clone(), out)
    }
}

/// Convex combination `Σ w_k |ψ_k⟩⟨ψ_k|`.
pub fn mix(states: &[(PureState, f64)]) -> Result<DensityMatrix> {
    let (first, _) = states.first().ok_or(Error::WeightSum(0.0))?;
    let total: f64 = states.iter().map(|(_, w)| *w).sum();
    if states.iter().any(|(_, w)| *w < 0.0 || !w.is_finite()) || (total - 1.0).abs() > ANALYTIC_TOL
    {
        return Err(Error::WeightSum(total));
    }
    let d = first.dim();
    let mut m = DMatrix::from_element(d, d, ZERO);
    for (s, w) in states {
        first.same_basis(s)?;
        let v = nalgebra::DVector::from_column_slice(s.amplitudes());
        m += (&v * v.adjoint()) * Amplitude::new(*w, 0.0);
    }
    DensityMatrix::new(first.basis().clone(), m)
}

fn hermiticity_defect(m: &DMatrix<Amplitude>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::state::{tensor, ONE};
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn single_state_mix_is_rank_one() {
        let p = ModeBasis::paths(0);
        let s = PureState::from_terms(
            &p,
            &[
                ("1", Complex64::new(FRAC_1_SQRT_2, 0.0)),
                ("4", Complex64::new(0.0, FRAC_1_SQRT_2)),
            ],
        )
        .unwrap();
        let rho = mix(&[(s.clone(), 1.0)]).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        assert!((rho.expectation(&s).unwrap() - 1.0).abs() < 1e-12);
        let ev = rho.eigenvalues();
        assert!((ev[0] - 1.0).abs() < 1e-12 && ev[1].abs() < 1e-12);
    }

    #[test]
    fn weight_violations_rejected() {
        let s = PureState::basis_state(&ModeBasis::paths(0), "1").unwrap();
        assert!(matches!(
            mix(&[(s.clone(), 0.7), (s.clone(), 0.2)]),
            Err(Error::WeightSum(_))
        ));
        assert!(matches!(
            mix(&[(s.clone(), 1.5), (s, -0.5)]),
            Err(Error::WeightSum(_))
        ));
    }

    #[test]
    fn invalid_matrices_rejected() {
        let b = ModeBasis::polarization(0);
        let mut m = DMatrix::from_element(2, 2, ZERO);
        m[(0, 0)] = ONE;
        m[(0, 1)] = ONE;
        assert_eq!(
            DensityMatrix::new(b.clone(), m).unwrap_err(),
            Error::InvalidDensity("Hermiticity")
        );
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.5, 0.0),
            Complex64::new(-0.5, 0.0),
        ]));
        assert_eq!(
            DensityMatrix::new(b, m).unwrap_err(),
            Error::InvalidDensity("positivity")
        );
    }

    #[test]
    fn partial_trace_of_product_recovers_factor() {
        let a = PureState::from_terms(
            &ModeBasis::paths(0),
            &[
                ("2", Complex64::new(0.6, 0.0)),
                ("3", Complex64::new(0.0, 0.8)),
            ],
        )
        .unwrap();
        let b = PureState::basis_state(&ModeBasis::paths(1), "4'").unwrap();
        let rho = DensityMatrix::from_pure(&tensor(&a, &b));
        let ra = rho.partial_trace(0).unwrap();
        let expect = DensityMatrix::from_pure(&a);
        assert!(ra.max_abs_diff(&expect).unwrap() < 1e-12);
        let rb = rho.partial_trace(1).unwrap();
        assert!(rb.max_abs_diff(&DensityMatrix::from_pure(&b)).unwrap() < 1e-12);
    }

    #[test]
    fn partial_trace_needs_product_basis() {
        let s = PureState::basis_state(&ModeBasis::paths(0), "1").unwrap();
        assert_eq!(
            DensityMatrix::from_pure(&s).partial_trace(0).unwrap_err(),
            Error::NotProductBasis
        );
    }
}
