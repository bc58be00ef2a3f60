use nalgebra::DMatrix;
use num_complex::Complex64;

use super::basis::ModeBasis;
use crate::error::{Error, Result};

pub type Amplitude = Complex64;

pub(crate) const ZERO: Amplitude = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Amplitude = Complex64::new(1.0, 0.0);

/// State vector over a labeled basis.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    basis: ModeBasis,
    amps: Vec<Amplitude>,
}

impl PureState {
    pub fn new(basis: ModeBasis, amps: Vec<Amplitude>) -> Result<Self> {
        if amps.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                got: amps.len(),
            });
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("state amplitudes"));
        }
        Ok(Self { basis, amps })
    }

    pub fn basis_state(basis: &ModeBasis, label: &str) -> Result<Self> {
        let i = basis.index_of(label)?;
        let mut amps = vec![ZERO; basis.dim()];
        amps[i] = ONE;
        Ok(Self {
            basis: basis.clone(),
            amps,
        })
    }

    /// Sum of `amplitude · |label⟩` terms; repeated labels accumulate.
    pub fn from_terms(basis: &ModeBasis, terms: &[(&str, Amplitude)]) -> Result<Self> {
        let mut amps = vec![ZERO; basis.dim()];
        for (label, a) in terms {
            amps[basis.index_of(label)?] += *a;
        }
        Self::new(basis.clone(), amps)
    }

    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn amplitude(&self, label: &str) -> Result<Amplitude> {
        Ok(self.amps[self.basis.index_of(label)?])
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(mut self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        for a in &mut self.amps {
            *a /= n;
        }
        Ok(self)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Amplitude> {
        self.same_basis(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scaled(&self, c: Amplitude) -> Self {
        Self {
            basis: self.basis.clone(),
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    /// `Σ c_k |ψ_k⟩` over states sharing one basis.
    pub fn superpose(terms: &[(Amplitude, &PureState)]) -> Result<Self> {
        let (_, first) = terms.first().ok_or(Error::EmptyBasis)?;
        let mut amps = vec![ZERO; first.dim()];
        for (c, s) in terms {
            first.same_basis(s)?;
            for (acc, a) in amps.iter_mut().zip(&s.amps) {
                *acc += c * a;
            }
        }
        Self::new(first.basis.clone(), amps)
    }

    /// Largest absolute amplitude difference; bases must agree.
    pub fn max_abs_diff(&self, other: &PureState) -> Result<f64> {
        self.same_basis(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Born-rule weight of every basis label.
    pub fn populations(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Applies `map` (out × in) to tensor factor `factor`, whose basis becomes `out_basis`.
    ///
    /// The map need not be square; the polarization-to-path isometry changes
    /// the factor dimension.
    pub fn apply_local(
        &self,
        factor: usize,
        map: &DMatrix<Amplitude>,
        out_basis: &ModeBasis,
    ) -> Result<Self> {
        let dims: Vec<usize> = if self.basis.is_product() {
            self.basis.factors().iter().map(ModeBasis::dim).collect()
        } else {
            vec![self.dim()]
        };
        if factor >= dims.len() {
            return Err(Error::SubsystemIndex {
                index: factor,
                count: dims.len(),
            });
        }
        let d_in = dims[factor];
        if map.ncols() != d_in {
            return Err(Error::DimensionMismatch {
                expected: d_in,
                got: map.ncols(),
            });
        }
        let d_out = map.nrows();
        if out_basis.dim() != d_out {
            return Err(Error::DimensionMismatch {
                expected: d_out,
                got: out_basis.dim(),
            });
        }
        let pre: usize = dims[..factor].iter().product();
        let post: usize = dims[factor + 1..].iter().product();
        let mut out = vec![ZERO; pre * d_out * post];
        for p in 0..pre {
            for i in 0..d_in {
                for q in 0..post {
                    let a = self.amps[(p * d_in + i) * post + q];
                    if a == ZERO {
                        continue;
                    }
                    for j in 0..d_out {
                        out[(p * d_out + j) * post + q] += map[(j, i)] * a;
                    }
                }
            }
        }
        let basis = self.basis.replace_factor(factor, out_basis)?;
        Self::new(basis, out)
    }

    pub(crate) fn same_basis(&self, other: &PureState) -> Result<()> {
        if self.basis == other.basis {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }
}

/// `a ⊗ b` over the ordered product basis.
pub fn tensor(a: &PureState, b: &PureState) -> PureState {
    let basis = ModeBasis::product(a.basis(), b.basis()).expect("product of valid bases");
    let amps = a
        .amps
        .iter()
        .flat_map(|x| b.amps.iter().map(move |y| x * y))
        .collect();
    PureState { basis, amps }
}

/// `a ⊗ b ⊗ …` for one or more states.
pub fn tensor_all(parts: &[PureState]) -> Result<PureState> {
    let (first, rest) = parts.split_first().ok_or(Error::EmptyBasis)?;
    Ok(rest.iter().fold(first.clone(), |acc, s| tensor(&acc, s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Amplitude {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn tensor_of_basis_kets() {
        let a = PureState::basis_state(&ModeBasis::paths(0), "1").unwrap();
        let b = PureState::basis_state(&ModeBasis::paths(1), "1'").unwrap();
        let ab = tensor(&a, &b);
        assert_eq!(ab.amplitude("1⊗1'").unwrap(), ONE);
        assert!((ab.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tensor_is_linear() {
        let p = ModeBasis::paths(0);
        let a =
            PureState::from_terms(&p, &[("1", c(FRAC_1_SQRT_2)), ("3", c(FRAC_1_SQRT_2))]).unwrap();
        let b = PureState::basis_state(&ModeBasis::paths(1), "2'").unwrap();
        let ab = tensor(&a, &b);
        assert!((ab.amplitude("1⊗2'").unwrap() - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((ab.amplitude("3⊗2'").unwrap() - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert_eq!(ab.populations().iter().filter(|p| **p > 0.0).count(), 2);
    }

    #[test]
    fn zero_vector_refuses_to_normalize() {
        let s = PureState::new(ModeBasis::paths(0), vec![ZERO; 4]).unwrap();
        assert_eq!(s.normalize().unwrap_err(), Error::ZeroNorm);
    }

    #[test]
    fn non_finite_amplitudes_rejected() {
        let amps = vec![Complex64::new(f64::NAN, 0.0), ZERO, ZERO, ZERO];
        assert!(matches!(
            PureState::new(ModeBasis::paths(0), amps),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn local_map_changes_factor_basis() {
        let pol = ModeBasis::polarization(0);
        let pol_b = ModeBasis::polarization(1);
        let v = PureState::basis_state(&pol, "V").unwrap();
        let h = PureState::basis_state(&pol_b, "H'").unwrap();
        let vh = tensor(&v, &h);
        // V -> 1, H -> 2 embedding on photon A only.
        let mut m = DMatrix::from_element(4, 2, ZERO);
        m[(0, 0)] = ONE;
        m[(1, 1)] = ONE;
        let out = vh.apply_local(0, &m, &ModeBasis::paths(0)).unwrap();
        assert_eq!(out.dim(), 8);
        assert_eq!(out.amplitude("1⊗H'").unwrap(), ONE);
    }
}
