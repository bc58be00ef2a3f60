//! Dense complex linear algebra over small labeled Hilbert spaces.
//!
//! States carry their [`ModeBasis`]; every operation checks labels rather
//! than trusting positional indices.

mod basis;
mod density;
mod state;

use std::collections::HashSet;

pub use basis::{ModeBasis, PRODUCT_SEPARATOR};
pub use density::{mix, DensityMatrix};
pub use state::{tensor, tensor_all, Amplitude, PureState};

use crate::error::{Error, Result};
use crate::optics::ElementUnitary;

/// Tolerance for analytic identities (norms, traces, closed forms).
pub const ANALYTIC_TOL: f64 = 1e-12;
/// Tolerance for eigenvalue non-negativity after Hermitian diagonalization.
pub const EIGEN_TOL: f64 = 1e-10;

/// Outcome probabilities, one per projector group.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityTable {
    pub labels: Vec<String>,
    pub p: Vec<f64>,
}

impl ProbabilityTable {
    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.p[i])
    }
}

/// Anything with Born-rule populations over a labeled basis.
pub trait Measurable {
    fn basis(&self) -> &ModeBasis;
    fn populations(&self) -> Vec<f64>;
}

impl Measurable for PureState {
    fn basis(&self) -> &ModeBasis {
        PureState::basis(self)
    }
    fn populations(&self) -> Vec<f64> {
        PureState::populations(self)
    }
}

impl Measurable for DensityMatrix {
    fn basis(&self) -> &ModeBasis {
        DensityMatrix::basis(self)
    }
    fn populations(&self) -> Vec<f64> {
        DensityMatrix::populations(self)
    }
}

/// Probability of each group of basis labels; the groups must partition the basis.
pub fn measure_distribution<M, G, S>(state: &M, groups: &[G]) -> Result<ProbabilityTable>
where
    M: Measurable + ?Sized,
    G: AsRef<[S]>,
    S: AsRef<str>,
{
    let basis = state.basis();
    let pops = state.populations();
    let mut seen = HashSet::with_capacity(basis.dim());
    let mut labels = Vec::with_capacity(groups.len());
    let mut p = Vec::with_capacity(groups.len());
    for g in groups {
        let mut acc = 0.0;
        let mut names = Vec::new();
        for l in g.as_ref() {
            let l = l.as_ref();
            let i = basis.index_of(l)?;
            if !seen.insert(i) {
                return Err(Error::NotPartition(format!("`{l}` appears twice")));
            }
            acc += pops[i];
            names.push(l);
        }
        labels.push(names.join("+"));
        p.push(acc);
    }
    if seen.len() != basis.dim() {
        return Err(Error::NotPartition(format!(
            "{} of {} labels covered",
            seen.len(),
            basis.dim()
        )));
    }
    Ok(ProbabilityTable { labels, p })
}

/// One group per basis label.
pub fn measure_each(state: &(impl Measurable + ?Sized)) -> ProbabilityTable {
    let labels = state.basis().labels().to_vec();
    ProbabilityTable {
        p: state.populations(),
        labels,
    }
}

/// Applies `u` to the amplitudes of its modes, leaving the rest untouched.
///
/// Elements whose input and output modes differ (the polarizing splitter)
/// must consume the whole basis and produce a state over their output modes.
pub fn apply_unitary(u: &ElementUnitary, s: &PureState) -> Result<PureState> {
    if u.is_basis_changing() {
        let basis = s.basis();
        if basis.dim() != u.input_modes().len() {
            return Err(Error::DimensionMismatch {
                expected: u.input_modes().len(),
                got: basis.dim(),
            });
        }
        // reorder the state into the element's input order
        let mut v = Vec::with_capacity(basis.dim());
        for m in u.input_modes() {
            v.push(s.amplitude(m)?);
        }
        let out_basis = ModeBasis::new(u.output_modes().iter().cloned())?;
        let m = u.matrix();
        let amps = (0..m.nrows())
            .map(|r| (0..m.ncols()).map(|c| m[(r, c)] * v[c]).sum())
            .collect();
        return PureState::new(out_basis, amps);
    }
    let idx: Vec<usize> = u
        .input_modes()
        .iter()
        .map(|m| s.basis().index_of(m))
        .collect::<Result<_>>()?;
    let m = u.matrix();
    let old = s.amplitudes();
    let mut amps = old.to_vec();
    for (r, &ir) in idx.iter().enumerate() {
        amps[ir] = idx
            .iter()
            .enumerate()
            .map(|(c, &ic)| m[(r, c)] * old[ic])
            .sum();
    }
    PureState::new(s.basis().clone(), amps)
}
