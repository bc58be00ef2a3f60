//! Optical elements of the conceptual toolbox as unitaries on named modes,
//! and circuits built from them.
//!
//! Beam-splitter convention: the internal 2×2 core is the symmetric splitter
//! `S = (1/√2)[[1, i], [i, 1]]`. Each balanced splitter wraps it in fixed
//! port phases `diag(1, −i)` on both sides, which yields
//! `(1/√2)[[1, 1], [1, −1]]` on `(first, second)` ports. With the phase
//! shifters on paths 3 and 4 this reproduces the intermediate and final
//! toolbox states amplitude for amplitude, global phase included.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::{self, Amplitude, ModeBasis, PureState, ANALYTIC_TOL};

const ZERO: Amplitude = Complex64::new(0.0, 0.0);
const ONE: Amplitude = Complex64::new(1.0, 0.0);

/// One optical element: a unitary on an ordered list of modes.
///
/// Basis-changing elements (input modes ≠ output modes) are isometries
/// whose columns follow `input_modes` and rows follow `output_modes`.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementUnitary {
    name: String,
    input_modes: Vec<String>,
    output_modes: Vec<String>,
    matrix: DMatrix<Amplitude>,
}

impl ElementUnitary {
    pub fn new(
        name: impl Into<String>,
        modes: &[&str],
        matrix: DMatrix<Amplitude>,
    ) -> Result<Self> {
        let modes: Vec<String> = modes.iter().map(|m| m.to_string()).collect();
        Self::isometry(name, modes.clone(), modes, matrix)
    }

    pub fn isometry(
        name: impl Into<String>,
        input_modes: Vec<String>,
        output_modes: Vec<String>,
        matrix: DMatrix<Amplitude>,
    ) -> Result<Self> {
        let name = name.into();
        if matrix.ncols() != input_modes.len() || matrix.nrows() != output_modes.len() {
            return Err(Error::DimensionMismatch {
                expected: input_modes.len(),
                got: matrix.ncols(),
            });
        }
        for set in [&input_modes, &output_modes] {
            for (i, m) in set.iter().enumerate() {
                if set[..i].contains(m) {
                    return Err(Error::IdenticalModes(name));
                }
            }
        }
        if matrix
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::NonFinite("element matrix"));
        }
        let e = Self {
            name,
            input_modes,
            output_modes,
            matrix,
        };
        let defect = e.unitarity_defect();
        if defect > ANALYTIC_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(e)
    }

    pub fn identity(modes: &[&str]) -> Result<Self> {
        Self::new("I", modes, DMatrix::identity(modes.len(), modes.len()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn input_modes(&self) -> &[String] {
        &self.input_modes
    }

    pub fn output_modes(&self) -> &[String] {
        &self.output_modes
    }

    pub fn matrix(&self) -> &DMatrix<Amplitude> {
        &self.matrix
    }

    pub fn is_basis_changing(&self) -> bool {
        self.input_modes != self.output_modes
    }

    /// `max |(U†U − I)_ij|`.
    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.matrix)
    }

    /// Inverse element (`U†`) with input and output modes exchanged.
    pub fn adjoint(&self) -> Self {
        Self {
            name: format!("{}†", self.name),
            input_modes: self.output_modes.clone(),
            output_modes: self.input_modes.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Same matrix acting on relabeled modes.
    pub fn relabeled(&self, map: impl Fn(&str) -> String) -> Self {
        Self {
            name: self.name.clone(),
            input_modes: self.input_modes.iter().map(|m| map(m)).collect(),
            output_modes: self.output_modes.iter().map(|m| map(m)).collect(),
            matrix: self.matrix.clone(),
        }
    }

    /// Matrix of this element on a full basis (identity outside its modes).
    pub fn embedded(&self, basis: &ModeBasis) -> Result<DMatrix<Amplitude>> {
        if self.is_basis_changing() {
            let out = ModeBasis::new(self.output_modes.iter().cloned())?;
            let mut m = DMatrix::from_element(out.dim(), basis.dim(), ZERO);
            for (c, label) in self.input_modes.iter().enumerate() {
                let col = basis.index_of(label)?;
                for r in 0..out.dim() {
                    m[(r, col)] = self.matrix[(r, c)];
                }
            }
            if self.input_modes.len() != basis.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.input_modes.len(),
                    got: basis.dim(),
                });
            }
            return Ok(m);
        }
        let idx: Vec<usize> = self
            .input_modes
            .iter()
            .map(|l| basis.index_of(l))
            .collect::<Result<_>>()?;
        let mut m = DMatrix::identity(basis.dim(), basis.dim());
        for (r, &ir) in idx.iter().enumerate() {
            for (c, &ic) in idx.iter().enumerate() {
                m[(ir, ic)] = self.matrix[(r, c)];
            }
        }
        Ok(m)
    }
}

pub(crate) fn unitarity_defect(m: &DMatrix<Amplitude>) -> f64 {
    let g = m.adjoint() * m;
    let id = DMatrix::<Amplitude>::identity(g.nrows(), g.ncols());
    (g - id).iter().map(|a| a.norm()).fold(0.0, f64::max)
}

fn mat2(a: Amplitude, b: Amplitude, c: Amplitude, d: Amplitude) -> DMatrix<Amplitude> {
    DMatrix::from_row_slice(2, 2, &[a, b, c, d])
}

fn re(x: f64) -> Amplitude {
    Complex64::new(x, 0.0)
}

/// The symmetric 50:50 core `(1/√2)[[1, i], [i, 1]]`.
pub fn symmetric_core() -> DMatrix<Amplitude> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    mat2(re(s), Complex64::new(0.0, s), Complex64::new(0.0, s), re(s))
}

/// Port phases wrapped around [`symmetric_core`] by [`balanced_bs`].
pub fn port_correction() -> DMatrix<Amplitude> {
    mat2(ONE, ZERO, ZERO, Complex64::new(0.0, -1.0))
}

/// Polarizing splitter plus the 45° plate that equalizes polarizations:
/// `|V⟩ → |1⟩`, `|H⟩ → |2⟩`, embedded into the four-path space.
pub fn polarizing_bs() -> ElementUnitary {
    polarizing_bs_between(&ModeBasis::polarization(0), &ModeBasis::paths(0))
        .expect("canonical rails")
}

/// [`polarizing_bs`] for arbitrary polarization rails `(V, H)` and four path labels.
pub fn polarizing_bs_between(pol: &ModeBasis, paths: &ModeBasis) -> Result<ElementUnitary> {
    let labels = pol.labels();
    if labels.len() != 2 || !labels[0].starts_with('V') {
        return Err(Error::MissingPolarization(
            labels.first().cloned().unwrap_or_else(|| "V".into()),
        ));
    }
    if !labels[1].starts_with('H') {
        return Err(Error::MissingPolarization(labels[1].clone()));
    }
    if paths.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: paths.dim(),
        });
    }
    let mut m = DMatrix::from_element(4, 2, ZERO);
    m[(0, 0)] = ONE;
    m[(1, 1)] = ONE;
    ElementUnitary::isometry("PBS+HWP45", labels.to_vec(), paths.labels().to_vec(), m)
}

/// Balanced splitter on `(first, second)`: `|first⟩ → (|first⟩ + |second⟩)/√2`,
/// `|second⟩ → (|first⟩ − |second⟩)/√2`.
pub fn balanced_bs(first: &str, second: &str) -> Result<ElementUnitary> {
    if first == second {
        return Err(Error::IdenticalModes("BS".into()));
    }
    let p = port_correction();
    ElementUnitary::new("BS", &[first, second], &p * symmetric_core() * &p)
}

/// `e^{iφ}` on one mode.
pub fn phase_shifter(mode: &str, phi: f64) -> Result<ElementUnitary> {
    if !phi.is_finite() {
        return Err(Error::NonFinite("phase"));
    }
    ElementUnitary::new(
        "PS",
        &[mode],
        DMatrix::from_element(1, 1, Complex64::from_polar(1.0, phi)),
    )
}

/// Final splitter with continuous setting β.
///
/// The matrix is the half-wave-plate rotation `[[cos 2β, sin 2β], [sin 2β, −cos 2β]]`
/// followed by an output-port phase `−e^{8iβ}` on `second`. That phase never
/// changes detection statistics; it makes β = 0 the identity and β = π/8 the
/// balanced splitter exactly.
pub fn measurement_splitter(first: &str, second: &str, beta: f64) -> Result<ElementUnitary> {
    if first == second {
        return Err(Error::IdenticalModes("BS(β)".into()));
    }
    if !beta.is_finite() {
        return Err(Error::NonFinite("β"));
    }
    let (s, c) = (2.0 * beta).sin_cos();
    let out = -Complex64::from_polar(1.0, 8.0 * beta);
    ElementUnitary::new(
        "BS(β)",
        &[first, second],
        mat2(re(c), re(s), out * s, -out * c),
    )
}

/// Ordered element list with its input and (evolving) output basis.
#[derive(Clone, Debug)]
pub struct Circuit {
    input_basis: ModeBasis,
    output_basis: ModeBasis,
    elements: Vec<ElementUnitary>,
}

impl Circuit {
    pub fn new(input_basis: ModeBasis) -> Self {
        Self {
            output_basis: input_basis.clone(),
            input_basis,
            elements: Vec::new(),
        }
    }

    pub fn input_basis(&self) -> &ModeBasis {
        &self.input_basis
    }

    pub fn output_basis(&self) -> &ModeBasis {
        &self.output_basis
    }

    pub fn elements(&self) -> &[ElementUnitary] {
        &self.elements
    }

    /// Appends `e`, checking its modes against the current output basis.
    pub fn compose(mut self, e: ElementUnitary) -> Result<Self> {
        if e.is_basis_changing() {
            let labels = self.output_basis.labels();
            if labels.len() != e.input_modes().len()
                || !e
                    .input_modes()
                    .iter()
                    .all(|m| self.output_basis.contains(m))
            {
                let missing = e
                    .input_modes()
                    .iter()
                    .find(|m| !self.output_basis.contains(m))
                    .cloned()
                    .unwrap_or_else(|| e.name().to_string());
                return Err(Error::UnknownMode(missing));
            }
            self.output_basis = ModeBasis::new(e.output_modes().iter().cloned())?;
        } else if let Some(m) = e
            .input_modes()
            .iter()
            .find(|m| !self.output_basis.contains(m))
        {
            return Err(Error::UnknownMode(m.clone()));
        }
        self.elements.push(e);
        Ok(self)
    }

    pub fn then(self, e: Result<ElementUnitary>) -> Result<Self> {
        self.compose(e?)
    }

    /// Applies the elements one by one.
    pub fn propagate(&self, s: &PureState) -> Result<PureState> {
        if s.basis() != &self.input_basis {
            return Err(Error::BasisMismatch);
        }
        self.elements
            .iter()
            .try_fold(s.clone(), |acc, e| qcore::apply_unitary(e, &acc))
    }

    /// Product of the embedded element matrices (output dim × input dim).
    pub fn transfer_matrix(&self) -> Result<DMatrix<Amplitude>> {
        let mut basis = self.input_basis.clone();
        let mut total = DMatrix::identity(basis.dim(), basis.dim());
        for e in &self.elements {
            total = e.embedded(&basis)? * total;
            if e.is_basis_changing() {
                basis = ModeBasis::new(e.output_modes().iter().cloned())?;
            }
        }
        Ok(total)
    }

    /// Applies [`Self::transfer_matrix`] in one step.
    pub fn propagate_by_matrix(&self, s: &PureState) -> Result<PureState> {
        if s.basis() != &self.input_basis {
            return Err(Error::BasisMismatch);
        }
        let t = self.transfer_matrix()?;
        let v = nalgebra::DVector::from_column_slice(s.amplitudes());
        let out = t * v;
        PureState::new(self.output_basis.clone(), out.iter().copied().collect())
    }
}

/// Stages of the conceptual toolbox at which propagation can stop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToolboxStage {
    /// After the polarizing splitter and 45° plate.
    Split,
    /// After the first pair of splitters and the phase shifters.
    Phases,
    /// After the wave-arm recombination, before the final splitters.
    Recombined,
    /// With the final splitters at setting β.
    Full,
}

/// The conceptual toolbox for one photon. `primes` selects the photon's labels
/// (`1`, `1'`, `1''`, …).
pub fn toolbox_circuit(
    phi1: f64,
    phi2: f64,
    beta: f64,
    primes: usize,
    stage: ToolboxStage,
) -> Result<Circuit> {
    let paths = ModeBasis::paths(primes);
    let p: Vec<&str> = paths.labels().iter().map(String::as_str).collect();
    let mut c = Circuit::new(ModeBasis::polarization(primes)).compose(polarizing_bs_between(
        &ModeBasis::polarization(primes),
        &paths,
    )?)?;
    if stage == ToolboxStage::Split {
        return Ok(c);
    }
    c = c
        .then(balanced_bs(p[0], p[2]))?
        .then(balanced_bs(p[1], p[3]))?
        .then(phase_shifter(p[2], phi1))?
        .then(phase_shifter(p[3], phi2))?;
    if stage == ToolboxStage::Phases {
        return Ok(c);
    }
    c = c.then(balanced_bs(p[0], p[2]))?;
    if stage == ToolboxStage::Recombined {
        return Ok(c);
    }
    c.then(measurement_splitter(p[0], p[1], beta))?
        .then(measurement_splitter(p[2], p[3], beta))
}
