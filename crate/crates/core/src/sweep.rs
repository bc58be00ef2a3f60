//! Parameter sweeps behind the command-line runner, their output tables and
//! the `verify` suite.
//!
//! Rows are computed in parallel and emitted in parameter order. Floats are
//! written with 17 significant digits so fixed-seed outputs diff cleanly.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI, TAU};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::entangle::{self, TwoPhotonSettings};
use crate::error::{Error, Result};
use crate::hardware::{self, GridPoint, EQUIVALENCE_TOL};
use crate::optics::{self, ToolboxStage};
use crate::qcore::ANALYTIC_TOL;
use crate::shots::{self, NoiseModel, Witness};
use crate::toolbox::{self, MeasurementSetting, ToolboxPhases};

/// Sweepable parameters. Angles are in radians here.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Param {
    Alpha,
    Phi1,
    Phi1Prime,
    Phi2,
    Phi2Prime,
    Beta,
    BetaPrime,
    Visibility,
    Dephase,
}

impl Param {
    pub const ALL: [Param; 9] = [
        Param::Alpha,
        Param::Phi1,
        Param::Phi1Prime,
        Param::Phi2,
        Param::Phi2Prime,
        Param::Beta,
        Param::BetaPrime,
        Param::Visibility,
        Param::Dephase,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::Alpha => "alpha",
            Param::Phi1 => "phi1",
            Param::Phi1Prime => "phi1_prime",
            Param::Phi2 => "phi2",
            Param::Phi2Prime => "phi2_prime",
            Param::Beta => "beta",
            Param::BetaPrime => "beta_prime",
            Param::Visibility => "visibility",
            Param::Dephase => "dephase",
        }
    }

    pub fn is_angle(self) -> bool {
        !matches!(self, Param::Visibility | Param::Dephase)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let alias = match s {
            "phi1p" => "phi1_prime",
            "phi2p" => "phi2_prime",
            "betap" => "beta_prime",
            other => other,
        };
        Param::ALL
            .into_iter()
            .find(|p| p.name() == alias)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown sweep parameter `{s}`")))
    }
}

/// Every parameter at one row; angles in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub alpha: f64,
    pub phi1: f64,
    pub phi1_prime: f64,
    pub phi2: f64,
    pub phi2_prime: f64,
    pub beta: f64,
    pub beta_prime: f64,
    pub visibility: f64,
    pub dephase: f64,
}

impl Default for Point {
    fn default() -> Self {
        Self {
            alpha: FRAC_PI_4,
            phi1: 0.0,
            phi1_prime: 0.0,
            phi2: 0.0,
            phi2_prime: 0.0,
            beta: FRAC_PI_8,
            beta_prime: FRAC_PI_8,
            visibility: 1.0,
            dephase: 0.0,
        }
    }
}

impl Point {
    pub fn get(&self, p: Param) -> f64 {
        match p {
            Param::Alpha => self.alpha,
            Param::Phi1 => self.phi1,
            Param::Phi1Prime => self.phi1_prime,
            Param::Phi2 => self.phi2,
            Param::Phi2Prime => self.phi2_prime,
            Param::Beta => self.beta,
            Param::BetaPrime => self.beta_prime,
            Param::Visibility => self.visibility,
            Param::Dephase => self.dephase,
        }
    }

    pub fn set(&mut self, p: Param, v: f64) {
        *match p {
            Param::Alpha => &mut self.alpha,
            Param::Phi1 => &mut self.phi1,
            Param::Phi1Prime => &mut self.phi1_prime,
            Param::Phi2 => &mut self.phi2,
            Param::Phi2Prime => &mut self.phi2_prime,
            Param::Beta => &mut self.beta,
            Param::BetaPrime => &mut self.beta_prime,
            Param::Visibility => &mut self.visibility,
            Param::Dephase => &mut self.dephase,
        } = v;
    }

    pub fn phases_a(&self) -> ToolboxPhases {
        ToolboxPhases {
            phi1: self.phi1,
            phi2: self.phi2,
        }
    }

    pub fn phases_b(&self) -> ToolboxPhases {
        ToolboxPhases {
            phi1: self.phi1_prime,
            phi2: self.phi2_prime,
        }
    }

    pub fn setting_a(&self) -> MeasurementSetting {
        MeasurementSetting { beta: self.beta }
    }

    pub fn setting_b(&self) -> MeasurementSetting {
        MeasurementSetting {
            beta: self.beta_prime,
        }
    }

    pub fn two_photon(&self) -> Result<TwoPhotonSettings> {
        TwoPhotonSettings::new(
            self.alpha,
            self.phases_a(),
            self.phases_b(),
            self.setting_a(),
            self.setting_b(),
        )
    }

    /// Noise model of this row; `mixed` forces full dephasing.
    pub fn noise(&self, mixed: bool) -> Result<NoiseModel> {
        NoiseModel::new(self.visibility, if mixed { 1.0 } else { self.dephase })
    }

    fn validate(&self) -> Result<()> {
        for p in Param::ALL {
            if !self.get(p).is_finite() {
                return Err(Error::InvalidSpec(format!("{p} is not finite")));
            }
        }
        self.noise(false)?;
        Ok(())
    }
}

/// Linear sweep of one parameter, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sweep {
    pub param: Param,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl Sweep {
    /// 25 points over a full turn for phases, 13 over `[0, π/2]` for α.
    pub fn default_for(param: Param) -> Self {
        let (from, to, steps) = match param {
            Param::Alpha => (0.0, FRAC_PI_2, 13),
            Param::Beta | Param::BetaPrime => (0.0, FRAC_PI_8, 2),
            Param::Visibility | Param::Dephase => (0.0, 1.0, 11),
            _ => (0.0, TAU, 25),
        };
        Self {
            param,
            from,
            to,
            steps,
        }
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        if self.steps < 2 {
            return Err(Error::InvalidSpec("a sweep needs at least 2 steps".into()));
        }
        if !self.from.is_finite() || !self.to.is_finite() {
            return Err(Error::InvalidSpec("sweep bounds must be finite".into()));
        }
        let last = (self.steps - 1) as f64;
        Ok((0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.to
                } else {
                    self.from + (self.to - self.from) * i as f64 / last
                }
            })
            .collect())
    }
}

/// A fixed base point plus an optional sweep.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct SweepSpec {
    pub base: Point,
    pub sweep: Option<Sweep>,
}

impl SweepSpec {
    pub fn points(&self) -> Result<Vec<Point>> {
        let pts = match self.sweep {
            None => vec![self.base],
            Some(s) => s
                .values()?
                .into_iter()
                .map(|v| {
                    let mut p = self.base;
                    p.set(s.param, v);
                    p
                })
                .collect(),
        };
        for p in &pts {
            p.validate()?;
        }
        Ok(pts)
    }
}

/// Sampling and mixing options shared by all commands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// 0 means analytic output only.
    pub shots: u64,
    pub seed: u64,
    /// Use the incoherent wave/particle mixture.
    pub mixed: bool,
}

/// One table cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
}

impl Cell {
    pub fn as_f64(&self) -> f64 {
        match self {
            Cell::Num(x) => *x,
            Cell::Int(k) => *k as f64,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(x) => write!(f, "{x:.16e}"),
            Cell::Int(k) => write!(f, "{k}"),
        }
    }
}

/// Output encodings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidSpec(format!("unknown format `{s}`"))),
        }
    }
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Named columns and rows of cells.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64()).collect())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for r in &self.rows {
            out.write_record(r.iter().map(|c| c.to_string()))?;
        }
        out.flush()
    }

    /// An array of row objects keyed by column name.
    pub fn to_json(&self) -> serde_json::Value {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .zip(r)
                    .map(|(k, c)| {
                        let v = match c {
                            Cell::Num(x) => serde_json::Value::from(*x),
                            Cell::Int(n) => serde_json::Value::from(*n),
                        };
                        (k.clone(), v)
                    })
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }

    pub fn write<W: Write>(&self, format: Format, mut w: W) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Json => {
                serde_json::to_writer_pretty(&mut w, &self.to_json())?;
                writeln!(w)
            }
        }
    }
}

fn nums(v: impl IntoIterator<Item = f64>) -> impl Iterator<Item = Cell> {
    v.into_iter().map(Cell::Num)
}

fn build_rows<F>(points: &[Point], row: F) -> Result<Vec<Vec<Cell>>>
where
    F: Fn(usize, &Point) -> Result<Vec<Cell>> + Sync,
{
    points
        .par_iter()
        .enumerate()
        .map(|(i, p)| row(i, p))
        .collect()
}

fn single_distribution(p: &Point, mixed: bool) -> Result<Vec<f64>> {
    let noise = p.noise(mixed)?;
    if noise == NoiseModel::IDEAL {
        return Ok(
            toolbox::detection_probabilities(p.alpha, p.phases_a(), p.setting_a())
                .p
                .to_vec(),
        );
    }
    let d = toolbox::detection_decomposition(p.alpha, p.phases_a(), p.setting_a());
    Ok(shots::apply_noise(&d, noise))
}

fn pair_distribution(p: &Point, mixed: bool) -> Result<Vec<f64>> {
    let s = p.two_photon()?;
    let noise = p.noise(mixed)?;
    if noise == NoiseModel::IDEAL {
        return Ok(entangle::coincidence_probabilities(&s).flat().to_vec());
    }
    Ok(shots::apply_noise(
        &entangle::coincidence_decomposition(&s),
        noise,
    ))
}

fn pair_columns(prefix: &str) -> Vec<String> {
    (1..=4)
        .flat_map(|a| (1..=4).map(move |b| format!("{prefix}_{a}{b}p")))
        .collect()
}

/// `alpha,phi1,phi2,beta,p1..p4` and, with shots, `c1..c4,e1..e4`.
pub fn single_sweep(points: &[Point], opts: RunOptions) -> Result<Table> {
    let mut columns: Vec<String> = ["alpha", "phi1", "phi2", "beta", "p1", "p2", "p3", "p4"]
        .map(String::from)
        .to_vec();
    if opts.shots > 0 {
        columns.extend((1..=4).map(|i| format!("c{i}")));
        columns.extend((1..=4).map(|i| format!("e{i}")));
    }
    let rows = build_rows(points, |i, p| {
        let dist = single_distribution(p, opts.mixed)?;
        let mut row: Vec<Cell> = nums([p.alpha, p.phi1, p.phi2, p.beta]).collect();
        row.extend(nums(dist.iter().copied()));
        if opts.shots > 0 {
            let c = shots::sample_counts_stream(&dist, opts.shots, opts.seed, i as u64)?;
            row.extend(c.counts.iter().map(|&k| Cell::Int(k)));
            row.extend(nums(shots::poisson_error(&c)));
        }
        Ok(row)
    })?;
    Ok(Table { columns, rows })
}

/// `alpha,phi1,wc` and, with shots, `wc_err` (then `wc` is the sampled estimate).
pub fn witness_coherence(points: &[Point], opts: RunOptions) -> Result<Table> {
    let mut columns: Vec<String> = ["alpha", "phi1", "wc"].map(String::from).to_vec();
    if opts.shots > 0 {
        columns.push("wc_err".into());
    }
    let rows = build_rows(points, |i, p| {
        let dist = single_distribution(p, opts.mixed)?;
        let mut row: Vec<Cell> = nums([p.alpha, p.phi1]).collect();
        if opts.shots > 0 {
            let c = shots::sample_counts_stream(&dist, opts.shots, opts.seed, i as u64)?;
            let e = shots::estimate_witness(&c, Witness::Coherence)?;
            row.extend(nums([e.value, e.error]));
        } else {
            row.push(Cell::Num((dist[0] - dist[1]).abs()));
        }
        Ok(row)
    })?;
    Ok(Table { columns, rows })
}

/// The four `(φ1, φ1')` corners `{0, π}²` at β = β' = 0 and at β = β' = π/8.
pub fn corner_points(base: Point) -> Vec<Point> {
    let mut out = Vec::with_capacity(8);
    for beta in [0.0, FRAC_PI_8] {
        for (phi1, phi1_prime) in [(0.0, 0.0), (0.0, PI), (PI, 0.0), (PI, PI)] {
            out.push(Point {
                phi1,
                phi1_prime,
                beta,
                beta_prime: beta,
                ..base
            });
        }
    }
    out
}

/// `phi1,phi1p,beta,betap,p_11p..p_44p` and, with shots, `c_11p..c_44p`.
pub fn two_photon(points: &[Point], opts: RunOptions) -> Result<Table> {
    let mut columns: Vec<String> = ["phi1", "phi1p", "beta", "betap"]
        .map(String::from)
        .to_vec();
    columns.extend(pair_columns("p"));
    if opts.shots > 0 {
        columns.extend(pair_columns("c"));
    }
    let rows = build_rows(points, |i, p| {
        let dist = pair_distribution(p, opts.mixed)?;
        let mut row: Vec<Cell> = nums([p.phi1, p.phi1_prime, p.beta, p.beta_prime]).collect();
        row.extend(nums(dist.iter().copied()));
        if opts.shots > 0 {
            let c = shots::sample_counts_stream(&dist, opts.shots, opts.seed, i as u64)?;
            row.extend(c.counts.iter().map(|&k| Cell::Int(k)));
        }
        Ok(row)
    })?;
    Ok(Table { columns, rows })
}

/// `phi1,p_22p,p_21p,we` and, with shots, `we_err` (all values then sampled).
pub fn witness_entanglement(points: &[Point], opts: RunOptions) -> Result<Table> {
    let mut columns: Vec<String> = ["phi1", "p_22p", "p_21p", "we"].map(String::from).to_vec();
    if opts.shots > 0 {
        columns.push("we_err".into());
    }
    let rows = build_rows(points, |i, p| {
        let dist = pair_distribution(p, opts.mixed)?;
        let mut row = vec![Cell::Num(p.phi1)];
        if opts.shots > 0 {
            let c = shots::sample_counts_stream(&dist, opts.shots, opts.seed, i as u64)?;
            let f = c.frequencies();
            let e = shots::estimate_witness(&c, Witness::Entanglement)?;
            row.extend(nums([f[5], f[4], e.value, e.error]));
        } else {
            row.extend(nums([dist[5], dist[4], dist[5] - dist[4]]));
        }
        Ok(row)
    })?;
    Ok(Table { columns, rows })
}

/// Sector probabilities of the `n`-photon output, every photon sharing the
/// row's `φ1, φ2, β`. Columns: `alpha,phi1,phi2,beta,all_wave,all_particle,
/// crossed`, then `s_<sector>` (w/p per photon) and `m<k>_p<d>` marginals.
pub fn ghz(points: &[Point], n: usize, opts: RunOptions) -> Result<Table> {
    if n == 0 || n > entangle::MAX_PHOTONS {
        return Err(Error::PhotonCount(n));
    }
    if opts.shots > 0 || opts.mixed {
        log::warn!("ghz output is analytic; shots and mixing are ignored");
    }
    let mut columns: Vec<String> = [
        "alpha",
        "phi1",
        "phi2",
        "beta",
        "all_wave",
        "all_particle",
        "crossed",
    ]
    .map(String::from)
    .to_vec();
    let rows = build_rows(points, |_, p| {
        let t = entangle::ghz_sector_probabilities(n, p.alpha, p.phases_a(), p.setting_a())?;
        let mut row: Vec<Cell> = nums([
            p.alpha,
            p.phi1,
            p.phi2,
            p.beta,
            t.all_wave(),
            t.all_particle(),
            t.crossed(),
        ])
        .collect();
        row.extend(nums(t.sectors.iter().copied()));
        row.extend(nums(t.marginals.iter().flatten().copied()));
        Ok(row)
    })?;
    let labels = entangle::SectorTable {
        n,
        sectors: vec![0.0; 1 << n],
        marginals: Vec::new(),
    };
    columns.extend((0..1usize << n).map(|s| format!("s_{}", labels.sector_label(s))));
    columns.extend((1..=n).flat_map(|k| (1..=4).map(move |d| format!("m{k}_p{d}"))));
    Ok(Table { columns, rows })
}

/// Result of one verification check.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.deviation < self.tolerance
    }
}

/// All checks of [`verify`].
#[derive(Clone, Debug, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    /// Reported quantities with no pass/fail threshold.
    pub notes: Vec<(String, f64)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {:<48} max deviation {:.3e} (tolerance {:.0e})",
                if c.passed() { "PASS" } else { "FAIL" },
                c.name,
                c.deviation,
                c.tolerance
            )?;
        }
        for (name, v) in &self.notes {
            writeln!(f, "INFO {name:<48} {v:.3e}")?;
        }
        Ok(())
    }
}

/// Grid sizes for [`verify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Points per axis of the single-photon `(α, φ1, φ2)` grid.
    pub single_grid: usize,
    /// Random hardware points per β setting.
    pub hardware_points: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            single_grid: 21,
            hardware_points: 100,
            seed: 2024,
        }
    }
}

fn grid(n: usize, from: f64, to: f64) -> Vec<f64> {
    Sweep {
        param: Param::Phi1,
        from,
        to,
        steps: n.max(2),
    }
    .values()
    .expect("at least two steps")
}

fn max_of(it: impl ParallelIterator<Item = Result<f64>>) -> Result<f64> {
    it.try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

/// Closed forms against propagation, hardware against the conceptual circuit.
pub fn verify(opts: VerifyOptions) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    let mut notes = Vec::new();
    let mut push = |name: &str, deviation: f64, tolerance: f64| {
        report.checks.push(Check {
            name: name.into(),
            deviation,
            tolerance,
        })
    };

    let alphas = grid(opts.single_grid, 0.0, FRAC_PI_2);
    let phis = grid(opts.single_grid, 0.0, TAU);
    for (name, setting) in [
        (
            "single-photon closed form vs circuit, β=22.5°",
            MeasurementSetting::PRESENT,
        ),
        (
            "single-photon closed form vs circuit, β=0",
            MeasurementSetting::ABSENT,
        ),
    ] {
        let mut triples = Vec::with_capacity(alphas.len() * phis.len() * phis.len());
        for &a in &alphas {
            for &x in &phis {
                for &y in &phis {
                    triples.push((a, x, y));
                }
            }
        }
        let dev = max_of(triples.par_iter().map(|&(a, p1, p2)| {
            let phases = ToolboxPhases::new(p1, p2)?;
            let closed = toolbox::detection_probabilities(a, phases, setting).p;
            let out = optics::toolbox_circuit(p1, p2, setting.beta, 0, ToolboxStage::Full)?
                .propagate(&toolbox::prepare_input(a))?
                .populations();
            Ok(closed
                .iter()
                .zip(&out)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max))
        }))?;
        push(name, dev, ANALYTIC_TOL);
    }

    let mut pair_points = Vec::new();
    let phi1s = grid(9, 0.0, TAU);
    let phi2s = grid(5, 0.0, TAU);
    for &a in &[0.0, 0.3, FRAC_PI_4, 1.1, FRAC_PI_2] {
        for &p1 in &phi1s {
            for &q1 in &phi1s {
                for &p2 in &phi2s {
                    for &q2 in &phi2s {
                        pair_points.push((a, p1, q1, p2, q2));
                    }
                }
            }
        }
    }
    for (name, setting) in [
        (
            "coincidence closed form vs circuit, β=22.5°",
            MeasurementSetting::PRESENT,
        ),
        (
            "coincidence closed form vs circuit, β=0",
            MeasurementSetting::ABSENT,
        ),
    ] {
        let dev = max_of(pair_points.par_iter().map(|&(a, p1, q1, p2, q2)| {
            let s = TwoPhotonSettings::new(
                a,
                ToolboxPhases::new(p1, p2)?,
                ToolboxPhases::new(q1, q2)?,
                setting,
                setting,
            )?;
            let closed = entangle::coincidence_probabilities(&s);
            let born = entangle::CoincidenceTable::from_state(
                &entangle::two_photon_output_propagated(&s)?,
            )?;
            Ok(closed.max_abs_diff(&born))
        }))?;
        push(name, dev, ANALYTIC_TOL);
    }

    let dev = max_of(grid(25, 0.0, TAU).into_par_iter().map(|p1| {
        let s = TwoPhotonSettings::bell(ToolboxPhases::new(p1, 0.0)?, ToolboxPhases::default());
        let w = entangle::entanglement_witness(&entangle::coincidence_probabilities(&s));
        Ok((w - 0.25 * (p1 / 2.0).cos().powi(2)).abs())
    }))?;
    push("entanglement witness vs ¼cos²(φ1/2)", dev, ANALYTIC_TOL);

    let dev = max_of(grid(13, 0.0, FRAC_PI_2).into_par_iter().map(|a| {
        let s =
            TwoPhotonSettings::bell(ToolboxPhases::new(0.4, 1.0)?, ToolboxPhases::new(2.0, 0.3)?)
                .with_alpha(a);
        Ok((entangle::concurrence(&s)? - (2.0 * a).sin()).abs())
    }))?;
    push("concurrence vs sin 2α", dev, ANALYTIC_TOL);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let pts: Vec<GridPoint> = (0..opts.hardware_points)
        .map(|_| GridPoint {
            alpha: rng.random_range(0.0..FRAC_PI_2),
            phases: ToolboxPhases {
                phi1: rng.random_range(0.0..TAU),
                phi2: rng.random_range(0.0..TAU),
            },
        })
        .collect();
    for (name, setting) in [
        (
            "hardware layout vs circuit, β=22.5°",
            MeasurementSetting::PRESENT,
        ),
        (
            "hardware layout vs circuit, β=0",
            MeasurementSetting::ABSENT,
        ),
    ] {
        let e = hardware::equivalence_check(&pts, setting, true)?;
        push(name, e.max_deviation, EQUIVALENCE_TOL);
        notes.push((
            format!("{name} (amplitudes, one global phase)"),
            e.max_amplitude_deviation,
        ));
    }

    let t = entangle::ghz_sector_probabilities(
        3,
        FRAC_PI_4,
        ToolboxPhases::default(),
        MeasurementSetting::ABSENT,
    )?;
    let dev = t
        .crossed()
        .max((t.all_wave() - 0.5).abs())
        .max((t.all_particle() - 0.5).abs());
    push("three-photon sectors (½, ½, crossed 0)", dev, ANALYTIC_TOL);

    report.notes = notes;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn param_names_round_trip() {
        for p in Param::ALL {
            assert_eq!(p.name().parse::<Param>().unwrap(), p);
        }
        assert_eq!("phi1p".parse::<Param>().unwrap(), Param::Phi1Prime);
        assert!("gamma".parse::<Param>().is_err());
    }

    #[test]
    fn sweep_endpoints_exact() {
        let v = Sweep::default_for(Param::Phi1).values().unwrap();
        assert_eq!(v.len(), 25);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[24], TAU);
        let bad = Sweep {
            steps: 1,
            ..Sweep::default_for(Param::Alpha)
        };
        assert!(bad.values().is_err());
    }

    #[test]
    fn noise_out_of_range_is_spec_error() {
        let spec = SweepSpec {
            base: Point {
                visibility: 1.5,
                ..Point::default()
            },
            sweep: None,
        };
        assert_eq!(spec.points().unwrap_err(), Error::NoiseRange("visibility"));
    }

    #[test]
    fn csv_full_precision() {
        let t = Table {
            columns: vec!["x".into(), "k".into()],
            rows: vec![vec![Cell::Num(0.1), Cell::Int(3)]],
        };
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s, "x,k\n1.0000000000000001e-1,3\n");
        assert_eq!("1.0000000000000001e-1".parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn single_rows_in_order() {
        let spec = SweepSpec {
            base: Point {
                alpha: 0.0,
                ..Point::default()
            },
            sweep: Some(Sweep::default_for(Param::Phi1)),
        };
        let t = single_sweep(&spec.points().unwrap(), RunOptions::default()).unwrap();
        let phi = t.column("phi1").unwrap();
        let p1 = t.column("p1").unwrap();
        for (x, p) in phi.iter().zip(p1) {
            assert!((p - 0.5 * (x / 2.0).cos().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn ghz_columns() {
        let t = ghz(
            &[Point {
                beta: 0.0,
                ..Point::default()
            }],
            3,
            RunOptions::default(),
        )
        .unwrap();
        assert_eq!(t.columns.len(), 7 + 8 + 12);
        assert_eq!(t.columns[7], "s_www");
        assert!((t.column("all_wave").unwrap()[0] - 0.5).abs() < 1e-12);
        assert!(matches!(
            ghz(&[Point::default()], 9, RunOptions::default()),
            Err(Error::PhotonCount(9))
        ));
    }
}
