//! Experiment pipelines and the `entren` command line.
//!
//! Every run produces a [`Table`]: `#`-prefixed `key=value` metadata lines,
//! then a CSV header, then rows. Floating-point cells carry 12 significant
//! digits.

use std::fmt::Display;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use thiserror::Error;

use crate::densemath::{hermitian_eig, hermitian_eigvals, DenseError};
use crate::entangle::{eof_lower_bound, eof_two_qubits, von_neumann_entropy, EntangleError};
use crate::lattice::{build_hamiltonian, connected_correlator, Axis, LatticeError, ModelKind, ModelSpec};
use crate::renorm::{
    dmrg_projection_mixed, dmrg_run, emp_projection_mixed, project_pair, wilson_run, OptimizerConfig, RenormError,
};
use crate::states::{ground_state, qubit_dims, thermal_from_eigen, Bipartition, Reduce, StateError};

#[derive(Debug, Error)]
pub enum ExpError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl ExpError {
    /// Process exit code: 2 for configuration problems, 3 for numerical
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExpError::Config(_) => 2,
            ExpError::Numerical(_) => 3,
        }
    }
}

fn config<E: Display>(e: E) -> ExpError {
    ExpError::Config(e.to_string())
}

impl From<LatticeError> for ExpError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::Dense(d) => d.into(),
            other => config(other),
        }
    }
}

impl From<DenseError> for ExpError {
    fn from(e: DenseError) -> Self {
        ExpError::Numerical(e.to_string())
    }
}

impl From<StateError> for ExpError {
    fn from(e: StateError) -> Self {
        match e {
            StateError::InvalidFactors(_) | StateError::NegativeTemperature(_) => config(e),
            other => ExpError::Numerical(other.to_string()),
        }
    }
}

impl From<EntangleError> for ExpError {
    fn from(e: EntangleError) -> Self {
        match e {
            EntangleError::State(s) => s.into(),
            other => ExpError::Numerical(other.to_string()),
        }
    }
}

impl From<RenormError> for ExpError {
    fn from(e: RenormError) -> Self {
        match e {
            RenormError::Dense(d) => d.into(),
            RenormError::State(s) => s.into(),
            RenormError::Entangle(s) => s.into(),
            RenormError::Lattice(s) => s.into(),
            RenormError::DegenerateInput | RenormError::NotOrthonormal(_) => ExpError::Numerical(e.to_string()),
            other => config(other),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Fig1,
    RgCompare,
    Correlator,
    Ground,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig1 => "fig1",
            Experiment::RgCompare => "rg-compare",
            Experiment::Correlator => "correlator",
            Experiment::Ground => "ground",
        }
    }
}

/// Everything a run depends on.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub model: ModelSpec<f64>,
    pub m_values: Vec<usize>,
    pub kt_min: f64,
    pub kt_max: f64,
    pub kt_steps: usize,
    /// Temperature for `correlator` (0 selects the ground space).
    pub kt: f64,
    /// Reference site for `correlator`.
    pub site: usize,
    pub axes: (Axis, Axis),
    /// Initial Wilson block size.
    pub block_init: usize,
    pub max_iters: usize,
    pub conv_threshold: Option<f64>,
    pub optimizer: OptimizerConfig,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn defaults(experiment: Experiment) -> Self {
        let model = match experiment {
            Experiment::Fig1 | Experiment::Ground => ModelSpec::heisenberg(4, 1.0),
            Experiment::RgCompare => ModelSpec::heisenberg(10, 1.0),
            Experiment::Correlator => ModelSpec::transverse_ising(8, 1.0, 1.0),
        };
        Self {
            experiment,
            model,
            m_values: match experiment {
                Experiment::RgCompare => vec![2, 4, 8],
                _ => vec![2],
            },
            kt_min: 0.05,
            kt_max: 3.0,
            kt_steps: 60,
            kt: 0.0,
            site: 0,
            axes: (Axis::Z, Axis::Z),
            block_init: 2,
            max_iters: 100,
            conv_threshold: None,
            optimizer: OptimizerConfig::default(),
            out: None,
        }
    }

    /// Sets one option from its flag name (`kt-min` and `kt_min` both work).
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ExpError> {
        fn num<V: std::str::FromStr>(key: &str, value: &str) -> Result<V, ExpError>
        where
            V::Err: Display,
        {
            value
                .trim()
                .parse()
                .map_err(|e| ExpError::Config(format!("{key}: cannot parse '{value}': {e}")))
        }
        let v = value.trim();
        match key.trim().replace('_', "-").as_str() {
            "model" => self.model.kind = v.parse().map_err(config)?,
            "sites" => self.model.sites = num(key, v)?,
            "coupling" => self.model.coupling = num(key, v)?,
            "field" => self.model.field = num(key, v)?,
            "boundary" => self.model.boundary = v.parse().map_err(config)?,
            "m" => {
                self.m_values = v
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| num(key, s))
                    .collect::<Result<_, _>>()?
            }
            "kt-min" => self.kt_min = num(key, v)?,
            "kt-max" => self.kt_max = num(key, v)?,
            "kt-steps" => self.kt_steps = num(key, v)?,
            "kt" => self.kt = num(key, v)?,
            "site" => self.site = num(key, v)?,
            "axes" => self.axes = parse_axes(v)?,
            "block-init" => self.block_init = num(key, v)?,
            "max-iters" => self.max_iters = num(key, v)?,
            "conv-threshold" => {
                self.conv_threshold = match v {
                    "none" | "" => None,
                    _ => Some(num(key, v)?),
                }
            }
            "seed" => self.optimizer.seed = num(key, v)?,
            "restarts" => self.optimizer.restarts = num(key, v)?,
            "tolerance" => self.optimizer.tolerance = num(key, v)?,
            "patience" => self.optimizer.patience = num(key, v)?,
            "max-steps" => self.optimizer.max_steps = num(key, v)?,
            "initial-step" => self.optimizer.initial_step = num(key, v)?,
            "dmrg-seed" => self.optimizer.seed_with_dmrg = num(key, v)?,
            "out" => self.out = Some(PathBuf::from(v)),
            other => return Err(ExpError::Config(format!("unknown option '{other}'"))),
        }
        Ok(())
    }

    /// Applies a flat TOML document (`key = value` per line, keys as flags).
    pub fn apply_config_text(&mut self, text: &str) -> Result<(), ExpError> {
        let table: toml::Table = text.parse().map_err(|e| ExpError::Config(format!("config file: {e}")))?;
        for (key, value) in &table {
            let s = match value {
                toml::Value::String(s) => s.clone(),
                toml::Value::Integer(i) => i.to_string(),
                toml::Value::Float(f) => f.to_string(),
                toml::Value::Boolean(b) => b.to_string(),
                toml::Value::Array(items) => items
                    .iter()
                    .map(|i| match i {
                        toml::Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect::<Vec<_>>()
                    .join(","),
                _ => return Err(ExpError::Config(format!("config key '{key}' must be a plain value"))),
            };
            self.set(key, &s)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ExpError> {
        self.model.validate()?;
        if !self.model.coupling.is_finite() || !self.model.field.is_finite() {
            return Err(config("coupling and field must be finite"));
        }
        if !(self.kt_min >= 0.0) || !(self.kt_max >= self.kt_min) || !self.kt_max.is_finite() {
            return Err(config(format!("bad temperature range [{}, {}]", self.kt_min, self.kt_max)));
        }
        if self.kt_steps == 0 {
            return Err(config("kt-steps must be at least 1"));
        }
        if self.kt_steps > 1 && self.kt_max == self.kt_min {
            return Err(config("kt-max must exceed kt-min for more than one grid point"));
        }
        if !(self.kt >= 0.0) || !self.kt.is_finite() {
            return Err(config(format!("temperature must be non-negative, got {}", self.kt)));
        }
        if self.m_values.is_empty() || self.m_values.contains(&0) {
            return Err(config("m must list positive retained dimensions"));
        }
        let o = &self.optimizer;
        if !(o.tolerance >= 0.0) || !(o.initial_step > 0.0) || o.patience == 0 {
            return Err(config("optimizer tolerance, patience and initial-step must be positive"));
        }
        match self.experiment {
            Experiment::Fig1 => {
                if self.m_values != [2] {
                    return Err(config("fig1 renormalizes each half to one qubit; m must be 2"));
                }
            }
            Experiment::Correlator => {
                if self.site >= self.model.sites {
                    return Err(config(format!("site {} outside a {}-site chain", self.site, self.model.sites)));
                }
            }
            Experiment::RgCompare | Experiment::Ground => {}
        }
        Ok(())
    }

    /// Evenly spaced temperatures, `kt_min` to `kt_max` inclusive.
    pub fn kt_grid(&self) -> Vec<f64> {
        if self.kt_steps == 1 {
            return vec![self.kt_min];
        }
        let n = self.kt_steps - 1;
        (0..=n)
            .map(|i| {
                if i == n {
                    self.kt_max
                } else {
                    self.kt_min + (self.kt_max - self.kt_min) * i as f64 / n as f64
                }
            })
            .collect()
    }

    /// Metadata lines written ahead of every table.
    pub fn metadata(&self) -> Vec<(String, String)> {
        let o = &self.optimizer;
        let mut md: Vec<(String, String)> = vec![
            ("experiment".into(), self.experiment.name().into()),
            ("version".into(), env!("CARGO_PKG_VERSION").into()),
            ("model".into(), self.model.kind.to_string()),
            ("sites".into(), self.model.sites.to_string()),
            ("coupling".into(), self.model.coupling.to_string()),
            ("field".into(), self.model.field.to_string()),
            ("boundary".into(), self.model.boundary.to_string()),
            ("seed".into(), o.seed.to_string()),
            ("restarts".into(), o.restarts.to_string()),
            ("dmrg-seed".into(), o.seed_with_dmrg.to_string()),
            ("tolerance".into(), o.tolerance.to_string()),
            ("patience".into(), o.patience.to_string()),
            ("max-steps".into(), o.max_steps.to_string()),
            ("initial-step".into(), o.initial_step.to_string()),
        ];
        let mut push = |k: &str, v: String| md.push((k.into(), v));
        match self.experiment {
            Experiment::Fig1 => {
                push("m", "2".into());
                push("kt-min", self.kt_min.to_string());
                push("kt-max", self.kt_max.to_string());
                push("kt-steps", self.kt_steps.to_string());
                let (a, b) = halves(self.model.sites);
                push("split", format!("{}|{}", join(&a), join(&b)));
                push("units", "kT in units of J; entanglement in ebits; entropy in bits".into());
                if self.model.sites != 4 || self.model.kind != ModelKind::Heisenberg {
                    push("extension", "configuration differs from the 4-site Heisenberg chain".into());
                }
            }
            Experiment::RgCompare => {
                push("m", join(&self.m_values));
                push("block-init", self.block_init.to_string());
                push("max-iters", self.max_iters.to_string());
                push("conv-threshold", self.conv_threshold.map_or("none".into(), |t| t.to_string()));
            }
            Experiment::Correlator => {
                push("kt", self.kt.to_string());
                push("site", self.site.to_string());
                push("axes", format!("{}{}", self.axes.0, self.axes.1));
            }
            Experiment::Ground => {}
        }
        md
    }
}

fn parse_axes(v: &str) -> Result<(Axis, Axis), ExpError> {
    let parts: Vec<&str> = if v.contains(',') {
        v.split(',').map(str::trim).collect()
    } else {
        v.trim().split("").filter(|s| !s.is_empty()).collect()
    };
    match parts.as_slice() {
        [a, b] => Ok((a.parse().map_err(config)?, b.parse().map_err(config)?)),
        _ => Err(config(format!("axes must name two Pauli axes (e.g. 'zz'), got '{v}'"))),
    }
}

fn join<D: Display>(xs: &[D]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// `{0..n/2} | {n/2..n}`.
fn halves(n: usize) -> (Vec<usize>, Vec<usize>) {
    ((0..n / 2).collect(), (n / 2..n).collect())
}

/// 12 significant digits, scientific notation; `-0` prints as `0`.
pub fn format_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// Rounds to the value [`format_float`] represents.
pub fn round_sig(x: f64) -> f64 {
    format_float(x).parse().expect("formatted float parses")
}

/// Metadata, header and rows of a CSV result.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (k, v) in &self.metadata {
            writeln!(w, "# {k}={v}")?;
        }
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(&self.header)?;
        for r in &self.rows {
            csv.write_record(r)?;
        }
        csv.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV output is UTF-8")
    }

    pub fn parse(text: &str) -> Result<Self, ExpError> {
        let mut metadata = Vec::new();
        let mut body = String::new();
        for line in text.lines() {
            if let Some(m) = line.strip_prefix('#') {
                let (k, v) = m
                    .trim()
                    .split_once('=')
                    .ok_or_else(|| config(format!("malformed metadata line '{line}'")))?;
                metadata.push((k.to_string(), v.to_string()));
            } else {
                body.push_str(line);
                body.push('\n');
            }
        }
        let mut rdr = csv::Reader::from_reader(body.as_bytes());
        let header = rdr.headers().map_err(config)?.iter().map(String::from).collect();
        let rows = rdr
            .records()
            .map(|r| r.map(|rec| rec.iter().map(String::from).collect()))
            .collect::<Result<_, _>>()
            .map_err(config)?;
        Ok(Self { metadata, header, rows })
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// One temperature of the two-block renormalization experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct Fig1Row {
    pub kt: f64,
    pub eof_dmrg: f64,
    pub eof_emp: f64,
    pub eof_lower_bound: f64,
    pub entropy_a: f64,
    /// A DMRG cut split a degenerate multiplet, so the DMRG column depends
    /// on the solver's choice inside it.
    pub degenerate: bool,
}

pub const FIG1_HEADER: [&str; 6] = ["kT", "eof_dmrg", "eof_emp", "eof_lower_bound", "entropy_A", "degeneracy_flag"];

impl Fig1Row {
    fn cells(&self) -> Vec<String> {
        vec![
            format_float(self.kt),
            format_float(self.eof_dmrg),
            format_float(self.eof_emp),
            format_float(self.eof_lower_bound),
            format_float(self.entropy_a),
            u8::from(self.degenerate).to_string(),
        ]
    }

    fn from_cells(cells: &[String]) -> Result<Self, ExpError> {
        if cells.len() != FIG1_HEADER.len() {
            return Err(config(format!("expected {} columns, found {}", FIG1_HEADER.len(), cells.len())));
        }
        let f = |i: usize| -> Result<f64, ExpError> { cells[i].parse().map_err(config) };
        Ok(Self {
            kt: f(0)?,
            eof_dmrg: f(1)?,
            eof_emp: f(2)?,
            eof_lower_bound: f(3)?,
            entropy_a: f(4)?,
            degenerate: match cells[5].as_str() {
                "0" => false,
                "1" => true,
                other => return Err(config(format!("bad degeneracy flag '{other}'"))),
            },
        })
    }
}

pub fn fig1_table(cfg: &RunConfig, rows: &[Fig1Row]) -> Table {
    Table {
        metadata: cfg.metadata(),
        header: FIG1_HEADER.iter().map(|s| s.to_string()).collect(),
        rows: rows.iter().map(Fig1Row::cells).collect(),
    }
}

pub fn parse_fig1_rows(table: &Table) -> Result<Vec<Fig1Row>, ExpError> {
    if table.header != FIG1_HEADER {
        return Err(config(format!("unexpected header {:?}", table.header)));
    }
    table.rows.iter().map(|r| Fig1Row::from_cells(r)).collect()
}

/// Thermal states of the chain, each half renormalized to one qubit by the
/// DMRG pair and by the EMP pair, compared through the entanglement of
/// formation of the resulting two-qubit state.
pub fn run_fig1(cfg: &RunConfig) -> Result<Vec<Fig1Row>, ExpError> {
    cfg.validate()?;
    let spec = &cfg.model;
    let h = build_hamiltonian(spec)?;
    let eig = hermitian_eig(&h)?;
    let (a, b) = halves(spec.sites);
    let split = Bipartition::new(a.clone(), b).map_err(config)?;
    cfg.kt_grid()
        .into_par_iter()
        .map(|kt| {
            let rho = thermal_from_eigen(&eig, kt, qubit_dims(spec.sites));
            let pa = dmrg_projection_mixed(&rho, &split, 2)?;
            let pb = dmrg_projection_mixed(&rho, &split.swapped(), 2)?;
            let dmrg_pair = project_pair(&rho, &split, &pa.isometry, &pb.isometry)?;
            let eof_dmrg = eof_two_qubits(&dmrg_pair)?;
            let emp = emp_projection_mixed(&rho, &split, 2, 2, &cfg.optimizer)?;
            Ok(Fig1Row {
                kt: round_sig(kt),
                eof_dmrg: round_sig(eof_dmrg),
                eof_emp: round_sig(emp.eof.max(eof_dmrg)),
                eof_lower_bound: round_sig(eof_lower_bound(&rho, &split)?),
                entropy_a: round_sig(von_neumann_entropy(&rho.reduce(&a)?)?),
                degenerate: pa.degenerate_cut || pb.degenerate_cut || emp.degenerate_cut,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RgCompareRow {
    pub m: usize,
    pub exact: f64,
    pub wilson: f64,
    pub dmrg: f64,
}

impl RgCompareRow {
    pub fn wilson_error(&self) -> f64 {
        (self.wilson - self.exact).abs()
    }

    pub fn dmrg_error(&self) -> f64 {
        (self.dmrg - self.exact).abs()
    }
}

/// Wilson and DMRG ground energies at equal `m` against exact
/// diagonalization.
pub fn run_rg_compare(cfg: &RunConfig) -> Result<Vec<RgCompareRow>, ExpError> {
    cfg.validate()?;
    let spec = &cfg.model;
    let exact = hermitian_eigvals(&build_hamiltonian(spec)?)?[0];
    cfg.m_values
        .iter()
        .map(|&m| {
            let w = wilson_run(spec, m, cfg.block_init, cfg.max_iters, cfg.conv_threshold)?;
            let d = dmrg_run(spec, m, cfg.max_iters, cfg.conv_threshold)?;
            Ok(RgCompareRow {
                m,
                exact,
                wilson: w.final_energy(),
                dmrg: d.final_energy(),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelatorRow {
    pub site: usize,
    pub separation: usize,
    pub value: f64,
}

/// Connected correlators between the reference site and every other site,
/// in the ground state (`kt = 0`, non-degenerate) or the Gibbs state.
pub fn run_correlator(cfg: &RunConfig) -> Result<Vec<CorrelatorRow>, ExpError> {
    cfg.validate()?;
    let spec = &cfg.model;
    let h = build_hamiltonian(spec)?;
    let (alpha, beta) = cfg.axes;
    let i = cfg.site;
    let others = (0..spec.sites).filter(|&j| j != i);
    let row = |j: usize, value: f64| CorrelatorRow {
        site: j,
        separation: j.abs_diff(i),
        value,
    };
    if cfg.kt == 0.0 {
        let g = ground_state(&h, qubit_dims(spec.sites))?;
        if !g.is_degenerate() {
            return others
                .map(|j| Ok(row(j, connected_correlator(&g.state, i, alpha, j, beta)?)))
                .collect();
        }
    }
    let eig = hermitian_eig(&h)?;
    let rho = thermal_from_eigen(&eig, cfg.kt, qubit_dims(spec.sites));
    others
        .map(|j| Ok(row(j, connected_correlator(&rho, i, alpha, j, beta)?)))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroundRow {
    pub energy: f64,
    pub gap: Option<f64>,
    pub degeneracy: usize,
    /// Entropy of the left half of the chain, in bits.
    pub half_chain_entropy: f64,
}

pub fn run_ground(cfg: &RunConfig) -> Result<GroundRow, ExpError> {
    cfg.validate()?;
    let spec = &cfg.model;
    let g = ground_state(&build_hamiltonian(spec)?, qubit_dims(spec.sites))?;
    let (a, _) = halves(spec.sites);
    Ok(GroundRow {
        energy: g.energy,
        gap: g.gap,
        degeneracy: g.degeneracy,
        half_chain_entropy: von_neumann_entropy(&g.state.reduce(&a)?)?,
    })
}

/// Runs the configured experiment and tabulates its output.
pub fn run(cfg: &RunConfig) -> Result<Table, ExpError> {
    let metadata = cfg.metadata();
    let table = |header: &[&str], rows: Vec<Vec<String>>| Table {
        metadata: metadata.clone(),
        header: header.iter().map(|s| s.to_string()).collect(),
        rows,
    };
    Ok(match cfg.experiment {
        Experiment::Fig1 => fig1_table(cfg, &run_fig1(cfg)?),
        Experiment::RgCompare => table(
            &["m", "e_exact", "e_wilson", "e_dmrg", "wilson_error", "dmrg_error"],
            run_rg_compare(cfg)?
                .iter()
                .map(|r| {
                    vec![
                        r.m.to_string(),
                        format_float(r.exact),
                        format_float(r.wilson),
                        format_float(r.dmrg),
                        format_float(r.wilson_error()),
                        format_float(r.dmrg_error()),
                    ]
                })
                .collect(),
        ),
        Experiment::Correlator => table(
            &["site", "separation", "connected_correlator"],
            run_correlator(cfg)?
                .iter()
                .map(|r| vec![r.site.to_string(), r.separation.to_string(), format_float(r.value)])
                .collect(),
        ),
        Experiment::Ground => {
            let g = run_ground(cfg)?;
            let n = cfg.model.sites as f64;
            table(
                &["sites", "energy", "energy_per_site", "gap", "degeneracy", "half_chain_entropy"],
                vec![vec![
                    cfg.model.sites.to_string(),
                    format_float(g.energy),
                    format_float(g.energy / n),
                    g.gap.map_or(String::new(), format_float),
                    g.degeneracy.to_string(),
                    format_float(g.half_chain_entropy),
                ]],
            )
        }
    })
}

#[derive(Parser, Debug)]
#[command(name = "entren", version, about = "Wilson RG, DMRG and entanglement-maximizing projections on spin chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Two-block renormalization of a thermal chain: EoF after DMRG and EMP
    /// projections versus temperature.
    Fig1(Flags),
    /// Wilson versus DMRG ground energies against exact diagonalization.
    RgCompare(Flags),
    /// Connected spin-spin correlators from a reference site.
    Correlator(Flags),
    /// Exact ground-state summary.
    Ground(Flags),
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// heisenberg | transverse_ising
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    sites: Option<usize>,
    /// J
    #[arg(long, allow_negative_numbers = true)]
    coupling: Option<f64>,
    /// h (transverse Ising)
    #[arg(long)]
    field: Option<f64>,
    /// open | periodic
    #[arg(long)]
    boundary: Option<String>,
    /// Retained dimension(s), comma separated
    #[arg(long)]
    m: Option<String>,
    #[arg(long = "kt-min")]
    kt_min: Option<f64>,
    #[arg(long = "kt-max")]
    kt_max: Option<f64>,
    #[arg(long = "kt-steps")]
    kt_steps: Option<usize>,
    /// Temperature for `correlator`
    #[arg(long)]
    kt: Option<f64>,
    /// Reference site for `correlator`
    #[arg(long)]
    site: Option<usize>,
    /// Pauli axes for `correlator`, e.g. zz or x,y
    #[arg(long)]
    axes: Option<String>,
    #[arg(long = "block-init")]
    block_init: Option<usize>,
    #[arg(long = "max-iters")]
    max_iters: Option<usize>,
    #[arg(long = "conv-threshold")]
    conv_threshold: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Output CSV path (stdout if absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat TOML file of `key = value` options; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Flags {
    fn overrides(&self) -> Vec<(&'static str, String)> {
        let mut o = Vec::new();
        macro_rules! put {
            ($($field:ident => $key:literal),* $(,)?) => {
                $(if let Some(v) = &self.$field { o.push(($key, v.to_string())); })*
            };
        }
        put!(
            model => "model", sites => "sites", coupling => "coupling", field => "field",
            boundary => "boundary", m => "m", kt_min => "kt-min", kt_max => "kt-max",
            kt_steps => "kt-steps", kt => "kt", site => "site", axes => "axes",
            block_init => "block-init", max_iters => "max-iters",
            conv_threshold => "conv-threshold", seed => "seed", restarts => "restarts",
        );
        if let Some(p) = &self.out {
            o.push(("out", p.display().to_string()));
        }
        o
    }
}

/// Defaults, then the config file, then flags.
fn build_config(experiment: Experiment, flags: &Flags) -> Result<RunConfig, ExpError> {
    let mut cfg = RunConfig::defaults(experiment);
    if let Some(path) = &flags.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ExpError::Config(format!("cannot read {}: {e}", path.display())))?;
        cfg.apply_config_text(&text)?;
    }
    for (k, v) in flags.overrides() {
        cfg.set(k, &v)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(experiment: Experiment, flags: &Flags) -> Result<(), ExpError> {
    let cfg = build_config(experiment, flags)?;
    let table = run(&cfg)?;
    match &cfg.out {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| ExpError::Config(format!("cannot write {}: {e}", path.display())))?;
            table
                .write_to(io::BufWriter::new(file))
                .map_err(|e| ExpError::Config(format!("cannot write {}: {e}", path.display())))
        }
        None => table
            .write_to(io::stdout().lock())
            .map_err(|e| ExpError::Config(format!("cannot write output: {e}"))),
    }
}

/// Entry point of the `entren` binary; returns the process exit code.
pub fn cli_main<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let (experiment, flags) = match &cli.command {
        Command::Fig1(f) => (Experiment::Fig1, f),
        Command::RgCompare(f) => (Experiment::RgCompare, f),
        Command::Correlator(f) => (Experiment::Correlator, f),
        Command::Ground(f) => (Experiment::Ground, f),
    };
    match execute(experiment, flags) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("entren: {e}");
            e.exit_code()
        }
    }
}
