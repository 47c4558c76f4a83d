//! Run configuration from defaults, a parameter file and command-line flags.

use std::path::PathBuf;

use clap::Parser;

use crate::error::{Error, Result};
use crate::ref_fem::BasisKind;
use crate::solvers::Method;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisChoice {
    Standard,
    Hierarchical,
    Both,
}

impl BasisChoice {
    pub fn kinds(self) -> Vec<BasisKind> {
        match self {
            BasisChoice::Standard => vec![BasisKind::Standard],
            BasisChoice::Hierarchical => vec![BasisKind::Hierarchical],
            BasisChoice::Both => vec![BasisKind::Standard, BasisKind::Hierarchical],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub test_case: u8,
    pub min_level: u32,
    pub max_level: u32,
    /// Mesh level of the interface sweep.
    pub level: u32,
    pub basis: BasisChoice,
    pub solvers: Vec<Method>,
    pub n_sweep: usize,
    pub stride: usize,
    pub omega: f64,
    pub tol: f64,
    pub max_iterations: usize,
    pub kappa1: f64,
    pub kappa2: f64,
    pub out: PathBuf,
    /// Write VTK output for every n-th level or sweep point; 0 disables it.
    pub vtk_every: usize,
    pub flux_jump: bool,
    pub export_matrix: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            test_case: 1,
            min_level: 0,
            max_level: 4,
            level: 4,
            basis: BasisChoice::Both,
            solvers: vec![Method::Cg, Method::Dpcg, Method::Ssor],
            n_sweep: 1000,
            stride: 10,
            omega: 1.2,
            tol: 1e-12,
            max_iterations: 100_000,
            kappa1: 0.1,
            kappa2: 1.0,
            out: PathBuf::from("output"),
            vtk_every: 0,
            flux_jump: false,
            export_matrix: false,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("invalid value '{value}' for '{key}'")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::Config(format!(
            "invalid value '{value}' for '{key}'"
        ))),
    }
}

fn parse_levels(value: &str) -> Result<(u32, u32)> {
    match value.split_once("..") {
        Some((a, b)) => Ok((parse("levels", a)?, parse("levels", b)?)),
        None => {
            let l = parse("levels", value)?;
            Ok((l, l))
        }
    }
}

impl RunConfig {
    /// Sets one parameter; keys use underscores, dashes are accepted.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let v = value.trim();
        match key.as_str() {
            "test_case" => self.test_case = parse(&key, v)?,
            "levels" => (self.min_level, self.max_level) = parse_levels(v)?,
            "level" => self.level = parse(&key, v)?,
            "basis" => {
                self.basis = match v.to_ascii_lowercase().as_str() {
                    "standard" | "nh" => BasisChoice::Standard,
                    "hierarchical" | "h" => BasisChoice::Hierarchical,
                    "both" => BasisChoice::Both,
                    _ => return Err(Error::Config(format!("invalid basis '{v}'"))),
                }
            }
            "solvers" => {
                self.solvers = v
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(str::parse)
                    .collect::<Result<_>>()?
            }
            "n_sweep" => self.n_sweep = parse(&key, v)?,
            "stride" => self.stride = parse(&key, v)?,
            "omega" => self.omega = parse(&key, v)?,
            "tol" => self.tol = parse(&key, v)?,
            "max_iterations" => self.max_iterations = parse(&key, v)?,
            "kappa1" => self.kappa1 = parse(&key, v)?,
            "kappa2" => self.kappa2 = parse(&key, v)?,
            "out" => self.out = PathBuf::from(v),
            "vtk_every" => self.vtk_every = parse(&key, v)?,
            "flux_jump" => self.flux_jump = parse_bool(&key, v)?,
            "export_matrix" => self.export_matrix = parse_bool(&key, v)?,
            _ => return Err(Error::Config(format!("unknown parameter '{key}'"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_parameter_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", n + 1)))?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !matches!(self.test_case, 1 | 2) {
            return bad(format!("test case must be 1 or 2, got {}", self.test_case));
        }
        if self.min_level > self.max_level || self.max_level > 8 || self.level > 8 {
            return bad("levels must satisfy 0 <= min <= max <= 8".to_string());
        }
        if self.stride == 0 || self.n_sweep == 0 {
            return bad("stride and n_sweep must be at least 1".to_string());
        }
        if !(self.omega > 0.0 && self.omega < 2.0) {
            return bad(format!("omega must lie in (0, 2), got {}", self.omega));
        }
        if !(self.kappa1 > 0.0 && self.kappa2 > 0.0) {
            return bad("diffusion coefficients must be positive".to_string());
        }
        if self.solvers.is_empty() {
            return bad("no solver selected".to_string());
        }
        Ok(())
    }

    /// Defaults, then the parameter file, then the command line.
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let mut cfg = Self::default();
        if let Some(path) = &cli.param_file {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            cfg.apply_parameter_text(&text)?;
        }
        for (key, value) in cli.pairs() {
            cfg.set(key, &value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Experiments for elliptic interface problems with locally modified finite elements.
#[derive(Debug, Default, Parser)]
#[command(name = "locmodfe", version)]
pub struct Cli {
    /// 1: refinement study, 2: interface sweep.
    #[arg(long)]
    pub test_case: Option<String>,
    /// Refinement levels `a..b` (inclusive) for test case 1.
    #[arg(long)]
    pub levels: Option<String>,
    /// Mesh level for test case 2.
    #[arg(long)]
    pub level: Option<String>,
    /// standard, hierarchical or both.
    #[arg(long)]
    pub basis: Option<String>,
    /// Comma-separated list of cg, dpcg, ssor.
    #[arg(long)]
    pub solvers: Option<String>,
    /// Number of sub-steps N of the interface offset.
    #[arg(long)]
    pub n_sweep: Option<String>,
    /// Step between sweep positions.
    #[arg(long)]
    pub stride: Option<String>,
    /// SSOR relaxation parameter.
    #[arg(long)]
    pub omega: Option<String>,
    /// Absolute residual tolerance.
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long)]
    pub max_iterations: Option<String>,
    #[arg(long)]
    pub kappa1: Option<String>,
    #[arg(long)]
    pub kappa2: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<String>,
    /// VTK output for every n-th level or sweep point.
    #[arg(long)]
    pub vtk_every: Option<String>,
    /// Add the interface flux-jump term of the manufactured solution.
    #[arg(long)]
    pub flux_jump: bool,
    /// Write the system matrices in MatrixMarket format.
    #[arg(long)]
    pub export_matrix: bool,
    /// File with `key = value` lines.
    #[arg(long)]
    pub param_file: Option<PathBuf>,
}

impl Cli {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let opts = [
            ("test_case", &self.test_case),
            ("levels", &self.levels),
            ("level", &self.level),
            ("basis", &self.basis),
            ("solvers", &self.solvers),
            ("n_sweep", &self.n_sweep),
            ("stride", &self.stride),
            ("omega", &self.omega),
            ("tol", &self.tol),
            ("max_iterations", &self.max_iterations),
            ("kappa1", &self.kappa1),
            ("kappa2", &self.kappa2),
            ("out", &self.out),
            ("vtk_every", &self.vtk_every),
        ];
        let mut pairs: Vec<(&'static str, String)> = opts
            .into_iter()
            .filter_map(|(k, v)| v.clone().map(|v| (k, v)))
            .collect();
        if self.flux_jump {
            pairs.push(("flux_jump", "true".to_string()));
        }
        if self.export_matrix {
            pairs.push(("export_matrix", "true".to_string()));
        }
        pairs
    }
}
