use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::args::ParamArgs;
use crate::error::CliError;

/// Resolved parameters: built-in defaults, then the config file, then flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct Config {
    pub eps: f64,
    pub beta: f64,
    pub alpha: f64,
    pub p: f64,
    #[serde(rename = "R0")]
    pub r0: f64,
    #[serde(rename = "R1")]
    pub r1: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps0: Option<f64>,
    pub tol_geom: f64,
    pub tol_solve: f64,
    pub tol_cap: f64,
    pub sample_budget: usize,
    pub seed: u64,
    pub truncation_grid: Vec<f64>,
    pub force: bool,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            eps: 1.0,
            beta: 2.0,
            alpha: 1.0,
            p: 2.0,
            r0: 1.0,
            r1: 4.0,
            eps0: None,
            tol_geom: 1e-9,
            tol_solve: 1e-10,
            tol_cap: 1e-3,
            sample_budget: 200,
            seed: 0,
            truncation_grid: vec![8.0, 12.0, 16.0],
            force: false,
        }
    }
}

impl Config {
    pub fn resolve(args: &ParamArgs) -> Result<Self, CliError> {
        let mut c = match &args.config {
            Some(path) => Self::from_file(path)?,
            None => Self::default(),
        };
        let set = |dst: &mut f64, src: Option<f64>| {
            if let Some(v) = src {
                *dst = v;
            }
        };
        set(&mut c.eps, args.eps);
        set(&mut c.beta, args.beta);
        set(&mut c.alpha, args.alpha);
        set(&mut c.p, args.p);
        set(&mut c.r0, args.r0);
        set(&mut c.r1, args.r1);
        set(&mut c.tol_geom, args.tol_geom);
        set(&mut c.tol_solve, args.tol_solve);
        set(&mut c.tol_cap, args.tol_cap);
        c.eps0 = args.eps0.or(c.eps0);
        c.sample_budget = args.samples.unwrap_or(c.sample_budget);
        c.seed = args.seed.unwrap_or(c.seed);
        if let Some(g) = &args.tgrid {
            c.truncation_grid = g.clone();
        }
        c.force |= args.force;
        c.validate()?;
        Ok(c)
    }

    fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Usage(msg));
        for (name, v) in [("tolGeom", self.tol_geom), ("tolSolve", self.tol_solve), ("tolCap", self.tol_cap)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} = {v} must be positive"));
            }
        }
        for (name, v) in [("eps", self.eps), ("beta", self.beta), ("alpha", self.alpha), ("R0", self.r0), ("R1", self.r1)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} = {v} must be positive"));
            }
        }
        if !(self.p > 1.0 && self.p.is_finite()) {
            return bad(format!("p = {} must exceed 1", self.p));
        }
        if let Some(e0) = self.eps0 {
            if !(e0 > 0.0) {
                return bad(format!("eps0 = {e0} must be positive"));
            }
            if self.eps > e0 && !self.force {
                return bad(format!("eps = {} exceeds eps0 = {e0}; pass --force to override", self.eps));
            }
        }
        if self.sample_budget == 0 {
            return bad("samples must be positive".into());
        }
        if self.truncation_grid.len() < 3 || self.truncation_grid.windows(2).any(|w| !(w[0] < w[1])) || self.truncation_grid[0] <= 0.0 {
            return bad("truncation grid needs at least three increasing positive values".into());
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}
