use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use super::SceneError;
use crate::grid::CellSet;
use crate::loglift::SampledFunction;

/// A function bound with `fn <name> <spec>`.
#[derive(Debug, Clone, PartialEq)]
pub enum FnSpec {
    Const(Complex64),
    Identity,
    Exp,
    /// Real coefficients, constant term first.
    Poly(Vec<f64>),
    /// Rows of `x,y,re,im`; relative paths resolve against the scene file.
    Csv(PathBuf),
}

impl FnSpec {
    pub fn parse(tok: &str) -> Result<FnSpec, String> {
        let nums = |s: &str| -> Result<Vec<f64>, String> {
            s.split(',')
                .map(|t| t.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or(format!("bad number `{t}`")))
                .collect()
        };
        match tok.split_once(':') {
            None if tok == "identity" => Ok(FnSpec::Identity),
            None if tok == "exp" => Ok(FnSpec::Exp),
            Some(("const", rest)) => match nums(rest)?[..] {
                [re] => Ok(FnSpec::Const(Complex64::new(re, 0.0))),
                [re, im] => Ok(FnSpec::Const(Complex64::new(re, im))),
                _ => Err("const takes re[,im]".into()),
            },
            Some(("poly", rest)) => Ok(FnSpec::Poly(nums(rest)?)),
            Some(("csv", path)) if !path.is_empty() => Ok(FnSpec::Csv(PathBuf::from(path))),
            _ => Err(format!("unknown function `{tok}` (const:c, identity, exp, poly:c0,c1,..., csv:path)")),
        }
    }

    pub fn eval(&self, z: Complex64) -> Option<Complex64> {
        match self {
            FnSpec::Const(c) => Some(*c),
            FnSpec::Identity => Some(z),
            FnSpec::Exp => Some(z.exp()),
            FnSpec::Poly(cs) => Some(cs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)),
            FnSpec::Csv(_) => None,
        }
    }

    /// Sample on `carrier`. CSV rows are matched to the cell containing `(x, y)`.
    pub fn sample(&self, carrier: &CellSet, base_dir: &Path) -> Result<SampledFunction, SceneError> {
        let FnSpec::Csv(path) = self else {
            return Ok(SampledFunction::from_fn(carrier, |z| self.eval(z).expect("builtin")));
        };
        let grid = *carrier.grid();
        let path = base_dir.join(path);
        let err = |m: String| SceneError::Samples(format!("{}: {m}", path.display()));
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_path(&path)
            .map_err(|e| err(e.to_string()))?;
        let mut samples = Vec::new();
        for (row, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| err(e.to_string()))?;
            let vals: Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
            let Ok(vals) = vals else {
                if row == 0 {
                    continue; // header
                }
                return Err(err(format!("row {}: not numeric", row + 1)));
            };
            let [x, y, re, im] = vals[..] else {
                return Err(err(format!("row {}: expected x,y,re,im", row + 1)));
            };
            if let Some(idx) = grid.locate(crate::grid::Point::new(x, y)) {
                if carrier.contains(idx) {
                    samples.push((idx, Complex64::new(re, im)));
                }
            }
        }
        let f = SampledFunction::from_samples(&grid, samples);
        if let Some(missing) = carrier.difference(f.carrier()).first() {
            let c = grid.center(missing);
            return Err(err(format!("no sample for the cell centered at ({}, {})", c.x, c.y)));
        }
        Ok(f)
    }
}

impl fmt::Display for FnSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FnSpec::Const(c) if c.im == 0.0 => write!(f, "const:{}", c.re),
            FnSpec::Const(c) => write!(f, "const:{},{}", c.re, c.im),
            FnSpec::Identity => f.write_str("identity"),
            FnSpec::Exp => f.write_str("exp"),
            FnSpec::Poly(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
            FnSpec::Csv(p) => write!(f, "csv:{}", p.display()),
        }
    }
}
