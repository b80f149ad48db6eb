//! Flag value types shared by the subcommands.

use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use spinpurify::analysis::time_grid;
use spinpurify::{ChainLayout, CouplingSpec, SiteSet};

use crate::error::{CliError, CliResult};

/// `lo:hi:step`, inclusive of `hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        time_grid(self.lo, self.hi, self.step).expect("validated on parse")
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts[..] else {
            return Err(format!("expected lo:hi:step, got {s:?}"));
        };
        let num = |v: &str| {
            v.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("{v:?} is not a finite number"))
        };
        let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
        if !(step > 0.0) {
            return Err(format!("step must be positive, got {step}"));
        }
        if !(lo < hi) {
            return Err(format!("need lo < hi, got {lo}:{hi}"));
        }
        if (hi - lo) / step > 1e7 {
            return Err("grid has more than 10^7 points".into());
        }
        Ok(Grid { lo, hi, step })
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.step)
    }
}

impl TryFrom<String> for Grid {
    type Error = String;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Grid> for String {
    fn from(g: Grid) -> Self {
        g.to_string()
    }
}

/// Three comma-separated reals, e.g. `0.1,0,0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Triple(pub [f64; 3]);

impl FromStr for Triple {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values = s
            .split(',')
            .map(|v| v.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| format!("{s:?} is not a list of numbers"))?;
        let arr: [f64; 3] = values
            .try_into()
            .map_err(|v: Vec<f64>| format!("expected 3 values, got {}", v.len()))?;
        Ok(Triple(arr))
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "{a},{b},{c}")
    }
}

/// Fidelity flag: a real in `[0, 1]`.
pub fn parse_fidelity(s: &str) -> Result<f64, String> {
    let f: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("{s:?} is not a number"))?;
    if !(0.0..=1.0).contains(&f) {
        return Err(format!("fidelity must lie in [0, 1], got {f}"));
    }
    Ok(f)
}

pub fn parse_finite(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("{s:?} is not a finite number"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum SiteSetArg {
    #[value(name = "3456")]
    #[serde(rename = "3456")]
    S3456,
    #[value(name = "1256")]
    #[serde(rename = "1256")]
    S1256,
}

impl From<SiteSetArg> for SiteSet {
    fn from(s: SiteSetArg) -> Self {
        match s {
            SiteSetArg::S3456 => SiteSet::Sites3456,
            SiteSetArg::S1256 => SiteSet::Sites1256,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// `{n_pairs, jx, jy, jz, d: [dx, dy, dz]}` on disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianSpec {
    pub n_pairs: usize,
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    #[serde(default)]
    pub d: [f64; 3],
}

impl HamiltonianSpec {
    pub fn coupling(&self) -> CouplingSpec {
        CouplingSpec::new(self.jx, self.jy, self.jz).with_dm(self.d)
    }

    pub fn layout(&self) -> CliResult<ChainLayout> {
        Ok(ChainLayout::new(self.n_pairs)?)
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let spec: Self = serde_json::from_str(text)
            .map_err(|e| CliError::Usage(format!("Hamiltonian spec: {e}")))?;
        let values = [spec.jx, spec.jy, spec.jz, spec.d[0], spec.d[1], spec.d[2]];
        if values.iter().any(|x| !x.is_finite()) {
            return Err(CliError::Usage(
                "Hamiltonian spec has non-finite couplings".into(),
            ));
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain numeric struct")
    }
}
