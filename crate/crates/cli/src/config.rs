//! Fully resolved run settings. This is what a manifest stores, so a run
//! can be repeated from it without the original command line.

use std::fmt;
use std::path::PathBuf;

use scpm_core::{
    Gamma, MinerConfig, NullModelConfig, NullModelKind, QuasiCliqueParams, SearchStrategy, TopK,
};
use serde::{Deserialize, Serialize};

use crate::args::Cli;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub graph: PathBuf,
    pub attributes: PathBuf,
    pub sigma_min: usize,
    /// Kept as text so the exact decimal survives a round trip.
    pub gamma_min: String,
    pub min_size: usize,
    pub eps_min: f64,
    pub delta_min: f64,
    pub top_k: String,
    pub strategy: String,
    pub null_model: String,
    pub samples: usize,
    pub seed: u64,
    pub baseline: bool,
    pub compare: bool,
    pub max_set_size: Option<usize>,
    pub candidate_limit: u64,
    pub sweep: Option<String>,
    pub fail_fast: bool,
    pub out_records: Option<PathBuf>,
    pub out_patterns: Option<PathBuf>,
    pub export_dot: Option<PathBuf>,
}

impl RunConfig {
    /// Settings from flags. Only called when not rerunning a manifest, so
    /// clap has already enforced the required flags.
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let missing = |flag: &str| CliError::Usage(format!("--{flag} is required"));
        Ok(Self {
            graph: cli.graph.clone().ok_or_else(|| missing("graph"))?,
            attributes: cli.attributes.clone().ok_or_else(|| missing("attributes"))?,
            sigma_min: cli.sigma_min.ok_or_else(|| missing("sigma-min"))?,
            gamma_min: cli.gamma_min.clone().ok_or_else(|| missing("gamma-min"))?,
            min_size: cli.min_size.ok_or_else(|| missing("min-size"))?,
            eps_min: cli.eps_min,
            delta_min: cli.delta_min,
            top_k: cli.top_k.clone(),
            strategy: cli.strategy.clone(),
            null_model: cli.null_model.clone(),
            samples: cli.samples,
            seed: cli.seed,
            baseline: cli.baseline,
            compare: cli.compare,
            max_set_size: cli.max_set_size,
            candidate_limit: cli
                .candidate_limit
                .unwrap_or(scpm_core::quasiclique::DEFAULT_CANDIDATE_LIMIT),
            sweep: cli.sweep.clone(),
            fail_fast: cli.fail_fast,
            out_records: cli.out_records.clone(),
            out_patterns: cli.out_patterns.clone(),
            export_dot: cli.export_dot.clone(),
        })
    }

    pub fn mode(&self) -> &'static str {
        if self.baseline {
            "naive"
        } else {
            "scpm"
        }
    }

    pub fn miner_config(&self) -> Result<MinerConfig, CliError> {
        let usage = |e: scpm_core::Error| CliError::Usage(e.to_string());
        let gamma: Gamma = self
            .gamma_min
            .parse()
            .map_err(|_| CliError::Usage(format!("--gamma-min: `{}` is not a number in (0, 1]", self.gamma_min)))?;
        let params = QuasiCliqueParams::new(gamma, self.min_size).map_err(usage)?;
        let mut cfg = MinerConfig::new(self.sigma_min, params);
        cfg.eps_min = self.eps_min;
        cfg.delta_min = self.delta_min;
        cfg.top_k = parse_top_k(&self.top_k)?;
        cfg.strategy = self
            .strategy
            .parse::<SearchStrategy>()
            .map_err(|_| CliError::Usage(format!("--strategy: expected dfs or bfs, got `{}`", self.strategy)))?;
        let kind = self
            .null_model
            .parse::<NullModelKind>()
            .map_err(|_| {
                CliError::Usage(format!(
                    "--null-model: expected analytical or simulation, got `{}`",
                    self.null_model
                ))
            })?;
        cfg.null_model = NullModelConfig {
            kind,
            samples: self.samples,
            seed: self.seed,
        };
        cfg.max_set_size = self.max_set_size;
        cfg.candidate_limit = self.candidate_limit;
        cfg.fail_fast = self.fail_fast;
        cfg.validate().map_err(usage)?;
        Ok(cfg)
    }

    /// One configuration per sweep value, or just this one.
    pub fn blocks(&self) -> Result<Vec<(Option<String>, RunConfig)>, CliError> {
        let Some(text) = &self.sweep else {
            return Ok(vec![(None, self.clone())]);
        };
        let sweep = Sweep::parse(text)?;
        sweep
            .values
            .iter()
            .map(|v| {
                let mut c = self.clone();
                c.sweep = None;
                sweep.param.apply(&mut c, v)?;
                Ok((Some(format!("{}={v}", sweep.param)), c))
            })
            .collect()
    }

    /// The `#` line that opens every output block. Leaves out paths and
    /// thread counts so equal runs give equal files.
    pub fn header(&self, kind: &str, block: Option<&str>) -> String {
        let mut h = format!(
            "# scpm {kind} version={} mode={} null_model={} sigma_min={} gamma_min={} min_size={} \
             eps_min={} delta_min={} top_k={} strategy={} samples={} seed={} max_set_size={} \
             candidate_limit={}",
            env!("CARGO_PKG_VERSION"),
            self.mode(),
            self.null_model,
            self.sigma_min,
            self.gamma_min,
            self.min_size,
            self.eps_min,
            self.delta_min,
            self.top_k,
            self.strategy,
            self.samples,
            self.seed,
            self.max_set_size.map_or("none".to_string(), |m| m.to_string()),
            self.candidate_limit,
        );
        if let Some(b) = block {
            h.push_str(&format!(" sweep={b}"));
        }
        h
    }
}

pub fn parse_top_k(s: &str) -> Result<TopK, CliError> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(TopK::All);
    }
    match s.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(TopK::Limited(k)),
        _ => Err(CliError::Usage(format!(
            "--top-k: expected a positive count or `all`, got `{s}`"
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    GammaMin,
    SigmaMin,
    MinSize,
    EpsMin,
    DeltaMin,
}

impl SweepParam {
    fn parse(s: &str) -> Result<Self, CliError> {
        Ok(match s.replace('-', "_").as_str() {
            "gamma" | "gamma_min" => Self::GammaMin,
            "sigma" | "sigma_min" => Self::SigmaMin,
            "min_size" => Self::MinSize,
            "eps" | "eps_min" => Self::EpsMin,
            "delta" | "delta_min" => Self::DeltaMin,
            _ => {
                return Err(CliError::Usage(format!(
                    "--sweep: unknown parameter `{s}` (use gamma_min, sigma_min, min_size, eps_min or delta_min)"
                )))
            }
        })
    }

    fn is_integer(self) -> bool {
        matches!(self, Self::SigmaMin | Self::MinSize)
    }

    fn apply(self, c: &mut RunConfig, value: &str) -> Result<(), CliError> {
        let bad = || CliError::Usage(format!("--sweep: bad value `{value}` for {self}"));
        match self {
            Self::GammaMin => c.gamma_min = value.to_string(),
            Self::SigmaMin => c.sigma_min = value.parse().map_err(|_| bad())?,
            Self::MinSize => c.min_size = value.parse().map_err(|_| bad())?,
            Self::EpsMin => c.eps_min = value.parse().map_err(|_| bad())?,
            Self::DeltaMin => c.delta_min = value.parse().map_err(|_| bad())?,
        }
        Ok(())
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::GammaMin => "gamma_min",
            Self::SigmaMin => "sigma_min",
            Self::MinSize => "min_size",
            Self::EpsMin => "eps_min",
            Self::DeltaMin => "delta_min",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub param: SweepParam,
    /// Values as decimal text, start to end inclusive.
    pub values: Vec<String>,
}

/// Sweeps longer than this are almost certainly a typo in STEP.
const MAX_SWEEP_VALUES: usize = 10_000;

impl Sweep {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let usage = |m: &str| CliError::Usage(format!("--sweep `{text}`: {m}"));
        let (name, range) = text
            .split_once('=')
            .ok_or_else(|| usage("expected PARAM=START:END:STEP"))?;
        let param = SweepParam::parse(name.trim())?;
        let parts: Vec<f64> = range
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| usage("START, END and STEP must be numbers"))?;
        let [start, end, step] = parts[..] else {
            return Err(usage("expected PARAM=START:END:STEP"));
        };
        if !(step > 0.0) || !start.is_finite() || !end.is_finite() || end < start {
            return Err(usage("need START <= END and STEP > 0"));
        }
        // Values are computed from the index, not accumulated, and rounded to
        // nine decimals so 0.3 + 6·0.1 prints as 0.9.
        let count = ((end - start) / step + 1e-9).floor() as usize + 1;
        if count > MAX_SWEEP_VALUES {
            return Err(usage("too many values"));
        }
        let values = (0..count)
            .map(|i| {
                let v = start + i as f64 * step;
                if param.is_integer() {
                    if (v - v.round()).abs() > 1e-9 || v < 0.0 {
                        return Err(usage("this parameter takes whole numbers"));
                    }
                    Ok(format!("{}", v.round() as u64))
                } else {
                    Ok(decimal(v))
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(Sweep { param, values })
    }
}

/// Shortest decimal text of `v` rounded to nine places.
fn decimal(v: f64) -> String {
    let s = format!("{:.9}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".into()
    } else {
        s.to_string()
    }
}
