use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use num_complex::Complex64;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use zetaphase::argtrack::PathConfig;
use zetaphase::fmt::g17;
use zetaphase::zeros::{find_zeros, import_zeros, ZeroFormat, ZeroRecord};
use zetaphase::zeta::EvalConfig;

use crate::manifest::{InputDigest, RunManifest};

/// Bad flag combinations or values that clap cannot check by itself.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// A statistical precondition (too few samples) failed.
#[derive(Debug)]
pub struct StatsError(pub String);

impl fmt::Display for StatsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for StatsError {}

pub fn usage_error(e: clap::Error) -> anyhow::Error {
    anyhow::Error::new(e)
}

/// 0 success, 2 domain or usage, 3 statistical precondition, 4 I/O.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<StatsError>() {
            return 3;
        }
        if cause.is::<UsageError>() || cause.is::<clap::Error>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<zetaphase::Error>() {
            return match e {
                zetaphase::Error::TooFewSamples(_) => 3,
                zetaphase::Error::Parse { .. } | zetaphase::Error::Monotonicity { .. } => 4,
                _ => 2,
            };
        }
        if cause.is::<std::io::Error>() || cause.is::<csv::Error>() || cause.is::<serde_json::Error>() {
            return 4;
        }
    }
    2
}

pub fn thread_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        if n == 0 {
            bail!(UsageError("--jobs must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    Ok(builder.build()?)
}

/// State collected during a run for the manifest.
pub struct RunContext {
    subcommand: String,
    argv: Vec<String>,
    jobs: Option<usize>,
    pub eval_config: Option<EvalConfig>,
    pub path_config: Option<PathConfig>,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<PathBuf>,
    pub records: u64,
    pub flagged: u64,
    pub errors: u64,
}

impl RunContext {
    pub fn new(subcommand: &str, argv: Vec<String>, jobs: Option<usize>) -> Self {
        RunContext {
            subcommand: subcommand.to_string(),
            argv,
            jobs,
            eval_config: None,
            path_config: None,
            inputs: Vec::new(),
            outputs: Vec::new(),
            records: 0,
            flagged: 0,
            errors: 0,
        }
    }

    pub fn default_manifest_path(&self) -> Option<PathBuf> {
        self.outputs.first().map(|p| {
            let mut name = p.as_os_str().to_owned();
            name.push(".manifest.json");
            PathBuf::from(name)
        })
    }

    /// Read an input file whole and record its digest.
    pub fn read_input(&mut self, path: &Path) -> Result<Vec<u8>> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        let digest = Sha256::digest(&bytes);
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
            bytes: bytes.len() as u64,
        });
        Ok(bytes)
    }

    pub fn write_output(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.outputs.push(path.to_path_buf());
        Ok(())
    }

    pub fn finish(&self, wall: Duration) -> RunManifest {
        let env: BTreeMap<String, String> = std::env::vars().filter(|(k, _)| k.starts_with("ZP_")).collect();
        RunManifest {
            tool: "zetaphase".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            subcommand: self.subcommand.clone(),
            argv: self.argv.clone(),
            env,
            jobs: self.jobs,
            eval_config: self.eval_config,
            path_config: self.path_config,
            inputs: self.inputs.clone(),
            outputs: self.outputs.iter().map(|p| p.display().to_string()).collect(),
            wall_time_seconds: wall.as_secs_f64(),
            records: self.records,
            flagged: self.flagged,
            errors: self.errors,
        }
    }
}

#[derive(Args, Clone, Debug)]
pub struct EvalArgs {
    /// Summed terms per unit of max(|t|/2π, 10) in Euler–Maclaurin.
    #[arg(long, env = "ZP_EM_TERMS_FACTOR", default_value_t = EvalConfig::default().em_terms_factor)]
    pub em_terms_factor: f64,
    /// Bernoulli correction terms.
    #[arg(long, env = "ZP_BERNOULLI_DEPTH", default_value_t = EvalConfig::default().bernoulli_depth)]
    pub bernoulli_depth: usize,
    /// Real part from which the plain Dirichlet series is used.
    #[arg(long, env = "ZP_DIRICHLET_SIGMA_MIN", default_value_t = EvalConfig::default().dirichlet_sigma_min)]
    pub dirichlet_sigma_min: f64,
    #[arg(long, env = "ZP_TARGET_ERROR", default_value_t = EvalConfig::default().target_abs_error)]
    pub target_error: f64,
}

impl EvalArgs {
    pub fn config(&self, ctx: &mut RunContext) -> Result<EvalConfig> {
        let cfg = EvalConfig {
            em_terms_factor: self.em_terms_factor,
            bernoulli_depth: self.bernoulli_depth,
            dirichlet_sigma_min: self.dirichlet_sigma_min,
            target_abs_error: self.target_error,
        };
        cfg.validate()?;
        ctx.eval_config = Some(cfg);
        Ok(cfg)
    }
}

#[derive(Args, Clone, Debug)]
pub struct PathArgs {
    /// Horizontal grid step.
    #[arg(long, env = "ZP_DX", default_value_t = PathConfig::default().dx)]
    pub dx: f64,
    /// Real part where the vertical leg runs.
    #[arg(long, env = "ZP_SIGMA_START", default_value_t = PathConfig::default().sigma_start)]
    pub sigma_start: f64,
    /// Phase step (radians) above which a step is subdivided.
    #[arg(long, env = "ZP_SLIP_THRESHOLD", default_value_t = PathConfig::default().slip_threshold)]
    pub slip_threshold: f64,
    #[arg(long, env = "ZP_MAX_REFINE_DEPTH", default_value_t = PathConfig::default().max_refine_depth)]
    pub max_refine_depth: u32,
}

impl PathArgs {
    pub fn config(&self, ctx: &mut RunContext) -> Result<PathConfig> {
        let cfg = PathConfig {
            dx: self.dx,
            sigma_start: self.sigma_start,
            slip_threshold: self.slip_threshold,
            max_refine_depth: self.max_refine_depth,
        };
        cfg.validate()?;
        ctx.path_config = Some(cfg);
        Ok(cfg)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    /// Indexed if the first data line has two fields, plain otherwise.
    Auto,
    /// One ordinate per line.
    Plain,
    /// `k gamma` per line.
    Indexed,
}

#[derive(Args, Clone, Debug)]
pub struct ZeroSource {
    /// Locate zeros with T_LO < γ < T_HI.
    #[arg(long, num_args = 2, value_names = ["T_LO", "T_HI"], required_unless_present = "import", conflicts_with = "import")]
    pub find: Option<Vec<f64>>,
    /// Read zeros from a table.
    #[arg(long, value_name = "FILE")]
    pub import: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TableFormat::Auto)]
    pub format: TableFormat,
    /// Index of the first ordinate in a plain table.
    #[arg(long, default_value_t = 1)]
    pub first_index: u64,
}

impl ZeroSource {
    pub fn load(&self, ecfg: &EvalConfig, ctx: &mut RunContext) -> Result<Vec<ZeroRecord>> {
        if let Some(range) = &self.find {
            return Ok(find_zeros(range[0], range[1], ecfg)?);
        }
        let path = self.import.as_ref().expect("clap enforces a zero source");
        let bytes = ctx.read_input(path)?;
        let format = match self.format {
            TableFormat::Plain => ZeroFormat::Plain,
            TableFormat::Indexed => ZeroFormat::Indexed,
            TableFormat::Auto => detect_format(&bytes),
        };
        let first = (format == ZeroFormat::Plain).then_some(self.first_index);
        import_zeros(&bytes[..], format, first).with_context(|| format!("parsing {}", path.display()))
    }
}

fn detect_format(bytes: &[u8]) -> ZeroFormat {
    let text = String::from_utf8_lossy(bytes);
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    match first.map(|l| l.split_whitespace().count()) {
        Some(2) => ZeroFormat::Indexed,
        _ => ZeroFormat::Plain,
    }
}

/// `a + bi` with 17 significant digits.
pub fn complex_text(z: Complex64) -> String {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{} {sign} {}i", g17(z.re), g17(z.im.abs()))
}

/// Parse `2`, `0.5+14.1i`, `-1.5-2i`, `3i` or `0.5,14.1`.
pub fn parse_complex(text: &str) -> std::result::Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number {text:?}");
    if let Some((re, im)) = t.split_once(',') {
        return Ok(Complex64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?));
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is not part of an exponent or the leading sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}
