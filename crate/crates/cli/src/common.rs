use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use linewatch::pipeline::RunConfig;
use linewatch::Exec;

pub const EXIT_OK: u8 = 0;
pub const EXIT_ALERTS: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<linewatch::Error> for CliError {
    fn from(e: linewatch::Error) -> Self {
        CliError::Data(e.into())
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Data(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

pub fn data_err(msg: impl fmt::Display) -> CliError {
    CliError::Data(anyhow::anyhow!("{msg}"))
}

pub fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Data(anyhow::Error::new(e).context(path.display().to_string()))
}

/// Flags accepted by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct Globals {
    /// Run configuration (TOML key = value); flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory, or output file for single-file commands.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Seed for randomized steps (overrides the config).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

impl Globals {
    pub fn init_logging(&self) {
        let level = match self.verbose {
            0 => "warn",
            1 => "info",
            _ => "debug",
        };
        env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
            .format_timestamp(None)
            .init();
    }

    pub fn exec(&self) -> CliResult<Exec> {
        match self.threads {
            Some(0) => usage("--threads must be at least 1"),
            Some(1) => Ok(Exec::Sequential),
            Some(n) => {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .map_err(|e| data_err(format!("thread pool: {e}")))?;
                Ok(Exec::Parallel)
            }
            None => Ok(Exec::Parallel),
        }
    }

    /// Config file (or defaults) with `--seed` applied.
    pub fn run_config(&self) -> CliResult<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
                RunConfig::from_toml_str(&text)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?
            }
            None => RunConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        Ok(cfg)
    }

    pub fn out_or(&self, default: &str) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from(default))
    }
}

pub fn create_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| data_err(e))? + "\n";
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// One column of a headed CSV file, keyed by the `id` column when present.
pub struct Column {
    pub ids: Option<Vec<String>>,
    pub values: Vec<String>,
}

pub fn read_column(path: &Path, names: &[&str]) -> CliResult<Column> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| data_err(format!("{}: {e}", path.display())))?;
    let headers = rdr
        .headers()
        .map_err(|e| data_err(format!("{}: {e}", path.display())))?
        .clone();
    let find = |n: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(n));
    let col = names.iter().find_map(|n| find(n)).ok_or_else(|| {
        data_err(format!("{}: no column named {}", path.display(), names.join(" or ")))
    })?;
    let id_col = find("id");
    let (mut ids, mut values) = (Vec::new(), Vec::new());
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| data_err(format!("{}: {e}", path.display())))?;
        let get = |c: usize| {
            rec.get(c)
                .map(str::to_string)
                .ok_or_else(|| data_err(format!("{}: row {} is short", path.display(), k + 2)))
        };
        values.push(get(col)?);
        if let Some(c) = id_col {
            ids.push(get(c)?);
        }
    }
    Ok(Column {
        ids: id_col.map(|_| ids),
        values,
    })
}

pub fn parse_f64(path: &Path, s: &str) -> CliResult<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| data_err(format!("{}: not a finite number: {s:?}", path.display())))
}

pub fn parse_bool(path: &Path, s: &str) -> CliResult<bool> {
    match s.to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "alarm" | "positive" => Ok(true),
        "0" | "false" | "no" | "normal" | "negative" => Ok(false),
        _ => Err(data_err(format!("{}: not a binary label: {s:?}", path.display()))),
    }
}

/// Scores and labels aligned by `id` when both files carry one, otherwise
/// by row order. A labels file is optional when the scores file has a
/// `label` column.
pub fn read_scores_labels(scores: &Path, labels: Option<&Path>) -> CliResult<(Vec<f64>, Vec<bool>)> {
    let s = read_column(scores, &["score", "metric", "m"])?;
    let l = read_column(labels.unwrap_or(scores), &["label", "alarm", "y"])?;
    let sv: Vec<f64> = s.values.iter().map(|v| parse_f64(scores, v)).collect::<CliResult<_>>()?;
    let lpath = labels.unwrap_or(scores);
    let lv: Vec<bool> = l.values.iter().map(|v| parse_bool(lpath, v)).collect::<CliResult<_>>()?;
    match (&s.ids, &l.ids, labels.is_some()) {
        (Some(sid), Some(lid), true) => {
            let by_id: HashMap<&str, bool> = lid.iter().map(String::as_str).zip(lv.iter().copied()).collect();
            let mut out_l = Vec::with_capacity(sid.len());
            for id in sid {
                out_l.push(
                    *by_id
                        .get(id.as_str())
                        .ok_or_else(|| data_err(format!("{}: no label for id {id}", lpath.display())))?,
                );
            }
            Ok((sv, out_l))
        }
        _ => {
            if sv.len() != lv.len() {
                return Err(data_err(format!(
                    "{} scores but {} labels",
                    sv.len(),
                    lv.len()
                )));
            }
            Ok((sv, lv))
        }
    }
}
