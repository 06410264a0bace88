//! Run manifests: one `key TAB value` line per field.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub subcommand: String,
    /// Resolved argument values, in declaration order.
    pub args: Vec<(String, String)>,
    pub seed: Option<u64>,
    pub version: String,
    pub duration: Duration,
}

impl RunManifest {
    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "subcommand\t{}", self.subcommand).unwrap();
        for (k, v) in &self.args {
            writeln!(s, "arg.{k}\t{v}").unwrap();
        }
        if let Some(seed) = self.seed {
            writeln!(s, "seed\t{seed}").unwrap();
        }
        writeln!(s, "version\t{}", self.version).unwrap();
        writeln!(s, "duration_secs\t{:.6}", self.duration.as_secs_f64()).unwrap();
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut subcommand = None;
        let mut args = Vec::new();
        let mut seed = None;
        let mut version = String::new();
        let mut duration = Duration::ZERO;
        for (n, line) in text.lines().enumerate() {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('\t') else {
                bail!("manifest line {}: expected `key<TAB>value`", n + 1);
            };
            match key {
                "subcommand" => subcommand = Some(value.to_string()),
                "seed" => seed = Some(value.parse().with_context(|| format!("manifest line {}: bad seed", n + 1))?),
                "version" => version = value.to_string(),
                "duration_secs" => {
                    let secs: f64 = value.parse().with_context(|| format!("manifest line {}: bad duration", n + 1))?;
                    duration = Duration::from_secs_f64(secs.max(0.0));
                }
                _ => match key.strip_prefix("arg.") {
                    Some(name) if !name.is_empty() => args.push((name.to_string(), value.to_string())),
                    _ => bail!("manifest line {}: unknown key {key:?}", n + 1),
                },
            }
        }
        let Some(subcommand) = subcommand else {
            bail!("manifest has no subcommand line");
        };
        Ok(Self {
            subcommand,
            args,
            seed,
            version,
            duration,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading manifest {}", path.display()))?;
        Self::parse(&text)
    }

    /// Command-line tokens that re-run the recorded invocation.
    pub fn replay_args(&self) -> Vec<String> {
        let mut argv = vec![self.subcommand.clone()];
        argv.extend(self.args.iter().map(|(k, v)| format!("--{k}={v}")));
        argv
    }
}

/// Where a run's manifest goes: next to the primary output, or stderr.
pub fn manifest_path(out: Option<&Path>) -> Option<PathBuf> {
    out.map(|p| {
        let mut s = p.as_os_str().to_owned();
        s.push(".manifest");
        PathBuf::from(s)
    })
}
