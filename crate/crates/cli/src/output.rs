use std::fmt;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or invalid input, or an unusable output path (exit 2).
    Input(String),
    /// A numerical procedure failed (exit 3).
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<barron_core::Error> for CliError {
    fn from(e: barron_core::Error) -> Self {
        match e {
            barron_core::Error::Numerical(_) => CliError::Numerical(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

/// CSV with a header row and a trailing `# toolversion,seed,timestamp` line.
pub struct CsvTable {
    writer: csv::Writer<Vec<u8>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> CliResult<Self> {
        let mut writer = csv::Writer::from_writer(vec![]);
        writer.write_record(header)?;
        Ok(Self { writer })
    }

    pub fn row(&mut self, fields: &[String]) -> CliResult<()> {
        self.writer.write_record(fields)?;
        Ok(())
    }

    /// Writes the table; `seed` is the metadata seed field (`;`-joined for
    /// sweeps, `none` for seedless demos).
    pub fn finish(self, path: &Path, seed: &str) -> CliResult<()> {
        let mut bytes = self.writer.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
        let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        bytes.extend_from_slice(
            format!("# {},{},{}\n", env!("CARGO_PKG_VERSION"), seed, stamp).as_bytes(),
        );
        write_file(path, &bytes)
    }
}

pub fn seed_field(seeds: &[u64]) -> String {
    seeds.iter().map(u64::to_string).collect::<Vec<_>>().join(";")
}
