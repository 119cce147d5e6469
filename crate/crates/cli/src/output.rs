use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::ArgMatches;
use tempfile::NamedTempFile;

use crate::error::CliError;

/// Global settings plus the resolved arguments of the running subcommand.
pub struct Context {
    pub out_dir: PathBuf,
    pub seed: u64,
    command: Vec<String>,
    resolved: Vec<(String, String)>,
}

impl Context {
    pub fn new(out_dir: PathBuf, seed: u64, command: Vec<String>, leaf: &ArgMatches) -> Result<Self, CliError> {
        fs::create_dir_all(&out_dir)
            .map_err(|e| CliError::Usage(format!("{}: {e}", out_dir.display())))?;
        let mut resolved: Vec<(String, String)> = leaf
            .ids()
            .filter(|id| id.as_str() != "config")
            // Flattened argument structs register a group named after the struct.
            .filter(|id| !id.as_str().starts_with(char::is_uppercase))
            .filter_map(|id| {
                let raw = leaf.get_raw(id.as_str())?;
                let vals: Vec<String> = raw.map(|v| v.to_string_lossy().into_owned()).collect();
                Some((id.as_str().replace('_', "-"), vals.join(",")))
            })
            .collect();
        resolved.sort();
        Ok(Context {
            out_dir,
            seed,
            command,
            resolved,
        })
    }

    /// Output path: absolute names are kept, relative ones land in `out_dir`.
    pub fn output(&self, name: &Path) -> PathBuf {
        if name.is_absolute() {
            name.to_path_buf()
        } else {
            self.out_dir.join(name)
        }
    }

    /// Writes `path` through a temporary file in the same directory.
    pub fn write_atomic<F>(&self, path: &Path, fill: F) -> Result<(), CliError>
    where
        F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
    {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))?;
        let mut tmp = NamedTempFile::new_in(dir)?;
        {
            let mut w = BufWriter::new(tmp.as_file_mut());
            fill(&mut w)?;
            w.flush()?;
        }
        tmp.persist(path).map_err(|e| CliError::Runtime(format!("{}: {}", path.display(), e.error)))?;
        Ok(())
    }

    /// Resolved `key=value` flags, loadable again with `--config`.
    pub fn echo(&self) -> String {
        let mut s = format!("# mftransfer {}\n", self.command.join(" "));
        for (k, v) in &self.resolved {
            s.push_str(&format!("{k}={v}\n"));
        }
        s
    }

    /// Writes the echo next to `artifact` as `<artifact>.config`.
    pub fn write_echo(&self, artifact: &Path) -> Result<PathBuf, CliError> {
        let mut name = artifact.as_os_str().to_owned();
        name.push(".config");
        let path = PathBuf::from(name);
        let text = self.echo();
        self.write_atomic(&path, |w| Ok(w.write_all(text.as_bytes())?))?;
        Ok(path)
    }
}
