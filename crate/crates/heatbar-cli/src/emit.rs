//! Output files. Every file opens with a '#' provenance block (tool
//! version, mode, full config echo), so a result can always be rerun from
//! its own header. Floats print in shortest round-trip form; rows end with
//! '\n'.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use crate::config::RunConfig;
use crate::error::{CliError, Result};

#[derive(Debug)]
pub struct CsvFile {
    path: PathBuf,
    w: BufWriter<File>,
}

/// The comment block shared by every output file.
pub fn header_block(cfg: &RunConfig, mode: &str) -> String {
    let mut s = format!("# heatbar {}\n# mode = {mode}\n", env!("CARGO_PKG_VERSION"));
    for line in cfg.echo().lines() {
        s.push_str("# ");
        s.push_str(line);
        s.push('\n');
    }
    s
}

pub fn create(cfg: &RunConfig, mode: &str, name: &str, columns: &str) -> Result<CsvFile> {
    let dir = &cfg.out_dir;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
    let mut w = BufWriter::new(file);
    write!(w, "{}", header_block(cfg, mode)).map_err(|e| CliError::io(&path, e))?;
    writeln!(w, "{columns}").map_err(|e| CliError::io(&path, e))?;
    Ok(CsvFile { path, w })
}

impl CsvFile {
    pub fn row(&mut self, row: std::fmt::Arguments<'_>) -> Result<()> {
        writeln!(self.w, "{row}").map_err(|e| CliError::io(&self.path, e))
    }

    pub fn finish(mut self) -> Result<PathBuf> {
        self.w.flush().map_err(|e| CliError::io(&self.path, e))?;
        Ok(self.path)
    }
}

/// The human-readable report variant: same provenance header, plain body.
pub fn write_text(cfg: &RunConfig, mode: &str, name: &str, body: &str) -> Result<PathBuf> {
    let dir = &cfg.out_dir;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    let mut text = header_block(cfg, mode);
    text.push('\n');
    text.push_str(body);
    fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}
