//! Diagnostics log written to `causalkg.log` inside a chosen directory.

use std::fs::OpenOptions;
use std::path::Path;

use log::LevelFilter;

use crate::error::{Error, Result};

pub const LOG_FILE_NAME: &str = "causalkg.log";

/// Maps numeric verbosity (10 debug, 20 info, 30 warning, 40 error) to a
/// level filter. Values in between round up to the next named level.
pub fn level_filter(level: u32) -> LevelFilter {
    match level {
        0 => LevelFilter::Trace,
        1..=10 => LevelFilter::Debug,
        11..=20 => LevelFilter::Info,
        21..=30 => LevelFilter::Warn,
        31..=40 => LevelFilter::Error,
        _ => LevelFilter::Off,
    }
}

/// Installs the process-wide logger, appending to `dir/causalkg.log`.
/// Only the first call per process takes effect.
pub fn init(dir: &Path, level: u32) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(Error::io(dir))?;
    let path = dir.join(LOG_FILE_NAME);
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&path)
        .map_err(Error::io(&path))?;
    let installed = env_logger::Builder::new()
        .filter_level(level_filter(level))
        .target(env_logger::Target::Pipe(Box::new(file)))
        .format_timestamp_millis()
        .try_init();
    if installed.is_err() {
        log::debug!("logger already installed; {} not attached", path.display());
    }
    Ok(())
}
