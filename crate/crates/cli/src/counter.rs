//! Session-counter state file: a single decimal integer, updated under an
//! advisory lock only after the operation that consumed it succeeded.

use std::fs::{File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::os::unix::io::AsRawFd;
use std::path::Path;

use ahnn_core::cipher::COUNTER_MAX;

use crate::CliError;

pub struct CounterFile {
    file: File,
}

impl CounterFile {
    /// Opens (creating if missing) and exclusively locks the counter file.
    /// The lock is held until the value is drained or dropped.
    pub fn open(path: &Path) -> Result<Self, CliError> {
        let file = OpenOptions::new()
            .read(true)
            .write(true)
            .create(true)
            .truncate(false)
            .open(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let rc = unsafe { libc::flock(file.as_raw_fd(), libc::LOCK_EX) };
        if rc != 0 {
            return Err(CliError::Io(format!(
                "{}: cannot lock counter file",
                path.display()
            )));
        }
        Ok(CounterFile { file })
    }

    pub fn read(&mut self) -> Result<u16, CliError> {
        let mut text = String::new();
        self.file
            .seek(SeekFrom::Start(0))
            .and_then(|_| self.file.read_to_string(&mut text))
            .map_err(|e| CliError::Io(format!("counter file: {e}")))?;
        let text = text.trim();
        if text.is_empty() {
            return Ok(0);
        }
        let value: u16 = text
            .parse()
            .map_err(|_| CliError::Format(format!("counter file holds '{text}', not an integer")))?;
        if value > COUNTER_MAX {
            return Err(CliError::Format(format!(
                "counter file value {value} exceeds {COUNTER_MAX}"
            )));
        }
        Ok(value)
    }

    /// Writes the successor of `used` (wrapping past the maximum).
    pub fn advance(&mut self, used: u16) -> Result<(), CliError> {
        let next = if used >= COUNTER_MAX { 0 } else { used + 1 };
        self.file
            .seek(SeekFrom::Start(0))
            .and_then(|_| self.file.set_len(0))
            .and_then(|_| writeln!(self.file, "{next}"))
            .map_err(|e| CliError::Io(format!("counter file: {e}")))
    }
}
