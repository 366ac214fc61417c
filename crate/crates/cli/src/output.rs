//! Output sinks and 17-significant-digit JSON.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use ymscalar::{Error, Result};

/// Pretty JSON whose floats are printed like the CSV columns, `{:.16e}`.
struct FixedDigits<'a>(PrettyFormatter<'a>);

impl Formatter for FixedDigits<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{}", ymscalar::grid::fmt_f64(v))
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedDigits(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// Where a command writes its data (`out`) and summary (`summary`).
///
/// Files are created before any computation so an unwritable path fails
/// early. Without `out` the CSV goes to stdout and the summary, if it has no
/// file of its own, to stderr; otherwise the summary goes to stdout.
pub struct Sinks {
    data: Option<BufWriter<File>>,
    summary: Option<BufWriter<File>>,
}

fn create(key: &str, path: Option<PathBuf>) -> Result<Option<BufWriter<File>>> {
    path.map(|p| {
        File::create(&p).map(BufWriter::new).map_err(|e| Error::Config {
            key: key.to_string(),
            message: format!("cannot write `{}`: {e}", p.display()),
        })
    })
    .transpose()
}

impl Sinks {
    pub fn open(out: Option<PathBuf>, summary: Option<PathBuf>) -> Result<Self> {
        Ok(Sinks {
            data: create("out", out)?,
            summary: create("summary", summary)?,
        })
    }

    pub fn write_data(&mut self, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
        match &mut self.data {
            Some(w) => {
                f(w)?;
                w.flush()?;
            }
            None => {
                let stdout = io::stdout();
                let mut lock = stdout.lock();
                f(&mut lock)?;
                lock.flush()?;
            }
        }
        Ok(())
    }

    pub fn write_summary(&mut self, value: &serde_json::Value) -> Result<()> {
        let text = to_json(value)?;
        match (&mut self.summary, self.data.is_some()) {
            (Some(w), _) => {
                w.write_all(text.as_bytes())?;
                w.flush()?;
            }
            (None, true) => io::stdout().write_all(text.as_bytes())?,
            (None, false) => io::stderr().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}
