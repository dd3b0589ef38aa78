//! Self-describing CSV data files and the run manifest.
//!
//! Every data file starts with `# key: value` lines followed by a CSV table.
//! Numbers are written with Rust's shortest round-trip formatting, which is
//! locale independent and exact on re-read.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use lamesrc::forward::{FrequencySweepData, GridField, ReceiverArray, TimeSeriesData};
use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Header block of a data file, kept in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Header(pub Vec<(String, String)>);

impl Header {
    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.0.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn require<T: std::str::FromStr>(&self, key: &str, file: &Path) -> Result<T, CliError> {
        let v = self
            .get(key)
            .ok_or_else(|| CliError::Config(format!("{}: missing header `{key}`", file.display())))?;
        v.parse()
            .map_err(|_| CliError::Config(format!("{}: header `{key}` has bad value {v:?}", file.display())))
    }
}

/// A parsed table: header block, column names and numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Header,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: Header, columns: &[&str]) -> Self {
        Self {
            header,
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, CliError> {
        let mut out = Vec::new();
        for (k, v) in &self.header.0 {
            out.extend_from_slice(format!("# {k}: {v}\n").as_bytes());
        }
        {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&self.columns)?;
            for r in &self.rows {
                w.write_record(r.iter().map(|v| v.to_string()))?;
            }
            w.flush()?;
        }
        Ok(out)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut header = Header::default();
        let mut body = String::new();
        for line in text.lines() {
            match line.strip_prefix("# ") {
                Some(h) => {
                    let (k, v) = h
                        .split_once(": ")
                        .ok_or_else(|| CliError::Config(format!("{}: bad header line {line:?}", path.display())))?;
                    header.0.push((k.to_string(), v.to_string()));
                }
                None => {
                    body.push_str(line);
                    body.push('\n');
                }
            }
        }
        let mut r = csv::Reader::from_reader(body.as_bytes());
        let columns: Vec<String> = r.headers()?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let row = rec
                .iter()
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|_| CliError::Config(format!("{}: non-numeric value {s:?}", path.display())))
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Ok(Self { header, columns, rows })
    }

    fn column(&self, name: &str, file: &Path) -> Result<usize, CliError> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| CliError::Config(format!("{}: missing column `{name}`", file.display())))
    }
}

/// Collects output files and their hashes for the manifest.
pub struct OutputDir {
    root: PathBuf,
    files: BTreeMap<String, String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|e| CliError::Io(format!("{}: {e}", root.display())))?;
        Ok(Self {
            root: root.to_path_buf(),
            files: BTreeMap::new(),
        })
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let p = self.root.join(name);
        fs::write(&p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        self.files.insert(name.to_string(), hex(&Sha256::digest(bytes)));
        Ok(())
    }

    pub fn write_table(&mut self, name: &str, t: &Table) -> Result<(), CliError> {
        self.write_bytes(name, &t.to_bytes()?)
    }

    /// Writes `manifest.json`: command, config echo and output hashes.
    pub fn finish<C: Serialize>(self, command: &str, config: &C, extra: BTreeMap<String, String>) -> Result<PathBuf, CliError> {
        #[derive(Serialize)]
        struct Manifest<'a, C> {
            command: &'a str,
            version: &'a str,
            config: &'a C,
            inputs: BTreeMap<String, String>,
            outputs: BTreeMap<String, String>,
        }
        let m = Manifest {
            command,
            version: env!("CARGO_PKG_VERSION"),
            config,
            inputs: extra,
            outputs: self.files,
        };
        let mut text = serde_json::to_string_pretty(&m).map_err(|e| CliError::Io(e.to_string()))?;
        text.push('\n');
        let p = self.root.join("manifest.json");
        fs::write(&p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        Ok(p)
    }
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn file_hash(path: &Path) -> Result<String, CliError> {
    let b = fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(hex(&Sha256::digest(b)))
}

const SWEEP_COLS_2: [&str; 9] = ["receiver", "x", "y", "z", "omega", "u1_re", "u1_im", "u2_re", "u2_im"];
const SWEEP_COLS_3: [&str; 11] = [
    "receiver", "x", "y", "z", "omega", "u1_re", "u1_im", "u2_re", "u2_im", "u3_re", "u3_im",
];
const SWEEP_COLS_1: [&str; 7] = ["receiver", "x", "y", "z", "omega", "u_re", "u_im"];

/// One row per (receiver, frequency).
pub fn sweep_table(header: Header, d: &FrequencySweepData) -> Table {
    let cols: &[&str] = match d.components() {
        1 => &SWEEP_COLS_1,
        2 => &SWEEP_COLS_2,
        _ => &SWEEP_COLS_3,
    };
    let header = header
        .with("kind", "frequency_sweep")
        .with("dim", d.receivers().dim())
        .with("receivers", d.receivers().len())
        .with("components", d.components())
        .with("frequencies", d.omegas().len());
    let mut t = Table::new(header, cols);
    for (j, p) in d.receivers().points().iter().enumerate() {
        for (k, &w) in d.omegas().iter().enumerate() {
            let mut row = vec![j as f64, p[0], p[1], p[2], w];
            for c in 0..d.components() {
                let v = d.get(j, c, k);
                row.push(v.re);
                row.push(v.im);
            }
            t.push(row);
        }
    }
    t
}

pub fn read_sweep(path: &Path) -> Result<FrequencySweepData, CliError> {
    let t = Table::read(path)?;
    if t.header.get("kind") != Some("frequency_sweep") {
        return Err(CliError::Config(format!("{}: not a frequency sweep file", path.display())));
    }
    let dim: usize = t.header.require("dim", path)?;
    let m: usize = t.header.require("receivers", path)?;
    let nc: usize = t.header.require("components", path)?;
    let nw: usize = t.header.require("frequencies", path)?;
    if t.rows.len() != m * nw {
        return Err(CliError::Config(format!(
            "{}: expected {} rows, found {}",
            path.display(),
            m * nw,
            t.rows.len()
        )));
    }
    let cx = t.column("x", path)?;
    let cw = t.column("omega", path)?;
    let first = cw + 1;
    if t.columns.len() != first + 2 * nc {
        return Err(CliError::Config(format!("{}: column count does not match {nc} components", path.display())));
    }
    let points: Vec<[f64; 3]> = (0..m).map(|j| {
        let r = &t.rows[j * nw];
        [r[cx], r[cx + 1], r[cx + 2]]
    }).collect();
    let omegas: Vec<f64> = t.rows[..nw].iter().map(|r| r[cw]).collect();
    let rec = ReceiverArray::from_points(dim, points)?;
    let mut d = FrequencySweepData::zeros(rec, nc, omegas)?;
    for j in 0..m {
        for k in 0..nw {
            let r = &t.rows[j * nw + k];
            for c in 0..nc {
                d.set(j, c, k, Complex64::new(r[first + 2 * c], r[first + 2 * c + 1]));
            }
        }
    }
    Ok(d)
}

/// One row per (receiver, time).
pub fn series_table(header: Header, s: &TimeSeriesData) -> Table {
    let nc = s.components();
    let mut cols = vec!["receiver", "x", "y", "z", "t"];
    cols.extend(["u1", "u2", "u3"].iter().take(nc));
    let header = header
        .with("kind", "time_series")
        .with("dim", s.receivers().dim())
        .with("receivers", s.receivers().len())
        .with("components", nc)
        .with("t0", s.t0())
        .with("dt", s.dt())
        .with("samples", s.len_time());
    let mut t = Table::new(header, &cols);
    let times = s.times();
    for (j, p) in s.receivers().points().iter().enumerate() {
        for (n, &tt) in times.iter().enumerate() {
            let mut row = vec![j as f64, p[0], p[1], p[2], tt];
            for c in 0..nc {
                row.push(s.trace(j, c)[n]);
            }
            t.push(row);
        }
    }
    t
}

pub fn read_series(path: &Path) -> Result<TimeSeriesData, CliError> {
    let t = Table::read(path)?;
    if t.header.get("kind") != Some("time_series") {
        return Err(CliError::Config(format!("{}: not a time series file", path.display())));
    }
    let dim: usize = t.header.require("dim", path)?;
    let m: usize = t.header.require("receivers", path)?;
    let nc: usize = t.header.require("components", path)?;
    let nt: usize = t.header.require("samples", path)?;
    let t0: f64 = t.header.require("t0", path)?;
    let dt: f64 = t.header.require("dt", path)?;
    if t.rows.len() != m * nt || t.columns.len() != 5 + nc {
        return Err(CliError::Config(format!("{}: table does not match its header", path.display())));
    }
    let cx = t.column("x", path)?;
    let points: Vec<[f64; 3]> = (0..m).map(|j| {
        let r = &t.rows[j * nt];
        [r[cx], r[cx + 1], r[cx + 2]]
    }).collect();
    let rec = ReceiverArray::from_points(dim, points)?;
    let mut s = TimeSeriesData::zeros(rec, nc, t0, dt, nt)?;
    for j in 0..m {
        for c in 0..nc {
            let tr = s.trace_mut(j, c);
            for (n, v) in tr.iter_mut().enumerate() {
                *v = t.rows[j * nt + n][5 + c];
            }
        }
    }
    Ok(s)
}

/// One row per cell centre with one column per component of each field.
/// The fields must share a layout.
pub fn grid_table(header: Header, fields: &[&GridField], names: &[&str]) -> Table {
    let g = fields[0];
    let dim = g.dim();
    let mut cols: Vec<&str> = ["x", "y", "z"][..dim].to_vec();
    cols.extend_from_slice(names);
    let header = header
        .with("kind", "grid")
        .with("dim", dim)
        .with("shape", g.shape().iter().map(|s| s.to_string()).collect::<Vec<_>>().join("x"))
        .with("origin", g.origin().iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "))
        .with("spacing", g.spacing().iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "));
    let mut t = Table::new(header, &cols);
    for i in 0..g.len() {
        let p = g.point(i);
        let mut row = p[..dim].to_vec();
        for f in fields {
            debug_assert!(f.same_layout(g));
            for c in 0..f.components() {
                row.push(f.component(c)[i]);
            }
        }
        t.push(row);
    }
    t
}

/// Reads the named columns of a grid file as components on `layout`'s cells.
pub fn read_grid_columns(path: &Path, columns: &[&str], layout: &GridField) -> Result<GridField, CliError> {
    let t = Table::read(path)?;
    if t.header.get("kind") != Some("grid") {
        return Err(CliError::Config(format!("{}: not a grid file", path.display())));
    }
    let shape = layout.shape().iter().map(|s| s.to_string()).collect::<Vec<_>>().join("x");
    if t.header.get("shape") != Some(shape.as_str()) {
        return Err(CliError::Config(format!(
            "{}: grid shape {:?} does not match the reconstruction grid {shape}",
            path.display(),
            t.header.get("shape").unwrap_or("?")
        )));
    }
    if t.rows.len() != layout.len() {
        return Err(CliError::Config(format!("{}: expected {} cells, found {}", path.display(), layout.len(), t.rows.len())));
    }
    let mut vals = Vec::with_capacity(columns.len() * layout.len());
    for name in columns {
        let c = t.column(name, path)?;
        vals.extend(t.rows.iter().map(|r| r[c]));
    }
    Ok(layout.with_values(columns.len(), vals)?)
}
