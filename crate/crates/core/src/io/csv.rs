use std::cmp::Ordering;
use std::path::Path;

use crate::circuit::Scheme;
use crate::experiment::{IntensityRecord, Mode};
use crate::{Error, Result};

pub const CSV_HEADER: [&str; 12] = [
    "scheme", "alpha", "phi", "branch", "mode", "e0", "e1", "joint_e0", "branch_prob", "shots",
    "stderr0", "stderr1",
];

/// Renders `v` with 12 significant digits and no trailing zeros.
///
/// Magnitudes in `[1e-4, 1e15)` use positional notation, anything else uses
/// `e` notation (`3.74939945665e-33`). Zero (of either sign) is `0`.
pub fn format_value(v: f64) -> String {
    if v == 0.0 {
        return "0".to_owned();
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    let mag = rounded.abs();
    if (1e-4..1e15).contains(&mag) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

fn record_order(a: &IntensityRecord, b: &IntensityRecord) -> Ordering {
    a.alpha
        .total_cmp(&b.alpha)
        .then(a.phi.total_cmp(&b.phi))
        .then(a.branch.cmp(&b.branch))
}

fn record_row(r: &IntensityRecord) -> [String; 12] {
    [
        r.scheme.label().to_owned(),
        format_value(r.alpha),
        format_value(r.phi),
        opt(r.branch, |b| b.to_string()),
        r.mode.label().to_owned(),
        format_value(r.e0),
        format_value(r.e1),
        opt(r.joint_e0, format_value),
        opt(r.branch_prob, format_value),
        opt(r.shots_used, |s| s.to_string()),
        opt(r.stderr0, format_value),
        opt(r.stderr1, format_value),
    ]
}

fn to_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = ::csv::WriterBuilder::new()
        .terminator(::csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let csv_err = |e: ::csv::Error| Error::Csv(e.to_string());
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| Error::Csv(e.to_string()))
}

/// CSV text for `records`, sorted by `(alpha, phi, branch)`.
pub fn records_to_csv(records: &[IntensityRecord]) -> Result<String> {
    let mut sorted: Vec<&IntensityRecord> = records.iter().collect();
    sorted.sort_by(|a, b| record_order(a, b));
    let bytes = to_bytes(&CSV_HEADER, sorted.into_iter().map(|r| record_row(r).to_vec()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is ASCII"))
}

pub fn write_csv(records: &[IntensityRecord], path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, records_to_csv(records)?)?;
    Ok(())
}

/// An arbitrary table with the same quoting and newline rules as [`records_to_csv`].
pub fn table_to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    Ok(String::from_utf8(to_bytes(header, rows)?).expect("CSV output is ASCII"))
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<IntensityRecord>> {
    parse_records(&std::fs::read_to_string(path)?)
}

/// Parses CSV produced by [`records_to_csv`].
pub fn parse_records(text: &str) -> Result<Vec<IntensityRecord>> {
    let mut rdr = ::csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| Error::Csv(e.to_string()))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Csv(format!("unexpected header {header:?}")));
    }
    let mut out = Vec::new();
    for (line, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| Error::Csv(e.to_string()))?;
        let bad = |field: &str| Error::Csv(format!("row {}: bad `{field}`", line + 1));
        let num = |i: usize| -> Result<f64> { row[i].parse().map_err(|_| bad(CSV_HEADER[i])) };
        let opt_num = |i: usize| -> Result<Option<f64>> {
            if row[i].is_empty() {
                Ok(None)
            } else {
                num(i).map(Some)
            }
        };
        out.push(IntensityRecord {
            scheme: row[0].parse::<Scheme>().map_err(|_| bad("scheme"))?,
            alpha: num(1)?,
            phi: num(2)?,
            branch: match &row[3] {
                "" => None,
                b => Some(b.parse().map_err(|_| bad("branch"))?),
            },
            mode: row[4].parse::<Mode>().map_err(|_| bad("mode"))?,
            e0: num(5)?,
            e1: num(6)?,
            joint_e0: opt_num(7)?,
            branch_prob: opt_num(8)?,
            shots_used: match &row[9] {
                "" => None,
                s => Some(s.parse().map_err(|_| bad("shots"))?),
            },
            stderr0: opt_num(10)?,
            stderr1: opt_num(11)?,
        });
    }
    Ok(out)
}
