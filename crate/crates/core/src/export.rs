//! CSV and JSON result files.
//!
//! CSV columns are `trial,delay_drawn,reference_detected,aligned_peak_bins,success`
//! with peak bins joined by `;`. JSON holds the run summary and the records
//! under their struct field names. Neither format carries timestamps, so the
//! output bytes depend only on the scenario and seed.

use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulation::{Summary, TrialRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::validation(
                "format",
                format!("unknown format {other:?}; use csv or json"),
            )),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    trial: usize,
    delay_drawn: usize,
    reference_detected: usize,
    aligned_peak_bins: String,
    success: bool,
}

impl From<&TrialRecord> for CsvRow {
    fn from(r: &TrialRecord) -> Self {
        let bins: Vec<String> = r.aligned_peak_bins.iter().map(usize::to_string).collect();
        CsvRow {
            trial: r.trial_index,
            delay_drawn: r.delay_drawn,
            reference_detected: r.reference_detected,
            aligned_peak_bins: bins.join(";"),
            success: r.success,
        }
    }
}

impl TryFrom<CsvRow> for TrialRecord {
    type Error = Error;

    fn try_from(row: CsvRow) -> Result<Self> {
        let aligned_peak_bins = if row.aligned_peak_bins.is_empty() {
            Vec::new()
        } else {
            row.aligned_peak_bins
                .split(';')
                .map(|b| {
                    b.parse::<usize>()
                        .map_err(|e| Error::Export(format!("bad peak bin {b:?}: {e}")))
                })
                .collect::<Result<_>>()?
        };
        Ok(TrialRecord {
            trial_index: row.trial,
            delay_drawn: row.delay_drawn,
            reference_detected: row.reference_detected,
            aligned_peak_bins,
            success: row.success,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunDocument {
    pub summary: Summary,
    pub records: Vec<TrialRecord>,
}

fn csv_err(e: csv::Error) -> Error {
    Error::Export(e.to_string())
}

pub fn write_records_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(CsvRow::from(r)).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Export(e.to_string()))
}

pub fn read_records_csv<R: std::io::Read>(input: R) -> Result<Vec<TrialRecord>> {
    csv::Reader::from_reader(input)
        .deserialize::<CsvRow>()
        .map(|row| row.map_err(csv_err).and_then(TrialRecord::try_from))
        .collect()
}

pub fn write_json<W: Write>(records: &[TrialRecord], summary: &Summary, out: W) -> Result<()> {
    let doc = RunDocument {
        summary: summary.clone(),
        records: records.to_vec(),
    };
    serde_json::to_writer_pretty(out, &doc).map_err(|e| Error::Export(e.to_string()))
}

pub fn read_json<R: std::io::Read>(input: R) -> Result<RunDocument> {
    serde_json::from_reader(input).map_err(|e| Error::Export(e.to_string()))
}

/// One row per trial: `trial,bin_0,…,bin_{N-1}`.
pub fn write_magnitudes_csv<W: Write>(rows: &[Vec<f64>], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let n = rows.first().map_or(0, Vec::len);
    let mut header = vec!["trial".to_string()];
    header.extend((0..n).map(|k| format!("bin_{k}")));
    w.write_record(&header).map_err(csv_err)?;
    for (i, row) in rows.iter().enumerate() {
        let mut rec = vec![i.to_string()];
        rec.extend(row.iter().map(f64::to_string));
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Export(e.to_string()))
}

pub fn export_results(
    records: &[TrialRecord],
    summary: &Summary,
    format: Format,
    path: &Path,
) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let out = std::io::BufWriter::new(file);
    match format {
        Format::Csv => write_records_csv(records, out),
        Format::Json => write_json(records, summary, out),
    }
}

pub fn export_magnitudes(rows: &[Vec<f64>], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_magnitudes_csv(rows, std::io::BufWriter::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn records() -> Vec<TrialRecord> {
        vec![
            TrialRecord {
                trial_index: 0,
                delay_drawn: 12,
                reference_detected: 12,
                aligned_peak_bins: vec![0, 16, 32],
                success: true,
            },
            TrialRecord {
                trial_index: 1,
                delay_drawn: 99,
                reference_detected: 99,
                aligned_peak_bins: vec![0],
                success: false,
            },
        ]
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_records_csv(&records(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines,
            vec![
                "trial,delay_drawn,reference_detected,aligned_peak_bins,success",
                "0,12,12,0;16;32,true",
                "1,99,99,0,false",
            ]
        );
        assert_eq!(read_records_csv(text.as_bytes()).unwrap(), records());
    }

    #[test]
    fn unwritable_path_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("missing").join("out.csv");
        let summary = crate::simulation::Summary {
            label: String::new(),
            trials: 0,
            successes: 0,
            success_rate: 0.0,
            expected_bins: vec![],
            delay_histogram: vec![],
            peak_histogram: vec![],
            reproducibility_hash: String::new(),
        };
        let err = export_results(&records(), &summary, Format::Csv, &path).unwrap_err();
        assert_eq!(err.category(), crate::ErrorCategory::Runtime);
    }

    #[test]
    fn format_parsing() {
        assert_eq!("CSV".parse::<Format>().unwrap(), Format::Csv);
        assert_eq!("json".parse::<Format>().unwrap(), Format::Json);
        assert!("xml".parse::<Format>().is_err());
    }

    #[test]
    fn magnitude_dump_header() {
        let mut buf = Vec::new();
        write_magnitudes_csv(&[vec![1.5, 0.0, 2.0]], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "trial,bin_0,bin_1,bin_2\n0,1.5,0,2\n"
        );
    }
}
