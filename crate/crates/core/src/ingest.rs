//! Telemetry ingestion.
//!
//! Raw monitoring exports arrive as flat sample files, one row per
//! (kpi, job, node, timestamp) observation. Parsing validates each row in
//! isolation; [`assemble`] then groups samples into time-ordered series and
//! indexes them for the feature extractor.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

/// Expected CSV header, in order.
pub const CSV_HEADER: [&str; 5] = ["kpi", "job", "node", "timestamp", "value"];

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("malformed row at line {line}: {detail}")]
    MalformedRow { line: u64, detail: String },
    #[error("non-finite value at line {line}")]
    NonFiniteValue { line: u64 },
    #[error("duplicate sample for ({kpi}, {job}, {node}) at timestamp {timestamp}")]
    DuplicateSample {
        kpi: String,
        job: String,
        node: String,
        timestamp: u64,
    },
    #[error("no samples to assemble")]
    EmptyDataset,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One telemetry observation.
#[derive(Debug, Clone, PartialEq)]
pub struct KpiSample {
    pub kpi: String,
    pub job: String,
    pub node: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub value: f64,
}

/// Identity of one time series: a KPI measured for a job on a node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeriesKey {
    pub job: String,
    pub node: String,
    pub kpi: String,
}

/// A time-ordered series of samples for one [`SeriesKey`].
///
/// Timestamps are strictly increasing and values are finite; both are
/// enforced during parsing and assembly. A series is never empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub key: SeriesKey,
    pub timestamps: Vec<u64>,
    pub values: Vec<f64>,
}

impl Series {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// All ingested series, indexed by key, with sorted id vocabularies.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    series: BTreeMap<SeriesKey, Series>,
    jobs: Vec<String>,
    nodes: Vec<String>,
    kpis: Vec<String>,
}

impl Dataset {
    pub fn series(&self) -> &BTreeMap<SeriesKey, Series> {
        &self.series
    }

    pub fn get(&self, key: &SeriesKey) -> Option<&Series> {
        self.series.get(key)
    }

    /// Distinct job ids, sorted.
    pub fn jobs(&self) -> &[String] {
        &self.jobs
    }

    /// Distinct node ids, sorted.
    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    /// Distinct KPI names, sorted.
    pub fn kpis(&self) -> &[String] {
        &self.kpis
    }

    pub fn n_series(&self) -> usize {
        self.series.len()
    }

    pub fn n_samples(&self) -> usize {
        self.series.values().map(Series::len).sum()
    }
}

/// Supported on-disk sample formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Csv,
    Jsonl,
}

impl FileFormat {
    /// Picks a format from a file extension (`.csv` or `.jsonl`).
    pub fn from_path(path: &Path) -> Option<FileFormat> {
        match path.extension()?.to_str()? {
            "csv" => Some(FileFormat::Csv),
            "jsonl" => Some(FileFormat::Jsonl),
            _ => None,
        }
    }
}

/// Parses one sample file into validated samples, preserving file order.
pub fn parse_kpi_file(path: &Path, format: FileFormat) -> Result<Vec<KpiSample>, IngestError> {
    let file = std::fs::File::open(path)?;
    match format {
        FileFormat::Csv => parse_csv(file),
        FileFormat::Jsonl => parse_jsonl(file),
    }
}

/// Parses CSV samples with the header `kpi,job,node,timestamp,value`.
pub fn parse_csv<R: Read>(reader: R) -> Result<Vec<KpiSample>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    {
        let headers = rdr.headers().map_err(|e| csv_error(&e))?;
        if headers.len() != CSV_HEADER.len()
            || !headers.iter().eq(CSV_HEADER.iter().copied())
        {
            return Err(IngestError::MalformedRow {
                line: 1,
                detail: format!(
                    "expected header {}, found {:?}",
                    CSV_HEADER.join(","),
                    headers.iter().collect::<Vec<_>>().join(",")
                ),
            });
        }
    }

    let mut samples = Vec::new();
    let mut seen = HashSet::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(&e))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 5 {
            return Err(IngestError::MalformedRow {
                line,
                detail: format!("expected 5 fields, found {}", record.len()),
            });
        }
        let sample = validate_fields(
            line,
            &record[0],
            &record[1],
            &record[2],
            &record[3],
            &record[4],
        )?;
        check_duplicate(&mut seen, &sample)?;
        samples.push(sample);
    }
    Ok(samples)
}

/// Parses JSON Lines samples; each line is an object with the same five keys
/// as the CSV header. Blank lines are skipped.
pub fn parse_jsonl<R: Read>(reader: R) -> Result<Vec<KpiSample>, IngestError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct RawSample {
        kpi: String,
        job: String,
        node: String,
        timestamp: u64,
        value: f64,
    }

    let mut samples = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = idx as u64 + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawSample =
            serde_json::from_str(&line).map_err(|e| IngestError::MalformedRow {
                line: line_no,
                detail: e.to_string(),
            })?;
        if !raw.value.is_finite() {
            return Err(IngestError::NonFiniteValue { line: line_no });
        }
        if raw.kpi.is_empty() || raw.job.is_empty() || raw.node.is_empty() {
            return Err(IngestError::MalformedRow {
                line: line_no,
                detail: "empty identifier".into(),
            });
        }
        let sample = KpiSample {
            kpi: raw.kpi,
            job: raw.job,
            node: raw.node,
            timestamp: raw.timestamp,
            value: raw.value,
        };
        check_duplicate(&mut seen, &sample)?;
        samples.push(sample);
    }
    Ok(samples)
}

fn validate_fields(
    line: u64,
    kpi: &str,
    job: &str,
    node: &str,
    timestamp: &str,
    value: &str,
) -> Result<KpiSample, IngestError> {
    if kpi.is_empty() || job.is_empty() || node.is_empty() {
        return Err(IngestError::MalformedRow {
            line,
            detail: "empty identifier".into(),
        });
    }
    let timestamp: u64 = timestamp.parse().map_err(|_| IngestError::MalformedRow {
        line,
        detail: format!("bad timestamp {timestamp:?}"),
    })?;
    let value: f64 = value.parse().map_err(|_| IngestError::MalformedRow {
        line,
        detail: format!("bad value {value:?}"),
    })?;
    if !value.is_finite() {
        return Err(IngestError::NonFiniteValue { line });
    }
    Ok(KpiSample {
        kpi: kpi.to_string(),
        job: job.to_string(),
        node: node.to_string(),
        timestamp,
        value,
    })
}

fn check_duplicate(
    seen: &mut HashSet<(String, String, String, u64)>,
    sample: &KpiSample,
) -> Result<(), IngestError> {
    let key = (
        sample.kpi.clone(),
        sample.job.clone(),
        sample.node.clone(),
        sample.timestamp,
    );
    if !seen.insert(key) {
        return Err(IngestError::DuplicateSample {
            kpi: sample.kpi.clone(),
            job: sample.job.clone(),
            node: sample.node.clone(),
            timestamp: sample.timestamp,
        });
    }
    Ok(())
}

fn csv_error(err: &csv::Error) -> IngestError {
    let line = err.position().map_or(0, |p| p.line());
    IngestError::MalformedRow {
        line,
        detail: err.to_string(),
    }
}

/// Groups samples into series sorted by timestamp and builds the dataset
/// index. Sample order does not matter; the result depends only on content.
pub fn assemble(samples: Vec<KpiSample>) -> Result<Dataset, IngestError> {
    if samples.is_empty() {
        return Err(IngestError::EmptyDataset);
    }
    let mut grouped: BTreeMap<SeriesKey, Vec<(u64, f64)>> = BTreeMap::new();
    for s in samples {
        let key = SeriesKey {
            job: s.job,
            node: s.node,
            kpi: s.kpi,
        };
        grouped.entry(key).or_default().push((s.timestamp, s.value));
    }

    let mut series = BTreeMap::new();
    let mut jobs = BTreeSet::new();
    let mut nodes = BTreeSet::new();
    let mut kpis = BTreeSet::new();
    for (key, mut points) in grouped {
        points.sort_by_key(|&(t, _)| t);
        for pair in points.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(IngestError::DuplicateSample {
                    kpi: key.kpi.clone(),
                    job: key.job.clone(),
                    node: key.node.clone(),
                    timestamp: pair[0].0,
                });
            }
        }
        jobs.insert(key.job.clone());
        nodes.insert(key.node.clone());
        kpis.insert(key.kpi.clone());
        let (timestamps, values) = points.into_iter().unzip();
        series.insert(
            key.clone(),
            Series {
                key,
                timestamps,
                values,
            },
        );
    }
    Ok(Dataset {
        series,
        jobs: jobs.into_iter().collect(),
        nodes: nodes.into_iter().collect(),
        kpis: kpis.into_iter().collect(),
    })
}

/// True when an identifier can be written to CSV without quoting.
pub fn ident_ok(s: &str) -> bool {
    !s.is_empty()
        && s.bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'.' || b == b'-')
}

/// Writes samples in the CSV sample format. Identifiers are restricted to
/// `[A-Za-z0-9_.-]+` so the output never needs quoting.
pub fn write_csv<W: Write>(mut w: W, samples: &[KpiSample]) -> Result<(), IngestError> {
    writeln!(w, "{}", CSV_HEADER.join(","))?;
    for (i, s) in samples.iter().enumerate() {
        if !(ident_ok(&s.kpi) && ident_ok(&s.job) && ident_ok(&s.node)) {
            return Err(IngestError::MalformedRow {
                line: i as u64 + 2,
                detail: "identifier outside [A-Za-z0-9_.-]+".into(),
            });
        }
        writeln!(
            w,
            "{},{},{},{},{}",
            s.kpi, s.job, s.node, s.timestamp, s.value
        )?;
    }
    Ok(())
}
