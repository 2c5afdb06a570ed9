//! Evaluation of the feature catalog over a dataset and the resulting
//! job-by-column matrix, including its CSV and layout serialization.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{
    basic, change, location, model_fits, nonlinearity, reoccurrence, spectral, AdfAttr, Feature,
    FeatureSpec, FftAttr, Param, TrendAttr,
};
use crate::ingest::{Dataset, SeriesKey};

/// Structured identity of one matrix column.
///
/// The rendered label is `{node}_{kpi}_{feature}` with `__{param}` appended
/// for parameterized features. Labels are for display and file headers; the
/// structured form is the authority, since node and KPI names may themselves
/// contain underscores.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ColumnId {
    pub node: String,
    pub kpi: String,
    pub feature: Feature,
    #[serde(
        serialize_with = "serialize_param",
        skip_serializing_if = "Option::is_none"
    )]
    pub param: Option<Param>,
}

fn serialize_param<S: serde::Serializer>(
    param: &Option<Param>,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    match param {
        Some(p) => serializer.serialize_str(&p.render()),
        None => serializer.serialize_none(),
    }
}

impl<'de> Deserialize<'de> for ColumnId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let entry = ColumnEntry::deserialize(deserializer)?;
        column_from_entry(entry).map_err(|e| serde::de::Error::custom(e.to_string()))
    }
}

fn column_from_entry(entry: ColumnEntry) -> Result<ColumnId, MatrixFileError> {
    let param = match &entry.param {
        None => None,
        Some(s) => Some(entry.feature.parse_param(s).ok_or_else(|| {
            MatrixFileError::UnknownParam {
                feature: entry.feature.name().to_string(),
                param: s.clone(),
            }
        })?),
    };
    Ok(ColumnId {
        node: entry.node,
        kpi: entry.kpi,
        feature: entry.feature,
        param,
    })
}

impl ColumnId {
    pub fn label(&self) -> String {
        match &self.param {
            Some(p) => format!(
                "{}_{}_{}__{}",
                self.node,
                self.kpi,
                self.feature.name(),
                p.render()
            ),
            None => format!("{}_{}_{}", self.node, self.kpi, self.feature.name()),
        }
    }

    /// Rendered parameter, empty for parameterless columns.
    pub fn param_string(&self) -> String {
        self.param.map(|p| p.render()).unwrap_or_default()
    }
}

/// Why a matrix cell was imputed with zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImputationReason {
    /// The extractor produced a mathematically undefined value.
    UndefinedValue,
    /// The job emitted no samples for this (node, kpi) pair.
    MissingSeries,
}

/// One imputed cell, logged as a JSONL record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImputationEvent {
    pub job: String,
    pub column: String,
    pub reason: ImputationReason,
}

/// Job-by-column matrix of feature values.
///
/// Rows follow the dataset's sorted job order and columns are sorted by
/// (node, kpi, feature name, rendered parameter). Cells are always finite:
/// undefined or missing values are imputed during extraction.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    jobs: Vec<String>,
    columns: Vec<ColumnId>,
    labels: Vec<String>,
    values: Vec<Vec<f64>>,
    scaled: bool,
}

impl FeatureMatrix {
    /// Assembles a matrix from parts. Panics on inconsistent shapes; this
    /// is a programmer error, not an input error.
    pub fn new(
        jobs: Vec<String>,
        columns: Vec<ColumnId>,
        values: Vec<Vec<f64>>,
        scaled: bool,
    ) -> FeatureMatrix {
        assert_eq!(jobs.len(), values.len(), "one row of values per job");
        for row in &values {
            assert_eq!(row.len(), columns.len(), "one value per column");
        }
        let labels = columns.iter().map(ColumnId::label).collect();
        FeatureMatrix {
            jobs,
            columns,
            labels,
            values,
            scaled,
        }
    }

    pub fn jobs(&self) -> &[String] {
        &self.jobs
    }

    pub fn columns(&self) -> &[ColumnId] {
        &self.columns
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn scaled(&self) -> bool {
        self.scaled
    }

    pub fn n_rows(&self) -> usize {
        self.jobs.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column_values(&self, col: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[col]).collect()
    }

    pub fn column_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Restricts the matrix to the named columns, in the order given.
    /// Returns `None` if any label is absent.
    pub fn select_columns(&self, labels: &[String]) -> Option<FeatureMatrix> {
        let indices: Option<Vec<usize>> =
            labels.iter().map(|l| self.column_index(l)).collect();
        let indices = indices?;
        let columns = indices.iter().map(|&i| self.columns[i].clone()).collect();
        let values = self
            .values
            .iter()
            .map(|row| indices.iter().map(|&i| row[i]).collect())
            .collect();
        Some(FeatureMatrix::new(
            self.jobs.clone(),
            columns,
            values,
            self.scaled,
        ))
    }

    /// Writes the matrix as CSV: header `job,<labels…>`, one row per job,
    /// values in shortest round-trip decimal form.
    pub fn write_csv(&self, path: &Path) -> Result<(), MatrixFileError> {
        let mut out = BufWriter::new(File::create(path)?);
        write!(out, "job")?;
        for label in &self.labels {
            write!(out, ",{label}")?;
        }
        writeln!(out)?;
        for (job, row) in self.jobs.iter().zip(&self.values) {
            write!(out, "{job}")?;
            for v in row {
                write!(out, ",{v}")?;
            }
            writeln!(out)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a matrix CSV against a known column layout. The header must
    /// match the layout's labels exactly, order included.
    pub fn read_csv(
        path: &Path,
        columns: Vec<ColumnId>,
        scaled: bool,
    ) -> Result<FeatureMatrix, MatrixFileError> {
        let reader = BufReader::new(File::open(path)?);
        let mut lines = reader.lines();
        let header = lines.next().transpose()?.ok_or(MatrixFileError::Parse {
            line: 1,
            detail: "empty file".into(),
        })?;
        let expected: Vec<String> = columns.iter().map(ColumnId::label).collect();
        let mut fields = header.split(',');
        if fields.next() != Some("job") {
            return Err(MatrixFileError::Parse {
                line: 1,
                detail: "header must start with `job`".into(),
            });
        }
        let got: Vec<&str> = fields.collect();
        if got.len() != expected.len() || got.iter().zip(&expected).any(|(g, e)| g != e) {
            return Err(MatrixFileError::LayoutMismatch {
                detail: format!(
                    "header has {} feature columns, layout describes {}",
                    got.len(),
                    expected.len()
                ),
            });
        }
        let mut jobs = Vec::new();
        let mut values = Vec::new();
        for (idx, line) in lines.enumerate() {
            let line = line?;
            let lineno = idx + 2;
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let job = fields.next().unwrap_or_default();
            if job.is_empty() {
                return Err(MatrixFileError::Parse {
                    line: lineno,
                    detail: "missing job id".into(),
                });
            }
            let row: Result<Vec<f64>, _> = fields
                .map(|f| {
                    f.parse::<f64>().map_err(|_| MatrixFileError::Parse {
                        line: lineno,
                        detail: format!("invalid value {f:?}"),
                    })
                })
                .collect();
            let row = row?;
            if row.len() != columns.len() {
                return Err(MatrixFileError::Parse {
                    line: lineno,
                    detail: format!(
                        "expected {} values, found {}",
                        columns.len(),
                        row.len()
                    ),
                });
            }
            jobs.push(job.to_string());
            values.push(row);
        }
        Ok(FeatureMatrix::new(jobs, columns, values, scaled))
    }

    /// Writes the column layout (and the scaled flag) as JSON.
    pub fn write_layout(&self, path: &Path) -> Result<(), MatrixFileError> {
        let file = LayoutFile {
            scaled: self.scaled,
            columns: self
                .columns
                .iter()
                .map(|c| ColumnEntry {
                    node: c.node.clone(),
                    kpi: c.kpi.clone(),
                    feature: c.feature,
                    param: c.param.map(|p| p.render()),
                })
                .collect(),
        };
        let mut out = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut out, &file)?;
        writeln!(out)?;
        out.flush()?;
        Ok(())
    }

    /// Reads a layout JSON back into column identities plus the scaled flag.
    pub fn read_layout(path: &Path) -> Result<(Vec<ColumnId>, bool), MatrixFileError> {
        let file: LayoutFile = serde_json::from_reader(BufReader::new(File::open(path)?))?;
        let mut columns = Vec::with_capacity(file.columns.len());
        for entry in file.columns {
            columns.push(column_from_entry(entry)?);
        }
        Ok((columns, file.scaled))
    }

    /// Reads a matrix from its CSV and layout files.
    pub fn load(csv_path: &Path, layout_path: &Path) -> Result<FeatureMatrix, MatrixFileError> {
        let (columns, scaled) = FeatureMatrix::read_layout(layout_path)?;
        FeatureMatrix::read_csv(csv_path, columns, scaled)
    }

    /// Builds an identically shaped matrix with new cell values.
    pub fn with_values(&self, values: Vec<Vec<f64>>, scaled: bool) -> FeatureMatrix {
        FeatureMatrix::new(self.jobs.clone(), self.columns.clone(), values, scaled)
    }
}

#[derive(Serialize, Deserialize)]
struct LayoutFile {
    scaled: bool,
    columns: Vec<ColumnEntry>,
}

#[derive(Serialize, Deserialize)]
struct ColumnEntry {
    node: String,
    kpi: String,
    feature: Feature,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    param: Option<String>,
}

/// An extracted matrix together with its imputation log.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub matrix: FeatureMatrix,
    pub imputations: Vec<ImputationEvent>,
}

impl Extraction {
    /// Writes the imputation log as JSONL, one event per line.
    pub fn write_imputation_log(&self, path: &Path) -> Result<(), MatrixFileError> {
        let mut out = BufWriter::new(File::create(path)?);
        for event in &self.imputations {
            serde_json::to_writer(&mut out, event)?;
            writeln!(out)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Errors reading or writing matrix artifacts.
#[derive(Debug, Error)]
pub enum MatrixFileError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("layout JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {detail}")]
    Parse { line: usize, detail: String },
    #[error("matrix does not match layout: {detail}")]
    LayoutMismatch { detail: String },
    #[error("feature {feature} has no parameter {param:?}")]
    UnknownParam { feature: String, param: String },
}

/// Evaluates the expanded feature pairs for one series.
///
/// `pairs` must come from [`FeatureSpec::expand`] or from a parsed layout;
/// undefined results are returned as NaN for the caller's imputation
/// policy.
pub fn evaluate_series(x: &[f64], pairs: &[(Feature, Option<Param>)]) -> Vec<f64> {
    let mut evaluator = Evaluator::new(x);
    pairs
        .iter()
        .map(|&(feature, param)| evaluator.value(feature, param))
        .collect()
}

/// Extracts the feature matrix for every job in the dataset.
///
/// One row per job, one column per (node, kpi, expanded feature), columns
/// sorted by (node, kpi, feature name, rendered parameter). Cells for
/// missing (job, node, kpi) series and mathematically undefined results are
/// imputed with 0 and logged.
pub fn extract_matrix(dataset: &Dataset, specs: &[FeatureSpec]) -> Extraction {
    let mut pairs = FeatureSpec::expand(specs);
    pairs.sort_by(|a, b| {
        let ka = (a.0.name(), a.1.map(|p| p.render()).unwrap_or_default());
        let kb = (b.0.name(), b.1.map(|p| p.render()).unwrap_or_default());
        ka.cmp(&kb)
    });

    let mut columns = Vec::with_capacity(
        dataset.nodes().len() * dataset.kpis().len() * pairs.len(),
    );
    for node in dataset.nodes() {
        for kpi in dataset.kpis() {
            for &(feature, param) in &pairs {
                columns.push(ColumnId {
                    node: node.clone(),
                    kpi: kpi.clone(),
                    feature,
                    param,
                });
            }
        }
    }
    let labels: Vec<String> = columns.iter().map(ColumnId::label).collect();

    let mut values = Vec::with_capacity(dataset.jobs().len());
    let mut imputations = Vec::new();
    for job in dataset.jobs() {
        let mut row = Vec::with_capacity(columns.len());
        for node in dataset.nodes() {
            for kpi in dataset.kpis() {
                let key = SeriesKey {
                    job: job.clone(),
                    node: node.clone(),
                    kpi: kpi.clone(),
                };
                match dataset.get(&key) {
                    Some(series) => {
                        for v in evaluate_series(&series.values, &pairs) {
                            if v.is_finite() {
                                row.push(v);
                            } else {
                                imputations.push(ImputationEvent {
                                    job: job.clone(),
                                    column: labels[row.len()].clone(),
                                    reason: ImputationReason::UndefinedValue,
                                });
                                row.push(0.0);
                            }
                        }
                    }
                    None => {
                        for _ in 0..pairs.len() {
                            imputations.push(ImputationEvent {
                                job: job.clone(),
                                column: labels[row.len()].clone(),
                                reason: ImputationReason::MissingSeries,
                            });
                            row.push(0.0);
                        }
                    }
                }
            }
        }
        values.push(row);
    }

    let matrix = FeatureMatrix::new(dataset.jobs().to_vec(), columns, values, false);
    Extraction {
        matrix,
        imputations,
    }
}

/// Per-series evaluator that shares expensive intermediates (sorted values,
/// spectra, model fits) across the columns of one series.
struct Evaluator<'a> {
    x: &'a [f64],
    sorted: Option<Vec<f64>>,
    welch: Option<Vec<f64>>,
    fft: Option<[f64; 4]>,
    trend: Option<model_fits::LinearTrend>,
    ar: Option<Vec<f64>>,
    friedrich: Option<[f64; 4]>,
    adf: Option<model_fits::AdfOutcome>,
}

impl<'a> Evaluator<'a> {
    fn new(x: &'a [f64]) -> Evaluator<'a> {
        Evaluator {
            x,
            sorted: None,
            welch: None,
            fft: None,
            trend: None,
            ar: None,
            friedrich: None,
            adf: None,
        }
    }

    fn sorted(&mut self) -> &[f64] {
        self.sorted.get_or_insert_with(|| {
            let mut s = self.x.to_vec();
            s.sort_unstable_by(f64::total_cmp);
            s
        })
    }

    fn value(&mut self, feature: Feature, param: Option<Param>) -> f64 {
        match (feature, param) {
            (Feature::AbsEnergy, None) => basic::abs_energy(self.x),
            (Feature::AbsoluteSumOfChanges, None) => change::absolute_sum_of_changes(self.x),
            (Feature::BinnedEntropy, None) => reoccurrence::binned_entropy(self.x),
            (Feature::CountAboveMean, None) => location::count_above_mean(self.x),
            (Feature::CountBelowMean, None) => location::count_below_mean(self.x),
            (Feature::FirstLocationOfMaximum, None) => {
                location::first_location_of_maximum(self.x)
            }
            (Feature::FirstLocationOfMinimum, None) => {
                location::first_location_of_minimum(self.x)
            }
            (Feature::Kurtosis, None) => basic::kurtosis(self.x),
            (Feature::Length, None) => self.x.len() as f64,
            (Feature::LongestStrikeAboveMean, None) => {
                location::longest_strike_above_mean(self.x)
            }
            (Feature::LongestStrikeBelowMean, None) => {
                location::longest_strike_below_mean(self.x)
            }
            (Feature::Maximum, None) => basic::maximum(self.x),
            (Feature::Mean, None) => basic::mean(self.x),
            (Feature::MeanAbsChange, None) => change::mean_abs_change(self.x),
            (Feature::MeanChange, None) => change::mean_change(self.x),
            (Feature::MeanSecondDerivativeCentral, None) => {
                change::mean_second_derivative_central(self.x)
            }
            (Feature::Median, None) => basic::quantile_sorted(self.sorted(), 0.5),
            (Feature::Minimum, None) => basic::minimum(self.x),
            (Feature::PercentageOfReoccurringDatapointsToAllDatapoints, None) => {
                reoccurrence::percentage_of_reoccurring_datapoints_to_all_datapoints(self.x)
            }
            (Feature::PercentageOfReoccurringValuesToAllValues, None) => {
                reoccurrence::percentage_of_reoccurring_values_to_all_values(self.x)
            }
            (Feature::SampleEntropy, None) => nonlinearity::sample_entropy(self.x),
            (Feature::Skewness, None) => basic::skewness(self.x),
            (Feature::StandardDeviation, None) => basic::standard_deviation(self.x),
            (Feature::Variance, None) => basic::variance(self.x),
            (Feature::Quantile, Some(Param::Quantile(t))) => {
                basic::quantile_sorted(self.sorted(), t as f64 / 10.0)
            }
            (Feature::IndexMassQuantile, Some(Param::Quantile(t))) => {
                location::index_mass_quantile(self.x, t as f64 / 10.0)
            }
            (Feature::Autocorrelation, Some(Param::Lag(l))) => {
                nonlinearity::autocorrelation(self.x, l)
            }
            (Feature::C3, Some(Param::Lag(l))) => nonlinearity::c3(self.x, l),
            (Feature::TimeReversalAsymmetryStatistic, Some(Param::Lag(l))) => {
                nonlinearity::time_reversal_asymmetry_statistic(self.x, l)
            }
            (Feature::NumberPeaks, Some(Param::Support(s))) => {
                location::number_peaks(self.x, s)
            }
            (Feature::SpktWelchDensity, Some(Param::Coeff(c))) => {
                let x = self.x;
                let psd = self.welch.get_or_insert_with(|| spectral::welch_psd(x));
                psd.get(c).copied().unwrap_or(f64::NAN)
            }
            (Feature::FftAggregated, Some(Param::Fft(attr))) => {
                let x = self.x;
                let agg = self.fft.get_or_insert_with(|| spectral::fft_aggregated(x));
                match attr {
                    FftAttr::Centroid => agg[0],
                    FftAttr::Variance => agg[1],
                    FftAttr::Skew => agg[2],
                    FftAttr::Kurtosis => agg[3],
                }
            }
            (Feature::LinearTrend, Some(Param::Trend(attr))) => {
                let x = self.x;
                let fit = self.trend.get_or_insert_with(|| model_fits::linear_trend(x));
                match attr {
                    TrendAttr::Intercept => fit.intercept,
                    TrendAttr::Pvalue => fit.pvalue,
                    TrendAttr::Rvalue => fit.rvalue,
                    TrendAttr::Slope => fit.slope,
                    TrendAttr::Stderr => fit.stderr,
                }
            }
            (Feature::ArCoefficient, Some(Param::Coeff(c))) => {
                let x = self.x;
                let coeffs = self.ar.get_or_insert_with(|| model_fits::ar_coefficients(x));
                coeffs.get(c).copied().unwrap_or(f64::NAN)
            }
            (Feature::FriedrichCoefficients, Some(Param::Coeff(c))) => {
                let x = self.x;
                let coeffs = self
                    .friedrich
                    .get_or_insert_with(|| model_fits::friedrich_coefficients(x));
                coeffs.get(c).copied().unwrap_or(f64::NAN)
            }
            (Feature::AugmentedDickeyFuller, Some(Param::Adf(attr))) => {
                let x = self.x;
                let outcome = self
                    .adf
                    .get_or_insert_with(|| model_fits::augmented_dickey_fuller(x));
                match attr {
                    AdfAttr::Pvalue => outcome.pvalue,
                    AdfAttr::Teststat => outcome.teststat,
                    AdfAttr::Usedlag => outcome.usedlag,
                }
            }
            (feature, param) => unreachable!(
                "feature {} cannot take parameter {param:?}",
                feature.name()
            ),
        }
    }
}
