//! Min-max scaling and feature-column selection.
//!
//! Selection runs on the scaled matrix and comes in two modes:
//!
//! * **variance threshold** keeps columns whose sample variance is at least
//!   `p * (1 - p)`, the variance a Bernoulli(p) indicator would have, so `p`
//!   reads as "drop anything less informative than a coin that lands one way
//!   with probability p";
//! * **literature preset** keeps a fixed list of 29 feature families drawn
//!   from published feature-filtering practice, intersected with the columns
//!   the matrix actually has.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{Feature, FeatureMatrix, FeatureSpec, Param};

/// Which rule produced a [`SelectionReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionMode {
    VarianceThreshold,
    LiteraturePreset,
}

/// Outcome of a selection pass: the kept column labels plus enough context
/// to audit the decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub mode: SelectionMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    /// Sample variance of every column of the input matrix, keyed by label.
    pub column_variances: BTreeMap<String, f64>,
    /// Labels of the kept columns, in matrix column order.
    pub selected: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Error, PartialEq)]
pub enum SelectError {
    #[error("matrix is already min-max scaled")]
    AlreadyScaled,
    #[error("selection requires a min-max scaled matrix")]
    NotScaled,
    #[error("matrix has {n} rows; at least 2 are needed")]
    TooShort { n: usize },
    #[error("selection probability must be strictly between 0 and 1, got {p}")]
    InvalidP { p: f64 },
    #[error("preset feature {name} has no columns in this matrix")]
    UnknownFeature { name: String },
}

/// Rescales every column to [0, 1]. A constant column becomes all zeros.
pub fn min_max_scale(matrix: &FeatureMatrix) -> Result<FeatureMatrix, SelectError> {
    if matrix.scaled() {
        return Err(SelectError::AlreadyScaled);
    }
    if matrix.n_rows() == 0 {
        return Err(SelectError::TooShort { n: 0 });
    }
    let mut values = matrix.values().to_vec();
    for col in 0..matrix.n_cols() {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for row in matrix.values() {
            min = min.min(row[col]);
            max = max.max(row[col]);
        }
        let span = max - min;
        for row in &mut values {
            row[col] = if span > 0.0 { (row[col] - min) / span } else { 0.0 };
        }
    }
    Ok(matrix.with_values(values, true))
}

/// Sample variance with the n-1 denominator.
pub fn column_variance(x: &[f64]) -> Result<f64, SelectError> {
    if x.len() < 2 {
        return Err(SelectError::TooShort { n: x.len() });
    }
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    let ss: f64 = x.iter().map(|v| (v - mean) * (v - mean)).sum();
    Ok(ss / (x.len() - 1) as f64)
}

/// The variance of a Bernoulli(p) indicator, used as the selection cut.
pub fn variance_threshold(p: f64) -> f64 {
    p * (1.0 - p)
}

/// Keeps columns whose sample variance is at least `p * (1 - p)`.
/// Ties at the threshold are kept.
pub fn variance_threshold_select(
    matrix: &FeatureMatrix,
    p: f64,
) -> Result<SelectionReport, SelectError> {
    if !matrix.scaled() {
        return Err(SelectError::NotScaled);
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(SelectError::InvalidP { p });
    }
    let threshold = variance_threshold(p);
    let (column_variances, variances) = all_column_variances(matrix)?;
    let selected = matrix
        .labels()
        .iter()
        .zip(&variances)
        .filter(|&(_, &v)| v >= threshold)
        .map(|(l, _)| l.clone())
        .collect();
    let note = (p == 0.85).then(|| {
        format!(
            "p = 0.85 gives threshold p*(1-p) = {threshold}; \
             the same cut is commonly tabulated as 0.12 in prior work"
        )
    });
    Ok(SelectionReport {
        mode: SelectionMode::VarianceThreshold,
        p: Some(p),
        threshold: Some(threshold),
        column_variances,
        selected,
        note,
    })
}

/// Keeps the columns named by the 29-entry literature preset.
///
/// Preset parameters the matrix never materialized (for example peak
/// support 25, which the extraction catalog does not produce) are silently
/// skipped, but a preset feature family with no columns at all is an error:
/// it means the matrix was extracted with an incompatible feature list.
pub fn literature_preset_select(
    matrix: &FeatureMatrix,
) -> Result<SelectionReport, SelectError> {
    if !matrix.scaled() {
        return Err(SelectError::NotScaled);
    }
    let specs = literature_preset();
    for spec in &specs {
        if !matrix.columns().iter().any(|c| c.feature == spec.feature) {
            return Err(SelectError::UnknownFeature {
                name: spec.feature.name().to_string(),
            });
        }
    }
    let wanted = FeatureSpec::expand(&specs);
    let selected = matrix
        .columns()
        .iter()
        .zip(matrix.labels())
        .filter(|(c, _)| wanted.contains(&(c.feature, c.param)))
        .map(|(_, l)| l.clone())
        .collect();
    let (column_variances, _) = all_column_variances(matrix)?;
    Ok(SelectionReport {
        mode: SelectionMode::LiteraturePreset,
        p: None,
        threshold: None,
        column_variances,
        selected,
        note: None,
    })
}

/// The fixed selection preset: 20 parameterless features plus 9
/// parameterized families, 29 entries in all.
pub fn literature_preset() -> Vec<FeatureSpec> {
    use Feature::*;
    let plain = |feature| FeatureSpec {
        feature,
        params: vec![],
    };
    // Every catalog parameter of the family.
    let all = |feature: Feature| FeatureSpec {
        feature,
        params: feature.catalog_params().into_iter().flatten().collect(),
    };
    vec![
        plain(AbsEnergy),
        plain(AbsoluteSumOfChanges),
        plain(BinnedEntropy),
        plain(FirstLocationOfMaximum),
        plain(FirstLocationOfMinimum),
        plain(Kurtosis),
        plain(LongestStrikeAboveMean),
        plain(LongestStrikeBelowMean),
        plain(Maximum),
        plain(Mean),
        plain(MeanAbsChange),
        plain(MeanChange),
        plain(MeanSecondDerivativeCentral),
        plain(Median),
        plain(Minimum),
        plain(PercentageOfReoccurringDatapointsToAllDatapoints),
        plain(PercentageOfReoccurringValuesToAllValues),
        plain(SampleEntropy),
        plain(Skewness),
        plain(Variance),
        all(Quantile),
        all(IndexMassQuantile),
        FeatureSpec {
            feature: Autocorrelation,
            params: vec![Param::Lag(1), Param::Lag(3), Param::Lag(5), Param::Lag(8)],
        },
        FeatureSpec {
            feature: NumberPeaks,
            params: vec![
                Param::Support(5),
                Param::Support(10),
                Param::Support(20),
                Param::Support(25),
                Param::Support(50),
                Param::Support(100),
            ],
        },
        all(LinearTrend),
        all(ArCoefficient),
        all(AugmentedDickeyFuller),
        all(C3),
        all(TimeReversalAsymmetryStatistic),
    ]
}

fn all_column_variances(
    matrix: &FeatureMatrix,
) -> Result<(BTreeMap<String, f64>, Vec<f64>), SelectError> {
    if matrix.n_rows() < 2 {
        return Err(SelectError::TooShort {
            n: matrix.n_rows(),
        });
    }
    let mut map = BTreeMap::new();
    let mut ordered = Vec::with_capacity(matrix.n_cols());
    for (i, label) in matrix.labels().iter().enumerate() {
        let v = column_variance(&matrix.column_values(i))?;
        map.insert(label.clone(), v);
        ordered.push(v);
    }
    Ok((map, ordered))
}
