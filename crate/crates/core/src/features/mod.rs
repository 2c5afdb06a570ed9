//! Catalog of per-series features and their parameter expansions.
//!
//! Every feature maps one `(job, node, kpi)` series to a scalar. Twelve of
//! the 36 features take a parameter (a quantile, a lag, a peak support, a
//! coefficient index, or a named attribute of a fitted model), so the full
//! catalog expands to 89 matrix columns per `(node, kpi)` pair.

pub mod basic;
pub mod change;
mod extract;
pub mod location;
pub mod model_fits;
pub mod nonlinearity;
pub mod reoccurrence;
pub mod spectral;

pub use extract::{
    evaluate_series, extract_matrix, ColumnId, Extraction, FeatureMatrix, ImputationEvent,
    ImputationReason, MatrixFileError,
};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// One entry of the feature catalog, identified by its canonical name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Feature {
    AbsEnergy,
    AbsoluteSumOfChanges,
    ArCoefficient,
    AugmentedDickeyFuller,
    Autocorrelation,
    BinnedEntropy,
    C3,
    CountAboveMean,
    CountBelowMean,
    FftAggregated,
    FirstLocationOfMaximum,
    FirstLocationOfMinimum,
    FriedrichCoefficients,
    IndexMassQuantile,
    Kurtosis,
    Length,
    LinearTrend,
    LongestStrikeAboveMean,
    LongestStrikeBelowMean,
    Maximum,
    Mean,
    MeanAbsChange,
    MeanChange,
    MeanSecondDerivativeCentral,
    Median,
    Minimum,
    NumberPeaks,
    PercentageOfReoccurringDatapointsToAllDatapoints,
    PercentageOfReoccurringValuesToAllValues,
    Quantile,
    SampleEntropy,
    Skewness,
    SpktWelchDensity,
    StandardDeviation,
    TimeReversalAsymmetryStatistic,
    Variance,
}

/// Attribute of the aggregated FFT magnitude spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FftAttr {
    Centroid,
    Variance,
    Skew,
    Kurtosis,
}

/// Attribute of the least-squares line fitted against sample index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TrendAttr {
    Intercept,
    Pvalue,
    Rvalue,
    Slope,
    Stderr,
}

/// Attribute of the augmented Dickey-Fuller test result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AdfAttr {
    Pvalue,
    Teststat,
    Usedlag,
}

/// Parameter of one expanded feature column.
///
/// `Quantile` stores tenths, so `Quantile(3)` means q = 0.3 and renders as
/// `q_0.3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    Quantile(u8),
    Lag(usize),
    Support(usize),
    Coeff(usize),
    Fft(FftAttr),
    Trend(TrendAttr),
    Adf(AdfAttr),
}

impl Param {
    /// Renders the parameter as it appears in column labels after `__`.
    pub fn render(&self) -> String {
        match self {
            Param::Quantile(t) => format!("q_0.{t}"),
            Param::Lag(l) => format!("lag_{l}"),
            Param::Support(s) => format!("support_{s}"),
            Param::Coeff(c) => format!("coeff_{c}"),
            Param::Fft(a) => match a {
                FftAttr::Centroid => "centroid".into(),
                FftAttr::Variance => "variance".into(),
                FftAttr::Skew => "skew".into(),
                FftAttr::Kurtosis => "kurtosis".into(),
            },
            Param::Trend(a) => match a {
                TrendAttr::Intercept => "intercept".into(),
                TrendAttr::Pvalue => "pvalue".into(),
                TrendAttr::Rvalue => "rvalue".into(),
                TrendAttr::Slope => "slope".into(),
                TrendAttr::Stderr => "stderr".into(),
            },
            Param::Adf(a) => match a {
                AdfAttr::Pvalue => "pvalue".into(),
                AdfAttr::Teststat => "teststat".into(),
                AdfAttr::Usedlag => "usedlag".into(),
            },
        }
    }
}

/// Peak supports evaluated by `number_peaks`.
pub const PEAK_SUPPORTS: [usize; 9] = [5, 10, 15, 20, 30, 35, 40, 50, 100];

/// Welch power-spectral-density bins exposed as features.
pub const WELCH_COEFFS: [usize; 3] = [2, 5, 8];

/// Autoregressive coefficients retained from the order-10 fit.
pub const AR_COEFFS: [usize; 5] = [0, 1, 2, 3, 4];

/// Drift polynomial coefficients of the Langevin-model fit.
pub const FRIEDRICH_COEFFS: [usize; 4] = [0, 1, 2, 3];

impl Feature {
    /// Every catalog feature, ordered by canonical name.
    pub const ALL: [Feature; 36] = [
        Feature::AbsEnergy,
        Feature::AbsoluteSumOfChanges,
        Feature::ArCoefficient,
        Feature::AugmentedDickeyFuller,
        Feature::Autocorrelation,
        Feature::BinnedEntropy,
        Feature::C3,
        Feature::CountAboveMean,
        Feature::CountBelowMean,
        Feature::FftAggregated,
        Feature::FirstLocationOfMaximum,
        Feature::FirstLocationOfMinimum,
        Feature::FriedrichCoefficients,
        Feature::IndexMassQuantile,
        Feature::Kurtosis,
        Feature::Length,
        Feature::LinearTrend,
        Feature::LongestStrikeAboveMean,
        Feature::LongestStrikeBelowMean,
        Feature::Maximum,
        Feature::Mean,
        Feature::MeanAbsChange,
        Feature::MeanChange,
        Feature::MeanSecondDerivativeCentral,
        Feature::Median,
        Feature::Minimum,
        Feature::NumberPeaks,
        Feature::PercentageOfReoccurringDatapointsToAllDatapoints,
        Feature::PercentageOfReoccurringValuesToAllValues,
        Feature::Quantile,
        Feature::SampleEntropy,
        Feature::Skewness,
        Feature::SpktWelchDensity,
        Feature::StandardDeviation,
        Feature::TimeReversalAsymmetryStatistic,
        Feature::Variance,
    ];

    /// Canonical name used in column labels and serialized layouts.
    pub fn name(&self) -> &'static str {
        match self {
            Feature::AbsEnergy => "abs_energy",
            Feature::AbsoluteSumOfChanges => "absolute_sum_of_changes",
            Feature::ArCoefficient => "ar_coefficient",
            Feature::AugmentedDickeyFuller => "augmented_dickey_fuller",
            Feature::Autocorrelation => "autocorrelation",
            Feature::BinnedEntropy => "binned_entropy",
            Feature::C3 => "c3",
            Feature::CountAboveMean => "count_above_mean",
            Feature::CountBelowMean => "count_below_mean",
            Feature::FftAggregated => "fft_aggregated",
            Feature::FirstLocationOfMaximum => "first_location_of_maximum",
            Feature::FirstLocationOfMinimum => "first_location_of_minimum",
            Feature::FriedrichCoefficients => "friedrich_coefficients",
            Feature::IndexMassQuantile => "index_mass_quantile",
            Feature::Kurtosis => "kurtosis",
            Feature::Length => "length",
            Feature::LinearTrend => "linear_trend",
            Feature::LongestStrikeAboveMean => "longest_strike_above_mean",
            Feature::LongestStrikeBelowMean => "longest_strike_below_mean",
            Feature::Maximum => "maximum",
            Feature::Mean => "mean",
            Feature::MeanAbsChange => "mean_abs_change",
            Feature::MeanChange => "mean_change",
            Feature::MeanSecondDerivativeCentral => "mean_second_derivative_central",
            Feature::Median => "median",
            Feature::Minimum => "minimum",
            Feature::NumberPeaks => "number_peaks",
            Feature::PercentageOfReoccurringDatapointsToAllDatapoints => {
                "percentage_of_reoccurring_datapoints_to_all_datapoints"
            }
            Feature::PercentageOfReoccurringValuesToAllValues => {
                "percentage_of_reoccurring_values_to_all_values"
            }
            Feature::Quantile => "quantile",
            Feature::SampleEntropy => "sample_entropy",
            Feature::Skewness => "skewness",
            Feature::SpktWelchDensity => "spkt_welch_density",
            Feature::StandardDeviation => "standard_deviation",
            Feature::TimeReversalAsymmetryStatistic => "time_reversal_asymmetry_statistic",
            Feature::Variance => "variance",
        }
    }

    /// Looks a feature up by its canonical name.
    pub fn from_name(name: &str) -> Option<Feature> {
        Feature::ALL.iter().copied().find(|f| f.name() == name)
    }

    /// The catalog's parameter expansion for this feature.
    ///
    /// Parameterless features yield `[None]`: they still occupy exactly one
    /// column.
    pub fn catalog_params(&self) -> Vec<Option<Param>> {
        match self {
            Feature::Quantile | Feature::IndexMassQuantile => {
                (1..=9).map(|t| Some(Param::Quantile(t))).collect()
            }
            Feature::Autocorrelation => (1..=8).map(|l| Some(Param::Lag(l))).collect(),
            Feature::C3 | Feature::TimeReversalAsymmetryStatistic => {
                (1..=3).map(|l| Some(Param::Lag(l))).collect()
            }
            Feature::NumberPeaks => PEAK_SUPPORTS
                .iter()
                .map(|&s| Some(Param::Support(s)))
                .collect(),
            Feature::SpktWelchDensity => WELCH_COEFFS
                .iter()
                .map(|&c| Some(Param::Coeff(c)))
                .collect(),
            Feature::ArCoefficient => AR_COEFFS.iter().map(|&c| Some(Param::Coeff(c))).collect(),
            Feature::FriedrichCoefficients => FRIEDRICH_COEFFS
                .iter()
                .map(|&c| Some(Param::Coeff(c)))
                .collect(),
            Feature::FftAggregated => vec![
                Some(Param::Fft(FftAttr::Centroid)),
                Some(Param::Fft(FftAttr::Variance)),
                Some(Param::Fft(FftAttr::Skew)),
                Some(Param::Fft(FftAttr::Kurtosis)),
            ],
            Feature::LinearTrend => vec![
                Some(Param::Trend(TrendAttr::Intercept)),
                Some(Param::Trend(TrendAttr::Pvalue)),
                Some(Param::Trend(TrendAttr::Rvalue)),
                Some(Param::Trend(TrendAttr::Slope)),
                Some(Param::Trend(TrendAttr::Stderr)),
            ],
            Feature::AugmentedDickeyFuller => vec![
                Some(Param::Adf(AdfAttr::Pvalue)),
                Some(Param::Adf(AdfAttr::Teststat)),
                Some(Param::Adf(AdfAttr::Usedlag)),
            ],
            _ => vec![None],
        }
    }

    /// Parses a rendered parameter string in the context of this feature.
    ///
    /// Returns `None` when the string is not a valid parameter for the
    /// feature, including well-formed parameters of the wrong kind.
    pub fn parse_param(&self, s: &str) -> Option<Param> {
        let candidate = match self {
            Feature::Quantile | Feature::IndexMassQuantile => {
                let t: u8 = s.strip_prefix("q_0.")?.parse().ok()?;
                (1..=9).contains(&t).then_some(Param::Quantile(t))
            }
            Feature::Autocorrelation | Feature::C3 | Feature::TimeReversalAsymmetryStatistic => {
                let l: usize = s.strip_prefix("lag_")?.parse().ok()?;
                Some(Param::Lag(l))
            }
            Feature::NumberPeaks => {
                let sup: usize = s.strip_prefix("support_")?.parse().ok()?;
                Some(Param::Support(sup))
            }
            Feature::SpktWelchDensity
            | Feature::ArCoefficient
            | Feature::FriedrichCoefficients => {
                let c: usize = s.strip_prefix("coeff_")?.parse().ok()?;
                Some(Param::Coeff(c))
            }
            Feature::FftAggregated => match s {
                "centroid" => Some(Param::Fft(FftAttr::Centroid)),
                "variance" => Some(Param::Fft(FftAttr::Variance)),
                "skew" => Some(Param::Fft(FftAttr::Skew)),
                "kurtosis" => Some(Param::Fft(FftAttr::Kurtosis)),
                _ => None,
            },
            Feature::LinearTrend => match s {
                "intercept" => Some(Param::Trend(TrendAttr::Intercept)),
                "pvalue" => Some(Param::Trend(TrendAttr::Pvalue)),
                "rvalue" => Some(Param::Trend(TrendAttr::Rvalue)),
                "slope" => Some(Param::Trend(TrendAttr::Slope)),
                "stderr" => Some(Param::Trend(TrendAttr::Stderr)),
                _ => None,
            },
            Feature::AugmentedDickeyFuller => match s {
                "pvalue" => Some(Param::Adf(AdfAttr::Pvalue)),
                "teststat" => Some(Param::Adf(AdfAttr::Teststat)),
                "usedlag" => Some(Param::Adf(AdfAttr::Usedlag)),
                _ => None,
            },
            _ => None,
        }?;
        self.catalog_params()
            .contains(&Some(candidate))
            .then_some(candidate)
    }
}

impl Serialize for Feature {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Feature {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let name = String::deserialize(deserializer)?;
        Feature::from_name(&name)
            .ok_or_else(|| D::Error::custom(format!("unknown feature name {name:?}")))
    }
}

/// One feature together with the parameter settings to evaluate.
///
/// An empty `params` list means the feature's single parameterless column.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpec {
    pub feature: Feature,
    pub params: Vec<Param>,
}

impl FeatureSpec {
    /// The full catalog: every feature with its complete parameter set.
    pub fn full() -> Vec<FeatureSpec> {
        Feature::ALL
            .iter()
            .map(|&feature| FeatureSpec {
                feature,
                params: feature.catalog_params().into_iter().flatten().collect(),
            })
            .collect()
    }

    /// Expands specs into concrete `(feature, param)` column pairs.
    pub fn expand(specs: &[FeatureSpec]) -> Vec<(Feature, Option<Param>)> {
        let mut pairs = Vec::new();
        for spec in specs {
            if spec.params.is_empty() {
                pairs.push((spec.feature, None));
            } else {
                pairs.extend(spec.params.iter().map(|&p| (spec.feature, Some(p))));
            }
        }
        pairs
    }
}
