//! Dataset loading: delimiter-separated numeric text, feature projection,
//! the bundled UCI Iris file, and a seeded synthetic blob generator.

use std::io::Read;

use sha2::{Digest, Sha256};

use crate::error::{ClusterError, Result};
use crate::model::DataMatrix;
use crate::rng::RandomStream;

/// Exact bytes of the UCI Machine Learning Repository `iris.data` file.
pub const IRIS_DATA: &[u8] = include_bytes!("../../../data/iris.data");

/// SHA-256 of [`IRIS_DATA`].
pub const IRIS_SHA256: &str = "6f608b71a7317216319b4d27b4d9bc84e6abd734eda7872b71a458569e2656c0";

pub const IRIS_FEATURES: [&str; 4] = ["sepal_length", "sepal_width", "petal_length", "petal_width"];

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub data: DataMatrix,
    pub labels: Option<Vec<String>>,
    pub feature_names: Option<Vec<String>>,
}

impl LabeledDataset {
    pub fn new(
        data: DataMatrix,
        labels: Option<Vec<String>>,
        feature_names: Option<Vec<String>>,
    ) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != data.rows() {
                return Err(ClusterError::DimensionMismatch {
                    expected: data.rows(),
                    got: l.len(),
                });
            }
        }
        if let Some(f) = &feature_names {
            if f.len() != data.cols() {
                return Err(ClusterError::DimensionMismatch {
                    expected: data.cols(),
                    got: f.len(),
                });
            }
        }
        Ok(LabeledDataset {
            data,
            labels,
            feature_names,
        })
    }

    /// Serializes in the layout [`load_csv`] reads back: an optional header
    /// of feature names, then one row per observation with the label last.
    /// Values use shortest round-trip formatting.
    pub fn to_csv(&self, delimiter: char) -> String {
        let sep = delimiter.to_string();
        let mut out = String::new();
        if let Some(names) = &self.feature_names {
            let mut header = names.clone();
            if self.labels.is_some() {
                header.push("label".into());
            }
            out.push_str(&header.join(&sep));
            out.push('\n');
        }
        for (i, row) in self.data.iter_rows().enumerate() {
            let mut fields: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            if let Some(labels) = &self.labels {
                fields.push(labels[i].clone());
            }
            out.push_str(&fields.join(&sep));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvOptions {
    pub delimiter: char,
    /// Column holding class labels. `None` picks the last non-numeric
    /// column of the first data row, if there is one.
    pub label_column: Option<usize>,
    pub skip_blank: bool,
    /// First line holds column names.
    pub has_header: bool,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions {
            delimiter: ',',
            label_column: None,
            skip_blank: true,
            has_header: false,
        }
    }
}

/// Plain decimal literal: optional sign, digits, optional fraction and
/// exponent. Rejects `inf`, `NaN` and decimal commas.
fn parse_number(token: &str) -> Option<f64> {
    let plain = !token.is_empty()
        && token.bytes().any(|b| b.is_ascii_digit())
        && token
            .bytes()
            .all(|b| b.is_ascii_digit() || matches!(b, b'+' | b'-' | b'.' | b'e' | b'E'));
    if plain {
        token.parse().ok()
    } else {
        None
    }
}

pub fn load_csv<R: Read>(mut source: R, options: &CsvOptions) -> Result<LabeledDataset> {
    let mut bytes = Vec::new();
    source
        .read_to_end(&mut bytes)
        .map_err(|e| ClusterError::io("<input>", e))?;
    let text = String::from_utf8(bytes).map_err(|e| ClusterError::Parse {
        line: 0,
        column: 0,
        message: format!("input is not valid UTF-8: {e}"),
    })?;

    let mut header: Option<Vec<String>> = None;
    let mut width: Option<usize> = None;
    let mut label_col: Option<usize> = None;
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut rows = 0;

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if options.skip_blank && line.trim().is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split(options.delimiter).map(str::trim).collect();

        if options.has_header && header.is_none() {
            width = Some(tokens.len());
            header = Some(tokens.iter().map(|t| t.to_string()).collect());
            continue;
        }

        let expected = *width.get_or_insert(tokens.len());
        if tokens.len() != expected {
            return Err(ClusterError::InconsistentColumns {
                line: line_no,
                expected,
                got: tokens.len(),
            });
        }
        if rows == 0 {
            label_col = match options.label_column {
                Some(c) if c >= expected => {
                    return Err(ClusterError::Parse {
                        line: line_no,
                        column: c + 1,
                        message: format!("label column {c} out of range for {expected} columns"),
                    })
                }
                Some(c) => Some(c),
                None => tokens.iter().rposition(|t| parse_number(t).is_none()),
            };
        }
        for (col, token) in tokens.iter().enumerate() {
            if Some(col) == label_col {
                labels.push(token.to_string());
                continue;
            }
            let v = parse_number(token).ok_or_else(|| ClusterError::Parse {
                line: line_no,
                column: col + 1,
                message: format!("`{token}` is not a number"),
            })?;
            values.push(v);
        }
        rows += 1;
    }

    if rows == 0 {
        return Err(ClusterError::NoDataRows);
    }
    let width = width.unwrap_or(0);
    let cols = width - usize::from(label_col.is_some());
    let feature_names = header.map(|h| {
        h.into_iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != label_col)
            .map(|(_, name)| name)
            .collect()
    });
    LabeledDataset::new(
        DataMatrix::new(rows, cols, values)?,
        label_col.map(|_| labels),
        feature_names,
    )
}

/// The bundled Iris data with feature names attached.
pub fn iris() -> Result<LabeledDataset> {
    let mut ds = load_csv(IRIS_DATA, &CsvOptions::default())?;
    ds.feature_names = Some(IRIS_FEATURES.iter().map(|s| s.to_string()).collect());
    Ok(ds)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Projects onto `indices`, in the given order.
pub fn select_features(ds: &LabeledDataset, indices: &[usize]) -> Result<LabeledDataset> {
    let d = ds.data.cols();
    if indices.is_empty() {
        return Err(ClusterError::InvalidFeatures("no columns selected".into()));
    }
    let mut seen = vec![false; d];
    for &i in indices {
        if i >= d {
            return Err(ClusterError::InvalidFeatures(format!(
                "column {i} out of range for {d} features"
            )));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(ClusterError::InvalidFeatures(format!(
                "column {i} selected twice"
            )));
        }
    }
    let values = ds
        .data
        .iter_rows()
        .flat_map(|row| indices.iter().map(move |&i| row[i]))
        .collect();
    LabeledDataset::new(
        DataMatrix::new(ds.data.rows(), indices.len(), values)?,
        ds.labels.clone(),
        ds.feature_names
            .as_ref()
            .map(|names| indices.iter().map(|&i| names[i].clone()).collect()),
    )
}

/// Parameters for [`generate_blobs`].
#[derive(Debug, Clone, PartialEq)]
pub struct BlobSpec {
    pub clusters: usize,
    pub points_per_cluster: usize,
    pub dimension: usize,
    pub center_box: (f64, f64),
    pub spread: f64,
}

/// Synthetic clusters: centers uniform in `center_box` per coordinate, each
/// point its center plus a uniform offset in `[-spread, spread)` per
/// coordinate. Points are emitted cluster by cluster; labels are the
/// generating cluster index.
pub fn generate_blobs(spec: &BlobSpec, rng: &mut RandomStream) -> Result<LabeledDataset> {
    for (name, v) in [
        ("clusters", spec.clusters),
        ("points_per_cluster", spec.points_per_cluster),
        ("dimension", spec.dimension),
    ] {
        if v == 0 {
            return Err(ClusterError::NonPositive { name });
        }
    }
    let (lo, hi) = spec.center_box;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(ClusterError::InvalidFeatures(format!(
            "invalid center box [{lo}, {hi}]"
        )));
    }
    if !(spec.spread.is_finite() && spec.spread >= 0.0) {
        return Err(ClusterError::InvalidFeatures(format!(
            "invalid spread {}",
            spec.spread
        )));
    }

    let d = spec.dimension;
    let centers: Vec<f64> = (0..spec.clusters * d)
        .map(|_| lo + (hi - lo) * rng.next_f64())
        .collect();
    let n = spec.clusters * spec.points_per_cluster;
    let mut values = Vec::with_capacity(n * d);
    let mut labels = Vec::with_capacity(n);
    for j in 0..spec.clusters {
        for _ in 0..spec.points_per_cluster {
            for t in 0..d {
                let offset = spec.spread * (2.0 * rng.next_f64() - 1.0);
                values.push(centers[j * d + t] + offset);
            }
            labels.push(j.to_string());
        }
    }
    LabeledDataset::new(DataMatrix::new(n, d, values)?, Some(labels), None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_data;
    use proptest::prelude::*;

    #[test]
    fn iris_shape_and_classes() {
        assert_eq!(sha256_hex(IRIS_DATA), IRIS_SHA256);
        let ds = iris().unwrap();
        assert_eq!((ds.data.rows(), ds.data.cols()), (150, 4));
        assert!(validate_data(&ds.data).is_empty());
        let labels = ds.labels.as_ref().unwrap();
        for class in ["Iris-setosa", "Iris-versicolor", "Iris-virginica"] {
            assert_eq!(labels.iter().filter(|l| *l == class).count(), 50);
        }
        assert_eq!(ds.data.row(0), &[5.1, 3.5, 1.4, 0.2]);
        assert_eq!(labels[0], "Iris-setosa");
    }

    #[test]
    fn single_line() {
        let ds = load_csv("5.1,3.5,1.4,0.2,Iris-setosa".as_bytes(), &CsvOptions::default()).unwrap();
        assert_eq!(ds.data.row(0), &[5.1, 3.5, 1.4, 0.2]);
        assert_eq!(ds.labels.unwrap(), vec!["Iris-setosa"]);
    }

    #[test]
    fn empty_input() {
        let err = load_csv("".as_bytes(), &CsvOptions::default()).unwrap_err();
        assert_eq!(err.to_string(), "no data rows");
        assert!(load_csv("\n\n".as_bytes(), &CsvOptions::default()).is_err());
    }

    #[test]
    fn parse_errors_name_position() {
        let err = load_csv("1,2,a\n3,x,b\n".as_bytes(), &CsvOptions::default()).unwrap_err();
        assert!(matches!(err, ClusterError::Parse { line: 2, column: 2, .. }), "{err}");
        let err = load_csv("1,2\n3,4,5\n".as_bytes(), &CsvOptions::default()).unwrap_err();
        assert!(matches!(
            err,
            ClusterError::InconsistentColumns { line: 2, expected: 2, got: 3 }
        ));
    }

    #[test]
    fn number_grammar() {
        assert_eq!(parse_number("-1.5e-3"), Some(-1.5e-3));
        assert_eq!(parse_number("42"), Some(42.0));
        assert_eq!(parse_number("inf"), None);
        assert_eq!(parse_number("NaN"), None);
        assert_eq!(parse_number("1,5"), None);
        assert_eq!(parse_number("."), None);
        let opts = CsvOptions {
            delimiter: ';',
            ..CsvOptions::default()
        };
        let err = load_csv("1,5;2\n".as_bytes(), &CsvOptions { label_column: Some(1), ..opts.clone() });
        assert!(err.is_err());
        let ok = load_csv("1.5;2\n".as_bytes(), &opts).unwrap();
        assert_eq!(ok.data.values(), &[1.5, 2.0]);
        assert!(ok.labels.is_none());
    }

    #[test]
    fn blank_lines() {
        let text = "1,2\n\n3,4\n\n";
        let ds = load_csv(text.as_bytes(), &CsvOptions::default()).unwrap();
        assert_eq!(ds.data.rows(), 2);
        let strict = CsvOptions {
            skip_blank: false,
            ..CsvOptions::default()
        };
        assert!(load_csv(text.as_bytes(), &strict).is_err());
        assert_eq!(load_csv("1,2\n3,4\n".as_bytes(), &strict).unwrap().data.rows(), 2);
    }

    #[test]
    fn explicit_label_column_and_header() {
        let opts = CsvOptions {
            label_column: Some(0),
            has_header: true,
            ..CsvOptions::default()
        };
        let ds = load_csv("class,a,b\nx,1,2\ny,3,4\n".as_bytes(), &opts).unwrap();
        assert_eq!(ds.labels.unwrap(), vec!["x", "y"]);
        assert_eq!(ds.feature_names.unwrap(), vec!["a", "b"]);
        assert_eq!(ds.data.values(), &[1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn feature_selection() {
        let ds = iris().unwrap();
        let sepal = select_features(&ds, &[0, 1]).unwrap();
        assert_eq!((sepal.data.rows(), sepal.data.cols()), (150, 2));
        assert_eq!(sepal.data.row(0), &[5.1, 3.5]);
        assert_eq!(sepal.labels, ds.labels);

        assert_eq!(select_features(&ds, &[0, 1, 2, 3]).unwrap(), ds);

        let petal_width = select_features(&ds, &[3]).unwrap();
        let col: Vec<f64> = ds.data.iter_rows().map(|r| r[3]).collect();
        assert_eq!(petal_width.data.values(), col.as_slice());

        assert!(select_features(&ds, &[4]).is_err());
        assert!(select_features(&ds, &[1, 1]).is_err());
    }

    #[test]
    fn blobs_deterministic_and_exact_at_zero_spread() {
        let spec = BlobSpec {
            clusters: 3,
            points_per_cluster: 5,
            dimension: 2,
            center_box: (-10.0, 10.0),
            spread: 0.0,
        };
        let a = generate_blobs(&spec, &mut RandomStream::new(1)).unwrap();
        let b = generate_blobs(&spec, &mut RandomStream::new(1)).unwrap();
        assert_eq!(a, b);
        for j in 0..3 {
            let first = a.data.row(j * 5).to_vec();
            for p in 0..5 {
                assert_eq!(a.data.row(j * 5 + p), first.as_slice());
            }
        }
    }

    proptest! {
        #[test]
        fn csv_round_trip(rows in prop::collection::vec(prop::collection::vec(-1e6..1e6f64, 3), 1..30),
                          seed in any::<u64>()) {
            let mut rng = RandomStream::new(seed);
            let labels: Vec<String> = rows.iter().map(|_| format!("class{}", rng.below(3))).collect();
            let ds = LabeledDataset::new(DataMatrix::from_rows(&rows).unwrap(), Some(labels), None).unwrap();
            let text = ds.to_csv(',');
            let back = load_csv(text.as_bytes(), &CsvOptions::default()).unwrap();
            prop_assert_eq!(back, ds);
        }

        #[test]
        fn projection_reconstructs(perm_seed in any::<u64>()) {
            let ds = iris().unwrap();
            let mut rng = RandomStream::new(perm_seed);
            let order = rng.sample_indices(4, 4);
            let projected = select_features(&ds, &order).unwrap();
            let mut inverse = vec![0; 4];
            for (pos, &col) in order.iter().enumerate() {
                inverse[col] = pos;
            }
            prop_assert_eq!(select_features(&projected, &inverse).unwrap(), ds);
        }

        #[test]
        fn blobs_always_valid(k in 1usize..5, per in 1usize..10, d in 1usize..4,
                              spread in 0.0..5.0f64, seed in any::<u64>()) {
            let spec = BlobSpec { clusters: k, points_per_cluster: per, dimension: d,
                                  center_box: (-50.0, 50.0), spread };
            let ds = generate_blobs(&spec, &mut RandomStream::new(seed)).unwrap();
            prop_assert!(validate_data(&ds.data).is_empty());
            prop_assert_eq!(ds.data.rows(), k * per);
        }
    }
}
