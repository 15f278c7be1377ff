//! Summarized association data: one row per genetic variant with its
//! association with the exposure and with the outcome.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Column names of the summary-data CSV format, in order.
pub const CSV_HEADER: [&str; 5] = ["id", "beta_x", "se_x", "beta_y", "se_y"];

/// Association estimates of one variant with the exposure (`beta_x`) and
/// the outcome (`beta_y`), both expressed per copy of the same allele.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantAssociation {
    id: String,
    beta_x: f64,
    se_x: f64,
    beta_y: f64,
    se_y: f64,
}

impl VariantAssociation {
    pub fn new(id: impl Into<String>, beta_x: f64, se_x: f64, beta_y: f64, se_y: f64) -> Result<Self> {
        let id = id.into();
        let invalid = |message: &str| Error::InvalidVariant {
            id: id.clone(),
            message: message.to_string(),
        };
        if !(beta_x.is_finite() && se_x.is_finite() && beta_y.is_finite() && se_y.is_finite()) {
            return Err(invalid("non-finite value"));
        }
        if se_x <= 0.0 {
            return Err(invalid("se_x must be positive"));
        }
        if se_y <= 0.0 {
            return Err(invalid("se_y must be positive"));
        }
        Ok(Self {
            id,
            beta_x,
            se_x,
            beta_y,
            se_y,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }
    pub fn beta_x(&self) -> f64 {
        self.beta_x
    }
    pub fn se_x(&self) -> f64 {
        self.se_x
    }
    pub fn beta_y(&self) -> f64 {
        self.beta_y
    }
    pub fn se_y(&self) -> f64 {
        self.se_y
    }

    /// Ratio (Wald) estimate `beta_y / beta_x`.
    pub fn ratio(&self) -> Result<f64> {
        if self.beta_x == 0.0 {
            return Err(Error::DegenerateInstrument(self.id.clone()));
        }
        Ok(self.beta_y / self.beta_x)
    }

    /// First-order delta-method variance of the ratio estimate.
    pub fn ratio_variance(&self) -> Result<f64> {
        if self.beta_x == 0.0 {
            return Err(Error::DegenerateInstrument(self.id.clone()));
        }
        Ok(self.se_y * self.se_y / (self.beta_x * self.beta_x))
    }
}

/// An ordered collection of variants with unique ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummarySet {
    variants: Vec<VariantAssociation>,
    harmonized: bool,
}

impl SummarySet {
    pub fn new(variants: Vec<VariantAssociation>) -> Result<Self> {
        if variants.is_empty() {
            return Err(Error::Empty);
        }
        let mut seen = HashSet::with_capacity(variants.len());
        for v in &variants {
            if !seen.insert(v.id.as_str()) {
                return Err(Error::DuplicateId(v.id.clone()));
            }
        }
        Ok(Self {
            variants,
            harmonized: false,
        })
    }

    /// Builds a set from parallel columns, labelling variants `v1`, `v2`, ...
    pub fn from_columns(beta_x: &[f64], se_x: &[f64], beta_y: &[f64], se_y: &[f64]) -> Result<Self> {
        let n = beta_x.len();
        for len in [se_x.len(), beta_y.len(), se_y.len()] {
            if len != n {
                return Err(Error::LengthMismatch { expected: n, got: len });
            }
        }
        let variants = (0..n)
            .map(|i| VariantAssociation::new(format!("v{}", i + 1), beta_x[i], se_x[i], beta_y[i], se_y[i]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(variants)
    }

    pub fn len(&self) -> usize {
        self.variants.len()
    }

    /// Always false; a set holds at least one variant.
    pub fn is_empty(&self) -> bool {
        self.variants.is_empty()
    }

    pub fn variants(&self) -> &[VariantAssociation] {
        &self.variants
    }

    pub fn is_harmonized(&self) -> bool {
        self.harmonized
    }

    pub fn beta_x(&self) -> Vec<f64> {
        self.variants.iter().map(|v| v.beta_x).collect()
    }
    pub fn se_x(&self) -> Vec<f64> {
        self.variants.iter().map(|v| v.se_x).collect()
    }
    pub fn beta_y(&self) -> Vec<f64> {
        self.variants.iter().map(|v| v.beta_y).collect()
    }
    pub fn se_y(&self) -> Vec<f64> {
        self.variants.iter().map(|v| v.se_y).collect()
    }

    /// Recodes alleles so every exposure association is non-negative.
    ///
    /// The outcome association is multiplied by the sign of the exposure
    /// association (with `sign(0) = +1`) and the exposure association is
    /// replaced by its absolute value. Standard errors are untouched.
    pub fn harmonize(&self) -> SummarySet {
        let variants = self
            .variants
            .iter()
            .map(|v| {
                let sign = if v.beta_x < 0.0 { -1.0 } else { 1.0 };
                VariantAssociation {
                    beta_x: v.beta_x.abs(),
                    beta_y: v.beta_y * sign,
                    ..v.clone()
                }
            })
            .collect();
        SummarySet {
            variants,
            harmonized: true,
        }
    }

    /// Replaces the outcome columns, keeping ids, exposure data and the
    /// harmonization flag.
    pub fn with_outcome(&self, beta_y: &[f64], se_y: &[f64]) -> Result<SummarySet> {
        for len in [beta_y.len(), se_y.len()] {
            if len != self.len() {
                return Err(Error::LengthMismatch {
                    expected: self.len(),
                    got: len,
                });
            }
        }
        let variants = self
            .variants
            .iter()
            .zip(beta_y.iter().zip(se_y))
            .map(|(v, (&by, &sy))| VariantAssociation::new(v.id.clone(), v.beta_x, v.se_x, by, sy))
            .collect::<Result<Vec<_>>>()?;
        Ok(SummarySet {
            variants,
            harmonized: self.harmonized,
        })
    }

    /// Fails with [`Error::DegenerateInstrument`] on the first variant with
    /// `beta_x == 0`.
    pub fn require_nonzero_exposure(&self) -> Result<()> {
        match self.variants.iter().find(|v| v.beta_x == 0.0) {
            Some(v) => Err(Error::DegenerateInstrument(v.id.clone())),
            None => Ok(()),
        }
    }
}

/// Per-variant ratio estimates and their delta-method variances.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioEstimates {
    pub theta: Vec<f64>,
    pub variance: Vec<f64>,
}

impl RatioEstimates {
    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// Inverse delta-method variances, `beta_x^2 / se_y^2`.
    pub fn precision(&self) -> Vec<f64> {
        self.variance.iter().map(|v| 1.0 / v).collect()
    }
}

pub fn ratio_estimates(set: &SummarySet) -> Result<RatioEstimates> {
    let mut theta = Vec::with_capacity(set.len());
    let mut variance = Vec::with_capacity(set.len());
    for v in set.variants() {
        theta.push(v.ratio()?);
        variance.push(v.ratio_variance()?);
    }
    Ok(RatioEstimates { theta, variance })
}

/// Reads a summary-data CSV with header `id,beta_x,se_x,beta_y,se_y`.
///
/// Columns are located by name, so extra columns are ignored. Errors carry
/// the 1-based data row (the header is row 0).
pub fn read_csv<R: Read>(reader: R) -> Result<SummarySet> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Parse {
            row: 0,
            message: e.to_string(),
        })?
        .clone();
    let mut index = [0usize; 5];
    for (slot, name) in index.iter_mut().zip(CSV_HEADER) {
        *slot = headers.iter().position(|h| h == name).ok_or_else(|| Error::Parse {
            row: 0,
            message: format!("missing column `{name}`"),
        })?;
    }

    let mut variants = Vec::new();
    let mut seen = HashSet::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Parse {
            row,
            message: e.to_string(),
        })?;
        let field = |k: usize| -> Result<&str> {
            record.get(index[k]).ok_or_else(|| Error::Parse {
                row,
                message: format!("missing value for `{}`", CSV_HEADER[k]),
            })
        };
        let number = |k: usize| -> Result<f64> {
            let raw = field(k)?;
            let value: f64 = raw.parse().map_err(|_| Error::Parse {
                row,
                message: format!("`{}` is not a number: {raw:?}", CSV_HEADER[k]),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    row,
                    message: format!("`{}` is not finite", CSV_HEADER[k]),
                });
            }
            Ok(value)
        };
        let id = field(0)?.to_string();
        let (beta_x, se_x, beta_y, se_y) = (number(1)?, number(2)?, number(3)?, number(4)?);
        for (k, se) in [(2, se_x), (4, se_y)] {
            if se <= 0.0 {
                return Err(Error::Parse {
                    row,
                    message: format!("`{}` must be positive, got {se}", CSV_HEADER[k]),
                });
            }
        }
        if !seen.insert(id.clone()) {
            return Err(Error::Parse {
                row,
                message: format!("duplicate id `{id}`"),
            });
        }
        variants.push(VariantAssociation {
            id,
            beta_x,
            se_x,
            beta_y,
            se_y,
        });
    }
    SummarySet::new(variants)
}

pub fn read_csv_path(path: impl AsRef<Path>) -> Result<SummarySet> {
    let file = std::fs::File::open(path.as_ref())?;
    read_csv(std::io::BufReader::new(file))
}

/// Writes the set in the same schema `read_csv` accepts. Numbers use the
/// shortest representation that round-trips exactly.
pub fn write_csv<W: Write>(set: &SummarySet, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| Error::Io(e.to_string());
    wtr.write_record(CSV_HEADER).map_err(io)?;
    for v in set.variants() {
        wtr.write_record([
            v.id.clone(),
            v.beta_x.to_string(),
            v.se_x.to_string(),
            v.beta_y.to_string(),
            v.se_y.to_string(),
        ])
        .map_err(io)?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn variant(bx: f64, by: f64) -> VariantAssociation {
        VariantAssociation::new("a", bx, 0.01, by, 0.02).unwrap()
    }

    #[test]
    fn harmonize_flips_negative_exposure() {
        let set = SummarySet::new(vec![variant(-0.2, 0.05)]).unwrap().harmonize();
        let v = &set.variants()[0];
        assert_eq!(v.beta_x(), 0.2);
        assert_eq!(v.beta_y(), -0.05);
        assert_eq!(v.se_x(), 0.01);
        assert_eq!(v.se_y(), 0.02);
        assert!(set.is_harmonized());
    }

    #[test]
    fn harmonize_keeps_positive_exposure() {
        let set = SummarySet::new(vec![variant(0.3, 0.1)]).unwrap().harmonize();
        assert_eq!(set.variants()[0].beta_x(), 0.3);
        assert_eq!(set.variants()[0].beta_y(), 0.1);
    }

    #[test]
    fn harmonize_treats_zero_as_positive() {
        let set = SummarySet::new(vec![variant(0.0, -0.1)]).unwrap().harmonize();
        assert_eq!(set.variants()[0].beta_y(), -0.1);
    }

    #[test]
    fn all_negative_ratios_unchanged() {
        let set = SummarySet::from_columns(&[-0.1, -0.2, -0.3], &[0.01; 3], &[0.02, -0.01, 0.05], &[0.03; 3]).unwrap();
        let before = ratio_estimates(&set).unwrap();
        let after = ratio_estimates(&set.harmonize()).unwrap();
        assert_eq!(before, after);
    }

    #[test]
    fn ratio_estimate_by_substitution() {
        let set = SummarySet::new(vec![VariantAssociation::new("a", 0.1, 0.01, 0.02, 0.05).unwrap()]).unwrap();
        let r = ratio_estimates(&set).unwrap();
        assert!((r.theta[0] - 0.2).abs() < 1e-15);
        assert!((r.variance[0] - 0.25).abs() < 1e-15);

        let set = SummarySet::new(vec![VariantAssociation::new("b", 1.0, 0.1, 0.0, 1.0).unwrap()]).unwrap();
        let r = ratio_estimates(&set).unwrap();
        assert_eq!(r.theta[0], 0.0);
        assert_eq!(r.variance[0], 1.0);
    }

    #[test]
    fn zero_exposure_is_degenerate() {
        let set = SummarySet::new(vec![VariantAssociation::new("rs1", 0.0, 0.01, 0.02, 0.05).unwrap()]).unwrap();
        assert_eq!(ratio_estimates(&set), Err(Error::DegenerateInstrument("rs1".into())));
    }

    #[test]
    fn rejects_bad_variants() {
        assert!(VariantAssociation::new("x", 0.1, 0.0, 0.1, 0.1).is_err());
        assert!(VariantAssociation::new("x", f64::NAN, 0.1, 0.1, 0.1).is_err());
        let dup = vec![variant(0.1, 0.1), variant(0.2, 0.1)];
        assert_eq!(SummarySet::new(dup), Err(Error::DuplicateId("a".into())));
        assert_eq!(SummarySet::new(vec![]), Err(Error::Empty));
    }

    #[test]
    fn reads_well_formed_csv() {
        let text = "id,beta_x,se_x,beta_y,se_y\nrs1,0.1,0.01,0.02,0.05\nrs2,-0.2,0.02,0.01,0.04\nrs3,0.15,0.01,0.03,0.05\n";
        let set = read_csv(text.as_bytes()).unwrap();
        assert_eq!(set.len(), 3);
        assert!(!set.is_harmonized());
        assert_eq!(set.variants()[1].id(), "rs2");
        assert_eq!(set.variants()[1].beta_x(), -0.2);
    }

    #[test]
    fn csv_columns_may_be_reordered() {
        let text = "se_y,beta_y,id,se_x,beta_x\n0.05,0.02,rs1,0.01,0.1\n";
        let set = read_csv(text.as_bytes()).unwrap();
        assert_eq!(set.variants()[0].se_y(), 0.05);
    }

    #[test]
    fn csv_zero_se_names_row() {
        let text = "id,beta_x,se_x,beta_y,se_y\nrs1,0.1,0.01,0.02,0.05\nrs2,0.1,0.01,0.02,0\n";
        match read_csv(text.as_bytes()) {
            Err(Error::Parse { row, message }) => {
                assert_eq!(row, 2);
                assert!(message.contains("se_y"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn csv_errors() {
        let empty = "id,beta_x,se_x,beta_y,se_y\n";
        assert_eq!(read_csv(empty.as_bytes()), Err(Error::Empty));
        assert_eq!(Error::Empty.to_string(), "no variants");

        let missing = "id,beta_x,se_x,beta_y\nrs1,0.1,0.01,0.02\n";
        assert!(matches!(read_csv(missing.as_bytes()), Err(Error::Parse { row: 0, .. })));

        let bad = "id,beta_x,se_x,beta_y,se_y\nrs1,abc,0.01,0.02,0.05\n";
        assert!(matches!(read_csv(bad.as_bytes()), Err(Error::Parse { row: 1, .. })));

        let dup = "id,beta_x,se_x,beta_y,se_y\nrs1,0.1,0.01,0.02,0.05\nrs1,0.1,0.01,0.02,0.05\n";
        assert!(matches!(read_csv(dup.as_bytes()), Err(Error::Parse { row: 2, .. })));
    }

    fn arb_set() -> impl Strategy<Value = SummarySet> {
        prop::collection::vec(
            (-1.0f64..1.0, 1e-4f64..1.0, -1.0f64..1.0, 1e-4f64..1.0, prop::bool::ANY),
            1..30,
        )
        .prop_map(|rows| {
            let variants = rows
                .into_iter()
                .enumerate()
                .map(|(i, (bx, sx, by, sy, zero))| {
                    let bx = if zero && i % 7 == 0 { 0.0 } else { bx };
                    VariantAssociation::new(format!("rs{i}"), bx, sx, by, sy).unwrap()
                })
                .collect();
            SummarySet::new(variants).unwrap()
        })
    }

    proptest! {
        #[test]
        fn harmonize_is_idempotent(set in arb_set()) {
            let once = set.harmonize();
            prop_assert_eq!(once.harmonize(), once);
        }

        #[test]
        fn harmonize_preserves_ratios(set in arb_set()) {
            prop_assume!(set.require_nonzero_exposure().is_ok());
            let a = ratio_estimates(&set).unwrap();
            let b = ratio_estimates(&set.harmonize()).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn csv_round_trip(set in arb_set()) {
            let mut buf = Vec::new();
            write_csv(&set, &mut buf).unwrap();
            let back = read_csv(buf.as_slice()).unwrap();
            prop_assert_eq!(back, set);
        }
    }
}
