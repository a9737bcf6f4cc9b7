use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Input, Record};
use crate::error::{Error, Result};

/// How a table cell becomes features.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EncodingScheme {
    /// A `(max_symbol + 1)`-wide indicator block per cell; index 0 is padding.
    OneHot,
    /// One feature per cell: `entry / max_symbol`.
    ScaledInteger,
}

/// Sparse feature vector: `indices` ascending, zeros omitted.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub dim: usize,
    pub indices: Vec<u32>,
    pub values: Vec<f64>,
    pub scheme: EncodingScheme,
}

impl FeatureVector {
    /// Dense vector with scheme tag `ScaledInteger`, used for toy inputs.
    pub fn dense(values: &[f64]) -> Self {
        let (indices, vals) =
            values.iter().enumerate().filter(|(_, &v)| v != 0.0).map(|(i, &v)| (i as u32, v)).unzip();
        FeatureVector { dim: values.len(), indices, values: vals, scheme: EncodingScheme::ScaledInteger }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (&i, &v) in self.indices.iter().zip(&self.values) {
            out[i as usize] = v;
        }
        out
    }

    pub fn dot(&self, w: &[f64]) -> f64 {
        self.indices.iter().zip(&self.values).map(|(&i, &v)| w[i as usize] * v).sum()
    }
}

/// Fixed encoding geometry shared by a training set and everything scored
/// against the resulting model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Encoder {
    pub scheme: EncodingScheme,
    pub n_max: usize,
    pub max_symbol: u32,
    /// Tables per record: 1, or 2 for pairs.
    pub tables: usize,
}

impl Encoder {
    /// Geometry covering every record of `datasets`.
    pub fn for_datasets(scheme: EncodingScheme, datasets: &[&Dataset]) -> Result<Self> {
        let first = datasets
            .iter()
            .flat_map(|d| d.records.first())
            .next()
            .ok_or_else(|| Error::param("cannot size an encoder from empty datasets"))?;
        Ok(Encoder {
            scheme,
            n_max: datasets.iter().map(|d| d.n_max()).max().unwrap_or(0),
            max_symbol: datasets.iter().map(|d| d.max_symbol()).max().unwrap_or(0).max(1),
            tables: first.x.tables().len(),
        })
    }

    pub fn dim(&self) -> usize {
        let cells = self.tables * self.n_max * self.n_max;
        match self.scheme {
            EncodingScheme::OneHot => cells * (self.max_symbol as usize + 1),
            EncodingScheme::ScaledInteger => cells,
        }
    }

    pub fn encode(&self, record: &Record) -> Result<FeatureVector> {
        encode_input(&record.x, self)
    }
}

fn encode_input(x: &Input, enc: &Encoder) -> Result<FeatureVector> {
    let tables = x.tables();
    if tables.len() != enc.tables {
        return Err(Error::shape(format!(
            "record has {} tables, encoder expects {}",
            tables.len(),
            enc.tables
        )));
    }
    let size = enc.n_max;
    let width = enc.max_symbol as usize + 1;
    let mut indices = Vec::new();
    let mut values = Vec::new();
    for (k, t) in tables.iter().enumerate() {
        if t.n > size {
            return Err(Error::shape(format!("order {} exceeds n_max {size}", t.n)));
        }
        if t.max_entry() > enc.max_symbol {
            return Err(Error::param(format!(
                "entry {} exceeds max symbol {}",
                t.max_entry(),
                enc.max_symbol
            )));
        }
        let base = k * size * size;
        for r in 0..size {
            for c in 0..size {
                let v = if r < t.n && c < t.n { t.cells[r * t.n + c] } else { 0 };
                let cell = base + r * size + c;
                match enc.scheme {
                    EncodingScheme::OneHot => {
                        indices.push((cell * width + v as usize) as u32);
                        values.push(1.0);
                    }
                    EncodingScheme::ScaledInteger if v != 0 => {
                        indices.push(cell as u32);
                        values.push(v as f64 / enc.max_symbol as f64);
                    }
                    EncodingScheme::ScaledInteger => {}
                }
            }
        }
    }
    Ok(FeatureVector { dim: enc.dim(), indices, values, scheme: enc.scheme })
}

/// Encodes one record padded to `n_max`; pairs concatenate first then second table.
pub fn encode(
    record: &Record,
    scheme: EncodingScheme,
    n_max: usize,
    max_symbol: u32,
) -> Result<FeatureVector> {
    let enc = Encoder { scheme, n_max, max_symbol, tables: record.x.tables().len() };
    encode_input(&record.x, &enc)
}

/// Indexed examples a trainer can draw from.
pub trait Examples: Sync {
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn dim(&self) -> usize;
    /// Number of classes, `K + 1`.
    fn classes(&self) -> usize;
    fn features(&self, i: usize) -> FeatureVector;
    fn label(&self, i: usize) -> usize;
}

/// A dataset seen through an encoder; records are encoded on access.
pub struct EncodedSet<'a> {
    data: &'a Dataset,
    encoder: Encoder,
}

impl<'a> EncodedSet<'a> {
    pub fn new(data: &'a Dataset, encoder: Encoder) -> Result<Self> {
        if data.max_symbol() > encoder.max_symbol {
            return Err(Error::param(format!(
                "entry {} exceeds max symbol {}",
                data.max_symbol(),
                encoder.max_symbol
            )));
        }
        if let Some(r) =
            data.records.iter().find(|r| r.x.order() > encoder.n_max || r.x.tables().len() != encoder.tables)
        {
            return Err(Error::shape(format!("record {} does not fit the encoder", r.id)));
        }
        Ok(EncodedSet { data, encoder })
    }

    pub fn encoder(&self) -> Encoder {
        self.encoder
    }
}

impl Examples for EncodedSet<'_> {
    fn len(&self) -> usize {
        self.data.len()
    }
    fn dim(&self) -> usize {
        self.encoder.dim()
    }
    fn classes(&self) -> usize {
        self.data.classes() + 1
    }
    fn features(&self, i: usize) -> FeatureVector {
        encode_input(&self.data.records[i].x, &self.encoder).expect("checked in EncodedSet::new")
    }
    fn label(&self, i: usize) -> usize {
        self.data.records[i].label
    }
}

/// In-memory dense examples.
#[derive(Debug, Clone)]
pub struct DenseSet {
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub classes: usize,
}

impl Examples for DenseSet {
    fn len(&self) -> usize {
        self.rows.len()
    }
    fn dim(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }
    fn classes(&self) -> usize {
        self.classes
    }
    fn features(&self, i: usize) -> FeatureVector {
        FeatureVector::dense(&self.rows[i])
    }
    fn label(&self, i: usize) -> usize {
        self.labels[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{RecordMeta, Table};

    fn rec(n: usize, cells: Vec<u32>) -> Record {
        Record { id: 0, x: Input::Single(Table { n, cells }), label: 0, meta: RecordMeta::default() }
    }

    #[test]
    fn one_by_one_one_hot() {
        let v = encode(&rec(1, vec![1]), EncodingScheme::OneHot, 1, 2).unwrap();
        assert_eq!(v.to_dense(), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn c2_scaled() {
        let v = encode(&rec(2, vec![1, 2, 2, 1]), EncodingScheme::ScaledInteger, 2, 2).unwrap();
        assert_eq!(v.to_dense(), vec![0.5, 1.0, 1.0, 0.5]);
    }

    #[test]
    fn padding_hits_index_zero() {
        let v = encode(&rec(1, vec![1]), EncodingScheme::OneHot, 2, 1).unwrap();
        assert_eq!(v.to_dense(), vec![0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn symbol_bound_enforced() {
        assert!(encode(&rec(1, vec![3]), EncodingScheme::OneHot, 1, 2).is_err());
        assert!(encode(&rec(2, vec![1, 2, 2, 1]), EncodingScheme::OneHot, 1, 2).is_err());
    }

    #[test]
    fn pair_concatenates_in_order() {
        let r = Record {
            id: 0,
            x: Input::Pair(Table { n: 1, cells: vec![1] }, Table { n: 1, cells: vec![2] }),
            label: 0,
            meta: RecordMeta::default(),
        };
        let v = encode(&r, EncodingScheme::ScaledInteger, 1, 2).unwrap();
        assert_eq!(v.to_dense(), vec![0.5, 1.0]);
    }
}
