use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::coeff::{Ring, Scalar};
use crate::error::{Error, Result};
use crate::shape::{IndexSet, Pos};

use super::StructuredMatrix;

type ColumnRule = dyn Fn(Pos) -> Vec<(Pos, Scalar)> + Send + Sync;

/// A matrix given column by column; every column is finitely supported but
/// rows may be unbounded.
#[derive(Clone)]
pub struct ColumnFiniteOperator {
    rows: IndexSet,
    cols: IndexSet,
    ring: Ring,
    rule: Arc<ColumnRule>,
}

impl fmt::Debug for ColumnFiniteOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ColumnFiniteOperator({} x {} over {})", self.rows, self.cols, self.ring)
    }
}

fn bump(map: &mut HashMap<(Pos, Pos), Scalar>, key: (Pos, Pos), v: Scalar) {
    match map.get_mut(&key) {
        Some(x) => *x = x.add(&v),
        None => {
            map.insert(key, v);
        }
    }
}

impl ColumnFiniteOperator {
    pub fn new(
        rows: &IndexSet,
        cols: &IndexSet,
        ring: &Ring,
        rule: impl Fn(Pos) -> Vec<(Pos, Scalar)> + Send + Sync + 'static,
    ) -> Self {
        ColumnFiniteOperator { rows: rows.clone(), cols: cols.clone(), ring: ring.clone(), rule: Arc::new(rule) }
    }

    pub fn rows(&self) -> &IndexSet {
        &self.rows
    }

    pub fn cols(&self) -> &IndexSet {
        &self.cols
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn column(&self, c: Pos) -> Vec<(Pos, Scalar)> {
        (self.rule)(c)
    }

    pub fn entry(&self, r: Pos, c: Pos) -> Scalar {
        self.column(c)
            .into_iter()
            .filter(|(p, _)| *p == r)
            .fold(self.ring.zero(), |acc, (_, v)| acc.add(&v))
    }

    /// The product `self · inner`, column by column.
    pub fn compose(&self, inner: &ColumnFiniteOperator) -> Result<ColumnFiniteOperator> {
        if !inner.rows.compatible(&self.cols) || inner.ring != self.ring {
            return Err(Error::ShapeMismatch(format!("cannot compose {self:?} after {inner:?}")));
        }
        let (rows, cols, ring) = (self.rows.clone(), inner.cols.clone(), self.ring.clone());
        let (outer, inner) = (self.clone(), inner.clone());
        Ok(ColumnFiniteOperator::new(&rows, &cols, &ring, move |c| {
            let mut acc: HashMap<Pos, Scalar> = HashMap::new();
            for (m, v) in inner.column(c) {
                for (r, w) in outer.column(m) {
                    let x = w.mul(&v);
                    match acc.get_mut(&r) {
                        Some(y) => *y = y.add(&x),
                        None => {
                            acc.insert(r, x);
                        }
                    }
                }
            }
            let mut out: Vec<(Pos, Scalar)> = acc.into_iter().filter(|(_, v)| !v.is_exact_zero()).collect();
            out.sort_by_key(|(p, _)| *p);
            out
        }))
    }

    /// `C·K` for finitely supported `K`.
    pub fn apply(&self, k: &StructuredMatrix) -> Result<StructuredMatrix> {
        self.check_k(k, k.rows())?;
        let mut acc = HashMap::new();
        let mut cache: HashMap<Pos, Vec<(Pos, Scalar)>> = HashMap::new();
        for (&(m, c), v) in k.finite() {
            let col = cache.entry(m).or_insert_with(|| self.column(m));
            for (r, w) in col.iter() {
                bump(&mut acc, (*r, c), w.mul(v));
            }
        }
        StructuredMatrix::from_entries(&self.rows, k.cols(), &self.ring, acc.into_iter().map(|((r, c), v)| (r, c, v)))
    }

    /// `X·Cᵀ` for finitely supported `X`.
    pub fn apply_transpose_right(&self, x: &StructuredMatrix) -> Result<StructuredMatrix> {
        self.check_k(x, x.cols())?;
        let mut acc = HashMap::new();
        let mut cache: HashMap<Pos, Vec<(Pos, Scalar)>> = HashMap::new();
        for (&(r, c), v) in x.finite() {
            let col = cache.entry(c).or_insert_with(|| self.column(c));
            for (r2, w) in col.iter() {
                bump(&mut acc, (r, *r2), v.mul(&w.transpose()));
            }
        }
        StructuredMatrix::from_entries(x.rows(), &self.rows, &self.ring, acc.into_iter().map(|((r, c), v)| (r, c, v)))
    }

    /// `C·K·Cᵀ` for finitely supported `K`.
    pub fn sandwich(&self, k: &StructuredMatrix) -> Result<StructuredMatrix> {
        self.apply_transpose_right(&self.apply(k)?)
    }

    /// `Cᵀ·C` restricted to the given columns, computed from finite column sums.
    pub fn gram_window(&self, cols: &[Pos]) -> Vec<Vec<Scalar>> {
        let columns: Vec<HashMap<Pos, Scalar>> = cols
            .iter()
            .map(|&c| {
                let mut m: HashMap<Pos, Scalar> = HashMap::new();
                for (r, v) in self.column(c) {
                    match m.get_mut(&r) {
                        Some(x) => *x = x.add(&v),
                        None => {
                            m.insert(r, v);
                        }
                    }
                }
                m
            })
            .collect();
        columns
            .iter()
            .map(|ci| {
                columns
                    .iter()
                    .map(|cj| {
                        ci.iter().fold(self.ring.zero(), |acc, (r, v)| match cj.get(r) {
                            Some(w) => acc.add(&v.transpose().mul(w)),
                            None => acc,
                        })
                    })
                    .collect()
            })
            .collect()
    }

    fn check_k(&self, k: &StructuredMatrix, side: &IndexSet) -> Result<()> {
        if !k.is_k() {
            return Err(Error::NotFinite("column-finite application needs a finitely supported argument".into()));
        }
        if !side.compatible(&self.cols) {
            return Err(Error::ShapeMismatch(format!("operator columns {} vs {side}", self.cols)));
        }
        if k.ring() != &self.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", k.ring(), self.ring)));
        }
        Ok(())
    }
}
