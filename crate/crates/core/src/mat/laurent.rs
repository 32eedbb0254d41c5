use std::collections::BTreeMap;

use crate::coeff::Scalar;

/// A Laurent polynomial describing a constant-diagonal matrix: the coefficient
/// at `d` is the value of every entry `(m, n)` with `m − n = d`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Laurent(pub(crate) BTreeMap<i64, Scalar>);

impl Laurent {
    pub fn new() -> Self {
        Laurent(BTreeMap::new())
    }

    pub fn monomial(d: i64, c: Scalar) -> Self {
        let mut l = Laurent::new();
        l.add_term(d, c);
        l
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, d: i64) -> Option<&Scalar> {
        self.0.get(&d)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.0.iter().map(|(d, c)| (*d, c))
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.0.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.0.keys().next_back().copied()
    }

    /// Largest |d| over the support.
    pub fn bandwidth(&self) -> i64 {
        self.0.keys().map(|d| d.abs()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, d: i64, c: Scalar) {
        if c.is_exact_zero() {
            return;
        }
        match self.0.get_mut(&d) {
            Some(x) => {
                *x = x.add(&c);
                if x.is_exact_zero() {
                    self.0.remove(&d);
                }
            }
            None => {
                self.0.insert(d, c);
            }
        }
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (d, c) in other.terms() {
            out.add_term(d, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Laurent {
        Laurent(self.0.iter().map(|(d, c)| (*d, c.neg())).collect())
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::new();
        for (d1, c1) in self.terms() {
            for (d2, c2) in other.terms() {
                out.add_term(d1 + d2, c1.mul(c2));
            }
        }
        out
    }

    pub fn scale_left(&self, c: &Scalar) -> Laurent {
        let mut out = Laurent::new();
        for (d, x) in self.terms() {
            out.add_term(d, c.mul(x));
        }
        out
    }

    pub fn scale_right(&self, c: &Scalar) -> Laurent {
        let mut out = Laurent::new();
        for (d, x) in self.terms() {
            out.add_term(d, x.mul(c));
        }
        out
    }

    /// The symbol of the transposed matrix.
    pub fn transpose(&self) -> Laurent {
        Laurent(self.0.iter().map(|(d, c)| (-d, c.transpose())).collect())
    }

    /// Drops coefficients with magnitude at most `tol`.
    pub fn prune(&mut self, tol: f64) {
        self.0.retain(|_, c| c.magnitude() > tol);
    }
}
