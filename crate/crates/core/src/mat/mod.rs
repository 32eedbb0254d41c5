//! Structured matrices: constant-diagonal symbols on pairs of tails plus a
//! finitely supported correction.

mod column;
pub mod dense;
mod laurent;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde_json::{json, Value};

use crate::coeff::{Ring, Scalar};
use crate::error::{Error, Result};
use crate::shape::{BlockKind, IndexSet, Pos, Relabeling, Rule};

pub use column::ColumnFiniteOperator;
pub use laurent::Laurent;

/// A matrix over a pair of index sets.
///
/// `entry(i, j) = symbol(block(i), block(j))[i.at − j.at] + finite(i, j)`,
/// where symbols only connect two tails of the same kind. The decomposition
/// is unique, so structural equality is value equality.
#[derive(Clone, Debug, PartialEq)]
pub struct StructuredMatrix {
    rows: IndexSet,
    cols: IndexSet,
    ring: Ring,
    symbols: BTreeMap<(usize, usize), Laurent>,
    finite: BTreeMap<(Pos, Pos), Scalar>,
}

fn accumulate(map: &mut HashMap<(Pos, Pos), Scalar>, key: (Pos, Pos), v: Scalar) {
    if v.is_exact_zero() {
        return;
    }
    match map.get_mut(&key) {
        Some(x) => *x = x.add(&v),
        None => {
            map.insert(key, v);
        }
    }
}

fn collect_finite(map: HashMap<(Pos, Pos), Scalar>) -> BTreeMap<(Pos, Pos), Scalar> {
    map.into_iter().filter(|(_, v)| !v.is_exact_zero()).collect()
}

impl StructuredMatrix {
    pub fn zero(rows: &IndexSet, cols: &IndexSet, ring: &Ring) -> Self {
        StructuredMatrix {
            rows: rows.clone(),
            cols: cols.clone(),
            ring: ring.clone(),
            symbols: BTreeMap::new(),
            finite: BTreeMap::new(),
        }
    }

    pub fn identity(set: &IndexSet, ring: &Ring) -> Self {
        Self::scalar_identity(set, ring, &ring.one())
    }

    /// `λ·1` on `set`.
    pub fn scalar_identity(set: &IndexSet, ring: &Ring, lambda: &Scalar) -> Self {
        let mut m = Self::zero(set, set, ring);
        if lambda.is_exact_zero() {
            return m;
        }
        for (b, kind) in set.layout().iter().enumerate() {
            if kind.is_tail() {
                m.symbols.insert((b, b), Laurent::monomial(0, lambda.clone()));
            } else {
                m.finite.insert((Pos::point(b), Pos::point(b)), lambda.clone());
            }
        }
        m
    }

    /// Finitely supported matrix from explicit entries (repeated keys add up).
    pub fn from_entries(
        rows: &IndexSet,
        cols: &IndexSet,
        ring: &Ring,
        entries: impl IntoIterator<Item = (Pos, Pos, Scalar)>,
    ) -> Result<Self> {
        let mut m = Self::zero(rows, cols, ring);
        for (r, c, v) in entries {
            m.add_entry(r, c, v)?;
        }
        Ok(m)
    }

    /// Matrix on finite index sets from a dense row-major table.
    pub fn from_dense(rows: &IndexSet, cols: &IndexSet, ring: &Ring, table: &[Vec<Scalar>]) -> Result<Self> {
        if !rows.is_finite() || !cols.is_finite() {
            return Err(Error::Precondition("dense construction needs finite index sets".into()));
        }
        if table.len() != rows.block_count() || table.iter().any(|r| r.len() != cols.block_count()) {
            return Err(Error::ShapeMismatch("dense table does not match index sets".into()));
        }
        let mut m = Self::zero(rows, cols, ring);
        for (i, row) in table.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.add_entry(Pos::point(i), Pos::point(j), v.clone())?;
            }
        }
        Ok(m)
    }

    /// Adds `v` to the finite part at `(r, c)`.
    pub fn add_entry(&mut self, r: Pos, c: Pos, v: Scalar) -> Result<()> {
        if !self.rows.contains(r) || !self.cols.contains(c) {
            return Err(Error::ShapeMismatch(format!("position {r:?},{c:?} outside {}x{}", self.rows, self.cols)));
        }
        if !self.ring.contains(&v) {
            return Err(Error::RingMismatch(format!("{v} is not in {}", self.ring)));
        }
        if v.is_exact_zero() {
            return Ok(());
        }
        let key = (r, c);
        match self.finite.get_mut(&key) {
            Some(x) => {
                *x = x.add(&v);
                if x.is_exact_zero() {
                    self.finite.remove(&key);
                }
            }
            None => {
                self.finite.insert(key, v);
            }
        }
        Ok(())
    }

    /// Adds `c·z^d` to the symbol between tail blocks `rb` and `cb`.
    pub fn add_symbol_term(&mut self, rb: usize, cb: usize, d: i64, c: Scalar) -> Result<()> {
        let rk = self.rows.layout().get(rb).copied();
        let ck = self.cols.layout().get(cb).copied();
        match (rk, ck) {
            (Some(x), Some(y)) if x.is_tail() && x == y => {}
            _ => return Err(Error::ShapeMismatch(format!("no tail pair at blocks ({rb},{cb})"))),
        }
        let entry = self.symbols.entry((rb, cb)).or_default();
        entry.add_term(d, c);
        if entry.is_zero() {
            self.symbols.remove(&(rb, cb));
        }
        Ok(())
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

    pub fn symbols(&self) -> &BTreeMap<(usize, usize), Laurent> {
        &self.symbols
    }

    pub fn finite(&self) -> &BTreeMap<(Pos, Pos), Scalar> {
        &self.finite
    }

    pub fn is_square(&self) -> bool {
        self.rows.compatible(&self.cols)
    }

    /// Reinterprets the matrix on sets with the same layouts.
    pub fn with_sets(&self, rows: &IndexSet, cols: &IndexSet) -> Result<Self> {
        if !rows.compatible(&self.rows) || !cols.compatible(&self.cols) {
            return Err(Error::ShapeMismatch(format!("cannot view {}x{} as {rows}x{cols}", self.rows, self.cols)));
        }
        let mut m = self.clone();
        m.rows = rows.clone();
        m.cols = cols.clone();
        Ok(m)
    }

    /// Whether the matrix is finitely supported (no symbols).
    pub fn is_k(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Always true for representable matrices: rows and columns are finite.
    pub fn is_psi(&self) -> bool {
        true
    }

    pub fn is_zero(&self) -> bool {
        self.symbols.is_empty() && self.finite.is_empty()
    }

    pub fn entry(&self, r: Pos, c: Pos) -> Scalar {
        let mut v = self.finite.get(&(r, c)).cloned().unwrap_or_else(|| self.ring.zero());
        if let Some(sym) = self.symbols.get(&(r.block, c.block)) {
            if let Some(x) = sym.coeff(r.at - c.at) {
                v = v.add(x);
            }
        }
        v
    }

    /// Largest |d| over all symbols.
    pub fn bandwidth(&self) -> i64 {
        self.symbols.values().map(Laurent::bandwidth).max().unwrap_or(0)
    }

    /// Largest |offset| appearing in the finite part.
    pub fn support_radius(&self) -> i64 {
        self.finite.keys().map(|(r, c)| r.at.abs().max(c.at.abs())).max().unwrap_or(0)
    }

    fn check_same_shape(&self, other: &Self, op: &str) -> Result<()> {
        if !self.rows.compatible(&other.rows) || !self.cols.compatible(&other.cols) {
            return Err(Error::ShapeMismatch(format!(
                "{op}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{op}: {} vs {}", self.ring, other.ring)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "add")?;
        let mut out = self.clone();
        for (&k, sym) in &other.symbols {
            let merged = out.symbols.get(&k).map_or_else(|| sym.clone(), |s| s.add(sym));
            if merged.is_zero() {
                out.symbols.remove(&k);
            } else {
                out.symbols.insert(k, merged);
            }
        }
        for (&(r, c), v) in &other.finite {
            out.add_entry(r, c, v.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        StructuredMatrix {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            ring: self.ring.clone(),
            symbols: self.symbols.iter().map(|(k, s)| (*k, s.neg())).collect(),
            finite: self.finite.iter().map(|(k, v)| (*k, v.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// `c·A`.
    pub fn scale_left(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(&self.rows, &self.cols, &self.ring);
        for (k, s) in &self.symbols {
            let s = s.scale_left(c);
            if !s.is_zero() {
                out.symbols.insert(*k, s);
            }
        }
        out.finite = self
            .finite
            .iter()
            .map(|(k, v)| (*k, c.mul(v)))
            .filter(|(_, v)| !v.is_exact_zero())
            .collect();
        out
    }

    /// `A·c`.
    pub fn scale_right(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(&self.rows, &self.cols, &self.ring);
        for (k, s) in &self.symbols {
            let s = s.scale_right(c);
            if !s.is_zero() {
                out.symbols.insert(*k, s);
            }
        }
        out.finite = self
            .finite
            .iter()
            .map(|(k, v)| (*k, v.mul(c)))
            .filter(|(_, v)| !v.is_exact_zero())
            .collect();
        out
    }

    /// Exact product. ℕ-tail symbol products pick up a finitely supported
    /// boundary correction; ℤ-tail products have none.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if !self.cols.compatible(&other.rows) {
            return Err(Error::ShapeMismatch(format!(
                "mul: columns {} vs rows {}",
                self.cols, other.rows
            )));
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("mul: {} vs {}", self.ring, other.ring)));
        }
        let mid = self.cols.layout();
        let mut symbols: BTreeMap<(usize, usize), Laurent> = BTreeMap::new();
        let mut finite: HashMap<(Pos, Pos), Scalar> = HashMap::new();

        // symbol · symbol
        let mut other_sym_by_row: BTreeMap<usize, Vec<(usize, &Laurent)>> = BTreeMap::new();
        for (&(mb, cb), s) in &other.symbols {
            other_sym_by_row.entry(mb).or_default().push((cb, s));
        }
        for (&(rb, mb), sa) in &self.symbols {
            let Some(list) = other_sym_by_row.get(&mb) else { continue };
            for &(cb, sb) in list {
                let prod = sa.mul(sb);
                let entry = symbols.entry((rb, cb)).or_default();
                *entry = entry.add(&prod);
                if mid[mb] == BlockKind::TailN {
                    // subtract the terms with a negative middle index
                    let kmax = sa.max_degree().unwrap_or(0).max(-sb.min_degree().unwrap_or(0)).max(0);
                    for k in -kmax..0 {
                        for (d1, c1) in sa.terms() {
                            let m = k + d1;
                            if m < 0 {
                                continue;
                            }
                            for (d2, c2) in sb.terms() {
                                let n = k - d2;
                                if n < 0 {
                                    continue;
                                }
                                accumulate(&mut finite, (Pos::new(rb, m), Pos::new(cb, n)), c1.mul(c2).neg());
                            }
                        }
                    }
                }
            }
        }

        // symbol · finite
        if !self.symbols.is_empty() && !other.finite.is_empty() {
            let mut sym_by_col: BTreeMap<usize, Vec<(usize, &Laurent)>> = BTreeMap::new();
            for (&(rb, mb), s) in &self.symbols {
                sym_by_col.entry(mb).or_default().push((rb, s));
            }
            for (&(mp, cp), v) in &other.finite {
                let Some(list) = sym_by_col.get(&mp.block) else { continue };
                for &(rb, s) in list {
                    for (d, c) in s.terms() {
                        let r = Pos::new(rb, mp.at + d);
                        if self.rows.contains(r) {
                            accumulate(&mut finite, (r, cp), c.mul(v));
                        }
                    }
                }
            }
        }

        // finite · symbol
        if !self.finite.is_empty() && !other.symbols.is_empty() {
            for (&(rp, mp), v) in &self.finite {
                let Some(list) = other_sym_by_row.get(&mp.block) else { continue };
                for &(cb, s) in list {
                    for (d, c) in s.terms() {
                        let col = Pos::new(cb, mp.at - d);
                        if other.cols.contains(col) {
                            accumulate(&mut finite, (rp, col), v.mul(c));
                        }
                    }
                }
            }
        }

        // finite · finite
        if !self.finite.is_empty() && !other.finite.is_empty() {
            let mut by_row: HashMap<Pos, Vec<(Pos, &Scalar)>> = HashMap::new();
            for (&(mp, cp), v) in &other.finite {
                by_row.entry(mp).or_default().push((cp, v));
            }
            for (&(rp, mp), v) in &self.finite {
                if let Some(list) = by_row.get(&mp) {
                    for &(cp, w) in list {
                        accumulate(&mut finite, (rp, cp), v.mul(w));
                    }
                }
            }
        }

        symbols.retain(|_, s| !s.is_zero());
        Ok(StructuredMatrix {
            rows: self.rows.clone(),
            cols: other.cols.clone(),
            ring: self.ring.clone(),
            symbols,
            finite: collect_finite(finite),
        })
    }

    /// Product of a chain of matrices, left to right.
    pub fn product(factors: &[&StructuredMatrix]) -> Result<Self> {
        let (first, rest) = factors.split_first().ok_or_else(|| Error::Precondition("empty product".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, f| acc.mul(f))
    }

    /// Transpose; matrix-ring scalars are transposed as well.
    pub fn transpose(&self) -> Self {
        StructuredMatrix {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            ring: self.ring.clone(),
            symbols: self.symbols.iter().map(|(&(r, c), s)| ((c, r), s.transpose())).collect(),
            finite: self.finite.iter().map(|(&(r, c), v)| ((c, r), v.transpose())).collect(),
        }
    }

    /// Exact equality under the ring's equality (tolerance for floats).
    pub fn approx_eq(&self, other: &Self) -> bool {
        let Ok(d) = self.sub(other) else { return false };
        d.symbols.values().all(|s| s.terms().all(|(_, c)| self.ring.is_zero(c)))
            && d.finite.values().all(|v| self.ring.is_zero(v))
    }

    /// The relation ≈: the difference is finitely supported.
    pub fn approx_equiv(&self, other: &Self) -> bool {
        let Ok(d) = self.sub(other) else { return false };
        d.symbols.values().all(|s| s.terms().all(|(_, c)| self.ring.is_zero(c)))
    }

    /// Sum of the diagonal of a finitely supported square matrix.
    pub fn finite_trace(&self) -> Result<Scalar> {
        if !self.is_k() {
            return Err(Error::NotFinite("trace needs a finitely supported matrix".into()));
        }
        if !self.is_square() {
            return Err(Error::ShapeMismatch("trace of a non-square matrix".into()));
        }
        Ok(self
            .finite
            .iter()
            .filter(|((r, c), _)| r == c)
            .fold(self.ring.zero(), |acc, (_, v)| acc.add(v)))
    }

    /// Kronecker product on the product index sets.
    pub fn kronecker(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch("kronecker".into()));
        }
        if !self.ring.is_commutative() {
            return Err(Error::RingMismatch("kronecker product needs a commutative ring".into()));
        }
        let rows = IndexSet::product(&self.rows, &other.rows)?;
        let cols = IndexSet::product(&self.cols, &other.cols)?;
        let nbr = other.rows.block_count();
        let nbc = other.cols.block_count();
        let mut out = Self::zero(&rows, &cols, &self.ring);
        let rpos = |a: Pos, b: Pos| Pos::new(a.block * nbr + b.block, a.at + b.at);
        let cpos = |a: Pos, b: Pos| Pos::new(a.block * nbc + b.block, a.at + b.at);
        for (&(ar, ac), v) in &self.finite {
            for (&(br, bc), w) in &other.finite {
                out.add_entry(rpos(ar, br), cpos(ac, bc), v.mul(w))?;
            }
            for (&(br, bc), s) in &other.symbols {
                for (d, c) in s.terms() {
                    out.add_symbol_term(ar.block * nbr + br, ac.block * nbc + bc, d, v.mul(c))?;
                }
            }
        }
        for (&(ar, ac), s) in &self.symbols {
            if !other.symbols.is_empty() {
                return Err(Error::InfiniteProduct);
            }
            for (&(br, bc), w) in &other.finite {
                for (d, c) in s.terms() {
                    out.add_symbol_term(ar * nbr + br.block, ac * nbc + bc.block, d, c.mul(w))?;
                }
            }
        }
        Ok(out)
    }

    /// Block diagonal matrix on the union index sets.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch("direct sum".into()));
        }
        let rows = IndexSet::union(&self.rows, &other.rows);
        let cols = IndexSet::union(&self.cols, &other.cols);
        let mut out = Self::zero(&rows, &cols, &self.ring);
        out.place(self, 0, 0)?;
        out.place(other, self.rows.block_count(), self.cols.block_count())?;
        Ok(out)
    }

    /// Direct sum of several matrices.
    pub fn direct_sum_all(parts: &[&StructuredMatrix]) -> Result<Self> {
        let (first, rest) = parts.split_first().ok_or_else(|| Error::Precondition("empty direct sum".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, p| acc.direct_sum(p))
    }

    /// Adds `block` into `self` with its blocks shifted by the given offsets.
    pub fn place(&mut self, block: &Self, row_offset: usize, col_offset: usize) -> Result<()> {
        for (&(r, c), s) in &block.symbols {
            for (d, x) in s.terms() {
                self.add_symbol_term(r + row_offset, c + col_offset, d, x.clone())?;
            }
        }
        for (&(r, c), v) in &block.finite {
            self.add_entry(
                Pos::new(r.block + row_offset, r.at),
                Pos::new(c.block + col_offset, c.at),
                v.clone(),
            )?;
        }
        Ok(())
    }

    /// The `k×k` block matrix on `{0,…,k−1} × Ω` with the given `Ω×Ω` blocks
    /// (`None` for zero blocks).
    pub fn from_grid(omega: &IndexSet, ring: &Ring, grid: &[Vec<Option<&StructuredMatrix>>]) -> Result<Self> {
        let k = grid.len();
        let set = IndexSet::blocks(k, omega);
        let nb = omega.block_count();
        let mut out = Self::zero(&set, &set, ring);
        for (i, row) in grid.iter().enumerate() {
            if row.len() != k {
                return Err(Error::ShapeMismatch("block grid is not square".into()));
            }
            for (j, cell) in row.iter().enumerate() {
                if let Some(m) = cell {
                    if !m.rows.compatible(omega) || !m.cols.compatible(omega) {
                        return Err(Error::ShapeMismatch(format!("grid block ({i},{j}) is not on {omega}")));
                    }
                    out.place(m, i * nb, j * nb)?;
                }
            }
        }
        Ok(out)
    }

    /// Extracts the `(i, j)` block of a matrix on `{0,…,k−1} × Ω`.
    pub fn grid_block(&self, omega: &IndexSet, i: usize, j: usize) -> Result<Self> {
        let nb = omega.block_count();
        let (r0, c0) = (i * nb, j * nb);
        if r0 + nb > self.rows.block_count() || c0 + nb > self.cols.block_count() {
            return Err(Error::ShapeMismatch(format!("no block ({i},{j}) of size {nb}")));
        }
        self.sub_block(omega, omega, r0, c0)
    }

    /// Extracts the sub-matrix whose row blocks start at `r0` and column blocks
    /// at `c0`, viewed on the given sets.
    pub fn sub_block(&self, rows: &IndexSet, cols: &IndexSet, r0: usize, c0: usize) -> Result<Self> {
        let (nr, nc) = (rows.block_count(), cols.block_count());
        let mut out = Self::zero(rows, cols, &self.ring);
        let in_range = |r: usize, c: usize| r >= r0 && r < r0 + nr && c >= c0 && c < c0 + nc;
        for (&(r, c), s) in &self.symbols {
            if in_range(r, c) {
                for (d, x) in s.terms() {
                    out.add_symbol_term(r - r0, c - c0, d, x.clone())?;
                }
            }
        }
        for (&(r, c), v) in &self.finite {
            if in_range(r.block, c.block) {
                out.add_entry(Pos::new(r.block - r0, r.at), Pos::new(c.block - c0, c.at), v.clone())?;
            }
        }
        Ok(out)
    }

    /// Drops finite entries and symbol coefficients with magnitude at most `tol`.
    pub fn prune(&mut self, tol: f64) {
        self.finite.retain(|_, v| v.magnitude() > tol);
        for s in self.symbols.values_mut() {
            s.prune(tol);
        }
        self.symbols.retain(|_, s| !s.is_zero());
    }

    /// Maximal absolute row sum of the finite part plus the symbol norms.
    pub fn norm_estimate(&self) -> f64 {
        let mut rows: HashMap<Pos, f64> = HashMap::new();
        for (&(r, _), v) in &self.finite {
            *rows.entry(r).or_default() += v.magnitude();
        }
        let finite = rows.values().copied().fold(0.0, f64::max);
        let sym = self
            .symbols
            .values()
            .map(|s| s.terms().map(|(_, c)| c.magnitude()).sum::<f64>())
            .fold(0.0, f64::max);
        finite + sym
    }

    /// Maps every scalar through `f` into another ring.
    pub fn map_scalars(&self, ring: &Ring, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<Self> {
        let mut out = Self::zero(&self.rows, &self.cols, ring);
        for (&(r, c), s) in &self.symbols {
            for (d, x) in s.terms() {
                out.add_symbol_term(r, c, d, f(x)?)?;
            }
        }
        for (&(r, c), v) in &self.finite {
            out.add_entry(r, c, f(v)?)?;
        }
        Ok(out)
    }

    /// Dense window: the entries at the listed row and column positions.
    pub fn window(&self, rows: &[Pos], cols: &[Pos]) -> Vec<Vec<Scalar>> {
        rows.iter().map(|&r| cols.iter().map(|&c| self.entry(r, c)).collect()).collect()
    }

    /// The realizing matrix `r̂` of a relabeling (target × source).
    pub fn relabel_matrix(r: &Relabeling, ring: &Ring) -> Result<Self> {
        let mut out = Self::zero(r.target(), r.source(), ring);
        match r.rule() {
            Rule::Tree(iso) => {
                let map = iso.block_map(r.source())?;
                for (b, &t) in map.iter().enumerate() {
                    if r.source().layout()[b].is_tail() {
                        out.add_symbol_term(t, b, 0, ring.one())?;
                    } else {
                        out.add_entry(Pos::point(t), Pos::point(b), ring.one())?;
                    }
                }
            }
            Rule::TailEmbed { stride, offset } => {
                let k = *stride as i64;
                let off = *offset as i64;
                if k == 1 {
                    out.add_symbol_term(0, 0, off, ring.one())?;
                } else {
                    out.add_symbol_term(off.rem_euclid(k) as usize, 0, off.div_euclid(k), ring.one())?;
                }
            }
            Rule::Table(pairs) => {
                for (s, d) in pairs {
                    out.add_entry(r.target().pos_of(d)?, r.source().pos_of(s)?, ring.one())?;
                }
            }
            Rule::Split { .. } => {
                return Err(Error::Unsupported(
                    "residue splitting has no constant-diagonal realization; use transport".into(),
                ))
            }
        }
        Ok(out)
    }

    /// Transports a square matrix across a relabeling: `r̂ A r̂ᵀ`.
    pub fn transport(&self, r: &Relabeling) -> Result<Self> {
        if let Rule::Split { k } = r.rule() {
            return self.split_tails(*k);
        }
        let rh = Self::relabel_matrix(r, &self.ring)?;
        rh.mul(self)?.mul(&rh.transpose())
    }

    /// Splits every tail of the row and column sets into `k` residue classes
    /// and rewrites the matrix on the split sets.
    pub fn split_tails(&self, k: usize) -> Result<Self> {
        let (rows, rmap) = self.rows.split_tails(k)?;
        let (cols, cmap) = self.cols.split_tails(k)?;
        let kk = k as i64;
        let map_pos = |map: &Vec<Vec<usize>>, set: &IndexSet, p: Pos| {
            if set.layout()[p.block].is_tail() {
                Pos::new(map[p.block][p.at.rem_euclid(kk) as usize], p.at.div_euclid(kk))
            } else {
                Pos::point(map[p.block][0])
            }
        };
        let mut out = Self::zero(&rows, &cols, &self.ring);
        for (&(rb, cb), s) in &self.symbols {
            for p in 0..kk {
                for q in 0..kk {
                    for (d, c) in s.terms() {
                        // entry (km+p, kn+q) has offset k(m−n) + p − q
                        let num = d - p + q;
                        if num.rem_euclid(kk) == 0 {
                            out.add_symbol_term(rmap[rb][p as usize], cmap[cb][q as usize], num / kk, c.clone())?;
                        }
                    }
                }
            }
        }
        for (&(r, c), v) in &self.finite {
            out.add_entry(map_pos(&rmap, &self.rows, r), map_pos(&cmap, &self.cols, c), v.clone())?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let symbols: Vec<Value> = self
            .symbols
            .iter()
            .map(|(&(r, c), s)| {
                json!({
                    "rt": self.rows.index_of(Pos::point(r)).to_json(),
                    "ct": self.cols.index_of(Pos::point(c)).to_json(),
                    "diag": s.terms().map(|(d, x)| json!([d, self.ring.scalar_to_json(x)])).collect::<Vec<_>>(),
                })
            })
            .collect();
        let entries: Vec<Value> = self
            .finite
            .iter()
            .map(|(&(r, c), v)| {
                json!([
                    self.rows.index_of(r).to_json(),
                    self.cols.index_of(c).to_json(),
                    self.ring.scalar_to_json(v)
                ])
            })
            .collect();
        json!({
            "rows": self.rows.to_json(),
            "cols": self.cols.to_json(),
            "ring": self.ring.to_json(),
            "scalar": self.ring.scalar_to_json(&self.ring.zero()),
            "symbols": symbols,
            "entries": entries,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("matrix: {what}"));
        let rows = IndexSet::from_json(v.get("rows").ok_or_else(|| bad("missing rows"))?)?;
        let cols = IndexSet::from_json(v.get("cols").ok_or_else(|| bad("missing cols"))?)?;
        let ring = Ring::from_json(v.get("ring").ok_or_else(|| bad("missing ring"))?)?;
        let mut m = Self::zero(&rows, &cols, &ring);
        if let Some(sv) = v.get("scalar") {
            let lambda = ring.scalar_from_json(sv)?;
            if !lambda.is_exact_zero() {
                if !rows.compatible(&cols) {
                    return Err(bad("scalar part on a non-square matrix"));
                }
                m = m.add(&Self::scalar_identity(&rows, &ring, &lambda).with_sets(&rows, &cols)?)?;
            }
        }
        for s in v.get("symbols").and_then(Value::as_array).into_iter().flatten() {
            let rb = rows.pos_of(&crate::shape::Index::from_json(s.get("rt").ok_or_else(|| bad("symbol rt"))?)?)?.block;
            let cb = cols.pos_of(&crate::shape::Index::from_json(s.get("ct").ok_or_else(|| bad("symbol ct"))?)?)?.block;
            for term in s.get("diag").and_then(Value::as_array).ok_or_else(|| bad("symbol diag"))? {
                let t = term.as_array().filter(|t| t.len() == 2).ok_or_else(|| bad("diag term"))?;
                let d = t[0].as_i64().ok_or_else(|| bad("diag offset"))?;
                m.add_symbol_term(rb, cb, d, ring.scalar_from_json(&t[1])?)?;
            }
        }
        for e in v.get("entries").and_then(Value::as_array).into_iter().flatten() {
            let t = e.as_array().filter(|t| t.len() == 3).ok_or_else(|| bad("entry"))?;
            let r = rows.pos_of(&crate::shape::Index::from_json(&t[0])?)?;
            let c = cols.pos_of(&crate::shape::Index::from_json(&t[1])?)?;
            m.add_entry(r, c, ring.scalar_from_json(&t[2])?)?;
        }
        Ok(m)
    }
}

impl fmt::Display for StructuredMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "matrix {} x {} over {}", self.rows, self.cols, self.ring)?;
        for (&(r, c), s) in &self.symbols {
            let terms: Vec<String> = s.terms().map(|(d, x)| format!("({x})z^{d}")).collect();
            writeln!(f, "  symbol [{r},{c}]: {}", terms.join(" + "))?;
        }
        for (&(r, c), v) in &self.finite {
            writeln!(f, "  ({},{}) ({},{}) = {v}", r.block, r.at, c.block, c.at)?;
        }
        Ok(())
    }
}
