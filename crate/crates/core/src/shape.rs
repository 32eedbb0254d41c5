//! Index sets built from finite sets, ℕ-tails and ℤ-tails by disjoint union
//! and product, together with positions and relabeling maps.
//!
//! Every index set flattens into an ordered list of blocks. A block is either a
//! single point or a whole tail; a position is a block number plus an offset
//! inside the block (always 0 for points).

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Kind of a flattened block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockKind {
    Point,
    TailN,
    TailZ,
}

impl BlockKind {
    pub fn is_tail(self) -> bool {
        self != BlockKind::Point
    }

    /// Whether `at` is a valid offset inside a block of this kind.
    pub fn admits(self, at: i64) -> bool {
        match self {
            BlockKind::Point => at == 0,
            BlockKind::TailN => at >= 0,
            BlockKind::TailZ => true,
        }
    }
}

/// A position in a flattened index set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pos {
    pub block: usize,
    pub at: i64,
}

impl Pos {
    pub fn new(block: usize, at: i64) -> Self {
        Pos { block, at }
    }

    pub fn point(block: usize) -> Self {
        Pos { block, at: 0 }
    }
}

/// Cardinality of an index set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cardinality {
    Finite(u64),
    Omega,
}

/// Tree node of an index set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Finite(Vec<String>),
    TailN(String),
    TailZ(String),
    Union(IndexSet, IndexSet),
    Product(IndexSet, IndexSet),
}

#[derive(Debug)]
struct Inner {
    node: Node,
    layout: Vec<BlockKind>,
}

/// An index set; cheap to clone.
#[derive(Clone, Debug)]
pub struct IndexSet(Arc<Inner>);

impl PartialEq for IndexSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.node == other.0.node
    }
}

impl Eq for IndexSet {}

/// A point of an index set, as a path through its tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Index {
    /// Label position in a finite set, or offset in a tail.
    Leaf(i64),
    Left(Box<Index>),
    Right(Box<Index>),
    Pair(Box<Index>, Box<Index>),
}

impl Index {
    pub fn left(i: Index) -> Index {
        Index::Left(Box::new(i))
    }

    pub fn right(i: Index) -> Index {
        Index::Right(Box::new(i))
    }

    pub fn pair(i: Index, j: Index) -> Index {
        Index::Pair(Box::new(i), Box::new(j))
    }

    pub fn to_json(&self) -> Value {
        match self {
            Index::Leaf(k) => json!(k),
            Index::Left(i) => json!(["L", i.to_json()]),
            Index::Right(i) => json!(["R", i.to_json()]),
            Index::Pair(i, j) => json!([i.to_json(), j.to_json()]),
        }
    }

    pub fn from_json(v: &Value) -> Result<Index> {
        let bad = || Error::Parse(format!("invalid index path: {v}"));
        if let Some(k) = v.as_i64() {
            return Ok(Index::Leaf(k));
        }
        let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
        match arr[0].as_str() {
            Some("L") => Ok(Index::left(Index::from_json(&arr[1])?)),
            Some("R") => Ok(Index::right(Index::from_json(&arr[1])?)),
            Some(_) => Err(bad()),
            None => Ok(Index::pair(Index::from_json(&arr[0])?, Index::from_json(&arr[1])?)),
        }
    }
}

fn layout_of(node: &Node) -> Result<Vec<BlockKind>> {
    Ok(match node {
        Node::Finite(labels) => vec![BlockKind::Point; labels.len()],
        Node::TailN(_) => vec![BlockKind::TailN],
        Node::TailZ(_) => vec![BlockKind::TailZ],
        Node::Union(a, b) => a.layout().iter().chain(b.layout()).copied().collect(),
        Node::Product(a, b) => {
            let mut out = Vec::with_capacity(a.block_count() * b.block_count());
            for &x in a.layout() {
                for &y in b.layout() {
                    out.push(match (x, y) {
                        (BlockKind::Point, k) | (k, BlockKind::Point) => k,
                        _ => return Err(Error::InfiniteProduct),
                    });
                }
            }
            out
        }
    })
}

impl IndexSet {
    fn make(node: Node) -> Result<IndexSet> {
        let layout = layout_of(&node)?;
        Ok(IndexSet(Arc::new(Inner { node, layout })))
    }

    /// Finite set with the given labels (must be distinct).
    pub fn finite<S: AsRef<str>>(labels: &[S]) -> IndexSet {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        let distinct: BTreeSet<&String> = labels.iter().collect();
        assert_eq!(distinct.len(), labels.len(), "finite labels must be distinct");
        Self::make(Node::Finite(labels)).expect("finite layout")
    }

    /// Finite set labeled `0..n`.
    pub fn range(n: usize) -> IndexSet {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        Self::finite(&labels)
    }

    pub fn empty() -> IndexSet {
        Self::range(0)
    }

    pub fn tail_n(tag: &str) -> IndexSet {
        Self::make(Node::TailN(tag.to_string())).expect("tail layout")
    }

    pub fn tail_z(tag: &str) -> IndexSet {
        Self::make(Node::TailZ(tag.to_string())).expect("tail layout")
    }

    /// Disjoint union; tail tags of `b` that collide with tags of `a` get primed.
    pub fn union(a: &IndexSet, b: &IndexSet) -> IndexSet {
        let used = a.tags();
        let b = b.freshen(&used);
        Self::make(Node::Union(a.clone(), b)).expect("union layout")
    }

    /// Union of several sets, associated to the left.
    pub fn union_all(parts: &[IndexSet]) -> IndexSet {
        let mut it = parts.iter();
        let first = it.next().cloned().unwrap_or_else(IndexSet::empty);
        it.fold(first, |acc, p| IndexSet::union(&acc, p))
    }

    /// Product; at least one factor must be finite.
    pub fn product(a: &IndexSet, b: &IndexSet) -> Result<IndexSet> {
        if !a.is_finite() && !b.is_finite() {
            return Err(Error::InfiniteProduct);
        }
        let b = b.freshen(&a.tags());
        Self::make(Node::Product(a.clone(), b))
    }

    /// The `{0,1,…,k−1} × Ω` block shape.
    pub fn blocks(k: usize, omega: &IndexSet) -> IndexSet {
        Self::product(&Self::range(k), omega).expect("finite factor")
    }

    /// The `{0,1} × ℕ` space of single-space elements.
    pub fn single_space() -> IndexSet {
        Self::blocks(2, &Self::tail_n("n"))
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    pub fn layout(&self) -> &[BlockKind] {
        &self.0.layout
    }

    pub fn block_count(&self) -> usize {
        self.0.layout.len()
    }

    pub fn is_finite(&self) -> bool {
        self.layout().iter().all(|k| !k.is_tail())
    }

    pub fn cardinality(&self) -> Cardinality {
        if self.is_finite() {
            Cardinality::Finite(self.block_count() as u64)
        } else {
            Cardinality::Omega
        }
    }

    /// Whether two sets have identical flattened layouts; matrices on such
    /// sets can be multiplied.
    pub fn compatible(&self, other: &IndexSet) -> bool {
        self.layout() == other.layout()
    }

    /// All tail tags in the tree.
    pub fn tags(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_tags(&mut out);
        out
    }

    fn collect_tags(&self, out: &mut BTreeSet<String>) {
        match self.node() {
            Node::Finite(_) => {}
            Node::TailN(t) | Node::TailZ(t) => {
                out.insert(t.clone());
            }
            Node::Union(a, b) | Node::Product(a, b) => {
                a.collect_tags(out);
                b.collect_tags(out);
            }
        }
    }

    fn freshen(&self, used: &BTreeSet<String>) -> IndexSet {
        if self.tags().is_disjoint(used) {
            return self.clone();
        }
        let mut taken = used.clone();
        taken.extend(self.tags());
        self.rename(&mut |t: &str| {
            if !used.contains(t) {
                return t.to_string();
            }
            let mut fresh = format!("{t}'");
            while taken.contains(&fresh) {
                fresh.push('\'');
            }
            taken.insert(fresh.clone());
            fresh
        })
    }

    fn rename(&self, f: &mut dyn FnMut(&str) -> String) -> IndexSet {
        let node = match self.node() {
            Node::Finite(l) => Node::Finite(l.clone()),
            Node::TailN(t) => Node::TailN(f(t)),
            Node::TailZ(t) => Node::TailZ(f(t)),
            Node::Union(a, b) => Node::Union(a.rename(f), b.rename(f)),
            Node::Product(a, b) => Node::Product(a.rename(f), b.rename(f)),
        };
        Self::make(node).expect("renaming preserves layout")
    }

    /// Resolves an index path to a flattened position.
    pub fn pos_of(&self, idx: &Index) -> Result<Pos> {
        let bad = || Error::Parse(format!("index {idx:?} does not fit {self}"));
        match (self.node(), idx) {
            (Node::Finite(l), Index::Leaf(k)) if *k >= 0 && (*k as usize) < l.len() => Ok(Pos::point(*k as usize)),
            (Node::TailN(_), Index::Leaf(k)) if *k >= 0 => Ok(Pos::new(0, *k)),
            (Node::TailZ(_), Index::Leaf(k)) => Ok(Pos::new(0, *k)),
            (Node::Union(a, _), Index::Left(i)) => a.pos_of(i),
            (Node::Union(a, b), Index::Right(i)) => {
                let p = b.pos_of(i)?;
                Ok(Pos::new(p.block + a.block_count(), p.at))
            }
            (Node::Product(a, b), Index::Pair(i, j)) => {
                let pa = a.pos_of(i)?;
                let pb = b.pos_of(j)?;
                Ok(Pos::new(pa.block * b.block_count() + pb.block, pa.at + pb.at))
            }
            _ => Err(bad()),
        }
    }

    /// Inverse of [`IndexSet::pos_of`].
    pub fn index_of(&self, pos: Pos) -> Index {
        match self.node() {
            Node::Finite(_) => Index::Leaf(pos.block as i64),
            Node::TailN(_) | Node::TailZ(_) => Index::Leaf(pos.at),
            Node::Union(a, b) => {
                if pos.block < a.block_count() {
                    Index::left(a.index_of(pos))
                } else {
                    Index::right(b.index_of(Pos::new(pos.block - a.block_count(), pos.at)))
                }
            }
            Node::Product(a, b) => {
                let nb = b.block_count();
                let (ba, bb) = (pos.block / nb, pos.block % nb);
                if a.layout()[ba].is_tail() {
                    Index::pair(a.index_of(Pos::new(ba, pos.at)), b.index_of(Pos::point(bb)))
                } else {
                    Index::pair(a.index_of(Pos::point(ba)), b.index_of(Pos::new(bb, pos.at)))
                }
            }
        }
    }

    /// Whether `pos` is a valid position of this set.
    pub fn contains(&self, pos: Pos) -> bool {
        self.layout().get(pos.block).map_or(false, |k| k.admits(pos.at))
    }

    /// Blocks of a finite set enumerated in order.
    pub fn points(&self) -> Vec<Pos> {
        (0..self.block_count()).map(Pos::point).collect()
    }

    pub fn to_json(&self) -> Value {
        match self.node() {
            Node::Finite(l) => json!({"finite": l}),
            Node::TailN(t) => json!({"tailN": t}),
            Node::TailZ(t) => json!({"tailZ": t}),
            Node::Union(a, b) => json!({"union": [a.to_json(), b.to_json()]}),
            Node::Product(a, b) => json!({"product": [a.to_json(), b.to_json()]}),
        }
    }

    pub fn from_json(v: &Value) -> Result<IndexSet> {
        let bad = || Error::Parse(format!("invalid index set: {v}"));
        let pair = |key: &str| -> Result<Option<(IndexSet, IndexSet)>> {
            match v.get(key) {
                None => Ok(None),
                Some(x) => {
                    let arr = x.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
                    Ok(Some((IndexSet::from_json(&arr[0])?, IndexSet::from_json(&arr[1])?)))
                }
            }
        };
        if let Some(l) = v.get("finite") {
            let labels = l
                .as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|x| x.as_str().map(str::to_string).ok_or_else(bad))
                .collect::<Result<Vec<_>>>()?;
            let distinct: BTreeSet<&String> = labels.iter().collect();
            if distinct.len() != labels.len() {
                return Err(bad());
            }
            return Self::make(Node::Finite(labels));
        }
        if let Some(t) = v.get("tailN") {
            return Ok(Self::tail_n(t.as_str().ok_or_else(bad)?));
        }
        if let Some(t) = v.get("tailZ") {
            return Ok(Self::tail_z(t.as_str().ok_or_else(bad)?));
        }
        if let Some((a, b)) = pair("union")? {
            return Self::make(Node::Union(a, b));
        }
        if let Some((a, b)) = pair("product")? {
            return Self::make(Node::Product(a, b));
        }
        Err(bad())
    }

    /// Replaces every tail leaf `T` by `{0,…,k−1} × T`; returns the new set
    /// and, for each old block, the new block of each residue (a single entry
    /// for points).
    pub fn split_tails(&self, k: usize) -> Result<(IndexSet, Vec<Vec<usize>>)> {
        if k < 2 {
            return Err(Error::Precondition("split factor must be at least 2".into()));
        }
        let split = self.split_tree(k)?;
        let mut map = Vec::with_capacity(self.block_count());
        for (b, kind) in self.layout().iter().enumerate() {
            if kind.is_tail() {
                let blocks = (0..k as i64)
                    .map(|p| split.pos_of(&split_index(self, &self.index_of(Pos::new(b, p)), k)).map(|q| q.block))
                    .collect::<Result<Vec<_>>>()?;
                map.push(blocks);
            } else {
                map.push(vec![split.pos_of(&self.index_of(Pos::point(b)))?.block]);
            }
        }
        Ok((split, map))
    }

    fn split_tree(&self, k: usize) -> Result<IndexSet> {
        let labels: Vec<String> = (0..k).map(|i| i.to_string()).collect();
        Ok(match self.node() {
            Node::Finite(_) => self.clone(),
            Node::TailN(_) | Node::TailZ(_) => Self::make(Node::Product(Self::finite(&labels), self.clone()))?,
            Node::Union(a, b) => Self::make(Node::Union(a.split_tree(k)?, b.split_tree(k)?))?,
            Node::Product(a, b) => Self::make(Node::Product(a.split_tree(k)?, b.split_tree(k)?))?,
        })
    }
}

/// Maps an index of `set` into the split tree: tail offsets `n` become `(n mod k, n div k)`.
fn split_index(set: &IndexSet, idx: &Index, k: usize) -> Index {
    match (set.node(), idx) {
        (Node::TailN(_) | Node::TailZ(_), Index::Leaf(n)) => {
            let k = k as i64;
            Index::pair(Index::Leaf(n.rem_euclid(k)), Index::Leaf(n.div_euclid(k)))
        }
        (Node::Union(a, _), Index::Left(i)) => Index::left(split_index(a, i, k)),
        (Node::Union(_, b), Index::Right(i)) => Index::right(split_index(b, i, k)),
        (Node::Product(a, b), Index::Pair(i, j)) => Index::pair(split_index(a, i, k), split_index(b, j, k)),
        _ => idx.clone(),
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Finite(l) => write!(f, "{{{}}}", l.join(",")),
            Node::TailN(t) => write!(f, "N[{t}]"),
            Node::TailZ(t) => write!(f, "Z[{t}]"),
            Node::Union(a, b) => write!(f, "({a} + {b})"),
            Node::Product(a, b) => write!(f, "{a}x{b}"),
        }
    }
}

/// Structural isomorphisms of index-set trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeIso {
    Id,
    /// A ∪ B → B ∪ A
    UnionSwap,
    /// A ∪ (B ∪ C) → (A ∪ B) ∪ C
    UnionAssocL,
    /// (A ∪ B) ∪ C → A ∪ (B ∪ C)
    UnionAssocR,
    /// A × B → B × A
    ProdSwap,
    /// A × (B × C) → (A × B) × C
    ProdAssocL,
    /// (A × B) × C → A × (B × C)
    ProdAssocR,
    /// A × (B ∪ C) → (A × B) ∪ (A × C)
    DistribL,
    /// (A ∪ B) × C → (A × C) ∪ (B × C)
    DistribR,
    /// ∅ ∪ A → A
    DropEmptyL,
    /// A ∪ ∅ → A
    DropEmptyR,
    /// {x} × A → A
    DropUnitL,
    /// A × {x} → A
    DropUnitR,
    /// Apply to the left child.
    Left(Box<TreeIso>),
    /// Apply to the right child.
    Right(Box<TreeIso>),
    /// Apply in sequence.
    Seq(Vec<TreeIso>),
}

fn shape_err(iso: &TreeIso, set: &IndexSet) -> Error {
    Error::ShapeMismatch(format!("{iso:?} does not apply to {set}"))
}

impl TreeIso {
    pub fn apply_set(&self, set: &IndexSet) -> Result<IndexSet> {
        let err = || shape_err(self, set);
        let is_empty = |s: &IndexSet| matches!(s.node(), Node::Finite(l) if l.is_empty());
        let is_unit = |s: &IndexSet| matches!(s.node(), Node::Finite(l) if l.len() == 1);
        match (self, set.node()) {
            (TreeIso::Id, _) => Ok(set.clone()),
            (TreeIso::UnionSwap, Node::Union(a, b)) => IndexSet::make(Node::Union(b.clone(), a.clone())),
            (TreeIso::UnionAssocL, Node::Union(a, bc)) => match bc.node() {
                Node::Union(b, c) => IndexSet::make(Node::Union(
                    IndexSet::make(Node::Union(a.clone(), b.clone()))?,
                    c.clone(),
                )),
                _ => Err(err()),
            },
            (TreeIso::UnionAssocR, Node::Union(ab, c)) => match ab.node() {
                Node::Union(a, b) => IndexSet::make(Node::Union(
                    a.clone(),
                    IndexSet::make(Node::Union(b.clone(), c.clone()))?,
                )),
                _ => Err(err()),
            },
            (TreeIso::ProdSwap, Node::Product(a, b)) => IndexSet::make(Node::Product(b.clone(), a.clone())),
            (TreeIso::ProdAssocL, Node::Product(a, bc)) => match bc.node() {
                Node::Product(b, c) => IndexSet::make(Node::Product(
                    IndexSet::make(Node::Product(a.clone(), b.clone()))?,
                    c.clone(),
                )),
                _ => Err(err()),
            },
            (TreeIso::ProdAssocR, Node::Product(ab, c)) => match ab.node() {
                Node::Product(a, b) => IndexSet::make(Node::Product(
                    a.clone(),
                    IndexSet::make(Node::Product(b.clone(), c.clone()))?,
                )),
                _ => Err(err()),
            },
            (TreeIso::DistribL, Node::Product(a, bc)) => match bc.node() {
                Node::Union(b, c) => IndexSet::make(Node::Union(
                    IndexSet::make(Node::Product(a.clone(), b.clone()))?,
                    IndexSet::make(Node::Product(a.clone(), c.clone()))?,
                )),
                _ => Err(err()),
            },
            (TreeIso::DistribR, Node::Product(ab, c)) => match ab.node() {
                Node::Union(a, b) => IndexSet::make(Node::Union(
                    IndexSet::make(Node::Product(a.clone(), c.clone()))?,
                    IndexSet::make(Node::Product(b.clone(), c.clone()))?,
                )),
                _ => Err(err()),
            },
            (TreeIso::DropEmptyL, Node::Union(a, b)) if is_empty(a) => Ok(b.clone()),
            (TreeIso::DropEmptyR, Node::Union(a, b)) if is_empty(b) => Ok(a.clone()),
            (TreeIso::DropUnitL, Node::Product(a, b)) if is_unit(a) => Ok(b.clone()),
            (TreeIso::DropUnitR, Node::Product(a, b)) if is_unit(b) => Ok(a.clone()),
            (TreeIso::Left(inner), Node::Union(a, b)) => IndexSet::make(Node::Union(inner.apply_set(a)?, b.clone())),
            (TreeIso::Left(inner), Node::Product(a, b)) => {
                IndexSet::make(Node::Product(inner.apply_set(a)?, b.clone()))
            }
            (TreeIso::Right(inner), Node::Union(a, b)) => IndexSet::make(Node::Union(a.clone(), inner.apply_set(b)?)),
            (TreeIso::Right(inner), Node::Product(a, b)) => {
                IndexSet::make(Node::Product(a.clone(), inner.apply_set(b)?))
            }
            (TreeIso::Seq(steps), _) => steps.iter().try_fold(set.clone(), |s, step| step.apply_set(&s)),
            _ => Err(err()),
        }
    }

    /// Maps an index of `set` to the corresponding index of `apply_set(set)`.
    pub fn apply_index(&self, set: &IndexSet, idx: &Index) -> Result<Index> {
        let err = || shape_err(self, set);
        let boxed = |i: &Index| i.clone();
        Ok(match (self, set.node(), idx) {
            (TreeIso::Id, _, _) => idx.clone(),
            (TreeIso::UnionSwap, Node::Union(..), Index::Left(i)) => Index::right(boxed(i)),
            (TreeIso::UnionSwap, Node::Union(..), Index::Right(i)) => Index::left(boxed(i)),
            (TreeIso::UnionAssocL, Node::Union(..), Index::Left(i)) => Index::left(Index::left(boxed(i))),
            (TreeIso::UnionAssocL, Node::Union(..), Index::Right(bc)) => match bc.as_ref() {
                Index::Left(i) => Index::left(Index::right(boxed(i))),
                Index::Right(i) => Index::right(boxed(i)),
                _ => return Err(err()),
            },
            (TreeIso::UnionAssocR, Node::Union(..), Index::Left(ab)) => match ab.as_ref() {
                Index::Left(i) => Index::left(boxed(i)),
                Index::Right(i) => Index::right(Index::left(boxed(i))),
                _ => return Err(err()),
            },
            (TreeIso::UnionAssocR, Node::Union(..), Index::Right(i)) => Index::right(Index::right(boxed(i))),
            (TreeIso::ProdSwap, Node::Product(..), Index::Pair(i, j)) => Index::pair(boxed(j), boxed(i)),
            (TreeIso::ProdAssocL, Node::Product(..), Index::Pair(i, jk)) => match jk.as_ref() {
                Index::Pair(j, k) => Index::pair(Index::pair(boxed(i), boxed(j)), boxed(k)),
                _ => return Err(err()),
            },
            (TreeIso::ProdAssocR, Node::Product(..), Index::Pair(ij, k)) => match ij.as_ref() {
                Index::Pair(i, j) => Index::pair(boxed(i), Index::pair(boxed(j), boxed(k))),
                _ => return Err(err()),
            },
            (TreeIso::DistribL, Node::Product(..), Index::Pair(i, jk)) => match jk.as_ref() {
                Index::Left(j) => Index::left(Index::pair(boxed(i), boxed(j))),
                Index::Right(k) => Index::right(Index::pair(boxed(i), boxed(k))),
                _ => return Err(err()),
            },
            (TreeIso::DistribR, Node::Product(..), Index::Pair(ij, k)) => match ij.as_ref() {
                Index::Left(i) => Index::left(Index::pair(boxed(i), boxed(k))),
                Index::Right(j) => Index::right(Index::pair(boxed(j), boxed(k))),
                _ => return Err(err()),
            },
            (TreeIso::DropEmptyL, Node::Union(..), Index::Right(i)) => boxed(i),
            (TreeIso::DropEmptyR, Node::Union(..), Index::Left(i)) => boxed(i),
            (TreeIso::DropUnitL, Node::Product(..), Index::Pair(_, j)) => boxed(j),
            (TreeIso::DropUnitR, Node::Product(..), Index::Pair(i, _)) => boxed(i),
            (TreeIso::Left(inner), Node::Union(a, _), Index::Left(i)) => Index::left(inner.apply_index(a, i)?),
            (TreeIso::Left(_), Node::Union(..), Index::Right(_)) => idx.clone(),
            (TreeIso::Right(inner), Node::Union(_, b), Index::Right(i)) => Index::right(inner.apply_index(b, i)?),
            (TreeIso::Right(_), Node::Union(..), Index::Left(_)) => idx.clone(),
            (TreeIso::Left(inner), Node::Product(a, _), Index::Pair(i, j)) => {
                Index::pair(inner.apply_index(a, i)?, boxed(j))
            }
            (TreeIso::Right(inner), Node::Product(_, b), Index::Pair(i, j)) => {
                Index::pair(boxed(i), inner.apply_index(b, j)?)
            }
            (TreeIso::Seq(steps), _, _) => {
                let mut cur_set = set.clone();
                let mut cur = idx.clone();
                for step in steps {
                    cur = step.apply_index(&cur_set, &cur)?;
                    cur_set = step.apply_set(&cur_set)?;
                }
                cur
            }
            _ => return Err(err()),
        })
    }

    /// The block permutation induced on flattened layouts: entry `b` is the
    /// target block of source block `b`.
    pub fn block_map(&self, set: &IndexSet) -> Result<Vec<usize>> {
        let target = self.apply_set(set)?;
        (0..set.block_count())
            .map(|b| {
                let p = target.pos_of(&self.apply_index(set, &set.index_of(Pos::point(b)))?)?;
                Ok(p.block)
            })
            .collect()
    }
}

/// How a relabeling maps indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Tree(TreeIso),
    /// `n ↦ stride·n + offset` from a tail into a tail. For stride ≥ 2 the
    /// target is the split view `{0,…,stride−1} × tail`.
    TailEmbed { stride: u64, offset: u64 },
    /// Explicit table of (source, target) index pairs over a finite source.
    Table(Vec<(Index, Index)>),
    /// Residue-class splitting of every tail; transported matrices only.
    Split { k: usize },
}

/// An injective relabeling map between index sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabeling {
    source: IndexSet,
    target: IndexSet,
    rule: Rule,
}

impl Relabeling {
    pub fn tree(source: &IndexSet, iso: TreeIso) -> Result<Relabeling> {
        let target = iso.apply_set(source)?;
        Ok(Relabeling { source: source.clone(), target, rule: Rule::Tree(iso) })
    }

    /// `n ↦ stride·n + offset` on an ℕ-tail.
    pub fn tail_embed(tag: &str, stride: u64, offset: u64) -> Result<Relabeling> {
        if stride == 0 {
            return Err(Error::Precondition("stride must be positive".into()));
        }
        let source = IndexSet::tail_n(tag);
        let target = if stride == 1 {
            IndexSet::tail_n(tag)
        } else {
            IndexSet::blocks(stride as usize, &IndexSet::tail_n(tag))
        };
        Ok(Relabeling { source, target, rule: Rule::TailEmbed { stride, offset } })
    }

    /// Explicit table; the source must be finite and the map injective and total.
    pub fn table(source: &IndexSet, target: &IndexSet, pairs: Vec<(Index, Index)>) -> Result<Relabeling> {
        if !source.is_finite() {
            return Err(Error::Precondition("table relabelings need a finite source".into()));
        }
        let mut seen_src = BTreeSet::new();
        let mut seen_dst = BTreeSet::new();
        for (s, d) in &pairs {
            if !seen_src.insert(source.pos_of(s)?) || !seen_dst.insert(target.pos_of(d)?) {
                return Err(Error::Precondition("relabeling table is not injective".into()));
            }
        }
        if seen_src.len() != source.block_count() {
            return Err(Error::Precondition("relabeling table is not total".into()));
        }
        Ok(Relabeling { source: source.clone(), target: target.clone(), rule: Rule::Table(pairs) })
    }

    /// Residue splitting of all tails by `k`.
    pub fn split(source: &IndexSet, k: usize) -> Result<Relabeling> {
        let (target, _) = source.split_tails(k)?;
        Ok(Relabeling { source: source.clone(), target, rule: Rule::Split { k } })
    }

    pub fn source(&self) -> &IndexSet {
        &self.source
    }

    pub fn target(&self) -> &IndexSet {
        &self.target
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    /// Maps a source position to its target position.
    pub fn map_pos(&self, pos: Pos) -> Result<Pos> {
        match &self.rule {
            Rule::Tree(iso) => {
                let idx = iso.apply_index(&self.source, &self.source.index_of(pos))?;
                self.target.pos_of(&idx)
            }
            Rule::TailEmbed { stride, offset } => {
                let n = pos.at + *offset as i64;
                if *stride == 1 {
                    Ok(Pos::new(0, n))
                } else {
                    let k = *stride as i64;
                    let m = pos.at * k + *offset as i64;
                    Ok(Pos::new(m.rem_euclid(k) as usize, m.div_euclid(k)))
                }
            }
            Rule::Table(pairs) => {
                for (s, d) in pairs {
                    if self.source.pos_of(s)? == pos {
                        return self.target.pos_of(d);
                    }
                }
                Err(Error::Precondition(format!("position {pos:?} not in relabeling table")))
            }
            Rule::Split { k } => {
                let idx = split_index(&self.source, &self.source.index_of(pos), *k);
                self.target.pos_of(&idx)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let rule = match &self.rule {
            Rule::Tree(iso) => json!({"treeiso": format!("{iso:?}")}),
            Rule::TailEmbed { stride, offset } => json!({"embed": {"stride": stride, "offset": offset}}),
            Rule::Table(pairs) => json!({"table": pairs.iter().map(|(s, d)| json!([s.to_json(), d.to_json()])).collect::<Vec<_>>()}),
            Rule::Split { k } => json!({"split": k}),
        };
        json!({"source": self.source.to_json(), "target": self.target.to_json(), "rule": rule})
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinalities() {
        let x = IndexSet::finite(&["x"]);
        let y = IndexSet::finite(&["y"]);
        assert_eq!(IndexSet::union(&x, &y).cardinality(), Cardinality::Finite(2));
        let pq = IndexSet::finite(&["p", "q"]);
        assert_eq!(IndexSet::union(&IndexSet::tail_n("a"), &pq).cardinality(), Cardinality::Omega);
        let ab = IndexSet::finite(&["a", "b"]);
        assert_eq!(IndexSet::product(&IndexSet::range(2), &ab).unwrap().cardinality(), Cardinality::Finite(4));
        assert!(matches!(
            IndexSet::product(&IndexSet::tail_n("a"), &IndexSet::tail_n("b")),
            Err(Error::InfiniteProduct)
        ));
    }

    #[test]
    fn union_freshens_tags() {
        let s = IndexSet::single_space();
        let u = IndexSet::union(&s, &s);
        assert_eq!(u.tags().len(), 2);
        assert_eq!(u.layout().len(), 4);
    }

    #[test]
    fn index_round_trip() {
        let omega = IndexSet::union(&IndexSet::range(2), &IndexSet::tail_n("t"));
        let set = IndexSet::union(&IndexSet::blocks(3, &omega), &IndexSet::tail_z("z"));
        for (b, kind) in set.layout().iter().enumerate() {
            for at in [-3i64, 0, 5] {
                if !kind.admits(at) {
                    continue;
                }
                let pos = Pos::new(b, at);
                let idx = set.index_of(pos);
                assert_eq!(set.pos_of(&idx).unwrap(), pos);
                assert_eq!(Index::from_json(&idx.to_json()).unwrap(), idx);
            }
        }
        assert_eq!(IndexSet::from_json(&set.to_json()).unwrap(), set);
    }

    #[test]
    fn tree_iso_block_maps() {
        let set = IndexSet::union(&IndexSet::range(2), &IndexSet::tail_n("t"));
        let map = TreeIso::UnionSwap.block_map(&set).unwrap();
        assert_eq!(map, vec![1, 2, 0]);
        let prod = IndexSet::product(&IndexSet::range(2), &IndexSet::range(3)).unwrap();
        let map = TreeIso::ProdSwap.block_map(&prod).unwrap();
        assert_eq!(map, vec![0, 2, 4, 1, 3, 5]);
    }

    #[test]
    fn split_twice_gives_stabilization_shape() {
        let n = IndexSet::tail_n("n");
        let (once, _) = n.split_tails(2).unwrap();
        assert_eq!(once.layout(), &[BlockKind::TailN, BlockKind::TailN]);
        let (twice, map) = once.split_tails(2).unwrap();
        assert_eq!(twice.block_count(), 4);
        assert_eq!(map, vec![vec![0, 1], vec![2, 3]]);
    }
}
