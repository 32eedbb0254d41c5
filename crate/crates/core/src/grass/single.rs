//! The single-space Grassmannian on `S = {0,1} × ℕ`.
//!
//! An element is a pair `⟨𝐑𝟎 + K, 𝐑𝟎⟩` with `K` finitely supported, where
//! `𝐑𝟎 = 0 ⊕ 1`. The operations relabel onto ℕ with fixed bijections and
//! regularize back onto `S`.

use std::collections::HashMap;
use std::hash::Hash;

use crate::coeff::{Ring, Scalar};
use crate::error::{Error, Result};
use crate::mat::StructuredMatrix;
use crate::shape::{IndexSet, Pos};

use super::IdempotentPair;

type Sparse<K> = HashMap<(K, K), Scalar>;

fn bump<K: Eq + Hash>(m: &mut Sparse<K>, k: (K, K), v: Scalar) {
    if v.is_exact_zero() {
        return;
    }
    match m.get_mut(&k) {
        Some(x) => *x = x.add(&v),
        None => {
            m.insert(k, v);
        }
    }
}

/// The four corners `h_ij = a^[i] δ a^[j]` (`a^[1] = a`, `a^[0] = ā`) of the
/// regularization of `⟨a + δ, a⟩`, for a base `a` given by its columns and rows.
fn corners<K, C, R>(delta: &Sparse<K>, col: C, row: R) -> [[Sparse<K>; 2]; 2]
where
    K: Copy + Eq + Hash,
    C: Fn(K) -> Vec<(K, Scalar)>,
    R: Fn(K) -> Vec<(K, Scalar)>,
{
    let mut ad: Sparse<K> = HashMap::new();
    for (&(m, c), v) in delta {
        for (r, w) in col(m) {
            bump(&mut ad, (r, c), w.mul(v));
        }
    }
    let right = |x: &Sparse<K>| {
        let mut out: Sparse<K> = HashMap::new();
        for (&(r, m), v) in x {
            for (c, w) in row(m) {
                bump(&mut out, (r, c), v.mul(&w));
            }
        }
        out
    };
    let da = right(delta);
    let ada = right(&ad);
    let minus = |x: &Sparse<K>, y: &Sparse<K>| {
        let mut out = x.clone();
        for (&k, v) in y {
            bump(&mut out, k, v.neg());
        }
        out.retain(|_, v| !v.is_exact_zero());
        out
    };
    let h10 = minus(&ad, &ada);
    let h01 = minus(&da, &ada);
    let h00 = minus(&minus(delta, &h10), &da);
    [[h00, h01], [h10, ada]]
}

/// `θ₁(copy, (i, n)) = 4n + 2·copy + i` on `S ∪ S`.
pub fn theta1(copy: u64, p: Pos) -> u64 {
    4 * p.at as u64 + 2 * copy + p.block as u64
}

/// `θ₂((i, n)) = 2n + i` on `S`.
pub fn theta2(p: Pos) -> u64 {
    2 * p.at as u64 + p.block as u64
}

fn cantor(n: u64, m: u64) -> u64 {
    (n + m) * (n + m + 1) / 2 + m
}

/// `θ₃((i, n), (k, p)) = 2(2·cantor(n, p) + k) + i` on `S × S`.
pub fn theta3(x: Pos, y: Pos) -> u64 {
    2 * (2 * cantor(x.at as u64, y.at as u64) + y.block as u64) + x.block as u64
}

/// `θ₄` sends the point of 𝟏 to `0`.
pub fn theta4() -> u64 {
    0
}

/// An element of the single-space Grassmannian `G_ℕ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleSpace {
    core: StructuredMatrix,
}

fn r_zero_s(ring: &Ring) -> StructuredMatrix {
    IdempotentPair::r_zero(&IndexSet::tail_n("n"), ring).a().with_sets(&s(), &s()).expect("layout")
}

fn s() -> IndexSet {
    IndexSet::single_space()
}

impl SingleSpace {
    /// From the finite part `K` of `b = 𝐑𝟎 + K`; checks `b² = b`.
    pub fn from_core(core: StructuredMatrix) -> Result<Self> {
        if !core.is_k() {
            return Err(Error::NotFinite("single-space core must be finitely supported".into()));
        }
        let core = core.with_sets(&s(), &s())?;
        let x = SingleSpace { core };
        if !super::is_idempotent(x.pair().b()) {
            return Err(Error::Precondition("leading term is not idempotent".into()));
        }
        Ok(x)
    }

    /// From a pair already in single-space form `⟨b, 𝐑𝟎⟩`.
    pub fn from_pair(p: &IdempotentPair) -> Result<Self> {
        if !p.space().compatible(&s()) || !p.a().approx_eq(&r_zero_s(p.ring())) {
            return Err(Error::Precondition("pair is not in single-space form".into()));
        }
        Self::from_core(p.b().sub(p.a())?)
    }

    /// `𝐑θ_*⟨b, a⟩` for a pair on a finite set, with `θ` the inclusion
    /// `k ↦ k` of its points into ℕ.
    pub fn from_finite_pair(p: &IdempotentPair) -> Result<Self> {
        if !p.space().is_finite() {
            return Err(Error::Precondition("expected a pair on a finite set".into()));
        }
        let delta: Sparse<u64> = p
            .b()
            .sub(p.a())?
            .finite()
            .iter()
            .map(|(&(r, c), v)| ((r.block as u64, c.block as u64), v.clone()))
            .collect();
        let a = p.a().clone();
        let n = p.space().block_count() as u64;
        let col = |m: u64| -> Vec<(u64, Scalar)> {
            (0..n).map(|r| (r, a.entry(Pos::point(r as usize), Pos::point(m as usize)))).collect()
        };
        let row = |m: u64| -> Vec<(u64, Scalar)> {
            (0..n).map(|c| (c, a.entry(Pos::point(m as usize), Pos::point(c as usize)))).collect()
        };
        Self::assemble(p.ring(), corners(&delta, col, row), |k| k)
    }

    fn assemble<K: Copy + Eq + Hash>(ring: &Ring, h: [[Sparse<K>; 2]; 2], label: impl Fn(K) -> u64) -> Result<Self> {
        let mut core = StructuredMatrix::zero(&s(), &s(), ring);
        for (i, row) in h.iter().enumerate() {
            for (j, part) in row.iter().enumerate() {
                for (&(r, c), v) in part {
                    core.add_entry(Pos::new(i, label(r) as i64), Pos::new(j, label(c) as i64), v.clone())?;
                }
            }
        }
        Ok(SingleSpace { core })
    }

    /// Regularization of `⟨A + δ, A⟩` on ℕ for a diagonal 0/1 base `A`.
    fn regularize_diagonal(ring: &Ring, delta: Sparse<u64>, mask: impl Fn(u64) -> bool) -> Result<Self> {
        let one = ring.one();
        let col = |m: u64| if mask(m) { vec![(m, one.clone())] } else { vec![] };
        Self::assemble(ring, corners(&delta, col, col), |k| k)
    }

    pub fn core(&self) -> &StructuredMatrix {
        &self.core
    }

    pub fn ring(&self) -> &Ring {
        self.core.ring()
    }

    /// The pair `⟨𝐑𝟎 + K, 𝐑𝟎⟩`.
    pub fn pair(&self) -> IdempotentPair {
        let base = r_zero_s(self.ring());
        let lead = base.add(&self.core).expect("same shape");
        IdempotentPair::new_unchecked(lead, base).expect("same shape")
    }

    pub fn chi(&self) -> Result<Scalar> {
        Ok(self.ring().scalar_trace(&self.core.finite_trace()?))
    }

    fn entries(&self) -> impl Iterator<Item = (Pos, Pos, &Scalar)> {
        self.core.finite().iter().map(|(&(r, c), v)| (r, c, v))
    }

    /// `𝐑𝟎_ℕ`.
    pub fn zero(ring: &Ring) -> Self {
        SingleSpace { core: StructuredMatrix::zero(&s(), &s(), ring) }
    }

    /// `𝐑θ₄_*𝟏`: the core `e_{(0,0),(0,0)}`.
    pub fn one(ring: &Ring) -> Self {
        let mut delta = HashMap::new();
        delta.insert((theta4(), theta4()), ring.one());
        Self::regularize_diagonal(ring, delta, |_| false).expect("valid positions")
    }

    /// `𝐑θ₁_*(x ⊕ y)`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut delta = HashMap::new();
        for (copy, x) in [(0, self), (1, other)] {
            for (r, c, v) in x.entries() {
                bump(&mut delta, (theta1(copy, r), theta1(copy, c)), v.clone());
            }
        }
        // θ₁ sends the 1-block of both copies to the odd labels
        Self::regularize_diagonal(self.ring(), delta, |m| m % 2 == 1)
    }

    /// `𝐑θ₂_*(x^inv)`.
    pub fn neg(&self) -> Result<Self> {
        let mut delta = HashMap::new();
        for (r, c, v) in self.entries() {
            bump(&mut delta, (theta2(r), theta2(c)), v.neg());
        }
        // the base of x^inv is 1 ⊕ 0, supported on the even labels
        Self::regularize_diagonal(self.ring(), delta, |m| m % 2 == 0)
    }

    /// `𝐑θ₃_*(x ⊗← y)`.
    ///
    /// With `x = ⟨𝐑𝟎 + F, 𝐑𝟎⟩` and `y = ⟨𝐑𝟎 + G, 𝐑𝟎⟩` the product has
    /// difference `F ⊗ G` and base `𝐑𝟎 ⊗ G + 1 ⊗ 𝐑𝟎`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if !self.ring().is_commutative() {
            return Err(Error::RingMismatch("single-space product needs a commutative ring".into()));
        }
        let ring = self.ring().clone();
        let mut delta: Sparse<(Pos, Pos)> = HashMap::new();
        for (r1, c1, v) in self.entries() {
            for (r2, c2, w) in other.entries() {
                bump(&mut delta, ((r1, r2), (c1, c2)), v.mul(w));
            }
        }
        let mut g_by_col: HashMap<Pos, Vec<(Pos, Scalar)>> = HashMap::new();
        let mut g_by_row: HashMap<Pos, Vec<(Pos, Scalar)>> = HashMap::new();
        for (r, c, v) in other.entries() {
            g_by_col.entry(c).or_default().push((r, v.clone()));
            g_by_row.entry(r).or_default().push((c, v.clone()));
        }
        let one = ring.one();
        let col = |(x, y): (Pos, Pos)| {
            let mut out = Vec::new();
            if y.block == 1 {
                out.push(((x, y), one.clone()));
            }
            if x.block == 1 {
                for (r, v) in g_by_col.get(&y).into_iter().flatten() {
                    out.push(((x, *r), v.clone()));
                }
            }
            out
        };
        let row = |(x, y): (Pos, Pos)| {
            let mut out = Vec::new();
            if y.block == 1 {
                out.push(((x, y), one.clone()));
            }
            if x.block == 1 {
                for (c, v) in g_by_row.get(&y).into_iter().flatten() {
                    out.push(((x, *c), v.clone()));
                }
            }
            out
        };
        Self::assemble(&ring, corners(&delta, col, row), |(x, y)| theta3(x, y))
    }
}
