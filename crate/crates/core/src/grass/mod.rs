//! Idempotent pairs ⟨b, a⟩, their operations, morphisms and homotopy witnesses.

mod construct;
mod single;

use std::fmt;

use serde_json::{json, Value};

use crate::coeff::{Ring, Scalar};
use crate::error::{Error, Result};
use crate::mat::StructuredMatrix;
use crate::shape::{BlockKind, IndexSet, Pos};

pub use construct::*;
pub use single::*;

/// `1 − x`.
pub fn bar(x: &StructuredMatrix) -> StructuredMatrix {
    let one = StructuredMatrix::identity(x.rows(), x.ring()).with_sets(x.rows(), x.cols()).expect("square");
    one.sub(x).expect("same shape")
}

/// `g·x·g_inv`.
pub fn conj(g: &StructuredMatrix, x: &StructuredMatrix, g_inv: &StructuredMatrix) -> Result<StructuredMatrix> {
    g.mul(x)?.mul(g_inv)
}

/// Whether `x² = x` under the ring's equality.
pub fn is_idempotent(x: &StructuredMatrix) -> bool {
    x.mul(x).map(|sq| sq.approx_eq(x)).unwrap_or(false)
}

/// `sw_{n,m}(a)` on `{0,…,k−1} × Ω`: the identity except for `ā` at the
/// `(n,n)` and `(m,m)` blocks and `a` at `(n,m)` and `(m,n)`. An involution
/// when `a` is idempotent.
pub fn sw(k: usize, n: usize, m: usize, a: &StructuredMatrix) -> Result<StructuredMatrix> {
    if n == m || n >= k || m >= k {
        return Err(Error::Precondition(format!("invalid switch positions {n},{m} of {k}")));
    }
    let omega = a.rows();
    let ring = a.ring();
    let one = StructuredMatrix::identity(omega, ring);
    let abar = bar(a);
    let grid: Vec<Vec<Option<&StructuredMatrix>>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let special = |x: usize| x == n || x == m;
                    if special(i) && special(j) {
                        Some(if i == j { &abar } else { a })
                    } else if i == j {
                        Some(&one)
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();
    StructuredMatrix::from_grid(omega, ring, &grid)
}

/// Block diagonal matrix `x_0 ⊕ … ⊕ x_{k−1}` viewed on `{0,…,k−1} × Ω`.
pub fn block_diag(parts: &[&StructuredMatrix]) -> Result<StructuredMatrix> {
    let omega = parts.first().ok_or_else(|| Error::Precondition("empty block diagonal".into()))?.rows().clone();
    let ring = parts[0].ring().clone();
    let grid: Vec<Vec<Option<&StructuredMatrix>>> = (0..parts.len())
        .map(|i| (0..parts.len()).map(|j| if i == j { Some(parts[i]) } else { None }).collect())
        .collect();
    StructuredMatrix::from_grid(&omega, &ring, &grid)
}

/// Permutation matrix moving source block `b` to target block `perm[b]`.
pub fn block_permutation(source: &IndexSet, target: &IndexSet, perm: &[usize], ring: &Ring) -> Result<StructuredMatrix> {
    if perm.len() != source.block_count() || !source.compatible(source) {
        return Err(Error::ShapeMismatch("permutation length does not match the layout".into()));
    }
    let mut out = StructuredMatrix::zero(target, source, ring);
    for (b, &t) in perm.iter().enumerate() {
        if target.layout().get(t) != Some(&source.layout()[b]) {
            return Err(Error::ShapeMismatch(format!("block {b} cannot move to {t}")));
        }
        if source.layout()[b].is_tail() {
            out.add_symbol_term(t, b, 0, ring.one())?;
        } else {
            out.add_entry(Pos::point(t), Pos::point(b), ring.one())?;
        }
    }
    Ok(out)
}

/// Block permutation rearranging consecutive groups of blocks: the groups
/// have the given sizes and group `g` moves to slot `order[g]`.
pub fn group_permutation(set: &IndexSet, sizes: &[usize], order: &[usize], ring: &Ring) -> Result<StructuredMatrix> {
    if sizes.iter().sum::<usize>() != set.block_count() || order.len() != sizes.len() {
        return Err(Error::ShapeMismatch("group sizes do not cover the layout".into()));
    }
    let mut slot_of_target = vec![0; sizes.len()];
    for (g, &slot) in order.iter().enumerate() {
        slot_of_target[slot] = g;
    }
    let mut target_start = vec![0; sizes.len()];
    let mut acc = 0;
    for &g in &slot_of_target {
        target_start[g] = acc;
        acc += sizes[g];
    }
    let mut perm = Vec::with_capacity(set.block_count());
    for (g, &size) in sizes.iter().enumerate() {
        for i in 0..size {
            perm.push(target_start[g] + i);
        }
    }
    let target_layout: Vec<BlockKind> = {
        let mut l = vec![BlockKind::Point; set.block_count()];
        for (b, &t) in perm.iter().enumerate() {
            l[t] = set.layout()[b];
        }
        l
    };
    if target_layout != set.layout() {
        return Err(Error::ShapeMismatch("group permutation changes the layout".into()));
    }
    block_permutation(set, set, &perm, ring)
}

/// A pair `⟨b, a⟩` of idempotents with finitely supported difference.
#[derive(Clone, Debug, PartialEq)]
pub struct IdempotentPair {
    space: IndexSet,
    b: StructuredMatrix,
    a: StructuredMatrix,
}

impl IdempotentPair {
    /// Validates idempotency of both terms and `b ≈ a`.
    pub fn new(b: StructuredMatrix, a: StructuredMatrix) -> Result<Self> {
        let p = Self::new_unchecked(b, a)?;
        p.validate()?;
        Ok(p)
    }

    /// Builds a pair checking only shapes.
    pub fn new_unchecked(b: StructuredMatrix, a: StructuredMatrix) -> Result<Self> {
        if !b.is_square() || !a.is_square() || !b.rows().compatible(a.rows()) {
            return Err(Error::ShapeMismatch("pair terms must be square on the same space".into()));
        }
        if b.ring() != a.ring() {
            return Err(Error::RingMismatch("pair terms over different rings".into()));
        }
        let space = a.rows().clone();
        let b = b.with_sets(&space, &space)?;
        let a = a.with_sets(&space, &space)?;
        Ok(IdempotentPair { space, b, a })
    }

    pub fn validate(&self) -> Result<()> {
        if !is_idempotent(&self.b) {
            return Err(Error::Precondition("leading term is not idempotent".into()));
        }
        if !is_idempotent(&self.a) {
            return Err(Error::Precondition("base term is not idempotent".into()));
        }
        if !self.b.approx_equiv(&self.a) {
            return Err(Error::Precondition("leading and base terms differ by an infinite matrix".into()));
        }
        Ok(())
    }

    pub fn space(&self) -> &IndexSet {
        &self.space
    }

    pub fn b(&self) -> &StructuredMatrix {
        &self.b
    }

    pub fn a(&self) -> &StructuredMatrix {
        &self.a
    }

    pub fn ring(&self) -> &Ring {
        self.a.ring()
    }

    /// The empty pair 𝟎.
    pub fn empty(ring: &Ring) -> Self {
        let e = IndexSet::empty();
        let z = StructuredMatrix::zero(&e, &e, ring);
        IdempotentPair { space: e, b: z.clone(), a: z }
    }

    /// 𝟏 = ⟨1, 0⟩ on a one-point set, over the given ring.
    pub fn one(ring: &Ring) -> Self {
        let pt = IndexSet::finite(&["1"]);
        IdempotentPair {
            space: pt.clone(),
            b: StructuredMatrix::identity(&pt, ring),
            a: StructuredMatrix::zero(&pt, &pt, ring),
        }
    }

    /// 𝟎_Ξ = ⟨0, 0⟩.
    pub fn zero_on(xi: &IndexSet, ring: &Ring) -> Self {
        let z = StructuredMatrix::zero(xi, xi, ring);
        IdempotentPair { space: xi.clone(), b: z.clone(), a: z }
    }

    /// 𝟎′_Ξ = ⟨1, 1⟩.
    pub fn one_on(xi: &IndexSet, ring: &Ring) -> Self {
        let i = StructuredMatrix::identity(xi, ring);
        IdempotentPair { space: xi.clone(), b: i.clone(), a: i }
    }

    /// ⟨x, x⟩.
    pub fn diagonal(x: &StructuredMatrix) -> Self {
        IdempotentPair { space: x.rows().clone(), b: x.clone(), a: x.clone() }
    }

    /// 𝐑𝟎_Ω = ⟨0 ⊕ 1, 0 ⊕ 1⟩ on `{0,1} × Ω`.
    pub fn r_zero(omega: &IndexSet, ring: &Ring) -> Self {
        let z = StructuredMatrix::zero(omega, omega, ring);
        let i = StructuredMatrix::identity(omega, ring);
        let base = block_diag(&[&z, &i]).expect("blocks");
        Self::diagonal(&base)
    }

    /// Views the pair on a space with the same layout.
    pub fn on_space(&self, space: &IndexSet) -> Result<Self> {
        Ok(IdempotentPair {
            space: space.clone(),
            b: self.b.with_sets(space, space)?,
            a: self.a.with_sets(space, space)?,
        })
    }

    /// `⟨b ⊕ d, a ⊕ c⟩`.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        let b = self.b.direct_sum(&other.b)?;
        let a = self.a.direct_sum(&other.a)?;
        let space = b.rows().clone();
        Ok(IdempotentPair { space, b, a })
    }

    pub fn sum_all(parts: &[&IdempotentPair]) -> Result<Self> {
        let (first, rest) = parts.split_first().ok_or_else(|| Error::Precondition("empty sum".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, p| acc.sum(p))
    }

    /// `⟨b̄, ā⟩`.
    pub fn inv(&self) -> Self {
        IdempotentPair { space: self.space.clone(), b: bar(&self.b), a: bar(&self.a) }
    }

    /// The switch `⟨a, b⟩`.
    pub fn inv_prime(&self) -> Self {
        IdempotentPair { space: self.space.clone(), b: self.a.clone(), a: self.b.clone() }
    }

    /// `⟨ā, b̄⟩`.
    pub fn prime(&self) -> Self {
        IdempotentPair { space: self.space.clone(), b: bar(&self.a), a: bar(&self.b) }
    }

    /// `⟨b⊗d + b̄⊗c, a⊗d + ā⊗c⟩` on `Ω × Ξ`.
    pub fn tensor_left(&self, other: &Self) -> Result<Self> {
        let (b, a, d, c) = (&self.b, &self.a, &other.b, &other.a);
        let lead = b.kronecker(d)?.add(&bar(b).kronecker(c)?)?;
        let base = a.kronecker(d)?.add(&bar(a).kronecker(c)?)?;
        let space = lead.rows().clone();
        Ok(IdempotentPair { space, b: lead, a: base })
    }

    /// `⟨b⊗d + a⊗d̄, b⊗c + a⊗c̄⟩` on `Ω × Ξ`.
    pub fn tensor_right(&self, other: &Self) -> Result<Self> {
        let (b, a, d, c) = (&self.b, &self.a, &other.b, &other.a);
        let lead = b.kronecker(d)?.add(&a.kronecker(&bar(d))?)?;
        let base = b.kronecker(c)?.add(&a.kronecker(&bar(c))?)?;
        let space = lead.rows().clone();
        Ok(IdempotentPair { space, b: lead, a: base })
    }

    /// χ = trace(b − a), with matrix-ring coefficients traced down to their
    /// base ring so that conjugation over a noncommutative ring preserves it.
    pub fn chi(&self) -> Result<Scalar> {
        let t = self.b.sub(&self.a)?.finite_trace()?;
        Ok(self.ring().scalar_trace(&t))
    }

    /// Exact equality of both terms (layouts compared, not tags).
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.space.compatible(&other.space) && self.b.approx_eq(&other.b) && self.a.approx_eq(&other.a)
    }

    pub fn to_json(&self) -> Value {
        json!({"space": self.space.to_json(), "b": self.b.to_json(), "a": self.a.to_json()})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let get = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("pair: missing {k}")));
        let space = IndexSet::from_json(get("space")?)?;
        let b = StructuredMatrix::from_json(get("b")?)?;
        let a = StructuredMatrix::from_json(get("a")?)?;
        Self::new_unchecked(b, a)?.on_space(&space)
    }
}

impl fmt::Display for IdempotentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pair on {}", self.space)?;
        write!(f, "leading: {}", self.b)?;
        write!(f, "base: {}", self.a)
    }
}

/// A unit pair `⟨ψ, φ⟩` with stored inverses and `ψ ≈ φ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Morphism {
    pub psi: StructuredMatrix,
    pub phi: StructuredMatrix,
    pub psi_inv: StructuredMatrix,
    pub phi_inv: StructuredMatrix,
}

impl Morphism {
    pub fn new(
        psi: StructuredMatrix,
        psi_inv: StructuredMatrix,
        phi: StructuredMatrix,
        phi_inv: StructuredMatrix,
    ) -> Self {
        Morphism { psi, phi, psi_inv, phi_inv }
    }

    /// `⟨g, g⟩`.
    pub fn uniform(g: StructuredMatrix, g_inv: StructuredMatrix) -> Self {
        Morphism { psi: g.clone(), phi: g, psi_inv: g_inv.clone(), phi_inv: g_inv }
    }

    /// `⟨g, 1⟩`.
    pub fn leading(g: StructuredMatrix, g_inv: StructuredMatrix) -> Self {
        let one = StructuredMatrix::identity(g.cols(), g.ring()).with_sets(g.rows(), g.cols()).expect("square");
        Morphism { psi: g, psi_inv: g_inv, phi: one.clone(), phi_inv: one }
    }

    /// `⟨g, g⟩` for an involution `g`.
    pub fn involution(g: StructuredMatrix) -> Self {
        Self::uniform(g.clone(), g)
    }

    pub fn identity(set: &IndexSet, ring: &Ring) -> Self {
        Self::involution(StructuredMatrix::identity(set, ring))
    }

    pub fn source(&self) -> &IndexSet {
        self.psi.cols()
    }

    pub fn target(&self) -> &IndexSet {
        self.psi.rows()
    }

    /// Checks the stored inverses and `ψ ≈ φ`.
    pub fn validate(&self) -> Result<()> {
        let check = |x: &StructuredMatrix, y: &StructuredMatrix, what: &str| -> Result<()> {
            let id_l = StructuredMatrix::identity(x.rows(), x.ring());
            let id_r = StructuredMatrix::identity(x.cols(), x.ring());
            if !x.mul(y)?.approx_eq(&id_l) || !y.mul(x)?.approx_eq(&id_r) {
                return Err(Error::Precondition(format!("{what}: stored inverse is wrong")));
            }
            Ok(())
        };
        check(&self.psi, &self.psi_inv, "psi")?;
        check(&self.phi, &self.phi_inv, "phi")?;
        if !self.psi.approx_equiv(&self.phi) {
            return Err(Error::Precondition("psi and phi differ by an infinite matrix".into()));
        }
        Ok(())
    }

    /// `⟨ψ b ψ⁻¹, φ a φ⁻¹⟩`.
    pub fn apply(&self, p: &IdempotentPair) -> Result<IdempotentPair> {
        let b = conj(&self.psi, p.b(), &self.psi_inv)?;
        let a = conj(&self.phi, p.a(), &self.phi_inv)?;
        IdempotentPair::new_unchecked(b, a)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Morphism) -> Result<Morphism> {
        Ok(Morphism {
            psi: self.psi.mul(&first.psi)?,
            phi: self.phi.mul(&first.phi)?,
            psi_inv: first.psi_inv.mul(&self.psi_inv)?,
            phi_inv: first.phi_inv.mul(&self.phi_inv)?,
        })
    }

    pub fn inverse(&self) -> Morphism {
        Morphism {
            psi: self.psi_inv.clone(),
            phi: self.phi_inv.clone(),
            psi_inv: self.psi.clone(),
            phi_inv: self.phi.clone(),
        }
    }

    pub fn direct_sum(&self, other: &Morphism) -> Result<Morphism> {
        Ok(Morphism {
            psi: self.psi.direct_sum(&other.psi)?,
            phi: self.phi.direct_sum(&other.phi)?,
            psi_inv: self.psi_inv.direct_sum(&other.psi_inv)?,
            phi_inv: self.phi_inv.direct_sum(&other.phi_inv)?,
        })
    }

    /// Views all four matrices on a square space with the same layout.
    pub fn on_space(&self, space: &IndexSet) -> Result<Morphism> {
        Ok(Morphism {
            psi: self.psi.with_sets(space, space)?,
            phi: self.phi.with_sets(space, space)?,
            psi_inv: self.psi_inv.with_sets(space, space)?,
            phi_inv: self.phi_inv.with_sets(space, space)?,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "psi": self.psi.to_json(),
            "phi": self.phi.to_json(),
            "psiInv": self.psi_inv.to_json(),
            "phiInv": self.phi_inv.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let get = |k: &str| {
            v.get(k)
                .ok_or_else(|| Error::Parse(format!("morphism: missing {k}")))
                .and_then(StructuredMatrix::from_json)
        };
        Ok(Morphism { psi: get("psi")?, phi: get("phi")?, psi_inv: get("psiInv")?, phi_inv: get("phiInv")? })
    }
}

/// Stabilization summands of a homotopy witness.
#[derive(Clone, Debug, PartialEq)]
pub enum Pad {
    /// 𝟎_Ξ = ⟨0, 0⟩.
    Zero(IndexSet),
    /// 𝟎′_Ξ = ⟨1, 1⟩.
    One(IndexSet),
    /// ⟨x, x⟩ for an idempotent `x`; removable by virtual cancellation.
    Diag(StructuredMatrix),
}

impl Pad {
    pub fn pair(&self, ring: &Ring) -> IdempotentPair {
        match self {
            Pad::Zero(xi) => IdempotentPair::zero_on(xi, ring),
            Pad::One(xi) => IdempotentPair::one_on(xi, ring),
            Pad::Diag(x) => IdempotentPair::diagonal(x),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Pad::Zero(xi) => json!({"zero": xi.to_json()}),
            Pad::One(xi) => json!({"one": xi.to_json()}),
            Pad::Diag(x) => json!({"diag": x.to_json()}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        if let Some(x) = v.get("zero") {
            return Ok(Pad::Zero(IndexSet::from_json(x)?));
        }
        if let Some(x) = v.get("one") {
            return Ok(Pad::One(IndexSet::from_json(x)?));
        }
        if let Some(x) = v.get("diag") {
            return Ok(Pad::Diag(StructuredMatrix::from_json(x)?));
        }
        Err(Error::Parse(format!("invalid pad: {v}")))
    }
}

fn padded(p: &IdempotentPair, pads: &[Pad]) -> Result<IdempotentPair> {
    let ring = p.ring().clone();
    pads.iter().try_fold(p.clone(), |acc, pad| {
        if let Pad::Diag(x) = pad {
            if !is_idempotent(x) {
                return Err(Error::Precondition("diagonal pad is not idempotent".into()));
            }
        }
        acc.sum(&pad.pair(&ring))
    })
}

/// Certificate that `lhs ⊕ pads_lhs` is conjugate to `rhs ⊕ pads_rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomotopyWitness {
    pub lhs: IdempotentPair,
    pub rhs: IdempotentPair,
    pub pads_lhs: Vec<Pad>,
    pub pads_rhs: Vec<Pad>,
    pub conjugator: Morphism,
}

impl HomotopyWitness {
    /// Checks the conjugation exactly; the error names the failing term.
    pub fn check(&self) -> Result<()> {
        self.conjugator.validate()?;
        let l = padded(&self.lhs, &self.pads_lhs)?;
        let r = padded(&self.rhs, &self.pads_rhs)?;
        let image = self.conjugator.apply(&l)?;
        if !image.space().compatible(r.space()) {
            return Err(Error::ShapeMismatch(format!("witness spaces {} vs {}", image.space(), r.space())));
        }
        if !image.b().approx_eq(r.b()) {
            return Err(Error::Precondition("witness: leading terms are not conjugate".into()));
        }
        if !image.a().approx_eq(r.a()) {
            return Err(Error::Precondition("witness: base terms are not conjugate".into()));
        }
        Ok(())
    }

    /// Whether the witness verifies.
    pub fn verify(&self) -> bool {
        self.check().is_ok()
    }

    /// The witness of the reverse homotopy.
    pub fn reverse(&self) -> HomotopyWitness {
        HomotopyWitness {
            lhs: self.rhs.clone(),
            rhs: self.lhs.clone(),
            pads_lhs: self.pads_rhs.clone(),
            pads_rhs: self.pads_lhs.clone(),
            conjugator: self.conjugator.inverse(),
        }
    }

    /// Composes `self: x ≃ y` with `next: y ≃ z` into one witness `x ≃ z`.
    ///
    /// With `g: x ⊕ P₁ → y ⊕ Q₁` and `h: y ⊕ P₂ → z ⊕ Q₂` the composite is
    /// `(h ⊕ 1)·Π·(g ⊕ 1)` on `x ⊕ P₁ ⊕ P₂ → z ⊕ Q₂ ⊕ Q₁`, where `Π` swaps the
    /// pad groups `Q₁` and `P₂`.
    pub fn then(&self, next: &HomotopyWitness) -> Result<HomotopyWitness> {
        if !self.rhs.approx_eq(&next.lhs) {
            return Err(Error::Precondition("witnesses do not chain".into()));
        }
        let ring = self.lhs.ring().clone();
        let p2 = padded(&IdempotentPair::empty(&ring), &next.pads_lhs)?;
        let q1 = padded(&IdempotentPair::empty(&ring), &self.pads_rhs)?;
        let g = self.conjugator.direct_sum(&Morphism::identity(p2.space(), &ring))?;
        let mid_space = IndexSet::union(&padded(&self.rhs, &self.pads_rhs)?.space().clone(), p2.space());
        let sizes = [self.rhs.space().block_count(), q1.space().block_count(), p2.space().block_count()];
        let pi = group_permutation(&mid_space, &sizes, &[0, 2, 1], &ring)?;
        let pi = Morphism::uniform(pi.clone(), pi.transpose());
        let h = next.conjugator.direct_sum(&Morphism::identity(q1.space(), &ring))?;
        let space = g.source().clone();
        let total = h.on_space(&space)?.compose(&pi.on_space(&space)?)?.compose(&g.on_space(&space)?)?;
        let mut pads_lhs = self.pads_lhs.clone();
        pads_lhs.extend(next.pads_lhs.iter().cloned());
        let mut pads_rhs = next.pads_rhs.clone();
        pads_rhs.extend(self.pads_rhs.iter().cloned());
        Ok(HomotopyWitness { lhs: self.lhs.clone(), rhs: next.rhs.clone(), pads_lhs, pads_rhs, conjugator: total })
    }

    /// Lifts `x ≃ y` to `q ⊕ x ≃ q ⊕ y` with conjugator `1 ⊕ g`.
    pub fn after_summand(&self, q: &IdempotentPair) -> Result<HomotopyWitness> {
        let ring = q.ring().clone();
        Ok(HomotopyWitness {
            lhs: q.sum(&self.lhs)?,
            rhs: q.sum(&self.rhs)?,
            pads_lhs: self.pads_lhs.clone(),
            pads_rhs: self.pads_rhs.clone(),
            conjugator: Morphism::identity(q.space(), &ring).direct_sum(&self.conjugator)?,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "padsL": self.pads_lhs.iter().map(Pad::to_json).collect::<Vec<_>>(),
            "padsR": self.pads_rhs.iter().map(Pad::to_json).collect::<Vec<_>>(),
            "conj": self.conjugator.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let get = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("witness: missing {k}")));
        let pads = |k: &str| -> Result<Vec<Pad>> {
            get(k)?
                .as_array()
                .ok_or_else(|| Error::Parse(format!("witness: {k} is not a list")))?
                .iter()
                .map(Pad::from_json)
                .collect()
        };
        Ok(HomotopyWitness {
            lhs: IdempotentPair::from_json(get("lhs")?)?,
            rhs: IdempotentPair::from_json(get("rhs")?)?,
            pads_lhs: pads("padsL")?,
            pads_rhs: pads("padsR")?,
            conjugator: Morphism::from_json(get("conj")?)?,
        })
    }
}

/// Verifies every step of a chain and that consecutive steps connect.
pub fn verify_chain(steps: &[HomotopyWitness]) -> Result<()> {
    for (i, w) in steps.iter().enumerate() {
        w.check().map_err(|e| Error::Precondition(format!("step {i}: {e}")))?;
        if let Some(next) = steps.get(i + 1) {
            if !w.rhs.approx_eq(&next.lhs) {
                return Err(Error::Precondition(format!("steps {i} and {} do not connect", i + 1)));
            }
        }
    }
    Ok(())
}
