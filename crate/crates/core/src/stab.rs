//! Internal stabilization on ℕ: the operator `C(θ)`, its odd quantization
//! `Qu¹`, the relabeling `V`, the homotopy `Hv` on single-space idempotents,
//! and the rotation that makes room for a conjugation.

use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::{Ring, Scalar, TrigPoly};
use crate::error::{Error, Result};
use crate::grass::{Morphism, SingleSpace};
use crate::mat::{ColumnFiniteOperator, StructuredMatrix};
use crate::shape::{IndexSet, Pos};

/// `s = cos θ`, `t = sin θ` in a ring where `s² + t² = 1` holds.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigAngle {
    ring: Ring,
    s: Scalar,
    t: Scalar,
}

impl TrigAngle {
    pub fn new(ring: &Ring, s: Scalar, t: Scalar) -> Result<Self> {
        if !ring.contains(&s) || !ring.contains(&t) {
            return Err(Error::RingMismatch(format!("angle components are not in {ring}")));
        }
        let norm = s.mul(&s).add(&t.mul(&t));
        if !ring.approx_eq(&norm, &ring.one()) {
            return Err(Error::Precondition(format!("s² + t² = {norm}, expected 1")));
        }
        Ok(TrigAngle { ring: ring.clone(), s, t })
    }

    /// The generic angle: `s` and `t` are the generators of the trig quotient ring.
    pub fn symbolic() -> Self {
        TrigAngle { ring: Ring::trig(), s: Scalar::Trig(TrigPoly::s()), t: Scalar::Trig(TrigPoly::t()) }
    }

    pub fn float(theta: f64) -> Self {
        TrigAngle { ring: Ring::float(), s: Scalar::Float(theta.cos()), t: Scalar::Float(theta.sin()) }
    }

    /// `θ = 0`.
    pub fn zero(ring: &Ring) -> Self {
        TrigAngle { ring: ring.clone(), s: ring.one(), t: ring.zero() }
    }

    /// `θ = π/2`.
    pub fn right(ring: &Ring) -> Self {
        TrigAngle { ring: ring.clone(), s: ring.zero(), t: ring.one() }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn s(&self) -> &Scalar {
        &self.s
    }

    pub fn t(&self) -> &Scalar {
        &self.t
    }

    /// `θ ↦ −θ`.
    pub fn reflect(&self) -> Self {
        TrigAngle { ring: self.ring.clone(), s: self.s.clone(), t: self.t.neg() }
    }
}

fn n_set() -> IndexSet {
    IndexSet::tail_n("n")
}

fn at(n: u64) -> Pos {
    Pos::new(0, n as i64)
}

/// The operator `C(θ)` on ℕ: column `j` is
/// `t^j s e₀ + Σ_{1≤i≤j} t^{j−i} s² e_i − t e_{j+1}`, and column 0 is `s e₀ − t e₁`.
pub fn cstab(angle: &TrigAngle) -> ColumnFiniteOperator {
    let TrigAngle { ring, s, t } = angle.clone();
    let s2 = s.mul(&s);
    ColumnFiniteOperator::new(&n_set(), &n_set(), &ring.clone(), move |c| {
        let j = c.at as u64;
        let mut col = Vec::new();
        let mut push = |r: u64, v: Scalar| {
            if !v.is_exact_zero() {
                col.push((at(r), v));
            }
        };
        // t_pow[k] = t^k
        let mut t_pow = vec![ring.one()];
        for k in 1..=j as usize {
            t_pow.push(t_pow[k - 1].mul(&t));
        }
        push(0, t_pow[j as usize].mul(&s));
        for i in 1..=j {
            push(i, t_pow[(j - i) as usize].mul(&s2));
        }
        push(j + 1, t.neg());
        col
    })
}

/// A finite combination of wedges `e_{i₁} ∧ … ∧ e_{i_k}` with `i₁ < … < i_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct WedgeVector {
    ring: Ring,
    terms: BTreeMap<Vec<u64>, Scalar>,
}

impl WedgeVector {
    pub fn zero(ring: &Ring) -> Self {
        WedgeVector { ring: ring.clone(), terms: BTreeMap::new() }
    }

    /// The basis wedge of strictly increasing indices.
    pub fn basis(ring: &Ring, indices: &[u64]) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition(format!("wedge indices {indices:?} are not strictly increasing")));
        }
        let mut w = Self::zero(ring);
        w.terms.insert(indices.to_vec(), ring.one());
        Ok(w)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u64>, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, indices: &[u64]) -> Scalar {
        self.terms.get(indices).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// Adds `v · e_{indices}` for an arbitrary index order, sorting with sign.
    pub fn add_term(&mut self, indices: &[u64], v: Scalar) {
        let mut idx = indices.to_vec();
        let mut odd = false;
        for i in 0..idx.len() {
            for j in 0..idx.len() - 1 - i {
                if idx[j] == idx[j + 1] {
                    return;
                }
                if idx[j] > idx[j + 1] {
                    idx.swap(j, j + 1);
                    odd = !odd;
                }
            }
        }
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return;
        }
        let v = if odd { v.neg() } else { v };
        let sum = self.coeff(&idx).add(&v);
        if self.ring.is_zero(&sum) {
            self.terms.remove(&idx);
        } else {
            self.terms.insert(idx, sum);
        }
    }
}

impl fmt::Display for WedgeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(idx, v)| {
                let wedge: Vec<String> = idx.iter().map(|i| format!("e{i}")).collect();
                let wedge = if wedge.is_empty() { "1".to_string() } else { wedge.join("∧") };
                format!("({v})·{wedge}")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Qu¹C`: applies `C` to every factor of every wedge and re-expands.
pub fn qu1_apply(c: &ColumnFiniteOperator, w: &WedgeVector) -> Result<WedgeVector> {
    if c.ring() != w.ring() {
        return Err(Error::RingMismatch(format!("{} vs {}", c.ring(), w.ring())));
    }
    let mut out = WedgeVector::zero(w.ring());
    for (idx, coeff) in w.terms() {
        let mut partial: Vec<(Vec<u64>, Scalar)> = vec![(Vec::new(), coeff.clone())];
        for &i in idx {
            let col = c.column(at(i));
            let mut next = Vec::new();
            for (tuple, v) in &partial {
                for (r, x) in &col {
                    let r = r.at as u64;
                    if tuple.contains(&r) {
                        continue;
                    }
                    let mut t = tuple.clone();
                    t.push(r);
                    next.push((t, v.mul(x)));
                }
            }
            partial = next;
        }
        for (tuple, v) in partial {
            out.add_term(&tuple, v);
        }
    }
    Ok(out)
}

/// `V(e_{i₁} ∧ … ∧ e_{i_k}) = e_{2^{i₁} + … + 2^{i_k}}`.
pub fn v_map(w: &WedgeVector) -> BTreeMap<u64, Scalar> {
    w.terms().iter().map(|(idx, v)| (idx.iter().map(|i| 1u64 << i).sum(), v.clone())).collect()
}

/// The wedge indices of `V⁻¹ e_n`: the binary digits of `n`.
pub fn v_inverse(n: u64) -> Vec<u64> {
    (0..64).filter(|b| n >> b & 1 == 1).collect()
}

/// `V Qu¹C(θ) V⁻¹` as an operator on ℕ.
pub fn hv_operator(angle: &TrigAngle) -> ColumnFiniteOperator {
    let c = cstab(angle);
    let ring = angle.ring().clone();
    ColumnFiniteOperator::new(&n_set(), &n_set(), &ring.clone(), move |col| {
        let w = WedgeVector::basis(&ring, &v_inverse(col.at as u64)).expect("binary digits increase");
        let image = qu1_apply(&c, &w).expect("same ring");
        v_map(&image).into_iter().map(|(m, v)| (at(m), v)).collect()
    })
}

/// `ĥv A ĥvᵀ` with `hv(n) = 2n`, for finitely supported `A` on ℕ.
pub fn hv_conjugation(a: &StructuredMatrix) -> Result<StructuredMatrix> {
    if !a.is_k() || !a.rows().compatible(&n_set()) || !a.cols().compatible(&n_set()) {
        return Err(Error::Precondition("hv acts on finitely supported matrices on ℕ".into()));
    }
    let entries = a.finite().iter().map(|(&(r, c), v)| (Pos::new(0, 2 * r.at), Pos::new(0, 2 * c.at), v.clone()));
    StructuredMatrix::from_entries(a.rows(), a.cols(), a.ring(), entries)
}

fn lift(m: &StructuredMatrix, ring: &Ring) -> Result<StructuredMatrix> {
    if m.ring() == ring {
        return Ok(m.clone());
    }
    m.map_scalars(ring, |x| {
        let r = x.as_rational().ok_or_else(|| Error::RingMismatch(format!("cannot move {x} into {ring}")))?;
        ring.from_rational(&r)
    })
}

/// The homotopy `Hv` applied to the corners of a single-space idempotent.
///
/// `Hv(·, θ)` is `V Qu¹ T_K(·, −θ)`: with the reflected angle the endpoint
/// at `θ = π/2` is exactly `hv_*`, while `C(π/2)` itself adds the signs
/// `(−1)^{popcount}`.
#[derive(Clone, Debug)]
pub struct Stabilization {
    base: SingleSpace,
}

impl Stabilization {
    pub fn new(b: &SingleSpace) -> Self {
        Stabilization { base: b.clone() }
    }

    /// The core of `Hv(b, θ)` over the angle's ring.
    pub fn core_at(&self, angle: &TrigAngle) -> Result<StructuredMatrix> {
        let ring = angle.ring();
        let op = hv_operator(&angle.reflect());
        let n = n_set();
        let core = lift(self.base.core(), ring)?;
        let mut corners = Vec::new();
        for i in 0..2 {
            let mut row = Vec::new();
            for j in 0..2 {
                row.push(op.sandwich(&core.grid_block(&n, i, j)?)?);
            }
            corners.push(row);
        }
        let grid: Vec<Vec<Option<&StructuredMatrix>>> =
            corners.iter().map(|row| row.iter().map(Some).collect()).collect();
        StructuredMatrix::from_grid(&n, ring, &grid)?.with_sets(&IndexSet::single_space(), &IndexSet::single_space())
    }

    /// The leading idempotent `𝐑𝟎 + core` at the given angle.
    pub fn value(&self, angle: &TrigAngle) -> Result<StructuredMatrix> {
        let base = lift(SingleSpace::zero(self.base.ring()).pair().a(), angle.ring())?;
        base.add(&self.core_at(angle)?)
    }

    /// `b ⊕̃ 𝐑𝟎`: every corner relabeled by `hv`, exactly.
    pub fn endpoint(&self) -> Result<SingleSpace> {
        let core = self.base.core();
        let entries = core
            .finite()
            .iter()
            .map(|(&(r, c), v)| (Pos::new(r.block, 2 * r.at), Pos::new(c.block, 2 * c.at), v.clone()));
        SingleSpace::from_core(StructuredMatrix::from_entries(core.rows(), core.cols(), core.ring(), entries)?)
    }
}

/// The endpoint `b ⊕̃ 𝐑𝟎` together with the homotopy sampler.
pub fn stabilize_idempotent(b: &SingleSpace) -> Result<(SingleSpace, Stabilization)> {
    let h = Stabilization::new(b);
    Ok((h.endpoint()?, h))
}

/// `M(α) = [[cos α, −ĥvᵀ sin α], [ĥv sin α, 1_{2ℕ} cos α + 1_{2ℕ+1}]]` in the
/// split view: block 0 is `Ω`, blocks 1 and 2 are the even and odd copies.
pub fn room_rotation(omega: &IndexSet, angle: &TrigAngle) -> Result<StructuredMatrix> {
    let ring = angle.ring();
    let c = StructuredMatrix::scalar_identity(omega, ring, angle.s());
    let s = StructuredMatrix::scalar_identity(omega, ring, angle.t());
    let minus_s = s.neg();
    let one = StructuredMatrix::identity(omega, ring);
    let grid = vec![
        vec![Some(&c), Some(&minus_s), None],
        vec![Some(&s), Some(&c), None],
        vec![None, None, Some(&one)],
    ];
    StructuredMatrix::from_grid(omega, ring, &grid)
}

/// The conjugation `M(α) (φ ⊕ 1 ⊕ 1) M(−α)` as a uniform morphism.
pub fn make_room(phi: &StructuredMatrix, phi_inv: &StructuredMatrix, angle: &TrigAngle) -> Result<Morphism> {
    let ring = angle.ring();
    let omega = phi.rows().clone();
    let (phi, phi_inv) = (lift(phi, ring)?, lift(phi_inv, ring)?);
    let one = StructuredMatrix::identity(&omega, ring);
    if !phi.mul(&phi_inv)?.approx_eq(&one) || !phi_inv.mul(&phi)?.approx_eq(&one) {
        return Err(Error::Precondition("φ is not a unit with the given inverse".into()));
    }
    if !phi.approx_equiv(&one) {
        return Err(Error::Precondition("φ must differ from 1 by a finitely supported matrix".into()));
    }
    let m = room_rotation(&omega, angle)?;
    let m_inv = room_rotation(&omega, &angle.reflect())?;
    let three = IndexSet::blocks(3, &omega);
    let pad = |x: &StructuredMatrix| -> Result<StructuredMatrix> {
        StructuredMatrix::direct_sum_all(&[x, &one, &one])?.with_sets(&three, &three)
    };
    let g = StructuredMatrix::product(&[&m, &pad(&phi)?, &m_inv])?;
    let g_inv = StructuredMatrix::product(&[&m, &pad(&phi_inv)?, &m_inv])?;
    Ok(Morphism::uniform(g, g_inv))
}
