//! Connectors `[ξ, a⟩` and their indices, the involutive correction `ξ̃`,
//! Fredholm pairs `(ψ, φ)` with the involution `F(ψ, φ)` and `Ind_F`.
//!
//! Sign convention: `χ(Ind_F(ψ, φ)) = dim ker ψ − dim coker ψ`, so the
//! backward shift `e_n ↦ e_{n−1}` on ℕ (a co-isometry) has `χ = +1`.

use crate::coeff::{Ring, Scalar};
use crate::error::{Error, Result};
use crate::grass::{bar, block_diag, block_permutation, conj, is_idempotent, sw, HomotopyWitness, IdempotentPair, Morphism, Pad};
use crate::mat::StructuredMatrix;
use crate::shape::{IndexSet, Pos};

type M = StructuredMatrix;

/// `[[tl, tr], [bl, br]]` on the unions of the row and column sets.
pub fn block2(tl: &M, tr: &M, bl: &M, br: &M) -> Result<M> {
    let compatible = tl.rows().compatible(tr.rows())
        && bl.rows().compatible(br.rows())
        && tl.cols().compatible(bl.cols())
        && tr.cols().compatible(br.cols());
    if !compatible {
        return Err(Error::ShapeMismatch("2×2 block matrix with mismatched blocks".into()));
    }
    let rows = IndexSet::union(tl.rows(), bl.rows());
    let cols = IndexSet::union(tl.cols(), tr.cols());
    let (nr, nc) = (tl.rows().block_count(), tl.cols().block_count());
    let mut out = M::zero(&rows, &cols, tl.ring());
    out.place(tl, 0, 0)?;
    out.place(tr, 0, nc)?;
    out.place(bl, nr, 0)?;
    out.place(br, nr, nc)?;
    Ok(out)
}

fn zero(rows: &IndexSet, cols: &IndexSet, ring: &Ring) -> M {
    M::zero(rows, cols, ring)
}

fn one(set: &IndexSet, ring: &Ring) -> M {
    M::identity(set, ring)
}

fn two(ring: &Ring) -> Scalar {
    ring.from_i64(2)
}

fn check_inverse(x: &M, x_inv: &M, what: &str) -> Result<()> {
    let left = one(x.rows(), x.ring());
    let right = one(x.cols(), x.ring());
    if !x.mul(x_inv)?.approx_eq(&left) || !x_inv.mul(x)?.approx_eq(&right) {
        return Err(Error::Precondition(format!("{what}: stored inverse is wrong")));
    }
    Ok(())
}

/// A unit `ξ` with an idempotent `a` such that `ξ ā ξ⁻¹ ≈ a`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connector {
    pub xi: M,
    pub xi_inv: M,
    pub a: M,
}

impl Connector {
    pub fn new(xi: M, xi_inv: M, a: M) -> Result<Self> {
        let c = Connector { xi, xi_inv, a };
        c.validate()?;
        Ok(c)
    }

    /// A connector whose element is an involution.
    pub fn involution(xi: M, a: M) -> Result<Self> {
        Self::new(xi.clone(), xi, a)
    }

    pub fn validate(&self) -> Result<()> {
        check_inverse(&self.xi, &self.xi_inv, "connector element")?;
        if !is_idempotent(&self.a) {
            return Err(Error::Precondition("connector base is not idempotent".into()));
        }
        if !self.xi.rows().compatible(self.a.rows()) {
            return Err(Error::ShapeMismatch("connector element and base on different spaces".into()));
        }
        if !conj(&self.xi, &bar(&self.a), &self.xi_inv)?.approx_equiv(&self.a) {
            return Err(Error::Precondition("ξ ā ξ⁻¹ differs from a by an infinite matrix".into()));
        }
        Ok(())
    }

    /// `Ind [ξ, a⟩ = ⟨ξ ā ξ⁻¹, a⟩`.
    pub fn index(&self) -> Result<IdempotentPair> {
        IdempotentPair::new(conj(&self.xi, &bar(&self.a), &self.xi_inv)?, self.a.clone())
    }

    /// `[ξ₁ ⊕ ξ₂, a₁ ⊕ a₂⟩`.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        Ok(Connector {
            xi: self.xi.direct_sum(&other.xi)?,
            xi_inv: self.xi_inv.direct_sum(&other.xi_inv)?,
            a: self.a.direct_sum(&other.a)?,
        })
    }

    /// `[ξ, ā⟩`.
    pub fn inv(&self) -> Self {
        Connector { xi: self.xi.clone(), xi_inv: self.xi_inv.clone(), a: bar(&self.a) }
    }

    /// `a ⊗ σ + ā ⊗ 1` and its inverse, carrying the base of `self ⊗← other`
    /// onto the base of `Ind self ⊗← Ind other`.
    fn tensor_adapter(&self, other: &Self) -> Result<(M, M)> {
        let (a, abar) = (&self.a, bar(&self.a));
        let one_xi = one(other.a.rows(), other.a.ring());
        let g = a.kronecker(&other.xi)?.add(&abar.kronecker(&one_xi)?)?;
        let g_inv = a.kronecker(&other.xi_inv)?.add(&abar.kronecker(&one_xi)?)?;
        Ok((g, g_inv))
    }

    /// `[(a⊗σ + ā⊗1)⁻¹(ξa⊗1 + ξā⊗σ), a⊗c̄ + ā⊗c⟩` for `self = [ξ, a⟩`,
    /// `other = [σ, c⟩`.
    pub fn tensor_left(&self, other: &Self) -> Result<Self> {
        let (a, abar) = (&self.a, bar(&self.a));
        let (c, cbar) = (&other.a, bar(&other.a));
        let one_xi = one(c.rows(), c.ring());
        let (g, g_inv) = self.tensor_adapter(other)?;
        let k = self.xi.mul(a)?.kronecker(&one_xi)?.add(&self.xi.mul(&abar)?.kronecker(&other.xi)?)?;
        // (ξa ⊗ 1 + ξā ⊗ σ)⁻¹ = aξ⁻¹ ⊗ 1 + āξ⁻¹ ⊗ σ⁻¹
        let k_inv = a
            .mul(&self.xi_inv)?
            .kronecker(&one_xi)?
            .add(&abar.mul(&self.xi_inv)?.kronecker(&other.xi_inv)?)?;
        let base = a.kronecker(&cbar)?.add(&abar.kronecker(c)?)?;
        Connector::new(g_inv.mul(&k)?, k_inv.mul(&g)?, base)
    }

    /// `Ind(self ⊗← other) → Ind self ⊗← Ind other` by `⟨a⊗σ + ā⊗1, a⊗σ + ā⊗1⟩`.
    pub fn tensor_witness(&self, other: &Self) -> Result<HomotopyWitness> {
        let (g, g_inv) = self.tensor_adapter(other)?;
        Ok(HomotopyWitness {
            lhs: self.tensor_left(other)?.index()?,
            rhs: self.index()?.tensor_left(&other.index()?)?,
            pads_lhs: vec![],
            pads_rhs: vec![],
            conjugator: Morphism::uniform(g, g_inv),
        })
    }
}

/// `Ind [ξ, a⟩`.
pub fn index_of(c: &Connector) -> Result<IdempotentPair> {
    c.index()
}

/// The bilateral shift `U: e_n ↦ e_{n+1}` on ℤ composed with the reflection
/// `J: e_n ↦ e_{−1−n}`, as the connector `[UJ, a⟩` for the step `a = 1_{n ≥ 0}`.
///
/// ℤ is stored as two ℕ tails: block 0 holds `n ≥ 0` at `n`, block 1 holds
/// `n = −1 − m` at `m`. `U` alone moves the step by one, so `U ā U⁻¹` is not
/// `≈ a`; with the reflection `UJ ā (UJ)⁻¹ = U a U⁻¹ = 1_{n ≥ 1}`.
pub fn bilateral_shift_connector(ring: &Ring) -> Result<Connector> {
    let z = IndexSet::union(&IndexSet::tail_n("nonneg"), &IndexSet::tail_n("neg"));
    let one = ring.one();
    let mut u = M::zero(&z, &z, ring);
    u.add_symbol_term(0, 0, 1, one.clone())?;
    u.add_symbol_term(1, 1, -1, one.clone())?;
    u.add_entry(Pos::new(0, 0), Pos::new(1, 0), one.clone())?;
    let mut u_inv = M::zero(&z, &z, ring);
    u_inv.add_symbol_term(0, 0, -1, one.clone())?;
    u_inv.add_symbol_term(1, 1, 1, one.clone())?;
    u_inv.add_entry(Pos::new(1, 0), Pos::new(0, 0), one.clone())?;
    let mut j = M::zero(&z, &z, ring);
    j.add_symbol_term(0, 1, 0, one.clone())?;
    j.add_symbol_term(1, 0, 0, one.clone())?;
    let mut a = M::zero(&z, &z, ring);
    a.add_symbol_term(0, 0, 0, one)?;
    Connector::new(u.mul(&j)?, j.mul(&u_inv)?, a)
}

/// `Ind [ξ₁, a⟩ → Ind [ξ₂, a⟩` by `⟨ξ₂ξ₁⁻¹, 1⟩`, for `ξ₁ ≈ ξ₂`.
pub fn perturbation_witness(c1: &Connector, c2: &Connector) -> Result<HomotopyWitness> {
    if !c1.a.approx_eq(&c2.a) {
        return Err(Error::Precondition("connectors have different bases".into()));
    }
    Ok(HomotopyWitness {
        lhs: c1.index()?,
        rhs: c2.index()?,
        pads_lhs: vec![],
        pads_rhs: vec![],
        conjugator: Morphism::leading(c2.xi.mul(&c1.xi_inv)?, c1.xi.mul(&c2.xi_inv)?),
    })
}

/// First steps of the base change `a₁ ≈ a₂`:
/// `Ind [ξ, a₁⟩ ⊕ Ind [ξ, ā₂⟩ → Ind [s(ξ⊕ξ)s, R⟩ → Ind [[[0, ξ], [ξ, 0]], R⟩`
/// with `s = sw₀₁(a₂)` and `R = s(a₁ ⊕ ā₂)s`.
pub fn base_change_steps(xi: &M, xi_inv: &M, a1: &M, a2: &M) -> Result<Vec<HomotopyWitness>> {
    let c1 = Connector::new(xi.clone(), xi_inv.clone(), a1.clone())?;
    let c2 = Connector::new(xi.clone(), xi_inv.clone(), bar(a2))?;
    let s = sw(2, 0, 1, a2)?;
    let omega = a1.rows().clone();
    let ring = a1.ring().clone();
    let doubled = |x: &M| -> Result<M> { s.mul(&block_diag(&[x, x])?)?.mul(&s) };
    let r = s.mul(&block_diag(&[a1, &bar(a2)])?)?.mul(&s)?;
    let mid = Connector::new(doubled(xi)?, doubled(xi_inv)?, r.clone())?;
    let swapped = |x: &M| M::from_grid(&omega, &ring, &[vec![None, Some(x)], vec![Some(x), None]]);
    let end = Connector::new(swapped(xi)?, swapped(xi_inv)?, r)?;
    let second = perturbation_witness(&mid, &end)?;
    let first = HomotopyWitness {
        lhs: c1.sum(&c2)?.index()?,
        rhs: second.lhs.clone(),
        pads_lhs: vec![],
        pads_rhs: vec![],
        conjugator: Morphism::involution(s),
    };
    Ok(vec![first, second])
}

/// `⟨g a g⁻¹, a⟩ → ⟨a, a⟩` by `⟨g⁻¹, 1⟩`; the witness verifies when `g ≈ 1`,
/// which always holds on finite sets.
pub fn conjugate_pair_witness(g: &M, g_inv: &M, a: &M) -> Result<HomotopyWitness> {
    Ok(HomotopyWitness {
        lhs: IdempotentPair::new(conj(g, a, g_inv)?, a.clone())?,
        rhs: IdempotentPair::diagonal(a),
        pads_lhs: vec![],
        pads_rhs: vec![],
        conjugator: Morphism::leading(g_inv.clone(), g.clone()),
    })
}

/// `ξ̃ = (a + aξā − ā)(a − āηa − ā)(a + aξā − ā)` for `ξa = āξ` and a
/// parametrix `η`; a product of three involutions, hence an involution.
pub fn tilde_correction(xi: &M, eta: &M, a: &M) -> Result<M> {
    let abar = bar(a);
    if !xi.mul(a)?.approx_eq(&abar.mul(xi)?) {
        return Err(Error::Precondition("ξ a ≠ ā ξ".into()));
    }
    let ring = a.ring();
    let one_m = one(a.rows(), ring);
    if !xi.mul(eta)?.approx_equiv(&one_m) || !eta.mul(xi)?.approx_equiv(&one_m) {
        return Err(Error::Precondition("η is not a parametrix of ξ".into()));
    }
    let outer = a.add(&a.mul(xi)?.mul(&abar)?)?.sub(&abar)?;
    let inner = a.sub(&abar.mul(eta)?.mul(a)?)?.sub(&abar)?;
    M::product(&[&outer, &inner, &outer])
}

/// `⟨ψaψ⁻¹, a⟩ ⊕ pad ≃ ⟨a, a⟩ ⊕ pad` for a unit `ψ` with `ψ − āψā ≈ a`
/// (pad `𝟎`) or `ψ − aψa ≈ ā` (pad `𝟎′`). The base side uses
/// `[[ā, a], [a, ā]]·diag(ψ, 1)·[[ā, a], [a, ā]]` (resp. with `a ↔ ā`), which
/// commutes with the padded base and agrees with `diag(ψ, 1)` up to a finite
/// matrix.
pub fn swap_replacement_witness(psi: &M, psi_inv: &M, a: &M) -> Result<HomotopyWitness> {
    let abar = bar(a);
    let omega = a.rows().clone();
    let ring = a.ring().clone();
    let first = psi.sub(&abar.mul(psi)?.mul(&abar)?)?.approx_equiv(a);
    let second = psi.sub(&a.mul(psi)?.mul(a)?)?.approx_equiv(&abar);
    let (s, pad) = if first {
        (sw(2, 0, 1, a)?, Pad::Zero(omega.clone()))
    } else if second {
        (sw(2, 0, 1, &abar)?, Pad::One(omega.clone()))
    } else {
        return Err(Error::Precondition("ψ − āψā ≉ a and ψ − aψa ≉ ā".into()));
    };
    let one_m = one(&omega, &ring);
    let d = block_diag(&[psi, &one_m])?;
    let d_inv = block_diag(&[psi_inv, &one_m])?;
    let z = s.mul(&d)?.mul(&s)?;
    let z_inv = s.mul(&d_inv)?.mul(&s)?;
    let lhs = IdempotentPair::new(conj(psi, a, psi_inv)?, a.clone())?;
    let space = lhs.sum(&pad.pair(&ring))?.space().clone();
    Ok(HomotopyWitness {
        lhs,
        rhs: IdempotentPair::diagonal(a),
        pads_lhs: vec![pad.clone()],
        pads_rhs: vec![pad],
        conjugator: Morphism::new(d_inv, d, z_inv, z).on_space(&space)?,
    })
}

/// `Ind [ξ̃, a⟩ ≃ ⟨a, a⟩ = Ind [ξ, a⟩` for an invertible `ξ` with `ξa = āξ`,
/// through [`swap_replacement_witness`] with `ψ = ξ̃ξ⁻¹`.
pub fn tilde_witness(xi: &M, xi_inv: &M, eta: &M, a: &M) -> Result<HomotopyWitness> {
    let t = tilde_correction(xi, eta, a)?;
    let psi = t.mul(xi_inv)?;
    let psi_inv = xi.mul(&t)?;
    swap_replacement_witness(&psi, &psi_inv, a)
}

/// `ψ : Ω₀ → Ω₁` with a parametrix `φ`: `φψ ≈ 1` and `ψφ ≈ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct FredholmPair {
    pub psi: M,
    pub phi: M,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorVariant {
    Raw,
    Reduced,
}

impl FredholmPair {
    pub fn new(psi: M, phi: M) -> Result<Self> {
        let fp = FredholmPair { psi, phi };
        fp.validate()?;
        Ok(fp)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.psi.rows().compatible(self.phi.cols()) || !self.psi.cols().compatible(self.phi.rows()) {
            return Err(Error::ShapeMismatch("ψ and φ do not have transposed shapes".into()));
        }
        let ring = self.psi.ring();
        if !self.phi.mul(&self.psi)?.approx_equiv(&one(self.omega0(), ring)) {
            return Err(Error::Precondition("φψ differs from 1 by an infinite matrix".into()));
        }
        if !self.psi.mul(&self.phi)?.approx_equiv(&one(self.omega1(), ring)) {
            return Err(Error::Precondition("ψφ differs from 1 by an infinite matrix".into()));
        }
        Ok(())
    }

    pub fn omega0(&self) -> &IndexSet {
        self.psi.cols()
    }

    pub fn omega1(&self) -> &IndexSet {
        self.psi.rows()
    }

    pub fn ring(&self) -> &Ring {
        self.psi.ring()
    }

    /// `(u, u⁻¹)` for a unit `u`.
    pub fn unit(u: M, u_inv: M) -> Result<Self> {
        Self::new(u, u_inv)
    }

    /// The backward shift `e_n ↦ e_{n−1}` on ℕ with the forward shift as parametrix.
    pub fn backward_shift(ring: &Ring) -> Self {
        let n = IndexSet::tail_n("n");
        let mut back = M::zero(&n, &n, ring);
        back.add_symbol_term(0, 0, -1, ring.one()).expect("tail block");
        FredholmPair { phi: back.transpose(), psi: back }
    }

    /// `(ψ₁ ⊕ ψ₂, φ₁ ⊕ φ₂)`.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        Ok(FredholmPair { psi: self.psi.direct_sum(&other.psi)?, phi: self.phi.direct_sum(&other.phi)? })
    }

    /// `(φ, ψ)`.
    pub fn inv(&self) -> Self {
        FredholmPair { psi: self.phi.clone(), phi: self.psi.clone() }
    }

    /// `(ψ′ψ, φφ′)` for `self = (ψ, φ)`, `next = (ψ′, φ′)`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        FredholmPair::new(next.psi.mul(&self.psi)?, self.phi.mul(&next.phi)?)
    }

    /// `(1 − φψ, 2φ − φψφ, ψ, ψφ − 1)`, the blocks of `F(ψ, φ)`.
    fn f_blocks(&self) -> Result<[M; 4]> {
        let ring = self.ring();
        let (psi, phi) = (&self.psi, &self.phi);
        let phipsi = phi.mul(psi)?;
        let tl = one(self.omega0(), ring).sub(&phipsi)?;
        let tr = phi.scale_left(&two(ring)).sub(&phipsi.mul(phi)?)?;
        let br = psi.mul(phi)?.sub(&one(self.omega1(), ring))?;
        Ok([tl, tr, psi.clone(), br])
    }

    /// `F(ψ, φ) = [[1, φ], [0, −1]]·[[1, 0], [−ψ, −1]]·[[1, φ], [0, −1]]`.
    pub fn f_matrix(&self) -> Result<M> {
        let [tl, tr, bl, br] = self.f_blocks()?;
        block2(&tl, &tr, &bl, &br)
    }

    /// `F(ψ, φ)` as the product of its three involutive factors.
    pub fn f_factored(&self) -> Result<M> {
        let ring = self.ring();
        let (o0, o1) = (self.omega0(), self.omega1());
        let outer = block2(&one(o0, ring), &self.phi, &zero(o1, o0, ring), &one(o1, ring).neg())?;
        let inner = block2(&one(o0, ring), &zero(o0, o1, ring), &self.psi.neg(), &one(o1, ring).neg())?;
        M::product(&[&outer, &inner, &outer])
    }

    /// `0_{Ω₀} ⊕ 1_{Ω₁}`.
    pub fn base(&self) -> Result<M> {
        let ring = self.ring();
        let (o0, o1) = (self.omega0(), self.omega1());
        block2(&zero(o0, o0, ring), &zero(o0, o1, ring), &zero(o1, o0, ring), &one(o1, ring))
    }

    /// `[F(ψ, φ), 0_{Ω₀} ⊕ 1_{Ω₁}⟩`.
    pub fn connector(&self) -> Result<Connector> {
        Connector::involution(self.f_matrix()?, self.base()?)
    }

    /// `Ind_F(ψ, φ)`.
    pub fn index(&self) -> Result<IdempotentPair> {
        self.connector()?.index()
    }

    /// `χ(Ind_F(ψ, φ))`.
    pub fn chi(&self) -> Result<Scalar> {
        self.index()?.chi()
    }

    /// `(ψ, φ) ⊗← (θ, χ)`; see [`TensorVariant`].
    pub fn tensor_left(&self, other: &Self, variant: TensorVariant) -> Result<Self> {
        let ring = self.ring();
        let (psi, phi) = (&self.psi, &self.phi);
        let (theta, chi) = (&other.psi, &other.phi);
        let (x0, x1) = (other.omega0(), other.omega1());
        let (i_x0, i_x1) = (one(x0, ring), one(x1, ring));
        let [tl, tr, bl, br] = self.f_blocks()?;
        let (big_psi, big_phi) = match variant {
            TensorVariant::Raw => (
                block2(&tl.kronecker(theta)?, &tr.kronecker(&i_x1)?, &bl.kronecker(&i_x0)?, &br.kronecker(chi)?)?,
                block2(&tl.kronecker(chi)?, &tr.kronecker(&i_x0)?, &bl.kronecker(&i_x1)?, &br.kronecker(theta)?)?,
            ),
            TensorVariant::Reduced => {
                let i_o0 = one(self.omega0(), ring);
                let i_o1 = one(self.omega1(), ring);
                (
                    block2(
                        &i_o0.kronecker(theta)?,
                        &phi.kronecker(&i_x1)?,
                        &psi.neg().kronecker(&i_x0)?,
                        &br.neg().kronecker(chi)?,
                    )?,
                    block2(
                        &tl.kronecker(chi)?,
                        &phi.neg().kronecker(&i_x0)?,
                        &psi.kronecker(&i_x1)?,
                        &i_o1.kronecker(theta)?,
                    )?,
                )
            }
        };
        FredholmPair::new(big_psi, big_phi)
    }

    /// `Ind_F(fp₁ ⊕ fp₂) → Ind_F(fp₁) ⊕ Ind_F(fp₂)` by the block permutation
    /// `Ω₀¹ ∪ Ω₀² ∪ Ω₁¹ ∪ Ω₁² → Ω₀¹ ∪ Ω₁¹ ∪ Ω₀² ∪ Ω₁²`.
    pub fn sum_witness(&self, other: &Self) -> Result<HomotopyWitness> {
        let lhs = self.sum(other)?.index()?;
        let rhs = self.index()?.sum(&other.index()?)?;
        let counts = [self.omega0(), other.omega0(), self.omega1(), other.omega1()].map(IndexSet::block_count);
        let starts = [0, counts[0] + counts[2], counts[0], counts[0] + counts[2] + counts[1]];
        let perm: Vec<usize> = (0..4).flat_map(|g| (0..counts[g]).map(move |i| starts[g] + i)).collect();
        let p = block_permutation(lhs.space(), rhs.space(), &perm, self.ring())?;
        Ok(HomotopyWitness {
            lhs,
            rhs,
            pads_lhs: vec![],
            pads_rhs: vec![],
            conjugator: Morphism::uniform(p.clone(), p.transpose()),
        })
    }

    /// `Ind_F(ψ, φ)^inv → Ind_F(φ, ψ)` by `⟨F(φ,ψ)·Pᵀ·F(ψ,φ), Pᵀ⟩`, where
    /// `P : Ω₁ ∪ Ω₀ → Ω₀ ∪ Ω₁` exchanges the two parts.
    pub fn inv_witness(&self) -> Result<HomotopyWitness> {
        let lhs = self.index()?.inv();
        let other = self.inv();
        let rhs = other.index()?;
        let (n0, n1) = (self.omega0().block_count(), self.omega1().block_count());
        let perm: Vec<usize> = (0..n1).map(|i| n0 + i).chain(0..n0).collect();
        let p = block_permutation(rhs.space(), lhs.space(), &perm, self.ring())?;
        let (f, f2) = (self.f_matrix()?, other.f_matrix()?);
        let psi = M::product(&[&f2, &p.transpose(), &f])?;
        let psi_inv = M::product(&[&f, &p, &f2])?;
        Ok(HomotopyWitness {
            lhs,
            rhs,
            pads_lhs: vec![],
            pads_rhs: vec![],
            conjugator: Morphism::new(psi, psi_inv, p.transpose(), p),
        })
    }

    /// `Ind_F(ψ, φ) → Ind_F((u, u⁻¹) ∘ (ψ, φ))` by `⟨1 ⊕ u, 1 ⊕ u⟩`.
    pub fn unit_composition_witness(&self, u: &M, u_inv: &M) -> Result<HomotopyWitness> {
        let composed = self.then(&FredholmPair::unit(u.clone(), u_inv.clone())?)?;
        let ring = self.ring();
        let g = one(self.omega0(), ring).direct_sum(u)?;
        let g_inv = one(self.omega0(), ring).direct_sum(u_inv)?;
        let lhs = self.index()?;
        let rhs = composed.index()?;
        let space = rhs.space().clone();
        Ok(HomotopyWitness {
            lhs,
            rhs,
            pads_lhs: vec![],
            pads_rhs: vec![],
            conjugator: Morphism::uniform(g.with_sets(&space, &space)?, g_inv.with_sets(&space, &space)?),
        })
    }
}

/// `F(ψ, φ)` with base `0_{Ω₀} ⊕ 1_{Ω₁}`.
pub fn connector_f(fp: &FredholmPair) -> Result<Connector> {
    fp.connector()
}

/// `Ind_F(ψ, φ)`.
pub fn index_f(fp: &FredholmPair) -> Result<IdempotentPair> {
    fp.index()
}

/// The integer value of `χ`; float values are rounded when within `1e−6`.
pub fn chi_integer(s: &Scalar) -> Option<i64> {
    match s.as_rational() {
        Some(r) if r.is_integer() => i64::try_from(r.numer()).ok(),
        Some(_) => None,
        None => {
            let x = s.as_f64()?;
            ((x - x.round()).abs() < 1e-6).then_some(x.round() as i64)
        }
    }
}
