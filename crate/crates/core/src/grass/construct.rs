//! Conjugator constructions: regularization, translation, taming, virtual
//! cancellation, commutativity of the product and the identity witnesses.

use crate::coeff::Ring;
use crate::error::{Error, Result};
use crate::mat::{dense, StructuredMatrix};
use crate::shape::{IndexSet, Pos};

use super::{bar, block_diag, conj, group_permutation, sw, HomotopyWitness, IdempotentPair, Morphism, Pad};

/// `sw₀₁(a) (b ⊕ ā) sw₀₁(a)`.
pub fn regularized_matrix(p: &IdempotentPair) -> Result<StructuredMatrix> {
    let s = sw(2, 0, 1, p.a())?;
    let inner = block_diag(&[p.b(), &bar(p.a())])?;
    conj(&s, &inner, &s)
}

/// 𝐑⟨b, a⟩ = ⟨R⟨b, a⟩, 0 ⊕ 1⟩ on `{0,1} × Ω`.
pub fn regularize_pair(p: &IdempotentPair) -> Result<IdempotentPair> {
    let lead = regularized_matrix(p)?;
    let base = IdempotentPair::r_zero(p.space(), p.ring());
    IdempotentPair::new_unchecked(lead, base.a().clone())
}

/// `⟨b, a⟩ ⊕ ⟨ā, ā⟩ → 𝐑⟨b, a⟩` by `⟨sw₀₁(a), sw₀₁(a)⟩`.
pub fn regularize_witness(p: &IdempotentPair) -> Result<HomotopyWitness> {
    let s = sw(2, 0, 1, p.a())?;
    Ok(HomotopyWitness {
        lhs: p.clone(),
        rhs: regularize_pair(p)?,
        pads_lhs: vec![Pad::Diag(bar(p.a()))],
        pads_rhs: vec![],
        conjugator: Morphism::involution(s),
    })
}

/// `𝐑(⟨ψ, φ⟩, a) = ⟨sw₀₁(aᵠ)(ψ ⊕ φ)sw₀₁(a), φ ⊕ φ⟩`, sending 𝐑⟨b, a⟩ to 𝐑⟨bᵠ, aᵠ⟩.
pub fn regularize_morphism(m: &Morphism, a: &StructuredMatrix) -> Result<Morphism> {
    let a_phi = conj(&m.phi, a, &m.phi_inv)?;
    let s = sw(2, 0, 1, a)?;
    let s_phi = sw(2, 0, 1, &a_phi)?;
    let psi = StructuredMatrix::product(&[&s_phi, &block_diag(&[&m.psi, &m.phi])?, &s])?;
    let psi_inv = StructuredMatrix::product(&[&s, &block_diag(&[&m.psi_inv, &m.phi_inv])?, &s_phi])?;
    let phi = block_diag(&[&m.phi, &m.phi])?;
    let phi_inv = block_diag(&[&m.phi_inv, &m.phi_inv])?;
    Ok(Morphism::new(psi, psi_inv, phi, phi_inv))
}

/// Factors of `H⟨b, a⟩ = sw₁₂(a) sw₁₂(b) sw₀₁(b) sw₀₁(a)` on three blocks.
fn h_factors(p: &IdempotentPair) -> Result<Vec<StructuredMatrix>> {
    Ok(vec![sw(3, 1, 2, p.a())?, sw(3, 1, 2, p.b())?, sw(3, 0, 1, p.b())?, sw(3, 0, 1, p.a())?])
}

/// Product of involutions and the product in reverse order (its inverse).
fn involution_chain(factors: &[StructuredMatrix]) -> Result<(StructuredMatrix, StructuredMatrix)> {
    let fwd: Vec<&StructuredMatrix> = factors.iter().collect();
    let rev: Vec<&StructuredMatrix> = factors.iter().rev().collect();
    Ok((StructuredMatrix::product(&fwd)?, StructuredMatrix::product(&rev)?))
}

/// 𝐇⟨b, a⟩ = ⟨H⟨b, a⟩, 1⟩, sending `a ⊕ ā ⊕ b` to `b ⊕ ā ⊕ a`.
pub fn translation_h(p: &IdempotentPair) -> Result<Morphism> {
    let (h, h_inv) = involution_chain(&h_factors(p)?)?;
    Ok(Morphism::leading(h, h_inv))
}

/// 𝐇𝐑⟨b, a⟩ on six blocks `{0,1,0′,1′,0″,1″}`, sending
/// `𝐑𝟎 ⊕ 𝐑𝟎 ⊕ 𝐑⟨b, a⟩` to `𝐑⟨b, a⟩ ⊕ 𝐑𝟎 ⊕ 𝐑𝟎`.
pub fn translation_hr(p: &IdempotentPair) -> Result<Morphism> {
    let (a, b) = (p.a(), p.b());
    let abar = bar(a);
    let outer = [sw(6, 0, 1, a)?, sw(6, 2, 3, &abar)?, sw(6, 4, 5, a)?];
    let mut factors: Vec<StructuredMatrix> = outer.to_vec();
    factors.extend([sw(6, 2, 4, a)?, sw(6, 2, 4, b)?, sw(6, 0, 2, b)?, sw(6, 0, 2, a)?]);
    factors.extend(outer);
    let (h, h_inv) = involution_chain(&factors)?;
    Ok(Morphism::leading(h, h_inv))
}

/// `x ⊕ 1 ⊕ … ⊕ 1` with `k` summands.
fn pad_identity(x: &StructuredMatrix, omega: &IndexSet, ring: &Ring, k: usize) -> Result<StructuredMatrix> {
    let one = StructuredMatrix::identity(omega, ring);
    let mut parts = vec![x];
    parts.extend(std::iter::repeat(&one).take(k - 1));
    StructuredMatrix::direct_sum_all(&parts)
}

/// Whether `x y = y x`.
pub fn commutes(x: &StructuredMatrix, y: &StructuredMatrix) -> bool {
    match (x.mul(y), y.mul(x)) {
        (Ok(u), Ok(v)) => u.approx_eq(&v),
        _ => false,
    }
}

/// `T(⟨ψ, φ⟩, ⟨b, a⟩) = (ψ ⊕ 1 ⊕ 1) H (φ⁻¹ ⊕ 1 ⊕ 1) H⁻¹` with base term 1.
///
/// When `φ` commutes with `a` it sends `b ⊕ ā ⊕ a` to `bᵠ ⊕ ā ⊕ a`.
pub fn tame_t(m: &Morphism, p: &IdempotentPair) -> Result<Morphism> {
    let omega = p.space();
    let ring = p.ring();
    let h = translation_h(p)?;
    let psi3 = pad_identity(&m.psi, omega, ring, 3)?;
    let psi3_inv = pad_identity(&m.psi_inv, omega, ring, 3)?;
    let phi3 = pad_identity(&m.phi, omega, ring, 3)?;
    let phi3_inv = pad_identity(&m.phi_inv, omega, ring, 3)?;
    let t = StructuredMatrix::product(&[&psi3, &h.psi, &phi3_inv, &h.psi_inv])?;
    let t_inv = StructuredMatrix::product(&[&h.psi, &phi3, &h.psi_inv, &psi3_inv])?;
    Ok(Morphism::leading(t, t_inv))
}

/// `T′ = sw₁₂(a) T sw₁₂(a)`, sending `b ⊕ 1 ⊕ 0` to `b̃ ⊕ 1 ⊕ 0` when
/// `⟨ψ, φ⟩` fixes the base `a`.
pub fn tame_t_prime(m: &Morphism, p: &IdempotentPair) -> Result<Morphism> {
    let t = tame_t(m, p)?;
    let s = sw(3, 1, 2, p.a())?;
    Ok(Morphism::leading(conj(&s, &t.psi, &s)?, conj(&s, &t.psi_inv, &s)?))
}

/// The stable taming statement as a witness: `p ⊕ 𝟎′ ⊕ 𝟎 → ⟨b̃, a⟩ ⊕ 𝟎′ ⊕ 𝟎`.
pub fn stable_taming_witness(m: &Morphism, p: &IdempotentPair) -> Result<HomotopyWitness> {
    let image = m.apply(p)?;
    if !image.a().approx_eq(p.a()) {
        return Err(Error::Precondition("stable taming needs a morphism fixing the base term".into()));
    }
    let rhs = IdempotentPair::new_unchecked(image.b().clone(), p.a().clone())?;
    let pads = vec![Pad::One(p.space().clone()), Pad::Zero(p.space().clone())];
    Ok(HomotopyWitness {
        lhs: p.clone(),
        rhs,
        pads_lhs: pads.clone(),
        pads_rhs: pads,
        conjugator: tame_t_prime(m, p)?,
    })
}

/// `TR = (R(ψ,φ,a) ⊕ 1 ⊕ 1) HR (R(φ,φ,a)⁻¹ ⊕ 1 ⊕ 1) HR⁻¹` with base term 1,
/// sending `𝐑⟨b,a⟩ ⊕ 𝐑𝟎 ⊕ 𝐑𝟎` to `𝐑⟨bᵠ,aᵠ⟩ ⊕ 𝐑𝟎 ⊕ 𝐑𝟎`.
pub fn tame_tr(m: &Morphism, p: &IdempotentPair) -> Result<Morphism> {
    let omega2 = IndexSet::blocks(2, p.space());
    let ring = p.ring();
    let r = regularize_morphism(m, p.a())?;
    let hr = translation_hr(p)?;
    let pad = |x: &StructuredMatrix| -> Result<StructuredMatrix> {
        let one = StructuredMatrix::identity(&omega2, ring);
        StructuredMatrix::direct_sum_all(&[&x.with_sets(&omega2, &omega2)?, &one, &one])
    };
    let (rp, rp_inv, rf, rf_inv) = (pad(&r.psi)?, pad(&r.psi_inv)?, pad(&r.phi)?, pad(&r.phi_inv)?);
    let set = hr.psi.rows().clone();
    let fit = |x: StructuredMatrix| x.with_sets(&set, &set);
    let (rp, rp_inv, rf, rf_inv) = (fit(rp)?, fit(rp_inv)?, fit(rf)?, fit(rf_inv)?);
    let t = StructuredMatrix::product(&[&rp, &hr.psi, &rf_inv, &hr.psi_inv])?;
    let t_inv = StructuredMatrix::product(&[&hr.psi, &rf, &hr.psi_inv, &rp_inv])?;
    Ok(Morphism::leading(t, t_inv))
}

/// Virtual cancellation matrix `B(a)` on `ℤ × Ω`: the row `n − ½` is stored
/// at `n − 1`, so `B(a)` has symbol `a·z⁻¹ + ā` and inverse `a·z + ā`.
pub fn cancel_b(a: &StructuredMatrix) -> Result<Morphism> {
    let ring = a.ring();
    let set = IndexSet::product(&IndexSet::tail_z("z"), a.rows())?;
    let abar = bar(a);
    let mut b = StructuredMatrix::zero(&set, &set, ring);
    let mut b_inv = b.clone();
    for (x, shift) in [(a, 1), (&abar, 0)] {
        for (&(r, c), v) in x.finite() {
            b.add_symbol_term(r.block, c.block, -shift, v.clone())?;
            b_inv.add_symbol_term(r.block, c.block, shift, v.clone())?;
        }
    }
    Ok(Morphism::uniform(b, b_inv))
}

/// Checks exactly on a window that `B(a)` conjugates the step
/// `1 (n < 0), a (n = 0), 0 (n > 0)` to `1 (n ≤ −1), 0 (n ≥ 0)`.
pub fn cancellation_step_check(a: &StructuredMatrix, radius: i64) -> Result<bool> {
    let ring = a.ring();
    let m = cancel_b(a)?;
    let set = m.psi.rows().clone();
    let nb = a.rows().block_count();
    let range = |r: i64| -> Vec<Pos> { (-r..=r).flat_map(|n| (0..nb).map(move |b| Pos::new(b, n))).collect() };
    let outer = range(radius + 2);
    let inner = range(radius);
    let step = |p: Pos, q: Pos| -> crate::coeff::Scalar {
        if p.at != q.at {
            return ring.zero();
        }
        match p.at {
            n if n < 0 => {
                if p.block == q.block {
                    ring.one()
                } else {
                    ring.zero()
                }
            }
            0 => a.entry(Pos::point(p.block), Pos::point(q.block)),
            _ => ring.zero(),
        }
    };
    let d: dense::Dense = outer.iter().map(|&p| outer.iter().map(|&q| step(p, q)).collect()).collect();
    let bw = m.psi.window(&inner, &outer);
    let bw_inv = m.psi_inv.window(&outer, &inner);
    let got = dense::mul(&dense::mul(&bw, &d, ring), &bw_inv, ring);
    let expected: dense::Dense = inner
        .iter()
        .map(|&p| {
            inner
                .iter()
                .map(|&q| if p == q && p.at <= -1 { ring.one() } else { ring.zero() })
                .collect()
        })
        .collect();
    debug_assert!(set.contains(inner[0]));
    Ok(dense::approx_eq(&got, &expected, ring))
}

/// The commutativity conjugator `C(p, q)` on `{0,1,0′,1′} × Ω × Ξ`, sending
/// `𝐑(p ⊗← q) ⊕ 𝐑𝟎` to `𝐑(p ⊗→ q) ⊕ 𝐑𝟎`; base term
/// `sw₀₀′(ā⊗c̄) sw₁₁′(ā⊗c̄)`.
pub fn comm_c(p: &IdempotentPair, q: &IdempotentPair) -> Result<Morphism> {
    if !p.ring().is_commutative() {
        return Err(Error::RingMismatch("the commutativity conjugator needs a commutative ring".into()));
    }
    let (b, a, d, c) = (p.b(), p.a(), q.b(), q.a());
    let (abar, cbar) = (bar(a), bar(c));
    let ac = abar.kronecker(&cbar)?;
    let f1 = b.kronecker(c)?.add(&a.kronecker(&cbar)?)?;
    let f3 = bar(&b.kronecker(d)?);
    let f6 = a.kronecker(d)?.add(&abar.kronecker(c)?)?;
    let factors = [
        sw(4, 0, 1, &f1)?,
        sw(4, 1, 2, &ac)?,
        sw(4, 0, 1, &f3)?,
        sw(4, 2, 3, &ac)?,
        sw(4, 1, 2, &ac)?,
        sw(4, 0, 1, &f6)?,
    ];
    let (cm, cm_inv) = involution_chain(&factors)?;
    let (base, base_inv) = involution_chain(&[sw(4, 0, 2, &ac)?, sw(4, 1, 3, &ac)?])?;
    Ok(Morphism::new(cm, cm_inv, base, base_inv))
}

/// `p ⊕ p^inv → 𝟎_Ω ⊕ 𝟎′_Ω` by `⟨sw₀₁(b), sw₀₁(a)⟩`.
pub fn additive_inverse_witness(p: &IdempotentPair) -> Result<HomotopyWitness> {
    let ring = p.ring().clone();
    let sb = sw(2, 0, 1, p.b())?;
    let sa = sw(2, 0, 1, p.a())?;
    Ok(HomotopyWitness {
        lhs: p.sum(&p.inv())?,
        rhs: IdempotentPair::empty(&ring),
        pads_lhs: vec![],
        pads_rhs: vec![Pad::Zero(p.space().clone()), Pad::One(p.space().clone())],
        conjugator: Morphism::new(sb.clone(), sb, sa.clone(), sa),
    })
}

/// `𝐑⟨b, a⟩ → 𝐑⟨ā, b̄⟩` by `⟨sw₀₁(b) sw₀₁(a), 1⟩`.
pub fn inv_prime_witness(p: &IdempotentPair) -> Result<HomotopyWitness> {
    let sb = sw(2, 0, 1, p.b())?;
    let sa = sw(2, 0, 1, p.a())?;
    Ok(HomotopyWitness {
        lhs: regularize_pair(p)?,
        rhs: regularize_pair(&p.prime())?,
        pads_lhs: vec![],
        pads_rhs: vec![],
        conjugator: Morphism::leading(sb.mul(&sa)?, sa.mul(&sb)?),
    })
}

/// `p ⊗← q → p ⊗← ⟨dᶿ, cᵡ⟩` by `⟨b⊗θ + b̄⊗χ, a⊗θ + ā⊗χ⟩` for `m = ⟨θ, χ⟩`.
pub fn product_conjugation_witness(p: &IdempotentPair, q: &IdempotentPair, m: &Morphism) -> Result<HomotopyWitness> {
    let (b, a) = (p.b(), p.a());
    let (bb, ab) = (bar(b), bar(a));
    let mix = |x: &StructuredMatrix, xb: &StructuredMatrix, t: &StructuredMatrix, u: &StructuredMatrix| {
        x.kronecker(t)?.add(&xb.kronecker(u)?)
    };
    let psi = mix(b, &bb, &m.psi, &m.phi)?;
    let psi_inv = mix(b, &bb, &m.psi_inv, &m.phi_inv)?;
    let phi = mix(a, &ab, &m.psi, &m.phi)?;
    let phi_inv = mix(a, &ab, &m.psi_inv, &m.phi_inv)?;
    Ok(HomotopyWitness {
        lhs: p.tensor_left(q)?,
        rhs: p.tensor_left(&m.apply(q)?)?,
        pads_lhs: vec![],
        pads_rhs: vec![],
        conjugator: Morphism::new(psi, psi_inv, phi, phi_inv),
    })
}

/// Checks `p ⊗← ⟨1 ⊕ 0, 1 ⊕ 0⟩ = ⟨1 ⊕ 0, 1 ⊕ 0⟩` on `Ω × (Ξ₁ ∪ Ξ₀)` after
/// distributing the product over the union.
pub fn product_stabilization_check(p: &IdempotentPair, xi1: &IndexSet, xi0: &IndexSet) -> Result<bool> {
    use crate::shape::{Relabeling, TreeIso};
    let ring = p.ring();
    let e = StructuredMatrix::identity(xi1, ring).direct_sum(&StructuredMatrix::zero(xi0, xi0, ring))?;
    let q = IdempotentPair::diagonal(&e);
    let t = p.tensor_left(&q)?;
    let r = Relabeling::tree(t.space(), TreeIso::DistribL)?;
    let lead = t.b().transport(&r)?;
    let base = t.a().transport(&r)?;
    let o1 = IndexSet::product(p.space(), xi1)?;
    let o0 = IndexSet::product(p.space(), xi0)?;
    let expect = StructuredMatrix::identity(&o1, ring).direct_sum(&StructuredMatrix::zero(&o0, &o0, ring))?;
    Ok(lead.approx_eq(&expect) && base.approx_eq(&expect))
}

/// The chain `⟨b, b′⟩ ≃ ⟨b, a⟩ ⊕ ⟨b′, a⟩^inv` for idempotents `b′ ≈ b ≈ a`,
/// one verified witness per step.
pub fn diff_decomposition(
    b: &StructuredMatrix,
    b_prime: &StructuredMatrix,
    a: &StructuredMatrix,
) -> Result<Vec<HomotopyWitness>> {
    let ring = a.ring().clone();
    let omega = a.rows().clone();
    let abar = bar(a);
    let start = IdempotentPair::new(b.clone(), b_prime.clone())?;
    let p = IdempotentPair::new(b.clone(), a.clone())?;
    let mut steps = Vec::new();

    // stabilize by ⟨a,a⟩ ⊕ ⟨ā,ā⟩ and rotate the summands to the front
    let s3 = IndexSet::blocks(3, &omega);
    let rot = group_permutation(&s3, &[omega.block_count(); 3], &[2, 0, 1], &ring)?;
    let lead1 = StructuredMatrix::direct_sum_all(&[a, &abar, b])?;
    let base1 = StructuredMatrix::direct_sum_all(&[a, &abar, b_prime])?;
    let x1 = IdempotentPair::new_unchecked(lead1, base1)?;
    steps.push(HomotopyWitness {
        lhs: start,
        rhs: x1.clone(),
        pads_lhs: vec![Pad::Diag(a.clone()), Pad::Diag(abar.clone())],
        pads_rhs: vec![],
        conjugator: Morphism::uniform(rot.clone(), rot.transpose()),
    });

    // translate b to the front
    let h = translation_h(&p)?;
    let x2 = h.on_space(x1.space())?.apply(&x1)?;
    steps.push(HomotopyWitness {
        lhs: x1,
        rhs: x2.clone(),
        pads_lhs: vec![],
        pads_rhs: vec![],
        conjugator: h.on_space(&s3)?,
    });

    // move ⟨ā, ā⟩ to the end and cancel it
    let mid = group_permutation(&s3, &[omega.block_count(); 3], &[0, 2, 1], &ring)?;
    let q = IdempotentPair::new_unchecked(a.clone(), b_prime.clone())?;
    let x3 = p.sum(&q)?;
    steps.push(HomotopyWitness {
        lhs: x2,
        rhs: x3.clone(),
        pads_lhs: vec![],
        pads_rhs: vec![Pad::Diag(abar.clone())],
        conjugator: Morphism::uniform(mid.clone(), mid.transpose()),
    });

    // ⟨a, b′⟩ ≃ ⟨b′, a⟩^inv through regularization on the last summand
    let reg = regularize_witness(&q)?.after_summand(&p)?;
    let x4 = reg.rhs.clone();
    steps.push(reg);
    let flip = inv_prime_witness(&q)?.after_summand(&p)?;
    let x5 = flip.rhs.clone();
    debug_assert!(flip.lhs.approx_eq(&x4));
    steps.push(flip);
    let target = IdempotentPair::new_unchecked(b_prime.clone(), a.clone())?.inv();
    let unreg = regularize_witness(&target)?.after_summand(&p)?.reverse();
    debug_assert!(unreg.lhs.approx_eq(&x5));
    steps.push(unreg);
    Ok(steps)
}
