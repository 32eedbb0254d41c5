//! Seeded identity suites.
//!
//! Each family checks one group of identities on random or fixed instances.
//! Case `k` of a run with seed `s` draws its instances from `Gen::new(s ^ k)`,
//! so a failure is reproducible from the seed recorded in its report.

use std::time::{Duration, Instant};

use serde_json::{json, Value};

use crate::analytic::{self, ConnectForm, IdemMethod, IdempotentPath, NearIdempotent};
use crate::coeff::{Ring, Scalar, TrigPoly};
use crate::error::{Error, Result};
use crate::fred::{self, chi_integer, Connector, FredholmPair, TensorVariant};
use crate::gen::Gen;
use crate::grass::{self, bar, conj, IdempotentPair, Morphism, SingleSpace};
use crate::mat::dense::{self, Dense};
use crate::regular::{self, RegularIdempotent};
use crate::shape::{IndexSet, Pos};
use crate::stab::{self, TrigAngle, WedgeVector};
use crate::StructuredMatrix as M;

type Outcome = std::result::Result<(), String>;

trait Context<T> {
    fn ctx(self, what: &str) -> std::result::Result<T, String>;
}

impl<T> Context<T> for Result<T> {
    fn ctx(self, what: &str) -> std::result::Result<T, String> {
        self.map_err(|e| format!("{what}: {e}"))
    }
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

/// Describes where two matrices first differ: a symbol coefficient or a
/// finite entry, with both values.
pub fn first_difference(lhs: &M, rhs: &M) -> Option<String> {
    if !lhs.rows().compatible(rhs.rows()) || !lhs.cols().compatible(rhs.cols()) {
        return Some(format!("shapes {}x{} vs {}x{}", lhs.rows(), lhs.cols(), rhs.rows(), rhs.cols()));
    }
    let ring = lhs.ring();
    let d = match lhs.sub(rhs) {
        Ok(d) => d,
        Err(e) => return Some(e.to_string()),
    };
    for (&(rb, cb), sym) in d.symbols() {
        for (deg, c) in sym.terms() {
            if !ring.is_zero(c) {
                return Some(format!("symbol ({rb},{cb}) degree {deg} differs by {c}"));
            }
        }
    }
    for (&(r, c), v) in d.finite() {
        if !ring.is_zero(v) {
            return Some(format!(
                "entry ({},{})x({},{}): {} vs {}",
                r.block,
                r.at,
                c.block,
                c.at,
                lhs.entry(r, c),
                rhs.entry(r, c)
            ));
        }
    }
    None
}

fn same(what: &str, lhs: &M, rhs: &M) -> Outcome {
    match first_difference(lhs, rhs) {
        None => Ok(()),
        Some(d) => Err(format!("{what}: {d}")),
    }
}

fn same_pair(what: &str, lhs: &IdempotentPair, rhs: &IdempotentPair) -> Outcome {
    same(&format!("{what} (leading)"), lhs.b(), rhs.b())?;
    same(&format!("{what} (base)"), lhs.a(), rhs.a())
}

fn same_scalar(what: &str, ring: &Ring, lhs: &Scalar, rhs: &Scalar) -> Outcome {
    ensure(ring.approx_eq(lhs, rhs), || format!("{what}: {lhs} vs {rhs}"))
}

fn close(what: &str, lhs: &M, rhs: &M, tol: f64) -> Outcome {
    let d = analytic::window_norm(&lhs.sub(rhs).ctx(what)?);
    ensure(d <= tol, || format!("{what}: distance {d:e} exceeds {tol:e}"))
}

fn q() -> Ring {
    Ring::rationals()
}

/// `Q` or `M₂(Q)`, with a point count keeping the rational size at most 4.
fn random_setting(g: &mut Gen) -> (Ring, usize) {
    if g.range(0, 2) == 0 {
        (Ring::matrix(q(), 2).expect("size 2"), g.range(1, 2))
    } else {
        (q(), g.range(1, 4))
    }
}

fn dense_of(m: &M) -> Dense {
    m.window(&m.rows().points(), &m.cols().points())
}

/// `trace(b − a)` from dense windows of a pair on a finite set.
fn trace_oracle(p: &IdempotentPair) -> Scalar {
    p.ring().scalar_trace(&dense::trace(&dense::sub(&dense_of(p.b()), &dense_of(p.a())), p.ring()))
}

fn chi_of(p: &IdempotentPair) -> std::result::Result<i64, String> {
    let c = p.chi().ctx("chi")?;
    chi_integer(&c).ok_or_else(|| format!("chi {c} is not an integer"))
}

// grassmann

fn r_morphism(g: &mut Gen) -> Outcome {
    let (ring, n) = random_setting(g);
    let p = g.pair(n, &ring).ctx("pair")?;
    let m = g.morphism(p.space(), &ring).ctx("morphism")?;
    let rm = grass::regularize_morphism(&m, p.a()).ctx("R(m)")?;
    rm.validate().ctx("R(m)")?;
    let lhs = rm.apply(&grass::regularize_pair(&p).ctx("R(p)")?).ctx("apply")?;
    let rhs = grass::regularize_pair(&m.apply(&p).ctx("apply")?).ctx("R(mp)")?;
    same_pair("R(m)R(p) = R(mp)", &lhs, &rhs)?;
    grass::regularize_witness(&p).ctx("R witness")?.check().ctx("R witness")
}

fn sum3(x: &M, y: &M, z: &M) -> std::result::Result<M, String> {
    M::direct_sum_all(&[x, y, z]).ctx("direct sum")
}

fn translation_h(g: &mut Gen) -> Outcome {
    let (ring, n) = random_setting(g);
    let p = g.pair(n, &ring).ctx("pair")?;
    let abar = bar(p.a());
    let h = grass::translation_h(&p).ctx("H")?;
    h.validate().ctx("H")?;
    let src = IdempotentPair::new_unchecked(sum3(p.a(), &abar, p.b())?, sum3(p.a(), &abar, p.a())?).ctx("source")?;
    let dst = IdempotentPair::new_unchecked(sum3(p.b(), &abar, p.a())?, sum3(p.a(), &abar, p.a())?).ctx("target")?;
    same_pair("H", &h.apply(&src).ctx("apply")?, &dst)
}

fn translation_hr(g: &mut Gen) -> Outcome {
    let (ring, n) = random_setting(g);
    let p = g.pair(n, &ring).ctx("pair")?;
    let hr = grass::translation_hr(&p).ctx("HR")?;
    hr.validate().ctx("HR")?;
    let r0 = IdempotentPair::r_zero(p.space(), &ring);
    let rp = grass::regularize_pair(&p).ctx("R(p)")?;
    let src = IdempotentPair::sum_all(&[&r0, &r0, &rp]).ctx("source")?;
    let dst = IdempotentPair::sum_all(&[&rp, &r0, &r0]).ctx("target")?;
    same_pair("HR", &hr.apply(&src).ctx("apply")?, &dst)
}

fn stable_taming(g: &mut Gen) -> Outcome {
    let (ring, n) = random_setting(g);
    let omega = IndexSet::range(n);
    let (a, phi, phi_inv) = g.idempotent_with_commutant(&omega, &ring).ctx("commutant")?;
    let b = g.idempotent(&omega, &ring).ctx("idempotent")?;
    let p = IdempotentPair::new(b, a).ctx("pair")?;
    let (psi, psi_inv) = g.unit(&omega, &ring).ctx("unit")?;
    let m = Morphism::new(psi, psi_inv, phi, phi_inv);
    grass::stable_taming_witness(&m, &p).ctx("T′ witness")?.check().ctx("T′ witness")?;
    let t = grass::tame_t(&m, &p).ctx("T")?;
    t.validate().ctx("T")?;
    let abar = bar(p.a());
    let src = IdempotentPair::new_unchecked(sum3(p.b(), &abar, p.a())?, sum3(p.a(), &abar, p.a())?).ctx("source")?;
    let image = t.apply(&src).ctx("apply")?;
    let moved = m.apply(&p).ctx("apply")?;
    same("T leading term", image.b(), &sum3(moved.b(), &abar, p.a())?)
}

fn taming_tr(g: &mut Gen) -> Outcome {
    let (ring, n) = random_setting(g);
    let p = g.pair(n, &ring).ctx("pair")?;
    let m = g.morphism(p.space(), &ring).ctx("morphism")?;
    let tr = grass::tame_tr(&m, &p).ctx("TR")?;
    tr.validate().ctx("TR")?;
    let r0 = IdempotentPair::r_zero(p.space(), &ring);
    let src = IdempotentPair::sum_all(&[&grass::regularize_pair(&p).ctx("R(p)")?, &r0, &r0]).ctx("source")?;
    let moved = grass::regularize_pair(&m.apply(&p).ctx("apply")?).ctx("R(mp)")?;
    let dst = IdempotentPair::sum_all(&[&moved, &r0, &r0]).ctx("target")?;
    same_pair("TR", &tr.apply(&src).ctx("apply")?, &dst)
}

fn virtual_cancellation(g: &mut Gen) -> Outcome {
    let n = g.range(1, 3);
    let a = g.idempotent(&IndexSet::range(n), &q()).ctx("idempotent")?;
    let b = grass::cancel_b(&a).ctx("B(a)")?;
    let one = M::identity(b.psi.rows(), &q());
    same("B(a)B(a)⁻¹", &b.psi.mul(&b.psi_inv).ctx("product")?, &one)?;
    same("B(a)⁻¹B(a)", &b.psi_inv.mul(&b.psi).ctx("product")?, &one)?;
    ensure(grass::cancellation_step_check(&a, 4).ctx("step")?, || "step conjugation fails on the window".into())
}

fn additive_inverse(g: &mut Gen) -> Outcome {
    let (ring, n) = random_setting(g);
    let p = g.pair(n, &ring).ctx("pair")?;
    let w = grass::additive_inverse_witness(&p).ctx("witness")?;
    w.check().ctx("p ⊕ inv p ≃ 0")?;
    let base = ring.trace_ring();
    same_scalar("χ(p ⊕ inv p)", base, &w.lhs.chi().ctx("chi")?, &base.zero())
}

fn commutativity_c(g: &mut Gen) -> Outcome {
    let (n1, n2) = (g.range(1, 2), g.range(1, 2));
    let p = g.pair(n1, &q()).ctx("pair")?;
    let s = g.pair(n2, &q()).ctx("pair")?;
    let c = grass::comm_c(&p, &s).ctx("C")?;
    c.validate().ctx("C")?;
    let prod = IndexSet::product(p.space(), s.space()).ctx("product")?;
    let r0 = IdempotentPair::r_zero(&prod, &q());
    let src = grass::regularize_pair(&p.tensor_left(&s).ctx("⊗←")?).ctx("R")?.sum(&r0).ctx("sum")?;
    let dst = grass::regularize_pair(&p.tensor_right(&s).ctx("⊗→")?).ctx("R")?.sum(&r0).ctx("sum")?;
    same_pair("C", &c.apply(&src).ctx("apply")?, &dst)?;
    let m2 = Ring::matrix(q(), 2).expect("size 2");
    let pm = g.pair(1, &m2).ctx("pair")?;
    ensure(grass::comm_c(&pm, &pm).is_err(), || "C accepted a noncommutative ring".into())
}

fn product_compatibility(g: &mut Gen) -> Outcome {
    let (n1, n2) = (g.range(1, 2), g.range(1, 2));
    let p = g.pair(n1, &q()).ctx("pair")?;
    let s = g.pair(n2, &q()).ctx("pair")?;
    let m = g.morphism(s.space(), &q()).ctx("morphism")?;
    grass::product_conjugation_witness(&p, &s, &m).ctx("conjugation")?.check().ctx("p ⊗ m")?;
    let (x1, x0) = (IndexSet::range(g.range(1, 2)), IndexSet::range(g.range(1, 2)));
    ensure(grass::product_stabilization_check(&p, &x1, &x0).ctx("stabilization")?, || {
        "product with stabilized pair fails".into()
    })
}

fn inv_prime_variant(g: &mut Gen) -> Outcome {
    let (ring, n) = random_setting(g);
    let p = g.pair(n, &ring).ctx("pair")?;
    grass::inv_prime_witness(&p).ctx("witness")?.check().ctx("inv′")
}

fn difference_chain(g: &mut Gen) -> Outcome {
    let (ring, n) = random_setting(g);
    let omega = IndexSet::range(n);
    let b = g.idempotent(&omega, &ring).ctx("idempotent")?;
    let bp = g.idempotent(&omega, &ring).ctx("idempotent")?;
    let a = g.idempotent(&omega, &ring).ctx("idempotent")?;
    let steps = grass::diff_decomposition(&b, &bp, &a).ctx("chain")?;
    grass::verify_chain(&steps).ctx("chain")?;
    let expect = IdempotentPair::new(b, a.clone())
        .ctx("pair")?
        .sum(&IdempotentPair::new(bp, a).ctx("pair")?.inv())
        .ctx("sum")?;
    same_pair("chain end", &steps.last().expect("nonempty").rhs, &expect)?;
    let composed = steps.iter().skip(1).try_fold(steps[0].clone(), |acc, w| acc.then(w)).ctx("compose")?;
    composed.check().ctx("composed chain")
}

fn chi_laws(g: &mut Gen) -> Outcome {
    let (ring, n) = random_setting(g);
    let p = g.pair(n, &ring).ctx("pair")?;
    let base = ring.trace_ring().clone();
    let n_r = g.range(1, 3);
    let r = g.pair(n_r, &q()).ctx("pair")?;
    let n_s = g.range(1, 3);
    let s = g.pair(n_s, &q()).ctx("pair")?;
    let cp = p.chi().ctx("chi")?;
    same_scalar("χ vs trace", &base, &cp, &trace_oracle(&p))?;
    let sum = p.sum(&p.inv()).ctx("sum")?.sum(&p).ctx("sum")?;
    same_scalar("χ(p ⊕ inv p ⊕ p)", &base, &sum.chi().ctx("chi")?, &trace_oracle(&p))?;
    let qq = q();
    let (cr, cs) = (trace_oracle(&r), trace_oracle(&s));
    same_scalar("χ(r ⊕ s)", &qq, &r.sum(&s).ctx("sum")?.chi().ctx("chi")?, &cr.add(&cs))?;
    same_scalar("χ(inv p)", &base, &p.inv().chi().ctx("chi")?, &cp.neg())?;
    same_scalar("χ(r ⊗← s)", &qq, &r.tensor_left(&s).ctx("⊗←")?.chi().ctx("chi")?, &cr.mul(&cs))?;
    same_scalar("χ(r ⊗→ s)", &qq, &r.tensor_right(&s).ctx("⊗→")?.chi().ctx("chi")?, &cr.mul(&cs))?;
    same_scalar("χ(𝟏)", &qq, &IdempotentPair::one(&qq).chi().ctx("chi")?, &qq.one())?;
    same_scalar("χ(𝟎)", &qq, &IdempotentPair::zero_on(&IndexSet::range(n), &qq).chi().ctx("chi")?, &qq.zero())?;
    let witnesses = [
        grass::regularize_witness(&p).ctx("R witness")?,
        grass::additive_inverse_witness(&p).ctx("inverse witness")?,
        grass::inv_prime_witness(&p).ctx("inv′ witness")?,
    ];
    for w in &witnesses {
        w.check().ctx("witness")?;
        same_scalar("χ conserved", &base, &w.lhs.chi().ctx("chi")?, &w.rhs.chi().ctx("chi")?)?;
    }
    Ok(())
}

fn single_space(g: &mut Gen) -> Outcome {
    let n_x = g.range(1, 3);
    let x = g.single_space(n_x).ctx("element")?;
    let n_y = g.range(1, 3);
    let y = g.single_space(n_y).ctx("element")?;
    let (cx, cy) = (x.chi().ctx("chi")?, y.chi().ctx("chi")?);
    let qq = q();
    let s = x.add(&y).ctx("add")?;
    s.pair().validate().ctx("x ⊕̃ y")?;
    same_scalar("χ(x ⊕̃ y)", &qq, &s.chi().ctx("chi")?, &cx.add(&cy))?;
    same_scalar("χ(⊖̃ x)", &qq, &x.neg().ctx("neg")?.chi().ctx("chi")?, &cx.neg())?;
    let m = x.mul(&y).ctx("mul")?;
    m.pair().validate().ctx("x ⊗̃ y")?;
    same_scalar("χ(x ⊗̃ y)", &qq, &m.chi().ctx("chi")?, &cx.mul(&cy))?;
    ensure(SingleSpace::from_pair(&x.pair()).ctx("relabel")? == x, || "single-space relabeling is not idempotent".into())
}

// regular

fn regular_identities(g: &mut Gen) -> Outcome {
    let n_p = g.range(1, 3);
    let p = g.pair(n_p, &q()).ctx("pair")?;
    let n_s = g.range(1, 2);
    let s = g.pair(n_s, &q()).ctx("pair")?;
    let u = RegularIdempotent::of_pair(&p).ctx("regular")?;
    let v = RegularIdempotent::of_pair(&s).ctx("regular")?;
    let produced = [
        ("R(p)", u.clone()),
        ("inv", u.inv().ctx("inv")?),
        ("prime", u.prime().ctx("prime")?),
        ("⊗←", u.tensor_left(&v).ctx("⊗←")?),
        ("⊗→", u.tensor_right(&v).ctx("⊗→")?),
        ("⊕", u.sum(&v).ctx("⊕")?),
    ];
    for (what, x) in &produced {
        for (name, ok) in x.core().identities() {
            ensure(ok, || format!("{what}: identity {name} fails"))?;
        }
    }
    Ok(())
}

fn regular_coherence(g: &mut Gen) -> Outcome {
    let n_p = g.range(1, 3);
    let p = g.pair(n_p, &q()).ctx("pair")?;
    let n_s = g.range(1, 2);
    let s = g.pair(n_s, &q()).ctx("pair")?;
    let u = RegularIdempotent::of_pair(&p).ctx("regular")?;
    let v = RegularIdempotent::of_pair(&s).ctx("regular")?;
    let r = |x: &IdempotentPair| grass::regularize_pair(x).ctx("R");
    same("inv∘R = R∘inv", u.inv().ctx("inv")?.matrix(), r(&p.inv())?.b())?;
    same("prime∘R = R∘prime", u.prime().ctx("prime")?.matrix(), r(&p.prime())?.b())?;
    same("prime by switches", &u.prime_by_switches().ctx("prime")?, r(&p.prime())?.b())?;
    same("⊗←∘R = R∘⊗←", u.tensor_left(&v).ctx("⊗←")?.matrix(), r(&p.tensor_left(&s).ctx("⊗←")?)?.b())?;
    same("⊗→∘R = R∘⊗→", u.tensor_right(&v).ctx("⊗→")?.matrix(), r(&p.tensor_right(&s).ctx("⊗→")?)?.b())
}

fn dim_upper_laws(g: &mut Gen) -> Outcome {
    let qq = q();
    let one = regular::dim_upper(&IdempotentPair::one(&qq)).ctx("dim 𝟏")?;
    ensure(one.dim == 1, || format!("dim 𝟏 = {}", one.dim))?;
    let n_p = g.range(1, 3);
    let p = g.pair(n_p, &qq).ctx("pair")?;
    let n_s = g.range(1, 2);
    let s = g.pair(n_s, &qq).ctx("pair")?;
    let dp = regular::dim_upper(&p).ctx("dim p")?;
    dp.check().ctx("certificate")?;
    let ds = regular::dim_upper(&s).ctx("dim s")?;
    ds.check().ctx("certificate")?;
    if dp.dim == 0 {
        same("dim 0 ⟹ b = a", p.b(), p.a())?;
    }
    let di = regular::dim_upper(&p.inv()).ctx("dim inv")?.dim;
    ensure(di == dp.dim, || format!("dim inv p = {di}, dim p = {}", dp.dim))?;
    let dsum = regular::dim_upper(&p.sum(&s).ctx("sum")?).ctx("dim sum")?.dim;
    ensure(dsum <= dp.dim + ds.dim, || format!("dim(p ⊕ s) = {dsum} > {} + {}", dp.dim, ds.dim))?;
    let dprod = regular::dim_upper(&p.tensor_left(&s).ctx("⊗←")?).ctx("dim product")?.dim;
    ensure(dprod <= dp.dim * ds.dim, || format!("dim(p ⊗ s) = {dprod} > {} · {}", dp.dim, ds.dim))?;
    let rc = dp.rank_chi().ctx("rank")?;
    same_scalar("rank χ", &qq, &Scalar::int(rc), &p.chi().ctx("chi")?)
}

// stab

fn n_tail() -> IndexSet {
    IndexSet::tail_n("n")
}

fn at(i: i64) -> Pos {
    Pos::new(0, i)
}

fn random_k(g: &mut Gen, size: i64, ring: &Ring) -> std::result::Result<M, String> {
    let mut k = M::zero(&n_tail(), &n_tail(), ring);
    for r in 0..size {
        for c in 0..size {
            let v = g.small_int();
            if v != 0 {
                k.add_entry(at(r), at(c), ring.from_i64(v)).ctx("entry")?;
            }
        }
    }
    Ok(k)
}

fn cstab_isometry(_: &mut Gen) -> Outcome {
    let ring = Ring::trig();
    let c = stab::cstab(&TrigAngle::symbolic());
    let cols: Vec<Pos> = (0..40).map(at).collect();
    ensure(c.gram_window(&cols) == dense::identity(40, &ring), || "CᵀC ≠ 1 on the 40-column window".into())
}

fn sandwich_multiplicative(g: &mut Gen) -> Outcome {
    let ring = Ring::trig();
    let c = stab::cstab(&TrigAngle::symbolic());
    let size = g.range(1, 4) as i64;
    let k = random_k(g, size, &ring)?;
    let l = random_k(g, size, &ring)?;
    let lhs = c.sandwich(&k.mul(&l).ctx("product")?).ctx("sandwich")?;
    let rhs = c.sandwich(&k).ctx("sandwich")?.mul(&c.sandwich(&l).ctx("sandwich")?).ctx("product")?;
    same("C(kl)Cᵀ = (CkCᵀ)(ClCᵀ)", &lhs, &rhs)
}

fn stabilization_endpoints(g: &mut Gen) -> Outcome {
    let n_b = g.range(1, 3);
    let b = g.single_space(n_b).ctx("element")?;
    let (end, h) = stab::stabilize_idempotent(&b).ctx("stabilize")?;
    for ring in [q(), Ring::trig()] {
        let lift = |m: &M| {
            m.map_scalars(&ring, |x| ring.from_rational(&x.as_rational().expect("rational")))
                .ctx("lift")
        };
        same("Hv(b, 0) = b", &h.value(&TrigAngle::zero(&ring)).ctx("Hv")?, &lift(b.pair().b())?)?;
        same("Hv(b, π/2) = b ⊕̃ 𝐑𝟎", &h.value(&TrigAngle::right(&ring)).ctx("Hv")?, &lift(end.pair().b())?)?;
    }
    for (r, c) in end.core().finite().keys() {
        ensure(r.at % 2 == 0 && c.at % 2 == 0, || format!("endpoint entry at odd label ({:?}, {:?})", r, c))?;
    }
    let sym = h.value(&TrigAngle::symbolic()).ctx("Hv")?;
    same("Hv(b, θ)²", &sym.mul(&sym).ctx("square")?, &sym)
}

fn hv_endpoint(_: &mut Gen) -> Outcome {
    let qq = q();
    let op = stab::hv_operator(&TrigAngle::right(&qq).reflect());
    for m in 0..64 {
        ensure(op.column(at(m)) == vec![(at(2 * m), qq.one())], || format!("hv column {m}"))?;
    }
    Ok(())
}

fn make_room(g: &mut Gen) -> Outcome {
    let ring = Ring::trig();
    let alpha = TrigAngle::symbolic();
    let three = IndexSet::blocks(3, &n_tail());
    let m = stab::room_rotation(&n_tail(), &alpha).ctx("M(α)")?;
    let m_inv = stab::room_rotation(&n_tail(), &alpha.reflect()).ctx("M(−α)")?;
    same("M(α)M(−α)", &m.mul(&m_inv).ctx("product")?, &M::identity(&three, &ring))?;
    let qq = q();
    let one = M::identity(&n_tail(), &qq);
    let (u, u_inv) = g.unit(&IndexSet::range(3), &qq).ctx("unit")?;
    let embed = |x: &M| -> std::result::Result<M, String> {
        let mut out = one.clone();
        for i in 0..3 {
            for j in 0..3 {
                let v = x.entry(Pos::point(i), Pos::point(j));
                let cur = out.entry(at(i as i64), at(j as i64));
                out.add_entry(at(i as i64), at(j as i64), v.sub(&cur)).ctx("entry")?;
            }
        }
        Ok(out)
    };
    let (phi, phi_inv) = (embed(&u)?, embed(&u_inv)?);
    let pad = |a: &M, b: &M, c: &M| sum3(a, b, c).and_then(|x| x.with_sets(&three, &three).ctx("relabel"));
    let start = stab::make_room(&phi, &phi_inv, &TrigAngle::zero(&qq)).ctx("make_room")?;
    same("make_room at 0", &start.psi, &pad(&phi, &one, &one)?)?;
    let end = stab::make_room(&phi, &phi_inv, &TrigAngle::right(&qq)).ctx("make_room")?;
    same("make_room at π/2", &end.psi, &pad(&one, &phi, &one)?)?;
    let sym = stab::make_room(&phi, &phi_inv, &alpha).ctx("make_room")?;
    same("make_room inverse", &sym.psi.mul(&sym.psi_inv).ctx("product")?, &M::identity(&three, &ring))
}

/// The expected image `s·e₃ − s·t·e₅ + t²·e₆`.
pub fn qu1_expected() -> Vec<(u64, Scalar)> {
    let (s, t) = (TrigPoly::s(), TrigPoly::t());
    vec![(3, Scalar::Trig(s.clone())), (5, Scalar::Trig(s.mul(&t).neg())), (6, Scalar::Trig(t.mul(&t)))]
}

/// `V Qu¹C(θ) e₃` computed through the wedge basis.
pub fn qu1_example() -> Result<Vec<(u64, Scalar)>> {
    let ring = Ring::trig();
    let c = stab::cstab(&TrigAngle::symbolic());
    let w = stab::qu1_apply(&c, &WedgeVector::basis(&ring, &stab::v_inverse(3))?)?;
    Ok(stab::v_map(&w).into_iter().collect())
}

fn qu1_worked_example(_: &mut Gen) -> Outcome {
    let got = qu1_example().ctx("Qu¹")?;
    ensure(got == qu1_expected(), || format!("V Qu¹C(θ)e₃ = {got:?}"))
}

// analytic

fn fl() -> Ring {
    Ring::float()
}

fn float_dense(rows: &[[f64; 2]; 2]) -> M {
    let set = IndexSet::range(2);
    let table: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|&x| Scalar::Float(x)).collect()).collect();
    M::from_dense(&set, &set, &fl(), &table).expect("2 × 2")
}

/// `R(θ) diag(1, 0) R(θ)ᵀ`.
fn rotated_projection(theta: f64) -> M {
    let (s, c) = theta.sin_cos();
    float_dense(&[[c * c, c * s], [c * s, s * s]])
}

/// Angular speed of the rotation family `P(t) = R(ωt) diag(1, 0) R(ωt)ᵀ`.
pub const ROTATION_SPEED: f64 = 30.0;

/// The rotation family with its closed-form derivative.
pub fn rotation_path(step: f64) -> IdempotentPath {
    let w = ROTATION_SPEED;
    IdempotentPath::new(move |t| Ok(rotated_projection(w * t)), step).with_derivative(move |t| {
        let (s, c) = (w * t).sin_cos();
        let (s2, c2) = (2.0 * s * c, c * c - s * s);
        Ok(float_dense(&[[-w * s2, w * c2], [w * c2, w * s2]]))
    })
}

/// Transport error against the closed form `R(ωT)` on `[0, 1]`.
pub fn rotation_error(step: f64) -> Result<f64> {
    let a = analytic::transport(&rotation_path(step), 0.0, 1.0)?;
    let (s, c) = ROTATION_SPEED.sin_cos();
    Ok(analytic::window_norm(&a.sub(&float_dense(&[[c, -s], [s, c]]))?))
}

fn transport_rotation(_: &mut Gen) -> Outcome {
    let r = analytic::transport_residual(&rotation_path(1e-3), 0.0, 1.0).ctx("transport")?;
    ensure(r <= 1e-6, || format!("conjugation residual {r:e}"))?;
    let coarse = rotation_error(1e-3).ctx("transport")?;
    let fine = rotation_error(5e-4).ctx("transport")?;
    ensure(coarse / fine >= 8.0, || format!("halving the step improves by {:.2}", coarse / fine))
}

/// A float idempotent with a small random perturbation of defect at most 0.05.
pub fn near_idempotent(g: &mut Gen) -> Result<NearIdempotent> {
    loop {
        let n = g.range(2, 4);
        let omega = IndexSet::range(n);
        let p = analytic::to_float(&g.idempotent(&omega, &q())?)?;
        if analytic::window_norm(&p) > 4.0 {
            continue;
        }
        let mut noise = M::zero(&omega, &omega, &fl());
        for i in 0..n {
            for j in 0..n {
                let v = g.small_int() as f64 * 1e-3 * (1 + g.range(0, 4)) as f64;
                noise.add_entry(Pos::point(i), Pos::point(j), Scalar::Float(v))?;
            }
        }
        let inst = NearIdempotent::new(p.add(&noise)?, p)?;
        if inst.defect <= analytic::MAX_DEFECT && inst.defect > 0.0 {
            return Ok(inst);
        }
    }
}

fn idem_methods(g: &mut Gen) -> Outcome {
    let inst = near_idempotent(g).ctx("instance")?;
    let newton = analytic::idem(&inst, IdemMethod::Newton).ctx("Newton")?;
    let series = analytic::idem(&inst, IdemMethod::Series(analytic::MAX_SERIES_ORDER)).ctx("series")?;
    for (what, x) in [("Newton", &newton), ("series", &series)] {
        let d = analytic::idempotency_defect(x).ctx(what)?;
        ensure(d <= 1e-10, || format!("{what}: ‖Q² − Q‖ = {d:e}"))?;
    }
    close("Newton vs series", &newton, &series, 1e-8)
}

fn factorization_identity(g: &mut Gen) -> Outcome {
    let omega = IndexSet::range(g.range(1, 4));
    let qq = q();
    let p = g.idempotent(&omega, &qq).ctx("idempotent")?;
    let r = g.idempotent(&omega, &qq).ctx("idempotent")?;
    let one = M::identity(&omega, &qq);
    let two = Scalar::int(2);
    let plain = one.sub(&p).and_then(|x| x.sub(&r)).ctx("1 − P − Q")?;
    let corrected = plain.add(&r.mul(&p).ctx("QP")?.scale_left(&two)).ctx("sum")?;
    let refl = one.sub(&r.scale_left(&two)).ctx("1 − 2Q")?;
    same("1 − P − Q = (1 − 2Q)(1 − P − Q + 2QP)", &refl.mul(&corrected).ctx("product")?, &plain)
}

fn sign_connector(g: &mut Gen) -> Outcome {
    let inst = near_idempotent(g).ctx("instance")?;
    let p = &inst.reference;
    let r = analytic::idem(&inst, IdemMethod::Newton).ctx("idem")?;
    let s = analytic::sign_connector(p, &r).ctx("sign")?;
    let one = M::identity(p.rows(), &fl());
    close("S²", &s.mul(&s).ctx("S²")?, &one, 1e-9)?;
    close("SP = QS", &s.mul(p).ctx("SP")?, &r.mul(&s).ctx("QS")?, 1e-9)?;
    close("SQ = PS", &s.mul(&r).ctx("SQ")?, &p.mul(&s).ctx("PS")?, 1e-9)?;
    for form in [ConnectForm::Plain, ConnectForm::Corrected, ConnectForm::Sign] {
        let m = analytic::connect(p, &r, form).ctx("connect")?;
        close(&format!("{form:?} connector"), &conj(&m.psi, p, &m.psi_inv).ctx("conj")?, &r, 1e-9)?;
    }
    Ok(())
}

/// `(1 + N₁)(1 + N₂) 𝐑𝟎 (1 − N₂)(1 − N₁)` on `{0, 1} × ℕ`, with `N₁` from the
/// second copy to the first, `N₂` back, entries `±scale · ratio^{i+j}`.
pub fn decaying_pair(scale: f64, ratio: f64, size: i64) -> Result<IdempotentPair> {
    let base = IdempotentPair::r_zero(&n_tail(), &fl());
    let space = base.space().clone();
    let mut n1 = M::zero(&space, &space, &fl());
    let mut n2 = M::zero(&space, &space, &fl());
    for i in 0..size {
        for j in 0..size {
            let v = scale * ratio.powi((i + j) as i32);
            n1.add_entry(Pos::new(0, i), Pos::new(1, j), Scalar::Float(v))?;
            n2.add_entry(Pos::new(1, i), Pos::new(0, j), Scalar::Float(-v))?;
        }
    }
    let one = M::identity(&space, &fl());
    let g = one.add(&n1)?.mul(&one.add(&n2)?)?;
    let g_inv = one.sub(&n2)?.mul(&one.sub(&n1)?)?;
    IdempotentPair::new(conj(&g, base.a(), &g_inv)?, base.a().clone())
}

fn finite_reduce(g: &mut Gen) -> Outcome {
    let scale = 0.005 * g.range(1, 6) as f64;
    let ratio = 0.1 * g.range(2, 4) as f64;
    let pair = decaying_pair(scale, ratio, 16).ctx("pair")?;
    let red = analytic::finite_reduce(&pair, 1e-6).ctx("finite_reduce")?;
    ensure(red.residual <= 1e-8, || format!("connector residual {:e}", red.residual))?;
    let m = &red.connector;
    close("connector", &conj(&m.psi, pair.b(), &m.psi_inv).ctx("conj")?, &red.p_eps, 1e-8)
}

// fredholm

fn chi_fp(fp: &FredholmPair) -> std::result::Result<i64, String> {
    chi_of(&fp.index().ctx("Ind_F")?)
}

fn backward() -> FredholmPair {
    FredholmPair::backward_shift(&q())
}

/// A finite Fredholm pair, the backward shift, or its inverse, each possibly
/// perturbed by a finitely supported matrix in `ψ` and in `φ`.
fn random_fredholm(g: &mut Gen) -> std::result::Result<FredholmPair, String> {
    let mut fp = match g.range(0, 3) {
        0 => backward(),
        1 => backward().inv(),
        _ => {
            let (m, n) = (g.range(1, 3), g.range(1, 3));
            return FredholmPair::new(g.rect(m, n).ctx("ψ")?, g.rect(n, m).ctx("φ")?).ctx("pair");
        }
    };
    for _ in 0..2 {
        let (r, c) = (g.range(0, 3) as i64, g.range(0, 3) as i64);
        fp.psi.add_entry(Pos::new(0, r), Pos::new(0, c), Scalar::int(g.small_int())).ctx("entry")?;
        fp.phi.add_entry(Pos::new(0, c), Pos::new(0, r), Scalar::int(g.small_int())).ctx("entry")?;
    }
    Ok(fp)
}

fn f_involution(g: &mut Gen) -> Outcome {
    let fp = random_fredholm(g)?;
    let f = fp.f_matrix().ctx("F")?;
    same("F(ψ, φ) factored", &f, &fp.f_factored().ctx("F")?)?;
    same("F(ψ, φ)²", &f.mul(&f).ctx("F²")?, &M::identity(f.rows(), &q()))
}

fn index_shift(_: &mut Gen) -> Outcome {
    let s = backward();
    ensure(chi_fp(&s)? == 1, || "χ of the unilateral shift is not +1".into())?;
    ensure(chi_fp(&s.inv())? == -1, || "χ of the inverse shift is not −1".into())?;
    ensure(chi_fp(&s.then(&s).ctx("compose")?)? == 2, || "χ of the shift squared is not 2".into())
}

fn invertible_pair(g: &mut Gen) -> std::result::Result<FredholmPair, String> {
    let omega = IndexSet::range(g.range(1, 3));
    let (u, u_inv) = g.unit(&omega, &q()).ctx("unit")?;
    FredholmPair::unit(u, u_inv).ctx("unit pair")
}

fn index_laws(g: &mut Gen) -> Outcome {
    let u = invertible_pair(g)?;
    ensure(chi_fp(&u)? == 0, || "χ of an invertible is not 0".into())?;
    let x = random_fredholm(g)?;
    let y = random_fredholm(g)?;
    let (cx, cy) = (chi_fp(&x)?, chi_fp(&y)?);
    ensure(chi_fp(&x.inv())? == -cx, || "χ(inv) ≠ −χ".into())?;
    x.inv_witness().ctx("inv witness")?.check().ctx("inv witness")?;
    let sw = x.sum_witness(&y).ctx("sum witness")?;
    sw.check().ctx("sum witness")?;
    ensure(chi_of(&sw.lhs)? == cx + cy, || "χ over ⊕ is not additive".into())?;
    ensure(chi_fp(&x.sum(&y).ctx("sum")?)? == cx + cy, || "χ(Ind_F(x ⊕ y)) ≠ χx + χy".into())?;
    if x.omega1().compatible(y.omega0()) {
        ensure(chi_fp(&x.then(&y).ctx("compose")?)? == cx + cy, || "χ over ∘ is not additive".into())?;
    }
    if x.omega1().is_finite() {
        let (v, v_inv) = g.unit(x.omega1(), &q()).ctx("unit")?;
        let w = x.unit_composition_witness(&v, &v_inv).ctx("unit witness")?;
        w.check().ctx("unit witness")?;
        ensure(chi_of(&w.rhs)? == cx, || "χ changed under a unit".into())?;
    }
    Ok(())
}

fn tensor_variants(g: &mut Gen) -> Outcome {
    let (m, n) = (g.range(1, 3), g.range(1, 3));
    let x = FredholmPair::new(g.rect(m, n).ctx("ψ")?, g.rect(n, m).ctx("φ")?).ctx("pair")?;
    let y = if g.range(0, 1) == 0 { backward() } else { backward().inv() };
    let (cx, cy) = (chi_fp(&x)?, chi_fp(&y)?);
    for (a, b) in [(&x, &y), (&y, &x)] {
        let raw = chi_fp(&a.tensor_left(b, TensorVariant::Raw).ctx("raw")?)?;
        let red = chi_fp(&a.tensor_left(b, TensorVariant::Reduced).ctx("reduced")?)?;
        ensure(raw == red, || format!("raw χ {raw} vs reduced χ {red}"))?;
        ensure(raw == cx * cy, || format!("χ of the product {raw} vs {cx}·{cy}"))?;
    }
    Ok(())
}

/// A random `[ξ, a⟩` on `range(2k)` with `ξ` an involution and `ξa = āξ`.
fn anticommuting(g: &mut Gen, k: usize) -> std::result::Result<(M, M), String> {
    let n = 2 * k;
    let qq = q();
    let (u, u_inv) = g.unit_dense(k);
    let (c, c_inv) = g.unit_dense(n);
    let mut x = dense::zeros(n, n, &qq);
    let mut base = dense::zeros(n, n, &qq);
    for i in 0..k {
        base[i][i] = qq.one();
        for j in 0..k {
            x[i][k + j] = u[i][j].clone();
            x[k + i][j] = u_inv[i][j].clone();
        }
    }
    let conj_d = |m: &Dense| dense::mul(&dense::mul(&c, m, &qq), &c_inv, &qq);
    let omega = IndexSet::range(n);
    let pack = |m: &Dense| M::from_dense(&omega, &omega, &qq, m).ctx("pack");
    Ok((pack(&conj_d(&x))?, pack(&conj_d(&base))?))
}

/// `[[0, S], [S, 0]]` with parametrix `[[0, Sᵀ], [Sᵀ, 0]]` and base `1 ⊕ 0` on
/// two copies of ℕ, `S` the forward shift.
pub fn doubled_shift() -> Result<(M, M, M)> {
    let n = n_tail();
    let qq = q();
    let mut s = M::zero(&n, &n, &qq);
    s.add_symbol_term(0, 0, 1, qq.one())?;
    let st = s.transpose();
    let grid = |x: &M| M::from_grid(&n, &qq, &[vec![None, Some(x)], vec![Some(x), None]]);
    let one = M::identity(&n, &qq);
    let a = M::from_grid(&n, &qq, &[vec![Some(&one), None], vec![None, None]])?;
    Ok((grid(&s)?, grid(&st)?, a))
}

fn tilde_correction(g: &mut Gen) -> Outcome {
    let k = g.range(1, 2);
    let (xi, a) = anticommuting(g, k)?;
    let one = M::identity(a.rows(), &q());
    let exact = fred::tilde_correction(&xi, &xi, &a).ctx("ξ̃")?;
    same("ξ̃² with η = ξ⁻¹", &exact.mul(&exact).ctx("square")?, &one)?;
    let eta = g.rect(2 * k, 2 * k).ctx("η")?;
    let loose = fred::tilde_correction(&xi, &eta, &a).ctx("ξ̃")?;
    fred::tilde_witness(&xi, &xi, &eta, &a).ctx("witness")?.check().ctx("tilde witness")?;
    let c = Connector::involution(loose, a.clone()).ctx("connector")?;
    let orig = Connector::involution(xi, a).ctx("connector")?;
    ensure(chi_of(&c.index().ctx("index")?)? == chi_of(&orig.index().ctx("index")?)?, || "ξ̃ changed χ".into())?;

    // Toeplitz instance: a finitely supported change of the parametrix
    let (sx, mut se, sa) = doubled_shift().ctx("shift")?;
    let r = g.range(0, 3) as i64;
    se.add_entry(Pos::new(0, r), Pos::new(1, g.range(0, 3) as i64), Scalar::int(g.small_int())).ctx("entry")?;
    let t = fred::tilde_correction(&sx, &se, &sa).ctx("ξ̃")?;
    let defect = t.mul(&t).ctx("square")?.sub(&M::identity(sa.rows(), &q())).ctx("difference")?;
    ensure(defect.is_k(), || "ξ̃² − 1 is not finitely supported".into())
}

fn connector_laws(g: &mut Gen) -> Outcome {
    let random_connector = |g: &mut Gen| -> std::result::Result<Connector, String> {
        let omega = IndexSet::range(g.range(1, 3));
        let a = g.idempotent(&omega, &q()).ctx("idempotent")?;
        let (xi, xi_inv) = g.unit(&omega, &q()).ctx("unit")?;
        Connector::new(xi, xi_inv, a).ctx("connector")
    };
    let c1 = random_connector(g)?;
    let c2 = random_connector(g)?;
    let (i1, i2) = (chi_of(&c1.index().ctx("index")?)?, chi_of(&c2.index().ctx("index")?)?);
    ensure(chi_of(&c1.sum(&c2).ctx("sum")?.index().ctx("index")?)? == i1 + i2, || "connector χ over ⊕".into())?;
    ensure(chi_of(&c1.inv().index().ctx("index")?)? == -i1, || "connector χ under inv".into())?;
    let tw = c1.tensor_witness(&c2).ctx("tensor witness")?;
    tw.check().ctx("tensor witness")?;
    ensure(chi_of(&tw.lhs)? == i1 * i2, || "connector χ over ⊗".into())?;
    let (x2, x2_inv) = g.unit(c1.a.rows(), &q()).ctx("unit")?;
    let c3 = Connector::new(x2, x2_inv, c1.a.clone()).ctx("connector")?;
    fred::perturbation_witness(&c1, &c3).ctx("perturbation")?.check().ctx("perturbation witness")
}

/// One named identity family.
pub struct Family {
    pub suite: &'static str,
    pub name: &'static str,
    /// Families on fixed instances run once per suite run.
    pub repeat: bool,
    check: fn(&mut Gen) -> Outcome,
}

const fn fam(suite: &'static str, name: &'static str, repeat: bool, check: fn(&mut Gen) -> Outcome) -> Family {
    Family { suite, name, repeat, check }
}

pub const SUITES: [&str; 5] = ["grassmann", "regular", "stab", "analytic", "fredholm"];

pub static FAMILIES: &[Family] = &[
    fam("grassmann", "r_morphism", true, r_morphism),
    fam("grassmann", "translation_h", true, translation_h),
    fam("grassmann", "translation_hr", true, translation_hr),
    fam("grassmann", "stable_taming", true, stable_taming),
    fam("grassmann", "taming_tr", true, taming_tr),
    fam("grassmann", "virtual_cancellation", true, virtual_cancellation),
    fam("grassmann", "additive_inverse", true, additive_inverse),
    fam("grassmann", "commutativity_c", true, commutativity_c),
    fam("grassmann", "product_compatibility", true, product_compatibility),
    fam("grassmann", "inv_prime_variant", true, inv_prime_variant),
    fam("grassmann", "difference_chain", true, difference_chain),
    fam("grassmann", "chi_laws", true, chi_laws),
    fam("grassmann", "single_space", true, single_space),
    fam("regular", "regular_identities", true, regular_identities),
    fam("regular", "regular_coherence", true, regular_coherence),
    fam("regular", "dim_upper_laws", true, dim_upper_laws),
    fam("stab", "cstab_isometry", false, cstab_isometry),
    fam("stab", "sandwich_multiplicative", true, sandwich_multiplicative),
    fam("stab", "stabilization_endpoints", true, stabilization_endpoints),
    fam("stab", "hv_endpoint", false, hv_endpoint),
    fam("stab", "make_room", true, make_room),
    fam("stab", "qu1_worked_example", false, qu1_worked_example),
    fam("analytic", "transport_rotation", false, transport_rotation),
    fam("analytic", "idem_methods", true, idem_methods),
    fam("analytic", "factorization_identity", true, factorization_identity),
    fam("analytic", "sign_connector", true, sign_connector),
    fam("analytic", "finite_reduce", true, finite_reduce),
    fam("fredholm", "f_involution", true, f_involution),
    fam("fredholm", "index_shift", false, index_shift),
    fam("fredholm", "index_laws", true, index_laws),
    fam("fredholm", "tensor_variants", true, tensor_variants),
    fam("fredholm", "tilde_correction", true, tilde_correction),
    fam("fredholm", "connector_laws", true, connector_laws),
];

/// The families of a suite, or of every suite for `all`.
pub fn families(suite: &str) -> Result<Vec<&'static Family>> {
    if suite == "all" {
        return Ok(FAMILIES.iter().collect());
    }
    if !SUITES.contains(&suite) {
        return Err(Error::Parse(format!("unknown suite {suite:?} (expected all, {})", SUITES.join(", "))));
    }
    Ok(FAMILIES.iter().filter(|f| f.suite == suite).collect())
}

/// Looks up one family by name.
pub fn family(name: &str) -> Result<&'static Family> {
    FAMILIES.iter().find(|f| f.name == name).ok_or_else(|| Error::Parse(format!("unknown family {name:?}")))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub seed: u64,
    pub construction: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyReport {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub families: Vec<FamilyReport>,
    pub failures: Vec<Failure>,
    pub wall_time: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "seed": self.seed,
            "cases": self.cases,
            "passed": self.passed(),
            "families": self.families.iter().map(|f| json!({
                "name": f.name, "cases": f.cases, "failures": f.failures,
            })).collect::<Vec<_>>(),
            "failures": self.failures.iter().map(|f| json!({
                "seed": f.seed, "construction": f.construction, "detail": f.detail,
            })).collect::<Vec<_>>(),
            "wallTimeMs": self.wall_time.as_millis() as u64,
        })
    }
}

impl Family {
    /// Runs `cases` seeded cases (one if the family is fixed).
    pub fn run(&self, seed: u64, cases: usize) -> (FamilyReport, Vec<Failure>) {
        let n = if self.repeat { cases } else { cases.min(1) };
        let mut failures = Vec::new();
        for k in 0..n {
            let case_seed = seed ^ k as u64;
            if let Err(detail) = (self.check)(&mut Gen::new(case_seed)) {
                log::debug!("{} failed for seed {case_seed}: {detail}", self.name);
                failures.push(Failure { seed: case_seed, construction: self.name.to_string(), detail });
            }
        }
        (FamilyReport { name: self.name.to_string(), cases: n, failures: failures.len() }, failures)
    }
}

/// Runs the given families and collects one report.
pub fn run_families(label: &str, fams: &[&Family], seed: u64, cases: usize) -> SuiteReport {
    let start = Instant::now();
    let mut report =
        SuiteReport { suite: label.to_string(), seed, cases, families: Vec::new(), failures: Vec::new(), wall_time: Duration::ZERO };
    for f in fams {
        let t = Instant::now();
        let (fr, mut failures) = f.run(seed, cases);
        log::info!("{}/{}: {} cases, {} failures, {:?}", f.suite, f.name, fr.cases, fr.failures, t.elapsed());
        report.families.push(fr);
        report.failures.append(&mut failures);
    }
    report.wall_time = start.elapsed();
    report
}

/// Runs a named suite.
pub fn run_suite(suite: &str, seed: u64, cases: usize) -> Result<SuiteReport> {
    Ok(run_families(suite, &families(suite)?, seed, cases))
}
