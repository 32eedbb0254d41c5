//! Numeric functional calculus: transport along idempotent paths, the idem
//! and sign operators, the `1 − P − Q` connectors and the reduction of an
//! idempotent `P ≈ 𝐑𝟎` to one differing from `𝐑𝟎` in finitely many entries.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::coeff::{Ring, Scalar};
use crate::error::{Error, Result};
use crate::grass::{bar, conj, IdempotentPair, Morphism};
use crate::mat::{dense, StructuredMatrix};
use crate::shape::Pos;

type M = StructuredMatrix;

/// Window operator norm: the larger of the maximal absolute row and column sums.
pub fn window_norm(m: &M) -> f64 {
    m.norm_estimate().max(m.transpose().norm_estimate())
}

fn one_like(m: &M) -> M {
    M::identity(m.rows(), m.ring())
}

fn scaled(m: &M, x: f64) -> M {
    m.scale_left(&Scalar::Float(x))
}

/// Idempotency defect `‖x² − x‖`.
pub fn idempotency_defect(x: &M) -> Result<f64> {
    Ok(window_norm(&x.mul(x)?.sub(x)?))
}

/// Inverse of `J + F` where `J` is block diagonal with constant invertible
/// symbols on the tails and `F` is finitely supported; the finite part is
/// solved on the window spanned by its support.
pub fn invert(m: &M) -> Result<M> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch("only square matrices can be inverted".into()));
    }
    let ring = m.ring().clone();
    let set = m.rows().clone();
    let mut j_inv = M::zero(&set, &set, &ring);
    let mut f = M::from_entries(&set, &set, &ring, m.finite().iter().map(|(&(r, c), v)| (r, c, v.clone())))?;
    for (&(rb, cb), sym) in m.symbols() {
        let terms: Vec<(i64, &Scalar)> = sym.terms().filter(|(_, c)| !ring.is_zero(c)).collect();
        if terms.is_empty() {
            continue;
        }
        if rb != cb || terms.len() != 1 || terms[0].0 != 0 {
            return Err(Error::Unsupported("inversion needs constant diagonal symbols".into()));
        }
    }
    for (b, kind) in set.layout().iter().enumerate() {
        if kind.is_tail() {
            let c = m.symbols().get(&(b, b)).and_then(|s| s.coeff(0).cloned()).unwrap_or_else(|| ring.zero());
            let inv = c.recip().filter(|_| !ring.is_zero(&c)).ok_or(Error::Singular { size: 0, det: 0.0 })?;
            j_inv.add_symbol_term(b, b, 0, inv)?;
        } else {
            j_inv.add_entry(Pos::point(b), Pos::point(b), ring.one())?;
            f.add_entry(Pos::point(b), Pos::point(b), ring.one().neg())?;
        }
    }
    // m·J⁻¹ = 1 + K with K finitely supported
    let k = f.mul(&j_inv)?;
    let window: Vec<Pos> = k
        .finite()
        .iter()
        .filter(|(_, v)| !ring.is_zero(v))
        .flat_map(|(&(r, c), _)| [r, c])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut local = k.window(&window, &window);
    for (i, row) in local.iter_mut().enumerate() {
        row[i] = row[i].add(&ring.one());
    }
    let inv = dense::inverse(&local, &ring).map_err(|_| {
        let det = dense::determinant(&local, &ring).ok().and_then(|d| d.as_f64()).unwrap_or(0.0);
        Error::Singular { size: window.len(), det }
    })?;
    let mut correction = M::zero(&set, &set, &ring);
    for (i, &r) in window.iter().enumerate() {
        for (j, &c) in window.iter().enumerate() {
            let v = if i == j { inv[i][j].sub(&ring.one()) } else { inv[i][j].clone() };
            if !ring.is_zero(&v) {
                correction.add_entry(r, c, v)?;
            }
        }
    }
    // (1 + K)⁻¹ = 1 + correction, so m⁻¹ = J⁻¹(1 + correction)
    j_inv.add(&j_inv.mul(&correction)?)
}

pub type Sampler = Arc<dyn Fn(f64) -> Result<M> + Send + Sync>;

/// A smooth idempotent-valued path with an optional exact derivative.
#[derive(Clone)]
pub struct IdempotentPath {
    sample: Sampler,
    derivative: Option<Sampler>,
    pub step: f64,
    pub tolerance: f64,
}

impl IdempotentPath {
    pub fn new(sample: impl Fn(f64) -> Result<M> + Send + Sync + 'static, step: f64) -> Self {
        IdempotentPath { sample: Arc::new(sample), derivative: None, step, tolerance: 1e-6 }
    }

    pub fn with_derivative(mut self, d: impl Fn(f64) -> Result<M> + Send + Sync + 'static) -> Self {
        self.derivative = Some(Arc::new(d));
        self
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn sample(&self, t: f64) -> Result<M> {
        (self.sample)(t)
    }

    /// `Ṗ(t)`, by central differences when no derivative was given.
    pub fn derivative(&self, t: f64) -> Result<M> {
        match &self.derivative {
            Some(d) => d(t),
            None => {
                let h = 1e-6;
                Ok(scaled(&self.sample(t + h)?.sub(&self.sample(t - h)?)?, 0.5 / h))
            }
        }
    }

    /// The path `t ↦ P(t1 + t2 − t)` on the same interval.
    pub fn reversed(&self, t1: f64, t2: f64) -> Self {
        let fwd = self.clone();
        let bwd = self.clone();
        IdempotentPath {
            sample: Arc::new(move |t| fwd.sample(t1 + t2 - t)),
            derivative: Some(Arc::new(move |t| Ok(bwd.derivative(t1 + t2 - t)?.neg()))),
            step: self.step,
            tolerance: self.tolerance,
        }
    }

    /// `ṖP − PṖ` at `t`, after checking that the sample is idempotent.
    fn generator(&self, t: f64) -> Result<M> {
        let p = self.sample(t)?;
        let defect = idempotency_defect(&p)?;
        if defect > self.tolerance {
            return Err(Error::Precondition(format!("path sample at t = {t} has idempotency defect {defect:e}")));
        }
        let d = self.derivative(t)?;
        d.mul(&p)?.sub(&p.mul(&d)?)
    }
}

/// `A_P(t1, t2)`: the time-ordered exponential of `ṖP − PṖ`, integrated by
/// the classical fourth-order one-step method with a fixed step.
pub fn transport(path: &IdempotentPath, t1: f64, t2: f64) -> Result<M> {
    if t2 < t1 || !(path.step > 0.0) {
        return Err(Error::Precondition(format!("need t1 ≤ t2 and a positive step, got [{t1}, {t2}]")));
    }
    let mut x = one_like(&path.sample(t1)?);
    let n = ((t2 - t1) / path.step).ceil().max(1.0) as usize;
    let h = (t2 - t1) / n as f64;
    if h == 0.0 {
        return Ok(x);
    }
    let mut g0 = path.generator(t1)?;
    for i in 0..n {
        let t = t1 + i as f64 * h;
        let g_mid = path.generator(t + h / 2.0)?;
        let g1 = path.generator(t + h)?;
        let k1 = g0.mul(&x)?;
        let k2 = g_mid.mul(&x.add(&scaled(&k1, h / 2.0))?)?;
        let k3 = g_mid.mul(&x.add(&scaled(&k2, h / 2.0))?)?;
        let k4 = g1.mul(&x.add(&scaled(&k3, h))?)?;
        let incr = k1.add(&scaled(&k2, 2.0))?.add(&scaled(&k3, 2.0))?.add(&k4)?;
        x = x.add(&scaled(&incr, h / 6.0))?;
        g0 = g1;
    }
    Ok(x)
}

/// `‖A P(t1) A⁻¹ − P(t2)‖` for `A = A_P(t1, t2)`.
pub fn transport_residual(path: &IdempotentPath, t1: f64, t2: f64) -> Result<f64> {
    let a = transport(path, t1, t2)?;
    let a_inv = invert(&a)?;
    let moved = conj(&a, &path.sample(t1)?, &a_inv)?;
    Ok(window_norm(&moved.sub(&path.sample(t2)?)?))
}

/// An approximate idempotent `P̃` near an exact idempotent `reference`.
#[derive(Clone, Debug)]
pub struct NearIdempotent {
    pub p_tilde: M,
    pub reference: M,
    pub defect: f64,
}

impl NearIdempotent {
    pub fn new(p_tilde: M, reference: M) -> Result<Self> {
        let defect = idempotency_defect(&p_tilde)?;
        Ok(NearIdempotent { p_tilde, reference, defect })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IdemMethod {
    /// `p ← 3p² − 2p³` to a fixed point.
    Newton,
    /// Residue of the Neumann expansion around the reference, to the given order.
    Series(usize),
}

/// Largest admissible idempotency defect for `idem`.
pub const MAX_DEFECT: f64 = 0.05;
/// Largest admissible series order.
pub const MAX_SERIES_ORDER: usize = 8;

pub fn idem(x: &NearIdempotent, method: IdemMethod) -> Result<M> {
    if x.defect > MAX_DEFECT {
        return Err(Error::Precondition(format!("idempotency defect {:e} exceeds {MAX_DEFECT}", x.defect)));
    }
    match method {
        IdemMethod::Newton => idem_newton(&x.p_tilde),
        IdemMethod::Series(k) => idem_series(x, k),
    }
}

fn idem_newton(p: &M) -> Result<M> {
    let mut p = p.clone();
    for _ in 0..60 {
        if idempotency_defect(&p)? < 1e-13 {
            break;
        }
        let p2 = p.mul(&p)?;
        let p3 = p2.mul(&p)?;
        let mut next = scaled(&p2, 3.0).sub(&scaled(&p3, 2.0))?;
        next.prune(0.0);
        p = next;
    }
    Ok(p)
}

/// `Σ_{j ≤ k}` of the constant coefficient of
/// `(P − ε) z Y (ε (z − 1) Y)^j` with `Y = (1 − P) + P z⁻¹`.
fn idem_series(x: &NearIdempotent, k: usize) -> Result<M> {
    if k > MAX_SERIES_ORDER {
        return Err(Error::Precondition(format!("series order {k} exceeds {MAX_SERIES_ORDER}")));
    }
    let p = &x.reference;
    if idempotency_defect(p)? > 1e-12 {
        return Err(Error::Precondition("series reference is not an idempotent".into()));
    }
    let eps = p.sub(&x.p_tilde)?;
    let q = bar(p);
    let bound = window_norm(&p.mul(&eps)?) + window_norm(&q.mul(&eps)?);
    if bound >= 0.5 {
        return Err(Error::Precondition(format!("‖Pε‖ + ‖(1−P)ε‖ = {bound:.3} is not below 1/2")));
    }
    type Laurent = BTreeMap<i64, M>;
    let mul = |a: &Laurent, b: &Laurent| -> Result<Laurent> {
        let mut out: Laurent = BTreeMap::new();
        for (da, ma) in a {
            for (db, mb) in b {
                let prod = ma.mul(mb)?;
                let slot = out.entry(da + db).or_insert_with(|| M::zero(p.rows(), p.cols(), p.ring()));
                *slot = slot.add(&prod)?;
            }
        }
        Ok(out)
    };
    let two_p_minus_one = scaled(p, 2.0).sub(&one_like(p))?;
    let step: Laurent = [(1, eps.mul(&q)?), (0, eps.mul(&two_p_minus_one)?), (-1, eps.mul(p)?.neg())].into();
    let lead = x.p_tilde.clone();
    let mut term: Laurent = [(1, lead.mul(&q)?), (0, lead.mul(p)?)].into();
    let mut acc = term.get(&0).cloned().unwrap_or_else(|| M::zero(p.rows(), p.cols(), p.ring()));
    for j in 0..k {
        term = mul(&term, &step)?;
        // each step moves the degree by at most one
        let reach = (k - j - 1) as i64;
        term.retain(|d, _| d.abs() <= reach);
        if let Some(t0) = term.get(&0) {
            acc = acc.add(t0)?;
        }
    }
    acc.prune(0.0);
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConnectForm {
    /// `1 − P − Q`.
    Plain,
    /// `1 − P − Q + 2QP`.
    Corrected,
    /// `sgn(1 − P − Q)`.
    Sign,
}

/// A unit `g` with `g P g⁻¹ = Q`, returned as a uniform morphism.
pub fn connect(p: &M, q: &M, form: ConnectForm) -> Result<Morphism> {
    let one = one_like(p);
    let plain = one.sub(p)?.sub(q)?;
    let (g, g_inv) = match form {
        ConnectForm::Plain => {
            let inv = invert(&plain)?;
            (plain, inv)
        }
        ConnectForm::Corrected => {
            let g = plain.add(&q.mul(p)?.scale_left(&p.ring().from_i64(2)))?;
            // 1 − P − Q = (1 − 2Q) g, so g⁻¹ = (1 − P − Q)⁻¹ (1 − 2Q)
            let refl = one.sub(&q.scale_left(&p.ring().from_i64(2)))?;
            let inv = invert(&plain)?.mul(&refl)?;
            (g, inv)
        }
        ConnectForm::Sign => {
            let s = sign_connector(p, q)?;
            (s.clone(), s)
        }
    };
    let moved = conj(&g, p, &g_inv)?;
    let residual = window_norm(&moved.sub(q)?);
    let tol = if p.ring().is_exact() { 0.0 } else { 1e-9 };
    if residual > tol {
        return Err(Error::Precondition(format!("connector residual {residual:e} above {tol:e}")));
    }
    Ok(Morphism::uniform(g, g_inv))
}

/// `sgn(1 − P − Q) = (1 − P − Q)(1 − D²)^{−1/2}` with `D = P − Q`, where
/// `(1 − P − Q)² = 1 − D²` commutes with `P` and `Q`; the binomial series is
/// summed until its terms fall below `1e−12`.
pub fn sign_connector(p: &M, q: &M) -> Result<M> {
    let ring = p.ring();
    if !ring.halves() || ring.is_exact() {
        return Err(Error::Unsupported("the sign connector needs a float ring with division by 2".into()));
    }
    let one = one_like(p);
    let plain = one.sub(p)?.sub(q)?;
    let d = p.sub(q)?;
    let d2 = d.mul(&d)?;
    let r = window_norm(&d2);
    if r >= 1.0 {
        return Err(Error::Precondition(format!("‖(P − Q)²‖ = {r:.3} is not below 1")));
    }
    // (1 − x)^{−1/2} = Σ c_n xⁿ with c_0 = 1, c_{n+1} = c_n (2n + 1) / (2n + 2)
    let mut acc = one.clone();
    let mut power = one.clone();
    let mut c = 1.0;
    for n in 0..10_000 {
        c *= (2 * n + 1) as f64 / (2 * n + 2) as f64;
        power = power.mul(&d2)?;
        let term = scaled(&power, c);
        acc = acc.add(&term)?;
        if window_norm(&term) < 1e-12 {
            break;
        }
    }
    let mut s = plain.mul(&acc)?;
    s.prune(0.0);
    Ok(s)
}

/// The outcome of [`finite_reduce`].
#[derive(Clone, Debug)]
pub struct Reduction {
    /// `P_ε = idem(P − ε)`.
    pub p_eps: M,
    /// `⟨1 − P − P_ε + 2P_εP, 1⟩ : ⟨P, 𝐑𝟎⟩ → ⟨P_ε, 𝐑𝟎⟩`.
    pub connector: Morphism,
    /// `‖Pε‖ + ‖(1 − P)ε‖`.
    pub bound: f64,
    /// Largest tail offset touched by `P_ε − 𝐑𝟎`.
    pub support_radius: i64,
    /// `‖g P g⁻¹ − P_ε‖`.
    pub residual: f64,
}

/// Drops the entries of `P − 𝐑𝟎` below `cutoff` into `ε`, re-idempotents
/// `P − ε` and connects `P` to the result.
pub fn finite_reduce(pair: &IdempotentPair, cutoff: f64) -> Result<Reduction> {
    let (p, base) = (pair.b(), pair.a());
    let ring = p.ring().clone();
    if ring.is_exact() {
        return Err(Error::Unsupported("finite reduction works over the float ring".into()));
    }
    let defect = idempotency_defect(p)?;
    if defect > 1e-9 {
        return Err(Error::Precondition(format!("P is not an idempotent (defect {defect:e})")));
    }
    let diff = p.sub(base)?;
    if !diff.is_k() {
        return Err(Error::NotFinite("P must agree with the base pattern up to finitely many entries".into()));
    }
    let eps = M::from_entries(
        p.rows(),
        p.cols(),
        &ring,
        diff.finite().iter().filter(|(_, v)| v.magnitude() < cutoff).map(|(&(r, c), v)| (r, c, v.clone())),
    )?;
    let bound = window_norm(&p.mul(&eps)?) + window_norm(&bar(p).mul(&eps)?);
    if bound >= 0.5 {
        return Err(Error::Precondition(format!("‖Pε‖ + ‖(1−P)ε‖ = {bound:.3} is not below 1/2")));
    }
    let p_tilde = p.sub(&eps)?;
    let p_eps = idem(&NearIdempotent::new(p_tilde, p.clone())?, IdemMethod::Newton)?;
    let one = one_like(p);
    let two = ring.from_i64(2);
    let g = one.sub(p)?.sub(&p_eps)?.add(&p_eps.mul(p)?.scale_left(&two))?;
    let refl = one.sub(&p_eps.scale_left(&two))?;
    let g_inv = invert(&one.sub(p)?.sub(&p_eps)?)?.mul(&refl)?;
    let residual = window_norm(&conj(&g, p, &g_inv)?.sub(&p_eps)?);
    if residual > 1e-8 {
        return Err(Error::Precondition(format!("reduction connector residual {residual:e} above 1e-8")));
    }
    let mut rest = p_eps.sub(base)?;
    rest.prune(1e-15);
    let support_radius = rest.support_radius();
    Ok(Reduction { p_eps, connector: Morphism::leading(g, g_inv), bound, support_radius, residual })
}

/// The float image of an exact matrix.
pub fn to_float(m: &M) -> Result<M> {
    let ring = Ring::float();
    m.map_scalars(&ring, |x| {
        x.as_f64().map(Scalar::Float).ok_or_else(|| Error::RingMismatch(format!("{x} has no float value")))
    })
}
