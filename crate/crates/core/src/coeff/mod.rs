//! Coefficient rings and their elements.

mod rational;
mod trig;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub use rational::Rational;
pub use trig::TrigPoly;

/// Default equality tolerance of the float ring.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Maximal nesting of matrix rings.
const MAX_MATRIX_DEPTH: usize = 2;

/// An element of one of the supported coefficient rings.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Int(BigInt),
    Rat(Rational),
    Trig(TrigPoly),
    Float(f64),
    /// Square matrix stored row-major.
    Mat(usize, Vec<Scalar>),
}

/// The kind of a coefficient ring.
#[derive(Clone, Debug, PartialEq)]
pub enum RingKind {
    Integers,
    Rationals,
    TrigQuot,
    FloatTol,
    MatrixRing { base: Box<Ring>, size: usize },
}

/// A coefficient ring descriptor; doubles as the handle providing arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub struct Ring {
    kind: RingKind,
    tolerance: f64,
}

impl Ring {
    pub fn integers() -> Self {
        Ring { kind: RingKind::Integers, tolerance: 0.0 }
    }

    pub fn rationals() -> Self {
        Ring { kind: RingKind::Rationals, tolerance: 0.0 }
    }

    pub fn trig() -> Self {
        Ring { kind: RingKind::TrigQuot, tolerance: 0.0 }
    }

    pub fn float() -> Self {
        Ring { kind: RingKind::FloatTol, tolerance: DEFAULT_TOLERANCE }
    }

    pub fn float_with_tolerance(tolerance: f64) -> Result<Self> {
        if !(tolerance >= 0.0) {
            return Err(Error::Precondition(format!("tolerance must be nonnegative, got {tolerance}")));
        }
        Ok(Ring { kind: RingKind::FloatTol, tolerance })
    }

    pub fn matrix(base: Ring, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Precondition("matrix ring size must be positive".into()));
        }
        if base.depth() + 1 > MAX_MATRIX_DEPTH {
            return Err(Error::Unsupported(format!(
                "matrix ring nesting depth exceeds {MAX_MATRIX_DEPTH}"
            )));
        }
        Ok(Ring { kind: RingKind::MatrixRing { base: Box::new(base), size }, tolerance: 0.0 })
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    /// Equality tolerance; zero for exact rings. Matrix rings inherit it from the base.
    pub fn tolerance(&self) -> f64 {
        match &self.kind {
            RingKind::MatrixRing { base, .. } => base.tolerance(),
            _ => self.tolerance,
        }
    }

    fn depth(&self) -> usize {
        match &self.kind {
            RingKind::MatrixRing { base, .. } => 1 + base.depth(),
            _ => 0,
        }
    }

    pub fn is_commutative(&self) -> bool {
        match &self.kind {
            RingKind::MatrixRing { base, size } => *size == 1 && base.is_commutative(),
            _ => true,
        }
    }

    pub fn is_exact(&self) -> bool {
        match &self.kind {
            RingKind::FloatTol => false,
            RingKind::MatrixRing { base, .. } => base.is_exact(),
            _ => true,
        }
    }

    /// Every shipped ring satisfies the strong seminorm estimate (discrete
    /// rings trivially, the reals through the absolute value).
    pub fn is_strong(&self) -> bool {
        true
    }

    /// See [`Ring::is_strong`].
    pub fn is_norm_strong(&self) -> bool {
        true
    }

    /// The innermost coefficient ring: the base of nested matrix rings.
    pub fn trace_ring(&self) -> &Ring {
        match &self.kind {
            RingKind::MatrixRing { base, .. } => base.trace_ring(),
            _ => self,
        }
    }

    /// The trace `M_n(A) → A`, applied through every matrix level.
    pub fn scalar_trace(&self, x: &Scalar) -> Scalar {
        match (&self.kind, x) {
            (RingKind::MatrixRing { base, size }, Scalar::Mat(_, e)) => {
                (0..*size).fold(base.trace_ring().zero(), |acc, i| acc.add(&base.scalar_trace(&e[i * size + i])))
            }
            _ => x.clone(),
        }
    }

    /// Whether division by 2 is available.
    pub fn halves(&self) -> bool {
        match &self.kind {
            RingKind::Integers => false,
            RingKind::MatrixRing { base, .. } => base.halves(),
            _ => true,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match &self.kind {
            RingKind::Integers => Scalar::Int(BigInt::from(n)),
            RingKind::Rationals => Scalar::Rat(Rational::from_int(n)),
            RingKind::TrigQuot => Scalar::Trig(TrigPoly::constant(Rational::from_int(n))),
            RingKind::FloatTol => Scalar::Float(n as f64),
            RingKind::MatrixRing { base, size } => {
                let mut entries = vec![base.zero(); size * size];
                for i in 0..*size {
                    entries[i * size + i] = base.from_i64(n);
                }
                Scalar::Mat(*size, entries)
            }
        }
    }

    /// Embeds a rational; fails for non-integers in the integer ring.
    pub fn from_rational(&self, r: &Rational) -> Result<Scalar> {
        Ok(match &self.kind {
            RingKind::Integers => {
                if !r.is_integer() {
                    return Err(Error::Precondition(format!("{r} is not an integer")));
                }
                Scalar::Int(r.numer())
            }
            RingKind::Rationals => Scalar::Rat(r.clone()),
            RingKind::TrigQuot => Scalar::Trig(TrigPoly::constant(r.clone())),
            RingKind::FloatTol => Scalar::Float(r.to_f64()),
            RingKind::MatrixRing { base, size } => {
                let mut entries = vec![base.zero(); size * size];
                for i in 0..*size {
                    entries[i * size + i] = base.from_rational(r)?;
                }
                Scalar::Mat(*size, entries)
            }
        })
    }

    pub fn from_f64(&self, x: f64) -> Result<Scalar> {
        match &self.kind {
            RingKind::FloatTol => Ok(Scalar::Float(x)),
            _ => Err(Error::RingMismatch(format!("float value in {self}"))),
        }
    }

    /// Whether `x` is an element of this ring.
    pub fn contains(&self, x: &Scalar) -> bool {
        match (&self.kind, x) {
            (RingKind::Integers, Scalar::Int(_))
            | (RingKind::Rationals, Scalar::Rat(_))
            | (RingKind::TrigQuot, Scalar::Trig(_))
            | (RingKind::FloatTol, Scalar::Float(_)) => true,
            (RingKind::MatrixRing { base, size }, Scalar::Mat(n, entries)) => {
                n == size && entries.iter().all(|e| base.contains(e))
            }
            _ => false,
        }
    }

    /// Ring equality: exact for exact kinds, `|x − y| ≤ tolerance` for floats.
    pub fn approx_eq(&self, x: &Scalar, y: &Scalar) -> bool {
        match (&self.kind, x, y) {
            (RingKind::FloatTol, Scalar::Float(a), Scalar::Float(b)) => (a - b).abs() <= self.tolerance,
            (RingKind::MatrixRing { base, .. }, Scalar::Mat(n, xs), Scalar::Mat(m, ys)) => {
                n == m && xs.iter().zip(ys).all(|(a, b)| base.approx_eq(a, b))
            }
            _ => x == y,
        }
    }

    pub fn is_zero(&self, x: &Scalar) -> bool {
        self.approx_eq(x, &self.zero())
    }

    /// Encodes a scalar of this ring as JSON.
    pub fn scalar_to_json(&self, x: &Scalar) -> Value {
        match x {
            Scalar::Int(n) => Value::String(n.to_string()),
            Scalar::Rat(r) => Value::String(r.to_string()),
            Scalar::Trig(p) => {
                let enc = |v: &[Rational]| {
                    v.iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(i, c)| json!([i, c.to_string()]))
                        .collect::<Vec<_>>()
                };
                json!({"c": enc(p.even_coeffs()), "ct": enc(p.odd_coeffs())})
            }
            Scalar::Float(f) => json!(f),
            Scalar::Mat(_, entries) => {
                let base = match &self.kind {
                    RingKind::MatrixRing { base, .. } => base.as_ref().clone(),
                    _ => Ring::rationals(),
                };
                Value::Array(entries.iter().map(|e| base.scalar_to_json(e)).collect())
            }
        }
    }

    /// Decodes a JSON scalar of this ring.
    pub fn scalar_from_json(&self, v: &Value) -> Result<Scalar> {
        let bad = || Error::Parse(format!("invalid scalar for {self}: {v}"));
        match &self.kind {
            RingKind::Integers => {
                let s = v.as_str().ok_or_else(bad)?;
                Ok(Scalar::Int(s.trim().parse().map_err(|_| bad())?))
            }
            RingKind::Rationals => {
                let s = v.as_str().ok_or_else(bad)?;
                Ok(Scalar::Rat(Rational::parse(s).ok_or_else(bad)?))
            }
            RingKind::TrigQuot => {
                let dec = |key: &str| -> Result<Vec<Rational>> {
                    let mut out: Vec<Rational> = Vec::new();
                    for item in v.get(key).and_then(Value::as_array).ok_or_else(bad)? {
                        let pair = item.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
                        let i = pair[0].as_u64().ok_or_else(bad)? as usize;
                        let c = Rational::parse(pair[1].as_str().ok_or_else(bad)?).ok_or_else(bad)?;
                        if out.len() <= i {
                            out.resize(i + 1, Rational::zero());
                        }
                        out[i] = out[i].add(&c);
                    }
                    Ok(out)
                };
                Ok(Scalar::Trig(TrigPoly::new(dec("c")?, dec("ct")?)))
            }
            RingKind::FloatTol => Ok(Scalar::Float(v.as_f64().ok_or_else(bad)?)),
            RingKind::MatrixRing { base, size } => {
                let arr = v.as_array().filter(|a| a.len() == size * size).ok_or_else(bad)?;
                let entries = arr.iter().map(|e| base.scalar_from_json(e)).collect::<Result<Vec<_>>>()?;
                Ok(Scalar::Mat(*size, entries))
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match &self.kind {
            RingKind::Integers => json!("integers"),
            RingKind::Rationals => json!("rationals"),
            RingKind::TrigQuot => json!("trig"),
            RingKind::FloatTol => json!({"float": self.tolerance}),
            RingKind::MatrixRing { base, size } => json!({"matrix": {"base": base.to_json(), "size": size}}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid ring descriptor: {v}"));
        if let Some(s) = v.as_str() {
            return match s {
                "integers" => Ok(Ring::integers()),
                "rationals" => Ok(Ring::rationals()),
                "trig" => Ok(Ring::trig()),
                "float" => Ok(Ring::float()),
                _ => Err(bad()),
            };
        }
        if let Some(tol) = v.get("float") {
            return Ring::float_with_tolerance(tol.as_f64().ok_or_else(bad)?);
        }
        if let Some(m) = v.get("matrix") {
            let base = Ring::from_json(m.get("base").ok_or_else(bad)?)?;
            let size = m.get("size").and_then(Value::as_u64).ok_or_else(bad)? as usize;
            return Ring::matrix(base, size);
        }
        Err(bad())
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RingKind::Integers => write!(f, "Z"),
            RingKind::Rationals => write!(f, "Q"),
            RingKind::TrigQuot => write!(f, "Q[s,t]/(s^2+t^2-1)"),
            RingKind::FloatTol => write!(f, "R(tol={:e})", self.tolerance),
            RingKind::MatrixRing { base, size } => write!(f, "M{size}({base})"),
        }
    }
}

fn mismatch(op: &str, x: &Scalar, y: &Scalar) -> ! {
    panic!("ring mismatch in {op}: {x:?} vs {y:?}")
}

impl Scalar {
    pub fn rat(num: i64, den: i64) -> Scalar {
        Scalar::Rat(Rational::new(num, den))
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::Rat(Rational::from_int(n))
    }

    /// Structural zero test (no tolerance), used for sparse storage.
    pub fn is_exact_zero(&self) -> bool {
        match self {
            Scalar::Int(n) => n.is_zero(),
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Trig(p) => p.is_zero(),
            Scalar::Float(f) => *f == 0.0,
            Scalar::Mat(_, e) => e.iter().all(Scalar::is_exact_zero),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a + b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a.add(b)),
            (Scalar::Trig(a), Scalar::Trig(b)) => Scalar::Trig(a.add(b)),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a + b),
            (Scalar::Mat(n, a), Scalar::Mat(m, b)) if n == m => {
                Scalar::Mat(*n, a.iter().zip(b).map(|(x, y)| x.add(y)).collect())
            }
            _ => mismatch("add", self, other),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Int(a) => Scalar::Int(-a),
            Scalar::Rat(a) => Scalar::Rat(a.neg()),
            Scalar::Trig(a) => Scalar::Trig(a.neg()),
            Scalar::Float(a) => Scalar::Float(-a),
            Scalar::Mat(n, a) => Scalar::Mat(*n, a.iter().map(Scalar::neg).collect()),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a * b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a.mul(b)),
            (Scalar::Trig(a), Scalar::Trig(b)) => Scalar::Trig(a.mul(b)),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a * b),
            (Scalar::Mat(n, a), Scalar::Mat(m, b)) if n == m => {
                let n = *n;
                let mut out = Vec::with_capacity(n * n);
                for i in 0..n {
                    for j in 0..n {
                        let mut acc: Option<Scalar> = None;
                        for k in 0..n {
                            let p = a[i * n + k].mul(&b[k * n + j]);
                            acc = Some(match acc {
                                None => p,
                                Some(s) => s.add(&p),
                            });
                        }
                        out.push(acc.expect("positive size"));
                    }
                }
                Scalar::Mat(n, out)
            }
            _ => mismatch("mul", self, other),
        }
    }

    /// Multiplicative inverse for field elements (rationals, floats, constant trig values).
    pub fn recip(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(r) => r.recip().map(Scalar::Rat),
            Scalar::Float(f) if *f != 0.0 => Some(Scalar::Float(1.0 / f)),
            Scalar::Int(n) if n.abs().is_one() => Some(Scalar::Int(n.clone())),
            Scalar::Trig(p) => p
                .as_constant()
                .and_then(|c| c.recip())
                .map(|c| Scalar::Trig(TrigPoly::constant(c))),
            _ => None,
        }
    }

    /// Transposes matrix-ring payloads recursively; identity on commutative kinds.
    pub fn transpose(&self) -> Scalar {
        match self {
            Scalar::Mat(n, e) => {
                let n = *n;
                let mut out = e.clone();
                for i in 0..n {
                    for j in 0..n {
                        out[j * n + i] = e[i * n + j].transpose();
                    }
                }
                Scalar::Mat(n, out)
            }
            other => other.clone(),
        }
    }

    /// Absolute value for real-valued kinds; a max-entry norm for matrix payloads.
    pub fn magnitude(&self) -> f64 {
        match self {
            Scalar::Int(n) => n.to_f64().unwrap_or(f64::INFINITY).abs(),
            Scalar::Rat(r) => r.to_f64().abs(),
            Scalar::Float(f) => f.abs(),
            Scalar::Trig(p) => p.as_constant().map_or(f64::NAN, |c| c.to_f64().abs()),
            Scalar::Mat(_, e) => e.iter().map(Scalar::magnitude).fold(0.0, f64::max),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Scalar::Int(n) => n.to_f64(),
            Scalar::Rat(r) => Some(r.to_f64()),
            Scalar::Float(f) => Some(*f),
            Scalar::Trig(p) => p.as_constant().map(|c| c.to_f64()),
            Scalar::Mat(..) => None,
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Scalar::Int(n) => Some(Rational::from_bigint(n.clone())),
            Scalar::Rat(r) => Some(r.clone()),
            Scalar::Trig(p) => p.as_constant(),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(n) => write!(f, "{n}"),
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Trig(p) => write!(f, "{p}"),
            Scalar::Float(x) => write!(f, "{x}"),
            Scalar::Mat(n, e) => {
                write!(f, "[")?;
                for i in 0..*n {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    for j in 0..*n {
                        if j > 0 {
                            write!(f, " ")?;
                        }
                        write!(f, "{}", e[i * n + j])?;
                    }
                }
                write!(f, "]")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic() {
        let q = Ring::rationals();
        let x = Scalar::rat(1, 2).add(&Scalar::rat(1, 3));
        assert!(q.approx_eq(&x, &Scalar::rat(5, 6)));
        assert!(q.approx_eq(&Scalar::rat(2, 4), &Scalar::rat(1, 2)));
    }

    #[test]
    fn trig_relation() {
        let s = Scalar::Trig(TrigPoly::s());
        let t = Scalar::Trig(TrigPoly::t());
        assert!(Ring::trig().approx_eq(&s.mul(&s).add(&t.mul(&t)), &Ring::trig().one()));
    }

    #[test]
    fn float_tolerance() {
        let r = Ring::float();
        assert!(r.approx_eq(&Scalar::Float(0.3 + 0.3 + 0.3), &Scalar::Float(0.9)));
        assert!(!r.approx_eq(&Scalar::Float(0.9), &Scalar::Float(0.9 + 1e-6)));
    }

    #[test]
    fn matrix_ring_is_noncommutative() {
        let m = Ring::matrix(Ring::rationals(), 2).unwrap();
        assert!(!m.is_commutative());
        let e01 = Scalar::Mat(2, vec![Scalar::int(0), Scalar::int(1), Scalar::int(0), Scalar::int(0)]);
        let e10 = Scalar::Mat(2, vec![Scalar::int(0), Scalar::int(0), Scalar::int(1), Scalar::int(0)]);
        assert!(!m.approx_eq(&e01.mul(&e10), &e10.mul(&e01)));
    }

    #[test]
    fn matrix_nesting_limit() {
        let m1 = Ring::matrix(Ring::rationals(), 2).unwrap();
        let m2 = Ring::matrix(m1, 2).unwrap();
        assert!(matches!(Ring::matrix(m2, 2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn ring_json_round_trip() {
        for ring in [
            Ring::integers(),
            Ring::rationals(),
            Ring::trig(),
            Ring::float_with_tolerance(1e-6).unwrap(),
            Ring::matrix(Ring::rationals(), 3).unwrap(),
        ] {
            assert_eq!(Ring::from_json(&ring.to_json()).unwrap(), ring);
        }
    }
}
