//! The quotient ring ℚ[s,t]/(s²+t²−1) in the normal form p(s) + t·q(s).

use std::collections::BTreeMap;
use std::fmt;

use super::rational::Rational;

/// Normal form `Σ c[i] sⁱ + t·Σ ct[i] sⁱ` with trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TrigPoly {
    c: Vec<Rational>,
    ct: Vec<Rational>,
}

fn trim(v: &mut Vec<Rational>) {
    while v.last().map_or(false, Rational::is_zero) {
        v.pop();
    }
}

fn poly_add(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let n = x.len().max(y.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let a = x.get(i).cloned().unwrap_or_else(Rational::zero);
        let b = y.get(i).cloned().unwrap_or_else(Rational::zero);
        out.push(a.add(&b));
    }
    out
}

fn poly_mul(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    if x.is_empty() || y.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            out[i + j] = out[i + j].add(&a.mul(b));
        }
    }
    out
}

impl TrigPoly {
    pub fn new(mut c: Vec<Rational>, mut ct: Vec<Rational>) -> Self {
        trim(&mut c);
        trim(&mut ct);
        TrigPoly { c, ct }
    }

    pub fn constant(r: Rational) -> Self {
        TrigPoly::new(vec![r], Vec::new())
    }

    pub fn zero() -> Self {
        TrigPoly::default()
    }

    pub fn one() -> Self {
        TrigPoly::constant(Rational::one())
    }

    /// The generator s (cosine).
    pub fn s() -> Self {
        TrigPoly::new(vec![Rational::zero(), Rational::one()], Vec::new())
    }

    /// The generator t (sine).
    pub fn t() -> Self {
        TrigPoly::new(Vec::new(), vec![Rational::one()])
    }

    /// Reduces a bivariate polynomial given as `(i, j) ↦ coeff` for `sⁱ tʲ`
    /// using t² = 1 − s².
    pub fn normalize(terms: &BTreeMap<(u32, u32), Rational>) -> Self {
        let mut acc = TrigPoly::zero();
        for (&(i, j), coeff) in terms {
            let mut term = TrigPoly::constant(coeff.clone());
            for _ in 0..i {
                term = term.mul(&TrigPoly::s());
            }
            for _ in 0..j {
                term = term.mul(&TrigPoly::t());
            }
            acc = acc.add(&term);
        }
        acc
    }

    pub fn even_coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn odd_coeffs(&self) -> &[Rational] {
        &self.ct
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty() && self.ct.is_empty()
    }

    /// Returns the rational value when the element is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if !self.ct.is_empty() || self.c.len() > 1 {
            return None;
        }
        Some(self.c.first().cloned().unwrap_or_else(Rational::zero))
    }

    pub fn add(&self, other: &Self) -> Self {
        TrigPoly::new(poly_add(&self.c, &other.c), poly_add(&self.ct, &other.ct))
    }

    pub fn neg(&self) -> Self {
        TrigPoly {
            c: self.c.iter().map(Rational::neg).collect(),
            ct: self.ct.iter().map(Rational::neg).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        // (p + tq)(r + tu) = pr + (1 − s²)qu + t(pu + qr)
        let qu = poly_mul(&self.ct, &other.ct);
        let mut shifted = vec![Rational::zero(), Rational::zero()];
        shifted.extend(qu.iter().map(Rational::neg));
        let even = poly_add(&poly_add(&poly_mul(&self.c, &other.c), &qu), &shifted);
        let odd = poly_add(&poly_mul(&self.c, &other.ct), &poly_mul(&self.ct, &other.c));
        TrigPoly::new(even, odd)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        TrigPoly::new(
            self.c.iter().map(|x| x.mul(r)).collect(),
            self.ct.iter().map(|x| x.mul(r)).collect(),
        )
    }

    /// The substitution t ↦ −t (angle negation).
    pub fn negate_angle(&self) -> Self {
        TrigPoly {
            c: self.c.clone(),
            ct: self.ct.iter().map(Rational::neg).collect(),
        }
    }

    pub fn eval_f64(&self, s: f64, t: f64) -> f64 {
        let horner = |v: &[Rational]| v.iter().rev().fold(0.0, |acc, c| acc * s + c.to_f64());
        horner(&self.c) + t * horner(&self.ct)
    }

    pub fn eval_rational(&self, s: &Rational, t: &Rational) -> Rational {
        let horner = |v: &[Rational]| {
            v.iter().rev().fold(Rational::zero(), |acc, c| acc.mul(s).add(c))
        };
        horner(&self.c).add(&t.mul(&horner(&self.ct)))
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, first: &mut bool, coeff: &Rational, mono: &str) -> fmt::Result {
    if coeff.is_zero() {
        return Ok(());
    }
    let neg = *coeff < Rational::zero();
    let mag = coeff.abs();
    if *first {
        if neg {
            write!(f, "-")?;
        }
    } else {
        write!(f, " {} ", if neg { "-" } else { "+" })?;
    }
    *first = false;
    match (mag.is_one(), mono.is_empty()) {
        (true, true) => write!(f, "1"),
        (true, false) => write!(f, "{mono}"),
        (false, true) => write!(f, "{mag}"),
        (false, false) => write!(f, "{mag}*{mono}"),
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let power = |i: usize| match i {
            0 => String::new(),
            1 => "s".to_string(),
            _ => format!("s^{i}"),
        };
        for (i, c) in self.c.iter().enumerate() {
            write_monomial(f, &mut first, c, &power(i))?;
        }
        for (i, c) in self.ct.iter().enumerate() {
            let p = power(i);
            let mono = if p.is_empty() { "t".to_string() } else { format!("{p}*t") };
            write_monomial(f, &mut first, c, &mono)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(i: u32, j: u32) -> BTreeMap<(u32, u32), Rational> {
        BTreeMap::from([((i, j), Rational::one())])
    }

    #[test]
    fn relation_holds() {
        let s = TrigPoly::s();
        let t = TrigPoly::t();
        assert_eq!(s.mul(&s).add(&t.mul(&t)), TrigPoly::one());
    }

    #[test]
    fn normal_forms() {
        let t2 = TrigPoly::normalize(&term(0, 2));
        assert_eq!(t2, TrigPoly::one().sub(&TrigPoly::s().mul(&TrigPoly::s())));
        let t3 = TrigPoly::normalize(&term(0, 3));
        let expected = TrigPoly::t().sub(&TrigPoly::t().mul(&TrigPoly::s()).mul(&TrigPoly::s()));
        assert_eq!(t3, expected);
        assert_eq!(TrigPoly::normalize(&term(1, 0)), TrigPoly::s());
    }

    #[test]
    fn display() {
        let x = TrigPoly::s().sub(&TrigPoly::s().mul(&TrigPoly::t()));
        assert_eq!(x.to_string(), "s - s*t");
    }
}
