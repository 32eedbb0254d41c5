//! Command implementations behind the `grass` binary: JSON in, JSON out.

use std::path::Path;

use serde_json::{json, Value};

use crate::analytic;
use crate::coeff::{Ring, Scalar};
use crate::error::{Error, Result};
use crate::fred::{self, FredholmPair, TensorVariant};
use crate::grass::{self, IdempotentPair};
use crate::mat::StructuredMatrix;
use crate::verify::{self, SuiteReport};

/// Exit status for an error: 2 for malformed input, 1 otherwise.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        _ => 1,
    }
}

/// Reads a JSON document from a file, or from stdin for `-`.
pub fn read_json(path: &Path) -> Result<Value> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Error::Parse(format!("stdin: {e}")))?
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// A ring from a name (`integers`, `rationals`, `trig`, `float`) or a JSON descriptor.
pub fn parse_ring(s: &str) -> Result<Ring> {
    let v = serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.to_string()));
    Ring::from_json(&v)
}

/// Moves a matrix into `ring` through exact rationals, or through floats
/// when the target is the float ring.
pub fn convert(m: &StructuredMatrix, ring: &Ring) -> Result<StructuredMatrix> {
    if m.ring() == ring {
        return Ok(m.clone());
    }
    m.map_scalars(ring, |x| match x.as_rational() {
        Some(r) => ring.from_rational(&r),
        None => ring.from_f64(x.as_f64().ok_or_else(|| Error::RingMismatch(format!("cannot move {x} into {ring}")))?),
    })
}

fn convert_pair(p: &IdempotentPair, ring: Option<&Ring>) -> Result<IdempotentPair> {
    match ring {
        None => Ok(p.clone()),
        Some(r) => IdempotentPair::new(convert(p.b(), r)?, convert(p.a(), r)?),
    }
}

pub fn cmd_verify(suite: &str, seed: u64, cases: usize) -> Result<SuiteReport> {
    verify::run_suite(suite, seed, cases)
}

/// How `index` combines its input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexVariant {
    /// `Ind_F(ψ, φ)`.
    F,
    /// `Ind_F` of the tensor square in the raw form.
    Raw,
    /// `Ind_F` of the tensor square in the reduced form.
    Reduced,
}

impl IndexVariant {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "f" => Ok(IndexVariant::F),
            "raw" => Ok(IndexVariant::Raw),
            "reduced" => Ok(IndexVariant::Reduced),
            _ => Err(Error::Parse(format!("unknown variant {s:?} (expected f, raw, reduced)"))),
        }
    }

    fn name(self) -> &'static str {
        match self {
            IndexVariant::F => "f",
            IndexVariant::Raw => "raw",
            IndexVariant::Reduced => "reduced",
        }
    }
}

fn chi_json(ring: &Ring, chi: &Scalar) -> Value {
    match fred::chi_integer(chi) {
        Some(n) => Value::String(n.to_string()),
        None => ring.scalar_to_json(chi),
    }
}

fn support(m: &StructuredMatrix) -> Value {
    json!({ "entries": m.finite().len(), "radius": m.support_radius(), "finite": m.is_k() })
}

/// The index pair of a Fredholm pair, with its trace, the check `F² = 1`
/// and the supports of `1 − φψ` and `1 − ψφ`.
pub fn cmd_index(psi: &StructuredMatrix, phi: &StructuredMatrix, variant: IndexVariant) -> Result<Value> {
    let base = FredholmPair::new(psi.clone(), phi.clone())?;
    let fp = match variant {
        IndexVariant::F => base,
        IndexVariant::Raw => base.tensor_left(&base, TensorVariant::Raw)?,
        IndexVariant::Reduced => base.tensor_left(&base, TensorVariant::Reduced)?,
    };
    let index = fp.index()?;
    let chi = index.chi()?;
    let ring = fp.ring();
    let f = fp.f_matrix()?;
    let involution = f.mul(&f)?.approx_eq(&StructuredMatrix::identity(f.rows(), ring));
    let r0 = StructuredMatrix::identity(fp.omega0(), ring).sub(&fp.phi.mul(&fp.psi)?)?;
    let r1 = StructuredMatrix::identity(fp.omega1(), ring).sub(&fp.psi.mul(&fp.phi)?)?;
    Ok(json!({
        "variant": variant.name(),
        "chi": chi_json(ring.trace_ring(), &chi),
        "index": index.to_json(),
        "involution_check": involution,
        "residual_support": { "phiPsi": support(&r0), "psiPhi": support(&r1) },
    }))
}

/// `𝐑⟨b, a⟩` with the witness `⟨b, a⟩ ≃ 𝐑⟨b, a⟩` checked.
pub fn cmd_regularize(p: &IdempotentPair, ring: Option<&Ring>) -> Result<Value> {
    let p = convert_pair(p, ring)?;
    p.validate()?;
    let w = grass::regularize_witness(&p)?;
    w.check()?;
    let r = grass::regularize_pair(&p)?;
    Ok(json!({
        "pair": r.to_json(),
        "chi": chi_json(r.ring().trace_ring(), &r.chi()?),
    }))
}

/// `finite_reduce` over the float ring (or the given float ring).
pub fn cmd_reduce(p: &IdempotentPair, eps: f64, ring: Option<&Ring>) -> Result<Value> {
    if !(eps > 0.0) {
        return Err(Error::Parse(format!("--eps must be positive, got {eps}")));
    }
    let float = ring.cloned().unwrap_or_else(Ring::float);
    let p = convert_pair(p, Some(&float))?;
    let red = analytic::finite_reduce(&p, eps)?;
    Ok(json!({
        "pEps": red.p_eps.to_json(),
        "connector": red.connector.to_json(),
        "bound": red.bound,
        "supportRadius": red.support_radius,
        "residual": red.residual,
    }))
}

pub const DEMOS: [&str; 3] = ["qu1", "shift", "bilateral"];

fn render(terms: &[(u64, Scalar)]) -> String {
    terms.iter().map(|(n, x)| format!("({x})·e{n}")).collect::<Vec<_>>().join(" + ")
}

/// Runs a named demonstration; returns its text and whether it passed.
pub fn cmd_demo(name: &str) -> Result<(String, bool)> {
    match name {
        "qu1" => {
            let got = verify::qu1_example()?;
            let ok = got == verify::qu1_expected();
            let text = format!(
                "V Qu¹C(θ)e3 = s·e3 − s·t·e5 + t²·e6 … {}\nnormal form: {}\n",
                if ok { "PASS" } else { "FAIL" },
                render(&got)
            );
            Ok((text, ok))
        }
        "shift" => {
            let q = Ring::rationals();
            let s = FredholmPair::backward_shift(&q);
            let chi = fred::chi_integer(&s.chi()?);
            let ok = chi == Some(1);
            let text = format!(
                "χ Ind_F(backward shift, forward shift) = {} … {}\n",
                chi.map_or("?".into(), |c| c.to_string()),
                if ok { "PASS" } else { "FAIL" }
            );
            Ok((text, ok))
        }
        "bilateral" => {
            let c = fred::bilateral_shift_connector(&Ring::rationals())?;
            let chi = fred::chi_integer(&c.index()?.chi()?);
            let ok = chi == Some(-1);
            let text = format!(
                "χ Ind[UJ, 1_(n≥0)⟩ = {} … {}\n",
                chi.map_or("?".into(), |c| c.to_string()),
                if ok { "PASS" } else { "FAIL" }
            );
            Ok((text, ok))
        }
        _ => Err(Error::Parse(format!("unknown demo {name:?} (expected {})", DEMOS.join(", ")))),
    }
}
