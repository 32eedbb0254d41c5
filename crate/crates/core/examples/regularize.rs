//! Regularization 𝐑⟨b, a⟩, its witness, the H-components and the dimension bound.

use grass::gen::Gen;
use grass::grass::{regularize_pair, regularize_witness, IdempotentPair};
use grass::regular::{dim_upper, RegularIdempotent};
use grass::{Result, Ring};

fn main() -> Result<()> {
    let q = Ring::rationals();
    let mut g = Gen::new(11);
    let p = g.pair(2, &q)?;
    println!("p = {p}");

    let r = regularize_pair(&p)?;
    println!("𝐑p = {r}");
    let w = regularize_witness(&p)?;
    w.check()?;
    println!("witness p ⊕ ⟨ā, ā⟩ → 𝐑p checks; χ {} → {}", w.lhs.chi()?, w.rhs.chi()?);

    let h = RegularIdempotent::of_pair(&p)?;
    for (name, ok) in h.core().identities() {
        println!("  {name:<22} {}", if ok { "holds" } else { "FAILS" });
    }

    let cert = dim_upper(&p)?;
    cert.check()?;
    println!("dim upper bound {} with {} witness steps, rank χ = {}", cert.dim, cert.witnesses.len(), cert.rank_chi()?);

    let back = IdempotentPair::new(h.pair().b().clone(), h.pair().a().clone())?;
    println!("regular pair agrees with 𝐑p: {}", back.approx_eq(&r));
    Ok(())
}
