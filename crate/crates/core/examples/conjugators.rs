//! Conjugator constructions: translations, taming, commutativity and virtual cancellation.

use grass::gen::Gen;
use grass::grass::{
    additive_inverse_witness, bar, block_diag, cancel_b, cancellation_step_check, comm_c, inv_prime_witness,
    regularize_pair, regularize_witness, translation_h, IdempotentPair,
};
use grass::{IndexSet, Result, Ring, StructuredMatrix};

fn main() -> Result<()> {
    let q = Ring::rationals();
    let mut g = Gen::new(23);
    let omega = IndexSet::range(2);
    let p = g.pair(2, &q)?;

    let abar = bar(p.a());
    let sum3 = |x: &StructuredMatrix, z: &StructuredMatrix| block_diag(&[x, &abar, z]);
    let h = translation_h(&p)?;
    let base = sum3(p.a(), p.a())?;
    let src = IdempotentPair::new(sum3(p.a(), p.b())?, base.clone())?;
    let dst = IdempotentPair::new(sum3(p.b(), p.a())?, base)?;
    println!("H sends a ⊕ ā ⊕ b to b ⊕ ā ⊕ a: {}", h.apply(&src)?.approx_eq(&dst));

    let w = regularize_witness(&p)?;
    println!("p ⊕ ⟨ā, ā⟩ ≃ 𝐑p: {}", w.verify());

    let p2 = g.pair(2, &q)?;
    let c = comm_c(&p, &p2)?;
    let r0 = IdempotentPair::r_zero(&IndexSet::product(p.space(), p2.space())?, &q);
    let src = regularize_pair(&p.tensor_left(&p2)?)?.sum(&r0)?;
    let dst = regularize_pair(&p.tensor_right(&p2)?)?.sum(&r0)?;
    println!("C(p, q) sends 𝐑(p ⊗← q) ⊕ 𝐑𝟎 to 𝐑(p ⊗→ q) ⊕ 𝐑𝟎: {}", c.apply(&src)?.approx_eq(&dst));

    for w in [additive_inverse_witness(&p)?, inv_prime_witness(&p)?] {
        w.check()?;
        println!("witness {} → {} checks", w.lhs.chi()?, w.rhs.chi()?);
    }

    let a = g.idempotent(&omega, &q)?;
    let b = cancel_b(&a)?;
    b.validate()?;
    println!("B(a) conjugates the step on a window: {}", cancellation_step_check(&a, 5)?);
    Ok(())
}
