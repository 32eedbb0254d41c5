//! Idempotent pairs over ℚ and ℕ-tails: sums, inverses, tensors and χ.

use grass::gen::Gen;
use grass::grass::IdempotentPair;
use grass::{IndexSet, Pos, Result, Ring, Scalar, StructuredMatrix};

fn main() -> Result<()> {
    let q = Ring::rationals();

    // a rank-two projection against a rank-one projection on {x, y, z}
    let omega = IndexSet::finite(&["x", "y", "z"]);
    let diag = |ones: &[usize]| {
        let entries = ones.iter().map(|&i| (Pos::point(i), Pos::point(i), Scalar::int(1)));
        StructuredMatrix::from_entries(&omega, &omega, &q, entries)
    };
    let p = IdempotentPair::new(diag(&[0, 1])?, diag(&[2])?)?;
    println!("p = {p}");
    println!("χ(p) = {}", p.chi()?);
    println!("χ(p ⊕ p) = {}", p.sum(&p)?.chi()?);
    println!("χ(inv p) = {}", p.inv().chi()?);
    println!("χ(p ⊗← p) = {}", p.tensor_left(&p)?.chi()?);

    // a pair on ℕ: the identity against the projection onto n ≥ 1
    let n = IndexSet::tail_n("n");
    let one = StructuredMatrix::identity(&n, &q);
    let mut tail = one.clone();
    tail.add_entry(Pos::new(0, 0), Pos::new(0, 0), Scalar::int(-1))?;
    let s = IdempotentPair::new(one, tail)?;
    println!("χ(⟨1, 1_(n≥1)⟩) = {}", s.chi()?);

    // random pairs round-trip through JSON
    let r = Gen::new(5).pair(2, &q)?;
    let text = serde_json::to_string(&r.to_json()).expect("serializable");
    let back = IdempotentPair::from_json(&serde_json::from_str(&text).expect("valid json"))?;
    println!("json round trip exact: {}", back == r);
    Ok(())
}
