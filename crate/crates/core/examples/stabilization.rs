//! The stabilization operator C(θ), the Qu¹ worked example and making room.

use grass::stab::{self, TrigAngle};
use grass::verify;
use grass::{IndexSet, Pos, Result, Ring, StructuredMatrix};

fn main() -> Result<()> {
    let c = stab::cstab(&TrigAngle::symbolic());
    for j in 0..4 {
        let col: Vec<String> = c.column(Pos::new(0, j)).into_iter().map(|(r, v)| format!("{v}·e{}", r.at)).collect();
        println!("C(θ)e{j} = {}", col.join(" + "));
    }

    let got = verify::qu1_example()?;
    let terms: Vec<String> = got.iter().map(|(n, x)| format!("({x})·e{n}")).collect();
    println!("V Qu¹C(θ)e3 = {}", terms.join(" + "));
    println!("matches s·e3 − s·t·e5 + t²·e6: {}", got == verify::qu1_expected());

    let q = Ring::rationals();
    let n = IndexSet::tail_n("n");
    let one = StructuredMatrix::identity(&n, &q);
    for angle in [TrigAngle::zero(&q), TrigAngle::right(&q)] {
        let m = stab::make_room(&one, &one, &angle)?;
        m.validate()?;
        println!("make room at s = {}: conjugator on {}", angle.s(), m.source());
    }
    Ok(())
}
