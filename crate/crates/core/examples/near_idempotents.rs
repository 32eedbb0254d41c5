//! Nearly idempotent matrices: re-idempotenting, connecting units and finite reduction.

use grass::analytic::{self, ConnectForm, IdemMethod};
use grass::gen::Gen;
use grass::verify;
use grass::Result;

fn main() -> Result<()> {
    let mut g = Gen::new(3);
    let x = verify::near_idempotent(&mut g)?;
    let newton = analytic::idem(&x, IdemMethod::Newton)?;
    let series = analytic::idem(&x, IdemMethod::Series(8))?;
    println!("defect after Newton {:.2e}, series {:.2e}", analytic::idempotency_defect(&newton)?, analytic::idempotency_defect(&series)?);
    println!("methods differ by {:.2e}", analytic::window_norm(&newton.sub(&series)?));

    let p = &x.reference;
    for form in [ConnectForm::Plain, ConnectForm::Corrected, ConnectForm::Sign] {
        let u = analytic::connect(p, &newton, form)?;
        let moved = u.psi.mul(p)?.mul(&u.psi_inv)?;
        println!("{form:?} connector: ‖gPg⁻¹ − Q‖ = {:.2e}", analytic::window_norm(&moved.sub(&newton)?));
    }

    let pair = verify::decaying_pair(0.2, 0.3, 12)?;
    let red = analytic::finite_reduce(&pair, 1e-6)?;
    println!(
        "finite reduction: bound {:.2e}, support radius {}, residual {:.2e}",
        red.bound, red.support_radius, red.residual
    );
    Ok(())
}
