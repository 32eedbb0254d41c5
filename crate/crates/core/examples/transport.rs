//! Parallel transport along a rotating rank-one projection.

use grass::analytic::{self, IdempotentPath};
use grass::verify;
use grass::Result;

fn main() -> Result<()> {
    for step in [2e-3, 1e-3, 5e-4] {
        println!("step {step:.0e}: error against R(ωT) = {:.3e}", verify::rotation_error(step)?);
    }
    let path: IdempotentPath = verify::rotation_path(1e-3);
    let a = analytic::transport(&path, 0.0, 0.5)?;
    println!("A(0, 1/2) = {a}");
    println!("‖A P(0) A⁻¹ − P(1/2)‖ = {:.3e}", analytic::transport_residual(&path, 0.0, 0.5)?);
    Ok(())
}
