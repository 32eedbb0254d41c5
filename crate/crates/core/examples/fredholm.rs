//! Fredholm pairs, their connector F(ψ, φ) and index.

use grass::fred::{self, chi_integer, FredholmPair, TensorVariant};
use grass::gen::Gen;
use grass::{Result, Ring, StructuredMatrix};

fn main() -> Result<()> {
    let q = Ring::rationals();
    let shift = FredholmPair::backward_shift(&q);
    let f = shift.f_matrix()?;
    println!("F² = 1: {}", f.mul(&f)?.approx_eq(&StructuredMatrix::identity(f.rows(), &q)));
    println!("χ Ind_F(backward shift) = {:?}", chi_integer(&shift.chi()?));
    println!("χ Ind_F(forward shift) = {:?}", chi_integer(&shift.inv().chi()?));
    println!("χ of the shift composed with itself = {:?}", chi_integer(&shift.then(&shift)?.chi()?));

    let mut g = Gen::new(9);
    let dense = FredholmPair::new(g.rect(1, 3)?, g.rect(3, 1)?)?;
    println!("χ of a 1×3 pair = {:?}", chi_integer(&dense.chi()?));
    for v in [TensorVariant::Raw, TensorVariant::Reduced] {
        println!("χ(shift ⊗← dense, {v:?}) = {:?}", chi_integer(&shift.tensor_left(&dense, v)?.chi()?));
    }

    let bilateral = fred::bilateral_shift_connector(&q)?;
    println!("χ Ind[UJ, 1_(n≥0)⟩ = {:?}", chi_integer(&bilateral.index()?.chi()?));
    Ok(())
}
