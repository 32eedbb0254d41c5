//! Seeded random instances for the verification suites and tests.
//!
//! Idempotents are conjugates `g·(1_r ⊕ 0)·g⁻¹` with `g` a product of unit
//! lower and upper triangular matrices with entries in `−2..=2`, so every
//! instance is exactly invertible over ℚ.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::{Ring, RingKind, Scalar};
use crate::error::{Error, Result};
use crate::grass::{IdempotentPair, Morphism, SingleSpace};
use crate::mat::{dense, dense::Dense, StructuredMatrix};
use crate::shape::IndexSet;

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn small_int(&mut self) -> i64 {
        self.rng.gen_range(-2..=2)
    }

    /// A rational unit and its inverse.
    pub fn unit_dense(&mut self, n: usize) -> (Dense, Dense) {
        let q = Ring::rationals();
        let mut lower = dense::identity(n, &q);
        let mut upper = dense::identity(n, &q);
        for i in 0..n {
            for j in 0..i {
                lower[i][j] = Scalar::int(self.small_int());
                upper[j][i] = Scalar::int(self.small_int());
            }
        }
        let g = dense::mul(&lower, &upper, &q);
        let g_inv = dense::inverse(&g, &q).expect("unit triangular factors");
        (g, g_inv)
    }

    /// A rational idempotent of the given rank.
    pub fn idempotent_dense(&mut self, n: usize, rank: usize) -> Dense {
        let q = Ring::rationals();
        let (g, g_inv) = self.unit_dense(n);
        let d: Dense = (0..n)
            .map(|i| (0..n).map(|j| if i == j && i < rank { q.one() } else { q.zero() }).collect())
            .collect();
        dense::mul(&dense::mul(&g, &d, &q), &g_inv, &q)
    }

    /// Side length of the rational matrix representing a matrix on `omega`.
    fn scalar_size(ring: &Ring) -> Result<usize> {
        match ring.kind() {
            RingKind::Rationals => Ok(1),
            RingKind::MatrixRing { base, size } if matches!(base.kind(), RingKind::Rationals) => Ok(*size),
            _ => Err(Error::Unsupported(format!("random instances over {ring}"))),
        }
    }

    /// Packs an `(n·s) × (n·s)` rational matrix into `n × n` blocks of the ring.
    pub fn pack(omega: &IndexSet, ring: &Ring, d: &Dense) -> Result<StructuredMatrix> {
        let s = Self::scalar_size(ring)?;
        let n = omega.block_count();
        let table: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if s == 1 {
                            d[i][j].clone()
                        } else {
                            let e = (0..s * s).map(|k| d[i * s + k / s][j * s + k % s].clone()).collect();
                            Scalar::Mat(s, e)
                        }
                    })
                    .collect()
            })
            .collect();
        StructuredMatrix::from_dense(omega, omega, ring, &table)
    }

    /// A random idempotent on a finite set, of random rank.
    pub fn idempotent(&mut self, omega: &IndexSet, ring: &Ring) -> Result<StructuredMatrix> {
        let n = omega.block_count() * Self::scalar_size(ring)?;
        let rank = self.range(0, n);
        Self::pack(omega, ring, &self.idempotent_dense(n, rank))
    }

    /// A random unit and its inverse on a finite set.
    pub fn unit(&mut self, omega: &IndexSet, ring: &Ring) -> Result<(StructuredMatrix, StructuredMatrix)> {
        let n = omega.block_count() * Self::scalar_size(ring)?;
        let (g, g_inv) = self.unit_dense(n);
        Ok((Self::pack(omega, ring, &g)?, Self::pack(omega, ring, &g_inv)?))
    }

    /// A random morphism `⟨ψ, φ⟩` on a finite set.
    pub fn morphism(&mut self, omega: &IndexSet, ring: &Ring) -> Result<Morphism> {
        let (psi, psi_inv) = self.unit(omega, ring)?;
        let (phi, phi_inv) = self.unit(omega, ring)?;
        Ok(Morphism::new(psi, psi_inv, phi, phi_inv))
    }

    /// A random integer matrix with entries in `−2..=2` on `range(rows) × range(cols)`.
    pub fn rect(&mut self, rows: usize, cols: usize) -> Result<StructuredMatrix> {
        let table: Vec<Vec<Scalar>> =
            (0..rows).map(|_| (0..cols).map(|_| Scalar::int(self.small_int())).collect()).collect();
        StructuredMatrix::from_dense(&IndexSet::range(rows), &IndexSet::range(cols), &Ring::rationals(), &table)
    }

    /// A random idempotent `a` with a random unit `φ` commuting with it.
    pub fn idempotent_with_commutant(
        &mut self,
        omega: &IndexSet,
        ring: &Ring,
    ) -> Result<(StructuredMatrix, StructuredMatrix, StructuredMatrix)> {
        let q = Ring::rationals();
        let n = omega.block_count() * Self::scalar_size(ring)?;
        let rank = self.range(0, n);
        let (g, g_inv) = self.unit_dense(n);
        let (u1, u1_inv) = self.unit_dense(rank);
        let (u2, u2_inv) = self.unit_dense(n - rank);
        let diag = |x: &Dense, y: &Dense| -> Dense {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| match (i < rank, j < rank) {
                            (true, true) => x[i][j].clone(),
                            (false, false) => y[i - rank][j - rank].clone(),
                            _ => q.zero(),
                        })
                        .collect()
                })
                .collect()
        };
        let conj = |x: &Dense| dense::mul(&dense::mul(&g, x, &q), &g_inv, &q);
        let proj = diag(&dense::identity(rank, &q), &dense::zeros(n - rank, n - rank, &q));
        Ok((
            Self::pack(omega, ring, &conj(&proj))?,
            Self::pack(omega, ring, &conj(&diag(&u1, &u2)))?,
            Self::pack(omega, ring, &conj(&diag(&u1_inv, &u2_inv)))?,
        ))
    }

    /// A random pair of idempotents on `range(n)`.
    pub fn pair(&mut self, n: usize, ring: &Ring) -> Result<IdempotentPair> {
        let omega = IndexSet::range(n);
        let b = self.idempotent(&omega, ring)?;
        let a = self.idempotent(&omega, ring)?;
        IdempotentPair::new_unchecked(b, a)
    }

    /// A random single-space element obtained from a finite pair.
    pub fn single_space(&mut self, n: usize) -> Result<SingleSpace> {
        let p = self.pair(n, &Ring::rationals())?;
        SingleSpace::from_finite_pair(&p)
    }
}
