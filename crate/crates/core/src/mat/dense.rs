//! Small dense matrices over a field, used for oracles, rank computations and
//! diagnostic window solves.

use crate::coeff::{Ring, Scalar};
use crate::error::{Error, Result};

/// Row-major dense matrix.
pub type Dense = Vec<Vec<Scalar>>;

pub fn identity(n: usize, ring: &Ring) -> Dense {
    (0..n).map(|i| (0..n).map(|j| if i == j { ring.one() } else { ring.zero() }).collect()).collect()
}

pub fn zeros(r: usize, c: usize, ring: &Ring) -> Dense {
    vec![vec![ring.zero(); c]; r]
}

pub fn mul(a: &Dense, b: &Dense, ring: &Ring) -> Dense {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = zeros(n, m, ring);
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_exact_zero() {
                continue;
            }
            for j in 0..m {
                if !b[k][j].is_exact_zero() {
                    out[i][j] = out[i][j].add(&aik.mul(&b[k][j]));
                }
            }
        }
    }
    out
}

pub fn add(a: &Dense, b: &Dense) -> Dense {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u.add(v)).collect()).collect()
}

pub fn sub(a: &Dense, b: &Dense) -> Dense {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u.sub(v)).collect()).collect()
}

pub fn transpose(a: &Dense) -> Dense {
    let m = a.first().map_or(0, Vec::len);
    (0..m).map(|j| a.iter().map(|row| row[j].transpose()).collect()).collect()
}

pub fn trace(a: &Dense, ring: &Ring) -> Scalar {
    a.iter().enumerate().fold(ring.zero(), |acc, (i, row)| acc.add(&row[i]))
}

pub fn approx_eq(a: &Dense, b: &Dense, ring: &Ring) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| x.len() == y.len() && x.iter().zip(y).all(|(u, v)| ring.approx_eq(u, v)))
}

fn pivot_row(m: &Dense, col: usize, from: usize, ring: &Ring) -> Option<usize> {
    if ring.is_exact() {
        (from..m.len()).find(|&r| !m[r][col].is_exact_zero())
    } else {
        (from..m.len())
            .filter(|&r| m[r][col].magnitude() > 0.0)
            .max_by(|&x, &y| m[x][col].magnitude().total_cmp(&m[y][col].magnitude()))
    }
}

/// Row echelon reduction; returns the rank and the determinant factor.
fn eliminate(m: &mut Dense, ring: &Ring, augmented_cols: usize) -> Result<(usize, Scalar)> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len) - augmented_cols;
    let mut rank = 0;
    let mut det = ring.one();
    for col in 0..cols {
        let Some(p) = pivot_row(m, col, rank, ring) else {
            det = ring.zero();
            continue;
        };
        if p != rank {
            m.swap(p, rank);
            det = det.neg();
        }
        let pivot = m[rank][col].clone();
        det = det.mul(&pivot);
        let inv = pivot.recip().ok_or_else(|| Error::Unsupported(format!("cannot invert pivot {pivot}")))?;
        for x in m[rank].iter_mut() {
            *x = inv.mul(x);
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_exact_zero() {
                let factor = m[r][col].clone();
                for c in 0..m[r].len() {
                    let delta = factor.mul(&m[rank][c]);
                    m[r][c] = m[r][c].sub(&delta);
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    if rank < cols {
        det = ring.zero();
    }
    Ok((rank, det))
}

/// Rank over a field.
pub fn rank(a: &Dense, ring: &Ring) -> Result<usize> {
    let mut m = a.clone();
    if m.is_empty() || m[0].is_empty() {
        return Ok(0);
    }
    if !ring.is_exact() {
        // treat tiny pivots as zero
        let tol = ring.tolerance();
        for row in m.iter_mut() {
            for x in row.iter_mut() {
                if x.magnitude() <= tol {
                    *x = ring.zero();
                }
            }
        }
    }
    Ok(eliminate(&mut m, ring, 0)?.0)
}

pub fn determinant(a: &Dense, ring: &Ring) -> Result<Scalar> {
    let mut m = a.clone();
    if m.is_empty() {
        return Ok(ring.one());
    }
    Ok(eliminate(&mut m, ring, 0)?.1)
}

/// Inverse over a field; reports singularity with the determinant.
pub fn inverse(a: &Dense, ring: &Ring) -> Result<Dense> {
    let n = a.len();
    let mut m: Dense = a
        .iter()
        .zip(identity(n, ring))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let (rank, det) = eliminate(&mut m, ring, n)?;
    let singular = rank < n || (!ring.is_exact() && det.magnitude() < 1e-300);
    if singular {
        return Err(Error::Singular { size: n, det: det.as_f64().unwrap_or(0.0) });
    }
    Ok(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> Dense {
        rows.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect()
    }

    #[test]
    fn inverse_and_rank() {
        let ring = Ring::rationals();
        let a = q(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&a, &ring).unwrap();
        assert!(approx_eq(&mul(&a, &inv, &ring), &identity(2, &ring), &ring));
        assert_eq!(determinant(&a, &ring).unwrap(), Scalar::int(1));
        let s = q(&[&[1, 2], &[2, 4]]);
        assert_eq!(rank(&s, &ring).unwrap(), 1);
        assert!(matches!(inverse(&s, &ring), Err(Error::Singular { .. })));
    }
}
