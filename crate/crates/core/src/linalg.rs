//! Linear algebra over F_p and Hermite normal form over Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::{invmod_prime, mulmod};

/// Row-reduces `m` (rows x cols over F_p) in place and returns the pivot columns.
pub fn row_reduce_mod_p(m: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_multiple_of(p)) else {
            continue;
        };
        m.swap(r, pr);
        let inv = invmod_prime(m[r][c] % p, p);
        for x in m[r].iter_mut() {
            *x = mulmod(*x % p, inv, p);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_multiple_of(p) {
                let f = m[i][c] % p;
                for j in 0..cols {
                    let sub = mulmod(f, m[r][j], p);
                    m[i][j] = (m[i][j] % p + p - sub) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_mod_p(m: &[Vec<u64>], p: u64) -> usize {
    let mut a = m.to_vec();
    row_reduce_mod_p(&mut a, p).len()
}

/// Basis of the right kernel {v : m v = 0} over F_p.
pub fn nullspace_mod_p(m: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let pivots = row_reduce_mod_p(&mut a, p);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; cols];
            v[fc] = 1;
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[ri][fc] % p) % p;
            }
            v
        })
        .collect()
}

/// All F_p-linear combinations of `basis` (vectors of length `len`).
pub fn span_mod_p(basis: &[Vec<u64>], len: usize, p: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![0u64; len]];
    for b in basis {
        let mut next = Vec::with_capacity(out.len() * p as usize);
        for v in &out {
            for k in 0..p {
                next.push(
                    v.iter()
                        .zip(b)
                        .map(|(&x, &y)| (x + mulmod(k, y, p)) % p)
                        .collect(),
                );
            }
        }
        out = next;
    }
    out
}

/// Hermite normal form basis (upper triangular, positive pivots) of the
/// Z-lattice spanned by `gens`, each of length `dim`. The lattice must have
/// full rank `dim`.
pub fn hnf_basis(gens: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = gens.to_vec();
    let mut basis = Vec::with_capacity(dim);
    for c in 0..dim {
        // gcd-combine every row with a nonzero entry in column c
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let piv = *nz
                .iter()
                .min_by(|&&a, &&b| rows[a][c].abs().cmp(&rows[b][c].abs()))
                .unwrap();
            for &i in &nz {
                if i == piv {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[piv][c]);
                let prow = rows[piv].clone();
                for (x, y) in rows[i].iter_mut().zip(prow.iter()) {
                    *x -= &q * y;
                }
            }
        }
        let Some(pi) = (0..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            break;
        };
        let mut row = rows.swap_remove(pi);
        if row[c].is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        basis.push(row);
    }
    // reduce entries above the pivots
    for c in 0..basis.len() {
        for r in 0..c {
            let q = basis[r][c].div_floor(&basis[c][c]);
            if !q.is_zero() {
                let prow = basis[c].clone();
                for (x, y) in basis[r].iter_mut().zip(prow.iter()) {
                    *x -= &q * y;
                }
            }
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_singular_matrix() {
        // x + y = 0 over F_3
        let k = nullspace_mod_p(&[vec![1, 1]], 2, 3);
        assert_eq!(k, vec![vec![2, 1]]);
        assert_eq!(rank_mod_p(&[vec![1, 1], vec![2, 2]], 3), 1);
    }

    #[test]
    fn span_size() {
        let s = span_mod_p(&[vec![1, 0], vec![0, 1]], 2, 5);
        assert_eq!(s.len(), 25);
    }

    #[test]
    fn hnf_of_index_two_lattice() {
        let g = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let b = hnf_basis(&[g(&[1, 1]), g(&[2, 0]), g(&[0, 2])], 2);
        assert_eq!(b, vec![g(&[1, 1]), g(&[0, 2])]);
    }
}
