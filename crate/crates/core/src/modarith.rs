//! Exact linear algebra over `Z_m`.
//!
//! Everything here works on small dense integer matrices: reduced row-echelon
//! form over a prime field, Smith normal form over the integers, and counting
//! the solutions of a homogeneous system `A·x ≡ 0 (mod m)` for any `m ≥ 2`.

#![allow(clippy::needless_range_loop)]

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModArithError {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("modulus {0} is not prime; row reduction needs a field")]
    NotPrime(u64),
    #[error("matrix has {rows}x{cols} shape but {len} entries were supplied")]
    Shape {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("row {row} has {len} entries, expected {expected}")]
    Ragged {
        row: usize,
        len: usize,
        expected: usize,
    },
}

/// An integer modulus `m ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(m: u64) -> Result<Self, ModArithError> {
        if m < 2 {
            return Err(ModArithError::ModulusTooSmall(m));
        }
        Ok(Modulus(m))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_prime(self) -> bool {
        let m = self.0;
        if m < 4 {
            return true;
        }
        if m.is_multiple_of(2) {
            return false;
        }
        let mut d = 3;
        while d * d <= m {
            if m.is_multiple_of(d) {
                return false;
            }
            d += 2;
        }
        true
    }

    /// Canonical representative of `a` in `[0, m)`.
    pub fn reduce(self, a: i64) -> u64 {
        a.rem_euclid(self.0 as i64) as u64
    }

    pub fn is_unit(self, a: u64) -> bool {
        a.gcd(&self.0) == 1
    }

    /// Multiplicative inverse of `a` modulo `m`, if it exists.
    pub fn inverse(self, a: u64) -> Option<u64> {
        let m = self.0 as i128;
        let e = (a as i128).extended_gcd(&m);
        if e.gcd != 1 {
            return None;
        }
        Some(e.x.rem_euclid(m) as u64)
    }

    /// The units of `Z_m` in ascending order.
    pub fn units(self) -> Vec<u64> {
        (1..self.0).filter(|&a| self.is_unit(a)).collect()
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self, ModArithError> {
        if entries.len() != rows * cols {
            return Err(ModArithError::Shape {
                rows,
                cols,
                len: entries.len(),
            });
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, ModArithError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(ModArithError::Ragged {
                    row: i,
                    len: r.len(),
                    expected: cols,
                });
            }
            entries.extend_from_slice(r);
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of bounds"
        );
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of bounds"
        );
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Entry-wise reduction into `[0, m)`.
    pub fn reduced(&self, m: Modulus) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&a| m.reduce(a) as i64).collect(),
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Reduced row-echelon form over the field `Z_p`, together with the rank.
pub fn rref_mod_p(a: &IntMatrix, p: Modulus) -> Result<(IntMatrix, usize), ModArithError> {
    if !p.is_prime() {
        return Err(ModArithError::NotPrime(p.get()));
    }
    let pm = p.get();
    let mut m: Vec<Vec<u64>> = (0..a.rows)
        .map(|r| a.row(r).iter().map(|&v| p.reduce(v)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..a.cols {
        let Some(pivot) = (rank..a.rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = p
            .inverse(m[rank][col])
            .expect("nonzero element of a field is invertible");
        for v in m[rank].iter_mut() {
            *v = *v * inv % pm;
        }
        for r in 0..a.rows {
            if r == rank || m[r][col] == 0 {
                continue;
            }
            let factor = m[r][col];
            for c in 0..a.cols {
                let sub = factor * m[rank][c] % pm;
                m[r][c] = (m[r][c] + pm - sub) % pm;
            }
        }
        rank += 1;
        if rank == a.rows {
            break;
        }
    }
    let entries = m.into_iter().flatten().map(|v| v as i64).collect();
    Ok((
        IntMatrix {
            rows: a.rows,
            cols: a.cols,
            entries,
        },
        rank,
    ))
}

/// Nonzero invariant factors `d_1 | d_2 | ... | d_r` of `a` over the integers.
///
/// Elimination uses the entry of least nonzero absolute value as pivot and
/// repeats division steps until the pivot row and column are clear and the
/// pivot divides the rest of the block.
pub fn smith_normal_form(a: &IntMatrix) -> Vec<BigUint> {
    let (rows, cols) = (a.rows, a.cols);
    let mut m: Vec<Vec<BigInt>> = (0..rows)
        .map(|r| a.row(r).iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut factors = Vec::new();

    for t in 0..rows.min(cols) {
        let Some((pr, pc)) = min_abs_position(&m, t..rows, t..cols) else {
            break;
        };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }

        loop {
            // Clear column t below and row t to the right by division.
            for r in t + 1..rows {
                if m[r][t].is_zero() {
                    continue;
                }
                let q = m[r][t].div_floor(&m[t][t]);
                for c in t..cols {
                    let sub = &q * &m[t][c];
                    m[r][c] -= sub;
                }
            }
            for c in t + 1..cols {
                if m[t][c].is_zero() {
                    continue;
                }
                let q = m[t][c].div_floor(&m[t][t]);
                for r in t..rows {
                    let sub = &q * &m[r][t];
                    m[r][c] -= sub;
                }
            }

            let leftover = (t + 1..rows)
                .map(|r| (r, t))
                .chain((t + 1..cols).map(|c| (t, c)))
                .filter(|&(r, c)| !m[r][c].is_zero())
                .min_by(|&(r1, c1), &(r2, c2)| m[r1][c1].abs().cmp(&m[r2][c2].abs()));
            if let Some((r, c)) = leftover {
                // A remainder smaller than the pivot: make it the new pivot.
                if r != t {
                    m.swap(t, r);
                } else {
                    for row in m.iter_mut() {
                        row.swap(t, c);
                    }
                }
                continue;
            }

            let offender =
                (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !m[r][c].is_multiple_of(&m[t][t])));
            match offender {
                Some(r) => {
                    for c in t..cols {
                        let add = m[r][c].clone();
                        m[t][c] += add;
                    }
                }
                None => break,
            }
        }

        factors.push(
            m[t][t]
                .abs()
                .to_biguint()
                .expect("absolute value is nonnegative"),
        );
    }
    factors
}

fn min_abs_position(
    m: &[Vec<BigInt>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in rows {
        for c in cols.clone() {
            if m[r][c].is_zero() {
                continue;
            }
            match best {
                Some((br, bc)) if m[br][bc].abs() <= m[r][c].abs() => {}
                _ => best = Some((r, c)),
            }
        }
    }
    best
}

/// Number of `x ∈ (Z_m)^k` with `A·x ≡ 0 (mod m)`, where `k = A.cols()`.
///
/// With nonzero invariant factors `d_1..d_r` of `A` this is
/// `m^(k−r) · Π gcd(d_i, m)`.
pub fn count_homogeneous_solutions(a: &IntMatrix, m: Modulus) -> BigUint {
    let factors = smith_normal_form(&a.reduced(m));
    let modulus = BigUint::from(m.get());
    let free = a.cols - factors.len();
    let mut count = num_traits::pow(modulus.clone(), free);
    for d in &factors {
        count *= d.gcd(&modulus);
    }
    if count.is_zero() {
        // Unreachable: the zero vector always solves the system.
        return BigUint::one();
    }
    count
}
