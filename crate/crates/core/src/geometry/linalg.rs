//! Small dense solvers over jets and over plain scalars.

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::scalar::Scalar;

/// Solves `A X = B` for `A` (`n × n`) and `B` (`n × m`), both row-major.
/// Gaussian elimination with partial pivoting on the jet values.
pub fn solve_jets<T: Scalar>(mut a: Vec<Jet<T>>, n: usize, mut b: Vec<Jet<T>>, m: usize) -> Result<Vec<Jet<T>>> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n * m);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| {
                let (vr, vs) = (a[r * n + col].value().abs(), a[s * n + col].value().abs());
                vr.partial_cmp(&vs).unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty range");
        if a[pivot * n + col].value() == T::zero() {
            return Err(Error::Domain("singular linear system".into()));
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            for k in 0..m {
                b.swap(col * m + k, pivot * m + k);
            }
        }
        let inv = a[col * n + col].recip()?;
        for r in col + 1..n {
            let factor = &a[r * n + col] * &inv;
            for k in col..n {
                let update = &factor * &a[col * n + k];
                a[r * n + k] = &a[r * n + k] - &update;
            }
            for k in 0..m {
                let update = &factor * &b[col * m + k];
                b[r * m + k] = &b[r * m + k] - &update;
            }
        }
    }
    for col in (0..n).rev() {
        let inv = a[col * n + col].recip()?;
        for k in 0..m {
            let mut acc = b[col * m + k].clone();
            for j in col + 1..n {
                acc = &acc - &(&a[col * n + j] * &b[j * m + k]);
            }
            b[col * m + k] = &acc * &inv;
        }
    }
    Ok(b)
}

/// Least-squares solution of an overdetermined system via the normal
/// equations. `rows[r]` holds the coefficients of equation `r`.
pub fn least_squares_jets<T: Scalar>(rows: &[Vec<Jet<T>>], rhs: &[Jet<T>]) -> Result<Vec<Jet<T>>> {
    let unknowns = rows.first().map(Vec::len).unwrap_or(0);
    if unknowns == 0 || rows.len() != rhs.len() {
        return Err(Error::Invalid("malformed least-squares system".into()));
    }
    let proto = &rhs[0];
    let mut normal = vec![proto.lift(T::zero()); unknowns * unknowns];
    let mut moment = vec![proto.lift(T::zero()); unknowns];
    for (row, b) in rows.iter().zip(rhs) {
        for i in 0..unknowns {
            for j in 0..unknowns {
                normal[i * unknowns + j] = &normal[i * unknowns + j] + &(&row[i] * &row[j]);
            }
            moment[i] = &moment[i] + &(&row[i] * b);
        }
    }
    solve_jets(normal, unknowns, moment, 1)
}

/// Determinant by elimination with partial pivoting.
pub fn determinant<T: Scalar>(m: &[T], n: usize) -> T {
    let mut a = m.to_vec();
    let mut det = T::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| {
                a[r * n + col]
                    .abs()
                    .partial_cmp(&a[s * n + col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty range");
        if a[pivot * n + col] == T::zero() {
            return T::zero();
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det = det * p;
        for r in col + 1..n {
            let f = a[r * n + col] / p;
            for k in col..n {
                a[r * n + k] = a[r * n + k] - f * a[col * n + k];
            }
        }
    }
    det
}

/// Lower-triangular `L` with `L Lᵀ = m`; `None` unless `m` is positive definite.
pub fn cholesky<T: Scalar>(m: &[T], n: usize) -> Option<Vec<T>> {
    let mut l = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = m[i * n + j];
            for k in 0..j {
                s = s - l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= T::zero() || !s.is_finite() {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Some(l)
}

/// Inverse of a lower-triangular matrix.
pub fn invert_lower<T: Scalar>(l: &[T], n: usize) -> Vec<T> {
    let mut inv = vec![T::zero(); n * n];
    for col in 0..n {
        for i in col..n {
            let mut s = if i == col { T::one() } else { T::zero() };
            for k in col..i {
                s = s - l[i * n + k] * inv[k * n + col];
            }
            inv[i * n + col] = s / l[i * n + i];
        }
    }
    inv
}
