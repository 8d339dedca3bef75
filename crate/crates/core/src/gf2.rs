//! Dense GF(2) linear algebra over rows packed into `u64` words.
//!
//! A matrix is a slice of rows; bit `j` of row `i` is entry `(i, j)`.

/// Rank of the row set.
pub fn rank(rows: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Transpose of a `rows.len() x ncols` matrix.
pub fn transpose(rows: &[u64], ncols: usize) -> Vec<u64> {
    (0..ncols)
        .map(|j| {
            rows.iter()
                .enumerate()
                .filter(|(_, r)| (*r >> j) & 1 == 1)
                .fold(0u64, |acc, (i, _)| acc | (1 << i))
        })
        .collect()
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse(rows: &[u64]) -> Option<Vec<u64>> {
    let n = rows.len();
    assert!(n <= 64);
    let mut a = rows.to_vec();
    let mut inv: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| (a[r] >> col) & 1 == 1)?;
        a.swap(col, piv);
        inv.swap(col, piv);
        for r in 0..n {
            if r != col && (a[r] >> col) & 1 == 1 {
                a[r] ^= a[col];
                inv[r] ^= inv[col];
            }
        }
    }
    Some(inv)
}

/// Subset of `rows` (as a bitmask over row indices) whose XOR equals `target`.
///
/// Returns `None` when `target` is outside the row span. When the rows are
/// dependent the returned combination is one valid choice, not the only one.
pub fn express(rows: &[u64], target: u64) -> Option<u64> {
    assert!(rows.len() <= 64);
    // reduced basis entries carry (vector, combination of original rows)
    let mut basis: Vec<(u64, u64)> = Vec::new();
    for (i, &r) in rows.iter().enumerate() {
        let mut v = r;
        let mut c = 1u64 << i;
        for &(bv, bc) in &basis {
            if v ^ bv < v {
                v ^= bv;
                c ^= bc;
            }
        }
        if v != 0 {
            basis.push((v, c));
            basis.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        }
    }
    let mut v = target;
    let mut c = 0u64;
    for &(bv, bc) in &basis {
        if v ^ bv < v {
            v ^= bv;
            c ^= bc;
        }
    }
    (v == 0).then_some(c)
}

/// Solve `M x = b` where `M` has `rows.len()` equations in `ncols` unknowns.
///
/// Requires full column rank; the system may be overdetermined but must be
/// consistent. Returns the unique solution as a bitmask over unknowns.
pub fn solve(rows: &[u64], ncols: usize, rhs: &[bool]) -> Option<u64> {
    assert_eq!(rows.len(), rhs.len());
    let mut aug: Vec<(u64, bool)> = rows.iter().copied().zip(rhs.iter().copied()).collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(ncols);
    for col in 0..ncols {
        let piv = (pivot_row..aug.len()).find(|&r| (aug[r].0 >> col) & 1 == 1)?;
        aug.swap(pivot_row, piv);
        let (pr, pb) = aug[pivot_row];
        for (r, row) in aug.iter_mut().enumerate() {
            if r != pivot_row && (row.0 >> col) & 1 == 1 {
                row.0 ^= pr;
                row.1 ^= pb;
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if aug[pivot_row..].iter().any(|&(r, b)| r == 0 && b) {
        return None;
    }
    Some(
        pivots
            .iter()
            .enumerate()
            .filter(|(_, &r)| aug[r].1)
            .fold(0u64, |acc, (col, _)| acc | (1 << col)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_triangular() {
        let m = [0b001, 0b011, 0b111];
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![0b001, 0b011, 0b110]);
    }

    #[test]
    fn singular_has_no_inverse() {
        assert!(inverse(&[0b01, 0b01]).is_none());
        assert_eq!(rank(&[0b01, 0b01, 0b10]), 2);
    }

    #[test]
    fn solve_overdetermined() {
        // x0 = 1, x0 ^ x1 = 1, x1 = 0
        let x = solve(&[0b01, 0b11, 0b10], 2, &[true, true, false]).unwrap();
        assert_eq!(x, 0b01);
        assert!(solve(&[0b01, 0b11, 0b10], 2, &[true, true, true]).is_none());
    }

    #[test]
    fn express_finds_combination() {
        let rows = [0b011, 0b110, 0b100];
        let c = express(&rows, 0b101).unwrap();
        let x = (0..3).filter(|i| (c >> i) & 1 == 1).fold(0, |a, i| a ^ rows[i]);
        assert_eq!(x, 0b101);
        assert!(express(&[0b01], 0b10).is_none());
    }
}
