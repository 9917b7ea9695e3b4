use crate::ffield::PrimeField;

/// Reduced row echelon form in place; returns the pivot columns.
///
/// Pivots are chosen leftmost first, and within a column the first row
/// holding a nonzero entry.
pub fn rref(f: PrimeField, m: &mut [Vec<u64>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(pr) = (row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, pr);
        let inv = f.inv(m[row][col]);
        for c in m[row].iter_mut() {
            *c = f.mul(*c, inv);
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r != row && other[col] != 0 {
                let factor = other[col];
                for (o, &p) in other.iter_mut().zip(&pivot_row) {
                    *o = f.sub(*o, f.mul(factor, p));
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Reduced echelon basis of `{ v : M v = 0 }` for an `nrows x ncols` matrix.
pub fn kernel_echelon(f: PrimeField, m: &[Vec<u64>], ncols: usize) -> Vec<Vec<u64>> {
    let mut a = m.to_vec();
    let pivots = rref(f, &mut a, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; ncols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(a[r][free]);
        }
        basis.push(v);
    }
    rref(f, &mut basis, ncols);
    basis
}

/// Reduced echelon basis of `{ v : v^T M = 0 }`, where `M` has one row per unknown.
pub fn left_kernel(f: PrimeField, rows: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let s = rows.len();
    let width = rows.first().map_or(0, |r| r.len());
    let t: Vec<Vec<u64>> = (0..width).map(|c| rows.iter().map(|r| r[c]).collect()).collect();
    kernel_echelon(f, &t, s)
}
