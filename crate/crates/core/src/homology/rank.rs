//! Rank of signed 0/±1 matrices over a field.

use super::field::Field;

/// A matrix stored by columns, each a list of `(row, sign)` sorted by row.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignedColumns {
    pub rows: usize,
    pub cols: Vec<Vec<(u32, i8)>>,
}

/// Matrices with fewer columns than this and a small enough area are
/// eliminated densely.
pub const DENSE_COLUMN_LIMIT: usize = 1000;
const DENSE_AREA_LIMIT: usize = 1 << 18;

pub fn prefers_dense(m: &SignedColumns) -> bool {
    m.cols.len() < DENSE_COLUMN_LIMIT && m.cols.len() * m.rows <= DENSE_AREA_LIMIT
}

/// Rank by Gaussian elimination on dense columns.
pub fn dense_rank<F: Field>(f: &F, m: &SignedColumns) -> usize {
    // basis[r] holds a reduced column whose first nonzero row is r, scaled to 1 there.
    let mut basis: Vec<Option<Vec<F::E>>> = vec![None; m.rows];
    let mut rank = 0;
    for col in &m.cols {
        let mut v = vec![f.zero(); m.rows];
        for &(r, s) in col {
            v[r as usize] = f.from_sign(s);
        }
        for r in 0..m.rows {
            if f.is_zero(&v[r]) {
                continue;
            }
            match &basis[r] {
                Some(b) => {
                    let c = v[r].clone();
                    for i in r..m.rows {
                        if !f.is_zero(&b[i]) {
                            v[i] = f.sub(&v[i], &f.mul(&c, &b[i]));
                        }
                    }
                }
                None => {
                    let inv = f.inv(&v[r]);
                    for x in v.iter_mut().skip(r) {
                        *x = f.mul(x, &inv);
                    }
                    basis[r] = Some(v);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn axpy<F: Field>(f: &F, a: &[(u32, F::E)], c: &F::E, b: &[(u32, F::E)]) -> Vec<(u32, F::E)> {
    // a - c * b, merged by row.
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, f.neg(&f.mul(c, &b[j].1))));
            j += 1;
        } else {
            let x = f.sub(&a[i].1, &f.mul(c, &b[j].1));
            if !f.is_zero(&x) {
                out.push((a[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Column reduction by lowest nonzero row.
///
/// Columns flagged in `skip` are known to reduce to zero and are not
/// processed. Returns the rank and the pivot (lowest) row of every nonzero
/// reduced column; those rows index columns of the next boundary map down
/// that reduce to zero.
pub fn sparse_reduce<F: Field>(f: &F, m: &SignedColumns, skip: &[bool]) -> (usize, Vec<u32>) {
    let mut owner: Vec<u32> = vec![u32::MAX; m.rows];
    let mut reduced: Vec<Vec<(u32, F::E)>> = Vec::new();
    let mut pivots = Vec::new();
    for (j, col) in m.cols.iter().enumerate() {
        if skip.get(j).copied().unwrap_or(false) {
            continue;
        }
        let mut v: Vec<(u32, F::E)> = col.iter().map(|&(r, s)| (r, f.from_sign(s))).collect();
        while let Some((low, lv)) = v.last().cloned() {
            let o = owner[low as usize];
            if o == u32::MAX {
                break;
            }
            let b = &reduced[o as usize];
            let c = f.mul(&lv, &f.inv(&b.last().unwrap().1));
            v = axpy(f, &v, &c, b);
        }
        if let Some((low, _)) = v.last() {
            owner[*low as usize] = reduced.len() as u32;
            pivots.push(*low);
            reduced.push(v);
        }
    }
    (reduced.len(), pivots)
}

#[cfg(test)]
mod tests {
    use super::super::field::{Gf2, Gfp, Rationals};
    use super::*;

    fn four_cycle_boundary() -> SignedColumns {
        // Vertices a,b,c,d; edges ab, bc, cd, da.
        SignedColumns {
            rows: 4,
            cols: vec![
                vec![(0, -1), (1, 1)],
                vec![(1, -1), (2, 1)],
                vec![(2, -1), (3, 1)],
                vec![(0, -1), (3, 1)],
            ],
        }
    }

    #[test]
    fn four_cycle_rank_is_three() {
        let m = four_cycle_boundary();
        assert_eq!(dense_rank(&Gf2, &m), 3);
        assert_eq!(dense_rank(&Gfp(65521), &m), 3);
        assert_eq!(dense_rank(&Rationals, &m), 3);
        assert_eq!(sparse_reduce(&Gf2, &m, &[]).0, 3);
        assert_eq!(sparse_reduce(&Gfp(65521), &m, &[]).0, 3);
        assert_eq!(sparse_reduce(&Rationals, &m, &[]).0, 3);
    }

    #[test]
    fn characteristic_matters() {
        // [[1,1],[1,-1]] has rank 1 over GF(2) and 2 elsewhere.
        let m = SignedColumns { rows: 2, cols: vec![vec![(0, 1), (1, 1)], vec![(0, 1), (1, -1)]] };
        assert_eq!(dense_rank(&Gf2, &m), 1);
        assert_eq!(sparse_reduce(&Gf2, &m, &[]).0, 1);
        assert_eq!(dense_rank(&Gfp(3), &m), 2);
        assert_eq!(sparse_reduce(&Gfp(3), &m, &[]).0, 2);
    }
}
