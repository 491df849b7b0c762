//! Independent reference implementations used across integration tests:
//! cofactor determinants, sorting signs and partial sums built directly from
//! the exchange definition.
#![allow(dead_code)]

use num_traits::{One, Zero};
use plucker_lab::linalg::{int, Rational, RationalMatrix};

pub fn cofactor_det(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    if n == 0 {
        return Rational::one();
    }
    if n == 1 {
        return a[0][0].clone();
    }
    let mut acc = Rational::zero();
    for c in 0..n {
        if a[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Rational>> = a[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = &a[0][c] * cofactor_det(&minor);
        if c % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Determinant of rows `rows` (1-based, in the given order) and all columns.
pub fn row_minor(x: &RationalMatrix, rows: &[usize]) -> Rational {
    let a: Vec<Vec<Rational>> = rows
        .iter()
        .map(|&r| (0..x.cols()).map(|c| x.get(r - 1, c).clone()).collect())
        .collect();
    cofactor_det(&a)
}

/// Determinant of an arbitrary submatrix, 1-based sorted indices.
pub fn sub_minor(x: &RationalMatrix, rows: &[usize], cols: &[usize]) -> Rational {
    let a: Vec<Vec<Rational>> = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| x.get(r - 1, c - 1).clone()).collect())
        .collect();
    cofactor_det(&a)
}

/// Sign of the permutation sorting `t`, by counting inversions.
pub fn sort_sign(t: &[usize]) -> i64 {
    let mut inv = 0;
    for a in 0..t.len() {
        for b in a + 1..t.len() {
            if t[a] > t[b] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == k {
            out.push((1..=n).filter(|&i| mask & (1 << (i - 1)) != 0).collect());
        }
    }
    out.sort();
    out
}

/// At most two colour changes around the circle.
pub fn weakly_separated(i: &[usize], j: &[usize], ambient: usize) -> bool {
    let seq: Vec<i32> = (1..=ambient)
        .filter_map(|x| match (i.contains(&x), j.contains(&x)) {
            (true, false) => Some(0),
            (false, true) => Some(1),
            _ => None,
        })
        .collect();
    if seq.len() <= 2 {
        return true;
    }
    let changes = (0..seq.len()).filter(|&p| seq[p] != seq[(p + 1) % seq.len()]).count();
    changes <= 2
}

/// `(i_seq, j_seq)`: both differences clockwise from the first element of
/// `I \ J` after `max(J \ I)`.
pub fn oracle_layout(i: &[usize], j: &[usize], ambient: usize) -> (Vec<usize>, Vec<usize>) {
    let a: Vec<usize> = i.iter().copied().filter(|x| !j.contains(x)).collect();
    let b: Vec<usize> = j.iter().copied().filter(|x| !i.contains(x)).collect();
    let top = *b.iter().max().unwrap();
    let dist = |x: usize, from: usize| (x + ambient - from) % ambient;
    let start = *a.iter().min_by_key(|&&x| dist(x, top)).unwrap();
    let mut a = a;
    let mut b = b;
    a.sort_by_key(|&x| dist(x, start));
    b.sort_by_key(|&x| dist(x, start));
    (a, b)
}

/// Signed partial sums `l = 1..=η` for one `r`, straight from the definition.
pub fn oracle_partial_sums(i: &[usize], j: &[usize], r: usize, x: &RationalMatrix) -> Vec<Rational> {
    let ambient = x.rows();
    let (a, b) = oracle_layout(i, j, ambient);
    let eta = a.len();
    let ir = a[r - 1];
    let base = row_minor(x, i) * row_minor(x, j);
    let mut acc = Rational::zero();
    let mut out = Vec::new();
    for k in 1..=eta {
        let jk = b[k - 1];
        let ik: Vec<usize> = i.iter().map(|&v| if v == ir { jk } else { v }).collect();
        let jkk: Vec<usize> = j.iter().map(|&v| if v == jk { ir } else { v }).collect();
        acc += row_minor(x, &ik) * row_minor(x, &jkk);
        if k == eta - r + 1 {
            acc -= &base;
        }
        let s = sort_sign(&ik) * sort_sign(&jkk);
        out.push(if s < 0 { -acc.clone() } else { acc.clone() });
    }
    out
}

pub fn all_maximal_minors_nonnegative(x: &RationalMatrix) -> bool {
    k_subsets(x.rows(), x.cols())
        .iter()
        .all(|rows| row_minor(x, rows) >= int(0))
}
