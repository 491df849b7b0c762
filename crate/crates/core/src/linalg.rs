//! Exact rational matrices, determinants and the minor/Plücker dictionary.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{tuple_sign, GrassmannShape, IndexTuple};
use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    /// Row-major, each entry written as `"p"` or `"p/q"`.
    entries: Vec<Vec<String>>,
}

impl Serialize for RationalMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows)
                .map(|i| (0..self.cols).map(|j| format_rational(self.get(i, j))).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = MatrixRepr::deserialize(d)?;
        if r.entries.len() != r.rows || r.entries.iter().any(|row| row.len() != r.cols) {
            return Err(D::Error::custom("entries do not match rows x cols"));
        }
        let entries = r
            .entries
            .iter()
            .flatten()
            .map(|e| parse_rational(e))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        RationalMatrix::new(r.rows, r.cols, entries).map_err(D::Error::custom)
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format_rational(self.get(i, j)))
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", entries.len()),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        Self::from_fn(size, size, |i, j| if i == j { int(1) } else { int(0) })
    }

    /// 0-based generator.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: format!("rows of length {c}"),
                found: "ragged rows".into(),
            });
        }
        Ok(Self::from_fn(r, c, |i, j| int(rows[i][j])))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// 0-based access.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows", self.cols),
                found: format!("{} rows", other.rows),
            });
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Rational::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if !a.is_zero() {
                    acc += a * other.get(k, j);
                }
            }
            acc
        }))
    }

    /// 0-based row and column picks, in the order given.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> RationalMatrix {
        Self::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }
}

/// Determinant of a square integer matrix by fraction-free elimination.
pub fn bareiss_int(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Exact determinant; the empty matrix has determinant 1.
pub fn det(m: &RationalMatrix) -> Result<Rational> {
    if m.rows != m.cols {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let mut scale = BigInt::one();
    let mut ints = Vec::with_capacity(n);
    for i in 0..n {
        let row = &m.entries[i * n..(i + 1) * n];
        let l = row
            .iter()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        ints.push(
            row.iter()
                .map(|e| e.numer() * (&l / e.denom()))
                .collect::<Vec<_>>(),
        );
        scale *= l;
    }
    Ok(Rational::new(bareiss_int(ints), scale))
}

/// Row and column sets, 1-based and sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MinorSpec {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

fn check_index_set(what: &str, set: &[usize], bound: usize) -> Result<()> {
    if !set.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidMinor(format!(
            "{what} set {set:?} is not sorted and distinct"
        )));
    }
    if let Some(&bad) = set.iter().find(|&&x| x == 0 || x > bound) {
        return Err(Error::InvalidMinor(format!(
            "{what} index {bad} outside 1..={bound}"
        )));
    }
    Ok(())
}

impl MinorSpec {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        if rows.len() != cols.len() {
            return Err(Error::InvalidMinor(format!(
                "|P| = {} but |Q| = {}",
                rows.len(),
                cols.len()
            )));
        }
        check_index_set("row", &rows, usize::MAX)?;
        check_index_set("column", &cols, usize::MAX)?;
        Ok(Self { rows, cols })
    }

    pub fn empty() -> Self {
        Self {
            rows: vec![],
            cols: vec![],
        }
    }
}

pub fn minor(m: &RationalMatrix, spec: &MinorSpec) -> Result<Rational> {
    if spec.rows.len() != spec.cols.len() {
        return Err(Error::InvalidMinor("|P| != |Q|".into()));
    }
    check_index_set("row", &spec.rows, m.rows)?;
    check_index_set("column", &spec.cols, m.cols)?;
    if spec.rows.is_empty() {
        return Ok(Rational::one());
    }
    let r: Vec<usize> = spec.rows.iter().map(|x| x - 1).collect();
    let c: Vec<usize> = spec.cols.iter().map(|x| x - 1).collect();
    det(&m.select(&r, &c))
}

/// `Δ_I(X)` with the rows of `X` taken in the order listed in `I`.
pub fn plucker(x: &RationalMatrix, i: &IndexTuple) -> Result<Rational> {
    let shape = i.shape();
    if x.rows != shape.ambient() || x.cols != shape.m() {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{}", shape.ambient(), shape.m()),
            found: format!("{}x{}", x.rows, x.cols),
        });
    }
    let rows: Vec<usize> = i.entries().iter().map(|e| e - 1).collect();
    let cols: Vec<usize> = (0..x.cols).collect();
    det(&x.select(&rows, &cols))
}

/// All sorted Plücker coordinates of a point, computed once.
#[derive(Clone, Debug)]
pub struct PluckerTable {
    shape: GrassmannShape,
    values: HashMap<Vec<usize>, Rational>,
}

impl PluckerTable {
    pub fn new(x: &RationalMatrix, shape: GrassmannShape) -> Result<Self> {
        let mut values = HashMap::new();
        for t in shape.subsets() {
            let v = plucker(x, &t)?;
            values.insert(t.entries().to_vec(), v);
        }
        Ok(Self { shape, values })
    }

    pub fn shape(&self) -> GrassmannShape {
        self.shape
    }

    /// Ordered-tuple value: sign of the sorting permutation times the sorted value.
    pub fn get(&self, i: &IndexTuple) -> Rational {
        let v = &self.values[i.sorted().entries()];
        if tuple_sign(i) < 0 {
            -v.clone()
        } else {
            v.clone()
        }
    }

    pub fn all_nonnegative(&self) -> bool {
        self.values.values().all(|v| !v.is_negative())
    }

    pub fn all_positive(&self) -> bool {
        self.values.values().all(|v| v.is_positive())
    }
}

/// `A` stacked above the anti-diagonal sign block.
pub fn embed(a: &RationalMatrix) -> Result<RationalMatrix> {
    let (n, m) = (a.rows, a.cols);
    if m == 0 || m > n {
        return Err(Error::InvalidShape { m, n });
    }
    Ok(RationalMatrix::from_fn(n + m, m, |i, j| {
        if i < n {
            a.get(i, j).clone()
        } else {
            // block row i0 = i-n+1, column j0 = j+1
            let i0 = i - n + 1;
            if j + 1 == m - i0 + 1 {
                if i0 % 2 == 1 {
                    int(1)
                } else {
                    int(-1)
                }
            } else {
                int(0)
            }
        }
    }))
}

pub fn minor_to_plucker(p: &[usize], q: &[usize], shape: GrassmannShape) -> Result<IndexTuple> {
    let (m, n) = (shape.m(), shape.n());
    if p.len() != q.len() {
        return Err(Error::InvalidMinor(format!(
            "|P| = {} but |Q| = {}",
            p.len(),
            q.len()
        )));
    }
    check_index_set("row", p, n)?;
    check_index_set("column", q, m)?;
    let mut entries: Vec<usize> = p.to_vec();
    entries.extend((1..=m).filter(|j| !q.contains(j)).map(|j| m + n + 1 - j));
    entries.sort_unstable();
    IndexTuple::new(shape, entries)
}

pub fn plucker_to_minor(i: &IndexTuple) -> (Vec<usize>, Vec<usize>) {
    let shape = i.shape();
    let (m, n) = (shape.m(), shape.n());
    let set = i.as_set();
    let p: Vec<usize> = set.iter().copied().filter(|&x| x <= n).collect();
    let removed: Vec<usize> = set
        .iter()
        .filter(|&&x| x > n)
        .map(|&x| m + n + 1 - x)
        .collect();
    let q = (1..=m).filter(|j| !removed.contains(j)).collect();
    (p, q)
}
