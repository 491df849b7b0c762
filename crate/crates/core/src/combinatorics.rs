//! Index tuples on the circle `1..=m+n`, weak separation, the exchange layout
//! of a pair and the two circle symmetries.
//!
//! Tuples are ordered: the position of every entry is kept through exchanges,
//! shifts and reflections, and sorting only happens through [`IndexTuple::sorted`].

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "ShapeRepr", into = "ShapeRepr")]
pub struct GrassmannShape {
    m: usize,
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct ShapeRepr {
    m: usize,
    n: usize,
}

impl TryFrom<ShapeRepr> for GrassmannShape {
    type Error = Error;
    fn try_from(r: ShapeRepr) -> Result<Self> {
        GrassmannShape::new(r.m, r.n)
    }
}

impl From<GrassmannShape> for ShapeRepr {
    fn from(s: GrassmannShape) -> Self {
        ShapeRepr { m: s.m, n: s.n }
    }
}

impl GrassmannShape {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::InvalidShape { m, n });
        }
        Ok(Self { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of marked points on the circle.
    pub fn ambient(&self) -> usize {
        self.m + self.n
    }

    /// All sorted `m`-element subsets of `1..=m+n`, in lexicographic order.
    pub fn subsets(&self) -> Vec<IndexTuple> {
        combinations(self.ambient(), self.m)
            .into_iter()
            .map(|entries| IndexTuple {
                shape: *self,
                entries,
            })
            .collect()
    }
}

/// All increasing `k`-element sequences drawn from `1..=n`.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for x in start..=n {
            if n - x + 1 < need {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(1, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "TupleRepr", into = "TupleRepr")]
pub struct IndexTuple {
    shape: GrassmannShape,
    entries: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct TupleRepr {
    m: usize,
    n: usize,
    entries: Vec<usize>,
}

impl TryFrom<TupleRepr> for IndexTuple {
    type Error = Error;
    fn try_from(r: TupleRepr) -> Result<Self> {
        IndexTuple::new(GrassmannShape::new(r.m, r.n)?, r.entries)
    }
}

impl From<IndexTuple> for TupleRepr {
    fn from(t: IndexTuple) -> Self {
        TupleRepr {
            m: t.shape.m,
            n: t.shape.n,
            entries: t.entries,
        }
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl IndexTuple {
    pub fn new(shape: GrassmannShape, entries: Vec<usize>) -> Result<Self> {
        if entries.len() != shape.m {
            return Err(Error::InvalidTuple(format!(
                "expected {} entries, found {}",
                shape.m,
                entries.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for &e in &entries {
            if e == 0 || e > shape.ambient() {
                return Err(Error::InvalidTuple(format!(
                    "entry {e} outside 1..={}",
                    shape.ambient()
                )));
            }
            if !seen.insert(e) {
                return Err(Error::InvalidTuple(format!("repeated entry {e}")));
            }
        }
        Ok(Self { shape, entries })
    }

    /// Convenience constructor used heavily in tests and fixtures.
    pub fn from_slice(m: usize, n: usize, entries: &[usize]) -> Result<Self> {
        Self::new(GrassmannShape::new(m, n)?, entries.to_vec())
    }

    pub fn shape(&self) -> GrassmannShape {
        self.shape
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn contains(&self, x: usize) -> bool {
        self.entries.contains(&x)
    }

    pub fn as_set(&self) -> BTreeSet<usize> {
        self.entries.iter().copied().collect()
    }

    pub fn sorted(&self) -> IndexTuple {
        let mut entries = self.entries.clone();
        entries.sort_unstable();
        IndexTuple {
            shape: self.shape,
            entries,
        }
    }

    pub fn is_sorted(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] < w[1])
    }

    /// Complement in `1..=m+n`; only an `m`-tuple again when `m == n`.
    pub fn complement(&self) -> Result<IndexTuple> {
        if self.shape.m != self.shape.n {
            return Err(Error::InvalidTuple(
                "complement of an m-tuple is an m-tuple only when m = n".into(),
            ));
        }
        let set = self.as_set();
        let entries = (1..=self.shape.ambient())
            .filter(|x| !set.contains(x))
            .collect();
        Ok(IndexTuple {
            shape: self.shape,
            entries,
        })
    }

    /// Same shape, entry at `pos` (0-based) replaced by `value`.
    fn with_entry(&self, pos: usize, value: usize) -> IndexTuple {
        let mut entries = self.entries.clone();
        entries[pos] = value;
        IndexTuple {
            shape: self.shape,
            entries,
        }
    }

    fn position(&self, value: usize) -> Option<usize> {
        self.entries.iter().position(|&e| e == value)
    }
}

/// Parity sign of the permutation sorting the tuple ascending.
pub fn tuple_sign(t: &IndexTuple) -> i32 {
    let e = t.entries();
    let mut inversions = 0usize;
    for a in 0..e.len() {
        for b in a + 1..e.len() {
            if e[a] > e[b] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn check_same_shape(a: &IndexTuple, b: &IndexTuple) -> Result<()> {
    if a.shape != b.shape {
        return Err(Error::ShapeMismatch);
    }
    Ok(())
}

/// `(I \ J, J \ I)` as sorted vectors.
pub fn set_differences(a: &IndexTuple, b: &IndexTuple) -> (Vec<usize>, Vec<usize>) {
    let sa = a.as_set();
    let sb = b.as_set();
    (
        sa.difference(&sb).copied().collect(),
        sb.difference(&sa).copied().collect(),
    )
}

/// Number of colour changes around the circle in the word of the symmetric
/// difference, `true` marking elements of `I \ J`.
fn cyclic_changes(word: &[bool]) -> usize {
    let len = word.len();
    (0..len).filter(|&t| word[t] != word[(t + 1) % len]).count()
}

fn symdiff_word(a: &IndexTuple, b: &IndexTuple) -> Vec<bool> {
    let (da, db) = set_differences(a, b);
    let mut word: Vec<(usize, bool)> = da
        .iter()
        .map(|&x| (x, true))
        .chain(db.iter().map(|&x| (x, false)))
        .collect();
    word.sort_unstable();
    word.into_iter().map(|(_, c)| c).collect()
}

/// Chord separation of `I \ J` from `J \ I` on the circle.
pub fn is_weakly_separated(a: &IndexTuple, b: &IndexTuple) -> Result<bool> {
    check_same_shape(a, b)?;
    let word = symdiff_word(a, b);
    if word.len() <= 2 {
        return Ok(true);
    }
    Ok(cyclic_changes(&word) <= 2)
}

/// Ordering of the symmetric difference used to index the exchange family.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymDiffLayout {
    pub eta: usize,
    pub i_seq: Vec<usize>,
    pub j_seq: Vec<usize>,
}

impl SymDiffLayout {
    /// The chosen `i_1`.
    pub fn start(&self) -> usize {
        self.i_seq[0]
    }

    /// Traversing clockwise from `i_1` meets the `i`'s and the `j`'s in the
    /// listed orders and ends at `j_eta`.
    pub fn satisfies_betweenness(&self, ambient: usize) -> bool {
        if self.eta == 0 {
            return true;
        }
        let start = self.start();
        let dist = |x: usize| (x + ambient - start) % ambient;
        let increasing = |seq: &[usize]| seq.windows(2).all(|w| dist(w[0]) < dist(w[1]));
        let last_j = dist(self.j_seq[self.eta - 1]);
        increasing(&self.i_seq)
            && increasing(&self.j_seq)
            && self.i_seq.iter().all(|&x| dist(x) < last_j)
    }

    /// Both colour classes occupy one arc each, `i`'s first.
    pub fn is_two_arcs(&self, ambient: usize) -> bool {
        if self.eta == 0 {
            return true;
        }
        let start = self.start();
        let dist = |x: usize| (x + ambient - start) % ambient;
        let max_i = self.i_seq.iter().map(|&x| dist(x)).max().unwrap();
        let min_j = self.j_seq.iter().map(|&x| dist(x)).min().unwrap();
        self.satisfies_betweenness(ambient) && max_i < min_j
    }

    /// Image under a relabelling of the circle, keeping list positions.
    pub fn map(&self, f: impl Fn(usize) -> usize) -> SymDiffLayout {
        SymDiffLayout {
            eta: self.eta,
            i_seq: self.i_seq.iter().map(|&x| f(x)).collect(),
            j_seq: self.j_seq.iter().map(|&x| f(x)).collect(),
        }
    }
}

/// Canonical layout of the symmetric difference.
///
/// `i_1` is the first element of `I \ J` met clockwise after `max(J \ I)`; the
/// `i`'s and `j`'s are then listed in clockwise order from `i_1`. For a weakly
/// separated pair this is the only start satisfying the betweenness condition.
pub fn layout(a: &IndexTuple, b: &IndexTuple) -> Result<SymDiffLayout> {
    check_same_shape(a, b)?;
    let (da, db) = set_differences(a, b);
    if da.is_empty() {
        return Err(Error::EmptySymmetricDifference);
    }
    let ambient = a.shape.ambient();
    let max_j = *db.iter().max().unwrap();
    let start = (1..=ambient)
        .map(|t| (max_j - 1 + t) % ambient + 1)
        .find(|x| da.contains(x))
        .unwrap();
    let dist = |x: &usize| (x + ambient - start) % ambient;
    let mut i_seq = da;
    let mut j_seq = db;
    i_seq.sort_by_key(dist);
    j_seq.sort_by_key(dist);
    Ok(SymDiffLayout {
        eta: i_seq.len(),
        i_seq,
        j_seq,
    })
}

/// Checks that `lay` lists exactly `I \ J` and `J \ I`, in any order.
pub fn validate_layout(a: &IndexTuple, b: &IndexTuple, lay: &SymDiffLayout) -> Result<()> {
    check_same_shape(a, b)?;
    let (da, db) = set_differences(a, b);
    let si: BTreeSet<usize> = lay.i_seq.iter().copied().collect();
    let sj: BTreeSet<usize> = lay.j_seq.iter().copied().collect();
    let ok = lay.eta == da.len()
        && lay.i_seq.len() == lay.eta
        && lay.j_seq.len() == lay.eta
        && si == da.into_iter().collect()
        && sj == db.into_iter().collect();
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidTuple(
            "layout does not match the symmetric difference of the pair".into(),
        ))
    }
}

/// `(I_{k,r}, J_{k,r})` for the layout: `j_k` and `i_r` trade places in situ.
pub fn exchange_with_layout(
    a: &IndexTuple,
    b: &IndexTuple,
    lay: &SymDiffLayout,
    k: usize,
    r: usize,
) -> Result<(IndexTuple, IndexTuple)> {
    for (what, idx) in [("k", k), ("r", r)] {
        if idx == 0 || idx > lay.eta {
            return Err(Error::IndexOutOfRange {
                what,
                index: idx,
                bound: lay.eta,
            });
        }
    }
    let jk = lay.j_seq[k - 1];
    let ir = lay.i_seq[r - 1];
    let pa = a.position(ir).ok_or(Error::ShapeMismatch)?;
    let pb = b.position(jk).ok_or(Error::ShapeMismatch)?;
    Ok((a.with_entry(pa, jk), b.with_entry(pb, ir)))
}

pub fn exchange_pair(
    a: &IndexTuple,
    b: &IndexTuple,
    k: usize,
    r: usize,
) -> Result<(IndexTuple, IndexTuple)> {
    let lay = layout(a, b)?;
    exchange_with_layout(a, b, &lay, k, r)
}

/// `x ↦ ((x - 1 + t) mod N) + 1` on a single point of the circle.
pub fn shift_point(x: usize, t: i64, ambient: usize) -> usize {
    let n = ambient as i64;
    ((x as i64 - 1 + t).rem_euclid(n) + 1) as usize
}

pub fn reflect_point(x: usize, ambient: usize) -> usize {
    ambient + 1 - x
}

pub fn cyclic_shift_tuple(t: &IndexTuple, shift: i64) -> IndexTuple {
    let ambient = t.shape.ambient();
    IndexTuple {
        shape: t.shape,
        entries: t
            .entries
            .iter()
            .map(|&x| shift_point(x, shift, ambient))
            .collect(),
    }
}

pub fn reflect_tuple(t: &IndexTuple) -> IndexTuple {
    let ambient = t.shape.ambient();
    IndexTuple {
        shape: t.shape,
        entries: t
            .entries
            .iter()
            .map(|&x| reflect_point(x, ambient))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(m: usize, n: usize, e: &[usize]) -> IndexTuple {
        IndexTuple::from_slice(m, n, e).unwrap()
    }

    fn inversion_parity(e: &[usize]) -> i32 {
        // selection sort, counting swaps
        let mut v = e.to_vec();
        let mut swaps = 0;
        for a in 0..v.len() {
            let min = (a..v.len()).min_by_key(|&b| v[b]).unwrap();
            if min != a {
                v.swap(a, min);
                swaps += 1;
            }
        }
        if swaps % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn signs() {
        assert_eq!(tuple_sign(&t(3, 3, &[1, 2, 3])), 1);
        assert_eq!(tuple_sign(&t(3, 3, &[1, 3, 2])), -1);
        let odd = t(6, 6, &[1, 5, 3, 4, 10, 11]);
        assert_eq!(tuple_sign(&odd), inversion_parity(odd.entries()));
        assert_eq!(tuple_sign(&odd), 1);
    }

    #[test]
    fn tuple_validation() {
        assert!(IndexTuple::from_slice(2, 2, &[1, 1]).is_err());
        assert!(IndexTuple::from_slice(2, 2, &[1, 5]).is_err());
        assert!(IndexTuple::from_slice(2, 2, &[1]).is_err());
        assert!(IndexTuple::from_slice(3, 2, &[1, 2, 3]).is_err());
    }

    #[test]
    fn weak_separation_fixtures() {
        let i = t(6, 6, &[1, 2, 3, 4, 10, 11]);
        let j = t(6, 6, &[5, 6, 7, 8, 9, 11]);
        assert!(is_weakly_separated(&i, &j).unwrap());
        assert!(!is_weakly_separated(&t(3, 3, &[1, 3, 5]), &t(3, 3, &[2, 4, 6])).unwrap());
        assert!(is_weakly_separated(&i, &i).unwrap());
        let other = t(2, 3, &[1, 2]);
        assert_eq!(is_weakly_separated(&t(2, 2, &[1, 2]), &other), Err(Error::ShapeMismatch));
    }

    #[test]
    fn layout_reference_fixture() {
        let i = t(6, 6, &[1, 5, 3, 4, 10, 11]);
        let j = t(6, 6, &[2, 6, 7, 8, 9, 11]);
        let lay = layout(&i, &j).unwrap();
        assert_eq!(lay.i_seq, vec![10, 1, 3, 4, 5]);
        assert_eq!(lay.j_seq, vec![2, 6, 7, 8, 9]);
        assert!(lay.satisfies_betweenness(12));
    }

    #[test]
    fn layout_two_arcs() {
        let lay = layout(&t(2, 2, &[1, 2]), &t(2, 2, &[3, 4])).unwrap();
        assert_eq!(lay.i_seq, vec![1, 2]);
        assert_eq!(lay.j_seq, vec![3, 4]);
        assert!(lay.is_two_arcs(4));
        assert_eq!(
            layout(&t(2, 2, &[1, 2]), &t(2, 2, &[2, 1])),
            Err(Error::EmptySymmetricDifference)
        );
    }

    /// Exhaustive scan over every rotation start; the canonical choice must
    /// be one of the starts passing the betweenness predicate.
    #[test]
    fn layout_matches_rotation_scan() {
        let i = t(3, 3, &[1, 3, 5]);
        let j = t(3, 3, &[2, 4, 6]);
        let (da, db) = set_differences(&i, &j);
        let valid: Vec<usize> = da
            .iter()
            .copied()
            .filter(|&start| {
                let dist = |x: &usize| (x + 6 - start) % 6;
                let mut is = da.clone();
                let mut js = db.clone();
                is.sort_by_key(dist);
                js.sort_by_key(dist);
                SymDiffLayout { eta: 3, i_seq: is, j_seq: js }.satisfies_betweenness(6)
            })
            .collect();
        assert_eq!(valid, vec![1, 3, 5]);
        let lay = layout(&i, &j).unwrap();
        assert_eq!(lay.i_seq, vec![1, 3, 5]);
        assert_eq!(lay.j_seq, vec![2, 4, 6]);
    }

    #[test]
    fn exchange_six_by_six_fixture() {
        let i = t(6, 6, &[1, 2, 3, 4, 10, 11]);
        let j = t(6, 6, &[5, 6, 7, 8, 9, 11]);
        let lay = layout(&i, &j).unwrap();
        assert_eq!(lay.i_seq, vec![10, 1, 2, 3, 4]);
        let (ik, jk) = exchange_pair(&i, &j, 1, 3).unwrap();
        assert_eq!(ik.sorted().entries(), &[1, 3, 4, 5, 10, 11]);
        assert_eq!(jk.sorted().entries(), &[2, 6, 7, 8, 9, 11]);
        assert!(matches!(
            exchange_pair(&i, &j, 6, 1),
            Err(Error::IndexOutOfRange { what: "k", .. })
        ));
    }

    #[test]
    fn exchange_eta_one_swaps_partner() {
        let i = t(2, 3, &[1, 4]);
        let j = t(2, 3, &[4, 2]);
        let (ik, jk) = exchange_pair(&i, &j, 1, 1).unwrap();
        assert_eq!(ik.as_set(), j.as_set());
        assert_eq!(jk.as_set(), i.as_set());
    }

    #[test]
    fn exchange_hand_swaps() {
        let i = t(2, 2, &[1, 3]);
        let j = t(2, 2, &[2, 4]);
        let lay = layout(&i, &j).unwrap();
        for k in 1..=2 {
            for r in 1..=2 {
                let (ik, jk) = exchange_pair(&i, &j, k, r).unwrap();
                let jv = lay.j_seq[k - 1];
                let iv = lay.i_seq[r - 1];
                let mut want_i = i.entries().to_vec();
                let mut want_j = j.entries().to_vec();
                *want_i.iter_mut().find(|x| **x == iv).unwrap() = jv;
                *want_j.iter_mut().find(|x| **x == jv).unwrap() = iv;
                assert_eq!(ik.entries(), &want_i[..]);
                assert_eq!(jk.entries(), &want_j[..]);
            }
        }
    }

    #[test]
    fn shifts_and_reflections() {
        let a = t(3, 3, &[1, 2, 4]);
        assert_eq!(cyclic_shift_tuple(&a, 1).entries(), &[2, 3, 5]);
        assert_eq!(cyclic_shift_tuple(&a, 6), a);
        assert_eq!(cyclic_shift_tuple(&a, -1).entries(), &[6, 1, 3]);
        assert_eq!(reflect_tuple(&t(3, 3, &[1, 2, 3])).entries(), &[6, 5, 4]);
        assert_eq!(reflect_tuple(&reflect_tuple(&a)), a);
    }

    #[test]
    fn laplace_family_shift_then_reflect() {
        // I(d,k) = [1,d] ∪ [n+d+2,2n] ∪ {n+d+1-k}, mapped by σ^{2n-d} then ρ.
        let n = 5;
        for d in 1..n {
            for k in 0..=n {
                let mut e: Vec<usize> = (1..=d).chain(n + d + 2..=2 * n).collect();
                e.push(n + d + 1 - k);
                let idk = t(n, n, &e);
                let mapped = reflect_tuple(&cyclic_shift_tuple(&idk, (2 * n - d) as i64));
                let mut want: BTreeSet<usize> = (1..n).collect();
                want.insert(n + k);
                if k == 0 {
                    want = (1..=n).collect();
                }
                assert_eq!(mapped.as_set(), want, "d={d} k={k}");
            }
        }
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(6, 3).len(), 20);
        assert_eq!(combinations(4, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }
}
