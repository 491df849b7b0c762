//! The algebra at loop value 2, the image of the symmetric group under
//! `s_i ↦ t_i - 1`, and the immanants read off from it.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::diagram::{diagrams, tl_multiply, KauffmanDiagram};
use crate::error::{Error, Result};
use crate::linalg::{Rational, RationalMatrix};

/// Loop value.
pub const XI: i64 = 2;

/// Largest `s` for which the full symmetric-group table is built.
pub const MAX_TABLE_S: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// One-line notation over `1..=s`.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let s = images.len();
        let mut seen = vec![false; s + 1];
        for &x in &images {
            if x == 0 || x > s || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(s: usize) -> Self {
        Self {
            images: (1..=s).collect(),
        }
    }

    pub fn s(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&i| self.images[i - 1]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.s()];
        for (i, &w) in self.images.iter().enumerate() {
            inv[w - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    pub fn inversions(&self) -> usize {
        let e = &self.images;
        (0..e.len())
            .map(|a| (a + 1..e.len()).filter(|&b| e[a] > e[b]).count())
            .sum()
    }

    /// A reduced word `a_1 … a_k` with `self = s_{a_1} ∘ … ∘ s_{a_k}`.
    pub fn reduced_word(&self) -> Vec<usize> {
        // bubble sort on the one-line array; each swap at positions (i, i+1)
        // right-multiplies by s_i
        let mut v = self.images.clone();
        let mut word = Vec::new();
        loop {
            match (0..v.len().saturating_sub(1)).find(|&i| v[i] > v[i + 1]) {
                Some(i) => {
                    v.swap(i, i + 1);
                    word.push(i + 1);
                }
                None => break,
            }
        }
        word.reverse();
        word
    }

    pub fn from_word(s: usize, word: &[usize]) -> Result<Self> {
        let mut w = Permutation::identity(s);
        for &a in word {
            if a == 0 || a >= s {
                return Err(Error::InvalidPermutation(format!("generator s_{a} outside S_{s}")));
            }
            w.images.swap(a - 1, a);
        }
        Ok(w)
    }

    pub fn all(s: usize) -> Vec<Permutation> {
        (0..factorial(s)).map(|r| unrank(s, r)).collect()
    }
}

pub fn factorial(s: usize) -> usize {
    (1..=s).product()
}

/// Lehmer rank, lexicographic on one-line notation.
pub fn rank(w: &[usize]) -> usize {
    let s = w.len();
    let mut r = 0;
    for i in 0..s {
        let smaller = w[i + 1..].iter().filter(|&&x| x < w[i]).count();
        r = r * (s - i) + smaller;
    }
    r
}

pub fn unrank(s: usize, mut r: usize) -> Permutation {
    let mut digits = vec![0; s];
    for i in (0..s).rev() {
        let base = s - i;
        digits[i] = r % base;
        r /= base;
    }
    let mut pool: Vec<usize> = (1..=s).collect();
    let images = digits.into_iter().map(|d| pool.remove(d)).collect();
    Permutation { images }
}

/// Sparse integer combination of diagrams with a common `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TLElement {
    s: usize,
    terms: BTreeMap<KauffmanDiagram, BigInt>,
}

impl TLElement {
    pub fn zero(s: usize) -> Self {
        Self {
            s,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(k: KauffmanDiagram) -> Self {
        let s = k.s();
        let mut terms = BTreeMap::new();
        terms.insert(k, BigInt::one());
        Self { s, terms }
    }

    pub fn one(s: usize) -> Self {
        Self::basis(KauffmanDiagram::identity(s))
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn terms(&self) -> &BTreeMap<KauffmanDiagram, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, k: &KauffmanDiagram) -> BigInt {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: KauffmanDiagram, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, other: &TLElement) -> TLElement {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> TLElement {
        let mut out = TLElement::zero(self.s);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &TLElement) -> Result<TLElement> {
        if self.s != other.s {
            return Err(Error::InvalidDiagram("s mismatch in product".into()));
        }
        let mut out = TLElement::zero(self.s);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let (d, loops) = tl_multiply(a, b)?;
                out.add_term(d, ca * cb * BigInt::from(XI).pow(loops as u32));
            }
        }
        Ok(out)
    }

    /// `t_i - 1`.
    pub fn generator_image(s: usize, i: usize) -> Result<TLElement> {
        let mut e = TLElement::basis(KauffmanDiagram::generator(s, i)?);
        e.add_term(KauffmanDiagram::identity(s), BigInt::from(-1));
        Ok(e)
    }
}

/// Image of `w` by expanding `∏ (t_{a_i} - 1)` over a reduced word.
pub fn permutation_image(w: &Permutation) -> Result<TLElement> {
    permutation_image_from_word(w.s(), &w.reduced_word())
}

pub fn permutation_image_from_word(s: usize, word: &[usize]) -> Result<TLElement> {
    let mut acc = TLElement::one(s);
    for &a in word {
        acc = acc.mul(&TLElement::generator_image(s, a)?)?;
    }
    Ok(acc)
}

/// Every `σ(w)` for one `s`, indexed by permutation rank, with diagram
/// coefficients stored against the cached enumeration order.
pub struct FTable {
    s: usize,
    diagrams: Arc<Vec<KauffmanDiagram>>,
    index: HashMap<KauffmanDiagram, usize>,
    rows: Vec<Vec<(u32, i64)>>,
}

impl FTable {
    fn build(s: usize) -> Self {
        let ds = diagrams(s);
        let index: HashMap<KauffmanDiagram, usize> =
            ds.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();

        // right multiplication by each generator, as (target, loop factor)
        let rmul: Vec<Vec<(u32, i64)>> = ds
            .iter()
            .map(|d| {
                (1..s)
                    .map(|i| {
                        let t = KauffmanDiagram::generator(s, i).unwrap();
                        let (e, loops) = tl_multiply(d, &t).unwrap();
                        (index[&e] as u32, XI.pow(loops as u32))
                    })
                    .collect()
            })
            .collect();

        let total = factorial(s);
        let mut rows: Vec<Option<Vec<(u32, i64)>>> = vec![None; total];
        let id = Permutation::identity(s);
        rows[rank(&id.images)] = Some(vec![(index[&KauffmanDiagram::identity(s)] as u32, 1)]);
        let mut frontier = vec![id];
        let mut acc = vec![0i64; ds.len()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                let wr = rank(&w.images);
                for i in 1..s {
                    // w ∘ s_i swaps positions i, i+1
                    let mut v = w.images.clone();
                    v.swap(i - 1, i);
                    let vr = rank(&v);
                    if rows[vr].is_some() {
                        continue;
                    }
                    let parent = rows[wr].as_ref().unwrap();
                    let mut touched = Vec::with_capacity(parent.len() * 2);
                    for &(k, c) in parent {
                        let (e, f) = rmul[k as usize][i - 1];
                        for (idx, val) in [(e, c * f), (k, -c)] {
                            if acc[idx as usize] == 0 {
                                touched.push(idx);
                            }
                            acc[idx as usize] = acc[idx as usize]
                                .checked_add(val)
                                .expect("coefficient overflow");
                        }
                    }
                    touched.sort_unstable();
                    touched.dedup();
                    let mut row = Vec::with_capacity(touched.len());
                    for idx in touched {
                        let c = std::mem::take(&mut acc[idx as usize]);
                        if c != 0 {
                            row.push((idx, c));
                        }
                    }
                    rows[vr] = Some(row);
                    next.push(Permutation { images: v });
                }
            }
            frontier = next;
        }
        Self {
            s,
            diagrams: ds,
            index,
            rows: rows.into_iter().map(|r| r.unwrap()).collect(),
        }
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn diagrams(&self) -> &[KauffmanDiagram] {
        &self.diagrams
    }

    pub fn diagram_index(&self, k: &KauffmanDiagram) -> Option<usize> {
        self.index.get(k).copied()
    }

    /// Sparse `σ(w)` for the permutation of the given rank.
    pub fn row(&self, perm_rank: usize) -> &[(u32, i64)] {
        &self.rows[perm_rank]
    }

    pub fn coeff_by_rank(&self, perm_rank: usize, k: usize) -> i64 {
        self.rows[perm_rank]
            .iter()
            .find(|&&(d, _)| d as usize == k)
            .map_or(0, |&(_, c)| c)
    }
}

/// Cached table for `s`, built on first use.
pub fn f_table(s: usize) -> Result<&'static FTable> {
    static TABLES: [OnceLock<FTable>; MAX_TABLE_S + 1] = [const { OnceLock::new() }; MAX_TABLE_S + 1];
    if s == 0 || s > MAX_TABLE_S {
        return Err(Error::InvalidDiagram(format!(
            "symmetric-group tables are available for 1 <= s <= {MAX_TABLE_S}, not {s}"
        )));
    }
    Ok(TABLES[s].get_or_init(|| FTable::build(s)))
}

/// Coefficient of `k` in `σ(w)`.
pub fn f_coeff(w: &Permutation, k: &KauffmanDiagram) -> Result<i64> {
    if w.s() != k.s() {
        return Err(Error::DimensionMismatch {
            expected: format!("s = {}", k.s()),
            found: format!("s = {}", w.s()),
        });
    }
    let t = f_table(k.s())?;
    let idx = t.diagram_index(k).expect("every diagram is enumerated");
    Ok(t.coeff_by_rank(rank(&w.images), idx))
}

/// Integer rows of `m` after clearing denominators, and the total scale.
fn integer_rows(m: &RationalMatrix) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let rows = (0..m.rows())
        .map(|i| {
            let l = (0..m.cols()).fold(BigInt::one(), |acc, j| acc.lcm(m.get(i, j).denom()));
            scale *= &l;
            (0..m.cols())
                .map(|j| {
                    let e = m.get(i, j);
                    e.numer() * (&l / e.denom())
                })
                .collect()
        })
        .collect();
    (rows, scale)
}

/// `Imm_K(M)` for every diagram `K`, in the cached enumeration order:
/// `Σ_w f_K(w) ∏_i m_{i, w(i)}`.
pub fn all_immanants(m: &RationalMatrix) -> Result<Vec<Rational>> {
    if m.rows() != m.cols() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let s = m.rows();
    let t = f_table(s)?;
    let (rows, scale) = integer_rows(m);
    let mut sums = vec![BigInt::zero(); t.diagrams.len()];
    let mut images: Vec<usize> = Vec::with_capacity(s);
    let mut used = vec![false; s];
    let mut prefix = vec![BigInt::one(); s + 1];

    // depth-first over permutations, skipping zero monomial prefixes
    fn walk(
        depth: usize,
        s: usize,
        rows: &[Vec<BigInt>],
        t: &FTable,
        images: &mut Vec<usize>,
        used: &mut [bool],
        prefix: &mut [BigInt],
        sums: &mut [BigInt],
    ) {
        if depth == s {
            let r = rank(images);
            let mono = &prefix[s];
            for &(k, c) in t.row(r) {
                sums[k as usize] += mono * c;
            }
            return;
        }
        for j in 0..s {
            if used[j] || rows[depth][j].is_zero() {
                continue;
            }
            used[j] = true;
            images.push(j + 1);
            prefix[depth + 1] = &prefix[depth] * &rows[depth][j];
            walk(depth + 1, s, rows, t, images, used, prefix, sums);
            images.pop();
            used[j] = false;
        }
    }
    walk(0, s, &rows, t, &mut images, &mut used, &mut prefix, &mut sums);
    Ok(sums
        .into_iter()
        .map(|v| Rational::new(v, scale.clone()))
        .collect())
}

pub fn immanant(k: &KauffmanDiagram, m: &RationalMatrix) -> Result<Rational> {
    if m.rows() != k.s() || m.cols() != k.s() {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0}", k.s()),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    let all = all_immanants(m)?;
    let idx = f_table(k.s())?.diagram_index(k).unwrap();
    Ok(all[idx].clone())
}
