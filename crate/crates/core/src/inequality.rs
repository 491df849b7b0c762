//! Oscillating partial sums of a long Plücker relation: construction, exact
//! evaluation, diagram certificates, the generalized Laplace family,
//! verification sweeps and counterexample search.

use std::collections::{BTreeMap, HashMap};

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    cyclic_shift_tuple, exchange_with_layout, is_weakly_separated, layout, reflect_tuple,
    tuple_sign, validate_layout, GrassmannShape, IndexTuple, SymDiffLayout,
};
use crate::error::{Error, Result};
use crate::linalg::{embed, format_rational, plucker, PluckerTable, Rational, RationalMatrix};
use crate::tl::prematch::{compatible_immanants, generalized_indices};
use crate::tl::{all_immanants, compatible_set, generalized_submatrix, KauffmanDiagram};
use crate::tnn::{default_q, duplicated_row_point, random_tnn, reflect_point, shift_point, tp_perturb, GeneratorConfig};

/// A signed sum `Σ c · Δ_I Δ_J` over ordered tuples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub terms: Vec<(i64, IndexTuple, IndexTuple)>,
}

pub type Coefficients = BTreeMap<KauffmanDiagram, i64>;

fn phi_cached<'a>(
    cache: &'a mut HashMap<(Vec<usize>, Vec<usize>), Vec<KauffmanDiagram>>,
    i: &IndexTuple,
    j: &IndexTuple,
) -> Result<&'a Vec<KauffmanDiagram>> {
    let key = (i.sorted().entries().to_vec(), j.sorted().entries().to_vec());
    if !cache.contains_key(&key) {
        let phi = compatible_set(i, j)?;
        cache.insert(key.clone(), phi);
    }
    Ok(&cache[&key])
}

impl QuadraticForm {
    pub fn evaluate(&self, table: &PluckerTable) -> Rational {
        let mut acc = Rational::zero();
        for (c, i, j) in &self.terms {
            if *c != 0 {
                acc += table.get(i) * table.get(j) * Rational::from_integer((*c).into());
            }
        }
        acc
    }

    /// Checks that every product shares one generalized submatrix.
    pub fn check_homogeneous(&self) -> Result<()> {
        let mut first: Option<(Vec<usize>, Vec<usize>)> = None;
        for (_, i, j) in &self.terms {
            let idx = generalized_indices(i, j)?;
            match &first {
                None => first = Some(idx),
                Some(f) if *f != idx => {
                    return Err(Error::DimensionMismatch {
                        expected: format!("generalized indices {f:?}"),
                        found: format!("{idx:?}"),
                    })
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Integer diagram coefficients: the form equals `Σ d_K Imm_K` of the
    /// shared generalized submatrix.
    pub fn coefficients(&self) -> Result<Coefficients> {
        self.check_homogeneous()?;
        let mut cache = HashMap::new();
        let mut out = Coefficients::new();
        for (c, i, j) in &self.terms {
            let sign = *c * (tuple_sign(i) * tuple_sign(j)) as i64;
            for k in phi_cached(&mut cache, i, j)? {
                *out.entry(k.clone()).or_insert(0) += sign;
            }
        }
        out.retain(|_, v| *v != 0);
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSpec {
    pub k: usize,
    pub i: IndexTuple,
    pub j: IndexTuple,
    pub subtract_base: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalitySystem {
    pub i: IndexTuple,
    pub j: IndexTuple,
    pub layout: SymDiffLayout,
    pub r: usize,
    pub terms: Vec<TermSpec>,
    /// `sgn(I_{l,r}) sgn(J_{l,r})` for `l = 1..=η`.
    pub signs: Vec<i32>,
}

pub fn build_system(i: &IndexTuple, j: &IndexTuple, r: usize) -> Result<InequalitySystem> {
    let lay = layout(i, j)?;
    build_system_with_layout(i, j, lay, r)
}

/// Same construction with a caller-chosen ordering of the two differences.
pub fn build_system_with_layout(
    i: &IndexTuple,
    j: &IndexTuple,
    lay: SymDiffLayout,
    r: usize,
) -> Result<InequalitySystem> {
    validate_layout(i, j, &lay)?;
    let eta = lay.eta;
    if eta == 0 {
        return Err(Error::EmptySymmetricDifference);
    }
    if r == 0 || r > eta {
        return Err(Error::IndexOutOfRange {
            what: "r",
            index: r,
            bound: eta,
        });
    }
    let mut terms = Vec::with_capacity(eta);
    let mut signs = Vec::with_capacity(eta);
    for k in 1..=eta {
        let (ik, jk) = exchange_with_layout(i, j, &lay, k, r)?;
        signs.push(tuple_sign(&ik) * tuple_sign(&jk));
        terms.push(TermSpec {
            k,
            i: ik,
            j: jk,
            subtract_base: k == eta - r + 1,
        });
    }
    Ok(InequalitySystem {
        i: i.clone(),
        j: j.clone(),
        layout: lay,
        r,
        terms,
        signs,
    })
}

impl InequalitySystem {
    pub fn eta(&self) -> usize {
        self.layout.eta
    }

    pub fn shape(&self) -> GrassmannShape {
        self.i.shape()
    }

    pub fn base_index(&self) -> usize {
        self.eta() - self.r + 1
    }

    /// `sgn(I_{l,r}) sgn(J_{l,r}) Σ_{k ≤ l} Π_{k,r}` as a form.
    pub fn partial_sum(&self, l: usize) -> Result<QuadraticForm> {
        if l == 0 || l > self.eta() {
            return Err(Error::IndexOutOfRange {
                what: "l",
                index: l,
                bound: self.eta(),
            });
        }
        let s = self.signs[l - 1] as i64;
        let mut terms = Vec::new();
        for t in &self.terms[..l] {
            terms.push((s, t.i.clone(), t.j.clone()));
            if t.subtract_base {
                terms.push((-s, self.i.clone(), self.j.clone()));
            }
        }
        Ok(QuadraticForm { terms })
    }

    pub fn evaluate_table(&self, table: &PluckerTable) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.eta());
        let base = table.get(&self.i) * table.get(&self.j);
        let mut acc = Rational::zero();
        for (t, &s) in self.terms.iter().zip(&self.signs) {
            acc += table.get(&t.i) * table.get(&t.j);
            if t.subtract_base {
                acc -= &base;
            }
            out.push(if s < 0 { -acc.clone() } else { acc.clone() });
        }
        out
    }

    /// `(-1)^l (Σ_{k ≤ l} (-1)^k Δ↑Δ↑ + (-1)^{η-r} Δ_I↑ Δ_J↑)` for
    /// `l ≥ η - r + 1`, the sorted-tuple display of the same inequalities.
    pub fn sorted_display_values(&self, table: &PluckerTable) -> Vec<Option<Rational>> {
        let eta = self.eta();
        let base = table.get(&self.i.sorted()) * table.get(&self.j.sorted());
        let mut out = Vec::with_capacity(eta);
        let mut acc = Rational::zero();
        for (idx, t) in self.terms.iter().enumerate() {
            let l = idx + 1;
            let p = table.get(&t.i.sorted()) * table.get(&t.j.sorted());
            if l % 2 == 0 {
                acc += p;
            } else {
                acc -= p;
            }
            if l < self.base_index() {
                out.push(None);
                continue;
            }
            let mut v = acc.clone();
            if (eta - self.r) % 2 == 0 {
                v += &base;
            } else {
                v -= &base;
            }
            out.push(Some(if l % 2 == 0 { v } else { -v }));
        }
        out
    }
}

pub fn evaluate_system(sys: &InequalitySystem, x: &RationalMatrix) -> Result<Vec<Rational>> {
    let table = PluckerTable::new(x, sys.shape())?;
    Ok(sys.evaluate_table(&table))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub l: usize,
    pub r: usize,
    pub coefficients: Coefficients,
}

impl Certificate {
    pub fn is_nonnegative(&self) -> bool {
        self.coefficients.values().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn negative_entries(&self) -> Vec<(&KauffmanDiagram, i64)> {
        self.coefficients
            .iter()
            .filter(|(_, &c)| c < 0)
            .map(|(k, &c)| (k, c))
            .collect()
    }

    pub fn coefficients_by_label(&self) -> BTreeMap<String, i64> {
        self.coefficients
            .iter()
            .map(|(k, &c)| (k.to_string(), c))
            .collect()
    }
}

/// Certificates for every `l`, sharing one compatible-set computation per term.
pub fn certify_all(sys: &InequalitySystem) -> Result<Vec<Certificate>> {
    let mut cache = HashMap::new();
    let base: Vec<KauffmanDiagram> = phi_cached(&mut cache, &sys.i, &sys.j)?.clone();
    let base_sign = (tuple_sign(&sys.i) * tuple_sign(&sys.j)) as i64;
    let mut running = Coefficients::new();
    let mut out = Vec::with_capacity(sys.eta());
    for (idx, t) in sys.terms.iter().enumerate() {
        let sign = (tuple_sign(&t.i) * tuple_sign(&t.j)) as i64;
        for k in phi_cached(&mut cache, &t.i, &t.j)? {
            *running.entry(k.clone()).or_insert(0) += sign;
        }
        if t.subtract_base {
            for k in &base {
                *running.entry(k.clone()).or_insert(0) -= base_sign;
            }
        }
        let s = sys.signs[idx] as i64;
        let coefficients: Coefficients = running
            .iter()
            .filter(|(_, &v)| v != 0)
            .map(|(k, &v)| (k.clone(), s * v))
            .collect();
        out.push(Certificate {
            l: idx + 1,
            r: sys.r,
            coefficients,
        });
    }
    Ok(out)
}

pub fn certify(sys: &InequalitySystem, l: usize) -> Result<Certificate> {
    if l == 0 || l > sys.eta() {
        return Err(Error::IndexOutOfRange {
            what: "l",
            index: l,
            bound: sys.eta(),
        });
    }
    Ok(certify_all(sys)?.swap_remove(l - 1))
}

/// `Σ d_K Imm_K(X_{M,M'})` for an `n x m` matrix `x`.
pub fn certificate_value(sys: &InequalitySystem, cert: &Certificate, x: &RationalMatrix) -> Result<Rational> {
    let sub = generalized_submatrix(x, &sys.i, &sys.j)?;
    let imms = all_immanants(&sub)?;
    let ks: Vec<KauffmanDiagram> = cert.coefficients.keys().cloned().collect();
    let vals = compatible_immanants(&ks, &imms, sub.rows())?;
    Ok(vals
        .into_iter()
        .map(|(k, v)| v * Rational::from_integer(cert.coefficients[&k].into()))
        .sum())
}

/// The full signed sum vanishes on every supplied point and its diagram
/// vector is zero.
pub fn long_plucker_check(i: &IndexTuple, j: &IndexTuple, r: usize, points: &[RationalMatrix]) -> Result<bool> {
    let sys = build_system(i, j, r)?;
    let eta = sys.eta();
    for x in points {
        if !evaluate_system(&sys, x)?[eta - 1].is_zero() {
            return Ok(false);
        }
    }
    Ok(certify(&sys, eta)?.is_zero())
}

/// How a Laplace term index maps into the exchange indexing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaplaceOffset {
    pub k: usize,
    /// `None` for the base term `k = 0`.
    pub exchange_k: Option<usize>,
    pub r: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaplaceSystem {
    pub n: usize,
    pub d: usize,
    /// `(I(d,k), I(d,k)^c)` for `k = 0..=n`, both sorted.
    pub terms: Vec<(IndexTuple, IndexTuple)>,
    pub offsets: Vec<LaplaceOffset>,
}

/// `I(d,k) = [1,d] ∪ [n+d+2,2n] ∪ {n+d+1-k}`.
pub fn laplace_index(n: usize, d: usize, k: usize) -> Result<IndexTuple> {
    if d == 0 || d >= n {
        return Err(Error::IndexOutOfRange {
            what: "d",
            index: d,
            bound: n.saturating_sub(1),
        });
    }
    if k > n {
        return Err(Error::IndexOutOfRange {
            what: "k",
            index: k,
            bound: n,
        });
    }
    let mut e: Vec<usize> = (1..=d).chain(n + d + 2..=2 * n).collect();
    e.push(n + d + 1 - k);
    e.sort_unstable();
    IndexTuple::from_slice(n, n, &e)
}

pub fn generalized_laplace_system(n: usize, d: usize) -> Result<LaplaceSystem> {
    let mut terms = Vec::with_capacity(n + 1);
    let mut offsets = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let i = laplace_index(n, d, k)?;
        let c = i.complement()?;
        terms.push((i, c));
        offsets.push(LaplaceOffset {
            k,
            exchange_k: if k == 0 { None } else { Some(n + 1 - k) },
            r: 1,
        });
    }
    Ok(LaplaceSystem {
        n,
        d,
        terms,
        offsets,
    })
}

impl LaplaceSystem {
    /// `(-1)^l Σ_{k ≤ l} (-1)^k Δ_{I(d,k)} Δ_{I(d,k)^c}`.
    pub fn row(&self, l: usize) -> Result<QuadraticForm> {
        if l > self.n {
            return Err(Error::IndexOutOfRange {
                what: "l",
                index: l,
                bound: self.n,
            });
        }
        Ok(QuadraticForm {
            terms: (0..=l)
                .map(|k| {
                    let s = if (l + k) % 2 == 0 { 1 } else { -1 };
                    (s, self.terms[k].0.clone(), self.terms[k].1.clone())
                })
                .collect(),
        })
    }

    pub fn evaluate(&self, table: &PluckerTable) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.n + 1);
        let mut acc = Rational::zero();
        for (k, (i, c)) in self.terms.iter().enumerate() {
            let p = table.get(i) * table.get(c);
            if k % 2 == 0 {
                acc += p;
            } else {
                acc -= p;
            }
            out.push(if k % 2 == 0 { acc.clone() } else { -acc.clone() });
        }
        out
    }

    /// Same rows, computing only the `2n + 2` coordinates involved.
    pub fn evaluate_point(&self, x: &RationalMatrix) -> Result<Vec<Rational>> {
        let mut out = Vec::with_capacity(self.n + 1);
        let mut acc = Rational::zero();
        for (k, (i, c)) in self.terms.iter().enumerate() {
            let p = plucker(x, i)? * plucker(x, c)?;
            if k % 2 == 0 {
                acc += p;
            } else {
                acc -= p;
            }
            out.push(if k % 2 == 0 { acc.clone() } else { -acc.clone() });
        }
        Ok(out)
    }

    pub fn certificates(&self) -> Result<Vec<Coefficients>> {
        (0..=self.n).map(|l| self.row(l)?.coefficients()).collect()
    }

    /// The same relation in exchange form: base `I(d,0)`, `r = 1`.
    pub fn exchange_system(&self) -> Result<InequalitySystem> {
        build_system(&self.terms[0].0, &self.terms[0].1, 1)
    }

    /// Pairs after `σ^{2n-d}` and then `ρ`.
    pub fn shifted_terms(&self) -> Vec<(IndexTuple, IndexTuple)> {
        let t = (2 * self.n - self.d) as i64;
        self.terms
            .iter()
            .map(|(i, c)| {
                (
                    reflect_tuple(&cyclic_shift_tuple(i, t)).sorted(),
                    reflect_tuple(&cyclic_shift_tuple(c, t)).sorted(),
                )
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationWitness {
    /// `(m+n) x m` point with every maximal minor nonnegative.
    pub x: RationalMatrix,
    pub l: usize,
    pub r: usize,
    #[serde(with = "rational_string")]
    pub value: Rational,
    pub strategy: String,
    pub seed: u64,
    pub attempts: usize,
}

mod rational_string {
    use super::*;
    pub fn serialize<S: serde::Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(v))
    }
    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        use serde::de::Error as _;
        let s = String::deserialize(d)?;
        crate::linalg::parse_rational(&s).map_err(D::Error::custom)
    }
}

impl ViolationWitness {
    /// The `n x m` matrix when the point is in embedded form.
    pub fn matrix_form(&self, shape: GrassmannShape) -> Option<RationalMatrix> {
        let (m, n) = (shape.m(), shape.n());
        let rows: Vec<usize> = (0..n).collect();
        let cols: Vec<usize> = (0..m).collect();
        let a = self.x.select(&rows, &cols);
        (embed(&a).ok()? == self.x).then_some(a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Nonnegative diagram certificate.
    Certified,
    /// Negative certificate entry, no sample went negative.
    CertificateNegative,
    /// An exact witness point went negative.
    Violated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LrResult {
    pub l: usize,
    pub r: usize,
    pub status: Status,
    pub certified: bool,
    pub coefficients: BTreeMap<String, i64>,
    pub min_value: Option<String>,
    pub witness: Option<ViolationWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairInfo {
    #[serde(rename = "I")]
    pub i: IndexTuple,
    #[serde(rename = "J")]
    pub j: IndexTuple,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub pair: PairInfo,
    pub ws: bool,
    pub eta: usize,
    pub samples: usize,
    pub seed: u64,
    pub holds: bool,
    pub results: Vec<LrResult>,
}

/// Sample `t` of the verification ladder: `embed(random_tnn(seed + t))`,
/// pushed into the positive part for odd `t`.
pub fn sample_point(cfg: &GeneratorConfig, t: u64) -> Result<RationalMatrix> {
    let a = random_tnn(&cfg.with_seed(cfg.seed.wrapping_add(t)));
    let x = embed(&a)?;
    if t % 2 == 1 {
        tp_perturb(&x, &default_q())
    } else {
        Ok(x)
    }
}

pub fn all_systems(i: &IndexTuple, j: &IndexTuple) -> Result<Vec<InequalitySystem>> {
    let eta = layout(i, j)?.eta;
    (1..=eta).map(|r| build_system(i, j, r)).collect()
}

pub fn verify_pair(i: &IndexTuple, j: &IndexTuple, samples: usize, cfg: &GeneratorConfig) -> Result<VerifyReport> {
    let ws = is_weakly_separated(i, j)?;
    let shape = i.shape();
    if cfg.n != shape.n() || cfg.m != shape.m() {
        return Err(Error::InvalidConfig(format!(
            "generator shape {}x{} does not match the pair's n x m = {}x{}",
            cfg.n,
            cfg.m,
            shape.n(),
            shape.m()
        )));
    }
    let pair = PairInfo {
        i: i.clone(),
        j: j.clone(),
    };
    let eta = match layout(i, j) {
        Ok(l) => l.eta,
        Err(Error::EmptySymmetricDifference) => {
            return Ok(VerifyReport {
                pair,
                ws,
                eta: 0,
                samples,
                seed: cfg.seed,
                holds: true,
                results: vec![],
            })
        }
        Err(e) => return Err(e),
    };
    let systems = all_systems(i, j)?;
    let certs: Vec<Vec<Certificate>> = systems.iter().map(certify_all).collect::<Result<_>>()?;

    // per sample: values[r-1][l-1]
    let evaluated: Vec<(u64, RationalMatrix, Vec<Vec<Rational>>)> = (0..samples as u64)
        .into_par_iter()
        .map(|t| {
            let x = sample_point(cfg, t)?;
            let table = PluckerTable::new(&x, shape)?;
            let vals = systems.iter().map(|s| s.evaluate_table(&table)).collect();
            Ok((t, x, vals))
        })
        .collect::<Result<_>>()?;

    let mut results = Vec::new();
    let mut holds = true;
    for (ri, sys) in systems.iter().enumerate() {
        for li in 0..eta {
            let cert = &certs[ri][li];
            let mut min: Option<Rational> = None;
            let mut witness = None;
            for (t, x, vals) in &evaluated {
                let v = &vals[ri][li];
                if min.as_ref().is_none_or(|m| v < m) {
                    min = Some(v.clone());
                }
                if witness.is_none() && v.is_negative() {
                    witness = Some(ViolationWitness {
                        x: x.clone(),
                        l: li + 1,
                        r: sys.r,
                        value: v.clone(),
                        strategy: "verification-sample".into(),
                        seed: cfg.seed.wrapping_add(*t),
                        attempts: *t as usize + 1,
                    });
                }
            }
            let certified = cert.is_nonnegative();
            let status = if witness.is_some() {
                Status::Violated
            } else if certified {
                Status::Certified
            } else {
                Status::CertificateNegative
            };
            holds &= status == Status::Certified;
            results.push(LrResult {
                l: li + 1,
                r: sys.r,
                status,
                certified,
                coefficients: cert.coefficients_by_label(),
                min_value: min.as_ref().map(format_rational),
                witness,
            });
        }
    }
    Ok(VerifyReport {
        pair,
        ws,
        eta,
        samples,
        seed: cfg.seed,
        holds,
        results,
    })
}

/// Candidate points for round `t` of the search ladder, each tagged with the
/// strategy that produced it.
fn search_round(
    cfg: &GeneratorConfig,
    t: u64,
    lay: &SymDiffLayout,
) -> Result<Vec<(&'static str, RationalMatrix)>> {
    const DENSITIES: [(i64, i64); 4] = [(1, 1), (1, 2), (1, 3), (2, 3)];
    let (p, q) = DENSITIES[(t % 4) as usize];
    let c = GeneratorConfig::new(
        cfg.seed.wrapping_add(t),
        cfg.n,
        cfg.m,
        cfg.bound.clone(),
        crate::linalg::rat(p, q),
    )?;
    let base = embed(&random_tnn(&c))?;
    let positive = tp_perturb(&base, &default_q())?;
    let mut out = vec![("tp-sample", positive.clone()), ("tnn-sample", base.clone())];
    // collapse one element of I \ J onto one of J \ I
    for &a in &lay.i_seq {
        for &b in &lay.j_seq {
            out.push(("duplicated-rows", duplicated_row_point(&positive, a, b)?));
            out.push(("duplicated-rows", duplicated_row_point(&positive, b, a)?));
        }
    }
    // symmetric images of the sparse sample
    let mut y = base;
    for _ in 1..cfg.n + cfg.m {
        y = shift_point(&y);
        out.push(("orbit-sample", y.clone()));
    }
    out.push(("orbit-sample", reflect_point(&y)));
    Ok(out)
}

/// Looks for an exact point of the nonnegative Grassmannian on which some
/// signed partial sum is negative. Weakly separated pairs return `None`.
pub fn search_counterexample(
    i: &IndexTuple,
    j: &IndexTuple,
    budget: usize,
    cfg: &GeneratorConfig,
) -> Result<Option<ViolationWitness>> {
    if is_weakly_separated(i, j)? {
        return Ok(None);
    }
    let shape = i.shape();
    let lay = layout(i, j)?;
    let systems = all_systems(i, j)?;
    // certificate scan: systems with a negative entry are tried first
    let mut order: Vec<(usize, usize)> = Vec::new();
    let mut rest = Vec::new();
    for (ri, sys) in systems.iter().enumerate() {
        for cert in certify_all(sys)? {
            if cert.is_nonnegative() {
                rest.push((ri, cert.l));
            } else {
                order.push((ri, cert.l));
            }
        }
    }
    order.extend(rest);

    let mut attempts = 0usize;
    let mut t = 0u64;
    while attempts < budget {
        for (strategy, x) in search_round(cfg, t, &lay)? {
            if attempts >= budget {
                break;
            }
            attempts += 1;
            let table = PluckerTable::new(&x, shape)?;
            if !table.all_nonnegative() {
                continue;
            }
            let values: Vec<Vec<Rational>> = systems.iter().map(|s| s.evaluate_table(&table)).collect();
            for &(ri, l) in &order {
                let v = &values[ri][l - 1];
                if v.is_negative() {
                    return Ok(Some(ViolationWitness {
                        x,
                        l,
                        r: systems[ri].r,
                        value: v.clone(),
                        strategy: strategy.into(),
                        seed: cfg.seed.wrapping_add(t),
                        attempts,
                    }));
                }
            }
        }
        t += 1;
    }
    Err(Error::BudgetExhausted { budget })
}
