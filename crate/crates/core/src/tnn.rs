//! Seeded totally nonnegative matrices and points of the nonnegative
//! Grassmannian.
//!
//! Seed schedule: a `ChaCha8Rng` is seeded with `seed_from_u64(seed)`. Every
//! factor parameter is drawn as one `gen_range(0..den)` against the density
//! `num/den` (kept iff the draw is below `num`) followed by one
//! `gen_range(1..=12)` draw `a`, the parameter being `bound * a / 12`.
//! Skipped parameters consume the first draw only. Diagonal entries always
//! consume a single `gen_range(1..=12)` draw.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{combinations, GrassmannShape};
use crate::error::{Error, Result};
use crate::linalg::{det, format_rational, int, parse_rational, rat, PluckerTable, Rational, RationalMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub bound: Rational,
    pub density: Rational,
}

#[derive(Serialize, Deserialize)]
struct ConfigRepr {
    seed: u64,
    n: usize,
    m: usize,
    bound: String,
    density: String,
}

impl Serialize for GeneratorConfig {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ConfigRepr {
            seed: self.seed,
            n: self.n,
            m: self.m,
            bound: format_rational(&self.bound),
            density: format_rational(&self.density),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GeneratorConfig {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = ConfigRepr::deserialize(d)?;
        let bound = parse_rational(&r.bound).map_err(D::Error::custom)?;
        let density = parse_rational(&r.density).map_err(D::Error::custom)?;
        GeneratorConfig::new(r.seed, r.n, r.m, bound, density).map_err(D::Error::custom)
    }
}

impl GeneratorConfig {
    pub fn new(seed: u64, n: usize, m: usize, bound: Rational, density: Rational) -> Result<Self> {
        if !bound.is_positive() {
            return Err(Error::InvalidConfig("bound must be positive".into()));
        }
        if density.is_negative() || density > Rational::one() {
            return Err(Error::InvalidConfig("density must lie in [0, 1]".into()));
        }
        if m == 0 || m > n {
            return Err(Error::InvalidShape { m, n });
        }
        Ok(Self {
            seed,
            n,
            m,
            bound,
            density,
        })
    }

    /// Bound 3, density 1/2.
    pub fn standard(seed: u64, n: usize, m: usize) -> Result<Self> {
        Self::new(seed, n, m, int(3), rat(1, 2))
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }
}

struct ParamSource {
    rng: ChaCha8Rng,
    bound: Rational,
    num: u64,
    den: u64,
}

impl ParamSource {
    fn new(cfg: &GeneratorConfig) -> Self {
        let num = u64::try_from(cfg.density.numer()).expect("density numerator fits in u64");
        let den = u64::try_from(cfg.density.denom()).expect("density denominator fits in u64");
        Self {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            bound: cfg.bound.clone(),
            num,
            den,
        }
    }

    fn magnitude(&mut self) -> Rational {
        let a: i64 = self.rng.gen_range(1..=12);
        &self.bound * rat(a, 12)
    }

    fn factor(&mut self) -> Rational {
        if self.rng.gen_range(0..self.den) < self.num {
            self.magnitude()
        } else {
            Rational::zero()
        }
    }
}

/// Whitney product `L · D · U` of size `n`, keeping the first `m` columns.
pub fn random_tnn(cfg: &GeneratorConfig) -> RationalMatrix {
    let size = cfg.n;
    let mut src = ParamSource::new(cfg);
    let mut acc = RationalMatrix::identity(size);
    // lower factors: row i += c * row (i-1), sweeps with i descending
    for k in 1..size {
        for i in (k..size).rev() {
            let c = src.factor();
            if c.is_zero() {
                continue;
            }
            // acc * L_i(c) adds c * column i to column i-1
            for r in 0..size {
                let v = acc.get(r, i).clone();
                if !v.is_zero() {
                    let w = acc.get(r, i - 1) + &c * v;
                    acc.set(r, i - 1, w);
                }
            }
        }
    }
    for j in 0..size {
        let d = src.magnitude();
        for r in 0..size {
            let v = acc.get(r, j) * &d;
            acc.set(r, j, v);
        }
    }
    // upper factors: column i += c * column (i-1), sweeps with i ascending,
    // mirroring the lower sweeps so that all-positive parameters give TP
    for k in (1..size).rev() {
        for i in k..size {
            let c = src.factor();
            if c.is_zero() {
                continue;
            }
            for r in 0..size {
                let v = acc.get(r, i - 1).clone();
                if !v.is_zero() {
                    let w = acc.get(r, i) + &c * v;
                    acc.set(r, i, w);
                }
            }
        }
    }
    let rows: Vec<usize> = (0..cfg.n).collect();
    let cols: Vec<usize> = (0..cfg.m).collect();
    acc.select(&rows, &cols)
}

/// `q^{(j-k)^2}`: a rational stand-in for the Gaussian kernel.
pub fn gaussian_like_tp(size: usize, q: &Rational) -> Result<RationalMatrix> {
    if !q.is_positive() || *q >= Rational::one() {
        return Err(Error::InvalidConfig("kernel parameter must lie in (0, 1)".into()));
    }
    Ok(RationalMatrix::from_fn(size, size, |j, k| {
        let e = j.abs_diff(k).pow(2);
        (0..e).fold(Rational::one(), |acc, _| acc * q)
    }))
}

pub fn default_q() -> Rational {
    rat(1, 2)
}

/// Left multiplication by the kernel; pushes a nonnegative point into the
/// positive part.
pub fn tp_perturb(x: &RationalMatrix, q: &Rational) -> Result<RationalMatrix> {
    gaussian_like_tp(x.rows(), q)?.mul(x)
}

/// Every square minor is nonnegative. Exponential; meant for small sizes.
pub fn is_tnn(m: &RationalMatrix) -> bool {
    for k in 1..=m.rows().min(m.cols()) {
        let rs = combinations(m.rows(), k);
        let cs = combinations(m.cols(), k);
        for r in &rs {
            let r0: Vec<usize> = r.iter().map(|x| x - 1).collect();
            for c in &cs {
                let c0: Vec<usize> = c.iter().map(|x| x - 1).collect();
                if det(&m.select(&r0, &c0)).unwrap().is_negative() {
                    return false;
                }
            }
        }
    }
    true
}

pub fn is_tp(m: &RationalMatrix) -> bool {
    for k in 1..=m.rows().min(m.cols()) {
        for r in &combinations(m.rows(), k) {
            let r0: Vec<usize> = r.iter().map(|x| x - 1).collect();
            for c in &combinations(m.cols(), k) {
                let c0: Vec<usize> = c.iter().map(|x| x - 1).collect();
                if !det(&m.select(&r0, &c0)).unwrap().is_positive() {
                    return false;
                }
            }
        }
    }
    true
}

/// All maximal minors of an `(m+n) x m` point are nonnegative.
pub fn is_nonnegative_point(x: &RationalMatrix, shape: GrassmannShape) -> Result<bool> {
    Ok(PluckerTable::new(x, shape)?.all_nonnegative())
}

/// Row `b` overwritten by row `a` (1-based).
pub fn duplicated_row_point(x: &RationalMatrix, a: usize, b: usize) -> Result<RationalMatrix> {
    for (what, v) in [("row", a), ("row", b)] {
        if v == 0 || v > x.rows() {
            return Err(Error::IndexOutOfRange {
                what,
                index: v,
                bound: x.rows(),
            });
        }
    }
    let mut out = x.clone();
    for j in 0..x.cols() {
        out.set(b - 1, j, x.get(a - 1, j).clone());
    }
    Ok(out)
}

/// A point whose sorted coordinate at `σ(I)` equals the coordinate of `x` at `I`.
pub fn shift_point(x: &RationalMatrix) -> RationalMatrix {
    let n = x.rows();
    let m = x.cols();
    let sign = if m % 2 == 1 { int(1) } else { int(-1) };
    RationalMatrix::from_fn(n, m, |i, j| {
        if i == 0 {
            x.get(n - 1, j) * &sign
        } else {
            x.get(i - 1, j).clone()
        }
    })
}

/// A point whose sorted coordinate at `ρ(I)` equals the coordinate of `x` at `I`.
pub fn reflect_point(x: &RationalMatrix) -> RationalMatrix {
    let n = x.rows();
    let m = x.cols();
    let flip = (m * (m.saturating_sub(1)) / 2) % 2 == 1;
    RationalMatrix::from_fn(n, m, |i, j| {
        let v = x.get(n - 1 - i, j).clone();
        if flip && j == 0 {
            -v
        } else {
            v
        }
    })
}
