//! Brute-force ground truth: exhaustive enumeration, exact rational
//! partition functions, exact distributions, and statistical validation of
//! the samplers. No floating point enters any exact computation here.

use crate::geometry::{faces_of_rank, Face};
use crate::tiling::{Domino, KTiling, Orientation, Tiling, WeightConfig};
use crate::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

pub const DEFAULT_TILING_CAP: u32 = 4;
pub const DEFAULT_KTILING_CAP: u64 = 1 << 16;

// --- dense polynomials in t over the rationals -------------------------------

/// A polynomial in t with rational coefficients, coeffs[e] on t^e.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TPoly {
    coeffs: Vec<BigRational>,
}

impl TPoly {
    pub fn zero() -> Self {
        TPoly { coeffs: Vec::new() }
    }

    pub fn monomial(coeff: BigRational, exp: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); exp + 1];
        coeffs[exp] = coeff;
        TPoly { coeffs }.trimmed()
    }

    pub fn constant(c: BigRational) -> Self {
        TPoly::monomial(c, 0)
    }

    pub fn one() -> Self {
        TPoly::constant(BigRational::one())
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn add(&self, other: &TPoly) -> TPoly {
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len().max(other.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        TPoly { coeffs }.trimmed()
    }

    pub fn mul(&self, other: &TPoly) -> TPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return TPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        TPoly { coeffs }.trimmed()
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }
}

impl std::fmt::Display for TPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| match e {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{e}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

// --- exact weight configuration ----------------------------------------------

/// Exact-rational weights for the oracle; mirror of `WeightConfig`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactWeights {
    pub c: Vec<BigRational>,
    pub b: Vec<BigRational>,
    pub t: BigRational,
}

impl ExactWeights {
    pub fn new(c: Vec<BigRational>, b: Vec<BigRational>, t: BigRational) -> Result<Self> {
        if c.iter().chain(b.iter()).any(|x| !x.is_positive()) {
            return Err(Error::config("all c_i and b_i must be positive"));
        }
        if t.is_negative() {
            return Err(Error::config("t must be >= 0"));
        }
        Ok(ExactWeights { c, b, t })
    }

    pub fn uniform(n: u32, t: BigRational) -> Result<Self> {
        ExactWeights::new(
            vec![BigRational::one(); n as usize],
            vec![BigRational::one(); n as usize],
            t,
        )
    }

    /// The fixed nonuniform assignment used by the acceptance suite:
    /// c = (2, 3, 5, ...), b = (7, 11, 13, ...) truncated to length n.
    pub fn nonuniform_primes(n: u32, t: BigRational) -> Result<Self> {
        let primes = [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
        let c = (0..n as usize)
            .map(|i| BigRational::from_integer(primes[i].into()))
            .collect();
        let b = (0..n as usize)
            .map(|i| BigRational::from_integer(primes[i + 3].into()))
            .collect();
        ExactWeights::new(c, b, t)
    }

    pub fn c(&self, i: u32) -> &BigRational {
        &self.c[(i - 1) as usize]
    }

    pub fn b(&self, i: u32) -> &BigRational {
        &self.b[(i - 1) as usize]
    }

    pub fn to_float(&self) -> Result<WeightConfig> {
        let f = |x: &BigRational| x.to_f64().unwrap_or(f64::NAN);
        WeightConfig::new(
            self.c.iter().map(f).collect(),
            self.b.iter().map(f).collect(),
            f(&self.t),
        )
    }
}

/// Parse "a/b", an integer, or a finite decimal into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = |_| Error::Parse(format!("not a rational: {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(bad)?;
        let d: BigInt = den.trim().parse().map_err(bad)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator: {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let int_part = if int.is_empty() || int == "-" { "0" } else { int };
        let n: BigInt = int_part.parse().map_err(bad)?;
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("not a rational: {s:?}")));
        }
        let f: BigInt = frac.parse().map_err(bad)?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = BigRational::new(f, scale);
        let whole = BigRational::from_integer(n);
        return Ok(if s.starts_with('-') { whole - frac_part } else { whole + frac_part });
    }
    let n: BigInt = s.parse().map_err(bad)?;
    Ok(BigRational::from_integer(n))
}

// --- enumeration --------------------------------------------------------------

/// All tilings of the rank-`n` diamond by recursive exact cover in raster
/// scan order; count is 2^(n(n+1)/2).
pub fn enumerate_tilings(n: u32) -> Result<Vec<Tiling>> {
    enumerate_tilings_capped(n, DEFAULT_TILING_CAP)
}

pub fn enumerate_tilings_capped(n: u32, cap: u32) -> Result<Vec<Tiling>> {
    if n > cap {
        return Err(Error::config(format!("rank {n} exceeds the enumeration cap {cap}")));
    }
    let faces = faces_of_rank(n);
    let index: BTreeMap<Face, usize> =
        faces.iter().copied().enumerate().map(|(i, f)| (f, i)).collect();
    let mut covered = vec![false; faces.len()];
    let mut current: Vec<Domino> = Vec::new();
    let mut out = Vec::new();
    fn rec(
        n: u32,
        faces: &[Face],
        index: &BTreeMap<Face, usize>,
        covered: &mut Vec<bool>,
        current: &mut Vec<Domino>,
        from: usize,
        out: &mut Vec<Tiling>,
    ) {
        let mut first = from;
        while first < faces.len() && covered[first] {
            first += 1;
        }
        if first == faces.len() {
            out.push(Tiling::new(n, current.clone()));
            return;
        }
        let f = faces[first];
        covered[first] = true;
        for orient in [Orientation::Horizontal, Orientation::Vertical] {
            let partner = match orient {
                Orientation::Horizontal => f.east(),
                Orientation::Vertical => f.north(),
            };
            if let Some(&pi) = index.get(&partner) {
                if !covered[pi] {
                    covered[pi] = true;
                    current.push(Domino { anchor: f, orient });
                    rec(n, faces, index, covered, current, first + 1, out);
                    current.pop();
                    covered[pi] = false;
                }
            }
        }
        covered[first] = false;
    }
    rec(n, &faces, &index, &mut covered, &mut current, 0, &mut out);
    Ok(out)
}

/// Cartesian product of the per-color enumerations.
pub fn enumerate_ktilings(n: u32, k: u32) -> Result<Vec<KTiling>> {
    enumerate_ktilings_capped(n, k, DEFAULT_KTILING_CAP)
}

pub fn enumerate_ktilings_capped(n: u32, k: u32, cap: u64) -> Result<Vec<KTiling>> {
    if k == 0 {
        return Err(Error::config("k must be at least 1"));
    }
    let singles = enumerate_tilings_capped(n, u32::MAX)?;
    let total = (singles.len() as u64)
        .checked_pow(k)
        .filter(|&c| c <= cap)
        .ok_or_else(|| {
            Error::config(format!("{}^{} k-tilings exceed the cap {}", singles.len(), k, cap))
        })?;
    let mut out = Vec::with_capacity(total as usize);
    let mut choice = vec![0usize; k as usize];
    loop {
        let colors: Vec<Tiling> = choice.iter().map(|&c| singles[c].clone()).collect();
        out.push(KTiling::new(n, colors)?);
        // Odometer increment over the color choices.
        let mut pos = k as usize;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < singles.len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

// --- exact weights of k-tilings ------------------------------------------------

/// The exact weight of one k-tiling as a monomial: (prefactor, t-power).
pub fn ktiling_monomial(kt: &KTiling, w: &ExactWeights) -> Result<(BigRational, u64)> {
    let n = kt.rank();
    let mut pre = BigRational::one();
    for t in kt.colors() {
        for dom in t.dominoes() {
            if dom.orient == Orientation::Horizontal {
                let d = crate::geometry::diagonal(dom.anchor, n)?.0;
                if d == 0 {
                    return Err(Error::invariant("horizontal domino on diagonal 0"));
                }
                pre *= if d % 2 == 1 { w.c(d.div_ceil(2)) } else { w.b(n - d / 2 + 1) };
            }
        }
    }
    Ok((pre, kt.total_interactions()?))
}

/// An exact weight: its rational value at t, and the t-monomial it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactWeight {
    pub value: BigRational,
    pub poly: TPoly,
}

/// Exact normalized law of the rank-n k-tilings for weights `w`.
#[derive(Debug, Clone)]
pub struct ExactDistribution {
    pub rank: u32,
    pub colors: u32,
    pub t: BigRational,
    pub entries: Vec<(KTiling, ExactWeight)>,
    pub z: BigRational,
}

pub type KTilingKey = Vec<Vec<(i32, i32, Orientation)>>;

impl ExactDistribution {
    pub fn probability_map(&self) -> BTreeMap<KTilingKey, BigRational> {
        self.entries
            .iter()
            .map(|(kt, w)| (kt.canonical_key(), &w.value / &self.z))
            .collect()
    }
}

/// Sum of the k-tiling weights as a polynomial in t, by full enumeration.
pub fn exact_z_poly(n: u32, k: u32, w: &ExactWeights) -> Result<TPoly> {
    let mut z = TPoly::zero();
    for kt in enumerate_ktilings(n, k)? {
        let (pre, e) = ktiling_monomial(&kt, w)?;
        z = z.add(&TPoly::monomial(pre, e as usize));
    }
    Ok(z)
}

/// The closed product form: prod_{l=0}^{k-1} prod_{1<=i<=j<=N}
/// (1 + c_i b_{N-j+1} t^l), as a polynomial in t.
pub fn product_formula_poly(n: u32, k: u32, w: &ExactWeights) -> TPoly {
    let mut z = TPoly::one();
    for l in 0..k as usize {
        for i in 1..=n {
            for j in i..=n {
                let factor = TPoly::one().add(&TPoly::monomial(w.c(i) * w.b(n - j + 1), l));
                z = z.mul(&factor);
            }
        }
    }
    z
}

/// Enumerated partition function at the weights' own t. Hard-fails if the
/// enumerated sum does not match the closed product form.
pub fn exact_z(n: u32, k: u32, w: &ExactWeights) -> Result<BigRational> {
    let z = exact_z_poly(n, k, w)?;
    let formula = product_formula_poly(n, k, w);
    if z != formula {
        return Err(Error::invariant(format!(
            "partition function mismatch at rank {n}, k = {k}: enumerated {z} vs product formula {formula}"
        )));
    }
    Ok(z.eval(&w.t))
}

/// The exact normalized law at the weights' t. Zero-weight entries are kept
/// so that the support restriction (t = 0) is explicit.
pub fn exact_distribution(n: u32, k: u32, w: &ExactWeights) -> Result<ExactDistribution> {
    let mut entries = Vec::new();
    let mut z = BigRational::zero();
    for kt in enumerate_ktilings(n, k)? {
        let (pre, e) = ktiling_monomial(&kt, w)?;
        let poly = TPoly::monomial(pre, e as usize);
        let value = poly.eval(&w.t);
        z += &value;
        entries.push((kt, ExactWeight { value, poly }));
    }
    if z.is_zero() {
        return Err(Error::invariant("zero partition function"));
    }
    Ok(ExactDistribution { rank: n, colors: k, t: w.t.clone(), entries, z })
}

// --- sampler validation ---------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerKind {
    Shuffle,
    Dynamics,
    /// The shuffle with a deliberately corrupted creation exponent; exists so
    /// the validation harness can prove it detects a wrong law.
    ShuffleCorrupted,
}

#[derive(Debug, Clone)]
pub struct SamplerReport {
    pub kind: SamplerKind,
    pub samples: u64,
    pub support: usize,
    pub tv_distance: f64,
    pub chi_square_p: f64,
}

/// Draw `samples` k-tilings and compare the empirical law against the
/// enumerated exact law; reports total-variation distance and a chi-square
/// p-value. Samples are keyed by index, so the result is independent of the
/// thread count.
pub fn validate_sampler(
    kind: SamplerKind,
    n: u32,
    k: u32,
    w: &ExactWeights,
    samples: u64,
    seed: u64,
    threads: usize,
) -> Result<SamplerReport> {
    if samples == 0 {
        return Err(Error::config("sampler validation needs at least one sample"));
    }
    let dist = exact_distribution(n, k, w)?;
    let probs = dist.probability_map();
    let wf = w.to_float()?;
    let master = crate::rng::RngStream::new(seed);

    let threads = threads.max(1);
    let chunk = samples.div_ceil(threads as u64);
    let counts: Result<Vec<BTreeMap<KTilingKey, u64>>> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for ti in 0..threads as u64 {
            let wf = &wf;
            let lo = (ti * chunk).min(samples);
            let hi = ((ti + 1) * chunk).min(samples);
            handles.push(scope.spawn(move || -> Result<BTreeMap<KTilingKey, u64>> {
                let mut counts: BTreeMap<KTilingKey, u64> = BTreeMap::new();
                for idx in lo..hi {
                    let sample_seed = master.draw_u64(&[0x5eed, idx as i64]);
                    let kt = match kind {
                        SamplerKind::Shuffle => crate::shuffle::sample(n, k, wf, sample_seed)?,
                        SamplerKind::ShuffleCorrupted => {
                            crate::shuffle::sample_corrupted(n, k, wf, sample_seed)?
                        }
                        SamplerKind::Dynamics => crate::dynamics::sample(n, k, wf, sample_seed)?,
                    };
                    *counts.entry(kt.canonical_key()).or_default() += 1;
                }
                Ok(counts)
            }));
        }
        handles.into_iter().map(|h| h.join().expect("sampler thread panicked")).collect()
    });
    let mut merged: BTreeMap<KTilingKey, u64> = BTreeMap::new();
    for part in counts? {
        for (key, cnt) in part {
            *merged.entry(key).or_default() += cnt;
        }
    }

    for key in merged.keys() {
        if !probs.contains_key(key) {
            return Err(Error::invariant(
                "sampler produced a k-tiling outside the enumerated support",
            ));
        }
    }

    let mut tv = 0.0f64;
    let mut chi2 = 0.0f64;
    let mut categories = 0i64;
    for (key, p) in &probs {
        let p = p.to_f64().unwrap_or(0.0);
        let obs = merged.get(key).copied().unwrap_or(0) as f64;
        let expect = p * samples as f64;
        tv += (obs / samples as f64 - p).abs();
        if expect > 0.0 {
            chi2 += (obs - expect) * (obs - expect) / expect;
            categories += 1;
        } else if obs > 0.0 {
            return Err(Error::invariant("sampler hit a zero-probability k-tiling"));
        }
    }
    tv /= 2.0;
    let p_value = if categories >= 2 {
        use statrs::distribution::{ChiSquared, ContinuousCDF};
        let chi = ChiSquared::new((categories - 1) as f64)
            .map_err(|e| Error::invariant(format!("chi-square setup: {e}")))?;
        1.0 - chi.cdf(chi2)
    } else {
        1.0
    };
    Ok(SamplerReport {
        kind,
        samples,
        support: probs.len(),
        tv_distance: tv,
        chi_square_p: p_value,
    })
}

// --- dist.json ----------------------------------------------------------------

/// Serialize an exact distribution in the dist.json schema (rationals as
/// decimal strings).
pub fn dist_to_json(dist: &ExactDistribution) -> String {
    let entries: Vec<serde_json::Value> = dist
        .entries
        .iter()
        .map(|(kt, w)| {
            let dump: serde_json::Value =
                serde_json::from_str(&kt.to_dump_json()).expect("dump is valid json");
            serde_json::json!({
                "tiling": dump,
                "weight_num": w.value.numer().to_string(),
                "weight_den": w.value.denom().to_string(),
            })
        })
        .collect();
    serde_json::to_string_pretty(&serde_json::json!({
        "rank": dist.rank,
        "colors": dist.colors,
        "t": format!("{}/{}", dist.t.numer(), dist.t.denom()),
        "entries": entries,
        "Z_num": dist.z.numer().to_string(),
        "Z_den": dist.z.denom().to_string(),
    }))
    .expect("dist serialization cannot fail")
}
