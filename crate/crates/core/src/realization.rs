//! Numerical shadows of motives: Poincaré polynomials, Hodge tables and
//! Chow ranks.

use std::collections::BTreeMap;
use std::fmt;
use std::iter::Sum;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::corr::Presentation;
use crate::error::{Error, Result};
use crate::fibration::Decomposition;
use crate::inference::{fiber_profile, FiberDescriptor, Multidegree};
use crate::motive::MotiveObject;

/// Polynomial in `t` with integer coefficients; index = homological degree.
/// Trailing zeros are trimmed, so equality is structural.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<i64>", into = "Vec<i64>")]
pub struct GradedPoly(Vec<i64>);

impl GradedPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        GradedPoly(coeffs)
    }

    pub fn zero() -> Self {
        GradedPoly(Vec::new())
    }

    pub fn one() -> Self {
        GradedPoly(vec![1])
    }

    pub fn monomial(degree: usize, c: i64) -> Self {
        let mut v = vec![0; degree + 1];
        v[degree] = c;
        GradedPoly::new(v)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Lowest degree with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.0.iter().position(|&c| c != 0)
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.0);
        GradedPoly(v)
    }

    /// Divide by `t^k`, if exact.
    pub fn deshift(&self, k: usize) -> Option<Self> {
        if self.0.iter().take(k).any(|&c| c != 0) {
            return None;
        }
        Some(GradedPoly::new(self.0.iter().skip(k).copied().collect()))
    }

    pub fn add(&self, other: &GradedPoly) -> Self {
        let n = self.0.len().max(other.0.len());
        GradedPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &GradedPoly) -> Self {
        let n = self.0.len().max(other.0.len());
        GradedPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &GradedPoly) -> Self {
        if self.is_zero() || other.is_zero() {
            return GradedPoly::zero();
        }
        let mut v = vec![0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        GradedPoly::new(v)
    }

    /// Value at `t = 1`: the total Betti number.
    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }
}

impl From<Vec<i64>> for GradedPoly {
    fn from(v: Vec<i64>) -> Self {
        GradedPoly::new(v)
    }
}

impl From<GradedPoly> for Vec<i64> {
    fn from(p: GradedPoly) -> Vec<i64> {
        p.0
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => f.write_str("t")?,
                (1, _) => write!(f, "{a}t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "{a}t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Rank of a Chow group: finite, or infinite-dimensional over `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RankValue {
    Finite(u64),
    Infinite,
}

impl Add for RankValue {
    type Output = RankValue;
    fn add(self, rhs: RankValue) -> RankValue {
        match (self, rhs) {
            (RankValue::Finite(a), RankValue::Finite(b)) => RankValue::Finite(a + b),
            _ => RankValue::Infinite,
        }
    }
}

impl Sum for RankValue {
    fn sum<I: Iterator<Item = RankValue>>(iter: I) -> RankValue {
        iter.fold(RankValue::Finite(0), Add::add)
    }
}

impl fmt::Display for RankValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankValue::Finite(n) => write!(f, "{n}"),
            RankValue::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for RankValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RankValue::Finite(n) => s.serialize_u64(*n),
            RankValue::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for RankValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(RankValue::Finite(n)),
            Raw::S(s) if s == "infinite" => Ok(RankValue::Infinite),
            Raw::S(s) => Err(serde::de::Error::custom(format!("expected a count or \"infinite\", got \"{s}\""))),
        }
    }
}

/// Sum over summands of the atom polynomial shifted by `2 · twist`.
/// `table` is keyed by atom name.
pub fn poincare_of(
    pres: &Presentation,
    obj: &MotiveObject,
    table: &BTreeMap<String, GradedPoly>,
) -> Result<GradedPoly> {
    obj.summands.iter().try_fold(GradedPoly::zero(), |acc, s| {
        let name = &pres.atom(s.atom).name;
        let p = table.get(name).ok_or_else(|| Error::MissingTableEntry(name.clone()))?;
        if s.twist < 0 {
            return Err(Error::InvalidDimensions(format!("negative twist {} on {name}", s.twist)));
        }
        Ok(acc.add(&p.shift(2 * s.twist as usize)))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizationReport {
    /// `P_X - Σ_i t^{2i} P_B`.
    pub residual: GradedPoly,
    /// Residual divided by `t^{2n}`: the candidate polynomial of the
    /// remainder summand, when the division is exact.
    pub candidate: Option<GradedPoly>,
    pub twist: u32,
    pub dim_bound: Option<i64>,
    pub nonnegative: bool,
    pub divisible: bool,
    pub degree_ok: bool,
    pub accepted: bool,
}

fn check_degree(p: &GradedPoly, dim: u32, what: &str) -> Result<()> {
    match p.degree() {
        Some(d) if d == 2 * dim as usize => Ok(()),
        d => Err(Error::DegreeMismatch(format!(
            "{what} has degree {} but dimension {dim} needs {}",
            d.map_or("-inf".to_string(), |d| d.to_string()),
            2 * dim
        ))),
    }
}

/// Subtracts the base part of `d` from `P_X` and checks the remainder
/// against the shape `(Z, r, n)` the decomposition allows.
pub fn check_decomposition_realization(
    d: &Decomposition,
    p_x: &GradedPoly,
    p_b: &GradedPoly,
) -> Result<RealizationReport> {
    check_degree(p_x, d.d_x, "P_X")?;
    check_degree(p_b, d.d_b, "P_B")?;
    let base = (0..=(d.d_x - d.d_b) as usize).fold(GradedPoly::zero(), |acc, i| acc.add(&p_b.shift(2 * i)));
    let residual = p_x.sub(&base);
    let twist = d.chow_trivial_below;
    let nonnegative = residual.is_nonnegative();
    let candidate = residual.deshift(2 * twist as usize);
    let divisible = candidate.is_some();
    let (dim_bound, degree_ok) = match &d.remainder {
        None => (Some(-1), residual.is_zero()),
        Some(r) => match r.dim {
            None => (None, true),
            Some(dz) => {
                (Some(dz), candidate.as_ref().is_some_and(|c| c.degree().is_none_or(|deg| deg as i64 <= 2 * dz)))
            }
        },
    };
    Ok(RealizationReport {
        accepted: nonnegative && divisible && degree_ok,
        residual,
        candidate,
        twist,
        dim_bound,
        nonnegative,
        divisible,
        degree_ok,
    })
}

/// Hodge numbers `h^{p,q}`, indexed by `(p, q)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeTable(pub BTreeMap<(u32, u32), i64>);

impl HodgeTable {
    pub fn get(&self, p: u32, q: u32) -> i64 {
        self.0.get(&(p, q)).copied().unwrap_or(0)
    }

    fn combine(&self, other: &HodgeTable, sign: i64) -> HodgeTable {
        let mut out = self.0.clone();
        for (k, v) in &other.0 {
            *out.entry(*k).or_insert(0) += sign * v;
        }
        out.retain(|_, v| *v != 0);
        HodgeTable(out)
    }

    pub fn add(&self, other: &HodgeTable) -> HodgeTable {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &HodgeTable) -> HodgeTable {
        self.combine(other, -1)
    }

    /// Tate twist by `n`: `(p, q) ↦ (p + n, q + n)`.
    pub fn twist(&self, n: u32) -> HodgeTable {
        HodgeTable(self.0.iter().map(|(&(p, q), &v)| ((p + n, q + n), v)).collect())
    }

    pub fn betti(&self) -> GradedPoly {
        self.0.iter().fold(GradedPoly::zero(), |acc, (&(p, q), &v)| acc.add(&GradedPoly::monomial((p + q) as usize, v)))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.values().all(|&v| v >= 0)
    }
}

/// Hodge-level residual `H_X - Σ_i H_B(i)`, with its nonnegativity.
pub fn hodge_residual(d: &Decomposition, h_x: &HodgeTable, h_b: &HodgeTable) -> (HodgeTable, bool) {
    let base = (0..=d.d_x - d.d_b).fold(HodgeTable::default(), |acc, i| acc.add(&h_b.twist(i)));
    let r = h_x.sub(&base);
    let ok = r.is_nonnegative();
    (r, ok)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyEntry {
    pub name: String,
    #[serde(default)]
    pub params: Vec<u32>,
    pub dim: u32,
    pub poincare: GradedPoly,
    #[serde(default)]
    pub chow_ranks: Option<Vec<RankValue>>,
    /// Largest `n` with `CH_l = Q` for all `l < n`.
    pub chow_trivial_below: u32,
}

impl FamilyEntry {
    /// Degree of the Poincaré polynomial equals twice the dimension, and
    /// the stated Chow ranks are 1 below the triviality level.
    pub fn is_consistent(&self) -> bool {
        let degree_ok = self.poincare.degree() == Some(2 * self.dim as usize);
        let ranks_ok = self.chow_ranks.as_ref().is_none_or(|r| {
            r.len() == self.dim as usize + 1
                && r.iter().take(self.chow_trivial_below as usize).all(|&v| v == RankValue::Finite(1))
        });
        degree_ok && ranks_ok
    }
}

fn even_betti(dim: u32, extra_middle: i64) -> GradedPoly {
    let mut v = vec![0; 2 * dim as usize + 1];
    for i in 0..=dim as usize {
        v[2 * i] = 1;
    }
    v[dim as usize] += extra_middle;
    GradedPoly::new(v)
}

/// Topological Euler characteristic of a smooth complete intersection of
/// the given multidegree and dimension `m`, from
/// `c(T) = (1 + H)^{m + r + 1} / Π (1 + d_i H)` and `H^m = Π d_i`.
fn ci_euler(md: &Multidegree, m: u32) -> i128 {
    let n = (m + md.codim()) as i128;
    let m = m as usize;
    // series of (1 + H)^{N+1}
    let mut series: Vec<i128> = (0..=m).map(|k| binom(n + 1, k as i128)).collect();
    for &d in md.degrees() {
        // divide by (1 + d H)
        for k in 1..=m {
            series[k] -= d as i128 * series[k - 1];
        }
    }
    series[m] * md.degrees().iter().map(|&d| d as i128).product::<i128>()
}

fn binom(n: i128, k: i128) -> i128 {
    if k < 0 || k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn complete_intersection(md: &Multidegree, m: u32) -> GradedPoly {
    let chi = ci_euler(md, m) as i64;
    let m_i = m as i64;
    // Lefschetz: b_{2i} = 1 away from the middle, odd Betti numbers vanish
    // away from the middle.
    if m.is_multiple_of(2) {
        even_betti(m, chi - m_i - 1)
    } else {
        let mut p = even_betti(m, 0);
        p = p.add(&GradedPoly::monomial(m as usize, m_i + 1 - chi));
        p
    }
}

/// Built-in parametric families plus the shipped data catalog.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Catalog {
    #[serde(default)]
    pub comment: Option<String>,
    pub entries: Vec<FamilyEntry>,
}

const SHIPPED: &str = include_str!("../data/catalog.json");

impl Catalog {
    pub fn shipped() -> Catalog {
        serde_json::from_str(SHIPPED).expect("shipped catalog parses")
    }

    pub fn from_json(s: &str) -> Result<Catalog> {
        serde_json::from_str(s).map_err(|e| Error::UnknownFamily(format!("catalog: {e}")))
    }

    /// Data entries take precedence over the parametric families.
    pub fn lookup(&self, name: &str, params: &[u32]) -> Result<FamilyEntry> {
        if let Some(e) = self.entries.iter().find(|e| e.name == name && e.params == params) {
            return Ok(e.clone());
        }
        family(name, params)
    }
}

/// Parametric families: `point`, `projective_space [n]`, `curve [g]`,
/// `quadric [m]`, `cubic [m]`, `complete_intersection [m, d_1, …]`, and
/// anything in the shipped data catalog.
pub fn family(name: &str, params: &[u32]) -> Result<FamilyEntry> {
    let bad = || Error::UnknownFamily(format!("{name} {params:?}"));
    let entry = |dim: u32, poincare: GradedPoly, ranks: Option<Vec<RankValue>>, below: u32| FamilyEntry {
        name: name.to_string(),
        params: params.to_vec(),
        dim,
        poincare,
        chow_ranks: ranks,
        chow_trivial_below: below,
    };
    let cellular_ranks = |p: &GradedPoly, dim: u32| -> Option<Vec<RankValue>> {
        Some((0..=dim as usize).map(|l| RankValue::Finite(p.coeff(2 * l) as u64)).collect())
    };
    match (name, params) {
        ("point", []) => Ok(entry(0, GradedPoly::one(), Some(vec![RankValue::Finite(1)]), 1)),
        ("projective_space", [n]) => {
            let p = even_betti(*n, 0);
            let ranks = cellular_ranks(&p, *n);
            Ok(entry(*n, p, ranks, n + 1))
        }
        ("curve", [g]) => {
            let p = GradedPoly::new(vec![1, 2 * *g as i64, 1]);
            let ch0 = if *g == 0 { RankValue::Finite(1) } else { RankValue::Infinite };
            Ok(entry(1, p, Some(vec![ch0, RankValue::Finite(1)]), if *g == 0 { 2 } else { 0 }))
        }
        ("quadric", [m]) if *m >= 1 => {
            let p = even_betti(*m, if m % 2 == 0 { 1 } else { 0 });
            let ranks = cellular_ranks(&p, *m);
            let below = fiber_profile(&FiberDescriptor::Quadric { dim: *m }).chow_trivial_below();
            Ok(entry(*m, p, ranks, below))
        }
        ("cubic", [m]) if *m >= 1 => {
            let fd = FiberDescriptor::cubic(*m);
            let md = Multidegree::new(vec![3])?;
            Ok(entry(*m, complete_intersection(&md, *m), None, fiber_profile(&fd).chow_trivial_below()))
        }
        ("complete_intersection", [m, degrees @ ..]) if *m >= 1 && !degrees.is_empty() => {
            let md = Multidegree::new(degrees.to_vec())?;
            let fd = FiberDescriptor::intersection(degrees, *m)?;
            Ok(entry(*m, complete_intersection(&md, *m), None, fiber_profile(&fd).chow_trivial_below()))
        }
        _ => Catalog::shipped().entries.into_iter().find(|e| e.name == name && e.params == params).ok_or_else(bad),
    }
}
