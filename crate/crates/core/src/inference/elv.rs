//! The Esnault–Levine–Viehweg criterion for complete intersections and the
//! fiber-fact tables built on top of it.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multidegree `d_1 ≥ … ≥ d_r ≥ 2` of a complete intersection, stored
/// sorted in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Multidegree(Vec<u32>);

impl Multidegree {
    pub fn new(mut degrees: Vec<u32>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidMultidegree("empty multidegree".into()));
        }
        if let Some(d) = degrees.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidMultidegree(format!(
                "degree {d} < 2 (linear equations are absorbed into the ambient space)"
            )));
        }
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Multidegree(degrees))
    }

    pub fn degrees(&self) -> &[u32] {
        &self.0
    }

    /// Number of equations `r`.
    pub fn codim(&self) -> u32 {
        self.0.len() as u32
    }
}

impl TryFrom<Vec<u32>> for Multidegree {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Multidegree::new(v)
    }
}

impl From<Multidegree> for Vec<u32> {
    fn from(m: Multidegree) -> Vec<u32> {
        m.0
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Does the ELV criterion give `CH_{l'}(Y) = Q` for all `l' ≤ l`, where
/// `Y ⊂ P^n` is a complete intersection of the given multidegree?
///
/// First case (`d_1 ≥ 3` or `r ≥ l + 1`): `Σ C(l + d_i, l + 1) ≤ n`.
/// Second case (all `d_i = 2` and `r ≤ l`): `r(l + 2) ≤ n - l + r - 1`.
pub fn elv_check(multidegree: &Multidegree, n: u64, l: u64) -> bool {
    let r = multidegree.codim() as u64;
    let d1 = multidegree.degrees()[0];
    if d1 >= 3 || r > l {
        let sum: BigUint = multidegree.degrees().iter().map(|&d| binomial(l + d as u64, l + 1)).sum();
        sum <= BigUint::from(n)
    } else {
        // all degrees are 2 and r ≤ l
        ((r * (l + 2)) as i128) < n as i128 - l as i128 + r as i128
    }
}

/// Largest `l ≤ dim` accepted by [`elv_check`] for a complete intersection
/// of dimension `dim` (ambient `P^{dim + r}`), if any.
pub fn elv_level(multidegree: &Multidegree, dim: u32) -> Option<u32> {
    let n = dim as u64 + multidegree.codim() as u64;
    (0..=dim).rev().find(|&l| elv_check(multidegree, n, l as u64))
}

/// Known improvements over the ELV bound, kept apart from the formula.
pub struct Override {
    pub multidegree: &'static [u32],
    pub min_dim: u32,
    pub trivial_through: u32,
    pub citation: &'static str,
}

pub const OVERRIDES: &[Override] = &[
    Override {
        multidegree: &[3],
        min_dim: 8,
        trivial_through: 2,
        citation: "Otwinowska: cubic hypersurfaces of dimension >= 8 have CH_2 = Q",
    },
    Override {
        multidegree: &[3, 2],
        min_dim: 6,
        trivial_through: 1,
        citation:
            "Hirschowitz-Iyer: complete intersections of bidegree (2,3) and dimension >= 6 have CH_l = Q for l <= 1",
    },
];

/// Closed fibres of a fibration, described by family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FiberDescriptor {
    Quadric {
        dim: u32,
    },
    CompleteIntersection {
        multidegree: Multidegree,
        dim: u32,
    },
    ProjectiveSpace {
        dim: u32,
    },
    /// Cellular varieties, not necessarily smooth.
    Cellular {
        dim: u32,
    },
    /// No table knowledge; only the dimension is recorded.
    Unspecified {
        dim: u32,
    },
}

impl FiberDescriptor {
    pub fn dim(&self) -> u32 {
        match self {
            FiberDescriptor::Quadric { dim }
            | FiberDescriptor::CompleteIntersection { dim, .. }
            | FiberDescriptor::ProjectiveSpace { dim }
            | FiberDescriptor::Cellular { dim }
            | FiberDescriptor::Unspecified { dim } => *dim,
        }
    }

    pub fn cubic(dim: u32) -> Self {
        FiberDescriptor::CompleteIntersection { multidegree: Multidegree(vec![3]), dim }
    }

    pub fn intersection(degrees: &[u32], dim: u32) -> Result<Self> {
        Ok(FiberDescriptor::CompleteIntersection { multidegree: Multidegree::new(degrees.to_vec())?, dim })
    }

    /// The descriptor as a complete intersection, when it is one.
    fn as_complete_intersection(&self) -> Option<(Multidegree, u32)> {
        match self {
            FiberDescriptor::Quadric { dim } => Some((Multidegree(vec![2]), *dim)),
            FiberDescriptor::CompleteIntersection { multidegree, dim } => Some((multidegree.clone(), *dim)),
            _ => None,
        }
    }
}

/// What the tables know about the Chow groups of a fibre family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberProfile {
    /// `CH_l = Q` for all `l ≤ trivial_through`.
    pub trivial_through: Option<u32>,
    /// `CH_l` finitely generated for all `l ≤ fg_through`.
    pub fg_through: Option<u32>,
    pub quadric: bool,
    pub cellular: bool,
    /// Where each conclusion came from.
    pub sources: Vec<String>,
}

impl FiberProfile {
    /// Largest `n` with `CH_l = Q` for all `l < n` (0 when nothing is known).
    pub fn chow_trivial_below(&self) -> u32 {
        self.trivial_through.map_or(0, |l| l + 1)
    }
}

pub fn fiber_profile(fd: &FiberDescriptor) -> FiberProfile {
    let mut p = FiberProfile {
        trivial_through: None,
        fg_through: None,
        quadric: matches!(fd, FiberDescriptor::Quadric { .. }),
        cellular: false,
        sources: Vec::new(),
    };
    match fd {
        FiberDescriptor::ProjectiveSpace { dim } => {
            p.trivial_through = Some(*dim);
            p.fg_through = Some(*dim);
            p.cellular = true;
            p.sources.push(format!("projective space P^{dim}: CH_l = Q for l <= {dim}"));
        }
        FiberDescriptor::Cellular { dim } => {
            p.fg_through = Some(*dim);
            p.cellular = true;
            p.sources.push("cellular varieties have finitely generated Chow groups".to_string());
        }
        FiberDescriptor::Unspecified { .. } => {}
        _ => {
            let (md, dim) = fd.as_complete_intersection().expect("complete intersection");
            if let Some(l) = elv_level(&md, dim) {
                p.trivial_through = Some(l);
                p.sources.push(format!(
                    "ELV criterion for multidegree {:?} in P^{}: CH_l = Q for l <= {l}",
                    md.degrees(),
                    dim + md.codim()
                ));
            }
            for o in OVERRIDES {
                if o.multidegree == md.degrees()
                    && dim >= o.min_dim
                    && p.trivial_through.is_none_or(|l| l < o.trivial_through)
                {
                    p.trivial_through = Some(o.trivial_through);
                    p.sources.push(o.citation.to_string());
                }
            }
        }
    }
    p
}
