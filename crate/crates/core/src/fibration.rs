//! Motive of a fibration `f: X → B`: the morphisms
//! `Φ: ⊕_i h(B)(i) → h(X)` and `Ψ: h(X) → ⊕_i h(B)(i)`, the inverse `Ξ` of
//! the lower triangular `Ψ∘Φ`, and the self-dual projector `p = Φ∘Ξ∘Ψ`.
//!
//! Only three correspondences are named: `Γ_f`, its transpose and the
//! hyperplane class `h` on `X`. With `k = d_X - d_B`, the relations are
//! `Γ_f∘h^l∘ᵗΓ_f = 0` for `l < k` and `Γ_f∘h^k∘ᵗΓ_f = n·Δ_B`, `n` the
//! degree of `h^k` on a general fibre. Everything else is derived by
//! rewriting. Matrix indices start at 0.

use serde::{Deserialize, Serialize};

use crate::corr::{AtomId, GenId, Presentation, Term};
use crate::error::{Error, Result};
use crate::inference::{fiber_profile, Fact, FiberDescriptor};
use crate::motive::{
    classify_triangular, compose_morphisms, identity_morphism, is_identity, neumann_inverse, normalize_morphism,
    transpose_morphism, verify_idempotent, MotiveMorphism, MotiveObject, Summand, TriangularReport,
};
use crate::realization::RankValue;
use crate::scalar::Scalar;

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibrationScenario {
    pub d_x: u32,
    pub d_b: u32,
    #[serde(default = "yes")]
    pub flat: bool,
    pub fiber: FiberDescriptor,
    /// Largest `n` with `CH_l(X_b) = Q` for all `l < n`. Derived from the
    /// fibre tables when absent.
    #[serde(default)]
    pub chow_trivial_below: Option<u32>,
    #[serde(default)]
    pub base_facts: Vec<Fact>,
    /// Accept a `chow_trivial_below` the tables cannot confirm.
    #[serde(default)]
    pub force: bool,
}

impl FibrationScenario {
    pub fn new(d_x: u32, d_b: u32, fiber: FiberDescriptor) -> Self {
        FibrationScenario {
            d_x,
            d_b,
            flat: true,
            fiber,
            chow_trivial_below: None,
            base_facts: Vec::new(),
            force: false,
        }
    }

    pub fn quadric(d_x: u32, d_b: u32) -> Self {
        FibrationScenario::new(d_x, d_b, FiberDescriptor::Quadric { dim: d_x.saturating_sub(d_b) })
    }

    fn check_dims(&self) -> Result<()> {
        if self.d_b > self.d_x {
            return Err(Error::InvalidDimensions(format!("d_B = {} exceeds d_X = {}", self.d_b, self.d_x)));
        }
        if self.fiber.dim() != self.d_x - self.d_b {
            return Err(Error::Hypothesis(format!(
                "fibre dimension {} differs from d_X - d_B = {}",
                self.fiber.dim(),
                self.d_x - self.d_b
            )));
        }
        Ok(())
    }

    /// The level `n` the decomposition uses, checked against the fibre
    /// tables. Returns `(n, verified)`.
    pub fn trivial_level(&self) -> Result<(u32, bool)> {
        let table = fiber_profile(&self.fiber).chow_trivial_below();
        match self.chow_trivial_below {
            None => Ok((table, true)),
            Some(n) if n <= table => Ok((n, true)),
            Some(n) if self.force => Ok((n, false)),
            Some(n) => {
                Err(Error::Hypothesis(format!("chow_trivial_below = {n} but the fibre tables only give {table}")))
            }
        }
    }
}

/// Atoms, generators and relations for one pair `(d_X, d_B)`.
#[derive(Clone, Debug)]
pub struct FibrationPresentation {
    pub pres: Presentation,
    pub x: AtomId,
    pub b: AtomId,
    pub gamma: GenId,
    pub gamma_t: GenId,
    pub h: GenId,
    pub d_x: u32,
    pub d_b: u32,
}

pub fn build_fibration_presentation(d_x: u32, d_b: u32) -> Result<FibrationPresentation> {
    if d_b > d_x {
        return Err(Error::InvalidDimensions(format!("d_B = {d_b} exceeds d_X = {d_x}")));
    }
    let mut pres = Presentation::new();
    let x = pres.add_atom("X", d_x)?;
    let b = pres.add_atom("B", d_b)?;
    let gamma = pres.make_generator("Gamma_f", x, b, d_x as i64, None)?;
    let gamma_t = pres.make_generator("tGamma_f", b, x, d_x as i64, Some("Gamma_f"))?;
    let h = pres.make_generator("h", x, x, d_x as i64 - 1, Some("h"))?;
    let k = (d_x - d_b) as usize;
    for l in 0..=k {
        let mut pattern = vec![gamma];
        pattern.extend(std::iter::repeat_n(h, l));
        pattern.push(gamma_t);
        let shift = (k - l) as i64;
        if l == k {
            pres.add_rule(
                &pattern,
                Term::scalar_identity(b, Scalar::param()),
                "degree: Gamma_f∘h^k∘tGamma_f = n·Delta_B, k = d_X - d_B",
            )?;
        } else {
            pres.add_rule(
                &pattern,
                Term::zero(b, b, shift),
                "orthogonality: Gamma_f∘h^l∘tGamma_f = 0 for l < d_X - d_B",
            )?;
        }
    }
    Ok(FibrationPresentation { pres, x, b, gamma, gamma_t, h, d_x, d_b })
}

impl FibrationPresentation {
    pub fn relative_dim(&self) -> usize {
        (self.d_x - self.d_b) as usize
    }

    /// `⊕_{i=0}^{k} h(B)(i)`.
    pub fn base_object(&self) -> MotiveObject {
        MotiveObject::new(
            (0..=self.relative_dim())
                .map(|i| Summand { atom: self.b, twist: i as i64, label: Some(format!("h(B)({i})")) })
                .collect(),
        )
    }

    pub fn total_object(&self) -> MotiveObject {
        MotiveObject::single(self.x)
    }

    fn h_power(&self, e: usize) -> Vec<GenId> {
        vec![self.h; e]
    }

    /// `Φ_i = h^{k-i}∘ᵗΓ_f`.
    pub fn phi(&self) -> Result<MotiveMorphism> {
        let k = self.relative_dim();
        MotiveMorphism::from_fn(self.base_object(), self.total_object(), |_, j| {
            let mut w = self.h_power(k - j);
            w.push(self.gamma_t);
            Some(self.pres.word(&w).expect("composable"))
        })
    }

    /// `Ψ_i = Γ_f∘h^i`.
    pub fn psi(&self) -> Result<MotiveMorphism> {
        MotiveMorphism::from_fn(self.total_object(), self.base_object(), |i, _| {
            let mut w = vec![self.gamma];
            w.extend(self.h_power(i));
            Some(self.pres.word(&w).expect("composable"))
        })
    }
}

pub fn build_phi(fp: &FibrationPresentation) -> Result<MotiveMorphism> {
    fp.phi()
}

pub fn build_psi(fp: &FibrationPresentation) -> Result<MotiveMorphism> {
    fp.psi()
}

/// The projector together with the morphisms it was built from and the
/// outcome of its checks.
#[derive(Clone, Debug)]
pub struct Projector {
    pub p: MotiveMorphism,
    pub phi: MotiveMorphism,
    pub psi: MotiveMorphism,
    pub xi: MotiveMorphism,
    pub psi_phi: TriangularReport,
    pub idempotent: bool,
    pub self_dual: bool,
}

/// `p = Φ∘Ξ∘Ψ` with `Ξ = (Ψ∘Φ)^{-1}`. `Ξ` is checked to be a two-sided
/// inverse; idempotence and `ᵗp = p` are checked and recorded.
pub fn projector(fp: &FibrationPresentation) -> Result<Projector> {
    let pres = &fp.pres;
    let phi = fp.phi()?;
    let psi = fp.psi()?;
    let psi_phi = classify_triangular(pres, &compose_morphisms(pres, &psi, &phi)?)?;
    if psi_phi.diagonal_scalar != Some(Scalar::param()) {
        return Err(Error::DiagonalNotScalar);
    }
    let xi = neumann_inverse(pres, &psi_phi.normalized)?;
    let p = compose_morphisms(pres, &phi, &compose_morphisms(pres, &xi, &psi)?)?;
    let idempotent = verify_idempotent(pres, &p);
    let pt = normalize_morphism(pres, &transpose_morphism(pres, &p)?);
    let self_dual = pt == p;
    Ok(Projector { p, phi, psi, xi, psi_phi, idempotent, self_dual })
}

/// The two identities exhibiting `(X, p)` as `⊕ h(B)(i)`:
/// `Ψ∘p∘(p∘Φ∘Ξ) = id` and `(p∘Φ∘Ξ)∘(Ψ∘p) = p`.
pub fn verify_summand_isomorphism(fp: &FibrationPresentation, proj: &Projector) -> Result<(bool, bool)> {
    let pres = &fp.pres;
    let into = compose_morphisms(pres, &proj.p, &compose_morphisms(pres, &proj.phi, &proj.xi)?)?;
    let out = compose_morphisms(pres, &proj.psi, &proj.p)?;
    let first = is_identity(pres, &compose_morphisms(pres, &out, &into)?);
    let second = compose_morphisms(pres, &into, &out)? == proj.p;
    Ok((first, second))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionKind {
    /// `h(X) ≅ ⊕ h(B)(i) ⊕ (Z, r, n)` with `dim Z` bounded.
    Full,
    /// `n = 0`: the base part splits off, nothing is known about the rest.
    SplitInjectiveBasePart,
}

/// The summand `(Z, r, n)`; `Z` and `r` are not constructed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Remainder {
    pub name: String,
    /// `None` when no bound is available.
    pub dim: Option<i64>,
    pub twist: u32,
    pub idempotent: String,
}

/// Dimension of the remainder when `CH_l(X_b) = Q` for `l < m` on one side
/// and `l < n` on the other: `d_X - m - n`.
pub fn effective_remainder_dim(d_x: u32, m: u32, n: u32) -> i64 {
    d_x as i64 - m as i64 - n as i64
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub d_x: u32,
    pub d_b: u32,
    pub base_part: MotiveObject,
    pub remainder: Option<Remainder>,
    pub kind: DecompositionKind,
    pub chow_trivial_below: u32,
    pub hypotheses_verified: bool,
    pub presentation: FibrationPresentation,
    pub projector: Projector,
}

pub fn split_motive(s: &FibrationScenario) -> Result<Decomposition> {
    s.check_dims()?;
    if !s.flat && !s.force {
        return Err(Error::Hypothesis("the fibration is not flat".into()));
    }
    let (n, verified) = s.trivial_level()?;
    let fp = build_fibration_presentation(s.d_x, s.d_b)?;
    let proj = projector(&fp)?;
    if !proj.idempotent || !proj.self_dual {
        return Err(Error::InverseCheckFailed("projector is not a self-dual idempotent".into()));
    }
    let (kind, remainder) = if matches!(s.fiber, FiberDescriptor::ProjectiveSpace { .. }) {
        (DecompositionKind::Full, None)
    } else if n == 0 {
        let r = Remainder { name: "Z".into(), dim: None, twist: 0, idempotent: "r".into() };
        (DecompositionKind::SplitInjectiveBasePart, Some(r))
    } else {
        let dim = effective_remainder_dim(s.d_x, n, n);
        let r = (dim >= 0).then(|| Remainder { name: "Z".into(), dim: Some(dim), twist: n, idempotent: "r".into() });
        (DecompositionKind::Full, r)
    };
    Ok(Decomposition {
        d_x: s.d_x,
        d_b: s.d_b,
        base_part: fp.base_object(),
        remainder,
        kind,
        chow_trivial_below: n,
        hypotheses_verified: verified && s.flat,
        presentation: fp,
        projector: proj,
    })
}

/// `rank CH_l(X) = Σ_{i=0}^{d_X-d_B} rank CH_{l-i}(B)`, valid when
/// `CH_{l-i}(X_b) = Q` for `0 ≤ i ≤ min(l, d_B)`, i.e. `l < n`.
/// `ranks_b[j]` is the rank of `CH_j(B)`; groups outside `0..=d_B` vanish.
pub fn chow_rank_map(s: &FibrationScenario, l: i64, ranks_b: &[RankValue]) -> Result<RankValue> {
    s.check_dims()?;
    if !s.flat {
        return Err(Error::Hypothesis("the fibration is not flat".into()));
    }
    if ranks_b.len() != s.d_b as usize + 1 {
        return Err(Error::InvalidDimensions(format!("expected {} base ranks, got {}", s.d_b + 1, ranks_b.len())));
    }
    if l < 0 {
        return Ok(RankValue::Finite(0));
    }
    let (n, _) = s.trivial_level()?;
    if l >= n as i64 {
        return Err(Error::Hypothesis(format!("CH_{l} of the fibres is not known to be Q (trivial only below {n})")));
    }
    let k = (s.d_x - s.d_b) as i64;
    Ok((0..=k)
        .map(|i| l - i)
        .map(|j| {
            if j < 0 {
                RankValue::Finite(0)
            } else {
                ranks_b.get(j as usize).copied().unwrap_or(RankValue::Finite(0))
            }
        })
        .sum())
}

/// `Ψ∘Φ`, normalized; handy for displaying the triangular shape.
pub fn psi_phi(fp: &FibrationPresentation) -> Result<MotiveMorphism> {
    compose_morphisms(&fp.pres, &fp.psi()?, &fp.phi()?)
}

/// `Ξ∘(Ψ∘Φ)` and `(Ψ∘Φ)∘Ξ` are both the identity.
pub fn xi_two_sided(fp: &FibrationPresentation, proj: &Projector) -> Result<bool> {
    let pres = &fp.pres;
    let m = &proj.psi_phi.normalized;
    let id = identity_morphism(m.source());
    Ok(compose_morphisms(pres, &proj.xi, m)? == id && compose_morphisms(pres, m, &proj.xi)? == id)
}
