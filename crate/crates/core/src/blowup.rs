//! Blow-up `τ: X̃ → X` of a smooth `X` along a smooth centre `Y` of
//! codimension `r`, with exceptional divisor `j: D → X̃` and projection
//! `τ_D: D → Y`.
//!
//! `Φ = ᵗΓ_τ ⊕ ⊕_{i=1}^{r-1} Γ_j∘h_D^{r-1-i}∘ᵗΓ_τD` maps
//! `h(X) ⊕ ⊕_i h(Y)(i)` to `h(X̃)`; `Ψ` goes back, `Ψ∘Φ` is unitriangular
//! and `Θ = (Ψ∘Φ)^{-1}∘Ψ` is a left inverse of `Φ` by rewriting. That `Θ` is
//! also a right inverse is imported as an axiom.

use serde::{Deserialize, Serialize};

use crate::corr::{AtomId, GenId, Presentation, Term};
use crate::error::{Error, Result};
use crate::motive::{
    compose_morphisms, is_identity, neumann_inverse, normalize_morphism, MotiveMorphism, MotiveObject, Summand,
};
use crate::status::{IdentityCheck, Status};

pub const MANIN: &str = "Manin identity principle";
pub const LEFT_INVERSE: &str = "Theta∘Phi = id";
pub const CK_X_IDEMPOTENTS: &str = "CK idempotents of X (orthogonal)";
pub const CK_Y_IDEMPOTENTS: &str = "CK idempotents of Y (orthogonal)";
pub const CK_X_COMPLETE: &str = "CK idempotents of X sum to Delta_X";
pub const CK_Y_COMPLETE: &str = "CK idempotents of Y sum to Delta_Y";

const EXCEPTIONAL: &str = "exceptional";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowupScenario {
    pub d_x: u32,
    pub d_y: u32,
    /// Codimension; must equal `d_x - d_y` when given.
    #[serde(default)]
    pub r: Option<u32>,
    /// Names of the Chow–Künneth idempotents `π^0_X, …, π^{2d_X}_X`.
    #[serde(default)]
    pub ck_x: Option<Vec<String>>,
    #[serde(default)]
    pub ck_y: Option<Vec<String>>,
}

impl BlowupScenario {
    pub fn new(d_x: u32, d_y: u32) -> Self {
        BlowupScenario { d_x, d_y, r: None, ck_x: None, ck_y: None }
    }

    /// With CK symbols named `pi{i}_X` and `pi{j}_Y`.
    pub fn with_ck(d_x: u32, d_y: u32) -> Self {
        BlowupScenario {
            ck_x: Some((0..=2 * d_x).map(|i| format!("pi{i}_X")).collect()),
            ck_y: Some((0..=2 * d_y).map(|j| format!("pi{j}_Y")).collect()),
            ..BlowupScenario::new(d_x, d_y)
        }
    }

    pub fn codim(&self) -> Result<u32> {
        if self.d_y >= self.d_x {
            return Err(Error::InvalidDimensions(format!(
                "centre of dimension {} in X of dimension {}: codimension must be >= 1",
                self.d_y, self.d_x
            )));
        }
        let r = self.d_x - self.d_y;
        match self.r {
            Some(given) if given != r => Err(Error::InvalidDimensions(format!("r = {given} but d_x - d_y = {r}"))),
            _ => Ok(r),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BlowupPresentation {
    pub pres: Presentation,
    pub x: AtomId,
    pub y: AtomId,
    pub xt: AtomId,
    pub d: AtomId,
    pub gamma_tau: GenId,
    pub gamma_tau_t: GenId,
    pub gamma_j: GenId,
    pub gamma_j_t: GenId,
    pub gamma_td: GenId,
    pub gamma_td_t: GenId,
    pub h: GenId,
    /// CK symbols, if the scenario provided them.
    pub ck_x: Vec<GenId>,
    pub ck_y: Vec<GenId>,
    pub d_x: u32,
    pub d_y: u32,
    pub r: u32,
}

fn add_ck(pres: &mut Presentation, atom: AtomId, names: &[String]) -> Result<Vec<GenId>> {
    let dim = pres.atom(atom).dim as i64;
    let ids = names.iter().map(|n| pres.make_generator(n, atom, atom, dim, Some(n))).collect::<Result<Vec<_>>>()?;
    for (a, &pa) in ids.iter().enumerate() {
        for (b, &pb) in ids.iter().enumerate() {
            let rhs = if a == b { pres.word(&[pa])? } else { Term::zero(atom, atom, 0) };
            pres.add_rule(&[pa, pb], rhs, "Chow-Kunneth: pi^a∘pi^b = delta_ab pi^a")?;
        }
    }
    Ok(ids)
}

pub fn build_blowup_presentation(s: &BlowupScenario) -> Result<BlowupPresentation> {
    let r = s.codim()?;
    let (d_x, d_y) = (s.d_x, s.d_y);
    let dx = d_x as i64;
    let mut pres = Presentation::new();
    let x = pres.add_atom("X", d_x)?;
    let y = pres.add_atom("Y", d_y)?;
    let xt = pres.add_atom("Xt", d_x)?;
    let d = pres.add_atom("D", d_x - 1)?;
    let gamma_tau = pres.make_generator("Gamma_tau", xt, x, dx, None)?;
    let gamma_tau_t = pres.make_generator("tGamma_tau", x, xt, dx, Some("Gamma_tau"))?;
    let gamma_j = pres.make_generator("Gamma_j", d, xt, dx - 1, None)?;
    let gamma_j_t = pres.make_generator("tGamma_j", xt, d, dx - 1, Some("Gamma_j"))?;
    let gamma_td = pres.make_generator("Gamma_tauD", d, y, dx - 1, None)?;
    let gamma_td_t = pres.make_generator("tGamma_tauD", y, d, dx - 1, Some("Gamma_tauD"))?;
    // hyperplane class of the projective bundle D → Y, a cycle on D × D of
    // dimension d_X - 2
    let h = pres.make_generator("h_D", d, d, dx - 2, Some("h_D"))?;

    pres.add_rule(&[gamma_tau, gamma_tau_t], Term::identity(x), "birational: Gamma_tau∘tGamma_tau = Delta_X")?;
    pres.add_rule(&[gamma_j_t, gamma_j], pres.word(&[h])?.neg(), "self-intersection: tGamma_j∘Gamma_j = -h_D")?;
    for l in 0..r as usize {
        let mut pattern = vec![gamma_td];
        pattern.extend(std::iter::repeat_n(h, l));
        pattern.push(gamma_td_t);
        if l + 1 == r as usize {
            pres.add_rule(
                &pattern,
                Term::identity(y),
                "projective bundle: Gamma_tauD∘h_D^{r-1}∘tGamma_tauD = Delta_Y",
            )?;
        } else {
            pres.add_rule(
                &pattern,
                Term::zero(y, y, (r as usize - 1 - l) as i64),
                "projective bundle: Gamma_tauD∘h_D^l∘tGamma_tauD = 0 for l < r-1",
            )?;
        }
    }
    for k in 0..(r as usize).saturating_sub(1) {
        let mut pattern = vec![gamma_tau, gamma_j];
        pattern.extend(std::iter::repeat_n(h, k));
        pattern.push(gamma_td_t);
        let t = pres.word(&pattern)?;
        pres.add_rule(
            &pattern,
            Term::zero(t.source(), t.target(), t.shift()),
            "exceptional: Gamma_tau∘Gamma_j∘h_D^k∘tGamma_tauD = 0 for k <= r-2",
        )?;
        let transposed: Vec<GenId> =
            pattern.iter().rev().map(|g| pres.generator(*g).transpose.expect("paired")).collect();
        let t = pres.word(&transposed)?;
        pres.add_rule(
            &transposed,
            Term::zero(t.source(), t.target(), t.shift()),
            "exceptional (transposed): Gamma_tauD∘h_D^k∘tGamma_j∘tGamma_tau = 0 for k <= r-2",
        )?;
    }
    if r == 1 {
        pres.add_rule(
            &[gamma_tau_t, gamma_tau],
            Term::identity(xt),
            "codimension one: tau is an isomorphism, tGamma_tau∘Gamma_tau = Delta_Xt",
        )?;
    }
    let ck_x = match &s.ck_x {
        Some(names) => add_ck(&mut pres, x, names)?,
        None => Vec::new(),
    };
    let ck_y = match &s.ck_y {
        Some(names) => add_ck(&mut pres, y, names)?,
        None => Vec::new(),
    };
    Ok(BlowupPresentation {
        pres,
        x,
        y,
        xt,
        d,
        gamma_tau,
        gamma_tau_t,
        gamma_j,
        gamma_j_t,
        gamma_td,
        gamma_td_t,
        h,
        ck_x,
        ck_y,
        d_x,
        d_y,
        r,
    })
}

impl BlowupPresentation {
    /// `h(X) ⊕ ⊕_{i=1}^{r-1} h(Y)(i)`.
    pub fn source_object(&self) -> MotiveObject {
        let mut s = vec![Summand { atom: self.x, twist: 0, label: Some("h(X)".into()) }];
        s.extend((1..self.r as i64).map(|i| Summand { atom: self.y, twist: i, label: Some(format!("h(Y)({i})")) }));
        MotiveObject::new(s)
    }

    pub fn blowup_object(&self) -> MotiveObject {
        MotiveObject::single(self.xt)
    }

    fn word(&self, letters: Vec<GenId>) -> Term {
        self.pres.word(&letters).expect("composable")
    }

    pub fn phi(&self) -> Result<MotiveMorphism> {
        let r = self.r as usize;
        MotiveMorphism::from_fn(self.source_object(), self.blowup_object(), |_, j| {
            if j == 0 {
                return Some(self.word(vec![self.gamma_tau_t]));
            }
            let mut w = vec![self.gamma_j];
            w.extend(std::iter::repeat_n(self.h, r - 1 - j));
            w.push(self.gamma_td_t);
            Some(self.word(w))
        })
    }

    pub fn psi(&self) -> Result<MotiveMorphism> {
        MotiveMorphism::from_fn(self.blowup_object(), self.source_object(), |i, _| {
            if i == 0 {
                return Some(self.word(vec![self.gamma_tau]));
            }
            let mut w = vec![self.gamma_td];
            w.extend(std::iter::repeat_n(self.h, i - 1));
            w.push(self.gamma_j_t);
            Some(self.word(w).neg())
        })
    }

    /// The entry of `Ψ∘Φ` at `(i, j)` predicted by hand: `Δ_X` at `(0,0)`,
    /// `Δ_Y` on the rest of the diagonal, zero above the diagonal and in
    /// the first row and column, and `Γ_τD∘h_D^{r-1+i-j}∘ᵗΓ_τD` below.
    pub fn expected_psi_phi_entry(&self, i: usize, j: usize) -> Term {
        let obj = self.source_object();
        let (s, t) = (&obj.summands[j], &obj.summands[i]);
        if i == j {
            return Term::identity(s.atom);
        }
        if i < j || i == 0 || j == 0 {
            return Term::zero(s.atom, t.atom, s.twist - t.twist);
        }
        let mut w = vec![self.gamma_td];
        w.extend(std::iter::repeat_n(self.h, self.r as usize - 1 + i - j));
        w.push(self.gamma_td_t);
        self.word(w)
    }
}

#[derive(Clone, Debug)]
pub struct BlowupMorphisms {
    pub phi: MotiveMorphism,
    pub psi: MotiveMorphism,
    pub psi_phi: MotiveMorphism,
    pub theta: MotiveMorphism,
}

/// `Φ`, `Ψ` and `Θ = (Ψ∘Φ)^{-1}∘Ψ`; fails if `Ψ∘Φ` is not unitriangular or
/// if `Θ∘Φ` does not normalize to the identity.
pub fn build_blowup_phi_psi_theta(bp: &BlowupPresentation) -> Result<BlowupMorphisms> {
    let pres = &bp.pres;
    let phi = bp.phi()?;
    let psi = bp.psi()?;
    let psi_phi = compose_morphisms(pres, &psi, &phi)?;
    let inv = neumann_inverse(pres, &psi_phi)?;
    let theta = compose_morphisms(pres, &inv, &psi)?;
    if !is_identity(pres, &compose_morphisms(pres, &theta, &phi)?) {
        return Err(Error::InverseCheckFailed("Theta∘Phi does not normalize to the identity".into()));
    }
    Ok(BlowupMorphisms { phi, psi, psi_phi, theta })
}

#[derive(Clone, Debug, Serialize)]
pub struct TwoSidedReport {
    pub r: u32,
    pub left: IdentityCheck,
    pub right: IdentityCheck,
}

pub fn verify_two_sided(s: &BlowupScenario) -> Result<TwoSidedReport> {
    let bp = build_blowup_presentation(s)?;
    let m = build_blowup_phi_psi_theta(&bp)?;
    let left = IdentityCheck::new(LEFT_INVERSE, Status::ProvedByRewriting, Vec::new());
    let right_by_rewriting = is_identity(&bp.pres, &compose_morphisms(&bp.pres, &m.phi, &m.theta)?);
    let right = if right_by_rewriting {
        IdentityCheck::new("Phi∘Theta = Delta_Xt", Status::ProvedByRewriting, Vec::new())
    } else {
        IdentityCheck::new("Phi∘Theta = Delta_Xt", Status::Axiom(MANIN.into()), vec![MANIN.into()])
    };
    Ok(TwoSidedReport { r: bp.r, left, right })
}

/// Copy of the presentation without the exceptional relations, for
/// negative tests.
pub fn without_exceptional_relations(bp: &BlowupPresentation) -> BlowupPresentation {
    BlowupPresentation { pres: bp.pres.retain_rules(|r| !r.citation.starts_with(EXCEPTIONAL)), ..bp.clone() }
}

#[derive(Clone, Debug)]
pub struct CkProjectorSet {
    /// `π^i_{X̃}` for `i = 0..=2 d_X`, as `1×1` endomorphisms of `h(X̃)`.
    pub projectors: Vec<MotiveMorphism>,
    /// `D_i = diag(π^i_X, π^{i-2j}_Y)` on the source of `Φ`.
    pub blocks: Vec<MotiveMorphism>,
    pub checks: Vec<IdentityCheck>,
}

impl CkProjectorSet {
    pub fn manin_uses(&self, identity_prefix: &str) -> usize {
        self.checks.iter().filter(|c| c.identity.starts_with(identity_prefix)).map(|c| c.uses(MANIN)).sum()
    }

    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| !c.status.is_failed())
    }
}

fn ck_block(bp: &BlowupPresentation, i: i64) -> Result<MotiveMorphism> {
    let obj = bp.source_object();
    let pick =
        |ids: &[GenId], idx: i64| -> Option<GenId> { usize::try_from(idx).ok().and_then(|k| ids.get(k).copied()) };
    MotiveMorphism::from_fn(obj.clone(), obj.clone(), |a, b| {
        if a != b {
            return None;
        }
        let g = if a == 0 { pick(&bp.ck_x, i) } else { pick(&bp.ck_y, i - 2 * a as i64) };
        g.map(|g| bp.pres.word(&[g]).expect("letter"))
    })
}

fn sum_of_letters(bp: &BlowupPresentation, atom: AtomId, ids: &[GenId]) -> Term {
    ids.iter()
        .fold(Term::zero(atom, atom, 0), |acc, g| acc.add(&bp.pres.word(&[*g]).expect("letter")).expect("same type"))
}

/// `π^i_{X̃} = Φ∘D_i∘Θ`. Orthogonality and idempotence reduce, through
/// `Θ∘Φ = id`, to `D_i∘D_k = δ_ik D_i`, which is checked by rewriting with
/// the CK relations; completeness reduces to `Σ D_i = id` (input
/// completeness) and `Φ∘Θ = Δ` (Manin, unless rewriting proves it).
pub fn synthesize_ck(s: &BlowupScenario) -> Result<CkProjectorSet> {
    let (dx, dy) = (s.d_x as usize, s.d_y as usize);
    match (&s.ck_x, &s.ck_y) {
        (Some(a), Some(b)) if a.len() == 2 * dx + 1 && b.len() == 2 * dy + 1 => {}
        (Some(a), Some(b)) => {
            return Err(Error::MissingCk(format!(
                "expected {} symbols for X and {} for Y, got {} and {}",
                2 * dx + 1,
                2 * dy + 1,
                a.len(),
                b.len()
            )))
        }
        _ => return Err(Error::MissingCk("both ck_x and ck_y are required".into())),
    }
    let bp = build_blowup_presentation(s)?;
    let pres = &bp.pres;
    let m = build_blowup_phi_psi_theta(&bp)?;
    let n = 2 * dx + 1;
    let blocks = (0..n as i64).map(|i| ck_block(&bp, i)).collect::<Result<Vec<_>>>()?;
    let projectors = blocks
        .iter()
        .map(|d| compose_morphisms(pres, &m.phi, &compose_morphisms(pres, d, &m.theta)?))
        .collect::<Result<Vec<_>>>()?;

    let two_sided = verify_two_sided(s)?;
    let mut checks = Vec::new();
    let structural = vec![LEFT_INVERSE.to_string(), CK_X_IDEMPOTENTS.to_string(), CK_Y_IDEMPOTENTS.to_string()];
    for i in 0..n {
        for k in 0..n {
            let prod = compose_morphisms(pres, &blocks[i], &blocks[k])?;
            let expected = if i == k {
                blocks[i].clone()
            } else {
                MotiveMorphism::zero(prod.source().clone(), prod.target().clone())
            };
            let ok = normalize_morphism(pres, &prod) == normalize_morphism(pres, &expected);
            let name = if i == k {
                format!("idempotent: pi^{i}∘pi^{i} = pi^{i}")
            } else {
                format!("orthogonal: pi^{i}∘pi^{k} = 0")
            };
            let status = Status::from_check(ok, || format!("D_{i}∘D_{k} does not reduce"));
            checks.push(IdentityCheck::new(name, status, structural.clone()));
        }
    }

    // completeness: Σ D_i must be diag(Σ_a π^a_X, Σ_b π^b_Y, …)
    let total =
        blocks.iter().try_fold(MotiveMorphism::zero(bp.source_object(), bp.source_object()), |acc, d| acc.add(d))?;
    let total = normalize_morphism(pres, &total);
    let obj = bp.source_object();
    let expected = MotiveMorphism::from_fn(obj.clone(), obj.clone(), |a, b| {
        (a == b).then(|| if a == 0 { sum_of_letters(&bp, bp.x, &bp.ck_x) } else { sum_of_letters(&bp, bp.y, &bp.ck_y) })
    })?;
    let mut axioms = vec![CK_X_COMPLETE.to_string()];
    if bp.r > 1 {
        axioms.push(CK_Y_COMPLETE.to_string());
    }
    axioms.extend(two_sided.right.axioms.iter().cloned());
    let status = if normalize_morphism(pres, &expected) != total {
        Status::Failed("sum of the blocks is not the full CK sum".into())
    } else {
        match &two_sided.right.status {
            Status::ProvedByRewriting => Status::Axiom(CK_X_COMPLETE.into()),
            other => other.clone(),
        }
    };
    checks.push(IdentityCheck::new("complete: sum_i pi^i = Delta_Xt", status, axioms));
    Ok(CkProjectorSet { projectors, blocks, checks })
}

/// Expands `π^i∘π^k` fully (no use of `Θ∘Φ = id` as a lemma) and compares
/// with `δ_ik π^i`. Expensive; meant for small cases.
pub fn ck_full_expansion(s: &BlowupScenario, set: &CkProjectorSet) -> Result<bool> {
    let bp = build_blowup_presentation(s)?;
    let pres = &bp.pres;
    for (i, p) in set.projectors.iter().enumerate() {
        for (k, q) in set.projectors.iter().enumerate() {
            let prod = compose_morphisms(pres, p, q)?;
            let expected =
                if i == k { p.clone() } else { MotiveMorphism::zero(p.source().clone(), p.target().clone()) };
            if prod != normalize_morphism(pres, &expected) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Ψ∘Φ` with every entry compared against [`BlowupPresentation::expected_psi_phi_entry`].
pub fn triangular_table_matches(bp: &BlowupPresentation, psi_phi: &MotiveMorphism) -> bool {
    let n = psi_phi.rows();
    (0..n).all(|i| (0..n).all(|j| *psi_phi.entry(i, j) == bp.pres.normalize(&bp.expected_psi_phi_entry(i, j))))
}
