//! Formal direct sums of twisted atom motives and matrices of terms between
//! them.
//!
//! Twist convention (covariant motives): a morphism `(A, s) → (A', t)` is a
//! correspondence in `CH_{d_A + s - t}(A × A')`, i.e. a term of shift
//! `s - t`. Matrix entry `(i, j)` maps source summand `j` to target
//! summand `i`; rows and columns are indexed from 0.

use std::fmt;

use crate::corr::{AtomId, Presentation, Term};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub atom: AtomId,
    pub twist: i64,
    pub label: Option<String>,
}

impl Summand {
    pub fn new(atom: AtomId, twist: i64) -> Self {
        Summand { atom, twist, label: None }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MotiveObject {
    pub summands: Vec<Summand>,
}

impl MotiveObject {
    pub fn new(summands: Vec<Summand>) -> Self {
        MotiveObject { summands }
    }

    /// `h(A)(0)`.
    pub fn single(atom: AtomId) -> Self {
        MotiveObject::new(vec![Summand::new(atom, 0)])
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Same atoms and twists in the same order (labels are ignored).
    pub fn matches(&self, other: &MotiveObject) -> bool {
        self.summands.len() == other.summands.len()
            && self.summands.iter().zip(&other.summands).all(|(a, b)| a.atom == b.atom && a.twist == b.twist)
    }

    pub fn display<'a>(&'a self, pres: &'a Presentation) -> impl fmt::Display + 'a {
        DisplayObject { obj: self, pres }
    }
}

struct DisplayObject<'a> {
    obj: &'a MotiveObject,
    pres: &'a Presentation,
}

impl fmt::Display for DisplayObject<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.obj.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .obj
            .summands
            .iter()
            .map(|s| match &s.label {
                Some(l) => l.clone(),
                None => format!("h({})({})", self.pres.atom(s.atom).name, s.twist),
            })
            .collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotiveMorphism {
    source: MotiveObject,
    target: MotiveObject,
    /// `entries[i][j]`: source summand `j` → target summand `i`.
    entries: Vec<Vec<Term>>,
}

fn expected_entry_type(source: &MotiveObject, target: &MotiveObject, i: usize, j: usize) -> (AtomId, AtomId, i64) {
    let s = &source.summands[j];
    let t = &target.summands[i];
    (s.atom, t.atom, s.twist - t.twist)
}

impl MotiveMorphism {
    /// Build a morphism, checking that every entry has the atoms and shift
    /// dictated by the summands it connects.
    pub fn new(source: MotiveObject, target: MotiveObject, entries: Vec<Vec<Term>>) -> Result<Self> {
        if entries.len() != target.len() || entries.iter().any(|r| r.len() != source.len()) {
            return Err(Error::ObjectMismatch(format!(
                "matrix shape does not match {}×{}",
                target.len(),
                source.len()
            )));
        }
        for (i, row) in entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let (sa, ta, shift) = expected_entry_type(&source, &target, i, j);
                if e.source() != sa || e.target() != ta {
                    return Err(Error::TwistInconsistency {
                        row: i,
                        col: j,
                        reason: "entry atoms differ from the summand atoms".into(),
                    });
                }
                if e.shift() != shift {
                    return Err(Error::TwistInconsistency {
                        row: i,
                        col: j,
                        reason: format!("entry shift {} but twists require {}", e.shift(), shift),
                    });
                }
            }
        }
        Ok(MotiveMorphism { source, target, entries })
    }

    pub fn zero(source: MotiveObject, target: MotiveObject) -> Self {
        let entries = (0..target.len())
            .map(|i| {
                (0..source.len())
                    .map(|j| {
                        let (s, t, shift) = expected_entry_type(&source, &target, i, j);
                        Term::zero(s, t, shift)
                    })
                    .collect()
            })
            .collect();
        MotiveMorphism { source, target, entries }
    }

    /// Build from a closure producing the nonzero entries; `None` means zero.
    pub fn from_fn(
        source: MotiveObject,
        target: MotiveObject,
        mut f: impl FnMut(usize, usize) -> Option<Term>,
    ) -> Result<Self> {
        let mut m = MotiveMorphism::zero(source.clone(), target.clone());
        for i in 0..target.len() {
            for j in 0..source.len() {
                if let Some(t) = f(i, j) {
                    m.entries[i][j] = t;
                }
            }
        }
        MotiveMorphism::new(m.source, m.target, m.entries)
    }

    pub fn source(&self) -> &MotiveObject {
        &self.source
    }

    pub fn target(&self) -> &MotiveObject {
        &self.target
    }

    pub fn entry(&self, i: usize, j: usize) -> &Term {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> usize {
        self.target.len()
    }

    pub fn cols(&self) -> usize {
        self.source.len()
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source.matches(&self.target)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Term::is_zero)
    }

    pub fn scale(&self, s: &Scalar) -> MotiveMorphism {
        self.map_entries(|t| t.scale(s))
    }

    fn map_entries(&self, f: impl Fn(&Term) -> Term) -> MotiveMorphism {
        MotiveMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            entries: self.entries.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }

    pub fn add(&self, other: &MotiveMorphism) -> Result<MotiveMorphism> {
        if !self.source.matches(&other.source) || !self.target.matches(&other.target) {
            return Err(Error::ObjectMismatch("sum of morphisms between different objects".into()));
        }
        let mut out = self.clone();
        for (i, row) in out.entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = e.add(&other.entries[i][j])?;
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MotiveMorphism) -> Result<MotiveMorphism> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    /// Entry-by-entry rendering for reports.
    pub fn display<'a>(&'a self, pres: &'a Presentation) -> impl fmt::Display + 'a {
        DisplayMorphism { m: self, pres }
    }
}

struct DisplayMorphism<'a> {
    m: &'a MotiveMorphism,
    pres: &'a Presentation,
}

impl fmt::Display for DisplayMorphism<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} -> {}", self.m.source.display(self.pres), self.m.target.display(self.pres))?;
        for (i, row) in self.m.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if !e.is_zero() {
                    writeln!(f, "  [{i},{j}] {}", self.pres.fmt_term(e))?;
                }
            }
        }
        Ok(())
    }
}

/// Outcome of [`classify_triangular`].
#[derive(Clone, Debug)]
pub struct TriangularReport {
    pub is_diagonal_scalar: bool,
    /// The common scalar `s` with every diagonal entry equal to `s · Delta`.
    pub diagonal_scalar: Option<Scalar>,
    pub strictly_upper_zero: bool,
    /// Nonzero entries strictly below the diagonal, after normalization.
    pub lower_entries: Vec<(usize, usize, Term)>,
    /// Nonzero entries strictly above the diagonal, after normalization.
    pub upper_entries: Vec<(usize, usize, Term)>,
    /// The fully normalized matrix the flags were read from.
    pub normalized: MotiveMorphism,
}

pub fn identity_morphism(obj: &MotiveObject) -> MotiveMorphism {
    let mut m = MotiveMorphism::zero(obj.clone(), obj.clone());
    for (i, s) in obj.summands.iter().enumerate() {
        m.entries[i][i] = Term::identity(s.atom);
    }
    m
}

pub fn normalize_morphism(pres: &Presentation, m: &MotiveMorphism) -> MotiveMorphism {
    m.map_entries(|t| pres.normalize(t))
}

/// `later ∘ earlier`: matrix product with entrywise composition, every
/// entry normalized and re-checked against the twist bookkeeping.
pub fn compose_morphisms(
    pres: &Presentation,
    later: &MotiveMorphism,
    earlier: &MotiveMorphism,
) -> Result<MotiveMorphism> {
    if !later.source.matches(&earlier.target) {
        return Err(Error::ObjectMismatch(format!(
            "later starts at {} but earlier ends at {}",
            later.source.display(pres),
            earlier.target.display(pres)
        )));
    }
    let mut out = MotiveMorphism::zero(earlier.source.clone(), later.target.clone());
    for i in 0..later.rows() {
        for j in 0..earlier.cols() {
            let mut acc = out.entries[i][j].clone();
            for k in 0..later.cols() {
                let (a, b) = (&later.entries[i][k], &earlier.entries[k][j]);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let prod = Term::compose(a, b)?;
                acc =
                    acc.add(&prod).map_err(|e| Error::TwistInconsistency { row: i, col: j, reason: e.to_string() })?;
            }
            out.entries[i][j] = pres.normalize(&acc);
        }
    }
    Ok(out)
}

/// Twist reflection used by [`transpose_morphism`].
///
/// Transposing a term of shift `s` from `A` to `A'` gives shift
/// `s + d_A - d_A'`, which is matched by sending each summand `(A, t)` to
/// `(A, c - t - d_A)` for a constant `c` shared by source and target. We
/// take `c` to be the midpoint of the weights `2t + d_A`, so that a
/// self-dual shape such as `h(X)(0)` is fixed; when the midpoint is not an
/// integer, `c = 0` (the plain dual). Either choice is an involution.
fn dual_constant(pres: &Presentation, a: &MotiveObject, b: &MotiveObject) -> i64 {
    let weights: Vec<i64> =
        a.summands.iter().chain(&b.summands).map(|s| 2 * s.twist + pres.atom(s.atom).dim as i64).collect();
    match (weights.iter().min(), weights.iter().max()) {
        (Some(lo), Some(hi)) if (lo + hi) % 2 == 0 => (lo + hi) / 2,
        _ => 0,
    }
}

fn dual_object(pres: &Presentation, obj: &MotiveObject, c: i64) -> MotiveObject {
    MotiveObject::new(
        obj.summands
            .iter()
            .map(|s| Summand {
                atom: s.atom,
                twist: c - s.twist - pres.atom(s.atom).dim as i64,
                label: s.label.clone(),
            })
            .collect(),
    )
}

pub fn transpose_morphism(pres: &Presentation, m: &MotiveMorphism) -> Result<MotiveMorphism> {
    let c = dual_constant(pres, &m.source, &m.target);
    let source = dual_object(pres, &m.target, c);
    let target = dual_object(pres, &m.source, c);
    let entries = (0..m.cols())
        .map(|j| (0..m.rows()).map(|i| pres.transpose_term(&m.entries[i][j])).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    MotiveMorphism::new(source, target, entries)
}

pub fn classify_triangular(pres: &Presentation, m: &MotiveMorphism) -> Result<TriangularReport> {
    if !m.is_endomorphism() {
        return Err(Error::NotEndomorphism);
    }
    let normalized = normalize_morphism(pres, m);
    let dim = m.rows();
    let mut diag: Option<Scalar> = None;
    let mut is_diagonal_scalar = true;
    for i in 0..dim {
        match normalized.entries[i][i].as_scalar_identity() {
            Some(s) if diag.as_ref().is_none_or(|d| *d == s) => diag = Some(s),
            _ => is_diagonal_scalar = false,
        }
    }
    if !is_diagonal_scalar {
        diag = None;
    }
    let mut lower_entries = Vec::new();
    let mut upper_entries = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            let e = &normalized.entries[i][j];
            if e.is_zero() || i == j {
                continue;
            }
            if i > j {
                lower_entries.push((i, j, e.clone()));
            } else {
                upper_entries.push((i, j, e.clone()));
            }
        }
    }
    Ok(TriangularReport {
        is_diagonal_scalar,
        diagonal_scalar: diag,
        strictly_upper_zero: upper_entries.is_empty(),
        lower_entries,
        upper_entries,
        normalized,
    })
}

pub fn is_identity(pres: &Presentation, m: &MotiveMorphism) -> bool {
    m.is_endomorphism() && normalize_morphism(pres, m) == identity_morphism(&m.source)
}

/// Inverse of a lower triangular endomorphism whose diagonal is `s · Delta`
/// with `s ≠ 0`: `(1/s)(id + N + … + N^k)` with `N = id - (1/s)·M` and
/// `k + 1` the matrix dimension. Both `Ξ∘M` and `M∘Ξ` are checked to
/// normalize to the identity before returning.
pub fn neumann_inverse(pres: &Presentation, m: &MotiveMorphism) -> Result<MotiveMorphism> {
    let report = classify_triangular(pres, m)?;
    let s = match report.diagonal_scalar {
        Some(s) if !s.is_zero() => s,
        _ if m.rows() == 0 => Scalar::one(),
        _ => return Err(Error::DiagonalNotScalar),
    };
    if let Some((row, col, e)) = report.upper_entries.first() {
        return Err(Error::UpperNonzero { row: *row, col: *col, entry: pres.fmt_term(e) });
    }
    let inv_s = s.recip().expect("nonzero");
    let id = identity_morphism(&m.source);
    let nil = id.sub(&report.normalized.scale(&inv_s))?;
    let nil = normalize_morphism(pres, &nil);
    let mut sum = id.clone();
    let mut power = id.clone();
    for _ in 1..m.rows() {
        power = compose_morphisms(pres, &nil, &power)?;
        if power.is_zero() {
            break;
        }
        sum = sum.add(&power)?;
    }
    let xi = normalize_morphism(pres, &sum.scale(&inv_s));
    let left = compose_morphisms(pres, &xi, m)?;
    if left != id {
        return Err(Error::InverseCheckFailed(format!("Ξ∘M is not the identity:\n{}", left.display(pres))));
    }
    let right = compose_morphisms(pres, m, &xi)?;
    if right != id {
        return Err(Error::InverseCheckFailed(format!("M∘Ξ is not the identity:\n{}", right.display(pres))));
    }
    Ok(xi)
}

/// True iff `p∘p - p` normalizes to zero.
pub fn verify_idempotent(pres: &Presentation, p: &MotiveMorphism) -> bool {
    if !p.is_endomorphism() {
        return false;
    }
    match compose_morphisms(pres, p, p).and_then(|pp| pp.sub(p)) {
        Ok(d) => normalize_morphism(pres, &d).is_zero(),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib(k: u32) -> (Presentation, AtomId, AtomId) {
        let mut p = Presentation::new();
        let b = p.add_atom("B", 2).unwrap();
        let x = p.add_atom("X", 2 + k).unwrap();
        let gf = p.make_generator("Gamma_f", x, b, (2 + k) as i64, None).unwrap();
        let tgf = p.make_generator("tGamma_f", b, x, (2 + k) as i64, Some("Gamma_f")).unwrap();
        let h = p.make_generator("h", x, x, (1 + k) as i64, Some("h")).unwrap();
        for l in 0..=k {
            let mut pat = vec![gf];
            pat.extend(std::iter::repeat_n(h, l as usize));
            pat.push(tgf);
            let repl =
                if l == k { Term::scalar_identity(b, Scalar::param()) } else { Term::zero(b, b, (k - l) as i64) };
            p.add_rule(&pat, repl, "test").unwrap();
        }
        (p, x, b)
    }

    fn base_sum(b: AtomId, k: u32) -> MotiveObject {
        MotiveObject::new((0..=k as i64).map(|i| Summand::new(b, i)).collect())
    }

    #[test]
    fn identity_shapes() {
        let (p, x, b) = fib(2);
        let id = identity_morphism(&base_sum(b, 2));
        assert_eq!(id.rows(), 3);
        assert!(is_identity(&p, &id));
        let idx = identity_morphism(&MotiveObject::single(x));
        assert_eq!(idx.entry(0, 0), &Term::identity(x));
        let empty = identity_morphism(&MotiveObject::default());
        assert_eq!((empty.rows(), empty.cols()), (0, 0));
    }

    #[test]
    fn twist_violation_is_rejected() {
        let (p, x, b) = fib(1);
        let t = p.word_by_names(&["tGamma_f"]).unwrap(); // shift 1
        let r = MotiveMorphism::new(MotiveObject::single(b), MotiveObject::single(x), vec![vec![t.clone()]]);
        assert!(matches!(r, Err(Error::TwistInconsistency { .. })));
        let ok =
            MotiveMorphism::new(MotiveObject::new(vec![Summand::new(b, 1)]), MotiveObject::single(x), vec![vec![t]]);
        assert!(ok.is_ok());
    }

    #[test]
    fn neumann_scalar_case() {
        let (p, _, b) = fib(0);
        let m = MotiveMorphism::new(
            MotiveObject::single(b),
            MotiveObject::single(b),
            vec![vec![Term::scalar_identity(b, Scalar::param())]],
        )
        .unwrap();
        let xi = neumann_inverse(&p, &m).unwrap();
        assert_eq!(p.fmt_term(xi.entry(0, 0)), "1/n*Delta_B");
    }

    #[test]
    fn neumann_two_by_two_matches_hand_expansion() {
        let (p, _, b) = fib(1);
        let obj = base_sum(b, 1);
        let e = p.word_by_names(&["Gamma_f", "h", "h", "tGamma_f"]).unwrap();
        let n = Scalar::param();
        let m = MotiveMorphism::from_fn(obj.clone(), obj.clone(), |i, j| match (i, j) {
            (0, 0) | (1, 1) => Some(Term::scalar_identity(b, n.clone())),
            (1, 0) => Some(e.clone()),
            _ => None,
        })
        .unwrap();
        let xi = neumann_inverse(&p, &m).unwrap();
        // [[1/n, 0], [-E/n^2, 1/n]], expanded by hand from (1/n)(id + N)
        let inv_n = Scalar::one() / n.clone();
        let expected = MotiveMorphism::from_fn(obj.clone(), obj, |i, j| match (i, j) {
            (0, 0) | (1, 1) => Some(Term::scalar_identity(b, inv_n.clone())),
            (1, 0) => Some(e.scale(&-(&inv_n * &inv_n))),
            _ => None,
        })
        .unwrap();
        assert_eq!(xi, expected);
    }

    #[test]
    fn neumann_rejects_bad_inputs() {
        let (p, _, b) = fib(1);
        let obj = base_sum(b, 1);
        let n = Scalar::param();
        let e = p.word_by_names(&["Gamma_f", "h", "h", "tGamma_f"]).unwrap();
        let upper = p.word_by_names(&["Gamma_f", "tGamma_f"]).unwrap(); // normalizes to 0
        let m = MotiveMorphism::from_fn(obj.clone(), obj.clone(), |i, j| match (i, j) {
            (0, 0) => Some(Term::scalar_identity(b, n.clone())),
            (1, 1) => Some(Term::scalar_identity(b, Scalar::one())),
            (0, 1) => Some(upper.clone()),
            _ => None,
        })
        .unwrap();
        assert_eq!(neumann_inverse(&p, &m).unwrap_err(), Error::DiagonalNotScalar);
        // an opaque entry above the diagonal
        let big = MotiveObject::new(vec![Summand::new(b, 1), Summand::new(b, 0)]);
        let m = MotiveMorphism::from_fn(big.clone(), big, |i, j| match (i, j) {
            (0, 0) | (1, 1) => Some(Term::scalar_identity(b, n.clone())),
            (0, 1) => Some(e.clone()),
            _ => None,
        })
        .unwrap();
        assert!(matches!(neumann_inverse(&p, &m), Err(Error::UpperNonzero { row: 0, col: 1, .. })));
        let (p2, x, _) = fib(1);
        let nonendo = MotiveMorphism::zero(MotiveObject::single(x), MotiveObject::single(b));
        assert_eq!(classify_triangular(&p2, &nonendo).unwrap_err(), Error::NotEndomorphism);
    }

    #[test]
    fn transpose_of_identity_and_involution() {
        let (p, x, b) = fib(2);
        let idx = identity_morphism(&MotiveObject::single(x));
        assert_eq!(transpose_morphism(&p, &idx).unwrap(), idx);
        let obj = base_sum(b, 2);
        let id = identity_morphism(&obj);
        let tid = transpose_morphism(&p, &id).unwrap();
        assert!(is_identity(&p, &tid));
        assert_eq!(transpose_morphism(&p, &tid).unwrap(), id);
    }

    #[test]
    fn idempotent_trivial_cases() {
        let (p, x, _) = fib(1);
        let obj = MotiveObject::single(x);
        assert!(verify_idempotent(&p, &identity_morphism(&obj)));
        assert!(verify_idempotent(&p, &MotiveMorphism::zero(obj.clone(), obj)));
    }
}
