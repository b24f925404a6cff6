//! The free algebra of correspondence words over `Q(n)` and its rewriting.
//!
//! A [`Presentation`] registers atoms (smooth projective varieties, named
//! with their dimension), generators (correspondences between atoms with a
//! fixed Chow dimension) and length-decreasing rewrite rules. A [`Term`] is
//! a finitely supported `Q(n)`-linear combination of composable [`Word`]s
//! that all share the same source, target and shift.
//!
//! Words are stored in written order: `Gamma_f ∘ h ∘ tGamma_f` is the list
//! `[Gamma_f, h, tGamma_f]`, so the last letter acts first. The empty word
//! at an atom `A` is the diagonal `Delta_A`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomId(u32);

/// Generator handle. The inner index is the registration order, which is
/// also the canonical letter order used to sort words.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenId(u32);

impl AtomId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl GenId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub name: String,
    pub dim: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub source: AtomId,
    pub target: AtomId,
    /// `k` such that the generator is a class in `CH_k(source × target)`.
    pub chow_dim: i64,
    pub transpose: Option<GenId>,
    shift: i64,
}

impl Generator {
    /// `chow_dim - dim(source)`: the amount by which the generator raises
    /// the Chow index when acting covariantly.
    pub fn shift(&self) -> i64 {
        self.shift
    }
}

/// A word of generators in written order (leftmost acts last).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<GenId>);

impl Word {
    pub fn new(letters: Vec<GenId>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[GenId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self ∘ earlier`.
    pub fn then_after(&self, earlier: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + earlier.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&earlier.0);
        Word(v)
    }

    /// Maximal runs of equal letters, e.g. `[h, h, g]` → `[(h, 2), (g, 1)]`.
    pub fn runs(&self) -> Vec<(GenId, usize)> {
        let mut out: Vec<(GenId, usize)> = Vec::new();
        for &g in &self.0 {
            match out.last_mut() {
                Some((last, k)) if *last == g => *k += 1,
                _ => out.push((g, 1)),
            }
        }
        out
    }
}

/// Homogeneous `Q(n)`-linear combination of words.
///
/// The zero term keeps its source, target and shift so that homogeneity
/// checks still apply to it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    source: AtomId,
    target: AtomId,
    shift: i64,
    entries: BTreeMap<Word, Scalar>,
}

impl Term {
    pub fn zero(source: AtomId, target: AtomId, shift: i64) -> Self {
        Term { source, target, shift, entries: BTreeMap::new() }
    }

    /// `Delta_A`.
    pub fn identity(atom: AtomId) -> Self {
        Term::scalar_identity(atom, Scalar::one())
    }

    /// `s · Delta_A`.
    pub fn scalar_identity(atom: AtomId, s: Scalar) -> Self {
        let mut t = Term::zero(atom, atom, 0);
        t.push(Word::empty(), s);
        t
    }

    pub fn source(&self) -> AtomId {
        self.source
    }

    pub fn target(&self) -> AtomId {
        self.target
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Words with their coefficients, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.entries.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.entries.get(w).cloned().unwrap_or_default()
    }

    /// If the term is `s · Delta`, return `s` (zero counts, with `s = 0`).
    pub fn as_scalar_identity(&self) -> Option<Scalar> {
        if self.source != self.target || self.shift != 0 {
            return None;
        }
        match self.entries.len() {
            0 => Some(Scalar::zero()),
            1 => self.entries.get(&Word::empty()).cloned(),
            _ => None,
        }
    }

    fn push(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn same_type(&self, other: &Term) -> bool {
        self.source == other.source && self.target == other.target && self.shift == other.shift
    }

    fn type_string(&self) -> String {
        format!("(source #{}, target #{}, shift {})", self.source.0, self.target.0, self.shift)
    }

    pub fn add(&self, other: &Term) -> Result<Term> {
        if !self.same_type(other) {
            return Err(Error::Inhomogeneous(format!("{} + {}", self.type_string(), other.type_string())));
        }
        let mut out = self.clone();
        for (w, c) in &other.entries {
            out.push(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Term) -> Result<Term> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Term {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> Term {
        let mut out = Term::zero(self.source, self.target, self.shift);
        if s.is_zero() {
            return out;
        }
        for (w, c) in &self.entries {
            out.push(w.clone(), c * s);
        }
        out
    }

    /// `later ∘ earlier`, extended bilinearly from word concatenation.
    /// The result is not normalized.
    pub fn compose(later: &Term, earlier: &Term) -> Result<Term> {
        if later.source != earlier.target {
            return Err(Error::AtomMismatch(format!(
                "cannot compose: later starts at #{} but earlier ends at #{}",
                later.source.0, earlier.target.0
            )));
        }
        let mut out = Term::zero(earlier.source, later.target, later.shift + earlier.shift);
        for (wl, cl) in &later.entries {
            for (we, ce) in &earlier.entries {
                out.push(wl.then_after(we), cl * ce);
            }
        }
        Ok(out)
    }
}

/// Contiguous-subword rewrite rule `pattern → replacement`.
#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub pattern: Word,
    pub replacement: Term,
    pub citation: String,
}

/// Which occurrence of a redex to contract first.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

#[derive(Clone, Debug, Default)]
pub struct Presentation {
    atoms: Vec<Atom>,
    generators: Vec<Generator>,
    rules: Vec<RewriteRule>,
    atom_names: HashMap<String, AtomId>,
    gen_names: HashMap<String, GenId>,
    by_first_letter: HashMap<GenId, Vec<usize>>,
}

impl Presentation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_atom(&mut self, name: &str, dim: u32) -> Result<AtomId> {
        if self.atom_names.contains_key(name) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        let id = AtomId(self.atoms.len() as u32);
        self.atoms.push(Atom { name: name.to_string(), dim });
        self.atom_names.insert(name.to_string(), id);
        Ok(id)
    }

    /// Register a generator. `transpose_of` names an existing partner with
    /// mirrored source/target and equal Chow dimension; passing the new
    /// generator's own name declares it self-transpose.
    pub fn make_generator(
        &mut self,
        name: &str,
        source: AtomId,
        target: AtomId,
        chow_dim: i64,
        transpose_of: Option<&str>,
    ) -> Result<GenId> {
        if self.gen_names.contains_key(name) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        let id = GenId(self.generators.len() as u32);
        let mismatch = |reason: &str| Error::TransposeMismatch { name: name.to_string(), reason: reason.to_string() };
        let partner = match transpose_of {
            None => None,
            Some(p) if p == name => {
                if source != target {
                    return Err(mismatch("self-transpose requires source = target"));
                }
                Some(id)
            }
            Some(p) => {
                let pid = self.gen_id(p)?;
                let g = &self.generators[pid.index()];
                if g.transpose.is_some() {
                    return Err(mismatch(&format!("`{p}` already has a transpose")));
                }
                if g.source != target || g.target != source {
                    return Err(mismatch("source/target are not mirrored"));
                }
                if g.chow_dim != chow_dim {
                    return Err(mismatch("Chow dimensions differ"));
                }
                Some(pid)
            }
        };
        let shift = chow_dim - self.atoms[source.index()].dim as i64;
        self.generators.push(Generator { name: name.to_string(), source, target, chow_dim, transpose: partner, shift });
        if let Some(pid) = partner {
            self.generators[pid.index()].transpose = Some(id);
        }
        self.gen_names.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn atom(&self, id: AtomId) -> &Atom {
        &self.atoms[id.index()]
    }

    pub fn generator(&self, id: GenId) -> &Generator {
        &self.generators[id.index()]
    }

    pub fn atom_id(&self, name: &str) -> Result<AtomId> {
        self.atom_names.get(name).copied().ok_or_else(|| Error::UnknownAtom(name.to_string()))
    }

    pub fn gen_id(&self, name: &str) -> Result<GenId> {
        self.gen_names.get(name).copied().ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Source, target and shift of a nonempty word, checking composability.
    fn word_type(&self, letters: &[GenId]) -> Result<(AtomId, AtomId, i64)> {
        let (last, rest) =
            letters.split_last().ok_or_else(|| Error::AtomMismatch("empty word has no endpoints".into()))?;
        let first = self.generator(*last);
        let (source, mut cur, mut shift) = (first.source, first.target, first.shift);
        for g in rest.iter().rev() {
            let g = self.generator(*g);
            if g.source != cur {
                return Err(Error::AtomMismatch(format!(
                    "`{}` starts at {} but the preceding factor ends at {}",
                    g.name,
                    self.atom(g.source).name,
                    self.atom(cur).name
                )));
            }
            cur = g.target;
            shift += g.shift;
        }
        Ok((source, cur, shift))
    }

    /// The term `1 · letters` for a nonempty composable word.
    pub fn word(&self, letters: &[GenId]) -> Result<Term> {
        let (s, t, shift) = self.word_type(letters)?;
        let mut out = Term::zero(s, t, shift);
        out.push(Word::new(letters.to_vec()), Scalar::one());
        Ok(out)
    }

    /// Convenience: look up generators by name and build the word term.
    pub fn word_by_names(&self, names: &[&str]) -> Result<Term> {
        let letters = names.iter().map(|n| self.gen_id(n)).collect::<Result<Vec<_>>>()?;
        self.word(&letters)
    }

    /// Register `pattern → replacement`. Rules must preserve source, target
    /// and shift, and every replacement word must be strictly shorter than
    /// the pattern, which makes rewriting terminate.
    pub fn add_rule(&mut self, pattern: &[GenId], replacement: Term, citation: &str) -> Result<()> {
        let invalid = |reason: String| Error::InvalidRule { citation: citation.to_string(), reason };
        let (s, t, shift) = self.word_type(pattern).map_err(|e| invalid(e.to_string()))?;
        if replacement.source != s || replacement.target != t || replacement.shift != shift {
            return Err(invalid(format!(
                "replacement type {} differs from pattern type (#{}, #{}, {})",
                replacement.type_string(),
                s.0,
                t.0,
                shift
            )));
        }
        if let Some((w, _)) = replacement.iter().find(|(w, _)| w.len() >= pattern.len()) {
            return Err(invalid(format!(
                "replacement word of length {} is not shorter than the pattern (length {})",
                w.len(),
                pattern.len()
            )));
        }
        let idx = self.rules.len();
        self.by_first_letter.entry(pattern[0]).or_default().push(idx);
        self.rules.push(RewriteRule {
            pattern: Word::new(pattern.to_vec()),
            replacement,
            citation: citation.to_string(),
        });
        Ok(())
    }

    /// A copy of the presentation keeping only the rules for which `keep`
    /// returns true.
    pub fn retain_rules(&self, keep: impl Fn(&RewriteRule) -> bool) -> Presentation {
        let mut out = Presentation {
            atoms: self.atoms.clone(),
            generators: self.generators.clone(),
            rules: Vec::new(),
            atom_names: self.atom_names.clone(),
            gen_names: self.gen_names.clone(),
            by_first_letter: HashMap::new(),
        };
        for r in self.rules.iter().filter(|r| keep(r)) {
            let idx = out.rules.len();
            out.by_first_letter.entry(r.pattern.0[0]).or_default().push(idx);
            out.rules.push(r.clone());
        }
        out
    }

    /// Reverse every word and replace each letter by its transpose partner.
    pub fn transpose_term(&self, t: &Term) -> Result<Term> {
        let ds = self.atom(t.source).dim as i64;
        let dt = self.atom(t.target).dim as i64;
        let mut out = Term::zero(t.target, t.source, t.shift + ds - dt);
        for (w, c) in &t.entries {
            let letters = w
                .0
                .iter()
                .rev()
                .map(|g| {
                    self.generator(*g).transpose.ok_or_else(|| Error::MissingTranspose(self.generator(*g).name.clone()))
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(Word::new(letters), c.clone());
        }
        Ok(out)
    }

    /// Normal form under the leftmost reduction strategy.
    pub fn normalize(&self, t: &Term) -> Term {
        self.normalize_with(t, Strategy::Leftmost)
    }

    pub fn normalize_with(&self, t: &Term, strategy: Strategy) -> Term {
        let mut cache = HashMap::new();
        let mut out = Term::zero(t.source, t.target, t.shift);
        for (w, c) in &t.entries {
            for (nw, nc) in self.normalize_word(&w.0, strategy, &mut cache) {
                out.push(nw.clone(), nc * c);
            }
        }
        out
    }

    fn find_redex(&self, w: &[GenId], strategy: Strategy) -> Option<(usize, usize)> {
        let matches_at = |start: usize| -> Option<usize> {
            let cands = self.by_first_letter.get(&w[start])?;
            cands.iter().copied().find(|&ri| w[start..].starts_with(&self.rules[ri].pattern.0))
        };
        match strategy {
            Strategy::Leftmost => (0..w.len()).find_map(|s| matches_at(s).map(|r| (s, r))),
            Strategy::Rightmost => (0..w.len()).rev().find_map(|s| matches_at(s).map(|r| (s, r))),
        }
    }

    fn normalize_word(
        &self,
        w: &[GenId],
        strategy: Strategy,
        cache: &mut HashMap<Vec<GenId>, Vec<(Word, Scalar)>>,
    ) -> Vec<(Word, Scalar)> {
        if let Some(hit) = cache.get(w) {
            return hit.clone();
        }
        let result = match self.find_redex(w, strategy) {
            None => vec![(Word::new(w.to_vec()), Scalar::one())],
            Some((start, ri)) => {
                let rule = &self.rules[ri];
                let end = start + rule.pattern.len();
                let mut acc: BTreeMap<Word, Scalar> = BTreeMap::new();
                for (rw, rc) in rule.replacement.iter() {
                    let mut next = Vec::with_capacity(w.len());
                    next.extend_from_slice(&w[..start]);
                    next.extend_from_slice(&rw.0);
                    next.extend_from_slice(&w[end..]);
                    for (nw, nc) in self.normalize_word(&next, strategy, cache) {
                        let v = &acc.get(&nw).cloned().unwrap_or_default() + &(&nc * rc);
                        if v.is_zero() {
                            acc.remove(&nw);
                        } else {
                            acc.insert(nw, v);
                        }
                    }
                }
                acc.into_iter().collect()
            }
        };
        cache.insert(w.to_vec(), result.clone());
        result
    }

    /// Human-readable word, with powers collapsed: `Gamma_f∘h^2∘tGamma_f`.
    pub fn fmt_word(&self, w: &Word, source: AtomId) -> String {
        if w.is_empty() {
            return format!("Delta_{}", self.atom(source).name);
        }
        w.runs()
            .iter()
            .map(|(g, k)| {
                let name = &self.generator(*g).name;
                if *k == 1 {
                    name.clone()
                } else {
                    format!("{name}^{k}")
                }
            })
            .collect::<Vec<_>>()
            .join("∘")
    }

    pub fn fmt_term(&self, t: &Term) -> String {
        if t.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (w, c)) in t.iter().enumerate() {
            let word = self.fmt_word(w, t.source);
            let cs = c.to_string();
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) if !rest.contains(' ') => (true, rest.to_string()),
                _ => (false, cs.clone()),
            };
            if i > 0 {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            if body == "1" {
                s.push_str(&word);
            } else if body.contains(' ') {
                let _ = write!(s, "({body})*{word}");
            } else {
                let _ = write!(s, "{body}*{word}");
            }
        }
        s
    }

    /// A random composable word of length `1..=max_len`, generated as a walk
    /// along generators (the first generated letter acts first).
    pub fn random_word(&self, rng: &mut impl Rng, max_len: usize) -> Option<Term> {
        if self.generators.is_empty() || max_len == 0 {
            return None;
        }
        let len = rng.gen_range(1..=max_len);
        let mut applied = vec![GenId(rng.gen_range(0..self.generators.len()) as u32)];
        while applied.len() < len {
            let cur = self.generator(*applied.last().unwrap()).target;
            let next: Vec<GenId> =
                (0..self.generators.len() as u32).map(GenId).filter(|g| self.generator(*g).source == cur).collect();
            match next.choose(rng) {
                Some(g) => applied.push(*g),
                None => break,
            }
        }
        applied.reverse();
        self.word(&applied).ok()
    }

    /// Normalize seeded random words under the leftmost and the rightmost
    /// strategy and report every word whose two normal forms differ.
    pub fn check_confluence_sample(&self, trials: usize, seed: u64, max_len: usize) -> ConfluenceReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = ConfluenceReport { trials, seed, rewritten: 0, discrepancies: Vec::new() };
        for _ in 0..trials {
            let Some(t) = self.random_word(&mut rng, max_len) else {
                continue;
            };
            let left = self.normalize_with(&t, Strategy::Leftmost);
            let right = self.normalize_with(&t, Strategy::Rightmost);
            if left != t {
                report.rewritten += 1;
            }
            if left != right {
                report.discrepancies.push(Discrepancy {
                    word: self.fmt_term(&t),
                    leftmost: self.fmt_term(&left),
                    rightmost: self.fmt_term(&right),
                });
            }
        }
        report
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub word: String,
    pub leftmost: String,
    pub rightmost: String,
}

#[derive(Clone, Debug)]
pub struct ConfluenceReport {
    pub trials: usize,
    pub seed: u64,
    /// Sampled words that had at least one redex.
    pub rewritten: usize,
    pub discrepancies: Vec<Discrepancy>,
}

impl ConfluenceReport {
    pub fn is_clean(&self) -> bool {
        self.discrepancies.is_empty()
    }
}
