use std::collections::BTreeSet;

use super::facts::{Fact, Predicate, Subject};

/// A named result a rule is justified by, with its statement in brief.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Citation {
    pub result: &'static str,
    pub statement: &'static str,
}

/// One conclusion of a rule together with the premises it used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Firing {
    pub conclusion: Fact,
    pub premises: Vec<Fact>,
}

pub struct Rule {
    pub id: &'static str,
    pub shape: &'static str,
    pub citation: Citation,
    fire: fn(&BTreeSet<Fact>) -> Vec<Firing>,
}

impl Rule {
    pub fn fire(&self, facts: &BTreeSet<Fact>) -> Vec<Firing> {
        (self.fire)(facts)
    }
}

impl std::fmt::Debug for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Rule").field("id", &self.id).finish_non_exhaustive()
    }
}

fn has(facts: &BTreeSet<Fact>, p: Predicate) -> bool {
    facts.contains(&Fact::total(p))
}

fn dims(facts: &BTreeSet<Fact>, pick: fn(Predicate) -> Option<u32>) -> Vec<u32> {
    facts.iter().filter(|f| f.subject == Subject::Total).filter_map(|f| pick(f.predicate)).collect()
}

fn base_dims(facts: &BTreeSet<Fact>) -> Vec<u32> {
    dims(facts, |p| match p {
        Predicate::BaseDim(d) => Some(d),
        _ => None,
    })
}

fn total_dims(facts: &BTreeSet<Fact>) -> Vec<u32> {
    dims(facts, |p| match p {
        Predicate::TotalDim(d) => Some(d),
        _ => None,
    })
}

/// The niveau fact for `CH_index` with the smallest bound `≤ bound`.
fn niveau_at_most(facts: &BTreeSet<Fact>, index: u32, bound: u32) -> Option<Fact> {
    (0..=bound).map(|b| Fact::total(Predicate::Niveau { index, bound: b })).find(|f| facts.contains(f))
}

/// Fires `conclusion` when `CH_0, …, CH_L` all have niveau `≤ bound`,
/// `L = ⌊(d - offset)/2⌋`. A negative `L` asks for nothing.
fn niveau_conjecture(facts: &BTreeSet<Fact>, bound: u32, offset: i64, conclusion: Predicate) -> Vec<Firing> {
    let mut out = Vec::new();
    for d in total_dims(facts) {
        let top = (d as i64 - offset).div_euclid(2);
        let mut premises = vec![Fact::total(Predicate::TotalDim(d))];
        let ok = (0..=top).all(|i| match niveau_at_most(facts, i as u32, bound) {
            Some(f) => {
                premises.push(f);
                true
            }
            None => false,
        });
        if ok {
            out.push(Firing { conclusion: Fact::total(conclusion), premises });
        }
    }
    out
}

fn niv_lin(facts: &BTreeSet<Fact>) -> Vec<Firing> {
    let mut out = Vec::new();
    for b in base_dims(facts) {
        let mut premises = vec![Fact::total(Predicate::BaseDim(b))];
        for i in 0.. {
            let f = Fact::total(Predicate::FiberChowTrivial(i));
            if !facts.contains(&f) {
                break;
            }
            premises.push(f);
            out.push(Firing {
                conclusion: Fact::total(Predicate::Niveau { index: i, bound: b }),
                premises: premises.clone(),
            });
        }
    }
    out
}

fn niv_curve(facts: &BTreeSet<Fact>) -> Vec<Firing> {
    let mut out = Vec::new();
    if !has(facts, Predicate::BaseDim(1)) || !has(facts, Predicate::GenericallySmooth) {
        return out;
    }
    let mut premises = vec![Fact::total(Predicate::BaseDim(1)), Fact::total(Predicate::GenericallySmooth)];
    for i in 0.. {
        let f = Fact::total(Predicate::FiberChowFg(i));
        if !facts.contains(&f) {
            break;
        }
        premises.push(f);
        out.push(Firing {
            conclusion: Fact::total(Predicate::Niveau { index: i, bound: 1 }),
            premises: premises.clone(),
        });
    }
    out
}

fn niv_sing(facts: &BTreeSet<Fact>) -> Vec<Firing> {
    let mut out = Vec::new();
    if !has(facts, Predicate::FiniteSingularLocus) {
        return out;
    }
    for b in base_dims(facts) {
        let mut premises = vec![Fact::total(Predicate::BaseDim(b)), Fact::total(Predicate::FiniteSingularLocus)];
        for i in 0.. {
            let fg = Fact::total(Predicate::FiberChowFg(i));
            if !facts.contains(&fg) {
                break;
            }
            premises.push(fg);
            if i > 0 {
                let everywhere = Fact::total(Predicate::FiberChowTrivial(i - 1));
                let cofinite = Fact::total(Predicate::FiberChowTrivialCofinite(i - 1));
                if facts.contains(&everywhere) {
                    premises.push(everywhere);
                } else if facts.contains(&cofinite) {
                    premises.push(cofinite);
                } else {
                    break;
                }
            }
            out.push(Firing {
                conclusion: Fact::total(Predicate::Niveau { index: i, bound: b }),
                premises: premises.clone(),
            });
        }
    }
    out
}

fn mumford(facts: &BTreeSet<Fact>) -> Vec<Firing> {
    let premises =
        [Predicate::FibersConnected, Predicate::FiniteSingularLocus, Predicate::FiberChowFg(0)].map(Fact::total);
    if premises.iter().all(|f| facts.contains(f)) {
        vec![Firing { conclusion: Fact::total(Predicate::FiberChowTrivialCofinite(0)), premises: premises.to_vec() }]
    } else {
        Vec::new()
    }
}

fn quad_murre(facts: &BTreeSet<Fact>) -> Vec<Firing> {
    let mut out = Vec::new();
    if !has(facts, Predicate::Flat) {
        return out;
    }
    for d in total_dims(facts) {
        for b in base_dims(facts) {
            if b > d {
                continue;
            }
            let mut premises = vec![
                Fact::total(Predicate::Flat),
                Fact::total(Predicate::TotalDim(d)),
                Fact::total(Predicate::BaseDim(b)),
            ];
            // CH_l(X_b) = Q for 2l < d - b
            let ok = (0..).take_while(|l| 2 * l < d - b).all(|l| {
                let f = Fact::total(Predicate::FiberChowTrivial(l));
                premises.push(f);
                facts.contains(&f)
            });
            if !ok {
                continue;
            }
            if b <= 2 {
                out.push(Firing { conclusion: Fact::total(Predicate::HasMurre), premises: premises.clone() });
            }
            if b == 1 {
                out.push(Firing { conclusion: Fact::total(Predicate::KimuraFd), premises: premises.clone() });
            }
            let base_murre = Fact::base(Predicate::HasMurre);
            if b == 3 && (d - b) % 2 == 1 && facts.contains(&base_murre) {
                let mut p = premises.clone();
                p.push(base_murre);
                out.push(Firing { conclusion: Fact::total(Predicate::HasMurre), premises: p });
            }
        }
    }
    out
}

fn ratnum(facts: &BTreeSet<Fact>) -> Vec<Firing> {
    let fixed = [Predicate::OverFiniteField, Predicate::Flat, Predicate::FibersQuadric].map(Fact::total);
    if !fixed.iter().all(|f| facts.contains(f)) {
        return Vec::new();
    }
    base_dims(facts)
        .into_iter()
        .filter(|&b| b <= 2)
        .map(|b| {
            let mut premises = fixed.to_vec();
            premises.push(Fact::total(Predicate::BaseDim(b)));
            Firing { conclusion: Fact::total(Predicate::RatEqNum), premises }
        })
        .collect()
}

fn conj_hodge(facts: &BTreeSet<Fact>) -> Vec<Firing> {
    niveau_conjecture(facts, 3, 4, Predicate::HodgeConj)
}

fn conj_std(facts: &BTreeSet<Fact>) -> Vec<Firing> {
    niveau_conjecture(facts, 2, 3, Predicate::StandardConj)
}

fn conj_murre(facts: &BTreeSet<Fact>) -> Vec<Firing> {
    niveau_conjecture(facts, 1, 3, Predicate::HasMurre)
}

fn conj_kimura(facts: &BTreeSet<Fact>) -> Vec<Firing> {
    niveau_conjecture(facts, 1, 2, Predicate::KimuraFd)
}

/// The rule catalog, in application order.
pub static CATALOG: &[Rule] = &[
    Rule {
        id: "R-mumford",
        shape: "fibers_connected + finite_singular_locus + fiber_chow_fg(0) => fiber_chow_trivial_cofinite(0)",
        citation: Citation {
            result: "Mumford",
            statement: "a connected smooth projective complex variety with finitely generated CH_0 has CH_0 generated by a point; applied to the smooth fibres",
        },
        fire: mumford,
    },
    Rule {
        id: "R-niv-lin",
        shape: "base_dim(b) + fiber_chow_trivial(0..=i) => niveau(i,b)",
        citation: Citation {
            result: "fibres with trivial Chow groups",
            statement: "if CH_i(X_b) = Q for all i <= l and all closed b, then CH_i(X) has niveau <= d_B for i <= l",
        },
        fire: niv_lin,
    },
    Rule {
        id: "R-niv-curve",
        shape: "base_dim(1) + generically_smooth + fiber_chow_fg(0..=i) => niveau(i,1)",
        citation: Citation {
            result: "fibrations over a curve",
            statement: "generically smooth over a smooth curve with CH_i(X_c) finitely generated for i <= l gives niveau <= 1 for i <= l",
        },
        fire: niv_curve,
    },
    Rule {
        id: "R-niv-sing",
        shape: "base_dim(b) + finite_singular_locus + fiber_chow_fg(0..=i) + fiber_chow_trivial[_cofinite](0..i) => niveau(i,b)",
        citation: Citation {
            result: "fibrations with finitely many singular fibres",
            statement: "finite singular locus, CH_i(X_b) finitely generated for i <= l and CH_i(X_b) = Q for i < l away from finitely many b gives niveau <= d_B for i <= l",
        },
        fire: niv_sing,
    },
    Rule {
        id: "R-conj-hodge",
        shape: "total_dim(d) + niveau(i,<=3) for i <= floor((d-4)/2) => hodge_conj",
        citation: Citation {
            result: "small niveau, first case (Laterveer)",
            statement: "CH_0..CH_l of niveau <= 3 with l = floor((d-4)/2) implies the Hodge conjecture",
        },
        fire: conj_hodge,
    },
    Rule {
        id: "R-conj-std",
        shape: "total_dim(d) + niveau(i,<=2) for i <= floor((d-3)/2) => standard_conj",
        citation: Citation {
            result: "small niveau, second case",
            statement: "CH_0..CH_l of niveau <= 2 with l = floor((d-3)/2) implies the Lefschetz standard conjecture",
        },
        fire: conj_std,
    },
    Rule {
        id: "R-conj-murre",
        shape: "total_dim(d) + niveau(i,<=1) for i <= floor((d-3)/2) => has_murre",
        citation: Citation {
            result: "small niveau, third case",
            statement: "CH_0..CH_l of niveau <= 1 with l = floor((d-3)/2) gives a Murre decomposition",
        },
        fire: conj_murre,
    },
    Rule {
        id: "R-conj-kimura",
        shape: "total_dim(d) + niveau(i,<=1) for i <= floor((d-2)/2) => kimura_fd",
        citation: Citation {
            result: "small niveau, fourth case",
            statement: "CH_0..CH_l of niveau <= 1 with l = floor((d-2)/2) gives Kimura finite-dimensionality",
        },
        fire: conj_kimura,
    },
    Rule {
        id: "R-quad-murre",
        shape: "flat + total_dim(d) + base_dim(b) + fiber_chow_trivial(l) for 2l < d-b => has_murre (b <= 2), kimura_fd (b = 1), has_murre (b = 3, d-b odd, B:has_murre)",
        citation: Citation {
            result: "flat fibrations with half-trivial fibres",
            statement: "CH_l(X_b) = Q for l < (d_X-d_B)/2 splits h(X) into twists of h(B) and one small summand; Murre for d_B <= 2, Kimura for d_B = 1, Murre for d_B = 3 with odd relative dimension when B has one",
        },
        fire: quad_murre,
    },
    Rule {
        id: "R-ratnum",
        shape: "over_finite_field + flat + fibers_quadric + base_dim(b <= 2) => rat_eq_num",
        citation: Citation {
            result: "quadric fibrations over finite fields",
            statement: "flat quadric fibrations over a base of dimension <= 2 over a finite field have numerical and rational equivalence agreeing",
        },
        fire: ratnum,
    },
];
