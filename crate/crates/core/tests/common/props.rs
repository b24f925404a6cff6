//! The applications to fibrations by quadrics, cubics, complete
//! intersections and cellular varieties, written as bullets: a range of
//! instances together with the conclusions stated for each.

use motivekit_core::inference::{infer_with_fiber, Fact, FiberDescriptor, Inference, Predicate};
use Predicate::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Quadric,
    Cubic,
    Ci22,
    Ci23,
    Cellular,
}

impl Family {
    pub fn fiber(self, dim: u32) -> FiberDescriptor {
        match self {
            Family::Quadric => FiberDescriptor::Quadric { dim },
            Family::Cubic => FiberDescriptor::cubic(dim),
            Family::Ci22 => FiberDescriptor::intersection(&[2, 2], dim).unwrap(),
            Family::Ci23 => FiberDescriptor::intersection(&[2, 3], dim).unwrap(),
            Family::Cellular => FiberDescriptor::Cellular { dim },
        }
    }
}

pub struct Bullet {
    pub name: &'static str,
    pub family: Family,
    /// `(d_X, d_B)` pairs covered by the hypotheses.
    pub instances: Vec<(u32, u32)>,
    pub extra: &'static [Predicate],
    pub conclusions: &'static [Predicate],
}

impl Bullet {
    pub fn run(&self, d_x: u32, d_b: u32) -> Inference {
        let mut inputs = vec![Fact::total(TotalDim(d_x)), Fact::total(BaseDim(d_b))];
        inputs.extend(self.extra.iter().copied().map(Fact::total));
        infer_with_fiber(&self.family.fiber(d_x - d_b), &inputs)
    }

    /// Instances at which some stated conclusion is not derived, with the
    /// missing conclusions.
    #[allow(dead_code)]
    pub fn gaps(&self) -> Vec<((u32, u32), Vec<Predicate>)> {
        self.instances
            .iter()
            .filter_map(|&(d_x, d_b)| {
                let inf = self.run(d_x, d_b);
                let missing: Vec<_> = self.conclusions.iter().copied().filter(|p| !inf.holds(*p)).collect();
                (!missing.is_empty()).then_some(((d_x, d_b), missing))
            })
            .collect()
    }
}

/// Pairs with `1 ≤ d_B ≤ max_b`, fibre dimension at least `min_fiber` and
/// `d_X ≤ max_x`.
fn range(max_b: u32, max_x: u32, min_fiber: u32) -> Vec<(u32, u32)> {
    (1..=max_b).flat_map(|b| (b + min_fiber..=max_x).map(move |x| (x, b))).collect()
}

/// Largest total dimension swept where the statement has no cap.
pub const SWEEP: u32 = 10;

// Complex varieties: a dominant morphism between smooth ones is generically
// smooth, so that fact is part of every complex bullet's input.
const COMPLEX: &[Predicate] = &[GenericallySmooth];
const CELL_SING: &[Predicate] = &[GenericallySmooth, FibersConnected, FiniteSingularLocus];

pub fn bullets() -> Vec<Bullet> {
    vec![
        Bullet {
            name: "quadrics/curve",
            family: Family::Quadric,
            instances: range(1, SWEEP, 1),
            extra: COMPLEX,
            conclusions: &[KimuraFd, HasMurre],
        },
        Bullet {
            name: "quadrics/surface",
            family: Family::Quadric,
            instances: range(2, SWEEP, 1),
            extra: COMPLEX,
            conclusions: &[StandardConj],
        },
        Bullet {
            name: "quadrics/threefold",
            family: Family::Quadric,
            instances: range(3, SWEEP, 1),
            extra: COMPLEX,
            conclusions: &[HodgeConj],
        },
        Bullet {
            name: "cubics/sixfold-over-curve",
            family: Family::Cubic,
            instances: vec![(6, 1)],
            extra: COMPLEX,
            conclusions: &[StandardConj, HasMurre],
        },
        Bullet {
            name: "cubics/sevenfold",
            family: Family::Cubic,
            instances: vec![(7, 1), (7, 2)],
            extra: COMPLEX,
            conclusions: &[HodgeConj],
        },
        Bullet {
            name: "cubics/ninefold",
            family: Family::Cubic,
            instances: vec![(9, 1)],
            extra: COMPLEX,
            conclusions: &[HodgeConj],
        },
        Bullet {
            name: "(2,2)/kimura",
            family: Family::Ci22,
            instances: range(1, 5, 1),
            extra: COMPLEX,
            conclusions: &[KimuraFd],
        },
        Bullet {
            name: "(2,2)/murre",
            family: Family::Ci22,
            instances: range(1, 6, 1),
            extra: COMPLEX,
            conclusions: &[HasMurre],
        },
        Bullet {
            name: "(2,2)/standard",
            family: Family::Ci22,
            instances: range(2, 6, 1),
            extra: COMPLEX,
            conclusions: &[StandardConj],
        },
        Bullet {
            name: "(2,2)/hodge",
            family: Family::Ci22,
            instances: range(3, 7, 1),
            extra: COMPLEX,
            conclusions: &[HodgeConj],
        },
        Bullet {
            name: "(2,3)/sixfold-fibres",
            family: Family::Ci23,
            instances: vec![(7, 1)],
            extra: COMPLEX,
            conclusions: &[HodgeConj],
        },
        Bullet {
            name: "cellular/curve",
            family: Family::Cellular,
            instances: range(1, SWEEP, 1),
            extra: COMPLEX,
            conclusions: &[KimuraFd, HasMurre],
        },
        Bullet {
            name: "cellular/standard",
            family: Family::Cellular,
            instances: range(2, 6, 1),
            extra: CELL_SING,
            conclusions: &[StandardConj],
        },
        Bullet {
            name: "cellular/hodge",
            family: Family::Cellular,
            instances: range(3, 7, 1),
            extra: CELL_SING,
            conclusions: &[HodgeConj],
        },
        Bullet {
            name: "ratnum",
            family: Family::Quadric,
            instances: range(2, SWEEP, 1),
            extra: &[Flat, OverFiniteField],
            conclusions: &[RatEqNum],
        },
    ]
}

/// The conclusions the propositions talk about.
#[allow(dead_code)]
pub const CONJECTURES: &[Predicate] = &[KimuraFd, HasMurre, StandardConj, HodgeConj, RatEqNum];
