//! Seeded random TBoxes for property tests.

use karyotype_core::ontology::{Axiom, Concept, EntityKind, TBox};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub struct Bounds {
    pub max_classes: usize,
    pub max_roles: usize,
    pub max_axioms: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_classes: 8,
            max_roles: 3,
            max_axioms: 15,
        }
    }
}

struct Gen {
    rng: ChaCha8Rng,
    classes: Vec<String>,
    roles: Vec<String>,
}

impl Gen {
    fn class(&mut self) -> String {
        let i = self.rng.gen_range(0..self.classes.len());
        self.classes[i].clone()
    }

    fn role(&mut self) -> Option<String> {
        if self.roles.is_empty() {
            return None;
        }
        let i = self.rng.gen_range(0..self.roles.len());
        Some(self.roles[i].clone())
    }

    fn concept(&mut self, depth: u32) -> Concept {
        let roll = self.rng.gen_range(0..100);
        if depth == 0 || roll < 50 {
            return match self.rng.gen_range(0..100) {
                0..=4 => Concept::Top,
                5..=7 => Concept::Bottom,
                _ => Concept::Named(self.class()),
            };
        }
        if roll < 72 {
            let n = self.rng.gen_range(2..=3);
            return Concept::and((0..n).map(|_| self.concept(depth - 1)).collect::<Vec<_>>());
        }
        match self.role() {
            Some(r) => Concept::some(r, self.concept(depth - 1)),
            None => Concept::Named(self.class()),
        }
    }

    fn axiom(&mut self) -> Axiom {
        match self.rng.gen_range(0..100) {
            0..=54 => Axiom::SubClassOf(self.concept(2), self.concept(2)),
            55..=69 => Axiom::EquivalentTo(self.class(), self.concept(2)),
            70..=77 => Axiom::DisjointWith(self.class(), self.class()),
            78..=88 => match self.role() {
                Some(r) => Axiom::TransitiveRole(r),
                None => Axiom::SubClassOf(self.concept(1), self.concept(1)),
            },
            _ => match (self.role(), self.role()) {
                (Some(r), Some(s)) => Axiom::SubRoleOf(r, s),
                _ => Axiom::SubClassOf(self.concept(1), self.concept(1)),
            },
        }
    }
}

/// A TBox with 1..=max_classes classes, 0..=max_roles roles and
/// 0..=max_axioms axioms, fully determined by `seed`.
pub fn random_tbox(seed: u64, bounds: Bounds) -> TBox {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nc = rng.gen_range(1..=bounds.max_classes.max(1));
    let nr = rng.gen_range(0..=bounds.max_roles);
    let na = rng.gen_range(0..=bounds.max_axioms);
    let mut g = Gen {
        rng,
        classes: (0..nc).map(|i| format!("C{i}")).collect(),
        roles: (0..nr).map(|i| format!("r{i}")).collect(),
    };
    let mut t = TBox::new(format!("random{seed}"));
    for c in g.classes.clone() {
        t.declare(EntityKind::Class, &c).unwrap();
    }
    for r in g.roles.clone() {
        t.declare(EntityKind::Role, &r).unwrap();
    }
    for _ in 0..na {
        let ax = g.axiom();
        t.assert_axiom(ax).unwrap();
    }
    t
}
