use serde::Serialize;

use super::{FinCat, Mor};
use crate::class::MorClass;

/// All `(g, h)` with `h ∘ g = f`, ordered by middle object, then `g`, then `h`.
pub fn factorizations(cat: &FinCat, f: Mor) -> Vec<(Mor, Mor)> {
    let (a, b) = (cat.src(f), cat.tgt(f));
    let mut out = Vec::new();
    for &g in cat.out_of(a) {
        for &h in cat.hom(cat.tgt(g), b) {
            if cat.comp(h, g) == f {
                out.push((g, h));
            }
        }
    }
    out
}

/// A commuting square
///
/// ```text
///        top
///    A ───────▶ C
///    │          │
/// left│          │right
///    ▼          ▼
///    C' ──────▶ B
///       bottom
/// ```
/// with `right ∘ top = bottom ∘ left`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CommSquare {
    pub top: Mor,
    pub left: Mor,
    pub right: Mor,
    pub bottom: Mor,
}

impl CommSquare {
    pub fn commutes(&self, cat: &FinCat) -> bool {
        cat.src(self.top) == cat.src(self.left)
            && cat.compose(self.right, self.top).is_some()
            && cat.compose(self.right, self.top) == cat.compose(self.bottom, self.left)
    }

    /// The same square read in the opposite category.
    pub fn opposite(&self) -> CommSquare {
        CommSquare { top: self.bottom, left: self.right, right: self.left, bottom: self.top }
    }
}

/// Optional restriction of each side of a square to a class.
#[derive(Clone, Copy, Default)]
pub struct SquareFilter<'a> {
    pub top: Option<&'a MorClass>,
    pub left: Option<&'a MorClass>,
    pub right: Option<&'a MorClass>,
    pub bottom: Option<&'a MorClass>,
}

fn admits(c: Option<&MorClass>, m: Mor) -> bool {
    c.is_none_or(|c| c.contains(m))
}

/// Every commuting square whose sides pass the filter, by brute force.
pub fn commutative_squares(cat: &FinCat, filter: SquareFilter<'_>) -> Vec<CommSquare> {
    let mut out = Vec::new();
    for top in cat.morphisms().filter(|&m| admits(filter.top, m)) {
        for &right in cat.out_of(cat.tgt(top)) {
            if !admits(filter.right, right) {
                continue;
            }
            let diag = cat.comp(right, top);
            let b = cat.tgt(right);
            for &left in cat.out_of(cat.src(top)) {
                if !admits(filter.left, left) {
                    continue;
                }
                for &bottom in cat.hom(cat.tgt(left), b) {
                    if admits(filter.bottom, bottom) && cat.comp(bottom, left) == diag {
                        out.push(CommSquare { top, left, right, bottom });
                    }
                }
            }
        }
    }
    out
}
