use std::cmp::Ordering;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OrderKind {
    Lex,
    GradedLex,
}

/// A monomial order on the variables listed in `precedence` (highest
/// first). Variables not listed are ignored, so the order compares only the
/// listed part of each monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub precedence: Vec<usize>,
}

impl MonomialOrder {
    pub fn lex(precedence: Vec<usize>) -> Self {
        MonomialOrder { kind: OrderKind::Lex, precedence }
    }

    pub fn graded_lex(precedence: Vec<usize>) -> Self {
        MonomialOrder { kind: OrderKind::GradedLex, precedence }
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        if self.kind == OrderKind::GradedLex {
            let da: u32 = self.precedence.iter().map(|&i| a[i]).sum();
            let db: u32 = self.precedence.iter().map(|&i| b[i]).sum();
            if da != db {
                return da.cmp(&db);
            }
        }
        for &i in &self.precedence {
            match a[i].cmp(&b[i]) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }

    /// Whether `var` takes part in the order.
    pub fn covers(&self, var: usize) -> bool {
        self.precedence.contains(&var)
    }

    /// The same order on a ring whose variables were re-indexed by `map`.
    pub fn embed(&self, map: &[usize]) -> MonomialOrder {
        MonomialOrder { kind: self.kind, precedence: self.precedence.iter().map(|&i| map[i]).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_beats_lex() {
        let grlex = MonomialOrder::graded_lex(vec![0, 1]);
        assert_eq!(grlex.cmp(&[0, 2], &[1, 0]), Ordering::Greater);
        let lex = MonomialOrder::lex(vec![0, 1]);
        assert_eq!(lex.cmp(&[0, 2], &[1, 0]), Ordering::Less);
    }

    #[test]
    fn precedence_reorders() {
        let lex = MonomialOrder::lex(vec![1, 0]);
        assert_eq!(lex.cmp(&[0, 1], &[5, 0]), Ordering::Greater);
        let partial = MonomialOrder::lex(vec![0]);
        assert_eq!(partial.cmp(&[1, 0], &[1, 7]), Ordering::Equal);
    }
}
