use std::collections::BTreeMap;

use num_rational::Rational64;
use thiserror::Error;

use crate::group::{Elem, FiniteGroup};

/// Which defining condition a candidate point breaks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MilnorError {
    #[error("condition 1: {0}")]
    Coordinates(String),
    #[error("condition 2: {0}")]
    Domain(String),
    #[error("condition 3: g({0},{0}) is not the identity")]
    Diagonal(usize),
    #[error("condition 4: g({i},{j}) g({j},{k}) != g({i},{k})")]
    Composition { i: usize, j: usize, k: usize },
}

impl MilnorError {
    pub fn condition(&self) -> u8 {
        match self {
            MilnorError::Coordinates(_) => 1,
            MilnorError::Domain(_) => 2,
            MilnorError::Diagonal(_) => 3,
            MilnorError::Composition { .. } => 4,
        }
    }
}

/// Barycentric coordinates with group labels on every pair of supported
/// indices, composing along triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilnorPoint {
    t: Vec<Rational64>,
    g: BTreeMap<(usize, usize), Elem>,
}

impl MilnorPoint {
    pub fn coordinates(&self) -> &[Rational64] {
        &self.t
    }

    pub fn labels(&self) -> &BTreeMap<(usize, usize), Elem> {
        &self.g
    }

    /// Indices with nonzero coordinate.
    pub fn support(&self) -> Vec<usize> {
        support(&self.t)
    }
}

fn support(t: &[Rational64]) -> Vec<usize> {
    t.iter().enumerate().filter(|(_, x)| **x != Rational64::from_integer(0)).map(|(i, _)| i).collect()
}

/// Check the four conditions in order and report the first that fails.
pub fn validate_milnor_point(
    t: Vec<Rational64>,
    g: BTreeMap<(usize, usize), Elem>,
    group: &FiniteGroup,
) -> Result<MilnorPoint, MilnorError> {
    let (zero, one) = (Rational64::from_integer(0), Rational64::from_integer(1));
    if let Some((i, x)) = t.iter().enumerate().find(|(_, x)| **x < zero || **x > one) {
        return Err(MilnorError::Coordinates(format!("t{i} = {x} is outside [0, 1]")));
    }
    let sum: Rational64 = t.iter().sum();
    if sum != one {
        return Err(MilnorError::Coordinates(format!("coordinates sum to {sum}")));
    }
    let supp = support(&t);
    for &(i, j) in g.keys() {
        if !supp.contains(&i) || !supp.contains(&j) {
            return Err(MilnorError::Domain(format!("g({i},{j}) is given but t{i} t{j} = 0")));
        }
    }
    for &i in &supp {
        for &j in &supp {
            match g.get(&(i, j)) {
                None => return Err(MilnorError::Domain(format!("g({i},{j}) is missing"))),
                Some(&x) if x >= group.order() => {
                    return Err(MilnorError::Domain(format!("g({i},{j}) = {x} is not a group element")))
                }
                Some(_) => {}
            }
        }
    }
    if let Some(&i) = supp.iter().find(|&&i| g[&(i, i)] != group.identity()) {
        return Err(MilnorError::Diagonal(i));
    }
    for &i in &supp {
        for &j in &supp {
            for &k in &supp {
                if group.mul(g[&(i, j)], g[&(j, k)]) != g[&(i, k)] {
                    return Err(MilnorError::Composition { i, j, k });
                }
            }
        }
    }
    Ok(MilnorPoint { t, g })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn single_vertex() {
        let g = FiniteGroup::cyclic(2);
        let p = validate_milnor_point(vec![r(1, 1)], [((0, 0), 0)].into_iter().collect(), &g).unwrap();
        assert_eq!(p.support(), vec![0]);
    }

    #[test]
    fn reversed_pair_must_be_inverse() {
        let g = FiniteGroup::cyclic(3);
        let labels = [((0, 0), 0), ((0, 1), 1), ((1, 0), 1), ((1, 1), 0)].into_iter().collect();
        let err = validate_milnor_point(vec![r(1, 2), r(1, 2)], labels, &g).unwrap_err();
        assert_eq!(err, MilnorError::Composition { i: 0, j: 1, k: 0 });
        assert_eq!(err.condition(), 4);
        let labels = [((0, 0), 0), ((0, 1), 1), ((1, 0), 2), ((1, 1), 0)].into_iter().collect();
        assert!(validate_milnor_point(vec![r(1, 2), r(1, 2)], labels, &g).is_ok());
    }

    #[test]
    fn sum_must_be_one() {
        let g = FiniteGroup::trivial();
        let labels = [((0, 0), 0), ((0, 1), 0), ((1, 0), 0), ((1, 1), 0)].into_iter().collect();
        let err = validate_milnor_point(vec![r(1, 1), r(1, 1)], labels, &g).unwrap_err();
        assert_eq!(err.condition(), 1);
    }

    #[test]
    fn labels_only_on_the_support() {
        let g = FiniteGroup::cyclic(2);
        let labels = [((0, 0), 0), ((0, 1), 0)].into_iter().collect();
        let err = validate_milnor_point(vec![r(1, 1), r(0, 1)], labels, &g).unwrap_err();
        assert_eq!(err.condition(), 2);
        let err = validate_milnor_point(vec![r(1, 1)], BTreeMap::new(), &g).unwrap_err();
        assert_eq!(err.condition(), 2);
    }

    #[test]
    fn diagonal_is_identity() {
        let g = FiniteGroup::cyclic(2);
        let err = validate_milnor_point(vec![r(1, 1)], [((0, 0), 1)].into_iter().collect(), &g).unwrap_err();
        assert_eq!(err, MilnorError::Diagonal(0));
    }
}
