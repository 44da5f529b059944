//! The bar construction, classifying maps of transition cocycles, the
//! universal bundle, and the count of cocycle classes against conjugacy
//! classes of representations.

mod bar;
mod map;
mod milnor;
mod universal;

pub use bar::{bar_construction, bar_face, BarComplex, DEFAULT_BAR_DIMENSION};
pub use map::{classifying_map, same_degree1_action, ClassifyingMap};
pub use milnor::{validate_milnor_point, MilnorError, MilnorPoint};
pub use universal::{universal_bundle, TotalSimplex, UniversalBundle};

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::bundle::{fiber_isomorphism, total_space, BundleError};
use crate::cocycle::{equivalence_classes, nerve_presentation, CocycleError};
use crate::cover::Cover;
use crate::group::{hom_conjugacy_classes, Elem, FiniteGroup, GroupAction};
use crate::label::Label;
use crate::simplicial::{enumerate_homs, ChainError, Pi1Error};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyingError {
    #[error("nerve has dimension {nerve}, bar construction is truncated at {bar}")]
    Truncation { nerve: usize, bar: usize },
    #[error("no value on the nerve edge {0:?}")]
    MissingEdge(Vec<Label>),
    #[error("element {0} is outside the group")]
    OutOfRange(Elem),
    #[error("maps are over different nerves or groups")]
    Mismatch,
    #[error("nerve is disconnected")]
    Disconnected,
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    Bundle(Box<BundleError>),
    #[error(transparent)]
    Pi1(#[from] Pi1Error),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeValue {
    pub from: Label,
    pub to: Label,
    pub value: Elem,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RepresentativeCheck {
    pub edges: Vec<EdgeValue>,
    /// Pullback of the universal bundle is isomorphic to the direct quotient.
    pub pullback_isomorphic: bool,
    /// The universal transitions read back along the map give the cocycle.
    pub cocycle_recovered: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassificationReport {
    pub cocycle_classes: usize,
    pub conjugacy_classes: usize,
    pub representatives: Vec<RepresentativeCheck>,
}

impl ClassificationReport {
    pub fn counts_agree(&self) -> bool {
        self.cocycle_classes == self.conjugacy_classes
    }

    pub fn holds(&self) -> bool {
        self.counts_agree() && self.representatives.iter().all(|r| r.pullback_isomorphic && r.cocycle_recovered)
    }
}

/// Count cocycle classes on a good cover with connected nerve, compare with
/// the conjugacy classes of homomorphisms out of the nerve's edge-path
/// group, and check the universal pullback for one cocycle per class.
pub fn classification_check(
    cover: impl Into<Arc<Cover>>,
    group: &FiniteGroup,
    budget: u64,
) -> Result<ClassificationReport, ClassifyingError> {
    let cover = cover.into();
    if !cover.nerve().complex().is_connected() {
        return Err(ClassifyingError::Disconnected);
    }
    let classes = equivalence_classes(cover.clone(), group, budget)?;
    let p = nerve_presentation(&cover)?;
    let conjugacy = hom_conjugacy_classes(&enumerate_homs(&p, group), group);

    let dimension = cover.nerve().complex().dimension().unwrap_or(0).max(DEFAULT_BAR_DIMENSION);
    let universal = universal_bundle(group, dimension);
    let action = GroupAction::regular(group);
    let mut representatives = Vec::new();
    for class in &classes {
        let c = &class[0];
        let map = classifying_map(c, dimension)?;
        let pulled = universal.pullback(&map)?;
        let direct = total_space(c, &action)?;
        let pullback_isomorphic = fiber_isomorphism(&pulled, &direct, budget)?.is_some();
        let cocycle_recovered = &universal.pullback_cocycle(&map, &cover)? == c;
        let edges = c.labeled_values().into_iter().map(|((from, to), value)| EdgeValue { from, to, value }).collect();
        representatives.push(RepresentativeCheck { edges, pullback_isomorphic, cocycle_recovered });
    }
    Ok(ClassificationReport { cocycle_classes: classes.len(), conjugacy_classes: conjugacy.len(), representatives })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::star_cover;
    use crate::search::DEFAULT_BUDGET;
    use crate::simplicial::SimplicialComplex;

    fn circle() -> SimplicialComplex {
        SimplicialComplex::build([["a", "b"], ["b", "c"], ["a", "c"]]).unwrap()
    }

    #[test]
    fn circle_with_order_two() {
        let r = classification_check(star_cover(&circle()), &FiniteGroup::cyclic(2), DEFAULT_BUDGET).unwrap();
        assert_eq!((r.cocycle_classes, r.conjugacy_classes), (2, 2));
        assert!(r.holds());
    }

    #[test]
    fn circle_with_s3() {
        let r = classification_check(star_cover(&circle()), &FiniteGroup::symmetric(3), DEFAULT_BUDGET).unwrap();
        assert_eq!((r.cocycle_classes, r.conjugacy_classes), (3, 3));
        assert!(r.holds());
    }

    #[test]
    fn full_triangle_has_one_class() {
        let x = SimplicialComplex::build([["a", "b", "c"]]).unwrap();
        for g in [FiniteGroup::cyclic(2), FiniteGroup::symmetric(3)] {
            let r = classification_check(star_cover(&x), &g, DEFAULT_BUDGET).unwrap();
            assert_eq!((r.cocycle_classes, r.conjugacy_classes), (1, 1));
            assert!(r.holds());
        }
    }

    #[test]
    fn disconnected_nerve_is_rejected() {
        let x = SimplicialComplex::build(vec![vec!["a"], vec!["b"]]).unwrap();
        let err = classification_check(star_cover(&x), &FiniteGroup::cyclic(2), DEFAULT_BUDGET).unwrap_err();
        assert_eq!(err, ClassifyingError::Disconnected);
    }
}
