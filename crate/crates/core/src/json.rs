//! JSON documents for complexes, groups, covers, cocycles, gerbes, bundles
//! and coordinate points. Vertex and index names are strings; compound
//! labels produced by constructions are written in their display form.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bundle::{Bundle, BundleError};
use crate::cover::{star_cover, Cover, CoverError};
use crate::group::{ActionError, CrossedModule, CrossedModuleError, Elem, FiniteGroup, GroupAction, GroupError};
use crate::label::Label;
use crate::simplicial::{ComplexError, MapError, SimplicialComplex, SimplicialMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocError {
    #[error("complex: {0}")]
    Complex(#[from] ComplexError),
    #[error("map: {0}")]
    Map(#[from] MapError),
    #[error("group: {0}")]
    Group(#[from] GroupError),
    #[error("action: {0}")]
    Action(#[from] ActionError),
    #[error("crossed module: {0}")]
    Crossed(#[from] CrossedModuleError),
    #[error("cover: {0}")]
    Cover(#[from] CoverError),
    #[error("bundle: {0}")]
    Bundle(#[from] BundleError),
    #[error("key {key:?} should name {arity} indices joined by '|'")]
    Key { key: String, arity: usize },
    #[error("{0}")]
    Shape(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub maximal: Vec<Vec<Label>>,
}

impl ComplexDoc {
    pub fn of(x: &SimplicialComplex) -> Self {
        ComplexDoc { maximal: x.maximal_labels() }
    }

    pub fn build(&self) -> Result<SimplicialComplex, DocError> {
        Ok(SimplicialComplex::build(self.maximal.clone())?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct MapDoc {
    pub source: ComplexDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<ComplexDoc>,
    pub vertex_map: BTreeMap<Label, Label>,
}

impl MapDoc {
    pub fn of(f: &SimplicialMap) -> Self {
        MapDoc {
            source: ComplexDoc::of(f.source()),
            target: Some(ComplexDoc::of(f.target())),
            vertex_map: f.label_map(),
        }
    }

    /// The map into `target`, or into the document's own target.
    pub fn build(&self, target: Option<&SimplicialComplex>) -> Result<SimplicialMap, DocError> {
        let target = match (target, &self.target) {
            (Some(t), _) => t.clone(),
            (None, Some(doc)) => doc.build()?,
            (None, None) => return Err(DocError::Shape("map has no target complex".into())),
        };
        Ok(SimplicialMap::from_labels(self.source.build()?, target, &self.vertex_map)?)
    }
}

/// A group by table, or one of the named families.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<Elem>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclic: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dihedral: Option<usize>,
}

impl GroupDoc {
    pub fn of(g: &FiniteGroup) -> Self {
        GroupDoc { order: Some(g.order()), table: Some(g.table_rows()), ..Default::default() }
    }

    pub fn build(&self) -> Result<FiniteGroup, DocError> {
        let named = [self.cyclic, self.symmetric, self.dihedral].iter().filter(|x| x.is_some()).count();
        let group = match (&self.table, named) {
            (Some(rows), 0) => FiniteGroup::from_table(rows.clone())?,
            (None, 1) => {
                if let Some(n) = self.cyclic.filter(|&n| n >= 1) {
                    FiniteGroup::cyclic(n)
                } else if let Some(n) = self.symmetric.filter(|&n| (1..=5).contains(&n)) {
                    FiniteGroup::symmetric(n)
                } else if let Some(n) = self.dihedral.filter(|&n| n >= 1) {
                    FiniteGroup::dihedral(n)
                } else {
                    return Err(DocError::Shape("group family parameter out of range".into()));
                }
            }
            _ => return Err(DocError::Shape("group needs exactly one of table, cyclic, symmetric, dihedral".into())),
        };
        if let Some(n) = self.order.filter(|&n| n != group.order()) {
            return Err(DocError::Shape(format!("declared order {n} but the table has order {}", group.order())));
        }
        Ok(group)
    }
}

/// Explicit parts over a base, or the vertex-star cover of a complex.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<ComplexDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<BTreeMap<Label, ComplexDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star: Option<ComplexDoc>,
}

impl CoverDoc {
    pub fn of(u: &Cover) -> Self {
        CoverDoc {
            base: Some(ComplexDoc::of(u.base())),
            parts: Some(u.indices().iter().cloned().zip(u.parts().iter().map(ComplexDoc::of)).collect()),
            star: None,
        }
    }

    /// The cover, requiring the parts to cover the base.
    pub fn build(&self) -> Result<Cover, DocError> {
        self.build_with(true)
    }

    /// The cover, or with `strict` off a family of subcomplexes that may
    /// miss simplices of the base.
    pub fn build_with(&self, strict: bool) -> Result<Cover, DocError> {
        match (&self.base, &self.parts, &self.star) {
            (Some(base), Some(parts), None) => {
                let base = base.build()?;
                let parts =
                    parts.iter().map(|(k, p)| Ok((k.clone(), p.build()?))).collect::<Result<Vec<_>, DocError>>()?;
                Ok(if strict { Cover::new(base, parts)? } else { Cover::partial(base, parts)? })
            }
            (None, None, Some(x)) => Ok(star_cover(&x.build()?)),
            _ => Err(DocError::Shape("cover needs either base and parts, or star".into())),
        }
    }
}

fn split_key(key: &str, arity: usize) -> Result<Vec<Label>, DocError> {
    let parts: Vec<Label> = key.split('|').map(Label::name).collect();
    if parts.len() != arity || key.split('|').any(str::is_empty) {
        return Err(DocError::Key { key: key.to_string(), arity });
    }
    Ok(parts)
}

fn join_key(labels: &[&Label]) -> String {
    labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("|")
}

pub fn pair_values(values: &BTreeMap<String, Elem>) -> Result<BTreeMap<(Label, Label), Elem>, DocError> {
    values
        .iter()
        .map(|(k, &g)| {
            let mut p = split_key(k, 2)?;
            let b = p.pop().expect("two");
            let a = p.pop().expect("two");
            Ok(((a, b), g))
        })
        .collect()
}

pub fn triple_values(values: &BTreeMap<String, Elem>) -> Result<BTreeMap<(Label, Label, Label), Elem>, DocError> {
    values
        .iter()
        .map(|(k, &g)| {
            let p = split_key(k, 3)?;
            Ok(((p[0].clone(), p[1].clone(), p[2].clone()), g))
        })
        .collect()
}

pub fn pair_keys(values: &BTreeMap<(Label, Label), Elem>) -> BTreeMap<String, Elem> {
    values.iter().map(|((a, b), &g)| (join_key(&[a, b]), g)).collect()
}

pub fn triple_keys(values: &BTreeMap<(Label, Label, Label), Elem>) -> BTreeMap<String, Elem> {
    values.iter().map(|((a, b, c), &g)| (join_key(&[a, b, c]), g)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleDoc {
    pub cover: CoverDoc,
    pub group: GroupDoc,
    #[serde(default)]
    pub values: BTreeMap<String, Elem>,
    /// Fiber action table, one row per group element; regular when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<Vec<usize>>>,
}

/// A cover, its group, and the action used for fibers.
pub struct CocycleInput {
    pub cover: Arc<Cover>,
    pub group: FiniteGroup,
    pub values: BTreeMap<(Label, Label), Elem>,
    pub action: GroupAction,
}

impl CocycleDoc {
    pub fn parse(&self) -> Result<CocycleInput, DocError> {
        let group = self.group.build()?;
        let action = match &self.action {
            Some(rows) => GroupAction::new(group.clone(), rows.clone())?,
            None => GroupAction::regular(&group),
        };
        Ok(CocycleInput { cover: Arc::new(self.cover.build()?), values: pair_values(&self.values)?, group, action })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossedModuleDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<GroupDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber: Option<GroupDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Vec<Elem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<Vec<Elem>>>,
    /// Shorthand: an abelian group over the trivial group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abelian: Option<GroupDoc>,
}

impl CrossedModuleDoc {
    pub fn of(x: &CrossedModule) -> Self {
        CrossedModuleDoc {
            base: Some(GroupDoc::of(x.base())),
            fiber: Some(GroupDoc::of(x.fiber())),
            boundary: Some(x.boundary_map().to_vec()),
            action: Some(x.action_rows()),
            abelian: None,
        }
    }

    pub fn build(&self) -> Result<CrossedModule, DocError> {
        match self {
            CrossedModuleDoc { abelian: Some(h), base: None, fiber: None, boundary: None, action: None } => {
                Ok(CrossedModule::abelian(&h.build()?)?)
            }
            CrossedModuleDoc { abelian: None, base: Some(g), fiber: Some(h), boundary: Some(d), action: Some(a) } => {
                Ok(CrossedModule::new(g.build()?, h.build()?, d.clone(), a.clone())?)
            }
            _ => Err(DocError::Shape("crossed module needs base, fiber, boundary and action, or abelian alone".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct GerbeDoc {
    pub cover: CoverDoc,
    pub crossed_module: CrossedModuleDoc,
    #[serde(default)]
    pub values: BTreeMap<String, Elem>,
    #[serde(default)]
    pub witnesses: BTreeMap<String, Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleDoc {
    pub total: ComplexDoc,
    pub base: ComplexDoc,
    pub projection: BTreeMap<Label, Label>,
    /// Fiber point of each total vertex.
    pub fiber: BTreeMap<Label, usize>,
    pub group: GroupDoc,
    pub action: Vec<Vec<usize>>,
}

impl BundleDoc {
    pub fn of(b: &Bundle) -> Self {
        let total = b.total();
        let base = b.base();
        BundleDoc {
            total: ComplexDoc::of(total),
            base: ComplexDoc::of(base),
            projection: (0..total.vertex_count())
                .map(|v| (total.label(v).clone(), base.label(b.projection().apply(v)).clone()))
                .collect(),
            fiber: (0..total.vertex_count()).map(|v| (total.label(v).clone(), b.fiber_coord(v))).collect(),
            group: GroupDoc::of(b.action().group()),
            action: b.action().table_rows(),
        }
    }

    pub fn build(&self) -> Result<Bundle, DocError> {
        let action = GroupAction::new(self.group.build()?, self.action.clone())?;
        Ok(Bundle::from_labeled(self.total.maximal.clone(), self.base.build()?, &self.projection, &self.fiber, action)?)
    }
}

/// A coordinate, as an integer or a string such as `"1/3"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalDoc {
    Integer(i64),
    Text(String),
}

impl RationalDoc {
    pub fn value(&self) -> Result<Rational64, DocError> {
        match self {
            RationalDoc::Integer(n) => Ok(Rational64::from_integer(*n)),
            RationalDoc::Text(s) => {
                s.trim().parse::<Rational64>().map_err(|e| DocError::Shape(format!("coordinate {s:?}: {e}")))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MilnorDoc {
    pub group: GroupDoc,
    pub t: Vec<RationalDoc>,
    /// Group labels keyed `"i|j"`.
    pub g: BTreeMap<String, Elem>,
}

/// Coordinates, pairwise values and group of a coordinate-model point.
pub type MilnorInput = (Vec<Rational64>, BTreeMap<(usize, usize), Elem>, FiniteGroup);

impl MilnorDoc {
    pub fn parse(&self) -> Result<MilnorInput, DocError> {
        let t = self.t.iter().map(RationalDoc::value).collect::<Result<Vec<_>, _>>()?;
        let mut g = BTreeMap::new();
        for (k, &x) in &self.g {
            let bad = || DocError::Key { key: k.clone(), arity: 2 };
            let (i, j) = k.split_once('|').ok_or_else(bad)?;
            let i: usize = i.trim().parse().map_err(|_| bad())?;
            let j: usize = j.trim().parse().map_err(|_| bad())?;
            g.insert((i, j), x);
        }
        Ok((t, g, self.group.build()?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyDoc {
    pub cover: CoverDoc,
    pub group: GroupDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarDoc {
    pub group: GroupDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_round_trip() {
        let doc: ComplexDoc = serde_json::from_str(r#"{"maximal": [["a","b"],["b","c"]]}"#).unwrap();
        let x = doc.build().unwrap();
        assert_eq!(x.f_vector(), vec![3, 2]);
        assert_eq!(ComplexDoc::of(&x), doc);
    }

    #[test]
    fn group_forms() {
        let doc: GroupDoc = serde_json::from_str(r#"{"order": 2, "table": [[0,1],[1,0]]}"#).unwrap();
        assert_eq!(doc.build().unwrap(), FiniteGroup::cyclic(2));
        let doc: GroupDoc = serde_json::from_str(r#"{"symmetric": 3}"#).unwrap();
        assert_eq!(GroupDoc::of(&doc.build().unwrap()).build().unwrap(), FiniteGroup::symmetric(3));
        let doc: GroupDoc = serde_json::from_str(r#"{"order": 3, "table": [[0,1],[1,0]]}"#).unwrap();
        assert!(doc.build().is_err());
        let doc: GroupDoc = serde_json::from_str(r#"{"cyclic": 2, "symmetric": 3}"#).unwrap();
        assert!(doc.build().is_err());
    }

    #[test]
    fn cover_forms() {
        let doc: CoverDoc = serde_json::from_str(r#"{"star": {"maximal": [["a","b"],["b","c"],["a","c"]]}}"#).unwrap();
        let u = doc.build().unwrap();
        assert_eq!(u.len(), 3);
        let again = CoverDoc::of(&u).build().unwrap();
        assert_eq!(again, u);
    }

    #[test]
    fn keys_split() {
        let v: BTreeMap<String, Elem> = [("U0|U1".to_string(), 1)].into_iter().collect();
        let p = pair_values(&v).unwrap();
        assert_eq!(p[&(Label::name("U0"), Label::name("U1"))], 1);
        assert_eq!(pair_keys(&p), v);
        let bad: BTreeMap<String, Elem> = [("U0".to_string(), 1)].into_iter().collect();
        assert!(matches!(pair_values(&bad), Err(DocError::Key { .. })));
    }

    #[test]
    fn rationals() {
        assert_eq!(RationalDoc::Text("1/2".into()).value().unwrap(), Rational64::new(1, 2));
        assert_eq!(RationalDoc::Integer(1).value().unwrap(), Rational64::from_integer(1));
        assert!(RationalDoc::Text("half".into()).value().is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(serde_json::from_str::<ComplexDoc>(r#"{"maximal": [], "extra": 1}"#).is_err());
    }
}
