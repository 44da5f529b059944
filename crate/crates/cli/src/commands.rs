use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, Context};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use htc_core::bundle::{skeletal_construction, total_space, Bundle, BundleError};
use htc_core::classifying::{
    bar_construction, classification_check, validate_milnor_point, ClassifyingError, DEFAULT_BAR_DIMENSION,
};
use htc_core::cocycle::{are_equivalent, Cocycle1, CocycleError};
use htc_core::gerbe::{check_coherence_faces, gerbes_equivalent, GerbeCocycle, GerbeData, GerbeError, GerbeGauge};
use htc_core::json::{
    pair_keys, pair_values, triple_values, BarDoc, BundleDoc, ClassifyDoc, CocycleDoc, ComplexDoc, CoverDoc, GerbeDoc,
    MapDoc, MilnorDoc,
};
use htc_core::simplicial::{HomologyResult, SimplicialComplex};
use htc_core::Label;

use crate::{Common, Mode};

pub enum Failure {
    Input(anyhow::Error),
    Budget(String),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

pub struct Outcome {
    pub verdict: bool,
    pub details: Value,
    pub summary: String,
}

fn outcome(verdict: bool, details: Value, summary: impl Into<String>) -> Result<Outcome, Failure> {
    Ok(Outcome { verdict, details, summary: summary.into() })
}

type Run = Result<Outcome, Failure>;

pub fn run(verb: &str, c: &Common) -> Run {
    match verb {
        "validate-complex" => validate_complex(c),
        "homology" => homology(c),
        "nerve" => nerve(c),
        "cover-check" => cover_check(c),
        "cocycle-check" => cocycle_check(c),
        "cocycle-equiv" => cocycle_equiv(c),
        "bundle-build" => bundle_build(c),
        "pullback" => pullback(c),
        "classify" => classify(c),
        "gerbe-check" => gerbe_check(c),
        "gerbe-class" => gerbe_class(c),
        "bar-homology" => bar_homology(c),
        "milnor-check" => milnor_check(c),
        other => Err(Failure::Input(anyhow!("unknown verb {other}"))),
    }
}

fn expect_inputs(c: &Common, n: usize) -> Result<(), Failure> {
    if c.inputs.len() != n {
        return Err(Failure::Input(anyhow!("expected {n} input document(s), got {}", c.inputs.len())));
    }
    Ok(())
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?)
}

fn max_degree(c: &Common) -> Result<Option<usize>, Failure> {
    match c.max_degree {
        Some(d) if d < 0 => Err(Failure::Input(anyhow!("--max-degree must be nonnegative, got {d}"))),
        Some(d) => Ok(Some(d as usize)),
        None => Ok(None),
    }
}

fn homology_json(h: &HomologyResult) -> Value {
    json!({
        "betti": h.betti(),
        "torsion": (0..h.groups.len()).map(|k| h.torsion(k).to_vec()).collect::<Vec<_>>(),
    })
}

fn complex_summary(x: &SimplicialComplex) -> Value {
    json!({
        "vertices": x.vertex_count(),
        "fVector": x.f_vector(),
        "dimension": x.dimension(),
        "eulerCharacteristic": x.euler_characteristic(),
        "components": x.components().len(),
    })
}

fn labels(ls: &[Label]) -> Vec<String> {
    ls.iter().map(|l| l.to_string()).collect()
}

/// Sort library errors into budget exhaustion and everything else.
fn budget_or<E: std::error::Error + Send + Sync + 'static>(e: E, exhausted: bool) -> Failure {
    if exhausted {
        Failure::Budget(e.to_string())
    } else {
        Failure::Input(e.into())
    }
}

fn cocycle_failure(e: CocycleError) -> Failure {
    let exhausted = matches!(e, CocycleError::Budget(_));
    budget_or(e, exhausted)
}

fn bundle_failure(e: BundleError) -> Failure {
    let exhausted = matches!(e, BundleError::Budget(_));
    budget_or(e, exhausted)
}

fn gerbe_failure(e: GerbeError) -> Failure {
    let exhausted = matches!(e, GerbeError::Budget(_));
    budget_or(e, exhausted)
}

fn classifying_failure(e: ClassifyingError) -> Failure {
    let exhausted = match &e {
        ClassifyingError::Cocycle(CocycleError::Budget(_)) => true,
        ClassifyingError::Bundle(b) => matches!(**b, BundleError::Budget(_)),
        _ => false,
    };
    budget_or(e, exhausted)
}

fn validate_complex(c: &Common) -> Run {
    expect_inputs(c, 1)?;
    let doc: ComplexDoc = read(&c.inputs[0])?;
    match doc.build() {
        Ok(x) => outcome(true, complex_summary(&x), format!("valid complex, f-vector {:?}", x.f_vector())),
        Err(e) => outcome(false, json!({ "error": e.to_string() }), format!("invalid complex: {e}")),
    }
}

fn homology(c: &Common) -> Run {
    expect_inputs(c, 1)?;
    let x = read::<ComplexDoc>(&c.inputs[0])?.build()?;
    let degree = max_degree(c)?.unwrap_or_else(|| x.dimension().unwrap_or(0));
    let h = x.homology(degree)?;
    let mut details = homology_json(&h);
    details["maxDegree"] = json!(degree);
    outcome(true, details, format!("Betti numbers {:?}", h.betti()))
}

fn nerve(c: &Common) -> Run {
    expect_inputs(c, 1)?;
    let cover = read::<CoverDoc>(&c.inputs[0])?.build()?;
    let n = cover.nerve();
    let witnesses: BTreeMap<String, ComplexDoc> =
        n.witnesses().map(|(s, w)| (labels(&n.complex().simplex_labels(s)).join("|"), ComplexDoc::of(w))).collect();
    let details = json!({
        "nerve": ComplexDoc::of(n.complex()),
        "fVector": n.complex().f_vector(),
        "intersections": witnesses,
    });
    outcome(true, details, format!("nerve f-vector {:?}", n.complex().f_vector()))
}

fn cover_check(c: &Common) -> Run {
    expect_inputs(c, 1)?;
    let cover = read::<CoverDoc>(&c.inputs[0])?.build_with(false)?;
    let carrier = htc_core::cover::carrier_check(&cover);
    let report = cover.goodness()?;
    let good = report.is_good();
    let details = json!({
        "carrierCheck": carrier,
        "good": good,
        "intersections": report.checks,
    });
    let verdict = carrier && good;
    outcome(verdict, details, format!("covers base: {carrier}, good: {good}"))
}

fn build_cocycle(doc: &CocycleDoc) -> Result<Result<Cocycle1, CocycleError>, Failure> {
    let input = doc.parse()?;
    Ok(Cocycle1::new(input.cover, input.group, &input.values))
}

/// Reject cocycles that fail validation when a verb needs a valid one.
fn valid_cocycle(doc: &CocycleDoc) -> Result<Cocycle1, Failure> {
    build_cocycle(doc)?.map_err(|e| Failure::Input(anyhow!("invalid cocycle: {e}")))
}

fn cocycle_check(c: &Common) -> Run {
    expect_inputs(c, 1)?;
    let doc: CocycleDoc = read(&c.inputs[0])?;
    match build_cocycle(&doc)? {
        Ok(cocycle) => {
            let hol = cocycle.holonomy().map_err(cocycle_failure)?;
            let details = json!({ "valid": true, "holonomy": hol, "trivial": cocycle.is_trivial() });
            outcome(true, details, "valid cocycle")
        }
        Err(e @ (CocycleError::NotGood(_) | CocycleError::Cover(_) | CocycleError::Overflow(_))) => {
            Err(Failure::Input(e.into()))
        }
        Err(e) => {
            let mut details = json!({ "valid": false, "error": e.to_string() });
            if let CocycleError::Violated(a, b, d) = &e {
                details["triple"] = json!([a, b, d]);
            }
            outcome(false, details, format!("invalid cocycle: {e}"))
        }
    }
}

fn cocycle_equiv(c: &Common) -> Run {
    expect_inputs(c, 2)?;
    let a = valid_cocycle(&read(&c.inputs[0])?)?;
    let b = valid_cocycle(&read(&c.inputs[1])?)?;
    let bridge = are_equivalent(&a, &b, c.budget).map_err(cocycle_failure)?;
    let verdict = bridge.is_some();
    let details = json!({
        "equivalent": verdict,
        "bridge": bridge.map(|m| pair_keys(&m)),
    });
    outcome(verdict, details, if verdict { "equivalent" } else { "not equivalent" })
}

fn bundle_details(b: &Bundle) -> Result<Value, Failure> {
    let h = b.total().full_homology()?;
    Ok(json!({
        "bundle": BundleDoc::of(b),
        "fiberSize": b.fiber_size(),
        "eulerCharacteristic": b.euler_characteristic(),
        "baseEulerCharacteristic": b.base().euler_characteristic(),
        "components": b.total().components().len(),
        "homology": homology_json(&h),
    }))
}

fn bundle_build(c: &Common) -> Run {
    expect_inputs(c, 1)?;
    let doc: CocycleDoc = read(&c.inputs[0])?;
    let action = doc.parse()?.action;
    let cocycle = valid_cocycle(&doc)?;
    let (b, mode) = match c.mode {
        Mode::Direct => (total_space(&cocycle, &action), "direct"),
        Mode::Skeletal => (skeletal_construction(&cocycle, &action), "skeletal"),
    };
    let b = b.map_err(bundle_failure)?;
    let mut details = bundle_details(&b)?;
    details["mode"] = json!(mode);
    outcome(true, details, format!("{mode} total space with {} vertices", b.total().vertex_count()))
}

fn pullback(c: &Common) -> Run {
    expect_inputs(c, 2)?;
    let b = read::<BundleDoc>(&c.inputs[0])?.build()?;
    let f = read::<MapDoc>(&c.inputs[1])?.build(Some(b.base()))?;
    let p = htc_core::bundle::pullback(&b, &f).map_err(bundle_failure)?;
    let details = bundle_details(&p)?;
    outcome(true, details, format!("pullback with {} vertices", p.total().vertex_count()))
}

fn classify(c: &Common) -> Run {
    expect_inputs(c, 1)?;
    let doc: ClassifyDoc = read(&c.inputs[0])?;
    let cover = Arc::new(doc.cover.build()?);
    let group = doc.group.build()?;
    let r = classification_check(cover, &group, c.budget).map_err(classifying_failure)?;
    let verdict = r.holds();
    let details = json!({
        "classes": r.cocycle_classes,
        "conjugacyClasses": r.conjugacy_classes,
        "countsAgree": r.counts_agree(),
        "representatives": r.representatives,
    });
    outcome(
        verdict,
        details,
        format!("{} cocycle classes, {} conjugacy classes", r.cocycle_classes, r.conjugacy_classes),
    )
}

fn gerbe_data(doc: &GerbeDoc) -> Result<Result<GerbeData, GerbeError>, Failure> {
    let cover = Arc::new(doc.cover.build()?);
    let crossed = doc.crossed_module.build()?;
    let edges = pair_values(&doc.values)?;
    let witnesses = triple_values(&doc.witnesses)?;
    Ok(GerbeData::new(cover, crossed, &edges, &witnesses))
}

fn valid_gerbe(doc: &GerbeDoc) -> Result<GerbeCocycle, Failure> {
    let data = gerbe_data(doc)?.map_err(|e| Failure::Input(anyhow!("invalid gerbe data: {e}")))?;
    data.validate().map_err(|e| Failure::Input(anyhow!("invalid gerbe cocycle: {e}")))
}

fn gerbe_check(c: &Common) -> Run {
    expect_inputs(c, 1)?;
    let doc: GerbeDoc = read(&c.inputs[0])?;
    let data = match gerbe_data(&doc)? {
        Ok(d) => d,
        Err(e @ (GerbeError::NotGood(_) | GerbeError::Overflow(_))) => return Err(Failure::Input(e.into())),
        Err(e) => {
            return outcome(
                false,
                json!({ "valid": false, "error": e.to_string() }),
                format!("invalid gerbe data: {e}"),
            )
        }
    };
    let faces = check_coherence_faces(&data);
    match data.validate() {
        Ok(_) => outcome(true, json!({ "valid": true, "coherenceFaces": faces }), "valid gerbe cocycle"),
        Err(e @ (GerbeError::NotGood(_) | GerbeError::Overflow(_))) => Err(Failure::Input(e.into())),
        Err(e) => {
            let details = json!({ "valid": false, "error": e.to_string(), "coherenceFaces": faces });
            outcome(false, details, format!("invalid gerbe cocycle: {e}"))
        }
    }
}

fn gauge_json(g: &GerbeGauge, d: &GerbeCocycle) -> Value {
    let n = d.nerve();
    let cover = d.cover();
    let lambda: BTreeMap<String, usize> =
        cover.indices().iter().zip(&g.lambda.values).map(|(l, &x)| (l.to_string(), x)).collect();
    let m: BTreeMap<String, usize> =
        g.m.iter().map(|(&(a, b), &x)| (format!("{}|{}", n.label(a), n.label(b)), x)).collect();
    json!({ "lambda": lambda, "m": m })
}

fn gerbe_class(c: &Common) -> Run {
    match c.inputs.len() {
        1 => {
            let d = valid_gerbe(&read(&c.inputs[0])?)?;
            let class = d.abelian_class().map_err(gerbe_failure)?;
            let summary = format!("class {} of {}", class.index, class.class_count);
            let details = json!({
                "index": class.index.to_string(),
                "classCount": class.class_count.to_string(),
                "residues": class.residues,
                "trivial": class.index == 0,
            });
            outcome(true, details, summary)
        }
        2 => {
            let a = valid_gerbe(&read(&c.inputs[0])?)?;
            let b = valid_gerbe(&read(&c.inputs[1])?)?;
            let gauge = gerbes_equivalent(&a, &b, c.budget).map_err(gerbe_failure)?;
            let verdict = gauge.is_some();
            let details = json!({
                "equivalent": verdict,
                "gauge": gauge.map(|g| gauge_json(&g, &a)),
            });
            outcome(verdict, details, if verdict { "equivalent" } else { "not equivalent" })
        }
        n => Err(Failure::Input(anyhow!("expected 1 or 2 input documents, got {n}"))),
    }
}

fn bar_homology(c: &Common) -> Run {
    expect_inputs(c, 1)?;
    let doc: BarDoc = read(&c.inputs[0])?;
    let group = doc.group.build()?;
    let dimension = match max_degree(c)? {
        Some(d) => d + 1,
        None => doc.dimension.unwrap_or(DEFAULT_BAR_DIMENSION),
    };
    let h = bar_construction(&group, dimension).homology()?;
    let mut details = homology_json(&h);
    details["dimension"] = json!(dimension);
    details["groupOrder"] = json!(group.order());
    outcome(
        true,
        details,
        format!(
            "Betti {:?}, torsion {:?}",
            h.betti(),
            (0..h.groups.len()).map(|k| h.torsion(k).to_vec()).collect::<Vec<_>>()
        ),
    )
}

fn milnor_check(c: &Common) -> Run {
    expect_inputs(c, 1)?;
    let (t, g, group) = read::<MilnorDoc>(&c.inputs[0])?.parse()?;
    match validate_milnor_point(t, g, &group) {
        Ok(p) => outcome(true, json!({ "valid": true, "support": p.support() }), "valid point"),
        Err(e) => {
            let details = json!({ "valid": false, "condition": e.condition(), "error": e.to_string() });
            outcome(false, details, format!("invalid point: {e}"))
        }
    }
}
