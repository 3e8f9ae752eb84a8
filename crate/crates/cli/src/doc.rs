//! Structured output documents.

use cremona::{CremonaMap, Family, FamilyReport, Matrix, PathPlan, ProjMatrix, ProjPoint, TransvectionWord};
use serde_json::{json, Value};

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(T::to_string).collect()
}

pub fn map(f: &CremonaMap) -> Value {
    json!({
        "n": f.n(),
        "degree": f.degree(),
        "components": strings(f.components()),
        "inverse": f.inverse_components().map(strings),
        "certified": f.is_certified(),
        "text": f.to_string(),
    })
}

pub fn family(f: &Family) -> Value {
    json!({
        "components": strings(f.components()),
        "inverse": strings(f.inverse_components()),
        "x_degree": f.x_degree(),
        "t_degree": f.t_degree(),
        "sample_checked": strings(f.sample_checked()),
        "text": f.to_string(),
    })
}

pub fn report(r: &FamilyReport) -> Value {
    let samples: Vec<Value> = r
        .samples
        .iter()
        .map(|s| {
            json!({
                "t": s.t.to_string(),
                "passed": s.passed,
                "degree": s.degree,
                "inverse_degree": s.inverse_degree,
                "error": s.error,
            })
        })
        .collect();
    json!({ "all_passed": r.all_passed(), "samples": samples })
}

pub fn matrix(m: &Matrix) -> Value {
    Value::from(m.to_rows().iter().map(|r| strings(r)).collect::<Vec<_>>())
}

pub fn proj_matrix(m: &ProjMatrix) -> Value {
    matrix(m.lift())
}

pub fn point(p: &ProjPoint) -> Value {
    Value::from(p.to_string())
}

pub fn word(w: &TransvectionWord) -> Value {
    let factors: Vec<Value> = w.factors.iter().map(|t| json!([t.i, t.j, t.lambda.to_string()])).collect();
    json!({ "m": w.m, "length": w.len(), "factors": factors })
}

pub fn plan(p: &PathPlan) -> Value {
    let steps: Vec<Value> = p
        .steps
        .iter()
        .map(|s| {
            json!({
                "kind": s.kind(),
                "x_degree": s.family().x_degree(),
                "t_degree": s.family().t_degree(),
                "detail": s.to_string(),
            })
        })
        .collect();
    Value::from(steps)
}
