//! JSON views of the results computed by `crforge-core`.

use crforge_core::coeff::rational_to_string;
use crforge_core::geometry::{EssFinReport, FiniteType, TypeReport};
use crforge_core::ideal::{CurveWitness, StaircaseReport, StaircaseStatus};
use crforge_core::mapping::{Dichotomy, FiniteMapReport, Injectivity, MapCheckReport, SegreHomReport};
use crforge_core::rank::{Deficiency, MinorCertificate};
use crforge_core::reflection::{
    Conclusion, ConvergenceLedger, DeterminationReport, ReflectionIdentity, Rung, RungVerdict, Separation,
};
use crforge_core::{MultiIndex, PolyInX, Series, SeriesTuple, C};
use serde_json::{json, Value};

use crate::format::series_to_json;

pub fn coeff(c: &C) -> Value {
    json!([rational_to_string(&c.re), rational_to_string(&c.im)])
}

pub fn multi(m: &MultiIndex) -> Value {
    json!(m.0)
}

/// A series with the order through which it is known.
pub fn series(s: &Series) -> Value {
    json!({"nvars": s.nvars(), "order": s.prec(), "terms": series_to_json(s)})
}

pub fn tuple(t: &SeriesTuple) -> Value {
    Value::Array(t.iter().map(series).collect())
}

/// Coefficients from `X^0` up to the leading one.
pub fn poly(p: &PolyInX) -> Value {
    json!({"degree": p.deg(), "coefficients": p.coeffs().iter().map(series).collect::<Vec<_>>()})
}

fn certificate(c: &MinorCertificate) -> Value {
    json!({
        "point": c.point.iter().map(coeff).collect::<Vec<_>>(),
        "rows": c.rows,
        "cols": c.cols,
        "minor": coeff(&c.minor),
    })
}

fn deficiency(d: &Deficiency) -> Value {
    match d {
        Deficiency::None => json!({"kind": "full"}),
        Deficiency::Probabilistic => json!({"kind": "sampled"}),
        Deficiency::Certified { order } => json!({"kind": "certified", "order": order}),
        Deficiency::Refuted => json!({"kind": "refuted"}),
    }
}

pub fn finite_type(r: &TypeReport) -> Value {
    let verdict = match r.verdict {
        FiniteType::Yes { k1 } => json!({"verdict": "yes", "k1": k1}),
        FiniteType::NoUpTo { k } => json!({"verdict": "no", "up_to": k}),
        FiniteType::Inconclusive => json!({"verdict": "inconclusive"}),
    };
    let mut v = verdict;
    let o = v.as_object_mut().unwrap();
    o.insert(
        "ranks".into(),
        Value::Array(
            r.ranks
                .iter()
                .map(|k| {
                    json!({
                        "k": k.k,
                        "rank": k.rank,
                        "deficiency": deficiency(&k.deficiency),
                        "certificate": k.certificate.as_ref().map(certificate),
                    })
                })
                .collect(),
        ),
    );
    o.insert(
        "exact_minor".into(),
        r.exact_minor
            .as_ref()
            .map(|m| json!({"k": m.k, "rows": m.rows, "cols": m.cols, "term": multi(&m.term), "coefficient": coeff(&m.coeff)}))
            .unwrap_or(Value::Null),
    );
    o.insert(
        "rank_point".into(),
        r.rank_point
            .as_ref()
            .map(|p| {
                json!({
                    "k": p.k,
                    "point": p.point.iter().map(coeff).collect::<Vec<_>>(),
                    "rows": p.rows,
                    "cols": p.cols,
                    "minor": coeff(&p.minor),
                })
            })
            .unwrap_or(Value::Null),
    );
    v
}

pub fn staircase(s: &StaircaseReport) -> Value {
    let corners: Vec<Value> = s.corners.iter().map(multi).collect();
    match &s.status {
        StaircaseStatus::Finite { codim, basis, level } => json!({
            "status": "finite",
            "codim": codim,
            "level": level,
            "basis": basis.iter().map(multi).collect::<Vec<_>>(),
            "corners": corners,
        }),
        StaircaseStatus::UndeterminedUpTo(b) => json!({"status": "undetermined", "up_to": b, "corners": corners}),
    }
}

pub fn curve(c: &Option<CurveWitness>) -> Value {
    match c {
        Some(w) => json!({"order": w.order, "components": w.components.iter().map(series_to_json).collect::<Vec<_>>()}),
        None => Value::Null,
    }
}

pub fn essential(e: &EssFinReport) -> Value {
    json!({
        "essentially_finite": e.is_finite(),
        "staircase": staircase(&e.staircase),
        "curve": curve(&e.curve),
    })
}

pub fn map_check(r: &MapCheckReport) -> Value {
    json!({
        "sends": r.sends,
        "order": r.order,
        "residuals": r.residuals.iter().map(series_to_json).collect::<Vec<_>>(),
    })
}

fn finite_map(r: &FiniteMapReport) -> Value {
    json!({"staircase": staircase(&r.staircase), "curve": curve(&r.curve)})
}

pub fn segre_hom(r: &SegreHomReport) -> Value {
    match r {
        SegreHomReport::Injective(Injectivity::Rank(c)) => {
            json!({"verdict": "injective", "reason": "full rank", "certificate": certificate(c)})
        }
        SegreHomReport::Injective(Injectivity::Finite { codim }) => {
            json!({"verdict": "injective", "reason": "finite map", "codim": codim})
        }
        SegreHomReport::NotInjective { relation, order } => {
            json!({"verdict": "not_injective", "relation": series_to_json(relation), "order": order})
        }
        SegreHomReport::Inconclusive { rank, relation_degree } => {
            json!({"verdict": "inconclusive", "rank": rank, "relation_degree": relation_degree})
        }
    }
}

pub fn dichotomy(d: &Dichotomy) -> Value {
    match d {
        Dichotomy::ZeroMap => json!({"verdict": "zero_map"}),
        Dichotomy::SegreInjective(r) => json!({"verdict": "segre_injective", "finite_map": finite_map(r)}),
        Dichotomy::Violation { reason, curve } => {
            json!({"verdict": "violation", "reason": reason, "curve": curve.iter().map(series_to_json).collect::<Vec<_>>()})
        }
        Dichotomy::Undetermined(r) => json!({"verdict": "undetermined", "finite_map": finite_map(r)}),
    }
}

pub fn identity(id: &ReflectionIdentity, verified: bool) -> Value {
    json!({
        "r": id.r,
        "N": id.big_n,
        "N_target": id.big_n2,
        "verified": verified,
        "deltas": id.deltas.iter().map(multi).collect::<Vec<_>>(),
        "jets": id.jets.iter().map(|(j, b, c)| json!({"component": j, "beta": multi(b), "value": coeff(c)})).collect::<Vec<_>>(),
        "identities": id.polys.iter().map(poly).collect::<Vec<_>>(),
    })
}

fn separation(s: &Option<Separation>) -> Value {
    match s {
        Some(Separation::Order { m, discriminant_order, squarefree_degree }) => {
            json!({"m": m, "discriminant_order": discriminant_order, "squarefree_degree": squarefree_degree})
        }
        Some(Separation::Undetermined) => json!("undetermined"),
        None => Value::Null,
    }
}

fn rung(r: &Rung) -> Value {
    let verdict = match &r.verdict {
        RungVerdict::Agree => json!("agree"),
        RungVerdict::Disagree { degree } => json!({"disagree_in_degree": degree}),
        RungVerdict::Inconclusive(s) => json!({"inconclusive": s}),
    };
    json!({
        "k": r.k,
        "alpha": multi(&r.alpha),
        "component": r.component,
        "verdict": verdict,
        "separation": separation(&r.separation),
        "same_polynomial": r.same_polynomial,
        "jet_order": r.jet_order,
        "determined_by_jets": r.determined_by_jets,
    })
}

pub fn determination(d: &DeterminationReport) -> Value {
    let conclusion = match &d.conclusion {
        Conclusion::Identical { order } => json!({"verdict": "identical", "through_order": order}),
        Conclusion::Differ { k, alpha, component } => {
            json!({"verdict": "differ", "k": k, "alpha": multi(alpha), "component": component})
        }
        Conclusion::Open => json!({"verdict": "open"}),
    };
    json!({
        "k_jets": d.k_jets,
        "jets_agree_through": d.jets_agree_through,
        "conclusion": conclusion,
        "first_disagreement": d.first_disagreement.as_ref().map(|(k, a, j)| json!({"k": k, "alpha": multi(a), "component": j})),
        "rungs": d.rungs.iter().map(rung).collect::<Vec<_>>(),
    })
}

pub fn ledger(l: &ConvergenceLedger, rechecked: bool) -> Value {
    let ft = match l.finite_type {
        FiniteType::Yes { k1 } => json!({"verdict": "yes", "k1": k1}),
        FiniteType::NoUpTo { k } => json!({"verdict": "no", "up_to": k}),
        FiniteType::Inconclusive => json!({"verdict": "inconclusive"}),
    };
    json!({
        "r": l.r,
        "finite_type": ft,
        "rechecked": rechecked,
        "all_nontrivial": l.entries.iter().all(|e| e.nontrivial),
        "out_of_scope": l.out_of_scope,
        "entries": l.entries.iter().map(|e| json!({
            "k": e.k,
            "alpha": multi(&e.alpha),
            "component": e.component,
            "degree": e.degree,
            "order": e.order,
            "nontrivial": e.nontrivial,
            "polynomial": poly(&e.polynomial),
        })).collect::<Vec<_>>(),
    })
}
