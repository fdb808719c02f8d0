//! JSON and text renderings of core results.

use defect_core::classifier::{ChiralityFactor, DefectReport};
use defect_core::homotopy::{h1, Cardinality, ClassDescriptor, ConjugacySource, HomotopyType};
use defect_core::semidirect::{ClassSet, ClassSetKind, Vec2};
use defect_core::{f_classes, PointGroup2D};
use serde_json::{json, Value};

pub fn vec2(n: Vec2) -> String {
    format!("({},{})", n[0], n[1])
}

pub fn homotopy_type(t: &HomotopyType) -> Value {
    let mut v = match t {
        HomotopyType::Point => json!({"kind": "point"}),
        HomotopyType::Wedge(dims) => json!({"kind": "wedge", "sphere_dims": dims}),
        HomotopyType::Torus(n) => json!({"kind": "torus", "dim": n}),
        HomotopyType::Disjoint(parts) => {
            json!({"kind": "disjoint", "parts": parts.iter().map(homotopy_type).collect::<Vec<_>>()})
        }
    };
    v["display"] = json!(t.to_string());
    v
}

pub fn cardinality(c: &Cardinality) -> Value {
    match c {
        Cardinality::Finite(n) => match u64::try_from(*n) {
            Ok(small) => json!({"kind": "finite", "value": small}),
            Err(_) => json!({"kind": "finite", "value": n.to_string()}),
        },
        Cardinality::CountablyInfinite => json!({"kind": "countably_infinite"}),
        Cardinality::ParametrizedFamily(s) => json!({"kind": "parametrized_family", "family": s}),
    }
}

/// Class set at one `n3`, with window members standing in for infinite sets.
pub fn class_set(set: &ClassSet, window: i64) -> Value {
    match &set.kind {
        ClassSetKind::Finite(reps) => json!({
            "kind": "finite",
            "n3": set.n3,
            "count": reps.len(),
            "representatives": reps,
        }),
        ClassSetKind::FundamentalDomain(region) => json!({
            "kind": "fundamental_domain",
            "n3": set.n3,
            "region": region,
            "predicate": region.predicate(),
            "examples": set.members_in_window(window),
        }),
    }
}

/// Set notation in the style of the planar class table.
pub fn class_set_text(set: &ClassSet) -> String {
    match &set.kind {
        ClassSetKind::Finite(reps) => {
            let items: Vec<String> = reps.iter().map(|&n| vec2(n)).collect();
            format!("{{{}}}", items.join(", "))
        }
        ClassSetKind::FundamentalDomain(region) => region.predicate().to_string(),
    }
}

/// `F_{n3}` for every residue of `n3` modulo the point-group order.
pub fn planar_families(pg: &PointGroup2D) -> Vec<(i64, ClassSet)> {
    (0..i64::from(pg.order())).map(|r| (r, f_classes(pg, r))).collect()
}

pub fn descriptor(d: &ClassDescriptor, window: i64) -> Value {
    let mut v = match d {
        ClassDescriptor::Trivial => json!({"kind": "trivial"}),
        ClassDescriptor::FiniteSet { count, labels } => json!({"kind": "finite_set", "count": count, "labels": labels}),
        ClassDescriptor::FreeAbelian { rank } => json!({"kind": "free_abelian", "rank": rank}),
        ClassDescriptor::ConjClasses { source, copies } => {
            let mut v = json!({"kind": "conjugacy_classes", "copies": copies});
            match source {
                ConjugacySource::Planar(pg) => {
                    v["group"] = json!(format!("Z^2 ⋊_M Z ({})", pg.name()));
                    v["lattice"] = json!(pg.name());
                    v["families"] = planar_families(pg)
                        .iter()
                        .map(|(r, set)| {
                            let mut f = class_set(set, window);
                            f["n3_residue"] = json!(r);
                            f["modulus"] = json!(pg.order());
                            f
                        })
                        .collect();
                }
                ConjugacySource::Spatial => {
                    v["group"] = json!("Z^3 ⋊ q3^-1(C)");
                    v["enumerated"] = json!(false);
                }
                ConjugacySource::Binary { kind, class_count } => {
                    v["group"] = json!(kind.to_string());
                    v["binary_group"] = json!(kind);
                    v["class_count"] = json!(class_count);
                }
            }
            v
        }
        ClassDescriptor::PreQuotient { rank, action } => {
            json!({"kind": "pre_quotient", "rank": rank, "action": action})
        }
        ClassDescriptor::Product(parts) => {
            json!({"kind": "product", "factors": parts.iter().map(|p| descriptor(p, window)).collect::<Vec<_>>()})
        }
    };
    v["display"] = json!(d.to_string());
    v["cardinality"] = cardinality(&d.cardinality());
    v
}

pub fn chirality(c: &ChiralityFactor) -> Value {
    json!({"size": c.size(), "cosets": c.coset_labels})
}

pub fn defect_report(r: &DefectReport, window: i64) -> Value {
    let components: Vec<Value> = r
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            json!({
                "index": i,
                "homotopy_type": homotopy_type(&c.homotopy_type),
                "h1_rank": h1(&c.homotopy_type),
                "classes": descriptor(&c.descriptor, window),
            })
        })
        .collect();
    json!({
        "order_parameter_space": r.target.to_string(),
        "components": components,
        "chirality": chirality(&r.chirality),
        "vacua_count": r.vacua_count,
        "cardinality": cardinality(&r.cardinality),
    })
}

fn descriptor_text(d: &ClassDescriptor, out: &mut Vec<String>, indent: &str) {
    out.push(format!("{indent}classes: {d}  [{}]", d.cardinality()));
    let mut planar = Vec::new();
    collect_planar(d, &mut planar);
    for pg in planar {
        for (r, set) in planar_families(&pg) {
            out.push(format!("{indent}  F_{{n3≡{r} mod {}}} = {}", pg.order(), class_set_text(&set)));
        }
    }
}

fn collect_planar(d: &ClassDescriptor, out: &mut Vec<PointGroup2D>) {
    match d {
        ClassDescriptor::ConjClasses { source: ConjugacySource::Planar(pg), .. } => out.push(pg.clone()),
        ClassDescriptor::Product(parts) => parts.iter().for_each(|p| collect_planar(p, out)),
        _ => {}
    }
}

pub fn defect_report_text(r: &DefectReport) -> String {
    let mut out = vec![format!("order parameter space: {}", r.target)];
    for (i, c) in r.components.iter().enumerate() {
        out.push(format!("component {i}: {} (H^1 rank {})", c.homotopy_type, h1(&c.homotopy_type)));
        descriptor_text(&c.descriptor, &mut out, "  ");
    }
    out.push(format!("chirality π0(G)/p(G_v): {} coset(s)", r.chirality.size()));
    for label in &r.chirality.coset_labels {
        out.push(format!("  {label}"));
    }
    out.push(format!("vacua: {}", r.vacua_count));
    out.push(format!("cardinality: {}", r.cardinality));
    out.join("\n")
}
