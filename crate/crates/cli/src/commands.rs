//! Subcommand implementations. Each returns the report `result` payload plus
//! its text rendering; wrapping and printing happen in the caller.

use defect_core::classifier::{classify, textures, ClassifyError, Symmetry, SystemSpec};
use defect_core::homotopy::{h1, retract, Arrangement, DefectSet, HomotopyError, Manifold, SpaceSpec};
use defect_core::semidirect::{brute_force_classes, closed_form_partition};
use defect_core::spherical::{build_group, conjugacy_classes, BinaryKind, SphericalError};
use defect_core::{f_classes, IntMat};
use serde_json::{json, Value};

use crate::render;
use crate::schema::{planar_group, SpecFile};
use crate::selftest::{run_selftest, Fixtures};
use crate::CliError;

pub const DEFAULT_WINDOW: i64 = 3;
pub const SELFTEST_WINDOW: i64 = 4;

/// A command's result payload and provenance references.
pub struct Outcome {
    pub input: Value,
    pub result: Value,
    pub text: String,
    pub tables: Vec<&'static str>,
}

fn classify_error(e: ClassifyError) -> CliError {
    let (field, reason) = match &e {
        ClassifyError::Homotopy(HomotopyError::UnsupportedSpace(_)) => ("system.space", e.to_string()),
        ClassifyError::Homotopy(HomotopyError::UnsupportedPair { .. }) => ("system", e.to_string()),
        ClassifyError::InconsistentSpec { field, reason } => {
            return CliError::Unsupported { field: format!("system.{field}"), reason: reason.clone() }
        }
        ClassifyError::SubgroupNotContained(_) => ("system.symmetry.p_gv", e.to_string()),
        ClassifyError::NonEmptyDefectSet => ("system.space.defect", e.to_string()),
        ClassifyError::Spherical(_) => ("system.symmetry.group", e.to_string()),
    };
    CliError::Unsupported { field: field.to_string(), reason }
}

fn tables_for(spec: &SystemSpec) -> Vec<&'static str> {
    match spec.symmetry {
        Symmetry::PlanarLattice(_) => vec!["Table 1: point defects in R^2 at fixed disclination index"],
        Symmetry::Spherical { .. } => vec!["Table 2: binary polyhedral groups and their conjugacy classes"],
        Symmetry::TorusFamily { .. } => vec!["Table 3: crystals whose G_0/(G_0 ∩ G_v) is a torus"],
        Symmetry::SpatialLattice { .. } => vec![],
    }
}

pub fn classify_file(file: &SpecFile, window: i64) -> Result<Outcome, CliError> {
    let spec = file.system.to_spec()?;
    let opts = &file.options;
    if opts.compactify && !opts.textures {
        return Err(CliError::Unsupported {
            field: "options.compactify".into(),
            reason: "only applies when options.textures is true".into(),
        });
    }
    let report =
        if opts.textures { textures(&spec, opts.compactify) } else { classify(&spec) }.map_err(classify_error)?;
    let mut result = render::defect_report(&report, window);
    result["mode"] = json!(if opts.textures { "textures" } else { "defects" });
    Ok(Outcome {
        input: serde_json::to_value(file).expect("spec file serializes"),
        result,
        text: render::defect_report_text(&report),
        tables: tables_for(&spec),
    })
}

pub fn conjugacy(
    lattice: &str,
    n3: i64,
    matrix: Option<&str>,
    has_reflection: bool,
    window: Option<i64>,
) -> Result<Outcome, CliError> {
    let matrix = match matrix {
        Some(text) => Some(
            serde_json::from_str::<IntMat>(text)
                .map_err(|e| CliError::Parse { message: format!("--matrix:{}:{}: {e}", e.line(), e.column()) })?,
        ),
        None => None,
    };
    let reflection = (lattice == "custom").then_some(has_reflection);
    let pg = planar_group(lattice, matrix.as_ref(), reflection)
        .map_err(|e| e.with_field_prefix("lattice", "system.symmetry"))?;
    if let Some(b) = window {
        if b < 1 {
            return Err(CliError::Unsupported { field: "--window".into(), reason: "must be at least 1".into() });
        }
    }
    let set = f_classes(&pg, n3);
    let modulus = i64::from(pg.order());
    let mut result = json!({
        "lattice": pg.name(),
        "matrix": pg.generator(),
        "point_group_order": pg.order(),
        "n3": n3,
        "n3_residue": n3.rem_euclid(modulus),
        "classes": render::class_set(&set, window.unwrap_or(DEFAULT_WINDOW)),
    });
    let mut text = vec![format!(
        "F_{{n3={n3}}} ({}, n3≡{} mod {modulus}) = {}",
        pg.name(),
        n3.rem_euclid(modulus),
        render::class_set_text(&set)
    )];
    if let Some(b) = window {
        let closed = closed_form_partition(&set, b);
        let brute = brute_force_classes(&pg, n3, b);
        let verdict = if closed == brute { "AGREE" } else { "DISAGREE" };
        result["oracle"] = json!({
            "window": b,
            "closed_form_classes": closed.len(),
            "brute_force_classes": brute.len(),
            "verdict": verdict,
        });
        text.push(format!(
            "oracle on [-{b},{b}]^2: {} class(es) by brute force, {} in closed form, {verdict}",
            brute.len(),
            closed.len()
        ));
    }
    Ok(Outcome {
        input: json!({"lattice": lattice, "n3": n3, "matrix": matrix, "has_reflection": reflection, "window": window}),
        result,
        text: text.join("\n"),
        tables: vec!["Table 1: point defects in R^2 at fixed disclination index"],
    })
}

pub fn binary_kind(family: &str, n: Option<u32>) -> Result<BinaryKind, CliError> {
    let need_n = |n: Option<u32>| {
        n.ok_or_else(|| CliError::Unsupported { field: "n".into(), reason: format!("{family} needs an order n") })
    };
    let kind = match family {
        "cyclic" => BinaryKind::Cyclic(need_n(n)?),
        "dihedral" => BinaryKind::Dihedral(need_n(n)?),
        "tetrahedral" => BinaryKind::Tetrahedral,
        "octahedral" => BinaryKind::Octahedral,
        "icosahedral" => BinaryKind::Icosahedral,
        other => {
            return Err(CliError::Unsupported { field: "kind".into(), reason: format!("unknown family {other:?}") })
        }
    };
    if n.is_some() && !matches!(kind, BinaryKind::Cyclic(_) | BinaryKind::Dihedral(_)) {
        return Err(CliError::Unsupported { field: "n".into(), reason: format!("{family} takes no order") });
    }
    Ok(kind)
}

pub fn spherical(family: &str, n: Option<u32>) -> Result<Outcome, CliError> {
    let kind = binary_kind(family, n)?;
    let group = build_group(kind).map_err(|e| match e {
        SphericalError::UnsupportedOrder { .. } => CliError::Unsupported { field: "n".into(), reason: e.to_string() },
        other => CliError::Unsupported { field: "kind".into(), reason: other.to_string() },
    })?;
    let classes = conjugacy_classes(&group);
    let printed = kind.tabulated_class_count() as usize;
    let verdict = if classes.len() == printed { "AGREE" } else { "DIFFER" };
    let class_rows: Vec<Value> = classes
        .iter()
        .map(|c| {
            json!({
                "size": c.size(),
                "trace_half": c.angle.w.to_string(),
                "spin_angle": c.angle.label(),
                "rotation_angle": c.angle.so3_label(),
                "representative": c.elements[0].to_string(),
            })
        })
        .collect();
    let (p, q, r) = kind.point_group_triple();
    let result = json!({
        "group": kind.to_string(),
        "ade": kind.ade_label(),
        "point_group": [p, q, r],
        "order": group.order(),
        "field": format!("Q(√{})", group.field_d),
        "center_order": group.center().len(),
        "class_count": classes.len(),
        "printed_class_count": printed,
        "printed_angles": kind.tabulated_angles(),
        "verdict": verdict,
        "classes": class_rows,
    });
    let mut text = vec![
        format!("{} ({}), order {}", kind, kind.ade_label(), group.order()),
        format!("conjugacy classes: computed {}, printed {printed}, {verdict}", classes.len()),
    ];
    for c in &classes {
        text.push(format!(
            "  size {:>2}  spin angle {:<6} rotation angle {}",
            c.size(),
            c.angle.label(),
            c.angle.so3_label()
        ));
    }
    Ok(Outcome {
        input: json!({"kind": family, "n": n}),
        result,
        text: text.join("\n"),
        tables: vec!["Table 2: binary polyhedral groups and their conjugacy classes"],
    })
}

pub struct RetractArgs<'a> {
    pub manifold: &'a str,
    pub dim: Option<u32>,
    pub points: Option<u32>,
    pub circle: bool,
    pub hyperplanes: Option<u32>,
    pub counts: Option<&'a str>,
}

pub fn retract_space(args: &RetractArgs) -> Result<Outcome, CliError> {
    let dim = |default: Option<u32>| {
        args.dim.or(default).ok_or_else(|| CliError::Unsupported {
            field: "--dim".into(),
            reason: format!("{} needs a dimension", args.manifold),
        })
    };
    let manifold = match args.manifold {
        "euclidean" => Manifold::EuclideanRn(dim(None)?),
        "sphere" => Manifold::SphereSn(dim(None)?),
        "cylinder" => Manifold::Cylinder2D,
        "torus2d" => Manifold::Torus2D,
        "flat-torus" => Manifold::FlatTorus(dim(None)?),
        "annulus" => Manifold::Annulus2D,
        other => {
            return Err(CliError::Unsupported {
                field: "manifold".into(),
                reason: format!("unknown manifold {other:?}"),
            })
        }
    };
    let chosen = [args.points.is_some(), args.circle, args.hyperplanes.is_some()].iter().filter(|&&b| b).count();
    if chosen > 1 {
        return Err(CliError::Unsupported {
            field: "defect".into(),
            reason: "choose one of --points, --circle, --hyperplanes".into(),
        });
    }
    let defect = if let Some(m) = args.points {
        DefectSet::Points(m)
    } else if args.circle {
        DefectSet::CircleInR3
    } else if let Some(h) = args.hyperplanes {
        let counts = match args.counts {
            Some(text) => serde_json::from_str::<Vec<Vec<u32>>>(text)
                .map_err(|e| CliError::Parse { message: format!("--k:{}:{}: {e}", e.line(), e.column()) })?,
            None => vec![vec![0; manifold.dim().saturating_sub(1) as usize]; h as usize + 1],
        };
        DefectSet::AffineArrangement(Arrangement { hyperplanes: h, counts })
    } else {
        DefectSet::Empty
    };
    let space = SpaceSpec::new(manifold, defect);
    let types = retract(&space).map_err(|e| CliError::Unsupported { field: "space".into(), reason: e.to_string() })?;
    let components: Vec<Value> =
        types.iter().map(|t| json!({"homotopy_type": render::homotopy_type(t), "h1_rank": h1(t)})).collect();
    let total: u32 = types.iter().map(h1).sum();
    let mut text = vec![format!("{space}")];
    for (i, t) in types.iter().enumerate() {
        text.push(format!("  component {i}: {t}  (H^1 = Z^{})", h1(t)));
    }
    text.push(format!("H^1 rank: {total}"));
    Ok(Outcome {
        input: json!({
            "manifold": args.manifold,
            "dim": args.dim,
            "points": args.points,
            "circle": args.circle,
            "hyperplanes": args.hyperplanes,
            "k": args.counts,
        }),
        result: json!({"space": space.to_string(), "components": components, "h1_rank": total}),
        text: text.join("\n"),
        tables: vec!["Table 3: crystals whose G_0/(G_0 ∩ G_v) is a torus"],
    })
}

/// Returns the outcome and the names of failing cells.
pub fn selftest(fixtures: &Fixtures, window: i64) -> (Outcome, Vec<String>) {
    let report = run_selftest(fixtures, window);
    let failed = report.failures().map(|c| c.name.clone()).collect();
    let outcome = Outcome {
        input: json!({"oracle_window": window}),
        result: report.to_json(),
        text: report.to_text(),
        tables: vec![
            "Table 1: point defects in R^2 at fixed disclination index",
            "Table 2: binary polyhedral groups and their conjugacy classes",
            "Table 3: crystals whose G_0/(G_0 ∩ G_v) is a torus",
        ],
    };
    (outcome, failed)
}
