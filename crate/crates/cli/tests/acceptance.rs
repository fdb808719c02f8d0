//! Acceptance suite: one PASS/FAIL line per criterion, with its runtime
//! budget. Expected values are written out here independently of the
//! selftest fixtures.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use defect_cli::render::class_set_text;
use defect_core::classifier::{classify, textures, Symmetry, SystemSpec};
use defect_core::homotopy::{h1, retract, Arrangement, DefectSet, Manifold, SpaceSpec};
use defect_core::semidirect::{brute_force_classes, closed_form_partition, window, ClassSetKind, Vec2};
use defect_core::spherical::{build_group, class_equation, conjugacy_classes, BinaryKind};
use defect_core::{f_classes, PointGroup2D};

/// Half-width of the window for fundamental-domain predicate checks.
const DOMAIN_WINDOW: i64 = 10;
/// Window and `n3` range for the brute-force oracle comparison.
const ORACLE_WINDOW: i64 = 6;
const ORACLE_N3: std::ops::RangeInclusive<i64> = -8..=8;

type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

enum Expect {
    Finite(&'static [Vec2]),
    Domain(fn(Vec2) -> bool),
}

fn lattices() -> [PointGroup2D; 4] {
    [PointGroup2D::parallelogram(), PointGroup2D::rectangle(), PointGroup2D::square(), PointGroup2D::hexagonal()]
}

fn table1_expectation(lattice: &str, r: i64) -> Expect {
    let quadrant: fn(Vec2) -> bool = |[a, b]| (a >= 0 && b > 0) || (a, b) == (0, 0);
    match (lattice, r) {
        ("parallelogram", _) => Expect::Domain(|_| true),
        ("rectangle", 0) => Expect::Domain(|[a, b]| b > 0 || (b == 0 && a >= 0)),
        ("rectangle", _) => Expect::Finite(&[[0, 0], [0, 1], [1, 0], [1, 1]]),
        ("square", 0) => Expect::Domain(quadrant),
        ("square", 2) => Expect::Finite(&[[0, 0], [0, 1], [1, 1]]),
        ("square", _) => Expect::Finite(&[[0, 0], [0, 1]]),
        ("hexagonal", 0) => Expect::Domain(quadrant),
        ("hexagonal", 1 | 5) => Expect::Finite(&[[0, 0]]),
        ("hexagonal", _) => Expect::Finite(&[[0, 0], [0, 1]]),
        _ => unreachable!(),
    }
}

fn table1() -> Check {
    for pg in lattices() {
        for r in 0..i64::from(pg.order()) {
            let set = f_classes(&pg, r);
            match (table1_expectation(pg.name(), r), &set.kind) {
                (Expect::Finite(want), ClassSetKind::Finite(got)) => {
                    ensure(want == got.as_slice(), || format!("{} n3≡{r}: {got:?} != {want:?}", pg.name()))?
                }
                (Expect::Domain(pred), ClassSetKind::FundamentalDomain(_)) => {
                    if let Some(n) = window(DOMAIN_WINDOW).find(|&n| pred(n) != set.contains(n)) {
                        return Err(format!("{} n3≡{r}: membership differs at {n:?}", pg.name()));
                    }
                }
                _ => return Err(format!("{} n3≡{r}: finite/infinite mismatch", pg.name())),
            }
        }
    }
    Ok(())
}

fn oracle() -> Check {
    for pg in lattices() {
        for n3 in ORACLE_N3 {
            let closed = closed_form_partition(&f_classes(&pg, n3), ORACLE_WINDOW);
            let brute = brute_force_classes(&pg, n3, ORACLE_WINDOW);
            ensure(closed == brute, || {
                format!("{} n3={n3}: {} closed-form vs {} brute-force classes", pg.name(), closed.len(), brute.len())
            })?;
        }
    }
    Ok(())
}

fn hexagonal_worked_example() -> Check {
    let hex = PointGroup2D::hexagonal();
    for n3 in -12..=12 {
        let set = f_classes(&hex, n3);
        let want = match n3.rem_euclid(6) {
            1 | 5 => "{(0,0)}",
            2..=4 => "{(0,0), (0,1)}",
            _ => "{(n1,n2) | n1>=0, n2>0} ∪ {(0,0)}",
        };
        let got = class_set_text(&set);
        ensure(got == want, || format!("n3={n3}: {got}"))?;
        if n3.rem_euclid(6) != 0 {
            let count = set.class_count().unwrap_or(0);
            let expected = if matches!(n3.rem_euclid(6), 1 | 5) { 1 } else { 2 };
            ensure(count == expected, || format!("n3={n3}: {count} classes"))?;
        }
    }
    Ok(())
}

/// Returns the lines comparing computed and printed counts.
fn binary_groups() -> Result<Vec<String>, String> {
    let mut kinds: Vec<(BinaryKind, usize, usize)> =
        (1..=6u32).map(|n| (BinaryKind::Cyclic(n), 2 * n as usize, n as usize)).collect();
    kinds.extend((2..=6u32).map(|n| (BinaryKind::Dihedral(n), 4 * n as usize, n as usize + 3)));
    kinds.extend([
        (BinaryKind::Tetrahedral, 24, 7),
        (BinaryKind::Octahedral, 48, 9),
        (BinaryKind::Icosahedral, 120, 11),
    ]);
    let mut notes = Vec::new();
    for (kind, order, printed) in kinds {
        let g = build_group(kind).map_err(|e| format!("{kind}: {e}"))?;
        ensure(g.order() == order, || format!("{kind}: order {}", g.order()))?;
        ensure(g.is_closed(), || format!("{kind}: not closed"))?;
        ensure(class_equation(&g).iter().sum::<usize>() == order, || format!("{kind}: class equation"))?;
        let classes = conjugacy_classes(&g);
        for c in &classes {
            for h in &c.elements {
                for x in &g.elements {
                    ensure(c.elements.contains(&(&(x * h) * &x.conj())), || format!("{kind}: class not closed"))?;
                }
            }
        }
        let must_match = matches!(kind, BinaryKind::Dihedral(_) | BinaryKind::Tetrahedral);
        if must_match {
            ensure(classes.len() == printed, || format!("{kind}: {} classes, printed {printed}", classes.len()))?;
        } else {
            let flag = if classes.len() == printed { "AGREE" } else { "DIFFER" };
            notes.push(format!("{kind}: computed {} classes, printed {printed}, {flag}", classes.len()));
        }
    }
    Ok(notes)
}

fn table3() -> Check {
    let delta = |m: u32| u32::from(m == 0);
    for m in 0..=3u32 {
        let mut rows =
            vec![(Manifold::Cylinder2D, m + 1), (Manifold::Torus2D, m + 1 + delta(m)), (Manifold::Annulus2D, m + 1)];
        for n in 2..=4u32 {
            let rank = if m == 0 {
                n
            } else if n != 2 {
                0
            } else {
                m + 1 + delta(m)
            };
            rows.push((Manifold::FlatTorus(n), rank));
        }
        for (manifold, want) in rows {
            let types = retract(&SpaceSpec::punctured(manifold, m)).map_err(|e| e.to_string())?;
            let got: u32 = types.iter().map(h1).sum();
            ensure(got == want, || format!("{manifold}, m={m}: H^1 rank {got}, expected {want}"))?;
        }
    }
    Ok(())
}

fn finite(report: Result<defect_core::DefectReport, defect_core::classifier::ClassifyError>) -> Result<u128, String> {
    let r = report.map_err(|e| e.to_string())?;
    r.cardinality.finite().ok_or_else(|| format!("infinite cardinality {}", r.cardinality))
}

fn composite() -> Check {
    let plane = |defect, pg: PointGroup2D| SystemSpec {
        space: SpaceSpec::new(Manifold::EuclideanRn(2), defect),
        symmetry: Symmetry::PlanarLattice(pg),
        vacua_count: 1,
    };
    let lines = DefectSet::AffineArrangement(Arrangement { hyperplanes: 2, counts: vec![vec![0]; 3] });
    let walls = finite(classify(&plane(lines, PointGroup2D::parallelogram())))?;
    ensure(walls == 8, || format!("domain walls: {walls}"))?;

    for kind in [
        BinaryKind::Cyclic(4),
        BinaryKind::Dihedral(5),
        BinaryKind::Tetrahedral,
        BinaryKind::Octahedral,
        BinaryKind::Icosahedral,
    ] {
        let classes = conjugacy_classes(&build_group(kind).map_err(|e| e.to_string())?).len() as u128;
        for has_reflection in [false, true] {
            let sphere = |m| SystemSpec {
                space: SpaceSpec::punctured(Manifold::SphereSn(2), m),
                symmetry: Symmetry::Spherical { kind, has_reflection },
                vacua_count: 1,
            };
            let empty = finite(classify(&SystemSpec {
                space: SpaceSpec::new(Manifold::SphereSn(2), DefectSet::Empty),
                ..sphere(0)
            }))?;
            ensure(empty == if has_reflection { 1 } else { 2 }, || format!("{kind}: |Def(∅)| = {empty}"))?;
            for m in 1..=4 {
                let (a, b) = (finite(classify(&sphere(m)))?, finite(classify(&sphere(m + 1)))?);
                ensure(b == a * classes, || format!("{kind}, m={m}: {b}/{a} != {classes}"))?;
            }
        }
    }

    let chiral = finite(textures(&plane(DefectSet::Empty, PointGroup2D::parallelogram()), true))?;
    let achiral = finite(textures(&plane(DefectSet::Empty, PointGroup2D::square()), true))?;
    ensure((chiral, achiral) == (2, 1), || format!("textures: chiral {chiral}, achiral {achiral}"))
}

fn selftest_determinism() -> Check {
    let run = || Command::new(env!("CARGO_BIN_EXE_defects")).arg("selftest").output().map_err(|e| e.to_string());
    let (a, b) = (run()?, run()?);
    ensure(a.status.code() == Some(0), || format!("selftest exit {:?}", a.status.code()))?;
    ensure(a.stdout == b.stdout, || "selftest reports differ".into())
}

fn main() -> ExitCode {
    let mut all = true;
    let mut report = |id: u32, name: &str, budget: Duration, check: &dyn Fn() -> Result<Vec<String>, String>| {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (ok, detail, notes) = match result {
            Ok(notes) if elapsed <= budget => (true, String::new(), notes),
            Ok(notes) => (false, format!(" (over budget of {budget:?})"), notes),
            Err(e) => (false, format!(": {e}"), Vec::new()),
        };
        all &= ok;
        println!(
            "{} criterion {id}: {name} [{:.2}s, budget {}s]{detail}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        for n in notes {
            println!("    {n}");
        }
    };
    let none = |c: Check| c.map(|()| Vec::new());
    report(1, "planar class table reproduced", Duration::from_secs(5), &|| none(table1()));
    report(2, "brute-force oracle agrees, n3 in [-8,8], window 6", Duration::from_secs(60), &|| none(oracle()));
    report(3, "hexagonal worked example verbatim", Duration::from_secs(1), &|| none(hexagonal_worked_example()));
    report(4, "binary polyhedral orders, structure and class counts", Duration::from_secs(30), &binary_groups);
    report(5, "H^1 ranks for cylinder, tori and annulus", Duration::from_secs(1), &|| none(table3()));
    report(6, "domain walls, S^2 recurrence and texture counts", Duration::from_secs(5), &|| none(composite()));
    report(7, "selftest reports byte-identical across runs", Duration::from_secs(60), &|| none(selftest_determinism()));
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
