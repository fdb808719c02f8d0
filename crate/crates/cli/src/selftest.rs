//! Regression fixtures for the published tables and the brute-force oracles.
//!
//! Expected values live in [`Fixtures`] as plain data so a corrupted copy can
//! be fed to [`run_selftest`] to check that failures name the right cell.

use std::ops::RangeInclusive;

use defect_core::classifier::{classify, textures, Symmetry, SystemSpec};
use defect_core::homotopy::{h1, retract, Arrangement, DefectSet, Manifold, SpaceSpec};
use defect_core::semidirect::{brute_force_classes, closed_form_partition, window, ClassSetKind, LatticeKind, Vec2};
use defect_core::spherical::{build_group, conjugacy_classes, BinaryKind};
use defect_core::{f_classes, PointGroup2D};
use serde_json::{json, Value};

/// Expected class set of one row of the planar table.
#[derive(Debug, Clone)]
pub enum ExpectedClasses {
    Finite(Vec<Vec2>),
    /// Membership predicate of an infinite fundamental domain.
    Domain(fn(Vec2) -> bool),
}

#[derive(Debug, Clone)]
pub struct PlanarFixture {
    pub lattice: LatticeKind,
    pub residues: Vec<i64>,
    pub expected: ExpectedClasses,
}

#[derive(Debug, Clone)]
pub struct BinaryFixture {
    pub kind: BinaryKind,
    pub order: usize,
    pub printed_classes: usize,
    /// Whether the computed class count must equal the printed one.
    pub must_match: bool,
}

#[derive(Debug, Clone)]
pub struct CohomologyFixture {
    pub manifold: Manifold,
    pub points: u32,
    pub h1_rank: u32,
}

#[derive(Debug, Clone)]
pub struct Fixtures {
    pub planar: Vec<PlanarFixture>,
    pub binary: Vec<BinaryFixture>,
    pub cohomology: Vec<CohomologyFixture>,
    pub oracle_n3: RangeInclusive<i64>,
    /// Half-width of the window on which Table 1 domains are compared.
    pub domain_window: i64,
}

fn half_plane(n: Vec2) -> bool {
    n[1] > 0 || (n[1] == 0 && n[0] >= 0)
}

fn quadrant(n: Vec2) -> bool {
    (n[0] >= 0 && n[1] > 0) || n == [0, 0]
}

fn everything(_: Vec2) -> bool {
    true
}

fn planar(lattice: LatticeKind, residues: &[i64], expected: ExpectedClasses) -> PlanarFixture {
    PlanarFixture { lattice, residues: residues.to_vec(), expected }
}

fn delta0(m: u32) -> u32 {
    u32::from(m == 0)
}

impl Default for Fixtures {
    fn default() -> Self {
        use ExpectedClasses::{Domain, Finite};
        use LatticeKind::*;
        let planar_rows = vec![
            planar(Parallelogram, &[0], Domain(everything)),
            planar(Rectangle, &[0], Domain(half_plane)),
            planar(Rectangle, &[1], Finite(vec![[0, 0], [0, 1], [1, 0], [1, 1]])),
            planar(Square, &[0], Domain(quadrant)),
            planar(Square, &[1, 3], Finite(vec![[0, 0], [0, 1]])),
            planar(Square, &[2], Finite(vec![[0, 0], [0, 1], [1, 1]])),
            planar(Hexagonal, &[0], Domain(quadrant)),
            planar(Hexagonal, &[1, 5], Finite(vec![[0, 0]])),
            planar(Hexagonal, &[2, 3, 4], Finite(vec![[0, 0], [0, 1]])),
        ];

        let mut binary = Vec::new();
        for n in 1..=6 {
            binary.push(BinaryFixture {
                kind: BinaryKind::Cyclic(n),
                order: 2 * n as usize,
                printed_classes: n as usize,
                must_match: false,
            });
        }
        for n in 2..=6 {
            binary.push(BinaryFixture {
                kind: BinaryKind::Dihedral(n),
                order: 4 * n as usize,
                printed_classes: n as usize + 3,
                must_match: true,
            });
        }
        binary.push(BinaryFixture { kind: BinaryKind::Tetrahedral, order: 24, printed_classes: 7, must_match: true });
        binary.push(BinaryFixture { kind: BinaryKind::Octahedral, order: 48, printed_classes: 9, must_match: false });
        binary.push(BinaryFixture {
            kind: BinaryKind::Icosahedral,
            order: 120,
            printed_classes: 11,
            must_match: false,
        });

        let mut cohomology = Vec::new();
        for m in 0..=3 {
            let row = |manifold, h1_rank| CohomologyFixture { manifold, points: m, h1_rank };
            cohomology.push(row(Manifold::Cylinder2D, m + 1));
            cohomology.push(row(Manifold::Torus2D, m + 1 + delta0(m)));
            for n in 2..=4 {
                let rank = match (m, n) {
                    (0, _) => n,
                    (_, n) if n != 2 => 0,
                    _ => m + 1 + delta0(m),
                };
                cohomology.push(row(Manifold::FlatTorus(n), rank));
            }
            cohomology.push(row(Manifold::Annulus2D, m + 1));
        }

        Fixtures { planar: planar_rows, binary, cohomology, oracle_n3: -8..=8, domain_window: 10 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestReport {
    pub cells: Vec<Cell>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.cells.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> Value {
        let cells: Vec<Value> = self
            .cells
            .iter()
            .map(|c| json!({"cell": c.name, "status": if c.passed { "pass" } else { "fail" }, "detail": c.detail}))
            .collect();
        let failed = self.failures().count();
        json!({"cells": cells, "summary": {"passed": self.cells.len() - failed, "failed": failed}})
    }

    pub fn to_text(&self) -> String {
        let mut lines: Vec<String> = self
            .cells
            .iter()
            .map(|c| {
                let mut line = format!("{}  {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
                if let Some(flag) = c.detail["agreement"].as_str() {
                    line += &format!(
                        "  (computed {}, printed {}: {flag})",
                        c.detail["computed_classes"], c.detail["printed_classes"]
                    );
                }
                line
            })
            .collect();
        let failed = self.failures().count();
        lines.push(format!("{} passed, {failed} failed", self.cells.len() - failed));
        lines.join("\n")
    }
}

fn cell(name: String, passed: bool, detail: Value) -> Cell {
    Cell { name, passed, detail }
}

fn planar_cells(fx: &Fixtures, out: &mut Vec<Cell>) {
    for row in &fx.planar {
        let pg = PointGroup2D::named(row.lattice).expect("catalog lattice");
        for &r in &row.residues {
            let name = format!("Table 1 / {} / n₃≡{r}", pg.name());
            let set = f_classes(&pg, r);
            let (passed, detail) = match (&row.expected, &set.kind) {
                (ExpectedClasses::Finite(want), ClassSetKind::Finite(got)) => {
                    (want == got, json!({"expected": want, "computed": got}))
                }
                (ExpectedClasses::Domain(pred), ClassSetKind::FundamentalDomain(region)) => {
                    let mismatch = window(fx.domain_window).find(|&n| pred(n) != set.contains(n));
                    (
                        mismatch.is_none(),
                        json!({"window": fx.domain_window, "predicate": region.predicate(), "first_mismatch": mismatch}),
                    )
                }
                (ExpectedClasses::Finite(want), ClassSetKind::FundamentalDomain(region)) => {
                    (false, json!({"expected": want, "computed": region.predicate()}))
                }
                (ExpectedClasses::Domain(_), ClassSetKind::Finite(got)) => {
                    (false, json!({"expected": "infinite", "computed": got}))
                }
            };
            out.push(cell(name, passed, detail));
        }
    }
}

fn binary_cells(fx: &Fixtures, out: &mut Vec<Cell>) {
    for row in &fx.binary {
        let name = format!("Table 2 / {}", row.kind);
        let group = match build_group(row.kind) {
            Ok(g) => g,
            Err(e) => {
                out.push(cell(name, false, json!({"error": e.to_string()})));
                continue;
            }
        };
        let classes = conjugacy_classes(&group);
        let sizes: Vec<usize> = classes.iter().map(|c| c.size()).collect();
        let class_equation = sizes.iter().sum::<usize>() == group.order();
        let closed = classes.iter().all(|c| {
            c.elements.iter().all(|h| group.elements.iter().all(|x| c.elements.contains(&(&(x * h) * &x.conj()))))
        });
        let agree = classes.len() == row.printed_classes;
        let passed =
            group.order() == row.order && group.is_closed() && class_equation && closed && (agree || !row.must_match);
        out.push(cell(
            name,
            passed,
            json!({
                "order": group.order(),
                "expected_order": row.order,
                "computed_classes": classes.len(),
                "printed_classes": row.printed_classes,
                "agreement": if agree { "AGREE" } else { "DIFFER" },
                "class_sizes": sizes,
            }),
        ));
    }
}

fn manifold_name(m: Manifold) -> String {
    match m {
        Manifold::Cylinder2D => "cylinder".into(),
        Manifold::Torus2D => "2-torus".into(),
        Manifold::FlatTorus(n) => format!("flat {n}-torus"),
        Manifold::Annulus2D => "annulus".into(),
        other => other.to_string(),
    }
}

fn cohomology_cells(fx: &Fixtures, out: &mut Vec<Cell>) {
    for row in &fx.cohomology {
        let name = format!("Table 3 / {} / m={}", manifold_name(row.manifold), row.points);
        let detail = match retract(&SpaceSpec::punctured(row.manifold, row.points)) {
            Ok(types) => {
                let rank: u32 = types.iter().map(h1).sum();
                (rank == row.h1_rank, json!({"expected": row.h1_rank, "computed": rank}))
            }
            Err(e) => (false, json!({"error": e.to_string()})),
        };
        out.push(cell(name, detail.0, detail.1));
    }
}

fn oracle_cells(fx: &Fixtures, oracle_window: i64, out: &mut Vec<Cell>) {
    for kind in LatticeKind::NAMED {
        let pg = PointGroup2D::named(kind).expect("catalog lattice");
        for n3 in fx.oracle_n3.clone() {
            let closed = closed_form_partition(&f_classes(&pg, n3), oracle_window);
            let brute = brute_force_classes(&pg, n3, oracle_window);
            out.push(cell(
                format!("Oracle / {} / n₃={n3}", pg.name()),
                closed == brute,
                json!({"window": oracle_window, "closed_form_classes": closed.len(), "brute_force_classes": brute.len()}),
            ));
        }
    }
}

fn finite_cardinality(spec: &SystemSpec, texture: Option<bool>) -> Option<u128> {
    let report = match texture {
        Some(compactify) => textures(spec, compactify),
        None => classify(spec),
    };
    report.ok()?.cardinality.finite()
}

fn composite_cells(out: &mut Vec<Cell>) {
    let plane = |defect, lattice: PointGroup2D| SystemSpec {
        space: SpaceSpec::new(Manifold::EuclideanRn(2), defect),
        symmetry: Symmetry::PlanarLattice(lattice),
        vacua_count: 1,
    };
    let lines = || DefectSet::AffineArrangement(Arrangement { hyperplanes: 2, counts: vec![vec![0]; 3] });

    for (pg, want) in [(PointGroup2D::parallelogram(), 8), (PointGroup2D::square(), 1)] {
        let got = finite_cardinality(&plane(lines(), pg.clone()), None);
        out.push(cell(
            format!("Composite / domain walls / {}", pg.name()),
            got == Some(want),
            json!({"expected": want, "computed": got.map(|c| c as u64)}),
        ));
    }

    for (pg, want) in [(PointGroup2D::parallelogram(), 2), (PointGroup2D::square(), 1)] {
        let got = finite_cardinality(&plane(DefectSet::Empty, pg.clone()), Some(true));
        out.push(cell(
            format!("Composite / textures / {}", pg.name()),
            got == Some(want),
            json!({"expected": want, "computed": got.map(|c| c as u64)}),
        ));
    }

    let kinds = [
        BinaryKind::Cyclic(3),
        BinaryKind::Dihedral(4),
        BinaryKind::Tetrahedral,
        BinaryKind::Octahedral,
        BinaryKind::Icosahedral,
    ];
    for kind in kinds {
        for has_reflection in [false, true] {
            let sphere = |m| SystemSpec {
                space: SpaceSpec::punctured(Manifold::SphereSn(2), m),
                symmetry: Symmetry::Spherical { kind, has_reflection },
                vacua_count: 1,
            };
            let classes = build_group(kind).map(|g| conjugacy_classes(&g).len() as u128).ok();
            let counts: Vec<Option<u128>> = (0..=5).map(|m| finite_cardinality(&sphere(m), None)).collect();
            let empty_ok = counts[0] == Some(if has_reflection { 1 } else { 2 });
            let recurrence_ok = (1..5).all(|m| match (counts[m], counts[m + 1], classes) {
                (Some(a), Some(b), Some(c)) => b == a * c,
                _ => false,
            });
            let shown: Vec<Value> = counts.iter().map(|c| json!(c.map(|x| x.to_string()))).collect();
            out.push(cell(
                format!("Composite / S² / {kind} / reflection={has_reflection}"),
                empty_ok && recurrence_ok,
                json!({"class_count": classes.map(|c| c as u64), "counts_m0_to_m5": shown}),
            ));
        }
    }
}

/// Runs every fixture cell; the oracle cells use `oracle_window`.
pub fn run_selftest(fx: &Fixtures, oracle_window: i64) -> SelftestReport {
    let mut cells = Vec::new();
    planar_cells(fx, &mut cells);
    binary_cells(fx, &mut cells);
    cohomology_cells(fx, &mut cells);
    composite_cells(&mut cells);
    oracle_cells(fx, oracle_window, &mut cells);
    SelftestReport { cells }
}
