//! Classification of point defects and textures from a system description.
//!
//! A system is a space (manifold minus defect set), a crystal symmetry that
//! fixes the order-parameter space, and the number of vacua. The report lists
//! the class descriptor of each connected component, the chirality factor
//! `π0(G)/p(G_v)` and the resulting cardinality.

use std::fmt;

use thiserror::Error;

use crate::homotopy::{self, Cardinality, ClassDescriptor, HomotopyError, HomotopyType, Manifold, SpaceSpec};
use crate::intlin::IntMat;
use crate::semidirect::PointGroup2D;
use crate::spherical::{build_group, BinaryGroup, BinaryKind, SphericalError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
    #[error("inconsistent input at `{field}`: {reason}")]
    InconsistentSpec { field: String, reason: String },
    #[error("p(G_v) is not a subgroup of π0(G): {0}")]
    SubgroupNotContained(String),
    #[error("textures need an empty defect set")]
    NonEmptyDefectSet,
    #[error(transparent)]
    Spherical(#[from] SphericalError),
}

fn inconsistent(field: &str, reason: impl Into<String>) -> ClassifyError {
    ClassifyError::InconsistentSpec { field: field.to_string(), reason: reason.into() }
}

/// Finite group of integer matrices, elements sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMatrixGroup {
    dim: usize,
    elements: Vec<IntMat>,
}

fn sort_key(m: &IntMat) -> Vec<i64> {
    m.entries().to_vec()
}

impl FiniteMatrixGroup {
    /// Validates determinant `±1`, identity and closure.
    pub fn from_elements(elements: Vec<IntMat>) -> Result<Self, String> {
        let first = elements.first().ok_or("empty group")?;
        let dim = first.rows();
        let mut els = Vec::with_capacity(elements.len());
        for m in elements {
            if m.rows() != dim || m.cols() != dim {
                return Err(format!("matrix {m} is not {dim}x{dim}"));
            }
            let det = m.det().map_err(|e| e.to_string())?;
            if det.abs() != 1 {
                return Err(format!("matrix {m} has determinant {det}"));
            }
            els.push(m);
        }
        els.sort_by_key(sort_key);
        els.dedup();
        let g = Self { dim, elements: els };
        if !g.contains(&IntMat::identity(dim)) {
            return Err("identity missing".into());
        }
        for a in &g.elements {
            for b in &g.elements {
                let ab = a.mul(b).map_err(|e| e.to_string())?;
                if !g.contains(&ab) {
                    return Err(format!("not closed: {a}·{b} = {ab}"));
                }
            }
        }
        Ok(g)
    }

    pub fn trivial(dim: usize) -> Self {
        Self { dim, elements: vec![IntMat::identity(dim)] }
    }

    /// `{1, -1}` as 1x1 matrices.
    pub fn sign() -> Self {
        Self::from_elements(vec![IntMat::diagonal(&[1]), IntMat::diagonal(&[-1])]).expect("valid group")
    }

    /// `diag(±1, ±1)`.
    pub fn klein_four() -> Self {
        let els = [[1, 1], [1, -1], [-1, 1], [-1, -1]].iter().map(|d| IntMat::diagonal(d)).collect();
        Self::from_elements(els).expect("valid group")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[IntMat] {
        &self.elements
    }

    pub fn contains(&self, m: &IntMat) -> bool {
        self.elements.binary_search_by_key(&sort_key(m), sort_key).is_ok()
    }

    /// Left cosets `gH` of a subgroup, each sorted; `H` itself comes first,
    /// the rest ordered by least element.
    pub fn left_cosets(&self, h: &FiniteMatrixGroup) -> Vec<Vec<IntMat>> {
        let mut seen: Vec<IntMat> = Vec::new();
        let mut cosets = Vec::new();
        let identity = IntMat::identity(self.dim);
        for g in std::iter::once(&identity).chain(&self.elements) {
            if seen.contains(g) {
                continue;
            }
            let mut coset: Vec<IntMat> = h.elements.iter().map(|x| g.mul(x).expect("square")).collect();
            coset.sort_by_key(sort_key);
            seen.extend(coset.iter().cloned());
            cosets.push(coset);
        }
        cosets
    }
}

impl fmt::Display for FiniteMatrixGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

/// Crystal symmetry data supplied with a system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Symmetry {
    /// Planar crystal in `R^2` with the given lattice point group.
    PlanarLattice(PointGroup2D),
    /// Crystal in `R^3`, described only by whether it has a reflection symmetry.
    SpatialLattice { has_reflection: bool },
    /// Crystal on `S^2` with a binary polyhedral symmetry group.
    Spherical { kind: BinaryKind, has_reflection: bool },
    /// Crystals on cylinders, tori and annuli; `p_gv` defaults to the trivial
    /// group, `aut_lattice` is the automorphism group of `Λ` for flat tori.
    TorusFamily { p_gv: Option<Vec<IntMat>>, aut_lattice: Option<Vec<IntMat>> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EuclideanLattice {
    Planar(PointGroup2D),
    Spatial { has_reflection: bool },
}

/// The order-parameter space a system's fields take values in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderParamDescriptor {
    EuclideanCrystal(EuclideanLattice),
    SphereCrystal {
        group: BinaryGroup,
        has_reflection: bool,
    },
    /// `G_0` is the `k`-torus.
    TorusTarget {
        k: u32,
        pi0_g: FiniteMatrixGroup,
        p_gv: FiniteMatrixGroup,
    },
}

impl fmt::Display for OrderParamDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderParamDescriptor::EuclideanCrystal(EuclideanLattice::Planar(pg)) => {
                write!(f, "E(2)/Γ ({} lattice)", pg.name())
            }
            OrderParamDescriptor::EuclideanCrystal(EuclideanLattice::Spatial { .. }) => f.write_str("E(3)/Γ"),
            OrderParamDescriptor::SphereCrystal { group, .. } => write!(f, "O(3)/Γ ({})", group.kind),
            OrderParamDescriptor::TorusTarget { k, .. } => write!(f, "G/G_v with G_0 = T^{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSpec {
    pub space: SpaceSpec,
    pub symmetry: Symmetry,
    pub vacua_count: u32,
}

/// `π0(G)/p(G_v)`: size and one label per coset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiralityFactor {
    pub coset_labels: Vec<String>,
}

impl ChiralityFactor {
    pub fn size(&self) -> usize {
        self.coset_labels.len()
    }

    fn from_groups(pi0: &FiniteMatrixGroup, pgv: &FiniteMatrixGroup) -> Self {
        let coset_labels = pi0
            .left_cosets(pgv)
            .iter()
            .map(|c| format!("{{{}}}", c.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        Self { coset_labels }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    pub homotopy_type: HomotopyType,
    pub descriptor: ClassDescriptor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectReport {
    pub target: OrderParamDescriptor,
    pub components: Vec<ComponentReport>,
    pub chirality: ChiralityFactor,
    pub vacua_count: u32,
    pub cardinality: Cardinality,
}

fn torus_k(manifold: Manifold) -> Option<u32> {
    match manifold {
        Manifold::Cylinder2D => Some(2),
        Manifold::Torus2D | Manifold::Annulus2D => Some(1),
        Manifold::FlatTorus(n) => Some(n),
        _ => None,
    }
}

fn reflection_groups(has_reflection: bool) -> (FiniteMatrixGroup, FiniteMatrixGroup) {
    let pi0 = FiniteMatrixGroup::sign();
    let pgv = if has_reflection { pi0.clone() } else { FiniteMatrixGroup::trivial(1) };
    (pi0, pgv)
}

/// Order-parameter space together with `π0(G)` and `p(G_v)`.
fn resolve(spec: &SystemSpec) -> Result<(OrderParamDescriptor, FiniteMatrixGroup, FiniteMatrixGroup), ClassifyError> {
    let manifold = spec.space.manifold;
    match &spec.symmetry {
        Symmetry::PlanarLattice(pg) => {
            if manifold != Manifold::EuclideanRn(2) {
                return Err(inconsistent("space.manifold", format!("a planar lattice needs R^2, got {manifold}")));
            }
            let (pi0, pgv) = reflection_groups(pg.has_reflection());
            Ok((OrderParamDescriptor::EuclideanCrystal(EuclideanLattice::Planar(pg.clone())), pi0, pgv))
        }
        Symmetry::SpatialLattice { has_reflection } => {
            if manifold != Manifold::EuclideanRn(3) {
                return Err(inconsistent("space.manifold", format!("a spatial lattice needs R^3, got {manifold}")));
            }
            let (pi0, pgv) = reflection_groups(*has_reflection);
            let lattice = EuclideanLattice::Spatial { has_reflection: *has_reflection };
            Ok((OrderParamDescriptor::EuclideanCrystal(lattice), pi0, pgv))
        }
        Symmetry::Spherical { kind, has_reflection } => {
            if manifold != Manifold::SphereSn(2) {
                return Err(inconsistent("space.manifold", format!("a spherical crystal needs S^2, got {manifold}")));
            }
            let group = build_group(*kind)?;
            let (pi0, pgv) = reflection_groups(*has_reflection);
            Ok((OrderParamDescriptor::SphereCrystal { group, has_reflection: *has_reflection }, pi0, pgv))
        }
        Symmetry::TorusFamily { p_gv, aut_lattice } => {
            let k = torus_k(manifold).ok_or_else(|| {
                inconsistent("space.manifold", format!("torus-family symmetry does not apply to {manifold}"))
            })?;
            let pi0 = match (manifold, aut_lattice) {
                (Manifold::FlatTorus(n), Some(els)) => {
                    let g = FiniteMatrixGroup::from_elements(els.clone())
                        .map_err(|e| inconsistent("symmetry.aut_lattice", e))?;
                    if g.dim() != n as usize {
                        return Err(inconsistent("symmetry.aut_lattice", format!("matrices must be {n}x{n}")));
                    }
                    g
                }
                (Manifold::FlatTorus(_), None) => {
                    return Err(inconsistent("symmetry.aut_lattice", "required for a flat torus"))
                }
                (_, Some(_)) => return Err(inconsistent("symmetry.aut_lattice", "only meaningful for a flat torus")),
                (Manifold::Annulus2D, None) => FiniteMatrixGroup::sign(),
                (_, None) => FiniteMatrixGroup::klein_four(),
            };
            let pgv = match p_gv {
                None => FiniteMatrixGroup::trivial(pi0.dim()),
                Some(els) => {
                    if let Some(m) = els.iter().find(|m| !pi0.contains(m)) {
                        return Err(ClassifyError::SubgroupNotContained(format!("{m} ∉ {pi0}")));
                    }
                    FiniteMatrixGroup::from_elements(els.clone()).map_err(ClassifyError::SubgroupNotContained)?
                }
            };
            let target = OrderParamDescriptor::TorusTarget { k, pi0_g: pi0.clone(), p_gv: pgv.clone() };
            Ok((target, pi0, pgv))
        }
    }
}

pub fn order_param_space(spec: &SystemSpec) -> Result<OrderParamDescriptor, ClassifyError> {
    resolve(spec).map(|(t, _, _)| t)
}

pub fn chirality_factor(spec: &SystemSpec) -> Result<ChiralityFactor, ClassifyError> {
    let (_, pi0, pgv) = resolve(spec)?;
    Ok(ChiralityFactor::from_groups(&pi0, &pgv))
}

fn assemble(
    spec: &SystemSpec,
    target: OrderParamDescriptor,
    chirality: ChiralityFactor,
    types: Vec<HomotopyType>,
) -> Result<DefectReport, ClassifyError> {
    if spec.vacua_count == 0 {
        return Err(inconsistent("vacua_count", "must be at least 1"));
    }
    let mut components = Vec::with_capacity(types.len());
    let mut factors = Vec::with_capacity(types.len() * 3);
    for t in types {
        let descriptor = homotopy::maps_into(&t, &target)?;
        // each component independently picks a vacuum and a chirality coset
        factors.push(Cardinality::Finite(u128::from(spec.vacua_count)));
        factors.push(Cardinality::Finite(chirality.size() as u128));
        factors.push(descriptor.cardinality());
        components.push(ComponentReport { homotopy_type: t, descriptor });
    }
    Ok(DefectReport {
        target,
        components,
        chirality,
        vacua_count: spec.vacua_count,
        cardinality: Cardinality::product(factors),
    })
}

/// Classes of defect configurations on `M \ X`.
pub fn classify(spec: &SystemSpec) -> Result<DefectReport, ClassifyError> {
    let (target, pi0, pgv) = resolve(spec)?;
    let types = homotopy::retract(&spec.space)?;
    assemble(spec, target, ChiralityFactor::from_groups(&pi0, &pgv), types)
}

/// Texture classes for a defect-free system; with `compactify`, `R^n` is
/// replaced by its one-point compactification `S^n`.
pub fn textures(spec: &SystemSpec, compactify: bool) -> Result<DefectReport, ClassifyError> {
    if spec.space.point_count() != Some(0) {
        return Err(ClassifyError::NonEmptyDefectSet);
    }
    let (target, pi0, pgv) = resolve(spec)?;
    let types = match spec.space.manifold {
        Manifold::EuclideanRn(n) if compactify => vec![HomotopyType::sphere(n)],
        _ => homotopy::retract(&spec.space)?,
    };
    assemble(spec, target, ChiralityFactor::from_groups(&pi0, &pgv), types)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::{Arrangement, DefectSet};

    fn system(manifold: Manifold, defect: DefectSet, symmetry: Symmetry) -> SystemSpec {
        SystemSpec { space: SpaceSpec::new(manifold, defect), symmetry, vacua_count: 1 }
    }

    #[test]
    fn plane_minus_two_parallel_lines() {
        let a = Arrangement { hyperplanes: 2, counts: vec![vec![0]; 3] };
        let spec = system(
            Manifold::EuclideanRn(2),
            DefectSet::AffineArrangement(a),
            Symmetry::PlanarLattice(PointGroup2D::parallelogram()),
        );
        let r = classify(&spec).unwrap();
        assert_eq!(r.components.len(), 3);
        assert_eq!(r.chirality.size(), 2);
        assert_eq!(r.cardinality, Cardinality::Finite(8));
    }

    #[test]
    fn tetrahedral_sphere_two_points() {
        let spec = system(
            Manifold::SphereSn(2),
            DefectSet::Points(2),
            Symmetry::Spherical { kind: BinaryKind::Tetrahedral, has_reflection: false },
        );
        let r = classify(&spec).unwrap();
        assert_eq!(r.components[0].homotopy_type, HomotopyType::Wedge(vec![1]));
        assert_eq!(r.cardinality, Cardinality::Finite(14));
    }

    #[test]
    fn sphere_recurrence_ratio_is_class_count() {
        for kind in [BinaryKind::Dihedral(3), BinaryKind::Octahedral] {
            let count = |m| {
                let spec = system(
                    Manifold::SphereSn(2),
                    DefectSet::Points(m),
                    Symmetry::Spherical { kind, has_reflection: true },
                );
                classify(&spec).unwrap().cardinality.finite().unwrap()
            };
            let classes = crate::spherical::conjugacy_classes(&build_group(kind).unwrap()).len() as u128;
            for m in 1..5 {
                assert_eq!(count(m + 1), classes * count(m));
            }
        }
    }

    #[test]
    fn torus_with_one_point() {
        let spec =
            system(Manifold::Torus2D, DefectSet::Points(1), Symmetry::TorusFamily { p_gv: None, aut_lattice: None });
        let r = classify(&spec).unwrap();
        assert_eq!(r.components[0].descriptor, ClassDescriptor::FreeAbelian { rank: 2 });
        assert_eq!(r.chirality.size(), 4);
        assert_eq!(r.cardinality, Cardinality::CountablyInfinite);
    }

    #[test]
    fn cylinder_chirality_with_reflection_subgroup() {
        let spec = system(
            Manifold::Cylinder2D,
            DefectSet::Empty,
            Symmetry::TorusFamily {
                p_gv: Some(vec![IntMat::diagonal(&[1, 1]), IntMat::diagonal(&[-1, 1])]),
                aut_lattice: None,
            },
        );
        assert_eq!(chirality_factor(&spec).unwrap().size(), 2);
        let bad = system(
            Manifold::Cylinder2D,
            DefectSet::Empty,
            Symmetry::TorusFamily {
                p_gv: Some(vec![IntMat::from_rows(&[[0, 1], [1, 0]]).unwrap()]),
                aut_lattice: None,
            },
        );
        assert!(matches!(chirality_factor(&bad), Err(ClassifyError::SubgroupNotContained(_))));
    }

    #[test]
    fn textures_cases() {
        let plane =
            system(Manifold::EuclideanRn(2), DefectSet::Empty, Symmetry::PlanarLattice(PointGroup2D::hexagonal()));
        let r = textures(&plane, true).unwrap();
        assert!(r.components[0].descriptor.is_trivial());
        assert_eq!(r.cardinality, Cardinality::Finite(1));
        let chiral = SystemSpec { symmetry: Symmetry::PlanarLattice(PointGroup2D::parallelogram()), ..plane };
        assert_eq!(textures(&chiral, true).unwrap().cardinality, Cardinality::Finite(2));

        let space =
            system(Manifold::EuclideanRn(3), DefectSet::Empty, Symmetry::SpatialLattice { has_reflection: false });
        let r = textures(&space, true).unwrap();
        assert!(matches!(r.components[0].descriptor, ClassDescriptor::PreQuotient { rank: 1, .. }));
        assert_eq!(textures(&space, false).unwrap().cardinality, Cardinality::Finite(2));

        let aut = vec![IntMat::identity(3), IntMat::diagonal(&[-1, -1, -1])];
        let flat = system(
            Manifold::FlatTorus(3),
            DefectSet::Empty,
            Symmetry::TorusFamily { p_gv: None, aut_lattice: Some(aut) },
        );
        let r = textures(&flat, false).unwrap();
        assert_eq!(r.components[0].descriptor, ClassDescriptor::FreeAbelian { rank: 9 });
        assert_eq!(r.chirality.size(), 2);

        let punctured =
            system(Manifold::EuclideanRn(2), DefectSet::Points(1), Symmetry::PlanarLattice(PointGroup2D::square()));
        assert_eq!(textures(&punctured, false), Err(ClassifyError::NonEmptyDefectSet));
    }

    #[test]
    fn vacua_multiply_per_component() {
        let a = Arrangement { hyperplanes: 1, counts: vec![vec![0]; 2] };
        let mut spec = system(
            Manifold::EuclideanRn(2),
            DefectSet::AffineArrangement(a),
            Symmetry::PlanarLattice(PointGroup2D::square()),
        );
        let base = classify(&spec).unwrap().cardinality.finite().unwrap();
        spec.vacua_count = 2;
        assert_eq!(classify(&spec).unwrap().cardinality.finite().unwrap(), base * 4);
    }

    #[test]
    fn mismatched_symmetry() {
        let spec = system(Manifold::SphereSn(2), DefectSet::Points(1), Symmetry::PlanarLattice(PointGroup2D::square()));
        assert!(matches!(classify(&spec), Err(ClassifyError::InconsistentSpec { .. })));
        let flat =
            system(Manifold::FlatTorus(2), DefectSet::Empty, Symmetry::TorusFamily { p_gv: None, aut_lattice: None });
        assert!(matches!(classify(&flat), Err(ClassifyError::InconsistentSpec { .. })));
    }
}
