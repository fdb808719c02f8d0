//! Homotopy types of punctured manifolds and the homotopy classes of maps
//! from them into crystal order-parameter spaces.

use std::fmt;

use thiserror::Error;

use crate::classifier::{EuclideanLattice, OrderParamDescriptor};
use crate::semidirect::PointGroup2D;
use crate::spherical::BinaryKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomotopyError {
    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),
    #[error("no rule for maps from {domain} into {target}")]
    UnsupportedPair { domain: String, target: String },
}

/// Closed vocabulary of homotopy types reached by the retraction rules.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum HomotopyType {
    Point,
    /// Wedge of spheres, dimensions ascending, never empty.
    Wedge(Vec<u32>),
    /// `T^n` with `n >= 1`.
    Torus(u32),
    /// At least two components.
    Disjoint(Vec<HomotopyType>),
}

impl HomotopyType {
    pub fn wedge<I: IntoIterator<Item = u32>>(dims: I) -> Self {
        let mut dims: Vec<u32> = dims.into_iter().collect();
        assert!(dims.iter().all(|&d| d >= 1), "wedge summands are spheres of dimension >= 1");
        if dims.is_empty() {
            return HomotopyType::Point;
        }
        dims.sort_unstable();
        HomotopyType::Wedge(dims)
    }

    pub fn sphere(n: u32) -> Self {
        Self::wedge([n])
    }

    /// `k` copies of `S^n`.
    pub fn bouquet(n: u32, k: u32) -> Self {
        Self::wedge(std::iter::repeat_n(n, k as usize))
    }

    pub fn torus(n: u32) -> Self {
        if n == 0 {
            HomotopyType::Point
        } else {
            HomotopyType::Torus(n)
        }
    }

    pub fn disjoint(parts: Vec<HomotopyType>) -> Self {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                HomotopyType::Disjoint(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => panic!("disjoint union of no spaces"),
            1 => flat.pop().expect("one element"),
            _ => HomotopyType::Disjoint(flat),
        }
    }

    /// Number of 1-spheres in a wedge.
    fn circles(&self) -> u32 {
        match self {
            HomotopyType::Wedge(d) => d.iter().filter(|&&x| x == 1).count() as u32,
            _ => 0,
        }
    }
}

impl fmt::Display for HomotopyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomotopyType::Point => f.write_str("pt"),
            HomotopyType::Wedge(dims) => {
                let mut first = true;
                let mut i = 0;
                while i < dims.len() {
                    let d = dims[i];
                    let run = dims[i..].iter().take_while(|&&x| x == d).count();
                    if !first {
                        f.write_str(" ∨ ")?;
                    }
                    first = false;
                    if run > 1 {
                        write!(f, "(S^{d})^∨{run}")?;
                    } else {
                        write!(f, "S^{d}")?;
                    }
                    i += run;
                }
                Ok(())
            }
            HomotopyType::Torus(n) => write!(f, "T^{n}"),
            HomotopyType::Disjoint(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ⊔ ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Manifold {
    EuclideanRn(u32),
    SphereSn(u32),
    /// `R x S^1` embedded in `R^3`.
    Cylinder2D,
    /// Surface of revolution `T^2` embedded in `R^3`.
    Torus2D,
    /// `R^n / Λ` with the flat metric.
    FlatTorus(u32),
    /// `S^1 x (0, ∞)` in the plane.
    Annulus2D,
}

impl Manifold {
    pub fn dim(self) -> u32 {
        match self {
            Manifold::EuclideanRn(n) | Manifold::SphereSn(n) | Manifold::FlatTorus(n) => n,
            Manifold::Cylinder2D | Manifold::Torus2D | Manifold::Annulus2D => 2,
        }
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Manifold::EuclideanRn(n) => write!(f, "R^{n}"),
            Manifold::SphereSn(n) => write!(f, "S^{n}"),
            Manifold::Cylinder2D => f.write_str("2D cylinder"),
            Manifold::Torus2D => f.write_str("2D torus"),
            Manifold::FlatTorus(n) => write!(f, "{n}D flat torus"),
            Manifold::Annulus2D => f.write_str("2D annulus"),
        }
    }
}

/// Combinatorics of pairwise disjoint affine subspaces of `R^n`: `hyperplanes`
/// parallel hyperplanes cut `R^n` into `hyperplanes + 1` slabs, and
/// `counts[i][j]` is the number of `j`-dimensional subspaces inside slab `i`
/// (`j = 0..n-1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    pub hyperplanes: u32,
    pub counts: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DefectSet {
    Points(u32),
    AffineArrangement(Arrangement),
    CircleInR3,
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceSpec {
    pub manifold: Manifold,
    pub defect: DefectSet,
}

impl SpaceSpec {
    pub fn new(manifold: Manifold, defect: DefectSet) -> Self {
        Self { manifold, defect }
    }

    pub fn punctured(manifold: Manifold, m: u32) -> Self {
        Self::new(manifold, DefectSet::Points(m))
    }

    /// Number of point punctures; `Empty` counts as zero.
    pub fn point_count(&self) -> Option<u32> {
        match self.defect {
            DefectSet::Points(m) => Some(m),
            DefectSet::Empty => Some(0),
            _ => None,
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.defect {
            DefectSet::Points(m) => write!(f, "{} minus {m} point(s)", self.manifold),
            DefectSet::AffineArrangement(a) => {
                write!(f, "{} minus an arrangement with {} hyperplane(s)", self.manifold, a.hyperplanes)
            }
            DefectSet::CircleInR3 => write!(f, "{} minus a circle", self.manifold),
            DefectSet::Empty => write!(f, "{}", self.manifold),
        }
    }
}

fn unsupported(s: &SpaceSpec, why: &str) -> HomotopyError {
    HomotopyError::UnsupportedSpace(format!("{s}: {why}"))
}

fn arrangement_components(n: u32, a: &Arrangement, s: &SpaceSpec) -> Result<Vec<HomotopyType>, HomotopyError> {
    if n == 0 {
        return Err(unsupported(s, "R^0 has no hyperplanes"));
    }
    if a.counts.len() != a.hyperplanes as usize + 1 {
        return Err(unsupported(s, &format!("expected {} slab rows, got {}", a.hyperplanes + 1, a.counts.len())));
    }
    if let Some(row) = a.counts.iter().find(|r| r.len() != (n - 1) as usize) {
        return Err(unsupported(s, &format!("each slab row needs {} entries, got {}", n - 1, row.len())));
    }
    Ok(a.counts
        .iter()
        .map(|row| {
            // a j-dimensional subspace links an (n-j-1)-sphere
            HomotopyType::wedge(
                row.iter().enumerate().flat_map(|(j, &k)| std::iter::repeat_n(n - j as u32 - 1, k as usize)),
            )
        })
        .collect())
}

/// Homotopy types of the connected components of `M \ X`.
pub fn retract(s: &SpaceSpec) -> Result<Vec<HomotopyType>, HomotopyError> {
    use DefectSet as D;
    use Manifold as M;
    let single = |t: HomotopyType| Ok(vec![t]);
    match (s.manifold, &s.defect) {
        (M::EuclideanRn(0), _) => Err(unsupported(s, "dimension must be positive")),
        (M::EuclideanRn(_), D::Empty) | (M::EuclideanRn(_), D::Points(0)) => single(HomotopyType::Point),
        // points of the line are its hyperplanes
        (M::EuclideanRn(1), D::Points(m)) => Ok(vec![HomotopyType::Point; *m as usize + 1]),
        (M::EuclideanRn(n), D::Points(m)) => single(HomotopyType::bouquet(n - 1, *m)),
        (M::EuclideanRn(n), D::AffineArrangement(a)) => arrangement_components(n, a, s),
        (M::EuclideanRn(3), D::CircleInR3) => single(HomotopyType::wedge([1, 2])),
        (M::SphereSn(0), _) => Err(unsupported(s, "dimension must be positive")),
        (M::SphereSn(n), D::Empty) | (M::SphereSn(n), D::Points(0)) => single(HomotopyType::sphere(n)),
        (M::SphereSn(1), D::Points(m)) => Ok(vec![HomotopyType::Point; *m as usize]),
        (M::SphereSn(n), D::Points(m)) => single(HomotopyType::bouquet(n - 1, m - 1)),
        (M::Cylinder2D, D::Empty) => single(HomotopyType::sphere(1)),
        (M::Cylinder2D, D::Points(m)) | (M::Annulus2D, D::Points(m)) => single(HomotopyType::bouquet(1, m + 1)),
        (M::Annulus2D, D::Empty) => single(HomotopyType::sphere(1)),
        (M::Torus2D, D::Empty) | (M::Torus2D, D::Points(0)) => single(HomotopyType::torus(2)),
        (M::Torus2D, D::Points(m)) => single(HomotopyType::bouquet(1, m + 1)),
        (M::FlatTorus(n), _) if n < 2 => Err(unsupported(s, "flat tori need dimension >= 2")),
        (M::FlatTorus(n), D::Empty) | (M::FlatTorus(n), D::Points(0)) => single(HomotopyType::torus(n)),
        (M::FlatTorus(n), D::Points(m)) => single(HomotopyType::bouquet(n - 1, m + 1)),
        _ => Err(unsupported(s, "no retraction rule for this defect set")),
    }
}

/// Rank of the free abelian group `H^1(t; Z)`.
pub fn h1(t: &HomotopyType) -> u32 {
    match t {
        HomotopyType::Point => 0,
        HomotopyType::Wedge(_) => t.circles(),
        HomotopyType::Torus(n) => *n,
        HomotopyType::Disjoint(parts) => parts.iter().map(h1).sum(),
    }
}

/// Set size of a class descriptor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cardinality {
    Finite(u128),
    CountablyInfinite,
    /// Infinite, described by the family it is parametrized by.
    ParametrizedFamily(String),
}

impl Cardinality {
    /// Cardinality of a product of nonempty sets.
    pub fn product<I: IntoIterator<Item = Cardinality>>(factors: I) -> Cardinality {
        let mut finite: Option<u128> = Some(1);
        let mut countable = false;
        let mut families: Vec<String> = Vec::new();
        for c in factors {
            match c {
                Cardinality::Finite(n) => finite = finite.and_then(|f| f.checked_mul(n)),
                Cardinality::CountablyInfinite => countable = true,
                Cardinality::ParametrizedFamily(s) => families.push(s),
            }
        }
        if !families.is_empty() {
            return Cardinality::ParametrizedFamily(families.join(" × "));
        }
        match (countable, finite) {
            (false, Some(n)) => Cardinality::Finite(n),
            _ => Cardinality::CountablyInfinite,
        }
    }

    pub fn finite(&self) -> Option<u128> {
        match self {
            Cardinality::Finite(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Finite(n) => write!(f, "{n}"),
            Cardinality::CountablyInfinite => f.write_str("countably infinite"),
            Cardinality::ParametrizedFamily(s) => write!(f, "family {s}"),
        }
    }
}

/// Group whose conjugacy classes classify loops in the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConjugacySource {
    /// `Z^2 ⋊_M Z`; classes are `∐_{n3} F_{n3}`.
    Planar(PointGroup2D),
    /// `Z^3 ⋊ q^-1(C)` for a crystal in `R^3`; not enumerated.
    Spatial,
    /// A binary polyhedral group with its computed class count.
    Binary { kind: BinaryKind, class_count: usize },
}

impl ConjugacySource {
    fn cardinality(&self) -> Cardinality {
        match self {
            ConjugacySource::Planar(pg) => {
                Cardinality::ParametrizedFamily(format!("∐_{{n3∈Z}} F_{{n3}}({})", pg.name()))
            }
            ConjugacySource::Spatial => Cardinality::ParametrizedFamily("conjugacy classes of Z^3 ⋊ q3^-1(C)".into()),
            ConjugacySource::Binary { class_count, .. } => Cardinality::Finite(*class_count as u128),
        }
    }
}

/// Description of `hTop[A, V]` for one component `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassDescriptor {
    Trivial,
    FiniteSet {
        count: u64,
        labels: Vec<String>,
    },
    FreeAbelian {
        rank: u32,
    },
    /// `(conjugacy classes of π1)^copies`.
    ConjClasses {
        source: ConjugacySource,
        copies: u32,
    },
    /// `Z^rank` before the quotient by the named `π1`-action.
    PreQuotient {
        rank: u32,
        action: String,
    },
    Product(Vec<ClassDescriptor>),
}

impl ClassDescriptor {
    pub fn cardinality(&self) -> Cardinality {
        match self {
            ClassDescriptor::Trivial => Cardinality::Finite(1),
            ClassDescriptor::FiniteSet { count, .. } => Cardinality::Finite(u128::from(*count)),
            ClassDescriptor::FreeAbelian { rank: 0 } => Cardinality::Finite(1),
            ClassDescriptor::FreeAbelian { .. } => Cardinality::CountablyInfinite,
            ClassDescriptor::ConjClasses { source, copies } => {
                Cardinality::product((0..*copies).map(|_| source.cardinality()))
            }
            ClassDescriptor::PreQuotient { rank, action } => {
                Cardinality::ParametrizedFamily(format!("Z^{rank} / {action}-action"))
            }
            ClassDescriptor::Product(parts) => Cardinality::product(parts.iter().map(Self::cardinality)),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.cardinality() == Cardinality::Finite(1)
    }

    fn from_factors(mut parts: Vec<ClassDescriptor>) -> Self {
        parts.retain(|p| *p != ClassDescriptor::Trivial);
        match parts.len() {
            0 => ClassDescriptor::Trivial,
            1 => parts.pop().expect("one"),
            _ => ClassDescriptor::Product(parts),
        }
    }
}

impl fmt::Display for ClassDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassDescriptor::Trivial => f.write_str("trivial"),
            ClassDescriptor::FiniteSet { count, .. } => write!(f, "finite set of {count}"),
            ClassDescriptor::FreeAbelian { rank: 0 } => f.write_str("0"),
            ClassDescriptor::FreeAbelian { rank: 1 } => f.write_str("Z"),
            ClassDescriptor::FreeAbelian { rank } => write!(f, "Z^{rank}"),
            ClassDescriptor::ConjClasses { source, copies } => {
                let group = match source {
                    ConjugacySource::Planar(pg) => format!("Z^2 ⋊_M Z ({})", pg.name()),
                    ConjugacySource::Spatial => "Z^3 ⋊ q3^-1(C)".to_string(),
                    ConjugacySource::Binary { kind, .. } => kind.to_string(),
                };
                write!(f, "(conjugacy classes of {group})")?;
                if *copies != 1 {
                    write!(f, "^{copies}")?;
                }
                Ok(())
            }
            ClassDescriptor::PreQuotient { rank, action } => write!(f, "Z^{rank} modulo {action}-action"),
            ClassDescriptor::Product(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" × ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

/// Homotopy classes of free maps from a space of type `t` into the
/// order-parameter space described by `target`.
pub fn maps_into(t: &HomotopyType, target: &OrderParamDescriptor) -> Result<ClassDescriptor, HomotopyError> {
    let pair_err = || HomotopyError::UnsupportedPair { domain: t.to_string(), target: target.to_string() };
    match (t, target) {
        (HomotopyType::Disjoint(parts), _) => {
            let descs = parts.iter().map(|p| maps_into(p, target)).collect::<Result<Vec<_>, _>>()?;
            Ok(ClassDescriptor::Product(descs))
        }
        (HomotopyType::Point, _) => Ok(ClassDescriptor::Trivial),
        (_, OrderParamDescriptor::TorusTarget { k, .. }) => Ok(ClassDescriptor::FreeAbelian { rank: h1(t) * k }),
        (HomotopyType::Torus(_), _) => Err(pair_err()),
        (HomotopyType::Wedge(dims), OrderParamDescriptor::EuclideanCrystal(lattice)) => {
            let (source, covering_dim) = match lattice {
                // the universal cover of SO(2) is R, contractible
                EuclideanLattice::Planar(pg) => (ConjugacySource::Planar(pg.clone()), 2),
                EuclideanLattice::Spatial { .. } => (ConjugacySource::Spatial, 3),
            };
            wedge_factors(dims, source, covering_dim, "q3^-1(C)").ok_or_else(pair_err)
        }
        (HomotopyType::Wedge(dims), OrderParamDescriptor::SphereCrystal { group, .. }) => {
            let count = crate::spherical::conjugacy_classes(group).len();
            let source = ConjugacySource::Binary { kind: group.kind, class_count: count };
            wedge_factors(dims, source, 3, "q3^-1(Γ)").ok_or_else(pair_err)
        }
    }
}

/// Per-summand factors for a wedge into a target whose higher homotopy is
/// that of the universal cover of `SO(covering_dim)`.
fn wedge_factors(dims: &[u32], source: ConjugacySource, covering_dim: u32, action: &str) -> Option<ClassDescriptor> {
    let circles = dims.iter().filter(|&&d| d == 1).count() as u32;
    let mut parts = Vec::new();
    if circles > 0 {
        parts.push(ClassDescriptor::ConjClasses { source, copies: circles });
    }
    for &d in dims.iter().filter(|&&d| d >= 2) {
        match (covering_dim, d) {
            // R is contractible; π2 of a Lie group vanishes
            (2, _) | (_, 2) => {}
            // π3(Spin(3)) = Z
            (3, 3) => parts.push(ClassDescriptor::PreQuotient { rank: 1, action: action.to_string() }),
            _ => return None,
        }
    }
    Some(ClassDescriptor::from_factors(parts))
}
