//! The group `Z^2 ⋊_M Z` of a planar crystal, its conjugacy classes at
//! fixed disclination index, and a brute-force orbit oracle.
//!
//! Conjugation never changes the disclination index `n3`. At fixed `n3` the
//! translation parts of a class form an orbit of `<M>` acting on the cosets
//! of `Z^2 / im(I - M^n3)`. When that quotient is finite the classes are a
//! finite list; otherwise they are described by a fundamental domain with a
//! total canonicalization map.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlin::{self, AbelianQuotient, IntLinError, IntMat};
use crate::union_find::UnionFind;

type Mat2 = [[i64; 2]; 2];

/// Integer 2-vector `(n1, n2)`.
pub type Vec2 = [i64; 2];

const MAX_FINITE_ORDER: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemidirectError {
    #[error("point-group generator must be 2x2, got {rows}x{cols}")]
    NotTwoByTwo { rows: usize, cols: usize },
    #[error("matrix {0} has infinite order")]
    InfiniteOrder(IntMat),
    #[error("unknown lattice `{0}`")]
    UnknownLattice(String),
    #[error(transparent)]
    IntLin(#[from] IntLinError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeKind {
    Parallelogram,
    Rectangle,
    Square,
    Hexagonal,
    Custom,
}

impl LatticeKind {
    pub const NAMED: [LatticeKind; 4] =
        [LatticeKind::Parallelogram, LatticeKind::Rectangle, LatticeKind::Square, LatticeKind::Hexagonal];

    pub fn name(self) -> &'static str {
        match self {
            LatticeKind::Parallelogram => "parallelogram",
            LatticeKind::Rectangle => "rectangle",
            LatticeKind::Square => "square",
            LatticeKind::Hexagonal => "hexagonal",
            LatticeKind::Custom => "custom",
        }
    }
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Rotational point group of a planar lattice, generated by `m` in lattice
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointGroup2D {
    kind: LatticeKind,
    m: IntMat,
    order: u32,
    has_reflection: bool,
    powers: Vec<Mat2>,
}

fn to_mat2(m: &IntMat) -> Mat2 {
    [[m.get(0, 0), m.get(0, 1)], [m.get(1, 0), m.get(1, 1)]]
}

#[inline]
fn mat_vec(m: &Mat2, v: Vec2) -> Vec2 {
    let dot = |row: &[i64; 2]| {
        row[0]
            .checked_mul(v[0])
            .and_then(|a| a.checked_add(row[1].checked_mul(v[1])?))
            .expect("integer overflow in Z^2 ⋊ Z arithmetic")
    };
    [dot(&m[0]), dot(&m[1])]
}

#[inline]
fn vadd(a: Vec2, b: Vec2) -> Vec2 {
    let f = |x: i64, y: i64| x.checked_add(y).expect("integer overflow in Z^2 ⋊ Z arithmetic");
    [f(a[0], b[0]), f(a[1], b[1])]
}

#[inline]
fn vneg(a: Vec2) -> Vec2 {
    [-a[0], -a[1]]
}

impl PointGroup2D {
    pub fn parallelogram() -> Self {
        Self::catalog(LatticeKind::Parallelogram, [[1, 0], [0, 1]], false)
    }

    pub fn rectangle() -> Self {
        Self::catalog(LatticeKind::Rectangle, [[-1, 0], [0, -1]], true)
    }

    pub fn square() -> Self {
        Self::catalog(LatticeKind::Square, [[0, 1], [-1, 0]], true)
    }

    pub fn hexagonal() -> Self {
        Self::catalog(LatticeKind::Hexagonal, [[1, 1], [-1, 0]], true)
    }

    pub fn named(kind: LatticeKind) -> Option<Self> {
        Some(match kind {
            LatticeKind::Parallelogram => Self::parallelogram(),
            LatticeKind::Rectangle => Self::rectangle(),
            LatticeKind::Square => Self::square(),
            LatticeKind::Hexagonal => Self::hexagonal(),
            LatticeKind::Custom => return None,
        })
    }

    pub fn from_name(name: &str) -> Result<Self, SemidirectError> {
        LatticeKind::NAMED
            .into_iter()
            .find(|k| k.name() == name)
            .and_then(Self::named)
            .ok_or_else(|| SemidirectError::UnknownLattice(name.to_string()))
    }

    fn catalog(kind: LatticeKind, m: Mat2, has_reflection: bool) -> Self {
        let mat = IntMat::from_rows(&m).expect("2x2 literal");
        let mut g = Self::custom(mat, has_reflection).expect("catalog generator has finite order");
        g.kind = kind;
        g
    }

    /// Point group generated by an arbitrary integer matrix. The order is
    /// computed; matrices of infinite order are rejected.
    pub fn custom(m: IntMat, has_reflection: bool) -> Result<Self, SemidirectError> {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(SemidirectError::NotTwoByTwo { rows: m.rows(), cols: m.cols() });
        }
        let mut powers = vec![[[1, 0], [0, 1]]];
        let mut acc = IntMat::identity(2);
        for k in 1..=MAX_FINITE_ORDER {
            acc = match acc.mul(&m) {
                Ok(a) => a,
                Err(IntLinError::Overflow) => break,
                Err(e) => return Err(e.into()),
            };
            if acc.is_identity() {
                return Ok(Self { kind: LatticeKind::Custom, m, order: k, has_reflection, powers });
            }
            powers.push(to_mat2(&acc));
        }
        Err(SemidirectError::InfiniteOrder(m))
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn generator(&self) -> &IntMat {
        &self.m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn has_reflection(&self) -> bool {
        self.has_reflection
    }

    fn power(&self, e: i64) -> &Mat2 {
        &self.powers[e.rem_euclid(i64::from(self.order)) as usize]
    }

    /// `M^e` for any integer `e`.
    pub fn power_matrix(&self, e: i64) -> IntMat {
        IntMat::from_rows(self.power(e)).expect("2x2")
    }

    /// `I - M^n3`, whose image generates the translational conjugation moves.
    pub fn translation_lattice(&self, n3: i64) -> IntMat {
        let p = self.power(n3);
        IntMat::from_rows(&[[1 - p[0][0], -p[0][1]], [-p[1][0], 1 - p[1][1]]]).expect("2x2")
    }
}

/// Element `(ñ, n3)` of `Z^2 ⋊_M Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SdElement {
    pub n_vec: Vec2,
    pub n3: i64,
}

impl SdElement {
    pub const IDENTITY: SdElement = SdElement { n_vec: [0, 0], n3: 0 };

    pub fn new(n1: i64, n2: i64, n3: i64) -> Self {
        Self { n_vec: [n1, n2], n3 }
    }

    pub fn inverse(&self, pg: &PointGroup2D) -> Self {
        Self { n_vec: vneg(mat_vec(pg.power(-self.n3), self.n_vec)), n3: -self.n3 }
    }
}

impl fmt::Display for SdElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({},{}),{})", self.n_vec[0], self.n_vec[1], self.n3)
    }
}

/// `(a, a3)(b, b3) = (a + M^a3 b, a3 + b3)`.
pub fn multiply(a: &SdElement, b: &SdElement, pg: &PointGroup2D) -> SdElement {
    SdElement {
        n_vec: vadd(a.n_vec, mat_vec(pg.power(a.n3), b.n_vec)),
        n3: a.n3.checked_add(b.n3).expect("integer overflow in Z^2 ⋊ Z arithmetic"),
    }
}

/// `g x g^-1 = ((I - M^x3) g + M^g3 x, x3)`.
pub fn conjugate(g: &SdElement, x: &SdElement, pg: &PointGroup2D) -> SdElement {
    let p = pg.power(x.n3);
    let shift = vadd(g.n_vec, vneg(mat_vec(p, g.n_vec)));
    SdElement { n_vec: vadd(shift, mat_vec(pg.power(g.n3), x.n_vec)), n3: x.n3 }
}

/// Ordering used to pick class representatives: the origin, then the open
/// quadrant `n1 >= 0, n2 > 0`, then the upper half plane, then the positive
/// `n1` axis, then everything else; ties by L1 norm, `n1`, `n2`.
fn rep_key(n: Vec2) -> (u8, u64, i64, i64) {
    let tier = match n {
        [0, 0] => 0,
        [a, b] if a >= 0 && b > 0 => 1,
        [_, b] if b > 0 => 2,
        [a, 0] if a > 0 => 3,
        _ => 4,
    };
    (tier, n[0].unsigned_abs() + n[1].unsigned_abs(), n[0], n[1])
}

fn better(a: Vec2, b: Vec2) -> bool {
    rep_key(a).cmp(&rep_key(b)) == Ordering::Less
}

/// Canonicalization of translation parts at one fixed `n3`.
#[derive(Debug, Clone)]
pub struct FixedIndexClasses {
    pg: PointGroup2D,
    n3: i64,
    lattice: IntMat,
    quotient: AbelianQuotient,
    /// Finite quotients only: best box member of each coset, by coordinates.
    coset_best: HashMap<Vec<i64>, Vec2>,
}

impl FixedIndexClasses {
    pub fn new(pg: &PointGroup2D, n3: i64) -> Self {
        let lattice = pg.translation_lattice(n3);
        let quotient = intlin::quotient(&lattice).expect("2x2 quotient of a finite-order matrix");
        let mut coset_best: HashMap<Vec<i64>, Vec2> = HashMap::new();
        if let Some(e) = quotient.exponent() {
            for a in 0..e {
                for b in 0..e {
                    let p = [a, b];
                    let c = quotient.reduce(&p).expect("2-vector");
                    coset_best
                        .entry(c)
                        .and_modify(|cur| {
                            if better(p, *cur) {
                                *cur = p;
                            }
                        })
                        .or_insert(p);
                }
            }
        }
        Self { pg: pg.clone(), n3, lattice, quotient, coset_best }
    }

    pub fn point_group(&self) -> &PointGroup2D {
        &self.pg
    }

    pub fn n3(&self) -> i64 {
        self.n3
    }

    /// `I - M^n3`.
    pub fn lattice(&self) -> &IntMat {
        &self.lattice
    }

    pub fn quotient(&self) -> &AbelianQuotient {
        &self.quotient
    }

    pub fn is_finite(&self) -> bool {
        self.quotient.is_finite()
    }

    fn best_in_coset(&self, v: Vec2) -> Vec2 {
        let c = self.quotient.reduce(&v).expect("2-vector");
        if self.quotient.is_finite() {
            self.coset_best[&c]
        } else {
            let l = self.quotient.lift(&c).expect("lift");
            [l[0], l[1]]
        }
    }

    /// Canonical translation part of the class of `(n, n3)`.
    pub fn canonical(&self, n: Vec2) -> Vec2 {
        (0..i64::from(self.pg.order()))
            .map(|k| self.best_in_coset(mat_vec(self.pg.power(k), n)))
            .min_by_key(|&v| rep_key(v))
            .expect("order >= 1")
    }

    /// Sorted canonical representatives, `None` for infinite class sets.
    pub fn finite_representatives(&self) -> Option<Vec<Vec2>> {
        if !self.is_finite() {
            return None;
        }
        let mut reps: Vec<Vec2> = self.coset_best.values().map(|&v| self.canonical(v)).collect();
        reps.sort_unstable();
        reps.dedup();
        Some(reps)
    }
}

/// Symbolic shape of an infinite family of class representatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainRegion {
    /// All of `Z^2`: every element is its own class.
    Whole,
    /// `{n2 > 0} ∪ {(n1, 0) | n1 > 0} ∪ {0}`.
    HalfPlane,
    /// `{n1 >= 0, n2 > 0} ∪ {0}`.
    Quadrant,
    /// No closed-form region; membership is decided by canonicalization.
    OrbitMinimal,
}

impl DomainRegion {
    pub fn contains(self, n: Vec2) -> Option<bool> {
        let [a, b] = n;
        match self {
            DomainRegion::Whole => Some(true),
            DomainRegion::HalfPlane => Some(b > 0 || (b == 0 && a >= 0)),
            DomainRegion::Quadrant => Some((a >= 0 && b > 0) || n == [0, 0]),
            DomainRegion::OrbitMinimal => None,
        }
    }

    pub fn predicate(self) -> &'static str {
        match self {
            DomainRegion::Whole => "Z^2",
            DomainRegion::HalfPlane => "{(n1,n2) | n2>0} ∪ {(n1,0) | n1>0} ∪ {(0,0)}",
            DomainRegion::Quadrant => "{(n1,n2) | n1>=0, n2>0} ∪ {(0,0)}",
            DomainRegion::OrbitMinimal => "{orbit-minimal coset representatives of Z^2/im(I-M^n3) under <M>}",
        }
    }
}

/// Conjugacy classes at fixed `n3`.
#[derive(Debug, Clone)]
pub struct ClassSet {
    pub n3: i64,
    pub kind: ClassSetKind,
    classes: FixedIndexClasses,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassSetKind {
    Finite(Vec<Vec2>),
    FundamentalDomain(DomainRegion),
}

/// Side length of the window on which a fundamental domain is matched
/// against the closed-form regions.
const REGION_PROBE: i64 = 12;

impl ClassSet {
    pub fn from_classes(classes: FixedIndexClasses) -> Self {
        let n3 = classes.n3;
        let kind = match classes.finite_representatives() {
            Some(reps) => ClassSetKind::Finite(reps),
            None => {
                let region = [DomainRegion::Whole, DomainRegion::HalfPlane, DomainRegion::Quadrant]
                    .into_iter()
                    .find(|r| window(REGION_PROBE).all(|n| r.contains(n) == Some(classes.canonical(n) == n)))
                    .unwrap_or(DomainRegion::OrbitMinimal);
                ClassSetKind::FundamentalDomain(region)
            }
        };
        Self { n3, kind, classes }
    }

    pub fn classes(&self) -> &FixedIndexClasses {
        &self.classes
    }

    pub fn representatives(&self) -> Option<&[Vec2]> {
        match &self.kind {
            ClassSetKind::Finite(r) => Some(r),
            ClassSetKind::FundamentalDomain(_) => None,
        }
    }

    pub fn class_count(&self) -> Option<usize> {
        self.representatives().map(<[Vec2]>::len)
    }

    pub fn canonical(&self, n: Vec2) -> Vec2 {
        self.classes.canonical(n)
    }

    /// Whether `n` is the chosen representative of its class.
    pub fn contains(&self, n: Vec2) -> bool {
        self.canonical(n) == n
    }

    /// Representatives inside the box `|n1|, |n2| <= b`, row-major.
    pub fn members_in_window(&self, b: i64) -> Vec<Vec2> {
        window(b).filter(|&n| self.contains(n)).collect()
    }
}

/// Points of the box `[-b, b]^2` in lexicographic order.
pub fn window(b: i64) -> impl Iterator<Item = Vec2> {
    (-b..=b).flat_map(move |x| (-b..=b).map(move |y| [x, y]))
}

/// Conjugacy classes of `Z^2 ⋊_M Z` with disclination index `n3`.
pub fn f_classes(pg: &PointGroup2D, n3: i64) -> ClassSet {
    ClassSet::from_classes(FixedIndexClasses::new(pg, n3))
}

pub fn canonical_rep(pg: &PointGroup2D, x: &SdElement) -> SdElement {
    let n_vec = FixedIndexClasses::new(pg, x.n3).canonical(x.n_vec);
    SdElement { n_vec, n3: x.n3 }
}

/// A partition of the translation parts in a window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowPartition {
    pub window: i64,
    pub n3: i64,
    /// Each class ascending; classes ordered by least member.
    pub classes: Vec<Vec<Vec2>>,
}

impl WindowPartition {
    fn from_labels(window_size: i64, n3: i64, points: &[Vec2], uf: &mut UnionFind) -> Self {
        let classes = uf.groups().into_iter().map(|g| g.into_iter().map(|i| points[i]).collect()).collect();
        Self { window: window_size, n3, classes }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Brute-force conjugacy partition of `{ñ : |n1|, |n2| <= b}` at fixed
/// `n3`: reachability closure under conjugation by every `g` with
/// `|g.n_vec| <= 3b` and `g.n3` in `[0, N)`.
pub fn brute_force_classes(pg: &PointGroup2D, n3: i64, b: i64) -> WindowPartition {
    assert!(b >= 1, "window must be positive");
    let points: Vec<Vec2> = window(b).collect();
    let side = 2 * b + 1;
    let index = |n: Vec2| -> Option<usize> {
        (n[0].abs() <= b && n[1].abs() <= b).then(|| ((n[0] + b) * side + (n[1] + b)) as usize)
    };
    let reach = 3 * b;
    let mut uf = UnionFind::new(points.len());
    for g3 in 0..i64::from(pg.order()) {
        for g in window(reach) {
            let g = SdElement { n_vec: g, n3: g3 };
            for (i, &p) in points.iter().enumerate() {
                let y = conjugate(&g, &SdElement { n_vec: p, n3 }, pg);
                if let Some(j) = index(y.n_vec) {
                    uf.union(i, j);
                }
            }
        }
    }
    WindowPartition::from_labels(b, n3, &points, &mut uf)
}

/// The partition induced on the window by canonical representatives.
pub fn closed_form_partition(set: &ClassSet, b: i64) -> WindowPartition {
    let points: Vec<Vec2> = window(b).collect();
    let mut first: HashMap<Vec2, usize> = HashMap::new();
    let mut uf = UnionFind::new(points.len());
    for (i, &p) in points.iter().enumerate() {
        let c = set.canonical(p);
        match first.get(&c) {
            Some(&j) => {
                uf.union(i, j);
            }
            None => {
                first.insert(c, i);
            }
        }
    }
    WindowPartition::from_labels(b, set.n3, &points, &mut uf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n1: i64, n2: i64, n3: i64) -> SdElement {
        SdElement::new(n1, n2, n3)
    }

    #[test]
    fn catalog_orders() {
        let orders: Vec<u32> = LatticeKind::NAMED.iter().map(|&k| PointGroup2D::named(k).unwrap().order()).collect();
        assert_eq!(orders, vec![1, 2, 4, 6]);
        assert!(!PointGroup2D::parallelogram().has_reflection());
        assert!(PointGroup2D::hexagonal().has_reflection());
    }

    #[test]
    fn custom_order_is_computed() {
        let refl = IntMat::from_rows(&[[0, 1], [1, 0]]).unwrap();
        assert_eq!(PointGroup2D::custom(refl, true).unwrap().order(), 2);
        let shear = IntMat::from_rows(&[[2, 0], [0, 1]]).unwrap();
        assert!(matches!(PointGroup2D::custom(shear, false), Err(SemidirectError::InfiniteOrder(_))));
        let unipotent = IntMat::from_rows(&[[1, 1], [0, 1]]).unwrap();
        assert!(PointGroup2D::custom(unipotent, false).is_err());
        let wide = IntMat::zeros(2, 3);
        assert!(matches!(PointGroup2D::custom(wide, false), Err(SemidirectError::NotTwoByTwo { .. })));
    }

    #[test]
    fn multiply_examples() {
        let hex = PointGroup2D::hexagonal();
        let x = e(3, -2, 4);
        assert_eq!(multiply(&SdElement::IDENTITY, &x, &hex), x);
        assert_eq!(multiply(&e(1, 0, 1), &e(1, 0, 0), &hex), e(2, -1, 1));
        assert_eq!(multiply(&x, &x.inverse(&hex), &hex), SdElement::IDENTITY);
        assert_eq!(multiply(&x.inverse(&hex), &x, &hex), SdElement::IDENTITY);
    }

    #[test]
    fn conjugate_examples() {
        let hex = PointGroup2D::hexagonal();
        let x = e(1, 0, 1);
        assert_eq!(conjugate(&SdElement::IDENTITY, &x, &hex), x);
        assert_eq!(conjugate(&e(-1, 1, 0), &x, &hex), e(0, 0, 1));
    }

    #[test]
    fn hexagonal_classes_by_residue() {
        let hex = PointGroup2D::hexagonal();
        assert_eq!(f_classes(&hex, 2).kind, ClassSetKind::Finite(vec![[0, 0], [0, 1]]));
        assert_eq!(f_classes(&hex, 1).kind, ClassSetKind::Finite(vec![[0, 0]]));
        assert_eq!(f_classes(&hex, 0).kind, ClassSetKind::FundamentalDomain(DomainRegion::Quadrant));
    }

    #[test]
    fn other_named_examples() {
        assert_eq!(f_classes(&PointGroup2D::square(), 2).kind, ClassSetKind::Finite(vec![[0, 0], [0, 1], [1, 1]]));
        assert_eq!(
            f_classes(&PointGroup2D::rectangle(), 1).kind,
            ClassSetKind::Finite(vec![[0, 0], [0, 1], [1, 0], [1, 1]])
        );
        for n3 in [-3, 0, 5] {
            assert_eq!(
                f_classes(&PointGroup2D::parallelogram(), n3).kind,
                ClassSetKind::FundamentalDomain(DomainRegion::Whole)
            );
        }
    }

    #[test]
    fn canonical_examples() {
        let hex = PointGroup2D::hexagonal();
        assert_eq!(canonical_rep(&hex, &e(5, -3, 1)), e(0, 0, 1));
        let sq = PointGroup2D::square();
        let c = canonical_rep(&sq, &e(2, 1, 2));
        assert!([[0, 0], [0, 1], [1, 1]].contains(&c.n_vec));
        assert_eq!(canonical_rep(&sq, &c), c);
    }

    #[test]
    fn partially_free_custom_quotient() {
        // a reflection: I - M is singular but nonzero at odd n3
        let refl = PointGroup2D::custom(IntMat::from_rows(&[[1, 0], [0, -1]]).unwrap(), true).unwrap();
        let set = f_classes(&refl, 1);
        assert_eq!(set.kind, ClassSetKind::FundamentalDomain(DomainRegion::OrbitMinimal));
        assert_eq!(set.canonical([7, 3]), set.canonical([7, -3]));
        assert_eq!(set.canonical([7, 3]), set.canonical([7, 1]));
        assert_ne!(set.canonical([7, 0]), set.canonical([7, 1]));
        assert_ne!(set.canonical([7, 0]), set.canonical([6, 0]));
        assert_eq!(closed_form_partition(&set, 4), brute_force_classes(&refl, 1, 4));
    }

    #[test]
    fn oracle_small_cases() {
        let par = brute_force_classes(&PointGroup2D::parallelogram(), 3, 4);
        assert_eq!(par.len(), 81);
        let hex = brute_force_classes(&PointGroup2D::hexagonal(), 3, 5);
        assert_eq!(hex.len(), 2);
        assert_eq!(hex.classes[0].len() + hex.classes[1].len(), 121);
    }
}
