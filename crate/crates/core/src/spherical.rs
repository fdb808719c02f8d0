//! Binary polyhedral groups: the finite subgroups of `SU(2)` lying over the
//! rotation groups of the 2-sphere, built exactly as unit quaternions.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadratic::{QQuat, QuadExt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SphericalError {
    #[error("{kind} with n = {n} needs cos(π/{n}), which lies in no single real quadratic field")]
    UnsupportedOrder { kind: &'static str, n: u32 },
    #[error("closure of the generators of {kind} exceeded {cap} elements")]
    ClosureCapExceeded { kind: String, cap: usize },
    #[error("{kind}: closure produced {got} elements, expected {expected}")]
    WrongOrder { kind: String, expected: usize, got: usize },
    #[error("element set is not a group: {0}")]
    NotAGroup(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", content = "n", rename_all = "snake_case")]
pub enum BinaryKind {
    Cyclic(u32),
    Dihedral(u32),
    Tetrahedral,
    Octahedral,
    Icosahedral,
}

impl BinaryKind {
    pub fn family(self) -> &'static str {
        match self {
            BinaryKind::Cyclic(_) => "binary cyclic",
            BinaryKind::Dihedral(_) => "binary dihedral",
            BinaryKind::Tetrahedral => "binary tetrahedral",
            BinaryKind::Octahedral => "binary octahedral",
            BinaryKind::Icosahedral => "binary icosahedral",
        }
    }

    /// ADE label, metadata only.
    pub fn ade_label(self) -> String {
        match self {
            BinaryKind::Cyclic(n) => format!("A_{n}"),
            BinaryKind::Dihedral(n) => format!("D_{n}"),
            BinaryKind::Tetrahedral => "E_6".into(),
            BinaryKind::Octahedral => "E_7".into(),
            BinaryKind::Icosahedral => "E_8".into(),
        }
    }

    /// Point-group triple `(p, q, r)` of the underlying rotation group.
    pub fn point_group_triple(self) -> (u32, u32, u32) {
        match self {
            BinaryKind::Cyclic(n) => (1, n, n),
            BinaryKind::Dihedral(n) => (2, 2, n),
            BinaryKind::Tetrahedral => (2, 3, 3),
            BinaryKind::Octahedral => (2, 3, 4),
            BinaryKind::Icosahedral => (2, 3, 5),
        }
    }

    pub fn expected_order(self) -> usize {
        match self {
            BinaryKind::Cyclic(n) => 2 * n as usize,
            BinaryKind::Dihedral(n) => 4 * n as usize,
            BinaryKind::Tetrahedral => 24,
            BinaryKind::Octahedral => 48,
            BinaryKind::Icosahedral => 120,
        }
    }

    /// Number of conjugacy classes as printed in the published table of
    /// binary polyhedral groups. Compared against, never trusted.
    pub fn tabulated_class_count(self) -> u32 {
        match self {
            BinaryKind::Cyclic(n) => n,
            BinaryKind::Dihedral(n) => n + 3,
            BinaryKind::Tetrahedral => 7,
            BinaryKind::Octahedral => 9,
            BinaryKind::Icosahedral => 11,
        }
    }

    /// Rotation angles listed for the group in the published table.
    pub fn tabulated_angles(self) -> Vec<String> {
        match self {
            BinaryKind::Cyclic(n) => vec![format!("2π/{n}")],
            BinaryKind::Dihedral(n) => vec![format!("2π/{n}"), "π".into()],
            BinaryKind::Tetrahedral => vec!["2π/3".into(), "π".into()],
            BinaryKind::Octahedral => vec!["2π/3".into(), "π/2".into(), "π".into()],
            BinaryKind::Icosahedral => vec!["2π/5".into(), "2π/3".into(), "π".into()],
        }
    }
}

impl fmt::Display for BinaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BinaryKind::Cyclic(n) | BinaryKind::Dihedral(n) => write!(f, "{}({n})", self.family()),
            _ => f.write_str(self.family()),
        }
    }
}

fn qx(an: i64, ad: i64, bn: i64, bd: i64, d: i64) -> QuadExt {
    QuadExt::frac(an, ad, bn, bd, d)
}

fn quat(c: [QuadExt; 4]) -> QQuat {
    let [w, x, y, z] = c;
    QQuat::new(w, x, y, z)
}

/// Field and a generator of order `2n` (rotation by `2π/n`) for the binary
/// cyclic group, when `cos(π/n)` is at most quadratic.
fn cyclic_generator(n: u32) -> Option<(i64, QQuat)> {
    Some(match n {
        1 => (1, QQuat::scaled([-1, 0, 0, 0], 1, 1)),
        2 => (1, QQuat::scaled([0, 1, 0, 0], 1, 1)),
        3 => (1, QQuat::scaled([1, 1, 1, 1], 2, 1)),
        4 => (2, quat([qx(0, 1, 1, 2, 2), qx(0, 1, 1, 2, 2), QuadExt::zero(2), QuadExt::zero(2)])),
        // w = φ/2 = cos(π/5), axis (1, φ^-1, 0)
        5 => (5, quat([qx(1, 4, 1, 4, 5), qx(1, 2, 0, 1, 5), qx(-1, 4, 1, 4, 5), QuadExt::zero(5)])),
        6 => (3, quat([qx(0, 1, 1, 2, 3), qx(1, 2, 0, 1, 3), QuadExt::zero(3), QuadExt::zero(3)])),
        _ => return None,
    })
}

fn generators(kind: BinaryKind) -> Result<(i64, Vec<QQuat>), SphericalError> {
    let j = |d| QQuat::new(QuadExt::zero(d), QuadExt::zero(d), QuadExt::one(d), QuadExt::zero(d));
    let k = |d| QQuat::new(QuadExt::zero(d), QuadExt::zero(d), QuadExt::zero(d), QuadExt::one(d));
    Ok(match kind {
        BinaryKind::Cyclic(n) => {
            let (d, g) = cyclic_generator(n).ok_or(SphericalError::UnsupportedOrder { kind: "binary cyclic", n })?;
            (d, vec![g])
        }
        BinaryKind::Dihedral(n) => {
            // the cyclic generator must rotate about an axis with a rational
            // perpendicular unit vector, so n = 3 uses the i-axis over Q(√3)
            let (d, g) = match n {
                3 => (3, quat([qx(1, 2, 0, 1, 3), qx(0, 1, 1, 2, 3), QuadExt::zero(3), QuadExt::zero(3)])),
                _ => cyclic_generator(n).ok_or(SphericalError::UnsupportedOrder { kind: "binary dihedral", n })?,
            };
            let flip = if n == 5 { k(d) } else { j(d) };
            (d, vec![g, flip])
        }
        BinaryKind::Tetrahedral => (1, vec![QQuat::scaled([0, 1, 0, 0], 1, 1), QQuat::scaled([1, 1, 1, 1], 2, 1)]),
        BinaryKind::Octahedral => (
            2,
            vec![
                quat([qx(0, 1, 1, 2, 2), qx(0, 1, 1, 2, 2), QuadExt::zero(2), QuadExt::zero(2)]),
                QQuat::scaled([1, 1, 1, 1], 2, 2),
            ],
        ),
        BinaryKind::Icosahedral => (
            5,
            vec![
                QQuat::scaled([1, 1, 1, 1], 2, 5),
                // (φ + φ^-1 i + j) / 2
                quat([qx(1, 4, 1, 4, 5), qx(-1, 4, 1, 4, 5), qx(1, 2, 0, 1, 5), QuadExt::zero(5)]),
            ],
        ),
    })
}

/// A binary polyhedral group with its exact element set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryGroup {
    pub kind: BinaryKind,
    pub field_d: i64,
    /// Sorted in lexicographic numeric order of coordinates.
    pub elements: Vec<QQuat>,
}

/// Closure of the generators under multiplication.
pub fn build_group(kind: BinaryKind) -> Result<BinaryGroup, SphericalError> {
    if matches!(kind, BinaryKind::Cyclic(0) | BinaryKind::Dihedral(0)) {
        return Err(SphericalError::UnsupportedOrder { kind: kind.family(), n: 0 });
    }
    let (d, gens) = generators(kind)?;
    debug_assert!(gens.iter().all(QQuat::is_unit));
    let expected = kind.expected_order();
    let cap = 10 * expected;
    let one = QQuat::one(d);
    let mut seen: HashSet<QQuat> = HashSet::from([one.clone()]);
    let mut queue = VecDeque::from([one]);
    while let Some(e) = queue.pop_front() {
        for g in &gens {
            let p = &e * g;
            if seen.insert(p.clone()) {
                if seen.len() > cap {
                    return Err(SphericalError::ClosureCapExceeded { kind: kind.to_string(), cap });
                }
                queue.push_back(p);
            }
        }
    }
    if seen.len() != expected {
        return Err(SphericalError::WrongOrder { kind: kind.to_string(), expected, got: seen.len() });
    }
    let mut elements: Vec<QQuat> = seen.into_iter().collect();
    elements.sort();
    Ok(BinaryGroup { kind, field_d: d, elements })
}

impl BinaryGroup {
    /// Wraps an explicit element list, checking it is a group of unit
    /// quaternions of the kind's order.
    pub fn from_elements(kind: BinaryKind, elements: Vec<QQuat>) -> Result<Self, SphericalError> {
        let d = elements.first().map(QQuat::field).ok_or_else(|| SphericalError::NotAGroup("empty".into()))?;
        let set: HashSet<&QQuat> = elements.iter().collect();
        if set.len() != elements.len() {
            return Err(SphericalError::NotAGroup("repeated elements".into()));
        }
        if elements.len() != kind.expected_order() {
            return Err(SphericalError::WrongOrder {
                kind: kind.to_string(),
                expected: kind.expected_order(),
                got: elements.len(),
            });
        }
        if let Some(q) = elements.iter().find(|q| q.field() != d || !q.is_unit()) {
            return Err(SphericalError::NotAGroup(format!("{q} is not a unit over Q(√{d})")));
        }
        let g = BinaryGroup { kind, field_d: d, elements };
        if !g.is_closed() {
            return Err(SphericalError::NotAGroup("not closed under multiplication".into()));
        }
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, q: &QQuat) -> bool {
        self.elements.binary_search(q).is_ok()
    }

    /// Every product and inverse stays in the element set.
    pub fn is_closed(&self) -> bool {
        self.elements
            .iter()
            .all(|a| self.contains(&a.unit_inverse()) && self.elements.iter().all(|b| self.contains(&(a * b))))
    }

    pub fn center(&self) -> Vec<QQuat> {
        self.elements.iter().filter(|&a| self.elements.iter().all(|b| a * b == b * a)).cloned().collect()
    }
}

/// Conjugation-invariant description of a unit quaternion
/// `q = cos(α/2) + sin(α/2) u` by its real part `w = cos(α/2)`, `α ∈ [0, 2π]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationAngle {
    pub w: QuadExt,
}

impl RotationAngle {
    /// `cos α = 2 w^2 - 1`, the cosine of the rotation angle in SO(3).
    pub fn cos_rotation(&self) -> QuadExt {
        let two = QuadExt::int(2, self.w.field());
        &(&two * &(&self.w * &self.w)) - &QuadExt::one(self.w.field())
    }

    /// `α / π` as a reduced fraction, recovered from the exact `w` (all group
    /// elements have finite order, so `α` is a rational multiple of `π`).
    pub fn spin_angle_over_pi(&self) -> Rational64 {
        let x = 2.0 * self.w.to_f64().clamp(-1.0, 1.0).acos() / std::f64::consts::PI;
        for den in 1..=120i64 {
            let num = (x * den as f64).round();
            if (num / den as f64 - x).abs() < 1e-9 {
                return Rational64::new(num as i64, den);
            }
        }
        unreachable!("rotation angle of a finite-order element is a rational multiple of π")
    }

    /// Unsigned SO(3) rotation angle over `π`, in `[0, 1]`.
    pub fn so3_angle_over_pi(&self) -> Rational64 {
        let a = self.spin_angle_over_pi();
        let two = Rational64::from_integer(2);
        if a > Rational64::from_integer(1) {
            two - a
        } else {
            a
        }
    }

    /// `α` written as a multiple of `π`, e.g. `2π/3`.
    pub fn label(&self) -> String {
        pi_label(self.spin_angle_over_pi())
    }

    pub fn so3_label(&self) -> String {
        pi_label(self.so3_angle_over_pi())
    }
}

fn pi_label(r: Rational64) -> String {
    let (n, d) = (*r.numer(), *r.denom());
    match (n, d) {
        (0, _) => "0".into(),
        (1, 1) => "π".into(),
        (n, 1) => format!("{n}π"),
        (1, d) => format!("π/{d}"),
        (n, d) => format!("{n}π/{d}"),
    }
}

impl fmt::Display for RotationAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

pub fn rotation_angle(q: &QQuat) -> RotationAngle {
    RotationAngle { w: q.w.clone() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClass {
    /// Sorted elements.
    pub elements: Vec<QQuat>,
    pub angle: RotationAngle,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

/// Brute-force partition by `x ~ h x h^-1`, ordered by class size, then by
/// rotation angle, then by least element.
pub fn conjugacy_classes(g: &BinaryGroup) -> Vec<ConjugacyClass> {
    let inverses: Vec<QQuat> = g.elements.iter().map(QQuat::unit_inverse).collect();
    let mut assigned: HashSet<&QQuat> = HashSet::new();
    let mut classes = Vec::new();
    for x in &g.elements {
        if assigned.contains(x) {
            continue;
        }
        let mut class: Vec<QQuat> = g
            .elements
            .iter()
            .zip(&inverses)
            .map(|(h, hinv)| &(h * x) * hinv)
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        class.sort();
        for c in &class {
            let member = g.elements.binary_search(c).map(|i| &g.elements[i]).expect("closed under conjugation");
            assigned.insert(member);
        }
        classes.push(ConjugacyClass { angle: rotation_angle(x), elements: class });
    }
    // larger w means smaller angle
    classes.sort_by(|a, b| {
        a.size().cmp(&b.size()).then_with(|| b.angle.w.cmp(&a.angle.w)).then_with(|| a.elements[0].cmp(&b.elements[0]))
    });
    classes
}

pub fn class_equation(g: &BinaryGroup) -> Vec<usize> {
    conjugacy_classes(g).iter().map(ConjugacyClass::size).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(coords: [i64; 4], den: i64) -> QQuat {
        QQuat::scaled(coords, den, 1)
    }

    #[test]
    fn cyclic_one_is_plus_minus_one() {
        let g = build_group(BinaryKind::Cyclic(1)).unwrap();
        assert_eq!(g.elements, vec![unit([-1, 0, 0, 0], 1), unit([1, 0, 0, 0], 1)]);
        assert_eq!(class_equation(&g), vec![1, 1]);
    }

    #[test]
    fn quaternion_group() {
        let g = build_group(BinaryKind::Dihedral(2)).unwrap();
        assert_eq!(g.order(), 8);
        for c in [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]] {
            assert!(g.contains(&unit(c, 1)));
            assert!(g.contains(&unit(c, 1).neg()));
        }
        let classes = conjugacy_classes(&g);
        assert_eq!(classes.len(), 5);
        assert_eq!(class_equation(&g), vec![1, 1, 2, 2, 2]);
        assert_eq!(classes[0].elements, vec![unit([1, 0, 0, 0], 1)]);
        assert_eq!(classes[1].elements, vec![unit([-1, 0, 0, 0], 1)]);
    }

    #[test]
    fn tetrahedral_elements() {
        let g = build_group(BinaryKind::Tetrahedral).unwrap();
        assert_eq!(g.order(), 24);
        assert_eq!(g.field_d, 1);
        let halves = g.elements.iter().filter(|q| q.coords().iter().all(|c| c.to_f64().abs() == 0.5)).count();
        assert_eq!(halves, 16);
        assert_eq!(conjugacy_classes(&g).len(), 7);
        assert_eq!(class_equation(&g).iter().sum::<usize>(), 24);
    }

    #[test]
    fn fields_per_group() {
        assert_eq!(build_group(BinaryKind::Octahedral).unwrap().field_d, 2);
        assert_eq!(build_group(BinaryKind::Icosahedral).unwrap().field_d, 5);
        assert_eq!(build_group(BinaryKind::Cyclic(6)).unwrap().field_d, 3);
    }

    #[test]
    fn unsupported_orders() {
        for n in [0, 7, 8, 10, 12] {
            assert!(matches!(build_group(BinaryKind::Cyclic(n)), Err(SphericalError::UnsupportedOrder { .. })));
            assert!(matches!(build_group(BinaryKind::Dihedral(n)), Err(SphericalError::UnsupportedOrder { .. })));
        }
    }

    #[test]
    fn angles() {
        assert_eq!(rotation_angle(&unit([-1, 0, 0, 0], 1)).label(), "2π");
        assert_eq!(rotation_angle(&unit([0, 1, 0, 0], 1)).label(), "π");
        let w = rotation_angle(&unit([1, 1, 1, 1], 2));
        assert_eq!(w.label(), "2π/3");
        assert_eq!(w.cos_rotation(), QuadExt::frac(-1, 2, 0, 1, 1));
        assert_eq!(rotation_angle(&unit([1, 0, 0, 0], 1)).label(), "0");
    }

    #[test]
    fn from_elements_rejects_non_groups() {
        let mut els = build_group(BinaryKind::Dihedral(2)).unwrap().elements;
        els.pop();
        assert!(BinaryGroup::from_elements(BinaryKind::Dihedral(2), els.clone()).is_err());
        els.push(unit([1, 1, 1, 1], 2));
        assert!(matches!(BinaryGroup::from_elements(BinaryKind::Dihedral(2), els), Err(SphericalError::NotAGroup(_))));
    }
}
