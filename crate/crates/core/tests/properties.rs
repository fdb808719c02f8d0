use defect_core::intlin::{quotient, snf, IntMat};
use defect_core::semidirect::{canonical_rep, conjugate, multiply, PointGroup2D, SdElement};
use defect_core::spherical::{build_group, class_equation, conjugacy_classes, BinaryKind};
use proptest::prelude::*;

fn mat2() -> impl Strategy<Value = IntMat> {
    prop::array::uniform4(-10i64..=10).prop_map(|[a, b, c, d]| IntMat::from_rows(&[[a, b], [c, d]]).unwrap())
}

fn lattice() -> impl Strategy<Value = PointGroup2D> {
    prop_oneof![
        Just(PointGroup2D::parallelogram()),
        Just(PointGroup2D::rectangle()),
        Just(PointGroup2D::square()),
        Just(PointGroup2D::hexagonal()),
    ]
}

fn element(r: i64) -> impl Strategy<Value = SdElement> {
    (-r..=r, -r..=r, -r..=r).prop_map(|(a, b, c)| SdElement::new(a, b, c))
}

fn in_image(l: &IntMat, x: [i64; 2]) -> bool {
    // x ∈ L Z^2 iff adj(L) x ≡ 0 (mod det L), for nonsingular L
    let (a, b, c, d) = (l.get(0, 0), l.get(0, 1), l.get(1, 0), l.get(1, 1));
    let det = a * d - b * c;
    let y = [d * x[0] - b * x[1], -c * x[0] + a * x[1]];
    y[0] % det == 0 && y[1] % det == 0
}

proptest! {
    #[test]
    fn snf_factorisation(a in mat2()) {
        let s = snf(&a).unwrap();
        prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert_eq!(s.u.det().unwrap().abs(), 1);
        prop_assert_eq!(s.v.det().unwrap().abs(), 1);
        prop_assert!(s.u.mul(&s.u_inv).unwrap().is_identity());
        let diag = s.diagonal();
        prop_assert!(diag.iter().all(|&x| x >= 0));
        for w in diag.windows(2) {
            prop_assert!(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0));
        }
        prop_assert_eq!(diag.iter().product::<i64>(), a.det().unwrap().abs());
    }

    #[test]
    fn coset_count_is_determinant(a in mat2()) {
        let det = a.det().unwrap().abs();
        prop_assume!(det != 0 && det <= 64);
        let q = quotient(&a).unwrap();
        prop_assert_eq!(q.coset_count(), Some(det as u64));
        let mut seen = std::collections::BTreeSet::new();
        let mut pts = Vec::new();
        for x in 0..det {
            for y in 0..det {
                seen.insert(q.reduce(&[x, y]).unwrap());
                pts.push([x, y]);
            }
        }
        prop_assert_eq!(seen.len() as i64, det);
        for (i, p) in pts.iter().enumerate().step_by(7) {
            let r = pts[(i * 13 + 5) % pts.len()];
            let same = q.reduce(p).unwrap() == q.reduce(&r).unwrap();
            prop_assert_eq!(same, in_image(&a, [p[0] - r[0], p[1] - r[1]]));
        }
    }

    #[test]
    fn matmul_associative(a in mat2(), b in mat2(), c in mat2()) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn semidirect_group_axioms(pg in lattice(), a in element(6), b in element(6), c in element(6)) {
        let ab_c = multiply(&multiply(&a, &b, &pg), &c, &pg);
        let a_bc = multiply(&a, &multiply(&b, &c, &pg), &pg);
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(multiply(&a, &a.inverse(&pg), &pg), SdElement::IDENTITY);
        prop_assert_eq!(multiply(&a.inverse(&pg), &a, &pg), SdElement::IDENTITY);
        prop_assert_eq!(multiply(&SdElement::IDENTITY, &a, &pg), a);
    }

    #[test]
    fn conjugation_closed_form(pg in lattice(), g in element(8), x in element(8)) {
        let direct = multiply(&multiply(&g, &x, &pg), &g.inverse(&pg), &pg);
        prop_assert_eq!(conjugate(&g, &x, &pg), direct);
    }

    #[test]
    fn canonical_rep_is_a_class_invariant(pg in lattice(), g in element(5), x in element(5)) {
        let c = canonical_rep(&pg, &x);
        prop_assert_eq!(canonical_rep(&pg, &c), c);
        prop_assert_eq!(canonical_rep(&pg, &conjugate(&g, &x, &pg)), c);
        prop_assert_eq!(c.n3, x.n3);
    }
}

#[test]
fn conjugation_on_a_thousand_triples() {
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut next = |r: i64| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state % (2 * r as u64 + 1)) as i64 - r
    };
    let lattices =
        [PointGroup2D::parallelogram(), PointGroup2D::rectangle(), PointGroup2D::square(), PointGroup2D::hexagonal()];
    for i in 0..1000 {
        let pg = &lattices[i % 4];
        let g = SdElement::new(next(20), next(20), next(20));
        let x = SdElement::new(next(20), next(20), next(20));
        let direct = multiply(&multiply(&g, &x, pg), &g.inverse(pg), pg);
        assert_eq!(conjugate(&g, &x, pg), direct, "{pg:?} g={g} x={x}");
    }
}

fn binary_kinds() -> Vec<BinaryKind> {
    let mut kinds: Vec<BinaryKind> = (1..=6).map(BinaryKind::Cyclic).collect();
    kinds.extend((2..=6).map(BinaryKind::Dihedral));
    kinds.extend([BinaryKind::Tetrahedral, BinaryKind::Octahedral, BinaryKind::Icosahedral]);
    kinds
}

#[test]
fn binary_groups_are_closed_with_consistent_classes() {
    for kind in binary_kinds() {
        let g = build_group(kind).unwrap();
        assert_eq!(g.order(), kind.expected_order(), "{kind}");
        assert!(g.is_closed(), "{kind}");
        let classes = conjugacy_classes(&g);
        assert_eq!(class_equation(&g).iter().sum::<usize>(), g.order(), "{kind}");
        for class in &classes {
            assert_eq!(g.order() % class.size(), 0, "{kind}");
            for h in &class.elements {
                for x in &g.elements {
                    let y = &(x * h) * &x.conj();
                    assert!(class.elements.contains(&y), "{kind}: class not closed");
                }
            }
        }
        if !matches!(kind, BinaryKind::Cyclic(_)) {
            assert_eq!(g.center().len(), 2, "{kind}");
        }
    }
}
