use gerbe_core::fingroup::presets::{cyclic, symmetric, symmetric_with_perms};
use gerbe_core::parallel::SearchOptions;
use gerbe_core::simplicial::{circle, enumerate_simplicial_maps, homotopy_classes, point, validate_simplicial, SimplicialGroup};
use gerbe_core::twist::{
    bar_construction, build_twisted_product, build_wbar, build_wg, check_equivalence, classify_bundles,
    enumerate_twistings, twistings_equivalent, validate_twisting, witness_compose, witness_inverse, Twisting,
};

fn opts() -> SearchOptions {
    SearchOptions::default()
}

fn transposition(perms: &[Vec<usize>], a: usize, b: usize) -> usize {
    let mut p: Vec<usize> = (0..3).collect();
    p.swap(a, b);
    perms.iter().position(|q| *q == p).unwrap()
}

/// Twisting on the minimal circle with value `k` on the nondegenerate edge,
/// propagated through degeneracies by solving the twisting conditions.
fn circle_twisting(g: &SimplicialGroup, k: usize) -> Twisting {
    let x = circle(3);
    let edge = x.nondegenerate(1)[0];
    enumerate_twistings(&x, g, &opts())
        .unwrap()
        .into_iter()
        .find(|t| t.at(1, edge) == k)
        .unwrap()
}

#[test]
fn wbar_of_constant_z2_has_bar_sizes() {
    let wbar = bar_construction(&cyclic(2), 3);
    assert_eq!(wbar.sizes(), &[1, 2, 4, 8]);
    assert!(validate_simplicial(&wbar).is_valid());
    // ∂_i(g₀) = ∗ on level 1
    for i in 0..2 {
        assert!((0..2).all(|g| wbar.face(1, i, g) == 0));
    }
}

#[test]
fn canonical_twisting_and_wg_validate() {
    let g = SimplicialGroup::constant(&symmetric(3), 2);
    let (wbar, tau, _) = build_wbar(&g);
    assert!(validate_simplicial(&wbar).is_valid());
    assert!(validate_twisting(&tau).is_valid());
    let wg = build_wg(&g);
    assert!(wg.check().is_valid());
}

#[test]
fn trivial_twisting_gives_product() {
    let g = SimplicialGroup::constant(&cyclic(3), 3);
    let x = circle(3);
    let t = Twisting::trivial(&x, &g).unwrap();
    let p = build_twisted_product(&t).unwrap();
    assert!(p.check().is_valid());
    for n in 1..=3 {
        for s in 0..p.set.size(n) {
            let (gv, xv) = p.decode(n, s);
            for i in 0..=n {
                assert_eq!(p.set.face(n, i, s), p.encode(n - 1, gv, x.face(n, i, xv)));
            }
        }
    }
}

#[test]
fn circle_twisted_by_transposition() {
    let (s3, perms) = symmetric_with_perms(3);
    let g = SimplicialGroup::constant(&s3, 3);
    let t12 = transposition(&perms, 0, 1);
    let t = circle_twisting(&g, t12);
    let p = build_twisted_product(&t).unwrap();
    let x = t.base();
    let edge = x.nondegenerate(1)[0];
    for gv in s3.elements() {
        let s = p.encode(1, gv, edge);
        assert_eq!(p.set.face(1, 0, s), p.encode(0, s3.mul(gv, t12), 0));
        assert_eq!(p.set.face(1, 1, s), p.encode(0, gv, 0));
    }
}

#[test]
fn conjugate_transpositions_are_equivalent() {
    let (s3, perms) = symmetric_with_perms(3);
    let g = SimplicialGroup::constant(&s3, 3);
    let a = circle_twisting(&g, transposition(&perms, 0, 1));
    let b = circle_twisting(&g, transposition(&perms, 0, 2));
    let id = circle_twisting(&g, s3.identity());
    let psi = twistings_equivalent(&a, &b, 1_000_000).unwrap().expect("conjugate");
    assert!(check_equivalence(&a, &b, &psi).is_valid());
    // ψ(pt) conjugates (13) into (12): k (13) = (12) k
    let k = psi.levels[0][0];
    assert_eq!(s3.mul(k, transposition(&perms, 0, 2)), s3.mul(transposition(&perms, 0, 1), k));
    assert!(twistings_equivalent(&id, &a, 1_000_000).unwrap().is_none());
    let refl = twistings_equivalent(&a, &a, 1_000_000).unwrap().unwrap();
    assert!(check_equivalence(&a, &a, &refl).is_valid());
}

#[test]
fn witnesses_compose_and_invert() {
    let (s3, perms) = symmetric_with_perms(3);
    let g = SimplicialGroup::constant(&s3, 3);
    let a = circle_twisting(&g, transposition(&perms, 0, 1));
    let b = circle_twisting(&g, transposition(&perms, 0, 2));
    let c = circle_twisting(&g, transposition(&perms, 1, 2));
    let ab = twistings_equivalent(&a, &b, 1_000_000).unwrap().unwrap();
    let bc = twistings_equivalent(&b, &c, 1_000_000).unwrap().unwrap();
    assert!(check_equivalence(&b, &a, &witness_inverse(&g, &ab)).is_valid());
    assert!(check_equivalence(&a, &c, &witness_compose(&g, &ab, &bc)).is_valid());
}

#[test]
fn every_circle_twisting_builds_a_valid_product() {
    for grp in [cyclic(4), symmetric(3)] {
        let g = SimplicialGroup::constant(&grp, 3);
        let twistings = enumerate_twistings(&circle(3), &g, &opts()).unwrap();
        assert_eq!(twistings.len(), grp.order());
        for t in &twistings {
            assert!(validate_twisting(t).is_valid());
            assert!(build_twisted_product(t).unwrap().check().is_valid());
        }
    }
}

#[test]
fn classification_on_the_circle() {
    for (grp, expected) in [(symmetric(3), 3), (cyclic(4), 4)] {
        let g = SimplicialGroup::constant(&grp, 3);
        let r = classify_bundles(&circle(3), &g, &opts()).unwrap();
        assert_eq!(r.twisting_classes, expected);
        assert_eq!(r.homotopy_classes, expected);
        assert!(r.matched);
    }
    let g = SimplicialGroup::constant(&symmetric(3), 3);
    let r = classify_bundles(&point(3), &g, &opts()).unwrap();
    assert_eq!((r.twisting_classes, r.homotopy_classes), (1, 1));
    assert!(r.matched);
}

#[test]
fn maps_from_circle_into_bar_s3() {
    let wbar = build_wbar(&SimplicialGroup::constant(&symmetric(3), 2)).0;
    let x = circle(3);
    let maps = enumerate_simplicial_maps(&x, &wbar, &opts()).unwrap();
    assert_eq!(maps.len(), 6);
    assert_eq!(homotopy_classes(&maps, &x, &wbar, &opts()).unwrap().class_count(), 3);
    assert!(homotopy_classes(&maps[..1], &point(3), &wbar, &opts()).is_err());
}
