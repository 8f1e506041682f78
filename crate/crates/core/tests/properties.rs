use std::f64::consts::{PI, TAU};

use hypext::cli::parse_map_spec;
use hypext::extensions::{build_extension, Extension, ExtensionMethod, ExtensionParams, MapInput};
use hypext::extensions::{open_book_extension, radial_extension};
use hypext::geometry::{
    ball_distance, chart_to_ball, chordal_distance, geodesic_interpolate, hyperbolic_distance,
    stereographic_lift, stereographic_project, BallPoint, HalfSpacePoint, SpacePoint, SpherePoint,
};
use hypext::julia3d::{classical_escape_count, escape_count, render_slice, SliceSpec};
use hypext::maps::{critical_points, factor_rational, BlaschkeProduct, Polynomial, RationalMap};
use hypext::mobius::{page_decompose, page_point, tau_phi_space, MobiusTransform};
use hypext::star::{exp_hat, exp_hat_inverse, product_extension, q_hat, q_hat_c, star_product, ExpCoords};
use num_complex::Complex64;
use proptest::prelude::*;

type Vec3 = [f64; 3];

fn hp(x: f64, y: f64, t: f64) -> HalfSpacePoint {
    HalfSpacePoint::new(x, y, t).unwrap()
}

fn v3(p: HalfSpacePoint) -> Vec3 {
    p.coords().unwrap()
}

fn vnorm(v: Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn vdist(a: Vec3, b: Vec3) -> f64 {
    vnorm([a[0] - b[0], a[1] - b[1], a[2] - b[2]])
}

fn rel(a: HalfSpacePoint, b: HalfSpacePoint) -> f64 {
    let (a, b) = (v3(a), v3(b));
    vdist(a, b) / vnorm(a).max(vnorm(b)).max(f64::MIN_POSITIVE)
}

fn space_rel(a: SpacePoint, b: SpacePoint) -> f64 {
    let size = |p: SpacePoint| p.finite().map_or(f64::INFINITY, vnorm);
    a.distance(b) / size(a).max(size(b)).max(1.0)
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn open_point() -> impl Strategy<Value = HalfSpacePoint> {
    (-3.0..3.0f64, -3.0..3.0f64, 0.05..3.0f64).prop_map(|(x, y, t)| hp(x, y, t))
}

/// Open points with occasional axis and boundary points.
fn mixed_point() -> impl Strategy<Value = HalfSpacePoint> {
    prop_oneof![
        6 => open_point(),
        1 => (0.05..3.0f64).prop_map(|t| hp(0.0, 0.0, t)),
        1 => (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(x, y)| hp(x, y, 0.0)),
    ]
}

fn mobius() -> impl Strategy<Value = MobiusTransform> {
    (complex(), complex(), complex(), complex())
        .prop_filter("nondegenerate", |(a, b, c, d)| (a * d - b * c).norm() > 0.1)
        .prop_map(|(a, b, c, d)| MobiusTransform::new(a, b, c, d).unwrap())
}

fn disk_point(max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max, 0.0..TAU).prop_map(|(r, a)| Complex64::from_polar(r, a))
}

fn disk_automorphism() -> impl Strategy<Value = MobiusTransform> {
    (0.0..TAU, disk_point(0.8)).prop_map(|(theta, a)| MobiusTransform::disk_automorphism(theta, a).unwrap())
}

fn blaschke(max_degree: usize) -> impl Strategy<Value = BlaschkeProduct> {
    (0.0..TAU, prop::collection::vec(disk_point(0.8), 1..=max_degree))
        .prop_map(|(theta, zeros)| BlaschkeProduct::new(theta, zeros).unwrap())
}

fn rational(degree: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = RationalMap> {
    degree
        .prop_flat_map(|d| (prop::collection::vec(complex(), d + 1), prop::collection::vec(complex(), d + 1)))
        .prop_filter_map("reduced, full degree", |(n, d)| {
            let degree = n.len() - 1;
            RationalMap::new(Polynomial::new(n), Polynomial::new(d))
                .ok()
                .filter(|r| r.degree() == degree)
        })
}

fn ball_point() -> impl Strategy<Value = BallPoint> {
    (0.0..0.95f64, 0.0..PI, 0.0..TAU).prop_map(|(r, polar, az)| {
        BallPoint::new([r * polar.sin() * az.cos(), r * polar.sin() * az.sin(), r * polar.cos()]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn stereographic_round_trip(z in complex()) {
        let back = stereographic_project(stereographic_lift(SpherePoint::Finite(z))).unwrap();
        prop_assert!(chordal_distance(back, SpherePoint::Finite(z)) <= 1e-12);
    }

    #[test]
    fn model_transfer_keeps_distance(p in open_point(), q in open_point()) {
        let d = hyperbolic_distance(p, q).unwrap();
        let e = ball_distance(chart_to_ball(p), chart_to_ball(q)).unwrap();
        prop_assert!((d - e).abs() <= 1e-9 * d.max(1.0), "{d} {e}");
    }

    #[test]
    fn triangle_inequality(p in open_point(), q in open_point(), r in open_point()) {
        let d = |a, b| hyperbolic_distance(a, b).unwrap();
        prop_assert!(d(p, r) <= d(p, q) + d(q, r) + 1e-12 * d(p, r).max(1.0));
    }

    #[test]
    fn geodesic_reverses(p in open_point(), q in open_point(), lambda in 0.0..=1.0f64) {
        let a = geodesic_interpolate(p, q, lambda).unwrap();
        let b = geodesic_interpolate(q, p, 1.0 - lambda).unwrap();
        prop_assert!(rel(a, b) <= 1e-10);
    }

    #[test]
    fn mobius_inverse_and_boundary(g in mobius(), z in complex()) {
        let w = g.inverse().apply(g.apply(SpherePoint::Finite(z)));
        prop_assert!(chordal_distance(w, SpherePoint::Finite(z)) <= 1e-12);
        if let (SpherePoint::Finite(gz), HalfSpacePoint::Finite { z: ez, t }) =
            (g.apply(SpherePoint::Finite(z)), g.extend(HalfSpacePoint::boundary(z)))
        {
            prop_assert!(t == 0.0);
            prop_assert!((gz - ez).norm() <= 1e-12 * gz.norm().max(1.0));
        }
    }

    #[test]
    fn poincare_homomorphism_and_isometry(g in mobius(), h in mobius(), p in open_point(), q in open_point()) {
        prop_assert!(rel(g.compose(&h).extend(p), g.extend(h.extend(p))) <= 1e-10);
        let d = hyperbolic_distance(p, q).unwrap();
        let e = hyperbolic_distance(g.extend(p), g.extend(q)).unwrap();
        prop_assert!((d - e).abs() <= 1e-9 * d.max(1.0));
    }

    #[test]
    fn tau_group_law(phi in 0.0..TAU, psi in 0.0..TAU, p in open_point(), a in 0.0..TAU) {
        let lhs = tau_phi_space(phi, tau_phi_space(psi, p.into()));
        prop_assert!(space_rel(lhs, tau_phi_space(phi + psi, p.into())) <= 1e-10);
        let u = Complex64::from_polar(1.0, a);
        let SpacePoint::Finite(v) = tau_phi_space(phi, HalfSpacePoint::boundary(u).into()) else {
            panic!("binding point sent to infinity");
        };
        prop_assert!(vdist(v, [u.re, u.im, 0.0]) <= 1e-12);
    }

    #[test]
    fn tau_commutes_with_disk_automorphisms(g in disk_automorphism(), phi in 0.0..TAU, p in open_point()) {
        let lhs = g.extend_space(tau_phi_space(phi, p.into()));
        prop_assert!(space_rel(lhs, tau_phi_space(phi, g.extend_space(p.into()))) <= 1e-9);
    }

    #[test]
    fn disk_swaps_reverse_tau(g in disk_automorphism(), phi in 0.0..TAU, p in open_point()) {
        let g = MobiusTransform::reciprocal().compose(&g);
        let lhs = g.extend_space(tau_phi_space(phi, p.into()));
        prop_assert!(space_rel(lhs, tau_phi_space(-phi, g.extend_space(p.into()))) <= 1e-9);
    }

    #[test]
    fn page_round_trip(p in open_point()) {
        let c = page_decompose(p).unwrap();
        prop_assert!((0.0..=PI).contains(&c.phi) && c.z.norm() <= 1.0);
        prop_assert!(rel(page_point(c), p) <= 1e-9);
    }

    #[test]
    fn blaschke_preserves_the_disk(b in blaschke(5), a in 0.0..TAU, z in disk_point(0.99)) {
        let r = b.to_rational();
        let on = r.eval(SpherePoint::Finite(Complex64::from_polar(1.0, a))).finite().unwrap();
        prop_assert!((on.norm() - 1.0).abs() <= 1e-10);
        prop_assert!(r.eval(SpherePoint::Finite(z)).finite().unwrap().norm() < 1.0);
    }

    #[test]
    fn blaschke_symmetry(b in blaschke(4), z in complex()) {
        prop_assume!(z.norm() > 1e-3);
        let lhs = b.eval(SpherePoint::Finite(z).reflect_unit_circle());
        let rhs = b.eval(SpherePoint::Finite(z)).reflect_unit_circle();
        prop_assert!(chordal_distance(lhs, rhs) <= 1e-10);
    }

    #[test]
    fn critical_point_count(r in rational(2..=5)) {
        let total: usize = critical_points(&r).unwrap().iter().map(|c| c.multiplicity).sum();
        prop_assert_eq!(total, 2 * r.degree() - 2);
    }

    #[test]
    fn factorization_shape(r in rational(1..=4)) {
        let f = factor_rational(&r, None).unwrap();
        prop_assert_eq!(f.factors().len(), r.degree());
        for fac in f.factors() {
            prop_assert!(fac.map.apply(fac.zero) == SpherePoint::Finite(Complex64::new(0.0, 0.0)));
            prop_assert!(fac.map.apply(fac.pole).is_infinity());
        }
        prop_assert!(f.max_relative_error(&r, 50, 1) <= 1e-8);
    }

    #[test]
    fn star_product_laws(a in mixed_point(), b in mixed_point(), c in mixed_point()) {
        let ab = star_product(a, b).unwrap();
        prop_assert!((ab.norm() - a.norm() * b.norm()).abs() <= 1e-12 * a.norm() * b.norm());
        prop_assert!(rel(ab, star_product(b, a).unwrap()) <= 1e-10);
        let left = star_product(ab, c).unwrap();
        let right = star_product(a, star_product(b, c).unwrap()).unwrap();
        prop_assert!(rel(left, right) <= 1e-10);
    }

    #[test]
    fn boundary_star_is_scaling(l in complex(), p in open_point()) {
        prop_assume!(l.norm() > 1e-3);
        let h = MobiusTransform::scaling(l).unwrap();
        prop_assert!(rel(star_product(HalfSpacePoint::boundary(l), p).unwrap(), h.extend(p)) <= 1e-12);
    }

    // The reciprocal's extension is an inverse only on the boundary; inside
    // it gives the image of (0, 0, 2t) in exponential coordinates.
    #[test]
    fn reciprocal_star_product(p in open_point(), z in complex()) {
        let j = MobiusTransform::reciprocal();
        let t = exp_hat_inverse(p).unwrap().t();
        let expect = exp_hat(ExpCoords::new(0.0, 0.0, 2.0 * t).unwrap());
        prop_assert!(rel(star_product(p, j.extend(p)).unwrap(), expect) <= 1e-10);
        prop_assume!(z.norm() > 1e-3);
        let b = HalfSpacePoint::boundary(z);
        prop_assert!(rel(star_product(b, j.extend(b)).unwrap(), hp(1.0, 0.0, 0.0)) <= 1e-12);
    }

    #[test]
    fn q_hat_identities(p in open_point()) {
        let q = q_hat(p);
        prop_assert!(rel(q, star_product(p, p).unwrap()) <= 1e-10);
        let e = exp_hat_inverse(p).unwrap();
        prop_assert!(rel(q, exp_hat(ExpCoords::new(2.0 * e.x(), 2.0 * e.y(), 2.0 * e.t()).unwrap())) <= 1e-9);
        let reflect = |p: HalfSpacePoint| {
            let v = v3(p);
            let s = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
            hp(v[0] / s, v[1] / s, v[2] / s)
        };
        prop_assert!(rel(q_hat(reflect(p)), reflect(q)) <= 1e-10);
    }

    #[test]
    fn q_hat_foliations(r in 0.1..3.0f64, polar in 0.01..1.5f64, az in 0.0..TAU, r2 in 0.1..3.0f64, az2 in 0.0..TAU) {
        let at = |r: f64, az: f64| hp(r * polar.sin() * az.cos(), r * polar.sin() * az.sin(), r * polar.cos());
        let (p, p2) = (at(r, az), at(r2, az2));
        let (q, q2) = (q_hat(p), q_hat(p2));
        prop_assert!((q.norm() - r * r).abs() <= 1e-12 * r * r);
        let angle = |q: HalfSpacePoint| (v3(q)[2] / q.norm()).acos();
        prop_assert!((angle(q) - angle(q2)).abs() <= 1e-10);
        prop_assume!((r - 1.0).abs() > 0.05);
        // artanh(w/‖p‖)/ln‖p‖, read off the exponential coordinates.
        let onion = |p: HalfSpacePoint| {
            let e = exp_hat_inverse(p).unwrap();
            e.t() / e.x()
        };
        prop_assert!((onion(q) - onion(p)).abs() <= 1e-9 * onion(p).abs().max(1.0));
    }

    #[test]
    fn exp_deck_invariance(x in -2.0..2.0f64, y in -4.0..4.0f64, t in 0.0..3.0f64, k in -3i32..=3) {
        let a = exp_hat(ExpCoords::new(x, y, t).unwrap());
        let b = exp_hat(ExpCoords::new(x, y + TAU * k as f64, t).unwrap());
        prop_assert!(rel(a, b) <= 1e-12);
    }

    #[test]
    fn product_extension_sends_geodesics_to_axis(r in rational(2..=3), s in 0.02..0.98f64) {
        let f = factor_rational(&r, None).unwrap();
        for fac in f.factors() {
            if let HalfSpacePoint::Finite { z, .. } = product_extension(&f, fac.geodesic_point(s)).unwrap() {
                prop_assert!(z.norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn radial_keeps_norm(r in rational(2..=3), v in ball_point()) {
        prop_assert!((radial_extension(&r, v).norm() - v.norm()).abs() <= 1e-12);
    }

    #[test]
    fn open_book_keeps_pages(b in blaschke(3), p in open_point()) {
        let q = open_book_extension(&b, p);
        prop_assume!(!q.is_infinity());
        let (before, after) = (page_decompose(p).unwrap().phi, page_decompose(q).unwrap().phi);
        prop_assert!((before - after).abs() <= 1e-9);
    }

    #[test]
    fn methods_restrict_to_the_map(r in rational(2..=3), b in blaschke(3), c in complex(), z in complex()) {
        let params = ExtensionParams::default();
        let quad = RationalMap::polynomial(Polynomial::new(vec![c, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])).unwrap();
        let cases = [
            (ExtensionMethod::Product, MapInput::Rational(r.clone())),
            (ExtensionMethod::Radial, MapInput::Rational(r.clone())),
            (ExtensionMethod::Vertical, MapInput::Rational(r)),
            (ExtensionMethod::OpenBook, MapInput::Blaschke(b)),
            (ExtensionMethod::StarSquare, MapInput::Rational(quad)),
        ];
        for (method, map) in cases {
            let out = build_extension(method, &map, &params).unwrap().eval(HalfSpacePoint::boundary(z)).unwrap();
            let w = match out {
                HalfSpacePoint::Infinity => SpherePoint::Infinity,
                HalfSpacePoint::Finite { z, t } => {
                    prop_assert!(t <= 1e-9, "{method}: height {t}");
                    SpherePoint::Finite(z)
                }
            };
            prop_assert!(chordal_distance(w, map.eval(SpherePoint::Finite(z))) <= 1e-9, "{method}");
        }
    }

    #[test]
    fn real_parameter_keeps_the_plane(c in -2.0..0.5f64, x in -2.0..2.0f64, t in 0.0..2.0f64) {
        let mut p = hp(x, 0.0, t);
        for _ in 0..20 {
            p = q_hat_c(Complex64::new(c, 0.0), p);
            match p {
                HalfSpacePoint::Finite { z, .. } => prop_assert!(z.im == 0.0),
                HalfSpacePoint::Infinity => break,
            }
            if p.norm() > 1e100 {
                break;
            }
        }
    }

    #[test]
    fn escaping_norms_grow(c in complex(), x in -5.0..5.0f64, y in -5.0..5.0f64, t in 0.0..5.0f64) {
        let p = hp(x, y, t);
        let radius = c.norm().max(2.0);
        prop_assume!(p.norm() > radius);
        prop_assert!(q_hat_c(c, p).norm() > p.norm());
    }

    #[test]
    fn boundary_matches_classical(c in complex(), z in complex()) {
        let radius = c.norm().max(2.0);
        prop_assert_eq!(
            escape_count(c, HalfSpacePoint::boundary(z), 100, radius),
            classical_escape_count(c, z, 100, radius)
        );
    }

    #[test]
    fn mirror_planes_agree(c in -1.5..0.3f64, y0 in 0.0..1.0f64) {
        let mut spec = SliceSpec::new(Complex64::new(c, 0.0), [-2.0, 2.0, 0.0, 2.0], 16, 8, 50);
        spec.y0 = y0;
        let up = render_slice(&spec).unwrap();
        spec.y0 = -y0;
        prop_assert_eq!(up.counts, render_slice(&spec).unwrap().counts);
    }

    #[test]
    fn map_spec_prints_stably(c in complex(), num in prop::collection::vec(complex(), 2..4), theta in 0.0..TAU, zeros in prop::collection::vec(disk_point(0.9), 1..3)) {
        let fmt = |z: Complex64| if z.im < 0.0 { format!("{}{}i", z.re, z.im) } else { format!("{}+{}i", z.re, z.im) };
        let list = |v: &[Complex64]| v.iter().map(|&z| fmt(z)).collect::<Vec<_>>().join(",");
        for text in [
            format!("quad:c={}", fmt(c)),
            format!("rat:num={};den=1,{}", list(&num), fmt(c)),
            format!("bls:theta={theta};zeros={}", list(&zeros)),
        ] {
            let Ok(spec) = parse_map_spec(&text) else { continue };
            let once = spec.to_string();
            prop_assert_eq!(parse_map_spec(&once).unwrap(), spec);
            prop_assert_eq!(parse_map_spec(&once).unwrap().to_string(), once);
        }
    }
}
