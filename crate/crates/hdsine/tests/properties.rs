//! Property-based invariants: dilation and orthogonal invariance of the
//! contents and sines, projection behavior, and permutation symmetry.

use hdsine::linalg::{content, orthonormal_frame, Vector, DEFAULT_TOL};
use hdsine::sines::{hypersine, polar_sine, PointConfig};
use proptest::prelude::*;

fn coords(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, n)
}

fn vectors(count: usize, n: usize) -> impl Strategy<Value = Vec<Vector>> {
    prop::collection::vec(coords(n), count)
        .prop_map(|vs| vs.into_iter().map(|c| Vector::new(c).unwrap()).collect())
}

/// Householder reflection `I − 2 q qᵀ` applied to `v`.
fn reflect(q: &Vector, v: &Vector) -> Vector {
    let c = 2.0 * q.dot(v);
    v - &q.scaled(c)
}

fn apply_orthogonal(mirrors: &[Vector], v: &Vector) -> Vector {
    mirrors.iter().fold(v.clone(), |acc, q| reflect(q, &acc))
}

proptest! {
    #[test]
    fn content_scales_by_coefficient_magnitudes(
        vs in vectors(3, 5),
        betas in prop::collection::vec(-3.0f64..3.0, 3),
    ) {
        prop_assume!(betas.iter().all(|b| b.abs() > 1e-3));
        let base = content(&vs).unwrap().value;
        let scaled: Vec<Vector> = vs.iter().zip(&betas).map(|(v, &b)| v.scaled(b)).collect();
        let got = content(&scaled).unwrap().value;
        let expected = base * betas.iter().map(|b| b.abs()).product::<f64>();
        prop_assert!((got - expected).abs() <= 1e-9 * expected.abs().max(1.0));
    }

    #[test]
    fn content_invariant_under_reflections(
        vs in vectors(3, 5),
        mirror_coords in prop::collection::vec(coords(5), 2),
    ) {
        let mirrors: Vec<Vector> = mirror_coords
            .into_iter()
            .filter_map(|c| Vector::new(c).unwrap().normalized())
            .collect();
        let base = content(&vs).unwrap().value;
        let mapped: Vec<Vector> = vs.iter().map(|v| apply_orthogonal(&mirrors, v)).collect();
        let got = content(&mapped).unwrap().value;
        prop_assert!((got - base).abs() <= 1e-9 * base.max(1.0));
    }

    #[test]
    fn projection_idempotent_and_contractive(
        vs in vectors(2, 4),
        u in coords(4),
    ) {
        let u = Vector::new(u).unwrap();
        let frame = orthonormal_frame(&vs, None, DEFAULT_TOL).unwrap();
        let p = frame.project(&u);
        let pp = frame.project(&p);
        prop_assert!((&pp - &p).norm() <= 1e-12 * p.norm().max(1.0));
        prop_assert!(p.norm() <= u.norm() * (1.0 + 1e-12));
    }

    #[test]
    fn sines_bounded_and_permutation_symmetric(
        vs in vectors(4, 6),
        swap in (0usize..4, 0usize..4),
    ) {
        let cfg = PointConfig::at_origin(vs.clone()).unwrap();
        let p = polar_sine(&cfg).value;
        let g = hypersine(&cfg).value;
        prop_assert!(p.abs() <= 1.0 && g.abs() <= 1.0);

        let mut permuted = vs;
        permuted.swap(swap.0, swap.1);
        let cfg_p = PointConfig::at_origin(permuted).unwrap();
        prop_assert!((polar_sine(&cfg_p).value.abs() - p.abs()).abs() <= 1e-10 * p.abs().max(1.0));
        prop_assert!((hypersine(&cfg_p).value.abs() - g.abs()).abs() <= 1e-10 * g.abs().max(1.0));
    }

    #[test]
    fn sines_invariant_under_orthogonal_maps_and_dilations(
        vs in vectors(3, 4),
        mirror in coords(4),
        betas in prop::collection::vec(-2.0f64..2.0, 3),
    ) {
        prop_assume!(betas.iter().all(|b| b.abs() > 1e-2));
        let cfg = PointConfig::at_origin(vs.clone()).unwrap();
        let p = polar_sine(&cfg).value.abs();
        let g = hypersine(&cfg).value.abs();

        let mirrors: Vec<Vector> = Vector::new(mirror)
            .unwrap()
            .normalized()
            .into_iter()
            .collect();
        let mapped: Vec<Vector> = vs
            .iter()
            .zip(&betas)
            .map(|(v, &b)| apply_orthogonal(&mirrors, &v.scaled(b)))
            .collect();
        let cfg_m = PointConfig::at_origin(mapped).unwrap();
        prop_assert!((polar_sine(&cfg_m).value.abs() - p).abs() <= 1e-9);
        prop_assert!((hypersine(&cfg_m).value.abs() - g).abs() <= 1e-9);
    }

    #[test]
    fn signed_sines_invariant_under_positive_dilations(
        vs in vectors(4, 4),
        betas in prop::collection::vec(0.05f64..4.0, 4),
    ) {
        // Ambient dimension d+1: values are signed and positive dilations
        // must preserve them exactly (up to rounding).
        let cfg = PointConfig::at_origin(vs.clone()).unwrap();
        let p = polar_sine(&cfg).value;
        let g = hypersine(&cfg).value;
        let scaled: Vec<Vector> = vs.iter().zip(&betas).map(|(v, &b)| v.scaled(b)).collect();
        let cfg_s = PointConfig::at_origin(scaled).unwrap();
        prop_assert!((polar_sine(&cfg_s).value - p).abs() <= 1e-9);
        prop_assert!((hypersine(&cfg_s).value - g).abs() <= 1e-9);
    }
}
