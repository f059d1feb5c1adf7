use num_complex::Complex64;
use proptest::prelude::*;

use ford_core::moebius::{family_generator, sphere_image_check, MoebiusMap};

fn complex(bound: f64) -> impl Strategy<Value = Complex64> {
    (-bound..bound, -bound..bound).prop_map(|(re, im)| Complex64::new(re, im))
}

/// Maps with a usable determinant and an isometric sphere of radius at most
/// 100.
fn map() -> impl Strategy<Value = MoebiusMap> {
    (complex(3.0), complex(3.0), complex(3.0), complex(3.0))
        .prop_filter("nondegenerate with c away from 0", |(a, b, c, d)| {
            (a * d - b * c).norm() > 0.1 && c.norm() > 0.01
        })
        .prop_map(|(a, b, c, d)| MoebiusMap::new(a, b, c, d).unwrap())
}

fn det_error(m: &MoebiusMap) -> f64 {
    (m.det() - Complex64::new(1.0, 0.0)).norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn determinant_stays_one(m in map(), n in map(), k in map()) {
        prop_assert!(det_error(&m) <= 1e-12);
        prop_assert!(det_error(&m.inverse()) <= 1e-12);
        let product = m.compose(&n).compose(&k.inverse());
        prop_assert!(det_error(&product) <= 1e-12);
    }

    #[test]
    fn radius_is_invariant_under_translations(m in map(), s in complex(50.0), t in complex(50.0)) {
        let moved = MoebiusMap::translation(s).compose(&m).compose(&MoebiusMap::translation(t));
        let (r0, r1) = (m.isometric_sphere().unwrap().radius, moved.isometric_sphere().unwrap().radius);
        prop_assert!((r1 - r0).abs() <= 1e-12 * r0);
    }

    #[test]
    fn center_moves_against_right_translation(m in map(), t in complex(50.0)) {
        let moved = m.compose(&MoebiusMap::translation(t));
        let (c0, c1) = (m.isometric_sphere().unwrap().center, moved.isometric_sphere().unwrap().center);
        prop_assert!((c1 - (c0 - t)).norm() <= 1e-12);
    }

    #[test]
    fn map_carries_its_sphere_to_the_inverse_sphere(m in map()) {
        prop_assert!(m.isometric_sphere().unwrap().radius >= 1e-4);
        prop_assert!(sphere_image_check(&m, 64).unwrap() <= 1e-9);
    }

    #[test]
    fn family_powers_keep_unit_determinant(log_eps in -9.0f64..-0.5, p in 1u32..=4) {
        let gamma = family_generator(10f64.powf(log_eps)).unwrap();
        let mut power = gamma;
        for _ in 1..p {
            power = power.compose(&gamma);
        }
        prop_assert!(det_error(&power) <= 1e-12);
        if let Ok(s) = power.isometric_sphere() {
            if s.radius >= 1e-4 {
                prop_assert!(sphere_image_check(&power, 32).unwrap() <= 1e-9);
            }
        }
    }
}
