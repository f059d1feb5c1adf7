use num_complex::Complex64;
use proptest::prelude::*;

use ford_core::report::{from_json, to_json, EnumerationConfig, FamilySpec, GeneratorSpec, ScenarioConfig};

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e3f64..1e3, any::<f64>().prop_filter("finite", |x| x.is_finite())]
}

fn complex() -> impl Strategy<Value = Complex64> {
    (finite(), finite()).prop_map(|(re, im)| Complex64::new(re, im))
}

fn generator() -> impl Strategy<Value = GeneratorSpec> {
    prop_oneof![
        (1e-12f64..1.0).prop_map(GeneratorSpec::epsilon),
        (0.0f64..40.0, proptest::option::of(1e-3f64..=1.0)).prop_map(|(r, safety)| {
            GeneratorSpec::Family(FamilySpec { epsilon: None, target_r: Some(r), safety })
        }),
        (complex(), complex(), complex(), complex()).prop_map(|(a, b, c, d)| GeneratorSpec::explicit(a, b, c, d)),
    ]
}

fn config() -> impl Strategy<Value = ScenarioConfig> {
    (
        generator(),
        complex(),
        complex(),
        proptest::option::of(complex()),
        (1u32..10, proptest::option::of(0.0f64..100.0), 1usize..10_000, 1usize..100_000),
        1e-15f64..1e-3,
        proptest::option::of(1usize..1024),
    )
        .prop_map(|(generator, t_alpha, t_beta, base_corner, (len, pad, words, candidates), tolerance, oracle_grid)| {
            ScenarioConfig {
                generator,
                t_alpha,
                t_beta,
                base_corner,
                enumeration: EnumerationConfig {
                    max_word_len: len,
                    window_pad: pad,
                    max_words: words,
                    max_candidates: candidates,
                },
                tolerance,
                oracle_grid,
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn config_round_trips(cfg in config()) {
        let text = to_json(&cfg).unwrap();
        let back: ScenarioConfig = from_json(&text).unwrap();
        prop_assert_eq!(back, cfg);
        prop_assert_eq!(to_json(&back).unwrap(), text);
    }
}
