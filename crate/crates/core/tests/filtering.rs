mod common;

use common::{dense_gaussian, natural_image, rng, uniform_image};
use hybridbench_core::{compose_hybrid, high_pass, low_pass, CutoffFrequency, RasterImage};
use proptest::prelude::*;

fn sigma(s: f64) -> CutoffFrequency {
    CutoffFrequency::new(s).unwrap()
}

#[test]
fn separable_matches_dense_oracle() {
    let mut r = rng(11);
    for (w, h) in [(64, 64), (17, 40), (5, 3), (1, 9)] {
        let img = uniform_image(&mut r, w, h);
        for s in [1.0, 2.5, 4.0] {
            let err = low_pass(&img, sigma(s)).max_abs_diff(&dense_gaussian(&img, s));
            assert!(err <= 1e-6, "{w}x{h} sigma {s}: {err}");
        }
    }
}

#[test]
fn impulse_matches_dense_oracle() {
    let mut samples = vec![0.0; 15 * 15];
    samples[7 * 15 + 7] = 1.0;
    let img = RasterImage::new(15, 15, 1, samples).unwrap();
    let err = low_pass(&img, sigma(1.0)).max_abs_diff(&dense_gaussian(&img, 1.0));
    assert!(err <= 1e-6);
}

#[test]
fn checkerboard_under_flat_low_source_keeps_mean() {
    let low = RasterImage::filled(64, 64, 3, 0.5).unwrap();
    let high = RasterImage::from_fn(64, 64, 3, |_, x, y| ((x + y) % 2) as f64).unwrap();
    let out = compose_hybrid(&low, &high, sigma(4.0)).unwrap();
    // oracle: same composition through the dense convolution
    let oracle_hp = high
        .samples()
        .iter()
        .zip(dense_gaussian(&high, 4.0).samples())
        .map(|(a, b)| a - b)
        .collect::<Vec<_>>();
    let oracle_mean = oracle_hp.iter().map(|v| (0.5 + v).clamp(0.0, 1.0)).sum::<f64>() / oracle_hp.len() as f64;
    assert!((out.mean() - oracle_mean).abs() < 1e-9);
    assert!((out.mean() - 0.5).abs() <= 0.01, "mean {}", out.mean());
}

#[test]
fn mean_preservation_on_natural_images() {
    let mut r = rng(5);
    for _ in 0..5 {
        let img = natural_image(&mut r, 224, 224);
        for s in [1.0, 4.0, 7.0, 10.0, 13.0, 16.0, 19.0] {
            let lp = low_pass(&img, sigma(s));
            let hp = high_pass(&img, sigma(s));
            assert!((lp.mean() - img.mean()).abs() <= 0.005, "sigma {s}: {}", lp.mean() - img.mean());
            assert!(hp.mean().abs() <= 0.005, "sigma {s}: {}", hp.mean());
        }
    }
}

#[test]
fn variance_shrinks_along_sweep() {
    let mut r = rng(9);
    for _ in 0..3 {
        let img = natural_image(&mut r, 224, 224);
        for c in 0..3 {
            let vars: Vec<f64> = [1.0, 4.0, 7.0, 10.0, 13.0, 16.0, 19.0]
                .iter()
                .map(|&s| low_pass(&img, sigma(s)).channel_variance(c))
                .collect();
            assert!(vars.windows(2).all(|w| w[1] <= w[0]), "{vars:?}");
            assert!(vars[0] <= img.channel_variance(c));
        }
    }
}

fn small_image() -> impl Strategy<Value = RasterImage> {
    (1usize..24, 1usize..24).prop_flat_map(|(w, h)| {
        prop::collection::vec(0.0f64..1.0, w * h * 3)
            .prop_map(move |s| RasterImage::new(w, h, 3, s).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn low_pass_is_linear(
        (a, b) in (1usize..20, 1usize..20).prop_flat_map(|(w, h)| {
            let v = prop::collection::vec(0.0f64..1.0, w * h * 3);
            (v.clone(), v).prop_map(move |(x, y)| {
                (RasterImage::new(w, h, 3, x).unwrap(), RasterImage::new(w, h, 3, y).unwrap())
            })
        }),
        alpha in -2.0f64..2.0,
        beta in -2.0f64..2.0,
        s in 0.0f64..8.0,
    ) {
        let (w, h, c) = a.dimensions();
        let mix = RasterImage::new(
            w, h, c,
            a.samples().iter().zip(b.samples()).map(|(x, y)| alpha * x + beta * y).collect(),
        ).unwrap();
        let lhs = low_pass(&mix, sigma(s));
        let la = low_pass(&a, sigma(s));
        let lb = low_pass(&b, sigma(s));
        for ((l, x), y) in lhs.samples().iter().zip(la.samples()).zip(lb.samples()) {
            prop_assert!((l - (alpha * x + beta * y)).abs() <= 1e-5);
        }
    }

    #[test]
    fn bands_sum_to_original(img in small_image(), s in 0.0f64..32.0) {
        let lp = low_pass(&img, sigma(s));
        let hp = high_pass(&img, sigma(s));
        for ((l, h), o) in lp.samples().iter().zip(hp.samples()).zip(img.samples()) {
            prop_assert!((l + h - o).abs() <= 1e-6);
        }
    }

    #[test]
    fn self_hybrid_reconstructs(img in small_image(), s in 0.0f64..20.0) {
        let out = compose_hybrid(&img, &img, sigma(s)).unwrap();
        prop_assert!(out.max_abs_diff(&img) <= 1e-5);
    }
}
