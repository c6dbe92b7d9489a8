use barron_core::barron::{BarronFunctionSpec, DomainBox};
use barron_core::classifier::{indicator_eval, synthesize_classifier, BarronBoundarySet, HorizonPatch};
use barron_core::nn::{compose, sum_scaled, Layer, NetworkFile, NeuralNetwork};
use barron_core::par::{map_chunks, map_chunks_seq, CHUNK};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_net(seed: u64, input: usize, hidden: &[usize], output: usize) -> NeuralNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dims = vec![input];
    dims.extend_from_slice(hidden);
    dims.push(output);
    let layers = dims
        .windows(2)
        .map(|w| {
            let weights = (0..w[0] * w[1]).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let bias = (0..w[1]).map(|_| rng.gen_range(-1.0..1.0)).collect();
            Layer::new(w[1], w[0], weights, bias).unwrap()
        })
        .collect();
    NeuralNetwork::new(input, layers).unwrap()
}

fn close(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-9 * (1.0 + x.abs().max(y.abs())))
}

fn horizon(amplitude: f64) -> BarronBoundarySet {
    let rect = DomainBox::cube(2, -1.0, 1.0);
    let boundary = BarronFunctionSpec::cosine(rect.drop_axis(1), vec![2.0], amplitude);
    let patch = HorizonPatch { rectangle: rect, axis: 2, sign: 1, constant_b: 1.0, boundary_fn: boundary };
    BarronBoundarySet::new(2, vec![patch]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_evaluates_pointwise(seed in any::<u64>(), x in prop::collection::vec(-3.0..3.0f64, 3)) {
        let inner = random_net(seed, 3, &[4, 5], 2);
        let outer = random_net(seed ^ 1, 2, &[3], 1);
        let joined = compose(&inner, &outer).unwrap();
        let direct = outer.evaluate(&inner.evaluate(&x).unwrap()).unwrap();
        prop_assert!(close(&joined.evaluate(&x).unwrap(), &direct));
        prop_assert_eq!(joined.depth(), inner.depth() + outer.depth() - 1);
    }

    #[test]
    fn scaled_sum_evaluates_pointwise(
        seed in any::<u64>(),
        a in -3.0..3.0f64,
        b in -3.0..3.0f64,
        x in prop::collection::vec(-3.0..3.0f64, 2),
    ) {
        let f = random_net(seed, 2, &[3, 2], 2);
        let g = random_net(seed ^ 7, 2, &[5, 1], 2);
        let s = sum_scaled(&f, &g, a, b).unwrap();
        let (fx, gx) = (f.evaluate(&x).unwrap(), g.evaluate(&x).unwrap());
        let want: Vec<f64> = fx.iter().zip(&gx).map(|(u, v)| a * u + b * v).collect();
        prop_assert!(close(&s.evaluate(&x).unwrap(), &want));
    }

    #[test]
    fn json_round_trip_preserves_network(seed in any::<u64>()) {
        let net = random_net(seed, 2, &[3, 4], 1);
        let text = serde_json::to_string(&NetworkFile::from_network(&net, serde_json::Value::Null)).unwrap();
        let back = serde_json::from_str::<NetworkFile>(&text).unwrap().to_network().unwrap();
        prop_assert_eq!(back, net);
    }

    #[test]
    fn classifier_output_is_a_probability(
        amplitude in -0.4..0.4f64,
        n in 32usize..64,
        x in prop::collection::vec(-0.8..0.8f64, 2),
    ) {
        let omega = horizon(amplitude);
        let (net, _) = synthesize_classifier(&omega, n, 1, 3).unwrap();
        let y = net.evaluate(&x).unwrap()[0];
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&y), "output {y}");
        // away from the rectangle edges and the boundary the classifier is exact
        let gap = x[1] - amplitude * (2.0 * x[0]).cos();
        if gap.abs() > 0.8 {
            prop_assert_eq!(y.round(), f64::from(indicator_eval(&omega, &x)));
        }
    }

    #[test]
    fn chunked_maps_agree(n in 0usize..5 * CHUNK) {
        let f = |j: usize, r: std::ops::Range<usize>| (j, r.map(|i| (i as f64).sqrt()).sum::<f64>());
        prop_assert_eq!(map_chunks(n, f), map_chunks_seq(n, f));
    }
}
