mod common;

use common::random_p;
use mdsc::polyalg::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_array(rng: &mut ChaCha8Rng, dims: usize, max_side: usize) -> CoefficientArray {
    let shape: Vec<usize> = (0..dims).map(|_| rng.random_range(1..=max_side)).collect();
    let offsets: Vec<i64> = (0..dims).map(|_| rng.random_range(-3..=3)).collect();
    let n: usize = shape.iter().product();
    let values = (0..n).map(|_| if rng.random_bool(0.3) { 0.0 } else { rng.random_range(-1.0..1.0) }).collect();
    CoefficientArray::new(offsets, shape, values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn transform_path_matches_direct(seed in any::<u64>(), dims in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let side = [0, 40, 12, 6, 4][dims];
        let a = random_array(&mut rng, dims, side);
        let b = random_array(&mut rng, dims, side);
        let d = conv_direct(&a, &b).unwrap();
        let f = conv_fft(&a, &b).unwrap();
        prop_assert_eq!(d.offsets(), f.offsets());
        prop_assert_eq!(d.shape(), f.shape());
        prop_assert!(d.max_abs_diff(&f) < 1e-12);
    }

    #[test]
    fn conv_is_associative_and_commutative(seed in any::<u64>(), dims in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let side = [0, 30, 8, 5][dims];
        let (a, b, c) = (random_array(&mut rng, dims, side), random_array(&mut rng, dims, side), random_array(&mut rng, dims, side));
        let left = conv(&conv(&a, &b).unwrap(), &c).unwrap();
        let right = conv(&a, &conv(&b, &c).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
        prop_assert!(conv(&a, &b).unwrap().max_abs_diff(&conv(&b, &a).unwrap()) < 1e-12);
    }

    #[test]
    fn coupling_arrays_are_distributions(seed in any::<u64>(), rows in 1usize..5, cols in 1usize..6, i in 1i64..4, j in -3i64..4) {
        let p = random_p(&mut ChaCha8Rng::seed_from_u64(seed), rows, cols);
        let single = coupling_array(&p, PowerSpec::Single(if j == 0 { -i } else { j })).unwrap();
        let pair = coupling_array(&p, PowerSpec::Pair(i, j)).unwrap();
        for a in [&single, &pair] {
            prop_assert!(a.values().iter().all(|&v| v >= 0.0));
            prop_assert!((a.total() - 1.0).abs() < 1e-12);
        }
        let prod = conv_all(&[&single, &single, &coupling_array(&p, PowerSpec::Single(-i)).unwrap()]).unwrap();
        prop_assert!((prod.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn opposite_powers_give_mirror_symmetry(seed in any::<u64>(), rows in 1usize..5, cols in 1usize..6, i in 1i64..4, j in 1i64..4) {
        let p = random_p(&mut ChaCha8Rng::seed_from_u64(seed), rows, cols);
        let g = conv(&coupling_array(&p, PowerSpec::Single(i)).unwrap(), &coupling_array(&p, PowerSpec::Single(-i)).unwrap()).unwrap();
        prop_assert!(g.max_abs_diff(&g.mirror()) < 1e-14);
        let h = conv(&coupling_array(&p, PowerSpec::Pair(i, -j)).unwrap(), &coupling_array(&p, PowerSpec::Pair(-i, j)).unwrap()).unwrap();
        prop_assert!(h.max_abs_diff(&h.mirror()) < 1e-14);
    }
}

#[test]
fn large_transform_case() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = CoefficientArray::new(vec![0, -5], vec![60, 50], (0..3000).map(|_| rng.random_range(0.0..1.0)).collect())
        .unwrap();
    let b = CoefficientArray::new(vec![-2, 0], vec![40, 70], (0..2800).map(|_| rng.random_range(0.0..1.0)).collect())
        .unwrap();
    assert!(conv_direct(&a, &b).unwrap().max_abs_diff(&conv_fft(&a, &b).unwrap()) < 1e-9);
}
