use mdsc::code_model::{
    BaseGrid, CodeParams, DesignTriple, LiftingMatrix, PartitionMatrix, QcProtograph, RelocationMatrix,
};
use mdsc::flcount::{
    brute_force_count, brute_force_count_cycles, count_cycles, count_objects_md, list_active_objects, list_objects,
    Elementarity, ObjectKind,
};
use proptest::prelude::*;

const CFG: [ObjectKind; 3] = [ObjectKind::Cfg66, ObjectKind::Cfg68, ObjectKind::Cfg88];

fn triple_strategy(gamma: usize, kappa: usize, m: usize, z: usize, aux: usize) -> impl Strategy<Value = DesignTriple> {
    let n = gamma * kappa;
    (
        prop::collection::vec(0..=m as u32, n),
        prop::collection::vec(0..z as u32, n),
        prop::collection::vec(0..aux as u32, n),
    )
        .prop_map(move |(k, l, r)| {
            DesignTriple::new(
                PartitionMatrix::new(BaseGrid::new(gamma, kappa, k).unwrap(), m).unwrap(),
                LiftingMatrix::new(BaseGrid::new(gamma, kappa, l).unwrap(), z).unwrap(),
                RelocationMatrix::new(BaseGrid::new(gamma, kappa, r).unwrap(), aux).unwrap(),
            )
        })
}

const SHAPES: [(usize, usize, usize, usize, usize, usize); 4] =
    [(3, 4, 3, 3, 1, 2), (3, 5, 2, 3, 1, 2), (3, 6, 2, 2, 0, 2), (4, 5, 2, 2, 1, 2)];

fn instance() -> impl Strategy<Value = (CodeParams, DesignTriple)> {
    (0..SHAPES.len()).prop_flat_map(|s| {
        let (g, k, z, l, m, a) = SHAPES[s];
        let p = CodeParams::new(g, k, z, l, m, a).unwrap();
        triple_strategy(g, k, m, z, a).prop_map(move |t| (p, t))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn structured_cycles_match_brute_force((p, t) in instance()) {
        let qc = QcProtograph::md(&t, &p).unwrap();
        let h = qc.lift();
        prop_assert!(h.rows() + h.cols() <= 500);
        let brute = brute_force_count_cycles(&h, &[4, 6, 8]).unwrap();
        for len in [4, 6, 8] {
            prop_assert_eq!(count_cycles(&qc, len).unwrap(), brute[&len], "length {}", len);
        }
    }

    #[test]
    fn structured_objects_match_brute_force((p, t) in instance()) {
        let qc = QcProtograph::md(&t, &p).unwrap();
        let h = qc.lift();
        for el in [Elementarity::Union, Elementarity::Induced] {
            let brute = brute_force_count(&h, &CFG, el).unwrap();
            let list = list_objects(&qc, &p, &CFG, el).unwrap().counts();
            for k in CFG {
                prop_assert_eq!(list.get(&k).copied().unwrap_or(0), brute[&k], "{} {:?}", k, el);
            }
        }
    }

    #[test]
    fn zero_relocation_multiplies_sc_counts(t in triple_strategy(3, 5, 2, 5, 3)) {
        let p = CodeParams::new(3, 5, 5, 4, 2, 3).unwrap();
        let kinds = [ObjectKind::Cycle6, ObjectKind::Cycle8, ObjectKind::Cfg66, ObjectKind::Cfg68];
        let list = list_active_objects(&t.partition, &t.lifting, &p, &kinds).unwrap();
        let sc = list.counts();
        let zero = RelocationMatrix::zeros(3, 5, 3);
        let md = count_objects_md(&list, &zero, 3).unwrap();
        for (k, v) in sc {
            prop_assert_eq!(md[&k], 3 * v);
        }
        // Relocation never creates survivors.
        let moved = count_objects_md(&list, &t.relocation, 3).unwrap();
        for (k, v) in &moved {
            prop_assert!(*v <= md[k]);
        }
    }
}

#[test]
fn other_circulant_sizes() {
    // Composite and tiny z exercise the canonical-shift logic.
    for z in [1usize, 2, 4, 6] {
        let p = CodeParams::permissive(3, 4, z, 2, 1, 2).unwrap();
        let t = DesignTriple::new(
            PartitionMatrix::new(BaseGrid::from_rows(&[[0, 1, 1, 0], [1, 0, 0, 1], [0, 0, 1, 1]]).unwrap(), 1).unwrap(),
            LiftingMatrix::new(BaseGrid::from_rows(&[[0, 1, 2, 3], [3, 2, 1, 0], [1, 3, 0, 2]]).unwrap().clone(), 4)
                .map(|l| {
                    let g: Vec<u32> = l.grid().as_slice().iter().map(|&v| v % z as u32).collect();
                    LiftingMatrix::new(BaseGrid::new(3, 4, g).unwrap(), z).unwrap()
                })
                .unwrap(),
            RelocationMatrix::new(BaseGrid::from_rows(&[[0, 1, 0, 1], [1, 0, 0, 0], [0, 0, 1, 1]]).unwrap(), 2)
                .unwrap(),
        );
        let qc = QcProtograph::md_unchecked(&t, &p).unwrap();
        let h = qc.lift();
        if h.rows() + h.cols() > 500 {
            continue;
        }
        let brute = brute_force_count_cycles(&h, &[4, 6, 8]).unwrap();
        for len in [4, 6, 8] {
            assert_eq!(count_cycles(&qc, len).unwrap(), brute[&len], "z {z} len {len}");
        }
        let b = brute_force_count(&h, &CFG, Elementarity::Union).unwrap();
        let l = list_objects(&qc, &p, &CFG, Elementarity::Union).unwrap().counts();
        for k in CFG {
            assert_eq!(l.get(&k).copied().unwrap_or(0), b[&k], "z {z} {k}");
        }
    }
}
