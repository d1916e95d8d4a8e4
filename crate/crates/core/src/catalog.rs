//! Published MD-SC codes used as golden references.

use crate::code_model::{BaseGrid, CodeParams, DesignTriple, LiftingMatrix, PartitionMatrix, RelocationMatrix};

/// A published code: parameters, its design triple and the distribution it was designed from.
#[derive(Debug, Clone)]
pub struct PublishedCode {
    pub name: &'static str,
    pub params: CodeParams,
    pub triple: DesignTriple,
    /// `(m+1) × M` probability matrix, four decimals as printed.
    pub probability: Vec<Vec<f64>>,
}

fn grid(rows: &[&[u32]]) -> BaseGrid {
    BaseGrid::from_rows(rows).expect("catalog matrices are rectangular")
}

fn code(
    name: &'static str,
    params: CodeParams,
    k: &[&[u32]],
    lf: &[&[u32]],
    mr: &[&[u32]],
    probability: Vec<Vec<f64>>,
) -> PublishedCode {
    let triple = DesignTriple::new(
        PartitionMatrix::new(grid(k), params.m).unwrap(),
        LiftingMatrix::new(grid(lf), params.z).unwrap(),
        RelocationMatrix::new(grid(mr), params.aux).unwrap(),
    );
    triple.validate(&params).expect("catalog triple matches its parameters");
    PublishedCode { name, params, triple, probability }
}

fn spread(head: f64, tail: f64, n: usize) -> Vec<f64> {
    std::iter::once(head).chain(std::iter::repeat_n(tail, n - 1)).collect()
}

/// `(4, 17, 17, 10, 1, 3)`, designed for cycle-6 reduction.
pub fn md_code_1() -> PublishedCode {
    code(
        "MD Code 1",
        CodeParams::new(4, 17, 17, 10, 1, 3).unwrap(),
        &[
            &[0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 1],
            &[1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 0],
            &[0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1],
            &[1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        ],
        &[
            &[9, 4, 14, 3, 6, 4, 10, 5, 0, 3, 2, 3, 8, 4, 12, 13, 2],
            &[15, 1, 10, 7, 5, 6, 1, 14, 9, 4, 6, 1, 6, 3, 12, 1, 10],
            &[6, 4, 14, 12, 0, 3, 16, 1, 7, 8, 2, 12, 16, 3, 1, 6, 9],
            &[0, 12, 1, 0, 12, 9, 2, 3, 13, 1, 1, 6, 0, 16, 1, 10, 4],
        ],
        &[
            &[2, 0, 0, 0, 0, 1, 0, 1, 0, 1, 2, 0, 0, 2, 1, 2, 0],
            &[0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0],
            &[0, 0, 2, 0, 1, 2, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1],
            &[0, 0, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 2, 0, 0, 0, 1],
        ],
        vec![vec![0.3309, 0.0846, 0.0846], vec![0.3309, 0.0846, 0.0846]],
    )
}

/// `(3, 19, 23, 10, 2, 4)`, designed for cycle-8 reduction.
pub fn md_code_2() -> PublishedCode {
    code(
        "MD Code 2",
        CodeParams::new(3, 19, 23, 10, 2, 4).unwrap(),
        &[
            &[0, 1, 1, 0, 1, 2, 0, 2, 2, 0, 1, 1, 0, 1, 2, 0, 2, 2, 2],
            &[1, 0, 0, 1, 0, 0, 1, 0, 0, 2, 2, 2, 2, 2, 1, 2, 1, 1, 1],
            &[2, 2, 2, 2, 2, 1, 2, 1, 1, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0],
        ],
        &[
            &[7, 0, 0, 15, 0, 2, 8, 19, 0, 0, 12, 21, 0, 7, 0, 0, 0, 0, 0],
            &[2, 2, 21, 0, 22, 10, 2, 0, 10, 17, 2, 17, 1, 6, 8, 6, 0, 11, 18],
            &[1, 8, 3, 3, 20, 12, 13, 13, 1, 15, 3, 6, 18, 0, 14, 10, 13, 10, 18],
        ],
        &[
            &[0, 0, 0, 0, 3, 0, 1, 1, 0, 0, 0, 2, 1, 2, 3, 3, 0, 0, 0],
            &[0, 0, 2, 0, 0, 2, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
            &[0, 3, 0, 0, 0, 0, 0, 0, 1, 3, 0, 0, 0, 0, 1, 1, 3, 2, 0],
        ],
        vec![
            vec![0.2257, 0.0366, 0.0343, 0.0366],
            vec![0.2153, 0.0404, 0.0372, 0.0404],
            vec![0.2257, 0.0366, 0.0343, 0.0366],
        ],
    )
}

/// `(3, 20, 13, 20, 4, 7)`, designed for 8-8 concatenation reduction.
pub fn md_code_6() -> PublishedCode {
    code(
        "GD-GD MD Code 6",
        CodeParams::new(3, 20, 13, 20, 4, 7).unwrap(),
        &[
            &[4, 1, 0, 3, 0, 1, 0, 3, 0, 0, 3, 2, 4, 0, 4, 2, 0, 4, 3, 3],
            &[0, 0, 2, 4, 3, 0, 3, 0, 4, 0, 4, 4, 0, 4, 0, 4, 4, 1, 0, 0],
            &[4, 4, 4, 2, 4, 4, 4, 1, 0, 4, 1, 0, 0, 3, 4, 0, 4, 0, 0, 0],
        ],
        &[
            &[12, 6, 4, 12, 0, 1, 5, 12, 6, 0, 7, 0, 4, 9, 3, 11, 11, 2, 12, 7],
            &[6, 6, 6, 4, 2, 0, 9, 1, 3, 0, 1, 10, 6, 0, 2, 4, 6, 10, 10, 7],
            &[1, 8, 8, 11, 6, 1, 2, 2, 5, 7, 5, 10, 1, 0, 1, 3, 11, 11, 1, 8],
        ],
        &[
            &[0, 4, 0, 4, 0, 6, 2, 0, 4, 5, 2, 0, 6, 0, 0, 1, 0, 0, 0, 1],
            &[0, 0, 4, 0, 0, 1, 3, 0, 0, 0, 0, 0, 0, 1, 0, 0, 5, 5, 0, 0],
            &[0, 1, 0, 3, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 3, 0],
        ],
        vec![
            spread(0.2840, 0.0166, 7),
            spread(0.0290, 0.0091, 7),
            spread(0.0241, 0.0071, 7),
            spread(0.0725, 0.0101, 7),
            spread(0.2381, 0.0159, 7),
        ],
    )
}

/// `(4, 13, 5, 10, 3, 5)`, designed for concatenation reduction.
pub fn md_code_7() -> PublishedCode {
    code(
        "GD-GD MD Code 7",
        CodeParams::new(4, 13, 5, 10, 3, 5).unwrap(),
        &[
            &[0, 0, 3, 2, 1, 3, 2, 0, 3, 0, 3, 3, 0],
            &[3, 3, 0, 1, 3, 0, 1, 0, 3, 0, 2, 0, 3],
            &[3, 0, 1, 0, 3, 1, 0, 3, 0, 3, 0, 3, 2],
            &[0, 3, 2, 3, 0, 2, 3, 3, 0, 3, 0, 1, 0],
        ],
        &[
            &[1, 2, 2, 0, 4, 0, 2, 3, 3, 1, 4, 1, 1],
            &[1, 0, 0, 1, 2, 1, 2, 3, 0, 4, 1, 3, 2],
            &[2, 0, 0, 2, 1, 0, 1, 3, 1, 0, 0, 1, 2],
            &[2, 0, 0, 3, 4, 4, 3, 0, 0, 0, 3, 0, 0],
        ],
        &[
            &[1, 0, 0, 1, 2, 0, 0, 1, 1, 0, 4, 0, 0],
            &[2, 0, 0, 3, 0, 0, 2, 3, 0, 0, 0, 0, 0],
            &[0, 2, 0, 0, 1, 0, 3, 0, 0, 1, 0, 4, 0],
            &[0, 0, 1, 2, 0, 0, 0, 0, 0, 0, 0, 3, 0],
        ],
        vec![
            spread(0.2753, 0.0273, 5),
            spread(0.0535, 0.0155, 5),
            spread(0.0535, 0.0155, 5),
            spread(0.2753, 0.0273, 5),
        ],
    )
}

/// All catalog entries.
pub fn all() -> Vec<PublishedCode> {
    vec![md_code_1(), md_code_2(), md_code_6(), md_code_7()]
}

/// Looks a code up by short name (`md1`, `md2`, `md6`, `md7`).
pub fn by_name(name: &str) -> Option<PublishedCode> {
    match name.to_ascii_lowercase().as_str() {
        "md1" => Some(md_code_1()),
        "md2" => Some(md_code_2()),
        "md6" => Some(md_code_6()),
        "md7" => Some(md_code_7()),
        _ => None,
    }
}
