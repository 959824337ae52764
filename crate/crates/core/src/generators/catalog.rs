//! Named instances: the worked examples and counterexamples.

use crate::model::{Attribute, AttributeSchema, CandidateDatabase, Instance, TargetDistribution};
use crate::rational::{ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub note: &'static str,
    pub instance: Instance,
    /// Second target used by the population monotonicity counterexample.
    pub alternate_target: Option<TargetDistribution>,
}

pub const NAMES: [&str; 15] = [
    "intro",
    "differ-1",
    "differ-2",
    "differ-3",
    "differ-4",
    "quota-cx",
    "nonreversal-cx",
    "ilp-feasible",
    "ilp-infeasible",
    "ls1-lb",
    "ls2-lb",
    "fs-illustration",
    "popmono-cx",
    "alabama",
    "fs-grid",
];

fn build(
    attributes: &[(&str, &[&str])],
    rows: Vec<(String, Vec<&str>)>,
    target: Vec<Vec<Rational>>,
    k: usize,
) -> Instance {
    let schema = AttributeSchema::new(
        attributes
            .iter()
            .map(|(n, v)| Attribute::new(*n, v.iter().copied()))
            .collect(),
    )
    .expect("catalog schema");
    let db = CandidateDatabase::from_labels(schema.clone(), rows).expect("catalog database");
    let target = TargetDistribution::new(&schema, target).expect("catalog target");
    Instance::new(db, target, k).expect("catalog instance")
}

fn rows(spec: &[(&str, &[&'static str])]) -> Vec<(String, Vec<&'static str>)> {
    spec.iter().map(|(n, v)| (n.to_string(), v.to_vec())).collect()
}

/// Binary rows given as `0`/`1` strings, each type repeated `copies` times
/// and named `type#copy`.
fn binary_rows(types: &[(&str, &'static str)], copies: usize) -> Vec<(String, Vec<&'static str>)> {
    let mut out = Vec::new();
    for (name, bits) in types {
        let values: Vec<&'static str> = bits
            .as_bytes()
            .iter()
            .map(|b| if *b == b'1' { "1" } else { "0" })
            .collect();
        for copy in 1..=copies {
            let label = if copies == 1 {
                name.to_string()
            } else {
                format!("{name}#{copy}")
            };
            out.push((label, values.clone()));
        }
    }
    out
}

const BIN: &[&str] = &["0", "1"];
const TWO: &[&str] = &["1", "2"];

/// Ten candidates over sex, group, age and affiliation with `k = 4`.
pub fn intro() -> Instance {
    build(
        &[
            ("sex", &["F", "M"]),
            ("group", &["A", "B", "C"]),
            ("age", &["J", "S"]),
            ("affiliation", &["L", "E"]),
        ],
        rows(&[
            ("Ann", &["F", "A", "J", "L"]),
            ("Bob", &["M", "A", "J", "E"]),
            ("Charlie", &["M", "A", "S", "L"]),
            ("Donna", &["F", "B", "S", "E"]),
            ("Ernest", &["M", "A", "S", "L"]),
            ("George", &["M", "A", "S", "E"]),
            ("Helena", &["F", "B", "S", "E"]),
            ("John", &["M", "B", "J", "E"]),
            ("Kevin", &["M", "C", "J", "E"]),
            ("Laura", &["F", "C", "J", "L"]),
        ]),
        vec![
            vec![ratio(1, 2), ratio(1, 2)],
            vec![ratio(11, 20), ratio(1, 4), ratio(1, 5)],
            vec![ratio(3, 10), ratio(7, 10)],
            vec![ratio(3, 10), ratio(7, 10)],
        ],
        4,
    )
}

/// L1 and LMax disagree: the L1 optimum `{C, D}` is not LMax-optimal.
fn differ_binary() -> Instance {
    build(
        &[("X1", TWO), ("X2", TWO), ("X3", TWO)],
        rows(&[
            ("A", &["2", "1", "1"]),
            ("B", &["2", "1", "1"]),
            ("C", &["1", "2", "2"]),
            ("D", &["1", "2", "2"]),
        ]),
        vec![vec![ratio(0, 1), ratio(1, 1)]; 3],
        2,
    )
}

fn differ_3() -> Instance {
    build(
        &[("X1", &["1", "2", "3", "4"]), ("X2", TWO)],
        rows(&[
            ("A", &["1", "2"]),
            ("B", &["2", "2"]),
            ("C", &["3", "1"]),
            ("D", &["4", "1"]),
        ]),
        vec![
            vec![ratio(1, 2), ratio(1, 2), ratio(0, 1), ratio(0, 1)],
            vec![ratio(9, 10), ratio(1, 10)],
        ],
        2,
    )
}

fn differ_4() -> Instance {
    build(
        &[("X1", TWO), ("X2", TWO)],
        rows(&[("A", &["1", "1"]), ("B", &["1", "1"]), ("C", &["2", "2"])]),
        vec![vec![ratio(1, 1), ratio(0, 1)], vec![ratio(0, 1), ratio(1, 1)]],
        2,
    )
}

fn quota_cx() -> Instance {
    build(
        &[("X1", TWO), ("X2", TWO)],
        rows(&[("a", &["2", "2"]), ("b", &["1", "1"])]),
        vec![vec![ratio(0, 1), ratio(1, 1)], vec![ratio(1, 1), ratio(0, 1)]],
        1,
    )
}

fn nonreversal_cx() -> Instance {
    build(
        &[("X1", TWO), ("X2", TWO)],
        rows(&[
            ("a", &["1", "1"]),
            ("b", &["1", "1"]),
            ("c", &["1", "1"]),
            ("d", &["2", "2"]),
            ("e", &["2", "2"]),
            ("f", &["2", "2"]),
        ]),
        vec![vec![ratio(7, 20), ratio(13, 20)], vec![ratio(1, 1), ratio(0, 1)]],
        3,
    )
}

fn bucket_instance(multiplicities: [usize; 4]) -> Instance {
    let vectors: [[&'static str; 2]; 4] = [["0", "0"], ["1", "0"], ["0", "1"], ["1", "1"]];
    let mut out = Vec::new();
    for (v, &a) in vectors.iter().zip(&multiplicities) {
        for _ in 0..a {
            out.push((format!("c{}", out.len() + 1), v.to_vec()));
        }
    }
    build(
        &[("X1", BIN), ("X2", BIN)],
        out,
        vec![vec![ratio(1, 5), ratio(4, 5)], vec![ratio(3, 5), ratio(2, 5)]],
        5,
    )
}

fn ls1_lb() -> Instance {
    build(
        &[("X1", BIN), ("X2", BIN), ("X3", BIN)],
        binary_rows(&[("a1", "111"), ("a2", "001"), ("b1", "100"), ("b2", "010")], 1),
        vec![
            vec![ratio(1, 2), ratio(1, 2)],
            vec![ratio(1, 2), ratio(1, 2)],
            vec![ratio(1, 1), ratio(0, 1)],
        ],
        2,
    )
}

fn ls2_lb() -> Instance {
    let names = ["X1", "X2", "X3", "X4", "X5", "X6", "X7"];
    let attributes: Vec<(&str, &[&str])> = names.iter().map(|n| (*n, BIN)).collect();
    let mut target = vec![vec![ratio(1, 2), ratio(1, 2)]; 6];
    target.push(vec![ratio(1, 1), ratio(0, 1)]);
    build(
        &attributes,
        binary_rows(
            &[
                ("a", "1011001"),
                ("a'", "0100111"),
                ("b", "0000000"),
                ("b'", "0011110"),
                ("c", "1111000"),
                ("c'", "1100110"),
            ],
            2,
        ),
        target,
        4,
    )
}

fn fs_illustration() -> Instance {
    let mut out = Vec::new();
    for x1 in ["1", "2", "3"] {
        for x2 in ["1", "2"] {
            for copy in 1..=4 {
                out.push((format!("c{x1}{x2}#{copy}"), vec![x1, x2]));
            }
        }
    }
    build(
        &[("X1", &["1", "2", "3"]), ("X2", TWO)],
        out,
        vec![
            vec![ratio(1, 2), ratio(0, 1), ratio(1, 2)],
            vec![ratio(3, 4), ratio(1, 4)],
        ],
        4,
    )
}

/// Reduced population monotonicity counterexample.
///
/// Sixteen candidates `A1..A8`, `B1..B8` and `k = 8`. Attribute `X1` has
/// five values; for every pair `(i, j)` there are `lambda` binary
/// attributes on which exactly `A_i` and `B_j` have value `1`, with target
/// `(7/8, 1/8)`. The instance target on `X1` makes `{A1..A8}` the unique
/// optimum; the alternate target, which gives value `1` of `X1` a larger
/// share and keeps the other ratios, makes `{B1..B8}` the unique optimum.
pub fn popmono_counterexample(lambda: usize) -> (Instance, TargetDistribution) {
    let lambda = lambda.max(1);
    let a_x1 = [0, 0, 0, 0, 2, 2, 2, 2];
    let b_x1 = [0, 0, 1, 1, 2, 2, 3, 4];
    let mut attributes = vec![Attribute::new("X1", ["1", "2", "3", "4", "5"])];
    for i in 1..=8 {
        for j in 1..=8 {
            for l in 1..=lambda {
                let name = if lambda == 1 {
                    format!("G{i}.{j}")
                } else {
                    format!("G{i}.{j}.{l}")
                };
                attributes.push(Attribute::new(name, ["0", "1"]));
            }
        }
    }
    let schema = AttributeSchema::new(attributes).expect("catalog schema");
    let mut candidates = Vec::new();
    for (side, x1) in [("A", a_x1), ("B", b_x1)] {
        for (n, &v) in x1.iter().enumerate() {
            let mut values = vec![v];
            for i in 0..8 {
                for j in 0..8 {
                    let hit = if side == "A" { i == n } else { j == n };
                    values.extend(std::iter::repeat_n(usize::from(hit), lambda));
                }
            }
            candidates.push(crate::model::Candidate::new(format!("{side}{}", n + 1), values));
        }
    }
    let db = CandidateDatabase::new(schema.clone(), candidates).expect("catalog database");
    let group = vec![ratio(7, 8), ratio(1, 8)];
    let with_x1 = |x1: Vec<Rational>| {
        let mut shares = vec![x1];
        shares.extend(std::iter::repeat_n(group.clone(), 64 * lambda));
        TargetDistribution::new(&schema, shares).expect("catalog target")
    };
    let pi = with_x1(vec![ratio(0, 1), ratio(0, 1), ratio(7, 16), ratio(9, 16), ratio(0, 1)]);
    let rho = with_x1(vec![
        ratio(1, 4),
        ratio(0, 1),
        ratio(21, 64),
        ratio(27, 64),
        ratio(0, 1),
    ]);
    (Instance::new(db, pi, 8).expect("catalog instance"), rho)
}

/// Single attribute with votes `(1, 3, 3)`: Hamilton gives the first
/// party 1 seat out of 3 but 0 out of 4.
fn alabama() -> Instance {
    let mut out = Vec::new();
    for v in ["P1", "P2", "P3"] {
        for copy in 1..=4 {
            out.push((format!("{v}#{copy}"), vec![v]));
        }
    }
    build(
        &[("party", &["P1", "P2", "P3"])],
        out,
        vec![vec![ratio(1, 7), ratio(3, 7), ratio(3, 7)]],
        3,
    )
}

/// Two copies of every vector of a 2×3 domain with a non-natural target.
fn fs_grid() -> Instance {
    let mut out = Vec::new();
    for x1 in ["1", "2"] {
        for x2 in ["1", "2", "3"] {
            for copy in 1..=2 {
                out.push((format!("c{x1}{x2}#{copy}"), vec![x1, x2]));
            }
        }
    }
    build(
        &[("X1", TWO), ("X2", &["1", "2", "3"])],
        out,
        vec![
            vec![ratio(2, 3), ratio(1, 3)],
            vec![ratio(1, 2), ratio(3, 10), ratio(1, 5)],
        ],
        2,
    )
}

pub fn get(name: &str) -> Option<CatalogEntry> {
    let (name, note, instance, alternate_target) = match name {
        "intro" => ("intro", "ten researchers, four attributes, k = 4", intro(), None),
        "differ-1" => (
            "differ-1",
            "L1 optimum {C, D}; LMax optima are the mixed pairs",
            differ_binary(),
            None,
        ),
        "differ-2" => (
            "differ-2",
            "same instance as differ-1: L1Max and LMax disagree on binary domains",
            differ_binary(),
            None,
        ),
        "differ-3" => (
            "differ-3",
            "L1 optima: all pairs but {C, D}; L1Max optimum {C, D}",
            differ_3(),
            None,
        ),
        "differ-4" => (
            "differ-4",
            "every pair is L1-optimal; LMax optima {A, C} and {B, C}",
            differ_4(),
            None,
        ),
        "quota-cx" => ("quota-cx", "every optimal committee violates quota", quota_cx(), None),
        "nonreversal-cx" => (
            "nonreversal-cx",
            "every optimal committee reverses X1",
            nonreversal_cx(),
            None,
        ),
        "ilp-feasible" => (
            "ilp-feasible",
            "bucket example with solution b = (1, 2, 0, 2)",
            bucket_instance([4, 2, 2, 2]),
            None,
        ),
        "ilp-infeasible" => (
            "ilp-infeasible",
            "bucket example without a perfect committee",
            bucket_instance([5, 2, 2, 1]),
            None,
        ),
        "ls1-lb" => (
            "ls1-lb",
            "{a1, a2} is 1-swap optimal with loss 2; {b1, b2} is perfect",
            ls1_lb(),
            None,
        ),
        "ls2-lb" => (
            "ls2-lb",
            "two copies each of a, a' are 2-swap optimal with loss 2; {b, b', c, c'} is perfect",
            ls2_lb(),
            None,
        ),
        "fs-illustration" => (
            "fs-illustration",
            "full supply, Hamilton seats (2, 0, 2) and (3, 1)",
            fs_illustration(),
            None,
        ),
        "popmono-cx" => {
            let (instance, rho) = popmono_counterexample(1);
            (
                "popmono-cx",
                "population monotonicity fails between the alternate target and the instance target on X1 = 1",
                instance,
                Some(rho),
            )
        }
        "alabama" => (
            "alabama",
            "Hamilton loses a seat for P1 when k grows from 3 to 4",
            alabama(),
            None,
        ),
        "fs-grid" => (
            "fs-grid",
            "full supply for k = 2 with a non-natural target",
            fs_grid(),
            None,
        ),
        _ => return None,
    };
    Some(CatalogEntry {
        name,
        note,
        instance,
        alternate_target,
    })
}

/// Every catalog entry, in [`NAMES`] order.
pub fn paper_instances() -> Vec<CatalogEntry> {
    NAMES.iter().map(|n| get(n).expect("listed name")).collect()
}
