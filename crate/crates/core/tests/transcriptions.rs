//! Published matrix displays for the two structured families, transcribed
//! symbolically and compared entrywise with the computed transforms.

use num_complex::Complex64;
use witnesskit::numkit::ComplexMatrix;
use witnesskit::states::{example_34, example_35, partial_transpose_first, realignment};

struct Params {
    q: [f64; 4],
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

/// Builds `scale` times a matrix written with tokens `0`, `q1`..`q4`, `a`..`d`, and `a*` for a conjugate.
fn parse(rows: &str, scale: f64, p: &Params) -> ComplexMatrix {
    let rows: Vec<Vec<Complex64>> = rows
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|line| {
            line.split_whitespace()
                .map(|t| {
                    let (sym, conj) = t.strip_suffix('*').map_or((t, false), |s| (s, true));
                    let v = match sym {
                        "0" => Complex64::new(0.0, 0.0),
                        "q1" => p.q[0].into(),
                        "q2" => p.q[1].into(),
                        "q3" => p.q[2].into(),
                        "q4" => p.q[3].into(),
                        "a" => p.a,
                        "b" => p.b,
                        "c" => p.c,
                        "d" => p.d,
                        other => panic!("unknown token {other}"),
                    };
                    (if conj { v.conj() } else { v }) * scale
                })
                .collect()
        })
        .collect();
    ComplexMatrix::from_rows(&rows).unwrap()
}

const E34_PT: &str = "
q1 0  0  0  0  0  0  0  0
0  q3 a* q1 0  0  0  0  0
0  a  q2 0  0  0  q1 0  0
0  q1 0  q2 0  b* 0  0  0
0  0  0  0  q1 0  0  0  0
0  0  0  b  0  q3 0  q1 0
0  0  q1 0  0  0  q3 c* 0
0  0  0  0  0  q1 c  q2 0
0  0  0  0  0  0  0  0  q1
";

const E35_PT: &str = "
q1 0  0  0  0  0  0  q2 0  0  0  0  0  0  0  0
0  q4 a* 0  q1 0  0  0  0  0  0  q2 0  0  0  0
0  a  q3 0  0  0  0  0  q1 0  0  0  0  0  0  q2
0  0  0  q2 0  0  0  0  0  0  0  0  q1 0  0  0
0  q1 0  0  q2 0  0  0  0  0  0  0  0  0  0  0
0  0  0  0  0  q1 0  0  q2 0  0  0  0  0  0  0
0  0  0  0  0  0  q4 b* 0  q1 0  0  q2 0  0  0
q2 0  0  0  0  0  b  q3 0  0  0  0  0  q1 0  0
0  0  q1 0  0  q2 0  0  q3 0  0  c* 0  0  0  0
0  0  0  0  0  0  q1 0  0  q2 0  0  0  0  0  0
0  0  0  0  0  0  0  0  0  0  q1 0  0  q2 0  0
0  q2 0  0  0  0  0  0  c  0  0  q4 0  0  q1 0
0  0  0  q1 0  0  q2 0  0  0  0  0  q4 d* 0  0
0  0  0  0  0  0  0  q1 0  0  q2 0  d  q3 0  0
0  0  0  0  0  0  0  0  0  0  0  q1 0  0  q2 0
0  0  q2 0  0  0  0  0  0  0  0  0  0  0  0  q1
";

const E35_R: &str = "
q1 0  0  0  0  q4 a* 0  0  a  q3 0  0  0  0  q2
0  q1 0  0  0  0  0  0  0  0  0  0  q2 0  0  0
0  0  q1 0  0  0  0  0  0  0  0  0  0  q2 0  0
0  0  0  q1 0  0  0  0  0  0  0  0  0  0  q2 0
0  0  0  q2 q1 0  0  0  0  0  0  0  0  0  0  0
q2 0  0  0  0  q1 0  0  0  0  q4 b* 0  0  b  q3
0  q2 0  0  0  0  q1 0  0  0  0  0  0  0  0  0
0  0  q2 0  0  0  0  q1 0  0  0  0  0  0  0  0
0  0  0  0  0  0  0  q2 q1 0  0  0  0  0  0  0
0  0  0  0  q2 0  0  0  0  q1 0  0  0  0  0  0
q3 0  0  c* 0  q2 0  0  0  0  q1 0  c  0  0  q4
0  0  0  0  0  0  q2 0  0  0  0  q1 0  0  0  0
0  0  0  0  0  0  0  0  0  0  0  q2 q1 0  0  0
0  0  0  0  0  0  0  0  q2 0  0  0  0  q1 0  0
0  0  0  0  0  0  0  0  0  q2 0  0  0  0  q1 0
q4 d* 0  0  d  q3 0  0  0  0  q2 0  0  0  0  q1
";

fn e34_params() -> Params {
    Params {
        q: [0.2, 0.1, 0.7, 0.0],
        a: Complex64::new(0.05, 0.03),
        b: Complex64::new(-0.02, 0.06),
        c: Complex64::new(0.04, -0.05),
        d: Complex64::new(0.0, 0.0),
    }
}

fn e35_params() -> Params {
    Params {
        q: [0.05, 0.1, 0.425, 0.425],
        a: Complex64::new(0.025, 0.1),
        b: Complex64::new(-0.2, 0.05),
        c: Complex64::new(0.1, -0.15),
        d: Complex64::new(-0.05, -0.3),
    }
}

#[test]
fn family_3x3_partial_transpose_matches_display() {
    let p = e34_params();
    let rho = example_34(p.q[0], p.q[1], p.q[2], p.a, p.b, p.c).unwrap();
    let shown = parse(E34_PT, 1.0 / 3.0, &p);
    assert!(partial_transpose_first(&rho).max_abs_diff(&shown) < 1e-15);
}

#[test]
fn family_4x4_partial_transpose_matches_display() {
    let p = e35_params();
    let rho = example_35(p.q[0], p.q[1], p.q[2], p.q[3], p.a, p.b, p.c, p.d).unwrap();
    let shown = parse(E35_PT, 0.25, &p);
    assert!(partial_transpose_first(&rho).max_abs_diff(&shown) < 1e-15);
}

#[test]
fn family_4x4_realignment_matches_display_up_to_index_swap() {
    let p = e35_params();
    let rho = example_35(p.q[0], p.q[1], p.q[2], p.q[3], p.a, p.b, p.c, p.d).unwrap();
    let shown = parse(E35_R, 0.25, &p);
    let r = realignment(&rho);
    // swap the (i, k) pair labels on both sides of the transpose
    let s = |p: usize| (p % 4) * 4 + p / 4;
    let mut max = 0.0_f64;
    for row in 0..16 {
        for col in 0..16 {
            max = max.max((r[(s(col), s(row))] - shown[(row, col)]).norm());
        }
    }
    assert!(max < 1e-15, "max deviation {max}");
}
