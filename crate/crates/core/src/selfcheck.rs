//! Reproducible numerical checks of the library's headline properties.
//!
//! Each check runs on seeded samples and returns a [`CheckResult`]; the same
//! functions back the `acceptance` test target and the CLI `selfcheck`
//! command.

use std::fmt;

use num_complex::Complex64;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::detection::{
    detect, distill_optimum_2x2, distill_search, entry_minimum, entry_minimum_brute_force, entry_search,
    entry_value_indices, indices_to_perms, perms_to_indices, ppt_check, pure_certificate, pure_check, DetectConfig,
    SearchMode, FIRE_TOL,
};
use crate::error::Result;
use crate::numkit::{hermitian_eigenvalues, random_ginibre, random_unitary, trace_norm, ComplexMatrix};
use crate::perm::Permutation;
use crate::states::{
    example_34, example_35, partial_transpose_first, random_pure_with_rank, random_separable, random_state,
    realignment, BasisOrdering, BipartiteDims, DensityMatrix, PureState,
};
use crate::witnesses::{
    conjugate_witness, phi_kappa, phi_kappa_conjugation, phi_kappa_ps, phi_rank4, rank4_witness, witness_kps,
    witness_value, Witness, WitnessSpec,
};

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} [{:>2}] {}: {}", self.id, self.title, self.detail)
    }
}

fn result(id: u8, title: &'static str, passed: bool, detail: String) -> CheckResult {
    CheckResult { id, title, passed, detail }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn dims(h: usize, k: usize) -> BipartiteDims {
    BipartiteDims::new(h, k).expect("positive dims")
}

/// Point on the probability simplex, uniform.
fn simplex<R: Rng>(k: usize, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = e.iter().sum();
    let mut q: Vec<f64> = e.iter().map(|x| x / s).collect();
    // exact unit sum so the builders' 1e-12 check never trips on rounding
    let head: f64 = q[..k - 1].iter().sum();
    q[k - 1] = 1.0 - head;
    q
}

/// Complex number with |z|² ≤ bound, uniform on the disc.
fn in_disc<R: Rng>(bound: f64, rng: &mut R) -> Complex64 {
    let r = (rng.random::<f64>() * bound).sqrt() * 0.999_999;
    Complex64::from_polar(r, rng.random::<f64>() * std::f64::consts::TAU)
}

pub fn example_34_reference() -> Result<DensityMatrix> {
    example_34(0.2, 0.1, 0.7, re(0.05), re(0.05), re(0.05))
}

pub fn example_35_reference() -> Result<DensityMatrix> {
    example_35(0.05, 0.1, 0.425, 0.425, re(0.025), re(0.025), re(0.025), re(0.025))
}

fn max_sorted_diff(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// 1. Closed-form entry values q₂−q₁ and q₃−q₁ on the 3x3 family.
pub fn check_example_34_entry_values(seed: u64) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    let draws = 100;
    for _ in 0..draws {
        let q = simplex(3, &mut rng);
        let bound = q[1] * q[2];
        let (a, b, c) = (in_disc(bound, &mut rng), in_disc(bound, &mut rng), in_disc(bound, &mut rng));
        let rho = example_34(q[0], q[1], q[2], a, b, c)?;
        let v1 = entry_value_indices(&rho, &[1, 5, 9], &[3, 4, 8])?;
        let v2 = entry_value_indices(&rho, &[1, 5, 9], &[2, 6, 7])?;
        worst = worst.max((v1 - (q[1] - q[0])).abs()).max((v2 - (q[2] - q[0])).abs());
    }
    Ok(result(
        1,
        "3x3 family entry values",
        worst <= 1e-12,
        format!("max |value - closed form| = {worst:.2e} over {draws} draws (tol 1e-12)"),
    ))
}

/// 2. Partial-transpose spectrum of the 3x3 family at the reference point.
pub fn check_example_34_spectrum() -> Result<CheckResult> {
    let rho = example_34_reference()?;
    let got = hermitian_eigenvalues(&partial_transpose_first(&rho))?.values;
    let r = 61f64.sqrt();
    let expected = vec![
        (8.0 + r) / 60.0,
        (8.0 - r) / 60.0,
        0.25,
        0.25,
        1.0 / 60.0,
        1.0 / 60.0,
        1.0 / 15.0,
        1.0 / 15.0,
        1.0 / 15.0,
    ];
    let diff = max_sorted_diff(got.clone(), expected);
    let min = got.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(result(
        2,
        "3x3 family PPT spectrum",
        diff <= 1e-10 && min > 0.0,
        format!("max eigenvalue error {diff:.2e} (tol 1e-10), min eigenvalue {min:.6}"),
    ))
}

pub const EXAMPLE_35_PT_SPECTRUM: [f64; 16] = [
    0.0054, 0.0054, 0.0069, 0.0069, 0.0223, 0.0223, 0.0235, 0.0235, 0.0821, 0.0821, 0.1027, 0.1027, 0.1212, 0.1212,
    0.1359, 0.1359,
];

/// 3. The 4x4 family at the reference point: spectrum, realignment norm, entry value, verdicts.
pub fn check_example_35() -> Result<CheckResult> {
    let rho = example_35_reference()?;
    let got = hermitian_eigenvalues(&partial_transpose_first(&rho))?.values;
    let spec_diff = max_sorted_diff(got, EXAMPLE_35_PT_SPECTRUM.to_vec());
    let ccnr = trace_norm(&realignment(&rho))?;
    let entry = entry_search(&rho, 4, SearchMode::Exact, 0)?;
    let entry_value = entry.as_ref().map(|c| c.value);
    let report = detect(&rho, &DetectConfig::default())?;
    let ok_spec = spec_diff <= 1e-4;
    let ok_ccnr = (ccnr - 0.8303).abs() <= 5e-4;
    let ok_entry = entry_value.is_some_and(|v| (v - (0.05 - 0.1)).abs() <= 1e-10);
    let ok_silent = report.ppt_min_eig >= -1e-9
        && !report.fired.iter().any(|f| f == "ppt" || f == "ccnr")
        && report.fired.iter().any(|f| f == "entry_criterion");
    Ok(result(
        3,
        "4x4 family reference point",
        ok_spec && ok_ccnr && ok_entry && ok_silent,
        format!(
            "spectrum err {spec_diff:.1e} (tol 1e-4); ||rho^R||_1 = {ccnr:.6} (0.8303 +- 5e-4); entry value {}; fired {:?}",
            entry_value.map_or("none".to_string(), |v| format!("{v:.12}")),
            report.fired
        ),
    ))
}

/// n (Φ ⊗ I) ρ₊ computed by applying Φ to each K-block of ρ₊.
fn choi_by_blocks<F>(map: F, n: usize, d: BipartiteDims) -> Result<ComplexMatrix>
where
    F: Fn(&ComplexMatrix) -> Result<ComplexMatrix>,
{
    let plus = crate::states::maximally_entangled(n, d)?;
    let (dh, dk) = (d.dim_h, d.dim_k);
    let m = plus.matrix();
    let mut out = ComplexMatrix::zeros(d.order(), d.order());
    for j in 0..dk {
        for l in 0..dk {
            let mut block = ComplexMatrix::zeros(dh, dh);
            for i in 0..dh {
                for k in 0..dh {
                    block[(i, k)] = m[(i * dk + j, k * dk + l)];
                }
            }
            let image = map(&block)?;
            for i in 0..dh {
                for k in 0..dh {
                    out[(i * dk + j, k * dk + l)] = image[(i, k)] * n as f64;
                }
            }
        }
    }
    Ok(out)
}

fn random_perm<R: Rng>(n: usize, rng: &mut R) -> Permutation {
    let all = Permutation::all_vec(n);
    all.choose(rng).expect("n >= 1").clone()
}

fn random_non_identity<R: Rng>(n: usize, rng: &mut R) -> Permutation {
    loop {
        let p = random_perm(n, rng);
        if !p.is_identity() {
            return p;
        }
    }
}

/// 4. W_κ^{π,σ} equals n(Φ_κ^{π,σ} ⊗ I)ρ₊.
pub fn check_choi_identity(seed: u64) -> Result<CheckResult> {
    let mut specs = Vec::new();
    let d3 = dims(3, 3);
    for kappa in Permutation::all(3).filter(|k| !k.is_identity()) {
        for pi in Permutation::all(3) {
            for sigma in Permutation::all(3) {
                specs.push(WitnessSpec::new(3, kappa.clone(), pi.clone(), sigma, d3)?);
            }
        }
    }
    let exhaustive = specs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d4 = dims(4, 4);
    for _ in 0..100 {
        specs.push(WitnessSpec::new(
            4,
            random_non_identity(4, &mut rng),
            random_perm(4, &mut rng),
            random_perm(4, &mut rng),
            d4,
        )?);
    }
    let mut worst = 0.0_f64;
    let mut worst_conj = 0.0_f64;
    for spec in &specs {
        let w = witness_kps(spec, BasisOrdering::HMajor)?;
        let choi = choi_by_blocks(|a| phi_kappa_ps(a, spec), spec.n, spec.dims)?;
        worst = worst.max(w.matrix().max_abs_diff(&choi));
        let conj = choi_by_blocks(|a| phi_kappa_conjugation(a, spec), spec.n, spec.dims)?;
        worst_conj = worst_conj.max(w.matrix().max_abs_diff(&conj));
    }
    Ok(result(
        4,
        "Choi identity",
        worst <= 1e-12 && worst_conj <= 1e-12,
        format!(
            "{exhaustive} exhaustive n=3 specs + 100 sampled n=4 specs; max entry diff {worst:.2e} (entrywise map), {worst_conj:.2e} (conjugation form), tol 1e-12"
        ),
    ))
}

fn sample_witnesses<R: Rng>(d: BipartiteDims, count: usize, rng: &mut R) -> Result<Vec<Witness>> {
    let mut out = vec![rank4_witness(d, BasisOrdering::HMajor)?];
    while out.len() < count {
        let k = out.len();
        let w = if k % 3 == 0 {
            let base = rank4_witness(d, BasisOrdering::KMajor)?;
            conjugate_witness(&base, &random_unitary(d.dim_h, rng), &random_unitary(d.dim_k, rng))?
        } else {
            let n = rng.random_range(2..=d.min_dim());
            let spec = WitnessSpec::new(n, random_non_identity(n, rng), random_perm(n, rng), random_perm(n, rng), d)?;
            let w = witness_kps(&spec, BasisOrdering::HMajor)?;
            if k % 3 == 1 {
                w
            } else {
                conjugate_witness(&w, &random_unitary(d.dim_h, rng), &random_unitary(d.dim_k, rng))?
            }
        };
        out.push(w);
    }
    Ok(out)
}

/// 5. Tr(Wρ) ≥ 0 on separable samples and every witness has a negative eigenvalue.
pub fn check_witness_soundness(seed: u64) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plan = [(dims(2, 2), 10usize, 5000usize), (dims(3, 3), 40, 5000)];
    let mut min_value = f64::INFINITY;
    let mut max_min_eig = f64::NEG_INFINITY;
    let (mut n_states, mut n_witnesses) = (0, 0);
    for (d, wc, sc) in plan {
        let ws = sample_witnesses(d, wc, &mut rng)?;
        for w in &ws {
            max_min_eig = max_min_eig.max(hermitian_eigenvalues(w.matrix())?.min());
        }
        n_witnesses += ws.len();
        for s in 0..sc {
            let terms = rng.random_range(1..=6);
            let rho =
                random_separable(d, terms, seed.wrapping_mul(1_000_003).wrapping_add(s as u64 + n_states as u64))?;
            for w in &ws {
                min_value = min_value.min(witness_value(w, &rho)?);
            }
        }
        n_states += sc;
    }
    Ok(result(
        5,
        "witness soundness",
        min_value >= -1e-9 && max_min_eig <= -1e-10,
        format!(
            "{n_states} separable states x {n_witnesses} witnesses: min Tr(W rho) = {min_value:.3e} (>= -1e-9); largest witness min eigenvalue {max_min_eig:.3e} (<= -1e-10)"
        ),
    ))
}

/// 6. Φ_κ and Φ_κ^{π,σ} map PSD to PSD.
pub fn check_map_positivity(seed: u64) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    let mut specs = 0;
    for (n, order) in [(2, 2), (2, 3), (3, 3), (3, 4), (4, 4), (4, 5), (5, 5)] {
        for _ in 0..2 {
            let spec = WitnessSpec::new(
                n,
                random_non_identity(n, &mut rng),
                random_perm(n, &mut rng),
                random_perm(n, &mut rng),
                dims(order, order),
            )?;
            specs += 1;
            for _ in 0..1000 {
                let rank = rng.random_range(1..=order);
                let g = random_ginibre(order, rank, &mut rng);
                let a = g.matmul(&g.adjoint());
                let a = a.scale_re(1.0 / a.trace().re);
                worst = worst.min(hermitian_eigenvalues(&phi_kappa(&a, n, &spec.kappa)?)?.min());
                worst = worst.min(hermitian_eigenvalues(&phi_kappa_ps(&a, &spec)?)?.min());
                if n == 2 {
                    worst = worst.min(hermitian_eigenvalues(&phi_rank4(&a)?)?.min());
                }
            }
        }
    }
    Ok(result(
        6,
        "map positivity",
        worst >= -1e-9,
        format!("{specs} specs x 1000 unit-trace PSD inputs: min output eigenvalue {worst:.3e} (>= -1e-9)"),
    ))
}

/// 7. Pure states: verdict equals Schmidt-rank truth and −2δ₁δ₂ is attained.
pub fn check_pure_states(seed: u64) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = dims(3, 4);
    let mut mismatches = 0;
    let mut worst = 0.0_f64;
    let total = 1000;
    for s in 0..total {
        let rank = rng.random_range(1..=3);
        let psi = random_pure_with_rank(d, rank, seed.wrapping_add(s))?;
        let (ent, value) = pure_check(&psi)?;
        if ent != (rank >= 2) {
            mismatches += 1;
        }
        let cert = pure_certificate(&psi)?;
        worst = worst.max((cert.value - value).abs());
    }
    let plus = PureState::maximally_entangled(2, dims(2, 2))?;
    let (ent, v) = pure_check(&plus)?;
    let plus_ok = ent && (v + 1.0).abs() <= 4.0 * f64::EPSILON;
    Ok(result(
        7,
        "pure-state universality",
        mismatches == 0 && worst <= 1e-9 && plus_ok,
        format!(
            "{mismatches}/{total} verdict mismatches; max |-2 d1 d2 - rotated value| = {worst:.2e} (tol 1e-9); psi+ value {v:.17}"
        ),
    ))
}

/// 8. Exact entry search equals full (π, σ) enumeration, including the tie-broken pair.
pub fn check_search_exactness(seed: u64) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = dims(3, 3);
    let mut value_diff = 0.0_f64;
    let mut pair_mismatch = 0;
    let total = 100;
    for s in 0..total {
        let rank = rng.random_range(1..=9);
        let rho = random_state(d, rank, seed.wrapping_add(s))?;
        for n in 2..=3 {
            let a = entry_minimum(&rho, n, SearchMode::Exact, 0)?;
            let b = entry_minimum_brute_force(&rho, n)?;
            value_diff = value_diff.max((a.value - b.value).abs());
            if (a.pi, a.sigma) != (b.pi, b.sigma) {
                pair_mismatch += 1;
            }
        }
    }
    Ok(result(
        8,
        "exact search vs enumeration",
        value_diff <= 1e-12 && pair_mismatch == 0,
        format!("{total} states at n=2,3: max value diff {value_diff:.2e}, {pair_mismatch} certificate mismatches"),
    ))
}

/// 9. Entry value equals the expectation of the witness built from its indices.
pub fn check_certificate_chain(seed: u64) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    let total = 1000;
    for s in 0..total {
        let n = if s % 2 == 0 { 3 } else { 4 };
        let d = dims(n, n);
        let rank = rng.random_range(1..=n * n);
        let mut rho = random_state(d, rank, seed.wrapping_add(s as u64))?;
        if rng.random_bool(0.5) {
            rho = rho.reorder(BasisOrdering::KMajor);
        }
        let pi1 = random_perm(n, &mut rng);
        let sigma1 = loop {
            let c = random_perm(n, &mut rng);
            if (1..=n).all(|i| c.apply(i) != pi1.apply(i)) {
                break c;
            }
        };
        let (k, h) = perms_to_indices(&pi1, &sigma1, d);
        let value = entry_value_indices(&rho, &k, &h)?;
        let (_, _, spec) = indices_to_perms(&k, &h, n)?;
        let ord = if rng.random_bool(0.5) { BasisOrdering::HMajor } else { BasisOrdering::KMajor };
        let w = witness_kps(&spec, ord)?;
        worst = worst.max((witness_value(&w, &rho)? - value).abs());
    }
    Ok(result(
        9,
        "certificate-witness chain",
        worst <= 1e-10,
        format!("{total} (state, index set) pairs at n=3,4: max |entry value - Tr(W rho)| = {worst:.2e} (tol 1e-10)"),
    ))
}

/// 10. Distillability search: never fires on separable states; power on NPT two-qubit states.
pub fn check_distillability(seed: u64) -> Result<CheckResult> {
    let restarts = 20;
    let mut false_alarms = 0;
    let mut separable = 0;
    for (d, count) in [(dims(2, 2), 100u64), (dims(3, 3), 100)] {
        for s in 0..count {
            let rho = random_separable(d, 1 + (s % 5) as usize, seed.wrapping_add(7919 * s + d.order() as u64))?;
            if distill_search(&rho, restarts, s)?.is_some() {
                false_alarms += 1;
            }
            separable += 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = dims(2, 2);
    let (mut found, mut exist, mut npt, mut sampled) = (0, 0, 0, 0u64);
    while npt < 100 {
        let rank = rng.random_range(1..=4);
        let rho = random_state(d, rank, seed.wrapping_mul(31).wrapping_add(sampled))?;
        sampled += 1;
        if ppt_check(&rho)? >= -1e-9 {
            continue;
        }
        npt += 1;
        if distill_optimum_2x2(&rho)?.0 < -FIRE_TOL {
            exist += 1;
        }
        if distill_search(&rho, restarts, sampled)?.is_some() {
            found += 1;
        }
    }
    Ok(result(
        10,
        "distillability soundness and power",
        false_alarms == 0 && found >= 95,
        format!(
            "{false_alarms}/{separable} separable false alarms; certificates found on {found}/{npt} NPT 2x2 states (target >= 95); \
             exact optimum shows a certificate exists for only {exist}/{npt} ({sampled} states sampled)"
        ),
    ))
}

/// All checks in order.
pub fn run_all(seed: u64) -> Result<Vec<CheckResult>> {
    Ok(vec![
        check_example_34_entry_values(seed)?,
        check_example_34_spectrum()?,
        check_example_35()?,
        check_choi_identity(seed)?,
        check_witness_soundness(seed)?,
        check_map_positivity(seed)?,
        check_pure_states(seed)?,
        check_search_exactness(seed)?,
        check_certificate_chain(seed)?,
        check_distillability(seed)?,
    ])
}
