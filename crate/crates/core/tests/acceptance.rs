//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lorentz_core::capacity::{capacity_estimate, sinkhorn_normalize, CapacityConfig};
use lorentz_core::hyperbolic::{direction_for_matrix, is_hyperbolic, nuij_approx, ConeSpec};
use lorentz_core::lorentzian::lorentzian_over_cone;
use lorentz_core::lps::{gnk, gnk_normalized, gnk_per_closed_form};
use lorentz_core::mixed_disc::{
    det_of_sum_expansion, md_via_coefficients, mixed_discriminant, rank_one_update_det,
    scaling_identity_check,
};
use lorentz_core::permanent::{
    diagonal_congruence_per, generating_polynomial, permanent_naive, permanent_ryser,
    permanent_via_derivatives,
};
use lorentz_core::spectra::{deflation_check, eigen_signature, rayleigh_check};
use lorentz_core::{Coeff, Mat, MultiPoly, SymMatrix};

fn rat(p: i64) -> BigRational {
    BigRational::from_int(p)
}

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn random_int_mat(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Mat<BigRational> {
    Mat::from_fn(n, n, |_, _| rat(rng.random_range(-bound..=bound)))
}

#[test]
fn c01_per_g42_four_way() {
    let start = Instant::now();
    let g = gnk(4, 2).unwrap();
    let eight = rat(8);
    let ryser = permanent_ryser(g.mat()).unwrap();
    let naive = permanent_naive(g.mat()).unwrap();
    let derivs = permanent_via_derivatives(g.mat()).unwrap();
    let closed = gnk_per_closed_form(4, 2).unwrap();
    let elapsed = start.elapsed();
    let pass = ryser == eight
        && naive == eight
        && derivs == eight
        && closed == eight
        && elapsed.as_secs_f64() < 1.0;
    report(
        "1",
        pass,
        &format!(
            "per(G(4,2)): ryser={ryser}, naive={naive}, derivatives={derivs}, closed={closed}, {:.3}s",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn c02_per_normalized_g42() {
    let norm = gnk_normalized(4, 2).unwrap();
    let expected = BigRational::from_ratio(1, 32);
    let ryser = permanent_ryser(norm.matrix.mat()).unwrap();
    let pass = norm.per == expected && ryser == expected;
    report(
        "2",
        pass,
        &format!("per(G~(4,2)) closed={}, ryser={}", norm.per, ryser),
    );
}

#[test]
fn c03_sign_table_and_cross_check() {
    let start = Instant::now();
    let signs_ok = gnk_per_closed_form(7, 3).unwrap().is_positive()
        && gnk_per_closed_form(9, 3).unwrap().is_negative()
        && gnk_per_closed_form(9, 4).unwrap().is_positive()
        && gnk_per_closed_form(19, 6).unwrap().is_negative()
        && gnk_per_closed_form(19, 7).unwrap().is_positive();
    let mut cross_ok = true;
    for n in 3..=12 {
        for k in 2..n {
            let closed = gnk_per_closed_form(n, k).unwrap();
            // Ryser on the integer-valued (k-1) G(n,k) sidesteps rational
            // reduction in the inner loop: per((k-1) G) = (k-1)^n per(G).
            let scaled = gnk(n, k).unwrap().mat().scale(&rat(k as i64 - 1));
            let mut factor = BigRational::one();
            for _ in 0..n {
                factor *= rat(k as i64 - 1);
            }
            if closed * factor != permanent_ryser(&scaled).unwrap() {
                cross_ok = false;
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = signs_ok && cross_ok && elapsed.as_secs_f64() < 10.0;
    report(
        "3",
        pass,
        &format!(
            "signs {}, closed-form = Ryser for n <= 12 {}, {:.3}s",
            signs_ok,
            cross_ok,
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn c04_quartic_hessian_is_k4() {
    let f = generating_polynomial(gnk(4, 2).unwrap().mat()).unwrap();
    let h = f.hessian_at(&vec![rat(1); 4]).unwrap();
    let mut entries_ok = true;
    for i in 0..4 {
        for j in 0..4 {
            let expect = if i == j { rat(0) } else { rat(16) };
            if h[(i, j)] != expect {
                entries_ok = false;
            }
        }
    }
    let sig = eigen_signature(&h, None).unwrap();
    let inertia_ok = (sig.n_pos, sig.n_zero, sig.n_neg) == (1, 0, 3);
    report(
        "4",
        entries_ok && inertia_ok,
        &format!(
            "Hessian = 16*(K4 adjacency) {}, inertia ({},{},{})",
            entries_ok, sig.n_pos, sig.n_zero, sig.n_neg
        ),
    );
}

#[test]
fn c05_rayleigh_constants() {
    let f = generating_polynomial(gnk(4, 2).unwrap().mat())
        .unwrap()
        .to_f64();
    let points = vec![vec![1.0; 4]];
    let at_15 = rayleigh_check(&f, 1.5, &points).unwrap();
    let at_2 = rayleigh_check(&f, 2.0, &points).unwrap();
    let pass = !at_15.is_empty() && at_2.is_empty();
    report(
        "5",
        pass,
        &format!(
            "violations at c=1.5: {}, at c=2: {}",
            at_15.len(),
            at_2.len()
        ),
    );
}

#[test]
fn c06_oracle_equivalences() {
    let mut rng = ChaCha8Rng::seed_from_u64(600);
    let mut all_ok = true;
    let mut detail = String::new();

    // Ryser vs naive, n <= 7.
    let mut ok = true;
    for _ in 0..100 {
        let n = rng.random_range(2..=7);
        let a = random_int_mat(&mut rng, n, 3);
        ok &= permanent_ryser(&a).unwrap() == permanent_naive(&a).unwrap();
    }
    detail.push_str(&format!("ryser=naive {ok}; "));
    all_ok &= ok;

    // Mixed discriminant vs coefficient extraction, 3x3 tuples.
    let mut ok = true;
    for _ in 0..100 {
        let parts = rng.random_range(1..=3);
        let mut left = 3 - parts;
        let tuple: Vec<(Mat<BigRational>, usize)> = (0..parts)
            .map(|i| {
                let extra = if i + 1 == parts {
                    left
                } else {
                    rng.random_range(0..=left)
                };
                left -= extra;
                (random_int_mat(&mut rng, 3, 3), 1 + extra)
            })
            .collect();
        ok &= mixed_discriminant(&tuple).unwrap() == md_via_coefficients(&tuple).unwrap();
    }
    detail.push_str(&format!("md=coeffs {ok}; "));
    all_ok &= ok;

    // Determinant-of-sum internal agreement, n <= 4.
    let mut ok = true;
    for _ in 0..100 {
        let n = rng.random_range(2..=4);
        let m = rng.random_range(1..=3);
        let mats: Vec<Mat<BigRational>> = (0..m).map(|_| random_int_mat(&mut rng, n, 3)).collect();
        ok &= det_of_sum_expansion(&mats).unwrap().agree;
    }
    detail.push_str(&format!("det-of-sum {ok}; "));
    all_ok &= ok;

    // Matrix determinant lemma, n <= 5.
    let mut ok = true;
    let mut done = 0;
    while done < 100 {
        let n = rng.random_range(2..=5);
        let a = random_int_mat(&mut rng, n, 3);
        if a.det().unwrap().is_zero() {
            continue;
        }
        let u: Vec<BigRational> = (0..n).map(|_| rat(rng.random_range(-3..=3))).collect();
        let v: Vec<BigRational> = (0..n).map(|_| rat(rng.random_range(-3..=3))).collect();
        ok &= rank_one_update_det(&a, &u, &v).unwrap().agree;
        done += 1;
    }
    detail.push_str(&format!("rank-one {ok}; "));
    all_ok &= ok;

    // Diagonal congruence of permanents, n <= 5.
    let mut ok = true;
    for _ in 0..100 {
        let n = rng.random_range(2..=5);
        let a = random_int_mat(&mut rng, n, 3);
        let d: Vec<BigRational> = (0..n)
            .map(|_| {
                let mut v = rng.random_range(-3i64..=3);
                if v == 0 {
                    v = 2;
                }
                rat(v)
            })
            .collect();
        ok &= diagonal_congruence_per(&a, &d).unwrap().agree;
    }
    detail.push_str(&format!("diag-congruence {ok}; "));
    all_ok &= ok;

    // Scaling identity, n <= 3.
    let mut ok = true;
    for _ in 0..100 {
        let n = rng.random_range(2..=3);
        let mats: Vec<Mat<BigRational>> = (0..n).map(|_| random_int_mat(&mut rng, n, 3)).collect();
        let alphas: Vec<BigRational> = (0..n).map(|_| rat(rng.random_range(-3..=3))).collect();
        let x = random_int_mat(&mut rng, n, 2);
        let y = random_int_mat(&mut rng, n, 2);
        ok &= scaling_identity_check(&x, &y, &mats, &alphas).unwrap();
    }
    detail.push_str(&format!("scaling {ok}"));
    all_ok &= ok;

    report("6", all_ok, &detail);
}

#[test]
fn c07_capacity_and_vdw() {
    // Cap_1 of the J_n generating polynomial is 1, attained at the all-ones
    // point.
    let mut cap_ok = true;
    let mut detail = String::new();
    for n in 2..=4 {
        let jn = Mat::from_fn(n, n, |_, _| 1.0 / n as f64);
        let f = generating_polynomial(&jn).unwrap();
        let r = capacity_estimate(
            &f,
            &vec![1.0; n],
            &ConeSpec::orthant(n),
            &CapacityConfig::default(),
        )
        .unwrap();
        let ok = r.feasible && r.value >= 1.0 - 1e-3 && r.value <= 1.0 + 1e-6;
        detail.push_str(&format!("Cap(J_{n})={:.9} {}; ", r.value, ok));
        cap_ok &= ok;
    }

    // per(J_n) = n!/n^n exactly.
    let mut exact_ok = true;
    for n in 2..=6usize {
        let jn = Mat::from_fn(n, n, |_, _| BigRational::from_ratio(1, n as i64));
        let per = permanent_ryser(&jn).unwrap();
        let mut expect = BigRational::one();
        for i in 1..=n {
            expect *= BigRational::from_ratio(i as i64, n as i64);
        }
        exact_ok &= per == expect;
    }
    detail.push_str(&format!("per(J_n)=n!/n^n {exact_ok}; "));

    // Van der Waerden bound on Sinkhorn-normalized random matrices.
    let mut rng = ChaCha8Rng::seed_from_u64(700);
    let mut vdw_ok = true;
    for _ in 0..50 {
        let n = rng.random_range(2..=6);
        let a = Mat::from_fn(n, n, |_, _| rng.random_range(0.05..1.0));
        let ds = sinkhorn_normalize(&a, 50_000, 1e-13).unwrap();
        let per = permanent_ryser(&ds).unwrap();
        let bound: f64 = (1..=n).map(|i| i as f64 / n as f64).product();
        if per < bound - 1e-9 {
            vdw_ok = false;
        }
    }
    detail.push_str(&format!("VdW bound {vdw_ok}"));
    report("7", cap_ok && exact_ok && vdw_ok, &detail);
}

#[test]
fn c08_deflation_property_suite() {
    use nalgebra::DMatrix;
    use rand_distr::StandardNormal;

    let mut rng = ChaCha8Rng::seed_from_u64(800);
    let n = 4;
    let mut random_q = |pos: usize, zero: usize| -> SymMatrix<f64> {
        let gauss = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let q = gauss.qr().q();
        let mut eigs = Vec::with_capacity(n);
        for _ in 0..pos {
            eigs.push(rng.random_range(0.5..2.0));
        }
        eigs.extend(std::iter::repeat_n(0.0, zero));
        for _ in pos + zero..n {
            eigs.push(-rng.random_range(0.1..2.0));
        }
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(eigs));
        let m = &q * d * q.transpose();
        SymMatrix::from_fn(n, |i, j| (m[(i, j)] + m[(j, i)]) / 2.0)
    };

    let mut lorentzian_ok = true;
    let mut rng_a = ChaCha8Rng::seed_from_u64(801);
    let mut positive_form_vector = |q: &SymMatrix<f64>| -> Vec<f64> {
        loop {
            let a: Vec<f64> = (0..n).map(|_| rng_a.sample(StandardNormal)).collect();
            let mut form = 0.0;
            for i in 0..n {
                for j in 0..n {
                    form += a[i] * q[(i, j)] * a[j];
                }
            }
            if form > 0.1 {
                return a;
            }
        }
    };
    for trial in 0..100 {
        let zero = usize::from(trial % 5 == 0);
        let q = random_q(1, zero);
        let a = positive_form_vector(&q);
        for t in [1.0, 2.0, 10.0] {
            lorentzian_ok &= deflation_check(&q, &a, t).unwrap();
        }
    }

    let mut indefinite_ok = true;
    for trial in 0..100 {
        let q = random_q(2 + trial % 2, 0);
        let a = positive_form_vector(&q);
        indefinite_ok &= !deflation_check(&q, &a, 1.0).unwrap();
    }
    report(
        "8",
        lorentzian_ok && indefinite_ok,
        &format!("Lorentzian-class all pass {lorentzian_ok}, indefinite all fail {indefinite_ok}"),
    );
}

#[test]
fn c09_nuij_closure() {
    // The Nuij operators act along a coordinate direction inside the cone,
    // so each case is first aligned by the change of variables sending e1 to
    // the cone direction; distances are pulled back to the original frame.
    let quadric = MultiPoly::from_terms(2, vec![(vec![2, 0], 1.0), (vec![0, 2], -1.0)]).unwrap();
    let quartic = generating_polynomial(gnk(4, 2).unwrap().mat())
        .unwrap()
        .to_f64();
    let cases: Vec<(&str, MultiPoly<f64>, Vec<f64>)> = vec![
        ("x1^2-x2^2", quadric, vec![1.0, 0.0]),
        ("quartic", quartic, vec![1.0; 4]),
    ];
    let mut pass = true;
    let mut detail = String::new();
    for (name, f, e) in &cases {
        let n = f.nvars();
        let align = Mat::from_fn(n, n, |i, j| {
            if j == 0 {
                e[i]
            } else if i == j {
                1.0
            } else {
                0.0
            }
        });
        let align_inv = Mat::from_fn(n, n, |i, j| {
            if j == 0 {
                if i == 0 {
                    1.0 / e[0]
                } else {
                    -e[i] / e[0]
                }
            } else if i == j {
                1.0
            } else {
                0.0
            }
        });
        let g = f.compose_linear(&align).unwrap();
        let e1 = {
            let mut v = vec![0.0; n];
            v[0] = 1.0;
            v
        };
        let scale = f.max_abs_coeff();
        let mut last = f64::INFINITY;
        let mut strict_all = true;
        let mut monotone = true;
        let mut final_dist = f64::NAN;
        for s in [1e-1, 1e-2, 1e-3] {
            let perturbed = nuij_approx(&g, 0, &s).unwrap();
            // The perturbed polynomial stays hyperbolic along e1; its own
            // cone is where strictness is asserted.
            let cone = ConeSpec::hyperbolicity(perturbed.clone(), e1.clone(), 128, 0).unwrap();
            let report = lorentzian_over_cone(&perturbed, &cone, 64, 0).unwrap();
            strict_all &= report.holds && report.strict;
            let pulled = perturbed.compose_linear(&align_inv).unwrap();
            let dist = pulled.sub(f).unwrap().max_abs_coeff() / scale;
            monotone &= dist < last;
            last = dist;
            final_dist = dist;
        }
        let ok = strict_all && monotone && final_dist < 1e-2;
        detail.push_str(&format!(
            "{name}: strict {strict_all}, monotone {monotone}, dist(1e-3)={final_dist:.5}; "
        ));
        pass &= ok;
    }
    report("9", pass, &detail);
}

#[test]
fn c10_hyperbolic_generating_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let mut pass = true;
    let mut tested = 0;
    while tested < 20 {
        let a_int = random_int_mat(&mut rng, 4, 4);
        if a_int.det().unwrap().is_zero() {
            continue;
        }
        let a = a_int.to_f64();
        let e = match direction_for_matrix(&a) {
            Ok(e) => e,
            Err(_) => continue,
        };
        let f = generating_polynomial(&a).unwrap();
        let hyper = is_hyperbolic(&f, &e, 256, 0).unwrap();
        let cone = ConeSpec::hyperbolicity_unchecked(f.clone(), e.clone());
        let report = lorentzian_over_cone(&f, &cone, 256, 0).unwrap();
        if !(hyper && report.holds) {
            pass = false;
        }
        tested += 1;
    }
    report(
        "10",
        pass,
        &format!("{tested} random nonsingular 4x4 matrices"),
    );
}
