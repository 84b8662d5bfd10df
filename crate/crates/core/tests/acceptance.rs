//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;

use qblob_core::capacity::{
    cmax_product, eh_capacities, ellipsoid_capacity, fermi_capacity, lambda_max,
};
use qblob_core::geometry::{
    blob_from_state, blob_inside_fermi, fermi_from_state, john_ellipsoid_of_pair, micro_from_state,
    oblique_projection_shapes, state_from_blob, state_from_fermi, state_from_micro, Ellipsoid,
    LagrangianFrame, MicrolocalPair,
};
use qblob_core::matrix::{
    rel_diff, HermitianMatrix, Matrix, PositiveDefiniteMatrix, SymmetricMatrix,
};
use qblob_core::oracle::{
    boundary_area, sample_inclusion, symplectic_eigen_oracle, wigner_mass, wigner_quadrature,
    QuadratureSpec, SamplingBox,
};
use qblob_core::symplectic::{pre_iwasawa, symplectic_eigenvalues, verify_symplectic};
use qblob_core::{
    quantum_condition, random, wigner_covariance, wigner_eval, GaussianState, Vector,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn diag_state(x: &[f64], hbar: f64) -> GaussianState {
    let n = x.len();
    GaussianState::new(
        hbar,
        PositiveDefiniteMatrix::diagonal(x).unwrap(),
        SymmetricMatrix::zeros(n),
        Vector::zeros(2 * n),
    )
    .unwrap()
}

fn wigner_closed_form() -> Outcome {
    let mut rng = random::rng(1);
    let mut worst = 0.0f64;
    let mut worst_mass = 0.0f64;
    for _ in 0..5 {
        let hbar = rng.random_range(0.5..2.0);
        let s = random::gaussian_state(&mut rng, 1, hbar);
        let sigma = wigner_covariance(&s).map_err(|e| e.to_string())?.sigma;
        for _ in 0..5 {
            let z = s.z0()
                + Vector::from_iterator(
                    2,
                    (0..2).map(|i| rng.random_range(-1.5..1.5) * sigma.matrix()[(i, i)].sqrt()),
                );
            let q =
                wigner_quadrature(&s, &z, QuadratureSpec::default()).map_err(|e| e.to_string())?;
            worst = worst.max(rel(q.value, wigner_eval(&s, &z)));
        }
        let spec = QuadratureSpec {
            half_width: None,
            points: Some(512),
        };
        let mass = wigner_mass(&s, 41, spec).map_err(|e| e.to_string())?;
        worst_mass = worst_mass.max((mass - 1.0).abs());
    }
    ensure(worst < 1e-6, || format!("max rel err {worst:.2e}"))?;
    ensure(worst_mass < 1e-4, || format!("mass err {worst_mass:.2e}"))?;
    Ok(format!(
        "max rel err {worst:.2e}, mass err {worst_mass:.2e}"
    ))
}

fn round_trips() -> Outcome {
    let mut rng = random::rng(2);
    let mut worst = [0.0f64; 3];
    for i in 0..100 {
        let n = 1 + i % 4;
        let hbar = rng.random_range(0.3..3.0);
        let s = random::gaussian_state(&mut rng, n, hbar);
        let f = state_from_fermi(&fermi_from_state(&s).unwrap(), s.hbar())
            .map_err(|e| e.to_string())?;
        let b = state_from_blob(&blob_from_state(&s).unwrap()).map_err(|e| e.to_string())?;
        let m = state_from_micro(&micro_from_state(&s).unwrap()).map_err(|e| e.to_string())?;
        for (w, back) in worst.iter_mut().zip([f, b, m]) {
            *w = w.max(back.distance(&s));
        }
    }
    ensure(worst.iter().all(|w| *w < 1e-9), || {
        format!("errors {worst:?}")
    })?;
    Ok(format!(
        "fermi {:.1e}, blob {:.1e}, micro {:.1e}",
        worst[0], worst[1], worst[2]
    ))
}

fn blob_in_fermi() -> Outcome {
    let mut rng = random::rng(3);
    let mut min_margin = f64::INFINITY;
    let mut violations = 0;
    let mut inner = 0;
    for i in 0..100 {
        let s = random::gaussian_state(&mut rng, 1 + i % 4, 1.0);
        min_margin = min_margin.min(blob_inside_fermi(&s).margin);
        let blob = blob_from_state(&s).unwrap();
        let fermi = fermi_from_state(&s).unwrap();
        let region = SamplingBox::around(&blob.as_ellipsoid().unwrap());
        let tinv = blob.carrier().inverse().into_matrix();
        let in_blob = |z: &Vector| (&tinv * (z - s.z0())).norm_squared() <= s.hbar();
        let r = sample_inclusion(in_blob, |z| fermi.contains(z), &region, 10_000, 42)
            .map_err(|e| e.to_string())?;
        violations += r.violations;
        inner += r.inner;
    }
    ensure(min_margin >= -1e-12, || format!("margin {min_margin:.2e}"))?;
    ensure(violations == 0, || format!("{violations} violations"))?;
    Ok(format!(
        "min margin {min_margin:.3}, 0 violations in {inner} inner samples"
    ))
}

fn fermi_capacity_bounds() -> Outcome {
    let mut rng = random::rng(4);
    for i in 0..100 {
        let n = 1 + i % 4;
        let hbar = rng.random_range(0.3..3.0);
        let s = random::gaussian_state(&mut rng, n, hbar);
        let c = fermi_capacity(&s).map_err(|e| e.to_string())?.value;
        let lo = PI * hbar;
        ensure(
            c >= lo * (1.0 - 1e-12) && c <= n as f64 * lo * (1.0 + 1e-12),
            || format!("c = {c} outside [πℏ, {n}πℏ]"),
        )?;
        if n == 1 {
            ensure(rel(c, lo) < 1e-10, || format!("n = 1: c/πℏ = {}", c / lo))?;
        }
        let omega = rng.random_range(0.3..3.0);
        let c = fermi_capacity(&diag_state(&vec![omega; n], hbar))
            .unwrap()
            .value;
        ensure(rel(c, n as f64 * lo) < 1e-10, || {
            format!("X = ωI: c/πℏ = {}", c / lo)
        })?;
    }
    Ok("100 states within [πℏ, nπℏ]; X = ωI and n = 1 exact".into())
}

fn blob_capacity() -> Outcome {
    let mut rng = random::rng(5);
    let (mut worst_c, mut worst_l) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let hbar = rng.random_range(0.3..3.0);
        let s = random::gaussian_state(&mut rng, 1 + i % 4, hbar);
        let w = wigner_covariance(&s).unwrap();
        // {½ Σ^{-1}(z - z0)·(z - z0) <= 1}
        let e =
            Ellipsoid::new(w.sigma.inverse().scaled(0.5).unwrap(), s.z0().clone(), 1.0).unwrap();
        let c = ellipsoid_capacity(&e).unwrap();
        worst_c = worst_c.max(rel(c, PI * s.hbar()));
        for l in symplectic_eigenvalues(&w.g).unwrap() {
            worst_l = worst_l.max((l - 1.0).abs());
        }
    }
    ensure(worst_c < 1e-9, || format!("capacity err {worst_c:.2e}"))?;
    ensure(worst_l < 1e-8, || format!("spectrum err {worst_l:.2e}"))?;
    Ok(format!(
        "capacity err {worst_c:.1e}, spectrum err {worst_l:.1e}"
    ))
}

fn eh_sequences() -> Outcome {
    let e = fermi_from_state(&diag_state(&[1.0, 2.0], 1.0)).unwrap();
    let seq = eh_capacities(&e, 4).unwrap();
    let expected = [1.5 * PI, 3.0 * PI, 3.0 * PI, 4.5 * PI];
    for (got, want) in seq.iter().zip(expected) {
        ensure((got.value - want).abs() < 1e-10, || {
            format!("ω = (1, 2): {} vs {want}", got.value)
        })?;
    }
    for n in 1..=4 {
        let r: f64 = 0.7 + 0.2 * n as f64;
        let seq = eh_capacities(&Ellipsoid::ball(2 * n, r).unwrap(), 12).unwrap();
        for (k, entry) in seq.iter().enumerate() {
            let want = ((k + n) / n) as f64 * PI * r * r;
            ensure(rel(entry.value, want) < 1e-12, || {
                format!("ball n = {n}, k = {}", k + 1)
            })?;
        }
    }
    let mut rng = random::rng(6);
    for i in 0..100 {
        let n = 1 + i % 4;
        let e = Ellipsoid::new(
            random::positive_definite(&mut rng, 2 * n, 0.3, 3.0),
            Vector::zeros(2 * n),
            rng.random_range(0.5..2.0),
        )
        .unwrap();
        let seq = eh_capacities(&e, 10).unwrap();
        ensure(seq.windows(2).all(|w| w[0].value <= w[1].value), || {
            "not nondecreasing".into()
        })?;
        ensure(seq[0].value == ellipsoid_capacity(&e).unwrap(), || {
            "c_1 != capacity".into()
        })?;
    }
    Ok("ω = (1, 2) and balls exact; 100 random sequences monotone with c_1 = c".into())
}

/// `(hbar/2) S diag(d, d) S^T`: symplectic spectrum `hbar d / 2`.
fn covariance_with_spectrum(
    rng: &mut random::TestRng,
    d: &[f64],
    hbar: f64,
) -> PositiveDefiniteMatrix {
    let n = d.len();
    let s = random::symplectic_word(rng, n, 4);
    let dd: Vec<f64> = d.iter().chain(d.iter()).map(|v| v * hbar / 2.0).collect();
    let core = Matrix::from_diagonal(&Vector::from_vec(dd));
    PositiveDefiniteMatrix::from_matrix(s.matrix() * core * s.matrix().transpose()).unwrap()
}

fn quantum_condition_theorem() -> Outcome {
    let mut rng = random::rng(7);
    let (mut agree, mut passing, mut rs_ok) = (0, 0, true);
    for i in 0..200 {
        let n = 1 + i % 4;
        let hbar = rng.random_range(0.5..2.0);
        let mut d: Vec<f64> = (0..n).map(|_| rng.random_range(1.01..3.0)).collect();
        if i % 2 == 1 {
            let k = rng.random_range(0..n);
            d[k] = rng.random_range(0.2..0.99);
        }
        let sigma = covariance_with_spectrum(&mut rng, &d, hbar);
        let r = quantum_condition(&sigma, hbar).map_err(|e| e.to_string())?;
        if r.psd_check == r.capacity_check {
            agree += 1;
        }
        if r.psd_check {
            passing += 1;
            rs_ok &= r.rs_checks.iter().all(|c| c.holds);
        }
        ensure(r.psd_check == (i % 2 == 0), || {
            format!("case {i}: psd_check = {}", r.psd_check)
        })?;
    }
    ensure(agree == 200, || format!("agreement {agree}/200"))?;
    ensure(rs_ok, || "a psd-passing Σ violates RS".into())?;
    Ok(format!("agreement 200/200, {passing} passing, RS implied"))
}

/// Largest `λ` with `A^{-1} - λ^2 Q ⪰ 0`, by bisection on the predicate.
fn lambda_by_bisection(a: &PositiveDefiniteMatrix, q: &PositiveDefiniteMatrix) -> f64 {
    let ainv = a.inverse().into_matrix();
    let contained = |l: f64| {
        let m = &ainv - q.matrix() * (l * l);
        let zero = Matrix::zeros(m.nrows(), m.ncols());
        qblob_core::matrix::is_psd(&HermitianMatrix::from_parts(&m, &zero).unwrap(), 0.0)
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    while contained(hi) {
        hi *= 2.0;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if contained(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn john_ellipsoid() -> Outcome {
    let mut rng = random::rng(8);
    let (mut worst_spec, mut worst_proj, mut worst_bisect) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..50 {
        let n = 1 + i % 4;
        let hbar = rng.random_range(0.5..2.0);
        let frame = LagrangianFrame::new(random::symplectic_word(&mut rng, n, 6));
        let a = random::positive_definite(&mut rng, n, 0.3, 3.0);
        let center = random::vector(&mut rng, 2 * n, 1.0);
        let pair = MicrolocalPair::new(frame.clone(), a.clone(), hbar, center).unwrap();
        let john = john_ellipsoid_of_pair(&pair).unwrap();
        let q = john.membership_matrix().unwrap();
        for l in symplectic_eigenvalues(&q).unwrap() {
            worst_spec = worst_spec.max((l - 1.0).abs());
        }
        let (px, pp) = oblique_projection_shapes(&john, &frame).unwrap();
        worst_proj = worst_proj
            .max(rel_diff(px.matrix(), a.matrix()))
            .max(rel_diff(pp.matrix(), a.inverse().matrix()));
        let c = cmax_product(&pair, None).unwrap();
        ensure(c == 4.0 * hbar, || format!("c_max = {c}"))?;

        // nested momentum body P = {Q p·p <= hbar} with λ_max in [1, 3]
        let q0 = random::positive_definite(&mut rng, n, 0.3, 3.0);
        let target: f64 = rng.random_range(1.0..3.0);
        let rho = lambda_max(&a, &q0).unwrap().powi(-2);
        let q = q0.scaled(1.0 / (rho * target * target)).unwrap();
        let lm = lambda_max(&a, &q).unwrap();
        let c = cmax_product(&pair, Some(&q)).map_err(|e| e.to_string())?;
        ensure(rel(c, 4.0 * lm * hbar) < 1e-12, || {
            format!("nested c_max = {c}")
        })?;
        worst_bisect = worst_bisect.max((lambda_by_bisection(&a, &q) - lm).abs());
    }
    ensure(worst_spec < 1e-8, || {
        format!("spectrum err {worst_spec:.2e}")
    })?;
    ensure(worst_proj < 1e-9, || {
        format!("projection err {worst_proj:.2e}")
    })?;
    ensure(worst_bisect < 1e-6, || {
        format!("bisection err {worst_bisect:.2e}")
    })?;
    Ok(format!(
        "spectrum err {worst_spec:.1e}, projection err {worst_proj:.1e}, bisection err {worst_bisect:.1e}"
    ))
}

fn pre_iwasawa_words() -> Outcome {
    let mut rng = random::rng(9);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let n = 1 + i % 4;
        let s = random::symplectic_word(&mut rng, n, 8);
        let f = pre_iwasawa(&s).map_err(|e| e.to_string())?;
        worst = worst.max(f.reconstruction_defect(&s));
        let r = f.r();
        let orth = rel_diff(&(r.transpose() * &r), &Matrix::identity(2 * n, 2 * n));
        ensure(orth < 1e-9, || format!("R not orthogonal ({orth:.2e})"))?;
        ensure(verify_symplectic(&r, 1e-9).unwrap().is_symplectic, || {
            "R not symplectic".into()
        })?;
        ensure(f.p.asymmetry_defect() < 1e-8, || "P not symmetric".into())?;
        ensure(f.l.eigen().values[0] > 0.0, || "L not PD".into())?;
    }
    ensure(worst < 1e-9, || format!("defect {worst:.2e}"))?;
    Ok(format!("max reconstruction defect {worst:.1e}"))
}

fn random_ellipsoid(rng: &mut random::TestRng, n: usize) -> Ellipsoid {
    Ellipsoid::new(
        random::positive_definite(rng, 2 * n, 0.3, 3.0),
        random::vector(rng, 2 * n, 1.0),
        rng.random_range(0.5..2.0),
    )
    .unwrap()
}

fn capacity_axioms() -> Outcome {
    let mut rng = random::rng(10);
    for i in 0..100 {
        let n = 1 + i % 4;
        let e = random_ellipsoid(&mut rng, n);
        let c = ellipsoid_capacity(&e).unwrap();

        let lambda: f64 = rng.random_range(0.2..4.0);
        let d = ellipsoid_capacity(&e.dilated(lambda).unwrap()).unwrap();
        ensure(rel(d, lambda * lambda * c) < 1e-10, || {
            "conformality".into()
        })?;

        let s = random::symplectic_word(&mut rng, n, 5);
        let t = ellipsoid_capacity(&e.transformed(&s).unwrap()).unwrap();
        ensure(rel(t, c) < 1e-8, || format!("invariance {t} vs {c}"))?;

        // larger set {(M - K) z·z <= level}, 0 ⪯ K ≺ M
        let r = e.matrix().sqrt();
        let k = random::positive_definite(&mut rng, 2 * n, 0.01, 0.9);
        let bigger = PositiveDefiniteMatrix::from_matrix(
            e.matrix().matrix() - r.matrix() * k.matrix() * r.matrix(),
        )
        .unwrap();
        let outer = Ellipsoid::new(bigger, e.center().clone(), e.level()).unwrap();
        ensure(
            c <= ellipsoid_capacity(&outer).unwrap() * (1.0 + 1e-12),
            || "monotonicity".into(),
        )?;
    }
    for n in 1..=4 {
        let r: f64 = 1.3;
        let c = ellipsoid_capacity(&Ellipsoid::ball(2 * n, r).unwrap()).unwrap();
        ensure(rel(c, PI * r * r) < 1e-12, || "ball normalization".into())?;
    }
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let e = random_ellipsoid(&mut rng, 1);
        let area = boundary_area(&e, 10_000).unwrap();
        worst = worst.max(rel(area, ellipsoid_capacity(&e).unwrap()));
    }
    ensure(worst < 1e-4, || format!("boundary area err {worst:.2e}"))?;
    Ok(format!("300 axiom checks; boundary area err {worst:.1e}"))
}

fn eigen_oracle() -> Outcome {
    let mut rng = random::rng(11);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let n = 1 + i % 4;
        let m = random::positive_definite(&mut rng, 2 * n, 0.1, 10.0);
        let a = symplectic_eigenvalues(&m).unwrap();
        let b = symplectic_eigen_oracle(&m).unwrap();
        for (x, y) in a.iter().zip(&b) {
            worst = worst.max(rel(*y, *x));
        }
    }
    ensure(worst < 1e-8, || format!("max rel diff {worst:.2e}"))?;
    Ok(format!("max rel diff {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("wigner closed form vs quadrature", wigner_closed_form),
        ("bijection round trips", round_trips),
        ("blob inside Fermi ellipsoid", blob_in_fermi),
        ("Fermi capacity bounds", fermi_capacity_bounds),
        ("blob capacity", blob_capacity),
        ("Ekeland-Hofer sequences", eh_sequences),
        ("quantum condition theorem", quantum_condition_theorem),
        ("John ellipsoid and c_max", john_ellipsoid),
        ("pre-Iwasawa factorization", pre_iwasawa_words),
        ("capacity axioms", capacity_axioms),
        ("symplectic eigenvalue oracle", eigen_oracle),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!(
        "{}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
