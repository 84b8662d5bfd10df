//! Brute-force verifiers that share no code path with the closed forms
//! they check.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::capacity::ellipsoid_capacity;
use crate::error::{Error, Result};
use crate::gaussian::{wigner_covariance, wigner_eval, GaussianState};
use crate::geometry::{blob_from_state, fermi_from_state, Ellipsoid};
use crate::matrix::{PositiveDefiniteMatrix, Vector};
use crate::random;
use crate::symplectic::{j_matrix, symplectic_eigenvalues};

/// `{"value", "reference", "rel_err"}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Agreement {
    pub value: f64,
    pub reference: f64,
    pub rel_err: f64,
}

impl Agreement {
    pub fn new(value: f64, reference: f64) -> Self {
        Self {
            value,
            reference,
            rel_err: (value - reference).abs() / reference.abs().max(1e-300),
        }
    }
}

/// Trapezoidal grid over the `y` variable of the Wigner integral.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QuadratureSpec {
    /// Defaults to 8 standard deviations of the integrand, `8 sqrt(2 hbar / ω_min)`.
    pub half_width: Option<f64>,
    /// Points per axis; defaults to 2048 for n = 1 and 256 for n = 2.
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub imag_residue: f64,
}

/// Normalized `ψ_{X,Y}^{z0}(x)` including the Heisenberg-Weyl phase
/// `exp(i(p0·x - p0·x0/2)/hbar)`.
fn wavefunction(state: &GaussianState, x: &[f64]) -> Complex64 {
    let n = state.n();
    let hbar = state.hbar();
    let (x0, p0) = (state.z0().rows(0, n), state.z0().rows(n, n));
    let xm = state.x().matrix();
    let ym = state.y().matrix();
    let mut quad = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let ui = x[i] - x0[i];
            let uj = x[j] - x0[j];
            quad += Complex64::new(xm[(i, j)], ym[(i, j)]) * ui * uj;
        }
    }
    let phase: f64 = (0..n)
        .map(|i| p0[i] * x[i] - 0.5 * p0[i] * x0[i])
        .sum::<f64>()
        / hbar;
    let norm = (xm.determinant() / (PI * hbar).powi(n as i32)).powf(0.25);
    norm * (-quad / (2.0 * hbar) + Complex64::new(0.0, phase)).exp()
}

/// `W(x, p) = (2π hbar)^{-n} ∫ exp(-i p·y/hbar) ψ(x + y/2) ψ*(x - y/2) dy` by the
/// trapezoidal rule, for `n <= 2`.
pub fn wigner_quadrature(
    state: &GaussianState,
    z: &Vector,
    spec: QuadratureSpec,
) -> Result<QuadratureResult> {
    let n = state.n();
    if n > 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    if z.len() != 2 * n {
        return Err(Error::DimensionMismatch {
            expected: 2 * n,
            found: z.len(),
        });
    }
    let hbar = state.hbar();
    let omega_min = state.x().eigen().values[0];
    let w = spec
        .half_width
        .unwrap_or_else(|| 8.0 * (2.0 * hbar / omega_min).sqrt());
    let pts = spec.points.unwrap_or(if n == 1 { 2048 } else { 256 });
    if pts < 2 || w.is_nan() || w <= 0.0 {
        return Err(Error::InvalidArgument("quadrature grid too small".into()));
    }
    let h = 2.0 * w / (pts - 1) as f64;
    let weight = |k: usize| if k == 0 || k == pts - 1 { 0.5 } else { 1.0 };
    let x: Vec<f64> = z.rows(0, n).iter().copied().collect();
    let p: Vec<f64> = z.rows(n, n).iter().copied().collect();

    let integrand = |y: &[f64]| -> Complex64 {
        let plus: Vec<f64> = (0..n).map(|i| x[i] + 0.5 * y[i]).collect();
        let minus: Vec<f64> = (0..n).map(|i| x[i] - 0.5 * y[i]).collect();
        let py: f64 = (0..n).map(|i| p[i] * y[i]).sum();
        Complex64::new(0.0, -py / hbar).exp()
            * wavefunction(state, &plus)
            * wavefunction(state, &minus).conj()
    };

    let mut sum = Complex64::new(0.0, 0.0);
    let node = |k: usize| -w + k as f64 * h;
    if n == 1 {
        for k in 0..pts {
            sum += integrand(&[node(k)]) * weight(k);
        }
        sum *= h;
    } else {
        for k in 0..pts {
            for l in 0..pts {
                sum += integrand(&[node(k), node(l)]) * (weight(k) * weight(l));
            }
        }
        sum *= h * h;
    }
    let total = sum / (2.0 * PI * hbar).powi(n as i32);
    Ok(QuadratureResult {
        value: total.re,
        imag_residue: total.im.abs(),
    })
}

/// Phase-space integral of the quadrature Wigner function over a box of
/// 8 covariance standard deviations around the center (n = 1 only).
pub fn wigner_mass(state: &GaussianState, grid_points: usize, spec: QuadratureSpec) -> Result<f64> {
    if state.n() != 1 {
        return Err(Error::UnsupportedDimension(state.n()));
    }
    if grid_points < 2 {
        return Err(Error::InvalidArgument("grid too small".into()));
    }
    let sigma = wigner_covariance(state)?.sigma;
    let wx = 8.0 * sigma.matrix()[(0, 0)].sqrt();
    let wp = 8.0 * sigma.matrix()[(1, 1)].sqrt();
    let (hx, hp) = (
        2.0 * wx / (grid_points - 1) as f64,
        2.0 * wp / (grid_points - 1) as f64,
    );
    let weight = |k: usize| {
        if k == 0 || k == grid_points - 1 {
            0.5
        } else {
            1.0
        }
    };
    let c = state.z0();
    let mut mass = 0.0;
    for i in 0..grid_points {
        for j in 0..grid_points {
            let z = Vector::from_vec(vec![c[0] - wx + i as f64 * hx, c[1] - wp + j as f64 * hp]);
            mass += weight(i) * weight(j) * wigner_quadrature(state, &z, spec)?.value;
        }
    }
    Ok(mass * hx * hp)
}

/// `{"violations", "count", "seed"}`; `inner` is how many samples fell in the inner set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub violations: usize,
    pub count: usize,
    pub inner: usize,
    pub seed: u64,
}

/// Axis-aligned sampling box.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingBox {
    pub lo: Vector,
    pub hi: Vector,
}

impl SamplingBox {
    /// Bounding box of an ellipsoid.
    pub fn around(e: &Ellipsoid) -> Self {
        let hw = e.bounding_half_widths();
        Self {
            lo: e.center() - &hw,
            hi: e.center() + hw,
        }
    }
}

/// Uniform samples in `region`, filtered to `inner`, checked against `outer`.
pub fn sample_inclusion(
    inner: impl Fn(&Vector) -> bool,
    outer: impl Fn(&Vector) -> bool,
    region: &SamplingBox,
    count: usize,
    seed: u64,
) -> Result<InclusionReport> {
    let mut rng = random::rng(seed);
    let dim = region.lo.len();
    let mut inside = 0;
    let mut violations = 0;
    for _ in 0..count {
        let z = Vector::from_iterator(
            dim,
            (0..dim).map(|i| rng.random_range(region.lo[i]..=region.hi[i])),
        );
        if inner(&z) {
            inside += 1;
            if !outer(&z) {
                violations += 1;
            }
        }
    }
    if inside == 0 {
        return Err(Error::EmptySample);
    }
    Ok(InclusionReport {
        violations,
        count,
        inner: inside,
        seed,
    })
}

/// Area enclosed by a 2-D ellipse, from the shoelace sum of `p dx` over a
/// polygon inscribed in its boundary.
pub fn boundary_area(e: &Ellipsoid, samples: usize) -> Result<f64> {
    if e.dim() != 2 {
        return Err(Error::UnsupportedDimension(e.dim() / 2));
    }
    if samples < 3 {
        return Err(Error::InvalidArgument(
            "need at least 3 boundary samples".into(),
        ));
    }
    let pts = ellipse_boundary(e, samples);
    let mut twice_area = 0.0;
    for k in 0..samples {
        let (a, b) = (pts[k], pts[(k + 1) % samples]);
        twice_area += a.0 * b.1 - b.0 * a.1;
    }
    Ok(0.5 * twice_area.abs())
}

/// `samples` points `c + sqrt(level) M^{-1/2} (cos θ, sin θ)` on a 2-D ellipse.
pub fn ellipse_boundary(e: &Ellipsoid, samples: usize) -> Vec<(f64, f64)> {
    let r = e.matrix().inv_sqrt().into_matrix() * e.level().sqrt();
    let c = e.center();
    (0..samples)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / samples as f64;
            let (s, co) = t.sin_cos();
            (
                c[0] + r[(0, 0)] * co + r[(0, 1)] * s,
                c[1] + r[(1, 0)] * co + r[(1, 1)] * s,
            )
        })
        .collect()
}

/// Symplectic eigenvalues read directly off the general eigenproblem of
/// `JM`, descending.
pub fn symplectic_eigen_oracle(m: &PositiveDefiniteMatrix) -> Result<Vec<f64>> {
    let dim = m.dim();
    if !dim.is_multiple_of(2) {
        return Err(Error::OddDimension(dim));
    }
    let jm = j_matrix(dim / 2) * m.matrix();
    let ev = jm.complex_eigenvalues();
    let mut mags: Vec<f64> = ev.iter().map(|c| c.im.abs()).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    // eigenvalues come in conjugate pairs ±iλ
    Ok(mags.into_iter().step_by(2).collect())
}

/// Agreement reports for one state, as emitted by the `oracle` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSuite {
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub wigner: Vec<Agreement>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wigner_mass: Option<Agreement>,
    pub inclusion: InclusionReport,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub boundary_area: Vec<Agreement>,
    pub symplectic_eigenvalues: Vec<Agreement>,
}

/// Runs every oracle that applies to `state`.
pub fn run_suite(state: &GaussianState, seed: u64) -> Result<OracleSuite> {
    let n = state.n();
    let mut rng = random::rng(seed);
    let mut wigner = Vec::new();
    let mut wigner_mass_report = None;
    if n <= 2 {
        let sigma = wigner_covariance(state)?.sigma;
        let points = if n == 1 { 5 } else { 2 };
        for _ in 0..points {
            let offset = Vector::from_iterator(
                2 * n,
                (0..2 * n).map(|i| rng.random_range(-1.0..=1.0) * sigma.matrix()[(i, i)].sqrt()),
            );
            let z = state.z0() + offset;
            let q = wigner_quadrature(state, &z, QuadratureSpec::default())?;
            wigner.push(Agreement::new(q.value, wigner_eval(state, &z)));
        }
        if n == 1 {
            let spec = QuadratureSpec {
                half_width: None,
                points: Some(256),
            };
            wigner_mass_report = Some(Agreement::new(wigner_mass(state, 81, spec)?, 1.0));
        }
    }

    let blob = blob_from_state(state)?;
    let fermi = fermi_from_state(state)?;
    let blob_e = blob.as_ellipsoid()?;
    let inclusion = sample_inclusion(
        |z| blob.contains(z),
        |z| fermi.contains(z),
        &SamplingBox::around(&blob_e),
        10_000,
        seed,
    )?;

    let mut boundary = Vec::new();
    if n == 1 {
        for e in [&fermi, &blob_e] {
            boundary.push(Agreement::new(
                boundary_area(e, 10_000)?,
                ellipsoid_capacity(e)?,
            ));
        }
    }

    let mut eig = Vec::new();
    for m in [blob_e.matrix(), fermi.matrix()] {
        let a = symplectic_eigen_oracle(m)?;
        let b = symplectic_eigenvalues(m)?;
        for (x, y) in a.into_iter().zip(b) {
            eig.push(Agreement::new(x, y));
        }
    }
    Ok(OracleSuite {
        wigner,
        wigner_mass: wigner_mass_report,
        inclusion,
        boundary_area: boundary,
        symplectic_eigenvalues: eig,
    })
}
