//! Symplectic capacities of ellipsoids, Ekeland-Hofer sequences, `c_max` of
//! microlocal pairs and the quantum covariance condition.
//!
//! All capacities coincide on ellipsoids: for `{M z·z <= level}` the value
//! is `π level / λ_max` with `λ_max` the largest symplectic eigenvalue of `M`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::geometry::{fermi_from_state, Ellipsoid, MicrolocalPair};
use crate::matrix::{self, HermitianMatrix, PositiveDefiniteMatrix};
use crate::symplectic::{j_matrix, symplectic_eigenvalues};
use crate::tol;

fn even_dim(e: &Ellipsoid) -> Result<()> {
    if !e.dim().is_multiple_of(2) {
        Err(Error::OddDimension(e.dim()))
    } else {
        Ok(())
    }
}

/// `π level / λ_max(M)`.
pub fn ellipsoid_capacity(e: &Ellipsoid) -> Result<f64> {
    even_dim(e)?;
    let lmax = symplectic_eigenvalues(e.matrix())?[0];
    Ok(PI * e.level() / lmax)
}

/// Capacity of a Fermi ellipsoid with the bounds `h/2 <= c <= n h/2`, `h = 2π hbar`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FermiCapacity {
    pub value: f64,
    pub over_pi_hbar: f64,
    pub omega_max: f64,
    pub trace_x: f64,
    pub lower_bound_holds: bool,
    pub upper_bound_holds: bool,
}

/// `π hbar Tr X / ω_max`, cross-checked against [`ellipsoid_capacity`] of the
/// Fermi ellipsoid.
pub fn fermi_capacity(state: &GaussianState) -> Result<FermiCapacity> {
    let hbar = state.hbar();
    let omega_max = *state.x().eigen().values.last().expect("n >= 1");
    let trace_x = state.x().trace();
    let value = PI * hbar * trace_x / omega_max;
    let via_ellipsoid = ellipsoid_capacity(&fermi_from_state(state)?)?;
    if (value - via_ellipsoid).abs() > 1e-9 * value {
        return Err(Error::Invariant(format!(
            "Fermi capacity {value} disagrees with ellipsoid capacity {via_ellipsoid}"
        )));
    }
    let unit = PI * hbar;
    let slack = 1e-12 * unit * state.n() as f64;
    Ok(FermiCapacity {
        value,
        over_pi_hbar: value / unit,
        omega_max,
        trace_x,
        lower_bound_holds: value >= unit - slack,
        upper_bound_holds: value <= state.n() as f64 * unit + slack,
    })
}

/// One Ekeland-Hofer value `N π level / λ_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EhEntry {
    pub value: f64,
    #[serde(rename = "N")]
    pub multiple: u32,
    /// 1-based index into the symplectic spectrum sorted descending.
    pub j: u32,
}

/// First `k` Ekeland-Hofer capacities of an ellipsoid.
///
/// The sequence is the multiset `{N π level / λ_j : N >= 1, 1 <= j <= n}`
/// sorted ascending with repetitions. Ties are ordered by `j`, then `N`.
pub fn eh_capacities(e: &Ellipsoid, k: usize) -> Result<Vec<EhEntry>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    even_dim(e)?;
    let spectrum = symplectic_eigenvalues(e.matrix())?;
    Ok(eh_from_spectrum(&spectrum, e.level(), k))
}

fn eh_from_spectrum(spectrum: &[f64], level: f64, k: usize) -> Vec<EhEntry> {
    // k-way merge of the arithmetic progressions N r_j
    let radii: Vec<f64> = spectrum.iter().map(|l| PI * level / l).collect();
    let mut next = vec![1u32; radii.len()];
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let (j, value) = radii
            .iter()
            .enumerate()
            .map(|(j, r)| (j, next[j] as f64 * r))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
            .expect("n >= 1");
        out.push(EhEntry {
            value,
            multiple: next[j],
            j: j as u32 + 1,
        });
        next[j] += 1;
    }
    out
}

/// Per-index Robertson-Schrödinger inequality
/// `Δx_j^2 Δp_j^2 >= Δ(x_j, p_j)^2 + hbar^2/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RsCheck {
    pub j: u32,
    pub var_x: f64,
    pub var_p: f64,
    pub cov_xp: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumConditionReport {
    pub hbar: f64,
    /// `Σ + (i hbar/2) J >= 0`.
    pub psd_check: bool,
    pub min_eigenvalue: f64,
    /// Capacity of `{(1/2) Σ^{-1} z·z <= 1}`.
    pub capacity: f64,
    pub capacity_over_pi_hbar: f64,
    /// `capacity >= π hbar`.
    pub capacity_check: bool,
    pub rs_checks: Vec<RsCheck>,
    /// The two equivalent forms of the condition agree.
    pub agree: bool,
    /// `psd_check` implies every Robertson-Schrödinger inequality.
    pub rs_implied: bool,
}

impl QuantumConditionReport {
    pub fn passes(&self) -> bool {
        self.psd_check && self.capacity_check && self.rs_checks.iter().all(|r| r.holds)
    }
}

pub fn quantum_condition(
    sigma: &PositiveDefiniteMatrix,
    hbar: f64,
) -> Result<QuantumConditionReport> {
    if !sigma.dim().is_multiple_of(2) {
        return Err(Error::OddDimension(sigma.dim()));
    }
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "hbar must be positive, got {hbar}"
        )));
    }
    let n = sigma.dim() / 2;
    let tol = tol::QUANTUM_CONDITION;

    let h = HermitianMatrix::from_parts(sigma.matrix(), &(j_matrix(n) * (hbar / 2.0)))?;
    let min_eigenvalue = h.eigenvalues()[0];
    let psd_check = matrix::is_psd(&h, tol);

    let omega = Ellipsoid::new(
        sigma.inverse().scaled(0.5)?,
        matrix::Vector::zeros(2 * n),
        1.0,
    )?;
    let capacity = ellipsoid_capacity(&omega)?;
    let unit = PI * hbar;
    let capacity_check = capacity >= unit * (1.0 - tol);

    let s = sigma.matrix();
    let rs_checks: Vec<RsCheck> = (0..n)
        .map(|j| {
            let var_x = s[(j, j)];
            let var_p = s[(n + j, n + j)];
            let cov_xp = s[(j, n + j)];
            let rhs = cov_xp * cov_xp + hbar * hbar / 4.0;
            RsCheck {
                j: j as u32 + 1,
                var_x,
                var_p,
                cov_xp,
                holds: var_x * var_p - rhs >= -tol * (var_x * var_p + rhs),
            }
        })
        .collect();
    let rs_implied = !psd_check || rs_checks.iter().all(|r| r.holds);
    Ok(QuantumConditionReport {
        hbar,
        psd_check,
        min_eigenvalue,
        capacity,
        capacity_over_pi_hbar: capacity / unit,
        capacity_check,
        rs_checks,
        agree: psd_check == capacity_check,
        rs_implied,
    })
}

/// `max {λ : λ X^hbar ⊆ P}` for `X^hbar = {A^{-1} p·p <= hbar}` and
/// `P = {Q p·p <= hbar}`: `ρ(A^{1/2} Q A^{1/2})^{-1/2}`.
pub fn lambda_max(a: &PositiveDefiniteMatrix, q: &PositiveDefiniteMatrix) -> Result<f64> {
    if a.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: q.dim(),
        });
    }
    let r = a.sqrt();
    let k = PositiveDefiniteMatrix::from_matrix(r.matrix() * q.matrix() * r.matrix())?;
    let rho = *k.eigen().values.last().expect("n >= 1");
    Ok(rho.powf(-0.5))
}

/// `c_max` of the pair: `4 hbar` for `X_ℓ × X_ℓ'^hbar`, and `4 λ_max hbar`
/// for `X × P` when a momentum body `P ⊇ X^hbar` is given.
pub fn cmax_product(
    pair: &MicrolocalPair,
    p_shape: Option<&PositiveDefiniteMatrix>,
) -> Result<f64> {
    let hbar = pair.hbar();
    match p_shape {
        None => Ok(4.0 * hbar),
        Some(q) => {
            let lm = lambda_max(pair.shape(), q)?;
            if lm < 1.0 - tol::NESTING {
                return Err(Error::PairNotNested { lambda_max: lm });
            }
            Ok(4.0 * lm * hbar)
        }
    }
}

/// Capacity summary of one ellipsoid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    pub capacity: f64,
    pub capacity_over_pi_hbar: f64,
    pub hbar: f64,
    pub level: f64,
    /// Descending.
    pub symplectic_spectrum: Vec<f64>,
    pub eh_sequence: Vec<EhEntry>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub flags: Option<QuantumConditionReport>,
}

impl CapacityReport {
    /// Report for `e` with the first `k` Ekeland-Hofer values.
    pub fn for_ellipsoid(e: &Ellipsoid, hbar: f64, k: usize) -> Result<Self> {
        even_dim(e)?;
        let spectrum = symplectic_eigenvalues(e.matrix())?;
        let capacity = PI * e.level() / spectrum[0];
        let eh_sequence = eh_from_spectrum(&spectrum, e.level(), k.max(1));
        let report = Self {
            capacity,
            capacity_over_pi_hbar: capacity / (PI * hbar),
            hbar,
            level: e.level(),
            symplectic_spectrum: spectrum,
            eh_sequence,
            flags: None,
        };
        report.check()?;
        Ok(report)
    }

    pub fn with_flags(mut self, flags: QuantumConditionReport) -> Self {
        self.flags = Some(flags);
        self
    }

    fn check(&self) -> Result<()> {
        let expected = PI * self.level / self.symplectic_spectrum[0];
        if (self.capacity - expected).abs() > 1e-12 * expected {
            return Err(Error::Invariant(
                "capacity inconsistent with spectrum".into(),
            ));
        }
        if self.eh_sequence.windows(2).any(|w| w[1].value < w[0].value) {
            return Err(Error::Invariant("EH sequence not nondecreasing".into()));
        }
        if self.eh_sequence[0].value != self.capacity {
            return Err(Error::Invariant("c_1^EH differs from the capacity".into()));
        }
        Ok(())
    }
}
