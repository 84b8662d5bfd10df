use std::f64::consts::PI;

use serde::Serialize;

use qblob_core::oracle::ellipse_boundary;
use qblob_core::{symplectic_eigenvalues, Ellipsoid, Error, Result};

/// One plotted 2-D curve. For n = 1 it is the ellipse itself in `(x, p)`;
/// for n >= 2 it is the circle `C_j` in Williamson normal coordinates
/// `(x_j, p_j)`, of area `π level / ω_j`.
#[derive(Debug, Serialize)]
pub struct Section {
    pub j: usize,
    pub omega: f64,
    pub area: f64,
    pub coordinates: &'static str,
    pub points: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize)]
pub struct Boundary {
    pub name: &'static str,
    pub sections: Vec<Section>,
}

pub fn sections(name: &'static str, e: &Ellipsoid, m: usize) -> Result<Boundary> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "--emit-boundary needs M >= 1".into(),
        ));
    }
    let spectrum = symplectic_eigenvalues(e.matrix())?;
    let sections = if e.dim() == 2 {
        vec![Section {
            j: 1,
            omega: spectrum[0],
            area: PI * e.level() / spectrum[0],
            coordinates: "x,p",
            points: ellipse_boundary(e, m)
                .into_iter()
                .map(|(x, p)| [x, p])
                .collect(),
        }]
    } else {
        spectrum
            .iter()
            .enumerate()
            .map(|(i, &omega)| {
                let r = (e.level() / omega).sqrt();
                Section {
                    j: i + 1,
                    omega,
                    area: PI * e.level() / omega,
                    coordinates: "williamson",
                    points: (0..m)
                        .map(|k| {
                            let (s, c) = (2.0 * PI * k as f64 / m as f64).sin_cos();
                            [r * c, r * s]
                        })
                        .collect(),
                }
            })
            .collect()
    };
    Ok(Boundary { name, sections })
}
