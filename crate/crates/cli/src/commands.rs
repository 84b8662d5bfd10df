use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use qblob_core::capacity::{cmax_product, fermi_capacity};
use qblob_core::geometry::john_ellipsoid_of_pair;
use qblob_core::oracle::run_suite;
use qblob_core::schema::{BlobJson, EllipsoidJson, IwasawaJson, PairJson, StateJson};
use qblob_core::{
    blob_from_state, eh_capacities, fermi_from_state, micro_from_state, pre_iwasawa,
    quantum_condition, state_from_blob, state_from_fermi, state_from_micro, symplectic_eigenvalues,
    wigner_covariance, wigner_eval, CapacityReport, Ellipsoid, Error, GaussianState, Vector,
};

use crate::args::{Cli, Command, Repr};
use crate::boundary::{sections, Boundary};
use crate::input::{Failure, Input, Kind, Outcome};

pub enum Output {
    Json(Value),
    Csv(String),
}

fn to_value<T: Serialize>(t: &T) -> Outcome<Value> {
    serde_json::to_value(t).map_err(|e| Failure::core(Error::Invariant(e.to_string()), None))
}

fn at(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| Failure::core(e, Some(path.display().to_string()))
}

struct Ctx {
    hbar: Option<f64>,
    boundary: Option<usize>,
    plots: Vec<Boundary>,
}

impl Ctx {
    fn plot(&mut self, name: &'static str, e: &Ellipsoid) -> Outcome<()> {
        if let Some(m) = self.boundary {
            self.plots.push(sections(name, e, m)?);
        }
        Ok(())
    }

    /// Records hbar and any boundary sections on a JSON object.
    fn finish(self, mut v: Value, hbar: f64) -> Outcome<Output> {
        let obj = v.as_object_mut().expect("reports are objects");
        obj.entry("hbar").or_insert(json!(hbar));
        if self.boundary.is_some() {
            obj.insert("boundary".into(), to_value(&self.plots)?);
        }
        Ok(Output::Json(v))
    }
}

pub fn run(cli: &Cli) -> Outcome<Output> {
    if let Some(h) = cli.hbar {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Failure::input(
                "InvalidArgument",
                format!("--hbar must be positive, got {h}"),
                Some("--hbar".into()),
            ));
        }
    }
    let mut ctx = Ctx {
        hbar: cli.hbar,
        boundary: cli.emit_boundary,
        plots: Vec::new(),
    };
    match &cli.command {
        Command::Convert { from, to, input } => {
            convert(&mut ctx, *from, *to, input).and_then(|(v, h)| ctx.finish(v, h))
        }
        Command::Capacity { input } => {
            capacity(&mut ctx, input).and_then(|(v, h)| ctx.finish(v, h))
        }
        Command::Eh { k, input } => eh(&mut ctx, *k, input).and_then(|(v, h)| ctx.finish(v, h)),
        Command::Check { input } => {
            let inp = Input::read(input)?;
            let (sigma, h) = inp.covariance(ctx.hbar)?;
            let report = quantum_condition(&sigma, h).map_err(at(input))?;
            ctx.finish(to_value(&report)?, h)
        }
        Command::Wigner { grid, input } => wigner(&ctx, grid, input),
        Command::Iwasawa { input } => {
            let s = Input::read(input)?.symplectic()?;
            let f = pre_iwasawa(&s).map_err(at(input))?;
            ctx.finish(
                to_value(&IwasawaJson::from_factors(&f, &s))?,
                cli.hbar.unwrap_or(1.0),
            )
        }
        Command::Oracle { seed, input } => {
            let state = Input::read(input)?.state(ctx.hbar)?;
            let suite = run_suite(&state, *seed).map_err(at(input))?;
            let mut v = to_value(&suite)?;
            v["seed"] = json!(seed);
            ctx.finish(v, state.hbar())
        }
    }
}

fn read_state(ctx: &Ctx, from: Repr, path: &Path) -> Outcome<GaussianState> {
    let input = Input::read(path)?;
    Ok(match from {
        Repr::State => input.state(ctx.hbar)?,
        Repr::Fermi => {
            let (e, h) = input.ellipsoid(ctx.hbar)?;
            state_from_fermi(&e, h).map_err(at(path))?
        }
        Repr::Blob => state_from_blob(&input.blob(ctx.hbar)?).map_err(at(path))?,
        Repr::Micro => state_from_micro(&input.pair(ctx.hbar)?).map_err(at(path))?,
    })
}

fn convert(ctx: &mut Ctx, from: Repr, to: Repr, path: &Path) -> Outcome<(Value, f64)> {
    let state = read_state(ctx, from, path)?;
    let h = state.hbar();
    let v = match to {
        Repr::State => to_value(&StateJson::from_state(&state))?,
        Repr::Fermi => {
            let e = fermi_from_state(&state)?;
            ctx.plot("fermi", &e)?;
            to_value(&EllipsoidJson::from_ellipsoid(&e, Some(h)))?
        }
        Repr::Blob => {
            let b = blob_from_state(&state)?;
            ctx.plot("blob", &b.as_ellipsoid()?)?;
            to_value(&BlobJson::from_blob(&b))?
        }
        Repr::Micro => {
            let p = micro_from_state(&state)?;
            ctx.plot("john", &john_ellipsoid_of_pair(&p)?.as_ellipsoid()?)?;
            to_value(&PairJson::from_pair(&p))?
        }
    };
    Ok((v, h))
}

fn capacity(ctx: &mut Ctx, path: &Path) -> Outcome<(Value, f64)> {
    let input = Input::read(path)?;
    match input.kind()? {
        Kind::State => {
            let state = input.state(ctx.hbar)?;
            let (h, n) = (state.hbar(), state.n());
            let fermi = fermi_from_state(&state)?;
            let blob = blob_from_state(&state)?.as_ellipsoid()?;
            let flags = quantum_condition(&wigner_covariance(&state)?.sigma, h)?;
            ctx.plot("fermi", &fermi)?;
            ctx.plot("blob", &blob)?;
            let v = json!({
                "fermi": CapacityReport::for_ellipsoid(&fermi, h, n)?,
                "fermi_bounds": fermi_capacity(&state)?,
                "blob": CapacityReport::for_ellipsoid(&blob, h, n)?.with_flags(flags),
            });
            Ok((v, h))
        }
        Kind::Ellipsoid => {
            let (e, h) = input.ellipsoid(ctx.hbar)?;
            ctx.plot("ellipsoid", &e)?;
            let report =
                CapacityReport::for_ellipsoid(&e, h, (e.dim() / 2).max(1)).map_err(at(path))?;
            Ok((to_value(&report)?, h))
        }
        Kind::Blob => {
            let b = input.blob(ctx.hbar)?;
            let e = b.as_ellipsoid()?;
            ctx.plot("blob", &e)?;
            Ok((
                to_value(&CapacityReport::for_ellipsoid(&e, b.hbar(), b.n())?)?,
                b.hbar(),
            ))
        }
        Kind::Pair => {
            let p = input.pair(ctx.hbar)?;
            let e = john_ellipsoid_of_pair(&p)?.as_ellipsoid()?;
            ctx.plot("john", &e)?;
            let v = json!({
                "john": CapacityReport::for_ellipsoid(&e, p.hbar(), p.n())?,
                "c_max": cmax_product(&p, None)?,
            });
            Ok((v, p.hbar()))
        }
        Kind::Covariance | Kind::Symplectic => Err(Failure::input(
            "InvalidArgument",
            "capacity expects a state, ellipsoid, blob or pair",
            Some(path.display().to_string()),
        )),
    }
}

fn eh(ctx: &mut Ctx, k: usize, path: &Path) -> Outcome<(Value, f64)> {
    let input = Input::read(path)?;
    let (e, h) = match input.kind()? {
        Kind::State => {
            let s = input.state(ctx.hbar)?;
            (fermi_from_state(&s)?, s.hbar())
        }
        Kind::Ellipsoid => input.ellipsoid(ctx.hbar)?,
        Kind::Blob => {
            let b = input.blob(ctx.hbar)?;
            (b.as_ellipsoid()?, b.hbar())
        }
        _ => {
            return Err(Failure::input(
                "InvalidArgument",
                "eh expects a state, ellipsoid or blob",
                Some(path.display().to_string()),
            ))
        }
    };
    let seq = eh_capacities(&e, k).map_err(at(path))?;
    // c_j read section by section, for comparison with the sorted sequence
    let areas: Vec<f64> = symplectic_eigenvalues(e.matrix())?
        .iter()
        .map(|l| PI * e.level() / l)
        .collect();
    ctx.plot("ellipsoid", &e)?;
    Ok((
        json!({ "k": k, "eh_sequence": seq, "section_areas": areas }),
        h,
    ))
}

fn parse_grid(grid: &str) -> Outcome<(f64, usize)> {
    let bad = || {
        Failure::input(
            "InvalidArgument",
            format!("--grid expects W:N with W > 0 and N >= 2, got {grid:?}"),
            Some("--grid".into()),
        )
    };
    let (w, n) = grid.split_once(':').ok_or_else(bad)?;
    let w: f64 = w.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if !(w > 0.0 && w.is_finite()) || n < 2 {
        return Err(bad());
    }
    Ok((w, n))
}

fn wigner(ctx: &Ctx, grid: &str, path: &Path) -> Outcome<Output> {
    let (w, n) = parse_grid(grid)?;
    let state = Input::read(path)?.state(ctx.hbar)?;
    if state.n() != 1 {
        return Err(Failure::core(
            Error::UnsupportedDimension(state.n()),
            Some(path.display().to_string()),
        ));
    }
    let step = 2.0 * w / (n - 1) as f64;
    let mut out = String::from("x,p,W\n");
    for i in 0..n {
        let x = -w + i as f64 * step;
        for j in 0..n {
            let p = -w + j as f64 * step;
            let v = wigner_eval(&state, &Vector::from_vec(vec![x, p]));
            writeln!(out, "{x},{p},{v}").expect("writing to a String");
        }
    }
    Ok(Output::Csv(out))
}
