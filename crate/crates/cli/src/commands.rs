use std::io::Write;

use num_complex::Complex64;
use num_rational::Ratio;
use rexosc_core::model::{
    admissible_codimensions, spectrum, Eigenstate, ExtendedSystem, Grouping, OscillatorSpec, REConfig,
};
use rexosc_core::numerics::Grid;
use rexosc_core::transform::{
    degeneracy_coupling_2d, degeneracy_coupling_3d, spectral_reality, DegeneracyCase, Flavor,
};
use rexosc_core::verify::{default_points, verify, Sampling};
use serde::Serialize;

use crate::args::{CaseArg, DegeneracyArgs, FlavorArg};
use crate::error::CliError;
use crate::job::{Format, JobConfig};
use crate::views::{
    cnum, num, DegeneracyView, PlotRow, ReportView, SpectrumRow, SpectrumView, TableRow, TransformView,
};

const TABLE_BOUNDS: [f64; 2] = [-4.0, 4.0];
const TABLE_POINTS: usize = 17;
const PLOT_BOUNDS: [f64; 2] = [-5.0, 5.0];

fn format_of(job: &JobConfig, default: Format, allowed: &[Format], command: &str) -> Result<Format, CliError> {
    let f = job.outputs.format.unwrap_or(default);
    if !allowed.contains(&f) {
        return Err(CliError::Usage(format!("{command} does not write {f:?} output").to_lowercase()));
    }
    Ok(f)
}

fn json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| CliError::Usage(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn csv_rows<T: Serialize>(out: &mut dyn Write, rows: &[T]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Refuse configurations whose spectrum is not real, naming the failed condition.
fn require_real(spec: &OscillatorSpec) -> Result<(), CliError> {
    let verdict = spectral_reality(spec)?;
    if let Some(c) = verdict.violated() {
        return Err(CliError::Usage(format!("spectrum is not real; condition violated: {c}")));
    }
    Ok(())
}

fn point_values(sys: &ExtendedSystem, psi: &rexosc_core::model::StateFunction, p: &[f64]) -> (Complex64, Complex64) {
    let nan = Complex64::new(f64::NAN, f64::NAN);
    (sys.potential_real(p).unwrap_or(nan), psi.evaluate_real(p).unwrap_or(nan))
}

pub fn table(job: &JobConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let format = format_of(job, Format::Csv, &[Format::Csv, Format::Json], "table")?;
    if job.spec.dimension() != 1 {
        return Err(CliError::Usage("table samples one-dimensional potentials; use plotdata in 2D".into()));
    }
    require_real(&job.spec)?;
    let ms = match &job.codimension_sweep {
        Some(v) => v.clone(),
        None => vec![job.config.codimensions()[0]],
    };
    let [lo, hi] = job.grids.bounds.as_ref().map_or(TABLE_BOUNDS, |b| b[0]);
    let grid = Grid::spanning(lo, hi, job.grids.points.unwrap_or(TABLE_POINTS))?;
    let states = if job.states.is_empty() { vec![Eigenstate::ground(1)] } else { job.states.clone() };
    let mut rows = Vec::new();
    for m in ms {
        let sys = ExtendedSystem::new(&job.spec, &REConfig::new(vec![m])?)?;
        for st in &states {
            let psi = sys.state(st)?;
            for x in grid.points() {
                let (v, f) = point_values(&sys, &psi, &[x]);
                rows.push(TableRow {
                    m,
                    state: st.to_string(),
                    x,
                    re_v: v.re,
                    im_v: v.im,
                    re_psi: f.re,
                    im_psi: f.im,
                });
            }
        }
    }
    match format {
        Format::Json => json(out, &rows),
        _ => csv_rows(out, &rows),
    }
}

fn parse_ratio(s: &str) -> Result<Ratio<i64>, CliError> {
    let bad = || CliError::Usage(format!("'{s}' is not an integer or p/q ratio"));
    match s.trim().split_once('/') {
        Some((p, q)) => {
            let (p, q): (i64, i64) = (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?);
            if q == 0 {
                return Err(bad());
            }
            Ok(Ratio::new(p, q))
        }
        None => Ok(Ratio::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

pub fn spectrum_cmd(job: &JobConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let format = format_of(job, Format::Csv, &[Format::Csv, Format::Json, Format::Text], "spectrum")?;
    require_real(&job.spec)?;
    let sys = job.spec.decouple()?;
    let cutoff = job.grids.cutoff.unwrap_or(10.0 * sys.max_frequency_norm());
    let grouping = match &job.grids.exact_ratios {
        Some(r) => Grouping::Exact(r.iter().map(|s| parse_ratio(s)).collect::<Result<_, _>>()?),
        None => Grouping::default(),
    };
    let table = spectrum(&job.spec, &job.config, cutoff, &grouping)?;
    let view = SpectrumView::new(cutoff, &table);
    match format {
        Format::Json => json(out, &view),
        Format::Csv => {
            let rows: Vec<SpectrumRow> = view
                .entries
                .iter()
                .map(|e| SpectrumRow {
                    re_energy: e.energy.re,
                    im_energy: e.energy.im,
                    multiplicity: e.multiplicity,
                    states: e.states.join(" "),
                    complex: e.complex,
                })
                .collect();
            csv_rows(out, &rows)
        }
        Format::Text => {
            writeln!(out, "cutoff: {}", num(cutoff))?;
            for e in &table.entries {
                let states: Vec<String> = e.states.iter().map(|s| s.to_string()).collect();
                writeln!(out, "E = {}  x{}  {}", cnum(e.energy), e.multiplicity, states.join(" "))?;
            }
            Ok(())
        }
    }
}

fn sampling_for(job: &JobConfig, sys: &ExtendedSystem) -> Result<Sampling, CliError> {
    let points = job.grids.points.unwrap_or(default_points(sys.dimension()));
    Ok(match &job.grids.bounds {
        Some(b) => Sampling::new(
            b.iter()
                .map(|[lo, hi]| Grid::spanning(*lo, *hi, points))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        None => Sampling::automatic(sys, points)?,
    })
}

pub fn verify_cmd(job: &JobConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let format = format_of(job, Format::Text, &[Format::Text, Format::Json], "verify")?;
    require_real(&job.spec)?;
    let sys = ExtendedSystem::new(&job.spec, &job.config)?;
    let sampling = sampling_for(job, &sys)?;
    let states = if job.states.is_empty() { vec![Eigenstate::ground(sys.dimension())] } else { job.states.clone() };
    let report = verify(&job.spec, &job.config, &states, Some(&sampling))?;
    let view = ReportView::from(&report);
    if format == Format::Json {
        return json(out, &view);
    }
    writeln!(out, "max residual: {:.3e}", report.max_residual)?;
    writeln!(out, "fitted offset: {}", cnum(report.fitted_offset))?;
    writeln!(out, "offset spread: {:.3e}", report.offset_spread)?;
    if report.pole_list.is_empty() {
        writeln!(out, "poles: none")?;
    } else {
        writeln!(out, "poles: {}", report.pole_list.len())?;
        for p in &report.pole_list {
            let at: Vec<String> = p.representative().iter().map(|&x| num(x)).collect();
            writeln!(out, "  axis {} through ({})", p.axis() + 1, at.join(", "))?;
        }
    }
    writeln!(out, "parity: {}", report.parity.as_deref().unwrap_or("none"))?;
    let pt = |p: rexosc_core::verify::PtEigenvalue| p.value().map_or("indeterminate".to_string(), cnum);
    writeln!(out, "PT eigenvalue: {}", pt(report.pt_eigenvalue))?;
    writeln!(out, "gram pairing: {}", report.gram_pairing)?;
    writeln!(out, "states:")?;
    for s in &report.states {
        writeln!(
            out,
            "  {}  E_rel = {}  residual = {:.3e}  PT = {}",
            s.state,
            cnum(s.relative_energy),
            s.max_residual,
            pt(s.pt_eigenvalue)
        )?;
    }
    for n in &report.notes {
        writeln!(out, "note: {n}")?;
    }
    Ok(())
}

pub fn transform(job: &JobConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let format = format_of(job, Format::Text, &[Format::Text, Format::Json], "transform")?;
    let sys = job.spec.decouple()?;
    let verdict = spectral_reality(&job.spec)?;
    let view = TransformView::new(
        job.spec.perturbation().name(),
        &sys,
        verdict.clone(),
        admissible_codimensions(&job.spec),
    );
    if format == Format::Json {
        return json(out, &view);
    }
    let list = |v: &[Complex64]| v.iter().map(|&z| cnum(z)).collect::<Vec<_>>().join(", ");
    writeln!(out, "dimension: {}", sys.dimension())?;
    writeln!(out, "perturbation: {}", job.spec.perturbation().name())?;
    let p = sys.parameters;
    for (name, v) in [("k", p.k), ("a", p.a), ("b", p.b), ("c", p.c), ("d", p.d)] {
        if let Some(v) = v {
            writeln!(out, "{name}: {}", cnum(v))?;
        }
    }
    let w = &sys.tilde_frequencies;
    writeln!(out, "tilde frequencies: {}", list(w))?;
    let sq: Vec<Complex64> = w.iter().map(|z| z * z).collect();
    writeln!(out, "tilde frequencies squared: {}", list(&sq))?;
    let ratio: Vec<String> = w.iter().map(|&z| cnum(z / w[0])).collect();
    writeln!(out, "ratio: {}", ratio.join(":"))?;
    writeln!(out, "potential constant: {}", cnum(sys.potential_constant))?;
    for i in 0..sys.dimension() {
        writeln!(out, "map row {}: {}", i + 1, list(sys.map.row(i)))?;
    }
    writeln!(out, "shift: {}", list(sys.map.shift()))?;
    match verdict.violated() {
        None => writeln!(out, "spectrum real: yes")?,
        Some(c) => writeln!(out, "spectrum real: no ({c} violated)")?,
    }
    Ok(())
}

pub fn plotdata(job: &JobConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let format = format_of(job, Format::Csv, &[Format::Csv, Format::Json], "plotdata")?;
    let d = job.spec.dimension();
    if d > 2 {
        return Err(CliError::Usage("plotdata covers one and two dimensions".into()));
    }
    require_real(&job.spec)?;
    let sys = ExtendedSystem::new(&job.spec, &job.config)?;
    let state = job.states.first().cloned().unwrap_or_else(|| Eigenstate::ground(d));
    let psi = sys.state(&state)?;
    let points = job.grids.points.unwrap_or(if d == 1 { 201 } else { 41 });
    let grids = (0..d)
        .map(|i| {
            let [lo, hi] = job.grids.bounds.as_ref().map_or(PLOT_BOUNDS, |b| b[i]);
            Grid::spanning(lo, hi, points)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    let ys: Vec<f64> = if d == 1 { vec![0.0] } else { grids[1].points().collect() };
    for x in grids[0].points() {
        for &y in &ys {
            let p = if d == 1 { vec![x] } else { vec![x, y] };
            let (v, f) = point_values(&sys, &psi, &p);
            rows.push(PlotRow {
                x,
                y,
                re_v: v.re,
                im_v: v.im,
                re_psi: f.re,
                im_psi: f.im,
            });
        }
    }
    match format {
        Format::Json => json(out, &rows),
        _ => csv_rows(out, &rows),
    }
}

pub fn degeneracy(a: &DegeneracyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let format = a.format.unwrap_or(Format::Text);
    if format == Format::Csv {
        return Err(CliError::Usage("degeneracy does not write csv output".into()));
    }
    let ratio = match a.ratio.split_once('/') {
        Some(_) => {
            let r = parse_ratio(&a.ratio)?;
            *r.numer() as f64 / *r.denom() as f64
        }
        None => a
            .ratio
            .trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("'{}' is not a ratio", a.ratio)))?,
    };
    let flavor = a.flavor.map(|f| match f {
        FlavorArg::Real => Flavor::Real,
        FlavorArg::Imaginary => Flavor::Imaginary,
    });
    if a.omega.len() != 2 {
        return Err(CliError::Usage(format!("--omega needs two values, got {}", a.omega.len())));
    }
    let (w1, w2) = (a.omega[0], a.omega[1]);
    let (case, coupling, spec) = match a.dim {
        2 => {
            if a.case.is_some() || a.lambda1.is_some() {
                return Err(CliError::Usage("--case and --lambda1 apply to three dimensions".into()));
            }
            let l = degeneracy_coupling_2d(ratio, w1, w2)?;
            if let Some(f) = flavor {
                if f != l.flavor && !l.is_zero() {
                    return Err(CliError::Core(rexosc_core::Error::FlavorMismatch(format!(
                        "ratio {} needs a {} coupling ({l})",
                        num(ratio),
                        if l.is_imaginary() { "imaginary" } else { "real" }
                    ))));
                }
            }
            ("quadratic2d".to_string(), l, OscillatorSpec::quadratic_2d(w1, w2, l)?)
        }
        3 => {
            let case = a
                .case
                .ok_or_else(|| CliError::Usage("--case q1 or q2 is required in three dimensions".into()))?;
            match case {
                CaseArg::Q1 => {
                    let l = degeneracy_coupling_3d(DegeneracyCase::CaseI { omega: w1, omega3: w2 }, ratio, flavor)?;
                    let zero = rexosc_core::transform::CouplingValue { value: 0.0, flavor: l.flavor };
                    ("q1_3d".to_string(), l, OscillatorSpec::quadratic_case_i(w1, w2, l, zero)?)
                }
                CaseArg::Q2 => {
                    let l1 = a.lambda1.unwrap_or(0.0);
                    let l = degeneracy_coupling_3d(
                        DegeneracyCase::CaseII { omega: w1, omega3: w2, lambda1: l1 },
                        ratio,
                        flavor,
                    )?;
                    ("q2_3d".to_string(), l, OscillatorSpec::quadratic_case_ii(w1, w2, l1, l)?)
                }
                CaseArg::Lq => return Err(CliError::Usage("the degeneracy condition covers q1 and q2".into())),
            }
        }
        d => return Err(CliError::Usage(format!("--dim must be 2 or 3 for degeneracy, got {d}"))),
    };
    let tilde = spec.decouple().map(|s| s.tilde_frequencies).unwrap_or_default();
    let real = spectral_reality(&spec)?.real;
    let view = DegeneracyView {
        dimension: a.dim,
        case,
        ratio,
        coupling: coupling.to_string(),
        coupling_value: coupling.as_complex().into(),
        coupling_squared: coupling.squared(),
        tilde_frequencies: tilde.iter().map(|&z| z.into()).collect(),
        spectrum_real: real,
    };
    let mut sink: Box<dyn Write> = match &a.out {
        Some(p) => Box::new(std::fs::File::create(p).map_err(|e| {
            CliError::Usage(format!("output path {} is not writable: {e}", p.display()))
        })?),
        None => Box::new(&mut *out),
    };
    if format == Format::Json {
        return json(&mut *sink, &view);
    }
    let label = if coupling.is_imaginary() { "γ" } else { "λ" };
    writeln!(sink, "case: {}", view.case)?;
    writeln!(sink, "ratio: {}", num(ratio))?;
    writeln!(sink, "coupling: {} ({label} = {}, λ² = {})", coupling, num(coupling.magnitude()), num(coupling.squared()))?;
    let t: Vec<String> = tilde.iter().map(|&z| cnum(z)).collect();
    writeln!(sink, "tilde frequencies: {}", t.join(", "))?;
    writeln!(sink, "spectrum real: {}", if real { "yes" } else { "no" })?;
    Ok(())
}
