//! Subcommand implementations. Each returns the process exit code on success;
//! failures carry their own code through [`CliError::exit_code`].

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_traits::Zero;
use urn_core::closed_forms::ClosedForm;
use urn_core::exact::{marginal_pmf, mean_variance, StepKernel, WeightedStateVector};
use urn_core::series::{
    build_system, first_difference, q_coefficients, render_system, state_polynomial, taylor_solve,
    variable_names,
};
use urn_core::simulate::{total_variation, EmpiricalPmf, SimulationPlan};
use urn_core::tenability::{check_tenability, Verdict, Witness};
use urn_core::{parse_rational, presets, Pmf, Rational, UrnError, UrnScheme};

use crate::error::{exit, CliError, Result};
use crate::output::{decimal, write_distribution, write_histogram, write_trajectories, Provenance};
use crate::parallel::{evolve_parallel, terminal_counts, trajectories};
use crate::preset::parse_preset;
use crate::scheme_file::{read_scheme, scheme_hash};

#[derive(Debug, Clone)]
pub enum SchemeSource {
    File(PathBuf),
    Preset(String),
}

/// Loads a scheme file or preset, optionally replacing its initial configuration.
pub fn load_scheme(source: &SchemeSource, initial: Option<&[u64]>) -> Result<UrnScheme> {
    match source {
        SchemeSource::Preset(spec) => parse_preset(spec, initial),
        SchemeSource::File(path) => {
            let scheme = read_scheme(path)?;
            match initial {
                Some(init) => scheme
                    .with_initial(init.to_vec().into())
                    .map_err(CliError::scheme("--initial")),
                None => Ok(scheme),
            }
        }
    }
}

/// Color by index or by name.
pub fn resolve_color(scheme: &UrnScheme, selector: &str) -> Result<usize> {
    if let Ok(i) = selector.parse::<usize>() {
        scheme.check_color(i).map_err(CliError::scheme("--color"))?;
        return Ok(i);
    }
    scheme
        .colors()
        .iter()
        .position(|c| c == selector)
        .ok_or_else(|| CliError::Usage(format!("no color named {selector:?}")))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(CliError::io(path.display()))?))
}

fn vector(v: &[i64]) -> String {
    let parts: Vec<_> = v.iter().map(i64::to_string).collect();
    format!("[{}]", parts.join(", "))
}

pub fn render_witness(scheme: &UrnScheme, witness: &Witness) -> String {
    let mut s = String::new();
    if let Some(v) = &witness.static_violation {
        let _ = writeln!(
            s,
            "static violation: row {} adds {} {} ball(s) via {}",
            scheme.colors()[v.row],
            v.realization[v.column],
            scheme.colors()[v.column],
            vector(&v.realization)
        );
    }
    if witness.steps.is_empty() {
        return s;
    }
    let _ = writeln!(s, "witness ({} draw(s)):", witness.steps.len());
    let last = witness.steps.len() - 1;
    for (i, step) in witness.steps.iter().enumerate() {
        let _ = writeln!(
            s,
            "  {}. {}: draw {}, add {}{}",
            i + 1,
            step.configuration,
            scheme.colors()[step.color],
            vector(&step.realization),
            if i == last { " -> negative count" } else { "" }
        );
    }
    s
}

fn untenable(scheme: &UrnScheme, horizon: usize, cause: UrnError) -> CliError {
    let report = check_tenability(scheme, horizon);
    let mut message = format!("scheme is not tenable: {cause}");
    if let Some(w) = &report.witness {
        message.push('\n');
        message.push_str(render_witness(scheme, w).trim_end());
    }
    CliError::Untenable(message)
}

/// Exact engine with deadlocks turned into exit code 2 with a witness.
fn evolve_checked(scheme: &UrnScheme, n: usize, workers: usize) -> Result<WeightedStateVector> {
    evolve_parallel(scheme, n, workers).map_err(|e| match e {
        UrnError::NegativeCount { .. } => untenable(scheme, n, e),
        other => CliError::scheme("exact engine")(other),
    })
}

pub fn cmd_validate(scheme: &UrnScheme, horizon: usize, out: &mut dyn Write) -> Result<i32> {
    writeln!(out, "colors: {}", scheme.colors().join(", "))?;
    writeln!(out, "theta: {}", scheme.theta())?;
    writeln!(out, "initial: {}", scheme.initial())?;
    writeln!(out, "support:")?;
    for (i, row) in scheme.support_bounds().iter().enumerate() {
        let cols: Vec<_> = row
            .iter()
            .enumerate()
            .map(|(j, (lo, hi))| format!("{} {lo}..={hi}", scheme.colors()[j]))
            .collect();
        writeln!(out, "  draw {}: {}", scheme.colors()[i], cols.join(", "))?;
    }
    let report = check_tenability(scheme, horizon);
    let code = match report.verdict {
        Verdict::TenableExact => {
            writeln!(out, "verdict: tenable-exact")?;
            exit::OK
        }
        Verdict::TenableUpToHorizon => {
            writeln!(out, "verdict: tenable-up-to-horizon (horizon {})", report.horizon)?;
            exit::OK
        }
        Verdict::Untenable => {
            writeln!(out, "verdict: untenable")?;
            exit::UNTENABLE
        }
    };
    if let Some(w) = &report.witness {
        write!(out, "{}", render_witness(scheme, w))?;
    }
    Ok(code)
}

#[derive(Debug, Clone)]
pub struct ExactArgs {
    pub n: usize,
    pub color: usize,
    pub workers: usize,
    pub output: Option<PathBuf>,
}

pub fn cmd_exact(scheme: &UrnScheme, args: &ExactArgs, out: &mut dyn Write, log: &mut dyn Write) -> Result<i32> {
    scheme.check_color(args.color).map_err(CliError::scheme("--color"))?;
    let state = evolve_checked(scheme, args.n, args.workers)?;
    let pmf = marginal_pmf(&state, args.color);
    let provenance = Provenance::new("exact", Some(scheme_hash(scheme)))
        .param("n", args.n)
        .param("color", args.color);
    let summary: &mut dyn Write = match &args.output {
        Some(path) => {
            write_distribution(create(path)?, &provenance, &pmf)?;
            out
        }
        None => {
            write_distribution(&mut *out, &provenance, &pmf)?;
            log
        }
    };
    let (mean, var) = mean_variance(&pmf);
    writeln!(summary, "mean: {mean} ({})", decimal(&mean))?;
    writeln!(summary, "variance: {var} ({})", decimal(&var))?;
    Ok(exit::OK)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesMode {
    EmitSystem,
    EmitQ,
    Check,
}

pub fn cmd_series(scheme: &UrnScheme, order: usize, mode: SeriesMode, out: &mut dyn Write) -> Result<i32> {
    let system = build_system(scheme);
    if mode == SeriesMode::EmitSystem {
        writeln!(out, "{}", render_system(&system))?;
        return Ok(exit::OK);
    }
    let solution = taylor_solve(&system, order.max(1)).map_err(CliError::scheme("series"))?;
    let q = q_coefficients(&solution, scheme.initial(), order).map_err(CliError::scheme("series"))?;
    if mode == SeriesMode::EmitQ {
        let provenance = Provenance::new("series", Some(scheme_hash(scheme))).param("order", order);
        writeln!(out, "{}", provenance.line())?;
        let mut w = csv::Writer::from_writer(&mut *out);
        let mut header = vec!["n".to_string()];
        header.extend(variable_names(scheme.k()).iter().map(|v| format!("exponent_{v}")));
        header.extend(["coefficient_num".to_string(), "coefficient_den".to_string()]);
        w.write_record(&header)?;
        for (n, poly) in q.iter().enumerate() {
            for (e, c) in poly.terms() {
                let mut record = vec![n.to_string()];
                record.extend(e.iter().map(i64::to_string));
                record.extend([c.numer().to_string(), c.denom().to_string()]);
                w.write_record(&record)?;
            }
        }
        w.flush()?;
        return Ok(exit::OK);
    }
    let kernel = StepKernel::new(scheme);
    let mut state = WeightedStateVector::initial(scheme);
    let names = variable_names(scheme.k());
    for (n, qn) in q.iter().enumerate() {
        if n > 0 {
            state = kernel.step(&state).map_err(|e| untenable(scheme, n, e))?;
        }
        if let Some((e, a, b)) = first_difference(qn, &state_polynomial(&state, scheme.k())) {
            let mono: Vec<_> = names.iter().zip(&e).map(|(v, p)| format!("{v}^{p}")).collect();
            return Err(CliError::Mismatch(format!(
                "engines disagree at n = {n}, monomial {}: series {a}, exact {b}",
                mono.join("*")
            )));
        }
    }
    writeln!(out, "series and exact engines agree for n <= {order}")?;
    Ok(exit::OK)
}

/// Parameters for `closed-form`, all optional until a form needs them.
#[derive(Debug, Clone, Default)]
pub struct ClosedFormParams {
    pub b0: Option<u64>,
    pub w0: Option<u64>,
    pub r0: Option<u64>,
    pub g0: Option<u64>,
    pub theta: Option<u64>,
    pub p: Option<String>,
}

pub fn build_closed_form(name: &str, params: &ClosedFormParams) -> Result<ClosedForm> {
    let need = |v: Option<u64>, key: &str| v.ok_or_else(|| CliError::Usage(format!("{name} needs --{key}")));
    let p = || -> Result<Rational> {
        let text = params
            .p
            .as_deref()
            .ok_or_else(|| CliError::Usage(format!("{name} needs --p")))?;
        parse_rational(text).map_err(CliError::scheme("--p"))
    };
    Ok(match name {
        "coupon-delay" => ClosedForm::CouponDelay {
            b0: need(params.b0, "b0")?,
            w0: need(params.w0, "w0")?,
            p: p()?,
        },
        "binomial-half" => ClosedForm::BinomialHalf {
            theta: need(params.theta, "theta")?,
            b0: need(params.b0, "b0")?,
            w0: need(params.w0, "w0")?,
        },
        "uniform" => ClosedForm::Uniform {
            theta: need(params.theta, "theta")?,
            b0: need(params.b0, "b0")?,
            w0: need(params.w0, "w0")?,
        },
        "two-type-coupon-red" => ClosedForm::TwoTypeCouponRed {
            b0: need(params.b0, "b0")?,
            r0: params.r0.unwrap_or(0),
            g0: params.g0.unwrap_or(0),
            p: p()?,
        },
        other => {
            return Err(CliError::Usage(format!(
                "unknown closed form {other:?}; expected one of {}",
                ClosedForm::NAMES.join(", ")
            )))
        }
    })
}

/// The scheme a closed form describes, and the color it counts.
pub fn closed_form_scheme(form: &ClosedForm) -> Result<(UrnScheme, usize)> {
    let half = Rational::new(1.into(), 2.into());
    let built = match form {
        ClosedForm::CouponDelay { b0, w0, p } => presets::coupon(p.clone(), [*b0, *w0]).map(|s| (s, 0)),
        ClosedForm::BinomialHalf { theta, b0, w0 } => presets::binomial(*theta, half, [*b0, *w0]).map(|s| (s, 0)),
        ClosedForm::Uniform { theta, b0, w0 } => presets::uniform(*theta, [*b0, *w0]).map(|s| (s, 0)),
        ClosedForm::TwoTypeCouponRed { b0, r0, g0, p } => {
            presets::three_color_coupon(p.clone(), [*b0, *r0, *g0]).map(|s| (s, 1))
        }
    };
    built.map_err(CliError::scheme(form.name()))
}

/// First value where two pmfs differ, with both probabilities.
pub fn first_pmf_difference(a: &Pmf, b: &Pmf) -> Option<(u64, Rational, Rational)> {
    let zero = Rational::zero();
    a.keys()
        .chain(b.keys())
        .copied()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .map(|v| (v, a.get(&v).unwrap_or(&zero).clone(), b.get(&v).unwrap_or(&zero).clone()))
        .find(|(_, x, y)| x != y)
}

#[derive(Debug, Clone)]
pub struct ClosedFormArgs {
    pub n: u64,
    pub check: bool,
    pub workers: usize,
    pub output: Option<PathBuf>,
}

pub fn cmd_closed_form(form: &ClosedForm, args: &ClosedFormArgs, out: &mut dyn Write, log: &mut dyn Write) -> Result<i32> {
    let pmf = form
        .distribution(args.n)
        .map_err(CliError::scheme(form.name()))?;
    let (scheme, color) = closed_form_scheme(form)?;
    let provenance = Provenance::new("closed-form", Some(scheme_hash(&scheme)))
        .param("name", form.name())
        .param("n", args.n);
    match &args.output {
        Some(path) => write_distribution(create(path)?, &provenance, &pmf)?,
        None => write_distribution(&mut *out, &provenance, &pmf)?,
    }
    if !args.check {
        return Ok(exit::OK);
    }
    let state = evolve_checked(&scheme, args.n as usize, args.workers)?;
    let exact = marginal_pmf(&state, color);
    if let Some((v, formula, engine)) = first_pmf_difference(&pmf, &exact) {
        return Err(CliError::Mismatch(format!(
            "{} disagrees with the exact engine at n = {}, value {v}: formula {formula}, exact {engine}",
            form.name(),
            args.n
        )));
    }
    writeln!(log, "{}: formula matches the exact engine at n = {}", form.name(), args.n)?;
    Ok(exit::OK)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig1,
    Fig2,
}

#[derive(Debug, Clone)]
pub struct FiguresArgs {
    pub figure: Figure,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub histories: u64,
    pub steps: usize,
    pub n: usize,
    pub workers: usize,
    pub gnuplot: bool,
}

pub const FIG1_P: [&str; 4] = ["0", "0.4", "0.8", "1"];
pub const FIG2_P: [&str; 11] = ["0.0", "0.1", "0.2", "0.3", "0.4", "0.5", "0.6", "0.7", "0.8", "0.9", "1.0"];

pub fn cmd_figures(args: &FiguresArgs, out: &mut dyn Write) -> Result<i32> {
    std::fs::create_dir_all(&args.out_dir).map_err(CliError::io(args.out_dir.display()))?;
    match args.figure {
        Figure::Fig1 => {
            for label in FIG1_P {
                let scheme = parse_preset(&format!("polya-friedman:p={label}"), None)?;
                let plan = SimulationPlan::new(scheme.clone(), args.steps, args.histories, args.seed);
                let paths = trajectories(&plan, args.workers).map_err(CliError::scheme("fig1"))?;
                let provenance = Provenance::new("figures", Some(scheme_hash(&scheme)))
                    .param("figure", "fig1")
                    .param("p", label)
                    .param("histories", args.histories)
                    .param("steps", args.steps)
                    .param("seed", args.seed);
                let path = args.out_dir.join(format!("fig1_p{label}.csv"));
                write_trajectories(create(&path)?, &provenance, scheme.k(), &paths)?;
                writeln!(out, "wrote {}", path.display())?;
            }
            if args.gnuplot {
                let path = args.out_dir.join("fig1.gp");
                let mut gp = create(&path)?;
                writeln!(gp, "set datafile separator ','")?;
                writeln!(gp, "set key off")?;
                writeln!(gp, "set multiplot layout 2,2")?;
                for label in FIG1_P {
                    writeln!(gp, "set title 'p = {label}'")?;
                    writeln!(
                        gp,
                        "plot for [i=0:{}] 'fig1_p{label}.csv' skip 2 using ($1==i ? $2 : NaN):3 with lines",
                        args.histories.saturating_sub(1)
                    )?;
                }
                writeln!(gp, "unset multiplot")?;
                writeln!(out, "wrote {}", path.display())?;
            }
        }
        Figure::Fig2 => {
            for label in FIG2_P {
                let scheme = parse_preset(&format!("polya-friedman:p={label}"), None)?;
                let state = evolve_checked(&scheme, args.n, args.workers)?;
                let pmf = marginal_pmf(&state, 0);
                let provenance = Provenance::new("figures", Some(scheme_hash(&scheme)))
                    .param("figure", "fig2")
                    .param("p", label)
                    .param("n", args.n);
                let path = args.out_dir.join(format!("fig2_p{label}.csv"));
                write_distribution(create(&path)?, &provenance, &pmf)?;
                let (mean, var) = mean_variance(&pmf);
                writeln!(
                    out,
                    "wrote {} (mean {}, variance {})",
                    path.display(),
                    decimal(&mean),
                    decimal(&var)
                )?;
            }
            if args.gnuplot {
                let path = args.out_dir.join("fig2.gp");
                let mut gp = create(&path)?;
                let s = args.n + 2;
                writeln!(gp, "set datafile separator ','")?;
                writeln!(gp, "set xlabel 'b / {s}'")?;
                writeln!(gp, "set ylabel '{s} P(B_{} = b)'", args.n)?;
                writeln!(
                    gp,
                    "plot for [p in \"{}\"] 'fig2_p'.p.'.csv' skip 2 using ($1/{s}.0):($4*{s}) with lines title 'p = '.p",
                    FIG2_P.join(" ")
                )?;
                writeln!(out, "wrote {}", path.display())?;
            }
        }
    }
    Ok(exit::OK)
}

#[derive(Debug, Clone)]
pub struct SimulateArgs {
    pub n: usize,
    pub histories: u64,
    pub seed: u64,
    pub color: usize,
    pub workers: usize,
    /// Largest `n` for which the exact pmf is computed for comparison.
    pub exact_limit: usize,
    pub output: Option<PathBuf>,
    pub trajectories: Option<PathBuf>,
}

pub fn cmd_simulate(scheme: &UrnScheme, args: &SimulateArgs, out: &mut dyn Write, log: &mut dyn Write) -> Result<i32> {
    scheme.check_color(args.color).map_err(CliError::scheme("--color"))?;
    if args.histories == 0 {
        return Err(CliError::Usage("--histories must be at least 1".into()));
    }
    let plan = SimulationPlan::new(scheme.clone(), args.n, args.histories, args.seed);
    let sim_error = |e: UrnError| match e {
        UrnError::DeadlockEncountered { .. } => untenable(scheme, args.n, e),
        other => CliError::scheme("simulation")(other),
    };
    let values = terminal_counts(&plan, args.color, args.workers).map_err(sim_error)?;
    let empirical = EmpiricalPmf::from_values(values).to_pmf();
    let exact = if args.n <= args.exact_limit {
        evolve_parallel(scheme, args.n, args.workers)
            .ok()
            .map(|s| marginal_pmf(&s, args.color))
    } else {
        None
    };
    let provenance = Provenance::new("simulate", Some(scheme_hash(scheme)))
        .param("n", args.n)
        .param("histories", args.histories)
        .param("seed", args.seed)
        .param("color", args.color);
    let summary: &mut dyn Write = match &args.output {
        Some(path) => {
            write_histogram(create(path)?, &provenance, &empirical, exact.as_ref())?;
            out
        }
        None => {
            write_histogram(&mut *out, &provenance, &empirical, exact.as_ref())?;
            log
        }
    };
    if let Some(path) = &args.trajectories {
        let paths = trajectories(&plan, args.workers).map_err(sim_error)?;
        write_trajectories(create(path)?, &provenance, scheme.k(), &paths)?;
    }
    writeln!(summary, "histories: {}", args.histories)?;
    let (mean, var) = mean_variance(&empirical);
    writeln!(summary, "empirical mean: {}", decimal(&mean))?;
    writeln!(summary, "empirical variance: {}", decimal(&var))?;
    match &exact {
        Some(exact) => {
            let tv = total_variation(&empirical, exact);
            writeln!(summary, "tv distance to exact: {}", decimal(&tv))?;
        }
        None => writeln!(summary, "tv distance to exact: unavailable")?,
    }
    Ok(exit::OK)
}
