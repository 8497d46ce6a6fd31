use std::sync::Arc;

use fockbench::distributions::{
    waiting_time_simulate, BinomialParams, MultinomialParams, NegBinomialParams,
    NegMultinomialParams, PoissonParams,
};
use fockbench::fock::{Cutoff, TruncatedBasis};
use fockbench::states::{FamilyParams, StateSpec};
use fockbench::suites::{run_suite, Suite, SuiteOptions};
use fockbench::{Error, Execution};

use crate::args::{FamilyName, SimulateArgs, StateArgs, VerifyArgs};
use crate::output::{emit, Cell, Table};
use crate::CliError;

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_N_MAX: u64 = 20;

fn required<T>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

fn single(v: Option<Vec<f64>>, flag: &str) -> Result<f64, CliError> {
    match required(v, flag)?.as_slice() {
        [x] => Ok(*x),
        xs => Err(CliError::Usage(format!(
            "--{flag} takes one value, got {}",
            xs.len()
        ))),
    }
}

fn integer_m(m: f64) -> Result<u32, CliError> {
    if m >= 0.0 && m.fract() == 0.0 && m <= f64::from(u32::MAX) {
        Ok(m as u32)
    } else {
        Err(CliError::Usage(format!(
            "--M must be a non-negative integer here, got {m}"
        )))
    }
}

fn family_params(a: &StateArgs) -> Result<FamilyParams, CliError> {
    let family = required(a.family, "family")?;
    if family == FamilyName::Coherent {
        return Ok(FamilyParams::Coherent(PoissonParams::new(required(
            a.alpha2, "alpha2",
        )?)?));
    }
    let m = required(a.m, "M")?;
    Ok(match family {
        FamilyName::Coherent => unreachable!(),
        FamilyName::Binomial => FamilyParams::Binomial(BinomialParams::new(
            single(a.eta2.clone(), "eta2")?,
            integer_m(m)?,
        )?),
        FamilyName::Nbs => {
            FamilyParams::NegBinomial(NegBinomialParams::new(single(a.eta2.clone(), "eta2")?, m)?)
        }
        FamilyName::Ms => FamilyParams::Multinomial(MultinomialParams::from_eta2(
            &required(a.eta2.clone(), "eta2")?,
            integer_m(m)?,
        )?),
        FamilyName::Nms => FamilyParams::NegMultinomial(NegMultinomialParams::from_eta2(
            &required(a.eta2.clone(), "eta2")?,
            m,
        )?),
    })
}

fn basis_for(spec: &StateSpec, cutoff: Option<u32>) -> Result<Arc<TruncatedBasis>, CliError> {
    let auto = spec.auto_basis(0)?;
    let Some(n) = cutoff else {
        return Ok(auto);
    };
    let c = match auto.cutoff() {
        Cutoff::PerMode(_) => Cutoff::PerMode(n),
        Cutoff::Total(_) => Cutoff::Total(n),
        Cutoff::Shell(_) => {
            return Err(CliError::Usage(
                "multinomial states live on the shell Σn = M; --cutoff does not apply".into(),
            ))
        }
    };
    Ok(TruncatedBasis::new(auto.modes(), c)?)
}

pub fn state(a: StateArgs) -> Result<(), CliError> {
    let params = family_params(&a)?;
    let phases = a
        .theta
        .clone()
        .unwrap_or_else(|| vec![0.0; params.phase_count()]);
    let mut spec = StateSpec::new(params, phases)?;
    if let Some(t) = a.tail_tol {
        spec = spec.with_tail_tol(t);
    }
    let basis = basis_for(&spec, a.cutoff)?;
    let psi = spec.build(&basis)?;

    let modes = basis.modes();
    let mut header: Vec<String> = if modes == 1 {
        vec!["n".into()]
    } else {
        (0..modes).map(|j| format!("n{j}")).collect()
    };
    header.extend(["re", "im", "probability", "pmf"].map(String::from));
    let mut rows = Vec::with_capacity(basis.len());
    for (occ, amp) in basis.states().iter().zip(psi.amplitudes()) {
        let pmf = match spec.pmf(occ) {
            Ok(p) => p,
            // Binomial occupations above M under a widened cutoff.
            Err(Error::Domain(_)) => 0.0,
            Err(e) => return Err(e.into()),
        };
        let mut row: Vec<Cell> = occ
            .as_slice()
            .iter()
            .map(|&k| Cell::Int(u64::from(k)))
            .collect();
        row.extend([
            Cell::Float(amp.re),
            Cell::Float(amp.im),
            Cell::Float(amp.norm_sqr()),
            Cell::Float(pmf),
        ]);
        rows.push(row);
    }
    let table = Table { header, rows };
    let format = a.format.unwrap_or_default();
    match &a.out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("state.json"), psi.to_json(0.0) + "\n")?;
            let name = match format {
                crate::args::Format::Csv => "pmf.csv",
                crate::args::Format::Json => "pmf.json",
            };
            emit(Some(&dir.join(name)), |w| table.write(format, w))?;
        }
        None => emit(None, |w| table.write(format, w))?,
    }
    eprintln!("norm_deficit {:.16e}", psi.norm_deficit());
    Ok(())
}

pub fn verify(a: VerifyArgs) -> Result<(), CliError> {
    let suite = required(a.suite, "suite")?;
    if suite != Suite::Measure
        && (a.r.is_some() || a.m.is_some() || a.nodes.is_some() || a.allow_high_rank)
    {
        return Err(CliError::Usage(
            "--r, --M, --nodes and --allow-high-rank apply to the measure suite".into(),
        ));
    }
    let opts = SuiteOptions {
        r: a.r,
        m: a.m,
        nodes: a.nodes,
        allow_high_rank: a.allow_high_rank,
        execution: Execution::default(),
    };
    let report = run_suite(suite, &opts);
    for c in &report.checks {
        let value = c
            .value
            .map_or_else(|| "error".to_string(), |v| format!("{v:.3e}"));
        eprintln!(
            "{} {}: {value} (bound {:e})",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.bound
        );
    }
    emit(a.out.as_deref(), |w| {
        serde_json::to_writer_pretty(&mut *w, &report).map_err(|e| CliError::Io(e.into()))?;
        writeln!(w)?;
        Ok(())
    })?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}

pub fn simulate(a: SimulateArgs) -> Result<(), CliError> {
    let seed = a
        .seed
        .ok_or_else(|| CliError::Usage("simulate requires --seed for reproducibility".into()))?;
    let eta2 = single(a.eta2, "eta2")?;
    let m = integer_m(required(a.m, "M")?)?;
    let p = NegBinomialParams::new(eta2, f64::from(m))?;
    let trials = a.trials.unwrap_or(DEFAULT_TRIALS);
    let n_max = a.n_max.unwrap_or(DEFAULT_N_MAX);
    let hist = waiting_time_simulate(&p, trials, seed, Execution::default())?;
    let t = trials as f64;
    let rows = hist
        .table(&p, n_max)
        .into_iter()
        .map(|r| {
            let scale = r.stderr.max((r.p * (1.0 - r.p) / t).sqrt());
            let dev = (r.p_hat - r.p).abs();
            vec![
                Cell::Int(r.n),
                Cell::Int(hist.counts.get(r.n as usize).copied().unwrap_or(0)),
                Cell::Float(r.p),
                Cell::Float(r.p_hat),
                Cell::Float(r.stderr),
                Cell::Float(if dev == 0.0 { 0.0 } else { dev / scale }),
            ]
        })
        .collect();
    let table = Table {
        header: ["n", "count", "p", "p_hat", "stderr", "sigmas"]
            .map(String::from)
            .to_vec(),
        rows,
    };
    let format = a.format.unwrap_or_default();
    emit(a.out.as_deref(), |w| table.write(format, w))?;
    eprintln!(
        "max_deviation_sigmas {:.3}",
        hist.max_deviation_sigmas(&p, n_max)
    );
    Ok(())
}
