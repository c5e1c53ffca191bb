//! Subcommand implementations.

use std::f64::consts::PI;

use anyhow::{bail, Result};
use num_complex::Complex64;
use period_invariant::archimedean::{self, BesselEvalConfig, Regime};
use period_invariant::eulerprod::{self, Convention};
use period_invariant::localfactors::{normalized_factor, SatakeData};
use period_invariant::mcoeffs::{self, MklTable};
use period_invariant::padic::{self, LocallyConstantFn, UnramCharacter};
use period_invariant::{primes, qseries, Error};
use serde_json::{json, Value};

use crate::args::{Family, InvariantArgs, PadicOracle, PrimeArgs};
use crate::report::{jf, jint, Cell, Report, Section};

const DEFAULT_MAX_P: u64 = 100;

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::Series => "series",
        Regime::Asymptotic => "asymptotic",
    }
}

fn select_primes(a: &PrimeArgs) -> Result<Vec<u64>> {
    if !a.primes.is_empty() {
        return Ok(a.primes.clone());
    }
    let bound = a.max_p.unwrap_or(DEFAULT_MAX_P);
    if bound < 2 {
        return Err(Error::InvalidInput(format!("no primes up to {bound}")).into());
    }
    Ok(primes::primes_up_to(bound))
}

pub fn tau(max_n: u64) -> Result<Report> {
    let mut s = Section::new("tau(n)", &["n", "tau"]);
    for (i, t) in qseries::tau_table(max_n).iter().enumerate() {
        s.push(vec![Cell::int(i + 1), Cell::int(t)]);
    }
    Ok(Report::single(s))
}

pub fn satake(a: &PrimeArgs) -> Result<Report> {
    let mut s = Section::new("Satake data of Δ", &["p", "tau", "t", "s2", "theta"]);
    for p in select_primes(a)? {
        let d = SatakeData::delta(p)?;
        s.push(vec![
            Cell::int(p),
            Cell::int(qseries::tau(p)?),
            Cell::Float(d.t),
            Cell::Float(d.s2),
            Cell::Float((d.t / 2.0).clamp(-1.0, 1.0).acos()),
        ]);
    }
    Ok(Report::single(s))
}

pub fn local(a: &PrimeArgs) -> Result<Report> {
    let mut s = Section::new(
        "local factors of Δ",
        &["p", "lambda_p", "adjoint_L", "normalized", "Q_term"],
    );
    for p in select_primes(a)? {
        let r = normalized_factor(&SatakeData::delta(p)?)?;
        s.push(vec![
            Cell::int(p),
            Cell::Float(r.lambda_p),
            Cell::Float(r.adjoint_l),
            Cell::Float(r.normalized),
            Cell::Float(r.q_term),
        ]);
    }
    Ok(Report::single(s))
}

pub fn invariant(a: &InvariantArgs) -> Result<Report> {
    if !a.table.is_empty() {
        let rows = eulerprod::convergence_table(&a.table)?;
        let mut s = Section::new(
            "convergence of the truncated invariant",
            &[
                "prime_bound",
                "n_primes",
                "tilde_partial",
                "running_value",
                "tail_estimate",
            ],
        );
        for r in &rows {
            s.push(vec![
                Cell::int(r.prime_bound),
                Cell::int(r.n_primes),
                Cell::Float(r.tilde_partial),
                Cell::Float(r.running_value),
                Cell::Float(r.tail_estimate),
            ]);
        }
        let mut rep = Report::single(s);
        if let (Some(tol), Some(last)) = (a.tolerance, rows.last()) {
            if last.tail_estimate > tol {
                rep.failure = Some(Error::Tolerance(format!(
                    "tail estimate {:e} exceeds tolerance {tol:e}",
                    last.tail_estimate
                )));
            }
        }
        return Ok(rep);
    }

    let n = a.prime_bound;
    if n < 100 {
        // Too few primes for a meaningful value; report the finite part only.
        let row = eulerprod::convergence_table(&[n.max(2)])?.remove(0);
        let finite = row.tilde_partial / eulerprod::ADJOINT_L_REFERENCE;
        let tail = finite.abs() * (row.tail_estimate / row.running_value.abs());
        let mut s = Section::new(
            "finite part only",
            &["prime_bound", "n_primes", "finite_part", "tail_estimate"],
        );
        s.push(vec![
            Cell::int(row.prime_bound),
            Cell::int(row.n_primes),
            Cell::Float(finite),
            Cell::Float(tail),
        ]);
        let mut rep = Report::object(s);
        rep.json["flagged"] = Value::Bool(true);
        rep.notes.push(format!(
            "prime bound {n} < 100: archimedean factor and value omitted, tail estimate is large"
        ));
        if let Some(tol) = a.tolerance {
            if tail > tol {
                rep.failure = Some(Error::Tolerance(format!(
                    "tail estimate {tail:e} exceeds tolerance {tol:e}"
                )));
            }
        }
        return Ok(rep);
    }

    let r = eulerprod::invariant_lambda(n, a.tolerance)?;
    let mut s = Section::new(
        "λ(Δ, e^{2πix})",
        &[
            "prime_bound",
            "n_primes",
            "tilde_partial",
            "finite_part",
            "archimedean_part",
            "value",
            "tail_estimate",
        ],
    );
    s.push(vec![
        Cell::int(r.prime_bound),
        Cell::int(r.n_primes),
        Cell::Float(r.tilde_partial),
        Cell::Float(r.finite_part),
        Cell::Float(r.archimedean_part),
        Cell::Float(r.value),
        Cell::Float(r.tail_estimate),
    ]);
    Ok(Report::object(s))
}

pub fn bessel(order: u32, z: f64, tolerance: f64) -> Result<Report> {
    let cfg = BesselEvalConfig {
        tolerance,
        ..Default::default()
    };
    let v = archimedean::bessel_j(order, z, &cfg)?;
    let mut s = Section::new(
        format!("J_{order}(z)"),
        &[
            "order",
            "arg",
            "value",
            "error_bound",
            "regime",
            "two_pi_value",
        ],
    );
    s.push(vec![
        Cell::int(order),
        Cell::Float(z),
        Cell::Float(v.value),
        Cell::Float(v.error_bound),
        Cell::text(regime_name(v.regime)),
        Cell::Float(2.0 * PI * v.value),
    ]);
    Ok(Report::object(s))
}

pub fn jfun(family: Family, param: f64, x: f64, tolerance: f64) -> Result<Report> {
    let v = match family {
        Family::Disc => {
            if param < 1.0 || param.fract() != 0.0 {
                bail!(Error::InvalidInput(format!(
                    "discrete series parameter must be a positive integer, got {param}"
                )));
            }
            let cfg = BesselEvalConfig {
                tolerance,
                ..Default::default()
            };
            archimedean::j_discrete(param as u32, x, &cfg)?
        }
        Family::Princ => archimedean::j_principal(param, x, tolerance)?,
    };
    let name = match family {
        Family::Disc => "disc",
        Family::Princ => "princ",
    };
    let mut s = Section::new(
        format!("j_{name}(x)"),
        &["family", "param", "x", "value", "error_bound", "regime"],
    );
    s.push(vec![
        Cell::text(name),
        Cell::Float(param),
        Cell::Float(x),
        Cell::Float(v.value),
        Cell::Float(v.error_bound),
        Cell::text(regime_name(v.regime)),
    ]);
    Ok(Report::object(s))
}

fn mkl_json(t: &MklTable) -> Value {
    Value::Array(
        t.rows
            .iter()
            .map(|r| Value::Array(r.iter().map(|m| jint(&m.to_string())).collect()))
            .collect(),
    )
}

pub fn mcoeffs(max_k: usize) -> Result<Report> {
    let t = mcoeffs::solve_mkl(max_k)?;
    let ok = mcoeffs::reconstruct_check(&t)?;
    let width = t.rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut cols = vec!["k".to_string()];
    cols.extend((0..width).map(|l| format!("l={l}")));
    let mut s = Section {
        title: format!("m_kl, k <= {max_k}"),
        columns: cols,
        rows: Vec::new(),
    };
    for (k, row) in t.rows.iter().enumerate() {
        let mut cells = vec![Cell::int(k + 1)];
        cells.extend(row.iter().map(Cell::int));
        cells.resize(width + 1, Cell::Empty);
        s.push(cells);
    }
    let neg = t.negative_entries();
    let json = json!({
        "max_k": max_k,
        "rows": mkl_json(&t),
        "reconstructs": ok,
        "negative_entries": neg
            .iter()
            .map(|(k, l, m)| json!({"k": k, "l": l, "m": jint(&m.to_string())}))
            .collect::<Vec<_>>(),
    });
    let mut rep = Report {
        json,
        ..Report::single(s)
    };
    if neg.is_empty() {
        rep.notes
            .push(format!("all m_kl with k <= {max_k} are non-negative"));
    } else {
        for (k, l, m) in &neg {
            rep.notes
                .push(format!("NEGATIVE ENTRY m_{{{k},{l}}} = {m}"));
        }
    }
    if !ok {
        rep.failure = Some(Error::Consistency(
            "product of solved factors does not reproduce 1 - x - ax - x/a".into(),
        ));
    }
    Ok(rep)
}

fn cpair(z: Complex64) -> Value {
    json!([jf(z.re), jf(z.im)])
}

pub fn padic(o: &PadicOracle) -> Result<Report> {
    match *o {
        PadicOracle::Bessel { p, theta, shells } => padic_bessel(p, theta, shells),
        PadicOracle::Compose {
            p,
            level,
            chi_log,
            chi_theta,
            ball,
            min_shell,
            max_shell,
        } => padic_compose(p, level, chi_log, chi_theta, ball, min_shell, max_shell),
    }
}

fn padic_bessel(p: u64, theta: f64, shells: u32) -> Result<Report> {
    let b = Complex64::from_polar(1.0, theta);
    let r = padic::bessel_j1_report(p, b, shells)?;
    let base = padic::bessel_j1_oracle(p, b, 1)?;
    let deviation = (r.value - r.closed_form).norm();
    let n1_difference = (r.value - base).norm();

    let mut sum = Section::new(
        "unramified j(1)",
        &[
            "p",
            "theta",
            "shells",
            "re",
            "im",
            "closed_re",
            "closed_im",
            "deviation",
            "n1_difference",
        ],
    );
    sum.push(vec![
        Cell::int(p),
        Cell::Float(theta),
        Cell::int(shells),
        Cell::Float(r.value.re),
        Cell::Float(r.value.im),
        Cell::Float(r.closed_form.re),
        Cell::Float(r.closed_form.im),
        Cell::Float(deviation),
        Cell::Float(n1_difference),
    ]);
    let mut terms = Section::new("shell contributions", &["v", "precision", "re", "im"]);
    for t in &r.terms {
        terms.push(vec![
            Cell::int(t.v),
            Cell::int(t.precision),
            Cell::Float(t.value.re),
            Cell::Float(t.value.im),
        ]);
    }
    let json = json!({
        "p": p,
        "theta": jf(theta),
        "shells": shells,
        "value": cpair(r.value),
        "closed_form": cpair(r.closed_form),
        "deviation": jf(deviation),
        "stabilization": {"n1_value": cpair(base), "difference": jf(n1_difference)},
        "terms": terms.json_rows(),
    });
    Ok(Report {
        sections: vec![sum, terms],
        json,
        notes: Vec::new(),
        failure: None,
    })
}

#[allow(clippy::too_many_arguments)]
fn padic_compose(
    p: u64,
    level: u32,
    chi_log: f64,
    chi_theta: f64,
    ball: Option<u32>,
    min_shell: i32,
    max_shell: i32,
) -> Result<Report> {
    if min_shell > max_shell {
        bail!(Error::InvalidInput("empty shell range".into()));
    }
    let chi = UnramCharacter::from_log(p, chi_log, chi_theta)?;
    let l = ball.unwrap_or(level);
    let mut sec = Section::new(
        format!("composition on level-{level} indicators, ball exponent {l}"),
        &["v", "indicators", "stabilized", "max_deviation", "max_step"],
    );
    let mut unstable = 0usize;
    let mut worst = 0.0f64;
    for v in min_shell..=max_shell {
        let basis = LocallyConstantFn::basis(p, level, [v])?;
        let mut stab = 0usize;
        let mut dev = 0.0f64;
        let mut step = 0.0f64;
        for f in &basis {
            let r = padic::kirillov_compose_report(f, &chi, l)?;
            if r.stabilized {
                stab += 1;
            }
            dev = dev.max((r.value - r.expected).norm());
            step = step.max((r.value - r.next_value).norm());
        }
        unstable += basis.len() - stab;
        worst = worst.max(dev);
        sec.push(vec![
            Cell::int(v),
            Cell::int(basis.len()),
            Cell::int(stab),
            Cell::Float(dev),
            Cell::Float(step),
        ]);
    }
    let json = json!({
        "p": p,
        "level": level,
        "ball": l,
        "chi": cpair(chi.value_at_p),
        "unitary": chi_log == 0.0,
        "max_deviation": jf(worst),
        "unstabilized": unstable,
        "shells": sec.json_rows(),
    });
    let mut rep = Report {
        json,
        ..Report::single(sec)
    };
    if unstable > 0 {
        rep.notes.push(format!(
            "{unstable} indicators changed between B_{l} and B_{}",
            l + 1
        ));
        rep.failure = Some(Error::Stabilization(format!(
            "{unstable} indicators failed to stabilize"
        )));
    }
    Ok(rep)
}

/// Maximum allowed deviations for the reproduced constants.
const FINITE_PARTIAL_TOL: f64 = 5e-4;
const ARCHIMEDEAN_TOL: f64 = 1e-4;
const INVARIANT_TOL: f64 = 1e-3;

pub fn reproduce(prime_bound: u64, kmax: usize) -> Result<Report> {
    if prime_bound < 100 {
        bail!(Error::InvalidInput("prime bound must be >= 100".into()));
    }
    let conv = eulerprod::match_reported_partial(eulerprod::REPORTED_FINITE_PARTIAL)?;
    let adj = eulerprod::partial_adjoint_l(prime_bound)?;
    let arch = archimedean::archimedean_constant(eulerprod::DELTA_REAL_PARAMETER)?;
    let inv = eulerprod::invariant_lambda(prime_bound, None)?;
    let table = mcoeffs::solve_mkl(11.max(kmax))?;
    let reconstructs = mcoeffs::reconstruct_check(&table)?;

    let finite_value = match conv.matched {
        Convention::FirstHundredPrimes => conv.first_hundred_primes,
        Convention::PrimesUpToHundred => conv.primes_up_to_hundred,
    };
    let checks = [
        (
            "finite partial product",
            finite_value,
            eulerprod::REPORTED_FINITE_PARTIAL,
            FINITE_PARTIAL_TOL,
        ),
        (
            "adjoint L partial product",
            adj.value(),
            eulerprod::ADJOINT_L_REFERENCE,
            adj.value_tail(),
        ),
        (
            "archimedean factor",
            arch.value,
            eulerprod::REPORTED_ARCHIMEDEAN,
            ARCHIMEDEAN_TOL,
        ),
        (
            "invariant",
            inv.value,
            eulerprod::REPORTED_INVARIANT,
            INVARIANT_TOL,
        ),
    ];
    let mut consts = Section::new(
        format!("published constants, primes up to {prime_bound}"),
        &[
            "quantity",
            "computed",
            "reference",
            "deviation",
            "allowed",
            "status",
        ],
    );
    let mut failed = Vec::new();
    for (name, value, reference, allowed) in checks {
        let dev = (value - reference).abs();
        let pass = dev <= allowed;
        if !pass {
            failed.push(name);
        }
        consts.push(vec![
            Cell::text(name),
            Cell::Float(value),
            Cell::Float(reference),
            Cell::Float(dev),
            Cell::Float(allowed),
            Cell::text(if pass { "PASS" } else { "FAIL" }),
        ]);
    }

    let exp_primes = [2u64, 3, 5];
    let mut residuals = Vec::new();
    for &p in &exp_primes {
        let d = SatakeData::delta(p)?;
        residuals.push(mcoeffs::lambda_product_experiment(&d, &table, kmax)?);
    }
    let mut exp = Section::new(
        "symmetric-power product experiment: |partial - λ_p|",
        &["K", "p=2", "p=3", "p=5"],
    );
    for k in 0..kmax {
        let mut row = vec![Cell::int(k + 1)];
        row.extend(residuals.iter().map(|r| Cell::Float(r[k].residual)));
        exp.push(row);
    }
    let monotone: Vec<bool> = residuals
        .iter()
        .map(|r| r.windows(2).all(|w| w[1].residual < w[0].residual))
        .collect();

    let mut notes = vec![
        format!(
            "finite partial convention: {} (first 100 primes {}, primes up to 100 {})",
            match conv.matched {
                Convention::FirstHundredPrimes => "first hundred primes",
                Convention::PrimesUpToHundred => "primes up to 100",
            },
            crate::report::fmt_sig(conv.first_hundred_primes, 8),
            crate::report::fmt_sig(conv.primes_up_to_hundred, 8),
        ),
        format!(
            "m_kl table for k <= {} reconstructs: {reconstructs}",
            table.max_k()
        ),
        "product experiment is exploratory; convergence is not established".into(),
    ];
    for (p, m) in exp_primes.iter().zip(&monotone) {
        if !m {
            notes.push(format!("residuals at p = {p} are not monotone"));
        }
    }

    let json = json!({
        "prime_bound": prime_bound,
        "constants": consts.json_rows(),
        "convention": {
            "matched": match conv.matched {
                Convention::FirstHundredPrimes => "first_hundred_primes",
                Convention::PrimesUpToHundred => "primes_up_to_hundred",
            },
            "first_hundred_primes": jf(conv.first_hundred_primes),
            "primes_up_to_hundred": jf(conv.primes_up_to_hundred),
        },
        "invariant": {
            "finite_part": jf(inv.finite_part),
            "archimedean_part": jf(inv.archimedean_part),
            "value": jf(inv.value),
            "tail_estimate": jf(inv.tail_estimate),
            "n_primes": inv.n_primes,
        },
        "mcoeffs": {"max_k": table.max_k(), "reconstructs": reconstructs, "rows": mkl_json(&table)},
        "experiment": {
            "kmax": kmax,
            "residuals": exp_primes.iter().zip(&residuals).map(|(p, r)| {
                (p.to_string(), Value::Array(r.iter().map(|x| jf(x.residual)).collect()))
            }).collect::<serde_json::Map<_, _>>(),
            "monotone": exp_primes.iter().zip(&monotone).map(|(p, m)| (p.to_string(), Value::Bool(*m))).collect::<serde_json::Map<_, _>>(),
        },
    });

    let failure = if !reconstructs {
        Some(Error::Consistency("m_kl reconstruction failed".into()))
    } else if !failed.is_empty() {
        Some(Error::Tolerance(format!(
            "out of tolerance: {}",
            failed.join(", ")
        )))
    } else {
        None
    };
    Ok(Report {
        sections: vec![consts, exp],
        json,
        notes,
        failure,
    })
}
