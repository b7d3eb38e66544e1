use std::io::Write;
use std::str::FromStr;

use fermat_core::arith::{
    self, divisors, euler_phi, factorize, is_prime, moebius, multiplicative_order, next_prime, phi_squared_sum,
    phi_squared_sum_big, pow_mod, prime_range, primes_up_to, FactorConfig, PrimeModulus,
};
use fermat_core::{cyclotomic, densities, fermat, stats};
use num_bigint::BigUint;
use serde_json::json;

use crate::checkpoint::{self, Checkpoint};
use crate::output::{factor_string, join, Cell, Table};
use crate::{CliError, Command, Params, RunConfig};

type Res<T> = Result<T, CliError>;

/// Work items per progress line and per checkpoint save.
const FIRST_ZERO_CHUNK: u64 = 1 << 24;
const SURVEY_CHUNK: u64 = 512;

const DEFAULT_THRESHOLD: u64 = 4;
const DEFAULT_SURVEY_DRAWS: u64 = 16;

fn need<T>(value: Option<T>, flag: &str, cmd: Command) -> Res<T> {
    value.ok_or_else(|| CliError::Usage(format!("`{}` needs --{flag}", cmd.name())))
}

fn parse<T: FromStr>(text: &str, flag: &str) -> Res<T>
where
    T::Err: std::fmt::Display,
{
    text.trim()
        .parse()
        .map_err(|e| CliError::Usage(format!("--{flag} {text:?}: {e}")))
}

fn parse_list(text: &str, flag: &str) -> Res<Vec<u64>> {
    text.split(',').map(|s| parse(s, flag)).collect()
}

impl Params {
    fn p_text(&self, cmd: Command) -> Res<&str> {
        need(self.p.as_deref(), "p", cmd)
    }

    fn p_u64(&self, cmd: Command) -> Res<u64> {
        parse(self.p_text(cmd)?, "p")
    }

    fn p_big(&self, cmd: Command) -> Res<BigUint> {
        parse(self.p_text(cmd)?, "p")
    }

    fn modulus(&self, cmd: Command) -> Res<PrimeModulus> {
        Ok(PrimeModulus::new(self.p_u64(cmd)?)?)
    }

    fn v_u64(&self) -> Res<Option<u64>> {
        self.v.as_deref().map(|v| parse(v, "v")).transpose()
    }

    fn a(&self, cmd: Command) -> Res<u64> {
        need(self.a, "a", cmd)
    }
}

fn progress(err: &mut (dyn Write + Send), line: std::fmt::Arguments) {
    // Progress is best effort; a closed stderr must not abort the run.
    let _ = writeln!(err, "{line}");
}

pub fn execute(config: &RunConfig, err: &mut (dyn Write + Send)) -> Res<Table> {
    let cmd = config.command;
    let p = &config.params;
    use Command as C;
    match cmd {
        C::Prime => prime(p, cmd),
        C::PowMod => {
            let (base, exp, m) = (p.a(cmd)?, need(p.n, "n", cmd)?, need(p.m, "m", cmd)?);
            if m == 0 {
                return Err(CliError::Usage("--m must be positive".into()));
            }
            let mut t = Table::new(&["base", "exp", "modulus", "value"]);
            t.push(vec![base.into(), exp.into(), m.into(), pow_mod(base, exp, m).into()]);
            Ok(t)
        }
        C::Factor => {
            let n = need(p.n, "n", cmd)?;
            let f = factorize(n)?;
            let divs = divisors(&f);
            let mut t = Table::new(&["n", "factorization", "phi", "moebius", "divisor_count", "divisors"]);
            t.push(vec![
                n.into(),
                factor_string(&f.factors).into(),
                euler_phi(&f).into(),
                moebius(n).into(),
                divs.len().into(),
                join(divs.iter()).into(),
            ]);
            Ok(t)
        }
        C::Order => {
            let (a, pm) = (p.a(cmd)?, p.modulus(cmd)?);
            let mut t = Table::new(&["p", "a", "order"]);
            t.push(vec![pm.p().into(), a.into(), multiplicative_order(a, &pm)?.into()]);
            Ok(t)
        }
        C::PhiSq => {
            let mut t = Table::new(&["p", "phi_squared_sum"]);
            match p.p_u64(cmd) {
                Ok(q) => t.push(vec![q.into(), phi_squared_sum(q)?.into()]),
                Err(_) => {
                    let q = p.p_big(cmd)?;
                    let s = phi_squared_sum_big(&q)?;
                    t.push(vec![Cell::big(&q), Cell::big(s)]);
                }
            }
            Ok(t)
        }
        C::Cyclotomic => {
            let (m, a) = (need(p.m, "m", cmd)?, p.a(cmd)?);
            let value = cyclotomic::phi_m_eval(m, a)?;
            let ev = cyclotomic::reduce(m, a)?;
            let ramification = ev.ramification.map(|(r, e, o)| format!("{r}^{e}*{o}"));
            let mut t = Table::new(&["m", "a", "value", "gcd_with_m", "reduced", "ramification"]);
            t.push(vec![
                m.into(),
                a.into(),
                Cell::big(value),
                ev.gcd_with_m.into(),
                Cell::big(ev.reduced),
                ramification.into(),
            ]);
            Ok(t)
        }
        C::FactorCongruence => {
            let (m, a) = (need(p.m, "m", cmd)?, p.a(cmd)?);
            let fc = cyclotomic::factor_congruence_check(m, a, &FactorConfig::default())?;
            let mut t = Table::new(&["m", "a", "holds", "factors", "violations", "unfactored"]);
            t.push(vec![
                m.into(),
                a.into(),
                fc.holds.into(),
                factor_string(&fc.factors).into(),
                join(&fc.violations).into(),
                join(&fc.unfactored).into(),
            ]);
            Ok(t)
        }
        C::Coprime => {
            let (a, m_max) = (p.a(cmd)?, need(p.m, "m", cmd)?);
            let pc = cyclotomic::pairwise_coprime_check(a, m_max)?;
            let violations = join(pc.violations.iter().map(|(m, m2, g)| format!("{m}:{m2}:{g}")));
            let mut t = Table::new(&["a", "m_max", "holds", "violations", "exception_1_2"]);
            t.push(vec![
                a.into(),
                m_max.into(),
                pc.holds.into(),
                violations.into(),
                pc.exception_1_2.map(Cell::big).unwrap_or(Cell::Null),
            ]);
            Ok(t)
        }
        C::Wieferich => {
            let (a, pm) = (p.a(cmd)?, p.modulus(cmd)?);
            let holds = cyclotomic::wieferich_equivalence_check(a, &pm)?;
            let w = cyclotomic::wieferich_equivalence(a, &pm)?;
            let mut t = Table::new(&["a", "p", "order", "quotient_zero", "cyclotomic_divisible", "exact", "holds"]);
            t.push(vec![
                a.into(),
                w.p.into(),
                w.order.into(),
                w.quotient_zero.into(),
                w.cyclotomic_divisible.into(),
                w.exact.into(),
                holds.into(),
            ]);
            Ok(t)
        }
        C::Quotient => {
            let a = p.a(cmd)?;
            let mut t = Table::new(&["p", "a", "q", "zero"]);
            match p.p_u64(cmd) {
                Ok(q) => {
                    let r = fermat::fermat_quotient(a, &PrimeModulus::new(q)?)?;
                    t.push(vec![r.p.into(), r.a.into(), r.q.into(), (r.q == 0).into()]);
                }
                Err(_) => {
                    let q = p.p_big(cmd)?;
                    if !arith::is_prime_big(&q) {
                        return Err(fermat_core::Error::NotPrime(q.to_string()).into());
                    }
                    let r = fermat::fermat_quotient_big(&BigUint::from(a), &q)?;
                    let zero = r == BigUint::ZERO;
                    t.push(vec![Cell::big(q), a.into(), Cell::big(r), zero.into()]);
                }
            }
            Ok(t)
        }
        C::Variants => {
            let v = fermat::quotient_variants(p.a(cmd)?, &p.modulus(cmd)?)?;
            let mut t = Table::new(&[
                "p",
                "a",
                "order",
                "t",
                "q",
                "q_prime",
                "q_second",
                "congruence_holds",
                "nullity_agrees",
            ]);
            t.push(vec![
                v.p.into(),
                v.a.into(),
                v.order.into(),
                v.t.into(),
                v.q.into(),
                v.q_prime.into(),
                v.q_second.into(),
                v.congruence_holds.into(),
                v.nullity_agrees.into(),
            ]);
            Ok(t)
        }
        C::FirstZero => first_zero(config, err),
        C::Solutions => {
            let pm = p.modulus(cmd)?;
            let mut t = Table::new(&["p", "z", "d", "lambda"]);
            for s in fermat::solutions_in_range(&pm)? {
                t.push(vec![s.p.into(), s.z.into(), s.order.into(), s.lambda.into()]);
            }
            Ok(t)
        }
        C::ZerosP2 => {
            let pm = p.modulus(cmd)?;
            let mut t = Table::new(&["p", "Z"]);
            for z in fermat::solutions_mod_p2(&pm) {
                t.push(vec![pm.p().into(), z.into()]);
            }
            Ok(t)
        }
        C::Lift => {
            let (z, pm) = (p.a(cmd)?, p.modulus(cmd)?);
            let u = p.v_u64()?.unwrap_or(0);
            let l = fermat::lift_to_solution(z, u, &pm)?;
            let mut t = Table::new(&["p", "z", "u", "lambda", "Z"]);
            t.push(vec![l.p.into(), l.z.into(), l.u.into(), l.lambda.into(), l.big_z.into()]);
            Ok(t)
        }
        C::Crt => {
            let primes = match (&p.p, p.lo, p.hi) {
                (Some(list), _, _) => parse_list(list, "p")?,
                (None, Some(lo), Some(hi)) => prime_range(lo, hi),
                _ => return Err(CliError::Usage("`crt` needs --p p1,p2,… or --lo/--hi".into())),
            };
            let set = fermat::crt_solutions(&primes)?;
            let mut t = Table::new(&["primes", "modulus", "residue"]);
            let label = join(&set.primes);
            for r in &set.residues {
                t.push(vec![label.clone().into(), Cell::big(&set.modulus), Cell::big(r)]);
            }
            Ok(t)
        }
        C::OrdersOfPowers => {
            let (g, pm) = (p.a(cmd)?, p.modulus(cmd)?);
            let mut t = Table::new(&["p", "g", "i", "order"]);
            for (i, o) in fermat::orders_of_powers(g, &pm)?.into_iter().enumerate() {
                t.push(vec![pm.p().into(), g.into(), (i + 1).into(), o.into()]);
            }
            Ok(t)
        }
        C::Theta => {
            let (a, pm) = (p.a(cmd)?, p.modulus(cmd)?);
            let mut t = Table::new(&["p", "a", "j", "a_j", "theta"]);
            for o in fermat::theta_offsets(a, &pm)? {
                t.push(vec![pm.p().into(), a.into(), o.j.into(), o.a_j.into(), o.theta.into()]);
            }
            Ok(t)
        }
        C::Classify => {
            let (lo, hi) = (need(p.lo, "lo", cmd)?, need(p.hi, "hi", cmd)?);
            let counts = stats::classify_primes(lo, hi - lo)?;
            let props = counts.proportions::<f64>();
            let model = stats::model_constants::<f64>();
            let n = [counts.n0, counts.n1, counts.n2, counts.n3_plus];
            let mut t = Table::new(&["b", "h", "class", "count", "n_total", "proportion", "model"]);
            for (i, class) in ["0", "1", "2", "3+"].into_iter().enumerate() {
                t.push(vec![
                    counts.b.into(),
                    counts.h.into(),
                    class.into(),
                    n[i].into(),
                    counts.n_total.into(),
                    props[i].into(),
                    model[i].into(),
                ]);
            }
            Ok(t)
        }
        C::Coverage => {
            let cov = stats::value_coverage(&p.modulus(cmd)?)?;
            let mut t = Table::new(&["p", "missing_count", "missing_fraction", "missing_of_residues", "missing"]);
            t.push(vec![
                cov.p.into(),
                cov.missing.len().into(),
                cov.fraction::<f64>().into(),
                cov.fraction_of_residues::<f64>().into(),
                join(&cov.missing).into(),
            ]);
            Ok(t)
        }
        C::LambdaStats => lambda_stats(config),
        C::NtEquidist => {
            let (b, tt) = (need(p.bound, "bound", cmd)?, need(p.t, "t", cmd)?);
            let e = stats::equidistribution_nt(b, tt)?;
            let mut t = Table::new(&["b", "t", "n_t", "n", "n_over_t"]);
            t.push(vec![e.b.into(), e.t.into(), e.n_t.into(), e.n.into(), e.n_over_t.into()]);
            Ok(t)
        }
        C::Moments => {
            let (pm, n) = (p.modulus(cmd)?, need(p.n, "n", cmd)?);
            let n = u32::try_from(n).map_err(|_| CliError::Usage(format!("--n {n} is too large")))?;
            let r = stats::sigma_moment(&pm, n)?;
            let mut t = Table::new(&["p", "n", "power_sum", "sigma", "sigma_decimal"]);
            t.push(vec![
                r.p.into(),
                r.n.into(),
                Cell::big(&r.power_sum),
                r.sigma.into(),
                r.decimal(30).into(),
            ]);
            Ok(t)
        }
        C::BinomTail => {
            let q = p.p_u64(cmd)?;
            if !is_prime(q) {
                return Err(fermat_core::Error::NotPrime(q.to_string()).into());
            }
            let ns: Vec<u64> = match p.n {
                Some(n) => vec![n],
                None => (1..=4).collect(),
            };
            let mut t = Table::new(&["p", "n", "prob", "upper_bound", "bound_holds"]);
            for n in ns {
                let tail = stats::binomial_tail::<f64>(q, n)?;
                t.push(vec![
                    q.into(),
                    n.into(),
                    tail.prob.into(),
                    stats::tail_upper_bound::<f64>(q, n).into(),
                    stats::tail_upper_bound_check(q, n)?.into(),
                ]);
            }
            Ok(t)
        }
        C::Ratio => {
            let r = stats::ratio_encadre::<f64>(p.p_u64(cmd)?, p.a.unwrap_or(2))?;
            let mut t = Table::new(&["p", "a", "h", "ratio", "lower", "upper", "holds"]);
            t.push(vec![
                r.p.into(),
                r.a.into(),
                r.h.into(),
                r.ratio.into(),
                r.lower.into(),
                r.upper.into(),
                r.holds.into(),
            ]);
            Ok(t)
        }
        C::Epsilon => {
            let e = stats::epsilon_exponent::<f64>(p.p_u64(cmd)?, p.a.unwrap_or(2))?;
            let mut t = Table::new(&["p", "a", "h", "prob", "epsilon"]);
            t.push(vec![e.p.into(), e.a.into(), e.h.into(), e.prob.into(), e.epsilon.into()]);
            Ok(t)
        }
        C::Cp => {
            let (m, q) = (need(p.m, "m", cmd)?, p.p_u64(cmd)?);
            let c = densities::c_p(m, q)?;
            // The residue scan is quadratic in p; skip it where it would dominate.
            let brute = if q <= 10_000 {
                Some(densities::c_p_bruteforce(m, q)?)
            } else {
                None
            };
            let mut t = Table::new(&["m", "p", "c_p", "c_p_bruteforce"]);
            t.push(vec![c.m.into(), c.p.into(), c.c_p.into(), brute.into()]);
            Ok(t)
        }
        C::PmProduct => {
            let m = need(p.m, "m", cmd)?;
            let r = densities::p_m_product::<f64>(m, p.n.unwrap_or(densities::PM_DEFAULT_TERMS))?;
            let mut t = Table::new(&["m", "n_max", "value", "reference", "terms_used"]);
            t.push(vec![m.into(), r.bound.into(), r.value.into(), r.reference.into(), r.terms_used.into()]);
            Ok(t)
        }
        C::LocalTable => {
            let pm = p.modulus(cmd)?;
            let mut t = Table::new(&["p", "A", "order"]);
            for s in densities::local_solution_table(&pm)? {
                t.push(vec![pm.p().into(), s.a.into(), s.order.into()]);
            }
            Ok(t)
        }
        C::DpProduct => {
            let d = densities::dp_product::<f64>(need(p.x, "x", cmd)?)?;
            let mut t = Table::new(&[
                "x",
                "value",
                "reference",
                "primes",
                "mertens",
                "mertens_reference",
                "correction",
                "correction_extrapolated",
            ]);
            t.push(vec![
                d.report.bound.into(),
                d.report.value.into(),
                d.report.reference.into(),
                d.report.terms_used.into(),
                d.mertens.into(),
                d.mertens_reference.into(),
                d.correction.into(),
                d.correction_extrapolated.into(),
            ]);
            Ok(t)
        }
        C::CrtCount => {
            let c = densities::crt_exact_count(need(p.x, "x", cmd)?)?;
            let density = stats::rational_to_f64(&c.density());
            let mut t = Table::new(&["x", "count", "modulus", "density"]);
            t.push(vec![c.x.into(), Cell::big(&c.count), Cell::big(&c.modulus), density.into()]);
            Ok(t)
        }
        C::Survey => survey(config, err),
        C::UpsilonEta => {
            let c = p.c.unwrap_or(1.0);
            let r = match p.p_u64(cmd) {
                Ok(q) => {
                    // Both halves separately, then the difference as one call.
                    let (u, e) = (densities::upsilon::<f64>(q)?, densities::eta::<f64>(q, c)?);
                    let r = densities::eta_minus_upsilon::<f64>(q, c)?;
                    debug_assert_eq!((u, e), (r.upsilon, r.eta));
                    r
                }
                Err(_) => densities::eta_minus_upsilon_big::<f64>(&p.p_big(cmd)?, c)?,
            };
            let mut t = Table::new(&["p", "c", "upsilon", "eta", "difference"]);
            t.push(vec![Cell::big(&r.p), r.c.into(), r.upsilon.into(), r.eta.into(), r.difference.into()]);
            Ok(t)
        }
        C::SPartial => {
            let r = densities::s_partial::<f64>(need(p.x, "x", cmd)?)?;
            let mut t = Table::new(&["x", "value", "reference", "primes"]);
            t.push(vec![r.bound.into(), r.value.into(), r.reference.into(), r.terms_used.into()]);
            Ok(t)
        }
        C::Series => {
            let s = densities::series_sums::<f64>(p.a(cmd)?, need(p.bound, "bound", cmd)?)?;
            let mut t = Table::new(&["a", "bound", "binom_sum", "stirling_sum", "full_tail_sum", "heuristic_sum"]);
            t.push(vec![
                s.a.into(),
                s.bound.into(),
                s.binom_sum.into(),
                s.stirling_sum.into(),
                s.full_tail_sum.into(),
                s.heuristic_sum.into(),
            ]);
            Ok(t)
        }
        C::P0 => {
            let s = densities::p0_solver(p.a(cmd)?, need(p.c, "c", cmd)?)?;
            let mut t = Table::new(&["a", "c", "p0", "root", "bracket_lo", "bracket_hi"]);
            t.push(vec![
                s.a.into(),
                s.c.into(),
                s.p0.into(),
                s.root.into(),
                s.bracket.0.into(),
                s.bracket.1.into(),
            ]);
            Ok(t)
        }
        C::AvgCount => {
            let (lo, hi, bound) = (need(p.lo, "lo", cmd)?, need(p.hi, "hi", cmd)?, need(p.bound, "bound", cmd)?);
            let r = fermat::average_solution_count(lo, hi, bound)?;
            let mean = *r.mean.numer() as f64 / *r.mean.denom() as f64;
            let mut t = Table::new(&["a_lo", "a_hi", "p_bound", "total", "mean_exact", "mean"]);
            t.push(vec![
                r.a_lo.into(),
                r.a_hi.into(),
                r.p_bound.into(),
                r.total.into(),
                r.mean.to_string().into(),
                mean.into(),
            ]);
            Ok(t)
        }
        C::TableSmall => {
            let (lo, hi, bound) = (p.lo.unwrap_or(2), p.hi.unwrap_or(14), p.bound.unwrap_or(100));
            let mut t = Table::new(&["a", "p"]);
            for (a, q) in fermat::first_zeros_table(lo, hi, bound) {
                t.push(vec![a.into(), q.into()]);
            }
            Ok(t)
        }
    }
}

fn prime(p: &Params, cmd: Command) -> Res<Table> {
    if let Some(n) = p.n {
        let mut t = Table::new(&["n", "is_prime", "next_prime"]);
        t.push(vec![n.into(), is_prime(n).into(), next_prime(n).into()]);
        return Ok(t);
    }
    let (lo, hi) = (need(p.lo, "lo", cmd)?, need(p.hi, "hi", cmd)?);
    let mut t = Table::new(&["p"]);
    for q in prime_range(lo, hi) {
        t.push(vec![q.into()]);
    }
    Ok(t)
}

fn lambda_stats(config: &RunConfig) -> Res<Table> {
    let cmd = config.command;
    let p = &config.params;
    let v_list = p.v.as_deref().map(|v| parse_list(v, "v")).transpose()?;
    if p.p.is_some() {
        let pm = p.modulus(cmd)?;
        let mut t = Table::new(&["p", "v", "count", "witnesses"]);
        for v in v_list.unwrap_or_else(|| vec![0]) {
            let w = stats::lambda_multiplicity(&pm, v)?;
            t.push(vec![pm.p().into(), v.into(), w.len().into(), join(&w).into()]);
        }
        return Ok(t);
    }
    let (lo, hi) = (need(p.lo, "lo", cmd)?, need(p.hi, "hi", cmd)?);
    let threshold = match p.t {
        None => DEFAULT_THRESHOLD,
        Some(t) if t >= 0.0 && t.fract() == 0.0 => t as u64,
        Some(t) => return Err(CliError::Usage(format!("--t {t}: the survey threshold is a count"))),
    };
    let survey = match (v_list, config.seed) {
        (Some(v), _) => stats::multiplicity_survey(lo, hi - lo, &v, threshold)?,
        (None, Some(seed)) => {
            let draws = p.n.unwrap_or(DEFAULT_SURVEY_DRAWS) as usize;
            stats::multiplicity_survey_random(lo, hi - lo, draws, p.bound.unwrap_or(lo), threshold, seed)?
        }
        (None, None) => return Err(CliError::Usage("`lambda-stats` survey needs --v or --seed".into())),
    };
    let mut t = Table::new(&["b", "h", "threshold", "seed", "v", "k", "n_primes", "ratio"]);
    for &(v, k) in &survey.per_v {
        t.push(vec![
            survey.b.into(),
            survey.h.into(),
            survey.threshold.into(),
            survey.seed.into(),
            v.into(),
            k.into(),
            survey.n_primes.into(),
            survey.ratio.into(),
        ]);
    }
    Ok(t)
}

fn first_zero(config: &RunConfig, err: &mut (dyn Write + Send)) -> Res<Table> {
    let cmd = config.command;
    let p = &config.params;
    let (a, lo, hi) = (p.a(cmd)?, p.lo.unwrap_or(2), need(p.hi, "hi", cmd)?);
    let key = json!({ "a": a, "lo": lo, "hi": hi });
    let mut cp = match &config.checkpoint {
        Some(path) => checkpoint::load(path, cmd.name(), &key)?,
        None => None,
    }
    .unwrap_or_else(|| Checkpoint::fresh(cmd.name(), key, lo, json!({ "found": null })));

    while !cp.done {
        let chunk_hi = cp.cursor.saturating_add(FIRST_ZERO_CHUNK - 1).min(hi);
        if let Some(q) = fermat::first_solution_search(a, cp.cursor, chunk_hi) {
            cp.state = json!({ "found": q });
            cp.done = true;
        } else if chunk_hi >= hi {
            cp.done = true;
        }
        cp.cursor = chunk_hi.saturating_add(1);
        progress(err, format_args!("first-zero a={a}: scanned through {chunk_hi}"));
        if let Some(path) = &config.checkpoint {
            checkpoint::save(path, &cp)?;
        }
    }
    let mut t = Table::new(&["a", "lo", "hi", "p"]);
    t.push(vec![a.into(), lo.into(), hi.into(), cp.state["found"].as_u64().into()]);
    Ok(t)
}

fn survey(config: &RunConfig, err: &mut (dyn Write + Send)) -> Res<Table> {
    let cmd = config.command;
    let p = &config.params;
    let (y, x) = (need(p.y, "y", cmd)?, need(p.x, "x", cmd)?);
    if y < 2 || x < 2 {
        return Err(fermat_core::Error::InvalidInput("y and x must be >= 2".into()).into());
    }
    let key = json!({ "y": y, "x": x });
    let mut cp = match &config.checkpoint {
        Some(path) => checkpoint::load(path, cmd.name(), &key)?,
        None => None,
    }
    .unwrap_or_else(|| Checkpoint::fresh(cmd.name(), key, 2, json!({ "count": 0 })));

    let primes = primes_up_to(x);
    while !cp.done {
        let chunk_hi = (cp.cursor + SURVEY_CHUNK - 1).min(y);
        let count = cp.state["count"].as_u64().unwrap_or(0) + densities::survey_count(cp.cursor, chunk_hi, &primes);
        cp.state = json!({ "count": count });
        cp.cursor = chunk_hi + 1;
        cp.done = chunk_hi >= y;
        progress(err, format_args!("survey: A through {chunk_hi} of {y}, count {count}"));
        if let Some(path) = &config.checkpoint {
            checkpoint::save(path, &cp)?;
        }
    }
    let count = cp.state["count"].as_u64().unwrap_or(0);
    let comparator = y as f64 * densities::SURVEY_CONSTANT / (x as f64).ln();
    let mut t = Table::new(&["y", "x", "last_prime", "count", "comparator"]);
    t.push(vec![
        y.into(),
        x.into(),
        primes.last().copied().into(),
        count.into(),
        comparator.into(),
    ]);
    Ok(t)
}
