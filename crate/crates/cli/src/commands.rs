use serde::Serialize;
use serde_json::json;
use sigma_equid::arith::{FactorSieve, SieveConfig};
use sigma_equid::census::{census, discrepancy, prime_reciprocal_sum, CensusFilter};
use sigma_equid::charsums::{
    alpha_f, eta_brute, eta_factored, rho_brute, rho_closed_form, verify_s_set, weil_clz_check,
    PolynomialSpec, S_SET,
};
use sigma_equid::lsd::{convergence_scan, g_one_euler_product, twisted_sum_result, TwistedSumParams};
use sigma_equid::units::{enumerate_characters, Modulus};
use sigma_equid::varieties::{
    curve_point_count, lift_count_mod_ell_squared, overrep_witness_even, overrep_witness_sqfree,
    v_count, Curve, WitnessReport,
};
use sigma_equid::{Error, Ratio, Result};

use crate::cli::*;
use crate::output::{num, Artifact, Table};

/// Largest φ(q)² a character table may cost.
const TABLE_WORK_BUDGET: u64 = 1 << 34;

const AGREEMENT: f64 = 1e-9;

pub struct Context {
    pub mem_cap: Option<u64>,
}

impl Context {
    fn sieve(&self, x: u64) -> Result<FactorSieve> {
        let mut config = SieveConfig::default();
        if let Some(bytes) = self.mem_cap {
            config = config.with_memory_bytes(bytes);
        }
        FactorSieve::with_config(x.max(2), config)
    }
}

pub fn run(command: &Command, ctx: &Context) -> Result<Artifact> {
    match command {
        Command::Census(a) => run_census(a, ctx),
        Command::TwistedSum(a) => run_twisted_sum(a, ctx),
        Command::RhoTable(a) => rho_table(a),
        Command::EtaTable(a) => eta_table(a),
        Command::VerifySSet(a) => s_set(a),
        Command::WeilCheck(a) => weil(a),
        Command::LsdScan(a) => lsd_scan(a, ctx),
        Command::GOne(a) => g_one(a),
        Command::VCount(a) => run_v_count(a),
        Command::LiftCount(a) => lift(a),
        Command::CurveCount(a) => curves(a),
        Command::WitnessEven(a) => witness(overrep_witness_even(a.y, a.x, &ctx.sieve(a.x)?)?),
        Command::WitnessSqfree(a) => witness(overrep_witness_sqfree(a.y, a.x, &ctx.sieve(a.x)?)?),
        Command::PrimeRecip(a) => prime_recip(a, ctx),
    }
}

fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn run_census(a: &CensusArgs, ctx: &Context) -> Result<Artifact> {
    let sieve = ctx.sieve(a.x)?;
    let mut table = Table::new(&["q", "class", "count", "relative_deviation"]);
    let mut results = Vec::new();
    for &q in &a.q.0 {
        let m = Modulus::new(q)?;
        let t = a.threshold.unwrap_or(q);
        let filter = match a.filter {
            FilterKind::All => CensusFilter::All,
            FilterKind::CoprimeOnly => CensusFilter::CoprimeOnly,
            FilterKind::PkAbove => CensusFilter::PkAbove { k: a.k, threshold: t },
            FilterKind::PkAtMost => CensusFilter::PkAtMost { k: a.k, bound: t },
        };
        let report = census(a.x, &m, filter, &sieve)?;
        let disc = match discrepancy(&report) {
            Ok(d) => Some(d),
            Err(Error::EmptyCensus) => None,
            Err(e) => return Err(e),
        };
        for (&class, &count) in &report.counts {
            let dev = (report.total_coprime > 0).then(|| count as f64 / report.mean - 1.0);
            table.push(vec![
                q.to_string(),
                class.to_string(),
                count.to_string(),
                dev.map_or_else(String::new, num),
            ]);
        }
        results.push(json!({ "report": report, "discrepancy": disc }));
    }
    Ok(Artifact::new(
        "counts of sigma(n) mod q by unit class, with the largest relative deviation from the mean",
        results,
        table,
    ))
}

fn run_twisted_sum(a: &TwistedSumArgs, ctx: &Context) -> Result<Artifact> {
    let p = TwistedSumParams::new(a.x, a.y, a.z, a.beta)?;
    let r = twisted_sum_result(&p, &ctx.sieve(a.x)?)?;
    let mut table = Table::new(&[
        "x", "y", "exact_re", "exact_im", "main_re", "main_im", "ratio_re", "ratio_im", "above_floor",
    ]);
    table.push(lsd_row(&r));
    Ok(Artifact::new(
        "sum of beta^Omega(n) over Y-rough n <= X against its asymptotic main term",
        r,
        table,
    ))
}

fn lsd_row(r: &sigma_equid::lsd::TwistedSumResult) -> Vec<String> {
    vec![
        r.params.x.to_string(),
        num(r.params.y),
        num(r.exact.re),
        num(r.exact.im),
        num(r.main_term.re),
        num(r.main_term.im),
        r.ratio.map_or_else(String::new, |z| num(z.re)),
        r.ratio.map_or_else(String::new, |z| num(z.im)),
        r.hypotheses.above_floor.to_string(),
    ]
}

fn table_modulus(q: u64) -> Result<std::sync::Arc<Modulus>> {
    let m = Modulus::new(q)?;
    let work = m.phi().saturating_mul(m.phi());
    if work > TABLE_WORK_BUDGET {
        return Err(Error::BudgetExceeded {
            requested: work,
            budget: TABLE_WORK_BUDGET,
        });
    }
    Ok(m)
}

#[derive(Serialize)]
struct AverageRow {
    q: u64,
    index: u64,
    order: u64,
    conductor: u64,
    value: [f64; 2],
    brute: [f64; 2],
    abs_diff: f64,
}

fn rho_table(a: &TableArgs) -> Result<Artifact> {
    let mut table = Table::new(&[
        "q", "index", "order", "conductor", "rho_re", "rho_im", "brute_re", "brute_im", "abs_diff",
    ]);
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for &q in &a.q.0 {
        let m = table_modulus(q)?;
        for chi in enumerate_characters(&m) {
            let closed = rho_closed_form(&chi)?.value;
            let brute = rho_brute(&chi).value;
            let diff = (closed - brute).norm();
            if diff > AGREEMENT {
                failures.push(format!("rho mismatch at q={q}, character {}: {diff:e}", chi.index()));
            }
            table.push(vec![
                q.to_string(),
                chi.index().to_string(),
                chi.order().to_string(),
                chi.conductor().to_string(),
                num(closed.re),
                num(closed.im),
                num(brute.re),
                num(brute.im),
                num(diff),
            ]);
            rows.push(AverageRow {
                q,
                index: chi.index(),
                order: chi.order(),
                conductor: chi.conductor(),
                value: [closed.re, closed.im],
                brute: [brute.re, brute.im],
                abs_diff: diff,
            });
        }
    }
    let mut art = Artifact::new(
        "mean of chi(v+1) over units v mod q, closed form and direct sum",
        rows,
        table,
    );
    art.failures = failures;
    Ok(art)
}

fn eta_table(a: &TableArgs) -> Result<Artifact> {
    let mut table = Table::new(&[
        "q",
        "index",
        "order",
        "conductor",
        "exceptional_conductor",
        "eta_re",
        "eta_im",
        "eta_abs",
        "quarter_alpha_tilde",
        "abs_diff",
    ]);
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for &q in &a.q.0 {
        let m = table_modulus(q)?;
        let quarter = ratio_f64(m.alpha_tilde()) / 4.0;
        for chi in enumerate_characters(&m) {
            let factored = eta_factored(&chi).value;
            let brute = eta_brute(&chi).value;
            let diff = (factored - brute).norm();
            if diff > AGREEMENT {
                failures.push(format!("eta mismatch at q={q}, character {}: {diff:e}", chi.index()));
            }
            table.push(vec![
                q.to_string(),
                chi.index().to_string(),
                chi.order().to_string(),
                chi.conductor().to_string(),
                S_SET.contains(&chi.conductor()).to_string(),
                num(factored.re),
                num(factored.im),
                num(factored.norm()),
                num(quarter),
                num(diff),
            ]);
            rows.push(AverageRow {
                q,
                index: chi.index(),
                order: chi.order(),
                conductor: chi.conductor(),
                value: [factored.re, factored.im],
                brute: [brute.re, brute.im],
                abs_diff: diff,
            });
        }
    }
    let mut art = Artifact::new(
        "mean of chi(v^2+v+1) over units v mod q, factored form and direct sum",
        rows,
        table,
    );
    art.failures = failures;
    Ok(art)
}

fn s_set(a: &SSetArgs) -> Result<Artifact> {
    let m = a.q.map(Modulus::new).transpose()?;
    let report = verify_s_set(m.as_deref());
    let mut table = Table::new(&["q", "normalizer", "primitive_count", "max_normalized", "attains_quarter"]);
    for e in &report.entries {
        table.push(vec![
            e.q.to_string(),
            e.normalizer.to_string(),
            e.primitive_count.to_string(),
            num(e.max_normalized),
            e.attains_quarter.to_string(),
        ]);
    }
    let failures = if report.holds {
        Vec::new()
    } else {
        vec![format!("normalized maximum {} exceeds 1/4", report.global_max)]
    };
    let mut art = Artifact::new(
        "largest normalized real part of primitive sums of psi(v^2+v+1) over the exceptional conductors",
        report,
        table,
    );
    art.failures = failures;
    Ok(art)
}

fn weil(a: &WeilArgs) -> Result<Artifact> {
    let mut table = Table::new(&["ell", "e", "primitive_count", "max_abs", "max_ratio", "holds"]);
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for &ell in &a.ell.0 {
        let r = weil_clz_check(ell, a.e)?;
        if !r.holds {
            failures.push(format!("ell={ell}, e={}: max ratio {}", a.e, r.max_ratio));
        }
        table.push(vec![
            ell.to_string(),
            a.e.to_string(),
            r.primitive_count.to_string(),
            num(r.max_abs),
            num(r.max_ratio),
            r.holds.to_string(),
        ]);
        reports.push(r);
    }
    let mut art = Artifact::new(
        "largest |sum of chi(v^2+v+1) mod ell^e| over primitive chi, relative to ell^(e/2)",
        reports,
        table,
    );
    art.failures = failures;
    Ok(art)
}

fn lsd_scan(a: &LsdScanArgs, ctx: &Context) -> Result<Artifact> {
    let top = a.x_grid.0.iter().copied().max().unwrap_or(1);
    let results = convergence_scan(a.beta, &a.x_grid.0, a.y, &ctx.sieve(top)?)?;
    let mut table = Table::new(&[
        "x", "y", "exact_re", "exact_im", "main_re", "main_im", "ratio_re", "ratio_im", "above_floor",
    ]);
    for r in &results {
        table.push(lsd_row(r));
    }
    Ok(Artifact::new(
        "ratio of the rough sum of beta^Omega(n) to its main term along a grid of X",
        results,
        table,
    ))
}

fn g_one(a: &GOneArgs) -> Result<Artifact> {
    let r = g_one_euler_product(a.y, a.beta, a.p_max)?;
    let mut table = Table::new(&[
        "y", "p_max", "value_re", "value_im", "partial_re", "partial_im", "primes_used",
    ]);
    table.push(vec![
        num(a.y),
        a.p_max.to_string(),
        num(r.value.re),
        num(r.value.im),
        num(r.partial.re),
        num(r.partial.im),
        r.primes_used.to_string(),
    ]);
    Ok(Artifact::new(
        "Euler product G(1) truncated at p_max, with the omitted tail estimated",
        r,
        table,
    ))
}

fn run_v_count(a: &VCountArgs) -> Result<Artifact> {
    let mut table = Table::new(&["q", "w", "arity", "count"]);
    let mut counts = Vec::new();
    for &q in &a.q.0 {
        let m = Modulus::new(q)?;
        let ws: Vec<u64> = match a.w {
            Some(w) => vec![w],
            None => m.units().collect(),
        };
        for w in ws {
            let c = v_count(&m, w, a.arity)?;
            table.push(vec![c.q.to_string(), c.w.to_string(), c.arity.to_string(), c.count.to_string()]);
            counts.push(c);
        }
    }
    Ok(Artifact::new(
        "unit tuples with product of (v^2+v+1) congruent to w mod q",
        counts,
        table,
    ))
}

fn lift(a: &LiftArgs) -> Result<Artifact> {
    let mut table = Table::new(&["ell", "target", "count", "degenerate_pairs", "count_over_ell_squared"]);
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for &ell in &a.ell.0 {
        let r = lift_count_mod_ell_squared(ell)?;
        if r.count < 1 {
            failures.push(format!("no solutions mod {ell}^2"));
        }
        table.push(vec![
            ell.to_string(),
            r.target.to_string(),
            r.count.to_string(),
            r.degenerate_pairs.to_string(),
            num(r.count as f64 / (ell * ell) as f64),
        ]);
        reports.push(r);
    }
    let mut art = Artifact::new(
        "unit pairs mod ell^2 with (v1^2+v1+1)(v2^2+v2+1) congruent to 9/16",
        reports,
        table,
    );
    art.failures = failures;
    Ok(art)
}

fn curves(a: &CurveArgs) -> Result<Artifact> {
    let curve = match a.curve {
        CurveKind::G => Curve::G,
        CurveKind::H => Curve::H { w: a.w },
    };
    let mut table = Table::new(&["ell", "count", "deviation", "normalized_deviation", "in_weil_range"]);
    let mut counts = Vec::new();
    for &ell in &a.ell.0 {
        let c = curve_point_count(ell, curve)?;
        table.push(vec![
            ell.to_string(),
            c.count.to_string(),
            c.deviation.to_string(),
            num(c.normalized_deviation),
            c.in_weil_range.to_string(),
        ]);
        counts.push(c);
    }
    Ok(Artifact::new("affine points over F_ell of the two-factor curve", counts, table))
}

fn witness(r: WitnessReport) -> Result<Artifact> {
    let mut table = Table::new(&[
        "q",
        "witness_class",
        "class_count",
        "witness_count",
        "direct_count",
        "census_class_count",
        "mean_count",
        "ratio",
    ]);
    table.push(vec![
        r.q.to_string(),
        r.witness_class.to_string(),
        r.class_count.to_string(),
        r.witness_count.to_string(),
        r.direct_count.to_string(),
        r.census_class_count.map_or_else(String::new, |c| c.to_string()),
        r.mean_count.map_or_else(String::new, num),
        r.ratio.map_or_else(String::new, num),
    ]);
    let failures = if r.witness_count == r.direct_count {
        Vec::new()
    } else {
        vec![format!(
            "class-by-class count {} differs from direct count {}",
            r.witness_count, r.direct_count
        )]
    };
    let mut art = Artifact::new(
        "constructed n <= x with sigma(n) in the favoured class, counted by CRT classes and directly",
        r,
        table,
    );
    art.failures = failures;
    Ok(art)
}

#[derive(Serialize)]
struct PrimeRecip {
    x: u64,
    q: u64,
    coefficients: Vec<i64>,
    sum: f64,
    log_log_x: f64,
    ratio: Option<f64>,
    density: String,
    density_value: f64,
}

fn prime_recip(a: &PrimeRecipArgs, ctx: &Context) -> Result<Artifact> {
    let f: PolynomialSpec = a.poly.parse()?;
    let m = Modulus::new(a.q)?;
    let sum = prime_reciprocal_sum(&f, &m, a.x, &ctx.sieve(a.x)?)?;
    let llx = (a.x as f64).ln().ln();
    let density = alpha_f(&f, &m);
    let r = PrimeRecip {
        x: a.x,
        q: a.q,
        coefficients: f.coeffs().to_vec(),
        sum,
        log_log_x: llx,
        ratio: (a.x >= 3).then(|| sum / llx),
        density: density.to_string(),
        density_value: ratio_f64(density),
    };
    let mut table = Table::new(&["x", "q", "sum", "log_log_x", "ratio", "density"]);
    table.push(vec![
        a.x.to_string(),
        a.q.to_string(),
        num(sum),
        num(llx),
        r.ratio.map_or_else(String::new, num),
        num(r.density_value),
    ]);
    Ok(Artifact::new(
        "sum of 1/p over primes p <= x with F(p) coprime to q, against log log x",
        r,
        table,
    ))
}
