use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use sigma_equid::arith::modular::is_prime;

/// Longest list a range argument may expand to.
const MAX_LIST: usize = 100_000;

#[derive(Debug, Parser)]
#[command(
    name = "sigma-equid",
    version,
    about = "Exact experiments on the distribution of σ(n) over residue classes",
    after_help = "Integers accept scientific notation (1e6). Lists take commas and \
                  inclusive ranges: 5,7,11 or 3..=99."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format [default: json, or csv for table-shaped subcommands]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the artifact to this file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads; 0 uses one per core. Never affects the output.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,

    /// Memory cap in bytes for sieve tables
    #[arg(long, global = true, env = "SIGMA_EQUID_MEM_CAP", value_parser = parse_count)]
    pub mem_cap: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Count σ(n) mod q over the unit classes for n ≤ x
    Census(CensusArgs),
    /// Σ β^Ω(n) over Y-rough n ≤ X against its asymptotic main term
    TwistedSum(TwistedSumArgs),
    /// ρ_χ for every character mod q, closed form against brute force
    RhoTable(TableArgs),
    /// η_χ for every character mod q, factored form against brute force
    EtaTable(TableArgs),
    /// Normalized maxima of the exceptional-conductor sums
    VerifySSet(SSetArgs),
    /// Square-root cancellation of primitive sums of χ(v² + v + 1) mod ℓ^e
    WeilCheck(WeilArgs),
    /// Exact rough sums against the main term along a grid of X
    LsdScan(LsdScanArgs),
    /// Truncated Euler product for G(1) with tail correction
    GOne(GOneArgs),
    /// Unit solutions of ∏ (v_j² + v_j + 1) ≡ w mod q
    VCount(VCountArgs),
    /// Two-factor solutions mod ℓ² at the class 9/16
    LiftCount(LiftArgs),
    /// Affine points over 𝔽_ℓ of the two-factor curves
    CurveCount(CurveArgs),
    /// Squares of two primes landing in an over-represented class mod 2∏ℓ²
    WitnessEven(WitnessArgs),
    /// Prime squares landing in the class 3 mod 2∏ℓ
    WitnessSqfree(WitnessArgs),
    /// Σ 1/p over p ≤ x with F(p) coprime to q, against log log x
    PrimeRecip(PrimeRecipArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Census(_) => "census",
            Command::TwistedSum(_) => "twisted-sum",
            Command::RhoTable(_) => "rho-table",
            Command::EtaTable(_) => "eta-table",
            Command::VerifySSet(_) => "verify-s-set",
            Command::WeilCheck(_) => "weil-check",
            Command::LsdScan(_) => "lsd-scan",
            Command::GOne(_) => "g-one",
            Command::VCount(_) => "v-count",
            Command::LiftCount(_) => "lift-count",
            Command::CurveCount(_) => "curve-count",
            Command::WitnessEven(_) => "witness-even",
            Command::WitnessSqfree(_) => "witness-sqfree",
            Command::PrimeRecip(_) => "prime-recip",
        }
    }

    pub fn default_format(&self) -> Format {
        match self {
            Command::RhoTable(_)
            | Command::EtaTable(_)
            | Command::LsdScan(_)
            | Command::LiftCount(_)
            | Command::CurveCount(_) => Format::Csv,
            _ => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterKind {
    /// Every n ≤ x
    All,
    /// Only n coprime to q
    CoprimeOnly,
    /// At least k prime factors above the threshold, i.e. P_k(n) > t
    PkAbove,
    /// Fewer than k prime factors above the threshold, i.e. P_k(n) ≤ t
    PkAtMost,
}

#[derive(Debug, Args, Serialize)]
pub struct CensusArgs {
    /// Upper end of the scan
    #[arg(long, value_parser = parse_count)]
    pub x: u64,
    /// Modulus, or a list of moduli
    #[arg(long, value_parser = parse_list)]
    pub q: IntList,
    #[arg(long, value_enum, default_value = "all")]
    pub filter: FilterKind,
    /// k for the P_k filters
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Threshold for the P_k filters [default: q]
    #[arg(long, value_parser = parse_count)]
    pub threshold: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct TwistedSumArgs {
    #[arg(long, value_parser = parse_count)]
    pub x: u64,
    /// Roughness level: only n without prime factors up to Y
    #[arg(long = "y", alias = "Y", value_parser = parse_real)]
    pub y: f64,
    /// Optional smoothness level, used only for the hypothesis flags
    #[arg(long = "z", alias = "Z", value_parser = parse_real)]
    pub z: Option<f64>,
    /// Complex twist with |β| ≤ 1, e.g. 0.5 or 0.3+0.4i
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub beta: Complex64,
}

#[derive(Debug, Args, Serialize)]
pub struct TableArgs {
    /// Modulus, or a list of moduli
    #[arg(long, value_parser = parse_list)]
    pub q: IntList,
}

#[derive(Debug, Args, Serialize)]
pub struct SSetArgs {
    /// Only examine the exceptional conductors dividing q
    #[arg(long, value_parser = parse_count)]
    pub q: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct WeilArgs {
    /// Primes ℓ ≥ 5; ranges keep only their primes
    #[arg(long, value_parser = parse_prime_list)]
    pub ell: IntList,
    #[arg(long, default_value_t = 2)]
    pub e: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct LsdScanArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub beta: Complex64,
    #[arg(long = "y", alias = "Y", value_parser = parse_real)]
    pub y: f64,
    /// Values of X, e.g. 1e5,1e6,1e7
    #[arg(long, value_parser = parse_list)]
    pub x_grid: IntList,
}

#[derive(Debug, Args, Serialize)]
pub struct GOneArgs {
    #[arg(long = "y", alias = "Y", value_parser = parse_real)]
    pub y: f64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub beta: Complex64,
    /// Largest prime in the truncated product
    #[arg(long, value_parser = parse_count, default_value = "1000000")]
    pub p_max: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct VCountArgs {
    #[arg(long, value_parser = parse_list)]
    pub q: IntList,
    /// Target unit w [default: every unit mod q]
    #[arg(long, value_parser = parse_count)]
    pub w: Option<u64>,
    /// Number of factors, 2 or 3
    #[arg(long, default_value_t = 2)]
    pub arity: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct LiftArgs {
    /// Primes ℓ ≥ 5; ranges keep only their primes
    #[arg(long, value_parser = parse_prime_list)]
    pub ell: IntList,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    /// (X² + 3)(Y² + 3) = 9
    G,
    /// (X² + X + 1)(Y² + Y + 1) = w
    H,
}

#[derive(Debug, Args, Serialize)]
pub struct CurveArgs {
    /// Primes ℓ; ranges keep only their primes
    #[arg(long, value_parser = parse_prime_list)]
    pub ell: IntList,
    #[arg(long, value_enum, default_value = "g")]
    pub curve: CurveKind,
    /// Right-hand side for the H curve
    #[arg(long, value_parser = parse_count, default_value = "1")]
    pub w: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct WitnessArgs {
    /// The modulus uses the primes 5 ≤ ℓ ≤ Y
    #[arg(long = "y", alias = "Y", value_parser = parse_real)]
    pub y: f64,
    #[arg(long, value_parser = parse_count)]
    pub x: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct PrimeRecipArgs {
    #[arg(long, value_parser = parse_count)]
    pub x: u64,
    #[arg(long, value_parser = parse_count)]
    pub q: u64,
    /// Coefficients of F, constant term first
    #[arg(long, default_value = "1,1,1")]
    pub poly: String,
}

/// A list of integers given as `a,b,c` with inclusive ranges `lo..=hi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct IntList(pub Vec<u64>);

/// A nonnegative integer, optionally in scientific notation.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let s = s.trim().replace('_', "");
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if !v.is_finite() || v < 0.0 || v.fract() != 0.0 || v > 9.007_199_254_740_992e15 {
        return Err(format!("{s:?} is not an exactly representable nonnegative integer"));
    }
    Ok(v as u64)
}

pub fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("{s:?} is not a number"))?;
    if !v.is_finite() {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(v)
}

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let v: Complex64 = s
        .trim()
        .parse()
        .map_err(|_| format!("{s:?} is not a complex number (try 0.5 or 0.3+0.4i)"))?;
    if !v.is_finite() {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(v)
}

fn parse_items(s: &str, keep_in_range: impl Fn(u64) -> bool) -> Result<IntList, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        if let Some((lo, hi)) = item.split_once("..=") {
            let (lo, hi) = (parse_count(lo)?, parse_count(hi)?);
            if hi < lo {
                return Err(format!("empty range {item}"));
            }
            if hi - lo >= MAX_LIST as u64 {
                return Err(format!("range {item} is longer than {MAX_LIST}"));
            }
            out.extend((lo..=hi).filter(|&v| keep_in_range(v)));
        } else if item.contains("..") {
            return Err(format!("ranges are written lo..=hi, got {item}"));
        } else {
            out.push(parse_count(item)?);
        }
        if out.len() > MAX_LIST {
            return Err(format!("list is longer than {MAX_LIST}"));
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(IntList(out))
}

pub fn parse_list(s: &str) -> Result<IntList, String> {
    parse_items(s, |_| true)
}

pub fn parse_prime_list(s: &str) -> Result<IntList, String> {
    parse_items(s, is_prime)
}
