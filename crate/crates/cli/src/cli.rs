use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "congrlab", version, about = "Eisenstein-cusp congruences and non-divisibility statistics")]
pub struct Cli {
    /// Also print a human-readable table on stderr.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Print a run-metadata envelope (command, version, threads, timing) on stderr.
    #[arg(long, global = true)]
    pub meta: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Weight, level and Atkin-Lehner sign.
#[derive(Debug, Args, Clone, Copy)]
pub struct LevelArgs {
    #[arg(short = 'k', long)]
    pub k: i64,
    #[arg(short = 'p', long)]
    pub p: u64,
    #[arg(short = 'e', long = "eps", allow_negative_numbers = true)]
    pub eps: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoremArg {
    Equivalence,
    Relaxed,
    Sufficient,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    B,
    C,
}

/// The multiplicative function `sigma_m` (or `sigma_{k-1}`) modulo `ell`, optionally with a level part.
#[derive(Debug, Args, Clone)]
pub struct NonDivArgs {
    #[arg(long)]
    pub ell: u64,
    /// Divisor-power exponent m of sigma_m.
    #[arg(short = 'm', long, conflicts_with = "k", required_unless_present = "k")]
    pub m: Option<u64>,
    /// Weight k, meaning m = k - 1.
    #[arg(short = 'k', long)]
    pub k: Option<u64>,
    /// Level part as `P,EPS`, e.g. `11,1`.
    #[arg(long, value_parser = parse_level, allow_hyphen_values = true)]
    pub level: Option<(u64, i64)>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Congruence moduli N and M with their factorizations.
    Moduli(LevelArgs),
    /// Check the hypotheses of the congruence theorems for a prime ell.
    Hypotheses {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long)]
        ell: u64,
        #[arg(long, value_enum, default_value = "equivalence")]
        theorem: TheoremArg,
    },
    /// Build the explicit cusp form of case (b) or (c) and certify it modulo N.
    Construct {
        #[arg(long, value_enum)]
        case: CaseArg,
        #[command(flatten)]
        level: LevelArgs,
        /// Number of coefficients; defaults to 2 * Sturm + 11.
        #[arg(long)]
        prec: Option<usize>,
        /// Include the coefficients of f in the output.
        #[arg(long)]
        series: bool,
    },
    /// Verify a congruence between two rational q-expansions.
    Verify {
        /// Newform fixture, compared against its Eisenstein series unless --rhs is given.
        #[arg(long, conflicts_with = "lhs")]
        fixture: Option<String>,
        /// Left series spec: fixture:NAME, eta:D^R,..., eisenstein:K[,P,EPS], json:PATH.
        #[arg(long, requires = "rhs")]
        lhs: Option<String>,
        #[arg(long)]
        rhs: Option<String>,
        #[arg(long)]
        modulus: String,
        /// Last index compared; defaults to the largest available.
        #[arg(long)]
        bound: Option<usize>,
        /// Precision for generated series; defaults to bound + 1.
        #[arg(long)]
        prec: Option<usize>,
        /// Attach the Sturm bound of weight K and level P, as `K,P`.
        #[arg(long, value_parser = parse_pair)]
        sturm: Option<(u64, u64)>,
    },
    /// Verify a number-field newform against its Eisenstein series modulo every prime above ell.
    VerifyNf {
        #[arg(long)]
        fixture: String,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Check that E_{k,p}^eps is a U_p eigenform modulo ell.
    UpEigen {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 200)]
        prec: usize,
    },
    /// Count n <= x with ell not dividing f(n), with Landau and Ramanujan approximations.
    Sieve {
        #[command(flatten)]
        params: NonDivArgs,
        /// Count bounds; repeatable, scientific notation accepted.
        #[arg(short = 'x', long = "x", value_parser = parse_count, required = true)]
        xs: Vec<u64>,
        /// Constant C; fitted by least squares when omitted.
        #[arg(long)]
        constant: Option<f64>,
        /// Euler-Kronecker constant for the second-order approximation.
        #[arg(long)]
        gamma: Option<f64>,
        /// Also report the density of primes p1 <= max x with ell | sigma_r(p1).
        #[arg(long)]
        density: bool,
    },
    /// Local Euler factor at p1 with its zero pattern.
    EulerFactor {
        #[command(flatten)]
        params: NonDivArgs,
        #[arg(long)]
        p1: u64,
        #[arg(long, default_value_t = 12)]
        max_exp: usize,
    },
    /// Level-prime correction to the Euler-Kronecker constant, with and without ln p.
    GammaDelta {
        #[arg(short = 'p', long)]
        p: u64,
        #[arg(short = 'r', long)]
        r: u64,
        #[arg(long)]
        ell: u64,
        /// Base constant the correction is added to.
        #[arg(long, default_value_t = congrlab::asymptotics::GAMMA_1_37)]
        gamma_base: f64,
        /// Also look up the tabulated constant for this ell and report which approximation wins.
        #[arg(long)]
        table_ell: Option<u64>,
    },
    /// Dickman rho, the root u1 of 4 u rho(u) = 1, or a CSV dump of the table.
    Rho {
        #[arg(short = 'u', long, required_unless_present_any = ["u1", "dump"])]
        u: Option<f64>,
        #[arg(long)]
        u1: bool,
        /// Write the table as CSV (u,rho) to this path.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long, default_value_t = 10.0)]
        u_max: f64,
    },
    /// Psi(x, y), the count of y-friable n <= x.
    Psi {
        #[arg(short = 'x', long, value_parser = parse_count)]
        x: u64,
        #[arg(short = 'y', long, value_parser = parse_count)]
        y: u64,
    },
    /// Primes p <= x with P+(p + s) >= p^(1/u).
    Shifted {
        #[arg(short = 'x', long, value_parser = parse_count)]
        x: u64,
        #[arg(short = 's', long, allow_negative_numbers = true)]
        s: i64,
        #[arg(short = 'u', long, default_value_t = 2.0)]
        u: f64,
    },
    /// Lower bounds for the coefficient-field degree d_k(p).
    DegreeBound {
        #[arg(short = 'k', long)]
        k: u64,
        #[arg(short = 'p', long)]
        p: u64,
    },
    /// Primes p <= bound with P+(p^2 - 1) <= 3.
    SpecialPrimes {
        #[arg(long, value_parser = parse_count)]
        bound: u64,
    },
    /// Count p <= X with P+(p^2 - 1) <= x against 3 * 7^(1 + 2 pi(x)).
    Evertse {
        #[arg(short = 'X', long = "big-x", value_parser = parse_count)]
        big_x: u64,
        #[arg(short = 'x', long, value_parser = parse_count)]
        x: u64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Moduli(_) => "moduli",
            Command::Hypotheses { .. } => "hypotheses",
            Command::Construct { .. } => "construct",
            Command::Verify { .. } => "verify",
            Command::VerifyNf { .. } => "verify-nf",
            Command::UpEigen { .. } => "up-eigen",
            Command::Sieve { .. } => "sieve",
            Command::EulerFactor { .. } => "euler-factor",
            Command::GammaDelta { .. } => "gamma-delta",
            Command::Rho { .. } => "rho",
            Command::Psi { .. } => "psi",
            Command::Shifted { .. } => "shifted",
            Command::DegreeBound { .. } => "degree-bound",
            Command::SpecialPrimes { .. } => "special-primes",
            Command::Evertse { .. } => "evertse",
        }
    }
}

/// Accepts `100000`, `1e5` or `2.5e6` as long as the value is a whole number.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if f < 0.0 || f.fract() != 0.0 || f > 1e18 {
        return Err(format!("{s:?} is not a non-negative whole number"));
    }
    Ok(f as u64)
}

fn parse_level(s: &str) -> Result<(u64, i64), String> {
    let (p, e) = s.split_once(',').ok_or("expected P,EPS")?;
    let p = p.trim().parse().map_err(|_| format!("bad prime {p:?}"))?;
    let e = e.trim().trim_start_matches('+').parse().map_err(|_| format!("bad sign {e:?}"))?;
    Ok((p, e))
}

fn parse_pair(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once(',').ok_or("expected A,B")?;
    Ok((
        a.trim().parse().map_err(|_| format!("bad number {a:?}"))?,
        b.trim().parse().map_err(|_| format!("bad number {b:?}"))?,
    ))
}
