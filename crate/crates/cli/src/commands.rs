use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use pseudomagic::counting::{self, LineConstraint, MatrixCountSpec, Partition};
use pseudomagic::ehrhart::{self, CountingPolynomial};
use pseudomagic::rmt::{self, McConfig, MomentEstimate};
use pseudomagic::{euler, genfun, zeta, Complex64, Error, Result};

use crate::output::{exact, float, Output};

#[derive(Parser, Debug)]
#[command(
    name = "pseudomagic",
    version,
    about = "Magic squares, pseudomoments and random-matrix moments"
)]
pub struct Cli {
    #[command(flatten)]
    pub globals: Globals,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Globals {
    /// Emit a JSON record instead of plain text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for random sampling.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads for Monte Carlo and quadrature.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Cap on tuples, series terms or brute-force grid points.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Also write the JSON record to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Record wall-clock time in the metadata (breaks byte-identical output).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact matrix counts.
    #[command(subcommand)]
    Count(CountCmd),
    /// Counting polynomials, h-vectors and volumes.
    #[command(subcommand)]
    Ehrhart(EhrhartCmd),
    /// Generating-function cross-checks.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Pseudomoments of zeta partial sums.
    #[command(subcommand)]
    Zeta(ZetaCmd),
    /// Arithmetic Euler products.
    #[command(subcommand)]
    Euler(EulerCmd),
    /// Haar unitary matrices and secular coefficients.
    #[command(subcommand)]
    Rmt(RmtCmd),
}

#[derive(Subcommand, Debug)]
pub enum CountCmd {
    /// Tables with row sums ROWS and column sums COLS.
    Contingency {
        #[arg(long)]
        rows: String,
        #[arg(long)]
        cols: String,
    },
    /// k x k matrices with all line sums equal to j.
    Magic {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        j: u64,
    },
    /// k x k matrices with all line sums at most l.
    Pseudomagic {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: u64,
    },
    /// Square matrices with row and column i summing to at most bound i.
    PseudomagicMulti {
        #[arg(long)]
        bounds: String,
    },
    /// Symmetric k x k matrices, even diagonal, line sums equal to j.
    SymEven {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        j: u64,
    },
    /// Symmetric k x k matrices, even diagonal, line sums at most l.
    SymEvenBounded {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: u64,
    },
    /// Exhaustive enumeration; constraints like "=2,<=1,3".
    Brute {
        #[arg(long)]
        rows: String,
        #[arg(long)]
        cols: String,
        #[arg(long)]
        symmetric: bool,
        #[arg(long)]
        even_diagonal: bool,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Magic,
    Pseudomagic,
    SymEvenBounded,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polytope {
    #[value(alias = "birkhoff")]
    Magic,
    #[value(alias = "substochastic")]
    Pseudomagic,
}

#[derive(Subcommand, Debug)]
pub enum EhrhartCmd {
    Poly {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        k: usize,
    },
    Hvector {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        k: usize,
    },
    /// Check H_k(-1) = ... = H_k(-(k-1)) = 0.
    Zeros {
        #[arg(long)]
        k: usize,
    },
    /// Check H_k(-k-j) = (-1)^(k-1) H_k(j).
    Reciprocity {
        #[arg(long)]
        k: usize,
    },
    Volume {
        #[arg(long, value_enum)]
        family: Polytope,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum OracleCmd {
    /// G_k(l) as a coefficient of the master series.
    Contour {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: u32,
    },
    /// N_{alpha beta} as a coefficient of 1/prod(1 - w_i z_j).
    Expansion {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        /// Largest exponent kept; defaults to the largest part.
        #[arg(long)]
        cap: Option<u32>,
    },
}

#[derive(Args, Debug)]
pub struct ProfileArgs {
    #[arg(long, required_unless_present = "bounds")]
    k: Option<usize>,
    #[arg(long, required_unless_present = "bounds")]
    x: Option<u64>,
    /// Per-factor bounds "X1,X2,..." instead of k copies of x.
    #[arg(long, conflicts_with_all = ["k", "x"])]
    bounds: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum ZetaCmd {
    /// Restricted divisor counts d_{k,X}(n).
    Profile(ProfileArgs),
    /// Exact mean value sum_n d_{k,X}(n)^2 / n.
    Mv(ProfileArgs),
    /// The same mean value by direct pairing of tuples.
    Pairs {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        x: u64,
    },
    /// Trapezoid time average of |S_X(t)|^{2k} over [0, T].
    Integrate {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        x: u64,
        #[arg(long, default_value_t = 1e5)]
        t: f64,
        #[arg(long, default_value_t = 2_000_000)]
        steps: u64,
    },
    /// a_k G_k(log X) and its leading term.
    Predict {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        x: f64,
        #[arg(long, default_value_t = 100_000)]
        primes: u64,
        #[arg(long, default_value_t = 64)]
        terms: u32,
    },
    /// Exact mean values against the prediction for several X.
    Ladder {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<u64>,
        #[arg(long, default_value_t = 100_000)]
        primes: u64,
        #[arg(long, default_value_t = 64)]
        terms: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum EulerCmd {
    A {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 100_000)]
        primes: u64,
        #[arg(long, default_value_t = 64)]
        terms: u32,
    },
    B {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 100_000)]
        primes: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum RmtCmd {
    /// One Haar unitary matrix.
    Sample {
        #[arg(long)]
        n: usize,
    },
    /// Secular coefficients of one Haar unitary matrix.
    Secular {
        #[arg(long)]
        n: usize,
    },
    /// E |Sc_j|^{2k}.
    Moment {
        #[arg(long)]
        j: usize,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// E prod Sc_j^{a_j} conj(Sc_j)^{b_j}.
    Mixed {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// E |P_{M,l}(e^{i theta})|^{2k}.
    Truncated {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Exact E |P_M(z)|^{2k} over U(N).
    Exact {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
    },
    /// prod_{j<k} j!/(j+k)!.
    Gfactor {
        #[arg(long)]
        k: u64,
    },
}

pub fn run(cli: &Cli) -> Result<Output> {
    let g = &cli.globals;
    match &cli.command {
        Command::Count(c) => run_count(c, g),
        Command::Ehrhart(c) => run_ehrhart(c),
        Command::Oracle(c) => run_oracle(c, g),
        Command::Zeta(c) => run_zeta(c, g),
        Command::Euler(c) => run_euler(c),
        Command::Rmt(c) => run_rmt(c, g),
    }
}

fn budget(g: &Globals, default: u128) -> u128 {
    g.budget.map_or(default, u128::from)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad {what} entry {p:?}")))
        })
        .collect()
}

fn run_count(cmd: &CountCmd, g: &Globals) -> Result<Output> {
    let out = match cmd {
        CountCmd::Contingency { rows, cols } => {
            let (r, c): (Partition, Partition) = (rows.parse()?, cols.parse()?);
            Output::exact(counting::count_contingency(&r, &c))
                .meta("rows", r.to_string())
                .meta("cols", c.to_string())
        }
        CountCmd::Magic { k, j } => Output::exact(counting::count_magic(*k, *j)),
        CountCmd::Pseudomagic { k, l } => Output::exact(counting::count_pseudomagic(*k, *l)),
        CountCmd::PseudomagicMulti { bounds } => {
            let b: Vec<u64> = parse_list(bounds, "bound")?;
            Output::exact(counting::count_pseudomagic_multi(&b))
        }
        CountCmd::SymEven { k, j } => Output::exact(counting::count_symmetric_even(*k, *j)),
        CountCmd::SymEvenBounded { k, l } => {
            Output::exact(counting::count_symmetric_even_bounded(*k, *l))
        }
        CountCmd::Brute {
            rows,
            cols,
            symmetric,
            even_diagonal,
        } => {
            let mut spec = MatrixCountSpec::new(
                parse_list::<LineConstraint>(rows, "row constraint")?,
                parse_list::<LineConstraint>(cols, "column constraint")?,
            );
            spec.symmetric = *symmetric;
            spec.even_diagonal = *even_diagonal;
            let cap = budget(g, counting::DEFAULT_BRUTE_FORCE_CAP);
            Output::exact(counting::brute_force_count(&spec, cap)?).meta("budget", cap.to_string())
        }
    };
    Ok(out)
}

fn family_polynomial(family: Family, k: usize) -> Result<CountingPolynomial> {
    match family {
        Family::Magic => ehrhart::magic_polynomial(k),
        Family::Pseudomagic => ehrhart::pseudomagic_polynomial(k),
        Family::SymEvenBounded => Err(Error::invalid(
            "sym-even-bounded is a quasi-polynomial; only `ehrhart poly` supports it",
        )),
    }
}

fn coefficient_table(p: &CountingPolynomial) -> Vec<Value> {
    p.coefficients().iter().map(exact).collect()
}

fn run_ehrhart(cmd: &EhrhartCmd) -> Result<Output> {
    let out = match cmd {
        EhrhartCmd::Poly {
            family: Family::SymEvenBounded,
            k,
        } => {
            let q = ehrhart::symmetric_even_quasi_polynomial(*k)?;
            let rows = q
                .constituents
                .iter()
                .enumerate()
                .map(|(r, c)| vec![Value::from(r), exact(c), Value::Array(coefficient_table(c))])
                .collect();
            Output::table(&["residue", "polynomial", "coefficients"], rows)
                .meta("period", q.period())
                .meta("leading_agree", q.leading_coefficients_agree())
        }
        EhrhartCmd::Poly { family, k } => {
            let p = family_polynomial(*family, *k)?;
            let mut out = Output::exact(&p);
            out.value = Value::Array(coefficient_table(&p));
            out.meta("degree", p.degree())
                .meta("polynomial", p.to_string())
        }
        EhrhartCmd::Hvector { family, k } => {
            let h = ehrhart::h_vector(&family_polynomial(*family, *k)?)?;
            let entries: Vec<String> = h.numerator().iter().map(ToString::to_string).collect();
            let mut out = Output::exact(entries.join(","));
            out.value = Value::Array(entries.into_iter().map(Value::String).collect());
            out.meta("palindromic", h.is_palindromic())
        }
        EhrhartCmd::Zeros { k } => {
            let p = ehrhart::magic_polynomial(*k)?;
            Output::boolean(ehrhart::check_trivial_zeros(&p, *k))
        }
        EhrhartCmd::Reciprocity { k } => {
            let p = ehrhart::magic_polynomial(*k)?;
            Output::boolean(ehrhart::check_reciprocity(&p, *k))
        }
        EhrhartCmd::Volume { family, k } => match family {
            Polytope::Magic => {
                Output::exact(ehrhart::birkhoff_volume(*k)?).meta("polytope", "birkhoff")
            }
            Polytope::Pseudomagic => {
                Output::exact(ehrhart::substochastic_volume(*k)?).meta("polytope", "substochastic")
            }
        },
    };
    Ok(out)
}

fn run_oracle(cmd: &OracleCmd, g: &Globals) -> Result<Output> {
    let b = budget(g, genfun::DEFAULT_TERM_BUDGET);
    let out = match cmd {
        OracleCmd::Contour { k, l } => Output::exact(genfun::contour_coefficient(*k, *l, b)?).meta(
            "direct",
            counting::count_pseudomagic(*k, u64::from(*l)).to_string(),
        ),
        OracleCmd::Expansion { alpha, beta, cap } => {
            let (a, bt): (Partition, Partition) = (alpha.parse()?, beta.parse()?);
            let largest = a
                .parts()
                .iter()
                .chain(bt.parts())
                .copied()
                .max()
                .unwrap_or(0);
            let cap = cap.unwrap_or(u32::try_from(largest).unwrap_or(u32::MAX));
            Output::exact(genfun::expansion_count(&a, &bt, cap, b)?)
                .meta("direct", counting::count_contingency(&a, &bt).to_string())
                .meta("cap", cap)
        }
    };
    Ok(out.meta("budget", b.to_string()))
}

fn profile_from(args: &ProfileArgs, b: u128) -> Result<zeta::DivisorProfile> {
    match (&args.bounds, args.k, args.x) {
        (Some(bounds), _, _) => zeta::divisor_profile(&parse_list::<u64>(bounds, "bound")?, b),
        (None, Some(k), Some(x)) => zeta::uniform_profile(k, x, b),
        _ => Err(Error::invalid("give either --k and --x or --bounds")),
    }
}

fn a_factor(k: usize, primes: u64, terms: u32) -> Result<euler::EulerFactorResult> {
    let k = u32::try_from(k).map_err(|_| Error::invalid("k too large"))?;
    euler::arithmetic_factor_a(k, primes, terms)
}

fn run_zeta(cmd: &ZetaCmd, g: &Globals) -> Result<Output> {
    let b = budget(g, zeta::DEFAULT_TUPLE_BUDGET);
    let out = match cmd {
        ZetaCmd::Profile(args) => {
            let profile = profile_from(args, b)?;
            let rows = profile
                .counts()
                .iter()
                .map(|(n, c)| vec![exact(n), exact(c)])
                .collect();
            Output::table(&["n", "count"], rows)
                .meta("support", profile.support())
                .meta("total", profile.total().to_string())
                .meta("budget", b.to_string())
        }
        ZetaCmd::Mv(args) => {
            let profile = profile_from(args, b)?;
            let value = zeta::mv_pseudomoment(&profile);
            Output::exact(&value)
                .meta("approx", float(approx_f64(&value)))
                .meta("support", profile.support())
                .meta("budget", b.to_string())
        }
        ZetaCmd::Pairs { k, x } => {
            Output::exact(zeta::pair_sum_oracle(*k, *x, b)?).meta("budget", b.to_string())
        }
        ZetaCmd::Integrate { k, x, t, steps } => {
            let m = zeta::numeric_moment(*k, *x, *t, *steps, g.threads)?;
            Output::float(m.value)
                .meta("error_estimate", float(m.error_estimate))
                .meta("steps", m.steps)
                .meta("t", float(*t))
                .meta("resolved", m.resolved)
                .meta("threads", g.threads)
        }
        ZetaCmd::Predict {
            k,
            x,
            primes,
            terms,
        } => {
            if !(*x > 1.0 && x.is_finite()) {
                return Err(Error::invalid("x must exceed 1"));
            }
            let a = a_factor(*k, *primes, *terms)?;
            let gpoly = ehrhart::pseudomagic_polynomial(*k)?;
            let p = zeta::prediction(*k, *x, a.value, &gpoly);
            Output::object(vec![("full", float(p.full)), ("leading", float(p.leading))])
                .meta("a_k", float(a.value))
                .meta("prime_limit", a.prime_limit)
                .meta("j_terms", a.j_terms)
        }
        ZetaCmd::Ladder {
            k,
            x,
            primes,
            terms,
        } => {
            let a = a_factor(*k, *primes, *terms)?;
            let gpoly = ehrhart::pseudomagic_polynomial(*k)?;
            let rows = zeta::convergence_ladder(*k, x, a.value, &gpoly, b)?
                .into_iter()
                .map(|r| {
                    vec![
                        Value::from(r.x),
                        r.exact.as_ref().map_or(Value::Null, exact),
                        float(r.mv_value),
                        float(r.full_prediction),
                        float(r.ratio_full()),
                        float(r.leading_prediction),
                        float(r.ratio_leading()),
                    ]
                })
                .collect();
            Output::table(
                &[
                    "x",
                    "exact",
                    "mv",
                    "full",
                    "ratio_full",
                    "leading",
                    "ratio_leading",
                ],
                rows,
            )
            .meta("a_k", float(a.value))
            .meta("prime_limit", a.prime_limit)
            .meta("budget", b.to_string())
        }
    };
    Ok(out)
}

fn approx_f64(r: &pseudomagic::BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn euler_output(r: euler::EulerFactorResult) -> Output {
    Output::float(r.value)
        .meta("k", r.k)
        .meta("prime_limit", r.prime_limit)
        .meta("j_terms", r.j_terms)
        .meta("tail_estimate", float(r.tail_estimate))
}

fn run_euler(cmd: &EulerCmd) -> Result<Output> {
    Ok(match cmd {
        EulerCmd::A { k, primes, terms } => {
            euler_output(euler::arithmetic_factor_a(*k, *primes, *terms)?)
        }
        EulerCmd::B { k, primes } => euler_output(euler::arithmetic_factor_b(*k, *primes)?),
    })
}

fn complex(z: Complex64) -> Value {
    serde_json::json!({ "re": float(z.re), "im": float(z.im) })
}

fn moment_output(m: MomentEstimate, g: &Globals) -> Output {
    let target = m.target.as_ref().map_or(Value::Null, exact);
    let z = m.z_score().map_or(Value::Null, float);
    Output::object(vec![
        ("mean", complex(m.mean)),
        ("stderr", float(m.stderr)),
        ("samples", Value::from(m.samples)),
        ("target", target),
        ("z_score", z),
    ])
    .meta("seed", g.seed)
    .meta("threads", g.threads)
}

fn run_rmt(cmd: &RmtCmd, g: &Globals) -> Result<Output> {
    let config = |samples: u64| McConfig::new(samples, g.seed).with_threads(g.threads);
    let out = match cmd {
        RmtCmd::Sample { n } => {
            let u = rmt::haar_unitary(*n, g.seed)?;
            let e = u.entries();
            let rows = (0..*n)
                .flat_map(|i| (0..*n).map(move |j| (i, j)))
                .map(|(i, j)| {
                    vec![
                        Value::from(i),
                        Value::from(j),
                        float(e[(i, j)].re),
                        float(e[(i, j)].im),
                    ]
                })
                .collect();
            Output::table(&["row", "col", "re", "im"], rows)
                .meta("residual", float(u.residual()))
                .meta("seed", g.seed)
        }
        RmtCmd::Secular { n } => {
            let u = rmt::haar_unitary(*n, g.seed)?;
            let sc = rmt::secular_coefficients(&u);
            let rows = sc
                .coefficients()
                .iter()
                .enumerate()
                .map(|(j, c)| vec![Value::from(j), float(c.re), float(c.im)])
                .collect();
            Output::table(&["j", "re", "im"], rows).meta("seed", g.seed)
        }
        RmtCmd::Moment { j, k, n, samples } => {
            moment_output(rmt::secular_abs_moment_mc(*j, *k, *n, config(*samples))?, g)
        }
        RmtCmd::Mixed { a, b, n, samples } => {
            let (a, b): (Vec<u32>, Vec<u32>) =
                (parse_list(a, "exponent")?, parse_list(b, "exponent")?);
            moment_output(rmt::mixed_moment_mc(&a, &b, *n, config(*samples))?, g)
        }
        RmtCmd::Truncated {
            l,
            k,
            n,
            theta,
            samples,
        } => {
            let z = Complex64::from_polar(1.0, *theta);
            moment_output(
                rmt::truncated_poly_moment_mc(*l, *k, *n, z, config(*samples))?,
                g,
            )
            .meta("theta", float(*theta))
        }
        RmtCmd::Exact { n, k } => {
            let v = rmt::full_poly_moment_exact(*n, *k);
            Output::exact(&v).meta("approx", float(approx_f64(&v)))
        }
        RmtCmd::Gfactor { k } => {
            let v = rmt::g_factor(*k);
            Output::exact(&v).meta("approx", float(approx_f64(&v)))
        }
    };
    Ok(out)
}
