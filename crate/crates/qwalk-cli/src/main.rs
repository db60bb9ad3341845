//! Command-line front end: parses coin/state grammars, dispatches to the
//! library, and emits CSV/JSON with a fixed 17-significant-digit float
//! format so identical invocations produce byte-identical output.
//!
//! Exit codes: 0 success, 1 failed verification, 2 parse/validation error,
//! 3 numerical failure (non-converged truncation, singular quadrature).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qwalk::absorption::{
    absorption_prob_with, conjecture_rhs, first_hit_prob, hitting_series, semi_infinite_closed,
    theorem8_prob, AbsorptionSpec, Boundary, TruncationPolicy,
};
use qwalk::coin::{parse_coin_spec, parse_state_spec, QubitState, UnitaryCoin, WalkType};
use qwalk::limit::LimitDensity;
use qwalk::pathsum::{classify_symmetry, moment_closed_form, MomentContext};
use qwalk::verify::{run as run_suite, Suite};
use qwalk::walk::{distribution, evolve};

#[derive(Parser)]
#[command(name = "qwalk", version, about = "Two-state quantum walk toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the walk and emit the site distribution with amplitudes
    Evolve(EvolveArgs),
    /// Closed-form moment of the position at a fixed time
    Moments(MomentsArgs),
    /// Classify the initial state as symmetric or not
    Symmetry(CommonArgs),
    /// Tabulate the rescaled-position limit density on a grid
    Density(DensityArgs),
    /// Mean, second moment, and sd of the limit density
    LimitStats(CommonArgs),
    /// First-hit probability at the origin with an absorbing boundary
    Absorb(AbsorbArgs),
    /// Run a built-in verification suite
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum TypeArg {
    A,
    G,
}

impl TypeArg {
    fn walk_type(self) -> WalkType {
        match self {
            TypeArg::A => WalkType::A,
            TypeArg::G => WalkType::G,
        }
    }
    fn tag(self) -> &'static str {
        match self {
            TypeArg::A => "a",
            TypeArg::G => "g",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct CommonArgs {
    /// Walk type
    #[arg(long = "type", value_enum, default_value = "a")]
    walk_type: TypeArg,
    /// Coin: hadamard | h_rho:<rho> | gudder:<a> | u:<eta>,<phi>,<psi> | raw:<8 floats>
    #[arg(long, default_value = "hadamard")]
    coin: String,
    /// State: L | R | sym | raw:<a_re>,<a_im>,<b_re>,<b_im>
    #[arg(long, default_value = "sym")]
    state: String,
    /// Output path (standard output when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn parse(&self) -> Result<(UnitaryCoin<f64>, QubitState<f64>, WalkType), qwalk::Error> {
        Ok((
            parse_coin_spec(&self.coin)?,
            parse_state_spec(&self.state)?,
            self.walk_type.walk_type(),
        ))
    }
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of steps
    #[arg(long)]
    steps: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Args)]
struct MomentsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Time step n
    #[arg(long)]
    steps: usize,
    /// Moment order
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Args)]
struct DensityArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of grid intervals across the support
    #[arg(long, default_value_t = 512)]
    grid: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Semi,
    Finite,
}

#[derive(Args)]
struct AbsorbArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Boundary mode
    #[arg(long, value_enum, default_value = "semi")]
    mode: ModeArg,
    /// Lattice width N (finite mode only; boundaries sit at 0 and N)
    #[arg(long = "n")]
    n_sites: Option<usize>,
    /// Starting site
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Truncation cap override
    #[arg(long = "n-max")]
    n_max: Option<usize>,
    /// Also write the per-step series as CSV to this path
    #[arg(long = "emit-series")]
    emit_series: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite: pqrs | lemma1 | moments | symmetry | limit | absorption | conjecture | all
    #[arg(default_value = "all")]
    suite: String,
    /// For the conjecture suite: tabulate widths 2..=n-max instead
    #[arg(long = "n-max")]
    n_max: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

// 17 significant digits: enough to reproduce any f64 bit-for-bit
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn emit(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: &Cmd) -> Result<u8, Box<dyn std::error::Error>> {
    match cmd {
        Cmd::Evolve(a) => cmd_evolve(a),
        Cmd::Moments(a) => cmd_moments(a),
        Cmd::Symmetry(a) => cmd_symmetry(a),
        Cmd::Density(a) => cmd_density(a),
        Cmd::LimitStats(a) => cmd_limit_stats(a),
        Cmd::Absorb(a) => cmd_absorb(a),
        Cmd::Verify(a) => cmd_verify(a),
    }
}

fn cmd_evolve(args: &EvolveArgs) -> Result<u8, Box<dyn std::error::Error>> {
    let (coin, state, wt) = args.common.parse()?;
    let field = evolve(&state, &coin, wt, args.steps);
    let dist = distribution(&field)?;
    let mut rows = Vec::new();
    for (site, amp) in field.iter() {
        if amp[0].norm_sqr() == 0.0 && amp[1].norm_sqr() == 0.0 {
            continue;
        }
        rows.push((site, dist.prob(site), amp[0], amp[1]));
    }
    let text = match args.format {
        FormatArg::Csv => {
            let mut s = String::from("k,prob,psiL_re,psiL_im,psiR_re,psiR_im\n");
            for (k, p, l, r) in &rows {
                s.push_str(&format!(
                    "{k},{},{},{},{},{}\n",
                    fmt(*p),
                    fmt(l.re),
                    fmt(l.im),
                    fmt(r.re),
                    fmt(r.im)
                ));
            }
            s
        }
        FormatArg::Json => {
            let entries: Vec<String> = rows
                .iter()
                .map(|(k, p, l, r)| {
                    format!(
                        "[{k},{},{},{},{},{}]",
                        fmt(*p),
                        fmt(l.re),
                        fmt(l.im),
                        fmt(r.re),
                        fmt(r.im)
                    )
                })
                .collect();
            format!(
                "{{\"time\":{},\"walk_type\":{},\"coin\":{},\"state\":{},\"entries\":[{}]}}\n",
                args.steps,
                json_str(args.common.walk_type.tag()),
                json_str(&args.common.coin),
                json_str(&args.common.state),
                entries.join(",")
            )
        }
    };
    emit(&args.common.out, &text)?;
    Ok(0)
}

fn cmd_moments(args: &MomentsArgs) -> Result<u8, Box<dyn std::error::Error>> {
    let (coin, state, wt) = args.common.parse()?;
    let value = if args.m == 0 {
        1.0
    } else {
        let ctx = MomentContext::new(&coin, wt, &state)?;
        moment_closed_form(&ctx, args.steps, args.m)?
    };
    let text = match args.format {
        FormatArg::Csv => format!("n,m,value\n{},{},{}\n", args.steps, args.m, fmt(value)),
        FormatArg::Json => format!(
            "{{\"walk_type\":{},\"coin\":{},\"state\":{},\"n\":{},\"m\":{},\"value\":{}}}\n",
            json_str(args.common.walk_type.tag()),
            json_str(&args.common.coin),
            json_str(&args.common.state),
            args.steps,
            args.m,
            fmt(value)
        ),
    };
    emit(&args.common.out, &text)?;
    Ok(0)
}

fn cmd_symmetry(args: &CommonArgs) -> Result<u8, Box<dyn std::error::Error>> {
    let (coin, state, wt) = args.parse()?;
    let member = classify_symmetry(&coin, wt, &state)?;
    let text = format!(
        "{{\"walk_type\":{},\"coin\":{},\"state\":{},\"symmetric\":{}}}\n",
        json_str(args.walk_type.tag()),
        json_str(&args.coin),
        json_str(&args.state),
        member
    );
    emit(&args.out, &text)?;
    Ok(0)
}

fn cmd_density(args: &DensityArgs) -> Result<u8, Box<dyn std::error::Error>> {
    let (coin, state, wt) = args.common.parse()?;
    if args.grid < 1 {
        return Err("grid must have at least 1 interval".into());
    }
    let d = LimitDensity::new(&coin, wt, &state)?;
    let a = d.mod_a();
    let mut s = String::from("x,f\n");
    for i in 0..=args.grid {
        let x = -a + 2.0 * a * i as f64 / args.grid as f64;
        s.push_str(&format!("{},{}\n", fmt(x), fmt(d.density(x))));
    }
    emit(&args.common.out, &s)?;
    Ok(0)
}

fn cmd_limit_stats(args: &CommonArgs) -> Result<u8, Box<dyn std::error::Error>> {
    let (coin, state, wt) = args.parse()?;
    let d = LimitDensity::new(&coin, wt, &state)?;
    let text = format!(
        "{{\"mean\":{},\"second_moment\":{},\"sd\":{}}}\n",
        fmt(d.mean()),
        fmt(d.second_moment()),
        fmt(d.sd())
    );
    emit(&args.out, &text)?;
    Ok(0)
}

fn cmd_absorb(args: &AbsorbArgs) -> Result<u8, Box<dyn std::error::Error>> {
    let (coin, state, wt) = args.common.parse()?;
    let boundary = match args.mode {
        ModeArg::Semi => {
            if args.n_sites.is_some() {
                return Err("--n only applies to finite mode".into());
            }
            Boundary::SemiInfinite
        }
        ModeArg::Finite => {
            Boundary::Finite(args.n_sites.ok_or("finite mode needs --n")?)
        }
    };
    let spec = AbsorptionSpec::new(coin.clone(), wt, boundary, args.k)?;
    let policy = match args.n_max {
        Some(cap) => TruncationPolicy::with_cap(boundary, cap),
        None => TruncationPolicy::default_for(boundary),
    };
    let res = absorption_prob_with(&spec, &state, &policy);

    let mode_tag = match args.mode {
        ModeArg::Semi => "semi",
        ModeArg::Finite => "finite",
    };
    let width = match boundary {
        Boundary::Finite(n) => n.to_string(),
        Boundary::SemiInfinite => "null".to_string(),
    };
    let mut extras = String::new();
    if matches!(boundary, Boundary::SemiInfinite) && args.k == 1 && coin.is_hadamard() {
        let closed = semi_infinite_closed(&coin, &state, wt)?;
        extras.push_str(&format!(",\"closed_form\":{}", fmt(closed)));
    }
    if let Boundary::Finite(n) = boundary {
        if args.k == 1 {
            extras.push_str(&format!(
                ",\"conjecture_rhs\":{}",
                fmt(conjecture_rhs::<f64>(n))
            ));
        }
    }
    let text = format!(
        "{{\"spec\":{{\"coin\":{},\"state\":{},\"walk_type\":{},\"mode\":{},\"width\":{},\"start\":{}}},\
         \"prob\":{},\"n_used\":{},\"tail_bound\":{},\"cond_mean_T0\":{}{}}}\n",
        json_str(&args.common.coin),
        json_str(&args.common.state),
        json_str(args.common.walk_type.tag()),
        json_str(mode_tag),
        width,
        args.k,
        fmt(res.prob),
        res.n_used,
        fmt(res.tail_bound),
        fmt(res.cond_mean_t0),
        extras
    );
    emit(&args.common.out, &text)?;

    if let Some(path) = &args.emit_series {
        let series = hitting_series(&spec, res.n_used)?;
        let mut s = String::from("n,P_n,p_re,p_im,r_re,r_im\n");
        for n in 1..=series.n_max() {
            let p = series.p(n);
            let r = series.r(n);
            s.push_str(&format!(
                "{n},{},{},{},{},{}\n",
                fmt(first_hit_prob(&series, &state, n)?),
                fmt(p.re),
                fmt(p.im),
                fmt(r.re),
                fmt(r.im)
            ));
        }
        std::fs::write(path, s)?;
    }

    if !res.converged {
        eprintln!(
            "truncation did not converge: tail bound {} after {} steps",
            fmt(res.tail_bound),
            res.n_used
        );
        return Ok(3);
    }
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, Box<dyn std::error::Error>> {
    if let Some(n_max) = args.n_max {
        if args.suite != "conjecture" {
            return Err("--n-max only applies to the conjecture suite".into());
        }
        return verify_conjecture_table(n_max, &args.out);
    }
    let suite = Suite::parse(&args.suite)
        .ok_or_else(|| format!("unknown suite `{}`", args.suite))?;
    let mut text = String::new();
    let mut all_ok = true;
    for check in run_suite(suite) {
        all_ok &= check.passed;
        let status = if check.passed { "pass" } else { "FAIL" };
        if check.detail.is_empty() {
            text.push_str(&format!("{}: {status}\n", check.name));
        } else {
            text.push_str(&format!("{}: {status} ({})\n", check.name, check.detail));
        }
    }
    text.push_str(if all_ok { "all checks passed\n" } else { "FAILED\n" });
    emit(&args.out, &text)?;
    Ok(if all_ok { 0 } else { 1 })
}

fn verify_conjecture_table(
    n_max: usize,
    out: &Option<PathBuf>,
) -> Result<u8, Box<dyn std::error::Error>> {
    if n_max < 2 {
        return Err("conjecture table needs --n-max >= 2".into());
    }
    let state: QubitState<f64> = QubitState::right();
    let mut text = String::from("N,quadrature,closed_sequence,abs_diff,status\n");
    let mut all_ok = true;
    for n_sites in 2..=n_max {
        let quad = match theorem8_prob(n_sites, 1, &state, WalkType::A, 8192) {
            Ok(v) => v,
            Err(qwalk::Error::SingularPoint) => {
                eprintln!("quadrature singular at width {n_sites}");
                return Ok(3);
            }
            Err(e) => return Err(e.into()),
        };
        let rhs = conjecture_rhs::<f64>(n_sites);
        let diff = (quad - rhs).abs();
        let ok = diff < 1e-4;
        all_ok &= ok;
        text.push_str(&format!(
            "{n_sites},{},{},{},{}\n",
            fmt(quad),
            fmt(rhs),
            fmt(diff),
            if ok { "pass" } else { "FAIL" }
        ));
    }
    emit(out, &text)?;
    Ok(if all_ok { 0 } else { 1 })
}
