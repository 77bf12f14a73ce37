//! Command-line front end. `run` is the whole program minus process I/O so
//! that tests can drive it.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::forms::TernaryForm;
use crate::oracle::lagrange_estimate;
use crate::qfield::{cf_value, parse_cf, parse_int_list, parse_rational, parse_surd};
use crate::spectra::{
    analyze_conic, conic_lagrange, conic_markoff, format_word, n_lagrange, n_markoff, spectrum_search, IndefiniteBinaryForm,
    SearchParams, SpectrumValue,
};
use crate::tables::{local_table, spectra_row, SPECTRA_TABLE};
use crate::Surd;

#[derive(Parser, Debug)]
#[command(name = "conic-spectra", version, about = "Lagrange and Markoff spectra of rational conics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

/// A conic given either by its coefficients or by `(n, m)` directly.
#[derive(Args, Debug)]
struct Target {
    /// Coefficients of X^2, XY, Y^2, XZ, YZ, Z^2, comma separated.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "n")]
    form: Option<String>,
    /// Conductor, in place of a form.
    #[arg(long)]
    n: Option<i64>,
    /// Multiplier, used with --n.
    #[arg(long, default_value_t = 1, requires = "n")]
    m: i64,
    /// Height bound for the rational-point search.
    #[arg(long, default_value_t = 100)]
    height: i64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Discriminant, standard form, ring, invariant lattices, (m, n) and basis.
    Analyze {
        /// Coefficients of X^2, XY, Y^2, XZ, YZ, Z^2, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long, default_value_t = 100)]
        height: i64,
    },
    /// Exact approximability of a real point.
    Approx {
        #[command(flatten)]
        target: Target,
        /// Quadratic irrational `(p+q*sqrt(D))/r`.
        #[arg(long, allow_hyphen_values = true, required_unless_present = "cf", conflicts_with = "cf")]
        xi: Option<String>,
        /// Continued fraction `[a0;a1,...,(b1,...,bk)]`.
        #[arg(long)]
        cf: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Exact approximability of the pair of roots of an indefinite form.
    Pair {
        #[command(flatten)]
        target: Target,
        /// Binary form `a,b,c` meaning a x^2 + b x y + c y^2.
        #[arg(long, allow_hyphen_values = true)]
        qform: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Low-lying values of the weighted Lagrange spectrum.
    Search {
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 1)]
        m: i64,
        #[arg(long)]
        max_term: i64,
        #[arg(long)]
        max_period: usize,
        #[arg(long)]
        limit: usize,
        /// Keep values strictly below this (integer, fraction or decimal).
        #[arg(long)]
        below: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Recompute the local (k, l) table at an odd prime.
    LocalTable {
        #[arg(long)]
        p: i64,
        #[arg(long, default_value_t = 4)]
        max_vp: u32,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Recompute the published low-lying spectrum values for n in a range.
    SpectraTable {
        /// A single n or a range `a..b`.
        #[arg(long, default_value = "1..13")]
        n: String,
        #[arg(long, default_value_t = 5)]
        max_term: i64,
        #[arg(long, default_value_t = 12)]
        max_period: usize,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Brute-force estimate of the approximability of a point on a conic.
    Oracle {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        /// Coordinate of the point, as for `approx`.
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long)]
        height: i64,
        /// Points kept near the target, and the ratio of the height band.
        #[arg(long, default_value_t = 10)]
        window: usize,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
}

fn parse_form(src: &str) -> Result<TernaryForm> {
    let v = parse_int_list(src, Some(6))?;
    let f = TernaryForm::new([v[0], v[1], v[2], v[3], v[4], v[5]]);
    if f.discriminant() == 0 {
        return Err(Error::SingularConic);
    }
    Ok(f)
}

fn positive(name: &str, v: i64) -> Result<()> {
    if v < 1 {
        return Err(Error::Usage(format!("--{name} must be positive, got {v}")));
    }
    Ok(())
}

fn parse_range(src: &str) -> Result<Vec<i64>> {
    let bad = || Error::Parse { col: 1, msg: format!("expected n or a..b, got {src:?}") };
    let (a, b) = match src.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let v = src.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if a < 1 || a > b {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

fn value_json(v: &SpectrumValue) -> Value {
    serde_json::to_value(v).expect("values serialize")
}

fn surd_vec_json(v: &[Surd; 3]) -> Value {
    json!(v.iter().map(|c| c.to_string()).collect::<Vec<_>>())
}

fn value_tsv(v: &SpectrumValue) -> String {
    let cols: Vec<String> = v.witness.columns.iter().map(|(d, w)| format!("{d}:{}", format_word(w))).collect();
    format!("{}\t{}\t{}\t{}\t{}\t{}", v.decimal, v.exact, format_word(&v.witness.word), v.witness.divisor, v.witness.point, cols.join(" "))
}

fn emit_value(out: &mut dyn Write, format: Format, v: &SpectrumValue, extra: Value) -> Result<()> {
    match format {
        Format::Json => {
            let mut obj = value_json(v);
            if let (Some(o), Value::Object(e)) = (obj.as_object_mut(), extra) {
                o.extend(e);
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&obj).expect("json"))
        }
        Format::Tsv => writeln!(out, "{}", value_tsv(v)),
    }
    .map_err(io)
}

fn io(e: std::io::Error) -> Error {
    Error::Usage(format!("write failed: {e}"))
}

fn analyze(out: &mut dyn Write, form: &str, height: i64) -> Result<()> {
    positive("height", height)?;
    let f = parse_form(form)?;
    let an = analyze_conic(&f, height)?;
    let std = &an.standard;
    let per_prime: serde_json::Map<String, Value> =
        an.invariants.per_prime.iter().map(|(p, (k, l))| (p.to_string(), json!({"k": k, "l": l}))).collect();
    let doc = json!({
        "form": f.coeffs,
        "flipped": an.flipped,
        "content": an.content,
        "discriminant": an.discriminant(),
        "point": an.point.coords(),
        "standard": {"A": std.a, "B": std.b, "C": std.c, "D": std.d, "transform": std.transform},
        "ring": {"generators": an.ring.gens},
        "lattices": an.invariants.lattices,
        "per_prime": per_prime,
        "m": an.multiplier(),
        "n": an.invariants.n,
        "basis": an.invariants.basis,
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json")).map_err(io)
}

fn read_point(xi: &Option<String>, cf: &Option<String>) -> Result<Surd> {
    match (xi, cf) {
        (Some(x), _) => parse_surd(x),
        (None, Some(c)) => {
            let c = parse_cf(c)?;
            cf_value(&c.preperiod, &c.period)
        }
        (None, None) => Err(Error::Usage("one of --xi, --cf is required".into())),
    }
}

fn approx(out: &mut dyn Write, t: &Target, x: &Surd, format: Format) -> Result<()> {
    positive("height", t.height)?;
    match (&t.form, t.n) {
        (Some(form), _) => {
            let f = parse_form(form)?;
            let (v, point) = conic_lagrange(&f, x, t.height)?;
            emit_value(out, format, &v, json!({"point": surd_vec_json(&point)}))
        }
        (None, Some(n)) => {
            let v = n_lagrange(x, n, t.m)?;
            emit_value(out, format, &v, json!({"n": n, "m": t.m}))
        }
        (None, None) => Err(Error::Usage("one of --form, --n is required".into())),
    }
}

fn pair(out: &mut dyn Write, t: &Target, qform: &str, format: Format) -> Result<()> {
    positive("height", t.height)?;
    let c = parse_int_list(qform, Some(3))?;
    let q = IndefiniteBinaryForm::new(c[0], c[1], c[2])?;
    match (&t.form, t.n) {
        (Some(form), _) => {
            let f = parse_form(form)?;
            let (v, [p1, p2]) = conic_markoff(&f, &q, t.height)?;
            emit_value(out, format, &v, json!({"points": [surd_vec_json(&p1), surd_vec_json(&p2)]}))
        }
        (None, Some(n)) => {
            let v = n_markoff(&q, n, t.m)?;
            emit_value(out, format, &v, json!({"n": n, "m": t.m}))
        }
        (None, None) => Err(Error::Usage("one of --form, --n is required".into())),
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Analyze { form, height } => analyze(out, &form, height),
        Command::Approx { target, xi, cf, format } => approx(out, &target, &read_point(&xi, &cf)?, format),
        Command::Pair { target, qform, format } => pair(out, &target, &qform, format),
        Command::Search { n, m, max_term, max_period, limit, below, format } => {
            let below = below.as_deref().map(parse_rational).transpose()?;
            let values = spectrum_search(&SearchParams { n, m, max_term, max_period, limit, below })?;
            match format {
                Format::Json => {
                    let doc = json!({"n": n, "m": m, "values": values});
                    writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json")).map_err(io)
                }
                Format::Tsv => {
                    writeln!(out, "decimal\texact\twitness\tdivisor\tpoint\tcolumns").map_err(io)?;
                    values.iter().try_for_each(|v| writeln!(out, "{}", value_tsv(v)).map_err(io))
                }
            }
        }
        Command::LocalTable { p, max_vp, format } => {
            let rows = local_table(p, max_vp)?;
            match format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows).expect("json")).map_err(io),
                Format::Tsv => {
                    writeln!(out, "vp\tconic\tA,B,C,D\tk\tl\tpublished\tstatus").map_err(io)?;
                    rows.iter().try_for_each(|r| {
                        let [a, b, c, d] = r.params;
                        let status = if r.matches() { "ok" } else { "MISMATCH" };
                        writeln!(out, "{}\t{}\t{a},{b},{c},{d}\t{}\t{}\t{},{}\t{status}", r.vp, r.label, r.k, r.l, r.expected.0, r.expected.1)
                            .map_err(io)
                    })
                }
            }
        }
        Command::SpectraTable { n, max_term, max_period, format } => {
            let ns = parse_range(&n)?;
            if let Some(bad) = ns.iter().find(|n| !SPECTRA_TABLE.iter().any(|(m, _)| m == *n)) {
                return Err(Error::Usage(format!("the table has no row n = {bad}")));
            }
            let mut reports = Vec::new();
            if format == Format::Tsv {
                writeln!(out, "n\tpublished\tcomputed\texact\tstatus").map_err(io)?;
            }
            for n in ns {
                let r = spectra_row(n, max_term, max_period)?;
                if format == Format::Tsv {
                    for (listed, m) in r.listed.iter().zip(&r.matched) {
                        match m {
                            Some(v) => writeln!(out, "{n}\t{listed}\t{}\t{}\tok", &v.decimal[..12.min(v.decimal.len())], v.exact),
                            None => writeln!(out, "{n}\t{listed}\t-\t-\tMISSING"),
                        }
                        .map_err(io)?;
                    }
                    for v in &r.extra {
                        writeln!(out, "{n}\t-\t{}\t{}\tunlisted", &v.decimal[..12.min(v.decimal.len())], v.exact).map_err(io)?;
                    }
                }
                reports.push(r);
            }
            if format == Format::Json {
                writeln!(out, "{}", serde_json::to_string_pretty(&reports).expect("json")).map_err(io)?;
            }
            Ok(())
        }
        Command::Oracle { form, xi, height, window, format } => {
            positive("height", height)?;
            let f = parse_form(&form)?;
            let x = parse_surd(&xi)?;
            let (exact, point) = conic_lagrange(&f, &x, 100)?;
            let est = lagrange_estimate(&f, &point, height, window)?;
            match format {
                Format::Json => {
                    let doc = json!({"exact": value_json(&exact), "estimate": est});
                    writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json")).map_err(io)
                }
                Format::Tsv => {
                    writeln!(out, "height\tpoint\tquality").map_err(io)?;
                    for s in &est.samples {
                        writeln!(out, "{}\t{}\t{}", s.height, s.point, s.quality.to_decimal(20)).map_err(io)?;
                    }
                    writeln!(out, "# estimate\t{}", est.value.to_decimal(20)).map_err(io)?;
                    writeln!(out, "# exact\t{}\t{}", &exact.decimal[..22.min(exact.decimal.len())], exact.exact).map_err(io)
                }
            }
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code: 0 success, 2 usage, 3 no rational point, 4 structure violation.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return if code == 0 { 0 } else { 2 };
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
