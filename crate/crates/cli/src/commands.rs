use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::sync::Arc;

use primetree::algebra::{div_map, fusion_associativity_report, star_rational};
use primetree::analytic::{chebyshev_psi, conjecture_sweep, pnt_table};
use primetree::certificates::{generate_certificate, verify_certificate};
use primetree::{trees, PosetView, PositiveRational, PrattCertificate, PrimeTable, PrimeTreeCache};
use serde_json::json;

use crate::error::CliError;
use crate::{Cli, Command, Format};

pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

/// Holds the lazily built prime table.
pub struct Context {
    limit: u64,
    table: Option<Arc<PrimeTable>>,
}

impl Context {
    pub fn new(limit: u64) -> Self {
        Context { limit, table: None }
    }

    fn table(&mut self) -> Result<Arc<PrimeTable>, CliError> {
        if self.table.is_none() {
            self.table = Some(Arc::new(PrimeTable::new(self.limit)?));
        }
        Ok(self.table.clone().unwrap())
    }
}

fn format_for(
    requested: Option<Format>,
    default: Format,
    allowed: &[Format],
    command: &str,
) -> Result<Format, CliError> {
    let f = requested.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Domain(format!(
            "format {f:?} is not supported by `{command}`"
        )))
    }
}

fn parse_rational(s: &str) -> Result<PositiveRational, CliError> {
    s.parse::<PositiveRational>().map_err(CliError::from)
}

fn json_line(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string(v).expect("json values always serialize");
    s.push('\n');
    s
}

pub fn dispatch(ctx: &mut Context, cli: &Cli) -> Result<Outcome, CliError> {
    let fmt = cli.format;
    match &cli.command {
        Command::Tree { p } => {
            let f = format_for(
                fmt,
                Format::Text,
                &[Format::Text, Format::Json, Format::Dot],
                "tree",
            )?;
            let cache = PrimeTreeCache::new(ctx.table()?);
            let t = cache.prime_tree(*p)?;
            let body = match f {
                Format::Json => {
                    let mut s = trees::to_json(&t)?;
                    s.push('\n');
                    s
                }
                Format::Dot => trees::to_dot(&t)?,
                _ => trees::to_text(&t)?,
            };
            Ok(Outcome::ok(body))
        }

        Command::Poset => {
            let f = format_for(fmt, Format::Text, &[Format::Text, Format::Json], "poset")?;
            let view = PosetView::build(ctx.table()?);
            let mut out = String::new();
            match f {
                Format::Json => {
                    // keys in numeric order, which serde_json's map would not keep
                    out.push('{');
                    for (i, (p, gens)) in view.edges().iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        write!(out, "\"{p}\":{}", serde_json::to_string(gens).unwrap()).unwrap();
                    }
                    out.push_str("}\n");
                }
                _ => {
                    for (p, gens) in view.edges() {
                        let list: Vec<String> = gens.iter().map(u64::to_string).collect();
                        writeln!(out, "{p}: {}", list.join(" ")).unwrap();
                    }
                }
            }
            Ok(Outcome::ok(out))
        }

        Command::Cert { n, verify } => {
            format_for(fmt, Format::Json, &[Format::Json, Format::Text], "cert")?;
            match (n, verify) {
                (_, Some(path)) => {
                    let text = read_input(path)?;
                    let cert = PrattCertificate::from_json(&text)?;
                    let ok = verify_certificate(&cert);
                    Ok(Outcome {
                        stdout: if ok { "valid\n" } else { "invalid\n" }.to_owned(),
                        code: if ok { 0 } else { 1 },
                    })
                }
                (Some(n), None) => {
                    let cert = generate_certificate(&*ctx.table()?, *n)?;
                    Ok(Outcome::ok(cert.to_json() + "\n"))
                }
                (None, None) => Err(CliError::Domain(
                    "cert needs either N or --verify PATH".into(),
                )),
            }
        }

        Command::Stats {
            lo,
            hi,
            csv_path,
            threads,
        } => {
            format_for(fmt, Format::Csv, &[Format::Csv, Format::Text], "stats")?;
            let cache = PrimeTreeCache::new(ctx.table()?);
            let mut builder = rayon::ThreadPoolBuilder::new();
            if let Some(n) = threads {
                builder = builder.num_threads(*n);
            }
            let pool = builder
                .build()
                .map_err(|e| CliError::Domain(format!("thread pool: {e}")))?;
            let sweep = pool.install(|| conjecture_sweep(*lo, *hi, &cache))?;
            fs::write(csv_path, sweep.to_csv())
                .map_err(|e| CliError::Io(format!("{}: {e}", csv_path.display())))?;
            let rep = &sweep.report;
            Ok(Outcome::ok(format!(
                "rows={}\nslope={:.9}\npearson_r={:.9}\n",
                rep.rows, rep.slope, rep.pearson_r
            )))
        }

        Command::Star { x, y } => {
            let f = format_for(fmt, Format::Text, &[Format::Text, Format::Json], "star")?;
            let (x, y) = (parse_rational(x)?, parse_rational(y)?);
            let value = star_rational(&x, &y)?;
            let divisor = div_map(&*ctx.table()?, &value);
            Ok(Outcome::ok(match f {
                Format::Json => json_line(&json!({
                    "value": value.to_string(),
                    "fusion": divisor.to_string(),
                })),
                _ => format!("{value} = {divisor}\n"),
            }))
        }

        Command::Div { r } => {
            let f = format_for(fmt, Format::Text, &[Format::Text, Format::Json], "div")?;
            let r = parse_rational(r)?;
            let d = div_map(&*ctx.table()?, &r);
            Ok(Outcome::ok(match f {
                Format::Json => {
                    let terms: Vec<(u64, i64)> = d.terms().collect();
                    json_line(&json!({ "divisor": d.to_string(), "terms": terms }))
                }
                _ => format!("{d}\n"),
            }))
        }

        Command::Psi { x } => {
            let f = format_for(fmt, Format::Text, &[Format::Text, Format::Json], "psi")?;
            let v = chebyshev_psi(&*ctx.table()?, *x)?;
            Ok(Outcome::ok(match f {
                Format::Json => json_line(&json!({ "x": x, "psi": v })),
                _ => format!("{v:.6}\n"),
            }))
        }

        Command::Pnt { checkpoints } => {
            let f = format_for(
                fmt,
                Format::Text,
                &[Format::Text, Format::Json, Format::Csv],
                "pnt",
            )?;
            let rows = pnt_table(&*ctx.table()?, checkpoints)?;
            let mut out = String::new();
            match f {
                Format::Json => out = json_line(&serde_json::to_value(&rows).unwrap()),
                Format::Csv => {
                    out.push_str("x,pi,pi_ln_x_over_x,psi_over_x\n");
                    for r in &rows {
                        writeln!(
                            out,
                            "{},{},{:.6},{:.6}",
                            r.x, r.pi, r.pi_ln_ratio, r.psi_ratio
                        )
                        .unwrap();
                    }
                }
                _ => {
                    for r in &rows {
                        writeln!(
                            out,
                            "x={} pi={} pi*ln(x)/x={:.6} psi/x={:.6}",
                            r.x, r.pi, r.pi_ln_ratio, r.psi_ratio
                        )
                        .unwrap();
                    }
                }
            }
            Ok(Outcome::ok(out))
        }

        Command::FusionReport { bound } => {
            let f = format_for(
                fmt,
                Format::Text,
                &[Format::Text, Format::Json],
                "fusion-report",
            )?;
            let report = fusion_associativity_report(&*ctx.table()?, *bound)?;
            let mut out = String::new();
            match f {
                Format::Json => {
                    let mismatches: Vec<_> = report
                        .mismatches
                        .iter()
                        .map(|m| {
                            json!({
                                "p": m.p, "q": m.q, "r": m.r,
                                "left": m.left.to_string(),
                                "right": m.right.to_string(),
                            })
                        })
                        .collect();
                    out = json_line(&json!({
                        "bound": report.bound,
                        "triples_checked": report.triples_checked,
                        "mismatches": mismatches,
                    }));
                }
                _ => {
                    writeln!(
                        out,
                        "bound={} triples={} mismatches={}",
                        report.bound,
                        report.triples_checked,
                        report.mismatches.len()
                    )
                    .unwrap();
                    for m in &report.mismatches {
                        writeln!(
                            out,
                            "(X{p}*X{q})*X{r} = {} | X{p}*(X{q}*X{r}) = {}",
                            m.left,
                            m.right,
                            p = m.p,
                            q = m.q,
                            r = m.r
                        )
                        .unwrap();
                    }
                }
            }
            Ok(Outcome::ok(out))
        }
    }
}

fn read_input(path: &str) -> Result<String, CliError> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
    } else {
        s = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    }
    Ok(s)
}
