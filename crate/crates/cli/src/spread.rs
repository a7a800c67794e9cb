use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use ovalbent::spread::{knuth_orbit, KantorChain, Prequasifield};
use ovalbent::spreadbent::{bivariate_duality, sqrt_g, square_star_g, SpreadBentSpec};

use crate::report::{read_input, write_output, CmdResult, Context, Failure, RunReport};

#[derive(Subcommand, Debug)]
pub enum SpreadCommand {
    /// Write the table of a prequasifield (stdout unless --out).
    Build {
        #[arg(long, value_enum)]
        kind: Kind,
        #[command(flatten)]
        params: KindParams,
        /// Table file for --kind table.
        #[arg(long, required_if_eq("kind", "table"))]
        table: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the prequasifield axioms and the spread partition.
    Validate(PqfArgs),
    /// Write the table of the transpose (stdout unless --out).
    Transpose {
        #[command(flatten)]
        pqf: PqfArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Knuth orbit of a presemifield under dual and transpose.
    Knuth(PqfArgs),
    /// The bent function f(0, y) = B(mu, y), f(x, x o z) = B(G(z), x).
    Bent(BentArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Field,
    Kantor,
    Luneburg,
    Table,
}

#[derive(Args, Debug, Clone)]
pub struct KindParams {
    #[arg(long)]
    pub m: Option<u32>,
    /// Degrees of the Kantor chain subfields, comma separated (default 1).
    #[arg(long, value_delimiter = ',')]
    pub degrees: Vec<u32>,
    /// Kantor lambdas by element index (default all 1).
    #[arg(long, value_delimiter = ',')]
    pub lambdas: Vec<u64>,
    /// Kantor zetas by element index (default all 0).
    #[arg(long, value_delimiter = ',')]
    pub zetas: Vec<u64>,
}

#[derive(Args, Debug)]
pub struct PqfArgs {
    /// Table file, `-` for stdin, or one of field, kantor, luneburg.
    #[arg(long, default_value = "-")]
    pub pqf: String,
    #[command(flatten)]
    pub params: KindParams,
}

#[derive(Args, Debug)]
pub struct BentArgs {
    #[command(flatten)]
    pqf: PqfArgs,
    /// square-star, sqrt, sqrt-diag or table:<file>.
    #[arg(long)]
    g: String,
    /// Index of mu in V.
    #[arg(long, default_value_t = 0)]
    mu: u64,
    /// Truth-table output file.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn build_kind(kind: Kind, p: &KindParams, table: Option<&PathBuf>) -> CmdResult<Prequasifield> {
    let m = || p.m.ok_or_else(|| Failure::usage("--m is required"));
    Ok(match kind {
        Kind::Field => Prequasifield::field(m()?)?,
        Kind::Luneburg => Prequasifield::luneburg(m()?)?,
        Kind::Kantor => {
            let degrees = if p.degrees.is_empty() {
                vec![1]
            } else {
                p.degrees.clone()
            };
            let n = degrees.len();
            let pick = |v: &Vec<u64>, default: u64| {
                if v.is_empty() {
                    vec![default; n]
                } else {
                    v.clone()
                }
            };
            let chain = KantorChain {
                degrees,
                lambdas: pick(&p.lambdas, 1),
                zetas: pick(&p.zetas, 0),
            };
            Prequasifield::kantor(m()?, chain)?
        }
        Kind::Table => {
            let path = table.ok_or_else(|| Failure::usage("--table is required"))?;
            Prequasifield::parse_table(&read_input(path)?)?
        }
    })
}

pub fn load(a: &PqfArgs) -> CmdResult<Prequasifield> {
    match a.pqf.as_str() {
        "field" => build_kind(Kind::Field, &a.params, None),
        "kantor" => build_kind(Kind::Kantor, &a.params, None),
        "luneburg" => build_kind(Kind::Luneburg, &a.params, None),
        path => build_kind(Kind::Table, &a.params, Some(&PathBuf::from(path))),
    }
}

/// Writes a table to `out`, or to stdout; returns whether stdout was used.
fn emit_table(q: &Prequasifield, out: Option<&PathBuf>) -> CmdResult<bool> {
    let text = q.to_table_string()?;
    match out {
        Some(path) => {
            write_output(path, &text)?;
            Ok(false)
        }
        None => {
            print!("{text}");
            Ok(true)
        }
    }
}

fn validate_into(ctx: &Context, report: &mut RunReport, q: &Prequasifield) {
    let r = q.validate(ctx.seed);
    report.verdict("prequasifield", r.is_prequasifield);
    for w in &r.witnesses {
        report.witness(w.clone());
    }
    report.detail("validation", &r);
}

pub fn parse_g(spec: &str, q: &Prequasifield) -> CmdResult<Vec<u64>> {
    Ok(match spec {
        "square-star" => square_star_g(q)?,
        "sqrt" => sqrt_g(q.carrier()),
        "sqrt-diag" => q.sqrt_diagonal_map()?,
        other => {
            let path = other
                .strip_prefix("table:")
                .ok_or_else(|| Failure::usage(format!("unknown --g `{other}`")))?;
            read_input(&PathBuf::from(path))?
                .split_whitespace()
                .map(|v| {
                    v.parse::<u64>()
                        .map_err(|e| Failure::usage(format!("G table: {e}")))
                })
                .collect::<CmdResult<_>>()?
        }
    })
}

/// Returns whether stdout carried a table.
pub fn run(ctx: &Context, report: &mut RunReport, cmd: SpreadCommand) -> CmdResult<bool> {
    match cmd {
        SpreadCommand::Build {
            kind,
            params,
            table,
            out,
        } => {
            let q = build_kind(kind, &params, table.as_ref())?;
            validate_into(ctx, report, &q);
            emit_table(&q, out.as_ref())
        }
        SpreadCommand::Validate(a) => {
            let q = load(&a)?;
            validate_into(ctx, report, &q);
            let s = q.verify_spread(ctx.seed);
            report.verdict("spread", s.ok);
            if let Some(w) = &s.witness {
                report.witness(w.clone());
            }
            report.detail("spread", &s);
            if let Ok(kernel) = q.kernel() {
                report.detail("kernel_size", kernel.len());
            }
            Ok(false)
        }
        SpreadCommand::Transpose { pqf, out } => {
            let t = load(&pqf)?.transpose()?;
            validate_into(ctx, report, &t);
            emit_table(&t, out.as_ref())
        }
        SpreadCommand::Knuth(a) => {
            let q = load(&a)?;
            let orbit = knuth_orbit(&q)?;
            let closed = orbit.members.iter().all(|(_, p)| {
                [p.dual(), p.transpose()].into_iter().all(|next| {
                    next.is_ok_and(|n| orbit.members.iter().any(|(_, o)| o.same_table(&n)))
                })
            });
            report.verdict("closed", closed);
            report.verdict("dtd_equals_tdt", orbit.dtd_equals_tdt);
            let words: Vec<&str> = orbit.members.iter().map(|(w, _)| w.as_str()).collect();
            report.detail("size", words.len());
            report.detail("members", words);
            Ok(false)
        }
        SpreadCommand::Bent(a) => {
            let q = load(&a.pqf)?;
            let g = parse_g(&a.g, &q)?;
            let spec = SpreadBentSpec::new(q, g, a.mu)?;
            let f = spec.bent_bivariate()?;
            if let Some(path) = &a.out {
                write_output(path, &f.to_file_string())?;
            }
            ctx.write(report, "bent.tt", &f.to_file_string())?;
            let bent = f.is_bent()?;
            report.verdict("bent", bent);
            let criterion = spec.bent_criterion()?;
            report.verdict("criterion", criterion.holds);
            if let Some(w) = &criterion.witness {
                report.witness(w.clone());
            }
            report.detail("degree", f.degree());
            if let Ok(rank) = f.quadratic_rank() {
                report.detail("quadratic_rank", rank);
            }
            if let Some(oval) = report.check("line_oval", spec.line_oval()) {
                report.detail("e_size", oval.e_size());
            }
            if bent {
                let walsh = f.dual(&bivariate_duality(spec.carrier()))?;
                ctx.write(report, "dual.tt", &walsh.to_file_string())?;
                report.agree("walsh_vs_product", spec.dual_product()? == walsh);
                if let Ok(chi) = spec.dual_chi_swap() {
                    report.agree("walsh_vs_chi_swap", chi == walsh);
                }
            }
            Ok(false)
        }
    }
}
