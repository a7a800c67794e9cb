use std::path::PathBuf;

use clap::Args;
use ovalbent::boolfn::{
    ea_equivalent_exhaustive, ea_invariants, quadratic_ea_equivalent, BooleanFunction,
    EXHAUSTIVE_EA_MAX_K,
};

use crate::report::{read_input, CmdResult, Context, RunReport};

#[derive(Args, Debug)]
pub struct EaArgs {
    /// Truth-table file (`k=<int>` then hex), `-` for stdin.
    #[arg(long)]
    input: PathBuf,
    /// Second truth table to compare with.
    #[arg(long)]
    compare: Option<PathBuf>,
}

pub fn run(_ctx: &Context, report: &mut RunReport, a: &EaArgs) -> CmdResult<()> {
    let f = BooleanFunction::parse_file(&read_input(&a.input)?)?;
    let inv = ea_invariants(&f);
    report.detail("invariants", &inv);
    report.detail("bent", f.is_bent().unwrap_or(false));
    let Some(other) = &a.compare else {
        return Ok(());
    };
    let g = BooleanFunction::parse_file(&read_input(other)?)?;
    let inv_g = ea_invariants(&g);
    report.detail("compare_invariants", &inv_g);
    let same = inv == inv_g;
    report.detail("invariants_equal", same);
    if !same {
        report.verdict("ea_equivalent", false);
        report.witness("EA invariants differ");
        return Ok(());
    }
    if f.degree() <= 2 && g.degree() <= 2 {
        let eq = quadratic_ea_equivalent(&f, &g).expect("both quadratic");
        report.detail("decided_by", "quadratic rank");
        report.verdict("ea_equivalent", eq);
    } else if f.k() <= EXHAUSTIVE_EA_MAX_K {
        let w = ea_equivalent_exhaustive(&f, &g)?;
        report.detail("decided_by", "exhaustive search");
        report.verdict("ea_equivalent", w.is_some());
    } else {
        report.detail("decided_by", "undecided: invariants agree");
    }
    Ok(())
}
