//! One function per suite, each returning its check records.

mod families;
mod roots;
mod scissors;
mod sl2;

use crate::{CheckRecord, RunConfig};

pub(crate) fn run_suite(name: &str, cfg: &RunConfig) -> Vec<CheckRecord> {
    match name {
        "phi0" => sl2::phi0(cfg),
        "weighted" => sl2::weighted(cfg),
        "fourier" => sl2::fourier(cfg),
        "invariant" => sl2::invariant(cfg),
        "weyl" => sl2::weyl(cfg),
        "trace" => sl2::trace(cfg),
        "langlands" => roots::langlands(cfg),
        "gammaprime" => roots::gammaprime(cfg),
        "weights" => families::weights(cfg),
        "descent" => families::descent(cfg),
        "scissors" => scissors::scissors(cfg),
        other => unreachable!("unknown suite `{other}` slipped past validation"),
    }
}
