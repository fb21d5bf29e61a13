//! Batch driver for the verification suites: every identity the kernels
//! expose, swept over parameter grids and cross-checked against its
//! independent route, with the outcomes collected into a machine-readable
//! report.
//!
//! A report is a flat list of check records. Each record names the suite
//! and the check, states the claim being verified, lists the concrete
//! inputs, and renders the expected and computed values exactly —
//! rationals as `num/den` strings, never floats. Exact checks carry no
//! tolerance; the only bounded checks are the truncated integral
//! comparisons, and those carry their certified tail bounds in the
//! record. Runs are deterministic given the seed: the same configuration
//! reproduces the same report byte for byte, up to the `millis` timing
//! fields.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use serde::Serialize;

use orbitlab::padic::is_odd_prime;
use orbitlab::q::Q;
use orbitlab::sl2::trace::QExt;

mod suites;
mod table;

pub use table::table_phi0;

/// Schema identifier stamped on every JSON report.
pub const SCHEMA: &str = "orbitlab-report/1";

/// Concrete suites, in canonical order.
pub const SUITES: &[&str] = &[
    "phi0",
    "weighted",
    "fourier",
    "invariant",
    "langlands",
    "gammaprime",
    "weights",
    "descent",
    "scissors",
    "weyl",
    "trace",
];

/// The sl(2) orbital-integral oracle suites, grouped under the `orbital`
/// selector.
const ORBITAL: &[&str] = &["phi0", "weighted", "fourier", "invariant"];

/// Outcome of one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Exact equality held, in rational or cyclotomic arithmetic.
    ExactPass,
    /// Agreement within a certified truncation bound.
    PassWithinBound,
    /// The check failed.
    Fail,
    /// Every sample landed on a wall; nothing was decided.
    BoundarySkip,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::ExactPass => "exact-pass",
            Status::PassWithinBound => "pass-within-bound",
            Status::Fail => "fail",
            Status::BoundarySkip => "boundary-skip",
        }
    }
}

/// One verified identity instance.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    /// Suite the record belongs to.
    pub suite: String,
    /// Stable check identifier within the suite.
    pub check: String,
    /// The mathematical statement being verified.
    pub claim: String,
    /// Concrete inputs, human-readable.
    pub inputs: String,
    /// Expected value, rendered exactly.
    pub expected: String,
    /// Computed value, rendered exactly.
    pub computed: String,
    /// Outcome.
    pub status: Status,
    /// Certified bound for truncated comparisons; absent on exact checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    /// Wall-clock milliseconds spent on this check.
    pub millis: u128,
}

/// A rejected configuration, with the offending field named.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// What to run and over which grids.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    /// Suite selectors: names from [`SUITES`] plus the aggregates `all`
    /// and `orbital`.
    pub suites: Vec<String>,
    /// Odd primes the p-adic suites sweep.
    pub primes: Vec<u64>,
    /// Truncation depth for the bounded suites (at least 1).
    pub level: i64,
    /// Largest GL(n) rank for the combinatorial sweeps (2 through 4).
    pub n: usize,
    /// Seed for the sampled grids.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            suites: vec!["all".into()],
            primes: vec![3, 5],
            level: 3,
            n: 3,
            seed: 0,
        }
    }
}

impl RunConfig {
    /// Field-level validation; [`run`] calls this first.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.primes.is_empty() {
            return Err(ConfigError {
                field: "primes",
                message: "at least one odd prime is required".into(),
            });
        }
        for &p in &self.primes {
            if !is_odd_prime(p) {
                return Err(ConfigError {
                    field: "primes",
                    message: format!("{p} is not an odd prime"),
                });
            }
        }
        if self.level < 1 {
            return Err(ConfigError {
                field: "level",
                message: format!("level must be at least 1, got {}", self.level),
            });
        }
        if !(2..=4).contains(&self.n) {
            return Err(ConfigError {
                field: "n",
                message: format!("rank must lie in 2..=4, got {}", self.n),
            });
        }
        expand_suites(&self.suites).map(|_| ())
    }
}

fn expand_suites(selectors: &[String]) -> Result<Vec<String>, ConfigError> {
    let mut chosen: BTreeSet<&str> = BTreeSet::new();
    for s in selectors {
        match s.as_str() {
            "all" => chosen.extend(SUITES.iter().copied()),
            "orbital" => chosen.extend(ORBITAL.iter().copied()),
            other => match SUITES.iter().find(|k| **k == other) {
                Some(k) => {
                    chosen.insert(k);
                }
                None => {
                    return Err(ConfigError {
                        field: "suites",
                        message: format!(
                            "unknown suite `{other}`; known suites: {}, plus the selectors `all` and `orbital`",
                            SUITES.join(", ")
                        ),
                    })
                }
            },
        }
    }
    if chosen.is_empty() {
        return Err(ConfigError {
            field: "suites",
            message: "no suites selected".into(),
        });
    }
    Ok(SUITES
        .iter()
        .filter(|s| chosen.contains(**s))
        .map(|s| s.to_string())
        .collect())
}

/// A finished run: the resolved configuration and all check records.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    /// Schema identifier for the JSON rendering.
    pub schema: &'static str,
    /// The configuration the run resolved to (selectors expanded).
    pub config: RunConfig,
    /// All check records, sorted by (suite, check, inputs).
    pub records: Vec<CheckRecord>,
}

impl Report {
    /// True when no record failed.
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status != Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "suite", "check", "claim", "inputs", "expected", "computed", "status", "bound",
            "millis",
        ])
        .expect("csv header");
        for r in &self.records {
            w.write_record([
                r.suite.as_str(),
                r.check.as_str(),
                r.claim.as_str(),
                r.inputs.as_str(),
                r.expected.as_str(),
                r.computed.as_str(),
                r.status.as_str(),
                r.bound.as_deref().unwrap_or(""),
                &r.millis.to_string(),
            ])
            .expect("csv record");
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("csv is utf8")
    }

    /// One human-readable summary line per suite, in record order.
    pub fn suite_lines(&self) -> Vec<String> {
        let mut lines = Vec::new();
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        for r in &self.records {
            if !seen.insert(r.suite.as_str()) {
                continue;
            }
            let rs: Vec<&CheckRecord> =
                self.records.iter().filter(|x| x.suite == r.suite).collect();
            let fail = rs.iter().filter(|x| x.status == Status::Fail).count();
            let exact = rs.iter().filter(|x| x.status == Status::ExactPass).count();
            let bounded = rs
                .iter()
                .filter(|x| x.status == Status::PassWithinBound)
                .count();
            let skipped = rs
                .iter()
                .filter(|x| x.status == Status::BoundarySkip)
                .count();
            let mut line = if fail == 0 {
                format!(
                    "{}: ok — {} checks ({exact} exact, {bounded} within certified bounds",
                    r.suite,
                    rs.len()
                )
            } else {
                format!("{}: FAILED — {fail} of {} checks", r.suite, rs.len())
            };
            if fail == 0 {
                if skipped > 0 {
                    line.push_str(&format!(", {skipped} boundary-skips"));
                }
                line.push(')');
            }
            lines.push(line);
        }
        lines
    }
}

/// Run the selected suites over the configured grids. Deterministic given
/// the seed; the process exit decision belongs to the caller via
/// [`Report::passed`].
pub fn run(config: &RunConfig) -> Result<Report, ConfigError> {
    config.validate()?;
    let mut resolved = config.clone();
    resolved.suites = expand_suites(&config.suites)?;
    use rayon::prelude::*;
    let mut records: Vec<CheckRecord> = resolved
        .suites
        .par_iter()
        .flat_map_iter(|name| suites::run_suite(name, &resolved))
        .collect();
    records.sort_by(|a, b| {
        (&a.suite, &a.check, &a.inputs).cmp(&(&b.suite, &b.check, &b.inputs))
    });
    Ok(Report {
        schema: SCHEMA,
        config: resolved,
        records,
    })
}

/// Exact rendering of a rational: `num/den` with the denominator always
/// spelled out, so report consumers never have to guess.
pub fn fq(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Exact rendering of an element of Q(√p).
pub(crate) fn fqext(x: &QExt, p: u64) -> String {
    format!("{} + {}*sqrt({p})", fq(&x.rat), fq(&x.irr))
}

pub(crate) fn exact(ok: bool) -> Status {
    if ok {
        Status::ExactPass
    } else {
        Status::Fail
    }
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn finish(
    suite: &str,
    check: &str,
    claim: &str,
    inputs: String,
    expected: String,
    computed: String,
    status: Status,
    bound: Option<String>,
    started: Instant,
) -> CheckRecord {
    CheckRecord {
        suite: suite.into(),
        check: check.into(),
        claim: claim.into(),
        inputs,
        expected,
        computed,
        status,
        bound,
        millis: started.elapsed().as_millis(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use orbitlab::q::{q, qi};

    #[test]
    fn selectors_expand_in_canonical_order() {
        let got = expand_suites(&["weyl".into(), "orbital".into()]).unwrap();
        assert_eq!(got, ["phi0", "weighted", "fourier", "invariant", "weyl"]);
        let all = expand_suites(&["all".into()]).unwrap();
        assert_eq!(all, SUITES);
    }

    #[test]
    fn bad_configs_name_the_field() {
        let mut cfg = RunConfig::default();
        cfg.primes = vec![4];
        assert_eq!(cfg.validate().unwrap_err().field, "primes");
        let mut cfg = RunConfig::default();
        cfg.primes = vec![];
        assert_eq!(cfg.validate().unwrap_err().field, "primes");
        let mut cfg = RunConfig::default();
        cfg.level = 0;
        assert_eq!(cfg.validate().unwrap_err().field, "level");
        let mut cfg = RunConfig::default();
        cfg.n = 5;
        assert_eq!(cfg.validate().unwrap_err().field, "n");
        let mut cfg = RunConfig::default();
        cfg.suites = vec!["nonsense".into()];
        assert_eq!(cfg.validate().unwrap_err().field, "suites");
    }

    #[test]
    fn rationals_render_with_explicit_denominators() {
        assert_eq!(fq(&qi(2)), "2/1");
        assert_eq!(fq(&q(-3, 8)), "-3/8");
        assert_eq!(fq(&q(6, -8)), "-3/4");
    }

    #[test]
    fn report_renders_both_formats() {
        let rec = CheckRecord {
            suite: "demo".into(),
            check: "c".into(),
            claim: "x equals y".into(),
            inputs: "p=3, extra".into(),
            expected: "2/3".into(),
            computed: "2/3".into(),
            status: Status::ExactPass,
            bound: None,
            millis: 0,
        };
        let report = Report {
            schema: SCHEMA,
            config: RunConfig::default(),
            records: vec![rec],
        };
        let json = report.to_json();
        assert!(json.contains("\"schema\": \"orbitlab-report/1\""));
        assert!(json.contains("\"expected\": \"2/3\""));
        assert!(json.contains("\"status\": \"exact-pass\""));
        assert!(!json.contains("\"bound\""), "exact checks carry no bound");
        let csv = report.to_csv();
        assert!(csv.starts_with("suite,check,claim,inputs,expected,computed,status,bound,millis"));
        assert!(csv.contains("\"p=3, extra\""), "embedded commas are quoted");
        assert!(report.passed());
    }
}
