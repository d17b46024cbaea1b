//! The subcommands, written against `io::Write` so tests can capture output.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use cutdual::certificate::verify_certificate;
use cutdual::dpa::{approx_dpa, approx_dpa_ssc};
use cutdual::generate::{
    gen_dpa_tight, gen_random_2ecs, gen_random_bidirected, gen_random_dpa, gen_random_ssc,
    gen_ssc_tight, GeneratedInstance,
};
use cutdual::instance::{dpa_to_ssc, mscs_to_ssc};
use cutdual::oracle::{
    certify_exact_by_bound, exact_2ecs, exact_dpa, exact_mscs, exact_ssc, DPA_VERTEX_LIMIT,
    SSC_STAR_LIMIT, TWO_ECS_EDGE_LIMIT,
};
use cutdual::ssc::{approx_mscs, approx_ssc};
use cutdual::two_ecs::approx_2ecs;
use cutdual::{
    Advisor, DefaultAdvisor, Instance, Problem, Ratio, RunReport, ScriptedAdvisor, SscInstance,
};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::format::{parse_advice, parse_instance, write_advice, write_instance, FormatError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Format { path: PathBuf, source: FormatError },
    #[error("{}: not a valid report: {source}", path.display())]
    Report {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cutdual::Error),
    #[error("verification failed: {} problem(s)", .0.len())]
    Verification(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use cutdual::Error as E;
        match self {
            CliError::Format { source, .. } => source.exit_code(),
            CliError::Io { .. } | CliError::Report { .. } | CliError::Usage(_) => 2,
            CliError::Core(E::NotBidirected(..) | E::InvalidParameter(_) | E::TooLarge { .. }) => 2,
            CliError::Core(_) | CliError::Verification(_) => 1,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_owned(),
        source,
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(io_err(path))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(io_err(path))
}

fn stdout_err(e: io::Error) -> CliError {
    io_err(Path::new("<stdout>"))(e)
}

/// Hex sha256 of the instance file as read.
pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// An instance file loaded together with its digest.
pub struct Loaded {
    pub instance: Instance,
    pub digest: String,
}

pub fn load_instance(path: &Path) -> Result<Loaded, CliError> {
    let text = read(path)?;
    let instance = parse_instance(&text).map_err(|source| CliError::Format {
        path: path.to_owned(),
        source,
    })?;
    Ok(Loaded {
        instance,
        digest: digest(&text),
    })
}

pub fn load_advice(path: &Path) -> Result<Vec<usize>, CliError> {
    parse_advice(&read(path)?).map_err(|source| CliError::Format {
        path: path.to_owned(),
        source,
    })
}

fn file_kind(instance: &Instance) -> &'static str {
    match instance {
        Instance::Ssc(_) => "ssc",
        Instance::Mscs(_) => "mscs",
        Instance::Dpa(_) => "dpa",
        Instance::TwoEcs(_) => "2ecs",
    }
}

/// A problem paired with an instance file it can be solved on.
pub struct Job<'a> {
    pub problem: Problem,
    pub instance: &'a Instance,
}

impl<'a> Job<'a> {
    /// Without an explicit problem, the file kind decides. SSC runs accept
    /// MSCS files (one star per arc); DPA runs accept bidirected SSC and
    /// MSCS files.
    pub fn new(instance: &'a Instance, problem: Option<Problem>) -> Result<Self, CliError> {
        let natural = match instance {
            Instance::Ssc(_) => Problem::Ssc,
            Instance::Mscs(_) => Problem::Mscs,
            Instance::Dpa(_) => Problem::Dpa,
            Instance::TwoEcs(_) => Problem::TwoEcs,
        };
        let problem = problem.unwrap_or(natural);
        let ok = problem == natural
            || matches!(
                (problem, instance),
                (Problem::Ssc, Instance::Mscs(_))
                    | (Problem::Dpa, Instance::Ssc(_) | Instance::Mscs(_))
            );
        if !ok {
            return Err(CliError::Usage(format!(
                "problem {problem} cannot be solved on a {} file",
                file_kind(instance)
            )));
        }
        Ok(Job { problem, instance })
    }

    /// The star instance the contraction loop runs on; `None` for 2ECS.
    pub fn ssc_target(&self) -> Result<Option<SscInstance>, CliError> {
        Ok(match self.instance {
            Instance::Ssc(s) => Some(s.clone()),
            Instance::Mscs(g) => Some(mscs_to_ssc(g.digraph())?),
            Instance::Dpa(d) => Some(dpa_to_ssc(d)?.ssc),
            Instance::TwoEcs(_) => None,
        })
    }

    pub fn run<A: Advisor + ?Sized>(&self, advisor: &mut A) -> Result<RunReport, CliError> {
        let mut report = match (self.problem, self.instance) {
            (Problem::TwoEcs, Instance::TwoEcs(t)) => approx_2ecs(t, advisor)?,
            (Problem::Mscs, Instance::Mscs(g)) => approx_mscs(g, advisor)?,
            (Problem::Ssc, Instance::Ssc(s)) => approx_ssc(s, advisor)?,
            (Problem::Dpa, Instance::Dpa(d)) => approx_dpa(d, advisor)?,
            (Problem::Dpa, Instance::Ssc(s)) => approx_dpa_ssc(s, advisor)?,
            (Problem::Ssc | Problem::Dpa, Instance::Mscs(g)) => {
                let s = mscs_to_ssc(g.digraph())?;
                match self.problem {
                    Problem::Ssc => approx_ssc(&s, advisor)?,
                    _ => approx_dpa_ssc(&s, advisor)?,
                }
            }
            _ => unreachable!("checked in Job::new"),
        };
        // stars of a converted MSCS file are its arcs, so ids carry over
        report.problem = self.problem;
        Ok(report)
    }

    /// Everything wrong with `report` as a solution of this job, checked
    /// from the instance alone.
    pub fn check(&self, report: &RunReport) -> Result<Vec<String>, CliError> {
        let mut bad = Vec::new();
        if report.problem != self.problem {
            bad.push(format!(
                "report is for {} but the job is {}",
                report.problem, self.problem
            ));
        }
        let feasible = |r: cutdual::Result<bool>, what: &str| match r {
            Ok(true) => None,
            Ok(false) => Some(format!("{what} is not feasible")),
            Err(e) => Some(format!("{what}: {e}")),
        };
        let target = self.ssc_target()?;
        let expected_n = match (&target, self.instance) {
            (Some(s), _) => s.vertex_count(),
            (None, i) => i.vertex_count(),
        };
        if report.n != expected_n {
            bad.push(format!(
                "report has n = {} but the instance gives {expected_n}",
                report.n
            ));
        }
        match self.instance {
            Instance::Dpa(d) => {
                bad.extend(feasible(
                    d.is_feasible(&report.solution),
                    "power assignment",
                ));
                let conv = dpa_to_ssc(d)?;
                if report
                    .core_solution
                    .iter()
                    .any(|&f| f >= conv.star_vertex.len())
                {
                    bad.push("core solution names an unknown star".into());
                } else if conv.to_power(&report.core_solution) != report.solution {
                    bad.push("power assignment does not match the selected stars".into());
                }
            }
            Instance::TwoEcs(t) => {
                bad.extend(feasible(t.is_feasible(&report.solution), "solution"))
            }
            Instance::Mscs(g) if self.problem == Problem::Mscs => {
                bad.extend(feasible(g.is_feasible(&report.solution), "solution"))
            }
            _ => {}
        }
        if !matches!(self.instance, Instance::Dpa(_)) && report.solution != report.core_solution {
            bad.push("solution differs from the selected stars".into());
        }
        let check = match (&target, self.instance) {
            (Some(s), _) => {
                bad.extend(feasible(
                    s.is_feasible(&report.core_solution),
                    "selected star set",
                ));
                verify_certificate(s, &report.certificate)
            }
            (None, Instance::TwoEcs(t)) => verify_certificate(t, &report.certificate),
            _ => unreachable!(),
        };
        match check {
            Ok(c) => bad.extend(c.violations.iter().map(|v| {
                let cuts: Vec<_> = v.cuts.iter().map(usize::to_string).collect();
                format!(
                    "certificate: item {} crosses cuts {}",
                    v.item,
                    cuts.join(", ")
                )
            })),
            Err(e) => bad.push(format!("certificate: {e}")),
        }
        bad.extend(
            report
                .identity_failures()
                .into_iter()
                .map(|m| format!("identity: {m}")),
        );
        Ok(bad)
    }
}

fn advisor_for(advice: Option<&Path>) -> Result<Box<dyn Advisor>, CliError> {
    Ok(match advice {
        Some(path) => Box::new(ScriptedAdvisor::new(load_advice(path)?)),
        None => Box::new(DefaultAdvisor),
    })
}

pub fn solve(
    out: &mut dyn Write,
    problem: Option<Problem>,
    input: &Path,
    advice: Option<&Path>,
    report_path: Option<&Path>,
) -> Result<RunReport, CliError> {
    let loaded = load_instance(input)?;
    let job = Job::new(&loaded.instance, problem)?;
    let mut report = job.run(advisor_for(advice)?.as_mut())?;
    report.instance_digest = Some(loaded.digest);
    let json = serde_json::to_string_pretty(&report).expect("reports serialize");
    match report_path {
        Some(path) => {
            write_file(path, &(json + "\n"))?;
            writeln!(out, "{}", summary(&report)).map_err(stdout_err)?;
        }
        None => writeln!(out, "{json}").map_err(stdout_err)?,
    }
    Ok(report)
}

fn summary(r: &RunReport) -> String {
    let ratio = r.ratio.map_or_else(|| "n/a".to_string(), |x| x.to_string());
    format!(
        "{}: cost {}, lower bound {}, {} cut(s), {} iteration(s), ratio {ratio}",
        r.problem,
        r.cost,
        r.bounds.best,
        r.certificate.cuts.len(),
        r.k
    )
}

pub fn exact(out: &mut dyn Write, input: &Path, limit: Option<usize>) -> Result<(), CliError> {
    let loaded = load_instance(input)?;
    let e = match &loaded.instance {
        Instance::Ssc(s) => exact_ssc(s, limit.unwrap_or(SSC_STAR_LIMIT))?,
        Instance::Mscs(g) => exact_mscs(g, limit.unwrap_or(SSC_STAR_LIMIT))?,
        Instance::Dpa(d) => exact_dpa(d, limit.unwrap_or(DPA_VERTEX_LIMIT))?,
        Instance::TwoEcs(t) => exact_2ecs(t, limit.unwrap_or(TWO_ECS_EDGE_LIMIT))?,
    };
    let ids: Vec<_> = e.solution.iter().map(usize::to_string).collect();
    writeln!(
        out,
        "optimum {}\nsolution (0-based ids) {}",
        e.opt,
        ids.join(" ")
    )
    .map_err(stdout_err)
}

pub fn verify(out: &mut dyn Write, input: &Path, report_path: &Path) -> Result<(), CliError> {
    let loaded = load_instance(input)?;
    let report: RunReport =
        serde_json::from_str(&read(report_path)?).map_err(|source| CliError::Report {
            path: report_path.to_owned(),
            source,
        })?;
    let job = Job::new(&loaded.instance, Some(report.problem))?;
    let mut bad = job.check(&report)?;
    if let Some(d) = &report.instance_digest {
        if *d != loaded.digest {
            bad.insert(0, "instance digest does not match the input file".into());
        }
    }
    if bad.is_empty() {
        writeln!(out, "ok: {}", summary(&report)).map_err(stdout_err)?;
        return Ok(());
    }
    for b in &bad {
        writeln!(out, "violation: {b}").map_err(stdout_err)?;
    }
    Err(CliError::Verification(bad))
}

/// How the optimum in a gap computation was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Optimum {
    /// Exhaustive search.
    Exact(usize),
    /// A feasible solution meets a certified lower bound.
    Certified(usize),
    /// Neither worked; the best lower bound known.
    AtLeast(usize),
}

pub struct Gap {
    pub report: RunReport,
    pub optimum: Optimum,
}

impl Gap {
    pub fn ratio(&self) -> Option<Ratio> {
        let d = match self.optimum {
            Optimum::Exact(d) | Optimum::Certified(d) | Optimum::AtLeast(d) => d,
        };
        (d > 0).then(|| Ratio::new(self.report.cost, d))
    }
}

/// Default star limit for the search in `gap`. Larger than the oracle's own
/// default since the search starts at the lower bound, which is often tight.
pub const GAP_STAR_LIMIT: usize = 32;

/// Solve, then pin down the optimum: first by checking whether a default
/// run meets its own lower bound, then by exhaustive search within `limit`.
pub fn gap_of(job: &Job, advisor: &mut dyn Advisor, limit: Option<usize>) -> Result<Gap, CliError> {
    let report = job.run(advisor)?;
    let reference = job.run(&mut DefaultAdvisor)?;
    let best = report.bounds.best.max(reference.bounds.best);
    let target = job.ssc_target()?;
    let certified = |r: &RunReport| -> Result<bool, CliError> {
        Ok(match &target {
            Some(s) => certify_exact_by_bound(s, &r.core_solution, &r.certificate)?,
            None => r.cost == r.bounds.best,
        })
    };
    let mut proven = false;
    for r in [&report, &reference] {
        proven = proven || (r.cost == best && certified(r)?);
    }
    if proven {
        return Ok(Gap {
            optimum: Optimum::Certified(best),
            report,
        });
    }
    let exact = match (&target, job.instance) {
        (Some(s), _) => exact_ssc(s, limit.unwrap_or(GAP_STAR_LIMIT)),
        (None, Instance::TwoEcs(t)) => exact_2ecs(t, limit.unwrap_or(TWO_ECS_EDGE_LIMIT)),
        _ => unreachable!(),
    };
    let optimum = match exact {
        Ok(e) => Optimum::Exact(e.opt),
        Err(cutdual::Error::TooLarge { .. }) => Optimum::AtLeast(best),
        Err(e) => return Err(e.into()),
    };
    Ok(Gap { report, optimum })
}

pub fn gap(
    out: &mut dyn Write,
    problem: Option<Problem>,
    input: &Path,
    advice: Option<&Path>,
    limit: Option<usize>,
) -> Result<Gap, CliError> {
    let loaded = load_instance(input)?;
    let job = Job::new(&loaded.instance, problem)?;
    let g = gap_of(&job, advisor_for(advice)?.as_mut(), limit)?;
    let ratio = g
        .ratio()
        .map_or_else(|| "n/a".to_string(), |r| r.to_string());
    let text = match g.optimum {
        Optimum::Exact(d) => format!("optimum {d} (exhaustive search)\nratio {ratio}"),
        Optimum::Certified(d) => {
            format!("optimum {d} (a feasible solution meets the lower bound)\nratio {ratio}")
        }
        Optimum::AtLeast(d) => {
            format!("optimum unknown, lower bound {d}\nratio to lower bound {ratio}")
        }
    };
    writeln!(
        out,
        "problem {}\ncost {}\n{text}",
        g.report.problem, g.report.cost
    )
    .map_err(stdout_err)?;
    Ok(g)
}

/// Generator selection for `gen`.
#[derive(Debug, Clone, PartialEq)]
pub enum GenSpec {
    DpaTight {
        k: usize,
    },
    SscTight {
        k: usize,
    },
    RandomSsc {
        n: usize,
        extra: f64,
        max_fan: usize,
        seed: u64,
    },
    RandomBidirected {
        n: usize,
        extra: f64,
        max_fan: usize,
        seed: u64,
    },
    Random2ecs {
        n: usize,
        extra: f64,
        seed: u64,
    },
    RandomDpa {
        n: usize,
        zero_prob: f64,
        seed: u64,
    },
}

impl GenSpec {
    pub fn generate(&self) -> cutdual::Result<GeneratedInstance> {
        match *self {
            GenSpec::DpaTight { k } => gen_dpa_tight(k),
            GenSpec::SscTight { k } => gen_ssc_tight(k),
            GenSpec::RandomSsc {
                n,
                extra,
                max_fan,
                seed,
            } => gen_random_ssc(n, extra, max_fan, seed),
            GenSpec::RandomBidirected {
                n,
                extra,
                max_fan,
                seed,
            } => gen_random_bidirected(n, extra, max_fan, seed),
            GenSpec::Random2ecs { n, extra, seed } => gen_random_2ecs(n, extra, seed),
            GenSpec::RandomDpa { n, zero_prob, seed } => gen_random_dpa(n, zero_prob, seed),
        }
    }

    fn describe(&self) -> String {
        const PRNG: &str = "prng ChaCha8 (rand_chacha), seed_from_u64";
        match self {
            GenSpec::DpaTight { k } => format!("gk k={k}"),
            GenSpec::SscTight { k } => format!("tk k={k}"),
            GenSpec::RandomSsc {
                n,
                extra,
                max_fan,
                seed,
            } => {
                format!("random-ssc n={n} extra={extra} max-fan={max_fan} seed={seed}\n# {PRNG}")
            }
            GenSpec::RandomBidirected {
                n,
                extra,
                max_fan,
                seed,
            } => {
                format!(
                    "random-bidirected n={n} extra={extra} max-fan={max_fan} seed={seed}\n# {PRNG}"
                )
            }
            GenSpec::Random2ecs { n, extra, seed } => {
                format!("random-2ecs n={n} extra={extra} seed={seed}\n# {PRNG}")
            }
            GenSpec::RandomDpa { n, zero_prob, seed } => {
                format!("random-dpa n={n} zero-prob={zero_prob} seed={seed}\n# {PRNG}")
            }
        }
    }
}

/// Write the instance (and its advice, if the generator has one) to files.
/// Advice goes to `advice_out`, or next to the instance with an `.advice`
/// suffix.
pub fn gen(
    out: &mut dyn Write,
    spec: &GenSpec,
    path: &Path,
    advice_out: Option<&Path>,
) -> Result<GeneratedInstance, CliError> {
    let g = spec.generate()?;
    let mut text = format!("# generator: {}\n", spec.describe());
    if let Some(e) = g.expected {
        text += &format!(
            "# expected: algorithm cost {} with the advice, optimum {}\n",
            e.alg_cost, e.opt_cost
        );
    }
    text += &write_instance(&g.instance);
    write_file(path, &text)?;
    writeln!(out, "wrote {}", path.display()).map_err(stdout_err)?;
    if let Some(script) = &g.advice {
        let advice_path = advice_out.map_or_else(
            || {
                let mut p = path.as_os_str().to_owned();
                p.push(".advice");
                PathBuf::from(p)
            },
            Path::to_path_buf,
        );
        let body = format!(
            "# advice for {}\n{}",
            spec.describe().replace('\n', "\n# "),
            write_advice(script)
        );
        write_file(&advice_path, &body)?;
        writeln!(out, "wrote {}", advice_path.display()).map_err(stdout_err)?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jobs_pair_problems_with_files() {
        let mscs = parse_instance("p mscs 2 2\na 1 2\na 2 1\n").unwrap();
        assert_eq!(Job::new(&mscs, None).unwrap().problem, Problem::Mscs);
        assert!(Job::new(&mscs, Some(Problem::Ssc)).is_ok());
        assert!(Job::new(&mscs, Some(Problem::Dpa)).is_ok());
        let err = Job::new(&mscs, Some(Problem::TwoEcs)).err().unwrap();
        assert_eq!(err.exit_code(), 2);
        assert_eq!(
            err.to_string(),
            "problem 2ecs cannot be solved on a mscs file"
        );
    }

    #[test]
    fn mscs_triangle_gives_two_cuts() {
        let i2 = parse_instance("p mscs 3 3\na 1 2\na 2 3\na 3 1\n").unwrap();
        let job = Job::new(&i2, None).unwrap();
        let r = job.run(&mut DefaultAdvisor).unwrap();
        assert_eq!(r.cost, 3);
        assert_eq!(r.certificate.cuts.len(), 2);
        assert!(job.check(&r).unwrap().is_empty());
    }

    #[test]
    fn check_catches_tampering() {
        let i = parse_instance("p ssc 3 4\ns 1 1 2\ns 2 1 3\ns 3 1 1\ns 1 2 2 3\n").unwrap();
        let job = Job::new(&i, None).unwrap();
        let mut r = job.run(&mut DefaultAdvisor).unwrap();
        let cut = r.certificate.cuts[0].clone();
        r.certificate.cuts.push(cut);
        let bad = job.check(&r).unwrap();
        assert!(
            bad.iter().any(|b| b.starts_with("certificate: item")),
            "{bad:?}"
        );
        assert!(bad.iter().any(|b| b.starts_with("identity:")), "{bad:?}");
    }

    #[test]
    fn dpa_reports_check_against_the_power_assignment() {
        let d = parse_instance("p dpa 4 4\ne 1 2 0\ne 2 3 1\ne 3 4 1\ne 4 1 1\n").unwrap();
        let job = Job::new(&d, None).unwrap();
        let mut r = job.run(&mut DefaultAdvisor).unwrap();
        assert!(job.check(&r).unwrap().is_empty());
        r.solution.pop();
        assert!(!job.check(&r).unwrap().is_empty());
    }

    #[test]
    fn digests_are_hex_sha256() {
        assert_eq!(
            digest(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
