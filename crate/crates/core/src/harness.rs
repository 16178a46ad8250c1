//! Corpus verification: the lower bound `partial >= W_n` and its equality
//! case on every instance, optional identity suites, and JSONL reports.

use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::catalan::{
    check_product_inequality, check_w_recurrence, for_each_size_list, w, BigCount,
};
use crate::charvec::{bijection_check, psi_injectivity_check, PsiOutcome, DEFAULT_PSI_CAP};
use crate::enumerate::{count_partial_within, Budget, DEFAULT_ENUMERATE_CAP};
use crate::error::{Error, Result};
use crate::format::parse_points;
use crate::generators::{gen_angle_frame, gen_radial_frame, Family, GenSpec, SplitMix64};
use crate::geom::PointSet;
use crate::structure::classify;

pub const DEFAULT_BUDGET_MS: u64 = 60_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceVerdict {
    pub instance_id: String,
    pub n: usize,
    pub hull_size: usize,
    pub partial_count: Option<BigCount>,
    pub w_n: Option<BigCount>,
    pub quasi_convex: Option<bool>,
    pub lower_bound_ok: Option<bool>,
    pub equality_iff_ok: Option<bool>,
    pub runtime_ms: u64,
    /// Resource limit hit; the checks were not run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    /// The instance could not be read or built.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl InstanceVerdict {
    fn empty(instance_id: String) -> Self {
        InstanceVerdict {
            instance_id,
            n: 0,
            hull_size: 0,
            partial_count: None,
            w_n: None,
            quasi_convex: None,
            lower_bound_ok: None,
            equality_iff_ok: None,
            runtime_ms: 0,
            skipped: None,
            error: None,
        }
    }

    fn errored(instance_id: String, e: &Error) -> Self {
        InstanceVerdict {
            error: Some(e.to_string()),
            ..Self::empty(instance_id)
        }
    }

    pub fn checked(&self) -> bool {
        self.lower_bound_ok.is_some()
    }

    pub fn passed(&self) -> bool {
        self.lower_bound_ok != Some(false) && self.equality_iff_ok != Some(false)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyOptions {
    pub cap: usize,
    pub budget_ms: u64,
    /// Record wall-clock time. Off by default so reports are reproducible
    /// byte for byte.
    pub timing: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            cap: DEFAULT_ENUMERATE_CAP,
            budget_ms: DEFAULT_BUDGET_MS,
            timing: false,
        }
    }
}

pub fn verify_instance(instance_id: &str, m: &PointSet, opts: &VerifyOptions) -> InstanceVerdict {
    let start = Instant::now();
    let mut v = InstanceVerdict {
        n: m.len(),
        hull_size: m.hull().len(),
        ..InstanceVerdict::empty(instance_id.to_string())
    };
    if m.len() > opts.cap {
        v.skipped = Some(format!("{} points exceed the cap of {}", m.len(), opts.cap));
        return v;
    }
    let budget = Budget::until(start + Duration::from_millis(opts.budget_ms));
    let count = match count_partial_within(m, budget) {
        Ok(c) => c,
        Err(Error::BudgetExhausted) => {
            v.skipped = Some(format!("budget of {} ms exhausted", opts.budget_ms));
            return v;
        }
        Err(e) => return InstanceVerdict::errored(instance_id.to_string(), &e),
    };
    let wn = w(m.len()).expect("point sets have at least three points");
    let qc = classify(m).is_quasi_convex;
    v.lower_bound_ok = Some(count >= wn);
    v.equality_iff_ok = Some((count == wn) == qc);
    v.quasi_convex = Some(qc);
    v.partial_count = Some(count);
    v.w_n = Some(wn);
    if opts.timing {
        v.runtime_ms = start.elapsed().as_millis() as u64;
    }
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// `trials` instances of one family. Instance seeds are drawn from a
    /// SplitMix64 stream started at `seed`.
    Family {
        family: Family,
        n: usize,
        trials: usize,
        seed: u64,
        scale: u64,
        sides: Option<Vec<usize>>,
    },
    Files(Vec<PathBuf>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub source: Source,
    pub full_suite: bool,
    /// Seed for the frames used by the charvec and Ψ suites.
    pub suite_seed: u64,
    pub options: VerifyOptions,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult {
            name: name.to_string(),
            checked: 0,
            failed: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            self.first_failure.get_or_insert_with(what);
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub instances: usize,
    pub checked: usize,
    pub skipped: usize,
    pub errors: usize,
    pub quasi_convex: usize,
    pub lower_bound_ok: usize,
    pub lower_bound_failed: usize,
    pub equality_iff_ok: usize,
    pub equality_iff_failed: usize,
    pub suites_failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub spec: RunConfig,
    pub verdicts: Vec<InstanceVerdict>,
    pub suites: Vec<SuiteResult>,
    pub summary: Summary,
}

impl CorpusReport {
    /// Every mathematical check passed. Skips and unreadable inputs do not
    /// count as failures.
    pub fn all_passed(&self) -> bool {
        self.summary.lower_bound_failed == 0
            && self.summary.equality_iff_failed == 0
            && self.summary.suites_failed == 0
    }

    /// One verdict per line, then `{"spec": ..., "suites": ..., "summary": ...}`.
    pub fn write_jsonl(&self, mut out: impl Write) -> std::io::Result<()> {
        #[derive(Serialize)]
        struct Tail<'a> {
            spec: &'a RunConfig,
            suites: &'a [SuiteResult],
            summary: &'a Summary,
        }
        for v in &self.verdicts {
            serde_json::to_writer(&mut out, v)?;
            out.write_all(b"\n")?;
        }
        let tail = Tail {
            spec: &self.spec,
            suites: &self.suites,
            summary: &self.summary,
        };
        serde_json::to_writer(&mut out, &tail)?;
        out.write_all(b"\n")
    }
}

enum Job {
    Generate(String, GenSpec),
    Read(String, PathBuf),
}

impl Job {
    fn id(&self) -> &str {
        match self {
            Job::Generate(id, _) | Job::Read(id, _) => id,
        }
    }

    fn load(&self) -> Result<PointSet> {
        match self {
            Job::Generate(_, spec) => spec.generate(),
            Job::Read(_, path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?;
                PointSet::new(parse_points(&text)?)
            }
        }
    }
}

fn jobs(source: &Source) -> Result<Vec<Job>> {
    match source {
        Source::Family {
            family,
            n,
            trials,
            seed,
            scale,
            sides,
        } => {
            let mut rng = SplitMix64::seed_from_u64(*seed);
            let mut out = Vec::with_capacity(*trials);
            for k in 0..*trials {
                let instance_seed = rng.next_u64();
                let mut spec = GenSpec {
                    family: *family,
                    n: *n,
                    scale: *scale,
                    seed: instance_seed,
                    sides: sides.clone(),
                };
                if *family == Family::QuasiConvex && sides.is_none() {
                    // a random interpolant between convex and double circle
                    let mask = SplitMix64::seed_from_u64(instance_seed ^ 0x5EED).next_u64();
                    spec.sides = Some((0..*n).filter(|&i| mask >> (i % 64) & 1 == 1).collect());
                }
                spec.validate()?;
                out.push(Job::Generate(format!("{family}-n{n}-{k:06}"), spec));
            }
            Ok(out)
        }
        Source::Files(paths) => Ok(paths
            .iter()
            .map(|p| Job::Read(p.display().to_string(), p.clone()))
            .collect()),
    }
}

/// Verifies every instance in parallel; the report is sorted by instance id.
/// Fails only when the configuration itself is invalid.
pub fn run_corpus(config: &RunConfig) -> Result<CorpusReport> {
    let jobs = jobs(&config.source)?;
    let mut verdicts: Vec<InstanceVerdict> = jobs
        .par_iter()
        .map(|job| match job.load() {
            Ok(m) => verify_instance(job.id(), &m, &config.options),
            Err(e) => InstanceVerdict::errored(job.id().to_string(), &e),
        })
        .collect();
    verdicts.sort_by(|a, b| a.instance_id.cmp(&b.instance_id));

    let suites = if config.full_suite {
        identity_suites(config.suite_seed)?
    } else {
        Vec::new()
    };

    let mut s = Summary {
        instances: verdicts.len(),
        suites_failed: suites.iter().filter(|r| r.failed > 0).count(),
        ..Summary::default()
    };
    for v in &verdicts {
        s.checked += usize::from(v.checked());
        s.skipped += usize::from(v.skipped.is_some());
        s.errors += usize::from(v.error.is_some());
        s.quasi_convex += usize::from(v.quasi_convex == Some(true));
        s.lower_bound_ok += usize::from(v.lower_bound_ok == Some(true));
        s.lower_bound_failed += usize::from(v.lower_bound_ok == Some(false));
        s.equality_iff_ok += usize::from(v.equality_iff_ok == Some(true));
        s.equality_iff_failed += usize::from(v.equality_iff_ok == Some(false));
    }
    Ok(CorpusReport {
        spec: config.clone(),
        verdicts,
        suites,
        summary: s,
    })
}

pub const SUITE_W_MAX: usize = 30;
pub const SUITE_PRODUCT_MAX_SUM: usize = 24;
pub const SUITE_FRAMES: usize = 100;

/// W recurrence for `n <= 30`, the product inequality over all size lists
/// with sum at most 24, the polyline bijection on 100 angle frames with up
/// to 10 points, and Ψ injectivity on 100 radial frames with 3 to 8 points.
pub fn identity_suites(seed: u64) -> Result<Vec<SuiteResult>> {
    let mut rec = SuiteResult::new("w_recurrence");
    for n in 3..=SUITE_W_MAX {
        rec.record(check_w_recurrence(n), || format!("n = {n}"));
    }

    let mut prod = SuiteResult::new("product_inequality");
    for_each_size_list(SUITE_PRODUCT_MAX_SUM, |ks| {
        let c = check_product_inequality(ks);
        prod.record(c.holds, || format!("{:?}", ks.sizes()));
    });

    let mut rng = SplitMix64::seed_from_u64(seed);
    let frame_seeds: Vec<u64> = (0..2 * SUITE_FRAMES).map(|_| rng.next_u64()).collect();

    let bij: Vec<(usize, bool)> = frame_seeds[..SUITE_FRAMES]
        .par_iter()
        .enumerate()
        .map(|(k, &s)| {
            let frame = gen_angle_frame(k % 11, s)?;
            Ok((k, bijection_check(&frame)?))
        })
        .collect::<Result<_>>()?;
    let mut charvec = SuiteResult::new("charvec_bijection");
    for (k, ok) in bij {
        charvec.record(ok, || format!("angle frame {k}"));
    }

    let psi: Vec<(usize, bool)> = frame_seeds[SUITE_FRAMES..]
        .par_iter()
        .enumerate()
        .map(|(k, &s)| {
            let frame = gen_radial_frame(3 + k % 6, s)?;
            let ok = matches!(
                psi_injectivity_check(&frame, DEFAULT_PSI_CAP)?,
                PsiOutcome::Injective { .. }
            );
            Ok((k, ok))
        })
        .collect::<Result<_>>()?;
    let mut inj = SuiteResult::new("psi_injectivity");
    for (k, ok) in psi {
        inj.record(ok, || format!("radial frame {k}"));
    }

    Ok(vec![rec, prod, charvec, inj])
}
