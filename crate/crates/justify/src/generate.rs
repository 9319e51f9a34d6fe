//! Seeded random frame generation and the consistency fuzzing lab.
//!
//! Frames are generated as random one-signed programs closed under
//! complementation, then validated and checked for complementarity. On the
//! complementary ones the support operator must satisfy
//! `SV(~x, I) = ~SV(x, I)` everywhere; any violation is a bug signal and is
//! reported with full reproduction data.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::frame::{
    check_complementarity, complementation, FrameError, JustificationFrame, Rule,
    DEFAULT_SELECTION_CAP,
};
use crate::justification::Builtin;
use crate::lattice::{Fact, FactSpace, TruthValue};
use crate::parse::{document_from_frame, parse_rule_document};
use crate::solver::{consistency_sweep, SweepOptions, DEFAULT_EXHAUSTIVE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterpretationMode {
    /// Exhaustive sweeps, falling back to sampling beyond the sweep cap.
    Exhaustive,
    /// Always sample this many interpretations per frame.
    Sampled(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub frame_count: u32,
    pub max_defined_atoms: u32,
    pub max_open_atoms: u32,
    pub max_cases_per_head: u32,
    pub max_body_size: u32,
    pub evaluations: Vec<Builtin>,
    pub interpretation_mode: InterpretationMode,
    /// Also sweep frames the complementarity checker rejects. Violations on
    /// those are expected and reported separately from the bug signal.
    pub sweep_noncomplementary: bool,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 42,
            frame_count: 100,
            max_defined_atoms: 4,
            max_open_atoms: 2,
            max_cases_per_head: 3,
            max_body_size: 3,
            evaluations: Builtin::ALL.to_vec(),
            interpretation_mode: InterpretationMode::Exhaustive,
            sweep_noncomplementary: false,
        }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<(), GenerateError> {
        let positive = [
            ("max-defined-atoms", self.max_defined_atoms),
            ("max-open-atoms", self.max_open_atoms),
            ("max-cases-per-head", self.max_cases_per_head),
            ("max-body-size", self.max_body_size),
        ];
        for (name, bound) in positive {
            if bound == 0 {
                return Err(GenerateError::InvalidConfig(format!(
                    "{name} must be positive"
                )));
            }
        }
        if let InterpretationMode::Sampled(0) = self.interpretation_mode {
            return Err(GenerateError::InvalidConfig(
                "sample count must be at least 1".into(),
            ));
        }
        if self.evaluations.is_empty() {
            return Err(GenerateError::InvalidConfig(
                "at least one evaluation is required".into(),
            ));
        }
        Ok(())
    }

    fn sweep_options(&self, index: Option<u32>, be: Builtin) -> SweepOptions {
        let stream = match index {
            Some(i) => u64::from(i) + 1,
            None => u64::MAX,
        };
        let seed = self.seed ^ (stream << 8) ^ be as u64;
        match self.interpretation_mode {
            InterpretationMode::Exhaustive => SweepOptions {
                max_exhaustive: DEFAULT_EXHAUSTIVE_CAP,
                samples: 50,
                seed,
            },
            InterpretationMode::Sampled(count) => SweepOptions {
                max_exhaustive: 0,
                samples: count,
                seed,
            },
        }
    }
}

/// Deterministically generates the frame for `(cfg.seed, index)`: a random
/// one-signed program within the configured bounds, closed under
/// complementation and validated. Validation failures retry a bounded number
/// of times on the same stream.
pub fn generate_random_frame(
    cfg: &FuzzConfig,
    index: u32,
) -> Result<JustificationFrame, GenerateError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(u64::from(index));

    for _ in 0..32 {
        let defined_count = rng.gen_range(1..=cfg.max_defined_atoms);
        let open_count = rng.gen_range(0..=cfg.max_open_atoms);
        let mut names: Vec<String> = (1..=defined_count).map(|i| format!("a{i}")).collect();
        names.extend((1..=open_count).map(|i| format!("o{i}")));
        let space = FactSpace::new(names);

        let defined_ids: Vec<_> = (1..=defined_count)
            .map(|i| space.atom(&format!("a{i}")).expect("interned"))
            .collect();
        let open_ids: Vec<_> = (1..=open_count)
            .map(|i| space.atom(&format!("o{i}")).expect("interned"))
            .collect();

        let sample_fact = |rng: &mut ChaCha8Rng| -> Fact {
            let roll = rng.gen_range(0..100u32);
            let id = if roll < 40 && !open_ids.is_empty() {
                open_ids[rng.gen_range(0..open_ids.len())]
            } else if roll < 92 {
                defined_ids[rng.gen_range(0..defined_ids.len())]
            } else {
                let value = TruthValue::ALL[rng.gen_range(0..3)];
                return Fact::Logical(value);
            };
            if rng.gen_bool(0.5) {
                Fact::positive(id)
            } else {
                Fact::negative(id)
            }
        };

        let mut rules = Vec::new();
        for &id in &defined_ids {
            let case_count = rng.gen_range(1..=cfg.max_cases_per_head);
            for _ in 0..case_count {
                let size = rng.gen_range(1..=cfg.max_body_size);
                let body: BTreeSet<Fact> = (0..size).map(|_| sample_fact(&mut rng)).collect();
                rules.push(Rule::new(Fact::positive(id), body));
            }
        }

        let completed = complementation(&space, &rules, DEFAULT_SELECTION_CAP)?;
        let defined = completed.iter().filter_map(|r| r.head().atom()).collect();
        match JustificationFrame::new(space, defined, completed) {
            Ok(frame) => return Ok(frame),
            Err(_) => continue,
        }
    }
    Err(GenerateError::RetriesExhausted { index })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SweepCheck {
    Equality,
    Inequality,
}

impl SweepCheck {
    fn tag(self) -> &'static str {
        match self {
            SweepCheck::Equality => "equality",
            SweepCheck::Inequality => "inequality",
        }
    }
}

/// One consistency violation with everything needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzViolation {
    /// Generated frame index; `None` for injected regression frames.
    pub index: Option<u32>,
    pub frame_source: String,
    pub evaluation: Builtin,
    pub frame_complementary: bool,
    pub fact: String,
    pub interpretation: String,
    pub value: TruthValue,
    pub complement_value: TruthValue,
    pub check: SweepCheck,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RejectedFrame {
    pub index: Option<u32>,
    pub source: String,
}

#[derive(Debug, Clone)]
pub struct FuzzReport {
    pub seed: u64,
    /// Frames examined: generated plus injected regression frames.
    pub frames_tested: u32,
    pub complementary_frames: u32,
    /// Frames the complementarity checker rejected (counted, never dropped).
    pub complementarity_failures: u32,
    pub rejected: Vec<RejectedFrame>,
    pub violations: Vec<FuzzViolation>,
    pub elapsed: Duration,
}

impl FuzzReport {
    /// Violations on complementary frames: the fatal bug signal.
    pub fn bug_signals(&self) -> impl Iterator<Item = &FuzzViolation> {
        self.violations.iter().filter(|v| v.frame_complementary)
    }

    pub fn clean(&self) -> bool {
        self.bug_signals().next().is_none()
    }

    /// Deterministic report body. Elapsed time is deliberately excluded so
    /// identical seeds produce identical bytes.
    pub fn to_json(&self) -> Value {
        let violations: Vec<Value> = self
            .violations
            .iter()
            .map(|v| {
                json!({
                    "index": v.index,
                    "frame": v.frame_source,
                    "be": v.evaluation.tag(),
                    "frameComplementary": v.frame_complementary,
                    "fact": v.fact,
                    "interpretation": v.interpretation,
                    "sv": v.value.symbol().to_string(),
                    "svComplement": v.complement_value.symbol().to_string(),
                    "check": v.check.tag(),
                })
            })
            .collect();
        let rejected: Vec<Value> = self
            .rejected
            .iter()
            .map(|r| json!({ "index": r.index, "frame": r.source }))
            .collect();
        json!({
            "seed": self.seed,
            "framesTested": self.frames_tested,
            "complementaryFrames": self.complementary_frames,
            "complementarityFailures": self.complementarity_failures,
            "rejected": rejected,
            "consistencyViolations": violations,
        })
    }

    pub fn summary(&self) -> String {
        format!(
            "tested {} frames ({} complementary, {} rejected), {} violations, elapsed {:?}",
            self.frames_tested,
            self.complementary_frames,
            self.complementarity_failures,
            self.violations.len(),
            self.elapsed,
        )
    }
}

/// Regression frames injected into every fuzz run. They are rejected by the
/// complementarity checker, so by default they are counted but not swept.
pub fn injected_regression_sources() -> Vec<&'static str> {
    vec!["x <- t.\n~x <- t.\n"]
}

fn injected_regression_frames() -> Vec<JustificationFrame> {
    injected_regression_sources()
        .into_iter()
        .map(|source| {
            let doc = parse_rule_document(source).expect("regression source parses");
            crate::parse::compile_document(&doc, DEFAULT_SELECTION_CAP)
                .expect("regression source compiles")
        })
        .collect()
}

struct FrameOutcome {
    index: Option<u32>,
    complementary: bool,
    source: String,
    violations: Vec<FuzzViolation>,
}

fn examine_frame(
    cfg: &FuzzConfig,
    index: Option<u32>,
    frame: &JustificationFrame,
) -> Result<FrameOutcome, GenerateError> {
    let source = document_from_frame(frame).render();
    let report = check_complementarity(frame, DEFAULT_SELECTION_CAP)?;
    let complementary = report.complementary();
    let mut violations = Vec::new();
    if complementary || cfg.sweep_noncomplementary {
        for &be in &cfg.evaluations {
            let sweep = consistency_sweep(frame, be, cfg.sweep_options(index, be));
            let record = |v: &crate::solver::ConsistencyViolation, check: SweepCheck| {
                FuzzViolation {
                    index,
                    frame_source: source.clone(),
                    evaluation: be,
                    frame_complementary: complementary,
                    fact: frame.space().render(v.fact),
                    interpretation: v.interpretation.render(frame.space()),
                    value: v.value,
                    complement_value: v.complement_value,
                    check,
                }
            };
            violations.extend(
                sweep
                    .equality_violations
                    .iter()
                    .map(|v| record(v, SweepCheck::Equality)),
            );
            violations.extend(
                sweep
                    .inequality_violations
                    .iter()
                    .map(|v| record(v, SweepCheck::Inequality)),
            );
        }
    }
    Ok(FrameOutcome {
        index,
        complementary,
        source,
        violations,
    })
}

/// Generates `cfg.frame_count` frames (plus the injected regression cases),
/// checks complementarity, and sweeps consistency on the admitted frames.
/// Frames fan out across threads; the merged report is index-ordered and
/// deterministic for a fixed config.
pub fn fuzz_consistency(cfg: &FuzzConfig) -> Result<FuzzReport, GenerateError> {
    cfg.validate()?;
    let started = Instant::now();

    let mut frames: Vec<(Option<u32>, JustificationFrame)> = injected_regression_frames()
        .into_iter()
        .map(|f| (None, f))
        .collect();
    let generated = (0..cfg.frame_count)
        .into_par_iter()
        .map(|index| generate_random_frame(cfg, index).map(|f| (Some(index), f)))
        .collect::<Result<Vec<_>, _>>()?;
    frames.extend(generated);

    let outcomes = frames
        .par_iter()
        .map(|(index, frame)| examine_frame(cfg, *index, frame))
        .collect::<Result<Vec<_>, _>>()?;

    let mut report = FuzzReport {
        seed: cfg.seed,
        frames_tested: outcomes.len() as u32,
        complementary_frames: 0,
        complementarity_failures: 0,
        rejected: Vec::new(),
        violations: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for outcome in outcomes {
        if outcome.complementary {
            report.complementary_frames += 1;
        } else {
            report.complementarity_failures += 1;
            report.rejected.push(RejectedFrame {
                index: outcome.index,
                source: outcome.source.clone(),
            });
        }
        report.violations.extend(outcome.violations);
    }
    report.elapsed = started.elapsed();
    Ok(report)
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GenerateError {
    #[error("invalid fuzz configuration: {0}")]
    InvalidConfig(String),
    #[error("frame generation for index {index} exhausted its retry budget")]
    RetriesExhausted { index: u32 },
    #[error(transparent)]
    Frame(#[from] FrameError),
}
