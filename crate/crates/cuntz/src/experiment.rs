//! Named experiments over the constructions, producing [`Report`]s.
//!
//! Each experiment validates its parameters, runs deterministically from
//! its seed, records every measured defect next to the bound it is judged
//! against, and sets `pass` accordingly.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::construct::{
    self, intertwiner_pipeline, kishimoto_projection, pure_to_cuntz_unitary, rordam_v,
    strengthen_unitary, transport_agreement, ConstructError,
};
use crate::cylinder::{cylinder_equivalence, PrefixFreeSet};
use crate::display::{format_element, FormatMode};
use crate::matrix::lift_level;
use crate::parse::{parse_element, ParseError};
use crate::report::{Report, Value};
use crate::shift::{CyclicModel, ShiftSystem};
use crate::state::{CuntzState, ProductState, StateError, StateHandle};
use crate::word::{AlgebraElement, MultiIndex, WordError};
use crate::C64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExperimentError {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

/// Which state a CLI evaluation runs against.
#[derive(Debug, Clone)]
pub enum StateSpec {
    /// Cuntz state from a unit vector.
    Cuntz { xi: Vec<C64> },
    /// Gauge-invariant product state with an eventually periodic tail.
    Product { period: Vec<Vec<C64>> },
}

/// One experiment with its parameters.
#[derive(Debug, Clone)]
pub enum Experiment {
    Normalize {
        expr: String,
    },
    Eval {
        expr: String,
        state: StateSpec,
    },
    Endo {
        unitary: String,
        argument: String,
        verify: bool,
    },
    Equiv {
        p: Vec<Vec<u32>>,
        q: Vec<Vec<u32>>,
    },
    Kishimoto {
        n_min: u32,
        n_max: u32,
    },
    Rordam {
        periods: Vec<usize>,
        runs: u32,
        block: usize,
    },
    Transport {
        tail1: Vec<C64>,
        tail2: Vec<C64>,
        blocks: u32,
        width: Option<u32>,
    },
    Cuntzify {
        tail: Vec<C64>,
        level: u32,
    },
    Strengthen {
        m_max: u32,
    },
}

/// Experiment plus the shared knobs.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub d: u32,
    pub seed: u64,
    pub tol: f64,
}

impl ExperimentConfig {
    /// Validate parameter ranges before running.
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.d < 2 {
            return Err(ExperimentError::InvalidParam(
                "alphabet size must be at least 2".into(),
            ));
        }
        if self.tol <= 0.0 || self.tol.is_nan() {
            return Err(ExperimentError::InvalidParam(
                "tolerance must be positive".into(),
            ));
        }
        match &self.experiment {
            Experiment::Kishimoto { n_min, n_max } => {
                if *n_min < 1 || *n_max > 6 || n_min > n_max {
                    return Err(ExperimentError::InvalidParam(
                        "kishimoto exponents must satisfy 1 ≤ nmin ≤ nmax ≤ 6".into(),
                    ));
                }
            }
            Experiment::Rordam {
                periods,
                runs,
                block,
            } => {
                if periods.is_empty() || periods.iter().any(|&p| !(2..=64).contains(&p)) {
                    return Err(ExperimentError::InvalidParam(
                        "periods must lie in 2..=64".into(),
                    ));
                }
                if *runs == 0 || *block == 0 || *block > 8 {
                    return Err(ExperimentError::InvalidParam(
                        "need runs ≥ 1 and 1 ≤ block ≤ 8".into(),
                    ));
                }
            }
            Experiment::Transport { blocks, width, .. } => {
                if *blocks == 0 || *blocks > 8 {
                    return Err(ExperimentError::InvalidParam(
                        "block count must lie in 1..=8".into(),
                    ));
                }
                if let Some(w) = width {
                    if *w == 0 || blocks * w > 24 {
                        return Err(ExperimentError::InvalidParam(
                            "blocks×width must stay within 24 levels".into(),
                        ));
                    }
                }
            }
            Experiment::Cuntzify { level, .. } => {
                if *level == 0 || *level > 10 {
                    return Err(ExperimentError::InvalidParam(
                        "alignment level must lie in 1..=10".into(),
                    ));
                }
            }
            Experiment::Strengthen { m_max } if *m_max == 0 || *m_max > 10 => {
                return Err(ExperimentError::InvalidParam(
                    "truncation must lie in 1..=10".into(),
                ));
            }
            _ => {}
        }
        Ok(())
    }

    fn name(&self) -> &'static str {
        match self.experiment {
            Experiment::Normalize { .. } => "normalize",
            Experiment::Eval { .. } => "eval",
            Experiment::Endo { .. } => "endo",
            Experiment::Equiv { .. } => "equiv",
            Experiment::Kishimoto { .. } => "kishimoto",
            Experiment::Rordam { .. } => "rordam",
            Experiment::Transport { .. } => "transport",
            Experiment::Cuntzify { .. } => "cuntzify",
            Experiment::Strengthen { .. } => "strengthen",
        }
    }
}

/// Run an experiment; the report carries inputs, seeds, every measured
/// defect, and the pass verdict against the recorded bounds.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report, ExperimentError> {
    cfg.validate()?;
    let started = std::time::Instant::now();
    let mut report = Report::new(cfg.name());
    report.config.push(("d".into(), Value::from(cfg.d)));
    report.config.push(("seed".into(), Value::Int(cfg.seed as i64)));
    report.config.push(("tol".into(), Value::Num(cfg.tol)));
    match &cfg.experiment {
        Experiment::Normalize { expr } => run_normalize(cfg, expr, &mut report)?,
        Experiment::Eval { expr, state } => run_eval(cfg, expr, state, &mut report)?,
        Experiment::Endo {
            unitary,
            argument,
            verify,
        } => run_endo(cfg, unitary, argument, *verify, &mut report)?,
        Experiment::Equiv { p, q } => run_equiv(cfg, p, q, &mut report)?,
        Experiment::Kishimoto { n_min, n_max } => {
            run_kishimoto(*n_min, *n_max, &mut report)?
        }
        Experiment::Rordam {
            periods,
            runs,
            block,
        } => run_rordam(cfg, periods, *runs, *block, &mut report)?,
        Experiment::Transport {
            tail1,
            tail2,
            blocks,
            width,
        } => run_transport(cfg, tail1, tail2, *blocks, *width, &mut report)?,
        Experiment::Cuntzify { tail, level } => run_cuntzify(cfg, tail, *level, &mut report)?,
        Experiment::Strengthen { m_max } => run_strengthen(cfg, *m_max, &mut report)?,
    }
    report.runtime_ms = started.elapsed().as_millis() as u64;
    report.timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(report)
}

fn run_normalize(
    cfg: &ExperimentConfig,
    expr: &str,
    report: &mut Report,
) -> Result<(), ExperimentError> {
    report.config.push(("expr".into(), Value::from(expr)));
    let a = parse_element(expr, cfg.d)?;
    let canonical = format_element(&a, FormatMode::Canonical);
    let compressed = format_element(&a, FormatMode::Compressed);
    let canon = a.canonicalize();
    report.results.push(vec![
        ("input".into(), Value::from(expr)),
        ("canonical".into(), Value::from(canonical)),
        ("compressed".into(), Value::from(compressed)),
        ("term_count".into(), Value::from(canon.term_count())),
        (
            "max_abs_degree".into(),
            Value::Int(canon.max_abs_degree()),
        ),
    ]);
    report
        .measured
        .push(("term_count".into(), canon.term_count() as f64));
    Ok(())
}

fn build_state(spec: &StateSpec, d: u32) -> Result<StateHandle, ExperimentError> {
    match spec {
        StateSpec::Cuntz { xi } => {
            if xi.len() != d as usize {
                return Err(ExperimentError::InvalidParam(format!(
                    "state vector has {} entries, expected {d}",
                    xi.len()
                )));
            }
            Ok(StateHandle::cuntz(CuntzState::new(xi.clone())?))
        }
        StateSpec::Product { period } => {
            let psi = ProductState::new(
                d,
                0,
                vec![C64::new(1.0, 0.0)],
                vec![],
                period.clone(),
                true,
            )?;
            Ok(StateHandle::product(psi))
        }
    }
}

fn run_eval(
    cfg: &ExperimentConfig,
    expr: &str,
    state: &StateSpec,
    report: &mut Report,
) -> Result<(), ExperimentError> {
    report.config.push(("expr".into(), Value::from(expr)));
    let kind = match state {
        StateSpec::Cuntz { .. } => "cuntz",
        StateSpec::Product { .. } => "product",
    };
    report.config.push(("state".into(), Value::from(kind)));
    let a = parse_element(expr, cfg.d)?;
    let handle = build_state(state, cfg.d)?;
    let value = handle.eval(&a)?;
    report.results.push(vec![
        ("expression".into(), Value::from(expr)),
        ("state".into(), Value::from(kind)),
        ("value".into(), Value::from(value)),
    ]);
    report.measured.push(("abs".into(), value.norm()));
    report.measured.push(("re".into(), value.re));
    report.measured.push(("im".into(), value.im));
    Ok(())
}

fn run_endo(
    cfg: &ExperimentConfig,
    unitary: &str,
    argument: &str,
    verify: bool,
    report: &mut Report,
) -> Result<(), ExperimentError> {
    report.config.push(("u".into(), Value::from(unitary)));
    report.config.push(("x".into(), Value::from(argument)));
    report
        .config
        .push(("verify".into(), Value::Bool(verify)));
    let u = parse_element(unitary, cfg.d)?;
    let x = parse_element(argument, cfg.d)?;
    let check = u.is_unitary();
    if verify && !check.unitary {
        return Err(ExperimentError::Word(WordError::NotUnitary(check.defect)));
    }
    let image = x.apply_endo(&u, false)?;
    report.results.push(vec![
        ("image".into(), Value::from(format_element(&image, FormatMode::Compressed))),
        ("unitarity_defect".into(), Value::Num(check.defect)),
    ]);
    report
        .measured
        .push(("unitarity_defect".into(), check.defect));
    report.pass = !verify || check.unitary;
    Ok(())
}

fn words_value(words: &[Vec<u32>]) -> Value {
    Value::List(
        words
            .iter()
            .map(|w| {
                Value::Str(
                    w.iter()
                        .map(|l| l.to_string())
                        .collect::<Vec<_>>()
                        .join("."),
                )
            })
            .collect(),
    )
}

fn run_equiv(
    cfg: &ExperimentConfig,
    p: &[Vec<u32>],
    q: &[Vec<u32>],
    report: &mut Report,
) -> Result<(), ExperimentError> {
    report.config.push(("p".into(), words_value(p)));
    report.config.push(("q".into(), words_value(q)));
    let pset = PrefixFreeSet::new(cfg.d, p.iter().map(|w| MultiIndex::new(w.clone())))?;
    let qset = PrefixFreeSet::new(cfg.d, q.iter().map(|w| MultiIndex::new(w.clone())))?;
    match cylinder_equivalence(&pset, &qset) {
        Ok(w) => {
            report.results.push(vec![
                ("p_count".into(), Value::from(pset.len())),
                ("q_count".into(), Value::from(qset.len())),
                (
                    "isometry".into(),
                    Value::from(format_element(&w, FormatMode::Compressed)),
                ),
                ("congruent".into(), Value::Bool(true)),
            ]);
        }
        Err(WordError::CongruenceMismatch(a, b, m)) => {
            report.results.push(vec![
                ("p_count".into(), Value::from(a)),
                ("q_count".into(), Value::from(b)),
                (
                    "isometry".into(),
                    Value::from(format!("none: counts differ mod {m}")),
                ),
                ("congruent".into(), Value::Bool(false)),
            ]);
            report.pass = false;
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn run_kishimoto(n_min: u32, n_max: u32, report: &mut Report) -> Result<(), ExperimentError> {
    report.config.push(("n_min".into(), Value::from(n_min)));
    report.config.push(("n_max".into(), Value::from(n_max)));
    let target = std::f64::consts::FRAC_1_SQRT_2;
    report.bounds.push(("scaled_low".into(), 0.5));
    report.bounds.push(("scaled_high".into(), 2.5));
    report.bounds.push(("ratio_target".into(), target));
    report.bounds.push(("ratio_rel_tol".into(), 0.2));
    let mut prev = f64::NAN;
    let mut pass = true;
    let mut worst_scaled: f64 = 0.0;
    for n in n_min..=n_max {
        let k = kishimoto_projection(n)?;
        let scaled = k.shift_defect * 2f64.powf((n as f64 + 1.0) / 2.0);
        let ratio = k.shift_defect / prev;
        report.results.push(vec![
            ("n".into(), Value::from(n)),
            ("dim".into(), Value::from(2usize * k.radius as usize + 1)),
            ("shift_defect".into(), Value::Num(k.shift_defect)),
            ("scaled".into(), Value::Num(scaled)),
            ("ratio".into(), Value::Num(ratio)),
            ("idempotent_defect".into(), Value::Num(k.idempotent_defect)),
            ("adjoint_defect".into(), Value::Num(k.adjoint_defect)),
        ]);
        pass &= k.idempotent_defect < 1e-12 && k.adjoint_defect < 1e-12;
        if !prev.is_nan() {
            pass &= k.shift_defect < prev;
        }
        if n >= 2 {
            pass &= (0.5..=2.5).contains(&scaled);
            if !prev.is_nan() {
                pass &= (ratio - target).abs() <= 0.2 * target;
            }
        }
        worst_scaled = worst_scaled.max(scaled);
        prev = k.shift_defect;
    }
    report.measured.push(("worst_scaled".into(), worst_scaled));
    report.pass = pass;
    Ok(())
}

fn run_rordam(
    cfg: &ExperimentConfig,
    periods: &[usize],
    runs: u32,
    block: usize,
    report: &mut Report,
) -> Result<(), ExperimentError> {
    report.config.push((
        "periods".into(),
        Value::List(periods.iter().map(|&p| Value::from(p)).collect()),
    ));
    report.config.push(("runs".into(), Value::from(runs)));
    report.config.push(("block".into(), Value::from(block)));
    let mut pass = true;
    let mut worst_margin = f64::INFINITY;
    for &p in periods {
        let model = CyclicModel::new(p, block)
            .map_err(|e| ExperimentError::InvalidParam(e.to_string()))?;
        let sys = ShiftSystem::Cyclic(model.clone());
        for run in 0..runs {
            let mut rng = ChaCha12Rng::seed_from_u64(
                cfg.seed ^ ((p as u64) << 32) ^ run as u64,
            );
            let u = model.random_carrier_unitary(&mut rng);
            let data = rordam_v(&sys, &u)?;
            let row_pass = data.achieved < data.bound && data.unitarity_defect <= 1e-10;
            report.results.push(vec![
                ("period".into(), Value::from(p)),
                ("run".into(), Value::from(run)),
                ("achieved".into(), Value::Num(data.achieved)),
                ("bound".into(), Value::Num(data.bound)),
                ("path_spacing".into(), Value::Num(data.path_spacing)),
                (
                    "unitarity_defect".into(),
                    Value::Num(data.unitarity_defect),
                ),
                (
                    "tower_defect".into(),
                    Value::Num(data.tower_defect_initial.max(data.tower_defect_final)),
                ),
                ("pass".into(), Value::Bool(row_pass)),
            ]);
            pass &= row_pass;
            worst_margin = worst_margin.min(data.bound - data.achieved);
        }
    }
    report.measured.push(("worst_margin".into(), worst_margin));
    report.pass = pass;
    Ok(())
}

fn parse_tail(tail: &[C64], d: u32) -> Result<ProductState, ExperimentError> {
    if tail.len() != d as usize {
        return Err(ExperimentError::InvalidParam(format!(
            "tail vector has {} entries, expected {d}",
            tail.len()
        )));
    }
    Ok(ProductState::constant_tail(tail.to_vec())?)
}

fn run_transport(
    cfg: &ExperimentConfig,
    tail1: &[C64],
    tail2: &[C64],
    blocks: u32,
    width: Option<u32>,
    report: &mut Report,
) -> Result<(), ExperimentError> {
    let psi1 = parse_tail(tail1, cfg.d)?;
    let psi2 = parse_tail(tail2, cfg.d)?;
    let overlap: C64 = tail1
        .iter()
        .zip(tail2.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    let width = match width {
        Some(w) => w,
        None => {
            let c = overlap.norm();
            if c <= crate::ALMOST_ORTHOGONAL {
                1
            } else {
                let w = (crate::ALMOST_ORTHOGONAL.ln() / c.ln()).ceil() as u32;
                if w * blocks > 24 {
                    return Err(ExperimentError::InvalidParam(format!(
                        "site overlap {c:.3} needs block width {w}, beyond the desk-scale cap"
                    )));
                }
                w
            }
        }
    };
    report.config.push(("blocks".into(), Value::from(blocks)));
    report.config.push(("width".into(), Value::from(width)));
    report
        .config
        .push(("site_overlap".into(), Value::Num(overlap.norm())));
    let boundaries: Vec<u32> = (1..=blocks).map(|k| k * width).collect();
    let bm = intertwiner_pipeline(&psi1, &psi2, &boundaries)?;
    for (k, _) in boundaries.iter().enumerate() {
        report.results.push(vec![
            ("block".into(), Value::from(k + 1)),
            ("width".into(), Value::from(width)),
            ("overlap".into(), Value::Num(bm.overlaps[k])),
            (
                "intertwine_defect".into(),
                Value::Num(bm.intertwine_defects[k]),
            ),
            (
                "shift_misalignment".into(),
                Value::Num(bm.shift_misalignments[k]),
            ),
        ]);
    }
    let depth = bm.depth().min(4);
    let agreement = transport_agreement(&psi1, &psi2, &bm, depth)?;
    report
        .measured
        .push(("support_transport_error".into(), bm.support_transport_error));
    report
        .measured
        .push(("agreement_depth".into(), depth as f64));
    report.measured.push(("agreement_max".into(), agreement));
    report
        .measured
        .push(("commutation_defect".into(), bm.commutation_defect));
    report.bounds.push(("agreement".into(), 1e-8));
    report.pass = agreement < 1e-8 && bm.commutation_defect == 0.0;
    Ok(())
}

fn run_cuntzify(
    cfg: &ExperimentConfig,
    tail: &[C64],
    level: u32,
    report: &mut Report,
) -> Result<(), ExperimentError> {
    let psi = parse_tail(tail, cfg.d)?;
    report.config.push(("level".into(), Value::from(level)));
    let (g, cylinder) = construct::align_support(&psi, level)?;
    let u = pure_to_cuntz_unitary(&cylinder)?;
    let check = u.is_unitary();
    // ω = Ψ ∘ Ad(G*) is supported under the cylinder; Ad(G*) = α_w with
    // w = G*·λ(G)
    let g_elem = lift_level(&g);
    let w = g_elem.adjoint().multiply(&g_elem.canonical_endo())?;
    let handle = StateHandle::product(psi).compose_endo(w, false)?;
    let s1 = AlgebraElement::generator(cfg.d, 1)?;
    let value = handle.eval(&u.multiply(&s1)?)?;
    let deviation = (value - C64::new(1.0, 0.0)).norm();
    report.results.push(vec![
        ("level".into(), Value::from(level)),
        ("unitary_defect".into(), Value::Num(check.defect)),
        ("value".into(), Value::from(value)),
        ("deviation".into(), Value::Num(deviation)),
        (
            "cylinder_words".into(),
            Value::from(cylinder.len()),
        ),
    ]);
    report.measured.push(("deviation".into(), deviation));
    report
        .measured
        .push(("unitary_defect".into(), check.defect));
    report.bounds.push(("deviation".into(), cfg.tol));
    report.pass = check.unitary && deviation <= cfg.tol;
    Ok(())
}

fn run_strengthen(
    cfg: &ExperimentConfig,
    m_max: u32,
    report: &mut Report,
) -> Result<(), ExperimentError> {
    report.config.push(("m_max".into(), Value::from(m_max)));
    let d = cfg.d;
    let e = PrefixFreeSet::new(d, [MultiIndex::new(vec![1])])?;
    let u = pure_to_cuntz_unitary(&e)?;
    let cylinders: Vec<PrefixFreeSet> = (1..=m_max as usize)
        .map(|k| PrefixFreeSet::new(d, [MultiIndex::new(vec![1; 1 + k])]))
        .collect::<Result<_, _>>()?;
    let f0 = CuntzState::standard(d);
    let s1 = AlgebraElement::generator(d, 1)?;
    let mut pass = true;
    let mut prev_angle = f64::NAN;
    for m in 1..=m_max as usize {
        let out = strengthen_unitary(&u, &cylinders, m)?;
        let value = f0.eval(&out.unitary.multiply(&s1)?)?;
        let abs_defect = (value - C64::new(1.0, 0.0)).norm();
        let angle = value.arg().abs();
        let halving_err = if m > 1 {
            (angle - prev_angle / 2.0).abs()
        } else {
            0.0
        };
        report.results.push(vec![
            ("m".into(), Value::from(m)),
            ("bound".into(), Value::Num(out.bound)),
            ("abs_defect".into(), Value::Num(abs_defect)),
            ("phase_angle".into(), Value::Num(angle)),
            ("halving_error".into(), Value::Num(halving_err)),
        ]);
        pass &= abs_defect <= out.bound && halving_err <= 1e-10;
        prev_angle = angle;
    }
    report.pass = pass;
    Ok(())
}

/// Split a comma-separated complex vector; entries are decimals or
/// `(re,im)` pairs.
pub fn parse_vector(text: &str) -> Result<Vec<C64>, ExperimentError> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    let bytes = text.as_bytes();
    for (k, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => {
                depth = depth.checked_sub(1).ok_or_else(|| {
                    ExperimentError::InvalidParam("unbalanced parentheses".into())
                })?
            }
            b',' if depth == 0 => {
                out.push(parse_entry(&text[start..k])?);
                start = k + 1;
            }
            _ => {}
        }
    }
    out.push(parse_entry(&text[start..])?);
    Ok(out)
}

fn parse_entry(text: &str) -> Result<C64, ExperimentError> {
    let t = text.trim();
    if let Some(inner) = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        let parts: Vec<&str> = inner.splitn(2, ',').collect();
        if parts.len() != 2 {
            return Err(ExperimentError::InvalidParam(format!(
                "complex entry '{t}' must be (re,im)"
            )));
        }
        let re = parts[0].trim().parse::<f64>().map_err(|_| {
            ExperimentError::InvalidParam(format!("bad real part in '{t}'"))
        })?;
        let im = parts[1].trim().parse::<f64>().map_err(|_| {
            ExperimentError::InvalidParam(format!("bad imaginary part in '{t}'"))
        })?;
        Ok(C64::new(re, im))
    } else {
        t.parse::<f64>()
            .map(|x| C64::new(x, 0.0))
            .map_err(|_| ExperimentError::InvalidParam(format!("bad number '{t}'")))
    }
}

/// Parse a prefix-free set given as semicolon-separated words, each word a
/// digit string (d ≤ 9) or dot-separated indices.
pub fn parse_word_set(text: &str) -> Result<Vec<Vec<u32>>, ExperimentError> {
    text.split(';')
        .map(|w| {
            let w = w.trim();
            if w.contains('.') {
                w.split('.')
                    .map(|l| {
                        l.trim().parse::<u32>().map_err(|_| {
                            ExperimentError::InvalidParam(format!("bad index '{l}'"))
                        })
                    })
                    .collect()
            } else {
                w.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .filter(|&x| x > 0)
                            .ok_or_else(|| {
                                ExperimentError::InvalidParam(format!(
                                    "bad word '{w}': use digits or dot-separated indices"
                                ))
                            })
                    })
                    .collect()
            }
        })
        .collect()
}

/// Random seeded generator shared by experiments and tests.
pub fn seeded_rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// A random unit vector in `C^n`.
pub fn random_unit_vector(n: usize, rng: &mut impl Rng) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n)
            .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(exp: Experiment) -> ExperimentConfig {
        ExperimentConfig {
            experiment: exp,
            d: 2,
            seed: 7,
            tol: 1e-10,
        }
    }

    #[test]
    fn normalize_and_eval_reports() {
        let r = run_experiment(&base(Experiment::Normalize {
            expr: "s1s1' + s2s2'".into(),
        }))
        .unwrap();
        assert!(r.pass);
        assert_eq!(r.results.len(), 1);

        let r = run_experiment(&base(Experiment::Eval {
            expr: "s1s1'".into(),
            state: StateSpec::Cuntz {
                xi: vec![C64::new(0.6, 0.0), C64::new(0.8, 0.0)],
            },
        }))
        .unwrap();
        assert!((r.measured[0].1 - 0.36).abs() < 1e-12);
    }

    #[test]
    fn kishimoto_report_passes() {
        let r = run_experiment(&base(Experiment::Kishimoto { n_min: 1, n_max: 4 })).unwrap();
        assert!(r.pass);
        assert_eq!(r.results.len(), 4);
    }

    #[test]
    fn rordam_report_passes() {
        let r = run_experiment(&base(Experiment::Rordam {
            periods: vec![4, 8],
            runs: 2,
            block: 2,
        }))
        .unwrap();
        assert!(r.pass);
        assert_eq!(r.results.len(), 4);
    }

    #[test]
    fn transport_report_passes() {
        let r = run_experiment(&base(Experiment::Transport {
            tail1: vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            tail2: vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            blocks: 4,
            width: None,
        }))
        .unwrap();
        assert!(r.pass);
    }

    #[test]
    fn cuntzify_and_strengthen_pass() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let r = run_experiment(&base(Experiment::Cuntzify {
            tail: vec![C64::new(s, 0.0), C64::new(s, 0.0)],
            level: 2,
        }))
        .unwrap();
        assert!(r.pass, "deviation {:?}", r.measured);

        let r = run_experiment(&base(Experiment::Strengthen { m_max: 6 })).unwrap();
        assert!(r.pass);
        assert_eq!(r.results.len(), 6);
    }

    #[test]
    fn equiv_reports_obstruction_as_failure() {
        let mut cfg = base(Experiment::Equiv {
            p: vec![vec![1]],
            q: vec![vec![1], vec![2]],
        });
        cfg.d = 3;
        let r = run_experiment(&cfg).unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn vector_and_word_set_parsing() {
        let v = parse_vector("0.6,0.8").unwrap();
        assert_eq!(v.len(), 2);
        let v = parse_vector("(0,1),0").unwrap();
        assert_eq!(v[0], C64::new(0.0, 1.0));
        let ws = parse_word_set("11;12;2").unwrap();
        assert_eq!(ws, vec![vec![1, 1], vec![1, 2], vec![2]]);
        let ws = parse_word_set("1.2.1;10.2").unwrap();
        assert_eq!(ws, vec![vec![1, 2, 1], vec![10, 2]]);
    }

    #[test]
    fn validation_rejects_bad_params() {
        let cfg = base(Experiment::Kishimoto { n_min: 0, n_max: 3 });
        assert!(cfg.validate().is_err());
        let cfg = base(Experiment::Rordam {
            periods: vec![],
            runs: 1,
            block: 1,
        });
        assert!(cfg.validate().is_err());
    }
}
