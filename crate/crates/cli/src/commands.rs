use std::collections::BTreeMap;

use hullwalk::chambers::{
    chamber_intersect_count, char_poly_product, char_poly_whitney, increment_matrix,
    kernel_intersection_basis, predicted_intersect_count, reflection_hyperplanes, zaslavsky_regions,
    ArrangementSpec, GROUP_CAP,
};
use hullwalk::closed_forms::{self, BIGSUM_MAX_N};
use hullwalk::combinatorics::stirling_first;
use hullwalk::montecarlo::{self, compare_with_rerun, McConfig, PathModel, ShiftMode};
use hullwalk::rational::{decimal_string, fraction_string};
use hullwalk::sampling::{sample_joint_with, stream_rng, BridgeSpec, JointSpec, WalkSpec};
use hullwalk::{BigInt, BigRational};
use num_traits::One;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{
    AbsorbArgs, ChambersArgs, ExactArgs, FaceprobArgs, IdentityArgs, Law, Mode, PathKind, SimulateArgs,
    Target,
};
use crate::output::Report;

/// Smallest sample count accepted by `simulate`.
pub const MIN_SAMPLES: usize = 1000;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags or parameters outside an operation's domain.
    #[error("{0}")]
    Validation(String),
    /// A computation that should verify something could not be completed.
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl From<hullwalk::Error> for CliError {
    fn from(e: hullwalk::Error) -> Self {
        use hullwalk::Error::*;
        match e {
            InvalidArgument(_) | InvalidIndices { .. } | CapExceeded { .. } => {
                CliError::Validation(e.to_string())
            }
            Degenerate(_) | IllConditioned { .. } | Overflow => CliError::Verification(e.to_string()),
        }
    }
}

/// A report plus whether the command's checks passed.
pub struct Outcome {
    pub report: Report,
    pub passed: bool,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome { report, passed: true }
    }
}

/// Global settings shared by all commands.
pub struct Settings {
    pub workers: Option<usize>,
    pub eps: f64,
}

impl Settings {
    fn install<T: Send>(&self, job: impl FnOnce() -> T + Send) -> Result<T, CliError> {
        match self.workers {
            Some(0) => Err(CliError::Validation("--workers must be positive".into())),
            Some(w) => Ok(rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| CliError::Validation(format!("cannot start worker pool: {e}")))?
                .install(job)),
            None => Ok(job()),
        }
    }
}

/// Parse `"1,3,5-8"` into `[1, 3, 5, 6, 7, 8]`.
pub fn parse_grid(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Validation(format!("cannot parse range list {s:?}"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        match part.split_once('-') {
            Some((a, b)) => {
                let a: usize = a.trim().parse().map_err(|_| bad())?;
                let b: usize = b.trim().parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

fn exact_fields(q: &BigRational) -> (String, String) {
    (fraction_string(q), decimal_string(q, 15))
}

fn is_bridge(kind: &PathKind) -> bool {
    kind.bridge
}

pub fn exact(args: &ExactArgs) -> Result<Outcome, CliError> {
    let ns = parse_grid(&args.n)?;
    let ds = parse_grid(&args.d)?;
    let mut rows = Vec::new();
    let mut table = Vec::new();
    for &n in &ns {
        for &d in &ds {
            let entries: Vec<(Value, BigRational)> = if args.total {
                vec![(json!("total"), closed_forms::total_expected_faces(n, d)?)]
            } else {
                let ks: Vec<usize> = match args.k {
                    Some(k) => vec![k],
                    None => (0..d).collect(),
                };
                ks.into_iter()
                    .map(|k| Ok((json!(k), closed_forms::expected_faces_walk(n, d, k)?)))
                    .collect::<Result<_, hullwalk::Error>>()?
            };
            for (k, q) in entries {
                let (frac, dec) = exact_fields(&q);
                rows.push(json!({ "n": n, "d": d, "k": k, "exact": &frac, "decimal": &dec }));
                let k_cell = k.as_str().map_or_else(|| k.to_string(), str::to_string);
                table.push(vec![n.to_string(), d.to_string(), k_cell, frac, dec]);
            }
        }
    }
    Ok(Outcome::ok(Report::new(
        "exact",
        json!({ "quantity": "expected_faces_walk", "rows": rows }),
        &["n", "d", "k", "exact", "decimal"],
        table,
    )))
}

pub fn faceprob(args: &FaceprobArgs) -> Result<Outcome, CliError> {
    let bridge = is_bridge(&args.kind);
    let q = if bridge {
        closed_forms::face_prob_bridge(args.n, args.d, &args.indices)?
    } else {
        closed_forms::face_prob_walk(args.n, args.d, &args.indices)?
    };
    let path = if bridge { "bridge" } else { "walk" };
    let (frac, dec) = exact_fields(&q);
    let indices = args.indices.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    Ok(Outcome::ok(Report::new(
        "faceprob",
        json!({ "path": path, "n": args.n, "d": args.d, "indices": args.indices, "exact": frac, "decimal": dec }),
        &["path", "n", "d", "indices", "exact", "decimal"],
        vec![vec![path.into(), args.n.to_string(), args.d.to_string(), indices, frac, dec]],
    )))
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub fn absorb(args: &AbsorbArgs) -> Result<Outcome, CliError> {
    let q = closed_forms::absorption_prob(args.d, &args.walks, &args.bridges)?;
    let (frac, dec) = exact_fields(&q);
    Ok(Outcome::ok(Report::new(
        "absorb",
        json!({ "d": args.d, "walks": args.walks, "bridges": args.bridges, "exact": frac, "decimal": dec }),
        &["d", "walks", "bridges", "exact", "decimal"],
        vec![vec![args.d.to_string(), join(&args.walks), join(&args.bridges), frac, dec]],
    )))
}

fn required<T: Copy>(v: Option<T>, flag: &str, target: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Validation(format!("--{flag} is required for target {target}")))
}

pub fn simulate(args: &SimulateArgs, settings: &Settings) -> Result<Outcome, CliError> {
    if args.samples < MIN_SAMPLES {
        return Err(CliError::Validation(format!(
            "--samples must be at least {MIN_SAMPLES}, got {}",
            args.samples
        )));
    }
    if settings.workers == Some(0) {
        return Err(CliError::Validation("--workers must be positive".into()));
    }
    let cfg =
        McConfig { samples: args.samples, seed: args.seed, eps: settings.eps, workers: settings.workers };
    let bridge = is_bridge(&args.kind);
    let path_model = |n: usize| -> Result<PathModel, CliError> {
        Ok(if bridge {
            PathModel::Bridge(BridgeSpec::new(n, args.d)?)
        } else {
            PathModel::Walk(WalkSpec::symmetric(n, args.d)?)
        })
    };
    let mut params = serde_json::Map::new();
    params.insert("d".into(), json!(args.d));
    let (target, result) = match args.target {
        Target::FaceProb => {
            let n = required(args.n, "n", "face-prob")?;
            let model = path_model(n)?;
            let exact = if bridge {
                closed_forms::face_prob_bridge(n, args.d, &args.indices)?
            } else {
                closed_forms::face_prob_walk(n, args.d, &args.indices)?
            };
            params.insert("path".into(), json!(if bridge { "bridge" } else { "walk" }));
            params.insert("n".into(), json!(n));
            params.insert("indices".into(), json!(args.indices));
            let r = compare_with_rerun(&exact, &cfg, args.threshold, |c| {
                montecarlo::estimate_face_prob(&model, &args.indices, c)
            })?;
            ("face-prob", r)
        }
        Target::ExpectedFaces => {
            let n = required(args.n, "n", "expected-faces")?;
            let k = required(args.k, "k", "expected-faces")?;
            let model = path_model(n)?;
            let exact = if bridge {
                closed_forms::expected_faces_bridge(n, args.d, k)?
            } else {
                closed_forms::expected_faces_walk(n, args.d, k)?
            };
            params.insert("path".into(), json!(if bridge { "bridge" } else { "walk" }));
            params.insert("n".into(), json!(n));
            params.insert("k".into(), json!(k));
            let r = compare_with_rerun(&exact, &cfg, args.threshold, |c| {
                montecarlo::estimate_expected_faces(&model, k, c)
            })?;
            ("expected-faces", r)
        }
        Target::Absorption => {
            let spec = JointSpec::new(args.d, args.walks.clone(), args.bridges.clone())?;
            let exact = closed_forms::absorption_prob(args.d, &args.walks, &args.bridges)?;
            params.insert("walks".into(), json!(args.walks));
            params.insert("bridges".into(), json!(args.bridges));
            let r = compare_with_rerun(&exact, &cfg, args.threshold, |c| {
                montecarlo::estimate_absorption(&spec, c)
            })?;
            ("absorption", r)
        }
        Target::ShiftAverage => {
            let n = required(args.n, "n", "shift-average")?;
            let (spec, law) = match args.law {
                Law::Symmetric => (WalkSpec::symmetric(n, args.d)?, "symmetric"),
                Law::Nonsymmetric => (WalkSpec::nonsymmetric(n, args.d, args.t)?, "nonsymmetric"),
            };
            let mode = match args.mode {
                Mode::Cyclic => ShiftMode::Cyclic,
                Mode::Windowed => ShiftMode::Windowed,
            };
            let exact = closed_forms::shift_avg_face_prob(n, args.d, &args.lags)?;
            params.insert("n".into(), json!(n));
            params.insert("lags".into(), json!(args.lags));
            params.insert("law".into(), json!(law));
            if args.law == Law::Nonsymmetric {
                params.insert("t".into(), json!(args.t));
            }
            params.insert("mode".into(), json!(format!("{:?}", args.mode).to_lowercase()));
            let r = compare_with_rerun(&exact, &cfg, args.threshold, |c| {
                montecarlo::estimate_shift_average(&spec, &args.lags, mode, c)
            })?;
            ("shift-average", r)
        }
    };
    let (report, rerun) = result;
    let (frac, dec) = exact_fields(&report.exact);
    let e = &report.estimate;
    let body = json!({
        "target": target,
        "parameters": Value::Object(params),
        "exact": frac,
        "exact_decimal": dec,
        "p_hat": e.p_hat,
        "stderr": e.stderr,
        "z": report.z,
        "threshold": report.threshold,
        "pass": report.pass,
        "seed": args.seed,
        "rerun": rerun,
        "estimate_seed": e.seed,
        "n_samples": e.n_samples,
        "n_discarded": e.n_discarded,
    });
    let row = vec![
        target.to_string(),
        frac,
        dec,
        e.p_hat.to_string(),
        e.stderr.to_string(),
        report.z.to_string(),
        report.pass.to_string(),
        args.seed.to_string(),
        rerun.to_string(),
        e.n_samples.to_string(),
        e.n_discarded.to_string(),
    ];
    Ok(Outcome {
        passed: report.pass,
        report: Report::new(
            "simulate",
            body,
            &[
                "target",
                "exact",
                "exact_decimal",
                "p_hat",
                "stderr",
                "z",
                "pass",
                "seed",
                "rerun",
                "n_samples",
                "n_discarded",
            ],
            vec![row],
        ),
    })
}

pub fn chambers(args: &ChambersArgs, settings: &Settings) -> Result<Outcome, CliError> {
    let spec = ArrangementSpec::new(args.b.clone(), args.a.clone())?;
    let n = spec.ambient_dim();
    let codim = args.d + args.a.len();
    if args.d == 0 || codim >= n {
        return Err(CliError::Validation(format!(
            "d = {} with {} A-blocks gives codimension {codim}, which needs to lie in 1..{n}",
            args.d,
            args.a.len()
        )));
    }
    let hyperplanes = reflection_hyperplanes(&spec);
    let product = char_poly_product(&spec);
    let whitney = match char_poly_whitney(&hyperplanes, n) {
        Ok(p) => Some(p),
        Err(hullwalk::Error::CapExceeded { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let regions = zaslavsky_regions(&product, n);
    let order = spec.group_order();
    let predicted = predicted_intersect_count(&product, n, codim)?;
    let fraction = BigRational::new(predicted.clone(), order.clone());
    let absorption = closed_forms::absorption_prob(args.d, &args.b, &args.a)?;
    let joint = JointSpec::new(args.d, args.b.clone(), args.a.clone())?;
    if order > BigInt::from(GROUP_CAP) {
        return Err(CliError::Validation(format!("group order {order} exceeds {GROUP_CAP}")));
    }

    let eps = settings.eps;
    let counts: Vec<u64> = settings.install(|| {
        (0..args.trials as u64)
            .into_par_iter()
            .map(|trial| -> Result<u64, hullwalk::Error> {
                let mut rng = stream_rng(args.seed, trial);
                let v = loop {
                    let paths = sample_joint_with(&joint, &mut rng);
                    match kernel_intersection_basis(&increment_matrix(&paths)?, &spec) {
                        Ok(v) => break v,
                        Err(e) if e.is_sample_degeneracy() => continue,
                        Err(e) => return Err(e),
                    }
                };
                Ok(chamber_intersect_count(&spec, &v, eps, GROUP_CAP)?.intersecting)
            })
            .collect::<Result<Vec<u64>, _>>()
    })??;
    let mut histogram: BTreeMap<u64, usize> = BTreeMap::new();
    for &c in &counts {
        *histogram.entry(c).or_default() += 1;
    }
    let matches = counts.iter().filter(|&&c| BigInt::from(c) == predicted).count();
    let whitney_ok = whitney.as_ref().map(|w| *w == product);
    let passed =
        matches == counts.len() && whitney_ok != Some(false) && fraction == absorption && regions == order;

    let body = json!({
        "b": args.b,
        "a": args.a,
        "d": args.d,
        "ambient_dim": n,
        "codim": codim,
        "hyperplanes": hyperplanes.len(),
        "group_order": order.to_string(),
        "char_poly_product": product.to_string(),
        "char_poly_whitney": whitney.as_ref().map(ToString::to_string),
        "whitney_matches_product": whitney_ok,
        "regions": regions.to_string(),
        "predicted_intersect_count": predicted.to_string(),
        "predicted_fraction": fraction_string(&fraction),
        "absorption_prob": fraction_string(&absorption),
        "trials": args.trials,
        "seed": args.seed,
        "matches": matches,
        "enumerated_counts": histogram.iter().map(|(c, t)| (c.to_string(), json!(t))).collect::<serde_json::Map<_, _>>(),
        "all_match": passed,
    });
    let row = vec![
        join(&args.b),
        join(&args.a),
        args.d.to_string(),
        order.to_string(),
        product.to_string(),
        whitney.as_ref().map(ToString::to_string).unwrap_or_default(),
        regions.to_string(),
        predicted.to_string(),
        args.trials.to_string(),
        matches.to_string(),
        passed.to_string(),
    ];
    Ok(Outcome {
        passed,
        report: Report::new(
            "chambers",
            body,
            &[
                "b",
                "a",
                "d",
                "group_order",
                "char_poly_product",
                "char_poly_whitney",
                "regions",
                "predicted",
                "trials",
                "matches",
                "all_match",
            ],
            vec![row],
        ),
    })
}

#[derive(Default)]
struct Battery {
    checks: usize,
    failure: Option<Failure>,
}

impl Battery {
    fn record(
        &mut self,
        identity: &'static str,
        n: usize,
        d: usize,
        k: Option<usize>,
        lhs: BigRational,
        rhs: BigRational,
    ) {
        self.checks += 1;
        if lhs != rhs && self.failure.is_none() {
            self.failure = Some(Failure { identity, n, d, k, lhs, rhs });
        }
    }
}

struct Failure {
    identity: &'static str,
    n: usize,
    d: usize,
    k: Option<usize>,
    lhs: BigRational,
    rhs: BigRational,
}

pub fn identity_check(args: &IdentityArgs) -> Result<Outcome, CliError> {
    if args.max_n >= BIGSUM_MAX_N {
        return Err(CliError::Validation(format!(
            "--max-n must be below {BIGSUM_MAX_N}, got {}",
            args.max_n
        )));
    }
    let corrupt = match args.corrupt_stirling.as_deref() {
        None => None,
        Some([n, m]) => Some((*n, *m as i64)),
        Some(_) => return Err(CliError::Validation("--corrupt-stirling takes N,M".into())),
    };
    let first_kind = |n: usize, m: i64| {
        let c = stirling_first(n, m);
        if corrupt == Some((n, m)) {
            c + 1
        } else {
            c
        }
    };

    let mut battery = Battery::default();
    'outer: for n in 1..=args.max_n {
        for d in 1..=args.max_d.min(n) {
            let mut sum = BigRational::new(0.into(), 1.into());
            for k in 0..d {
                let stirling = closed_forms::expected_faces_walk_with(n, d, k, first_kind)?;
                battery.record(
                    "stirling_form_equals_tuple_sum",
                    n,
                    d,
                    Some(k),
                    stirling.clone(),
                    closed_forms::expected_faces_walk_bigsum(n, d, k)?,
                );
                battery.record(
                    "walk_equals_longer_bridge",
                    n,
                    d,
                    Some(k),
                    stirling.clone(),
                    closed_forms::expected_faces_bridge(n + 1, d, k)?,
                );
                sum += stirling;
            }
            battery.record(
                "total_equals_sum_over_k",
                n,
                d,
                None,
                closed_forms::total_expected_faces(n, d)?,
                sum,
            );
            let walk = closed_forms::absorption_prob(d, &[n], &[])?
                + closed_forms::non_absorption_prob(d, &[n], &[])?;
            battery.record("walk_absorption_complement", n, d, None, walk, BigRational::one());
            let bridge = closed_forms::absorption_prob(d, &[], &[n + 1])?
                + closed_forms::non_absorption_prob(d, &[], &[n + 1])?;
            battery.record("bridge_absorption_complement", n, d, None, bridge, BigRational::one());
            if battery.failure.is_some() {
                break 'outer;
            }
        }
    }

    let Battery { checks, failure } = battery;
    let passed = failure.is_none();
    let first_failure = failure.as_ref().map(|f| {
        json!({
            "identity": f.identity,
            "n": f.n,
            "d": f.d,
            "k": f.k,
            "lhs": fraction_string(&f.lhs),
            "rhs": fraction_string(&f.rhs),
        })
    });
    if let Some(f) = &failure {
        eprintln!(
            "identity {} fails at n={} d={} k={}: {} != {}",
            f.identity,
            f.n,
            f.d,
            f.k.map_or("-".into(), |k| k.to_string()),
            fraction_string(&f.lhs),
            fraction_string(&f.rhs)
        );
    }
    let body = json!({
        "max_n": args.max_n,
        "max_d": args.max_d,
        "checks": checks,
        "pass": passed,
        "first_failure": first_failure,
    });
    let row = vec![
        args.max_n.to_string(),
        args.max_d.to_string(),
        checks.to_string(),
        passed.to_string(),
        failure.as_ref().map(|f| f.identity.to_string()).unwrap_or_default(),
        failure
            .as_ref()
            .map(|f| format!("n={} d={} k={}", f.n, f.d, f.k.map_or("-".into(), |k| k.to_string())))
            .unwrap_or_default(),
    ];
    Ok(Outcome {
        passed,
        report: Report::new(
            "identity-check",
            body,
            &["max_n", "max_d", "checks", "pass", "failing_identity", "failing_tuple"],
            vec![row],
        ),
    })
}
