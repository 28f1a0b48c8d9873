//! End-to-end demonstrations of the counterexamples separating metric and
//! topological notions, and of the spectral decomposition.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chains::is_chain;
use crate::entourage::Entourage;
use crate::error::SpectralError;
use crate::hyperbolic::{certify_linear_expansive, expansive_check, ExpansiveVerdict, Refutation};
use crate::metric::Metric;
use crate::report::{decomposition_report, Report, Table};
use crate::shadowing::{
    drift_pseudo_orbit, harmonic_stall_walk, perturbed_pseudo_orbit, refute_harmonic_tracing, refute_strip_tracing,
    trace_strips,
};
use crate::spectral::{spectral_decompose, SpectralConfig, Verdict};
use crate::systems::{
    plane_two_metrics, shrinking_intervals, DynamicalSystem, HarmonicPoints, Shift, StripPoint, TransitionMatrix,
};

pub const DEMOS: [&str; 4] = ["ex22", "ex23", "sec5", "decomposition"];

pub fn run_demo(name: &str) -> Result<Report, SpectralError> {
    match name {
        "ex22" => Ok(ex22()),
        "ex23" => ex23(),
        "sec5" => sec5(),
        "decomposition" => decomposition(),
        _ => Err(SpectralError::UnknownDemo(name.to_string())),
    }
}

/// The block-diagonal shift with two irreducible blocks.
pub fn two_block_shift() -> Shift {
    Shift::new(TransitionMatrix::parse_rows(&["1100", "1100", "0011", "0011"]).expect("valid rows")).named("sft-2block")
}

/// `diag(2, 1/2)` is expansive for the Euclidean metric but not for the
/// chordal metric of the sphere.
fn ex22() -> Report {
    const HORIZON: usize = 60;
    let diag = plane_two_metrics();
    let mut rep = Report::new("demo");
    rep.kv("demo", "ex22").kv("system", diag.name()).kv("horizon", HORIZON);

    let certified = certify_linear_expansive(&diag, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let pairs: Vec<([f64; 2], [f64; 2])> = (0..200)
        .map(|_| {
            let x = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let y = [x[0] + rng.random_range(-0.5..0.5), x[1] + rng.random_range(-0.5..0.5)];
            (x, y)
        })
        .collect();
    let n_euclid = Entourage::ball("plane", Metric::euclidean(), 1.0);
    let euclid = expansive_check(&diag, &n_euclid, &pairs, HORIZON).expect("positive horizon");
    rep.kv("euclidean_certificate", certified.label())
        .kv("euclidean_sampled_pairs", pairs.len())
        .kv("euclidean_verdict", euclid.verdict.label());
    let mut sep = Table::new("euclidean_separations", &["x1", "x2", "y1", "y2", "iterate"]);
    for ((x, y), s) in pairs.iter().zip(&euclid.separations).take(20) {
        sep.push(vec![
            format!("{:?}", x[0]),
            format!("{:?}", x[1]),
            format!("{:?}", y[0]),
            format!("{:?}", y[1]),
            s.map_or("none".into(), |k| k.to_string()),
        ]);
    }

    let chordal = diag.chordal();
    let sphere = diag.clone().with_metric(chordal.clone());
    let n_sphere = Entourage::ball("plane", chordal.clone(), 0.1);
    let r = 2f64.powi(20);
    let trapped = ([r, 0.0], [r + 1.0, 0.0]);
    let sph = expansive_check(&sphere, &n_sphere, &[trapped], HORIZON).expect("positive horizon");
    let worst = (-(HORIZON as i64)..=HORIZON as i64)
        .map(|k| chordal.distance(&sphere.iterate(&trapped.0, k), &sphere.iterate(&trapped.1, k)))
        .fold(0.0, f64::max);
    rep.kv("sphere_entourage", "ball(0.1, chordal)")
        .kv("sphere_verdict", sph.verdict.label())
        .kv("sphere_witness", format!("({r}, 0) ({}, 0)", r + 1.0))
        .kv("sphere_witness_max_distance", worst);
    let mut wit = Table::new("sphere_witness", &["x1", "x2", "y1", "y2", "iterate"]);
    wit.push(vec![
        format!("{r:?}"),
        "0.0".into(),
        format!("{:?}", r + 1.0),
        "0.0".into(),
        sph.separations[0].map_or("none".into(), |k| k.to_string()),
    ]);
    rep.tables.push(sep);
    rep.tables.push(wit);

    let euclid_ok = matches!(certified, ExpansiveVerdict::Proved { .. }) && euclid.verdict == ExpansiveVerdict::Consistent;
    let sphere_ok = matches!(sph.verdict, ExpansiveVerdict::Refuted { .. }) && worst < 0.1;
    let refutation = match sph.verdict {
        ExpansiveVerdict::Refuted {
            kind: Refutation::Provable,
            ..
        } => "provable",
        ExpansiveVerdict::Refuted { .. } => "within horizon",
        _ => "none",
    };
    rep.kv("sphere_refutation", refutation);
    rep.verdict = Verdict::check(euclid_ok, || "euclidean expansivity not confirmed".into())
        .and(Verdict::check(sphere_ok, || "no trapped pair under the sphere metric".into()));
    rep
}

/// Shrinking strips have metric shadowing; the conjugate unit strips do not.
fn ex23() -> Result<Report, SpectralError> {
    const DELTA: f64 = 0.05;
    const EPS_B: f64 = 0.4;
    let (a, b, _) = shrinking_intervals(40);
    let mut rep = Report::new("demo");
    rep.kv("demo", "ex23").kv("system_a", a.name()).kv("system_b", b.name());

    let eps_a = 2.0 * DELTA;
    let mut t = Table::new("system_a_traces", &["seed", "start_fiber", "defect_bound", "error", "max_fiber_diameter"]);
    let mut a_ok = true;
    for seed in 0..20u64 {
        let n0 = -12 + (seed % 5) as i64;
        let x0 = StripPoint::new(n0, 0.3 * a.height(n0));
        let po = perturbed_pseudo_orbit(&a, x0, 25, DELTA, seed);
        let r = trace_strips(&a, &po)?;
        let fiber = po.window.iter().map(|p| a.height(p.n)).fold(0.0, f64::max);
        a_ok &= r.error_bound <= eps_a && po.defect_bound <= DELTA;
        t.push(vec![
            seed.to_string(),
            n0.to_string(),
            format!("{:e}", po.defect_bound),
            format!("{:e}", r.error_bound),
            format!("{fiber:e}"),
        ]);
    }
    rep.kv("delta_a", DELTA).kv("epsilon_a", eps_a).kv("system_a_traced", a_ok);

    let drift = drift_pseudo_orbit(&b, 12, 0.09);
    let refuted = refute_strip_tracing(&b, &drift, EPS_B);
    rep.kv("drift_steps", 12)
        .kv("drift_step", 0.09)
        .kv("drift_defect_bound", drift.defect_bound)
        .kv("drift_total", drift.window.last().map_or(0.0, |p| p.y) - drift.window[0].y)
        .kv("epsilon_b", EPS_B);
    match &refuted {
        Some(r) => {
            rep.kv("refutation_indices", format!("{} {}", r.indices.0, r.indices.1))
                .kv("refutation_spread", r.spread);
        }
        None => {
            rep.kv("refutation_indices", "none");
        }
    }
    rep.tables.push(t);
    rep.verdict = Verdict::check(a_ok, || "system A failed to trace a sampled pseudo-orbit".into())
        .and(Verdict::check(refuted.is_some(), || "drift pseudo-orbit was not refuted".into()));
    Ok(rep)
}

/// Harmonic partial sums under the identity: with `D[x] = {x}` every
/// pseudo-orbit is an orbit, while the stall-walk defeats metric tracing.
fn sec5() -> Result<Report, SpectralError> {
    const DELTA: f64 = 0.1;
    const EPS: f64 = 1.0;
    let h = HarmonicPoints::new(10_000);
    let mut rep = Report::new("demo");
    rep.kv("demo", "sec5").kv("system", h.name());

    let diag = Entourage::diagonal("harmonic");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut topo_ok = true;
    for _ in 0..50 {
        let x = rng.random_range(1..=h.window());
        let po = vec![x; 20];
        // the only D-chains are constant, and each is its own tracing orbit
        topo_ok &= is_chain(&h, &po, &diag)? && po.iter().all(|&p| h.iterate(&x, 1) == p);
        topo_ok &= !is_chain(&h, &[x, x % h.window() + 1], &diag)?;
    }
    rep.kv("topological_entourage", "diagonal").kv("topological_shadowing", topo_ok);

    let n = (1.0 / DELTA).floor() as usize + 1;
    let po = harmonic_stall_walk(&h, n, 200);
    let refuted = refute_harmonic_tracing(&h, &po, EPS);
    rep.kv("delta", DELTA)
        .kv("epsilon", EPS)
        .kv("start_index", n)
        .kv("walk_length", po.len())
        .kv("defect_bound", po.defect_bound);
    let mut t = Table::new("refutation", &["candidate", "witness_index", "gap"]);
    if let Some(r) = &refuted {
        for (c, k) in r.candidates.iter().zip(&r.witnesses) {
            t.push(vec![c.to_string(), k.to_string(), format!("{:e}", h.distance(c, &po.window[*k]))]);
        }
    }
    rep.tables.push(t);
    rep.verdict = Verdict::check(topo_ok, || "a diagonal pseudo-orbit failed to trace".into())
        .and(Verdict::check(po.defect_bound < DELTA, || "stall walk is not a delta-pseudo-orbit".into()))
        .and(Verdict::check(refuted.is_some(), || "stall walk was not refuted".into()));
    Ok(rep)
}

fn decomposition() -> Result<Report, SpectralError> {
    let sft = two_block_shift();
    let dec = spectral_decompose(&sft, &SpectralConfig::default())?;
    let mut rep = decomposition_report(&dec);
    rep.kind = "demo".into();
    rep.header.insert(0, ("demo".into(), "decomposition".into()));
    rep.verdict = dec.verdict.clone().and(Verdict::check(dec.basic_sets.len() == 2, || {
        format!("{} basic sets instead of 2", dec.basic_sets.len())
    }));
    Ok(rep)
}
