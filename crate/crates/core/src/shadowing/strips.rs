use crate::error::TraceError;
use crate::systems::{DynamicalSystem, HarmonicPoints, StripPoint, Strips};

use super::{Extension, PseudoOrbit, TracingResult};

/// Traces a strip pseudo-orbit whose points advance one fiber per step.
///
/// The tracer passes through the window point on the fiber closest to
/// `n = 0`; from there the map contracts fiber heights in both time
/// directions, so the gaps stay below twice the defect bound on the
/// shrinking strips.
pub fn trace_strips(sys: &Strips, po: &PseudoOrbit<StripPoint>) -> Result<TracingResult<StripPoint>, TraceError> {
    let w = &po.window;
    if w.is_empty() {
        return Err(TraceError::EmptyWindow);
    }
    for pair in w.windows(2) {
        if pair[1].n != pair[0].n + 1 {
            let d = sys.distance(&sys.forward(&pair[0]), &pair[1]);
            return Err(TraceError::DefectTooLarge(d, 1.0));
        }
    }
    let anchor = (0..w.len()).min_by_key(|&k| w[k].n.abs()).expect("nonempty");
    Ok(TracingResult::from_anchor(sys, po, anchor, w[anchor]))
}

/// `x_k = (k, min(k·step, 1))` for `k = 0..=steps` on unit strips: every
/// defect is at most `step` while the height drifts across the fiber.
pub fn drift_pseudo_orbit(sys: &Strips, steps: usize, step: f64) -> PseudoOrbit<StripPoint> {
    let window = (0..=steps)
        .map(|k| StripPoint::new(k as i64, (k as f64 * step).min(sys.height(k as i64))))
        .collect();
    PseudoOrbit::new(sys, window, Extension::OrbitTail)
}

/// Proof that no point `ε`-traces a unit-strip pseudo-orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct StripRefutation {
    /// Window indices `i`, `j` whose heights differ by more than `2ε`.
    pub indices: (usize, usize),
    pub spread: f64,
}

/// On unit strips every orbit keeps its height, and for `ε < 1` a tracer
/// must share the fibers of the pseudo-orbit; so no tracer exists once two
/// window heights differ by more than `2ε`.
pub fn refute_strip_tracing(sys: &Strips, po: &PseudoOrbit<StripPoint>, eps: f64) -> Option<StripRefutation> {
    let w = &po.window;
    if eps >= 1.0 || w.is_empty() || (0..w.len()).any(|k| sys.height(w[k].n) != 1.0) {
        return None;
    }
    if w.windows(2).any(|p| p[1].n != p[0].n + 1) {
        return None;
    }
    let lo = (0..w.len()).min_by(|&a, &b| w[a].y.total_cmp(&w[b].y))?;
    let hi = (0..w.len()).max_by(|&a, &b| w[a].y.total_cmp(&w[b].y))?;
    let spread = w[hi].y - w[lo].y;
    (spread > 2.0 * eps).then_some(StripRefutation {
        indices: (lo.min(hi), lo.max(hi)),
        spread,
    })
}

/// The pseudo-orbit that stays at `x_n` for all negative times and then
/// walks `x_n, x_{n+1}, …`; the window holds the walk.
pub fn harmonic_stall_walk(sys: &HarmonicPoints, n: usize, len: usize) -> PseudoOrbit<usize> {
    PseudoOrbit::new(sys, (n..n + len).collect(), Extension::OrbitTail)
}

/// Proof that no point `ε`-traces a stall-walk pseudo-orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicRefutation {
    /// Every fixed point within `ε` of the stalled value.
    pub candidates: Vec<usize>,
    /// For each candidate, a window index where the gap exceeds `ε`.
    pub witnesses: Vec<usize>,
}

/// Under the identity a tracer is a single point `x_m`. It must lie within
/// `ε` of the stalled value (the negative times), which leaves finitely many
/// candidates, and each is refuted at a window index where the walk is
/// farther than `ε` away.
pub fn refute_harmonic_tracing(sys: &HarmonicPoints, po: &PseudoOrbit<usize>, eps: f64) -> Option<HarmonicRefutation> {
    let first = *po.window.first()?;
    let mut candidates = Vec::new();
    let mut m = first;
    while m > 1 && sys.distance(&(m - 1), &first) <= eps {
        m -= 1;
    }
    while sys.distance(&m, &first) <= eps {
        candidates.push(m);
        m += 1;
    }
    let mut witnesses = Vec::with_capacity(candidates.len());
    for c in &candidates {
        let k = po.window.iter().position(|x| sys.distance(c, x) > eps)?;
        witnesses.push(k);
    }
    Some(HarmonicRefutation { candidates, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shadowing::perturbed_pseudo_orbit;

    #[test]
    fn shrinking_strips_trace_within_twice_delta() {
        let a = Strips::shrinking(40);
        for seed in 0..20 {
            let delta = 0.05;
            let po = perturbed_pseudo_orbit(&a, StripPoint::new(-10, 0.0005), 25, delta, seed);
            let r = trace_strips(&a, &po).unwrap();
            assert!(r.error_bound <= 2.0 * delta, "{}", r.error_bound);
        }
    }

    #[test]
    fn drift_is_untraceable_on_unit_strips() {
        let b = Strips::unit(40);
        let po = drift_pseudo_orbit(&b, 12, 0.09);
        assert!(po.defect_bound <= 0.09 + 1e-12);
        let r = refute_strip_tracing(&b, &po, 0.4).unwrap();
        assert_eq!(r.indices, (0, 12));
        assert!(refute_strip_tracing(&b, &po, 0.6).is_none());
    }

    #[test]
    fn stall_walk_is_untraceable() {
        let h = HarmonicPoints::new(20_000);
        let po = harmonic_stall_walk(&h, 11, 10_000);
        assert!(po.defect_bound < 0.1);
        let r = refute_harmonic_tracing(&h, &po, 1.0).unwrap();
        assert!(!r.candidates.is_empty());
        assert_eq!(r.candidates.len(), r.witnesses.len());
    }
}
