use crate::entourage::Entourage;
use crate::systems::DynamicalSystem;

use super::{Extension, PseudoOrbit, Uniqueness};

enum PairFate {
    Separated,
    /// The pair returns to itself after this many steps without leaving `E²`.
    Recurrent(usize),
    Open,
}

fn pair_fate<S: DynamicalSystem>(sys: &S, a: &S::Point, b: &S::Point, e2: &Entourage<S::Point>, horizon: usize) -> PairFate {
    let (mut fa, mut fb) = (a.clone(), b.clone());
    let (mut ba, mut bb) = (a.clone(), b.clone());
    let mut returned = None;
    for n in 1..=horizon {
        fa = sys.forward(&fa);
        fb = sys.forward(&fb);
        if !e2.contains(&fa, &fb) {
            return PairFate::Separated;
        }
        if returned.is_none() && fa == *a && fb == *b {
            returned = Some(n);
        }
        ba = sys.backward(&ba);
        bb = sys.backward(&bb);
        if !e2.contains(&ba, &bb) {
            return PairFate::Separated;
        }
    }
    match returned {
        Some(n) => PairFate::Recurrent(n),
        None => PairFate::Open,
    }
}

fn traces<S: DynamicalSystem>(sys: &S, y: &S::Point, po: &PseudoOrbit<S::Point>, e: &Entourage<S::Point>, span: i64) -> bool {
    let lo = po.start;
    let hi = po.start + span.max(po.len() as i64) - 1;
    let mut cur = y.clone();
    for k in lo..=hi {
        if !e.contains(&cur, &po.at(sys, k)) {
            return false;
        }
        cur = sys.forward(&cur);
    }
    true
}

/// Decides whether the candidate tracers of a pseudo-orbit are unique.
///
/// `Yes` when every distinct pair of candidates leaves `e2` within
/// `horizon` steps in some direction, so no two of them can both
/// `E`-trace. `No` with a witness when a distinct pair returns to itself
/// without leaving `e2` and both candidates `E`-trace the pseudo-orbit over
/// a common period. `Undetermined` otherwise.
pub fn unique_tracing_check<S: DynamicalSystem>(
    sys: &S,
    po: &PseudoOrbit<S::Point>,
    candidates: &[S::Point],
    e: &Entourage<S::Point>,
    e2: &Entourage<S::Point>,
    horizon: usize,
) -> Uniqueness<S::Point> {
    let mut distinct: Vec<S::Point> = Vec::new();
    for c in candidates {
        if !distinct.contains(c) {
            distinct.push(c.clone());
        }
    }
    if distinct.len() < 2 {
        return Uniqueness::Undetermined;
    }
    let mut all_separated = true;
    for i in 0..distinct.len() {
        for j in i + 1..distinct.len() {
            let (a, b) = (&distinct[i], &distinct[j]);
            match pair_fate(sys, a, b, e2, horizon) {
                PairFate::Separated => {}
                PairFate::Recurrent(n) => {
                    all_separated = false;
                    let span = match po.extension {
                        Extension::Periodic(p) => (n * p) as i64,
                        Extension::OrbitTail if n == 1 => po.len() as i64,
                        Extension::OrbitTail => continue,
                    };
                    if traces(sys, a, po, e, span) && traces(sys, b, po, e, span) {
                        return Uniqueness::No {
                            witness: (a.clone(), b.clone()),
                        };
                    }
                }
                PairFate::Open => all_separated = false,
            }
        }
    }
    if all_separated {
        Uniqueness::Yes
    } else {
        Uniqueness::Undetermined
    }
}
