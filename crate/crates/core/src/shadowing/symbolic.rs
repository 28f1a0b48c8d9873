use crate::error::TraceError;
use crate::systems::{DynamicalSystem, Shift, SymbolPoint};

use super::{Extension, PseudoOrbit, TracingResult};

/// Traces a shift pseudo-orbit by its diagonal `y_k = x^{(k)}_0`.
///
/// Outside the window `y` follows the first point to the left and the
/// orbit of the last point to the right; a periodic window yields the
/// periodic point of its diagonal word.
pub fn trace_sft(shift: &Shift, po: &PseudoOrbit<SymbolPoint>) -> Result<TracingResult<SymbolPoint>, TraceError> {
    let w = &po.window;
    if w.is_empty() {
        return Err(TraceError::EmptyWindow);
    }
    let tm = shift.transitions();
    let diag: Vec<u8> = w.iter().map(|x| x.at(0)).collect();
    let mut steps: Vec<(usize, usize)> = (0..diag.len() - 1).map(|k| (k, k + 1)).collect();
    if let Extension::Periodic(p) = po.extension {
        if p != w.len() {
            return Err(TraceError::BadPeriod { period: p, len: w.len() });
        }
        steps.push((p - 1, 0));
    }
    for (i, j) in steps {
        if !tm.allowed(diag[i], diag[j]) {
            return Err(TraceError::ForbiddenDiagonal(diag[i] as usize, diag[j] as usize, i));
        }
    }
    match po.extension {
        Extension::Periodic(p) => {
            let y = SymbolPoint::periodic(&diag);
            shift.check_point(&y)?;
            let mut r = TracingResult::from_anchor(shift, po, 0, y.clone());
            r.period = (y.shifted(p as i64) == y).then_some(p);
            Ok(r)
        }
        Extension::OrbitTail => {
            let last = shift.forward(w.last().expect("nonempty"));
            let y = SymbolPoint::glue(&w[0], &diag, &last);
            shift.check_point(&y)?;
            Ok(TracingResult::from_anchor(shift, po, 0, y))
        }
    }
}
