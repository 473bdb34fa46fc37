use super::config::Method;
use super::sweep::PhaseGridResult;
use crate::error::{Error, Result};

/// Per `β` row, the `α` at which the recovery fraction first reaches 0.5,
/// interpolated linearly between the last cell below 0.5 and the first cell
/// at or above it. Cells without trials are ignored. A row that never
/// reaches 0.5, or already starts at or above it, gives `None`.
pub fn threshold_profile(result: &PhaseGridResult, method: Method) -> Result<Vec<(f64, Option<f64>)>> {
    let mut records: Vec<_> = result.for_method(method).collect();
    records.sort_by(|a, b| a.beta.total_cmp(&b.beta));
    let mut rows: Vec<(f64, Vec<(f64, f64)>)> = Vec::new();
    for r in records {
        match rows.last_mut() {
            Some((b, cells)) if *b == r.beta => cells.push((r.alpha, r.recovery)),
            _ => rows.push((r.beta, vec![(r.alpha, r.recovery)])),
        }
    }
    let mut out = Vec::with_capacity(rows.len());
    for (beta, mut cells) in rows {
        if cells.len() < 3 {
            return Err(Error::invalid(format!("beta = {beta} has {} alpha steps, need 3", cells.len())));
        }
        cells.sort_by(|a, b| a.0.total_cmp(&b.0));
        cells.retain(|c| !c.1.is_nan());
        let crossing = cells.iter().position(|c| c.1 >= 0.5);
        let alpha = match crossing {
            Some(i) if i > 0 => {
                let (a0, r0) = cells[i - 1];
                let (a1, r1) = cells[i];
                Some(a0 + (0.5 - r0) * (a1 - a0) / (r1 - r0))
            }
            _ => None,
        };
        out.push((beta, alpha));
    }
    Ok(out)
}
