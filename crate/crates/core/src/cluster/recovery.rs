use crate::error::{Error, Result};
use crate::graph::ClusterLabels;

/// Whether `pred` equals `truth` up to a bijective relabeling of `[0, k)`.
pub fn exact_recovery(pred: &ClusterLabels, truth: &ClusterLabels) -> Result<bool> {
    if pred.len() != truth.len() {
        return Err(Error::invalid(format!("label vectors differ in length: {} vs {}", pred.len(), truth.len())));
    }
    if pred.k() != truth.k() {
        return Err(Error::invalid(format!("cluster counts differ: {} vs {}", pred.k(), truth.k())));
    }
    let k = truth.k();
    let mut forward = vec![usize::MAX; k];
    let mut backward = vec![usize::MAX; k];
    for (&p, &t) in pred.as_slice().iter().zip(truth.as_slice()) {
        if forward[p] == usize::MAX && backward[t] == usize::MAX {
            forward[p] = t;
            backward[t] = p;
        } else if forward[p] != t || backward[t] != p {
            return Ok(false);
        }
    }
    Ok(forward.iter().all(|&t| t != usize::MAX))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(v: &[usize]) -> ClusterLabels {
        ClusterLabels::new(v.to_vec(), 2).unwrap()
    }

    #[test]
    fn examples() {
        assert!(exact_recovery(&l(&[0, 0, 1, 1]), &l(&[1, 1, 0, 0])).unwrap());
        assert!(!exact_recovery(&l(&[0, 1, 1, 1]), &l(&[0, 0, 1, 1])).unwrap());
        assert!(!exact_recovery(&l(&[0, 0, 0, 0]), &l(&[0, 0, 1, 1])).unwrap());
        assert!(exact_recovery(&l(&[0, 1]), &l(&[0, 1, 1])).is_err());
    }

    #[test]
    fn unused_label_is_not_a_bijection() {
        let pred = ClusterLabels::new(vec![0, 0, 1], 3).unwrap();
        let truth = ClusterLabels::new(vec![2, 2, 0], 3).unwrap();
        assert!(!exact_recovery(&pred, &truth).unwrap());
    }
}
