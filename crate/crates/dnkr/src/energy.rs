//! Intrinsic energy: the per-factor component statistic, the tensor
//! energy assembled from local energies and R-matrix moves, and the
//! statistic-preservation verifier.

use crate::bijection::phi_tilde;
use crate::crystal::{classical_component, Label, TensorElement};
use crate::rc::{cc, enumerate_rc, RiggedConfig, TensorSpec};
use crate::rmatrix::{apply_r, local_h, RCache};
use crate::rootdata::{Rank, Weight};
use crate::Result;

/// Energy of a single factor: how far below the top classical
/// component it sits.  Spinor crystals are single components.
pub fn factor_energy(rank: Rank, label: Label, col: &crate::columns::Column) -> i64 {
    if label.is_spinor(rank) {
        return 0;
    }
    let k = label.height(rank) as i64;
    let l = classical_component(rank, label, col) as i64;
    debug_assert!((k - l) % 2 == 0);
    (k - l) / 2
}

/// Per-term breakdown of one tensor energy evaluation.
#[derive(Clone, Debug)]
pub struct EnergyReport {
    pub value: i64,
    /// (i, j, contribution) for the pairwise local energies
    pub h_terms: Vec<(usize, usize, i64)>,
    /// (j, contribution) for the per-factor energies
    pub d_terms: Vec<(usize, i64)>,
}

/// Doubled-image factors carry the structure of their ambient relaxed
/// crystal; energy bookkeeping works there.
fn ambient_relabel(elem: &TensorElement) -> TensorElement {
    TensorElement::new(
        elem.factors()
            .iter()
            .map(|(l, c)| {
                let l = match l {
                    Label::En => Label::HatN,
                    Label::EnM1 => Label::HatBarN,
                    other => *other,
                };
                (l, c.clone())
            })
            .collect(),
    )
}

/// The intrinsic energy of a tensor element: local energies of every
/// pair pulled together by R-matrix moves, plus the factor energies
/// transported to the rightmost slot.  Positions count from the right.
pub fn tensor_energy(cache: &RCache, elem: &TensorElement) -> Result<EnergyReport> {
    let rank = cache.rank();
    let elem = &ambient_relabel(elem);
    let len = elem.len();
    let mut h_terms = Vec::new();
    let mut d_terms = Vec::new();
    let mut value = 0i64;
    for j in 1..=len {
        let mut cur = elem.clone();
        for i in (1..j).rev() {
            let h = local_h(cache, &cur, i)?;
            h_terms.push((i, j, h));
            value += h;
            cur = apply_r(cache, &cur, i)?;
        }
        // cur now carries the j-th factor at the rightmost slot
        let (label, col) = &cur.factors()[len - 1];
        debug_assert_eq!(*label, elem.factors()[len - j].0);
        let d = factor_energy(rank, *label, col);
        d_terms.push((j, d));
        value += d;
    }
    Ok(EnergyReport {
        value,
        h_terms,
        d_terms,
    })
}

pub fn energy(cache: &RCache, elem: &TensorElement) -> Result<i64> {
    Ok(tensor_energy(cache, elem)?.value)
}

/// Statistic preservation over one cell: every configuration must have
/// cocharge equal to the energy of its complement-image path.
pub fn verify_stat(
    cache: &RCache,
    lambda: &Weight,
    spec: &TensorSpec,
) -> Result<Vec<(RiggedConfig, i64, i64)>> {
    let rank = cache.rank();
    let mut failures = Vec::new();
    for rc in enumerate_rc(rank, lambda, spec)? {
        let path = phi_tilde(&rc)?;
        let d = energy(cache, &path)?;
        let c = cc(&rc);
        if c != d {
            failures.push((rc, c, d));
        }
    }
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::columns::Column;
    use crate::rootdata::fundamental_weight;

    fn rk(n: u8) -> Rank {
        Rank::new(n).unwrap()
    }

    fn col(top_down: &[i8]) -> Column {
        Column::from_top_down(top_down)
    }

    #[test]
    fn factor_energies() {
        let r = rk(4);
        assert_eq!(factor_energy(r, Label::Kr(2), &col(&[2, 1])), 0);
        assert_eq!(factor_energy(r, Label::Kr(2), &col(&[-1, 1])), 1);
        assert_eq!(factor_energy(r, Label::Kr(4), &col(&[4, 3, 2, 1])), 0);
        // hat columns measure against their own height
        assert_eq!(factor_energy(r, Label::Hat(3), &col(&[3, 2, 1])), 0);
        assert_eq!(
            factor_energy(r, Label::HatN, &col(&[-1, -2, 2, 1])),
            2
        );
    }

    #[test]
    fn worked_example_energy_is_ten() {
        let r = rk(4);
        let cache = RCache::new(r, None);
        let path = TensorElement::new(vec![
            (Label::Kr(1), col(&[-3])),
            (Label::Kr(1), col(&[-4])),
            (Label::Kr(2), col(&[-1, 1])),
            (Label::Kr(2), col(&[4, 3])),
            (Label::Kr(2), col(&[2, 1])),
        ]);
        let report = tensor_energy(&cache, &path).unwrap();
        assert_eq!(report.value, 10);
        assert_eq!(
            report.value,
            report.h_terms.iter().map(|t| t.2).sum::<i64>()
                + report.d_terms.iter().map(|t| t.1).sum::<i64>()
        );
    }

    #[test]
    fn single_factor_energy() {
        let r = rk(4);
        let cache = RCache::new(r, None);
        let e = TensorElement::new(vec![(Label::Kr(2), col(&[-1, 1]))]);
        assert_eq!(energy(&cache, &e).unwrap(), 1);
    }

    #[test]
    fn stat_on_example_cell() {
        let r = rk(4);
        let cache = RCache::new(r, None);
        let spec = TensorSpec::new(
            r,
            vec![Label::Kr(1), Label::Kr(1), Label::Kr(2), Label::Kr(2), Label::Kr(2)],
        );
        let lambda = fundamental_weight(r, 2).unwrap();
        let failures = verify_stat(&cache, &lambda, &spec).unwrap();
        assert!(failures.is_empty(), "{} stat failures", failures.len());
    }
}
