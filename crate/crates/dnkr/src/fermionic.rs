//! Exact polynomials in q: Gaussian binomials, the one dimensional
//! configuration sum over paths, the fermionic sum over configurations,
//! and the identity checker between them.

use crate::crystal::enumerate_paths;
use crate::energy::energy;
use crate::rc::{cc_shape, enumerate_shapes, vacancy_of, TensorSpec};
use crate::rmatrix::RCache;
use crate::rootdata::{Rank, Weight};
use crate::Result;
use std::collections::BTreeMap;

/// Polynomial in q with integer coefficients, exponents >= 0.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QPolynomial {
    coeffs: BTreeMap<u32, i64>,
}

impl QPolynomial {
    pub fn zero() -> QPolynomial {
        QPolynomial::default()
    }

    pub fn one() -> QPolynomial {
        QPolynomial::monomial(0, 1)
    }

    pub fn monomial(exp: u32, c: i64) -> QPolynomial {
        let mut coeffs = BTreeMap::new();
        if c != 0 {
            coeffs.insert(exp, c);
        }
        QPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, i64> {
        &self.coeffs
    }

    pub fn coeff(&self, exp: u32) -> i64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add_assign(&mut self, other: &QPolynomial) {
        for (&e, &c) in &other.coeffs {
            let v = self.coeffs.entry(e).or_insert(0);
            *v += c;
            if *v == 0 {
                self.coeffs.remove(&e);
            }
        }
    }

    pub fn add_monomial(&mut self, exp: u32, c: i64) {
        let v = self.coeffs.entry(exp).or_insert(0);
        *v += c;
        if *v == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn mul(&self, other: &QPolynomial) -> QPolynomial {
        let mut out = BTreeMap::new();
        for (&e1, &c1) in &self.coeffs {
            for (&e2, &c2) in &other.coeffs {
                let v = out.entry(e1 + e2).or_insert(0i64);
                *v += c1 * c2;
            }
        }
        out.retain(|_, v| *v != 0);
        QPolynomial { coeffs: out }
    }

    /// Value at q = 1.
    pub fn eval_one(&self) -> i64 {
        self.coeffs.values().sum()
    }
}

impl std::fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (&e, &c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "{c}")?,
                1 if c == 1 => write!(f, "q")?,
                1 => write!(f, "{c}q")?,
                _ if c == 1 => write!(f, "q^{e}")?,
                _ => write!(f, "{c}q^{e}")?,
            }
        }
        Ok(())
    }
}

/// Gaussian binomial [m + p choose m]_q by the additive recurrence; no
/// division is performed.
pub fn qbinomial(m: u32, p: u32) -> QPolynomial {
    // table[j] holds [j + i choose j] while i sweeps 0..=p
    let mut table: Vec<QPolynomial> = vec![QPolynomial::one(); (m + 1) as usize];
    for _i in 1..=p {
        for j in 1..=m as usize {
            // [j + i choose j] = [j-1+i choose j-1] + q^j [j+i-1 choose j]
            let shifted = QPolynomial {
                coeffs: table[j]
                    .coeffs
                    .iter()
                    .map(|(&e, &c)| (e + j as u32, c))
                    .collect(),
            };
            let mut next = table[j - 1].clone();
            next.add_assign(&shifted);
            table[j] = next;
        }
    }
    table[m as usize].clone()
}

/// The one dimensional configuration sum: q to the energy, summed over
/// the path set.
pub fn x_sum(cache: &RCache, lambda: &Weight, spec: &TensorSpec) -> Result<QPolynomial> {
    let rank = cache.rank();
    let mut out = QPolynomial::zero();
    for b in enumerate_paths(rank, lambda, spec.factors())? {
        let d = energy(cache, &b)?;
        debug_assert!(d >= 0, "negative energy {d} at {b}");
        out.add_monomial(d as u32, 1);
    }
    Ok(out)
}

/// The fermionic sum: over admissible shapes, q to the shape cocharge
/// times the product of rigging-box generating functions.
pub fn m_sum(rank: Rank, lambda: &Weight, spec: &TensorSpec) -> Result<QPolynomial> {
    let mut out = QPolynomial::zero();
    for shape in enumerate_shapes(rank, lambda, spec)? {
        let base = cc_shape(rank, &shape);
        debug_assert!(base >= 0);
        let mut term = QPolynomial::monomial(base as u32, 1);
        for a in 1..=rank.n() {
            let mut lens = shape[a - 1].shape();
            lens.dedup();
            for len in lens {
                let m = shape[a - 1].mult(len) as u32;
                let p = vacancy_of(spec, &shape, a, len);
                debug_assert!(p >= 0);
                term = term.mul(&qbinomial(m, p as u32));
            }
        }
        out.add_assign(&term);
    }
    Ok(out)
}

/// Compare the two sums; an empty report means they agree.
pub fn verify_xm(
    cache: &RCache,
    lambda: &Weight,
    spec: &TensorSpec,
) -> Result<Vec<(u32, i64, i64)>> {
    let x = x_sum(cache, lambda, spec)?;
    let m = m_sum(cache.rank(), lambda, spec)?;
    let mut bad = Vec::new();
    let exps: std::collections::BTreeSet<u32> = x
        .coeffs()
        .keys()
        .chain(m.coeffs().keys())
        .copied()
        .collect();
    for e in exps {
        if x.coeff(e) != m.coeff(e) {
            bad.push((e, x.coeff(e), m.coeff(e)));
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::Label;
    use crate::rc::enumerate_rc;
    use crate::rootdata::fundamental_weight;

    fn rk(n: u8) -> Rank {
        Rank::new(n).unwrap()
    }

    #[test]
    fn qbinomial_values() {
        assert_eq!(qbinomial(1, 1).to_string(), "1 + q");
        assert_eq!(qbinomial(0, 5), QPolynomial::one());
        assert_eq!(qbinomial(5, 0), QPolynomial::one());
        // expansion of the 2x2 box generating function
        let b = qbinomial(2, 2);
        assert_eq!(b.coeff(0), 1);
        assert_eq!(b.coeff(1), 1);
        assert_eq!(b.coeff(2), 2);
        assert_eq!(b.coeff(3), 1);
        assert_eq!(b.coeff(4), 1);
        // symmetry
        assert_eq!(qbinomial(3, 2), qbinomial(2, 3));
        // counting specialization
        assert_eq!(qbinomial(4, 3).eval_one(), 35);
    }

    #[test]
    fn m_matches_brute_force_riggings() {
        // the closed form over boxes equals summing q^cc over all
        // rigged configurations
        let rank = rk(4);
        let spec = TensorSpec::new(rank, vec![Label::Kr(1), Label::Kr(1), Label::Kr(2)]);
        let l = spec.l_vector().unwrap();
        for lam in crate::cli::dominant_weights_below(rank, &l) {
            let closed = m_sum(rank, &lam, &spec).unwrap();
            let mut brute = QPolynomial::zero();
            for rc in enumerate_rc(rank, &lam, &spec).unwrap() {
                brute.add_monomial(crate::rc::cc(&rc) as u32, 1);
            }
            assert_eq!(closed, brute, "at {:?}", lam.eps2());
        }
    }

    #[test]
    fn xm_on_example_cell() {
        let rank = rk(4);
        let cache = RCache::new(rank, None);
        let spec = TensorSpec::new(
            rank,
            vec![Label::Kr(1), Label::Kr(1), Label::Kr(2), Label::Kr(2), Label::Kr(2)],
        );
        let lambda = fundamental_weight(rank, 2).unwrap();
        let bad = verify_xm(&cache, &lambda, &spec).unwrap();
        assert!(bad.is_empty(), "coefficient mismatches: {bad:?}");
        // the worked example path contributes to the q^10 coefficient
        let x = x_sum(&cache, &lambda, &spec).unwrap();
        assert!(x.coeff(10) >= 1);
    }

    #[test]
    fn x_for_full_weight_is_single_monomial() {
        let rank = rk(4);
        let cache = RCache::new(rank, None);
        let spec = TensorSpec::new(rank, vec![Label::Kr(2), Label::Kr(1)]);
        let l = spec.l_vector().unwrap();
        let x = x_sum(&cache, &l, &spec).unwrap();
        assert_eq!(x.eval_one(), 1);
        let m = m_sum(rank, &l, &spec).unwrap();
        assert_eq!(x, m);
    }
}
