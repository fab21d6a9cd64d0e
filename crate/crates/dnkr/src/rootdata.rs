//! Root and weight data for the rank-n even orthogonal root system:
//! simple roots, fundamental weights, the omega weights used by the
//! column crystals, the invariant pairing, and basis conversions.
//!
//! Weights are stored in doubled epsilon coordinates so that spin
//! weights stay integral; all arithmetic is exact.

use crate::{Error, Result};

/// Rank of the root system.  The fork at node n-2 requires n >= 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rank {
    n: u8,
}

impl Rank {
    pub fn new(n: u8) -> Result<Rank> {
        if n < 4 {
            return Err(Error::InvalidRank(n));
        }
        Ok(Rank { n })
    }

    #[inline]
    pub fn n(self) -> usize {
        self.n as usize
    }
}

/// Element of the weight lattice, held in epsilon coordinates doubled
/// so that half-integer entries of the spin weights become integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    eps2: Vec<i64>,
}

impl Weight {
    pub fn zero(rank: Rank) -> Weight {
        Weight {
            eps2: vec![0; rank.n()],
        }
    }

    /// Build from doubled epsilon coordinates.
    pub fn from_eps2(eps2: Vec<i64>) -> Weight {
        Weight { eps2 }
    }

    /// Build from coefficients over the fundamental weights.
    pub fn from_lambda(rank: Rank, coeffs: &[i64]) -> Result<Weight> {
        let n = rank.n();
        if coeffs.len() != n {
            return Err(Error::IndexRange(format!(
                "expected {} fundamental-weight coefficients, got {}",
                n,
                coeffs.len()
            )));
        }
        let mut w = Weight::zero(rank);
        for (i, &c) in coeffs.iter().enumerate() {
            let fw = fundamental_weight(rank, i + 1)?;
            for (dst, src) in w.eps2.iter_mut().zip(fw.eps2.iter()) {
                *dst += c * src;
            }
        }
        Ok(w)
    }

    #[inline]
    pub fn eps2(&self) -> &[i64] {
        &self.eps2
    }

    pub fn rank_len(&self) -> usize {
        self.eps2.len()
    }

    /// Coefficients over the fundamental weights, when they are integral.
    pub fn lambda_coeffs(&self) -> Option<Vec<i64>> {
        let n = self.eps2.len();
        let mut a = vec![0i64; n];
        for (i, slot) in a.iter_mut().enumerate().take(n - 2) {
            let d = self.eps2[i] - self.eps2[i + 1];
            if d % 2 != 0 {
                return None;
            }
            *slot = d / 2;
        }
        let dm = self.eps2[n - 2] - self.eps2[n - 1];
        let dp = self.eps2[n - 2] + self.eps2[n - 1];
        if dm % 2 != 0 || dp % 2 != 0 {
            return None;
        }
        a[n - 2] = dm / 2;
        a[n - 1] = dp / 2;
        Some(a)
    }

    pub fn is_zero(&self) -> bool {
        self.eps2.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight {
            eps2: self
                .eps2
                .iter()
                .zip(&other.eps2)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight {
            eps2: self
                .eps2
                .iter()
                .zip(&other.eps2)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: i64) -> Weight {
        Weight {
            eps2: self.eps2.iter().map(|a| a * c).collect(),
        }
    }

    /// Halve every coordinate; fails on odd entries.
    pub fn halve(&self) -> Result<Weight> {
        let mut eps2 = Vec::with_capacity(self.eps2.len());
        for &x in &self.eps2 {
            if x % 2 != 0 {
                return Err(Error::NotInLambdaSpan);
            }
            eps2.push(x / 2);
        }
        Ok(Weight { eps2 })
    }

    /// The normalized invariant form, under which the epsilon vectors
    /// are orthonormal and (alpha | alpha) = 2 for every root.
    pub fn pair(&self, other: &Weight) -> i64 {
        let dot: i64 = self
            .eps2
            .iter()
            .zip(&other.eps2)
            .map(|(a, b)| a * b)
            .sum();
        debug_assert!(dot % 4 == 0, "pairing of lattice weights must be integral");
        dot / 4
    }

    /// Image under the longest Weyl element: negate, then flip the last
    /// epsilon coordinate back when n is odd.
    pub fn longest_weyl(&self) -> Weight {
        let n = self.eps2.len();
        let mut eps2: Vec<i64> = self.eps2.iter().map(|x| -x).collect();
        if n % 2 == 1 {
            eps2[n - 1] = -eps2[n - 1];
        }
        Weight { eps2 }
    }
}

/// alpha_i in doubled epsilon coordinates.
pub fn simple_root(rank: Rank, i: usize) -> Result<Weight> {
    let n = rank.n();
    if i < 1 || i > n {
        return Err(Error::IndexRange(format!("simple root index {i} for rank {n}")));
    }
    let mut eps2 = vec![0i64; n];
    if i < n {
        eps2[i - 1] = 2;
        eps2[i] = -2;
    } else {
        eps2[n - 2] = 2;
        eps2[n - 1] = 2;
    }
    Ok(Weight { eps2 })
}

/// Lambda_i in doubled epsilon coordinates.
pub fn fundamental_weight(rank: Rank, i: usize) -> Result<Weight> {
    let n = rank.n();
    if i < 1 || i > n {
        return Err(Error::IndexRange(format!(
            "fundamental weight index {i} for rank {n}"
        )));
    }
    let mut eps2 = vec![0i64; n];
    if i <= n - 2 {
        for e in eps2.iter_mut().take(i) {
            *e = 2;
        }
    } else {
        for e in eps2.iter_mut() {
            *e = 1;
        }
        if i == n - 1 {
            eps2[n - 1] = -1;
        }
    }
    Ok(Weight { eps2 })
}

/// omega_i = Lambda_i for i <= n-2, omega_{n-1} = Lambda_{n-1} + Lambda_n,
/// omega_n = 2 Lambda_n, and the barred variant 2 Lambda_{n-1}.
pub fn omega_weight(rank: Rank, i: usize, barred: bool) -> Result<Weight> {
    let n = rank.n();
    if i < 1 || i > n {
        return Err(Error::IndexRange(format!("omega index {i} for rank {n}")));
    }
    if barred && i != n {
        return Err(Error::IndexRange(format!(
            "barred omega only exists at node {n}, got {i}"
        )));
    }
    let mut eps2 = vec![0i64; n];
    if i < n {
        for e in eps2.iter_mut().take(i) {
            *e = 2;
        }
    } else {
        for e in eps2.iter_mut() {
            *e = 2;
        }
        if barred {
            eps2[n - 1] = -2;
        }
    }
    Ok(Weight { eps2 })
}

/// Cartan matrix entry (alpha_a | alpha_b).
pub fn cartan_pairing(rank: Rank, a: usize, b: usize) -> Result<i64> {
    let n = rank.n();
    if a < 1 || a > n || b < 1 || b > n {
        return Err(Error::IndexRange(format!("cartan pairing ({a},{b}) for rank {n}")));
    }
    if a == b {
        return Ok(2);
    }
    let (lo, hi) = (a.min(b), a.max(b));
    let adjacent = (hi - lo == 1 && hi < n) || (lo == n - 2 && hi == n);
    Ok(if adjacent { -1 } else { 0 })
}

/// (alpha_a | w) for w given over the fundamental weights: a direct
/// coefficient read, since the weights are dual to the roots under the
/// normalized form.
pub fn pair_alpha_with(rank: Rank, a: usize, w: &Weight) -> Result<i64> {
    let n = rank.n();
    if a < 1 || a > n {
        return Err(Error::IndexRange(format!("root index {a} for rank {n}")));
    }
    let coeffs = w.lambda_coeffs().ok_or(Error::NotInLambdaSpan)?;
    Ok(coeffs[a - 1])
}

/// True when all coefficients over the fundamental weights are nonnegative.
pub fn is_dominant(w: &Weight) -> Result<bool> {
    let coeffs = w.lambda_coeffs().ok_or(Error::NotInLambdaSpan)?;
    Ok(coeffs.iter().all(|&c| c >= 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: u8) -> Rank {
        Rank::new(n).unwrap()
    }

    #[test]
    fn rejects_small_ranks() {
        assert!(Rank::new(3).is_err());
        assert!(Rank::new(4).is_ok());
    }

    #[test]
    fn simple_roots() {
        assert_eq!(simple_root(r(4), 1).unwrap().eps2(), &[2, -2, 0, 0]);
        assert_eq!(simple_root(r(4), 4).unwrap().eps2(), &[0, 0, 2, 2]);
        assert_eq!(simple_root(r(5), 5).unwrap().eps2(), &[0, 0, 0, 2, 2]);
        assert!(simple_root(r(4), 5).is_err());
    }

    #[test]
    fn fundamental_weights() {
        assert_eq!(fundamental_weight(r(4), 2).unwrap().eps2(), &[2, 2, 0, 0]);
        assert_eq!(fundamental_weight(r(4), 4).unwrap().eps2(), &[1, 1, 1, 1]);
        assert_eq!(
            fundamental_weight(r(5), 4).unwrap().eps2(),
            &[1, 1, 1, 1, -1]
        );
    }

    #[test]
    fn omega_weights() {
        assert_eq!(omega_weight(r(4), 3, false).unwrap().eps2(), &[2, 2, 2, 0]);
        assert_eq!(omega_weight(r(4), 4, true).unwrap().eps2(), &[2, 2, 2, -2]);
        assert!(omega_weight(r(4), 3, true).is_err());
        // omega_n - barred omega_n = 2 eps_n
        for n in 4..=6 {
            let d = omega_weight(r(n), n as usize, false)
                .unwrap()
                .sub(&omega_weight(r(n), n as usize, true).unwrap());
            let mut expect = vec![0i64; n as usize];
            expect[n as usize - 1] = 4;
            assert_eq!(d.eps2(), &expect[..]);
        }
    }

    #[test]
    fn cartan_matrix() {
        assert_eq!(cartan_pairing(r(4), 2, 4).unwrap(), -1);
        assert_eq!(cartan_pairing(r(4), 3, 4).unwrap(), 0);
        assert_eq!(cartan_pairing(r(5), 1, 1).unwrap(), 2);
        // symmetry and agreement with the epsilon-coordinate form
        for n in [4u8, 5, 6] {
            let rk = r(n);
            for a in 1..=n as usize {
                for b in 1..=n as usize {
                    let lhs = cartan_pairing(rk, a, b).unwrap();
                    assert_eq!(lhs, cartan_pairing(rk, b, a).unwrap());
                    let wa = simple_root(rk, a).unwrap();
                    let wb = simple_root(rk, b).unwrap();
                    assert_eq!(lhs, wa.pair(&wb));
                }
            }
        }
    }

    #[test]
    fn lambda_coefficient_reads() {
        let rk = r(4);
        let l2 = fundamental_weight(rk, 2).unwrap();
        assert_eq!(pair_alpha_with(rk, 2, &l2).unwrap(), 1);
        let w = Weight::from_lambda(rk, &[2, 3, 0, 0]).unwrap();
        assert_eq!(pair_alpha_with(rk, 1, &w).unwrap(), 2);
        // barred omega_4 = 2 Lambda_3 pairs to zero with alpha_4
        let ob = omega_weight(rk, 4, true).unwrap();
        assert_eq!(pair_alpha_with(rk, 4, &ob).unwrap(), 0);
        assert_eq!(pair_alpha_with(rk, 3, &ob).unwrap(), 2);
    }

    #[test]
    fn lambda_round_trip() {
        let rk = r(5);
        for coeffs in [
            vec![0, 0, 0, 0, 0],
            vec![1, 0, 0, 0, 0],
            vec![2, 0, 0, 1, 1],
            vec![0, 1, 0, 3, 0],
        ] {
            let w = Weight::from_lambda(rk, &coeffs).unwrap();
            assert_eq!(w.lambda_coeffs().unwrap(), coeffs);
        }
        // a bare epsilon vector is not in the lattice span
        let w = Weight::from_eps2(vec![1, 0, 0, 0, 0]);
        assert!(w.lambda_coeffs().is_none());
    }

    #[test]
    fn dominance() {
        let rk = r(4);
        let l2 = fundamental_weight(rk, 2).unwrap();
        assert!(is_dominant(&l2).unwrap());
        let w = fundamental_weight(rk, 1).unwrap().sub(&l2);
        assert!(!is_dominant(&w).unwrap());
        assert!(is_dominant(&Weight::zero(rk)).unwrap());
    }

    #[test]
    fn spin_weight_doubled_representation() {
        // the last fundamental weight has all-ones doubled coordinates
        for n in [4u8, 5, 6] {
            let w = fundamental_weight(r(n), n as usize).unwrap();
            assert!(w.eps2().iter().all(|&x| x == 1));
        }
    }
}
