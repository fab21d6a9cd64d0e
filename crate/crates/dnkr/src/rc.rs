//! Rigged configurations: the weight vector of a tensor factor list,
//! the size constraint, vacancy numbers, admissibility, enumeration,
//! the cocharge statistic, and rigging complementation.

use crate::crystal::Label;
use crate::rootdata::{
    cartan_pairing, fundamental_weight, is_dominant, omega_weight, pair_alpha_with, Rank, Weight,
};
use crate::{Error, Result};

/// Ordered list of tensor factors, leftmost first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorSpec {
    rank: Rank,
    factors: Vec<Label>,
}

impl TensorSpec {
    pub fn new(rank: Rank, factors: Vec<Label>) -> TensorSpec {
        TensorSpec { rank, factors }
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn factors(&self) -> &[Label] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn leftmost(&self) -> Option<Label> {
        self.factors.first().copied()
    }

    /// Spec with the leftmost factor removed.
    pub fn pop_leftmost(&self) -> TensorSpec {
        TensorSpec {
            rank: self.rank,
            factors: self.factors[1..].to_vec(),
        }
    }

    /// Spec with the leftmost factor replaced by the given list.
    pub fn replace_leftmost(&self, with: &[Label]) -> TensorSpec {
        let mut factors = with.to_vec();
        factors.extend_from_slice(&self.factors[1..]);
        TensorSpec {
            rank: self.rank,
            factors,
        }
    }

    pub fn reversed(&self) -> TensorSpec {
        TensorSpec {
            rank: self.rank,
            factors: self.factors.iter().rev().copied().collect(),
        }
    }

    /// The weight vector of the factor list.
    pub fn l_vector(&self) -> Result<Weight> {
        let mut w = Weight::zero(self.rank);
        for &f in &self.factors {
            w = w.add(&label_weight(self.rank, f)?);
        }
        Ok(w)
    }
}

impl std::fmt::Display for TensorSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, l) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Contribution of a single tensor factor to the weight vector.
pub fn label_weight(rank: Rank, label: Label) -> Result<Weight> {
    let n = rank.n();
    match label {
        Label::Kr(k) if k >= 1 && (k as usize) <= n => fundamental_weight(rank, k as usize),
        Label::Hat(k) if (k as usize) <= n - 2 => fundamental_weight(rank, k as usize),
        Label::Hat(k) if (k as usize) == n - 1 => omega_weight(rank, n - 1, false),
        Label::En => omega_weight(rank, n, false),
        Label::EnM1 => omega_weight(rank, n, true),
        _ => Err(Error::InvalidRc(format!(
            "{label} cannot appear as a rigged-configuration tensor factor"
        ))),
    }
}

/// One rigged partition: rows as (length, rigging) multiset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RiggedPartition {
    rows: Vec<(u32, i64)>,
}

impl RiggedPartition {
    pub fn new(mut rows: Vec<(u32, i64)>) -> RiggedPartition {
        rows.sort_by(|a, b| b.cmp(a));
        RiggedPartition { rows }
    }

    pub fn empty() -> RiggedPartition {
        RiggedPartition { rows: vec![] }
    }

    /// Rows sorted by descending length, then descending rigging.
    pub fn rows(&self) -> &[(u32, i64)] {
        &self.rows
    }

    pub fn size(&self) -> i64 {
        self.rows.iter().map(|&(l, _)| l as i64).sum()
    }

    pub fn max_len(&self) -> u32 {
        self.rows.first().map(|&(l, _)| l).unwrap_or(0)
    }

    /// Number of rows of the given length.
    pub fn mult(&self, len: u32) -> usize {
        self.rows.iter().filter(|&&(l, _)| l == len).count()
    }

    /// Boxes in the first `i` columns.
    pub fn q(&self, i: u32) -> i64 {
        self.rows.iter().map(|&(l, _)| l.min(i) as i64).sum()
    }

    pub fn shape(&self) -> Vec<u32> {
        self.rows.iter().map(|&(l, _)| l).collect()
    }

    pub fn riggings_at(&self, len: u32) -> Vec<i64> {
        self.rows
            .iter()
            .filter(|&&(l, _)| l == len)
            .map(|&(_, r)| r)
            .collect()
    }

    pub fn push_row(&mut self, len: u32, rig: i64) {
        self.rows.push((len, rig));
        self.rows.sort_by(|a, b| b.cmp(a));
    }

    /// Remove one row equal to (len, rig); true on success.
    pub fn remove_row(&mut self, len: u32, rig: i64) -> bool {
        if let Some(pos) = self.rows.iter().position(|&r| r == (len, rig)) {
            self.rows.remove(pos);
            true
        } else {
            false
        }
    }
}

/// A full rigged configuration bound to its weight and factor list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiggedConfig {
    spec: TensorSpec,
    lambda: Weight,
    parts: Vec<RiggedPartition>,
}

impl RiggedConfig {
    pub fn new(spec: TensorSpec, lambda: Weight, parts: Vec<RiggedPartition>) -> RiggedConfig {
        debug_assert_eq!(parts.len(), spec.rank().n());
        RiggedConfig {
            spec,
            lambda,
            parts,
        }
    }

    pub fn empty(spec: TensorSpec, lambda: Weight) -> RiggedConfig {
        let n = spec.rank().n();
        RiggedConfig {
            spec,
            lambda,
            parts: vec![RiggedPartition::empty(); n],
        }
    }

    pub fn rank(&self) -> Rank {
        self.spec.rank()
    }

    pub fn spec(&self) -> &TensorSpec {
        &self.spec
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    /// 1-based partition access.
    pub fn part(&self, a: usize) -> &RiggedPartition {
        &self.parts[a - 1]
    }

    pub fn part_mut(&mut self, a: usize) -> &mut RiggedPartition {
        &mut self.parts[a - 1]
    }

    pub fn parts(&self) -> &[RiggedPartition] {
        &self.parts
    }

    pub fn with_spec_lambda(&self, spec: TensorSpec, lambda: Weight) -> RiggedConfig {
        RiggedConfig {
            spec,
            lambda,
            parts: self.parts.clone(),
        }
    }

    /// Retag onto the reversed factor list; the partition data is
    /// blind to the factor order.
    pub fn reversed_spec(&self) -> RiggedConfig {
        RiggedConfig {
            spec: self.spec.reversed(),
            lambda: self.lambda.clone(),
            parts: self.parts.clone(),
        }
    }

    /// Vacancy number at partition a, column length i.
    pub fn vacancy(&self, a: usize, i: u32) -> i64 {
        vacancy_of(&self.spec, &self.parts, a, i)
    }

    /// True when some length-i row of partition a is singular.
    pub fn is_singular(&self, a: usize, i: u32) -> bool {
        let p = self.vacancy(a, i);
        self.part(a).riggings_at(i).contains(&p)
    }

    /// Largest row length over all partitions.
    pub fn max_len(&self) -> u32 {
        self.parts.iter().map(|p| p.max_len()).max().unwrap_or(0)
    }
}

impl std::fmt::Display for RiggedConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (idx, p) in self.parts.iter().enumerate() {
            if idx > 0 {
                write!(f, " | ")?;
            }
            write!(f, "(")?;
            for (j, &(l, r)) in p.rows().iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{l}:{r}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Vacancy number from raw parts (used while mutating configurations).
pub fn vacancy_of(spec: &TensorSpec, parts: &[RiggedPartition], a: usize, i: u32) -> i64 {
    let rank = spec.rank();
    let n = rank.n();
    let l = spec.l_vector().expect("spec has valid factors");
    let mut p = pair_alpha_with(rank, a, &l).expect("weight vector lies in the lattice span");
    for b in 1..=n {
        let pairing = cartan_pairing(rank, a, b).unwrap();
        if pairing != 0 {
            p -= pairing * parts[b - 1].q(i);
        }
    }
    p
}

/// Expand a weight over the simple roots; None unless all coefficients
/// are nonnegative integers.
pub fn root_cone_coeffs(rank: Rank, diff: &Weight) -> Option<Vec<i64>> {
    let n = rank.n();
    let v = diff.eps2();
    // triangular solve over the doubled epsilon coordinates
    let mut c = vec![0i64; n];
    let mut acc = 0i64;
    for a in 0..n - 2 {
        acc += v[a];
        if acc % 2 != 0 {
            return None;
        }
        c[a] = acc / 2;
    }
    // v[n-2] = c[n-2] - c[n-3] + c[n-1] and v[n-1] = c[n-1] - c[n-2],
    // doubled; solve the 2x2 corner
    let t = v[n - 2] + v[n - 1] + 2 * c[n - 3];
    if t % 4 != 0 || v[n - 1] % 2 != 0 {
        return None;
    }
    c[n - 1] = t / 4;
    c[n - 2] = c[n - 1] - v[n - 1] / 2;
    if c.iter().any(|&x| x < 0) {
        return None;
    }
    Some(c)
}

/// Solve the size constraint: the forced sizes of the n partitions, or
/// None when the difference is not a nonnegative root-lattice vector.
pub fn config_sizes(rank: Rank, lambda: &Weight, spec: &TensorSpec) -> Result<Option<Vec<i64>>> {
    let l = spec.l_vector()?;
    Ok(root_cone_coeffs(rank, &l.sub(lambda)))
}

/// Admissibility: all vacancy numbers nonnegative.
pub fn is_admissible(spec: &TensorSpec, parts: &[RiggedPartition]) -> bool {
    let n = spec.rank().n();
    let max = parts.iter().map(|p| p.max_len()).max().unwrap_or(0);
    for a in 1..=n {
        for i in 1..=max {
            if vacancy_of(spec, parts, a, i) < 0 {
                return false;
            }
        }
    }
    true
}

/// Full validity: admissible and every rigging within its box.
pub fn is_valid_rc(rc: &RiggedConfig) -> bool {
    let n = rc.rank().n();
    if !is_admissible(rc.spec(), rc.parts()) {
        return false;
    }
    for a in 1..=n {
        for &(len, rig) in rc.part(a).rows() {
            if rig < 0 || rig > rc.vacancy(a, len) {
                return false;
            }
        }
    }
    true
}

fn partitions_of(m: i64) -> Vec<Vec<u32>> {
    fn go(rest: i64, max: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        let mut part = max.min(rest);
        while part >= 1 {
            cur.push(part as u32);
            go(rest - part, part, cur, out);
            cur.pop();
            part -= 1;
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    go(m, m, &mut cur, &mut out);
    out
}

/// All admissible shape tuples for (lambda, spec).
pub fn enumerate_shapes(
    rank: Rank,
    lambda: &Weight,
    spec: &TensorSpec,
) -> Result<Vec<Vec<RiggedPartition>>> {
    if !is_dominant(lambda)? {
        return Err(Error::InvalidRc("weight must be dominant".into()));
    }
    let sizes = match config_sizes(rank, lambda, spec)? {
        Some(s) => s,
        None => return Ok(vec![]),
    };
    let per_part: Vec<Vec<Vec<u32>>> = sizes.iter().map(|&c| partitions_of(c)).collect();
    let n = rank.n();
    let mut out = Vec::new();
    let mut cur: Vec<RiggedPartition> = Vec::with_capacity(n);
    fn go(
        spec: &TensorSpec,
        per_part: &[Vec<Vec<u32>>],
        a: usize,
        cur: &mut Vec<RiggedPartition>,
        out: &mut Vec<Vec<RiggedPartition>>,
    ) {
        if a == per_part.len() {
            if is_admissible(spec, cur) {
                out.push(cur.clone());
            }
            return;
        }
        for shape in &per_part[a] {
            cur.push(RiggedPartition::new(
                shape.iter().map(|&l| (l, 0)).collect(),
            ));
            go(spec, per_part, a + 1, cur, out);
            cur.pop();
        }
    }
    go(spec, &per_part, 0, &mut cur, &mut out);
    Ok(out)
}

/// Nonincreasing rigging choices for `m` rows inside [0, p].
fn rigging_choices(m: usize, p: i64) -> Vec<Vec<i64>> {
    fn go(m: usize, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if m == 0 {
            out.push(cur.clone());
            return;
        }
        let mut v = max;
        while v >= 0 {
            cur.push(v);
            go(m - 1, v, cur, out);
            cur.pop();
            v -= 1;
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    go(m, p, &mut cur, &mut out);
    out
}

/// Enumerate the full set of rigged configurations for (lambda, spec).
pub fn enumerate_rc(rank: Rank, lambda: &Weight, spec: &TensorSpec) -> Result<Vec<RiggedConfig>> {
    let shapes = enumerate_shapes(rank, lambda, spec)?;
    let n = rank.n();
    let mut out = Vec::new();
    for shape in shapes {
        // per (a, distinct length): the rigging box choices
        let mut slots: Vec<(usize, u32, Vec<Vec<i64>>)> = Vec::new();
        for a in 1..=n {
            let part = &shape[a - 1];
            let mut lens: Vec<u32> = part.shape();
            lens.dedup();
            for len in lens {
                let m = part.mult(len);
                let p = vacancy_of(spec, &shape, a, len);
                debug_assert!(p >= 0);
                slots.push((a, len, rigging_choices(m, p)));
            }
        }
        // cross product over slots
        fn go(
            spec: &TensorSpec,
            lambda: &Weight,
            slots: &[(usize, u32, Vec<Vec<i64>>)],
            idx: usize,
            cur: &mut Vec<RiggedPartition>,
            out: &mut Vec<RiggedConfig>,
        ) {
            if idx == slots.len() {
                out.push(RiggedConfig::new(
                    spec.clone(),
                    lambda.clone(),
                    cur.clone(),
                ));
                return;
            }
            let (a, len, ref choices) = slots[idx];
            for choice in choices {
                let saved = cur[a - 1].clone();
                // overwrite riggings of the length-`len` rows
                let mut rows: Vec<(u32, i64)> = cur[a - 1]
                    .rows()
                    .iter()
                    .copied()
                    .filter(|&(l, _)| l != len)
                    .collect();
                for &r in choice {
                    rows.push((len, r));
                }
                cur[a - 1] = RiggedPartition::new(rows);
                go(spec, lambda, slots, idx + 1, cur, out);
                cur[a - 1] = saved;
            }
        }
        let mut cur = shape.clone();
        go(spec, lambda, &slots, 0, &mut cur, &mut out);
    }
    Ok(out)
}

/// The cocharge of the configuration shape alone.
pub fn cc_shape(rank: Rank, parts: &[RiggedPartition]) -> i64 {
    let n = rank.n();
    let max = parts.iter().map(|p| p.max_len()).max().unwrap_or(0);
    // columns-above-i counts per partition
    let d = |a: usize, i: u32| parts[a - 1].rows().iter().filter(|&&(l, _)| l >= i).count() as i64;
    let mut total = 0i64;
    for a in 1..=n {
        for b in 1..=n {
            let pairing = cartan_pairing(rank, a, b).unwrap();
            if pairing == 0 {
                continue;
            }
            let mut t = 0i64;
            for i in 1..=max {
                t += d(a, i) * d(b, i);
            }
            total += pairing * t;
        }
    }
    debug_assert!(total % 2 == 0);
    total / 2
}

/// The cocharge statistic: shape term plus the sum of all riggings.
pub fn cc(rc: &RiggedConfig) -> i64 {
    let rig_sum: i64 = rc
        .parts()
        .iter()
        .flat_map(|p| p.rows().iter().map(|&(_, r)| r))
        .sum();
    cc_shape(rc.rank(), rc.parts()) + rig_sum
}

/// Complement every rigging inside its box; shapes unchanged.
pub fn theta(rc: &RiggedConfig) -> RiggedConfig {
    let n = rc.rank().n();
    let mut parts = Vec::with_capacity(n);
    for a in 1..=n {
        let rows = rc
            .part(a)
            .rows()
            .iter()
            .map(|&(len, rig)| (len, rc.vacancy(a, len) - rig))
            .collect();
        parts.push(RiggedPartition::new(rows));
    }
    RiggedConfig::new(rc.spec().clone(), rc.lambda().clone(), parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rk(n: u8) -> Rank {
        Rank::new(n).unwrap()
    }

    fn kr_spec(n: u8, ks: &[u8]) -> TensorSpec {
        TensorSpec::new(rk(n), ks.iter().map(|&k| Label::Kr(k)).collect())
    }

    /// The rank-4 worked example: lambda = Lambda_2 over two single
    /// boxes and three two-box columns.
    pub fn example_rc() -> RiggedConfig {
        let rank = rk(4);
        let spec = kr_spec(4, &[1, 1, 2, 2, 2]);
        let lambda = fundamental_weight(rank, 2).unwrap();
        let parts = vec![
            RiggedPartition::new(vec![(2, 0), (1, 0), (1, 0)]),
            RiggedPartition::new(vec![(2, 0), (2, 0), (1, 1), (1, 1)]),
            RiggedPartition::new(vec![(2, 0), (1, 0)]),
            RiggedPartition::new(vec![(3, 0)]),
        ];
        RiggedConfig::new(spec, lambda, parts)
    }

    #[test]
    fn l_vector_counts() {
        let spec = kr_spec(4, &[1, 1, 2, 2, 2]);
        let l = spec.l_vector().unwrap();
        assert_eq!(l.lambda_coeffs().unwrap(), vec![2, 3, 0, 0]);
        // hat and doubled-image factors
        let rank = rk(5);
        let spec = TensorSpec::new(
            rank,
            vec![Label::Kr(5), Label::Kr(2), Label::Kr(1), Label::Kr(1), Label::Kr(1)],
        );
        assert_eq!(spec.l_vector().unwrap().lambda_coeffs().unwrap(), vec![3, 1, 0, 0, 1]);
        let spec = TensorSpec::new(rank, vec![Label::En]);
        assert_eq!(spec.l_vector().unwrap().lambda_coeffs().unwrap(), vec![0, 0, 0, 0, 2]);
        let spec = TensorSpec::new(rank, vec![Label::EnM1]);
        assert_eq!(spec.l_vector().unwrap().lambda_coeffs().unwrap(), vec![0, 0, 0, 2, 0]);
    }

    #[test]
    fn sizes() {
        let rank = rk(4);
        let spec = kr_spec(4, &[1, 1, 2, 2, 2]);
        let lambda = fundamental_weight(rank, 2).unwrap();
        assert_eq!(
            config_sizes(rank, &lambda, &spec).unwrap(),
            Some(vec![4, 6, 3, 3])
        );
        // lambda = weight vector forces the empty configuration
        let l = spec.l_vector().unwrap();
        assert_eq!(config_sizes(rank, &l, &spec).unwrap(), Some(vec![0; 4]));
        // outside the root lattice cone
        let big = l.add(&fundamental_weight(rank, 1).unwrap());
        assert_eq!(config_sizes(rank, &big, &spec).unwrap(), None);
    }

    #[test]
    fn vacancies_of_example() {
        let rc = example_rc();
        assert_eq!(rc.vacancy(1, 1), 0);
        assert_eq!(rc.vacancy(1, 2), 0);
        assert_eq!(rc.vacancy(2, 1), 1);
        assert_eq!(rc.vacancy(2, 2), 0);
        assert_eq!(rc.vacancy(3, 1), 0);
        assert_eq!(rc.vacancy(3, 2), 0);
        assert_eq!(rc.vacancy(4, 3), 0);
        assert_eq!(rc.vacancy(4, 1), 2);
        assert!(is_valid_rc(&rc));
        // a rigging above its box breaks validity
        let mut bad = rc.clone();
        bad.part_mut(2).remove_row(1, 1);
        bad.part_mut(2).push_row(1, 2);
        assert!(!is_valid_rc(&bad));
    }

    #[test]
    fn vacancy_on_empty_single_box() {
        let _rank = rk(4);
        let spec = kr_spec(4, &[1]);
        let parts = vec![RiggedPartition::empty(); 4];
        for i in 1..=3 {
            assert_eq!(vacancy_of(&spec, &parts, 1, i), 1);
        }
    }

    #[test]
    fn singular_rows() {
        let rc = example_rc();
        assert!(rc.is_singular(2, 1)); // rigging 1 = vacancy 1
        assert!(rc.is_singular(1, 1)); // rigging 0 = vacancy 0
        assert!(!rc.is_singular(4, 1)); // no length-1 row there
    }

    #[test]
    fn enumerate_counts_match_paths() {
        let rank = rk(4);
        let spec = kr_spec(4, &[1, 1]);
        // all dominant weights with feasible sizes
        let l = spec.l_vector().unwrap();
        let mut total = 0usize;
        for lam in crate::cli::dominant_weights_below(rank, &l) {
            let rcs = enumerate_rc(rank, &lam, &spec).unwrap();
            let paths =
                crate::crystal::enumerate_paths(rank, &lam, spec.factors()).unwrap();
            assert_eq!(rcs.len(), paths.len(), "counts at {:?}", lam.eps2());
            total += rcs.len();
        }
        assert!(total > 0);
    }

    #[test]
    fn empty_rc_for_full_weight() {
        let rank = rk(4);
        let spec = kr_spec(4, &[2, 1]);
        let l = spec.l_vector().unwrap();
        let rcs = enumerate_rc(rank, &l, &spec).unwrap();
        assert_eq!(rcs.len(), 1);
        assert!(rcs[0].parts().iter().all(|p| p.rows().is_empty()));
        // infeasible weight gives the empty set
        let lam = Weight::from_lambda(rank, &[0, 0, 1, 0]).unwrap();
        assert!(enumerate_rc(rank, &lam, &spec).unwrap().is_empty());
    }

    #[test]
    fn cocharge_of_example() {
        let rc = example_rc();
        assert_eq!(cc(&rc), 10);
        let empty = RiggedConfig::empty(kr_spec(4, &[1]), fundamental_weight(rk(4), 1).unwrap());
        assert_eq!(cc(&empty), 0);
    }

    #[test]
    fn cocharge_doubles() {
        // doubling all parts and riggings doubles the cocharge
        let rc = example_rc();
        let doubled: Vec<RiggedPartition> = rc
            .parts()
            .iter()
            .map(|p| {
                RiggedPartition::new(p.rows().iter().map(|&(l, r)| (2 * l, 2 * r)).collect())
            })
            .collect();
        assert_eq!(cc_shape(rc.rank(), &doubled), 2 * cc_shape(rc.rank(), rc.parts()));
    }

    #[test]
    fn theta_involution_and_cc() {
        let rc = example_rc();
        let t = theta(&rc);
        assert_eq!(theta(&t), rc);
        assert!(is_valid_rc(&t));
        // cc(theta) + cc = 2 cc_shape + sum of m_i p_i
        let mut mp = 0i64;
        for a in 1..=4 {
            let mut lens = rc.part(a).shape();
            lens.dedup();
            for len in lens {
                mp += rc.part(a).mult(len) as i64 * rc.vacancy(a, len);
            }
        }
        assert_eq!(cc(&t) + cc(&rc), 2 * cc_shape(rc.rank(), rc.parts()) + mp);
    }

    #[test]
    fn vacancy_second_difference() {
        // -p_{i-1} + 2 p_i - p_{i+1} = -sum_b (a|b) m_i^(b) + d_{i,1} (alpha_a | L)
        let rank = rk(4);
        let spec = kr_spec(4, &[1, 1, 2]);
        let l = spec.l_vector().unwrap();
        for lam in crate::cli::dominant_weights_below(rank, &l) {
            for rc in enumerate_rc(rank, &lam, &spec).unwrap() {
                let max = rc.max_len() + 1;
                for a in 1..=4usize {
                    for i in 1..=max {
                        let pm = if i == 1 { 0 } else { rc.vacancy(a, i - 1) };
                        let p0 = rc.vacancy(a, i);
                        let pp = rc.vacancy(a, i + 1);
                        let mut rhs = 0i64;
                        for b in 1..=4usize {
                            rhs -= cartan_pairing(rank, a, b).unwrap()
                                * rc.part(b).mult(i) as i64;
                        }
                        if i == 1 {
                            rhs += pair_alpha_with(rank, a, &l).unwrap();
                        }
                        assert_eq!(-pm + 2 * p0 - pp, rhs);
                    }
                }
            }
        }
    }
}
