//! The box-removal map and its inverse, the splitting maps on both
//! sides, the doubling embeddings, the spinor removal algorithm, and
//! the assembled bijections between rigged configurations and paths.

use crate::columns::{Column, Letter};
use crate::crystal::{
    column_weight, elem_star, raise_classical, Label, TensorElement,
};
use crate::rc::{theta, vacancy_of, RiggedConfig, RiggedPartition, TensorSpec};
use crate::rootdata::{Rank, Weight};
use crate::{Error, Result};

/// Placeholder rigging for rows awaiting re-singularization.
const PH: i64 = i64::MIN;

/// Weight of a single-box letter in doubled epsilon coordinates.
pub fn letter_weight(rank: Rank, x: Letter) -> Weight {
    let mut eps2 = vec![0i64; rank.n()];
    let v = x.unsigned_abs() as usize;
    eps2[v - 1] = if x > 0 { 2 } else { -2 };
    Weight::from_eps2(eps2)
}

/// Collapse the relaxed height-k labels onto the KR labels they equal.
pub fn canonical_label(rank: Rank, label: Label) -> Label {
    match label {
        Label::Hat(k) if (k as usize) <= rank.n() - 2 => Label::Kr(k),
        other => other,
    }
}

/// Selected string lengths of one box-removal step; None encodes
/// "never selected".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaTrace {
    /// First-scan selections for partitions 1..n-2, then the two fork
    /// partitions n-1 and n.
    pub l: Vec<Option<u32>>,
    /// Second-scan selections for partitions 1..n-2.
    pub lbar: Vec<Option<u32>>,
}

#[derive(Clone, Debug)]
pub struct DeltaResult {
    pub rc: RiggedConfig,
    pub letter: Letter,
    pub trace: DeltaTrace,
}

fn distinct_lengths_from(part: &RiggedPartition, min: u32) -> Vec<u32> {
    let mut lens: Vec<u32> = part
        .rows()
        .iter()
        .map(|&(l, _)| l)
        .filter(|&l| l >= min)
        .collect();
    lens.sort_unstable();
    lens.dedup();
    lens
}

fn smallest_singular(rc: &RiggedConfig, a: usize, min: u32) -> Option<u32> {
    for len in distinct_lengths_from(rc.part(a), min) {
        let p = rc.vacancy(a, len);
        if rc.part(a).riggings_at(len).contains(&p) {
            return Some(len);
        }
    }
    None
}

/// Second-scan search: when revisiting the first-scan length, two
/// singular rows of that length are required.
fn smallest_singular_second(
    rc: &RiggedConfig,
    a: usize,
    min: u32,
    first: Option<u32>,
) -> Option<u32> {
    for len in distinct_lengths_from(rc.part(a), min) {
        let p = rc.vacancy(a, len);
        let count = rc
            .part(a)
            .riggings_at(len)
            .iter()
            .filter(|&&r| r == p)
            .count();
        let needed = if first == Some(len) { 2 } else { 1 };
        if count >= needed {
            return Some(len);
        }
    }
    None
}

/// The box-removal step on a configuration whose leftmost factor is a
/// single box: selects singular strings by the two-scan rule, removes a
/// box from each, re-singularizes, and reports the produced letter.
pub fn delta(rc: &RiggedConfig) -> Result<DeltaResult> {
    let rank = rc.rank();
    let n = rank.n();
    match rc.spec().leftmost().map(|l| canonical_label(rank, l)) {
        Some(Label::Kr(1)) => {}
        other => {
            return Err(Error::Bijection(format!(
                "box removal needs a leftmost single-box factor, found {other:?}"
            )))
        }
    }
    let mut l: Vec<Option<u32>> = vec![None; n];
    let mut lbar: Vec<Option<u32>> = vec![None; n - 2];
    let letter: Letter = 'sel: {
        let mut min = 1u32;
        for a in 1..=n - 2 {
            match smallest_singular(rc, a, min) {
                Some(i) => {
                    l[a - 1] = Some(i);
                    min = i;
                }
                None => break 'sel a as Letter,
            }
        }
        let i_opt = smallest_singular(rc, n - 1, min);
        let j_opt = smallest_singular(rc, n, min);
        match (i_opt, j_opt) {
            (None, None) => break 'sel (n - 1) as Letter,
            (Some(i), None) => {
                l[n - 2] = Some(i);
                break 'sel n as Letter;
            }
            (None, Some(j)) => {
                l[n - 1] = Some(j);
                break 'sel -(n as Letter);
            }
            (Some(i), Some(j)) => {
                l[n - 2] = Some(i);
                l[n - 1] = Some(j);
                min = i.max(j);
            }
        }
        for a in (1..=n - 2).rev() {
            match smallest_singular_second(rc, a, min, l[a - 1]) {
                Some(i) => {
                    lbar[a - 1] = Some(i);
                    min = i;
                }
                None => break 'sel -((a + 1) as Letter),
            }
        }
        -1
    };

    // removal sites as (partition, length)
    let mut sites: Vec<(usize, u32)> = Vec::new();
    for a in 1..=n - 2 {
        if let Some(i) = l[a - 1] {
            sites.push((a, i));
        }
    }
    if let Some(i) = l[n - 2] {
        sites.push((n - 1, i));
    }
    if let Some(j) = l[n - 1] {
        sites.push((n, j));
    }
    for a in 1..=n - 2 {
        if let Some(i) = lbar[a - 1] {
            sites.push((a, i));
        }
    }

    let mut parts: Vec<RiggedPartition> = rc.parts().to_vec();
    for &(a, len) in &sites {
        let p = rc.vacancy(a, len);
        if !parts[a - 1].remove_row(len, p) {
            return Err(Error::Bijection(format!(
                "selected singular row ({len}, {p}) missing in partition {a}"
            )));
        }
        if len > 1 {
            parts[a - 1].push_row(len - 1, PH);
        }
    }
    let new_spec = rc.spec().pop_leftmost();
    let new_lambda = rc.lambda().sub(&letter_weight(rank, letter));
    resingularize(&new_spec, &mut parts);
    Ok(DeltaResult {
        rc: RiggedConfig::new(new_spec, new_lambda, parts),
        letter,
        trace: DeltaTrace { l, lbar },
    })
}

/// Give every placeholder row the singular rigging of its length in
/// the final configuration.
fn resingularize(spec: &TensorSpec, parts: &mut [RiggedPartition]) {
    let n = spec.rank().n();
    for a in 1..=n {
        if parts[a - 1].rows().iter().any(|&(_, r)| r == PH) {
            let rows: Vec<(u32, i64)> = parts[a - 1]
                .rows()
                .iter()
                .map(|&(len, r)| {
                    if r == PH {
                        (len, vacancy_of(spec, parts, a, len))
                    } else {
                        (len, r)
                    }
                })
                .collect();
            parts[a - 1] = RiggedPartition::new(rows);
        }
    }
}

/// Reverse scan: add a box back for the given letter.  The construction
/// lengthens, at each selection site in reverse order, the longest
/// singular string below the previously restored length; the result is
/// validated by running the forward map.
pub fn delta_inv(rc: &RiggedConfig, letter: Letter) -> Result<RiggedConfig> {
    let rank = rc.rank();
    let n = rank.n();
    let v = letter.unsigned_abs() as usize;
    if letter == 0 || v > n {
        return Err(Error::Bijection(format!("bad letter {letter}")));
    }

    // reverse processing order: second-scan sites ascending, the fork,
    // then first-scan sites descending
    let mut seconds: Vec<usize> = Vec::new();
    let mut forks: Vec<usize> = Vec::new();
    let first_max: usize;
    if letter > 0 {
        if v <= n - 2 {
            first_max = v - 1;
        } else if v == n - 1 {
            first_max = n - 2;
        } else {
            forks.push(n - 1);
            first_max = n - 2;
        }
    } else {
        first_max = n - 2;
        if v == n {
            forks.push(n);
        } else {
            forks.push(n - 1);
            forks.push(n);
            seconds.extend(v.max(2)..=n - 2);
            if v == 1 {
                seconds.insert(0, 1);
            }
        }
    }

    // picks: (partition, old length or 0 for a created row)
    let mut used: Vec<Vec<bool>> = rc.parts().iter().map(|p| vec![false; p.rows().len()]).collect();
    let mut picks: Vec<(usize, u32)> = Vec::new();
    let pick = |a: usize, bound: u64, used: &mut Vec<Vec<bool>>| -> u32 {
        let part = rc.part(a);
        let mut best: Option<(u32, usize)> = None;
        for (idx, &(len, rig)) in part.rows().iter().enumerate() {
            if used[a - 1][idx] || (len as u64) >= bound {
                continue;
            }
            if rig == rc.vacancy(a, len) && best.map(|(b, _)| len > b).unwrap_or(true) {
                best = Some((len, idx));
            }
        }
        match best {
            Some((len, idx)) => {
                used[a - 1][idx] = true;
                len
            }
            None => 0,
        }
    };

    let mut prev: u64 = u64::MAX;
    for &a in &seconds {
        let old = pick(a, prev, &mut used);
        picks.push((a, old));
        prev = old as u64 + 1;
    }
    if !forks.is_empty() {
        let bound = prev;
        let mut restored = Vec::new();
        for &a in &forks {
            let old = pick(a, bound, &mut used);
            picks.push((a, old));
            restored.push(old as u64 + 1);
        }
        prev = restored.into_iter().min().unwrap();
    }
    for a in (1..=first_max).rev() {
        let old = pick(a, prev, &mut used);
        picks.push((a, old));
        prev = old as u64 + 1;
    }

    // apply the lengthenings
    let mut parts: Vec<RiggedPartition> = rc.parts().to_vec();
    for &(a, old) in &picks {
        if old > 0 {
            let rig = rc.vacancy(a, old);
            if !parts[a - 1].remove_row(old, rig) {
                return Err(Error::NoPreimage(format!(
                    "reverse scan row ({old}) vanished in partition {a}"
                )));
            }
        }
        parts[a - 1].push_row(old + 1, PH);
    }
    let new_spec = {
        let mut factors = vec![Label::Kr(1)];
        factors.extend_from_slice(rc.spec().factors());
        TensorSpec::new(rank, factors)
    };
    let new_lambda = rc.lambda().add(&letter_weight(rank, letter));
    resingularize(&new_spec, &mut parts);
    let candidate = RiggedConfig::new(new_spec, new_lambda, parts);

    // the contract is the round trip; verify it
    let check = delta(&candidate)?;
    if check.letter != letter || &check.rc != rc {
        return Err(Error::NoPreimage(format!(
            "letter {letter} is not addable at this configuration"
        )));
    }
    Ok(candidate)
}

/// Which splitting applies to a leftmost factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitKind {
    /// Relaxed height-k column, 1 <= k <= n-1.
    Hat(u8),
    /// Doubled image of the plain spinor.
    En,
    /// Doubled image of the barred spinor.
    EnM1,
}

fn split_kind(rank: Rank, label: Label) -> Result<SplitKind> {
    let n = rank.n();
    match label {
        Label::Kr(k) if (k as usize) <= n - 2 => Ok(SplitKind::Hat(k)),
        Label::Hat(k) if (k as usize) < n => Ok(SplitKind::Hat(k)),
        Label::En => Ok(SplitKind::En),
        Label::EnM1 => Ok(SplitKind::EnM1),
        other => Err(Error::Bijection(format!("{other} cannot be split"))),
    }
}

impl SplitKind {
    fn targets(self, n: usize) -> Vec<usize> {
        match self {
            SplitKind::Hat(k) => (1..k as usize).collect(),
            SplitKind::En => (1..=n - 1).collect(),
            SplitKind::EnM1 => {
                let mut t: Vec<usize> = (1..=n - 2).collect();
                t.push(n);
                t
            }
        }
    }

    fn tail_label(self, rank: Rank) -> Label {
        match self {
            SplitKind::Hat(k) => canonical_label(rank, Label::Hat(k - 1)),
            SplitKind::En | SplitKind::EnM1 => Label::Hat(rank.n() as u8 - 1),
        }
    }

    fn whole_label(self, rank: Rank) -> Label {
        match self {
            SplitKind::Hat(k) => canonical_label(rank, Label::Hat(k)),
            SplitKind::En => Label::En,
            SplitKind::EnM1 => Label::EnM1,
        }
    }
}

/// Top split on rigged configurations: add a singular length-1 string
/// to the partitions attached to the leftmost factor and split that
/// factor off as a single box.  Vacancy numbers are unchanged.
pub fn tj(rc: &RiggedConfig) -> Result<RiggedConfig> {
    let rank = rc.rank();
    let n = rank.n();
    let leftmost = rc
        .spec()
        .leftmost()
        .ok_or_else(|| Error::Bijection("top split on an empty tensor".into()))?;
    let kind = split_kind(rank, leftmost)?;
    let new_spec = rc
        .spec()
        .replace_leftmost(&[Label::Kr(1), kind.tail_label(rank)]);
    let mut parts = rc.parts().to_vec();
    for &a in &kind.targets(n) {
        parts[a - 1].push_row(1, PH);
    }
    resingularize(&new_spec, &mut parts);
    Ok(RiggedConfig::new(new_spec, rc.lambda().clone(), parts))
}

/// Inverse of `tj`: remove the singular length-1 strings and fuse the
/// two leftmost factors back together.
pub fn tj_inv(rc: &RiggedConfig, kind: SplitKind) -> Result<RiggedConfig> {
    let rank = rc.rank();
    let n = rank.n();
    let factors = rc.spec().factors();
    if factors.len() < 2
        || canonical_label(rank, factors[0]) != Label::Kr(1)
        || factors[1] != kind.tail_label(rank)
    {
        return Err(Error::Bijection(format!(
            "tensor {} does not start with a split {kind:?}",
            rc.spec()
        )));
    }
    let mut parts = rc.parts().to_vec();
    for &a in &kind.targets(n) {
        let p = vacancy_of(rc.spec(), rc.parts(), a, 1);
        if !parts[a - 1].remove_row(1, p) {
            return Err(Error::NoPreimage(format!(
                "no singular length-1 string in partition {a} to unsplit"
            )));
        }
    }
    let new_spec = {
        let mut f = vec![kind.whole_label(rank)];
        f.extend_from_slice(&factors[2..]);
        TensorSpec::new(rank, f)
    };
    Ok(RiggedConfig::new(new_spec, rc.lambda().clone(), parts))
}

/// Bottom split on rigged configurations: the complement-conjugate of
/// `tj`, acting on the rightmost factor.
pub fn bj(rc: &RiggedConfig) -> Result<RiggedConfig> {
    let flipped = theta(&rc.reversed_spec());
    let split = tj(&flipped)?;
    Ok(theta(&split).reversed_spec())
}

/// The complement-conjugate box removal, acting on a rightmost single
/// box.
pub fn delta_tilde(rc: &RiggedConfig) -> Result<DeltaResult> {
    let flipped = theta(&rc.reversed_spec());
    let d = delta(&flipped)?;
    Ok(DeltaResult {
        rc: theta(&d.rc).reversed_spec(),
        letter: d.letter,
        trace: d.trace,
    })
}

/// Inverse of `delta_tilde`.
pub fn delta_tilde_inv(rc: &RiggedConfig, letter: Letter) -> Result<RiggedConfig> {
    let flipped = theta(&rc.reversed_spec());
    let out = delta_inv(&flipped, letter)?;
    Ok(theta(&out).reversed_spec())
}

// ---------------------------------------------------------------------------
// path-side maps

/// Drop the leftmost single-box factor.
pub fn lh(elem: &TensorElement, rank: Rank) -> Result<TensorElement> {
    match elem.factors().first() {
        Some(&(l, _)) if canonical_label(rank, l) == Label::Kr(1) => {
            Ok(TensorElement::new(elem.factors()[1..].to_vec()))
        }
        _ => Err(Error::Bijection("leftmost factor is not a single box".into())),
    }
}

/// Drop the leftmost spinor factor.
pub fn lh_s(elem: &TensorElement, rank: Rank) -> Result<TensorElement> {
    match elem.factors().first() {
        Some(&(l, _)) if l.is_spinor(rank) => {
            Ok(TensorElement::new(elem.factors()[1..].to_vec()))
        }
        _ => Err(Error::Bijection("leftmost factor is not a spinor".into())),
    }
}

/// Top split on paths: peel the top letter of the leftmost column.
pub fn ts(elem: &TensorElement, rank: Rank) -> Result<TensorElement> {
    let (label, col) = elem
        .factors()
        .first()
        .ok_or_else(|| Error::Bijection("top split on an empty tensor".into()))?;
    let kind = split_kind(rank, *label)?;
    let k = col.height();
    if k < 1 {
        return Err(Error::Bijection("empty column".into()));
    }
    let top = col.letters()[k - 1];
    let rest = Column::new(col.letters()[..k - 1].to_vec());
    let mut factors = vec![
        (Label::Kr(1), Column::new(vec![top])),
        (kind.tail_label(rank), rest),
    ];
    factors.extend_from_slice(&elem.factors()[1..]);
    Ok(TensorElement::new(factors))
}

/// Bottom split on paths: peel the bottom letter of the rightmost
/// column.
pub fn bs(elem: &TensorElement, rank: Rank) -> Result<TensorElement> {
    let (label, col) = elem
        .factors()
        .last()
        .ok_or_else(|| Error::Bijection("bottom split on an empty tensor".into()))?;
    let kind = split_kind(rank, *label)?;
    let bottom = col.letters()[0];
    let rest = Column::new(col.letters()[1..].to_vec());
    let mut factors = elem.factors()[..elem.len() - 1].to_vec();
    factors.push((kind.tail_label(rank), rest));
    factors.push((Label::Kr(1), Column::new(vec![bottom])));
    Ok(TensorElement::new(factors))
}

/// The dual map on paths: dualize every factor, reverse, and raise back
/// to the classically highest element of the component.
pub fn path_dual(rank: Rank, elem: &TensorElement) -> TensorElement {
    raise_classical(rank, &elem_star(rank, elem))
}

/// Drop the rightmost single-box factor, transported through the dual.
pub fn rh(elem: &TensorElement, rank: Rank) -> Result<TensorElement> {
    let d = path_dual(rank, elem);
    let cut = lh(&d, rank)?;
    Ok(path_dual(rank, &cut))
}

// ---------------------------------------------------------------------------
// doubling embeddings

/// Double every part length and rigging; the factor list doubles with
/// spinors turning into their embedded images.
pub fn emb_rc(rc: &RiggedConfig) -> Result<RiggedConfig> {
    let rank = rc.rank();
    let n = rank.n();
    let mut factors = Vec::new();
    for &f in rc.spec().factors() {
        match f {
            Label::Kr(k) if (k as usize) <= n - 2 => {
                factors.push(Label::Kr(k));
                factors.push(Label::Kr(k));
            }
            Label::Kr(k) if (k as usize) == n => factors.push(Label::En),
            Label::Kr(_) => factors.push(Label::EnM1),
            other => {
                return Err(Error::Bijection(format!(
                    "{other} cannot be doubled inside the embedding"
                )))
            }
        }
    }
    let spec = TensorSpec::new(rank, factors);
    let parts = rc
        .parts()
        .iter()
        .map(|p| RiggedPartition::new(p.rows().iter().map(|&(l, r)| (2 * l, 2 * r)).collect()))
        .collect();
    Ok(RiggedConfig::new(spec, rc.lambda().scale(2), parts))
}

/// Halve a configuration lying in the image of the doubling embedding.
pub fn emb_rc_inv(rc: &RiggedConfig, original: &TensorSpec) -> Result<RiggedConfig> {
    let mut parts = Vec::with_capacity(rc.parts().len());
    for p in rc.parts() {
        let mut rows = Vec::with_capacity(p.rows().len());
        for &(l, r) in p.rows() {
            if l % 2 != 0 || r % 2 != 0 {
                return Err(Error::Bijection(format!(
                    "configuration is not doubled: row ({l}, {r})"
                )));
            }
            rows.push((l / 2, r / 2));
        }
        parts.push(RiggedPartition::new(rows));
    }
    Ok(RiggedConfig::new(
        original.clone(),
        rc.lambda().halve()?,
        parts,
    ))
}

/// Apply the affine embedding to each factor of a path.
pub fn emb_p(rank: Rank, elem: &TensorElement) -> Result<TensorElement> {
    let n = rank.n();
    let mut factors = Vec::new();
    for (l, c) in elem.factors() {
        match crate::crystal::emb_b(rank, *l, c)? {
            crate::crystal::EmbImage::Pair(c2, c1) => {
                factors.push((*l, c2));
                factors.push((*l, c1));
            }
            crate::crystal::EmbImage::Hat(h) => {
                let lab = if l == &Label::Kr(n as u8) {
                    Label::En
                } else {
                    Label::EnM1
                };
                factors.push((lab, h));
            }
        }
    }
    Ok(TensorElement::new(factors))
}

// ---------------------------------------------------------------------------
// spinor removal

#[derive(Clone, Debug)]
pub struct SpinorResult {
    pub rc: RiggedConfig,
    pub column: Column,
    /// The doubled starting configuration.
    pub doubled_start: RiggedConfig,
    /// Doubled configuration and produced letter after each round.
    pub rounds: Vec<(RiggedConfig, Letter, DeltaTrace)>,
}

fn check_even_odd_trace(n: usize, trace: &DeltaTrace) -> Result<()> {
    for a in 1..=n - 2 {
        if let Some(i) = trace.l[a - 1] {
            if i % 2 != 1 {
                return Err(Error::Bijection(format!(
                    "spinor removal selected an even first-scan string {i} at partition {a}"
                )));
            }
        }
        if let Some(i) = trace.lbar[a - 1] {
            if i % 2 != 0 {
                return Err(Error::Bijection(format!(
                    "spinor removal selected an odd second-scan string {i} at partition {a}"
                )));
            }
        }
    }
    Ok(())
}

/// Remove a leftmost spinor factor: double, peel the height-n image one
/// box at a time, and halve back.
pub fn delta_s(rc: &RiggedConfig) -> Result<SpinorResult> {
    let rank = rc.rank();
    let n = rank.n();
    let leftmost = rc
        .spec()
        .leftmost()
        .ok_or_else(|| Error::Bijection("spinor removal on an empty tensor".into()))?;
    if !leftmost.is_spinor(rank) {
        return Err(Error::Bijection(format!(
            "spinor removal needs a leftmost spinor factor, found {leftmost}"
        )));
    }
    let doubled_start = emb_rc(rc)?;
    let mut cur = doubled_start.clone();
    let mut rounds = Vec::with_capacity(n);
    let mut letters = Vec::with_capacity(n);
    for round in 1..=n {
        let height = n - round + 1;
        if height >= 2 {
            cur = tj(&cur)?;
        }
        let d = delta(&cur)?;
        check_even_odd_trace(n, &d.trace)?;
        cur = d.rc;
        letters.push(d.letter);
        rounds.push((cur.clone(), d.letter, d.trace));
    }
    let rest_spec = rc.spec().pop_leftmost();
    let halved = emb_rc_inv(&cur, &rest_spec)?;
    let column = Column::new(letters.iter().rev().copied().collect());
    let variant_ok = leftmost.contains(rank, &column)?;
    if !variant_ok {
        return Err(Error::Bijection(format!(
            "spinor removal produced {column}, not an element of {leftmost}"
        )));
    }
    let expect_lambda = rc.lambda().sub(&column_weight(rank, leftmost, &column));
    if halved.lambda() != &expect_lambda {
        return Err(Error::Bijection(
            "spinor removal weight bookkeeping mismatch".into(),
        ));
    }
    Ok(SpinorResult {
        rc: halved,
        column,
        doubled_start,
        rounds,
    })
}

/// Inverse of `delta_s`: double, replay the rounds backwards adding the
/// column letters bottom up, and halve.
pub fn delta_s_inv(rc: &RiggedConfig, column: &Column, label: Label) -> Result<RiggedConfig> {
    let rank = rc.rank();
    let n = rank.n();
    if !label.is_spinor(rank) || column.height() != n {
        return Err(Error::Bijection(format!(
            "spinor insertion needs a height-{n} spinor column"
        )));
    }
    let mut cur = emb_rc(rc)?;
    for t in 1..=n {
        let letter = column.letters()[t - 1];
        cur = delta_inv(&cur, letter)?;
        if t >= 2 {
            let kind = if t < n {
                SplitKind::Hat(t as u8)
            } else if label == Label::Kr(n as u8) {
                SplitKind::En
            } else {
                SplitKind::EnM1
            };
            cur = tj_inv(&cur, kind)?;
        }
    }
    let mut factors = vec![label];
    factors.extend_from_slice(rc.spec().factors());
    let target_spec = TensorSpec::new(rank, factors);
    emb_rc_inv(&cur, &target_spec)
}

// ---------------------------------------------------------------------------
// the assembled bijections

/// Traces collected along one run of the forward bijection, grouped by
/// the factor they produced.
pub type PhiTraces = Vec<Vec<DeltaTrace>>;

fn phi_rec(rc: &RiggedConfig, traces: &mut PhiTraces) -> Result<Vec<(Label, Column)>> {
    let rank = rc.rank();
    let leftmost = match rc.spec().leftmost() {
        None => {
            if !rc.lambda().is_zero() || rc.parts().iter().any(|p| !p.rows().is_empty()) {
                return Err(Error::Bijection(
                    "nonempty configuration over an empty tensor".into(),
                ));
            }
            return Ok(vec![]);
        }
        Some(l) => canonical_label(rank, l),
    };
    if leftmost.is_spinor(rank) {
        let s = delta_s(rc)?;
        traces.push(s.rounds.iter().map(|(_, _, t)| t.clone()).collect());
        let mut rest = phi_rec(&s.rc, traces)?;
        let mut out = vec![(leftmost, s.column)];
        out.append(&mut rest);
        return Ok(out);
    }
    let k = leftmost.height(rank);
    let mut letters: Vec<Letter> = Vec::with_capacity(k);
    let mut cur = rc.clone();
    let mut block = Vec::with_capacity(k);
    for height in (1..=k).rev() {
        if height >= 2 {
            cur = tj(&cur)?;
        }
        let d = delta(&cur)?;
        cur = d.rc;
        letters.push(d.letter);
        block.push(d.trace);
    }
    traces.push(block);
    let column = Column::new(letters.iter().rev().copied().collect());
    if !leftmost.contains(rank, &column)? {
        return Err(Error::Bijection(format!(
            "assembled column {column} is not an element of {leftmost}"
        )));
    }
    let mut rest = phi_rec(&cur, traces)?;
    let mut out = vec![(leftmost, column)];
    out.append(&mut rest);
    Ok(out)
}

/// The bijection from rigged configurations to paths.
pub fn phi(rc: &RiggedConfig) -> Result<TensorElement> {
    Ok(phi_with_traces(rc)?.0)
}

/// Forward bijection returning the per-factor box-removal traces.
pub fn phi_with_traces(rc: &RiggedConfig) -> Result<(TensorElement, PhiTraces)> {
    let mut traces = Vec::new();
    let factors = phi_rec(rc, &mut traces)?;
    Ok((TensorElement::new(factors), traces))
}

/// The inverse bijection from paths to rigged configurations.
pub fn phi_inv(rank: Rank, elem: &TensorElement) -> Result<RiggedConfig> {
    if elem.is_empty() {
        return Ok(RiggedConfig::empty(
            TensorSpec::new(rank, vec![]),
            Weight::zero(rank),
        ));
    }
    let (label, col) = &elem.factors()[0];
    let label = canonical_label(rank, *label);
    let rest = TensorElement::new(elem.factors()[1..].to_vec());
    if label.is_spinor(rank) {
        let rc = phi_inv(rank, &rest)?;
        return delta_s_inv(&rc, col, label);
    }
    let k = col.height();
    if k == 1 {
        let rc = phi_inv(rank, &rest)?;
        return delta_inv(&rc, col.letters()[0]);
    }
    // peel the top letter, invert the remainder, then add it back
    let kind = split_kind(rank, label)?;
    let top = col.letters()[k - 1];
    let body = Column::new(col.letters()[..k - 1].to_vec());
    let mut inner_factors = vec![(kind.tail_label(rank), body)];
    inner_factors.extend_from_slice(elem.factors()[1..].iter().as_slice());
    let inner = phi_inv(rank, &TensorElement::new(inner_factors))?;
    let with_box = delta_inv(&inner, top)?;
    tj_inv(&with_box, kind)
}

/// The statistic-matching variant: complement the riggings first.
pub fn phi_tilde(rc: &RiggedConfig) -> Result<TensorElement> {
    phi(&theta(rc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::enumerate_paths;
    use crate::rc::{enumerate_rc, is_valid_rc};
    use crate::rootdata::fundamental_weight;

    fn rk(n: u8) -> Rank {
        Rank::new(n).unwrap()
    }

    fn col(top_down: &[Letter]) -> Column {
        Column::from_top_down(top_down)
    }

    fn kr_spec(n: u8, ks: &[u8]) -> TensorSpec {
        TensorSpec::new(rk(n), ks.iter().map(|&k| Label::Kr(k)).collect())
    }

    fn example_rc() -> RiggedConfig {
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
    fn delta_on_worked_example() {
        let rc = example_rc();
        let d = delta(&rc).unwrap();
        assert_eq!(d.letter, -3);
        assert_eq!(d.trace.l, vec![Some(1), Some(1), Some(1), Some(3)]);
        assert_eq!(d.trace.lbar, vec![None, None]);
        let expect_parts = [RiggedPartition::new(vec![(2, 0), (1, 0)]),
            RiggedPartition::new(vec![(2, 0), (2, 0), (1, 1)]),
            RiggedPartition::new(vec![(2, 0)]),
            RiggedPartition::new(vec![(2, 1)])];
        assert_eq!(d.rc.parts(), &expect_parts[..]);
        assert!(is_valid_rc(&d.rc));
        // weight dropped by the letter weight
        assert_eq!(
            d.rc.lambda().eps2(),
            fundamental_weight(rk(4), 2).unwrap().add(&letter_weight(rk(4), 3)).eps2()
        );
    }

    #[test]
    fn delta_inv_round_trip_on_example() {
        let rc = example_rc();
        let d = delta(&rc).unwrap();
        let back = delta_inv(&d.rc, d.letter).unwrap();
        assert_eq!(back, rc);
        // the trivial case: adding the letter 1 to the empty set
        let rank = rk(4);
        let empty = RiggedConfig::empty(TensorSpec::new(rank, vec![]), Weight::zero(rank));
        let one = delta_inv(&empty, 1).unwrap();
        assert_eq!(one.spec().factors(), &[Label::Kr(1)]);
        assert!(one.parts().iter().all(|p| p.rows().is_empty()));
    }

    #[test]
    fn delta_exhaustive_round_trip_two_boxes() {
        let rank = rk(4);
        let spec = kr_spec(4, &[1, 1]);
        let l = spec.l_vector().unwrap();
        for lam in crate::cli::dominant_weights_below(rank, &l) {
            for rc in enumerate_rc(rank, &lam, &spec).unwrap() {
                let d = delta(&rc).unwrap();
                let back = delta_inv(&d.rc, d.letter).unwrap();
                assert_eq!(back, rc, "round trip at {rc}");
            }
        }
    }

    #[test]
    fn tj_preserves_vacancies() {
        let rank = rk(4);
        let spec = kr_spec(4, &[2, 1]);
        let l = spec.l_vector().unwrap();
        for lam in crate::cli::dominant_weights_below(rank, &l) {
            for rc in enumerate_rc(rank, &lam, &spec).unwrap() {
                let t = tj(&rc).unwrap();
                for a in 1..=4usize {
                    let max = rc.max_len().max(2) + 1;
                    for i in 1..=max {
                        assert_eq!(rc.vacancy(a, i), t.vacancy(a, i), "vacancy at ({a},{i})");
                    }
                }
                let back = tj_inv(&t, SplitKind::Hat(2)).unwrap();
                assert_eq!(back, rc);
            }
        }
    }

    #[test]
    fn phi_on_worked_example() {
        let rc = example_rc();
        let elem = phi(&rc).unwrap();
        let expect = TensorElement::new(vec![
            (Label::Kr(1), col(&[-3])),
            (Label::Kr(1), col(&[-4])),
            (Label::Kr(2), col(&[4, 3])),
            (Label::Kr(2), col(&[-1, 1])),
            (Label::Kr(2), col(&[2, 1])),
        ]);
        assert_eq!(elem, expect);
        // complemented variant swaps the middle factors
        let elem_t = phi_tilde(&rc).unwrap();
        let expect_t = TensorElement::new(vec![
            (Label::Kr(1), col(&[-3])),
            (Label::Kr(1), col(&[-4])),
            (Label::Kr(2), col(&[-1, 1])),
            (Label::Kr(2), col(&[4, 3])),
            (Label::Kr(2), col(&[2, 1])),
        ]);
        assert_eq!(elem_t, expect_t);
        // inverse recovers the configuration
        assert_eq!(phi_inv(rk(4), &elem).unwrap(), rc);
    }

    #[test]
    fn delta_inverse_matches_table_inversion() {
        // invert the removal over the full worked-example cell by
        // tabulating the forward map; the reverse scan must agree with
        // the unique tabulated preimage everywhere
        let rank = rk(4);
        let spec = kr_spec(4, &[1, 1, 2, 2, 2]);
        let lambda = fundamental_weight(rank, 2).unwrap();
        let rcs = enumerate_rc(rank, &lambda, &spec).unwrap();
        assert!(!rcs.is_empty());
        let mut table: std::collections::HashMap<String, RiggedConfig> =
            std::collections::HashMap::new();
        for rc in &rcs {
            let d = delta(rc).unwrap();
            let key = format!("{}|{}", d.rc, d.letter);
            assert!(
                table.insert(key, rc.clone()).is_none(),
                "forward map must be injective"
            );
        }
        for rc in &rcs {
            let d = delta(rc).unwrap();
            let back = delta_inv(&d.rc, d.letter).unwrap();
            let key = format!("{}|{}", d.rc, d.letter);
            assert_eq!(&back, &table[&key]);
            assert_eq!(&back, rc);
        }
    }

    #[test]
    fn spinor_example_table() {
        // the rank-5 spinor removal, step by step
        let rank = rk(5);
        let spec = kr_spec(5, &[5, 2, 1, 1, 1]);
        let lambda = Weight::from_lambda(rank, &[2, 0, 0, 1, 0]).unwrap();
        let parts = vec![
            RiggedPartition::new(vec![(2, 1)]),
            RiggedPartition::new(vec![(2, 0), (1, 0)]),
            RiggedPartition::new(vec![(2, 0), (1, 0)]),
            RiggedPartition::new(vec![(1, 0)]),
            RiggedPartition::new(vec![(2, 0)]),
        ];
        let rc = RiggedConfig::new(spec, lambda, parts);
        assert!(is_valid_rc(&rc));
        let s = delta_s(&rc).unwrap();
        // doubled start
        let row = |v: Vec<Vec<(u32, i64)>>| -> Vec<RiggedPartition> {
            v.into_iter().map(RiggedPartition::new).collect()
        };
        assert_eq!(
            s.doubled_start.parts(),
            &row(vec![
                vec![(4, 2)],
                vec![(4, 0), (2, 0)],
                vec![(4, 0), (2, 0)],
                vec![(2, 0)],
                vec![(4, 0)],
            ])[..]
        );
        let letters: Vec<Letter> = s.rounds.iter().map(|&(_, b, _)| b).collect();
        assert_eq!(letters, vec![-2, -5, 4, 3, 1]);
        let expected_rounds: Vec<Vec<RiggedPartition>> = vec![
            row(vec![
                vec![(4, 2)],
                vec![(3, 0), (2, 0)],
                vec![(3, 0), (2, 0)],
                vec![(2, 0)],
                vec![(3, 0)],
            ]),
            row(vec![
                vec![(4, 2)],
                vec![(3, 0), (2, 0)],
                vec![(3, 0), (2, 0)],
                vec![(2, 0)],
                vec![(2, 0)],
            ]),
            row(vec![
                vec![(4, 2)],
                vec![(3, 0), (2, 0)],
                vec![(2, 0), (2, 0)],
                vec![(2, 0)],
                vec![(2, 0)],
            ]),
            row(vec![
                vec![(4, 2)],
                vec![(2, 0), (2, 0)],
                vec![(2, 0), (2, 0)],
                vec![(2, 0)],
                vec![(2, 0)],
            ]),
            row(vec![
                vec![(4, 2)],
                vec![(2, 0), (2, 0)],
                vec![(2, 0), (2, 0)],
                vec![(2, 0)],
                vec![(2, 0)],
            ]),
        ];
        for (idx, expect) in expected_rounds.iter().enumerate() {
            assert_eq!(s.rounds[idx].0.parts(), &expect[..], "round {}", idx + 1);
        }
        // final halved configuration and column
        assert_eq!(s.column, col(&[-2, -5, 4, 3, 1]));
        assert_eq!(
            s.rc.lambda(),
            &Weight::from_lambda(rank, &[1, 1, 0, 0, 0]).unwrap()
        );
        assert_eq!(
            s.rc.parts(),
            &row(vec![
                vec![(2, 1)],
                vec![(1, 0), (1, 0)],
                vec![(1, 0), (1, 0)],
                vec![(1, 0)],
                vec![(1, 0)],
            ])[..]
        );
        // and the inverse rebuilds the input
        let back = delta_s_inv(&s.rc, &s.column, Label::Kr(5)).unwrap();
        assert_eq!(back, rc);
    }

    #[test]
    fn spinor_trivial_column() {
        // the unique configuration for a lone plain spinor factor
        let rank = rk(4);
        let spec = kr_spec(4, &[4]);
        let lambda = fundamental_weight(rank, 4).unwrap();
        let rc = RiggedConfig::empty(spec, lambda);
        let s = delta_s(&rc).unwrap();
        assert_eq!(s.column, col(&[4, 3, 2, 1]));
        assert!(s.rc.spec().is_empty());
    }

    #[test]
    fn small_cell_bijection() {
        let rank = rk(4);
        let spec = kr_spec(4, &[2, 4, 1]);
        let l = spec.l_vector().unwrap();
        for lam in crate::cli::dominant_weights_below(rank, &l) {
            let rcs = enumerate_rc(rank, &lam, &spec).unwrap();
            let paths = enumerate_paths(rank, &lam, spec.factors()).unwrap();
            assert_eq!(rcs.len(), paths.len());
            let mut seen = std::collections::HashSet::new();
            for rc in &rcs {
                let p = phi(rc).unwrap();
                assert_eq!(p.weight(rank), lam.clone(), "weight preserved");
                assert!(paths.contains(&p), "{p} is a path");
                assert!(seen.insert(p.clone()), "injective");
                assert_eq!(&phi_inv(rank, &p).unwrap(), rc, "inverse");
            }
        }
    }

    #[test]
    fn bj_adds_label_zero_rows() {
        let rank = rk(4);
        let spec = kr_spec(4, &[1, 2]);
        let l = spec.l_vector().unwrap();
        for lam in crate::cli::dominant_weights_below(rank, &l) {
            for rc in enumerate_rc(rank, &lam, &spec).unwrap() {
                let b = bj(&rc).unwrap();
                assert_eq!(
                    b.spec().factors(),
                    &[Label::Kr(1), Label::Kr(1), Label::Kr(1)]
                );
                // partition 1 gained a zero-rigged box
                assert_eq!(
                    b.part(1).rows().len(),
                    rc.part(1).rows().len() + 1
                );
                assert!(b.part(1).rows().iter().any(|&(l, r)| l == 1 && r == 0));
            }
        }
    }
}
