//! Command-line surface, JSON wire formats, and the desk-scale
//! verification harness driving every invariant suite.

use crate::bijection::{
    bj, bs, delta, delta_tilde, emb_p, emb_rc, lh, phi, phi_inv, phi_with_traces, rh, tj, ts,
    DeltaResult, DeltaTrace, SplitKind,
};
use crate::columns::{Column, Letter};
use crate::crystal::{enumerate, enumerate_paths, Label, TensorElement};
use crate::energy::{energy, factor_energy};
use crate::fermionic::{m_sum, x_sum, QPolynomial};
use crate::rc::{cc, enumerate_rc, theta, RiggedConfig, RiggedPartition, TensorSpec};
use crate::rmatrix::{appendix_d, RCache};
use crate::rootdata::{Rank, Weight};
use crate::{Error, Result};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::str::FromStr;

/// All dominant lattice weights lambda with L - lambda in the
/// nonnegative root cone, L included.
#[allow(clippy::too_many_arguments)]
pub fn dominant_weights_below(rank: Rank, l: &Weight) -> Vec<Weight> {
    let n = rank.n();
    let m = l.eps2()[0];
    let parity = m.rem_euclid(2);
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    fn go(
        rank: Rank,
        l: &Weight,
        n: usize,
        parity: i64,
        idx: usize,
        upper: i64,
        cur: &mut Vec<i64>,
        out: &mut Vec<Weight>,
    ) {
        if idx == n - 1 {
            let bound = cur[n - 2];
            let mut v = -bound;
            while v <= bound {
                if v.rem_euclid(2) == parity {
                    cur[n - 1] = v;
                    let w = Weight::from_eps2(cur.clone());
                    if crate::rc::root_cone_coeffs(rank, &l.sub(&w)).is_some() {
                        out.push(w);
                    }
                }
                v += 1;
            }
            return;
        }
        let mut v = upper;
        while v >= 0 {
            if v.rem_euclid(2) == parity {
                cur[idx] = v;
                go(rank, l, n, parity, idx + 1, v, cur, out);
            }
            v -= 1;
        }
    }
    go(rank, l, n, parity, 0, m, &mut cur, &mut out);
    out.sort_by_key(|w| w.eps2().to_vec());
    out
}

// ---------------------------------------------------------------------------
// JSON wire formats

pub mod wire {
    use super::*;

    pub fn column_to_json(col: &Column) -> Value {
        json!(col.to_top_down())
    }

    pub fn column_from_json(v: &Value) -> Result<Column> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Usage("column must be a JSON array".into()))?;
        let mut letters = Vec::with_capacity(arr.len());
        for x in arr {
            let i = x
                .as_i64()
                .ok_or_else(|| Error::Usage("column entries must be integers".into()))?;
            letters.push(i as Letter);
        }
        Ok(Column::from_top_down(&letters))
    }

    pub fn weight_to_json(w: &Weight) -> Value {
        match w.lambda_coeffs() {
            Some(coeffs) => json!({ "lambda": coeffs }),
            None => json!({ "eps2": w.eps2() }),
        }
    }

    pub fn weight_from_json(rank: Rank, v: &Value) -> Result<Weight> {
        if let Some(l) = v.get("lambda") {
            let coeffs: Vec<i64> = serde_json::from_value(l.clone())
                .map_err(|e| Error::Usage(format!("bad lambda coefficients: {e}")))?;
            return Weight::from_lambda(rank, &coeffs);
        }
        if let Some(e) = v.get("eps2") {
            let eps2: Vec<i64> = serde_json::from_value(e.clone())
                .map_err(|e| Error::Usage(format!("bad eps2 coordinates: {e}")))?;
            return Ok(Weight::from_eps2(eps2));
        }
        Err(Error::Usage("weight needs a lambda or eps2 field".into()))
    }

    pub fn element_to_json(elem: &TensorElement) -> Value {
        json!({
            "factors": elem
                .factors()
                .iter()
                .map(|(l, c)| json!({ "label": l.to_string(), "column": column_to_json(c) }))
                .collect::<Vec<_>>()
        })
    }

    pub fn element_from_json(v: &Value) -> Result<TensorElement> {
        let factors = v
            .get("factors")
            .and_then(|f| f.as_array())
            .ok_or_else(|| Error::Usage("element needs a factors array".into()))?;
        let mut out = Vec::with_capacity(factors.len());
        for f in factors {
            let label: Label = f
                .get("label")
                .and_then(|l| l.as_str())
                .ok_or_else(|| Error::Usage("factor needs a label".into()))?
                .parse()?;
            let col = column_from_json(
                f.get("column")
                    .ok_or_else(|| Error::Usage("factor needs a column".into()))?,
            )?;
            out.push((label, col));
        }
        Ok(TensorElement::new(out))
    }

    pub fn rc_to_json(rc: &RiggedConfig) -> Value {
        json!({
            "nu": rc
                .parts()
                .iter()
                .map(|p| {
                    p.rows()
                        .iter()
                        .map(|&(len, rig)| json!({ "len": len, "rig": rig }))
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>(),
            "lambda": weight_to_json(rc.lambda()),
            "B": rc.spec().factors().iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        })
    }

    pub fn rc_from_json(rank: Rank, v: &Value) -> Result<RiggedConfig> {
        let labels: Vec<Label> = v
            .get("B")
            .and_then(|b| b.as_array())
            .ok_or_else(|| Error::Usage("configuration needs a B factor list".into()))?
            .iter()
            .map(|s| {
                s.as_str()
                    .ok_or_else(|| Error::Usage("labels must be strings".into()))
                    .and_then(Label::from_str)
            })
            .collect::<Result<_>>()?;
        let lambda = weight_from_json(
            rank,
            v.get("lambda")
                .ok_or_else(|| Error::Usage("configuration needs a lambda".into()))?,
        )?;
        let nu = v
            .get("nu")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Usage("configuration needs a nu array".into()))?;
        if nu.len() != rank.n() {
            return Err(Error::Usage(format!(
                "nu must list {} partitions",
                rank.n()
            )));
        }
        let mut parts = Vec::with_capacity(nu.len());
        for p in nu {
            let rows = p
                .as_array()
                .ok_or_else(|| Error::Usage("each partition must be an array".into()))?
                .iter()
                .map(|r| {
                    let len = r.get("len").and_then(|x| x.as_u64());
                    let rig = r.get("rig").and_then(|x| x.as_i64());
                    match (len, rig) {
                        (Some(len), Some(rig)) => Ok((len as u32, rig)),
                        _ => Err(Error::Usage("rows need len and rig".into())),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            parts.push(RiggedPartition::new(rows));
        }
        Ok(RiggedConfig::new(
            TensorSpec::new(rank, labels),
            lambda,
            parts,
        ))
    }

    pub fn trace_to_json(trace: &DeltaTrace) -> Value {
        json!({ "l": trace.l, "lbar": trace.lbar })
    }

    pub fn delta_result_to_json(d: &DeltaResult) -> Value {
        json!({
            "rc": rc_to_json(&d.rc),
            "letter": d.letter,
            "trace": trace_to_json(&d.trace),
        })
    }

    pub fn qpoly_to_json(p: &QPolynomial) -> Value {
        json!({
            "coeffs": p
                .coeffs()
                .iter()
                .map(|(e, c)| (e.to_string(), json!(c)))
                .collect::<serde_json::Map<String, Value>>()
        })
    }
}

// ---------------------------------------------------------------------------
// the verification harness

/// One pass/fail line of a verification report.
#[derive(Clone, Debug)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub lines: Vec<CheckLine>,
}

impl Report {
    pub fn push(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.lines.push(CheckLine {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn merge(&mut self, other: Report) {
        self.lines.extend(other.lines);
    }

    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn print(&self) {
        for l in &self.lines {
            println!(
                "{} {}{}",
                if l.pass { "PASS" } else { "FAIL" },
                l.name,
                if l.detail.is_empty() {
                    String::new()
                } else {
                    format!(" ({})", l.detail)
                }
            );
        }
    }
}

/// All ordered factor lists with up to `max_factors` entries.
pub fn sweep_specs(rank: Rank, kinds: &[Label], max_factors: usize) -> Vec<TensorSpec> {
    let mut out = Vec::new();
    let mut cur: Vec<Label> = Vec::new();
    fn go(
        rank: Rank,
        kinds: &[Label],
        max: usize,
        cur: &mut Vec<Label>,
        out: &mut Vec<TensorSpec>,
    ) {
        if !cur.is_empty() {
            out.push(TensorSpec::new(rank, cur.clone()));
        }
        if cur.len() == max {
            return;
        }
        for &k in kinds {
            cur.push(k);
            go(rank, kinds, max, cur, out);
            cur.pop();
        }
    }
    go(rank, kinds, max_factors, &mut cur, &mut out);
    out
}

/// The standard sweep kinds: every KR node of the rank.
pub fn kr_kinds(rank: Rank) -> Vec<Label> {
    (1..=rank.n() as u8).map(Label::Kr).collect()
}

fn cells_of(rank: Rank, spec: &TensorSpec) -> Vec<(Weight, TensorSpec)> {
    let l = match spec.l_vector() {
        Ok(l) => l,
        Err(_) => return vec![],
    };
    dominant_weights_below(rank, &l)
        .into_iter()
        .map(|lam| (lam, spec.clone()))
        .collect()
}

/// Bijection sweep: sizes agree, the forward map is a weight-preserving
/// injection into the path set, and the inverse returns.
pub fn suite_bijection(rank: Rank, max_factors: usize) -> Result<Report> {
    let specs = sweep_specs(rank, &kr_kinds(rank), max_factors);
    let cells: Vec<_> = specs.iter().flat_map(|s| cells_of(rank, s)).collect();
    let results: Vec<String> = cells
        .par_iter()
        .flat_map(|(lam, spec)| {
            let mut bad = Vec::new();
            let rcs = match enumerate_rc(rank, lam, spec) {
                Ok(r) => r,
                Err(e) => return vec![format!("{spec} @ {:?}: {e}", lam.eps2())],
            };
            let paths = match enumerate_paths(rank, lam, spec.factors()) {
                Ok(p) => p,
                Err(e) => return vec![format!("{spec} @ {:?}: {e}", lam.eps2())],
            };
            if rcs.len() != paths.len() {
                bad.push(format!(
                    "{spec} @ {:?}: {} configurations vs {} paths",
                    lam.eps2(),
                    rcs.len(),
                    paths.len()
                ));
            }
            let mut seen = std::collections::HashSet::new();
            for rc in &rcs {
                match phi(rc) {
                    Ok(p) => {
                        if p.weight(rank) != *lam {
                            bad.push(format!("{spec}: weight not preserved at {rc}"));
                        }
                        if !paths.contains(&p) {
                            bad.push(format!("{spec}: image {p} is not a path"));
                        }
                        if !seen.insert(p.clone()) {
                            bad.push(format!("{spec}: image {p} repeated"));
                        }
                        match phi_inv(rank, &p) {
                            Ok(back) => {
                                if &back != rc {
                                    bad.push(format!("{spec}: inverse mismatch at {rc}"));
                                }
                            }
                            Err(e) => bad.push(format!("{spec}: inverse failed at {rc}: {e}")),
                        }
                    }
                    Err(e) => bad.push(format!("{spec}: forward failed at {rc}: {e}")),
                }
            }
            bad
        })
        .collect();
    let mut report = Report::default();
    let total: usize = cells.len();
    report.push(
        format!("bijection sweep (n={}, <= {max_factors} factors)", rank.n()),
        results.is_empty(),
        if results.is_empty() {
            format!("{total} cells")
        } else {
            results[..results.len().min(3)].join("; ")
        },
    );
    Ok(report)
}

/// Statistic sweep: cocharge equals the energy of the complemented
/// image on every cell.
pub fn suite_stat(cache: &RCache, max_factors: usize) -> Result<Report> {
    let rank = cache.rank();
    let specs = sweep_specs(rank, &kr_kinds(rank), max_factors);
    let cells: Vec<_> = specs.iter().flat_map(|s| cells_of(rank, s)).collect();
    let results: Vec<String> = cells
        .par_iter()
        .flat_map(|(lam, spec)| match crate::energy::verify_stat(cache, lam, spec) {
            Ok(fails) => fails
                .into_iter()
                .map(|(rc, c, d)| format!("{spec}: cc={c} but D={d} at {rc}"))
                .collect(),
            Err(e) => vec![format!("{spec} @ {:?}: {e}", lam.eps2())],
        })
        .collect();
    let mut report = Report::default();
    report.push(
        format!("statistic sweep (n={}, <= {max_factors} factors)", rank.n()),
        results.is_empty(),
        if results.is_empty() {
            format!("{} cells", cells.len())
        } else {
            results[..results.len().min(3)].join("; ")
        },
    );
    Ok(report)
}

/// Polynomial identity sweep, plus one spinor cell at rank five.
pub fn suite_xm(cache: &RCache, max_factors: usize) -> Result<Report> {
    let rank = cache.rank();
    let specs = sweep_specs(rank, &kr_kinds(rank), max_factors);
    let cells: Vec<_> = specs.iter().flat_map(|s| cells_of(rank, s)).collect();
    let results: Vec<String> = cells
        .par_iter()
        .flat_map(|(lam, spec)| match crate::fermionic::verify_xm(cache, lam, spec) {
            Ok(bad) if bad.is_empty() => vec![],
            Ok(bad) => vec![format!(
                "{spec} @ {:?}: coefficient mismatches {bad:?}",
                lam.eps2()
            )],
            Err(e) => vec![format!("{spec} @ {:?}: {e}", lam.eps2())],
        })
        .collect();
    let mut report = Report::default();
    report.push(
        format!("polynomial sweep (n={}, <= {max_factors} factors)", rank.n()),
        results.is_empty(),
        if results.is_empty() {
            format!("{} cells", cells.len())
        } else {
            results[..results.len().min(3)].join("; ")
        },
    );
    Ok(report)
}

/// The worked example cell of the statistic, with its printed value.
pub fn stat_example_cell() -> Result<Report> {
    let rank = Rank::new(4)?;
    let cache = RCache::new(rank, None);
    let spec = TensorSpec::new(
        rank,
        vec![Label::Kr(1), Label::Kr(1), Label::Kr(2), Label::Kr(2), Label::Kr(2)],
    );
    let lambda = Weight::from_lambda(rank, &[0, 1, 0, 0])?;
    let fails = crate::energy::verify_stat(&cache, &lambda, &spec)?;
    let mut values: Vec<i64> = Vec::new();
    for rc in enumerate_rc(rank, &lambda, &spec)? {
        values.push(cc(&rc));
    }
    values.sort_unstable();
    values.dedup();
    let mut report = Report::default();
    report.push(
        "statistic example cell",
        fails.is_empty() && values.contains(&10),
        format!("values {values:?}"),
    );
    Ok(report)
}

/// The rank-five spinor cell of the polynomial identity.
pub fn xm_spinor_cell() -> Result<Report> {
    let rank = Rank::new(5)?;
    let cache = RCache::new(rank, None);
    let spec = TensorSpec::new(rank, vec![Label::Kr(5), Label::Kr(1)]);
    let mut bad = Vec::new();
    for lam in dominant_weights_below(rank, &spec.l_vector()?) {
        let mism = crate::fermionic::verify_xm(&cache, &lam, &spec)?;
        if !mism.is_empty() {
            bad.push(format!("@ {:?}: {mism:?}", lam.eps2()));
        }
    }
    let mut report = Report::default();
    report.push(
        "polynomial identity on the rank-5 spinor cell",
        bad.is_empty(),
        if bad.is_empty() {
            spec.to_string()
        } else {
            bad.join("; ")
        },
    );
    Ok(report)
}

fn infty(x: Option<u32>) -> u64 {
    x.map(|v| v as u64).unwrap_or(u64::MAX)
}

/// Vanishing propagation between consecutive box removals of a block:
/// once a selection chain has stopped, the next removal cannot restart
/// it one level lower.  This is the part of the selection inequalities
/// that the assembled columns rely on; the full printed inequalities
/// fail on re-singularized strings (see the decisions notes).
fn check_ell_pair(n: usize, prev: &DeltaTrace, next: &DeltaTrace) -> Option<String> {
    let l = |t: &DeltaTrace, a: usize| infty(t.l[a - 1]);
    let lb = |t: &DeltaTrace, a: usize| {
        if a == n - 1 {
            infty(t.l[n - 2]).max(infty(t.l[n - 1]))
        } else {
            infty(t.lbar[a - 1])
        }
    };
    const INF: u64 = u64::MAX;
    for a in 1..=n - 3 {
        if l(prev, a + 1) == INF && l(next, a) != INF {
            return Some(format!("chain restarted at level {a}"));
        }
    }
    if l(prev, n - 1).min(l(prev, n)) == INF && l(next, n - 2) != INF {
        return Some(format!("chain restarted at level {}", n - 2));
    }
    let min_fork = l(prev, n - 1).min(l(prev, n));
    if l(prev, n - 1) == min_fork && lb(prev, n - 2) == INF && l(next, n - 1) != INF {
        return Some("fork chain restarted at the plain node".into());
    }
    if l(prev, n) == min_fork && lb(prev, n - 2) == INF && l(next, n) != INF {
        return Some("fork chain restarted at the barred node".into());
    }
    for a in 2..=n - 1 {
        if lb(prev, a - 1) == INF && lb(next, a) != INF {
            return Some(format!("second chain restarted at level {a}"));
        }
    }
    None
}

/// Lemma-style identities: the two commutators, the splitting energy
/// laws on both sides, the one-box splitting increment, and the
/// selection inequalities along the forward bijection.
pub fn suite_lemmas(cache: &RCache, max_factors: usize) -> Result<Report> {
    let rank = cache.rank();
    let n = rank.n();
    let specs = sweep_specs(rank, &kr_kinds(rank), max_factors);
    let cells: Vec<_> = specs.iter().flat_map(|s| cells_of(rank, s)).collect();
    let mut report = Report::default();

    // [bj, delta] = 0 where both ends are actionable
    let results: Vec<String> = cells
        .par_iter()
        .filter(|(_, spec)| {
            spec.len() >= 2
                && spec.leftmost() == Some(Label::Kr(1))
                && matches!(spec.factors().last(), Some(Label::Kr(k)) if (2..=n as u8 - 2).contains(k))
        })
        .flat_map(|(lam, spec)| {
            let mut bad = Vec::new();
            for rc in enumerate_rc(rank, lam, spec).unwrap_or_default() {
                let a = bj(&rc).and_then(|x| delta(&x));
                let b = delta(&rc).and_then(|d| bj(&d.rc).map(|x| (x, d.letter)));
                match (a, b) {
                    (Ok(da), Ok((rb, letter))) => {
                        if da.rc != rb || da.letter != letter {
                            bad.push(format!("{spec}: [bj, delta] != 0 at {rc}"));
                        }
                    }
                    _ => bad.push(format!("{spec}: commutator step failed at {rc}")),
                }
            }
            bad
        })
        .collect();
    report.push("[bj, delta] = 0", results.is_empty(), summary(&results));

    // [delta, delta~] = 0 on cells with single boxes at both ends
    let results: Vec<String> = cells
        .par_iter()
        .filter(|(_, spec)| {
            spec.len() >= 2
                && spec.leftmost() == Some(Label::Kr(1))
                && spec.factors().last() == Some(&Label::Kr(1))
        })
        .flat_map(|(lam, spec)| {
            let mut bad = Vec::new();
            for rc in enumerate_rc(rank, lam, spec).unwrap_or_default() {
                // the commutator is a statement about the maps; the two
                // removed letters trade places between the orders
                let ab = delta(&rc).and_then(|d| delta_tilde(&d.rc).map(|t| t.rc));
                let ba = delta_tilde(&rc).and_then(|t| delta(&t.rc).map(|d| d.rc));
                match (ab, ba) {
                    (Ok(x), Ok(y)) => {
                        if x != y || x.lambda() != y.lambda() {
                            bad.push(format!("{spec}: [delta, delta~] != 0 at {rc}"));
                        }
                    }
                    _ => bad.push(format!("{spec}: commutator step failed at {rc}")),
                }
            }
            bad
        })
        .collect();
    report.push("[delta, delta~] = 0", results.is_empty(), summary(&results));

    // cocharge change under the top split
    let results: Vec<String> = cells
        .par_iter()
        .filter(|(_, spec)| {
            matches!(spec.leftmost(), Some(Label::Kr(k)) if (2..=n as u8 - 2).contains(&k))
        })
        .flat_map(|(lam, spec)| {
            let mut bad = Vec::new();
            let l = spec.l_vector().expect("valid spec");
            let k = match spec.leftmost() {
                Some(Label::Kr(k)) => k as usize,
                _ => unreachable!(),
            };
            let rhs = (l.eps2()[0] - l.eps2()[k - 1]) / 2 + 1;
            for rc in enumerate_rc(rank, lam, spec).unwrap_or_default() {
                match tj(&rc) {
                    Ok(t) => {
                        if cc(&t) - cc(&rc) != rhs {
                            bad.push(format!(
                                "{spec}: cc change {} != {rhs} at {rc}",
                                cc(&t) - cc(&rc)
                            ));
                        }
                    }
                    Err(e) => bad.push(format!("{spec}: tj failed at {rc}: {e}")),
                }
            }
            bad
        })
        .collect();
    report.push(
        "cocharge change under the top split",
        results.is_empty(),
        summary(&results),
    );

    // cocharge change for the doubled-spinor splits, observed along
    // every spinor removal in the sweep
    let results: Vec<String> = cells
        .par_iter()
        .filter(|(_, spec)| matches!(spec.leftmost(), Some(l) if l.is_spinor(rank)))
        .flat_map(|(lam, spec)| {
            let mut bad = Vec::new();
            for rc in enumerate_rc(rank, lam, spec).unwrap_or_default() {
                let doubled = match emb_rc(&rc) {
                    Ok(d) => d,
                    Err(e) => {
                        bad.push(format!("{spec}: embedding failed: {e}"));
                        continue;
                    }
                };
                let mut cur = doubled;
                for round in 1..=n {
                    let height = n - round + 1;
                    if height >= 2 {
                        let l = cur.spec().l_vector().expect("valid spec");
                        let leftmost = cur.spec().leftmost().unwrap();
                        let rhs = match leftmost {
                            Label::En => (l.eps2()[0] - l.eps2()[n - 1]) / 2 + 1,
                            Label::EnM1 => (l.eps2()[0] + l.eps2()[n - 1]) / 2 + 1,
                            Label::Kr(k) | Label::Hat(k) => {
                                (l.eps2()[0] - l.eps2()[k as usize - 1]) / 2 + 1
                            }
                            _ => unreachable!(),
                        };
                        let t = match tj(&cur) {
                            Ok(t) => t,
                            Err(e) => {
                                bad.push(format!("{spec}: split failed: {e}"));
                                break;
                            }
                        };
                        if cc(&t) - cc(&cur) != rhs {
                            bad.push(format!("{spec}: doubled cc change wrong at round {round}"));
                        }
                        cur = t;
                    }
                    match delta(&cur) {
                        Ok(d) => cur = d.rc,
                        Err(e) => {
                            bad.push(format!("{spec}: removal failed: {e}"));
                            break;
                        }
                    }
                }
            }
            bad
        })
        .collect();
    report.push(
        "cocharge change under doubled splits",
        results.is_empty(),
        summary(&results),
    );

    // energy change under the bottom split on paths
    let results: Vec<String> = cells
        .par_iter()
        .filter(|(_, spec)| {
            matches!(spec.factors().last(), Some(Label::Kr(k)) if (2..=n as u8 - 2).contains(k))
        })
        .flat_map(|(lam, spec)| {
            let mut bad = Vec::new();
            let l = spec.l_vector().expect("valid spec");
            let k = match spec.factors().last() {
                Some(Label::Kr(k)) => *k as usize,
                _ => unreachable!(),
            };
            let rhs = (l.eps2()[0] - l.eps2()[k - 1]) / 2 + 1;
            for p in enumerate_paths(rank, lam, spec.factors()).unwrap_or_default() {
                let split = match bs(&p, rank) {
                    Ok(s) => s,
                    Err(e) => {
                        bad.push(format!("{spec}: bottom split failed: {e}"));
                        continue;
                    }
                };
                match (energy(cache, &split), energy(cache, &p)) {
                    (Ok(a), Ok(b)) => {
                        if a - b != rhs {
                            bad.push(format!("{spec}: D change {} != {rhs} at {p}", a - b));
                        }
                    }
                    _ => bad.push(format!("{spec}: energy failed at {p}")),
                }
            }
            bad
        })
        .collect();
    report.push(
        "energy change under the bottom split",
        results.is_empty(),
        summary(&results),
    );

    // energy change with a doubled-image rightmost factor
    {
        let mut bad = Vec::new();
        for (kind, label) in [(SplitKind::En, Label::En), (SplitKind::EnM1, Label::EnM1)] {
            let _ = kind;
            let spec = TensorSpec::new(rank, vec![Label::Kr(1), label]);
            let l = spec.l_vector()?;
            let sign = if label == Label::En { -1 } else { 1 };
            let rhs = (l.eps2()[0] + sign * l.eps2()[n - 1]) / 2 + 1;
            for lam in dominant_weights_below(rank, &l) {
                for p in enumerate_paths(rank, &lam, spec.factors())? {
                    let split = bs(&p, rank)?;
                    let a = energy(cache, &split)?;
                    let b = energy(cache, &p)?;
                    if a - b != rhs {
                        bad.push(format!("{label}: D change {} != {rhs} at {p}", a - b));
                    }
                }
            }
        }
        report.push(
            "energy change under doubled-image splits",
            bad.is_empty(),
            summary(&bad),
        );
    }

    // single-factor splitting increment on classically highest columns
    {
        let mut bad = Vec::new();
        let mut hat_labels: Vec<Label> = (2..=n as u8 - 1).map(Label::Hat).collect();
        hat_labels.push(Label::En);
        hat_labels.push(Label::EnM1);
        for label in hat_labels {
            for col in enumerate(rank, label)?.iter() {
                let single = TensorElement::new(vec![(label, col.clone())]);
                let highest = (1..=n).all(|i| {
                    crate::crystal::elem_phi_eps(rank, &single, i).1 == 0
                });
                if !highest {
                    continue;
                }
                let split = bs(&single, rank)?;
                let a = energy(cache, &split)?;
                let b = factor_energy(rank, label, col);
                if a - b != 1 {
                    bad.push(format!("{label}: D(bs) - D = {} at {col}", a - b));
                }
            }
        }
        report.push(
            "one-box splitting increment on highest columns",
            bad.is_empty(),
            summary(&bad),
        );
    }

    // selection inequalities along the forward bijection
    let results: Vec<String> = cells
        .par_iter()
        .flat_map(|(lam, spec)| {
            let mut bad = Vec::new();
            for rc in enumerate_rc(rank, lam, spec).unwrap_or_default() {
                match phi_with_traces(&rc) {
                    Ok((_, blocks)) => {
                        for block in &blocks {
                            // the inequalities relate removals that both
                            // follow a top split: the final removal of a
                            // block has no split before it
                            if block.len() < 2 {
                                continue;
                            }
                            for w in block[..block.len() - 1].windows(2) {
                                if let Some(msg) = check_ell_pair(n, &w[0], &w[1]) {
                                    bad.push(format!("{spec}: {msg} at {rc}"));
                                }
                            }
                        }
                    }
                    Err(e) => bad.push(format!("{spec}: {e}")),
                }
            }
            bad
        })
        .collect();
    report.push(
        "selection vanishing along the bijection",
        results.is_empty(),
        summary(&results),
    );

    Ok(report)
}

fn summary(bad: &[String]) -> String {
    if bad.is_empty() {
        String::new()
    } else {
        bad[..bad.len().min(3)].join("; ")
    }
}

/// The six commuting squares between configuration maps and path maps.
pub fn suite_corresp(cache: &RCache, max_factors: usize) -> Result<Report> {
    let rank = cache.rank();
    let n = rank.n();
    let specs = sweep_specs(rank, &kr_kinds(rank), max_factors);
    let cells: Vec<_> = specs.iter().flat_map(|s| cells_of(rank, s)).collect();
    let mut report = Report::default();

    let run = |name: &str,
               filter: &(dyn Fn(&TensorSpec) -> bool + Sync),
               check: &(dyn Fn(&RiggedConfig, &TensorElement) -> std::result::Result<(), String>
                     + Sync)|
     -> CheckLine {
        let results: Vec<String> = cells
            .par_iter()
            .filter(|(_, spec)| filter(spec))
            .flat_map(|(lam, spec)| {
                let mut bad = Vec::new();
                for rc in enumerate_rc(rank, lam, spec).unwrap_or_default() {
                    match phi(&rc) {
                        Ok(p) => {
                            if let Err(msg) = check(&rc, &p) {
                                bad.push(format!("{spec}: {msg} at {rc}"));
                            }
                        }
                        Err(e) => bad.push(format!("{spec}: {e}")),
                    }
                }
                bad
            })
            .collect();
        CheckLine {
            name: name.into(),
            pass: results.is_empty(),
            detail: summary(&results),
        }
    };

    let splittable =
        |l: &Label| matches!(l, Label::Kr(k) if (2..=n as u8 - 2).contains(k));

    report.lines.push(run(
        "square: bottom split",
        &|spec| spec.factors().last().map(splittable).unwrap_or(false),
        &|rc, p| {
            let lhs = phi(&bj(rc).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let rhs = bs(p, rank).map_err(|e| e.to_string())?;
            if lhs == rhs {
                Ok(())
            } else {
                Err("bj/bs square broken".into())
            }
        },
    ));

    report.lines.push(run(
        "square: top split",
        &|spec| spec.leftmost().as_ref().map(splittable).unwrap_or(false),
        &|rc, p| {
            let lhs = phi(&tj(rc).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let rhs = ts(p, rank).map_err(|e| e.to_string())?;
            if lhs == rhs {
                Ok(())
            } else {
                Err("tj/ts square broken".into())
            }
        },
    ));

    report.lines.push(run(
        "square: left removal",
        &|spec| spec.leftmost() == Some(Label::Kr(1)),
        &|rc, p| {
            let d = delta(rc).map_err(|e| e.to_string())?;
            let lhs = phi(&d.rc).map_err(|e| e.to_string())?;
            let rhs = lh(p, rank).map_err(|e| e.to_string())?;
            if lhs == rhs {
                Ok(())
            } else {
                Err("delta/lh square broken".into())
            }
        },
    ));

    report.lines.push(run(
        "square: right removal",
        &|spec| spec.len() >= 2 && spec.factors().last() == Some(&Label::Kr(1)),
        &|rc, p| {
            let d = delta_tilde(rc).map_err(|e| e.to_string())?;
            let lhs = phi(&d.rc).map_err(|e| e.to_string())?;
            let rhs = rh(p, rank).map_err(|e| e.to_string())?;
            if lhs == rhs {
                Ok(())
            } else {
                Err("delta~/rh square broken".into())
            }
        },
    ));

    report.lines.push(run(
        "square: complement against dual",
        &|_| true,
        &|rc, p| {
            let lhs = phi(&theta(rc).reversed_spec()).map_err(|e| e.to_string())?;
            let rhs = crate::bijection::path_dual(rank, p);
            if lhs == rhs {
                Ok(())
            } else {
                Err("theta/dual square broken".into())
            }
        },
    ));

    report.lines.push(run(
        "square: identity against the R-matrix",
        &|spec| spec.len() >= 2,
        &|rc, p| {
            for i in 1..rc.spec().len() {
                let mut factors = rc.spec().factors().to_vec();
                factors.swap(rc.spec().len() - i - 1, rc.spec().len() - i);
                let retagged = rc.with_spec_lambda(
                    TensorSpec::new(rank, factors),
                    rc.lambda().clone(),
                );
                let lhs = phi(&retagged).map_err(|e| e.to_string())?;
                let rhs =
                    crate::rmatrix::apply_r(cache, p, i).map_err(|e| e.to_string())?;
                if lhs != rhs {
                    return Err(format!("id/R square broken at position {i}"));
                }
            }
            Ok(())
        },
    ));

    Ok(report)
}

/// The embedding square on cells built from short columns only.
pub fn suite_emb(rank: Rank, max_factors: usize) -> Result<Report> {
    let n = rank.n();
    let kinds: Vec<Label> = (1..=n as u8 - 2).map(Label::Kr).collect();
    let specs = sweep_specs(rank, &kinds, max_factors);
    let cells: Vec<_> = specs.iter().flat_map(|s| cells_of(rank, s)).collect();
    let results: Vec<String> = cells
        .par_iter()
        .flat_map(|(lam, spec)| {
            let mut bad = Vec::new();
            for rc in enumerate_rc(rank, lam, spec).unwrap_or_default() {
                let lhs = emb_rc(&rc).and_then(|d| phi(&d));
                let rhs = phi(&rc).and_then(|p| emb_p(rank, &p));
                match (lhs, rhs) {
                    (Ok(a), Ok(b)) => {
                        if a != b {
                            bad.push(format!("{spec}: embedding square broken at {rc}"));
                        }
                    }
                    _ => bad.push(format!("{spec}: embedding step failed at {rc}")),
                }
            }
            bad
        })
        .collect();
    let mut report = Report::default();
    report.push(
        format!("embedding square (n={n}, <= {max_factors} factors)"),
        results.is_empty(),
        summary(&results),
    );
    Ok(report)
}

/// Colored digraph isomorphism between a single crystal and a tensor
/// pair, matched by seed candidates with equal string data.
fn digraph_iso(rank: Rank, single: Label, pair: (Label, Label)) -> Result<bool> {
    let n = rank.n();
    let lhs = enumerate(rank, single)?;
    let rhs_l = enumerate(rank, pair.0)?;
    let rhs_r = enumerate(rank, pair.1)?;
    if lhs.len() != rhs_l.len() * rhs_r.len() {
        return Ok(false);
    }
    let seed = single.highest(rank);
    let seed_sig: Vec<(u32, u32)> = (0..=n)
        .map(|i| crate::crystal::column_phi_eps(rank, single, &seed, i))
        .collect();
    let pair_sig = |e: &TensorElement| -> Vec<(u32, u32)> {
        (0..=n)
            .map(|i| crate::crystal::elem_phi_eps(rank, e, i))
            .collect()
    };
    'candidates: for cl in rhs_l.iter() {
        for cr in rhs_r.iter() {
            let cand = TensorElement::new(vec![(pair.0, cl.clone()), (pair.1, cr.clone())]);
            if pair_sig(&cand) != seed_sig {
                continue;
            }
            // propagate the match by every colored arrow
            let mut map: std::collections::HashMap<Column, TensorElement> =
                std::collections::HashMap::new();
            map.insert(seed.clone(), cand.clone());
            let mut queue = vec![seed.clone()];
            let mut ok = true;
            while let Some(x) = queue.pop() {
                let y = map[&x].clone();
                for i in 0..=n {
                    let moves = [
                        (
                            crate::crystal::column_op_f(rank, single, &x, i),
                            crate::crystal::elem_f(rank, &y, i),
                        ),
                        (
                            crate::crystal::column_op_e(rank, single, &x, i),
                            crate::crystal::elem_e(rank, &y, i),
                        ),
                    ];
                    for (xs, ys) in moves {
                        match (xs, ys) {
                            (None, None) => {}
                            (Some(x2), Some(y2)) => match map.get(&x2) {
                                None => {
                                    map.insert(x2.clone(), y2);
                                    queue.push(x2);
                                }
                                Some(prev) => {
                                    if prev != &y2 {
                                        ok = false;
                                    }
                                }
                            },
                            _ => ok = false,
                        }
                        if !ok {
                            continue 'candidates;
                        }
                    }
                }
            }
            if ok && map.len() == lhs.len() {
                let images: std::collections::HashSet<_> = map.values().collect();
                if images.len() == lhs.len() {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Affine structure cross-checks: the zero arrows against the node
/// involution, and the relaxed-set isomorphism theorems.
pub fn suite_affine(_max_factors: usize) -> Result<Report> {
    let mut report = Report::default();
    for n in [4u8, 5] {
        let rank = Rank::new(n)?;
        let mut bad = Vec::new();
        for k in 1..=(n - 2) {
            let label = Label::Kr(k);
            for c in enumerate(rank, label)?.iter() {
                let s = crate::crystal::sigma(rank, c)?;
                let f_via = crate::crystal::column_f(rank, label, &s, 1)
                    .map(|d| crate::crystal::sigma(rank, &d))
                    .transpose()?;
                if crate::crystal::column_f0(rank, label, c) != f_via {
                    bad.push(format!("f_0 mismatch at {c}, k={k}, n={n}"));
                }
                let e_via = crate::crystal::column_e(rank, label, &s, 1)
                    .map(|d| crate::crystal::sigma(rank, &d))
                    .transpose()?;
                if crate::crystal::column_e0(rank, label, c) != e_via {
                    bad.push(format!("e_0 mismatch at {c}, k={k}, n={n}"));
                }
            }
        }
        report.push(
            format!("zero arrows via the node involution (n={n})"),
            bad.is_empty(),
            summary(&bad),
        );
    }
    let rank = Rank::new(4)?;
    let n = 4u8;
    for (single, pair) in [
        (Label::Hat(n - 1), (Label::Kr(n), Label::Kr(n - 1))),
        (Label::HatN, (Label::Kr(n), Label::Kr(n))),
        (Label::HatBarN, (Label::Kr(n - 1), Label::Kr(n - 1))),
    ] {
        let ok = digraph_iso(rank, single, pair)?;
        report.push(
            format!("affine isomorphism {single} = {} (x) {}", pair.0, pair.1),
            ok,
            "",
        );
    }
    Ok(report)
}

/// Appendix tables against the computed R-matrix and energy.
pub fn suite_rmatrix_oracle(n: u8, cache_dir: Option<std::path::PathBuf>) -> Result<Report> {
    let rank = Rank::new(n)?;
    let cache = RCache::new(rank, cache_dir);
    let mut report = Report::default();
    let mut cases = std::collections::BTreeSet::new();
    let pairs: Vec<(usize, usize)> = (1..=rank.n())
        .flat_map(|k| (1..=k).map(move |kp| (kp, k)))
        .collect();
    let results: Vec<std::result::Result<std::collections::BTreeSet<&'static str>, String>> =
        pairs
            .par_iter()
            .map(|&(kp, k)| appendix_d::verify_pair(&cache, kp, k).map_err(|e| format!("({kp},{k}): {e}")))
            .collect();
    let mut bad = Vec::new();
    for r in results {
        match r {
            Ok(c) => cases.extend(c),
            Err(e) => bad.push(e),
        }
    }
    report.push(
        format!("highest-weight tables (n={n})"),
        bad.is_empty(),
        if bad.is_empty() {
            format!("cases {cases:?}")
        } else {
            summary(&bad)
        },
    );
    Ok(report)
}

// ---------------------------------------------------------------------------
// command-line interface

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "dnkr", about = "Affine column crystals, rigged configurations, and their bijection", version)]
pub struct Cli {
    /// Worker threads for the sweeps (defaults to all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CellArgs {
    /// Rank of the root system (at least 4)
    #[arg(long, default_value_t = 4)]
    n: u8,
    /// Comma-separated factor labels, leftmost first (e.g. KR:1,KR:2)
    #[arg(long = "B", value_delimiter = ',')]
    b: Vec<String>,
    /// Comma-separated coefficients over the fundamental weights
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lambda: Vec<i64>,
}

impl CellArgs {
    fn rank(&self) -> Result<Rank> {
        Rank::new(self.n)
    }

    fn spec(&self) -> Result<TensorSpec> {
        let rank = self.rank()?;
        let labels = self
            .b
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<Label>>>()?;
        Ok(TensorSpec::new(rank, labels))
    }

    fn weight(&self) -> Result<Weight> {
        Weight::from_lambda(self.rank()?, &self.lambda)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate a crystal, a configuration set, or a path set
    Enumerate {
        /// What to enumerate: crystal, rc, or paths
        kind: String,
        #[command(flatten)]
        cell: CellArgs,
        /// Crystal label for kind = crystal
        #[arg(long)]
        label: Option<String>,
    },
    /// Apply the bijection to one element read as JSON
    Biject {
        /// Direction: forward (configuration to path) or inverse
        direction: String,
        #[command(flatten)]
        cell: CellArgs,
        /// Use the rigging-complemented variant
        #[arg(long)]
        variant: Option<String>,
        /// Include the removal traces in the output
        #[arg(long)]
        trace: bool,
        /// Input file; standard input when absent
        #[arg(long)]
        input: Option<std::path::PathBuf>,
    },
    /// Run a verification suite
    Verify {
        /// Suite: bijection, stat, xm, lemmas, rmatrix-oracle, or all
        suite: String,
        /// Rank of the root system
        #[arg(long, default_value_t = 4)]
        n: u8,
        /// Largest number of tensor factors in the sweep
        #[arg(long, default_value_t = 3)]
        max_factors: usize,
        /// R-matrix cache directory (also DNKR_CACHE_DIR)
        #[arg(long)]
        cache_dir: Option<std::path::PathBuf>,
        /// Write a CSV summary of the polynomial sweep here
        #[arg(long)]
        csv: Option<std::path::PathBuf>,
    },
}

fn cache_dir_or_env(cli: Option<std::path::PathBuf>) -> Option<std::path::PathBuf> {
    cli.or_else(|| std::env::var_os("DNKR_CACHE_DIR").map(Into::into))
}

fn cmd_enumerate(kind: &str, cell: &CellArgs, label: Option<&str>) -> Result<()> {
    let rank = cell.rank()?;
    let mut lines: Vec<String> = Vec::new();
    match kind {
        "crystal" => {
            let label: Label = label
                .ok_or_else(|| Error::Usage("enumerate crystal needs --label".into()))?
                .parse()?;
            for c in enumerate(rank, label)?.iter() {
                lines.push(wire::column_to_json(c).to_string());
            }
        }
        "rc" => {
            let spec = cell.spec()?;
            let lambda = cell.weight()?;
            for rc in enumerate_rc(rank, &lambda, &spec)? {
                lines.push(wire::rc_to_json(&rc).to_string());
            }
        }
        "paths" => {
            let spec = cell.spec()?;
            let lambda = cell.weight()?;
            for p in enumerate_paths(rank, &lambda, spec.factors())? {
                lines.push(wire::element_to_json(&p).to_string());
            }
        }
        other => return Err(Error::Usage(format!("unknown enumeration kind {other}"))),
    }
    lines.sort();
    for l in lines {
        println!("{l}");
    }
    Ok(())
}

fn read_input(path: Option<&std::path::PathBuf>) -> Result<String> {
    match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Error::Usage(format!("cannot read {}: {e}", p.display()))),
        None => {
            use std::io::Read;
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Usage(format!("cannot read standard input: {e}")))?;
            Ok(buf)
        }
    }
}

fn cmd_biject(
    direction: &str,
    cell: &CellArgs,
    variant: Option<&str>,
    trace: bool,
    input: Option<&std::path::PathBuf>,
) -> Result<()> {
    let rank = cell.rank()?;
    let text = read_input(input)?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Error::Usage(format!("input is not JSON: {e}")))?;
    let tilde = match variant {
        None => false,
        Some("tilde") => true,
        Some(other) => {
            return Err(Error::Usage(format!(
                "unknown variant {other}; only tilde is defined"
            )))
        }
    };
    match direction {
        "forward" => {
            let rc = wire::rc_from_json(rank, &value)?;
            if !crate::rc::is_valid_rc(&rc) {
                return Err(Error::InvalidRc("input configuration is not valid".into()));
            }
            let out = if tilde {
                let (elem, traces) = phi_with_traces(&theta(&rc))?;
                (elem, traces)
            } else {
                phi_with_traces(&rc)?
            };
            let mut v = wire::element_to_json(&out.0);
            if trace {
                v["trace"] = json!(out
                    .1
                    .iter()
                    .map(|block| block.iter().map(wire::trace_to_json).collect::<Vec<_>>())
                    .collect::<Vec<_>>());
            }
            println!("{v}");
        }
        "inverse" => {
            let elem = wire::element_from_json(&value)?;
            elem.validate(rank)?;
            let rc = phi_inv(rank, &elem)?;
            let rc = if tilde { theta(&rc) } else { rc };
            println!("{}", wire::rc_to_json(&rc));
        }
        other => return Err(Error::Usage(format!("unknown direction {other}"))),
    }
    Ok(())
}

fn emit_xm_csv(rank: Rank, max_factors: usize, path: &std::path::Path) -> Result<()> {
    let cache = RCache::new(rank, None);
    let mut out = String::from("spec,lambda,count,degree,equal\n");
    for spec in sweep_specs(rank, &kr_kinds(rank), max_factors) {
        for lam in dominant_weights_below(rank, &spec.l_vector()?) {
            let x = x_sum(&cache, &lam, &spec)?;
            let m = m_sum(rank, &lam, &spec)?;
            let coeffs = lam
                .lambda_coeffs()
                .map(|c| {
                    c.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .unwrap_or_default();
            out.push_str(&format!(
                "\"{spec}\",\"{coeffs}\",{},{},{}\n",
                x.eval_one(),
                x.degree().map(|d| d as i64).unwrap_or(-1),
                x == m
            ));
        }
    }
    std::fs::write(path, out).map_err(|e| Error::Cache(format!("cannot write CSV: {e}")))?;
    Ok(())
}

fn cmd_verify(
    suite: &str,
    n: u8,
    max_factors: usize,
    cache_dir: Option<std::path::PathBuf>,
    csv: Option<std::path::PathBuf>,
) -> Result<bool> {
    let rank = Rank::new(n)?;
    let dir = cache_dir_or_env(cache_dir);
    let cache = RCache::new(rank, dir.clone());
    let mut report = Report::default();
    match suite {
        "bijection" => report.merge(suite_bijection(rank, max_factors)?),
        "stat" => {
            report.merge(suite_stat(&cache, max_factors)?);
            report.merge(stat_example_cell()?);
        }
        "xm" => {
            report.merge(suite_xm(&cache, max_factors)?);
            report.merge(xm_spinor_cell()?);
        }
        "lemmas" => {
            report.merge(suite_lemmas(&cache, max_factors)?);
            report.merge(suite_corresp(&cache, max_factors)?);
            report.merge(suite_emb(rank, max_factors)?);
            report.merge(suite_affine(max_factors)?);
        }
        "rmatrix-oracle" => {
            report.merge(suite_rmatrix_oracle(5, dir.clone())?);
            report.merge(suite_rmatrix_oracle(6, dir)?);
        }
        "all" => {
            report.merge(suite_bijection(rank, max_factors)?);
            report.merge(suite_stat(&cache, max_factors)?);
            report.merge(stat_example_cell()?);
            report.merge(suite_xm(&cache, max_factors)?);
            report.merge(xm_spinor_cell()?);
            report.merge(suite_lemmas(&cache, max_factors)?);
            report.merge(suite_corresp(&cache, max_factors)?);
            report.merge(suite_emb(rank, max_factors)?);
            report.merge(suite_affine(max_factors)?);
            report.merge(suite_rmatrix_oracle(5, dir.clone())?);
            report.merge(suite_rmatrix_oracle(6, dir)?);
        }
        other => return Err(Error::Usage(format!("unknown suite {other}"))),
    }
    if let Some(path) = csv {
        emit_xm_csv(rank, max_factors, &path)?;
    }
    report.print();
    Ok(report.all_pass())
}

/// Entry point returning the process exit code: 0 on success, 1 on
/// verification failure, 2 on usage errors.
pub fn run() -> i32 {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let outcome = match &cli.command {
        Command::Enumerate { kind, cell, label } => {
            cmd_enumerate(kind, cell, label.as_deref()).map(|_| true)
        }
        Command::Biject {
            direction,
            cell,
            variant,
            trace,
            input,
        } => match cmd_biject(direction, cell, variant.as_deref(), *trace, input.as_ref()) {
            Ok(()) => Ok(true),
            // malformed elements report as a structured error object
            Err(e @ (Error::InvalidRc(_) | Error::InvalidElement(_) | Error::NoPreimage(_))) => {
                println!("{}", json!({ "error": e.to_string() }));
                Ok(false)
            }
            Err(e) => Err(e),
        },
        Command::Verify {
            suite,
            n,
            max_factors,
            cache_dir,
            csv,
        } => cmd_verify(suite, *n, *max_factors, cache_dir.clone(), csv.clone()),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e @ Error::Usage(_)) => {
            eprintln!("error: {e}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dominant_weights_contain_endpoints() {
        let rank = Rank::new(4).unwrap();
        let spec = TensorSpec::new(rank, vec![Label::Kr(2), Label::Kr(1)]);
        let l = spec.l_vector().unwrap();
        let all = dominant_weights_below(rank, &l);
        assert!(all.contains(&l));
        assert!(all
            .iter()
            .all(|w| crate::rootdata::is_dominant(w).unwrap()));
    }

    #[test]
    fn wire_round_trips() {
        let rank = Rank::new(4).unwrap();
        let col = Column::from_top_down(&[-3, 6, 1]);
        let v = wire::column_to_json(&col);
        assert_eq!(v.to_string(), "[-3,6,1]");
        assert_eq!(wire::column_from_json(&v).unwrap(), col);

        let spec = TensorSpec::new(rank, vec![Label::Kr(2), Label::Kr(1)]);
        let lam = Weight::from_lambda(rank, &[1, 1, 0, 0]).unwrap();
        let rc = RiggedConfig::new(
            spec,
            lam,
            vec![
                RiggedPartition::new(vec![(2, 0)]),
                RiggedPartition::empty(),
                RiggedPartition::empty(),
                RiggedPartition::empty(),
            ],
        );
        let v = wire::rc_to_json(&rc);
        assert_eq!(wire::rc_from_json(rank, &v).unwrap(), rc);

        let elem = TensorElement::new(vec![
            (Label::Kr(2), Column::from_top_down(&[2, 1])),
            (Label::Kr(1), Column::from_top_down(&[-4])),
        ]);
        let v = wire::element_to_json(&elem);
        assert_eq!(wire::element_from_json(&v).unwrap(), elem);
    }

    #[test]
    fn small_verify_suites() {
        let rank = Rank::new(4).unwrap();
        let cache = RCache::new(rank, None);
        let r = suite_bijection(rank, 1).unwrap();
        assert!(r.all_pass(), "{:?}", r.lines);
        let r = suite_stat(&cache, 1).unwrap();
        assert!(r.all_pass(), "{:?}", r.lines);
    }
}
