//! Crystal structure on single columns and tensor products: classical
//! operators via the signature rule, the affine operators on column
//! crystals, the node-0/1 involution, the dual map, affine embeddings,
//! enumeration of the crystal sets, classical components, and the sets
//! of classically highest weight elements.

use crate::columns::{
    compare, cond1, drop_map, drop_shifted, fill, fill_shifted, letter_key, validate_height_n,
    validate_spinor, Column, HeightNVariant, Letter, LetterOrd,
};
use crate::rootdata::{Rank, Weight};
use crate::{Error, Result};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Which crystal a column (or tensor factor) belongs to.
///
/// `Kr(k)` is the affine column crystal at node k (spinor sets at the
/// last two nodes).  `Hat(k)` is the relaxed height-k set cut out by
/// the adjacency condition alone; it equals `Kr(k)` for k <= n-2 and
/// is strictly larger at k = n-1.  `HatN` / `HatBarN` are the two
/// parity classes of relaxed height-n columns, and `En` / `EnM1` are
/// the images of the spinor crystals inside them under the doubling
/// embedding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Kr(u8),
    Hat(u8),
    HatN,
    HatBarN,
    En,
    EnM1,
}

impl Label {
    pub fn height(self, rank: Rank) -> usize {
        let n = rank.n();
        match self {
            Label::Kr(k) if (k as usize) <= n - 2 => k as usize,
            Label::Kr(_) => n,
            Label::Hat(k) => k as usize,
            Label::HatN | Label::HatBarN | Label::En | Label::EnM1 => n,
        }
    }

    pub fn is_spinor(self, rank: Rank) -> bool {
        matches!(self, Label::Kr(k) if k as usize >= rank.n() - 1)
    }

    /// The unique classically highest element of the top component.
    pub fn highest(self, rank: Rank) -> Column {
        let n = rank.n();
        match self {
            Label::Kr(k) if (k as usize) <= n - 2 => Column::new((1..=k as Letter).collect()),
            Label::Hat(k) => Column::new((1..=k as Letter).collect()),
            Label::Kr(k) if k as usize == n => Column::new((1..=n as Letter).collect()),
            Label::HatN | Label::En => Column::new((1..=n as Letter).collect()),
            _ => {
                // last letter barred: 1, ..., n-1, -n
                let mut v: Vec<Letter> = (1..n as Letter).collect();
                v.push(-(n as Letter));
                Column::new(v)
            }
        }
    }

    /// Set membership test.
    pub fn contains(self, rank: Rank, col: &Column) -> Result<bool> {
        let n = rank.n();
        if col.height() != self.height(rank) {
            return Ok(false);
        }
        match self {
            Label::Kr(k) if (k as usize) <= n - 2 => Ok(cond1(n, col)),
            Label::Kr(k) if k as usize == n - 1 => validate_spinor(n, col, HeightNVariant::Barred),
            Label::Kr(_) => validate_spinor(n, col, HeightNVariant::Plain),
            Label::Hat(_) => Ok(cond1(n, col)),
            Label::HatN => hat_n_membership(n, col, HeightNVariant::Plain),
            Label::HatBarN => hat_n_membership(n, col, HeightNVariant::Barred),
            Label::En | Label::EnM1 => Ok(enumerate(rank, self)?.contains(col)),
        }
    }
}

/// Membership in the relaxed height-n sets.  A column that drops is the
/// filling of its dropped core and belongs to both parity classes; a
/// column that does not drop sits in a top classical component and is
/// classified by the letter parity rule.
fn hat_n_membership(n: usize, col: &Column, variant: HeightNVariant) -> Result<bool> {
    if !cond1(n, col) {
        return Ok(false);
    }
    let core = drop_map(n, col);
    if core.height() == n {
        validate_height_n(n, col, variant)
    } else {
        let v = crate::columns::validate_column(n, &core)?;
        Ok(v.cond1 && v.cond2 && fill(n, &core, n).map(|f| &f == col).unwrap_or(false))
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Label::Kr(k) => write!(f, "KR:{k}"),
            Label::Hat(k) => write!(f, "Hat:{k}"),
            Label::HatN => write!(f, "HatN"),
            Label::HatBarN => write!(f, "HatBarN"),
            Label::En => write!(f, "E:n"),
            Label::EnM1 => write!(f, "E:n-1"),
        }
    }
}

impl std::str::FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Label> {
        if let Some(k) = s.strip_prefix("KR:") {
            return Ok(Label::Kr(k.parse().map_err(|_| {
                Error::Usage(format!("bad crystal label {s}"))
            })?));
        }
        if let Some(k) = s.strip_prefix("Hat:") {
            return Ok(Label::Hat(k.parse().map_err(|_| {
                Error::Usage(format!("bad crystal label {s}"))
            })?));
        }
        match s {
            "HatN" => Ok(Label::HatN),
            "HatBarN" => Ok(Label::HatBarN),
            "E:n" => Ok(Label::En),
            "E:n-1" => Ok(Label::EnM1),
            _ => Err(Error::Usage(format!("bad crystal label {s}"))),
        }
    }
}

// ---------------------------------------------------------------------------
// letter-level operators

/// f_i on a single letter of the vector crystal, 1 <= i <= n.
pub fn letter_f(rank: Rank, x: Letter, i: usize) -> Option<Letter> {
    let n = rank.n() as i16;
    let (x, i) = (x as i16, i as i16);
    if i < n {
        if x == i {
            Some((i + 1) as Letter)
        } else if x == -(i + 1) {
            Some(-i as Letter)
        } else {
            None
        }
    } else if x == n - 1 {
        Some(-n as Letter)
    } else if x == n {
        Some(-(n - 1) as Letter)
    } else {
        None
    }
}

/// e_i on a single letter, inverse of `letter_f`.
pub fn letter_e(rank: Rank, x: Letter, i: usize) -> Option<Letter> {
    let n = rank.n() as i16;
    let (x, i) = (x as i16, i as i16);
    if i < n {
        if x == i + 1 {
            Some(i as Letter)
        } else if x == -i {
            Some(-(i + 1) as Letter)
        } else {
            None
        }
    } else if x == -n {
        Some((n - 1) as Letter)
    } else if x == -(n - 1) {
        Some(n as Letter)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// signature rule

/// Reduced signature over a word of (phi, eps) contributions read left
/// to right; returns (phi, eps, index of rightmost surviving minus,
/// index of leftmost surviving plus).
fn reduce_signature(
    word: impl Iterator<Item = (usize, u32, u32)>,
) -> (u32, u32, Option<usize>, Option<usize>) {
    // stack holds (source index, is_plus)
    let mut stack: Vec<(usize, bool)> = Vec::new();
    for (src, minus, plus) in word {
        for _ in 0..minus {
            if let Some(&(_, true)) = stack.last() {
                stack.pop();
            } else {
                stack.push((src, false));
            }
        }
        for _ in 0..plus {
            stack.push((src, true));
        }
    }
    let phi = stack.iter().filter(|&&(_, p)| !p).count() as u32;
    let eps = stack.len() as u32 - phi;
    let rightmost_minus = stack.iter().rev().find(|&&(_, p)| !p).map(|&(s, _)| s);
    let leftmost_plus = stack.iter().find(|&&(_, p)| p).map(|&(s, _)| s);
    (phi, eps, rightmost_minus, leftmost_plus)
}

fn letter_signature(rank: Rank, x: Letter, i: usize) -> (u32, u32) {
    let minus = letter_f(rank, x, i).is_some() as u32;
    let plus = letter_e(rank, x, i).is_some() as u32;
    (minus, plus)
}

/// Word of a column for the signature rule: top letter leftmost.
fn column_word(col: &Column) -> impl Iterator<Item = (usize, Letter)> + '_ {
    col.letters().iter().copied().enumerate().rev()
}

// ---------------------------------------------------------------------------
// classical operators on columns

fn spinor_replace(
    rank: Rank,
    col: &Column,
    from: [Letter; 2],
    to: [Letter; 2],
) -> Option<Column> {
    let n = rank.n();
    if !(col.contains(from[0]) && col.contains(from[1])) {
        return None;
    }
    let mut letters: Vec<Letter> = col
        .letters()
        .iter()
        .map(|&x| {
            if x == from[0] {
                to[0]
            } else if x == from[1] {
                to[1]
            } else {
                x
            }
        })
        .collect();
    letters.sort_by_key(|&x| letter_key(n, x));
    Some(Column::new(letters))
}

fn spinor_f(rank: Rank, col: &Column, i: usize) -> Option<Column> {
    let n = rank.n();
    if i < n {
        spinor_replace(
            rank,
            col,
            [i as Letter, -((i + 1) as Letter)],
            [(i + 1) as Letter, -(i as Letter)],
        )
    } else {
        spinor_replace(
            rank,
            col,
            [(n - 1) as Letter, n as Letter],
            [-(n as Letter), -((n - 1) as Letter)],
        )
    }
}

fn spinor_e(rank: Rank, col: &Column, i: usize) -> Option<Column> {
    let n = rank.n();
    if i < n {
        spinor_replace(
            rank,
            col,
            [(i + 1) as Letter, -(i as Letter)],
            [i as Letter, -((i + 1) as Letter)],
        )
    } else {
        spinor_replace(
            rank,
            col,
            [-(n as Letter), -((n - 1) as Letter)],
            [(n - 1) as Letter, n as Letter],
        )
    }
}

/// Classical f_i on a column of the given crystal, 1 <= i <= n.
pub fn column_f(rank: Rank, label: Label, col: &Column, i: usize) -> Option<Column> {
    debug_assert!(i >= 1 && i <= rank.n());
    if label.is_spinor(rank) {
        return spinor_f(rank, col, i);
    }
    let (_, _, rm, _) = reduce_signature(column_word(col).map(|(idx, x)| {
        let (m, p) = letter_signature(rank, x, i);
        (idx, m, p)
    }));
    let idx = rm?;
    let mut letters = col.letters().to_vec();
    letters[idx] = letter_f(rank, letters[idx], i).expect("signature chose an f-movable letter");
    Some(Column::new(letters))
}

/// Classical e_i on a column, 1 <= i <= n.
pub fn column_e(rank: Rank, label: Label, col: &Column, i: usize) -> Option<Column> {
    debug_assert!(i >= 1 && i <= rank.n());
    if label.is_spinor(rank) {
        return spinor_e(rank, col, i);
    }
    let (_, _, _, lp) = reduce_signature(column_word(col).map(|(idx, x)| {
        let (m, p) = letter_signature(rank, x, i);
        (idx, m, p)
    }));
    let idx = lp?;
    let mut letters = col.letters().to_vec();
    letters[idx] = letter_e(rank, letters[idx], i).expect("signature chose an e-movable letter");
    Some(Column::new(letters))
}

fn column_phi_eps_classical(rank: Rank, label: Label, col: &Column, i: usize) -> (u32, u32) {
    if label.is_spinor(rank) {
        return (
            spinor_f(rank, col, i).is_some() as u32,
            spinor_e(rank, col, i).is_some() as u32,
        );
    }
    let (phi, eps, _, _) = reduce_signature(column_word(col).map(|(idx, x)| {
        let (m, p) = letter_signature(rank, x, i);
        (idx, m, p)
    }));
    (phi, eps)
}

// ---------------------------------------------------------------------------
// affine operators

struct Boundary {
    has_bot1: bool,
    has_bot2: bool,
    has_top1: bool,
    has_top2: bool,
    middle: Column,
}

fn split_boundary(col: &Column) -> Boundary {
    let has_bot1 = col.contains(1);
    let has_bot2 = col.contains(2);
    let has_top1 = col.contains(-1);
    let has_top2 = col.contains(-2);
    let middle = Column::new(
        col.letters()
            .iter()
            .copied()
            .filter(|&x| x != 1 && x != 2 && x != -1 && x != -2)
            .collect(),
    );
    Boundary {
        has_bot1,
        has_bot2,
        has_top1,
        has_top2,
        middle,
    }
}

fn thm_affine_f0(rank: Rank, col: &Column) -> Option<Column> {
    let n = rank.n();
    let k = col.height();
    let b = split_boundary(col);
    let x = &b.middle;
    let out = match (b.has_top1, b.has_top2, b.has_bot2, b.has_bot1) {
        (true, true, false, false) => fill(n, &drop_shifted(n, x, 2).ok()?, k),
        (true, true, true, false) => fill_shifted(n, x, k - 1, 2).map(|c| c.push_bottom(2)),
        (true, true, false, true) => fill_shifted(n, x, k - 1, 2).map(|c| c.push_bottom(1)),
        (true, true, true, true) => {
            fill_shifted(n, x, k - 2, 2).map(|c| c.push_bottom(2).push_bottom(1))
        }
        (true, false, false, false) => fill(n, &drop_shifted(n, x, 2).ok()?.push_bottom(2), k),
        (false, true, false, false) => fill(n, &drop_shifted(n, x, 2).ok()?.push_bottom(1), k),
        (true, false, false, true)
            if drop_shifted(n, x, 2).ok()? == *x => {
                Ok(x.push_bottom(2).push_bottom(1))
            }
        _ => return None,
    };
    Some(out.expect("affine case table produced an unfillable column"))
}

fn thm_affine_e0(rank: Rank, col: &Column) -> Option<Column> {
    let n = rank.n();
    let k = col.height();
    let b = split_boundary(col);
    let x = &b.middle;
    let out = match (b.has_top1, b.has_top2, b.has_bot2, b.has_bot1) {
        (false, false, true, true) => fill(n, &drop_shifted(n, x, 2).ok()?, k),
        (false, true, true, true) => fill_shifted(n, x, k - 1, 2).map(|c| c.push_top(-2)),
        (true, false, true, true) => fill_shifted(n, x, k - 1, 2).map(|c| c.push_top(-1)),
        (true, true, true, true) => {
            fill_shifted(n, x, k - 2, 2).map(|c| c.push_top(-2).push_top(-1))
        }
        (false, false, false, true) => fill(n, &drop_shifted(n, x, 2).ok()?.push_top(-2), k),
        (false, false, true, false) => fill(n, &drop_shifted(n, x, 2).ok()?.push_top(-1), k),
        (true, false, false, true)
            if drop_shifted(n, x, 2).ok()? == *x => {
                Ok(x.push_top(-2).push_top(-1))
            }
        _ => return None,
    };
    Some(out.expect("affine case table produced an unfillable column"))
}

fn spinor_f0(col: &Column) -> Option<Column> {
    let k = col.height();
    if k < 2 || col.row(k) != Some(-1) || col.row(k - 1) != Some(-2) {
        return None;
    }
    let middle = Column::new(col.letters()[..k - 2].to_vec());
    Some(middle.push_bottom(2).push_bottom(1))
}

fn spinor_e0(col: &Column) -> Option<Column> {
    if col.row(1) != Some(1) || col.row(2) != Some(2) {
        return None;
    }
    let mut letters = col.letters()[2..].to_vec();
    letters.push(-2);
    letters.push(-1);
    Some(Column::new(letters))
}

/// Transported affine structure of one height-n relaxed set: the zero
/// arrows carried over from the spinor tensor square along the unique
/// classical isomorphism.  The case analysis of the affine theorem does
/// not pin down the fork orientation at full height; the isomorphism
/// with the tensor square does.
pub struct HatNStructure {
    pub psi: HashMap<(Column, Column), Column>,
    pub psi_inv: HashMap<Column, (Column, Column)>,
    pub f0: HashMap<Column, Option<Column>>,
    pub e0: HashMap<Column, Option<Column>>,
}

type Cache<K, V> = Lazy<Mutex<HashMap<K, Arc<V>>>>;

static HATN_CACHE: Cache<(u8, bool), HatNStructure> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Build (or fetch) the transported structure; `barred` selects the
/// barred parity class, fed by the barred spinor square.
pub fn hat_n_structure(rank: Rank, barred: bool) -> Result<Arc<HatNStructure>> {
    let n = rank.n();
    if let Some(st) = HATN_CACHE.lock().unwrap().get(&(n as u8, barred)) {
        return Ok(st.clone());
    }
    let spin = if barred {
        Label::Kr(n as u8 - 1)
    } else {
        Label::Kr(n as u8)
    };
    let hat = if barred { Label::HatBarN } else { Label::HatN };
    let spin_elems = enumerate(rank, spin)?;
    let cols = enumerate(rank, hat)?;
    if cols.len() != spin_elems.len() * spin_elems.len() {
        return Err(Error::InvalidElement(format!(
            "{hat} has {} columns against {} tensor pairs",
            cols.len(),
            spin_elems.len() * spin_elems.len()
        )));
    }
    // match classically highest elements by weight; the decomposition is
    // multiplicity free, so each match is unique
    let mut queue: Vec<(TensorElement, Column)> = Vec::new();
    for a in spin_elems.iter() {
        for b in spin_elems.iter() {
            let pair = TensorElement::new(vec![(spin, a.clone()), (spin, b.clone())]);
            let highest = (1..=n).all(|i| elem_phi_eps(rank, &pair, i).1 == 0);
            if !highest {
                continue;
            }
            let w = pair.weight(rank);
            let mut hits = cols.iter().filter(|c| {
                column_weight(rank, hat, c) == w
                    && (1..=n).all(|i| column_phi_eps_classical(rank, hat, c, i).1 == 0)
            });
            let target = hits.next().ok_or_else(|| {
                Error::InvalidElement(format!("no highest column of weight {:?} in {hat}", w.eps2()))
            })?;
            if hits.next().is_some() {
                return Err(Error::InvalidElement(format!(
                    "highest column of weight {:?} in {hat} is not unique",
                    w.eps2()
                )));
            }
            queue.push((pair, target.clone()));
        }
    }
    // lower both sides in parallel
    let mut psi: HashMap<(Column, Column), Column> = HashMap::new();
    while let Some((pair, col)) = queue.pop() {
        let key = (pair.factors()[0].1.clone(), pair.factors()[1].1.clone());
        if let Some(prev) = psi.get(&key) {
            if prev != &col {
                return Err(Error::InvalidElement(
                    "classical transport onto the relaxed set is inconsistent".into(),
                ));
            }
            continue;
        }
        psi.insert(key, col.clone());
        for i in 1..=n {
            if let Some(p2) = elem_f(rank, &pair, i) {
                let c2 = column_f(rank, hat, &col, i).ok_or_else(|| {
                    Error::InvalidElement("classical arrow missing on the column side".into())
                })?;
                queue.push((p2, c2));
            }
        }
    }
    if psi.len() != cols.len() {
        return Err(Error::InvalidElement(
            "classical transport did not reach every column".into(),
        ));
    }
    let psi_inv: HashMap<Column, (Column, Column)> =
        psi.iter().map(|(k, v)| (v.clone(), k.clone())).collect();
    if psi_inv.len() != psi.len() {
        return Err(Error::InvalidElement(
            "classical transport is not injective".into(),
        ));
    }
    let mut f0 = HashMap::new();
    let mut e0 = HashMap::new();
    for ((a, b), col) in &psi {
        let pair = TensorElement::new(vec![(spin, a.clone()), (spin, b.clone())]);
        let f = elem_f(rank, &pair, 0)
            .map(|p| psi[&(p.factors()[0].1.clone(), p.factors()[1].1.clone())].clone());
        let e = elem_e(rank, &pair, 0)
            .map(|p| psi[&(p.factors()[0].1.clone(), p.factors()[1].1.clone())].clone());
        f0.insert(col.clone(), f);
        e0.insert(col.clone(), e);
    }
    let st = Arc::new(HatNStructure {
        psi,
        psi_inv,
        f0,
        e0,
    });
    HATN_CACHE
        .lock()
        .unwrap()
        .insert((n as u8, barred), st.clone());
    Ok(st)
}

/// Affine f_0 on a column of the given crystal.
pub fn column_f0(rank: Rank, label: Label, col: &Column) -> Option<Column> {
    match label {
        _ if label.is_spinor(rank) => spinor_f0(col),
        Label::HatN | Label::En => hat_n_structure(rank, false)
            .ok()?
            .f0
            .get(col)
            .cloned()
            .flatten(),
        Label::HatBarN | Label::EnM1 => hat_n_structure(rank, true)
            .ok()?
            .f0
            .get(col)
            .cloned()
            .flatten(),
        _ => thm_affine_f0(rank, col),
    }
}

/// Affine e_0 on a column of the given crystal.
pub fn column_e0(rank: Rank, label: Label, col: &Column) -> Option<Column> {
    match label {
        _ if label.is_spinor(rank) => spinor_e0(col),
        Label::HatN | Label::En => hat_n_structure(rank, false)
            .ok()?
            .e0
            .get(col)
            .cloned()
            .flatten(),
        Label::HatBarN | Label::EnM1 => hat_n_structure(rank, true)
            .ok()?
            .e0
            .get(col)
            .cloned()
            .flatten(),
        _ => thm_affine_e0(rank, col),
    }
}

/// f_i for any 0 <= i <= n.
pub fn column_op_f(rank: Rank, label: Label, col: &Column, i: usize) -> Option<Column> {
    if i == 0 {
        column_f0(rank, label, col)
    } else {
        column_f(rank, label, col, i)
    }
}

/// e_i for any 0 <= i <= n.
pub fn column_op_e(rank: Rank, label: Label, col: &Column, i: usize) -> Option<Column> {
    if i == 0 {
        column_e0(rank, label, col)
    } else {
        column_e(rank, label, col, i)
    }
}

/// (phi_i, eps_i) of a column for any 0 <= i <= n.
pub fn column_phi_eps(rank: Rank, label: Label, col: &Column, i: usize) -> (u32, u32) {
    if i == 0 {
        let mut phi = 0;
        let mut c = col.clone();
        while let Some(next) = column_f0(rank, label, &c) {
            phi += 1;
            c = next;
        }
        let mut eps = 0;
        let mut c = col.clone();
        while let Some(next) = column_e0(rank, label, &c) {
            eps += 1;
            c = next;
        }
        (phi, eps)
    } else {
        column_phi_eps_classical(rank, label, col, i)
    }
}

// ---------------------------------------------------------------------------
// the node-0/1 involution

/// The involution realizing the Dynkin automorphism that swaps the
/// affine node with node 1.
pub fn sigma(rank: Rank, col: &Column) -> Result<Column> {
    let n = rank.n();
    let k = col.height();
    let has1 = col.contains(1);
    let has1b = col.contains(-1);
    match (has1, has1b) {
        (true, false) => {
            let mut letters = col.letters().to_vec();
            let pos = letters.iter().position(|&x| x == 1).unwrap();
            letters.remove(pos);
            letters.push(-1);
            Ok(Column::new(letters))
        }
        (false, true) => {
            let mut letters = col.letters().to_vec();
            let pos = letters.iter().rposition(|&x| x == -1).unwrap();
            letters.remove(pos);
            letters.insert(0, 1);
            Ok(Column::new(letters))
        }
        (true, true) => {
            let x = Column::new(
                col.letters()
                    .iter()
                    .copied()
                    .filter(|&y| y != 1 && y != -1)
                    .collect(),
            );
            fill_shifted(n, &drop_map(n, &x), k, 1)
        }
        (false, false) => fill(n, &drop_shifted(n, col, 1)?, k),
    }
}

// ---------------------------------------------------------------------------
// dual map

/// tau(i): swaps the last two nodes when n is odd, identity otherwise.
pub fn tau(rank: Rank, i: usize) -> usize {
    let n = rank.n();
    if n % 2 == 1 {
        if i == n {
            n - 1
        } else if i == n - 1 {
            n
        } else {
            i
        }
    } else {
        i
    }
}

/// The dual of a single letter.
pub fn letter_star(rank: Rank, x: Letter) -> Letter {
    let n = rank.n();
    if x.unsigned_abs() as usize == n && n % 2 == 1 {
        x
    } else {
        -x
    }
}

/// The dual of a single column: reverse and dualize the letters.
pub fn column_star(rank: Rank, col: &Column) -> Column {
    Column::new(
        col.letters()
            .iter()
            .rev()
            .map(|&x| letter_star(rank, x))
            .collect(),
    )
}

/// Crystal of the dual: the fork automorphism swaps the two spinor
/// nodes (and the two height-n parity classes) when n is odd.
pub fn label_star(rank: Rank, label: Label) -> Label {
    let n = rank.n();
    if n.is_multiple_of(2) {
        return label;
    }
    match label {
        Label::Kr(k) if k as usize == n => Label::Kr(n as u8 - 1),
        Label::Kr(k) if k as usize == n - 1 => Label::Kr(n as u8),
        Label::HatN => Label::HatBarN,
        Label::HatBarN => Label::HatN,
        Label::En => Label::EnM1,
        Label::EnM1 => Label::En,
        other => other,
    }
}

// ---------------------------------------------------------------------------
// weights

/// Weight of a column in doubled epsilon coordinates.  Spinor columns
/// carry half the letter sum, which the doubling keeps integral.
pub fn column_weight(rank: Rank, label: Label, col: &Column) -> Weight {
    let n = rank.n();
    let unit: i64 = if label.is_spinor(rank) { 1 } else { 2 };
    let mut eps2 = vec![0i64; n];
    for &x in col.letters() {
        let v = x.unsigned_abs() as usize;
        eps2[v - 1] += if x > 0 { unit } else { -unit };
    }
    Weight::from_eps2(eps2)
}

// ---------------------------------------------------------------------------
// enumeration

static ENUM_CACHE: Cache<(u8, Label), Vec<Column>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn alphabet(n: usize) -> Vec<Letter> {
    let mut v: Vec<Letter> = (1..=n as Letter).collect();
    v.extend((1..=n as Letter).rev().map(|x| -x));
    v
}

fn enumerate_cond1(n: usize, height: usize) -> Vec<Column> {
    fn go(n: usize, height: usize, alpha: &[Letter], stack: &mut Vec<Letter>, out: &mut Vec<Column>) {
        if stack.len() == height {
            out.push(Column::new(stack.clone()));
            return;
        }
        for &y in alpha {
            let ok = match stack.last() {
                None => true,
                Some(&x) => matches!(compare(n, x, y), LetterOrd::Less | LetterOrd::Incomparable),
            };
            if ok {
                stack.push(y);
                go(n, height, alpha, stack, out);
                stack.pop();
            }
        }
    }
    let alpha = alphabet(n);
    let mut out = Vec::new();
    let mut stack: Vec<Letter> = Vec::new();
    go(n, height, &alpha, &mut stack, &mut out);
    out
}

fn enumerate_hat_n(n: usize, variant: HeightNVariant) -> Vec<Column> {
    let mut out: Vec<Column> = enumerate_cond1(n, n)
        .into_iter()
        .filter(|c| hat_n_membership(n, c, variant).unwrap_or(false))
        .collect();
    out.sort();
    out
}

/// All elements of the crystal, in a fixed deterministic order.
pub fn enumerate(rank: Rank, label: Label) -> Result<Arc<Vec<Column>>> {
    let n = rank.n();
    if let Some(v) = ENUM_CACHE.lock().unwrap().get(&(n as u8, label)).cloned() {
        return Ok(v);
    }
    let cols: Vec<Column> = match label {
        Label::Kr(k) if (k as usize) <= n - 2 && k >= 1 => enumerate_cond1(n, k as usize),
        Label::Kr(k) if (k as usize) == n - 1 => enumerate_cond1(n, n)
            .into_iter()
            .filter(|c| validate_spinor(n, c, HeightNVariant::Barred).unwrap_or(false))
            .collect(),
        Label::Kr(k) if (k as usize) == n => enumerate_cond1(n, n)
            .into_iter()
            .filter(|c| validate_spinor(n, c, HeightNVariant::Plain).unwrap_or(false))
            .collect(),
        Label::Kr(k) => {
            return Err(Error::IndexRange(format!("KR node {k} for rank {n}")));
        }
        Label::Hat(k) if (k as usize) < n && k >= 1 => enumerate_cond1(n, k as usize),
        Label::Hat(k) => {
            return Err(Error::IndexRange(format!("hat node {k} for rank {n}")));
        }
        Label::HatN => enumerate_hat_n(n, HeightNVariant::Plain),
        Label::HatBarN => enumerate_hat_n(n, HeightNVariant::Barred),
        Label::En => {
            let mut v: Vec<Column> = enumerate(rank, Label::Kr(n as u8))?
                .iter()
                .map(|c| match emb_b(rank, Label::Kr(n as u8), c) {
                    Ok(EmbImage::Hat(h)) => h,
                    _ => unreachable!("spinor embedding lands in a hat column"),
                })
                .collect();
            v.sort();
            v
        }
        Label::EnM1 => {
            let mut v: Vec<Column> = enumerate(rank, Label::Kr(n as u8 - 1))?
                .iter()
                .map(|c| match emb_b(rank, Label::Kr(n as u8 - 1), c) {
                    Ok(EmbImage::Hat(h)) => h,
                    _ => unreachable!("spinor embedding lands in a hat column"),
                })
                .collect();
            v.sort();
            v
        }
    };
    let arc = Arc::new(cols);
    ENUM_CACHE
        .lock()
        .unwrap()
        .insert((n as u8, label), arc.clone());
    Ok(arc)
}

/// BFS closure of the highest element under all operators, as an
/// independent completeness oracle for `enumerate`.
pub fn bfs_closure(rank: Rank, label: Label) -> Vec<Column> {
    let n = rank.n();
    let mut seen: Vec<Column> = vec![label.highest(rank)];
    let mut queue = vec![label.highest(rank)];
    while let Some(c) = queue.pop() {
        for i in 0..=n {
            for next in [
                column_op_f(rank, label, &c, i),
                column_op_e(rank, label, &c, i),
            ]
            .into_iter()
            .flatten()
            {
                if !seen.contains(&next) {
                    seen.push(next.clone());
                    queue.push(next);
                }
            }
        }
    }
    seen.sort();
    seen
}

// ---------------------------------------------------------------------------
// classical components

/// Height of the dropped column: the index of the classical component
/// the element lives in.  Spinor crystals are single components.
pub fn classical_component(rank: Rank, label: Label, col: &Column) -> usize {
    if label.is_spinor(rank) {
        label.height(rank)
    } else {
        drop_map(rank.n(), col).height()
    }
}

// ---------------------------------------------------------------------------
// affine embedding

/// Image of a column under the doubling embedding: a pair for the
/// non-spinor crystals, a single relaxed height-n column for spinors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmbImage {
    Pair(Column, Column),
    Hat(Column),
}

type MovePath = Vec<(bool, u8)>;
type LiftMap = HashMap<Column, MovePath>;

static LIFT_CACHE: Cache<(u8, u8), LiftMap> = Lazy::new(|| Mutex::new(HashMap::new()));

fn lift_paths(rank: Rank, k: u8) -> Arc<LiftMap> {
    let n = rank.n();
    if let Some(m) = LIFT_CACHE.lock().unwrap().get(&(n as u8, k)).cloned() {
        return m;
    }
    let label = Label::Kr(k);
    let u = label.highest(rank);
    let mut paths: HashMap<Column, MovePath> = HashMap::new();
    paths.insert(u.clone(), vec![]);
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(u);
    while let Some(c) = queue.pop_front() {
        let base = paths[&c].clone();
        for i in 0..=n {
            for (is_f, next) in [
                (true, column_op_f(rank, label, &c, i)),
                (false, column_op_e(rank, label, &c, i)),
            ] {
                if let Some(next) = next {
                    if !paths.contains_key(&next) {
                        let mut p = base.clone();
                        p.push((is_f, i as u8));
                        paths.insert(next.clone(), p);
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    let arc = Arc::new(paths);
    LIFT_CACHE
        .lock()
        .unwrap()
        .insert((n as u8, k), arc.clone());
    arc
}

/// The affine embedding that doubles every operator, computed by
/// lifting the element to the highest vector and replaying the moves
/// doubled from the doubled seed.
pub fn emb_b(rank: Rank, label: Label, col: &Column) -> Result<EmbImage> {
    let n = rank.n();
    let k = match label {
        Label::Kr(k) => k,
        _ => {
            return Err(Error::InvalidElement(format!(
                "embedding is defined on the KR crystals, not {label}"
            )))
        }
    };
    let paths = lift_paths(rank, k);
    let path = paths
        .get(col)
        .ok_or_else(|| Error::InvalidElement(format!("{col} is not an element of {label}")))?;
    if (k as usize) <= n - 2 {
        let u = label.highest(rank);
        let mut elem = TensorElement::new(vec![(label, u.clone()), (label, u)]);
        for &(is_f, i) in path {
            for _ in 0..2 {
                elem = if is_f {
                    elem_f(rank, &elem, i as usize)
                } else {
                    elem_e(rank, &elem, i as usize)
                }
                .ok_or_else(|| {
                    Error::InvalidElement("doubled move vanished inside the embedding".into())
                })?;
            }
        }
        let c2 = elem.factors()[0].1.clone();
        let c1 = elem.factors()[1].1.clone();
        Ok(EmbImage::Pair(c2, c1))
    } else {
        let u = label.highest(rank);
        let mut pair = TensorElement::new(vec![(label, u.clone()), (label, u)]);
        for &(is_f, i) in path {
            for _ in 0..2 {
                pair = if is_f {
                    elem_f(rank, &pair, i as usize)
                } else {
                    elem_e(rank, &pair, i as usize)
                }
                .ok_or_else(|| {
                    Error::InvalidElement("doubled move vanished inside the embedding".into())
                })?;
            }
        }
        let st = hat_n_structure(rank, (k as usize) == n - 1)?;
        let key = (pair.factors()[0].1.clone(), pair.factors()[1].1.clone());
        let col = st.psi.get(&key).ok_or_else(|| {
            Error::InvalidElement("embedded pair missing from the transport".into())
        })?;
        Ok(EmbImage::Hat(col.clone()))
    }
}

// ---------------------------------------------------------------------------
// tensor elements

/// An element of a tensor product of column crystals, stored with the
/// leftmost factor first (the printed order b_L ... b_1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorElement {
    factors: Vec<(Label, Column)>,
}

impl TensorElement {
    pub fn new(factors: Vec<(Label, Column)>) -> TensorElement {
        TensorElement { factors }
    }

    pub fn empty() -> TensorElement {
        TensorElement { factors: vec![] }
    }

    pub fn factors(&self) -> &[(Label, Column)] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.factors.iter().map(|(l, _)| *l).collect()
    }

    pub fn weight(&self, rank: Rank) -> Weight {
        let mut w = Weight::zero(rank);
        for (l, c) in &self.factors {
            w = w.add(&column_weight(rank, *l, c));
        }
        w
    }

    /// Validate every factor against its crystal.
    pub fn validate(&self, rank: Rank) -> Result<()> {
        for (l, c) in &self.factors {
            if !l.contains(rank, c)? {
                return Err(Error::InvalidElement(format!("{c} is not in {l}")));
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for TensorElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, (_, c)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "(x)")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// f_i on a tensor element, any 0 <= i <= n.
pub fn elem_f(rank: Rank, elem: &TensorElement, i: usize) -> Option<TensorElement> {
    let (_, _, rm, _) = reduce_signature(elem.factors.iter().enumerate().map(|(idx, (l, c))| {
        let (phi, eps) = column_phi_eps(rank, *l, c, i);
        (idx, phi, eps)
    }));
    let idx = rm?;
    let (l, c) = &elem.factors[idx];
    let new = column_op_f(rank, *l, c, i).expect("signature chose an f-movable factor");
    let mut factors = elem.factors.clone();
    factors[idx].1 = new;
    Some(TensorElement { factors })
}

/// e_i on a tensor element, any 0 <= i <= n.
pub fn elem_e(rank: Rank, elem: &TensorElement, i: usize) -> Option<TensorElement> {
    let (_, _, _, lp) = reduce_signature(elem.factors.iter().enumerate().map(|(idx, (l, c))| {
        let (phi, eps) = column_phi_eps(rank, *l, c, i);
        (idx, phi, eps)
    }));
    let idx = lp?;
    let (l, c) = &elem.factors[idx];
    let new = column_op_e(rank, *l, c, i).expect("signature chose an e-movable factor");
    let mut factors = elem.factors.clone();
    factors[idx].1 = new;
    Some(TensorElement { factors })
}

/// (phi_i, eps_i) of a tensor element.
pub fn elem_phi_eps(rank: Rank, elem: &TensorElement, i: usize) -> (u32, u32) {
    let (phi, eps, _, _) = reduce_signature(elem.factors.iter().enumerate().map(|(idx, (l, c))| {
        let (phi, eps) = column_phi_eps(rank, *l, c, i);
        (idx, phi, eps)
    }));
    (phi, eps)
}

/// The dual of a tensor element: reverse the factors and dualize each.
/// The letter rule is arranged so that every column set is preserved;
/// only the operator colors twist.
pub fn elem_star(rank: Rank, elem: &TensorElement) -> TensorElement {
    TensorElement {
        factors: elem
            .factors
            .iter()
            .rev()
            .map(|(l, c)| (*l, column_star(rank, c)))
            .collect(),
    }
}

/// Raise to the classically highest element of the component.
pub fn raise_classical(rank: Rank, elem: &TensorElement) -> TensorElement {
    let n = rank.n();
    let mut cur = elem.clone();
    'outer: loop {
        for i in 1..=n {
            if let Some(next) = elem_e(rank, &cur, i) {
                cur = next;
                continue 'outer;
            }
        }
        return cur;
    }
}

// ---------------------------------------------------------------------------
// classically highest elements and paths

type HighestSets = HashMap<(u8, Vec<Label>), Arc<Vec<TensorElement>>>;

static HIGHEST_CACHE: Lazy<Mutex<HighestSets>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// All classically highest weight elements of the tensor product with
/// the given factor labels (leftmost first); memoized per factor list.
pub fn enumerate_highest(rank: Rank, labels: &[Label]) -> Result<Arc<Vec<TensorElement>>> {
    let key = (rank.n() as u8, labels.to_vec());
    if let Some(v) = HIGHEST_CACHE.lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let out = enumerate_highest_uncached(rank, labels)?;
    let arc = Arc::new(out);
    HIGHEST_CACHE.lock().unwrap().insert(key, arc.clone());
    Ok(arc)
}

type FactorRow = (Column, Vec<u32>, Vec<u32>);

fn enumerate_highest_uncached(rank: Rank, labels: &[Label]) -> Result<Vec<TensorElement>> {
    let n = rank.n();
    // per-factor tables of (column, phi[1..=n], eps[1..=n])
    let mut tables = Vec::with_capacity(labels.len());
    for &l in labels {
        let cols = enumerate(rank, l)?;
        let tab: Vec<FactorRow> = cols
            .iter()
            .map(|c| {
                let mut phi = Vec::with_capacity(n);
                let mut eps = Vec::with_capacity(n);
                for i in 1..=n {
                    let (p, e) = column_phi_eps(rank, l, c, i);
                    phi.push(p);
                    eps.push(e);
                }
                (c.clone(), phi, eps)
            })
            .collect();
        tables.push(tab);
    }
    fn go(
        labels: &[Label],
        tables: &[Vec<FactorRow>],
        pos: usize, // index into labels, processed right to left
        suffix: &mut Vec<(Label, Column)>,
        eps_profile: &mut Vec<u32>,
        phi_profile: &mut Vec<u32>,
        out: &mut Vec<TensorElement>,
    ) {
        if pos == 0 {
            if eps_profile.iter().all(|&e| e == 0) {
                let mut f = suffix.clone();
                f.reverse();
                out.push(TensorElement::new(f));
            }
            return;
        }
        let idx = pos - 1;
        for (col, phi_c, eps_c) in &tables[idx] {
            let saved_e = eps_profile.clone();
            let saved_p = phi_profile.clone();
            // prepend col on the left of the suffix profile
            for i in 0..eps_profile.len() {
                eps_profile[i] = saved_e[i] + eps_c[i].saturating_sub(saved_p[i]);
                phi_profile[i] = phi_c[i] + saved_p[i].saturating_sub(eps_c[i]);
            }
            suffix.push((labels[idx], col.clone()));
            go(labels, tables, idx, suffix, eps_profile, phi_profile, out);
            suffix.pop();
            *eps_profile = saved_e;
            *phi_profile = saved_p;
        }
    }
    let mut out = Vec::new();
    let mut suffix = Vec::new();
    let mut eps_profile = vec![0u32; n];
    let mut phi_profile = vec![0u32; n];
    go(
        labels,
        &tables,
        labels.len(),
        &mut suffix,
        &mut eps_profile,
        &mut phi_profile,
        &mut out,
    );
    out.sort();
    Ok(out)
}

/// The path set: classically highest elements of the prescribed weight.
pub fn enumerate_paths(rank: Rank, lambda: &Weight, labels: &[Label]) -> Result<Vec<TensorElement>> {
    Ok(enumerate_highest(rank, labels)?
        .iter()
        .filter(|b| &b.weight(rank) == lambda)
        .cloned()
        .collect())
}
