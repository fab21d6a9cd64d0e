//! The column alphabet, single-column tableaux, their validity
//! predicates, the distance function, and the filling/dropping maps
//! together with their shifted variants.
//!
//! A letter is a nonzero signed integer: positive `i` is the plain
//! letter, negative `-i` the barred one.  The alphabet order is
//! 1 < 2 < ... < n-1 < {n, -n} < -(n-1) < ... < -1 with `n` and `-n`
//! mutually incomparable.  Columns are stored bottom to top; display
//! and serialization use the top-to-bottom abbreviation.
//!
//! All operations take the fork value `m` (normally the rank n) as a
//! parameter: the shifted filling and dropping maps relabel letters
//! down by 1 or 2, which moves the fork down with them.

use crate::{Error, Result};

/// Signed letter; positive unbarred, negative barred.
pub type Letter = i8;

/// Outcome of comparing two letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LetterOrd {
    Less,
    Equal,
    Greater,
    Incomparable,
}

/// Sort key in the alphabet with fork at `m`; the fork letters share a key.
#[inline]
pub fn letter_key(m: usize, x: Letter) -> i32 {
    let v = x.unsigned_abs() as i32;
    debug_assert!(v >= 1 && v as usize <= m, "letter {x} out of range for fork {m}");
    if x > 0 {
        if (v as usize) < m {
            2 * v
        } else {
            2 * m as i32 - 1
        }
    } else if (v as usize) < m {
        4 * m as i32 - 2 * v
    } else {
        2 * m as i32 - 1
    }
}

/// Compare two letters in the alphabet with fork at `m`.
pub fn compare(m: usize, a: Letter, b: Letter) -> LetterOrd {
    if a == b {
        return LetterOrd::Equal;
    }
    let (ka, kb) = (letter_key(m, a), letter_key(m, b));
    if ka < kb {
        LetterOrd::Less
    } else if ka > kb {
        LetterOrd::Greater
    } else {
        LetterOrd::Incomparable
    }
}

/// A single column, letters bottom to top.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Column {
    letters: Vec<Letter>,
}

impl Column {
    pub fn new(letters: Vec<Letter>) -> Column {
        Column { letters }
    }

    pub fn empty() -> Column {
        Column { letters: vec![] }
    }

    /// Parse from the top-to-bottom order used in display and JSON.
    pub fn from_top_down(letters: &[Letter]) -> Column {
        Column {
            letters: letters.iter().rev().copied().collect(),
        }
    }

    pub fn to_top_down(&self) -> Vec<Letter> {
        self.letters.iter().rev().copied().collect()
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.letters.len()
    }

    /// Letters bottom to top.
    #[inline]
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// 1-based row access, row 1 at the bottom.
    pub fn row(&self, r: usize) -> Option<Letter> {
        if r >= 1 && r <= self.letters.len() {
            Some(self.letters[r - 1])
        } else {
            None
        }
    }

    pub fn contains(&self, x: Letter) -> bool {
        self.letters.contains(&x)
    }

    /// Lowest 1-based row holding `x`.
    pub fn first_pos(&self, x: Letter) -> Option<usize> {
        self.letters.iter().position(|&y| y == x).map(|p| p + 1)
    }

    /// Highest 1-based row holding `x`.
    pub fn last_pos(&self, x: Letter) -> Option<usize> {
        self.letters.iter().rposition(|&y| y == x).map(|p| p + 1)
    }

    /// Letter pushed below the current bottom.
    pub fn push_bottom(&self, x: Letter) -> Column {
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        letters.push(x);
        letters.extend_from_slice(&self.letters);
        Column { letters }
    }

    /// Letter stacked on top.
    pub fn push_top(&self, x: Letter) -> Column {
        let mut letters = self.letters.clone();
        letters.push(x);
        Column { letters }
    }
}

impl std::fmt::Display for Column {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.letters.iter().rev().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// Distance between rows a < b holding a plain letter and its bar:
/// height + 1 + a - b.
pub fn dist(col: &Column, a: usize, b: usize) -> Result<i64> {
    let (pa, pb) = match (col.row(a), col.row(b)) {
        (Some(pa), Some(pb)) => (pa, pb),
        _ => {
            return Err(Error::IndexRange(format!(
                "rows {a},{b} outside column of height {}",
                col.height()
            )))
        }
    };
    if pa <= 0 || pb >= 0 || pa != -pb {
        return Err(Error::InvalidColumn(format!(
            "rows {a},{b} do not hold a matching plain/barred pair"
        )));
    }
    Ok(col.height() as i64 + 1 + a as i64 - b as i64)
}

/// Distance for the value pair (v, -v): the lowest plain occurrence
/// against the highest barred one.  A fork block whose bar sits below
/// every plain occurrence is not a pair (filling never produces one),
/// so it reports no distance.
pub fn dist_value(col: &Column, v: u8) -> Option<i64> {
    let a = col.first_pos(v as Letter)?;
    let b = col.last_pos(-(v as Letter))?;
    if a >= b {
        return None;
    }
    Some(col.height() as i64 + 1 + a as i64 - b as i64)
}

/// Verdict of the two column conditions, reported separately.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColumnVerdict {
    /// Adjacent entries strictly increase, except that fork pairs may
    /// sit next to each other in either order.
    pub cond1: bool,
    /// Every value pair (p, -p) satisfies dist <= p.
    pub cond2: bool,
}

fn letters_in_range(m: usize, col: &Column) -> bool {
    col.letters()
        .iter()
        .all(|&x| x != 0 && (x.unsigned_abs() as usize) <= m)
}

/// Check both column conditions in the alphabet with fork `m`.
pub fn validate_column(m: usize, col: &Column) -> Result<ColumnVerdict> {
    if !letters_in_range(m, col) {
        return Err(Error::InvalidColumn(format!(
            "letters out of range for fork {m}: {col}"
        )));
    }
    let cond1 = col
        .letters()
        .windows(2)
        .all(|w| match compare(m, w[0], w[1]) {
            LetterOrd::Less => true,
            LetterOrd::Incomparable => true, // fork pair adjacency
            _ => false,
        });
    let mut cond2 = true;
    for v in 1..=m as u8 {
        if let Some(d) = dist_value(col, v) {
            if d > v as i64 {
                cond2 = false;
            }
        }
    }
    Ok(ColumnVerdict { cond1, cond2 })
}

pub fn cond1(m: usize, col: &Column) -> bool {
    validate_column(m, col).map(|v| v.cond1).unwrap_or(false)
}

/// Which height-n set a full column belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeightNVariant {
    /// omega_n / Lambda_n parity: plain n at row j forces n-j even.
    Plain,
    /// barred omega_n / Lambda_{n-1} parity: plain n at row j forces n-j odd.
    Barred,
}

/// Parity condition for height-n columns.
pub fn validate_height_n(n: usize, col: &Column, variant: HeightNVariant) -> Result<bool> {
    if col.height() != n {
        return Err(Error::InvalidColumn(format!(
            "height {} column where height {n} is required",
            col.height()
        )));
    }
    for (idx, &x) in col.letters().iter().enumerate() {
        let j = idx + 1;
        let parity = (n as i64 - j as i64).rem_euclid(2);
        if x == n as Letter {
            let want = match variant {
                HeightNVariant::Plain => 0,
                HeightNVariant::Barred => 1,
            };
            if parity != want {
                return Ok(false);
            }
        } else if x == -(n as Letter) {
            let want = match variant {
                HeightNVariant::Plain => 1,
                HeightNVariant::Barred => 0,
            };
            if parity != want {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Membership test for the two spinor column sets: strictly increasing,
/// no value together with its bar, and the height-n parity rule.
pub fn validate_spinor(n: usize, col: &Column, variant: HeightNVariant) -> Result<bool> {
    if col.height() != n {
        return Err(Error::InvalidColumn(format!(
            "height {} column where height {n} is required",
            col.height()
        )));
    }
    if !letters_in_range(n, col) {
        return Err(Error::InvalidColumn(format!("letters out of range: {col}")));
    }
    let strict = col
        .letters()
        .windows(2)
        .all(|w| compare(n, w[0], w[1]) == LetterOrd::Less);
    if !strict {
        return Ok(false);
    }
    for v in 1..=n as u8 {
        if col.contains(v as Letter) && col.contains(-(v as Letter)) {
            return Ok(false);
        }
    }
    validate_height_n(n, col, variant)
}

/// Insert the pair (i, -i) into a column containing neither, keeping
/// the alphabet order; for i = m the plain letter goes below the bar.
fn insert_pair(m: usize, col: &Column, v: u8) -> Column {
    let kp = letter_key(m, v as Letter);
    let kb = letter_key(m, -(v as Letter));
    let mut letters = Vec::with_capacity(col.height() + 2);
    let mut placed_plain = false;
    let mut placed_bar = false;
    for &x in col.letters() {
        let k = letter_key(m, x);
        if !placed_plain && k > kp {
            letters.push(v as Letter);
            placed_plain = true;
            if !placed_bar && v as usize == m {
                letters.push(-(v as Letter));
                placed_bar = true;
            }
        }
        if placed_plain && !placed_bar && k > kb {
            letters.push(-(v as Letter));
            placed_bar = true;
        }
        letters.push(x);
    }
    if !placed_plain {
        letters.push(v as Letter);
    }
    if !placed_bar {
        letters.push(-(v as Letter));
    }
    Column::new(letters)
}

/// The filling map: grow a column to height k by inserting pairs
/// (-i_j, i_j), each i_j minimal above the previous one subject to the
/// three admissibility conditions.
pub fn fill(m: usize, col: &Column, k: usize) -> Result<Column> {
    let l = col.height();
    if k < l || !(k - l).is_multiple_of(2) {
        return Err(Error::Fill(format!(
            "cannot fill height {l} to height {k}: need k >= l with k - l even"
        )));
    }
    if !letters_in_range(m, col) {
        return Err(Error::Fill(format!("letters out of range for fork {m}: {col}")));
    }
    let mut cur = col.clone();
    let mut prev = 0u8;
    for j in 1..=(k - l) / 2 {
        let mut chosen = None;
        for v in prev + 1..=m as u8 {
            if cur.contains(v as Letter) || cur.contains(-(v as Letter)) {
                continue;
            }
            let cand = insert_pair(m, &cur, v);
            let d = dist_value(&cand, v).expect("pair was just inserted");
            if d < v as i64 + j as i64 {
                continue;
            }
            let mut ok = true;
            for a in v + 1..=m as u8 {
                if let Some(da) = dist_value(&cand, a) {
                    if da > a as i64 + j as i64 {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                chosen = Some((v, cand));
                break;
            }
        }
        match chosen {
            Some((v, cand)) => {
                cur = cand;
                prev = v;
            }
            None => {
                return Err(Error::Fill(format!(
                    "no admissible insertion value at step {j} while filling {col} to height {k}"
                )))
            }
        }
    }
    Ok(cur)
}

/// The dropping map, inverse of `fill` on its image: scan for value
/// pairs with dist >= value + step and remove them all.
pub fn drop_map(m: usize, col: &Column) -> Column {
    let mut marked: Vec<u8> = Vec::new();
    let mut prev = 0u8;
    loop {
        let j = marked.len() as i64 + 1;
        let mut found = None;
        for v in prev + 1..=m as u8 {
            if let Some(d) = dist_value(col, v) {
                if d >= v as i64 + j {
                    found = Some(v);
                    break;
                }
            }
        }
        match found {
            Some(v) => {
                marked.push(v);
                prev = v;
            }
            None => break,
        }
    }
    let mut out = col.clone();
    for v in marked {
        let a = out.first_pos(v as Letter).expect("marked value present");
        let mut letters = out.letters().to_vec();
        letters.remove(a - 1);
        let tmp = Column::new(letters);
        let b = tmp.last_pos(-(v as Letter)).expect("marked bar present");
        let mut letters = tmp.letters().to_vec();
        letters.remove(b - 1);
        out = Column::new(letters);
    }
    out
}

fn shift_down(m: usize, col: &Column, s: u8) -> Result<Column> {
    let mut letters = Vec::with_capacity(col.height());
    for &x in col.letters() {
        let v = x.unsigned_abs();
        if v <= s {
            return Err(Error::InvalidColumn(format!(
                "column contains {x}, which the shift-{s} maps exclude"
            )));
        }
        debug_assert!((v as usize) <= m);
        letters.push(if x > 0 { x - s as Letter } else { x + s as Letter });
    }
    Ok(Column::new(letters))
}

fn shift_up(col: &Column, s: u8) -> Column {
    Column::new(
        col.letters()
            .iter()
            .map(|&x| if x > 0 { x + s as Letter } else { x - s as Letter })
            .collect(),
    )
}

/// Shifted filling: relabel down by `shift` (the fork moves down with
/// the letters), fill, relabel back up.
pub fn fill_shifted(m: usize, col: &Column, k: usize, shift: u8) -> Result<Column> {
    debug_assert!(shift == 1 || shift == 2);
    let down = shift_down(m, col, shift)?;
    let filled = fill(m - shift as usize, &down, k)?;
    Ok(shift_up(&filled, shift))
}

/// Shifted dropping, inverse of `fill_shifted` on its image.
pub fn drop_shifted(m: usize, col: &Column, shift: u8) -> Result<Column> {
    debug_assert!(shift == 1 || shift == 2);
    let down = shift_down(m, col, shift)?;
    Ok(shift_up(&drop_map(m - shift as usize, &down), shift))
}
