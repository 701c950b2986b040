//! The `3m`-slot window of consecutive order statistics.
//!
//! Slots are addressed 1-based throughout, so `get(1)` is the leftmost
//! (largest) slot and `get(3m)` the rightmost.

use std::fmt;

use crate::error::{Error, Result};

/// One window cell.
///
/// `Top` and `Bottom` stand for `+inf` and `-inf`; `Empty` marks a cell
/// whose contents are unknown. `Empty` is never ordered against anything.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot<K> {
    Top,
    Key(K),
    Bottom,
    Empty,
}

impl<K: Ord + Copy> Slot<K> {
    pub fn key(self) -> Option<K> {
        match self {
            Slot::Key(k) => Some(k),
            _ => None,
        }
    }

    /// `self < q` as used to locate the insertion point: `Bottom` is below
    /// every key, `Top` and `Empty` never are.
    fn below(self, q: K) -> bool {
        match self {
            Slot::Key(x) => x < q,
            Slot::Bottom => true,
            Slot::Top | Slot::Empty => false,
        }
    }

    /// `q > self` as used by the rank tracker.
    pub fn exceeded_by(self, q: K) -> bool {
        self.below(q)
    }

    fn label(self) -> &'static str {
        match self {
            Slot::Top => "+inf",
            Slot::Key(_) => "key",
            Slot::Bottom => "-inf",
            Slot::Empty => "empty",
        }
    }
}

impl<K: fmt::Display> fmt::Display for Slot<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Top => f.write_str("+inf"),
            Slot::Key(k) => k.fmt(f),
            Slot::Bottom => f.write_str("-inf"),
            Slot::Empty => f.write_str("_"),
        }
    }
}

/// Counts of each cell kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Census {
    pub top: usize,
    pub keys: usize,
    pub bottom: usize,
    pub empty: usize,
}

impl fmt::Display for Census {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "top={} keys={} bottom={} empty={}", self.top, self.keys, self.bottom, self.empty)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window<K> {
    slots: Vec<Slot<K>>,
}

impl<K: Ord + Copy> Window<K> {
    /// `(Top, Bottom, ..., Bottom)` with `len = 3m` slots.
    pub fn new(len: usize) -> Result<Self> {
        if len < 6 || !len.is_multiple_of(6) {
            return Err(Error::InvalidConfig(format!("window length {len} is not 3m for even m >= 2")));
        }
        let mut slots = vec![Slot::Bottom; len];
        slots[0] = Slot::Top;
        Ok(Self { slots })
    }

    pub fn from_slots(slots: Vec<Slot<K>>) -> Result<Self> {
        if slots.len() < 6 || !slots.len().is_multiple_of(6) {
            return Err(Error::InvalidConfig(format!("window length {} is not 3m for even m", slots.len())));
        }
        Ok(Self { slots })
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// 1-based index of the center slot, `3m/2`.
    pub fn center_index(&self) -> usize {
        self.slots.len() / 2
    }

    pub fn center(&self) -> Slot<K> {
        self.get(self.center_index())
    }

    /// 1-based access.
    pub fn get(&self, i: usize) -> Slot<K> {
        self.slots[i - 1]
    }

    fn set(&mut self, i: usize, s: Slot<K>) {
        self.slots[i - 1] = s;
    }

    pub fn slots(&self) -> &[Slot<K>] {
        &self.slots
    }

    /// Writes keys (in decreasing order) into slots `2..`, leaving slot 1 as
    /// given and the tail untouched.
    pub(crate) fn fill_from_second(&mut self, keys: &[K]) {
        for (i, &k) in keys.iter().enumerate().take(self.slots.len() - 1) {
            self.slots[i + 1] = Slot::Key(k);
        }
    }

    /// Inserts `q` if it belongs to the window's consecutive run, dropping
    /// one cell from whichever end is farther from the center.
    pub fn insert(&mut self, q: K) {
        let len = self.slots.len();
        let Some(pos) = self.slots.iter().position(|s| s.below(q)) else {
            return;
        };
        let star = pos + 1;
        if star == 1 || self.get(star - 1) == Slot::Empty {
            return;
        }
        if star <= len / 2 {
            for i in 1..=star.saturating_sub(2) {
                self.set(i, self.get(i + 1));
            }
            self.set(star - 1, Slot::Key(q));
        } else {
            for i in (star + 1..=len).rev() {
                self.set(i, self.get(i - 1));
            }
            self.set(star, Slot::Key(q));
        }
    }

    /// Shifts every cell by `d` positions (right when positive). Vacated
    /// cells take the sentinel that was at the displaced end, or `Empty`.
    pub fn shift(&mut self, d: isize) {
        let len = self.slots.len();
        let a = d.unsigned_abs();
        if d < 0 {
            let fill = if self.get(len) == Slot::Bottom { Slot::Bottom } else { Slot::Empty };
            if a >= len {
                self.slots.fill(fill);
                return;
            }
            self.slots.copy_within(a.., 0);
            self.slots[len - a..].fill(fill);
        } else if d > 0 {
            let fill = if self.get(1) == Slot::Top { Slot::Top } else { Slot::Empty };
            if a >= len {
                self.slots.fill(fill);
                return;
            }
            self.slots.copy_within(..len - a, a);
            self.slots[..a].fill(fill);
        }
    }

    pub fn census(&self) -> Census {
        let mut c = Census::default();
        for s in &self.slots {
            match s {
                Slot::Top => c.top += 1,
                Slot::Key(_) => c.keys += 1,
                Slot::Bottom => c.bottom += 1,
                Slot::Empty => c.empty += 1,
            }
        }
        c
    }

    /// The finite keys, in slot order.
    pub fn run(&self) -> Vec<K> {
        self.slots.iter().filter_map(|s| s.key()).collect()
    }

    /// Checks the structural invariants: one contiguous strictly decreasing
    /// run of keys, a single sentinel kind on each side, `Top` only to the
    /// left and `Bottom` only to the right.
    pub fn check_shape(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::ContractViolation(msg));
        let first = self.slots.iter().position(|s| matches!(s, Slot::Key(_)));
        let last = self.slots.iter().rposition(|s| matches!(s, Slot::Key(_)));
        let (left, right) = match (first, last) {
            (Some(f), Some(l)) => {
                if self.slots[f..=l].iter().any(|s| s.key().is_none()) {
                    return bad(format!("keys are not contiguous: {}", self.describe()));
                }
                let run = self.run();
                if run.windows(2).any(|w| w[0] <= w[1]) {
                    return bad("keys are not strictly decreasing".into());
                }
                (&self.slots[..f], &self.slots[l + 1..])
            }
            _ => {
                // No keys: a run of one left sentinel, then the right side.
                let head = self.slots[0];
                let split = if matches!(head, Slot::Top | Slot::Empty) {
                    self.slots.iter().position(|&s| s != head).unwrap_or(self.slots.len())
                } else {
                    0
                };
                (&self.slots[..split], &self.slots[split..])
            }
        };
        for (side, allowed, name) in [(left, [Slot::Top, Slot::Empty], "left"), (right, [Slot::Bottom, Slot::Empty], "right")] {
            if let Some(&s) = side.first() {
                if !allowed.contains(&s) {
                    return bad(format!("{} on the {name} side", s.label()));
                }
                if side.iter().any(|&t| t != s) {
                    return bad(format!("mixed sentinels on the {name} side"));
                }
            }
        }
        Ok(())
    }

    fn describe(&self) -> String {
        self.slots.iter().map(|s| s.label()).collect::<Vec<_>>().join(",")
    }
}

impl<K: fmt::Display> fmt::Display for Window<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, s) in self.slots.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            s.fmt(f)?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Slot::{Bottom as B, Empty as E, Key, Top as T};

    fn w(slots: &[Slot<i32>]) -> Window<i32> {
        Window::from_slots(slots.to_vec()).unwrap()
    }

    fn keys(xs: &[i32]) -> Vec<Slot<i32>> {
        xs.iter().map(|&x| Key(x)).collect()
    }

    #[test]
    fn insert_left_half() {
        let mut win = w(&[T, Key(9), Key(7), Key(5), Key(3), B]);
        win.insert(8);
        assert_eq!(win.slots(), keys(&[9, 8, 7, 5, 3]).into_iter().chain([B]).collect::<Vec<_>>());
    }

    #[test]
    fn insert_right_half_absorbs_bottom() {
        let mut win = w(&[Key(9), Key(8), Key(7), Key(5), Key(3), B]);
        win.insert(4);
        assert_eq!(win.slots(), keys(&[9, 8, 7, 5, 4, 3]).as_slice());
    }

    #[test]
    fn insert_after_empty_is_dropped() {
        let start = [E, E, Key(9), Key(7), Key(5), Key(3)];
        let mut win = w(&start);
        win.insert(10);
        assert_eq!(win.slots(), &start);
        // Below a full run with no Bottom: nothing is smaller, so no i*.
        let full = keys(&[9, 8, 7, 5, 4, 3]);
        let mut win = w(&full);
        win.insert(1);
        assert_eq!(win.slots(), full.as_slice());
        // Right end Empty after the run.
        let start = [Key(9), Key(8), Key(7), Key(5), E, E];
        let mut win = w(&start);
        win.insert(1);
        assert_eq!(win.slots(), &start);
    }

    #[test]
    fn insert_new_maximum_replaces_top() {
        let mut win = w(&[T, Key(9), Key(7), B, B, B]);
        win.insert(12);
        assert_eq!(win.slots(), &[Key(12), Key(9), Key(7), B, B, B]);
        let mut win = w(&[Key(9), Key(7), Key(5), Key(4), Key(3), Key(2)]);
        win.insert(12);
        assert_eq!(win.slots(), keys(&[9, 7, 5, 4, 3, 2]).as_slice());
    }

    #[test]
    fn shift_examples() {
        let mut win = w(&keys(&[6, 5, 4, 3, 2, 1]));
        win.shift(0);
        assert_eq!(win.run(), vec![6, 5, 4, 3, 2, 1]);
        win.shift(-2);
        assert_eq!(win.slots(), &[Key(4), Key(3), Key(2), Key(1), E, E]);

        let mut win = w(&[Key(4), Key(3), Key(2), Key(1), B, B]);
        win.shift(1);
        assert_eq!(win.slots(), &[E, Key(4), Key(3), Key(2), Key(1), B]);

        let mut win = w(&[T, Key(4), Key(3), B, B, B]);
        win.shift(2);
        assert_eq!(win.slots(), &[T, T, T, Key(4), Key(3), B]);
        win.shift(-4);
        assert_eq!(win.slots(), &[Key(3), B, B, B, B, B]);
        win.shift(-9);
        assert_eq!(win.slots(), &[B; 6]);
    }

    #[test]
    fn shape_checks() {
        assert!(w(&[T, Key(9), Key(7), B, B, B]).check_shape().is_ok());
        assert!(w(&[T, T, B, B, B, B]).check_shape().is_ok());
        assert!(w(&[E, E, E, E, E, E]).check_shape().is_ok());
        assert!(w(&[E, E, B, B, B, B]).check_shape().is_ok());
        assert!(w(&[T, Key(7), Key(9), B, B, B]).check_shape().is_err());
        assert!(w(&[T, Key(9), B, Key(7), B, B]).check_shape().is_err());
        assert!(w(&[T, E, Key(9), B, B, B]).check_shape().is_err());
        assert!(w(&[B, Key(9), Key(7), B, B, B]).check_shape().is_err());
        assert!(w(&[T, Key(9), Key(7), B, E, B]).check_shape().is_err());
    }

    #[test]
    fn rejects_bad_length() {
        assert!(Window::<i32>::new(9).is_err());
        assert!(Window::<i32>::new(3).is_err());
        let win = Window::<i32>::new(12).unwrap();
        assert_eq!(win.center_index(), 6);
        assert_eq!(win.census(), Census { top: 1, keys: 0, bottom: 11, empty: 0 });
    }
}
