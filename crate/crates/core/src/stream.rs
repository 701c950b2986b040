//! Stream instances, the single-pass cursor, and the rank primitive.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::random::RandomSource;

/// A key extended with the two infinite sentinels.
///
/// The derived order is `Bottom < Finite(_) < Top`, which is exactly the
/// order used for thresholds (`Top` is "no cap") and for the in-band
/// "nothing below the threshold" answer (`Bottom`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended<K> {
    Bottom,
    Finite(K),
    Top,
}

impl<K: Copy> Extended<K> {
    pub fn finite(self) -> Option<K> {
        match self {
            Extended::Finite(k) => Some(k),
            _ => None,
        }
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Extended::Bottom)
    }
}

impl<K: fmt::Display> fmt::Display for Extended<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Bottom => f.write_str("-inf"),
            Extended::Finite(k) => k.fmt(f),
            Extended::Top => f.write_str("+inf"),
        }
    }
}

/// Something an algorithm can pull stream elements from, one at a time and
/// exactly once.
pub trait ElementSource<K> {
    /// Returns the next element, or `ContractViolation` when exhausted.
    fn next_element(&mut self) -> Result<K>;

    /// Number of elements emitted so far.
    fn consumed(&self) -> usize;

    /// Reads and discards `count` elements.
    fn skip(&mut self, count: usize) -> Result<()> {
        for _ in 0..count {
            self.next_element()?;
        }
        Ok(())
    }
}

impl<K, S: ElementSource<K> + ?Sized> ElementSource<K> for &mut S {
    fn next_element(&mut self) -> Result<K> {
        (**self).next_element()
    }

    fn consumed(&self) -> usize {
        (**self).consumed()
    }
}

/// A value set together with the order in which it arrives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamInstance<K> {
    values: Vec<K>,
    /// `arrival[j]` is the index into `values` of the element at stream
    /// position `j` (0-based).
    arrival: Vec<usize>,
}

fn ensure_distinct<K: Ord + Copy + fmt::Debug>(values: &[K]) -> Result<()> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DistinctnessViolation(format!("{:?} appears twice", w[0])));
    }
    Ok(())
}

/// Builds an instance whose arrival order is a uniform random permutation
/// (Fisher-Yates) drawn from `seed`.
pub fn make_instance<K: Ord + Copy + fmt::Debug>(values: Vec<K>, seed: u64) -> Result<StreamInstance<K>> {
    if values.is_empty() {
        return Err(Error::DomainError("instance needs at least one value".into()));
    }
    ensure_distinct(&values)?;
    let mut arrival: Vec<usize> = (0..values.len()).collect();
    let mut rng = RandomSource::new(seed);
    arrival.shuffle(&mut rng);
    Ok(StreamInstance { values, arrival })
}

impl<K: Ord + Copy + fmt::Debug> StreamInstance<K> {
    /// Instance with an explicit arrival order.
    pub fn from_parts(values: Vec<K>, arrival: Vec<usize>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DomainError("instance needs at least one value".into()));
        }
        if values.len() != arrival.len() {
            return Err(Error::DomainError(format!(
                "{} values but {} arrival slots",
                values.len(),
                arrival.len()
            )));
        }
        ensure_distinct(&values)?;
        let mut seen = vec![false; values.len()];
        for &a in &arrival {
            if a >= values.len() || std::mem::replace(&mut seen[a], true) {
                return Err(Error::DomainError("arrival is not a permutation".into()));
            }
        }
        Ok(Self { values, arrival })
    }

    /// Instance whose arrival order is the order of `sequence`.
    pub fn from_sequence(sequence: Vec<K>) -> Result<Self> {
        let arrival = (0..sequence.len()).collect();
        Self::from_parts(sequence, arrival)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[K] {
        &self.values
    }

    pub fn arrival(&self) -> &[usize] {
        &self.arrival
    }

    /// Element at 1-based stream position `position`.
    pub fn at(&self, position: usize) -> K {
        self.values[self.arrival[position - 1]]
    }

    /// The elements in arrival order.
    pub fn stream(&self) -> impl Iterator<Item = K> + '_ {
        self.arrival.iter().map(move |&i| self.values[i])
    }

    pub fn cursor(&self) -> StreamCursor<'_, K> {
        StreamCursor {
            instance: self,
            next_position: 0,
        }
    }

    /// `|{t in s[i1..=i2] : cap > t >= x}|` with 1-based inclusive positions.
    pub fn rank_between(&self, i1: usize, i2: usize, x: K, cap: Extended<K>) -> Result<usize> {
        if i1 < 1 || i1 > i2 || i2 > self.len() {
            return Err(Error::IndexError(format!(
                "positions [{i1}, {i2}] outside [1, {}]",
                self.len()
            )));
        }
        Ok((i1..=i2)
            .map(|p| self.at(p))
            .filter(|&t| t >= x && Extended::Finite(t) < cap)
            .count())
    }

    /// Replaces every value by `f(value)` and keeps the arrival order.
    ///
    /// `f` must be strictly increasing on the value set.
    pub fn monotone_relabel<K2, F>(&self, f: F) -> Result<StreamInstance<K2>>
    where
        K2: Ord + Copy + fmt::Debug,
        F: Fn(K) -> K2,
    {
        let mapped: Vec<K2> = self.values.iter().map(|&v| f(v)).collect();
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_unstable_by_key(|&i| self.values[i]);
        for w in order.windows(2) {
            let (lo, hi) = (mapped[w[0]], mapped[w[1]]);
            if lo == hi {
                return Err(Error::DistinctnessViolation(format!("relabel maps two values to {lo:?}")));
            }
            if lo > hi {
                return Err(Error::DomainError("relabel is not order preserving".into()));
            }
        }
        Ok(StreamInstance {
            values: mapped,
            arrival: self.arrival.clone(),
        })
    }
}

impl<K: fmt::Display> StreamInstance<K> {
    /// Line format: `n`, then one `value arrival_position` line per value
    /// (positions 0-based, values in storage order).
    pub fn write_text<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", self.values.len())?;
        let mut position_of = vec![0usize; self.values.len()];
        for (pos, &idx) in self.arrival.iter().enumerate() {
            position_of[idx] = pos;
        }
        for (v, p) in self.values.iter().zip(position_of) {
            writeln!(out, "{v} {p}")?;
        }
        Ok(())
    }
}

impl<K> StreamInstance<K>
where
    K: Ord + Copy + fmt::Debug + FromStr,
{
    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let parse_err = |what: &str| Error::Parse(what.to_string());
        let header = lines
            .next()
            .ok_or_else(|| parse_err("missing length line"))?
            .map_err(|e| Error::Parse(e.to_string()))?;
        let n: usize = header.trim().parse().map_err(|_| parse_err("bad length line"))?;
        let mut values = Vec::with_capacity(n);
        let mut arrival = vec![usize::MAX; n];
        for (idx, line) in lines.take(n).enumerate() {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            let mut parts = line.split_whitespace();
            let v = parts
                .next()
                .and_then(|s| s.parse::<K>().ok())
                .ok_or_else(|| Error::Parse(format!("bad value on line {}", idx + 2)))?;
            let p: usize = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad position on line {}", idx + 2)))?;
            if p >= n || arrival[p] != usize::MAX {
                return Err(Error::Parse(format!("position {p} invalid or repeated")));
            }
            arrival[p] = idx;
            values.push(v);
        }
        if values.len() != n {
            return Err(parse_err("truncated instance"));
        }
        Self::from_parts(values, arrival)
    }
}

/// Single-pass read handle over an instance.
#[derive(Debug)]
pub struct StreamCursor<'a, K> {
    instance: &'a StreamInstance<K>,
    next_position: usize,
}

impl<K: Copy> ElementSource<K> for StreamCursor<'_, K> {
    fn next_element(&mut self) -> Result<K> {
        let idx = *self.instance.arrival.get(self.next_position).ok_or_else(|| {
            Error::ContractViolation(format!(
                "read past the end of a {}-element stream",
                self.instance.arrival.len()
            ))
        })?;
        self.next_position += 1;
        Ok(self.instance.values[idx])
    }

    fn consumed(&self) -> usize {
        self.next_position
    }
}

/// Adapts any iterator into an [`ElementSource`].
#[derive(Debug, Clone)]
pub struct IterSource<I> {
    inner: I,
    consumed: usize,
}

impl<I> IterSource<I> {
    pub fn new<T: IntoIterator<IntoIter = I>>(items: T) -> Self {
        Self {
            inner: items.into_iter(),
            consumed: 0,
        }
    }
}

impl<K, I: Iterator<Item = K>> ElementSource<K> for IterSource<I> {
    fn next_element(&mut self) -> Result<K> {
        let x = self
            .inner
            .next()
            .ok_or_else(|| Error::ContractViolation("iterator source exhausted".into()))?;
        self.consumed += 1;
        Ok(x)
    }

    fn consumed(&self) -> usize {
        self.consumed
    }
}
