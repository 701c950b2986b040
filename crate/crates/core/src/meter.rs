//! Word-level memory accounting.
//!
//! One word holds either a stream element or an integer counter. Every
//! metered algorithm registers the words it holds while holding them;
//! reference oracles are never metered.

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MemoryMeter {
    current: usize,
    peak: usize,
}

impl MemoryMeter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn acquire(&mut self, words: usize) {
        self.current += words;
        self.peak = self.peak.max(self.current);
    }

    pub fn release(&mut self, words: usize) {
        debug_assert!(words <= self.current, "released {words} of {} words", self.current);
        self.current = self.current.saturating_sub(words);
    }

    pub fn current(&self) -> usize {
        self.current
    }

    pub fn peak(&self) -> usize {
        self.peak
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_tracks_high_water_mark() {
        let mut m = MemoryMeter::new();
        m.acquire(5);
        m.acquire(3);
        m.release(6);
        assert_eq!((m.current(), m.peak()), (2, 8));
        m.acquire(4);
        assert_eq!((m.current(), m.peak()), (6, 8));
        m.acquire(4);
        assert_eq!(m.peak(), 10);
    }
}
