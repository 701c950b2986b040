/// The `capacity` largest keys offered so far, kept in decreasing order.
#[derive(Debug, Clone)]
pub(crate) struct TopBuffer<K> {
    keys: Vec<K>,
    capacity: usize,
}

impl<K: Ord + Copy> TopBuffer<K> {
    pub(crate) fn new(capacity: usize) -> Self {
        Self {
            keys: Vec::with_capacity(capacity + 1),
            capacity,
        }
    }

    pub(crate) fn offer(&mut self, x: K) {
        if self.capacity == 0 {
            return;
        }
        if self.keys.len() == self.capacity && self.keys.last().is_some_and(|&last| x <= last) {
            return;
        }
        let at = self.keys.partition_point(|&k| k > x);
        self.keys.insert(at, x);
        self.keys.truncate(self.capacity);
    }

    /// 1-based: the `j`-th largest retained key.
    pub(crate) fn nth(&self, j: usize) -> Option<K> {
        j.checked_sub(1).and_then(|i| self.keys.get(i).copied())
    }

    pub(crate) fn len(&self) -> usize {
        self.keys.len()
    }

    pub(crate) fn last(&self) -> Option<K> {
        self.keys.last().copied()
    }

    pub(crate) fn as_slice(&self) -> &[K] {
        &self.keys
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_largest_in_order() {
        let mut b = TopBuffer::new(3);
        for x in [5, 1, 9, 7, 3, 8] {
            b.offer(x);
        }
        assert_eq!(b.as_slice(), &[9, 8, 7]);
        assert_eq!(b.nth(2), Some(8));
        assert_eq!(b.nth(4), None);
        assert_eq!(b.nth(0), None);
    }
}
