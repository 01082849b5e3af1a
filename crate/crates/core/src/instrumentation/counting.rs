use std::cell::Cell;
use std::ops::{Add, AddAssign};

use super::{Load, Store};

/// Element load/store tallies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct AccessStats {
    /// Element reads from input and intermediate vectors.
    pub loads: u64,
    /// Element writes to output and intermediate vectors.
    pub stores: u64,
    /// Writes of top-k result slots (one per value/index pair).
    pub result_stores: u64,
}

impl AccessStats {
    /// Loads plus stores, excluding top-k result writes. This is the
    /// quantity behind the "accesses per element" figures.
    pub fn element_total(&self) -> u64 {
        self.loads + self.stores
    }

    pub fn total(&self) -> u64 {
        self.element_total() + self.result_stores
    }

    pub fn per_element(&self, len: usize) -> f64 {
        self.element_total() as f64 / len as f64
    }
}

impl Add for AccessStats {
    type Output = AccessStats;

    fn add(self, rhs: AccessStats) -> AccessStats {
        AccessStats {
            loads: self.loads + rhs.loads,
            stores: self.stores + rhs.stores,
            result_stores: self.result_stores + rhs.result_stores,
        }
    }
}

impl AddAssign for AccessStats {
    fn add_assign(&mut self, rhs: AccessStats) {
        *self = *self + rhs;
    }
}

/// A vector that counts every element read and write made through
/// [`Load`] and [`Store`].
///
/// Counters are not synchronized; an instance belongs to one thread.
#[derive(Debug, Clone, Default)]
pub struct CountingVec {
    data: Vec<f32>,
    loads: Cell<u64>,
    stores: u64,
}

impl CountingVec {
    pub fn new(data: Vec<f32>) -> Self {
        CountingVec {
            data,
            loads: Cell::new(0),
            stores: 0,
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(vec![0.0; len])
    }

    pub fn stats(&self) -> AccessStats {
        AccessStats {
            loads: self.loads.get(),
            stores: self.stores,
            result_stores: 0,
        }
    }

    pub fn reset(&mut self) {
        self.loads.set(0);
        self.stores = 0;
    }

    /// Uncounted view of the contents.
    pub fn as_slice(&self) -> &[f32] {
        &self.data
    }

    pub fn into_inner(self) -> Vec<f32> {
        self.data
    }
}

impl Load for CountingVec {
    fn len(&self) -> usize {
        self.data.len()
    }

    fn load(&self, index: usize) -> f32 {
        self.loads.set(self.loads.get() + 1);
        self.data[index]
    }
}

impl Store for CountingVec {
    fn store(&mut self, index: usize, value: f32) {
        self.stores += 1;
        self.data[index] = value;
    }
}
