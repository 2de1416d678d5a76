//! Shared memo tables keyed on canonical keys.
//!
//! Rim graphs recur constantly during recognition, so every decision that depends
//! only on the isomorphism class of a graph is cached here. The tables are guarded
//! by mutexes and cleared wholesale when they reach the configured capacity.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Mutex, OnceLock};

use crate::canon::CanonicalKey;

pub const DEFAULT_CAPACITY: usize = 1 << 20;

pub struct Memo {
    contractible: Table<CanonicalKey, bool>,
    surface: Table<CanonicalKey, Option<usize>>,
    sphere: Table<(CanonicalKey, usize), bool>,
    capacity: AtomicUsize,
}

struct Table<K, V>(Mutex<HashMap<K, V>>);

impl<K: Hash + Eq, V: Clone> Table<K, V> {
    fn new() -> Self {
        Table(Mutex::new(HashMap::new()))
    }

    fn get(&self, k: &K) -> Option<V> {
        self.0.lock().unwrap().get(k).cloned()
    }

    fn put(&self, k: K, v: V, cap: usize) {
        let mut t = self.0.lock().unwrap();
        if t.len() >= cap {
            t.clear();
        }
        t.insert(k, v);
    }

    fn len(&self) -> usize {
        self.0.lock().unwrap().len()
    }

    fn clear(&self) {
        self.0.lock().unwrap().clear();
    }
}

impl Memo {
    pub fn new(capacity: usize) -> Self {
        Memo {
            contractible: Table::new(),
            surface: Table::new(),
            sphere: Table::new(),
            capacity: AtomicUsize::new(capacity.max(1)),
        }
    }

    /// The process-wide table used by the free functions of this crate.
    pub fn global() -> &'static Memo {
        static GLOBAL: OnceLock<Memo> = OnceLock::new();
        GLOBAL.get_or_init(|| Memo::new(DEFAULT_CAPACITY))
    }

    /// Caps each table at `capacity` entries.
    pub fn set_capacity(&self, capacity: usize) {
        self.capacity.store(capacity.max(1), Ordering::Relaxed);
    }

    pub fn capacity(&self) -> usize {
        self.capacity.load(Ordering::Relaxed)
    }

    pub fn len(&self) -> usize {
        self.contractible.len() + self.surface.len() + self.sphere.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.contractible.clear();
        self.surface.clear();
        self.sphere.clear();
    }

    pub(crate) fn contractible(&self, k: &CanonicalKey) -> Option<bool> {
        self.contractible.get(k)
    }

    pub(crate) fn set_contractible(&self, k: CanonicalKey, v: bool) {
        self.contractible.put(k, v, self.capacity());
    }

    pub(crate) fn surface(&self, k: &CanonicalKey) -> Option<Option<usize>> {
        self.surface.get(k)
    }

    pub(crate) fn set_surface(&self, k: CanonicalKey, v: Option<usize>) {
        self.surface.put(k, v, self.capacity());
    }

    pub(crate) fn sphere(&self, k: &CanonicalKey, n: usize) -> Option<bool> {
        self.sphere.get(&(k.clone(), n))
    }

    pub(crate) fn set_sphere(&self, k: CanonicalKey, n: usize, v: bool) {
        self.sphere.put((k, n), v, self.capacity());
    }
}
