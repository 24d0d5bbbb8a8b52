use std::sync::RwLock;

type Step<T> = Box<dyn Fn(&[T]) -> T + Send + Sync>;

/// Append-only table where entry `k` is computed from entries `0..k`.
///
/// Reads take a shared lock; a miss takes the write lock and extends the
/// table up to the requested index.
pub struct Memo<T> {
    values: RwLock<Vec<T>>,
    step: Step<T>,
}

impl<T: Clone> Memo<T> {
    pub fn new(step: impl Fn(&[T]) -> T + Send + Sync + 'static) -> Self {
        Self {
            values: RwLock::new(Vec::new()),
            step: Box::new(step),
        }
    }

    pub fn get(&self, k: usize) -> T {
        {
            let read = self.values.read().unwrap_or_else(|e| e.into_inner());
            if k < read.len() {
                return read[k].clone();
            }
        }
        let mut write = self.values.write().unwrap_or_else(|e| e.into_inner());
        while write.len() <= k {
            let next = (self.step)(&write);
            write.push(next);
        }
        write[k].clone()
    }

    pub fn len(&self) -> usize {
        self.values.read().unwrap_or_else(|e| e.into_inner()).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
