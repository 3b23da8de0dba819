//! Execution strategy for the data-parallel passes (message completion over
//! all pairs, metric evaluation, select-list scoring).
//!
//! With the `parallel` feature (default) the work is spread over the rayon
//! pool; without it only [`Execution::Sequential`] exists.

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Execution {
    /// Order-preserving map over a slice.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Execution::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
        }
    }

    /// Small inputs are not worth a fork-join.
    pub(crate) fn for_len(self, len: usize, threshold: usize) -> Self {
        if len < threshold {
            Execution::Sequential
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let xs: Vec<u32> = (0..1000).collect();
        let seq = Execution::Sequential.map(&xs, |x| x * 2);
        let def = Execution::default().map(&xs, |x| x * 2);
        assert_eq!(seq, def);
        assert_eq!(seq[999], 1998);
    }
}
