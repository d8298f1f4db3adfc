use serde::{Deserialize, Serialize};

use super::ids::{ListId, PoolId, PrefRank};

/// One entry of a per-list preference view: position within that list's
/// sub-sequence, position in the joint list, and the pool itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViewEntry {
    pub rank_in_list: u32,
    pub overall_rank: PrefRank,
    pub pool: PoolId,
}

/// A candidate's joint preferences split by governing merit list.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PerListView {
    pub lists: Vec<Vec<ViewEntry>>,
}

impl PerListView {
    pub fn list(&self, list: ListId) -> &[ViewEntry] {
        &self.lists[list.index()]
    }

    /// Merges the views back into joint order.
    pub fn merged(&self) -> Vec<PoolId> {
        let mut all: Vec<ViewEntry> = self.lists.iter().flatten().copied().collect();
        all.sort_unstable_by_key(|e| e.overall_rank);
        all.into_iter().map(|e| e.pool).collect()
    }
}

/// Splits `prefs` (joint order) into one view per list.
pub fn build_per_list_views(
    prefs: &[PoolId],
    num_lists: usize,
    governing_list: impl Fn(PoolId) -> ListId,
) -> PerListView {
    let mut lists: Vec<Vec<ViewEntry>> = vec![Vec::new(); num_lists];
    for (i, &pool) in prefs.iter().enumerate() {
        let view = &mut lists[governing_list(pool).index()];
        view.push(ViewEntry {
            rank_in_list: view.len() as u32 + 1,
            overall_rank: PrefRank(i as u32 + 1),
            pool,
        });
    }
    PerListView { lists }
}

/// Compressed rows of variable-length slices indexed by a dense id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Csr<T> {
    offsets: Vec<usize>,
    data: Vec<T>,
}

impl<T> Default for Csr<T> {
    fn default() -> Self {
        Csr {
            offsets: vec![0],
            data: Vec::new(),
        }
    }
}

impl<T> Csr<T> {
    pub fn with_capacity(rows: usize, entries: usize) -> Self {
        let mut offsets = Vec::with_capacity(rows + 1);
        offsets.push(0);
        Csr {
            offsets,
            data: Vec::with_capacity(entries),
        }
    }

    pub fn push_row(&mut self, row: impl IntoIterator<Item = T>) {
        self.data.extend(row);
        self.offsets.push(self.data.len());
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn rows(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn total(&self) -> usize {
        self.data.len()
    }
}
