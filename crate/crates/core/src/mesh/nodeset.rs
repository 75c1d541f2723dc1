use serde::{Deserialize, Serialize};

/// A subset of the node ids `0..n`, iterated in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NodeSet {
    mask: Vec<bool>,
}

impl NodeSet {
    pub fn empty(n: usize) -> Self {
        NodeSet {
            mask: vec![false; n],
        }
    }

    pub fn full(n: usize) -> Self {
        NodeSet {
            mask: vec![true; n],
        }
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        NodeSet { mask }
    }

    /// Ids out of range are ignored.
    pub fn from_ids(n: usize, ids: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(n);
        for i in ids {
            if i < n {
                set.mask[i] = true;
            }
        }
        set
    }

    /// Size of the ground set.
    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask.get(i).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, i: usize) -> bool {
        let was = self.mask[i];
        self.mask[i] = true;
        !was
    }

    pub fn remove(&mut self, i: usize) -> bool {
        let was = self.mask[i];
        self.mask[i] = false;
        was
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
    }

    pub fn complement(&self) -> NodeSet {
        NodeSet {
            mask: self.mask.iter().map(|b| !b).collect(),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn as_mask(&self) -> &[bool] {
        &self.mask
    }
}
