use serde::{Deserialize, Serialize};

use super::VarId;
use crate::error::FormulaError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BlockId(pub usize);

/// An ordered partition of `[0, n)` into nonempty blocks, each with a fixed
/// internal variable order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockStructure {
    n: usize,
    blocks: Vec<Vec<VarId>>,
    /// For each variable, its block and position within that block.
    location: Vec<(BlockId, usize)>,
}

impl BlockStructure {
    pub fn new(n: usize, blocks: Vec<Vec<VarId>>) -> Result<Self, FormulaError> {
        let mut location = vec![None; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(FormulaError::BadBlocks(format!("block {b} is empty")));
            }
            for (pos, v) in block.iter().enumerate() {
                if v.0 >= n {
                    return Err(FormulaError::VarOutOfRange { var: v.0, n });
                }
                if location[v.0].is_some() {
                    return Err(FormulaError::BadBlocks(format!(
                        "variable {} appears in more than one block",
                        v.0
                    )));
                }
                location[v.0] = Some((BlockId(b), pos));
            }
        }
        let location = location
            .into_iter()
            .enumerate()
            .map(|(v, loc)| {
                loc.ok_or_else(|| FormulaError::BadBlocks(format!("variable {v} is in no block")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BlockStructure {
            n,
            blocks,
            location,
        })
    }

    /// Every variable in its own block.
    pub fn singletons(n: usize) -> Self {
        BlockStructure::new(n, (0..n).map(|v| vec![VarId(v)]).collect())
            .expect("singletons partition")
    }

    /// Consecutive blocks of the given sizes, in index order.
    pub fn consecutive(sizes: &[usize]) -> Result<Self, FormulaError> {
        let mut next = 0;
        let blocks = sizes
            .iter()
            .map(|&k| {
                let b = (next..next + k).map(VarId).collect();
                next += k;
                b
            })
            .collect();
        BlockStructure::new(next, blocks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block(&self, b: BlockId) -> &[VarId] {
        &self.blocks[b.0]
    }

    pub fn blocks(&self) -> impl Iterator<Item = (BlockId, &[VarId])> + '_ {
        self.blocks
            .iter()
            .enumerate()
            .map(|(i, b)| (BlockId(i), b.as_slice()))
    }

    pub fn block_of(&self, v: VarId) -> BlockId {
        self.location[v.0].0
    }

    pub fn position_in_block(&self, v: VarId) -> usize {
        self.location[v.0].1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_checks() {
        assert!(BlockStructure::new(2, vec![vec![VarId(0)], vec![VarId(1)]]).is_ok());
        assert!(BlockStructure::new(2, vec![vec![VarId(0)]]).is_err());
        assert!(BlockStructure::new(2, vec![vec![VarId(0), VarId(1)], vec![VarId(1)]]).is_err());
        assert!(BlockStructure::new(2, vec![vec![VarId(0), VarId(1)], vec![]]).is_err());
    }

    #[test]
    fn internal_order_is_kept() {
        let b = BlockStructure::new(3, vec![vec![VarId(2), VarId(0)], vec![VarId(1)]]).unwrap();
        assert_eq!(b.block_of(VarId(0)), BlockId(0));
        assert_eq!(b.position_in_block(VarId(0)), 1);
        assert_eq!(b.position_in_block(VarId(2)), 0);
        assert_eq!(b.block(BlockId(0)), &[VarId(2), VarId(0)]);
    }
}
