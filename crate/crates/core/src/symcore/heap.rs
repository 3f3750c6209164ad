//! Abstract heap shared by the forward and backward engines.
//!
//! Addresses are block ids, not numbers; storage overlap is modeled by the
//! size-compatible reuse relation: a new block may be placed over a freed
//! block whose storage is at least as large and not already taken by an
//! earlier reuse.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BlockId(pub u32);

impl core::fmt::Display for BlockId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "b{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockStatus {
    Allocated,
    Freed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Placement {
    Fresh,
    ReuseOf(BlockId),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockInfo {
    pub record: String,
    pub status: BlockStatus,
    pub size: u32,
    pub placement: Placement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HeapFault {
    UseAfterFree,
    TypeConfusedUseAfterFree,
    DoubleFree,
    InvalidFree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AllocMode {
    FreshOnly,
    AlsoReuse,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HeapState {
    pub blocks: BTreeMap<BlockId, BlockInfo>,
    next: u32,
}

impl HeapState {
    pub fn new() -> Self {
        HeapState::default()
    }

    /// Creates block ids starting at `base`; conquer uses this to keep ids
    /// globally unique across spliced summaries.
    pub fn with_base(base: u32) -> Self {
        HeapState { blocks: BTreeMap::new(), next: base }
    }

    pub fn get(&self, b: BlockId) -> Option<&BlockInfo> {
        self.blocks.get(&b)
    }

    /// The block whose storage sits over `b`, if any.
    fn reused_by(&self, b: BlockId) -> Option<BlockId> {
        self.blocks
            .iter()
            .find(|(_, info)| info.placement == Placement::ReuseOf(b))
            .map(|(id, _)| *id)
    }

    /// Freed blocks whose storage can hold `size` bytes and is not yet
    /// re-occupied, ascending by id.
    pub fn reuse_candidates(&self, size: u32) -> Vec<BlockId> {
        self.blocks
            .iter()
            .filter(|(id, info)| {
                info.status == BlockStatus::Freed
                    && info.size >= size
                    && self.reused_by(**id).is_none()
            })
            .map(|(id, _)| *id)
            .collect()
    }

    /// All placements for a new block of `record`: a fresh block always, and
    /// with [`AllocMode::AlsoReuse`] one successor per reusable freed block.
    pub fn alloc(&self, record: &str, size: u32, mode: AllocMode) -> Vec<(HeapState, BlockId)> {
        let id = BlockId(self.next);
        let mut out = Vec::new();

        let mut fresh = self.clone();
        fresh.next += 1;
        fresh.blocks.insert(
            id,
            BlockInfo {
                record: record.into(),
                status: BlockStatus::Allocated,
                size,
                placement: Placement::Fresh,
            },
        );
        out.push((fresh, id));

        if mode == AllocMode::AlsoReuse {
            for victim in self.reuse_candidates(size) {
                let mut h = self.clone();
                h.next += 1;
                h.blocks.insert(
                    id,
                    BlockInfo {
                        record: record.into(),
                        status: BlockStatus::Allocated,
                        size,
                        placement: Placement::ReuseOf(victim),
                    },
                );
                out.push((h, id));
            }
        }
        out
    }

    /// Frees `b`. Faults are data: they become findings, not errors.
    pub fn free(&self, b: BlockId) -> Result<HeapState, HeapFault> {
        match self.blocks.get(&b) {
            None => Err(HeapFault::InvalidFree),
            Some(info) if info.status == BlockStatus::Freed => Err(HeapFault::DoubleFree),
            Some(_) => {
                let mut h = self.clone();
                h.blocks.get_mut(&b).unwrap().status = BlockStatus::Freed;
                Ok(h)
            }
        }
    }

    /// Checks an access to `b` through a reference typed `expected`.
    ///
    /// A freed block whose storage was re-occupied by a block of a different
    /// record type is the type-confused case; any other freed or unknown
    /// access is a plain use-after-free.
    pub fn access(&self, b: BlockId, expected: &str) -> Result<(), HeapFault> {
        match self.blocks.get(&b) {
            None => Err(HeapFault::UseAfterFree),
            Some(info) if info.status == BlockStatus::Allocated => {
                if info.record == expected {
                    Ok(())
                } else {
                    Err(HeapFault::TypeConfusedUseAfterFree)
                }
            }
            Some(_) => {
                // follow the reuse chain to the current occupant
                let mut cur = b;
                while let Some(next) = self.reused_by(cur) {
                    cur = next;
                }
                match self.blocks.get(&cur) {
                    Some(occ)
                        if cur != b
                            && occ.status == BlockStatus::Allocated
                            && occ.record != expected =>
                    {
                        Err(HeapFault::TypeConfusedUseAfterFree)
                    }
                    _ => Err(HeapFault::UseAfterFree),
                }
            }
        }
    }

    /// Blocks still allocated; the leak set at path end.
    pub fn leaked(&self) -> Vec<BlockId> {
        self.blocks
            .iter()
            .filter(|(_, info)| info.status == BlockStatus::Allocated)
            .map(|(id, _)| *id)
            .collect()
    }

    pub fn next_id(&self) -> u32 {
        self.next
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alloc1(h: &HeapState, record: &str, size: u32, mode: AllocMode) -> (HeapState, BlockId) {
        h.alloc(record, size, mode).into_iter().next().unwrap()
    }

    #[test]
    fn empty_heap_has_single_fresh_successor() {
        let h = HeapState::new();
        let succ = h.alloc("Node", 12, AllocMode::AlsoReuse);
        assert_eq!(succ.len(), 1);
        assert_eq!(succ[0].0.get(succ[0].1).unwrap().placement, Placement::Fresh);
    }

    #[test]
    fn reuse_respects_size() {
        let h = HeapState::new();
        let (h, b0) = alloc1(&h, "Node", 12, AllocMode::FreshOnly);
        let h = h.free(b0).unwrap();
        // size 8 fits in the freed 12-byte block: fresh + reuse
        let succ = h.alloc("Other", 8, AllocMode::AlsoReuse);
        assert_eq!(succ.len(), 2);
        assert_eq!(succ[1].0.get(succ[1].1).unwrap().placement, Placement::ReuseOf(b0));
        // size 16 does not fit: fresh only
        let succ = h.alloc("Big", 16, AllocMode::AlsoReuse);
        assert_eq!(succ.len(), 1);
    }

    #[test]
    fn small_freed_block_is_not_reused() {
        let h = HeapState::new();
        let (h, b0) = alloc1(&h, "Tiny", 4, AllocMode::FreshOnly);
        let h = h.free(b0).unwrap();
        let succ = h.alloc("Node", 12, AllocMode::AlsoReuse);
        assert_eq!(succ.len(), 1);
        assert_eq!(succ[0].0.get(succ[0].1).unwrap().placement, Placement::Fresh);
    }

    #[test]
    fn double_and_invalid_free() {
        let h = HeapState::new();
        let (h, b0) = alloc1(&h, "Node", 12, AllocMode::FreshOnly);
        let h = h.free(b0).unwrap();
        assert_eq!(h.free(b0), Err(HeapFault::DoubleFree));
        assert_eq!(h.free(BlockId(99)), Err(HeapFault::InvalidFree));
    }

    #[test]
    fn access_faults() {
        let h = HeapState::new();
        let (h, node) = alloc1(&h, "Node", 12, AllocMode::FreshOnly);
        assert_eq!(h.access(node, "Node"), Ok(()));

        let freed = h.free(node).unwrap();
        assert_eq!(freed.access(node, "Node"), Err(HeapFault::UseAfterFree));

        // reallocate as Other over the freed Node; stale Node access confuses types
        let (reused, _) = freed
            .alloc("Other", 8, AllocMode::AlsoReuse)
            .into_iter()
            .find(|(h2, id)| h2.get(*id).unwrap().placement == Placement::ReuseOf(node))
            .unwrap();
        assert_eq!(
            reused.access(node, "Node"),
            Err(HeapFault::TypeConfusedUseAfterFree)
        );
    }

    #[test]
    fn same_type_reuse_is_plain_uaf() {
        let h = HeapState::new();
        let (h, b0) = alloc1(&h, "Node", 12, AllocMode::FreshOnly);
        let h = h.free(b0).unwrap();
        let (h, _) = h
            .alloc("Node", 12, AllocMode::AlsoReuse)
            .into_iter()
            .find(|(h2, id)| h2.get(*id).unwrap().placement == Placement::ReuseOf(b0))
            .unwrap();
        assert_eq!(h.access(b0, "Node"), Err(HeapFault::UseAfterFree));
    }

    #[test]
    fn a_reused_block_is_not_reused_twice() {
        let h = HeapState::new();
        let (h, b0) = alloc1(&h, "Node", 12, AllocMode::FreshOnly);
        let h = h.free(b0).unwrap();
        let (h, _b1) = h
            .alloc("Other", 8, AllocMode::AlsoReuse)
            .into_iter()
            .find(|(h2, id)| h2.get(*id).unwrap().placement == Placement::ReuseOf(b0))
            .unwrap();
        // b0's storage is taken; only fresh placement remains
        let succ = h.alloc("Other", 8, AllocMode::AlsoReuse);
        assert_eq!(succ.len(), 1);
    }
}
