#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <unordered_map>
#include <utility>
#include <vector>

#include "voxplore/grid.h"

namespace voxplore {

/// Sparse voxel grid made of dense cubic blocks that are allocated on first
/// write. Reads of unallocated voxels return the grid's `unknown` payload.
///
/// Const member functions never mutate, so any number of readers may share a
/// grid as long as no writer runs concurrently. Hot loops should go through a
/// Reader, which caches the most recently used block.
template <typename Payload>
class BlockHashGrid {
 public:
  struct Block {
    VoxelIndex key;
    std::vector<Payload> voxels;
  };

  explicit BlockHashGrid(GridConfig config = {}, Payload unknown = Payload{})
      : config_(config), unknown_(std::move(unknown)) {
    config_.validate();
    shift_ = 0;
    while ((1 << shift_) < config_.block_side) ++shift_;
    mask_ = config_.block_side - 1;
    block_volume_ = static_cast<size_t>(config_.block_side) * config_.block_side *
                    config_.block_side;
  }

  BlockHashGrid(const BlockHashGrid& other) { *this = other; }
  BlockHashGrid& operator=(const BlockHashGrid& other) {
    if (this == &other) return *this;
    config_ = other.config_;
    unknown_ = other.unknown_;
    shift_ = other.shift_;
    mask_ = other.mask_;
    block_volume_ = other.block_volume_;
    blocks_.clear();
    for (const auto& [key, block] : other.blocks_) {
      blocks_.emplace(key, std::make_unique<Block>(*block));
    }
    return *this;
  }
  BlockHashGrid(BlockHashGrid&&) noexcept = default;
  BlockHashGrid& operator=(BlockHashGrid&&) noexcept = default;

  const GridConfig& config() const { return config_; }
  const Payload& unknown() const { return unknown_; }

  VoxelIndex blockKey(const VoxelIndex& v) const {
    return {v.x >> shift_, v.y >> shift_, v.z >> shift_};
  }
  size_t linearOffset(const VoxelIndex& v) const {
    const auto side = static_cast<size_t>(config_.block_side);
    return static_cast<size_t>(v.x & mask_) +
           side * (static_cast<size_t>(v.y & mask_) + side * static_cast<size_t>(v.z & mask_));
  }

  const Payload& get(const VoxelIndex& v) const {
    const Block* block = findBlock(blockKey(v));
    return block ? block->voxels[linearOffset(v)] : unknown_;
  }

  const Payload* find(const VoxelIndex& v) const {
    const Block* block = findBlock(blockKey(v));
    return block ? &block->voxels[linearOffset(v)] : nullptr;
  }

  Payload* find(const VoxelIndex& v) {
    Block* block = findBlock(blockKey(v));
    return block ? &block->voxels[linearOffset(v)] : nullptr;
  }

  /// Mutable access; allocates the enclosing block when needed.
  Payload& at(const VoxelIndex& v) { return allocateBlock(blockKey(v)).voxels[linearOffset(v)]; }

  void set(const VoxelIndex& v, const Payload& value) { at(v) = value; }

  bool isAllocated(const VoxelIndex& v) const { return findBlock(blockKey(v)) != nullptr; }

  size_t numBlocks() const { return blocks_.size(); }
  size_t allocatedVoxels() const { return blocks_.size() * block_volume_; }
  void clear() { blocks_.clear(); }

  /// Visits every voxel of every allocated block: fn(const VoxelIndex&, const Payload&).
  template <typename Fn>
  void forEachVoxel(Fn&& fn) const {
    for (const auto& [key, block] : blocks_) visitBlock(*block, fn);
  }

  /// Same as forEachVoxel but with blocks visited in sorted key order, for
  /// output that has to be byte-stable.
  template <typename Fn>
  void forEachVoxelSorted(Fn&& fn) const {
    std::vector<const Block*> sorted;
    sorted.reserve(blocks_.size());
    for (const auto& [key, block] : blocks_) sorted.push_back(block.get());
    std::sort(sorted.begin(), sorted.end(),
              [](const Block* a, const Block* b) { return a->key < b->key; });
    for (const Block* block : sorted) visitBlock(*block, fn);
  }

  /// Read-only accessor with a one-entry block cache.
  class Reader {
   public:
    explicit Reader(const BlockHashGrid& grid) : grid_(&grid) {}

    const Payload& get(const VoxelIndex& v) {
      const VoxelIndex key = grid_->blockKey(v);
      if (!has_cached_ || key != cached_key_) {
        cached_block_ = grid_->findBlock(key);
        cached_key_ = key;
        has_cached_ = true;
      }
      return cached_block_ ? cached_block_->voxels[grid_->linearOffset(v)] : grid_->unknown_;
    }

   private:
    const BlockHashGrid* grid_;
    const Block* cached_block_ = nullptr;
    VoxelIndex cached_key_;
    bool has_cached_ = false;
  };

  /// Mutable accessor with a one-entry block cache; allocates on access.
  class Writer {
   public:
    explicit Writer(BlockHashGrid& grid) : grid_(&grid) {}

    Payload& at(const VoxelIndex& v) {
      const VoxelIndex key = grid_->blockKey(v);
      if (!cached_block_ || key != cached_key_) {
        cached_block_ = &grid_->allocateBlock(key);
        cached_key_ = key;
      }
      return cached_block_->voxels[grid_->linearOffset(v)];
    }

   private:
    BlockHashGrid* grid_;
    Block* cached_block_ = nullptr;
    VoxelIndex cached_key_;
  };

 private:
  template <typename Fn>
  void visitBlock(const Block& block, Fn& fn) const {
    const int64_t side = config_.block_side;
    const VoxelIndex base{block.key.x * side, block.key.y * side, block.key.z * side};
    size_t offset = 0;
    for (int64_t k = 0; k < side; ++k) {
      for (int64_t j = 0; j < side; ++j) {
        for (int64_t i = 0; i < side; ++i, ++offset) {
          fn(VoxelIndex{base.x + i, base.y + j, base.z + k}, block.voxels[offset]);
        }
      }
    }
  }

  const Block* findBlock(const VoxelIndex& key) const {
    auto it = blocks_.find(key);
    return it == blocks_.end() ? nullptr : it->second.get();
  }
  Block* findBlock(const VoxelIndex& key) {
    auto it = blocks_.find(key);
    return it == blocks_.end() ? nullptr : it->second.get();
  }
  Block& allocateBlock(const VoxelIndex& key) {
    auto& slot = blocks_[key];
    if (!slot) {
      slot = std::make_unique<Block>();
      slot->key = key;
      slot->voxels.assign(block_volume_, unknown_);
    }
    return *slot;
  }

  GridConfig config_;
  Payload unknown_;
  int shift_ = 0;
  int64_t mask_ = 0;
  size_t block_volume_ = 0;
  std::unordered_map<VoxelIndex, std::unique_ptr<Block>, VoxelIndexHash> blocks_;
};

}  // namespace voxplore
