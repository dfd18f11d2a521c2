#pragma once

#ifdef __linux__
#include <sys/mman.h>
#endif

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

namespace evoflow {

namespace detail {

/// Index-addressed object pool with stable addresses. Chunks double from
/// kFirstSize nodes up to kChunkSize and stay at that size afterwards, so
/// small pools stay small and growing never moves existing nodes. Chunks of
/// 2 MiB or more are huge-page aligned and advised as such on Linux: random
/// leaf access in a large tree is otherwise dominated by TLB misses.
template <class T>
class ChunkedPool {
  static_assert(std::is_trivially_copyable_v<T> && std::is_trivially_destructible_v<T>);

 public:
  static constexpr std::uint32_t kFirstShift = 2;
  static constexpr std::uint32_t kChunkShift = 14;
  static constexpr std::uint32_t kFirstSize = 1u << kFirstShift;
  static constexpr std::uint32_t kChunkSize = 1u << kChunkShift;
  // Geometric chunks 0..kGeometric-1 hold kFirstSize * (2^kGeometric - 1) nodes.
  static constexpr std::uint32_t kGeometric = kChunkShift - kFirstShift + 1;
  static constexpr std::uint32_t kGeometricNodes = kFirstSize * ((1u << kGeometric) - 1);

  ChunkedPool() = default;
  ChunkedPool(ChunkedPool&&) noexcept = default;
  ChunkedPool& operator=(ChunkedPool&&) noexcept = default;
  ChunkedPool(const ChunkedPool& other) : used_(other.used_), free_(other.free_) {
    chunks_.reserve(other.chunks_.size());
    for (std::size_t k = 0; k < other.chunks_.size(); ++k) {
      const std::uint32_t n = chunk_size(static_cast<std::uint32_t>(k));
      auto copy = new_chunk(n);
      std::memcpy(copy.get(), other.chunks_[k].get(), std::size_t{n} * sizeof(T));
      chunks_.push_back(std::move(copy));
    }
  }
  ChunkedPool& operator=(const ChunkedPool& other) {
    if (this != &other) *this = ChunkedPool(other);
    return *this;
  }

  std::uint32_t allocate() {
    if (!free_.empty()) {
      const std::uint32_t index = free_.back();
      free_.pop_back();
      ::new (static_cast<void*>(&(*this)[index])) T;
      return index;
    }
    if (used_ == capacity()) {
      chunks_.push_back(new_chunk(chunk_size(static_cast<std::uint32_t>(chunks_.size()))));
    }
    ::new (static_cast<void*>(&(*this)[used_])) T;
    return used_++;
  }
  void release(std::uint32_t index) { free_.push_back(index); }
  /// Drops every node but keeps the first chunk for reuse.
  void clear() {
    if (chunks_.size() > 1) chunks_.resize(1);
    free_.clear();
    used_ = 0;
  }

  T& operator[](std::uint32_t index) noexcept {
    const auto [chunk, offset] = locate(index);
    return chunks_[chunk][offset];
  }
  const T& operator[](std::uint32_t index) const noexcept {
    const auto [chunk, offset] = locate(index);
    return chunks_[chunk][offset];
  }

  std::size_t live() const noexcept { return used_ - free_.size(); }
  std::size_t reserved_bytes() const noexcept {
    return capacity() * sizeof(T) + free_.capacity() * sizeof(std::uint32_t);
  }

 private:
  static constexpr std::size_t kHugePage = std::size_t{2} << 20;

  struct FreeChunk {
    void operator()(T* p) const noexcept { std::free(p); }
  };
  using Chunk = std::unique_ptr<T[], FreeChunk>;

  static Chunk new_chunk(std::uint32_t n) {
    const std::size_t bytes = std::size_t{n} * sizeof(T);
    void* raw = nullptr;
    if (bytes >= kHugePage) {
      const std::size_t rounded = (bytes + kHugePage - 1) / kHugePage * kHugePage;
      raw = std::aligned_alloc(kHugePage, rounded);
#ifdef __linux__
      if (raw) ::madvise(raw, rounded, MADV_HUGEPAGE);
#endif
    } else {
      raw = std::malloc(bytes);
    }
    if (!raw) throw std::bad_alloc();
    // Nodes are constructed by allocate(); untouched pages stay unmapped.
    return Chunk(static_cast<T*>(raw));
  }

  static constexpr std::uint32_t chunk_size(std::uint32_t k) noexcept {
    return k < kGeometric ? kFirstSize << k : kChunkSize;
  }
  std::size_t capacity() const noexcept {
    const auto k = static_cast<std::uint32_t>(chunks_.size());
    if (k <= kGeometric) return kFirstSize * ((std::size_t{1} << k) - 1);
    return kGeometricNodes + std::size_t{k - kGeometric} * kChunkSize;
  }
  static std::pair<std::uint32_t, std::uint32_t> locate(std::uint32_t index) noexcept {
    if (index >= kGeometricNodes) [[likely]] {
      const std::uint32_t rest = index - kGeometricNodes;
      return {kGeometric + (rest >> kChunkShift), rest & (kChunkSize - 1)};
    }
    const std::uint32_t k = static_cast<std::uint32_t>(std::bit_width((index >> kFirstShift) + 1)) - 1;
    return {k, index - kFirstSize * ((1u << k) - 1)};
  }

  std::vector<Chunk> chunks_;
  std::uint32_t used_ = 0;
  std::vector<std::uint32_t> free_;
};

}  // namespace detail

/// Ordered multiset of fitness values: a B+tree whose inner nodes carry
/// subtree counts.
///
/// insert, remove_min and the rank queries all cost O(log size). Leaves are
/// unordered (insert appends, splits partition around the median) except the
/// leftmost, which remove_min pops from and which is kept sorted. Among equal
/// values age order is kept (a new value goes after its equals), so
/// remove_min takes the oldest of tied minima. NaN is rejected.
///
/// Only the minimum is ever erased. Nodes drained by remove_min therefore
/// lie on the leftmost spine and every other node stays at least half full,
/// which keeps the height logarithmic without merge/borrow rebalancing.
class Population {
 public:
  Population();

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  std::optional<double> min() const noexcept;

  void insert(double fitness);
  /// Removes and returns the smallest value. Throws UsageError when empty.
  double remove_min();

  /// Number of stored values < x.
  std::size_t count_less(double x) const noexcept;
  /// Number of stored values <= x.
  std::size_t count_less_equal(double x) const noexcept;
  /// Number of stored values strictly inside (a,b). Throws ParameterError if a > b.
  std::size_t count_in(double a, double b) const;
  std::size_t multiplicity(double x) const noexcept {
    return count_less_equal(x) - count_less(x);
  }

  /// Visits values in ascending order (ties oldest first).
  template <class Fn>
  void for_each(Fn&& fn) const {
    visit(root_, height_, fn);
  }
  std::vector<double> values() const;

  void clear();
  std::size_t height() const noexcept { return height_; }
  std::size_t memory_bytes() const noexcept;

  /// Verifies ordering, subtree counts, separators and node occupancy.
  /// Throws UsageError describing the first violation.
  void check_invariants() const;

  friend bool operator==(const Population& a, const Population& b);

 private:
  static constexpr std::uint32_t kLeafCap = 256;
  static constexpr std::uint32_t kInnerCap = 64;
  static constexpr std::uint32_t kMaxHeight = 24;

  struct Leaf {
    std::uint32_t size = 0;
    std::array<double, kLeafCap> keys;
  };

  // first[i] (i >= 1) bounds child i from below and child i-1 from above;
  // first[0] is stale and never read.
  struct Inner {
    std::uint32_t size = 0;
    std::array<double, kInnerCap> first;
    std::array<std::uint64_t, kInnerCap> count;
    std::array<std::uint32_t, kInnerCap> child;
  };

  template <class Fn>
  void visit(std::uint32_t node, std::uint32_t level, Fn& fn) const {
    if (level == 0) {
      // Leaves are unordered; among equal keys position order is age order,
      // which stable_sort keeps.
      Leaf sorted = leaves_[node];
      std::stable_sort(sorted.keys.begin(), sorted.keys.begin() + sorted.size);
      for (std::uint32_t i = 0; i < sorted.size; ++i) fn(sorted.keys[i]);
      return;
    }
    const Inner& inner = inners_[node];
    for (std::uint32_t i = 0; i < inner.size; ++i) visit(inner.child[i], level - 1, fn);
  }

  template <bool Inclusive>
  std::size_t rank(double x) const noexcept;

  std::uint64_t check_subtree(std::uint32_t node, std::uint32_t level, bool leftmost,
                              double lo, double hi, double& prev, bool& have_prev) const;

  detail::ChunkedPool<Leaf> leaves_;
  detail::ChunkedPool<Inner> inners_;
  std::uint32_t root_ = 0;
  std::uint32_t height_ = 0;  // 0: root_ is a leaf
  std::size_t size_ = 0;
};

}  // namespace evoflow
