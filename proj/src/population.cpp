#include "evoflow/population.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>

#include "evoflow/errors.hpp"
#include "evoflow/kernels.hpp"

namespace evoflow {

namespace {

template <class T, std::size_t N>
void insert_at(std::array<T, N>& a, std::uint32_t size, std::uint32_t pos, T value) {
  std::copy_backward(a.begin() + pos, a.begin() + size, a.begin() + size + 1);
  a[pos] = value;
}

template <class T, std::size_t N>
void erase_front(std::array<T, N>& a, std::uint32_t size) {
  std::copy(a.begin() + 1, a.begin() + size, a.begin());
}

}  // namespace

Population::Population() { root_ = leaves_.allocate(); }

void Population::clear() {
  leaves_.clear();
  inners_.clear();
  root_ = leaves_.allocate();
  leaves_[root_].size = 0;
  height_ = 0;
  size_ = 0;
}

std::optional<double> Population::min() const noexcept {
  if (size_ == 0) return std::nullopt;
  std::uint32_t node = root_;
  for (std::uint32_t level = height_; level > 0; --level) node = inners_[node].child[0];
  const Leaf& leaf = leaves_[node];
  return leaf.keys[0];
}

void Population::insert(double fitness) {
  if (std::isnan(fitness)) throw ParameterError("cannot insert NaN fitness");

  struct Step {
    std::uint32_t node;
    std::uint32_t slot;
  };
  std::array<Step, kMaxHeight> path;

  std::uint32_t node = root_;
  // The parent's count of a leaf is its size, so the append below only
  // stores into the leaf and never waits on loading it.
  std::uint64_t leaf_size = height_ == 0 ? leaves_[root_].size : 0;
  bool leftmost = true;
  for (std::uint32_t level = height_; level > 0; --level) {
    Inner& in = inners_[node];
    const auto slot = static_cast<std::uint32_t>(
        kernels::count_less_equal(std::span(in.first.data() + 1, in.size - 1), fitness));
    leaf_size = in.count[slot]++;
    leftmost = leftmost && slot == 0;
    path[level - 1] = {node, slot};
    node = in.child[slot];
  }
  ++size_;

  if (leaf_size < kLeafCap) {
    Leaf& leaf = leaves_[node];
    const auto size = static_cast<std::uint32_t>(leaf_size);
    if (leftmost) {
      const auto at = static_cast<std::uint32_t>(
          kernels::count_less_equal(std::span(leaf.keys.data(), size), fitness));
      insert_at(leaf.keys, size, at, fitness);
    } else {
      leaf.keys[leaf_size] = fitness;
    }
    leaf.size = static_cast<std::uint32_t>(leaf_size + 1);
    return;
  }

  // Leaf split. Pool addresses are stable across allocate().
  const std::uint32_t right = leaves_.allocate();
  Leaf& l = leaves_[node];
  Leaf& r = leaves_[right];
  {
    // The kLeafCap + 1 keys in age order; the lower half by (value, age)
    // stays left, so equal keys straddling the split keep older ones left.
    std::array<double, kLeafCap + 1> all;
    const auto at = leftmost ? static_cast<std::uint32_t>(kernels::count_less_equal(
                                   std::span<const double>(l.keys.data(), kLeafCap), fitness))
                             : kLeafCap;
    std::copy(l.keys.begin(), l.keys.begin() + at, all.begin());
    all[at] = fitness;
    std::copy(l.keys.begin() + at, l.keys.end(), all.begin() + at + 1);
    std::array<double, kLeafCap + 1> scratch = all;
    const std::uint32_t half = (kLeafCap + 1) / 2;
    std::nth_element(scratch.begin(), scratch.begin() + half, scratch.end());
    const double pivot = scratch[half];
    std::uint32_t ties_left = half - static_cast<std::uint32_t>(
        kernels::count_less(std::span<const double>(all.data(), all.size()), pivot));
    l.size = 0;
    r.size = 0;
    for (double v : all) {
      if (v < pivot || (v == pivot && ties_left > 0)) {
        if (v == pivot) --ties_left;
        l.keys[l.size++] = v;
      } else {
        r.keys[r.size++] = v;
      }
    }
  }
  double separator = r.keys[kernels::argmin(std::span(r.keys.data(), r.size))];
  std::uint64_t left_count = l.size;
  std::uint64_t right_count = r.size;
  std::uint32_t new_child = right;

  for (std::uint32_t level = 1; level <= height_; ++level) {
    const Step step = path[level - 1];
    Inner& p = inners_[step.node];
    p.count[step.slot] = left_count;
    const std::uint32_t at = step.slot + 1;
    if (p.size < kInnerCap) {
      insert_at(p.first, p.size, at, separator);
      insert_at(p.count, p.size, at, right_count);
      insert_at(p.child, p.size, at, new_child);
      ++p.size;
      return;
    }
    const std::uint32_t split = inners_.allocate();
    Inner& pr = inners_[split];
    const std::uint32_t half = kInnerCap / 2;
    std::copy(p.first.begin() + half, p.first.end(), pr.first.begin());
    std::copy(p.count.begin() + half, p.count.end(), pr.count.begin());
    std::copy(p.child.begin() + half, p.child.end(), pr.child.begin());
    pr.size = kInnerCap - half;
    p.size = half;
    Inner& target = at <= half ? p : pr;
    const std::uint32_t target_at = at <= half ? at : at - half;
    insert_at(target.first, target.size, target_at, separator);
    insert_at(target.count, target.size, target_at, right_count);
    insert_at(target.child, target.size, target_at, new_child);
    ++target.size;

    separator = pr.first[0];
    left_count = std::accumulate(p.count.begin(), p.count.begin() + p.size, std::uint64_t{0});
    right_count = std::accumulate(pr.count.begin(), pr.count.begin() + pr.size, std::uint64_t{0});
    new_child = split;
  }

  if (height_ + 1 >= kMaxHeight) throw ResourceError("population tree height limit reached");
  const std::uint32_t grown = inners_.allocate();
  Inner& top = inners_[grown];
  top.size = 2;
  top.child[0] = root_;
  top.child[1] = new_child;
  top.count[0] = left_count;
  top.count[1] = right_count;
  top.first[1] = separator;
  root_ = grown;
  ++height_;
}

double Population::remove_min() {
  if (size_ == 0) throw UsageError("remove_min on an empty population");

  std::array<std::uint32_t, kMaxHeight> path;
  std::uint32_t node = root_;
  for (std::uint32_t level = height_; level > 0; --level) {
    Inner& in = inners_[node];
    in.count[0] -= 1;
    path[level - 1] = node;
    node = in.child[0];
  }

  Leaf& leaf = leaves_[node];
  const double smallest = leaf.keys[0];
  erase_front(leaf.keys, leaf.size);
  --leaf.size;
  --size_;

  if (size_ == 0) {
    clear();
    return smallest;
  }
  if (leaf.size > 0 || height_ == 0) return smallest;

  leaves_.release(node);
  for (std::uint32_t level = 1; level <= height_; ++level) {
    const std::uint32_t parent = path[level - 1];
    Inner& p = inners_[parent];
    erase_front(p.first, p.size);
    erase_front(p.count, p.size);
    erase_front(p.child, p.size);
    --p.size;
    if (p.size > 0) break;
    inners_.release(parent);
  }
  while (height_ > 0 && inners_[root_].size == 1) {
    const std::uint32_t old = root_;
    root_ = inners_[old].child[0];
    inners_.release(old);
    --height_;
  }
  node = root_;
  for (std::uint32_t level = height_; level > 0; --level) node = inners_[node].child[0];
  Leaf& front = leaves_[node];
  std::stable_sort(front.keys.begin(), front.keys.begin() + front.size);
  return smallest;
}

template <bool Inclusive>
std::size_t Population::rank(double x) const noexcept {
  std::size_t acc = 0;
  std::uint32_t node = root_;
  for (std::uint32_t level = height_; level > 0; --level) {
    const Inner& in = inners_[node];
    const std::span seps(in.first.data() + 1, in.size - 1);
    const std::size_t slot =
        Inclusive ? kernels::count_less_equal(seps, x) : kernels::count_less(seps, x);
    for (std::size_t i = 0; i < slot; ++i) acc += in.count[i];
    node = in.child[slot];
  }
  const Leaf& leaf = leaves_[node];
  const std::span keys(leaf.keys.data(), leaf.size);
  return acc + (Inclusive ? kernels::count_less_equal(keys, x) : kernels::count_less(keys, x));
}

std::size_t Population::count_less(double x) const noexcept { return rank<false>(x); }

std::size_t Population::count_less_equal(double x) const noexcept { return rank<true>(x); }

std::size_t Population::count_in(double a, double b) const {
  if (a > b) throw ParameterError("count_in requires a <= b");
  if (a == b) return 0;
  const std::size_t below_b = count_less(b);
  const std::size_t upto_a = count_less_equal(a);
  return below_b > upto_a ? below_b - upto_a : 0;
}

std::vector<double> Population::values() const {
  std::vector<double> out;
  out.reserve(size_);
  for_each([&out](double v) { out.push_back(v); });
  return out;
}

std::size_t Population::memory_bytes() const noexcept {
  return leaves_.reserved_bytes() + inners_.reserved_bytes();
}

bool operator==(const Population& a, const Population& b) {
  return a.size_ == b.size_ && a.values() == b.values();
}

std::uint64_t Population::check_subtree(std::uint32_t node, std::uint32_t level, bool leftmost,
                                        double lo, double hi, double& prev,
                                        bool& have_prev) const {
  auto fail = [](const std::string& what) { throw UsageError("population invariant: " + what); };
  if (level == 0) {
    const Leaf& leaf = leaves_[node];
    if (leaf.size > kLeafCap) fail("leaf over capacity");
    if (leaf.size == 0 && size_ > 0) fail("empty leaf in nonempty tree");
    if (!leftmost && leaf.size < kLeafCap / 2) fail("underfull leaf off the left spine");
    if (leaf.size == 0) return 0;
    if (leftmost && !std::is_sorted(leaf.keys.begin(), leaf.keys.begin() + leaf.size)) {
      fail("leftmost leaf out of order");
    }
    double leaf_min = leaf.keys[0];
    double leaf_max = leaf.keys[0];
    for (std::uint32_t i = 0; i < leaf.size; ++i) {
      const double v = leaf.keys[i];
      if (v < lo || v > hi) fail("value outside separator bounds");
      leaf_min = std::min(leaf_min, v);
      leaf_max = std::max(leaf_max, v);
    }
    if (have_prev && leaf_min < prev) fail("leaves out of order");
    prev = leaf_max;
    have_prev = true;
    return leaf.size;
  }
  const Inner& in = inners_[node];
  if (in.size == 0 || in.size > kInnerCap) fail("inner node size out of range");
  if (!leftmost && in.size < kInnerCap / 2) fail("underfull inner node off the left spine");
  std::uint64_t total = 0;
  for (std::uint32_t i = 0; i < in.size; ++i) {
    const double child_lo = i == 0 ? lo : in.first[i];
    const double child_hi = i + 1 < in.size ? in.first[i + 1] : hi;
    const std::uint64_t n =
        check_subtree(in.child[i], level - 1, leftmost && i == 0, child_lo, child_hi, prev,
                      have_prev);
    if (n != in.count[i]) fail("subtree count mismatch");
    total += n;
  }
  return total;
}

void Population::check_invariants() const {
  double prev = 0.0;
  bool have_prev = false;
  const std::uint64_t total =
      check_subtree(root_, height_, true, -INFINITY, INFINITY, prev, have_prev);
  if (total != size_) throw UsageError("population invariant: size mismatch");
  if (height_ > 0 && inners_[root_].size < 2) {
    throw UsageError("population invariant: root with a single child");
  }
}

}  // namespace evoflow
