#include "chaoskit/multi_index.hpp"

#include <cmath>

#include "chaoskit/errors.hpp"

namespace chaoskit {

MultiIndex MultiIndex::unit(int slot) {
  MultiIndex m;
  m.entries_[slot] = 1;
  m.order_ = 1;
  return m;
}

MultiIndex MultiIndex::from_dense(const std::vector<int>& entries) {
  MultiIndex m;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i] > 0) {
      m.entries_[static_cast<int>(i) + 1] = entries[i];
      m.order_ += entries[i];
    }
  }
  return m;
}

int MultiIndex::at(int slot) const {
  auto it = entries_.find(slot);
  return it == entries_.end() ? 0 : it->second;
}

bool MultiIndex::operator<(const MultiIndex& other) const {
  if (order_ != other.order_) return order_ < other.order_;
  // Merge-walk slots in increasing order; larger multiplicity first.
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() && b != other.entries_.end()) {
    if (a->first != b->first) {
      // The index with a non-zero entry at the smaller slot has the larger
      // value there, so it precedes.
      return a->first < b->first;
    }
    if (a->second != b->second) return a->second > b->second;
    ++a;
    ++b;
  }
  return false;  // equal (same order and same entries exhaust together)
}

double factorial(const MultiIndex& alpha) {
  double result = 1.0;
  for (const auto& [slot, mult] : alpha.entries()) {
    if (mult > 170) {
      result *= std::exp(std::lgamma(static_cast<double>(mult) + 1.0));
    } else {
      double f = 1.0;
      for (int j = 2; j <= mult; ++j) f *= j;
      result *= f;
    }
  }
  return result;
}

double log_factorial(const MultiIndex& alpha) {
  double sum = 0.0;
  for (const auto& [slot, mult] : alpha.entries()) {
    sum += std::lgamma(static_cast<double>(mult) + 1.0);
  }
  return sum;
}

MultiIndex add(const MultiIndex& alpha, const MultiIndex& beta) {
  MultiIndex out = alpha;
  for (const auto& [slot, mult] : beta.entries_) out.entries_[slot] += mult;
  out.order_ = alpha.order_ + beta.order_;
  return out;
}

MultiIndex sub_unit(const MultiIndex& alpha, int slot) {
  auto it = alpha.entries_.find(slot);
  if (it == alpha.entries_.end()) throw UnderflowError(slot);
  MultiIndex out = alpha;
  auto oit = out.entries_.find(slot);
  if (oit->second == 1) {
    out.entries_.erase(oit);
  } else {
    --oit->second;
  }
  --out.order_;
  return out;
}

std::vector<int> characteristic_set(const MultiIndex& alpha) {
  std::vector<int> out;
  out.reserve(alpha.order());
  for (const auto& [slot, mult] : alpha.entries()) {
    for (int j = 0; j < mult; ++j) out.push_back(slot);
  }
  return out;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return r;
}

std::uint64_t TruncationSpec::size() const {
  return binomial(max_order + max_dim, max_dim);
}

namespace {

constexpr std::uint64_t kEnumerationLimit = 20'000'000;

// Number of multi-indices of order exactly `n` supported on `slots` slots.
std::uint64_t compositions(int n, int slots) {
  if (slots == 0) return n == 0 ? 1 : 0;
  return binomial(n + slots - 1, slots - 1);
}

void enumerate_grade(int remaining, int slot, int max_dim, std::vector<int>& dense,
                     std::vector<MultiIndex>& out) {
  if (slot == max_dim) {
    dense[slot - 1] = remaining;
    out.push_back(MultiIndex::from_dense(dense));
    dense[slot - 1] = 0;
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    dense[slot - 1] = v;
    enumerate_grade(remaining - v, slot + 1, max_dim, dense, out);
  }
  dense[slot - 1] = 0;
}

}  // namespace

std::vector<MultiIndex> enumerate(const TruncationSpec& spec) {
  const std::uint64_t total = spec.size();
  if (total > kEnumerationLimit) {
    throw TruncationTooLargeError("truncation holds " + std::to_string(total) +
                                  " indices; dense enumeration refused");
  }
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<int> dense(spec.max_dim, 0);
  for (int grade = 0; grade <= spec.max_order; ++grade) {
    enumerate_grade(grade, 1, spec.max_dim, dense, out);
  }
  return out;
}

std::uint64_t rank_of(const MultiIndex& alpha, const TruncationSpec& spec) {
  const int n = alpha.order();
  std::uint64_t rank = 0;
  for (int g = 0; g < n; ++g) rank += compositions(g, spec.max_dim);
  int remaining = n;
  for (int slot = 1; slot <= spec.max_dim && remaining > 0; ++slot) {
    const int v = alpha.at(slot);
    // Indices with a larger entry at this slot precede alpha.
    for (int w = remaining; w > v; --w) rank += compositions(remaining - w, spec.max_dim - slot);
    remaining -= v;
  }
  return rank;
}

MultiIndex unrank(std::uint64_t rank, const TruncationSpec& spec) {
  int grade = 0;
  while (true) {
    const std::uint64_t count = compositions(grade, spec.max_dim);
    if (rank < count) break;
    rank -= count;
    ++grade;
  }
  std::vector<int> dense(spec.max_dim, 0);
  int remaining = grade;
  for (int slot = 1; slot <= spec.max_dim && remaining > 0; ++slot) {
    for (int v = remaining; v >= 0; --v) {
      const std::uint64_t count = compositions(remaining - v, spec.max_dim - slot);
      if (rank < count) {
        dense[slot - 1] = v;
        remaining -= v;
        break;
      }
      rank -= count;
    }
  }
  return MultiIndex::from_dense(dense);
}

}  // namespace chaoskit
