#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace chaoskit {

/// Finitely supported sequence of non-negative integers indexing the chaos
/// basis. Slots are 1-based; zero entries are not stored. Immutable value
/// type: all operations return new indices.
class MultiIndex {
 public:
  MultiIndex() = default;

  static MultiIndex zero() { return MultiIndex(); }
  /// The unit index with a single 1 at `slot`.
  static MultiIndex unit(int slot);
  /// Build from a dense tuple (alpha_1, ..., alpha_K).
  static MultiIndex from_dense(const std::vector<int>& entries);

  /// Multiplicity at `slot` (0 when absent).
  int at(int slot) const;
  /// |alpha| = sum of multiplicities.
  int order() const { return order_; }
  bool is_zero() const { return entries_.empty(); }
  /// Largest slot with a non-zero entry (0 for the zero index).
  int max_slot() const { return entries_.empty() ? 0 : entries_.rbegin()->first; }

  const std::map<int, int>& entries() const { return entries_; }

  /// Graded ordering: by |alpha|, then within a grade the index whose first
  /// differing slot carries the larger multiplicity comes first.
  bool operator<(const MultiIndex& other) const;
  bool operator==(const MultiIndex& other) const { return entries_ == other.entries_; }
  bool operator!=(const MultiIndex& other) const { return !(*this == other); }

 private:
  std::map<int, int> entries_;
  int order_ = 0;

  friend MultiIndex add(const MultiIndex&, const MultiIndex&);
  friend MultiIndex sub_unit(const MultiIndex&, int);
};

/// alpha! = prod_k alpha_k!, in floating point (log-factorial above 170!).
double factorial(const MultiIndex& alpha);

/// log(alpha!); what large-order formulas consume (sqrt(alpha!) stays finite
/// long after alpha! itself overflows).
double log_factorial(const MultiIndex& alpha);

/// Componentwise sum.
MultiIndex add(const MultiIndex& alpha, const MultiIndex& beta);

/// alpha - eps_k. Throws UnderflowError when alpha_k = 0, signalling that the
/// corresponding sqrt(alpha_k) term vanishes and must be skipped by callers.
MultiIndex sub_unit(const MultiIndex& alpha, int slot);

/// (k_1,...,k_n), non-decreasing, slot k repeated alpha_k times.
std::vector<int> characteristic_set(const MultiIndex& alpha);

/// Finite truncation of the index set: |alpha| <= max_order with support in
/// slots {1..max_dim}.
struct TruncationSpec {
  int max_order = 0;
  int max_dim = 1;

  /// Number of indices: binomial(max_order + max_dim, max_dim).
  std::uint64_t size() const;
  bool contains(const MultiIndex& alpha) const {
    return alpha.order() <= max_order && alpha.max_slot() <= max_dim;
  }
};

/// All indices of the truncation in graded order; deterministic across runs.
/// Throws TruncationTooLargeError above ~2e7 indices.
std::vector<MultiIndex> enumerate(const TruncationSpec& spec);

/// Position of alpha in enumerate(spec) without materializing the list.
std::uint64_t rank_of(const MultiIndex& alpha, const TruncationSpec& spec);
/// Inverse of rank_of.
MultiIndex unrank(std::uint64_t rank, const TruncationSpec& spec);

/// binomial(n, k) as an exact 64-bit integer (desk-scale arguments).
std::uint64_t binomial(int n, int k);

}  // namespace chaoskit
