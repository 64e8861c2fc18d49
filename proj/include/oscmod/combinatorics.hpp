#pragma once

#include <cstdint>
#include <vector>

namespace oscmod {

long binomial(int n, int k);

/// Ordered basis bookkeeping for the exterior algebra on 2n generators.
///
/// A basis covector set {i_1 < ... < i_k} subset of {1,...,2n} is stored as a
/// bitmask over bits 0..2n-1 (bit i-1 set for generator i).  Within each
/// degree the basis is ordered lexicographically by the increasing index
/// tuple, and the degrees are stacked 0,1,...,2n, which fixes a total order
/// on all 2^{2n} index sets.
class FormBasis {
public:
  explicit FormBasis(int dim2n);

  int dim2n() const { return dim2n_; }
  int total_dim() const { return static_cast<int>(by_mask_.size()); }

  /// C(2n,k); zero outside [0,2n].
  int degree_dim(int k) const;
  /// Offset of the degree-k block in the stacked ordering.
  int degree_offset(int k) const;

  const std::vector<std::uint32_t>& masks(int k) const { return masks_[k]; }
  std::uint32_t mask(int k, int rank) const { return masks_[k][rank]; }

  static int degree(std::uint32_t m);
  int rank_in_degree(std::uint32_t m) const { return by_mask_[m].rank; }
  int full_rank(std::uint32_t m) const { return by_mask_[m].full; }

  /// Sign of merging two disjoint sorted index sets, dx^A ^ dx^B; 0 when the
  /// sets overlap.
  static int wedge_sign(std::uint32_t a, std::uint32_t b);

private:
  struct Slot {
    int rank = 0;
    int full = 0;
  };
  int dim2n_;
  std::vector<std::vector<std::uint32_t>> masks_;
  std::vector<int> offsets_;
  std::vector<Slot> by_mask_;
};

}  // namespace oscmod
