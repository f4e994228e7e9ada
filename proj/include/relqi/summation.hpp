#pragma once

#include <cstddef>

namespace relqi {

/// Pairwise (cascade) summation of term(i) for i in [begin, end).
///
/// The reduction tree depends only on the range, so the rounding of every
/// quadrature sum is fixed regardless of how callers schedule work.
template <class T, class Term>
T pairwise_sum(std::size_t begin, std::size_t end, const Term& term, const T& zero) {
  constexpr std::size_t kLeaf = 8;
  if (end - begin <= kLeaf) {
    T acc = zero;
    for (std::size_t i = begin; i < end; ++i) acc += term(i);
    return acc;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  T left = pairwise_sum(begin, mid, term, zero);
  left += pairwise_sum(mid, end, term, zero);
  return left;
}

}  // namespace relqi
