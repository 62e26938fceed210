#pragma once

#include <initializer_list>
#include <optional>

#include "biherm/types.hpp"

namespace biherm::testing {

inline ComplexMatrix cdiag(std::initializer_list<double> d) {
  RealVector v(static_cast<Index>(d.size()));
  Index i = 0;
  for (double x : d) v(i++) = x;
  return v.cast<Complex>().asDiagonal();
}

inline ComplexMatrix cmat(Index n, std::initializer_list<double> row_major) {
  ComplexMatrix m(n, n);
  auto it = row_major.begin();
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) m(r, c) = *it++;
  return m;
}

/// Error code thrown by fn, or nullopt when it returns normally.
template <class Fn>
std::optional<ErrorCode> error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace biherm::testing
