#include "ies/eigengap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ies {

EigengapEstimate eigengap_k(const Vector& eigenvalues, double search_fraction) {
  const Index n = eigenvalues.size();
  if (n < 2) {
    throw InsufficientDataError("eigengap needs at least 2 eigenvalues, got " +
                                std::to_string(n));
  }
  if (!(search_fraction > 0.0 && search_fraction <= 1.0)) {
    throw InvalidParameterError("search_fraction must lie in (0, 1]");
  }
  require_finite(eigenvalues, "eigenvalues");
  for (Index i = 0; i + 1 < n; ++i) {
    if (eigenvalues(i) < eigenvalues(i + 1)) {
      throw InvalidDataError("eigenvalues must be sorted in descending order");
    }
  }

  EigengapEstimate out;
  out.gaps = (eigenvalues.head(n - 1) - eigenvalues.tail(n - 1)).cwiseAbs();
  const auto limit = static_cast<Index>(std::floor(search_fraction * static_cast<double>(n)));
  out.search_limit = std::clamp<Index>(limit, 1, n - 1);

  Index best = 0;
  for (Index i = 1; i < out.search_limit; ++i) {
    if (out.gaps(i) > out.gaps(best)) best = i;
  }
  out.k = best + 1;
  return out;
}

}  // namespace ies
