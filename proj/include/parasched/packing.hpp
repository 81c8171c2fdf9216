#pragma once

#include <cstddef>
#include <vector>

#include "parasched/rational.hpp"

namespace parasched {

struct PackItem {
  std::size_t id;  // ties in `key` are broken by ascending id
  Rational key;    // sort key, packed non-increasing
  Rational size;   // space taken in a unit bin
};

struct PackResult {
  bool ok = false;
  std::vector<int> bin_of;  // per input item, -1 if never placed
  std::vector<Rational> totals;
  std::size_t failed = 0;  // input index of the first item that did not fit
};

// Worst-fit decreasing into unit bins that may already hold `initial` load.
// Each item goes to the bin with the least total (lowest index on ties) if it
// fits there; otherwise packing stops.
PackResult worst_fit_partition(const std::vector<PackItem>& items, std::vector<Rational> initial);

inline PackResult worst_fit_partition(const std::vector<PackItem>& items, std::size_t bins) {
  return worst_fit_partition(items, std::vector<Rational>(bins, Rational(0)));
}

}  // namespace parasched
