#include "parasched/packing.hpp"

#include <algorithm>
#include <numeric>

namespace parasched {

PackResult worst_fit_partition(const std::vector<PackItem>& items, std::vector<Rational> initial) {
  PackResult out;
  out.totals = std::move(initial);
  out.bin_of.assign(items.size(), -1);

  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (items[a].key != items[b].key) return items[a].key > items[b].key;
    return items[a].id < items[b].id;
  });

  for (std::size_t i : order) {
    auto best = std::min_element(out.totals.begin(), out.totals.end());
    if (best == out.totals.end() || *best + items[i].size > 1) {
      out.failed = i;
      return out;
    }
    *best += items[i].size;
    out.bin_of[i] = static_cast<int>(best - out.totals.begin());
  }
  out.ok = true;
  return out;
}

}  // namespace parasched
