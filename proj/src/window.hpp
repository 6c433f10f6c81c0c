#pragma once
// Active window of a sampled potential: the nonzero samples padded with one
// zero node per side, aligned to even global indices so that the stride-2
// level of Richardson extrapolation reuses the potential grid's even nodes.

#include "scatspec/potential.hpp"

#include <vector>

namespace scatspec::detail {

struct Window {
  std::vector<double> v;
  double x0 = 0.0;
  double h = 1.0;
  bool empty() const { return v.empty(); }
  double x(std::size_t i) const { return x0 + static_cast<double>(i) * h; }
  double x_end() const { return x(v.size() - 1); }
};

inline Window active_window(const Potential& pot) {
  Window w;
  w.h = pot.grid().step;
  auto supp = pot.support_indices();
  if (!supp) return w;
  long lo = static_cast<long>(supp->first) - 1;
  long hi = static_cast<long>(supp->second) + 1;
  if (lo % 2 != 0) --lo;
  if (hi % 2 != 0) ++hi;
  w.x0 = pot.grid().x_min + static_cast<double>(lo) * w.h;
  w.v.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (long i = lo; i <= hi; ++i)
    if (i >= 0 && i < static_cast<long>(pot.grid().count))
      w.v[static_cast<std::size_t>(i - lo)] = pot.samples()[static_cast<std::size_t>(i)];
  return w;
}

inline Window mirrored(const Window& w) {
  Window r;
  r.h = w.h;
  if (w.empty()) return r;
  r.v.assign(w.v.rbegin(), w.v.rend());
  r.x0 = -w.x_end();
  return r;
}

} // namespace scatspec::detail
