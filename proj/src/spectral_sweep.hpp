#pragma once
// Chunked walk over λ nodes that hands out t, r+ and the Jost solutions
// f+(x,λ) = e^{iλx} m+(x,λ), f-(x,λ) = e^{-iλx} m-(x,λ) on a fixed x set.

#include "scatspec/jost.hpp"
#include "scatspec/scattering.hpp"

#include <algorithm>
#include <vector>

namespace scatspec::detail {

struct LambdaSlice {
  double lambda = 0.0;
  cplx t, r_plus, r_minus;
  std::vector<cplx> f_plus, f_minus;
};

template <class Fn>
void sweep_lambda(const Potential& v, const std::vector<double>& lambdas, const std::vector<double>& xs,
                  const JostOptions& jopt, std::size_t chunk, Fn&& fn) {
  chunk = std::max<std::size_t>(chunk, 1);
  LambdaSlice s;
  s.f_plus.resize(xs.size());
  s.f_minus.resize(xs.size());
  for (std::size_t c0 = 0; c0 < lambdas.size(); c0 += chunk) {
    const std::size_t c1 = std::min(lambdas.size(), c0 + chunk);
    std::vector<double> ks(lambdas.begin() + static_cast<long>(c0), lambdas.begin() + static_cast<long>(c1));
    const JostField jf = solve_jost(v, ks, xs, jopt);
    const ScatteringData sc = scattering_coefficients(v, jf);
    for (std::size_t i = 0; i < ks.size(); ++i) {
      s.lambda = ks[i];
      s.t = sc.t[i];
      s.r_plus = sc.r_plus[i];
      s.r_minus = sc.r_minus[i];
      for (std::size_t ix = 0; ix < xs.size(); ++ix) {
        const cplx e = std::polar(1.0, ks[i] * xs[ix]);
        s.f_plus[ix] = e * jf.m_plus(i, ix);
        s.f_minus[ix] = std::conj(e) * jf.m_minus(i, ix);
      }
      fn(c0 + i, s);
    }
  }
}

} // namespace scatspec::detail
