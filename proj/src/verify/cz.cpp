#include "scatspec/verify/cz.hpp"

#include "scatspec/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scatspec {
namespace {

bool power_of_two(double v) {
  int e = 0;
  return v > 0.0 && std::frexp(v, &e) == 0.5;
}

struct Tree {
  //! level 0 = cells; level L has 2^{K-L} nodes.
  std::vector<std::vector<double>> abs_sum, sum;
};

Tree build_tree(const std::vector<double>& f) {
  Tree t;
  t.abs_sum.emplace_back(f.size());
  t.sum.push_back(f);
  for (std::size_t i = 0; i < f.size(); ++i) t.abs_sum[0][i] = std::abs(f[i]);
  while (t.sum.back().size() > 1) {
    const auto& a = t.abs_sum.back();
    const auto& s = t.sum.back();
    std::vector<double> na(a.size() / 2), ns(s.size() / 2);
    for (std::size_t i = 0; i < na.size(); ++i) {
      na[i] = a[2 * i] + a[2 * i + 1];
      ns[i] = s[2 * i] + s[2 * i + 1];
    }
    t.abs_sum.push_back(std::move(na));
    t.sum.push_back(std::move(ns));
  }
  return t;
}

} // namespace

CZDecomposition cz_decompose(const std::vector<double>& f, double x0, double dx, double alpha) {
  if (!(alpha > 0.0)) fail(ErrorCode::invalid_argument, "cz_decompose: alpha must be positive");
  if (!power_of_two(dx)) fail(ErrorCode::invalid_argument, "cz_decompose: dx must be a power of two");
  if (f.empty()) fail(ErrorCode::invalid_argument, "cz_decompose: empty input");
  for (double v : f)
    if (!std::isfinite(v)) fail(ErrorCode::invalid_argument, "cz_decompose: non-finite sample");

  CZDecomposition cz;
  cz.alpha = alpha;
  cz.x0 = x0;
  cz.dx = dx;
  std::size_t n = 1;
  while (n < f.size()) n *= 2;
  cz.f = f;
  cz.f.resize(n, 0.0);
  Tree tree = build_tree(cz.f);
  // Enlarge the top cube with zeros until its mean is at most α.
  while (tree.abs_sum.back()[0] > alpha * dx * static_cast<double>(cz.f.size())) {
    cz.f.resize(2 * cz.f.size(), 0.0);
    ++cz.padding_doublings;
    tree = build_tree(cz.f);
  }
  const std::size_t top = tree.abs_sum.size() - 1;
  cz.l1 = tree.abs_sum[top][0] * dx;
  cz.g = cz.f;
  cz.b.assign(cz.f.size(), 0.0);

  // Depth-first stopping time: a child is selected as soon as its mean exceeds α.
  std::vector<std::pair<std::size_t, std::size_t>> stack = {{top, 0}};
  while (!stack.empty()) {
    const auto [lvl, idx] = stack.back();
    stack.pop_back();
    if (lvl == 0) continue;
    for (std::size_t c = 2 * idx + 2; c-- > 2 * idx;) {
      const std::size_t cells = std::size_t{1} << (lvl - 1);
      const double len = dx * static_cast<double>(cells);
      if (tree.abs_sum[lvl - 1][c] * dx > alpha * len) {
        CZCube q;
        q.first = c * cells;
        q.cells = cells;
        q.length = len;
        q.mean = tree.sum[lvl - 1][c] / static_cast<double>(cells);
        q.abs_mean = tree.abs_sum[lvl - 1][c] / static_cast<double>(cells);
        cz.cubes.push_back(q);
      } else {
        stack.emplace_back(lvl - 1, c);
      }
    }
  }
  std::sort(cz.cubes.begin(), cz.cubes.end(), [](const CZCube& a, const CZCube& b) { return a.first < b.first; });
  for (const auto& q : cz.cubes) {
    cz.total_length += q.length;
    for (std::size_t i = q.first; i < q.first + q.cells; ++i) {
      cz.g[i] = q.mean;
      cz.b[i] = cz.f[i] - q.mean;
    }
  }
  return cz;
}

CZCheck cz_check(const CZDecomposition& cz) {
  CZCheck c;
  const double a = cz.alpha;
  std::vector<char> covered(cz.f.size(), 0);
  c.disjoint = true;
  c.cube_means = true;
  c.mean_zero = true;
  for (const auto& q : cz.cubes) {
    for (std::size_t i = q.first; i < q.first + q.cells; ++i) {
      if (covered[i]) c.disjoint = false;
      covered[i] = 1;
    }
    c.cube_means = c.cube_means && q.abs_mean <= 2.0 * a;
    // ∫ b_k relative to the mass on the cube
    double s = 0.0, comp = 0.0, m = 0.0;
    for (std::size_t i = q.first; i < q.first + q.cells; ++i) {
      const double v = cz.b[i], t = s + v;
      comp += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
      s = t;
      m += std::abs(cz.f[i]) + std::abs(q.mean);
    }
    const double rel = m > 0 ? std::abs(s + comp) / m : 0.0;
    c.max_b_mean = std::max(c.max_b_mean, rel);
    c.mean_zero = c.mean_zero && rel <= 64.0 * std::numeric_limits<double>::epsilon();
  }
  c.good_bounded = true;
  c.reconstruction = true;
  for (std::size_t i = 0; i < cz.f.size(); ++i) {
    c.good_bounded = c.good_bounded && std::abs(cz.g[i]) <= 2.0 * a;
    if (!covered[i]) c.good_bounded = c.good_bounded && std::abs(cz.f[i]) <= a;
    const double err = std::abs(cz.f[i] - (cz.g[i] + cz.b[i]));
    const double scale = std::max({std::abs(cz.f[i]), std::abs(cz.g[i]), std::abs(cz.b[i])});
    const double ulps = scale > 0 ? err / (scale * std::numeric_limits<double>::epsilon()) : 0.0;
    c.max_reconstruction = std::max(c.max_reconstruction, ulps);
    c.reconstruction = c.reconstruction && ulps <= 4.0;
  }
  c.total_length = cz.total_length <= cz.l1 / a;
  return c;
}

} // namespace scatspec
