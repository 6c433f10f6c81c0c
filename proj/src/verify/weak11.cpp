#include "scatspec/verify/weak11.hpp"

#include "scatspec/error.hpp"
#include "scatspec/hoermander.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

namespace scatspec {
namespace {

std::vector<double> x_grid(double half, double dx) {
  const auto n = static_cast<long>(std::llround(half / dx));
  std::vector<double> x;
  for (long i = -n; i <= n; ++i) x.push_back(static_cast<double>(i) * dx);
  return x;
}

struct Run {
  std::vector<std::vector<double>> ratio;  ///< [mu][member]
};

Run run(const std::vector<Multiplier>& mus, const Potential& v, double width, double dx, int j_hi,
        const std::vector<double>& alphas, const Weak11Options& opt) {
  const auto x = x_grid(opt.half_length, dx);
  const auto fs = spike_train_family(x, width, opt.members, opt.seed, opt.min_gap);
  ApplyOptions aopt;
  aopt.j_lo = opt.j_lo;
  aopt.j_hi = j_hi;
  aopt.profile = opt.profile;
  const auto blocks = window_blocks(aopt);
  const DyadicSystem d(opt.j_lo - 1, j_hi + 1, opt.profile);
  const auto out = apply_blocks(mus, blocks, v, x, fs, true, d, opt.kernel);
  Run r;
  r.ratio.assign(mus.size(), std::vector<double>(fs.size(), 0.0));
  for (std::size_t m = 0; m < mus.size(); ++m)
    for (std::size_t i = 0; i < fs.size(); ++i) {
      std::vector<cplx> tf(x.size(), 0.0);
      for (std::size_t b = 0; b < blocks.size(); ++b)
        for (std::size_t p = 0; p < x.size(); ++p) tf[p] += out[m][b][i][p];
      r.ratio[m][i] = weak_ratio(x, tf, fs[i], alphas);
    }
  return r;
}

} // namespace

std::vector<std::vector<cplx>> spike_train_family(const std::vector<double>& x, double width, int members,
                                                  std::uint64_t seed, double min_gap) {
  if (!(width > 0.0) || members <= 0) fail(ErrorCode::invalid_argument, "spike_train_family: bad parameters");
  if (x.empty()) fail(ErrorCode::invalid_argument, "spike_train_family: empty grid");
  // Centres are drawn once per member and reused at every resolution.
  std::mt19937_64 rng(seed);
  const double lo = x.front(), hi = x.back();
  const double mid = 0.5 * (lo + hi), reach = 0.35 * (hi - lo);
  std::uniform_real_distribution<double> shift(mid - reach, mid + reach);
  std::uniform_int_distribution<int> count(2, 5);
  const double norm = 1.0 / (width * std::sqrt(2.0 * M_PI));
  std::vector<std::vector<cplx>> fam;
  for (int m = 0; m < members; ++m) {
    const int n = count(rng);
    std::vector<double> c;
    while (c.size() < static_cast<std::size_t>(n)) {
      const double ci = shift(rng);
      bool apart = true;
      for (double cj : c) apart = apart && std::abs(ci - cj) >= min_gap;
      if (apart) c.push_back(ci);
    }
    std::vector<cplx> f(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      double s = 0.0;
      for (double ci : c) {
        const double u = (x[i] - ci) / width;
        s += norm * std::exp(-0.5 * u * u);
      }
      f[i] = s;
    }
    fam.push_back(std::move(f));
  }
  return fam;
}

double weak_ratio(const std::vector<double>& x, const std::vector<cplx>& tf, const std::vector<cplx>& f,
                  const std::vector<double>& alphas) {
  if (x.size() != tf.size() || x.size() != f.size() || x.size() < 2)
    fail(ErrorCode::invalid_argument, "weak_ratio: size mismatch");
  const double dx = x[1] - x[0];
  double l1 = 0.0;
  for (const auto& v : f) l1 += std::abs(v);
  l1 *= dx;
  if (!(l1 > 0.0)) fail(ErrorCode::invalid_argument, "weak_ratio: f = 0");
  double best = 0.0;
  if (alphas.empty()) {
    // sup over all α > 0: just below the k-th largest |Tf| the level set holds k cells
    std::vector<double> mags(tf.size());
    for (std::size_t i = 0; i < tf.size(); ++i) mags[i] = std::abs(tf[i]);
    std::sort(mags.begin(), mags.end(), std::greater<>());
    for (std::size_t k = 0; k < mags.size(); ++k) best = std::max(best, mags[k] * static_cast<double>(k + 1));
    return best * dx / l1;
  }
  for (double a : alphas) {
    std::size_t cnt = 0;
    for (const auto& v : tf) cnt += std::abs(v) > a ? 1 : 0;
    best = std::max(best, a * static_cast<double>(cnt) * dx / l1);
  }
  return best;
}

std::vector<EstimateReport> weak11_experiment(const std::vector<Multiplier>& mus, const Potential& v,
                                              const Weak11Options& opt) {
  if (mus.empty()) fail(ErrorCode::invalid_argument, "weak11_experiment: no multipliers");
  if (!(opt.refine >= 1.0)) fail(ErrorCode::invalid_argument, "weak11_experiment: refine must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  const auto& alphas = opt.alphas;
  const double dx = opt.width / opt.cells_per_width;
  const Run coarse = run(mus, v, opt.width, dx, opt.j_hi, alphas, opt);
  const double sharpen = opt.sharpen ? opt.refine : 1.0;
  const int j_fine = opt.j_hi + static_cast<int>(std::lround(2.0 * std::log2(sharpen)));
  const Run fine = run(mus, v, opt.width / sharpen, dx / opt.refine, j_fine, alphas, opt);
  std::vector<EstimateReport> reps;
  for (std::size_t m = 0; m < mus.size(); ++m) {
    EstimateReport r;
    r.id = "weak11_" + mus[m].describe();
    r.index_name = "member";
    r.extra_names = {"ratio_refined"};
    double sc = 0.0, sf = 0.0;
    for (std::size_t i = 0; i < coarse.ratio[m].size(); ++i) {
      r.add_row(static_cast<double>(i), coarse.ratio[m][i], coarse.ratio[m][i], {fine.ratio[m][i]});
      sc = std::max(sc, coarse.ratio[m][i]);
      sf = std::max(sf, fine.ratio[m][i]);
    }
    const double drift = std::abs(sf / sc - 1.0);
    r.checks["refinement_stable"] = drift < opt.refine_tol;
    r.metrics["sup_refined"] = sf;
    r.metrics["drift"] = drift;
    r.metrics["hoermander_norm"] = hoermander_norm(mus[m]).norm;
    r.metrics["sup_over_hoermander"] = std::max(sc, sf) / r.metrics["hoermander_norm"];
    r.finalize();
    r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    reps.push_back(std::move(r));
  }
  return reps;
}

} // namespace scatspec
