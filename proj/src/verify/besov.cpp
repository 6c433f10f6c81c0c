#include "scatspec/verify/besov.hpp"

#include "scatspec/error.hpp"

#include <chrono>
#include <cmath>

namespace scatspec {
namespace {

void check_exponents(double p, double q) {
  if (!(p >= 1.0) || !(q >= 1.0)) fail(ErrorCode::invalid_argument, "Besov exponents must satisfy p, q >= 1");
}

double lq_combine(const std::vector<double>& terms, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double t : terms) m = std::max(m, t);
    return m;
  }
  double s = 0.0;
  for (double t : terms) s += std::pow(t, q);
  return std::pow(s, 1.0 / q);
}

} // namespace

std::vector<std::vector<std::vector<cplx>>> littlewood_paley_pieces(const std::vector<Multiplier>& mus,
                                                                    const Potential& v, const std::vector<double>& x,
                                                                    const std::vector<cplx>& f,
                                                                    const BesovOptions& opt) {
  if (opt.j_lo > opt.j_hi) fail(ErrorCode::invalid_argument, "littlewood_paley_pieces: empty window");
  std::vector<Block> blocks;
  for (int j = opt.j_lo; j <= opt.j_hi; ++j) blocks.push_back(Block{BlockKind::phi, j, 0});
  const DyadicSystem d(opt.j_lo - 1, opt.j_hi + 1, opt.profile);
  auto out = apply_blocks(mus, blocks, v, x, {f}, true, d, opt.kernel);
  std::vector<std::vector<std::vector<cplx>>> pieces(mus.size());
  for (std::size_t m = 0; m < mus.size(); ++m)
    for (std::size_t b = 0; b < blocks.size(); ++b) pieces[m].push_back(std::move(out[m][b][0]));
  return pieces;
}

double lp_norm(const std::vector<double>& x, const std::vector<cplx>& f, double p) {
  if (x.size() != f.size() || x.size() < 2) fail(ErrorCode::invalid_argument, "lp_norm: size mismatch");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : f) m = std::max(m, std::abs(v));
    return m;
  }
  const auto w = trapezoid_weights(x.size(), x[1] - x[0]);
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * std::pow(std::abs(f[i]), p);
  return std::pow(s, 1.0 / p);
}

double besov_from_pieces(const std::vector<double>& x, const std::vector<std::vector<cplx>>& pieces, int j_lo,
                         double alpha, double p, double q) {
  check_exponents(p, q);
  std::vector<double> terms;
  for (std::size_t b = 0; b < pieces.size(); ++b) {
    const int j = j_lo + static_cast<int>(b);
    terms.push_back(std::pow(2.0, j * alpha) * lp_norm(x, pieces[b], p));
  }
  return lq_combine(terms, q);
}

double tl_from_pieces(const std::vector<double>& x, const std::vector<std::vector<cplx>>& pieces, int j_lo,
                      double alpha, double p, double q) {
  check_exponents(p, q);
  std::vector<cplx> g(x.size(), 0.0);
  std::vector<double> terms(pieces.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t b = 0; b < pieces.size(); ++b) {
      const int j = j_lo + static_cast<int>(b);
      terms[b] = std::pow(2.0, j * alpha) * std::abs(pieces[b][i]);
    }
    g[i] = lq_combine(terms, q);
  }
  return lp_norm(x, g, p);
}

double besov_norm(const Potential& v, const std::vector<double>& x, const std::vector<cplx>& f, double alpha,
                  double p, double q, const BesovOptions& opt) {
  const auto pieces = littlewood_paley_pieces({Multiplier::identity()}, v, x, f, opt);
  return besov_from_pieces(x, pieces[0], opt.j_lo, alpha, p, q);
}

double tl_norm(const Potential& v, const std::vector<double>& x, const std::vector<cplx>& f, double alpha, double p,
               double q, const BesovOptions& opt) {
  const auto pieces = littlewood_paley_pieces({Multiplier::identity()}, v, x, f, opt);
  return tl_from_pieces(x, pieces[0], opt.j_lo, alpha, p, q);
}

EstimateReport check_besov_multiplier(const Multiplier& mu, const Potential& v, const std::vector<double>& x,
                                      const std::vector<cplx>& f, double alpha, double p, double q, double bound,
                                      const BesovOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  const auto pieces = littlewood_paley_pieces({Multiplier::identity(), mu}, v, x, f, opt);
  EstimateReport r;
  r.id = "besov_" + mu.describe();
  r.extra_names = {"norm_f"};
  for (std::size_t b = 0; b < pieces[0].size(); ++b) {
    const double nf = lp_norm(x, pieces[0][b], p), nm = lp_norm(x, pieces[1][b], p);
    r.add_row(opt.j_lo + static_cast<int>(b), nm, nf > 0 ? nm / nf : 0.0, {nf});
  }
  const double bf = besov_from_pieces(x, pieces[0], opt.j_lo, alpha, p, q);
  const double bm = besov_from_pieces(x, pieces[1], opt.j_lo, alpha, p, q);
  r.metrics["besov_f"] = bf;
  r.metrics["besov_mu_f"] = bm;
  r.metrics["norm_ratio"] = bm / bf;
  r.metrics["tl_f"] = tl_from_pieces(x, pieces[0], opt.j_lo, alpha, p, q);
  r.metrics["tl_mu_f"] = tl_from_pieces(x, pieces[1], opt.j_lo, alpha, p, q);
  r.checks["norm_ratio"] = bm / bf <= bound;
  r.finalize();
  r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

} // namespace scatspec
