#include "scatspec/binio.hpp"
#include "scatspec/error.hpp"
#include "scatspec/hashing.hpp"
#include "scatspec/jost.hpp"

#include <bit>
#include <filesystem>

namespace scatspec {

BinaryWriter::BinaryWriter(const std::string& path) : out_(path + ".tmp", std::ios::binary), path_(path) {
  if (!out_) fail(ErrorCode::io_error, "cannot write " + path);
}

void BinaryWriter::u64(std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out_.write(reinterpret_cast<const char*>(b), 8);
}
void BinaryWriter::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
void BinaryWriter::text(const std::string& s) {
  u64(s.size());
  out_.write(s.data(), static_cast<std::streamsize>(s.size()));
}
void BinaryWriter::f64s(const std::vector<double>& v) {
  u64(v.size());
  for (double x : v) f64(x);
}
void BinaryWriter::cplxs(const std::vector<cplx>& v) {
  u64(v.size());
  for (const cplx& z : v) {
    f64(z.real());
    f64(z.imag());
  }
}
void BinaryWriter::cmatrix(const CMatrix& m) {
  u64(m.rows());
  u64(m.cols());
  for (const cplx& z : m.data()) {
    f64(z.real());
    f64(z.imag());
  }
}
void BinaryWriter::rmatrix(const RMatrix& m) {
  u64(m.rows());
  u64(m.cols());
  for (double z : m.data()) f64(z);
}
void BinaryWriter::close() {
  out_.close();
  if (!out_) fail(ErrorCode::io_error, "write failed for " + path_);
  std::filesystem::rename(path_ + ".tmp", path_);
}

BinaryReader::BinaryReader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
  if (!in_) fail(ErrorCode::io_error, "cannot read " + path);
}
std::uint64_t BinaryReader::u64() {
  unsigned char b[8];
  if (!in_.read(reinterpret_cast<char*>(b), 8)) fail(ErrorCode::io_error, "truncated file " + path_);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}
double BinaryReader::f64() { return std::bit_cast<double>(u64()); }
std::string BinaryReader::text() {
  std::string s(u64(), '\0');
  if (!in_.read(s.data(), static_cast<std::streamsize>(s.size()))) fail(ErrorCode::io_error, "truncated file " + path_);
  return s;
}
std::vector<double> BinaryReader::f64s() {
  std::vector<double> v(u64());
  for (auto& x : v) x = f64();
  return v;
}
std::vector<cplx> BinaryReader::cplxs() {
  std::vector<cplx> v(u64());
  for (auto& z : v) {
    const double re = f64();
    z = cplx(re, f64());
  }
  return v;
}
CMatrix BinaryReader::cmatrix() {
  const auto r = u64(), c = u64();
  CMatrix m(r, c);
  for (auto& z : m.data()) {
    const double re = f64();
    z = cplx(re, f64());
  }
  return m;
}
RMatrix BinaryReader::rmatrix() {
  const auto r = u64(), c = u64();
  RMatrix m(r, c);
  for (auto& z : m.data()) z = f64();
  return m;
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::io_error, "cannot create directory " + dir);
}

bool file_exists(const std::string& path) { return std::filesystem::exists(path); }

std::string jost_cache_key(const Potential& v, const std::vector<double>& k_grid, const std::vector<double>& x_grid,
                           const JostOptions& o) {
  Sha256 h;
  h.text("jost/v1").text(v.hash()).f64s(k_grid).f64s(x_grid);
  h.f64(o.tol).u64(static_cast<std::uint64_t>(o.scheme)).u64(o.richardson).u64(o.derivative).u64(o.max_terms);
  return h.hex();
}

void save_jost(const JostField& f, const std::string& path) {
  BinaryWriter w(path);
  w.text("scatspec.jost/1");
  w.text(f.potential_hash);
  w.f64s(f.k);
  w.f64s(f.x);
  w.cmatrix(f.m_plus);
  w.cmatrix(f.m_minus);
  w.cmatrix(f.dm_plus);
  w.cmatrix(f.dm_minus);
  for (const auto* side : {&f.plus, &f.minus}) {
    w.u64(side->size());
    for (const auto& t : *side)
      for (cplx z : {t.s, t.s1, t.h, t.ds, t.ds1, t.dh}) {
        w.f64(z.real());
        w.f64(z.imag());
      }
  }
  w.f64s(f.residual);
  w.u64(f.iterations.size());
  for (auto n : f.iterations) w.u64(n);
  w.u64(f.derivative_unset_at_zero);
  w.f64(f.options.tol);
  w.u64(static_cast<std::uint64_t>(f.options.scheme));
  w.u64(f.options.richardson);
  w.u64(f.options.derivative);
  w.u64(f.options.max_terms);
  w.close();
}

JostField load_jost(const std::string& path) {
  BinaryReader r(path);
  if (r.text() != "scatspec.jost/1") fail(ErrorCode::io_error, "unrecognised jost cache " + path);
  JostField f;
  f.potential_hash = r.text();
  f.k = r.f64s();
  f.x = r.f64s();
  f.m_plus = r.cmatrix();
  f.m_minus = r.cmatrix();
  f.dm_plus = r.cmatrix();
  f.dm_minus = r.cmatrix();
  for (auto* side : {&f.plus, &f.minus}) {
    side->resize(r.u64());
    for (auto& t : *side)
      for (cplx* z : {&t.s, &t.s1, &t.h, &t.ds, &t.ds1, &t.dh}) {
        const double re = r.f64();
        *z = cplx(re, r.f64());
      }
  }
  f.residual = r.f64s();
  f.iterations.resize(r.u64());
  for (auto& n : f.iterations) n = r.u64();
  f.derivative_unset_at_zero = r.u64() != 0;
  f.options.tol = r.f64();
  f.options.scheme = static_cast<VolterraScheme>(r.u64());
  f.options.richardson = r.u64() != 0;
  f.options.derivative = r.u64() != 0;
  f.options.max_terms = r.u64();
  return f;
}

JostField cached_jost(const Potential& v, const std::vector<double>& k_grid, const std::vector<double>& x_grid,
                      const JostOptions& options, const std::string& dir, bool* hit) {
  ensure_directory(dir);
  const std::string path = dir + "/jost_" + jost_cache_key(v, k_grid, x_grid, options) + ".bin";
  if (file_exists(path)) {
    if (hit) *hit = true;
    auto f = load_jost(path);
    f.options.jobs = options.jobs;
    return f;
  }
  if (hit) *hit = false;
  auto f = solve_jost(v, k_grid, x_grid, options);
  save_jost(f, path);
  return f;
}

} // namespace scatspec
