#pragma once
//! Little-endian binary streams for cache files.

#include "scatspec/grid.hpp"

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace scatspec {

class BinaryWriter {
public:
  explicit BinaryWriter(const std::string& path);
  void u64(std::uint64_t v);
  void f64(double v);
  void text(const std::string& s);
  void f64s(const std::vector<double>& v);
  void cplxs(const std::vector<cplx>& v);
  void cmatrix(const CMatrix& m);
  void rmatrix(const RMatrix& m);
  void close();

private:
  std::ofstream out_;
  std::string path_;
};

class BinaryReader {
public:
  explicit BinaryReader(const std::string& path);
  std::uint64_t u64();
  double f64();
  std::string text();
  std::vector<double> f64s();
  std::vector<cplx> cplxs();
  CMatrix cmatrix();
  RMatrix rmatrix();

private:
  std::ifstream in_;
  std::string path_;
};

//! Creates a directory (and parents) if missing.
void ensure_directory(const std::string& dir);
bool file_exists(const std::string& path);

} // namespace scatspec
