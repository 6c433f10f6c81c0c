#pragma once
//! Uniform grids and small dense containers.

#include <complex>
#include <cstddef>
#include <vector>

namespace scatspec {

using cplx = std::complex<double>;

struct UniformGrid {
  double x_min = 0.0;
  double step = 1.0;
  std::size_t count = 0;

  //! Builds the grid x_min, x_min + step, ..., x_max; throws if the span is
  //! not an integer number of steps.
  static UniformGrid from_range(double x_min, double x_max, double step);

  double x(std::size_t i) const { return x_min + static_cast<double>(i) * step; }
  double x_max() const { return x(count == 0 ? 0 : count - 1); }
  std::vector<double> nodes() const;

  bool operator==(const UniformGrid&) const = default;
};

//! Row-major dense matrix.
template <class T> class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  T* row(std::size_t r) { return data_.data() + r * cols_; }
  const T* row(std::size_t r) const { return data_.data() + r * cols_; }
  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using CMatrix = Matrix<cplx>;
using RMatrix = Matrix<double>;

//! Trapezoid weights for a uniform grid.
std::vector<double> trapezoid_weights(std::size_t count, double step);

//! Evenly spaced values lo, lo+step, ..., up to hi inclusive (within tolerance).
std::vector<double> linspace_step(double lo, double hi, double step);

//! Least-squares line fit; returns {slope, intercept}.
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y);

} // namespace scatspec
