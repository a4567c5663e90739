#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rivergraph {

// Row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  std::vector<double>& values() noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  void fill(double v);
  Matrix transposed() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// The products below run on the active SIMD kernel table. Zero coefficients
// of the left operand are skipped, so structurally zero paths stay exactly 0.

// C (+)= A * B
void gemm(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate = false);
// C (+)= A^T * B
void gemm_tn(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate = false);
// C (+)= A * B^T
void gemm_nt(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate = false);

// Adds `bias` to every row.
void add_row_vector(Matrix& m, std::span<const double> bias);
// Accumulates column sums of m into out.
void accumulate_column_sums(const Matrix& m, std::span<double> out);

double frobenius_norm(const Matrix& m);
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace rivergraph
