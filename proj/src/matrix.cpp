#include "rivergraph/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rivergraph/error.hpp"
#include "rivergraph/simd/kernels.hpp"

namespace rivergraph {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(Errc::shape_mismatch, what);
}

void prepare_output(Matrix& c, std::size_t rows, std::size_t cols, bool accumulate) {
  if (accumulate) {
    require(c.rows() == rows && c.cols() == cols, "accumulating product into wrongly shaped matrix");
  } else if (c.rows() != rows || c.cols() != cols) {
    c = Matrix(rows, cols);
  } else {
    c.fill(0.0);
  }
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void Matrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

void gemm(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate) {
  require(a.cols() == b.rows(), "gemm: inner dimensions differ");
  prepare_output(c, a.rows(), b.cols(), accumulate);
  const auto& k = simd::active();
  const std::size_t n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* out = c.data() + i * n;
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const double coef = a(i, p);
      if (coef != 0.0) k.axpy(coef, b.data() + p * n, out, n);
    }
  }
}

void gemm_tn(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate) {
  require(a.rows() == b.rows(), "gemm_tn: row counts differ");
  prepare_output(c, a.cols(), b.cols(), accumulate);
  const auto& k = simd::active();
  const std::size_t n = b.cols();
  for (std::size_t p = 0; p < a.rows(); ++p) {
    const double* src = b.data() + p * n;
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double coef = a(p, i);
      if (coef != 0.0) k.axpy(coef, src, c.data() + i * n, n);
    }
  }
}

void gemm_nt(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate) {
  require(a.cols() == b.cols(), "gemm_nt: column counts differ");
  prepare_output(c, a.rows(), b.rows(), accumulate);
  const auto& k = simd::active();
  const std::size_t inner = a.cols();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j)
      c(i, j) += k.dot(a.data() + i * inner, b.data() + j * inner, inner);
}

void add_row_vector(Matrix& m, std::span<const double> bias) {
  require(bias.size() == m.cols(), "bias length differs from column count");
  const auto& k = simd::active();
  for (std::size_t r = 0; r < m.rows(); ++r) k.axpy(1.0, bias.data(), m.data() + r * m.cols(), m.cols());
}

void accumulate_column_sums(const Matrix& m, std::span<double> out) {
  require(out.size() == m.cols(), "column-sum target has wrong length");
  const auto& k = simd::active();
  for (std::size_t r = 0; r < m.rows(); ++r) k.axpy(1.0, m.data() + r * m.cols(), out.data(), m.cols());
}

double frobenius_norm(const Matrix& m) {
  return std::sqrt(simd::active().dot(m.data(), m.data(), m.size()));
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "max_abs_diff: shapes differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

}  // namespace rivergraph
