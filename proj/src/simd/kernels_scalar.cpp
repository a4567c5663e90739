#include "rivergraph/simd/kernels.hpp"

namespace rivergraph::simd {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void relu(const double* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = in[i] > 0.0 ? in[i] : 0.0;
}

void relu_mask(const double* pre, double* grad, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) grad[i] = pre[i] > 0.0 ? grad[i] : 0.0;
}

void rbf_exponent(const double* d, double inv_sigma_sq, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (-0.5 * d[i]) * d[i] * inv_sigma_sq;
}

}  // namespace

namespace detail {
const KernelTable scalar_table{Isa::scalar, dot, sum, axpy, scale, relu, relu_mask, rbf_exponent};
}

}  // namespace rivergraph::simd
