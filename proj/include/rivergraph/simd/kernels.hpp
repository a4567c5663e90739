#pragma once

// Data-parallel inner loops used by the rewiring and message-passing code.
//
// Each kernel has a scalar reference implementation plus optional AVX2 / NEON
// variants. The variant is picked once at startup from CPU features (override
// with RIVERGRAPH_SIMD=scalar|avx2|neon) and can be switched with select().
//
// Elementwise kernels are bitwise identical across variants. Reductions
// (dot, sum) reorder additions and agree to a few ulps.

#include <cstddef>
#include <string_view>
#include <vector>

namespace rivergraph::simd {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // x *= a
  void (*scale)(double a, double* x, std::size_t n);
  // out = max(in, 0) with +0.0 for non-positive (and NaN) inputs
  void (*relu)(const double* in, double* out, std::size_t n);
  // grad = pre > 0 ? grad : 0
  void (*relu_mask)(const double* pre, double* grad, std::size_t n);
  // out = -0.5 * d * d * inv_sigma_sq, the RBF exponent
  void (*rbf_exponent)(const double* d, double inv_sigma_sq, double* out, std::size_t n);
};

std::string_view isa_name(Isa isa) noexcept;

// Variant table, or nullptr when it is not compiled in or the CPU lacks it.
const KernelTable* table(Isa isa) noexcept;

// All variants usable on this machine, scalar first.
std::vector<Isa> available();

Isa best_available() noexcept;

const KernelTable& active() noexcept;

// Throws rivergraph::Error(invalid_argument) when the variant is unavailable.
void select(Isa isa);

namespace detail {
extern const KernelTable scalar_table;
#if defined(RIVERGRAPH_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
#if defined(RIVERGRAPH_HAVE_NEON)
extern const KernelTable neon_table;
#endif
}  // namespace detail

}  // namespace rivergraph::simd
