#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <vector>

#include "rivergraph/error.hpp"
#include "rivergraph/matrix.hpp"
#include "rivergraph/simd/kernels.hpp"

using namespace rivergraph;

namespace {

std::vector<double> random_values(std::size_t n, std::mt19937_64& rng, double lo = -3.0, double hi = 3.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// Restores the active table after a test switches it.
struct ActiveGuard {
  simd::Isa saved = simd::active().isa;
  ~ActiveGuard() { simd::select(saved); }
};

}  // namespace

TEST_CASE("scalar kernels are always available and listed first") {
  const auto isas = simd::available();
  REQUIRE_FALSE(isas.empty());
  CHECK(isas.front() == simd::Isa::scalar);
  CHECK(simd::table(simd::Isa::scalar) != nullptr);
  CHECK(simd::table(simd::best_available()) != nullptr);
}

TEST_CASE("select rejects variants this build or CPU cannot run") {
  ActiveGuard guard;
  for (simd::Isa isa : {simd::Isa::avx2, simd::Isa::neon}) {
    if (simd::table(isa) == nullptr) {
      CHECK_THROWS_AS(simd::select(isa), Error);
    } else {
      simd::select(isa);
      CHECK(simd::active().isa == isa);
    }
  }
}

TEST_CASE("every variant matches the scalar reference") {
  const simd::KernelTable& ref = *simd::table(simd::Isa::scalar);
  std::mt19937_64 rng(11);
  for (simd::Isa isa : simd::available()) {
    const simd::KernelTable& k = *simd::table(isa);
    CAPTURE(simd::isa_name(isa));
    // Lengths straddle every vector width and remainder.
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 100u, 1023u}) {
      CAPTURE(n);
      const auto a = random_values(n, rng), b = random_values(n, rng);

      SUBCASE("elementwise kernels are bitwise identical") {
        std::vector<double> y1 = b, y2 = b;
        ref.axpy(0.37, a.data(), y1.data(), n);
        k.axpy(0.37, a.data(), y2.data(), n);
        CHECK(bitwise_equal(y1, y2));

        y1 = a;
        y2 = a;
        ref.scale(-1.25, y1.data(), n);
        k.scale(-1.25, y2.data(), n);
        CHECK(bitwise_equal(y1, y2));

        std::vector<double> r1(n), r2(n);
        ref.relu(a.data(), r1.data(), n);
        k.relu(a.data(), r2.data(), n);
        CHECK(bitwise_equal(r1, r2));

        y1 = b;
        y2 = b;
        ref.relu_mask(a.data(), y1.data(), n);
        k.relu_mask(a.data(), y2.data(), n);
        CHECK(bitwise_equal(y1, y2));

        const auto d = random_values(n, rng, 0.0, 50.0);
        ref.rbf_exponent(d.data(), 0.013, r1.data(), n);
        k.rbf_exponent(d.data(), 0.013, r2.data(), n);
        CHECK(bitwise_equal(r1, r2));
      }

      SUBCASE("reductions agree to rounding") {
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) scale += std::abs(a[i] * b[i]);
        const double tol = 1e-15 * static_cast<double>(n + 1) * (scale + 1.0);
        CHECK(std::abs(ref.dot(a.data(), b.data(), n) - k.dot(a.data(), b.data(), n)) <= tol);
        double abs_sum = 0.0;
        for (double x : a) abs_sum += std::abs(x);
        CHECK(std::abs(ref.sum(a.data(), n) - k.sum(a.data(), n)) <= 1e-15 * static_cast<double>(n + 1) * (abs_sum + 1.0));
      }
    }
  }
}

TEST_CASE("relu maps non-positive and NaN inputs to +0") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::vector<double> in{-2.0, -0.0, 0.0, nan, 1.5, -1e-300, 7.0, nan, -3.0};
  for (simd::Isa isa : simd::available()) {
    CAPTURE(simd::isa_name(isa));
    std::vector<double> out(in.size(), 99.0);
    simd::table(isa)->relu(in.data(), out.data(), in.size());
    const std::vector<double> expected{0.0, 0.0, 0.0, 0.0, 1.5, 0.0, 7.0, 0.0, 0.0};
    CHECK(bitwise_equal(out, expected));
  }
}

TEST_CASE("gemm gives the same products under every variant") {
  ActiveGuard guard;
  std::mt19937_64 rng(5);
  Matrix a(7, 13), b(13, 9), bt(9, 13);
  for (double& x : a.values()) x = std::uniform_real_distribution<double>(-1, 1)(rng);
  for (double& x : b.values()) x = std::uniform_real_distribution<double>(-1, 1)(rng);
  bt = b.transposed();

  // Naive triple loop.
  Matrix ref(7, 9);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 9; ++j)
      for (std::size_t k = 0; k < 13; ++k) ref(i, j) += a(i, k) * b(k, j);

  for (simd::Isa isa : simd::available()) {
    CAPTURE(simd::isa_name(isa));
    simd::select(isa);
    Matrix c, c_tn, c_nt;
    gemm(a, b, c);
    gemm_tn(a.transposed(), b, c_tn);
    gemm_nt(a, bt, c_nt);
    CHECK(max_abs_diff(c, ref) < 1e-13);
    CHECK(max_abs_diff(c_tn, ref) < 1e-13);
    CHECK(max_abs_diff(c_nt, ref) < 1e-13);
  }
}

TEST_CASE("gemm keeps structurally zero rows exactly zero") {
  Matrix a(3, 3);
  a(0, 0) = 1.0;
  a(2, 1) = 2.0;
  Matrix b(3, 4, std::numeric_limits<double>::infinity());
  for (double& x : b.row(0)) x = 1.0;
  for (double& x : b.row(1)) x = 1.0;
  Matrix c;
  gemm(a, b, c);
  for (double x : c.row(1)) CHECK(x == 0.0);
}
