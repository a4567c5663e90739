#include <atomic>
#include <cstdlib>
#include <string>

#include "rivergraph/error.hpp"
#include "rivergraph/simd/kernels.hpp"

namespace rivergraph::simd {
namespace {

bool cpu_has(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(RIVERGRAPH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(RIVERGRAPH_HAVE_NEON)
      return true;  // mandatory on aarch64
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* initial_table() noexcept {
  Isa isa = best_available();
  if (const char* env = std::getenv("RIVERGRAPH_SIMD")) {
    std::string want(env);
    for (Isa candidate : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (want == isa_name(candidate) && table(candidate) != nullptr) isa = candidate;
    }
  }
  return table(isa);
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> ptr{initial_table()};
  return ptr;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

const KernelTable* table(Isa isa) noexcept {
  if (!cpu_has(isa)) return nullptr;
  switch (isa) {
    case Isa::scalar:
      return &detail::scalar_table;
    case Isa::avx2:
#if defined(RIVERGRAPH_HAVE_AVX2)
      return &detail::avx2_table;
#else
      return nullptr;
#endif
    case Isa::neon:
#if defined(RIVERGRAPH_HAVE_NEON)
      return &detail::neon_table;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

std::vector<Isa> available() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon})
    if (table(isa) != nullptr) out.push_back(isa);
  return out;
}

Isa best_available() noexcept {
  if (table(Isa::avx2) != nullptr) return Isa::avx2;
  if (table(Isa::neon) != nullptr) return Isa::neon;
  return Isa::scalar;
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_acquire); }

void select(Isa isa) {
  const KernelTable* t = table(isa);
  if (t == nullptr) throw Error(Errc::invalid_argument, "SIMD variant not available: " + std::string(isa_name(isa)));
  current().store(t, std::memory_order_release);
}

}  // namespace rivergraph::simd
