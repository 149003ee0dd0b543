#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "hardmatch/kernels.hpp"
#include "kernels_impl.hpp"

namespace hardmatch::kernels {
namespace {

constexpr KernelTable kScalar{Isa::scalar, "scalar", &scalar::axpy,
                              &scalar::dot, &scalar::argmin};

#if defined(HARDMATCH_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::avx2, "avx2", &avx2::axpy, &avx2::dot,
                            &avx2::argmin};
#endif

bool cpu_has_avx2() {
#if defined(HARDMATCH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* detect() {
  if (const char* env = std::getenv("HARDMATCH_KERNELS");
      env != nullptr && std::string_view(env) == "scalar")
    return &kScalar;
  if (const KernelTable* t = avx2_table()) return t;
  return &kScalar;
}

const KernelTable*& current() {
  static const KernelTable* table = detect();
  return table;
}

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* avx2_table() {
#if defined(HARDMATCH_HAVE_AVX2)
  if (cpu_has_avx2()) return &kAvx2;
#endif
  return nullptr;
}

const KernelTable& active() { return *current(); }

void select(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      current() = &kScalar;
      return;
    case Isa::avx2:
      if (const KernelTable* t = avx2_table()) {
        current() = t;
        return;
      }
      throw std::runtime_error("AVX2 kernels unavailable on this host");
  }
}

}  // namespace hardmatch::kernels
