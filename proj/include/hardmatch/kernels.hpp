#pragma once

#include <cstddef>
#include <string_view>

// Inner loops shared by the exhaustive oracle and batch energy evaluation.
// Every kernel has a portable scalar reference; SIMD variants are selected
// once at runtime and must agree with it (bit-exact for axpy, to rounding
// for reductions).
namespace hardmatch::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  std::string_view name;
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // Index of the first minimum of v[0..n), n >= 1.
  std::size_t (*argmin)(const double* v, std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when the variant was not compiled in or the CPU lacks it.
const KernelTable* avx2_table();

// Best table for this CPU, unless HARDMATCH_KERNELS=scalar is set.
const KernelTable& active();

// Override the runtime choice (tests, benchmarking). Throws if the
// requested ISA is unavailable.
void select(Isa isa);

// Rows are padded to a multiple of this many doubles.
inline constexpr std::size_t kLaneWidth = 4;

constexpr std::size_t padded(std::size_t n) {
  return (n + kLaneWidth - 1) / kLaneWidth * kLaneWidth;
}

}  // namespace hardmatch::kernels
