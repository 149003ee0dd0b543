#pragma once

#include <cstddef>

namespace hardmatch::kernels {

namespace scalar {
void axpy(double a, const double* x, double* y, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
std::size_t argmin(const double* v, std::size_t n);
}  // namespace scalar

#if defined(HARDMATCH_HAVE_AVX2)
namespace avx2 {
void axpy(double a, const double* x, double* y, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
std::size_t argmin(const double* v, std::size_t n);
}  // namespace avx2
#endif

}  // namespace hardmatch::kernels
