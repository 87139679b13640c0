#include "symmcal/simd.hpp"

#include <algorithm>
#include <cmath>

namespace symmcal::simd {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i];
  return s;
}

double sum_abs(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(a[i]);
  return s;
}

double sum_sq(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

double max_abs(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i]));
  return m;
}

void axpy(double* y, double alpha, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpay(double* y, double alpha, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + alpha * y[i];
}

void mul(double* y, const double* m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= m[i];
}

void accum_sq_diff(double* out, const double* a, const double* b, double c,
                   std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = c * (a[i] - b[i]);
    out[i] += d * d;
  }
}

void sqrt_inplace(double* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) a[i] = std::sqrt(a[i]);
}

void or_bytes(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] |= src[i];
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", dot,  sum,  sum_abs,       sum_sq,
                                 max_abs,  axpy, xpay, mul, accum_sq_diff,
                                 sqrt_inplace, or_bytes};
  return table;
}

}  // namespace symmcal::simd
