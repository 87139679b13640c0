#pragma once

// Data-parallel inner loops used by every module.
//
// Each backend fills a KernelTable of plain function pointers. The scalar
// table is the reference; vector tables must agree with it bitwise for the
// elementwise kernels and to rounding for the reductions (different
// association order). The active table is picked once at startup from CPU
// features and can be pinned with SYMMCAL_SIMD=scalar|avx2|neon.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace symmcal::simd {

struct KernelTable {
  std::string_view name;

  // reductions
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  double (*sum_abs)(const double* a, std::size_t n);
  double (*sum_sq)(const double* a, std::size_t n);
  double (*max_abs)(const double* a, std::size_t n);

  // elementwise
  /// y += alpha * x
  void (*axpy)(double* y, double alpha, const double* x, std::size_t n);
  /// y = x + alpha * y
  void (*xpay)(double* y, double alpha, const double* x, std::size_t n);
  /// y *= m
  void (*mul)(double* y, const double* m, std::size_t n);
  /// out += (c * (a - b))^2
  void (*accum_sq_diff)(double* out, const double* a, const double* b, double c,
                        std::size_t n);
  void (*sqrt_inplace)(double* a, std::size_t n);
  /// dst |= src, bytes are 0/1
  void (*or_bytes)(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);
};

const KernelTable& scalar_kernels();

/// Null when the backend is not compiled in or the CPU lacks the features.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

/// Every backend usable on this machine, scalar first.
std::vector<const KernelTable*> available_kernels();

/// The table selected for this process.
const KernelTable& kernels();

}  // namespace symmcal::simd
