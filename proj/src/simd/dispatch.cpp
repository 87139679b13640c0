#include <cstdlib>
#include <string_view>

#include "symmcal/simd.hpp"

namespace symmcal::simd {

#ifndef SYMMCAL_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif
#ifndef SYMMCAL_HAVE_NEON
const KernelTable* neon_kernels() { return nullptr; }
#endif

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
  if (const auto* t = avx2_kernels()) out.push_back(t);
  if (const auto* t = neon_kernels()) out.push_back(t);
  return out;
}

namespace {

const KernelTable& select() {
  const char* pin = std::getenv("SYMMCAL_SIMD");
  if (pin != nullptr) {
    const std::string_view want{pin};
    for (const auto* t : available_kernels())
      if (t->name == want) return *t;
    // Unknown or unavailable backend: fall through to auto-selection.
  }
  if (const auto* t = avx2_kernels()) return *t;
  if (const auto* t = neon_kernels()) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable& kernels() {
  static const KernelTable& active = select();
  return active;
}

}  // namespace symmcal::simd
