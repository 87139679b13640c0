#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "symmcal/simd.hpp"

using namespace symmcal::simd;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& gen, double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = d(gen);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<std::size_t> lengths() {
  std::vector<std::size_t> n;
  for (std::size_t i = 0; i <= 67; ++i) n.push_back(i);
  n.push_back(1000);
  n.push_back(4099);
  return n;
}

}  // namespace

TEST_CASE("scalar table is always available and listed first") {
  const auto all = available_kernels();
  REQUIRE(!all.empty());
  CHECK(all.front() == &scalar_kernels());
  CHECK(all.front()->name == "scalar");
  bool active_listed = false;
  for (const auto* t : all) active_listed |= t == &kernels();
  CHECK(active_listed);
}

TEST_CASE("scalar kernels against plain loops") {
  std::mt19937_64 gen(3);
  const auto a = random_vec(37, gen), b = random_vec(37, gen);
  const auto& k = scalar_kernels();
  double dot = 0, sum = 0, sabs = 0, ssq = 0, mx = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    sum += a[i];
    sabs += std::abs(a[i]);
    ssq += a[i] * a[i];
    mx = std::max(mx, std::abs(a[i]));
  }
  CHECK(k.dot(a.data(), b.data(), a.size()) == doctest::Approx(dot).epsilon(1e-14));
  CHECK(k.sum(a.data(), a.size()) == doctest::Approx(sum).epsilon(1e-14));
  CHECK(k.sum_abs(a.data(), a.size()) == doctest::Approx(sabs).epsilon(1e-14));
  CHECK(k.sum_sq(a.data(), a.size()) == doctest::Approx(ssq).epsilon(1e-14));
  CHECK(k.max_abs(a.data(), a.size()) == mx);
  std::vector<double> y = b;
  k.axpy(y.data(), 0.5, a.data(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(y[i] == b[i] + 0.5 * a[i]);
  y = b;
  k.xpay(y.data(), -1.5, a.data(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(y[i] == a[i] + -1.5 * b[i]);
}

TEST_CASE("every backend matches the scalar reference") {
  const auto& ref = scalar_kernels();
  std::mt19937_64 gen(11);
  for (const auto* t : available_kernels()) {
    CAPTURE(t->name);
    for (std::size_t n : lengths()) {
      CAPTURE(n);
      const auto a = random_vec(n, gen), b = random_vec(n, gen), c = random_vec(n, gen, 0.0, 3.0);
      auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); };
      CHECK(close(t->dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n)));
      CHECK(close(t->sum(a.data(), n), ref.sum(a.data(), n)));
      CHECK(close(t->sum_abs(a.data(), n), ref.sum_abs(a.data(), n)));
      CHECK(close(t->sum_sq(a.data(), n), ref.sum_sq(a.data(), n)));
      CHECK(t->max_abs(a.data(), n) == ref.max_abs(a.data(), n));

      auto y1 = b, y2 = b;
      t->axpy(y1.data(), 0.37, a.data(), n);
      ref.axpy(y2.data(), 0.37, a.data(), n);
      CHECK(same_bits(y1, y2));
      y1 = b, y2 = b;
      t->xpay(y1.data(), -0.61, a.data(), n);
      ref.xpay(y2.data(), -0.61, a.data(), n);
      CHECK(same_bits(y1, y2));
      y1 = b, y2 = b;
      t->mul(y1.data(), a.data(), n);
      ref.mul(y2.data(), a.data(), n);
      CHECK(same_bits(y1, y2));
      y1 = c, y2 = c;
      t->accum_sq_diff(y1.data(), a.data(), b.data(), 1.7, n);
      ref.accum_sq_diff(y2.data(), a.data(), b.data(), 1.7, n);
      CHECK(same_bits(y1, y2));
      y1 = c, y2 = c;
      t->sqrt_inplace(y1.data(), n);
      ref.sqrt_inplace(y2.data(), n);
      CHECK(same_bits(y1, y2));

      std::vector<std::uint8_t> m1(n), m2(n), src(n);
      for (std::size_t i = 0; i < n; ++i) {
        m1[i] = m2[i] = static_cast<std::uint8_t>(gen() & 1u);
        src[i] = static_cast<std::uint8_t>(gen() & 1u);
      }
      t->or_bytes(m1.data(), src.data(), n);
      ref.or_bytes(m2.data(), src.data(), n);
      CHECK(m1 == m2);
    }
  }
}

TEST_CASE("unaligned spans") {
  std::mt19937_64 gen(5);
  const auto a = random_vec(130, gen), b = random_vec(130, gen);
  for (const auto* t : available_kernels())
    for (std::size_t off = 0; off < 4; ++off) {
      const std::size_t n = 120 - off;
      CHECK(std::abs(t->dot(a.data() + off, b.data() + off, n) - scalar_kernels().dot(a.data() + off, b.data() + off, n)) <=
            1e-12 * 120);
    }
}
