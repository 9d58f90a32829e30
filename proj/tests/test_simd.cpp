#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "rupert/simd.hpp"

using namespace rupert::simd;

namespace {

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<double> randoms(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("active kernel table is complete") {
  const KernelTable& k = active_kernels();
  CHECK(k.project != nullptr);
  CHECK(k.support != nullptr);
  CHECK(k.min_slack != nullptr);
  CHECK(scalar_kernels().name == "scalar");
}

TEST_CASE("vector kernels match the scalar reference bit for bit") {
  const KernelTable* fast = avx2_kernels();
  if (fast == nullptr) {
    MESSAGE("AVX2 kernels unavailable on this machine; nothing to compare");
    return;
  }
  const KernelTable& ref = scalar_kernels();
  std::mt19937_64 rng(77);
  for (std::size_t n = 0; n <= 37; ++n) {
    for (std::size_t m : {std::size_t{1}, std::size_t{3}, std::size_t{4}, std::size_t{9}, std::size_t{16}}) {
      const auto m6 = randoms(rng, 6);
      const auto xs = randoms(rng, n), ys = randoms(rng, n), zs = randoms(rng, n);
      std::vector<double> ax(n), ay(n), bx(n), by(n);
      ref.project(m6.data(), xs.data(), ys.data(), zs.data(), n, ax.data(), ay.data());
      fast->project(m6.data(), xs.data(), ys.data(), zs.data(), n, bx.data(), by.data());
      CHECK(bits_equal(ax, bx));
      CHECK(bits_equal(ay, by));
      if (n == 0) continue;

      const auto nx = randoms(rng, m), ny = randoms(rng, m), b = randoms(rng, m);
      std::vector<double> sa(m), sb(m);
      ref.support(xs.data(), ys.data(), n, nx.data(), ny.data(), m, sa.data());
      fast->support(xs.data(), ys.data(), n, nx.data(), ny.data(), m, sb.data());
      CHECK(bits_equal(sa, sb));

      const double r1 = ref.min_slack(xs.data(), ys.data(), n, nx.data(), ny.data(), b.data(), m, 0.7, 0.1, -0.2);
      const double r2 = fast->min_slack(xs.data(), ys.data(), n, nx.data(), ny.data(), b.data(), m, 0.7, 0.1, -0.2);
      CHECK(std::memcmp(&r1, &r2, sizeof r1) == 0);
    }
  }
}

TEST_CASE("support picks the extreme point") {
  const std::vector<double> px{0, 1, 0}, py{0, 0, 1};
  const std::vector<double> nx{1, 0, -1}, ny{0, 1, -1};
  std::vector<double> out(3);
  scalar_kernels().support(px.data(), py.data(), 3, nx.data(), ny.data(), 3, out.data());
  CHECK(out == std::vector<double>{1, 1, 0});
}
