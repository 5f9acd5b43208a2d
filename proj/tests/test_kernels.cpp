#include <doctest.h>

#include <cmath>
#include <vector>

#include "galcert/errors.hpp"
#include "galcert/kernels.hpp"
#include "test_helpers.hpp"

using namespace galcert;
namespace k = galcert::kernels;

namespace {

// Sizes straddling the vector widths and remainder handling.
const std::vector<std::size_t> kSizes = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17,
                                         31, 33, 100, 511, 512, 513};

std::vector<k::Backend> usable_backends() {
  std::vector<k::Backend> out;
  for (k::Backend b : {k::Backend::scalar, k::Backend::avx2, k::Backend::neon})
    if (k::usable(b)) out.push_back(b);
  return out;
}

}  // namespace

TEST_CASE("the scalar backend is always present and something is active") {
  CHECK(k::compiled(k::Backend::scalar));
  CHECK(k::usable(k::Backend::scalar));
  CHECK(k::usable(k::active()));
}

TEST_CASE("backend equivalence: dot and weighted_dot agree with the scalar reference") {
  test::Rng rng(17);
  for (std::size_t n : kSizes) {
    const std::vector<double> a = rng.vector(n);
    const std::vector<double> b = rng.vector(n);
    const std::vector<double> w = rng.vector(n);
    const double ref_dot = k::dot_via(k::Backend::scalar, a, b);
    const double ref_wdot = k::weighted_dot_via(k::Backend::scalar, w, a, b);
    for (k::Backend backend : usable_backends()) {
      const double scale = 1.0 + static_cast<double>(n);
      CHECK(std::abs(k::dot_via(backend, a, b) - ref_dot) <=
            1e-14 * scale * (1.0 + std::abs(ref_dot)));
      CHECK(std::abs(k::weighted_dot_via(backend, w, a, b) - ref_wdot) <=
            1e-14 * scale * (1.0 + std::abs(ref_wdot)));
    }
  }
}

TEST_CASE("backend equivalence: axpy agrees elementwise") {
  test::Rng rng(23);
  for (std::size_t n : kSizes) {
    const std::vector<double> x = rng.vector(n);
    const std::vector<double> y0 = rng.vector(n);
    const double alpha = 0.37;
    std::vector<double> ref = y0;
    k::axpy_via(k::Backend::scalar, alpha, x, ref);
    for (k::Backend backend : usable_backends()) {
      std::vector<double> y = y0;
      k::axpy_via(backend, alpha, x, y);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs(y[i] - ref[i]) <= 1e-15 * (1.0 + std::abs(ref[i])));
    }
  }
}

TEST_CASE("dispatched entry points match the active backend exactly") {
  test::Rng rng(5);
  const std::vector<double> a = rng.vector(301);
  const std::vector<double> b = rng.vector(301);
  const std::vector<double> w = rng.vector(301);
  CHECK(k::dot(a, b) == k::dot_via(k::active(), a, b));
  CHECK(k::weighted_dot(w, a, b) == k::weighted_dot_via(k::active(), w, a, b));
}

TEST_CASE("use() switches the dispatch target") {
  const k::Backend before = k::active();
  k::use(k::Backend::scalar);
  CHECK(k::active() == k::Backend::scalar);
  k::use(before);
  CHECK(k::active() == before);
}

TEST_CASE("weighted_dot symmetry in the two function arguments") {
  test::Rng rng(31);
  const std::vector<double> a = rng.vector(257);
  const std::vector<double> b = rng.vector(257);
  const std::vector<double> w = rng.vector(257);
  const double ab = k::weighted_dot(w, a, b);
  const double ba = k::weighted_dot(w, b, a);
  CHECK(std::abs(ab - ba) <= 1e-14 * (1.0 + std::abs(ab)));
}

TEST_CASE("length mismatch is rejected") {
  const std::vector<double> a(4, 1.0), b(5, 1.0);
  CHECK_THROWS_AS((void)k::dot(a, b), Error);
  std::vector<double> y(4, 0.0);
  CHECK_THROWS_AS(k::axpy(1.0, b, y), Error);
}

TEST_CASE("requesting an uncompiled backend fails cleanly") {
  for (k::Backend backend : {k::Backend::avx2, k::Backend::neon}) {
    if (k::usable(backend)) continue;
    CHECK_THROWS_AS(k::use(backend), Error);
  }
}
