#include <doctest.h>

#include <cmath>
#include <vector>

#include "ltfu/rng.hpp"
#include "ltfu/stats.hpp"

using namespace ltfu;

TEST_CASE("same seed reproduces the sequence exactly") {
  RngStream a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

  RngStream c(42), d(42);
  for (int i = 0; i < 100; ++i) {
    CHECK(c.normal() == d.normal());
    CHECK(c.uniform() == d.uniform());
    CHECK(c.gamma(2.0, 0.5) == d.gamma(2.0, 0.5));
    CHECK(c.poisson(5.0) == d.poisson(5.0));
  }
}

TEST_CASE("substreams differ from the parent and from each other") {
  RngStream root(7);
  auto s1 = root.substream("alpha");
  auto s2 = root.substream("beta");
  auto s1_again = root.substream("alpha");
  CHECK(s1.next_u64() != s2.next_u64());
  RngStream s1_b = RngStream(7).substream("alpha");
  CHECK(s1_again.next_u64() == s1_b.next_u64());
}

TEST_CASE("uniform stays in [0,1) and uniform_pos in (0,1]") {
  RngStream rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = rng.uniform_pos();
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("uniform_int covers [0, bound) roughly evenly") {
  RngStream rng(11);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[rng.uniform_int(7)];
  for (int c : counts) {
    CHECK(c > 9000);
    CHECK(c < 11000);
  }
  CHECK_THROWS(rng.uniform_int(0));
}

TEST_CASE("normal draws have the right first two moments") {
  RngStream rng(5);
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::fabs(mean) < 0.02);
  CHECK(std::fabs(var - 1.0) < 0.03);
}

TEST_CASE("exponential mean matches 1/rate") {
  RngStream rng(9);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rng.exponential(2.0);
  CHECK(std::fabs(sum / n - 0.5) < 0.01);
  CHECK_THROWS(rng.exponential(0.0));
}

TEST_CASE("gamma matches mean and variance, including shape below one") {
  RngStream rng(13);
  const int n = 200000;
  for (const double shape : {0.5, 1.0, 4.0}) {
    const double scale = 1.0 / shape;  // mean 1, variance 1/shape
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = rng.gamma(shape, scale);
      sum += x;
      sq += x * x;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(std::fabs(mean - 1.0) < 0.02);
    CHECK(std::fabs(var - 1.0 / shape) < 0.05 * (1.0 + 1.0 / shape));
  }
}

TEST_CASE("poisson mean is close to the rate") {
  RngStream rng(17);
  const int n = 100000;
  long sum = 0;
  for (int i = 0; i < n; ++i) sum += rng.poisson(5.0);
  CHECK(std::fabs(static_cast<double>(sum) / n - 5.0) < 0.05);
}

TEST_CASE("derive_seed is stable and label-sensitive") {
  CHECK(derive_seed(1, "dae") == derive_seed(1, "dae"));
  CHECK(derive_seed(1, "dae") != derive_seed(1, "mice"));
  CHECK(derive_seed(1, "dae") != derive_seed(2, "dae"));
}

TEST_CASE("normal quantile inverts the normal cdf") {
  for (const double p : {0.001, 0.01, 0.025, 0.2, 0.5, 0.8, 0.975, 0.99, 0.999}) {
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-10));
  }
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK_THROWS(normal_quantile(0.0));
  CHECK_THROWS(normal_quantile(1.0));
}
