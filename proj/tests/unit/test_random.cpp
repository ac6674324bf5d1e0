#include "rcmf/parallel.hpp"
#include "rcmf/random.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace rcmf;

TEST_CASE("streams are keyed by seed and index") {
  Rng a = make_stream(7, 3);
  Rng b = make_stream(7, 3);
  Rng c = make_stream(7, 4);
  Rng d = make_stream(8, 3);
  const auto va = a();
  CHECK(va == b());
  CHECK(va != c());
  CHECK(va != d());
}

TEST_CASE("uniform helpers") {
  Rng rng = make_stream(1, 0);
  std::map<std::uint64_t, std::int64_t> counts;
  for (int i = 0; i < 60000; ++i) {
    const auto u = uniform01(rng);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    ++counts[uniform_below(rng, 6)];
  }
  std::map<std::uint64_t, double> expected;
  for (std::uint64_t k = 0; k < 6; ++k) {
    expected[k] = 1.0 / 6;
  }
  CHECK(testing::goodness_of_fit(counts, expected, 60000).p_value > 1e-3);
}

TEST_CASE("binomial sampler matches the exact pmf") {
  // Inversion regime, BTRD regime and the p > 1/2 reflection.
  struct Case {
    std::int64_t n;
    double p;
  };
  for (const auto c : {Case{20, 0.1}, Case{5000, 0.01}, Case{400, 0.3}, Case{100000, 0.5},
                       Case{60, 0.9}, Case{1, 0.5}}) {
    Rng rng = make_stream(42, static_cast<std::uint64_t>(c.n));
    std::map<std::int64_t, std::int64_t> counts;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
      ++counts[binomial(rng, c.n, c.p)];
    }
    std::map<std::int64_t, double> expected;
    for (std::int64_t k = 0; k <= c.n; ++k) {
      const double pk = std::exp(binomial_log_pmf(c.n, c.p, k));
      if (pk > 1e-14) {
        expected[k] = pk;
      }
    }
    const auto test = testing::goodness_of_fit(counts, expected, draws);
    INFO("n=" << c.n << " p=" << c.p << " chi2=" << test.statistic << " dof=" << test.dof);
    CHECK(test.p_value > 1e-3);
  }
}

TEST_CASE("binomial edge cases") {
  Rng rng = make_stream(3, 0);
  CHECK(binomial(rng, 0, 0.4) == 0);
  CHECK(binomial(rng, 10, 0.0) == 0);
  CHECK(binomial(rng, 10, 1.0) == 10);
  CHECK(binomial_log_pmf(10, 0.5, 11) == -INFINITY);
  CHECK(binomial_log_pmf(10, 0.5, -1) == -INFINITY);
  CHECK(std::exp(binomial_log_pmf(3, 0.5, 1)) == doctest::Approx(0.375));
}

TEST_CASE("replica runner: serial and parallel agree") {
  auto body = [](Rng& rng, std::size_t k) { return static_cast<double>(rng() % 1000) + static_cast<double>(k); };
  const auto serial = run_replicas<double>(37, 99, body, Execution::Serial);
  const auto parallel = run_replicas<double>(37, 99, body, Execution::Parallel);
  CHECK(serial == parallel);
  // Earlier replicas do not depend on the replica count.
  const auto fewer = run_replicas<double>(10, 99, body, Execution::Parallel);
  for (std::size_t k = 0; k < fewer.size(); ++k) {
    CHECK(fewer[k] == serial[k]);
  }
}
