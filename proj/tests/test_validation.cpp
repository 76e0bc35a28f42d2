#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "dessim/validation.hpp"
#include "dessim/workload.hpp"

using namespace dessim;

namespace {

Moments with_shape(double skew, double kurt) {
  Moments m;
  m.n = 100;
  m.skewness = skew;
  m.kurtosis = kurt;
  return m;
}

std::vector<std::vector<double>> lognormal_runs(std::uint64_t seed, std::size_t runs, std::size_t n,
                                                double sigma) {
  std::vector<std::vector<double>> out;
  for (std::size_t r = 0; r < runs; ++r) {
    const auto t = synth_trace(n + 1, 100.0, 19.0, sigma, derive_seed(seed, r));
    std::vector<double> v;
    for (std::size_t i = 1; i < t.entries.size(); ++i) v.push_back(to_ms(t.entries[i].duration));
    out.push_back(v);
  }
  return out;
}

}  // namespace

TEST_CASE("ks_distance") {
  const std::vector<double> a = {1, 2, 3, 4};
  CHECK(ks_distance(Ecdf(a), Ecdf(a)) == 0.0);
  CHECK(ks_distance(Ecdf(std::vector<double>{1, 2}), Ecdf(std::vector<double>{3, 4})) == 1.0);
  CHECK(ks_distance(Ecdf(a), Ecdf(std::vector<double>{1, 2, 3, 10})) == 0.25);
  CHECK(oracle::ks_distance(a, {1, 2, 3, 10}) == 0.25);
  CHECK_THROWS_AS(ks_distance(Ecdf(), Ecdf(a)), InputError);
}

TEST_CASE("property: ks_distance matches brute force exactly and is symmetric") {
  std::mt19937_64 rng(12);
  for (int iter = 0; iter < 200; ++iter) {
    const auto a = oracle::random_sample(rng, 1, 50);
    const auto b = oracle::random_sample(rng, 1, 50);
    const double d = ks_distance(Ecdf(a), Ecdf(b));
    CHECK(d == oracle::ks_distance(a, b));
    CHECK(d == ks_distance(Ecdf(b), Ecdf(a)));
    CHECK((d >= 0.0 && d <= 1.0));
  }
}

TEST_CASE("shape_verdict thresholds") {
  CHECK(shape_verdict(with_shape(2.0, 9.0), with_shape(2.0, 9.0)).verdict == Verdict::shape_valid);

  const auto near = shape_verdict(with_shape(2.0, 10.0), with_shape(1.6, 11.0));
  CHECK(near.skewness_diff == doctest::Approx(0.4));
  CHECK(near.kurtosis_rel_diff == doctest::Approx(0.1));
  CHECK(near.verdict == Verdict::shape_valid);

  const auto far = shape_verdict(with_shape(3.0, 10.0), with_shape(1.0, 10.0));
  CHECK_FALSE(far.skewness_ok);
  CHECK(far.kurtosis_ok);
  CHECK(far.verdict == Verdict::shape_divergent);

  const auto kurt = shape_verdict(with_shape(1.0, 10.0), with_shape(1.0, 13.0));
  CHECK_FALSE(kurt.kurtosis_ok);
  CHECK(kurt.verdict == Verdict::shape_divergent);

  CHECK_THROWS_AS(shape_verdict(with_shape(std::nan(""), 3.0), with_shape(0.0, 3.0)), InputError);
  CHECK_THROWS_AS(shape_verdict(Moments{}, with_shape(0.0, 3.0)), InputError);
}

TEST_CASE("property: loosening tolerances never flips valid to divergent") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> skew(-1.0, 4.0), kurt(1.0, 30.0), tol(0.0, 1.0);
  for (int iter = 0; iter < 500; ++iter) {
    const auto m = with_shape(skew(rng), kurt(rng));
    const auto s = with_shape(skew(rng), kurt(rng));
    const double st = tol(rng), kt = tol(rng);
    if (shape_verdict(m, s, st, kt).verdict == Verdict::shape_valid) {
      CHECK(shape_verdict(m, s, st + tol(rng), kt + tol(rng)).verdict == Verdict::shape_valid);
    }
  }
}

TEST_CASE("compare: self-comparison") {
  const auto runs = lognormal_runs(1, 4, 500, 0.3);
  const auto report = compare(runs, runs);
  CHECK(report.ks_distance == 0.0);
  CHECK(report.checks.skewness_diff == 0.0);
  CHECK(report.checks.kurtosis_rel_diff == 0.0);
  CHECK(report.checks.verdict == Verdict::shape_valid);
  CHECK(report.mean_difference == 0.0);
  REQUIRE(report.percentiles.size() == 4);
  CHECK(report.percentiles[0].p == 50.0);
  CHECK(report.percentiles[1].p == 95.0);
  CHECK(report.percentiles[2].p == 99.0);
  CHECK(report.percentiles[3].p == 99.9);
  CHECK(report.percentiles[0].measured == report.percentiles[0].simulated);
}

TEST_CASE("compare: swapping sides negates the mean difference and swaps columns") {
  const auto m = lognormal_runs(2, 4, 400, 0.25);
  const auto s = lognormal_runs(3, 3, 400, 0.25);
  const auto ab = compare(m, s);
  const auto ba = compare(s, m);
  CHECK(ab.mean_difference == -ba.mean_difference);
  CHECK(ab.mean_difference_ci.lower == doctest::Approx(-ba.mean_difference_ci.upper).epsilon(1e-12));
  CHECK(ab.ks_distance == ba.ks_distance);
  CHECK(ab.checks.verdict == ba.checks.verdict);
  for (std::size_t i = 0; i < ab.percentiles.size(); ++i) {
    CHECK(ab.percentiles[i].measured == ba.percentiles[i].simulated);
    CHECK(ab.percentiles[i].simulated == ba.percentiles[i].measured);
  }
}

TEST_CASE("compare: different shapes are divergent; KS check is optional") {
  const auto narrow = lognormal_runs(4, 2, 2000, 0.05);
  const auto wide = lognormal_runs(5, 2, 2000, 0.9);
  CHECK(compare(narrow, wide).checks.verdict == Verdict::shape_divergent);

  const auto a = lognormal_runs(6, 2, 2000, 0.2);
  ValidationOptions opts;
  opts.ks_max = 0.0;
  const auto shifted = [&] {
    auto r = a;
    for (auto& run : r) for (auto& v : run) v += 1.0;
    return r;
  }();
  const auto report = compare(a, shifted, opts);
  CHECK(report.checks.skewness_ok);
  CHECK(report.checks.kurtosis_ok);
  CHECK(report.checks.ks_ok == false);
  CHECK(report.checks.verdict == Verdict::shape_divergent);
  CHECK(report.mean_difference == doctest::Approx(-1.0));
}

TEST_CASE("compare: warmup trimming, extra rows and errors") {
  const auto runs = lognormal_runs(7, 2, 100, 0.2);
  ValidationOptions opts;
  opts.warmup_fraction = 0.05;
  opts.extra_percentiles = {75.0};
  const auto report = compare(runs, runs, opts);
  CHECK(report.measured.run_sizes == std::vector<std::size_t>{95, 95});
  REQUIRE(report.percentiles.size() == 5);
  CHECK(report.percentiles[4].p == 75.0);

  const std::vector<std::vector<double>> none;
  CHECK_THROWS_AS(compare(none, runs), InputError);
  CHECK_THROWS_AS(compare(runs, none), InputError);
}

TEST_CASE("percentile table renders two-decimal intervals") {
  ValidationReport report;
  PercentileRow row;
  row.p = 50;
  row.measured.interval = {22.83, 22.84, 0.95};
  row.simulated.interval = {18.93, 18.97, 0.95};
  report.percentiles.push_back(row);
  PercentileRow tail;
  tail.p = 99.9;
  tail.measured.interval = {69.14, 79.70, 0.95};
  tail.simulated.interval = {53.29, 60.28, 0.95};
  report.percentiles.push_back(tail);
  const std::string table = render_percentile_table(report);
  CHECK(table.find("50th | [22.83, 22.84] | [18.93, 18.97]") != std::string::npos);
  CHECK(table.find("99.9th | [69.14, 79.70] | [53.29, 60.28]") != std::string::npos);
  CHECK(percentile_label(99.9) == "99.9th");
  CHECK(parse_verdict(to_string(Verdict::shape_divergent)) == Verdict::shape_divergent);
}
