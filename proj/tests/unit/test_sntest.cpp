#include "factorcp/error.hpp"
#include "factorcp/sntest.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace fcp;

namespace {

ProjectedSeries series(std::initializer_list<double> values) {
  ProjectedSeries z;
  z.z = Eigen::VectorXd(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) z.z(i++) = v;
  return z;
}

ProjectedSeries normal_series(Eigen::Index n, std::uint64_t seed, double sd_after = 1.0) {
  PhiloxStream stream(seed, stream_id(StreamPurpose::Replication));
  std::normal_distribution<double> normal;
  ProjectedSeries z;
  z.z.resize(n);
  for (Eigen::Index t = 0; t < n; ++t) z.z(t) = normal(stream) * (t < n / 2 ? 1.0 : sd_after);
  return z;
}

// Windows shorter than two points contribute nothing.
double nu(const ProjectedSeries& z, Eigen::Index begin, Eigen::Index end) {
  return end - begin < 2 ? 0.0 : window_variance(z, begin, end);
}

// V_r summed term by term in 1-based indices.
double literal_normalizer(const ProjectedSeries& z, Eigen::Index r) {
  const auto n = z.z.size();
  const double rd = static_cast<double>(r), nd = static_cast<double>(n);
  double sum = 0.0;
  for (Eigen::Index i = 1; i <= r; ++i) {
    const bool short_window = i < 2 || r - i < 2;
    const double d = short_window ? 0.0 : nu(z, 0, i) - nu(z, i, r);
    const double id = static_cast<double>(i);
    sum += std::pow(id * (rd - id) * d / rd, 2);
  }
  for (Eigen::Index i = r + 1; i <= n; ++i) {
    const bool short_window = (i - 1) - r < 2 || n - (i - 1) < 2;
    const double d = short_window ? 0.0 : nu(z, r, i - 1) - nu(z, i - 1, n);
    const double id = static_cast<double>(i);
    sum += std::pow((id - rd - 1.0) * (nd - id + 1.0) * d / (nd - rd), 2);
  }
  return sum / nd;
}

}  // namespace

TEST_CASE("window variance by hand") {
  CHECK(window_variance(series({1, 1, 1, 1}), 0, 4) == 0.0);
  CHECK(window_variance(series({1, -1, 1, -1}), 0, 4) == doctest::Approx(1.0));
  CHECK(window_variance(series({0, 3}), 0, 2) == doctest::Approx(2.25));
  try {
    window_variance(series({1, 2, 3}), 1, 2);
    FAIL("expected WindowTooShort");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WindowTooShort);
  }
}

TEST_CASE("prefix-sum window moments match direct window variances") {
  const auto z = normal_series(80, 3);
  const WindowMoments moments(z.z);
  for (Eigen::Index b = 0; b < 80; b += 7)
    for (Eigen::Index e = b + 2; e <= 80; e += 5)
      CHECK(moments.variance(b, e) == doctest::Approx(window_variance(z, b, e)).epsilon(1e-10));
  CHECK(moments.variance(4, 5) == 0.0);
}

TEST_CASE("normalizer matches the literal double sum") {
  const auto z = normal_series(60, 5);
  const WindowMoments moments(z.z);
  for (Eigen::Index r = 1; r < 60; ++r) {
    CHECK(sn_normalizer(moments, r) == doctest::Approx(literal_normalizer(z, r)).epsilon(1e-9));
  }
}

TEST_CASE("statistic is invariant to scale and location") {
  const auto z = normal_series(400, 7, 1.5);
  const auto base = sn_statistic(z, 0.1, 0.9);
  for (double c : {10.0, -0.01, 3.7}) {
    ProjectedSeries scaled{z.z * c, {}};
    CHECK(sn_statistic(scaled, 0.1, 0.9).t_n == doctest::Approx(base.t_n).epsilon(1e-9));
  }
  for (double shift : {5.0, -100.0}) {
    ProjectedSeries shifted{z.z.array() + shift, {}};
    const auto s = sn_statistic(shifted, 0.1, 0.9);
    CHECK(s.t_n == doctest::Approx(base.t_n).epsilon(1e-9));
    CHECK(s.argmax_r == base.argmax_r);
  }
}

TEST_CASE("argmax stays inside the trimming window") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto s = sn_statistic(normal_series(200, seed), 0.2, 0.7);
    CHECK(s.argmax_r > 40);
    CHECK(s.argmax_r < 140);
    CHECK(s.t_n >= 0.0);
  }
}

TEST_CASE("constant series is degenerate") {
  ProjectedSeries z{Eigen::VectorXd::Constant(50, 2.0), {}};
  try {
    sn_statistic(z, 0.1, 0.9);
    FAIL("expected DegenerateNormalizer");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateNormalizer);
  }
}

TEST_CASE("size on iid normal series") {
  const auto& cv = test::default_table();
  const double crit = cv.critical_value(0.05);
  int rejections = 0;
  constexpr int kReps = 1000;
  for (int rep = 0; rep < kReps; ++rep) {
    rejections += sn_statistic(normal_series(400, 1000 + static_cast<std::uint64_t>(rep)), 0.1, 0.9).t_n > crit;
  }
  const double rate = static_cast<double>(rejections) / kReps;
  MESSAGE("empirical size " << rate);
  // three binomial standard errors around 0.05
  CHECK(rate >= 0.05 - 3 * std::sqrt(0.05 * 0.95 / kReps));
  CHECK(rate <= 0.05 + 3 * std::sqrt(0.05 * 0.95 / kReps));
}

TEST_CASE("power against a variance doubling at the midpoint") {
  const double crit = test::default_table().critical_value(0.05);
  int rejections = 0;
  constexpr int kReps = 300;
  for (int rep = 0; rep < kReps; ++rep) {
    rejections +=
        sn_statistic(normal_series(400, 5000 + static_cast<std::uint64_t>(rep), std::sqrt(2.0)), 0.1, 0.9).t_n > crit;
  }
  const double rate = static_cast<double>(rejections) / kReps;
  MESSAGE("empirical power " << rate);
  CHECK(rate > 0.9);
}

TEST_CASE("projection direction for loadings e1 then e2 in three dimensions") {
  const Eigen::Index n = 600, p = 3;
  Eigen::MatrixXd a1 = Eigen::MatrixXd::Zero(p, 1);
  Eigen::MatrixXd a2 = Eigen::MatrixXd::Zero(p, 1);
  a1(0, 0) = 3.0;
  a2(1, 0) = 1.0;
  const auto clean = test::exact_two_regime(n, n / 2, a1, a2, 9);
  PanelMatrix y = clean.values() + 0.1 * test::gaussian_matrix(n, p, 10);
  const TimeSeriesPanel panel(y);

  const auto proj = choose_projection(panel, 0.1, 0.9, 1, 1, 1);
  REQUIRE(proj.b_source == 1);
  CHECK(proj.b.norm() == doctest::Approx(1.0));
  const auto& from = proj.boundaries.first.b_hat.matrix();
  const auto& other = proj.boundaries.second.b_hat.matrix();
  // b lies in the first complement
  CHECK((from * (from.transpose() * proj.b) - proj.b).norm() <= 1e-10);

  // Brute force over unit vectors cos(t) u1 + sin(t) u2 spanning that complement.
  double best_e2 = 0.0, least_other = 1e300;
  for (int i = 0; i < 20000; ++i) {
    const double t = std::numbers::pi * i / 20000.0;
    const Eigen::VectorXd u = std::cos(t) * from.col(0) + std::sin(t) * from.col(1);
    best_e2 = std::max(best_e2, std::abs(u(1)));
    least_other = std::min(least_other, (other.transpose() * u).norm());
  }
  // b is the direction of the first complement least visible to the second
  CHECK((other.transpose() * proj.b).norm() <= least_other + 1e-6);
  CHECK(std::abs(proj.b(1)) >= best_e2 - 1e-4);
  CHECK(std::abs(proj.b(1)) > 0.99);
}

TEST_CASE("farthest direction between coordinate complements") {
  Eigen::MatrixXd from(3, 2), other(3, 2);
  from << 0, 0, 1, 0, 0, 1;   // span{e2, e3}
  other << 1, 0, 0, 0, 0, 1;  // span{e1, e3}
  const auto b = farthest_direction(SubspaceBasis(from), SubspaceBasis(other));
  CHECK(std::abs(b(1)) == doctest::Approx(1.0));
  CHECK(b(1) > 0.0);
}

TEST_CASE("test result is deterministic and well-formed") {
  DgpSpec spec;
  spec.seed = 31;
  const auto panel = generate(spec).panel;
  TestOptions options;
  options.k1 = 3;
  options.k2 = 3;
  options.alphas = {0.10, 0.05, 0.01};
  const auto& cv = test::default_table();
  const auto a = test_change_point(panel, 0.1, 0.9, cv, options);
  const auto b = test_change_point(panel, 0.1, 0.9, cv, options);
  CHECK((a.b.array() == b.b.array()).all());
  CHECK(a.t_n == b.t_n);
  CHECK(a.p_value > 0.0);
  CHECK(a.p_value <= 1.0);
  CHECK(a.argmax_r > 40);
  CHECK(a.argmax_r < 360);
  CHECK(a.reject.size() == 3);
  for (const auto& [alpha, reject] : a.reject) CHECK(reject == (a.t_n > a.critical_values.at(alpha)));
  CHECK((a.reject.at(0.01) <= a.reject.at(0.05)));
  CHECK((a.reject.at(0.05) <= a.reject.at(0.10)));
}

TEST_CASE("projection must be a unit vector") {
  const auto panel = test::gaussian_panel(10, 3, 1);
  CHECK_THROWS_AS(ProjectedSeries::project(panel, Eigen::Vector3d(1, 1, 0)), Error);
  CHECK_THROWS_AS(ProjectedSeries::project(panel, Eigen::Vector2d(1, 0)), Error);
}
