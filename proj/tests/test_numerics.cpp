#include "boed/numerics.hpp"

#include <cmath>
#include <set>
#include <vector>

#include "boed/rng.hpp"
#include "doctest.h"

using namespace boed;

TEST_CASE("rbf_kernel closed-form values") {
  CHECK(rbf_kernel(scalar_design(0.0), scalar_design(0.0), 1.0) ==
        doctest::Approx(1.0).epsilon(1e-15));
  // |0-1|^2 = 1 -> exp(-1/2)
  CHECK(rbf_kernel(scalar_design(0.0), scalar_design(1.0), 1.0) ==
        doctest::Approx(0.6065306597126334).epsilon(1e-12));
  // ||(0,0)-(3,4)||^2 = 25 -> exp(-12.5)
  Design p(2), q(2);
  p << 0.0, 0.0;
  q << 3.0, 4.0;
  CHECK(rbf_kernel(p, q, 1.0) == doctest::Approx(std::exp(-12.5)).epsilon(1e-12));
}

TEST_CASE("rbf_kernel bandwidth scaling and bounds") {
  // Doubling the bandwidth quarters the exponent.
  const double k1 = rbf_kernel(scalar_design(0.0), scalar_design(2.0), 1.0);
  const double k2 = rbf_kernel(scalar_design(0.0), scalar_design(2.0), 2.0);
  CHECK(k1 == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(k2 == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));

  RngStream rng(7);
  for (int i = 0; i < 200; ++i) {
    const double a = (rng.uniform() - 0.5) * 20.0;
    const double b = (rng.uniform() - 0.5) * 20.0;
    const double k = rbf_kernel(scalar_design(a), scalar_design(b), 1.0);
    CHECK(k > 0.0);
    CHECK(k <= 1.0);
  }
}

TEST_CASE("rbf_kernel rejects bad input") {
  Design p(1), q(2);
  p << 0.0;
  q << 0.0, 0.0;
  CHECK_THROWS_AS(rbf_kernel(p, q, 1.0), UsageError);
  CHECK_THROWS_AS(rbf_kernel(p, p, 0.0), UsageError);
  CHECK_THROWS_AS(rbf_kernel(p, p, -1.0), UsageError);
}

TEST_CASE("mmd_squared singleton value") {
  const SampleSet P = SampleSet::from_scalars({0.0});
  const SampleSet Q = SampleSet::from_scalars({1.0});
  // 1 + 1 - 2 exp(-1/2)
  CHECK(mmd_squared(P, Q, 1.0) ==
        doctest::Approx(0.7869386805747332).epsilon(1e-9));
}

TEST_CASE("mmd_squared identical sets vanish") {
  RngStream rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    SampleSet P;
    const int n = 1 + static_cast<int>(rng.uniform_index(12));
    for (int i = 0; i < n; ++i) {
      P.add(scalar_design((rng.uniform() - 0.5) * 8.0));
    }
    CHECK(std::abs(mmd_squared(P, P, 1.0)) <= 1e-12);
  }
}

TEST_CASE("mmd_squared repeated samples of one point") {
  const SampleSet P = SampleSet::from_scalars({0.0, 0.0});
  const SampleSet Q = SampleSet::from_scalars({0.0});
  CHECK(std::abs(mmd_squared(P, Q, 1.0)) <= 1e-12);
}

TEST_CASE("mmd_squared symmetry and near-nonnegativity") {
  RngStream rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    SampleSet P, Q;
    const int n = 1 + static_cast<int>(rng.uniform_index(10));
    const int m = 1 + static_cast<int>(rng.uniform_index(10));
    for (int i = 0; i < n; ++i) P.add(scalar_design(rng.normal() * 2.0));
    for (int j = 0; j < m; ++j) Q.add(scalar_design(rng.normal() * 2.0));
    const double pq = mmd_squared(P, Q, 1.0);
    const double qp = mmd_squared(Q, P, 1.0);
    CHECK(pq == qp);  // exact: same summation order per term group
    CHECK(pq >= -1e-12);
    CHECK(mmd(P, Q, 1.0) >= 0.0);
  }
}

TEST_CASE("mmd_squared input validation") {
  const SampleSet P = SampleSet::from_scalars({0.0});
  SampleSet empty;
  CHECK_THROWS_AS(mmd_squared(P, empty, 1.0), UsageError);
  CHECK_THROWS_AS(mmd_squared(empty, P, 1.0), UsageError);

  SampleSet Q2;
  Design q(2);
  q << 0.0, 1.0;
  Q2.add(q);
  CHECK_THROWS_AS(mmd_squared(P, Q2, 1.0), UsageError);
}

TEST_CASE("sigmoid values and monotonicity") {
  CHECK(sigmoid(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sigmoid(std::log(3.0)) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(sigmoid(800.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sigmoid(-800.0) >= 0.0);
  CHECK(sigmoid(-800.0) < 1e-300);
  // Large but representable tails stay strictly inside (0, 1).
  CHECK(sigmoid(-700.0) > 0.0);
  CHECK(sigmoid(30.0) < 1.0);
  CHECK(sigmoid(-30.0) > 0.0);
  double prev = sigmoid(-10.0);
  for (double x = -9.5; x <= 10.0; x += 0.5) {
    const double cur = sigmoid(x);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("solve_spd identity and scaling") {
  Eigen::VectorXd b(3);
  b << 1.0, -2.0, 3.0;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
  CHECK((solve_spd(I, b) - b).norm() <= 1e-12);
  CHECK((solve_spd(2.0 * I, b) - 0.5 * b).norm() <= 1e-12);
}

TEST_CASE("solve_spd random SPD residual") {
  RngStream rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd G(3, 3);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) G(i, j) = rng.normal();
    }
    const Eigen::MatrixXd A =
        G * G.transpose() + 0.1 * Eigen::MatrixXd::Identity(3, 3);
    Eigen::VectorXd b(3);
    for (int i = 0; i < 3; ++i) b(i) = rng.normal();
    const Eigen::VectorXd x = solve_spd(A, b);
    CHECK((A * x - b).norm() <= 1e-8 * b.norm());
  }
}

TEST_CASE("solve_spd rejects non-SPD input") {
  Eigen::MatrixXd A(2, 2);
  A << 1.0, 0.0, 0.0, -1.0;
  Eigen::VectorXd b(2);
  b << 1.0, 1.0;
  CHECK_THROWS_AS(solve_spd(A, b), NumericalError);
  CHECK_THROWS_AS(cholesky_spd(A), NumericalError);
  Eigen::MatrixXd R(2, 3);
  R.setZero();
  CHECK_THROWS_AS(cholesky_spd(R), UsageError);
}

TEST_CASE("logsumexp stability") {
  Eigen::ArrayXd v(3);
  v << 0.0, 0.0, 0.0;
  CHECK(logsumexp(v) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  v << -1000.0, -1000.0, -1000.0;
  CHECK(logsumexp(v) == doctest::Approx(-1000.0 + std::log(3.0)).epsilon(1e-12));
  v << 700.0, 710.0, 705.0;
  const double expected =
      710.0 + std::log(std::exp(-10.0) + 1.0 + std::exp(-5.0));
  CHECK(logsumexp(v) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("rng streams are reproducible") {
  RngStream a(42);
  RngStream b(42);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  RngStream c = RngStream(42).child(3).child(9);
  RngStream d = RngStream(42).child(3).child(9);
  for (int i = 0; i < 100; ++i) {
    CHECK(c.normal() == d.normal());
  }
}

TEST_CASE("rng child streams are independent of parent draws") {
  RngStream parent1(5);
  RngStream parent2(5);
  for (int i = 0; i < 17; ++i) parent2.next_u64();  // advance one copy only
  RngStream c1 = parent1.child(4);
  RngStream c2 = parent2.child(4);
  for (int i = 0; i < 100; ++i) {
    CHECK(c1.next_u64() == c2.next_u64());
  }
}

TEST_CASE("rng distinct identities give distinct sequences") {
  // Different seeds, different child ids, and different path orders must all
  // disagree somewhere early.
  auto first_words = [](RngStream s) {
    std::vector<std::uint64_t> w;
    for (int i = 0; i < 4; ++i) w.push_back(s.next_u64());
    return w;
  };
  std::set<std::vector<std::uint64_t>> seen;
  seen.insert(first_words(RngStream(1)));
  seen.insert(first_words(RngStream(2)));
  seen.insert(first_words(RngStream(1).child(0)));
  seen.insert(first_words(RngStream(1).child(1)));
  seen.insert(first_words(RngStream(1).child(0).child(1)));
  seen.insert(first_words(RngStream(1).child(1).child(0)));
  CHECK(seen.size() == 6);
}

TEST_CASE("rng uniform bounds and moments") {
  RngStream rng(123);
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  // 3-sigma MC windows: sd(mean) = sqrt(1/12n)
  CHECK(std::abs(mean - 0.5) < 3.0 * std::sqrt(1.0 / (12.0 * n)));
  CHECK(std::abs(var - 1.0 / 12.0) < 1e-3);
}

TEST_CASE("rng normal moments") {
  RngStream rng(321);
  double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum2 += z * z;
    sum4 += z * z * z * z;
  }
  CHECK(std::abs(sum / n) < 3.0 / std::sqrt(static_cast<double>(n)));
  // sd of the second-moment estimate is sqrt(Var(z^2)/n) = sqrt(2/n)
  CHECK(std::abs(sum2 / n - 1.0) < 3.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(sum4 / n - 3.0) < 0.1);
}

TEST_CASE("rng uniform_index bounds and uniformity") {
  RngStream rng(9);
  CHECK_THROWS_AS(rng.uniform_index(0), UsageError);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const std::size_t k = rng.uniform_index(7);
    REQUIRE(k < 7);
    ++counts[k];
  }
  // chi-square with 6 dof; 99.9% quantile ~ 22.46
  double chi2 = 0.0;
  const double expected = n / 7.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 22.46);
}
