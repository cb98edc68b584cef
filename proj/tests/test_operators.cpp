#include "doctest.h"
#include "savopt/operators.hpp"
#include "savopt/rng.hpp"
#include "savopt/verify.hpp"

using namespace savopt;

namespace {

// Dense circulant matrix for -sigma * Delta with the periodic 1-D stencil.
Mat dense_neg_laplacian(double sigma, int n) {
  Mat m = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = 2.0 * sigma;
    m(i, (i + 1) % n) -= sigma;
    m(i, (i + n - 1) % n) -= sigma;
  }
  return m;
}

}  // namespace

TEST_CASE("apply: zero and scaled identity") {
  Vec v(2);
  v << 3.0, -1.0;
  CHECK(LinearOperator::zero(2).apply(v).isZero(0.0));
  const Vec scaled = LinearOperator::scaled_identity(2.0, 2).apply(v);
  CHECK(scaled[0] == 6.0);
  CHECK(scaled[1] == -2.0);
}

TEST_CASE("apply: periodic Laplacian matches the dense circulant oracle") {
  const int n = 4;
  const LinearOperator op = LinearOperator::periodic_laplacian(1.0, n);
  const Mat dense = dense_neg_laplacian(1.0, n);

  Vec e0 = Vec::Unit(n, 0);
  const Vec got = op.apply(e0);
  CHECK(got[0] == doctest::Approx(2.0));
  CHECK(got[1] == doctest::Approx(-1.0));
  CHECK(got[2] == doctest::Approx(0.0));
  CHECK(got[3] == doctest::Approx(-1.0));

  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const Vec v = rng.normal_vector(n);
    CHECK((op.apply(v) - dense * v).norm() <= 1e-14 * v.norm());
  }
}

TEST_CASE("solve_shifted: componentwise variants") {
  Vec b(3);
  b << 2.0, -5.0, 0.5;
  CHECK(LinearOperator::zero(3).solve_shifted(7.0, b) == b);

  Vec b1(1);
  b1 << 2.0;
  CHECK(LinearOperator::scaled_identity(1.0, 1).solve_shifted(1.0, b1)[0] == doctest::Approx(1.0));

  Vec d(3);
  d << 0.0, 1.0, 4.0;
  const Vec x = LinearOperator::diagonal(d).solve_shifted(0.5, b);
  CHECK(x[0] == doctest::Approx(2.0));       // zero diagonal entry keeps 1 + 0
  CHECK(x[1] == doctest::Approx(-5.0 / 1.5));
  CHECK(x[2] == doctest::Approx(0.5 / 3.0));
}

TEST_CASE("solve_shifted: Laplacian solved against the dense direct solve") {
  const int n = 4;
  const LinearOperator op = LinearOperator::periodic_laplacian(1.0, n);
  const Mat a = Mat::Identity(n, n) + dense_neg_laplacian(1.0, n);
  const Vec b = Vec::Unit(n, 0);
  const Vec x = op.solve_shifted(1.0, b);
  const Vec expected = a.partialPivLu().solve(b);
  CHECK((x - expected).norm() <= 1e-14);

  // The circulant eigen-divisors for n = 4, dt = sigma = 1 are {1, 3, 5, 3}:
  // the flat and alternating modes confirm the extreme divisors.
  const Vec flat = Vec::Ones(n);
  CHECK((op.solve_shifted(1.0, flat) - flat).norm() <= 1e-12);  // divisor 1
  Vec alternating(n);
  alternating << 1, -1, 1, -1;
  CHECK((op.solve_shifted(1.0, alternating) - alternating / 5.0).norm() <= 1e-12);  // divisor 5
}

TEST_CASE("solve_shifted: non-power-of-two sizes and composite operator") {
  Rng rng(17);
  for (int n : {3, 12, 50, 81}) {
    const LinearOperator op = LinearOperator::composite(0.4, 1.3, n);
    const Vec b = rng.normal_vector(n);
    const double dt = 2.5;
    const Vec x = op.solve_shifted(dt, b);
    CHECK((op.apply_shift(dt, x) - b).lpNorm<Eigen::Infinity>() <=
          1e-10 * (1.0 + b.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("solve_shifted rejects bad inputs") {
  const LinearOperator op = LinearOperator::scaled_identity(1.0, 2);
  Vec b(2);
  b << 1.0, 2.0;
  CHECK_THROWS_AS(op.solve_shifted(0.0, b), std::invalid_argument);
  CHECK_THROWS_AS(op.solve_shifted(-1.0, b), std::invalid_argument);
  Vec bad(2);
  bad << 1.0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(op.solve_shifted(1.0, bad), std::invalid_argument);
  Vec wrong(3);
  wrong << 1, 2, 3;
  CHECK_THROWS_AS(op.apply(wrong), std::invalid_argument);
  CHECK_THROWS_AS(op.solve_shifted(1.0, wrong), std::invalid_argument);
}

TEST_CASE("operator constructors validate parameters") {
  CHECK_THROWS_AS(LinearOperator::scaled_identity(-1.0, 3), std::invalid_argument);
  Vec neg(2);
  neg << 1.0, -0.5;
  CHECK_THROWS_AS(LinearOperator::diagonal(neg), std::invalid_argument);
  CHECK_THROWS_AS(LinearOperator::periodic_laplacian(-0.1, 4), std::invalid_argument);
}

TEST_CASE("verify checks catch a sign-flipped Laplacian") {
  // Mutation sanity for the built-in nonnegativity check.
  const LinearOperator good = LinearOperator::periodic_laplacian(1.0, 8);
  const ApplyFn negated = [&](const Vec& v) { return Vec(-good.apply(v)); };
  const CheckResult bad = check_nonnegativity("mutated", negated, 8, 3);
  CHECK_FALSE(bad.pass);
  const ApplyFn ok = [&](const Vec& v) { return good.apply(v); };
  CHECK(check_nonnegativity("good", ok, 8, 3).pass);
}
