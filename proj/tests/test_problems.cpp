#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "savopt/matrix_factorization.hpp"
#include "savopt/phase_retrieval.hpp"
#include "savopt/problems.hpp"
#include "savopt/rng.hpp"
#include "savopt/trace.hpp"

using namespace savopt;

TEST_CASE("quadratic problem values and gradient") {
  QuadraticProblem quad;
  CHECK(quad.value(Vec::Ones(100)) == doctest::Approx(50.5));
  CHECK(quad.value(Vec::Zero(100)) == 0.0);
  const Vec g = quad.gradient(Vec::Ones(100));
  CHECK(g[0] == doctest::Approx(2.0));
  CHECK(g[1] == doctest::Approx(0.02));
  const Vec* diag = quad.hessian_diagonal();
  REQUIRE(diag != nullptr);
  CHECK((*diag)[0] == doctest::Approx(2.0));
  CHECK((*diag)[1] == doctest::Approx(0.02));
}

TEST_CASE("rastrigin: origin, ones identity and gradient at the minimum") {
  for (Eigen::Index n : {2, 10, 100}) {
    RastriginProblem rast(n);
    CHECK(rast.value(Vec::Zero(n)) == 0.0);
    CHECK(rast.value(Vec::Ones(n)) == doctest::Approx(static_cast<double>(n)));
    CHECK(rast.gradient(Vec::Zero(n)).norm() == 0.0);
  }
}

TEST_CASE("rosenbrock values and gradients") {
  RosenbrockProblem rosen2(2);
  Vec at_min(2);
  at_min << 1.0, 1.0;
  CHECK(rosen2.value(at_min) == 0.0);
  const Vec g = rosen2.gradient(Vec::Zero(2));
  CHECK(g[0] == doctest::Approx(-2.0));
  CHECK(g[1] == doctest::Approx(0.0));
  Vec paper_start(2);
  paper_start << -3.0, -4.0;
  CHECK(rosen2.value(paper_start) == doctest::Approx(16916.0));

  RosenbrockProblem rosen5(5);
  CHECK(rosen5.value(Vec::Zero(5)) == doctest::Approx(5.0));
  CHECK(rosen5.gradient(Vec::Ones(5)).norm() == 0.0);
}

TEST_CASE("phase retrieval: two-point hand DFT oracle") {
  // N = 2, one all-ones mask, truth (1, 0): unitary DFT gives b = (1/2, 1/2).
  CVec truth(2);
  truth << std::complex<double>(1.0, 0.0), std::complex<double>(0.0, 0.0);
  CVec mask = CVec::Ones(2);
  auto pr = PhaseRetrievalProblem::custom(truth, {mask});
  CHECK(pr.measurements()[0][0] == doctest::Approx(0.5));
  CHECK(pr.measurements()[0][1] == doctest::Approx(0.5));

  // z = (0, 1) also satisfies the measurements: F(0,1) = (1, -1)/sqrt(2).
  CVec z01(2);
  z01 << std::complex<double>(0.0, 0.0), std::complex<double>(1.0, 0.0);
  CHECK(pr.value_z(z01) == doctest::Approx(0.0).epsilon(1e-14));

  // z = (1, 1): y = (sqrt(2), 0), e = (1.5, -0.5), f = (2.25 + 0.25)/2.
  CVec z11 = CVec::Ones(2);
  CHECK(pr.value_z(z11) == doctest::Approx(1.25));

  // Gradient against the dense 4-real-variable finite-difference oracle.
  Rng rng(71);
  for (const CVec& z : {z01, z11}) {
    const Vec theta = PhaseRetrievalProblem::to_real(z);
    const Vec g = pr.gradient(theta);
    const double h = 1e-6;
    for (int i = 0; i < 4; ++i) {
      Vec e = Vec::Zero(4);
      e[i] = h;
      const double fd = (pr.value(theta + e) - pr.value(theta - e)) / (2.0 * h);
      CHECK(g[i] == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("phase retrieval: truth and phase rotations are global minima") {
  auto pr = PhaseRetrievalProblem::signal(16, 4, 2024);
  CHECK(pr.value_z(pr.truth()) == doctest::Approx(0.0).epsilon(1e-12));
  const CVec rotated = std::polar(1.0, M_PI / 3.0) * pr.truth();
  CHECK(pr.value_z(rotated) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(pr.gradient_z(pr.truth()).norm() <= 1e-10);
  for (const Vec& b : pr.measurements()) {
    CHECK((b.array() >= 0.0).all());
  }
}

TEST_CASE("phase retrieval: 2-D image transform matches FD and is seeded") {
  auto pr = PhaseRetrievalProblem::image(4, 4, 3, 99);
  Rng rng(5);
  const Vec theta = rng.normal_vector(pr.dimension());
  Vec dir = rng.normal_vector(pr.dimension());
  dir /= dir.norm();
  const double h = 1e-6;
  const double fd = (pr.value(theta + h * dir) - pr.value(theta - h * dir)) / (2.0 * h);
  CHECK(pr.gradient(theta).dot(dir) == doctest::Approx(fd).epsilon(1e-5));

  auto again = PhaseRetrievalProblem::image(4, 4, 3, 99);
  CHECK(again.truth() == pr.truth());
}

TEST_CASE("phase retrieval quartic ray matches direct evaluation") {
  auto pr = PhaseRetrievalProblem::signal(8, 3, 7);
  Rng rng(13);
  const Vec theta = rng.normal_vector(pr.dimension());
  const Vec d = rng.normal_vector(pr.dimension());
  const Quartic ray = pr.directional_quartic(theta, d);
  CHECK(ray.c0 == doctest::Approx(pr.value(theta)));
  CHECK(ray.c1 == doctest::Approx(pr.gradient(theta).dot(d)));
  for (double a : {0.0, 0.1, 1.0, -2.0}) {
    const double direct = pr.value(theta + a * d);
    CHECK(ray.eval(a) == doctest::Approx(direct).epsilon(1e-9));
  }
}

namespace {
std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = std::string("/tmp/savopt_test_") + name;
  std::ofstream out(path, std::ios::trunc);
  out << content;
  return path;
}
}  // namespace

TEST_CASE("ratings loader: fixture, split stability and errors") {
  const std::string path = write_temp("ratings.tsv",
                                      "1\t10\t4.0\t881250949\n"
                                      "1\t20\t3.0\n"
                                      "2 10 5.0\n"
                                      "3 30 2.0 881250950\n"
                                      "2 20 1.0\n");
  auto mf = MatrixFactorizationProblem::load_ratings(path, 2, 0.0, 0.0, 11);
  CHECK(mf.users() == 3);
  CHECK(mf.items() == 3);
  CHECK(mf.train_set().size() == 4);
  CHECK(mf.test_set().size() == 1);

  // Seed-stable split.
  auto again = MatrixFactorizationProblem::load_ratings(path, 2, 0.0, 0.0, 11);
  for (std::size_t i = 0; i < mf.train_set().size(); ++i) {
    CHECK(mf.train_set()[i].user == again.train_set()[i].user);
    CHECK(mf.train_set()[i].item == again.train_set()[i].item);
  }

  const std::string bad = write_temp("ratings_bad.tsv", "1 10 4.0\nnot a row\n");
  CHECK_THROWS_WITH_AS(MatrixFactorizationProblem::load_ratings(bad, 2, 0, 0, 1),
                       doctest::Contains(":2:"), std::runtime_error);
  const std::string empty = write_temp("ratings_empty.tsv", "");
  CHECK_THROWS_AS(MatrixFactorizationProblem::load_ratings(empty, 2, 0, 0, 1), std::runtime_error);
}

TEST_CASE("matrix factorization: hand gradient on a single rating") {
  const std::string path = write_temp("ratings_one.tsv", "1 1 2.0\n");
  auto mf = MatrixFactorizationProblem::load_ratings(path, 1, 0.0, 0.0, 1);
  Vec theta(2);
  theta << 1.0, 1.0;  // X_1 = 1, Y_1 = 1
  CHECK(mf.value(theta) == doctest::Approx(1.0));
  const Vec g = mf.gradient(theta);
  CHECK(g[0] == doctest::Approx(-2.0));
  CHECK(g[1] == doctest::Approx(-2.0));
}

TEST_CASE("matrix factorization: zero embeddings give the mean squared rating") {
  auto mf = MatrixFactorizationProblem::synth_ratings(10, 12, 3, 60, 0.0, 3, 3, 0.0, 0.0);
  double acc = 0.0;
  for (const Rating& r : mf.train_set()) acc += r.value * r.value;
  acc /= static_cast<double>(mf.train_set().size());
  CHECK(mf.value(Vec::Zero(mf.dimension())) == doctest::Approx(acc));
}

TEST_CASE("matrix factorization: seeded finite-difference gradient check") {
  auto mf = MatrixFactorizationProblem::synth_ratings(5, 7, 3, 25, 0.1, 17, 3, 1e-4, 2e-4);
  Rng rng(23);
  const Vec theta = rng.normal_vector(mf.dimension());
  Vec dir = rng.normal_vector(mf.dimension());
  dir /= dir.norm();
  const double h = 1e-6;
  const double fd = (mf.value(theta + h * dir) - mf.value(theta - h * dir)) / (2.0 * h);
  CHECK(mf.gradient(theta).dot(dir) == doctest::Approx(fd).epsilon(1e-5));

  // Batch gradient on a subset agrees with FD of the batch value.
  std::vector<std::size_t> batch{0, 3, 5};
  const double fb =
      (mf.batch_value(theta + h * dir, batch) - mf.batch_value(theta - h * dir, batch)) / (2.0 * h);
  CHECK(mf.batch_gradient(theta, batch).dot(dir) == doctest::Approx(fb).epsilon(1e-5));
}

TEST_CASE("matrix factorization: loss at the generating factors is the regularization only") {
  // Hand-built noiseless instance: ratings are exact rank-2 products, so the
  // data term vanishes at the generating factors.
  const int m = 4, n = 5, d = 2;
  Mat x_true(m, d), y_true(n, d);
  Rng rng(31);
  for (int u = 0; u < m; ++u)
    for (int c = 0; c < d; ++c) x_true(u, c) = rng.normal();
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < d; ++c) y_true(i, c) = rng.normal();
  std::string rows;
  for (int u = 0; u < m; ++u) {
    for (int i = 0; i < n; ++i) {
      rows += std::to_string(u + 1) + " " + std::to_string(i + 1) + " " +
              format_double(x_true.row(u).dot(y_true.row(i))) + "\n";
    }
  }
  const std::string path = write_temp("ratings_rank2.tsv", rows);
  const double lambda = 1e-3;
  auto mf = MatrixFactorizationProblem::load_ratings(path, d, lambda, lambda, 7);

  Vec theta(mf.dimension());
  for (int u = 0; u < m; ++u)
    for (int c = 0; c < d; ++c) theta[u * d + c] = x_true(u, c);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < d; ++c) theta[m * d + i * d + c] = y_true(i, c);
  const double reg = lambda * theta.squaredNorm();
  CHECK(mf.value(theta) == doctest::Approx(reg).epsilon(1e-10));

  // Batch value over all train indices coincides with the full value.
  std::vector<std::size_t> all(mf.num_examples());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const Vec probe = rng.normal_vector(mf.dimension());
  CHECK(mf.batch_value(probe, all) == doctest::Approx(mf.value(probe)));
}
