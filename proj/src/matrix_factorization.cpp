#include "savopt/matrix_factorization.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace savopt {

namespace {

using XMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

}  // namespace

MatrixFactorizationProblem::MatrixFactorizationProblem(std::vector<Rating> ratings, int users,
                                                       int items, int embedding_dim,
                                                       double lambda_u, double lambda_i,
                                                       std::uint64_t split_seed)
    : users_(users), items_(items), d_(embedding_dim), lambda_u_(lambda_u), lambda_i_(lambda_i) {
  if (users <= 0 || items <= 0 || embedding_dim <= 0) {
    throw std::invalid_argument("MatrixFactorizationProblem: sizes must be positive");
  }
  if (ratings.empty()) throw std::invalid_argument("MatrixFactorizationProblem: no ratings");
  Rng rng(mix_seed(split_seed, 0x73706c69ULL));  // split stream
  rng.shuffle(ratings);
  const std::size_t n_train = std::max<std::size_t>(1, ratings.size() * 8 / 10);
  train_.assign(ratings.begin(), ratings.begin() + static_cast<std::ptrdiff_t>(n_train));
  test_.assign(ratings.begin() + static_cast<std::ptrdiff_t>(n_train), ratings.end());
}

MatrixFactorizationProblem MatrixFactorizationProblem::load_ratings(const std::string& path,
                                                                    int embedding_dim,
                                                                    double lambda_u,
                                                                    double lambda_i,
                                                                    std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ratings file: " + path);
  std::vector<std::tuple<int, int, double>> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    int user = 0, item = 0;
    double rating = 0.0;
    if (!(ss >> user >> item >> rating)) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed rating row '" +
                               line + "'");
    }
    if (user < 1 || item < 1) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": ids must be 1-based");
    }
    raw.emplace_back(user, item, rating);
  }
  if (raw.empty()) throw std::runtime_error(path + ": empty ratings file");

  // Remap sparse 1-based ids to dense 0-based ones, ordered by original id.
  std::map<int, int> user_map, item_map;
  for (const auto& [u, i, r] : raw) {
    user_map.emplace(u, 0);
    item_map.emplace(i, 0);
  }
  int next = 0;
  for (auto& [orig, dense] : user_map) dense = next++;
  next = 0;
  for (auto& [orig, dense] : item_map) dense = next++;

  std::vector<Rating> ratings;
  ratings.reserve(raw.size());
  for (const auto& [u, i, r] : raw) {
    ratings.push_back(Rating{user_map[u], item_map[i], r});
  }
  return MatrixFactorizationProblem(std::move(ratings), static_cast<int>(user_map.size()),
                                    static_cast<int>(item_map.size()), embedding_dim, lambda_u,
                                    lambda_i, seed);
}

MatrixFactorizationProblem MatrixFactorizationProblem::synth_ratings(
    int users, int items, int d_true, std::size_t num_ratings, double noise, std::uint64_t seed,
    int embedding_dim, double lambda_u, double lambda_i, double mean_rating, double spread) {
  if (num_ratings == 0) throw std::invalid_argument("synth_ratings: num_ratings must be > 0");
  if (num_ratings > static_cast<std::size_t>(users) * static_cast<std::size_t>(items)) {
    throw std::invalid_argument("synth_ratings: more ratings than user-item pairs");
  }
  if (!(spread > 0)) throw std::invalid_argument("synth_ratings: spread must be positive");
  Rng rng(mix_seed(seed, 0x73796e74ULL));  // synth stream
  // Per-entry scale sqrt(spread) * d^{-1/4} gives products of std `spread`.
  const double scale = std::sqrt(spread) * std::pow(static_cast<double>(d_true), -0.25);
  Mat x_true(users, d_true), y_true(items, d_true);
  for (int u = 0; u < users; ++u)
    for (int j = 0; j < d_true; ++j) x_true(u, j) = scale * rng.normal();
  for (int i = 0; i < items; ++i)
    for (int j = 0; j < d_true; ++j) y_true(i, j) = scale * rng.normal();

  std::set<std::pair<int, int>> pairs;
  while (pairs.size() < num_ratings) {
    pairs.emplace(static_cast<int>(rng.below(static_cast<std::uint64_t>(users))),
                  static_cast<int>(rng.below(static_cast<std::uint64_t>(items))));
  }
  std::vector<Rating> ratings;
  ratings.reserve(num_ratings);
  for (const auto& [u, i] : pairs) {
    double r = mean_rating + x_true.row(u).dot(y_true.row(i));
    if (noise > 0) r += noise * rng.normal();
    ratings.push_back(Rating{u, i, r});
  }
  return MatrixFactorizationProblem(std::move(ratings), users, items, embedding_dim, lambda_u,
                                    lambda_i, seed);
}

double MatrixFactorizationProblem::regularization(const Vec& theta) const {
  const auto nx = static_cast<Eigen::Index>(users_) * d_;
  const auto ny = static_cast<Eigen::Index>(items_) * d_;
  const double su = theta.head(nx).squaredNorm();
  const double si = theta.segment(nx, ny).squaredNorm();
  return lambda_u_ * su + lambda_i_ * si;
}

double MatrixFactorizationProblem::data_term(const Vec& theta, const std::vector<Rating>& set) const {
  if (set.empty()) throw DomainError("matrix factorization: empty rating set");
  XMap x(theta.data(), users_, d_);
  XMap y(theta.data() + static_cast<Eigen::Index>(users_) * d_, items_, d_);
  double acc = 0.0;
  for (const Rating& r : set) {
    const double e = r.value - x.row(r.user).dot(y.row(r.item));
    acc += e * e;
  }
  return acc / static_cast<double>(set.size());
}

double MatrixFactorizationProblem::value(const Vec& theta) const {
  return data_term(theta, train_) + regularization(theta);
}

double MatrixFactorizationProblem::test_loss(const Vec& theta) const {
  return data_term(theta, test_) + regularization(theta);
}

double MatrixFactorizationProblem::batch_value(const Vec& theta,
                                               const std::vector<std::size_t>& idx) const {
  if (idx.empty()) throw DomainError("matrix factorization: empty batch");
  XMap x(theta.data(), users_, d_);
  XMap y(theta.data() + static_cast<Eigen::Index>(users_) * d_, items_, d_);
  double acc = 0.0;
  for (std::size_t j : idx) {
    const Rating& r = train_[j];
    const double e = r.value - x.row(r.user).dot(y.row(r.item));
    acc += e * e;
  }
  return acc / static_cast<double>(idx.size()) + regularization(theta);
}

Vec MatrixFactorizationProblem::batch_gradient(const Vec& theta,
                                               const std::vector<std::size_t>& idx) const {
  if (idx.empty()) throw DomainError("matrix factorization: empty batch");
  const auto nx = static_cast<Eigen::Index>(users_) * d_;
  XMap x(theta.data(), users_, d_);
  XMap y(theta.data() + nx, items_, d_);
  Vec g = 2.0 * lambda_u_ * theta;
  for (Eigen::Index p = nx; p < theta.size(); ++p) g[p] = 2.0 * lambda_i_ * theta[p];
  const double inv_n = 1.0 / static_cast<double>(idx.size());
  for (std::size_t j : idx) {
    const Rating& r = train_[j];
    const double e = x.row(r.user).dot(y.row(r.item)) - r.value;
    const double w = 2.0 * e * inv_n;
    for (int c = 0; c < d_; ++c) {
      g[static_cast<Eigen::Index>(r.user) * d_ + c] += w * y(r.item, c);
      g[nx + static_cast<Eigen::Index>(r.item) * d_ + c] += w * x(r.user, c);
    }
  }
  return g;
}

Vec MatrixFactorizationProblem::gradient(const Vec& theta) {
  std::vector<std::size_t> all(train_.size());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  return batch_gradient(theta, all);
}

}  // namespace savopt
