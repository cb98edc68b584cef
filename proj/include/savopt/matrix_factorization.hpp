#pragma once

#include <string>
#include <vector>

#include "savopt/common.hpp"
#include "savopt/objective.hpp"
#include "savopt/rng.hpp"

namespace savopt {

struct Rating {
  int user = 0;
  int item = 0;
  double value = 0.0;
};

/// Matrix-factorization recommender loss over observed ratings:
///   f(X, Y) = mean_{(u,i) in batch} (R_ui - X_u . Y_i)^2
///             + lambda_u sum_u |X_u|^2 + lambda_i sum_i |Y_i|^2,
/// with parameters theta = [X row-major; Y row-major]. Ratings are split
/// 80/20 into train/test by a seeded shuffle; value()/gradient() use the full
/// training set, batch_value()/batch_gradient() an index subset of it.
class MatrixFactorizationProblem : public Objective, public BatchEvaluable {
 public:
  /// Parses "user item rating [timestamp]" rows (tab or whitespace separated,
  /// 1-based ids). Malformed rows are reported with their line number.
  static MatrixFactorizationProblem load_ratings(const std::string& path, int embedding_dim,
                                                 double lambda_u, double lambda_i,
                                                 std::uint64_t seed);

  /// Synthetic instance: ratings R = mean + X*_u . Y*_i + noise * N(0,1) over
  /// distinct seeded (u, i) pairs, with factors scaled so the latent products
  /// have standard deviation `spread`.
  static MatrixFactorizationProblem synth_ratings(int users, int items, int d_true,
                                                  std::size_t num_ratings, double noise,
                                                  std::uint64_t seed, int embedding_dim,
                                                  double lambda_u, double lambda_i,
                                                  double mean_rating = 3.0, double spread = 1.0);

  Eigen::Index dimension() const override {
    return static_cast<Eigen::Index>(users_ + items_) * d_;
  }
  double value(const Vec& theta) const override;
  Vec gradient(const Vec& theta) override;

  std::size_t num_examples() const override { return train_.size(); }
  double batch_value(const Vec& theta, const std::vector<std::size_t>& idx) const override;
  Vec batch_gradient(const Vec& theta, const std::vector<std::size_t>& idx) const override;

  /// Same loss formula evaluated on the held-out 20%.
  double test_loss(const Vec& theta) const;

  int users() const { return users_; }
  int items() const { return items_; }
  int embedding_dim() const { return d_; }
  const std::vector<Rating>& train_set() const { return train_; }
  const std::vector<Rating>& test_set() const { return test_; }

 private:
  MatrixFactorizationProblem(std::vector<Rating> ratings, int users, int items, int embedding_dim,
                             double lambda_u, double lambda_i, std::uint64_t split_seed);

  double data_term(const Vec& theta, const std::vector<Rating>& set) const;
  double regularization(const Vec& theta) const;

  int users_ = 0;
  int items_ = 0;
  int d_ = 0;
  double lambda_u_ = 0.0;
  double lambda_i_ = 0.0;
  std::vector<Rating> train_;
  std::vector<Rating> test_;
};

}  // namespace savopt
