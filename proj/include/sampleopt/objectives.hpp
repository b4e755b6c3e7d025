#pragma once

#include "sampleopt/types.hpp"

#include <memory>

namespace sampleopt {

/// Smoothness/local-nonconvexity class of a target: L-Lipschitz smooth
/// everywhere, m-strongly convex outside the ball of radius R.
struct ObjectiveConstants {
  Scalar L = 1.0;
  Scalar m = 1.0;
  Scalar R = 0.0;
  Index dim = 1;

  Scalar condition_number() const { return L / m; }
  void validate() const;
};

class Objective {
 public:
  virtual ~Objective() = default;
  virtual const ObjectiveConstants& constants() const = 0;
  virtual Scalar value(const Vec& x) const = 0;
  virtual Vec grad(const Vec& x) const = 0;
  /// Fused evaluation; overridden where the two share work.
  virtual std::pair<Scalar, Vec> value_and_grad(const Vec& x) const {
    return {value(x), grad(x)};
  }
};

/// U(x) = a ||x||^2 / 2. Baseline with exactly known moments under e^{-U}.
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(Index dim, Scalar curvature);
  const ObjectiveConstants& constants() const override { return constants_; }
  Scalar value(const Vec& x) const override;
  Vec grad(const Vec& x) const override;
  Scalar curvature() const { return curvature_; }

 private:
  ObjectiveConstants constants_;
  Scalar curvature_;
};

/// Deterministic centers of disjoint balls of radius r packed in B(0, R_outer):
/// axis-aligned grid of pitch 2r intersected with B(0, R_outer - r), emitted in
/// lexicographic order and truncated at max_count. Columns are centers.
Mat packing_centers(Scalar R_outer, Scalar r, Index dim, Index max_count);

/// Hard instance: one cosine well of radius r holding the minimum -eps at a
/// secret center, the remaining packed balls indistinguishable from the zero
/// plateau, quadratic growth m(||x|| - R/2)^2 outside B(0, R/2).
class PackedWellObjective final : public Objective {
 public:
  PackedWellObjective(ObjectiveConstants constants, Mat centers, Index secret_index,
                      Scalar well_radius, Scalar eps_gap);

  const ObjectiveConstants& constants() const override { return constants_; }
  Scalar value(const Vec& x) const override;
  Vec grad(const Vec& x) const override;

  const Mat& centers() const { return centers_; }
  Index secret_index() const { return secret_index_; }
  Vec secret_center() const { return centers_.col(secret_index_); }
  Scalar well_radius() const { return well_radius_; }
  Scalar eps_gap() const { return eps_gap_; }
  /// True when eps <= L R^2 / (64 (2 pi^2 + pi)), the range the lower-bound
  /// theorem requires. Construction is valid on the wider range r < R/2.
  bool theorem_range_ok() const { return theorem_range_ok_; }

 private:
  ObjectiveConstants constants_;
  Mat centers_;
  Index secret_index_;
  Scalar well_radius_;
  Scalar eps_gap_;
  bool theorem_range_ok_;
};

PackedWellObjective hard_objective_new(Scalar L, Scalar m, Scalar R, Scalar eps, Index dim,
                                       RngStream& rng, Index max_wells);

inline Scalar hard_value(const PackedWellObjective& obj, const Vec& x) { return obj.value(x); }
inline Vec hard_grad(const PackedWellObjective& obj, const Vec& x) { return obj.grad(x); }

/// Gaussian mixture log-posterior over mean parameters mu in R^{d x M},
/// stored flat (column-major by component):
///   U(mu) = prior_m (||mu||_F - sqrt(M) prior_R)^2 1{||mu||_F >= sqrt(M) prior_R}
///           - sum_n log( sum_i c_lambda exp(-||y_n - mu_i||^2 / (2 sigma^2)) + C ).
class GmmPosterior final : public Objective {
 public:
  GmmPosterior(Mat data, Index mixtures, Scalar sigma, Scalar weight_coeff,
               Scalar constant_component, Scalar prior_m, Scalar prior_R);

  const ObjectiveConstants& constants() const override { return constants_; }
  Scalar value(const Vec& mu) const override;
  Vec grad(const Vec& mu) const override;
  std::pair<Scalar, Vec> value_and_grad(const Vec& mu) const override;

  /// gamma(i, n) = W_in / (sum_k W_kn + C), shape M x N.
  Mat responsibilities(const Vec& mu) const;

  /// Value and responsibilities from one shared kernel evaluation.
  std::pair<Scalar, Mat> value_and_responsibilities(const Vec& mu) const;

  const Mat& data() const { return data_; }
  Index data_dim() const { return data_.rows(); }
  Index data_count() const { return data_.cols(); }
  Index mixtures() const { return mixtures_; }
  Scalar sigma() const { return sigma_; }
  Scalar weight_coeff() const { return weight_coeff_; }
  Scalar constant_component() const { return constant_component_; }
  Scalar prior_m() const { return prior_m_; }
  Scalar prior_R() const { return prior_R_; }

 private:
  Mat data_;  // d x N
  Index mixtures_;
  Scalar sigma_;
  Scalar weight_coeff_;
  Scalar constant_component_;
  Scalar prior_m_;
  Scalar prior_R_;
  ObjectiveConstants constants_;
  Vec data_sqnorms_;
};

inline Scalar gmm_value(const GmmPosterior& post, const Vec& mu) { return post.value(mu); }
inline Vec gmm_grad(const GmmPosterior& post, const Vec& mu) { return post.grad(mu); }
inline Mat gmm_responsibilities(const GmmPosterior& post, const Vec& mu) {
  return post.responsibilities(mu);
}

/// Smoothness scale alpha of the mixture likelihood, maximized over the N
/// data points as candidate component positions.
Scalar gmm_smoothness_alpha(const Mat& data, Scalar sigma);

/// Weight coefficient lambda_i/Z_i = l C / alpha that certifies the
/// log-likelihood l-Lipschitz smooth.
Scalar gmm_certified_weight_coeff(const Mat& data, Scalar sigma, Scalar l, Scalar C);

/// q*_beta proportional to e^{-beta U}: value/grad scaled by beta,
/// constants (beta L, beta m, R).
class TemperedObjective final : public Objective {
 public:
  TemperedObjective(std::shared_ptr<const Objective> base, Scalar beta);
  const ObjectiveConstants& constants() const override { return constants_; }
  Scalar value(const Vec& x) const override;
  Vec grad(const Vec& x) const override;
  Scalar beta() const { return beta_; }
  const Objective& base() const { return *base_; }

 private:
  std::shared_ptr<const Objective> base_;
  Scalar beta_;
  ObjectiveConstants constants_;
};

TemperedObjective temper(std::shared_ptr<const Objective> base, Scalar beta);

QuadraticObjective quadratic_objective(Index dim, Scalar curvature);

}  // namespace sampleopt
