#include "sampleopt/objectives.hpp"

#include "sampleopt/numerics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sampleopt {

namespace {

constexpr Scalar kPi = std::numbers::pi_v<Scalar>;
// 2 pi^2 + pi, the constant tying well radius to value gap: eps = L r^2 / (2 pi^2 + pi).
const Scalar kWellConst = 2.0 * kPi * kPi + kPi;

void check_dim(const Vec& x, Index dim, const char* who) {
  if (x.size() != dim) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

// log(a + b) from log a and log b, either may be -inf.
Scalar log_add(Scalar la, Scalar lb) {
  if (la == -std::numeric_limits<Scalar>::infinity()) return lb;
  if (lb == -std::numeric_limits<Scalar>::infinity()) return la;
  const Scalar hi = std::max(la, lb), lo = std::min(la, lb);
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace

void ObjectiveConstants::validate() const {
  if (!(m > 0.0)) throw std::invalid_argument("ObjectiveConstants: m must be > 0");
  if (!(L >= m)) throw std::invalid_argument("ObjectiveConstants: L must be >= m");
  if (!(R >= 0.0)) throw std::invalid_argument("ObjectiveConstants: R must be >= 0");
  if (dim < 1) throw std::invalid_argument("ObjectiveConstants: dim must be >= 1");
}

QuadraticObjective::QuadraticObjective(Index dim, Scalar curvature)
    : constants_{curvature, curvature, 0.0, dim}, curvature_(curvature) {
  if (!(curvature > 0.0)) throw std::invalid_argument("quadratic_objective: curvature must be > 0");
  constants_.validate();
}

Scalar QuadraticObjective::value(const Vec& x) const {
  check_dim(x, constants_.dim, "QuadraticObjective");
  return 0.5 * curvature_ * x.squaredNorm();
}

Vec QuadraticObjective::grad(const Vec& x) const {
  check_dim(x, constants_.dim, "QuadraticObjective");
  return curvature_ * x;
}

QuadraticObjective quadratic_objective(Index dim, Scalar curvature) {
  return QuadraticObjective(dim, curvature);
}

Mat packing_centers(Scalar R_outer, Scalar r, Index dim, Index max_count) {
  if (!(R_outer > 0.0) || !(r > 0.0)) throw std::invalid_argument("packing_centers: radii must be > 0");
  if (dim < 1) throw std::invalid_argument("packing_centers: dim must be >= 1");
  if (max_count < 1) throw std::invalid_argument("packing_centers: max_count must be >= 1");
  if (!(R_outer > r)) throw std::invalid_argument("packing_centers: no ball of radius r fits in B(0, R_outer)");

  const Scalar pitch = 2.0 * r;
  const Scalar limit = R_outer - r;
  const Scalar limit2 = limit * limit;
  const auto k_max = static_cast<long>(std::floor(limit / pitch));

  std::vector<Vec> found;
  Vec point = Vec::Zero(dim);
  std::vector<Scalar> prefix_sq(static_cast<size_t>(dim) + 1, 0.0);

  // Depth-first lexicographic scan of the grid with prefix-norm pruning;
  // emits centers in lexicographic order so truncation is well defined.
  auto recurse = [&](auto&& self, Index axis) -> bool {
    if (static_cast<Index>(found.size()) >= max_count) return false;
    if (axis == dim) {
      found.push_back(point);
      return static_cast<Index>(found.size()) < max_count;
    }
    for (long k = -k_max; k <= k_max; ++k) {
      const Scalar c = pitch * static_cast<Scalar>(k);
      const Scalar sq = prefix_sq[axis] + c * c;
      if (sq > limit2) continue;
      point[axis] = c;
      prefix_sq[axis + 1] = sq;
      if (!self(self, axis + 1)) return false;
    }
    point[axis] = 0.0;
    return true;
  };
  recurse(recurse, 0);

  Mat centers(dim, static_cast<Index>(found.size()));
  for (Index j = 0; j < centers.cols(); ++j) centers.col(j) = found[static_cast<size_t>(j)];
  return centers;
}

PackedWellObjective::PackedWellObjective(ObjectiveConstants constants, Mat centers,
                                         Index secret_index, Scalar well_radius, Scalar eps_gap)
    : constants_(constants),
      centers_(std::move(centers)),
      secret_index_(secret_index),
      well_radius_(well_radius),
      eps_gap_(eps_gap) {
  constants_.validate();
  if (centers_.cols() < 1) throw std::invalid_argument("PackedWellObjective: needs at least one center");
  if (centers_.rows() != constants_.dim)
    throw std::invalid_argument("PackedWellObjective: center dimension mismatch");
  if (secret_index_ < 0 || secret_index_ >= centers_.cols())
    throw std::invalid_argument("PackedWellObjective: secret index out of range");
  if (!(well_radius_ > 0.0) || !(eps_gap_ > 0.0))
    throw std::invalid_argument("PackedWellObjective: radius and eps must be > 0");
  theorem_range_ok_ =
      eps_gap_ <= constants_.L * constants_.R * constants_.R / (64.0 * kWellConst);
}

Scalar PackedWellObjective::value(const Vec& x) const {
  check_dim(x, constants_.dim, "PackedWellObjective");
  const Scalar half_R = 0.5 * constants_.R;
  const Scalar nx = x.norm();
  if (nx >= half_R) {
    const Scalar t = nx - half_R;
    return constants_.m * t * t;
  }
  const Scalar r2 = well_radius_ * well_radius_;
  const Scalar d2 = (x - centers_.col(secret_index_)).squaredNorm();
  if (d2 < r2) {
    // L r^2 / (4 pi^2 + 2 pi) = eps / 2 by construction.
    return 0.5 * eps_gap_ * (std::cos(kPi * (d2 - r2) / r2) - 1.0);
  }
  return 0.0;
}

Vec PackedWellObjective::grad(const Vec& x) const {
  check_dim(x, constants_.dim, "PackedWellObjective");
  const Scalar half_R = 0.5 * constants_.R;
  const Scalar nx = x.norm();
  if (nx >= half_R) {
    return (2.0 * constants_.m * (1.0 - half_R / nx)) * x;
  }
  const Scalar r2 = well_radius_ * well_radius_;
  const Vec diff = x - centers_.col(secret_index_);
  const Scalar d2 = diff.squaredNorm();
  if (d2 < r2) {
    const Scalar s = std::sin(kPi * (d2 - r2) / r2);
    return (-eps_gap_ * kPi / r2 * s) * diff;
  }
  return Vec::Zero(constants_.dim);
}

PackedWellObjective hard_objective_new(Scalar L, Scalar m, Scalar R, Scalar eps, Index dim,
                                       RngStream& rng, Index max_wells) {
  if (!(m > 0.0) || !(L >= 2.0 * m))
    throw std::invalid_argument("hard_objective_new: requires L >= 2m > 0");
  if (!(R > 0.0)) throw std::invalid_argument("hard_objective_new: requires R > 0");
  if (!(eps > 0.0)) throw std::invalid_argument("hard_objective_new: requires eps > 0");
  const Scalar r = std::sqrt(kWellConst * eps / L);
  if (!(r < 0.5 * R))
    throw std::invalid_argument("hard_objective_new: eps too large, no well of radius "
                                "sqrt((2pi^2+pi) eps/L) fits inside B(0, R/2)");
  Mat centers = packing_centers(0.5 * R, r, dim, max_wells);
  if (centers.cols() < 1) throw std::invalid_argument("hard_objective_new: packing yields zero centers");
  const Index secret = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(centers.cols())));
  return PackedWellObjective(ObjectiveConstants{L, m, R, dim}, std::move(centers), secret, r, eps);
}

GmmPosterior::GmmPosterior(Mat data, Index mixtures, Scalar sigma, Scalar weight_coeff,
                           Scalar constant_component, Scalar prior_m, Scalar prior_R)
    : data_(std::move(data)),
      mixtures_(mixtures),
      sigma_(sigma),
      weight_coeff_(weight_coeff),
      constant_component_(constant_component),
      prior_m_(prior_m),
      prior_R_(prior_R) {
  if (data_.cols() < 1 || data_.rows() < 1) throw std::invalid_argument("GmmPosterior: empty data");
  if (mixtures_ < 1) throw std::invalid_argument("GmmPosterior: mixtures must be >= 1");
  if (!(sigma_ > 0.0)) throw std::invalid_argument("GmmPosterior: sigma must be > 0");
  if (!(weight_coeff_ > 0.0)) throw std::invalid_argument("GmmPosterior: weight_coeff must be > 0");
  if (!(constant_component_ >= 0.0)) throw std::invalid_argument("GmmPosterior: C must be >= 0");
  if (!(prior_m_ > 0.0) || !(prior_R_ > 0.0))
    throw std::invalid_argument("GmmPosterior: prior parameters must be > 0");
  data_sqnorms_ = data_.colwise().squaredNorm();

  const Scalar alpha = gmm_smoothness_alpha(data_, sigma_);
  const Scalar c_ref = constant_component_ > 0.0 ? constant_component_ : 1.0;
  const Scalar l_data = weight_coeff_ * alpha / c_ref;
  constants_.L = l_data + 2.0 * prior_m_;
  constants_.m = prior_m_;
  constants_.R = 2.0 * std::sqrt(static_cast<Scalar>(mixtures_)) * prior_R_;
  constants_.dim = data_.rows() * mixtures_;
  constants_.validate();
}

namespace {

// Shifted kernel exponents shared by value, responsibilities, and grad,
// stored datum-major so every pass runs down contiguous columns:
// E(n, i) = exp(-||y_n - mu_i||^2 / (2 sigma^2) - rowmax(n)).
struct KernelTable {
  Mat shifted_exp;  // N x M
  Vec rowmax;       // per-datum exponent maximum
  Vec expsum;       // per-datum sum of shifted_exp
};

KernelTable kernel_table(const Mat& data, const Vec& data_sqnorms, const Vec& mu, Index M,
                         Scalar sigma) {
  const Index d = data.rows();
  const Index N = data.cols();
  const Mat Mu = mu.reshaped(d, M);
  const Scalar inv_two_sig2 = 1.0 / (2.0 * sigma * sigma);

  KernelTable t;
  t.shifted_exp.noalias() = data.transpose() * (2.0 * Mu);  // N x M
  const Vec mu_sqn = Mu.colwise().squaredNorm();
  t.shifted_exp.rowwise() -= mu_sqn.transpose();
  t.shifted_exp.colwise() -= data_sqnorms;
  t.shifted_exp *= inv_two_sig2;
  t.rowmax = t.shifted_exp.col(0);
  for (Index i = 1; i < M; ++i) t.rowmax = t.rowmax.cwiseMax(t.shifted_exp.col(i));
  t.shifted_exp.colwise() -= t.rowmax;
  // Eigen's vectorized exp clamps its argument instead of underflowing to
  // zero; kernels this far away must vanish exactly.
  for (Index i = 0; i < M; ++i) {
    auto col = t.shifted_exp.col(i).array();
    t.shifted_exp.col(i) = (col <= -745.0).select(0.0, col.exp());
  }
  t.expsum = t.shifted_exp.rowwise().sum();
  return t;
}

}  // namespace

namespace {

// data term sum_n log(c e^{rowmax} expsum + C), assembled in the log domain
Scalar gmm_data_term(const KernelTable& t, Scalar weight_coeff, Scalar constant_component) {
  const Scalar log_c = std::log(weight_coeff);
  const Scalar log_C = constant_component > 0.0 ? std::log(constant_component)
                                                : -std::numeric_limits<Scalar>::infinity();
  Scalar acc = 0.0;
  for (Index n = 0; n < t.rowmax.size(); ++n)
    acc += log_add(t.rowmax[n] + log_c + std::log(t.expsum[n]), log_C);
  return acc;
}

Scalar gmm_prior_term(const Vec& mu, Index M, Scalar prior_m, Scalar prior_R) {
  const Scalar frob = mu.norm();
  const Scalar radius = std::sqrt(static_cast<Scalar>(M)) * prior_R;
  if (frob < radius) return 0.0;
  const Scalar t = frob - radius;
  return prior_m * t * t;
}

// gamma(n, i) = c E(n, i) / (c expsum(n) + C e^{-rowmax(n)}); the e^{-rowmax}
// overflow to +inf at strongly negative exponents drives gamma to exact 0,
// the documented underflow behavior for far-away components.
Mat gamma_from_table(const KernelTable& t, Scalar weight_coeff, Scalar constant_component) {
  const Vec scale =
      (weight_coeff /
       (weight_coeff * t.expsum.array() + constant_component * (-t.rowmax.array()).exp()))
          .matrix();
  Mat gamma = t.shifted_exp;  // N x M
  for (Index i = 0; i < gamma.cols(); ++i) gamma.col(i).array() *= scale.array();
  return gamma;
}

// gamma is datum-major (N x M) here.
Vec gmm_grad_from_gamma(const Mat& data, const Vec& mu, const Mat& gamma, Index M, Scalar sigma,
                        Scalar prior_m, Scalar prior_R) {
  const Index d = data.rows();
  const auto Mu = mu.reshaped(d, M);
  const Vec mass = gamma.colwise().sum();
  Mat G(d, M);
  G.noalias() = -(data * gamma);
  G += Mu * mass.asDiagonal();
  G /= sigma * sigma;
  Vec out = G.reshaped(d * M, 1);

  const Scalar frob = mu.norm();
  const Scalar radius = std::sqrt(static_cast<Scalar>(M)) * prior_R;
  if (frob >= radius && frob > 0.0) out += (2.0 * prior_m * (1.0 - radius / frob)) * mu;
  return out;
}

}  // namespace

Scalar GmmPosterior::value(const Vec& mu) const {
  check_dim(mu, constants_.dim, "GmmPosterior");
  const KernelTable t = kernel_table(data_, data_sqnorms_, mu, mixtures_, sigma_);
  return gmm_prior_term(mu, mixtures_, prior_m_, prior_R_) -
         gmm_data_term(t, weight_coeff_, constant_component_);
}

Mat GmmPosterior::responsibilities(const Vec& mu) const {
  check_dim(mu, constants_.dim, "GmmPosterior");
  const KernelTable t = kernel_table(data_, data_sqnorms_, mu, mixtures_, sigma_);
  return gamma_from_table(t, weight_coeff_, constant_component_).transpose();  // M x N
}

std::pair<Scalar, Mat> GmmPosterior::value_and_responsibilities(const Vec& mu) const {
  check_dim(mu, constants_.dim, "GmmPosterior");
  const KernelTable t = kernel_table(data_, data_sqnorms_, mu, mixtures_, sigma_);
  return {gmm_prior_term(mu, mixtures_, prior_m_, prior_R_) -
              gmm_data_term(t, weight_coeff_, constant_component_),
          gamma_from_table(t, weight_coeff_, constant_component_).transpose()};
}

Vec GmmPosterior::grad(const Vec& mu) const {
  check_dim(mu, constants_.dim, "GmmPosterior");
  const KernelTable t = kernel_table(data_, data_sqnorms_, mu, mixtures_, sigma_);
  const Mat gamma = gamma_from_table(t, weight_coeff_, constant_component_);
  return gmm_grad_from_gamma(data_, mu, gamma, mixtures_, sigma_, prior_m_, prior_R_);
}

std::pair<Scalar, Vec> GmmPosterior::value_and_grad(const Vec& mu) const {
  check_dim(mu, constants_.dim, "GmmPosterior");
  const KernelTable t = kernel_table(data_, data_sqnorms_, mu, mixtures_, sigma_);
  const Mat gamma = gamma_from_table(t, weight_coeff_, constant_component_);
  return {gmm_prior_term(mu, mixtures_, prior_m_, prior_R_) -
              gmm_data_term(t, weight_coeff_, constant_component_),
          gmm_grad_from_gamma(data_, mu, gamma, mixtures_, sigma_, prior_m_, prior_R_)};
}

Scalar gmm_smoothness_alpha(const Mat& data, Scalar sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gmm_smoothness_alpha: sigma must be > 0");
  const Index N = data.cols();
  const Scalar sig2 = sigma * sigma;
  Scalar best_s1 = 0.0, best_s2 = 0.0;
  for (Index c = 0; c < N; ++c) {
    Scalar s1 = 0.0, s2 = 0.0;
    for (Index n = 0; n < N; ++n) {
      const Scalar d2 = (data.col(n) - data.col(c)).squaredNorm();
      const Scalar k = std::exp(-d2 / (2.0 * sig2));
      s1 += d2 / sig2 * k;
      s2 += k;
    }
    best_s1 = std::max(best_s1, s1);
    best_s2 = std::max(best_s2, s2);
  }
  return std::max(2.0 * best_s1, best_s2) / sig2;
}

Scalar gmm_certified_weight_coeff(const Mat& data, Scalar sigma, Scalar l, Scalar C) {
  if (!(l > 0.0) || !(C > 0.0))
    throw std::invalid_argument("gmm_certified_weight_coeff: l and C must be > 0");
  return l * C / gmm_smoothness_alpha(data, sigma);
}

TemperedObjective::TemperedObjective(std::shared_ptr<const Objective> base, Scalar beta)
    : base_(std::move(base)), beta_(beta) {
  if (!base_) throw std::invalid_argument("temper: null base objective");
  if (!(beta_ > 0.0)) throw std::invalid_argument("temper: beta must be > 0");
  constants_ = base_->constants();
  constants_.L *= beta_;
  constants_.m *= beta_;
}

Scalar TemperedObjective::value(const Vec& x) const { return beta_ * base_->value(x); }

Vec TemperedObjective::grad(const Vec& x) const { return beta_ * base_->grad(x); }

TemperedObjective temper(std::shared_ptr<const Objective> base, Scalar beta) {
  return TemperedObjective(std::move(base), beta);
}

}  // namespace sampleopt
