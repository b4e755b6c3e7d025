#include "sampleopt/gmm_data.hpp"

#include "sampleopt/objectives.hpp"

#include <cmath>
#include <stdexcept>

namespace sampleopt {

namespace {

// Matches floating-point drift in grid-derived coordinates.
constexpr Scalar kGeomTol = 1e-12;

Index floor_log2(Index v) {
  Index l = 0;
  while (v >= 2) {
    v /= 2;
    ++l;
  }
  return l;
}

Vec uniform_in_ball(RngStream& rng, Index dim, Scalar radius) {
  Vec dir(dim);
  for (Index i = 0; i < dim; ++i) dir[i] = rng.gaussian();
  const Scalar n = dir.norm();
  if (n == 0.0) return Vec::Zero(dim);
  const Scalar u = rng.uniform();
  return dir * (radius * std::pow(u, 1.0 / static_cast<Scalar>(dim)) / n);
}

}  // namespace

Dataset gen_sparse_dataset(Index d, Index N, RngStream& rng) {
  if (d < 2) throw std::invalid_argument("gen_sparse_dataset: d must be >= 2 (floor(log2 d) = 0 support)");
  if (N < 1) throw std::invalid_argument("gen_sparse_dataset: N must be >= 1");
  const Index nnz = floor_log2(d);

  Dataset ds;
  ds.kind = DatasetKind::Sparse;
  ds.dim = d;
  ds.count = N;
  ds.requested_count = N;
  ds.mixtures = nnz;
  ds.seed = rng.seed();
  ds.points = Mat::Zero(d, N);

  std::vector<Index> coords(static_cast<size_t>(d));
  for (Index n = 0; n < N; ++n) {
    for (Index j = 0; j < d; ++j) coords[static_cast<size_t>(j)] = j;
    for (Index k = 0; k < nnz; ++k) {
      const auto pick = k + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(d - k)));
      std::swap(coords[static_cast<size_t>(k)], coords[static_cast<size_t>(pick)]);
      ds.points(coords[static_cast<size_t>(k)], n) = 2.0 * rng.uniform() - 1.0;
    }
  }
  return ds;
}

Dataset gen_adversarial_dataset(Index d, Index M, Index N, RngStream& rng) {
  if (d < 1 || M < 1) throw std::invalid_argument("gen_adversarial_dataset: d and M must be >= 1");
  if (N < 10 * M) throw std::invalid_argument("gen_adversarial_dataset: requires N >= 10M");
  const Index separated = N - 9 * M;

  // 0.11 separation comes from the packing grid at r = 0.055 in B(0, 0.45).
  const Mat grid = packing_centers(0.45, 0.055, d, separated);
  if (grid.cols() < separated)
    throw std::invalid_argument(
        "gen_adversarial_dataset: infeasible, packing supports only " +
        std::to_string(grid.cols()) + " separated points at dimension " + std::to_string(d));

  Dataset ds;
  ds.kind = DatasetKind::Adversarial;
  ds.dim = d;
  ds.count = N;
  ds.requested_count = N;
  ds.mixtures = M;
  ds.seed = rng.seed();
  ds.sigma = 0.01 / std::sqrt(std::log2(static_cast<Scalar>(N)));
  ds.points = Mat::Zero(d, N);
  ds.points.leftCols(separated) = grid;

  // Distinct anchors among the separated points.
  std::vector<Index> idx(static_cast<size_t>(separated));
  for (Index n = 0; n < separated; ++n) idx[static_cast<size_t>(n)] = n;
  for (Index i = 0; i < M; ++i) {
    const auto j = i + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(separated - i)));
    std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
    ds.anchors.push_back(idx[static_cast<size_t>(i)]);
  }

  for (Index k = 0; k < M; ++k) {
    const Vec anchor = ds.points.col(ds.anchors[static_cast<size_t>(k)]);
    for (Index s = 0; s < 9; ++s) {
      ds.points.col(separated + 9 * k + s) = anchor + uniform_in_ball(rng, d, 0.5 * ds.sigma);
    }
  }
  return ds;
}

std::string DatasetViolation::to_string() const {
  std::string s = rule;
  if (index_a >= 0) s += " [point " + std::to_string(index_a);
  if (index_b >= 0) s += ", point " + std::to_string(index_b);
  if (index_a >= 0) s += "]";
  return s;
}

std::vector<DatasetViolation> validate_dataset(const Dataset& ds) {
  std::vector<DatasetViolation> out;
  if (ds.points.rows() != ds.dim || ds.points.cols() != ds.count) {
    out.push_back({"shape mismatch between points and metadata", -1, -1});
    return out;
  }

  if (ds.kind == DatasetKind::Sparse) {
    const Index nnz = floor_log2(ds.dim);
    for (Index n = 0; n < ds.count; ++n) {
      Index nonzeros = 0;
      for (Index j = 0; j < ds.dim; ++j) {
        const Scalar v = ds.points(j, n);
        if (v != 0.0) {
          ++nonzeros;
          if (v < -1.0 || v > 1.0) out.push_back({"sparse entry outside [-1, 1]", n, -1});
        }
      }
      if (nonzeros != nnz) out.push_back({"sparse support size != floor(log2 d)", n, -1});
    }
    return out;
  }

  const Index separated = ds.separated_count();
  if (separated < ds.mixtures) {
    out.push_back({"fewer separated points than mixtures", -1, -1});
    return out;
  }
  for (Index n = 0; n < ds.count; ++n) {
    if (ds.points.col(n).norm() > 0.45 + 0.5 * ds.sigma + kGeomTol)
      out.push_back({"norm exceeds 0.45 + sigma/2", n, -1});
  }
  for (Index n = 0; n < separated; ++n) {
    if (ds.points.col(n).norm() > 0.45 + kGeomTol)
      out.push_back({"separated point norm exceeds 0.45", n, -1});
    for (Index k = n + 1; k < separated; ++k) {
      if ((ds.points.col(n) - ds.points.col(k)).norm() < 0.11 - kGeomTol)
        out.push_back({"separated pair closer than 0.11", n, k});
    }
  }
  if (static_cast<Index>(ds.anchors.size()) != ds.mixtures)
    out.push_back({"anchor count != mixtures", -1, -1});
  for (size_t a = 0; a < ds.anchors.size(); ++a) {
    const Index ia = ds.anchors[a];
    if (ia < 0 || ia >= separated) {
      out.push_back({"anchor index outside the separated group", ia, -1});
      continue;
    }
    for (size_t b = a + 1; b < ds.anchors.size(); ++b) {
      if (ds.anchors[b] == ia) out.push_back({"duplicate anchor index", ia, -1});
    }
    for (Index s = 0; s < 9; ++s) {
      const Index n = separated + 9 * static_cast<Index>(a) + s;
      if ((ds.points.col(n) - ds.points.col(ia)).norm() > 0.5 * ds.sigma + kGeomTol)
        out.push_back({"cluster point farther than sigma/2 from anchor", n, ia});
    }
  }
  return out;
}

}  // namespace sampleopt
