#pragma once

#include "sampleopt/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sampleopt {

enum class DatasetKind { Sparse, Adversarial };

struct Dataset {
  DatasetKind kind = DatasetKind::Sparse;
  Mat points;  // d x N
  Index dim = 0;
  Index count = 0;
  Index mixtures = 0;
  Scalar sigma = 0.0;
  std::uint64_t seed = 0;
  std::vector<Index> anchors;      // adversarial only
  Index requested_count = 0;       // before any cap was applied

  Index separated_count() const { return count - 9 * mixtures; }
};

/// Synthetic sparse points: exactly floor(log2 d) nonzero entries per point,
/// support uniform over coordinate subsets, values i.i.d. uniform on [-1, 1].
Dataset gen_sparse_dataset(Index d, Index N, RngStream& rng);

/// Clustered instance that traps data-initialized EM: N - 9M separated points
/// (norms <= 0.45, pairwise >= 0.11) built on the packing grid, M anchors
/// drawn among them, and 9 satellites per anchor within sigma/2,
/// sigma = 0.01 / sqrt(log2 N).
Dataset gen_adversarial_dataset(Index d, Index M, Index N, RngStream& rng);

struct DatasetViolation {
  std::string rule;
  Index index_a = -1;
  Index index_b = -1;
  std::string to_string() const;
};

/// Empty iff all kind-specific invariants hold.
std::vector<DatasetViolation> validate_dataset(const Dataset& ds);

}  // namespace sampleopt
