#include "sampleopt/gmm_data.hpp"

#include "sampleopt/serialize.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cmath>

using namespace sampleopt;

TEST_CASE("sparse datasets have exactly floor(log2 d) nonzeros") {
  RngStream rng(1, 0);
  const Dataset d8 = gen_sparse_dataset(8, 40, rng);
  for (Index n = 0; n < 40; ++n) {
    Index nonzeros = 0;
    for (Index j = 0; j < 8; ++j)
      if (d8.points(j, n) != 0.0) ++nonzeros;
    CHECK(nonzeros == 3);
  }
  const Dataset d2 = gen_sparse_dataset(2, 10, rng);
  for (Index n = 0; n < 10; ++n) {
    Index nonzeros = 0;
    for (Index j = 0; j < 2; ++j)
      if (d2.points(j, n) != 0.0) ++nonzeros;
    CHECK(nonzeros == 1);
  }
  CHECK_THROWS_AS(gen_sparse_dataset(1, 10, rng), std::invalid_argument);
}

TEST_CASE("sparse entries are uniform on [-1, 1]") {
  RngStream rng(2, 0);
  const Dataset ds = gen_sparse_dataset(16, 25000, rng);  // 4 nonzeros each: 1e5 draws
  double sum = 0.0;
  Index count = 0;
  for (Index n = 0; n < ds.count; ++n) {
    for (Index j = 0; j < ds.dim; ++j) {
      const Scalar v = ds.points(j, n);
      if (v == 0.0) continue;
      CHECK(v >= -1.0);
      CHECK(v <= 1.0);
      sum += v;
      ++count;
    }
  }
  CHECK(count == 100000);
  CHECK(std::abs(sum / static_cast<double>(count)) < 0.01);
}

TEST_CASE("adversarial dataset validates itself") {
  RngStream rng(3, 0);
  const Dataset ds = gen_adversarial_dataset(16, 4, 64, rng);
  CHECK(validate_dataset(ds).empty());
  CHECK(ds.sigma == doctest::Approx(0.01 / std::sqrt(6.0)).epsilon(1e-15));

  // anchors distinct and inside the separated group
  CHECK(ds.anchors.size() == 4);
  for (size_t a = 0; a < ds.anchors.size(); ++a) {
    CHECK(ds.anchors[a] >= 0);
    CHECK(ds.anchors[a] < ds.separated_count());
    for (size_t b = a + 1; b < ds.anchors.size(); ++b) CHECK(ds.anchors[a] != ds.anchors[b]);
  }

  // brute-force minimum separation among the first N - 9M points
  Scalar min_dist = 1e9;
  for (Index n = 0; n < ds.separated_count(); ++n)
    for (Index k = n + 1; k < ds.separated_count(); ++k)
      min_dist = std::min(min_dist, (ds.points.col(n) - ds.points.col(k)).norm());
  CHECK(min_dist >= 0.11 - 1e-12);
}

TEST_CASE("adversarial generation reports infeasible requests") {
  RngStream rng(4, 0);
  CHECK_THROWS_WITH_AS(gen_adversarial_dataset(1, 1, 100, rng),
                       doctest::Contains("packing supports only"), std::invalid_argument);
  CHECK_THROWS_AS(gen_adversarial_dataset(4, 2, 19, rng), std::invalid_argument);  // N < 10M
}

TEST_CASE("validator reports norm and separation violations") {
  RngStream rng(5, 0);
  Dataset ds = gen_adversarial_dataset(8, 2, 40, rng);
  REQUIRE(validate_dataset(ds).empty());

  Dataset bad_norm = ds;
  bad_norm.points.col(0) *= 40.0;
  const auto norm_violations = validate_dataset(bad_norm);
  CHECK(!norm_violations.empty());
  bool found_norm = false;
  for (const auto& v : norm_violations) found_norm |= v.rule.find("norm") != std::string::npos;
  CHECK(found_norm);

  Dataset bad_sep = ds;
  bad_sep.points.col(1) = bad_sep.points.col(2);
  bad_sep.points.col(1)[0] += 0.03;
  const auto sep_violations = validate_dataset(bad_sep);
  bool found_sep = false;
  for (const auto& v : sep_violations) found_sep |= v.rule.find("closer") != std::string::npos;
  CHECK(found_sep);
}

TEST_CASE("datasets round-trip through JSON losslessly") {
  RngStream rng(6, 0);
  for (const bool sparse : {true, false}) {
    const Dataset ds = sparse ? gen_sparse_dataset(8, 30, rng)
                              : gen_adversarial_dataset(8, 2, 40, rng);
    const Dataset back = dataset_from_json(to_json(ds));
    CHECK(back.kind == ds.kind);
    CHECK(back.dim == ds.dim);
    CHECK(back.count == ds.count);
    CHECK(back.mixtures == ds.mixtures);
    CHECK(back.sigma == ds.sigma);
    CHECK(back.seed == ds.seed);
    CHECK(back.anchors == ds.anchors);
    CHECK((back.points - ds.points).cwiseAbs().maxCoeff() == 0.0);
    CHECK(validate_dataset(back).empty());
  }
}

TEST_CASE("generation is deterministic in the seed") {
  RngStream a(7, 3), b(7, 3);
  const Dataset da = gen_sparse_dataset(8, 20, a);
  const Dataset db = gen_sparse_dataset(8, 20, b);
  CHECK((da.points - db.points).cwiseAbs().maxCoeff() == 0.0);
  RngStream c(7, 4);
  const Dataset dc = gen_sparse_dataset(8, 20, c);
  CHECK((da.points - dc.points).cwiseAbs().maxCoeff() > 0.0);
}
