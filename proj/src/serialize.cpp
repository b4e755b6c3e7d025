#include "sampleopt/serialize.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <stdexcept>

namespace sampleopt {

using nlohmann::json;

namespace {

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const json& a) {
  Vec v(static_cast<Index>(a.size()));
  for (size_t i = 0; i < a.size(); ++i) v[static_cast<Index>(i)] = a[i].get<Scalar>();
  return v;
}

json points_to_json(const Mat& m) {
  json a = json::array();
  for (Index c = 0; c < m.cols(); ++c) a.push_back(vec_to_json(m.col(c)));
  return a;
}

Mat points_from_json(const json& a, Index dim) {
  Mat m(dim, static_cast<Index>(a.size()));
  for (size_t c = 0; c < a.size(); ++c) {
    const Vec v = vec_from_json(a[c]);
    if (v.size() != dim) throw std::invalid_argument("points_from_json: ragged point set");
    m.col(static_cast<Index>(c)) = v;
  }
  return m;
}

}  // namespace

json to_json(const PackedWellObjective& obj) {
  const ObjectiveConstants& k = obj.constants();
  return json{{"L", k.L},
              {"m", k.m},
              {"R", k.R},
              {"dim", k.dim},
              {"centers", points_to_json(obj.centers())},
              {"secret_index", obj.secret_index()},
              {"well_radius", obj.well_radius()},
              {"eps_gap", obj.eps_gap()}};
}

PackedWellObjective packed_well_from_json(const json& j) {
  ObjectiveConstants k;
  k.L = j.at("L").get<Scalar>();
  k.m = j.at("m").get<Scalar>();
  k.R = j.at("R").get<Scalar>();
  k.dim = j.at("dim").get<Index>();
  return PackedWellObjective(k, points_from_json(j.at("centers"), k.dim),
                             j.at("secret_index").get<Index>(),
                             j.at("well_radius").get<Scalar>(), j.at("eps_gap").get<Scalar>());
}

json to_json(const GmmPosterior& post) {
  return json{{"data", points_to_json(post.data())},
              {"dim", post.data_dim()},
              {"M", post.mixtures()},
              {"sigma", post.sigma()},
              {"weight_coeff", post.weight_coeff()},
              {"constant_component", post.constant_component()},
              {"prior_m", post.prior_m()},
              {"prior_R", post.prior_R()}};
}

GmmPosterior gmm_from_json(const json& j) {
  const auto dim = j.at("dim").get<Index>();
  return GmmPosterior(points_from_json(j.at("data"), dim), j.at("M").get<Index>(),
                      j.at("sigma").get<Scalar>(), j.at("weight_coeff").get<Scalar>(),
                      j.at("constant_component").get<Scalar>(), j.at("prior_m").get<Scalar>(),
                      j.at("prior_R").get<Scalar>());
}

json to_json(const Dataset& ds) {
  return json{{"kind", ds.kind == DatasetKind::Sparse ? "sparse" : "adversarial"},
              {"d", ds.dim},
              {"N", ds.count},
              {"M", ds.mixtures},
              {"sigma", ds.sigma},
              {"seed", ds.seed},
              {"requested_N", ds.requested_count},
              {"anchors", ds.anchors},
              {"points", points_to_json(ds.points)}};
}

Dataset dataset_from_json(const json& j) {
  Dataset ds;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "sparse")
    ds.kind = DatasetKind::Sparse;
  else if (kind == "adversarial")
    ds.kind = DatasetKind::Adversarial;
  else
    throw std::invalid_argument("dataset_from_json: unknown kind " + kind);
  ds.dim = j.at("d").get<Index>();
  ds.count = j.at("N").get<Index>();
  ds.mixtures = j.at("M").get<Index>();
  ds.sigma = j.at("sigma").get<Scalar>();
  ds.seed = j.at("seed").get<std::uint64_t>();
  ds.requested_count = j.value("requested_N", ds.count);
  ds.anchors = j.at("anchors").get<std::vector<Index>>();
  ds.points = points_from_json(j.at("points"), ds.dim);
  return ds;
}

void save_json(const json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_json: cannot open " + path);
  out << j.dump(2) << '\n';
}

json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_json: cannot open " + path);
  json j;
  in >> j;
  return j;
}

}  // namespace sampleopt
