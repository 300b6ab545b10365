#include "kq/json_io.hpp"

#include <map>

namespace kq {

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const MatrixMeasure& mu) {
  Json atoms = Json::array();
  for (const MeasureAtom& atom : mu.atoms())
    atoms.push_back(Json{{"lambda", atom.lambda}, {"W", to_json(atom.weight)}});
  return Json{{"atoms", std::move(atoms)}};
}

namespace {

const std::map<std::string, DomainKind> kDomainNames = {
    {"plane", DomainKind::Plane},
    {"punctured_plane", DomainKind::PuncturedPlane},
    {"disc", DomainKind::Disc},
    {"punctured_disc", DomainKind::PuncturedDisc},
    {"annulus", DomainKind::Annulus},
};

std::string domain_name(DomainKind kind) {
  for (const auto& [name, k] : kDomainNames)
    if (k == kind) return name;
  return "plane";
}

}  // namespace

Json to_json(const FlowSpec& f) {
  Json j;
  j["domain"] = domain_name(f.domain.kind);
  if (f.domain.kind == DomainKind::Annulus) j["r"] = f.domain.r;
  else j["r"] = nullptr;
  j["c"] = to_json(f.c);
  j["a"] = to_json(f.a);
  j["b"] = to_json(f.b);
  return j;
}

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2)
    throw Json::type_error::create(302, "complex value must be [re, im]", &j);
  return {j[0].get<double>(), j[1].get<double>()};
}

Mat mat_from_json(const Json& j) {
  if (!j.is_array() || j.empty())
    throw Json::type_error::create(302, "matrix must be a non-empty nested array", &j);
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(j[static_cast<size_t>(i)].size()) != cols)
      throw Json::type_error::create(302, "ragged matrix rows", &j);
    for (Eigen::Index k = 0; k < cols; ++k)
      m(i, k) = complex_from_json(j[static_cast<size_t>(i)][static_cast<size_t>(k)]);
  }
  return m;
}

MatrixMeasure measure_from_json(const Json& j) {
  std::vector<MeasureAtom> atoms;
  for (const Json& atom : j.at("atoms"))
    atoms.push_back({atom.at("lambda").get<double>(), mat_from_json(atom.at("W"))});
  return MatrixMeasure(std::move(atoms));
}

FlowSpec flow_from_json(const Json& j) {
  FlowSpec f;
  const std::string name = j.at("domain").get<std::string>();
  const auto it = kDomainNames.find(name);
  if (it == kDomainNames.end()) throw InvalidFlow("unknown domain: " + name);
  f.domain.kind = it->second;
  if (j.contains("r") && !j.at("r").is_null()) f.domain.r = j.at("r").get<double>();
  f.c = complex_from_json(j.at("c"));
  f.a = complex_from_json(j.at("a"));
  f.b = complex_from_json(j.at("b"));
  return f;
}

Json series_to_json(const std::vector<Mat>& coeffs) {
  Json list = Json::array();
  for (const Mat& c : coeffs) list.push_back(to_json(c));
  return Json{{"dimV", coeffs.empty() ? 0 : coeffs.front().rows()},
              {"coeffs", std::move(list)}};
}

std::vector<Mat> series_from_json(const Json& j) {
  std::vector<Mat> coeffs;
  for (const Json& c : j.at("coeffs")) coeffs.push_back(mat_from_json(c));
  return coeffs;
}

}  // namespace kq
