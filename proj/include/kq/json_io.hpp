#pragma once

// JSON wire formats: complex as [re, im], matrices as row-major nested arrays
// of [re, im], measures as {"atoms": [{"lambda": x, "W": [[..]]}]}, flows as
// {"domain": "disc", "r": null, "c": [..], "a": [..], "b": [..]}.

#include "kq/flows.hpp"
#include "kq/numcore.hpp"

#include <json.hpp>

namespace kq {

using Json = nlohmann::ordered_json;

Json to_json(Complex z);
Json to_json(const Mat& m);
Json to_json(const MatrixMeasure& mu);
Json to_json(const FlowSpec& f);

Complex complex_from_json(const Json& j);
Mat mat_from_json(const Json& j);
MatrixMeasure measure_from_json(const Json& j);
FlowSpec flow_from_json(const Json& j);

// Series coefficient files: {"dimV": n, "coeffs": [matrix, ...]}.
Json series_to_json(const std::vector<Mat>& coeffs);
std::vector<Mat> series_from_json(const Json& j);

}  // namespace kq
