// JSON conversion for matrices, ensemble specs and theta grids.
#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "meixner/algebra.hpp"
#include "meixner/ensembles.hpp"

namespace meixner {

using json = nlohmann::ordered_json;

json to_json(const MatrixH& x);
MatrixH matrix_from_json(const json& j);

json to_json(const EnsembleSpec& spec);
EnsembleSpec spec_from_json(const json& j);

// Compact serialization with every double printed as %.17g; non-finite
// numbers become null.
std::string dump17(const json& j);
std::string format17(double v);

// Grid DSL. Items separated by ';':
//   0                  zero matrix
//   diag:a,b,...       diagonal matrix (n entries)
//   coords:c1,c2,...   raw coordinates
//   rand:N:scale:seed  N random matrices with E|theta|^2 = scale^2
//   file:path          JSON {"thetas": [matrix, ...]}
std::vector<MatrixH> parse_grid(const std::string& dsl, int n, int beta);

// Five points of size <= 0.3 along diagonal and off-diagonal directions.
std::vector<MatrixH> default_weak_grid(int n, int beta);

}  // namespace meixner
