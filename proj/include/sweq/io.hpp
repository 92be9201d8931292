#pragma once

#include <json.hpp>

#include <string>

#include "sweq/synthesis.hpp"
#include "sweq/system.hpp"
#include "sweq/types.hpp"

namespace sweq {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

/// Parses { "A": [N][n][n], "b": [N][n], "C": [nz][n]?, "name"? } into a
/// system. InputError messages name the offending JSON path.
SwitchedSystem system_from_json(const Json& j);
SwitchedSystem load_system(const std::string& path);
OrderedJson system_to_json(const SwitchedSystem& sys);

/// Row-major nested-array conversions used across all file formats.
Matrix matrix_from_json(const Json& j, const std::string& where);
Vector vector_from_json(const Json& j, const std::string& where);
OrderedJson matrix_to_json(const Matrix& m);
OrderedJson vector_to_json(const Vector& v);

OrderedJson design_to_json(const DesignResult& d);

/// Extracts a design from a report produced by the design command (or from a
/// bare design object): P, x_star, Q and, when present, lambda and rho.
struct LoadedDesign {
    Matrix P;
    Vector x_star;
    Matrix Q;
    std::optional<Vector> lam;
    std::optional<double> rho;
    std::optional<Vector> x0;
};
LoadedDesign design_from_json(const Json& j);
LoadedDesign load_design(const std::string& path);

/// Writes via a sibling temp file and rename, so readers never observe a
/// partially written file.
void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace sweq
