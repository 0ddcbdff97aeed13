#pragma once

#include <string>

#include "json.hpp"
#include "sdc/detect.hpp"
#include "sdc/hermitian.hpp"

namespace sdc {

using Json = nlohmann::json;

struct InputError : Error {
    explicit InputError(const std::string& what) : Error("input error: " + what) {}
};

/// Parsed CLI input document:
/// {"matrices": [[[0,1],[1,1]], ...], "tolerances": {...}, "labels": [...]}
/// with each entry a real number or an [re, im] pair.
struct InputDocument {
    std::vector<Matrix> matrices;  // raw, uniform square size
    std::vector<std::string> labels;
    Tolerances tolerances;

    /// Validate and symmetrize every matrix.
    MatrixFamily family() const;
};

InputDocument parse_input(const std::string& text);
InputDocument load_input(const std::string& path);

Json matrix_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json congruence_json(const CongruenceResult& r);
Json detect_report_json(const DetectReport& r);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace sdc
