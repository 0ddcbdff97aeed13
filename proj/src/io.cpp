#include "sdc/io.hpp"

#include <fstream>
#include <sstream>

namespace sdc {

MatrixFamily InputDocument::family() const {
    std::vector<HermitianMatrix> members;
    members.reserve(matrices.size());
    for (size_t i = 0; i < matrices.size(); ++i) {
        try {
            members.push_back(make_hermitian(matrices[i], tolerances));
        } catch (const Error& e) {
            const std::string label =
                i < labels.size() ? labels[i] : "matrix " + std::to_string(i + 1);
            throw InputError(label + ": " + e.what());
        }
    }
    return MatrixFamily(std::move(members));
}

namespace {

cplx entry_from_json(const Json& j) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cplx(j[0].get<double>(), j[1].get<double>());
    throw InputError("matrix entries must be numbers or [re, im] pairs");
}

void parse_tolerances(const Json& j, Tolerances& tol) {
    if (!j.is_object()) throw InputError("\"tolerances\" must be an object");
    for (const auto& [key, value] : j.items()) {
        if (key == "herm_tol") tol.herm_tol = value.get<double>();
        else if (key == "rank_tol") tol.rank_tol = value.get<double>();
        else if (key == "commute_tol") tol.commute_tol = value.get<double>();
        else if (key == "pd_tol") tol.pd_tol = value.get<double>();
        else if (key == "jacobi_eps") tol.jacobi_eps = value.get<double>();
        else if (key == "max_sweeps") tol.max_sweeps = value.get<int>();
        else if (key == "sample_bound") tol.sample_bound = value.get<int>();
        else if (key == "rng_seed") tol.rng_seed = value.get<std::uint64_t>();
        else throw InputError("unknown tolerance \"" + key + "\"");
    }
    try {
        tol.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

}  // namespace

Matrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw InputError("a matrix must be a non-empty array of rows");
    const int rows = static_cast<int>(j.size());
    int cols = -1;
    for (const auto& row : j) {
        if (!row.is_array()) throw InputError("matrix rows must be arrays");
        if (cols < 0) cols = static_cast<int>(row.size());
        else if (cols != static_cast<int>(row.size())) throw InputError("ragged matrix rows");
    }
    if (cols != rows) throw InputError("matrices must be square");
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int c = 0; c < cols; ++c) m(i, c) = entry_from_json(j[i][c]);
    if (!m.all_finite()) throw InputError("non-finite matrix entry");
    return m;
}

InputDocument parse_input(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::exception& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("matrices"))
        throw InputError("expected an object with a \"matrices\" array");
    const Json& mats = doc["matrices"];
    if (!mats.is_array() || mats.empty()) throw InputError("\"matrices\" must be a non-empty array");
    InputDocument in;
    for (const auto& j : mats) in.matrices.push_back(matrix_from_json(j));
    for (size_t i = 1; i < in.matrices.size(); ++i)
        if (in.matrices[i].rows() != in.matrices[0].rows())
            throw InputError("matrices must share one dimension");
    if (doc.contains("labels")) {
        for (const auto& l : doc["labels"]) in.labels.push_back(l.get<std::string>());
        if (in.labels.size() != in.matrices.size())
            throw InputError("labels must match the number of matrices");
    }
    if (doc.contains("tolerances")) parse_tolerances(doc["tolerances"], in.tolerances);
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (key != "matrices" && key != "labels" && key != "tolerances")
            throw InputError("unknown key \"" + key + "\"");
    }
    return in;
}

InputDocument load_input(const std::string& path) { return parse_input(read_text_file(path)); }

Json matrix_json(const Matrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) {
            const cplx z = m(i, j);
            if (z.imag() == 0.0) row.push_back(z.real());
            else row.push_back(Json::array({z.real(), z.imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json congruence_json(const CongruenceResult& r) {
    Json j;
    j["transform"] = matrix_json(r.transform);
    j["diagonals"] = r.diagonals;
    j["backward_error"] = r.backward_error;
    return j;
}

Json detect_report_json(const DetectReport& r) {
    Json j;
    j["verdict"] = r.verdict == Verdict::SDC ? "SDC" : "NOT_SDC";
    j["route"] = r.route == Route::SDP ? "sdp" : (r.route == Route::PENCIL ? "pencil" : "both");
    j["kernel_dim"] = r.q;
    if (r.max_rank >= 0) j["max_rank"] = r.max_rank;
    if (r.witness) j["witness"] = *r.witness;
    j["numeric_rank_fallback"] = r.used_numeric_rank;
    Json reasons = Json::array();
    for (const auto& reason : r.reasons) {
        Json jr;
        jr["kind"] = to_string(reason.kind);
        if (reason.i >= 0) jr["i"] = reason.i + 1;
        if (reason.j >= 0) jr["j"] = reason.j + 1;
        if (!reason.text.empty()) jr["detail"] = reason.text;
        reasons.push_back(std::move(jr));
    }
    j["reasons"] = std::move(reasons);
    return j;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
    if (!out.flush()) throw Error("failed writing " + path);
}

}  // namespace sdc
