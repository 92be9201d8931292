#include "sweq/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

namespace sweq {

namespace {

double number_at(const Json& j, const std::string& where) {
    if (!j.is_number()) throw InputError(where + ": expected a number");
    return j.get<double>();
}

}  // namespace

Matrix matrix_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw InputError(where + ": expected a non-empty array of rows");
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    Matrix m;
    for (std::size_t r = 0; r < rows; ++r) {
        const Json& row = j[r];
        const std::string row_where = where + "[" + std::to_string(r) + "]";
        if (!row.is_array() || row.empty())
            throw InputError(row_where + ": expected a non-empty array of numbers");
        if (r == 0) {
            cols = row.size();
            m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        } else if (row.size() != cols) {
            throw InputError(row_where + ": ragged row (expected " + std::to_string(cols) +
                             " entries, got " + std::to_string(row.size()) + ")");
        }
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                number_at(row[c], row_where + "[" + std::to_string(c) + "]");
    }
    return m;
}

Vector vector_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty())
        throw InputError(where + ": expected a non-empty array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = number_at(j[i], where + "[" + std::to_string(i) + "]");
    return v;
}

OrderedJson matrix_to_json(const Matrix& m) {
    OrderedJson rows = OrderedJson::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        OrderedJson row = OrderedJson::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

OrderedJson vector_to_json(const Vector& v) {
    OrderedJson arr = OrderedJson::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

SwitchedSystem system_from_json(const Json& j) {
    if (!j.is_object()) throw InputError("$: expected a JSON object");
    if (!j.contains("A")) throw InputError("$.A: missing");
    if (!j.contains("b")) throw InputError("$.b: missing");
    const Json& ja = j["A"];
    const Json& jb = j["b"];
    if (!ja.is_array() || ja.empty()) throw InputError("$.A: expected a non-empty array");
    if (!jb.is_array() || jb.size() != ja.size())
        throw InputError("$.b: expected an array with one vector per subsystem");

    std::vector<Matrix> A;
    std::vector<Vector> b;
    A.reserve(ja.size());
    b.reserve(jb.size());
    for (std::size_t i = 0; i < ja.size(); ++i) {
        A.push_back(matrix_from_json(ja[i], "$.A[" + std::to_string(i) + "]"));
        b.push_back(vector_from_json(jb[i], "$.b[" + std::to_string(i) + "]"));
    }
    Matrix C;
    if (j.contains("C") && !j["C"].is_null()) C = matrix_from_json(j["C"], "$.C");
    std::string name;
    if (j.contains("name")) {
        if (!j["name"].is_string()) throw InputError("$.name: expected a string");
        name = j["name"].get<std::string>();
    }
    return SwitchedSystem(std::move(A), std::move(b), std::move(C), std::move(name));
}

SwitchedSystem load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path + ": cannot open file");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
    try {
        return system_from_json(j);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

OrderedJson system_to_json(const SwitchedSystem& sys) {
    OrderedJson j;
    if (!sys.name().empty()) j["name"] = sys.name();
    OrderedJson ja = OrderedJson::array();
    OrderedJson jb = OrderedJson::array();
    for (int i = 0; i < sys.subsystem_count(); ++i) {
        ja.push_back(matrix_to_json(sys.A(i)));
        jb.push_back(vector_to_json(sys.b(i)));
    }
    j["A"] = std::move(ja);
    j["b"] = std::move(jb);
    if (sys.output_dim() > 0) j["C"] = matrix_to_json(sys.C());
    return j;
}

OrderedJson design_to_json(const DesignResult& d) {
    OrderedJson j;
    j["lambda"] = vector_to_json(d.lam.entries());
    j["x_star"] = vector_to_json(d.x_star);
    j["P"] = matrix_to_json(d.P);
    j["rho"] = d.rho;
    j["Q"] = matrix_to_json(d.Q);
    j["x0"] = vector_to_json(d.x0);
    return j;
}

LoadedDesign design_from_json(const Json& j) {
    const Json* d = &j;
    if (j.is_object() && j.contains("result") && j["result"].is_object() &&
        j["result"].contains("design"))
        d = &j["result"]["design"];
    else if (j.is_object() && j.contains("design"))
        d = &j["design"];
    if (!d->is_object()) throw InputError("design: expected a JSON object");
    if (!d->contains("P")) throw InputError("design.P: missing");
    if (!d->contains("x_star")) throw InputError("design.x_star: missing");
    if (!d->contains("Q")) throw InputError("design.Q: missing");

    LoadedDesign out;
    out.P = matrix_from_json((*d)["P"], "design.P");
    out.x_star = vector_from_json((*d)["x_star"], "design.x_star");
    out.Q = matrix_from_json((*d)["Q"], "design.Q");
    if (d->contains("lambda")) out.lam = vector_from_json((*d)["lambda"], "design.lambda");
    if (d->contains("rho")) out.rho = number_at((*d)["rho"], "design.rho");
    if (d->contains("x0")) out.x0 = vector_from_json((*d)["x0"], "design.x0");
    return out;
}

LoadedDesign load_design(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path + ": cannot open file");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
    try {
        return design_from_json(j);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_text_atomic(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError(tmp.string() + ": cannot open for writing");
        out << text;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw InputError(tmp.string() + ": write failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw InputError(path + ": cannot replace file: " + ec.message());
    }
}

}  // namespace sweq
