#include "isospec/io.hpp"

#include <fstream>
#include <sstream>

#include "isospec/error.hpp"

namespace isospec {

namespace {

[[noreturn]] void schema(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::SchemaError, "field '" + field + "': " + what);
}

Complex complex_from_json(const nlohmann::json& v, const std::string& field) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        schema(field, "expected [re, im]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

ComplexVector complex_vector_from_json(const nlohmann::json& doc, const std::string& field) {
    if (!doc.is_array() || doc.empty()) schema(field, "expected a nonempty array of [re, im]");
    ComplexVector out(static_cast<Eigen::Index>(doc.size()));
    for (std::size_t k = 0; k < doc.size(); ++k) {
        out(static_cast<Eigen::Index>(k)) = complex_from_json(doc[k], field + "[" + std::to_string(k) + "]");
    }
    return out;
}

}  // namespace

std::string canonical_dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

nlohmann::json complex_matrix_to_json(const ComplexMatrix& x) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < x.cols(); ++c) row.push_back({x(r, c).real(), x(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix complex_matrix_from_json(const nlohmann::json& doc, int rows, int cols, const std::string& field) {
    if (!doc.is_array() || doc.size() != static_cast<std::size_t>(rows)) {
        schema(field, "expected " + std::to_string(rows) + " rows");
    }
    ComplexMatrix x(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const auto& row = doc[static_cast<std::size_t>(r)];
        const std::string rname = field + "[" + std::to_string(r) + "]";
        if (!row.is_array() || row.size() != static_cast<std::size_t>(cols)) {
            schema(rname, "expected " + std::to_string(cols) + " entries");
        }
        for (int c = 0; c < cols; ++c) {
            x(r, c) = complex_from_json(row[static_cast<std::size_t>(c)], rname + "[" + std::to_string(c) + "]");
        }
    }
    return x;
}

nlohmann::json jmap_to_json(const JMap& j) {
    return {{"m", j.m()}, {"j1", complex_matrix_to_json(j.j1().matrix())}, {"j2", complex_matrix_to_json(j.j2().matrix())}};
}

JMap jmap_from_json(const nlohmann::json& doc, double tol) {
    if (!doc.is_object()) schema("<root>", "expected an object");
    if (!doc.contains("m")) schema("m", "missing");
    if (!doc["m"].is_number_integer()) schema("m", "expected an integer");
    const int m = doc["m"].get<int>();
    if (m < 3 || m > 64) schema("m", "expected 3 <= m <= 64");
    auto component = [&](const char* name) {
        if (!doc.contains(name)) schema(name, "missing");
        const ComplexMatrix x = complex_matrix_from_json(doc[name], m, m, name);
        try {
            return validate_su(x, tol);
        } catch (const Error& e) {
            schema(name, e.what());
        }
    };
    SuElement j1 = component("j1");
    SuElement j2 = component("j2");
    return JMap(std::move(j1), std::move(j2));
}

std::pair<ComplexVector, ComplexVector> point_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) schema("<root>", "expected an object");
    if (!doc.contains("u")) schema("u", "missing");
    if (!doc.contains("v")) schema("v", "missing");
    ComplexVector u = complex_vector_from_json(doc["u"], "u");
    ComplexVector v = complex_vector_from_json(doc["v"], "v");
    if (v.size() != 2) schema("v", "expected two entries");
    return {std::move(u), std::move(v)};
}

nlohmann::json report_to_json(const VerificationReport& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& e : report.checks) {
        nlohmann::json c{{"name", e.name},
                         {"paper_anchor", e.anchor},
                         {"sample_count", e.sample_count},
                         {"max_residual", e.max_residual},
                         {"tolerance", e.tolerance},
                         {"passed", e.passed}};
        if (!e.detail.empty()) c["detail"] = e.detail;
        checks.push_back(std::move(c));
    }
    return {{"metadata", report.metadata}, {"checks", checks}};
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for reading");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

nlohmann::json read_json(const std::string& path) {
    const std::string text = read_text(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::SchemaError, "'" + path + "' is not valid JSON: " + e.what());
    }
}

void save_jmap(const std::string& path, const JMap& j) { write_text(path, canonical_dump(jmap_to_json(j))); }

JMap load_jmap(const std::string& path) { return jmap_from_json(read_json(path)); }

}  // namespace isospec
