#include "resokit/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <utility>

namespace resokit {

using nlohmann::json;

CheckResult make_check(const std::string& name, double lhs, double rhs,
                       double tolerance) {
    CheckResult c;
    c.name = name;
    c.lhs = lhs;
    c.rhs = rhs;
    c.tolerance = tolerance;
    c.pass = std::isfinite(lhs) && std::isfinite(rhs) &&
             std::abs(lhs - rhs) <= tolerance;
    return c;
}

RunReport::RunReport(std::string command) : command_(std::move(command)) {}

void RunReport::echo_model(const ModelSpec& m) {
    model_ = json{{"hash", m.hash_hex()},
                  {"parameters", json::parse(m.canonical_json())}};
}

void RunReport::add_check(const CheckResult& c) { checks_.push_back(c); }

void RunReport::put(const std::string& key, const json& value) {
    results_[key] = value;
}

void RunReport::record_tolerance(const std::string& name, double value) {
    tolerances_[name] = value;
}

bool RunReport::all_pass() const {
    for (const auto& c : checks_)
        if (!c.pass) return false;
    return true;
}

json RunReport::to_json() const {
    json checks = json::array();
    for (const auto& c : checks_) {
        checks.push_back(json{{"name", c.name},
                              {"lhs", c.lhs},
                              {"rhs", c.rhs},
                              {"tolerance", c.tolerance},
                              {"pass", c.pass}});
    }
    json body{{"schema", "resonance-kit/report/v1"},
              {"command", command_},
              {"model", model_},
              {"results", results_},
              {"tolerances", tolerances_},
              {"checks", checks},
              {"pass", all_pass()}};
    body["checksum"] = fnv1a_hex(body.dump());
    return body;
}

std::string RunReport::dump() const { return to_json().dump(2) + "\n"; }

void RunReport::write_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw KitError("cannot write " + path);
    out << dump();
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json vector_to_json(const CVector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_to_json(v[i]));
    return a;
}

json matrix_to_json(const CMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

json resonance_record(const ModelSpec& m, const Resonance& res) {
    json k0 = json::array();
    const CMatrix mm = m.M(res.zeta);
    for (int i = 0; i < res.q; ++i)
        k0.push_back(vector_to_json(CVector(mm * res.kernel_basis.col(i))));
    return json{{"zeta", complex_to_json(res.zeta)},
                {"det_order", res.det_order},
                {"q", res.q},
                {"residual", res.residual},
                {"kernel_basis", matrix_to_json(res.kernel_basis)},
                {"k0", k0}};
}

std::string fnv1a_hex(const std::string& s) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw KitError("cannot write " + path);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << "\n";
    char buf[40];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
            out << (i ? "," : "") << buf;
        }
        out << "\n";
    }
}

}  // namespace resokit
