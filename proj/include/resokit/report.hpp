#pragma once

// Run reports: named checks with tolerances, a model echo, and deterministic
// JSON output (sorted keys, no timestamps, body checksum). Also the CSV
// writers the CLI uses for curve dumps.

#include <string>
#include <vector>

#include <json.hpp>

#include "resokit/model.hpp"
#include "resokit/resonance.hpp"
#include "resokit/types.hpp"

namespace resokit {

struct CheckResult {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// |lhs - rhs| <= tolerance, with non-finite values failing outright
CheckResult make_check(const std::string& name, double lhs, double rhs, double tolerance);

class RunReport {
public:
    explicit RunReport(std::string command);

    void echo_model(const ModelSpec& m);
    void add_check(const CheckResult& c);
    void put(const std::string& key, const nlohmann::json& value);
    void record_tolerance(const std::string& name, double value);

    bool all_pass() const;
    const std::vector<CheckResult>& checks() const { return checks_; }

    // keys sorted, 2-space indent, trailing newline; "checksum" holds the
    // FNV-1a hash of the object serialized without that key
    nlohmann::json to_json() const;
    std::string dump() const;
    void write_file(const std::string& path) const;

private:
    std::string command_;
    nlohmann::json model_ = nlohmann::json::object();
    nlohmann::json results_ = nlohmann::json::object();
    nlohmann::json tolerances_ = nlohmann::json::object();
    std::vector<CheckResult> checks_;
};

nlohmann::json complex_to_json(Complex z);
nlohmann::json vector_to_json(const CVector& v);
nlohmann::json matrix_to_json(const CMatrix& a);

// full record for resonances.json: location, orders, kernel basis, and the
// coupling image k0 of each kernel vector
nlohmann::json resonance_record(const ModelSpec& m, const Resonance& res);

std::string fnv1a_hex(const std::string& s);

// rows printed with %.17g so reloads are bit-exact
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace resokit
