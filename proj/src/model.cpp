#include "resokit/model.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace resokit {

namespace {

using nlohmann::json;

Complex poly_eval(const std::vector<double>& c, Complex x) {
    Complex acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Complex poly_deriv_eval(const std::vector<double>& c, Complex x) {
    Complex acc = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) acc = acc * x + double(k) * c[k];
    return acc;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ValidationError("unknown key '" + it.key() + "' in " + where);
    }
}

}  // namespace

CMatrix ModelSpec::M(Complex z) const {
    CMatrix out = CMatrix::Zero(n, n);
    for (const auto& t : terms) {
        const Complex x = z - t.center;
        out(t.row, t.col) += poly_eval(t.coeffs, x) * std::exp(-0.5 * t.width * x * x);
    }
    return out;
}

CMatrix ModelSpec::M_prime(Complex z) const {
    CMatrix out = CMatrix::Zero(n, n);
    for (const auto& t : terms) {
        const Complex x = z - t.center;
        const Complex gauss = std::exp(-0.5 * t.width * x * x);
        out(t.row, t.col) +=
            (poly_deriv_eval(t.coeffs, x) - t.width * x * poly_eval(t.coeffs, x)) * gauss;
    }
    return out;
}

CMatrix ModelSpec::B(Complex z) const {
    const CMatrix m = M(z);
    return m.transpose() * m;
}

CMatrix ModelSpec::B_prime(Complex z) const {
    const CMatrix m = M(z);
    const CMatrix mp = M_prime(z);
    return mp.transpose() * m + m.transpose() * mp;
}

double ModelSpec::envelope_halfwidth() const {
    double w = 8.0;
    for (const auto& t : terms) {
        double amp = 0.0;
        for (double c : t.coeffs) amp += std::abs(c);
        if (amp == 0.0) continue;
        // solve amp*(1+s)^deg * exp(-width s^2/2) = 1e-18 by fixed point
        const double deg = static_cast<double>(t.coeffs.size() - 1);
        double s = std::sqrt(2.0 * 42.0 / t.width);
        for (int it = 0; it < 8; ++it) {
            const double target = 42.0 + std::log(amp + 1.0) + deg * std::log1p(s);
            s = std::sqrt(2.0 * target / t.width);
        }
        w = std::max(w, std::abs(t.center) + s);
    }
    return w;
}

std::pair<double, double> ModelSpec::scan_range() const {
    double pad = 3.0;
    for (const auto& t : terms) pad = std::max(pad, 3.0 / std::sqrt(t.width));
    return {eigs_.minCoeff() - pad, eigs_.maxCoeff() + pad};
}

void ModelSpec::finalize() {
    if (n < 1) throw ValidationError("n must be positive");
    if (n > 16) throw ValidationError("n exceeds the supported cap (16)");
    if (lambda0.rows() != n || lambda0.cols() != n)
        throw ValidationError("dimension mismatch");
    const double scale = std::max(1.0, lambda0.cwiseAbs().maxCoeff());
    if ((lambda0 - lambda0.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw ValidationError("lambda0 must be symmetric");
    lambda0 = ((lambda0 + lambda0.transpose()) / 2.0).eval();

    for (const auto& t : terms) {
        if (t.width <= 0.0) throw ValidationError("width must be positive");
        if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
            throw ValidationError("term index out of range");
        if (t.coeffs.empty()) throw ValidationError("term needs at least one coefficient");
    }

    Eigen::SelfAdjointEigenSolver<RMatrix> es(lambda0);
    eigs_ = es.eigenvalues();

    if (!(region.re_min < region.re_max && region.im_min < region.im_max)) {
        region.re_min = eigs_.minCoeff() - 3.0;
        region.re_max = eigs_.maxCoeff() + 3.0;
        region.im_min = -2.0;
        region.im_max = 2.0;
    }
    if (region.re_min > eigs_.minCoeff() || region.re_max < eigs_.maxCoeff())
        throw ValidationError("region does not contain the level spectrum");
}

std::string ModelSpec::canonical_json() const {
    json j;
    j["n"] = n;
    auto& l0 = j["lambda0"] = json::array();
    for (int i = 0; i < n; ++i) {
        json row = json::array();
        for (int k = 0; k < n; ++k) row.push_back(lambda0(i, k));
        l0.push_back(row);
    }
    auto& ts = j["formfactor"]["terms"] = json::array();
    for (const auto& t : terms) {
        ts.push_back({{"row", t.row},
                      {"col", t.col},
                      {"coeffs", t.coeffs},
                      {"width", t.width},
                      {"center", t.center}});
    }
    j["region"] = {{"re_min", region.re_min},
                   {"re_max", region.re_max},
                   {"im_min", region.im_min},
                   {"im_max", region.im_max}};
    return j.dump();
}

std::string ModelSpec::hash_hex() const {
    const std::string s = canonical_json();
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

ModelSpec parse_model(const std::string& config_text) {
    json j;
    try {
        j = json::parse(config_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed config: ") + e.what());
    }

    ModelSpec m;
    try {
        reject_unknown_keys(j, {"n", "lambda0", "formfactor", "region"}, "config");
        if (!j.contains("n") || !j.contains("lambda0") || !j.contains("formfactor"))
            throw ValidationError("config requires keys n, lambda0, formfactor");
        m.n = j.at("n").get<int>();
        if (m.n < 1) throw ValidationError("n must be positive");

        const auto& l0 = j.at("lambda0");
        if (!l0.is_array() || l0.size() != static_cast<size_t>(m.n))
            throw ValidationError("dimension mismatch");
        m.lambda0 = RMatrix::Zero(m.n, m.n);
        for (int i = 0; i < m.n; ++i) {
            const auto& row = l0.at(i);
            if (!row.is_array() || row.size() != static_cast<size_t>(m.n))
                throw ValidationError("dimension mismatch");
            for (int k = 0; k < m.n; ++k) m.lambda0(i, k) = row.at(k).get<double>();
        }

        const auto& ff = j.at("formfactor");
        reject_unknown_keys(ff, {"terms"}, "formfactor");
        for (const auto& tj : ff.at("terms")) {
            reject_unknown_keys(tj, {"row", "col", "coeffs", "width", "center"}, "term");
            FormFactorTerm t;
            t.row = tj.at("row").get<int>();
            t.col = tj.at("col").get<int>();
            t.coeffs = tj.at("coeffs").get<std::vector<double>>();
            t.width = tj.at("width").get<double>();
            t.center = tj.value("center", 0.0);
            m.terms.push_back(std::move(t));
        }

        if (j.contains("region")) {
            const auto& r = j.at("region");
            reject_unknown_keys(r, {"re_min", "re_max", "im_min", "im_max"}, "region");
            m.region.re_min = r.at("re_min").get<double>();
            m.region.re_max = r.at("re_max").get<double>();
            m.region.im_min = r.at("im_min").get<double>();
            m.region.im_max = r.at("im_max").get<double>();
            if (!m.region.valid()) throw ValidationError("region bounds are not ordered");
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config field error: ") + e.what());
    }

    m.finalize();
    return m;
}

ModelSpec load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

}  // namespace resokit
