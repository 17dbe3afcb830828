#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "resokit/report.hpp"
#include "resokit/resonance.hpp"

using namespace resokit;
using namespace testkit;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("checks compare with the stated tolerance") {
    CHECK(make_check("a", 1.0, 1.0 + 5e-9, 1e-8).pass);
    CHECK_FALSE(make_check("a", 1.0, 1.0 + 2e-8, 1e-8).pass);
    CHECK_FALSE(make_check("a", std::nan(""), 0.0, 1e30).pass);
    CHECK_FALSE(make_check("a", 0.0, 1.0 / 0.0, 1e30).pass);
}

TEST_CASE("hash function matches its published test vectors") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("reports are deterministic and carry a valid checksum") {
    auto build = [] {
        RunReport rep("validate");
        ModelSpec m = load_bundled("scalar_gauss.json");
        rep.echo_model(m);
        rep.add_check(make_check("alpha", 0.5, 0.5, 1e-12));
        rep.record_tolerance("alpha", 1e-12);
        rep.put("note", "fixture");
        return rep.dump();
    };
    const std::string once = build();
    CHECK(once == build());
    CHECK(once.back() == '\n');

    json parsed = json::parse(once);
    const std::string recorded = parsed.at("checksum");
    parsed.erase("checksum");
    CHECK(fnv1a_hex(parsed.dump()) == recorded);
    CHECK(parsed.at("schema") == "resonance-kit/report/v1");
    CHECK(parsed.at("command") == "validate");
    CHECK(parsed.at("model").at("hash") ==
          load_bundled("scalar_gauss.json").hash_hex());
    CHECK(parsed.at("pass") == true);
}

TEST_CASE("any failing check flips the aggregate flag") {
    RunReport rep("verify");
    rep.add_check(make_check("ok", 1.0, 1.0, 1e-12));
    CHECK(rep.all_pass());
    rep.add_check(make_check("bad", 1.0, 2.0, 1e-12));
    CHECK_FALSE(rep.all_pass());
    const json j = rep.to_json();
    CHECK(j.at("pass") == false);
    CHECK(j.at("checks").size() == 2);
    CHECK(j.at("checks")[1].at("name") == "bad");
}

TEST_CASE("value encodings have fixed shapes") {
    CHECK(complex_to_json(Complex(1.5, -2.0)) == json::array({1.5, -2.0}));
    CVector v(2);
    v << Complex(0, 1), Complex(2, 0);
    const json jv = vector_to_json(v);
    CHECK(jv.size() == 2);
    CHECK(jv[0] == json::array({0.0, 1.0}));
    CMatrix a(1, 2);
    a << Complex(1, 0), Complex(0, -1);
    const json ja = matrix_to_json(a);
    CHECK(ja.size() == 1);
    CHECK(ja[0][1] == json::array({0.0, -1.0}));
}

TEST_CASE("resonance records expose the full pole data") {
    ModelSpec m = load_bundled("scalar_gauss.json");
    const LocateResult lr = locate_resonances(m, Rectangle{0.0, 2.0, -0.5, -1e-4});
    REQUIRE(lr.found.size() == 1);
    const json rec = resonance_record(m, lr.found.front());
    CHECK(rec.at("q") == 1);
    CHECK(rec.at("det_order") == 1);
    CHECK(rec.at("zeta").size() == 2);
    CHECK(rec.at("kernel_basis").size() == 1);
    CHECK(rec.at("k0").size() == 1);
    CHECK(rec.at("residual").get<double>() < 1e-10);
    const double re = rec.at("zeta")[0].get<double>();
    CHECK(std::abs(re - kZeta0.real()) < 1e-9);
}

TEST_CASE("csv round-trips doubles exactly") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "resokit_csv_test.csv";
    const double x = 0.1 + 0.2;  // not representable tidily
    write_csv(path.string(), {"t", "value"}, {{0.0, x}, {1.0, -3.5e-301}});
    const std::string text = slurp(path.string());
    REQUIRE(!text.empty());
    std::stringstream ss(text);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "t,value");
    std::getline(ss, line);
    const auto comma = line.find(',');
    CHECK(std::stod(line.substr(comma + 1)) == x);
    std::getline(ss, line);
    CHECK(std::stod(line.substr(line.find(',') + 1)) == -3.5e-301);
    fs::remove(path);
    CHECK_THROWS_AS(write_csv("/nonexistent-dir/x.csv", {"a"}, {}), KitError);
}

}  // TEST_SUITE
