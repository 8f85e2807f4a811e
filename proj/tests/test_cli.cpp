#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "supercurve/job.hpp"

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace supercurve;

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kDual = R"(
algebra:
  odd: [eps, del]
  even: [t]
command: dual-curve
payload:
  curve: {modulus: "t", epsilon: "eps", delta: "del"}
)";

} // namespace

TEST_CASE("job parsing rejects malformed documents") {
    CHECK_THROWS_AS(parse_job("command: [unbalanced"), JobParseError);
    CHECK_THROWS_AS(parse_job("{}"), JobParseError);                 // no command
    CHECK_THROWS_AS(parse_job("command: dual-curve"), JobParseError); // no algebra
    // Unknown command name.
    CHECK_THROWS_AS(parse_job("algebra: {odd: [e], even: []}\n"
                              "command: no-such-thing\n"
                              "payload: {}\n"),
                    JobParseError);
    // Payload fields are validated with located messages.
    try {
        parse_job("algebra: {odd: [eps, del], even: [t]}\n"
                  "command: dual-curve\n"
                  "payload:\n"
                  "  curve: {modulus: \"t\", epsilon: \"t\", delta: \"del\"}\n");
        FAIL("expected a parse error");
    } catch (const JobParseError& e) {
        CHECK(std::string(e.what()).find("payload.curve") != std::string::npos);
    }
    // Elements must parse in the declared algebra.
    CHECK_THROWS_AS(parse_job("algebra: {odd: [eps], even: []}\n"
                              "command: dual-curve\n"
                              "payload:\n"
                              "  curve: {modulus: \"0\", epsilon: \"eps\", delta: \"nope\"}\n"),
                    JobParseError);
}

TEST_CASE("dual curve job output") {
    JobResult r = run_job(parse_job(kDual));
    YAML::Node out = YAML::Load(r.structured);
    CHECK(out["command"].as<std::string>() == "dual-curve");
    CHECK(out["status"].as<std::string>() == "ok");
    YAML::Node dual = out["result"];
    CHECK(dual["modulus"].as<std::string>() == "t + eps del");
    CHECK(dual["epsilon"].as<std::string>() == "del");
    CHECK(dual["delta"].as<std::string>() == "eps");
    CHECK(!r.rendered.empty());
}

TEST_CASE("run errors surface as domain errors") {
    // Non-invariant one-form on a non-projected curve.
    const char* doc = R"(
algebra:
  odd: [eps, del]
  even: [t]
command: transform-bundle
payload:
  curve: {modulus: "t", epsilon: "eps", delta: "del"}
  one_form: {A: "1", B: "del"}
)";
    CHECK_THROWS_AS(run_job(parse_job(doc)), std::domain_error);
}

TEST_CASE("shipped job documents run deterministically") {
    std::filesystem::path dir(JOBS_DIR);
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".yaml")
            continue;
        ++count;
        INFO(entry.path().filename().string());
        std::string text = read_file(entry.path());
        JobResult first = run_job(parse_job(text));
        JobResult second = run_job(parse_job(text));
        CHECK(first.structured == second.structured);
        CHECK(first.rendered == second.rendered);
        YAML::Node out = YAML::Load(first.structured);
        CHECK(out["status"].as<std::string>() == "ok");
        CHECK(out["command"].as<std::string>() ==
              YAML::Load(text)["command"].as<std::string>());
    }
    CHECK(count == 9);
}

TEST_CASE("identity checks all pass") {
    const char* doc = R"(
algebra:
  odd: [eps, del]
  even: [t]
command: check-identities
payload:
  curve: {modulus: "t", epsilon: "eps", delta: "del"}
)";
    JobResult r = run_job(parse_job(doc));
    YAML::Node out = YAML::Load(r.structured);
    YAML::Node checks = out["result"]["checks"];
    REQUIRE(checks.IsSequence());
    CHECK(checks.size() == 8);
    for (const auto& c : checks)
        CHECK(c["pass"].as<bool>());
}
