#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

#include "pmdq/cli.hpp"
#include "pmdq/config.hpp"
#include "pmdq/errors.hpp"
#include "pmdq/report.hpp"
#include "pmdq/scan_io.hpp"

using namespace pmdq;
using nlohmann::json;

namespace {

json minimal_type_b() {
    return json::parse(R"({
        "schema_version": 1, "mode": "type_b",
        "spectrum": {"omega0": 1.2, "tau_minus": 1.0},
        "sample_post": {"length": 10, "h": {"k0": 0.1, "alpha": 3.0}, "v": {"k0": 0.2, "alpha": 3.4}},
        "delays": {"tau": 4, "tau2": 6},
        "scan": {"axis": "tau1", "start": -10, "stop": 10, "points": 21}
    })");
}

std::string config_error(const json& doc) {
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "pmdq_config_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_SUITE("config") {
    TEST_CASE("a complete Type B document parses") {
        const ExperimentConfig c = parse_config(minimal_type_b());
        CHECK(c.mode == Mode::type_b);
        CHECK(c.spectrum.omega0 == 1.2);
        CHECK(c.sample_post.v.alpha == 3.4);
        CHECK(c.delays.tau == 4.0);
        REQUIRE(c.scan);
        CHECK(c.scan->points == 21);
        CHECK(c.engine == Engine::automatic);
        const TypeBConfig b = c.type_b();
        CHECK(b.sample_post.length == 10.0);
    }

    TEST_CASE("spectrum from wavelength and bandwidth") {
        json doc = minimal_type_b();
        doc["spectrum"] = {{"lambda0_nm", 1550}, {"bandwidth_nm", 200}};
        const ExperimentConfig c = parse_config(doc);
        CHECK(c.spectrum.omega0 == doctest::Approx(omega0_from_wavelength(1550.0)));
        CHECK(c.spectrum.tau_minus == doctest::Approx(tau_minus_from_bandwidth(1550.0, 200.0)));
        doc["spectrum"] = {{"lambda0_nm", 1550}, {"omega0", 1.2}, {"tau_minus", 1}};
        CHECK(config_error(doc).find("spectrum") != std::string::npos);
        doc["spectrum"] = {{"omega0", 1.2}};
        CHECK(config_error(doc).find("spectrum") != std::string::npos);
    }

    TEST_CASE("scientific notation is accepted") {
        json doc = json::parse(R"({"schema_version": 1, "mode": "type_b",
            "spectrum": {"omega0": 1.2e0, "tau_minus": 1e0},
            "sample_post": {"length": 1e1, "v": {"alpha": 3.4e-0}}, "delays": {"tau": 4e0}})");
        CHECK(parse_config(doc).sample_post.length == 10.0);
    }

    TEST_CASE("errors name the offending field") {
        json doc = minimal_type_b();
        doc["sample_post"]["h"]["alpah"] = 3.0;
        CHECK(config_error(doc).find("sample_post.h.alpah") != std::string::npos);

        doc = minimal_type_b();
        doc["colour"] = "blue";
        CHECK(config_error(doc).find("colour") != std::string::npos);

        doc = minimal_type_b();
        doc["scan"]["points"] = 1;
        CHECK(config_error(doc).find("scan.points") != std::string::npos);

        doc = minimal_type_b();
        doc["scan"]["stop"] = -20;
        CHECK(config_error(doc).find("scan") != std::string::npos);

        doc = minimal_type_b();
        doc["scan"]["axis"] = "delta";
        CHECK(config_error(doc).find("scan.axis") != std::string::npos);

        doc = minimal_type_b();
        doc["delays"].erase("tau");
        CHECK(config_error(doc).find("delays.tau") != std::string::npos);

        doc = minimal_type_b();
        doc["schema_version"] = 2;
        CHECK(config_error(doc).find("schema_version") != std::string::npos);

        doc = minimal_type_b();
        doc["mode"] = "type_c";
        CHECK(config_error(doc).find("mode") != std::string::npos);

        doc = minimal_type_b();
        doc["engine"] = "fast";
        CHECK(config_error(doc).find("engine") != std::string::npos);

        doc = minimal_type_b();
        doc["sample_post"]["length"] = "ten";
        CHECK(config_error(doc).find("sample_post.length") != std::string::npos);

        doc = minimal_type_b();
        doc["output"] = {{"format", "csv"}};
        CHECK(config_error(doc).find("output.format") != std::string::npos);
    }

    TEST_CASE("postponed mode needs l1 = 0 and tau1 = 0") {
        json doc = minimal_type_b();
        doc["mode"] = "type_b_postponed";
        doc["scan"]["axis"] = "tau";
        CHECK_NOTHROW(parse_config(doc));
        doc["delays"]["tau1"] = 1.0;
        CHECK(config_error(doc).find("tau1") != std::string::npos);
        doc["delays"]["tau1"] = 0.0;
        doc["sample_pre"] = {{"length", 5}};
        CHECK(config_error(doc).find("sample_pre") != std::string::npos);
    }

    TEST_CASE("classical documents use a single sample") {
        json doc = json::parse(R"({"schema_version": 1, "mode": "classical",
            "spectrum": {"lambda0_nm": 1550, "bandwidth_nm": 200},
            "sample": {"length": 40, "v": {"alpha": 0.5}},
            "scan": {"axis": "delta", "start": -5, "stop": 5, "points": 11}})");
        const ExperimentConfig c = parse_config(doc);
        CHECK(c.classical().sample.length == 40.0);
        CHECK(c.classical().scan.size() == 11);
        doc["sample_post"] = {{"length", 1}};
        CHECK(config_error(doc).find("sample") != std::string::npos);
    }

    TEST_CASE("scan files round trip") {
        ScanResult s;
        s.axis = Axis::tau2;
        s.delay = linspace(-1.0, 1.0, 7);
        s.value = s.delay.array().square() + 0.123456789012345;
        s.metadata = {{"mode", "type_a"}, {"axis", "tau2"}, {"spectrum", {{"omega0", 1.2}, {"tau_minus", 3.0}}}};
        std::stringstream io;
        write_scan(io, s, minimal_type_b());
        const std::string text = io.str();
        CHECK(text.rfind("# format_version: 1\n", 0) == 0);
        CHECK(text.find("# columns: tau2[fs]\trate\n") != std::string::npos);
        const ScanResult back = read_scan(io);
        CHECK(back.axis == Axis::tau2);
        REQUIRE(back.size() == 7);
        for (Eigen::Index i = 0; i < 7; ++i) {
            CHECK(back.delay(i) == doctest::Approx(s.delay(i)).epsilon(1e-14));
            CHECK(back.value(i) == doctest::Approx(s.value(i)).epsilon(1e-14));
        }
        CHECK(back.metadata["spectrum"]["tau_minus"] == 3.0);

        std::stringstream measured("# columns: tau[fs]\trate\n0\t1\n1\t0.5\n");
        const ScanResult m = read_scan(measured);
        CHECK(m.axis == Axis::tau);
        CHECK(m.size() == 2);

        const auto path = scratch("roundtrip.tsv");
        write_scan_file(path.string(), s, json::object());
        CHECK(read_scan_file(path.string()).size() == 7);
        CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
    }

    TEST_CASE("reports always print uncertainties") {
        RecoveryReport r;
        r.protocol = "type_b_two_scan";
        r.estimates["alphaH"] = {3.0, 0.001, "stationary dip"};
        r.branches["dk0_visibility"] = {-0.1, 0.1};
        r.residual = 1e-4;
        const std::string text = format_report(r);
        CHECK(text.find("alphaH.value = 3\n") != std::string::npos);
        CHECK(text.find("alphaH.uncertainty = 0.001\n") != std::string::npos);
        CHECK(text.find("alphaH.unit = fs/um\n") != std::string::npos);
        CHECK(text.find("dk0_visibility.branches = -0.1, 0.1\n") != std::string::npos);
        CHECK(text.find("residual = ") != std::string::npos);
        CHECK(estimate_unit("dk0") == "rad/um");
        CHECK(estimate_unit("dA") == "fs");
    }

    TEST_CASE("command exit codes") {
        const auto cfg = scratch("cmd.json");
        std::ostringstream out, err;
        auto write = [&](const json& doc) {
            std::FILE* f = std::fopen(cfg.string().c_str(), "w");
            const std::string s = doc.dump();
            std::fwrite(s.data(), 1, s.size(), f);
            std::fclose(f);
        };
        CommandOptions o;
        o.config_path = cfg.string();

        write(minimal_type_b());
        CHECK(run_command("scan", o, out, err) == kExitOk);
        CHECK(out.str().find("# format_version: 1") != std::string::npos);
        CHECK(err.str().find("extrema = ") != std::string::npos);
        CHECK(run_command("predict", o, out, err) == kExitOk);
        CHECK(run_command("launch", o, out, err) == kExitConfig);

        json doc = minimal_type_b();
        doc["sample_post"]["v"]["beta"] = 0.1;
        doc["engine"] = "analytic";
        write(doc);
        CHECK(run_command("scan", o, out, err) == kExitConfig);

        doc = minimal_type_b();
        doc["physical_mode"] = true;
        doc["scan"] = {{"axis", "tau"}, {"start", -5}, {"stop", 5}, {"points", 11}};
        write(doc);
        CHECK(run_command("scan", o, out, err) == kExitConfig);

        doc = minimal_type_b();
        doc["spectrum"]["tau_minus"] = 1e-9;
        doc["sample_post"]["v"]["gamma"] = 1.0;
        doc["scan"]["points"] = 2;
        write(doc);
        err.str("");
        CHECK(run_command("scan", o, out, err) == kExitNumeric);
        CHECK(err.str().find("scan point") != std::string::npos);

        doc = minimal_type_b();
        doc["recover"] = {{"protocol", "type_b_two_scan"}, {"scans", json::array()}};
        write(doc);
        CHECK(run_command("recover", o, out, err) == kExitConfig);
    }
}
