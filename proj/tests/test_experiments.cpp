#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include "byzq/attack.hpp"
#include "byzq/experiments.hpp"

using namespace byzq;
using nlohmann::json;

namespace {
ExperimentConfig make_cfg(const std::string& id, json params, std::uint64_t seed = 42) {
    ExperimentConfig c;
    c.experiment = id;
    c.seed = seed;
    c.params = std::move(params);
    return c;
}
}  // namespace

TEST_CASE("registry lists every experiment with a reproduction label") {
    const auto& reg = experiment_registry();
    CHECK(reg.size() == 8);
    for (const auto& e : reg) {
        CHECK_FALSE(e.id.empty());
        CHECK_FALSE(e.reproduces.empty());
    }
}

TEST_CASE("config validation diagnostics") {
    SUBCASE("well-formed config has no diagnostics") {
        const auto c = make_cfg("kld-vs-alpha", json::object());
        CHECK(validate_config(c).empty());
    }
    SUBCASE("flip probability out of the symmetric family") {
        const auto c = make_cfg("kld-vs-alpha", json{{"M", json::array({4})}, {"p", 0.9}});
        const auto diags = validate_config(c);
        REQUIRE_FALSE(diags.empty());
        CHECK(diags.front().path == "params.p");
        CHECK(diags.front().message.find("1/(M-1)") != std::string::npos);
    }
    SUBCASE("fraction out of range") {
        const auto c =
            make_cfg("detection-error", json{{"alpha", json::array({0.2, 1.2})}});
        const auto diags = validate_config(c);
        REQUIRE_FALSE(diags.empty());
        CHECK(diags.front().path == "params.alpha");
    }
    SUBCASE("unknown experiment id") {
        const auto c = make_cfg("not-an-experiment", json::object());
        CHECK_FALSE(validate_config(c).empty());
    }
    SUBCASE("every violation is listed, not just the first") {
        const auto c = make_cfg("kld-vs-alpha",
                                json{{"A", -1.0}, {"sigma", 0.0}, {"mu", -2.0}});
        CHECK(validate_config(c).size() >= 3);
    }
    SUBCASE("run on an invalid config throws") {
        const auto c = make_cfg("kld-vs-alpha", json{{"p", 2.0}});
        CHECK_THROWS_AS(run_experiment(c), std::invalid_argument);
    }
}

TEST_CASE("alpha-blind table matches the published values at four decimals") {
    const auto t = run_experiment(make_cfg("alpha-blind-table", json::object()));
    REQUIRE(t.rows.size() == 8);
    const double expect[8] = {0.5, 0.75, 0.875, 0.9375, 0.9688, 0.9844, 0.9922, 0.9961};
    for (int i = 0; i < 8; ++i) {
        const double rounded = std::round(t.rows[i][2] * 1e4) / 1e4;
        CHECK(rounded == doctest::Approx(expect[i]).epsilon(1e-12));
    }
}

TEST_CASE("kld curves hit zero exactly at each blind point") {
    const auto t = run_experiment(make_cfg(
        "kld-vs-alpha",
        json{{"M", json::array({2, 4, 8, 16})},
             {"alpha", json{{"start", 0.0}, {"stop", 0.9}, {"points", 10}}}}));
    bool saw_blind[17] = {};
    for (const auto& row : t.rows) {
        const int M = static_cast<int>(row[0]);
        if (row[1] == blind_fraction(M)) {
            saw_blind[M] = true;
            CHECK(row[3] <= 1e-12);
        }
    }
    CHECK(saw_blind[2]);
    CHECK(saw_blind[4]);
    CHECK(saw_blind[8]);
    CHECK(saw_blind[16]);
}

TEST_CASE("noisy-channel experiment emits the solution and diagnostic") {
    const auto t = run_experiment(make_cfg(
        "noisy-channel",
        json{{"M", 2},
             {"Q", json::array({json::array({0.8, 0.2}), json::array({0.3, 0.7})})}}));
    REQUIRE(t.rows.size() == 4);
    // columns: row, col, p, alpha_blind, feasible, alpha_min_feasible
    CHECK(t.rows[0][3] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(t.rows[0][4] == 0.0);
    CHECK(t.rows[0][5] == doctest::Approx(0.6).epsilon(1e-8));
    CHECK(t.rows[0][2] == doctest::Approx(-0.5).epsilon(1e-12));  // p_11
}

TEST_CASE("csv serialization") {
    SUBCASE("shortest round-trip float formatting") {
        std::mt19937 gen(4);
        std::uniform_real_distribution<double> u(-1e6, 1e6);
        for (int k = 0; k < 500; ++k) {
            const double x = u(gen) * std::pow(10.0, static_cast<int>(gen() % 13) - 6);
            CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
        }
        CHECK(format_double(2.0) == "2");
        CHECK(format_double(0.5) == "0.5");
    }
    SUBCASE("metadata rides in comment lines before the header") {
        const auto t = run_experiment(make_cfg("alpha-blind-table", json::object()));
        const std::string csv = to_csv(t);
        CHECK(csv.rfind("# byzq", 0) == 0);
        CHECK(csv.find("# experiment: alpha-blind-table") != std::string::npos);
        CHECK(csv.find("# reproduces: table-1") != std::string::npos);
        CHECK(csv.find("bits,M,alpha_blind") != std::string::npos);
    }
    SUBCASE("values parse back bit-exactly") {
        const auto t = run_experiment(make_cfg(
            "kld-vs-alpha", json{{"M", json::array({4})},
                                 {"alpha", json{{"start", 0.0}, {"stop", 0.7}, {"points", 5}}}}));
        const std::string csv = to_csv(t);
        std::istringstream in(csv);
        std::string line;
        std::size_t row = 0;
        bool header_seen = false;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            if (!header_seen) {
                header_seen = true;
                continue;
            }
            std::istringstream cells(line);
            std::string cell;
            std::size_t col = 0;
            while (std::getline(cells, cell, ',')) {
                CHECK(std::strtod(cell.c_str(), nullptr) == t.rows[row][col]);
                ++col;
            }
            CHECK(col == t.columns.size());
            ++row;
        }
        CHECK(row == t.rows.size());
    }
}

TEST_CASE("identical config and seed give byte-identical output") {
    const auto cfgs = {
        make_cfg("alpha-blind-table", json::object()),
        make_cfg("kld-vs-alpha",
                 json{{"M", json::array({2, 4})},
                      {"alpha", json{{"start", 0.0}, {"stop", 0.8}, {"points", 9}}}}),
        make_cfg("estimation-mse", json{{"M", 4},
                                        {"N", 20},
                                        {"trials", 500},
                                        {"alpha", json::array({0.0, 0.5})}}),
        make_cfg("detection-error",
                 json{{"M", 2}, {"N", 25}, {"trials", 400}, {"alpha", json::array({0.0, 0.4})}}),
    };
    for (const auto& c : cfgs) {
        const std::string a = to_csv(run_experiment(c));
        const std::string b = to_csv(run_experiment(c));
        CHECK(a == b);
    }
}

TEST_CASE("seed changes the sampled experiments") {
    const auto base = make_cfg("detection-error",
                               json{{"M", 2},
                                    {"N", 25},
                                    {"trials", 400},
                                    {"alpha", json::array({0.45})}},
                               1);
    auto other = base;
    other.seed = 2;
    CHECK(to_csv(run_experiment(base)) != to_csv(run_experiment(other)));
}

TEST_CASE("config files round-trip through the loader") {
    const json doc = {{"schema_version", 1},
                      {"experiment", "alpha-blind-table"},
                      {"seed", 7},
                      {"out", "x.csv"},
                      {"params", json::object()}};
    const auto cfg = parse_config(doc);
    CHECK(cfg.experiment == "alpha-blind-table");
    CHECK(cfg.seed == 7);
    CHECK(cfg.out == "x.csv");
    CHECK(validate_config(cfg).empty());
    CHECK_THROWS(parse_config(json::array()));
}
