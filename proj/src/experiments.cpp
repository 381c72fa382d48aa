#include "byzq/experiments.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "byzq/attack.hpp"
#include "byzq/linalg.hpp"
#include "byzq/metrics.hpp"
#include "byzq/model.hpp"
#include "byzq/reputation.hpp"
#include "byzq/sim.hpp"

namespace byzq {

using nlohmann::json;

const std::vector<ExperimentInfo>& experiment_registry() {
    static const std::vector<ExperimentInfo> registry = {
        {"alpha-blind-table", "Blinding fraction (M-1)/M per quantization bit count",
         "table-1"},
        {"kld-vs-alpha", "Per-sensor detection KLD vs compromised fraction", "fig-3"},
        {"fi-vs-alpha", "Per-sensor conditional Fisher information vs compromised fraction",
         "fig-4a,fig-4b"},
        {"eta-vs-alpha", "Asymptotic tagging threshold vs compromised fraction", "fig-5"},
        {"identification", "Reputation-based Byzantine identification over time",
         "fig-6,fig-7,fig-8"},
        {"noisy-channel", "Blinding solution for a noisy FC channel",
         "appendix-a-noisy-channel-theorem"},
        {"detection-error", "Monte Carlo MAP fusion error rates", "fig-6"},
        {"estimation-mse", "Monte Carlo centroid-fusion estimation MSE", "fig-5"},
    };
    return registry;
}

// ---------------------------------------------------------------------------
// Config parsing and validation
// ---------------------------------------------------------------------------

json ExperimentConfig::to_json() const {
    json j;
    j["schema_version"] = schema_version;
    j["experiment"] = experiment;
    j["seed"] = seed;
    j["out"] = out;
    j["params"] = params;
    return j;
}

ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config: document must be a JSON object");
    ExperimentConfig c;
    c.schema_version = j.value("schema_version", 1);
    c.experiment = j.value("experiment", "");
    c.seed = j.value("seed", std::uint64_t{0});
    c.out = j.value("out", "");
    if (j.contains("params")) c.params = j.at("params");
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    in >> j;
    return parse_config(j);
}

namespace {

bool known_experiment(const std::string& id) {
    for (const auto& e : experiment_registry())
        if (e.id == id) return true;
    return false;
}

// Small validation helper collecting field-path diagnostics.
struct Check {
    const json& params;
    std::vector<Diagnostic>& diags;

    void fail(const std::string& path, const std::string& msg) {
        diags.push_back({"params." + path, msg});
    }

    bool has(const char* key) const { return params.contains(key); }

    double number(const char* key, double fallback) {
        if (!params.contains(key)) return fallback;
        const json& v = params.at(key);
        if (!v.is_number()) {
            fail(key, "must be a number");
            return fallback;
        }
        return v.get<double>();
    }

    std::uint64_t unsigned_int(const char* key, std::uint64_t fallback) {
        if (!params.contains(key)) return fallback;
        const json& v = params.at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
            fail(key, "must be a nonnegative integer");
            return fallback;
        }
        return v.get<std::uint64_t>();
    }

    std::vector<int> int_list(const char* key, std::vector<int> fallback) {
        if (!params.contains(key)) return fallback;
        const json& v = params.at(key);
        std::vector<int> out;
        if (v.is_number_integer()) {
            out.push_back(v.get<int>());
        } else if (v.is_array() && !v.empty()) {
            for (const auto& e : v) {
                if (!e.is_number_integer()) {
                    fail(key, "must be an integer or non-empty array of integers");
                    return fallback;
                }
                out.push_back(e.get<int>());
            }
        } else {
            fail(key, "must be an integer or non-empty array of integers");
            return fallback;
        }
        return out;
    }

    std::vector<double> grid(const char* key, std::vector<double> fallback) {
        if (!params.contains(key)) return fallback;
        const json& v = params.at(key);
        std::vector<double> out;
        if (v.is_array()) {
            for (const auto& e : v) {
                if (!e.is_number()) {
                    fail(key, "grid array entries must be numbers");
                    return fallback;
                }
                out.push_back(e.get<double>());
            }
            if (out.empty()) fail(key, "grid must be non-empty");
        } else if (v.is_object()) {
            const double start = v.value("start", 0.0);
            const double stop = v.value("stop", 0.0);
            const std::int64_t points = v.value("points", std::int64_t{0});
            if (points < 1 || (points > 1 && !(stop >= start))) {
                fail(key, "grid object needs points >= 1 and stop >= start");
                return fallback;
            }
            for (std::int64_t i = 0; i < points; ++i)
                out.push_back(points == 1 ? start
                                          : start + (stop - start) * static_cast<double>(i) /
                                                        static_cast<double>(points - 1));
        } else {
            fail(key, "must be an array of numbers or {start, stop, points}");
            return fallback;
        }
        return out;
    }
};

std::string bound_string(int M) {
    std::ostringstream os;
    os << "1/(M-1) = " << 1.0 / (M - 1) << " for M = " << M;
    return os.str();
}

void check_common_scenario(Check& c, const std::vector<int>& ms) {
    for (int m : ms)
        if (m < 2) c.fail("M", "every alphabet size must be >= 2");
    const double a = c.number("A", 2.0);
    if (!(a > 0.0)) c.fail("A", "overload parameter must be > 0");
    if (c.has("sigma")) {
        const json& s = c.params.at("sigma");
        if (s.is_number()) {
            if (!(s.get<double>() > 0.0)) c.fail("sigma", "must be > 0");
        } else if (s.is_array()) {
            for (const auto& e : s)
                if (!e.is_number() || !(e.get<double>() > 0.0))
                    c.fail("sigma", "every entry must be a number > 0");
        } else {
            c.fail("sigma", "must be a number or array of numbers");
        }
    }
    if (c.has("p")) {
        const double p = c.number("p", 0.0);
        for (int m : ms)
            if (p < 0.0 || p > 1.0 / (m - 1) + 1e-12)
                c.fail("p", "flipping probability must satisfy 0 <= p <= " + bound_string(m));
    }
    for (double al : c.grid("alpha", {0.0}))
        if (al < 0.0 || al > 1.0) c.fail("alpha", "fractions must lie in [0, 1]");
    if (c.has("priors")) {
        const json& pr = c.params.at("priors");
        if (!pr.is_array() || pr.size() != 2 || !pr[0].is_number() || !pr[1].is_number()) {
            c.fail("priors", "must be an array [p0, p1]");
        } else {
            const double p0 = pr[0].get<double>(), p1 = pr[1].get<double>();
            if (p0 < 0.0 || p1 < 0.0 || std::fabs(p0 + p1 - 1.0) > 1e-12)
                c.fail("priors", "must be nonnegative and sum to 1");
        }
    }
}

std::vector<Diagnostic> validate_params(const std::string& experiment, const json& params) {
    std::vector<Diagnostic> diags;
    Check c{params, diags};

    if (experiment == "alpha-blind-table") {
        for (int b : c.int_list("bits", {1, 2, 3, 4, 5, 6, 7, 8}))
            if (b < 1 || b > 30) c.fail("bits", "bit counts must lie in [1, 30]");
        return diags;
    }
    if (experiment == "kld-vs-alpha") {
        const auto ms = c.int_list("M", {2, 4, 8, 16});
        check_common_scenario(c, ms);
        if (!(c.number("mu", 1.0) > 0.0)) c.fail("mu", "must be > 0");
        return diags;
    }
    if (experiment == "fi-vs-alpha") {
        const auto ms = c.int_list("M", {2, 4, 8, 16});
        check_common_scenario(c, ms);
        return diags;
    }
    if (experiment == "eta-vs-alpha") {
        const auto ms = c.int_list("M", {7});
        check_common_scenario(c, ms);
        const auto n = static_cast<int>(c.unsigned_int("N", 5));
        if (n < 2) c.fail("N", "network size must be >= 2");
        const double xi = c.number("xi", 0.01);
        if (!(xi > 0.0) || !(xi < 1.0)) c.fail("xi", "must lie in the open interval (0, 1)");
        if (c.unsigned_int("T", 1) < 1) c.fail("T", "averaging window must be >= 1");
        if (c.has("divisor")) {
            const json& d = params.at("divisor");
            if (!d.is_string() || (d.get<std::string>() != "N" && d.get<std::string>() != "M"))
                c.fail("divisor", "must be \"N\" or \"M\"");
        }
        if (c.unsigned_int("alpha_points", 50) < 3)
            c.fail("alpha_points", "need at least 3 grid points");
        if (c.has("alpha_max")) {
            const double am = c.number("alpha_max", 0.0);
            if (!(am > 0.0) || am > 1.0) c.fail("alpha_max", "must lie in (0, 1]");
        }
        return diags;
    }
    if (experiment == "identification") {
        const auto ms = c.int_list("M", {2, 4, 8, 16});
        check_common_scenario(c, ms);
        if (c.unsigned_int("N", 100) < 1) c.fail("N", "network size must be >= 1");
        if (c.unsigned_int("T_max", 400) < 1) c.fail("T_max", "horizon must be >= 1");
        if (c.unsigned_int("seeds", 20) < 1) c.fail("seeds", "need at least one seed");
        if (!(c.number("mu", 1.0) > 0.0)) c.fail("mu", "must be > 0");
        if (c.has("eta")) {
            const json& e = params.at("eta");
            const bool calibrated = e.is_string() && e.get<std::string>() == "calibrated";
            if (!calibrated && !(e.is_number() && e.get<double>() > 0.0))
                c.fail("eta", "must be a positive number or \"calibrated\"");
        }
        return diags;
    }
    if (experiment == "noisy-channel") {
        const auto ms = c.int_list("M", {2});
        if (ms.size() != 1 || ms[0] < 2) c.fail("M", "must be a single alphabet size >= 2");
        if (!params.contains("Q")) {
            c.fail("Q", "channel matrix is required");
            return diags;
        }
        const json& q = params.at("Q");
        const int m = ms[0];
        if (!q.is_array() || static_cast<int>(q.size()) != m) {
            c.fail("Q", "must be an MxM array of rows");
            return diags;
        }
        for (int i = 0; i < m; ++i) {
            const json& row = q[i];
            if (!row.is_array() || static_cast<int>(row.size()) != m) {
                c.fail("Q", "must be an MxM array of rows");
                return diags;
            }
            double sum = 0.0;
            for (const auto& e : row) {
                if (!e.is_number()) {
                    c.fail("Q", "entries must be numbers");
                    return diags;
                }
                const double v = e.get<double>();
                if (v < -1e-12 || v > 1.0 + 1e-12) c.fail("Q", "entries must lie in [0, 1]");
                sum += v;
            }
            if (std::fabs(sum - 1.0) > 1e-12)
                c.fail("Q", "row " + std::to_string(i + 1) + " must sum to 1 within 1e-12");
        }
        return diags;
    }
    if (experiment == "detection-error") {
        const auto ms = c.int_list("M", {2});
        check_common_scenario(c, ms);
        if (!(c.number("mu", 1.0) > 0.0)) c.fail("mu", "must be > 0");
        if (c.unsigned_int("N", 100) < 1) c.fail("N", "network size must be >= 1");
        if (c.unsigned_int("trials", 10000) < 1) c.fail("trials", "must be >= 1");
        return diags;
    }
    if (experiment == "estimation-mse") {
        const auto ms = c.int_list("M", {16});
        check_common_scenario(c, ms);
        if (c.unsigned_int("N", 100) < 1) c.fail("N", "network size must be >= 1");
        if (c.unsigned_int("trials", 10000) < 1) c.fail("trials", "must be >= 1");
        if (c.has("normalization")) {
            const json& d = params.at("normalization");
            if (!d.is_string() || (d.get<std::string>() != "N" && d.get<std::string>() != "M"))
                c.fail("normalization", "must be \"N\" or \"M\"");
        }
        return diags;
    }
    diags.push_back({"experiment", "unknown experiment id: " + experiment});
    return diags;
}

}  // namespace

std::vector<Diagnostic> validate_config(const ExperimentConfig& c) {
    std::vector<Diagnostic> diags;
    if (c.schema_version != 1)
        diags.push_back({"schema_version", "unsupported schema version (expected 1)"});
    if (c.experiment.empty()) {
        diags.push_back({"experiment", "missing experiment id"});
        return diags;
    }
    if (!known_experiment(c.experiment)) {
        diags.push_back({"experiment", "unknown experiment id: " + c.experiment});
        return diags;
    }
    if (!c.params.is_object()) {
        diags.push_back({"params", "must be a JSON object"});
        return diags;
    }
    auto more = validate_params(c.experiment, c.params);
    diags.insert(diags.end(), more.begin(), more.end());
    return diags;
}

// ---------------------------------------------------------------------------
// Experiment implementations
// ---------------------------------------------------------------------------

namespace {

// Validated-parameter accessor: validation ran before dispatch, so plain
// reads with defaults are safe here.
struct Params {
    const json& p;

    double num(const char* key, double fallback) const { return p.value(key, fallback); }
    std::uint64_t uint(const char* key, std::uint64_t fallback) const {
        return p.value(key, fallback);
    }
    std::vector<int> ints(const char* key, std::vector<int> fallback) const {
        if (!p.contains(key)) return fallback;
        const json& v = p.at(key);
        if (v.is_number_integer()) return {v.get<int>()};
        return v.get<std::vector<int>>();
    }
    std::vector<double> nums(const char* key, std::vector<double> fallback) const {
        if (!p.contains(key)) return fallback;
        const json& v = p.at(key);
        if (v.is_number()) return {v.get<double>()};
        return v.get<std::vector<double>>();
    }
    std::vector<double> grid(const char* key, std::vector<double> fallback) const {
        if (!p.contains(key)) return fallback;
        const json& v = p.at(key);
        if (v.is_array()) return v.get<std::vector<double>>();
        const double start = v.value("start", 0.0);
        const double stop = v.value("stop", 0.0);
        const std::int64_t points = v.value("points", std::int64_t{0});
        std::vector<double> out;
        for (std::int64_t i = 0; i < points; ++i)
            out.push_back(points == 1 ? start
                                      : start + (stop - start) * static_cast<double>(i) /
                                                    static_cast<double>(points - 1));
        return out;
    }
    std::pair<double, double> priors() const {
        if (!p.contains("priors")) return {0.5, 0.5};
        return {p.at("priors")[0].get<double>(), p.at("priors")[1].get<double>()};
    }
};

std::vector<double> default_alpha_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 95; ++i) g.push_back(static_cast<double>(i) / 100.0);
    return g;
}

// Appends the blind point for M and keeps the grid sorted/deduplicated so
// every curve shows its exact zero.
std::vector<double> grid_with_blind_point(std::vector<double> grid, int M) {
    grid.push_back(blind_fraction(M));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    while (!grid.empty() && grid.back() > blind_fraction(M)) grid.pop_back();
    return grid;
}

ResultTable run_alpha_blind_table(const Params& p) {
    ResultTable t;
    t.columns = {"bits", "M", "alpha_blind"};
    for (int bits : p.ints("bits", {1, 2, 3, 4, 5, 6, 7, 8})) {
        const int M = 1 << bits;
        t.rows.push_back({static_cast<double>(bits), static_cast<double>(M), blind_fraction(M)});
    }
    return t;
}

ResultTable run_kld_vs_alpha(const Params& p) {
    const double A = p.num("A", 2.0);
    const double mu = p.num("mu", 1.0);
    const double sigma = p.num("sigma", 1.0);
    ResultTable t;
    t.columns = {"M", "alpha", "p", "D_FC"};
    for (int M : p.ints("M", {2, 4, 8, 16})) {
        const DetectionScenario s = DetectionScenario::bpsk(mu, sigma, make_uniform_quantizer(M, A));
        const double pflip = p.num("p", worst_case_symmetric_p(M));
        const FlippingMatrix attack = symmetric_attack(M, pflip);
        for (double alpha : grid_with_blind_point(p.grid("alpha", default_alpha_grid()), M))
            t.rows.push_back({static_cast<double>(M), alpha, pflip,
                              detection_kld(s, attack, alpha)});
    }
    return t;
}

ResultTable run_fi_vs_alpha(const Params& p) {
    const double A = p.num("A", 2.0);
    const double theta = p.num("theta", 0.0);
    ResultTable t;
    t.columns = {"M", "sigma", "alpha", "p", "J_FC"};
    for (double sigma : p.nums("sigma", {1.0, 0.01}))
        for (int M : p.ints("M", {2, 4, 8, 16})) {
            const EstimationScenario s =
                EstimationScenario::location(sigma, make_uniform_quantizer(M, A), theta);
            const double pflip = p.num("p", worst_case_symmetric_p(M));
            const FlippingMatrix attack = symmetric_attack(M, pflip);
            for (double alpha : grid_with_blind_point(p.grid("alpha", default_alpha_grid()), M))
                t.rows.push_back({static_cast<double>(M), sigma, alpha, pflip,
                                  estimation_fisher(s, attack, alpha)});
        }
    return t;
}

ResultTable run_eta_vs_alpha(const Params& p) {
    const int N = static_cast<int>(p.uint("N", 5));
    const double A = p.num("A", 1.0);
    const double sigma = p.num("sigma", 1.0);
    const double xi = p.num("xi", 0.01);
    const std::uint64_t T = p.uint("T", 1);
    const FusionSpec fusion{
        p.p.value("divisor", std::string("M")) == "N" ? FusionNormalization::ByN
                                                      : FusionNormalization::ByM,
        T};
    const int points = static_cast<int>(p.uint("alpha_points", 50));

    ResultTable t;
    t.columns = {"M", "alpha", "mu_H", "sigma_H", "eta"};
    for (int M : p.ints("M", {7})) {
        const UniformQuantizer q = make_uniform_quantizer(M, A);
        // The mixture weight pi_BH = N alpha/(N-1) caps the usable range at
        // (N-1)/N; the blind fraction caps it from the attack side.
        const double amax =
            p.num("alpha_max", std::min(blind_fraction(M),
                                        static_cast<double>(N - 1) / static_cast<double>(N)));
        for (int i = 0; i < points; ++i) {
            const double alpha = amax * static_cast<double>(i) / static_cast<double>(points - 1);
            const TypeConditionalModel m = TypeConditionalModel::make(
                N, alpha, optimal_attack(M), q, GaussianObservationModel::location(sigma),
                ThetaPrior::uniform(0.0, 1.0));
            const DeviationMoments dm = deviation_moments(m, fusion, NodeType::Honest);
            const double sig = std::sqrt(std::max(0.0, dm.variance) / static_cast<double>(T));
            t.rows.push_back({static_cast<double>(M), alpha, dm.mean, sig,
                              dm.mean + sig * gaussian_tail_inv(xi)});
        }
    }
    return t;
}

ResultTable run_identification_experiment(const Params& p, std::uint64_t seed) {
    const int N = static_cast<int>(p.uint("N", 100));
    const double A = p.num("A", 2.0);
    const double mu = p.num("mu", 1.0);
    const double sigma = p.num("sigma", 1.0);
    const auto [p0, p1] = p.priors();
    const std::uint64_t T_max = p.uint("T_max", 400);
    const int seeds = static_cast<int>(p.uint("seeds", 20));
    const double alpha = p.num("alpha", 0.2);

    ResultTable t;
    t.columns = {"M", "t", "identified_count", "honest_mislabel", "byzantine_mislabel", "eta"};
    for (int M : p.ints("M", {2, 4, 8, 16})) {
        const UniformQuantizer q = make_uniform_quantizer(M, A);
        const DetectionScenario s = DetectionScenario::bpsk(mu, sigma, q, p0, p1);
        const double pflip = p.num("p", worst_case_symmetric_p(M));
        const FlippingMatrix attack = symmetric_attack(M, pflip);

        // The calibrated threshold depends only on the scenario and attack,
        // not on a particular network draw.
        double eta;
        if (p.p.contains("eta") && p.p.at("eta").is_number()) {
            eta = p.p.at("eta").get<double>();
        } else {
            const NetworkConfig rep = NetworkConfig::make(N, alpha, attack, q, seed);
            eta = calibrate_eta(s, rep);
        }

        // Seeds are independent runs; each gets its own network draw.
        std::vector<IdentificationSeries> series(seeds);
        const std::int64_t ns = seeds;
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t k = 0; k < ns; ++k) {
            const NetworkConfig cfg =
                NetworkConfig::make(N, alpha, attack, q, seed + static_cast<std::uint64_t>(k));
            series[static_cast<std::size_t>(k)] = run_identification(s, cfg, eta, T_max);
        }

        for (std::uint64_t step = 0; step < T_max; ++step) {
            double cnt = 0.0, hm = 0.0, bm = 0.0;
            for (const auto& sr : series) {
                cnt += sr.identified_count[step];
                hm += sr.honest_mislabel[step];
                bm += sr.byzantine_mislabel[step];
            }
            t.rows.push_back({static_cast<double>(M), static_cast<double>(step + 1),
                              cnt / seeds, hm / seeds, bm / seeds, eta});
        }
    }
    return t;
}

ResultTable run_noisy_channel(const Params& p) {
    const int M = p.ints("M", {2})[0];
    const json& qj = p.p.at("Q");
    SquareMatrix e(M);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) e(i, j) = qj[i][j].get<double>();
    const ChannelMatrix Q(Alphabet(M), std::move(e));

    const AttackSolution sol = noisy_channel_attack(Q);
    const double amin = min_feasible_alpha(Q);

    ResultTable t;
    t.columns = {"row", "col", "p", "alpha_blind", "feasible", "alpha_min_feasible"};
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            t.rows.push_back({static_cast<double>(i + 1), static_cast<double>(j + 1),
                              sol.matrix(i, j), sol.alpha_blind, sol.feasible ? 1.0 : 0.0, amin});
    return t;
}

ResultTable run_detection_error(const Params& p, std::uint64_t seed) {
    const int N = static_cast<int>(p.uint("N", 100));
    const double A = p.num("A", 2.0);
    const double mu = p.num("mu", 1.0);
    const double sigma = p.num("sigma", 1.0);
    const auto [p0, p1] = p.priors();
    const std::uint64_t trials = p.uint("trials", 10000);
    DetectionSimOptions opts;
    opts.attack_aware = p.p.value("attack_aware", false);

    ResultTable t;
    t.columns = {"M", "alpha", "trials", "p_miss", "p_false_alarm", "p_error", "ci_error_lo",
                 "ci_error_hi"};
    for (int M : p.ints("M", {2})) {
        const UniformQuantizer q = make_uniform_quantizer(M, A);
        const DetectionScenario s = DetectionScenario::bpsk(mu, sigma, q, p0, p1);
        const double pflip = p.num("p", worst_case_symmetric_p(M));
        const FlippingMatrix attack = symmetric_attack(M, pflip);
        for (double alpha : p.grid("alpha", {0.0, 0.1, 0.2, 0.3, 0.4, 0.5})) {
            const NetworkConfig cfg = NetworkConfig::make(N, alpha, attack, q, seed);
            const DetectionSummary sum = simulate_detection(s, cfg, trials, opts);
            t.rows.push_back({static_cast<double>(M), alpha, static_cast<double>(trials),
                              sum.p_miss, sum.p_false_alarm, sum.p_error, sum.ci_error.lo,
                              sum.ci_error.hi});
        }
    }
    return t;
}

ResultTable run_estimation_mse(const Params& p, std::uint64_t seed) {
    const int N = static_cast<int>(p.uint("N", 100));
    const double A = p.num("A", 2.0);
    const double sigma = p.num("sigma", 1.0);
    const double theta = p.num("theta", 1.0);
    const std::uint64_t trials = p.uint("trials", 10000);
    EstimationSimOptions opts;
    opts.normalization = p.p.value("normalization", std::string("N")) == "M"
                             ? FusionNormalization::ByM
                             : FusionNormalization::ByN;

    ResultTable t;
    t.columns = {"M", "alpha", "trials", "mse", "mse_std_error", "mean_estimate"};
    for (int M : p.ints("M", {16})) {
        const UniformQuantizer q = make_uniform_quantizer(M, A);
        const EstimationScenario s = EstimationScenario::location(sigma, q, theta);
        const double pflip = p.num("p", worst_case_symmetric_p(M));
        const FlippingMatrix attack = symmetric_attack(M, pflip);
        for (double alpha : p.grid("alpha", {0.0, 0.25, 0.5, 0.75})) {
            const NetworkConfig cfg = NetworkConfig::make(N, alpha, attack, q, seed);
            const EstimationSummary sum = simulate_estimation(s, cfg, trials, opts);
            t.rows.push_back({static_cast<double>(M), alpha, static_cast<double>(trials), sum.mse,
                              sum.mse_std_error, sum.mean_estimate});
        }
    }
    return t;
}

}  // namespace

ResultTable run_experiment(const ExperimentConfig& c) {
    const auto diags = validate_config(c);
    if (!diags.empty())
        throw std::invalid_argument("invalid config: " + diags.front().path + ": " +
                                    diags.front().message);

    const Params p{c.params};
    ResultTable t;
    if (c.experiment == "alpha-blind-table")
        t = run_alpha_blind_table(p);
    else if (c.experiment == "kld-vs-alpha")
        t = run_kld_vs_alpha(p);
    else if (c.experiment == "fi-vs-alpha")
        t = run_fi_vs_alpha(p);
    else if (c.experiment == "eta-vs-alpha")
        t = run_eta_vs_alpha(p);
    else if (c.experiment == "identification")
        t = run_identification_experiment(p, c.seed);
    else if (c.experiment == "noisy-channel")
        t = run_noisy_channel(p);
    else if (c.experiment == "detection-error")
        t = run_detection_error(p, c.seed);
    else
        t = run_estimation_mse(p, c.seed);

    std::string reproduces;
    for (const auto& e : experiment_registry())
        if (e.id == c.experiment) reproduces = e.reproduces;
    t.metadata = {
        {"byzq", kVersion},
        {"experiment", c.experiment},
        {"reproduces", reproduces},
        {"seed", std::to_string(c.seed)},
        {"config", c.to_json().dump()},
    };
    return t;
}

// ---------------------------------------------------------------------------
// CSV serialization
// ---------------------------------------------------------------------------

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string to_csv(const ResultTable& t) {
    std::ostringstream os;
    for (const auto& [k, v] : t.metadata) os << "# " << k << ": " << v << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << format_double(row[i]);
        os << "\n";
    }
    return os.str();
}

void write_csv(const ResultTable& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path + ": " +
                                       std::strerror(errno));
    out << to_csv(t);
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace byzq
