#include "byzq/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace byzq {

namespace {
constexpr std::uint64_t kIdentityStream = ~std::uint64_t{0};

std::uint64_t theta_counter(int N) { return static_cast<std::uint64_t>(N) * 8; }
std::uint64_t coin_counter(int N) { return static_cast<std::uint64_t>(N) * 8 + 1; }
}  // namespace

NetworkConfig NetworkConfig::make(int N, double alpha, FlippingMatrix attack, UniformQuantizer q,
                                  std::uint64_t seed) {
    if (N < 1) throw std::invalid_argument("NetworkConfig: N must be >= 1");
    if (!(alpha >= 0.0) || !(alpha <= 1.0))
        throw std::invalid_argument("NetworkConfig: alpha must lie in [0, 1]");
    if (attack.alphabet.M != q.alphabet.M)
        throw std::invalid_argument("NetworkConfig: attack/quantizer alphabet mismatch");

    NetworkConfig cfg{N, alpha, 0, std::move(attack), std::move(q), seed, {}};
    // Nearest integer, halves away from zero.
    cfg.byzantine_count = static_cast<int>(std::lround(alpha * N));
    cfg.is_byzantine.assign(N, 0);

    // Partial Fisher-Yates over node indices, driven by the reserved stream.
    CounterRng rng(seed);
    std::vector<int> nodes(N);
    std::iota(nodes.begin(), nodes.end(), 0);
    for (int k = 0; k < cfg.byzantine_count; ++k) {
        const std::uint32_t j =
            rng.below(kIdentityStream, static_cast<std::uint64_t>(k), static_cast<std::uint32_t>(N - k));
        std::swap(nodes[k], nodes[k + static_cast<int>(j)]);
        cfg.is_byzantine[nodes[k]] = 1;
    }
    return cfg;
}

int draw_symbol(const GaussianObservationModel& model, const UniformQuantizer& q, double theta,
                bool is_byzantine, const FlippingMatrix& attack, RngStream& st) {
    const double r = model.mean(theta) + model.sigma * st.normal();
    const int u = quantize(q, r);
    if (!is_byzantine) return u;
    // Resample through row u of the flipping matrix.
    const int M = q.alphabet.M;
    const double x = st.uniform();
    double acc = 0.0;
    for (int m = 1; m <= M; ++m) {
        acc += attack.p(u, m);
        if (x <= acc) return m;
    }
    return M;  // guard against rounding in the cumulative sum
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {
// Per-symbol log-likelihood ratios log(P(v|H1)/P(v|H0)). Zero cells are
// clamped to the smallest normal double so an "impossible" received symbol
// stays decisive instead of producing NaNs.
std::vector<double> llr_table(const SymbolPmf& p0, const SymbolPmf& p1) {
    std::vector<double> t(p0.size());
    constexpr double tiny = std::numeric_limits<double>::min();
    for (int m = 0; m < p0.size(); ++m) {
        if (p0[m] == 0.0 && p1[m] == 0.0)
            t[m] = 0.0;
        else
            t[m] = std::log(std::max(p1[m], tiny)) - std::log(std::max(p0[m], tiny));
    }
    return t;
}

struct DetectionTables {
    std::vector<double> llr;
    double threshold;  // log(p0/p1)
};

DetectionTables detection_tables(const DetectionScenario& s, const NetworkConfig& cfg,
                                 bool attack_aware) {
    SymbolPmf p0 = s.pmf(0);
    SymbolPmf p1 = s.pmf(1);
    if (attack_aware) {
        p0 = apply_attack(p0, cfg.attack, cfg.alpha);
        p1 = apply_attack(p1, cfg.attack, cfg.alpha);
    }
    return {llr_table(p0, p1), std::log(s.p0) - std::log(s.p1)};
}

// Returns (hypothesis, decision) for one trial.
std::pair<int, int> run_detection_trial(const DetectionScenario& s, const NetworkConfig& cfg,
                                        const DetectionTables& tab, const CounterRng& rng,
                                        std::uint64_t trial, std::vector<int>* symbols_out) {
    const int h = rng.uniform(trial, theta_counter(cfg.N)) < s.p1 ? 1 : 0;
    const GaussianObservationModel& model = h == 0 ? s.model0 : s.model1;
    double llr = 0.0;
    for (int i = 0; i < cfg.N; ++i) {
        RngStream st{&rng, trial, static_cast<std::uint64_t>(i) * 8};
        const int v = draw_symbol(model, cfg.quantizer, static_cast<double>(h),
                                  cfg.is_byzantine[i] != 0, cfg.attack, st);
        llr += tab.llr[v - 1];
        if (symbols_out) symbols_out->push_back(v);
    }
    int decision;
    if (llr > tab.threshold)
        decision = 1;
    else if (llr < tab.threshold)
        decision = 0;
    else
        decision = rng.uniform(trial, coin_counter(cfg.N)) < 0.5 ? 1 : 0;
    return {h, decision};
}
}  // namespace

TrialRecord detection_trial(const DetectionScenario& s, const NetworkConfig& cfg,
                            std::uint64_t trial, bool attack_aware) {
    const CounterRng rng(cfg.seed);
    const DetectionTables tab = detection_tables(s, cfg, attack_aware);
    TrialRecord rec;
    rec.transmitted.reserve(cfg.N);
    const auto [h, decision] = run_detection_trial(s, cfg, tab, rng, trial, &rec.transmitted);
    rec.true_theta = static_cast<double>(h);
    rec.decision = static_cast<double>(decision);
    return rec;
}

DetectionSummary simulate_detection(const DetectionScenario& s, const NetworkConfig& cfg,
                                    std::uint64_t trials, const DetectionSimOptions& opts) {
    if (trials == 0) throw std::invalid_argument("simulate_detection: trials must be >= 1");
    const CounterRng rng(cfg.seed);
    const DetectionTables tab = detection_tables(s, cfg, opts.attack_aware);

    // Trials are independent; outcomes land in per-trial slots and are
    // reduced serially afterwards, so thread scheduling cannot change the
    // result.
    std::vector<std::uint8_t> outcome(trials);
    const std::int64_t n = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static) if (opts.parallel)
    for (std::int64_t t = 0; t < n; ++t) {
        const auto [h, d] =
            run_detection_trial(s, cfg, tab, rng, static_cast<std::uint64_t>(t), nullptr);
        outcome[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>((h << 1) | d);
    }

    DetectionSummary out;
    out.trials = trials;
    for (std::uint8_t o : outcome) {
        const int h = o >> 1, d = o & 1;
        if (h == 0) {
            ++out.trials_h0;
            if (d == 1) ++out.false_alarms;
        } else {
            ++out.trials_h1;
            if (d == 0) ++out.misses;
        }
    }
    out.errors = out.false_alarms + out.misses;
    out.p_false_alarm =
        out.trials_h0 ? static_cast<double>(out.false_alarms) / out.trials_h0 : 0.0;
    out.p_miss = out.trials_h1 ? static_cast<double>(out.misses) / out.trials_h1 : 0.0;
    out.p_error = static_cast<double>(out.errors) / out.trials;
    out.ci_false_alarm = wilson_interval(out.false_alarms, out.trials_h0);
    out.ci_miss = wilson_interval(out.misses, out.trials_h1);
    out.ci_error = wilson_interval(out.errors, out.trials);
    return out;
}

namespace {
double run_estimation_trial(const EstimationScenario& s, const NetworkConfig& cfg,
                            const CounterRng& rng, std::uint64_t trial, double divisor,
                            std::vector<int>* symbols_out) {
    double sum = 0.0;
    for (int i = 0; i < cfg.N; ++i) {
        RngStream st{&rng, trial, static_cast<std::uint64_t>(i) * 8};
        const int v = draw_symbol(s.model, cfg.quantizer, s.theta, cfg.is_byzantine[i] != 0,
                                  cfg.attack, st);
        sum += dequantize(cfg.quantizer, v);
        if (symbols_out) symbols_out->push_back(v);
    }
    return sum / divisor;
}

double fusion_divisor(const NetworkConfig& cfg, FusionNormalization norm) {
    return norm == FusionNormalization::ByN ? static_cast<double>(cfg.N)
                                            : static_cast<double>(cfg.quantizer.alphabet.M);
}
}  // namespace

TrialRecord estimation_trial(const EstimationScenario& s, const NetworkConfig& cfg,
                             std::uint64_t trial, FusionNormalization normalization) {
    const CounterRng rng(cfg.seed);
    TrialRecord rec;
    rec.true_theta = s.theta;
    rec.transmitted.reserve(cfg.N);
    rec.decision = run_estimation_trial(s, cfg, rng, trial, fusion_divisor(cfg, normalization),
                                        &rec.transmitted);
    return rec;
}

EstimationSummary simulate_estimation(const EstimationScenario& s, const NetworkConfig& cfg,
                                      std::uint64_t trials, const EstimationSimOptions& opts) {
    if (trials == 0) throw std::invalid_argument("simulate_estimation: trials must be >= 1");
    const CounterRng rng(cfg.seed);
    const double divisor = fusion_divisor(cfg, opts.normalization);

    std::vector<double> estimate(trials);
    const std::int64_t n = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static) if (opts.parallel)
    for (std::int64_t t = 0; t < n; ++t)
        estimate[static_cast<std::size_t>(t)] =
            run_estimation_trial(s, cfg, rng, static_cast<std::uint64_t>(t), divisor, nullptr);

    EstimationSummary out;
    out.trials = trials;
    double mean = 0.0, m2 = 0.0, sq_mean = 0.0;
    for (double e : estimate) {
        mean += e;
        const double sq = (e - s.theta) * (e - s.theta);
        sq_mean += sq;
        m2 += sq * sq;
    }
    mean /= static_cast<double>(trials);
    sq_mean /= static_cast<double>(trials);
    m2 /= static_cast<double>(trials);
    out.mean_estimate = mean;
    out.mse = sq_mean;
    const double var_sq = std::max(0.0, m2 - sq_mean * sq_mean);
    out.mse_std_error = std::sqrt(var_sq / static_cast<double>(trials));
    return out;
}

}  // namespace byzq
