#pragma once

#include <cstdint>
#include <vector>

#include "byzq/attack.hpp"
#include "byzq/metrics.hpp"
#include "byzq/model.hpp"
#include "byzq/rng.hpp"

namespace byzq {

/// N-sensor network under attack. The Byzantine identities are a uniformly
/// random subset of round(alpha*N) nodes drawn once from the seed and held
/// fixed across trials/time steps (persistent compromised nodes).
///
/// Stream layout, shared by every simulation entry point so serial and
/// parallel execution agree bit for bit: stream = trial (or time step)
/// index; within a stream, sensor i draws at counters 8i (observation) and
/// 8i+1 (flip), the hypothesis/parameter draw sits at counter 8N, the
/// fusion tie-break coin at 8N+1. The identity subset uses the reserved
/// stream ~0.
struct NetworkConfig {
    int N;
    double alpha;
    int byzantine_count;
    FlippingMatrix attack;
    UniformQuantizer quantizer;
    std::uint64_t seed;
    std::vector<std::uint8_t> is_byzantine;  // size N

    static NetworkConfig make(int N, double alpha, FlippingMatrix attack, UniformQuantizer q,
                              std::uint64_t seed);
};

/// One network use: the true parameter (or hypothesis index), the N symbols
/// received by the FC, and the fused decision/estimate.
struct TrialRecord {
    double true_theta;
    std::vector<int> transmitted;
    double decision;
};

/// Draws one transmitted symbol. An honest node quantizes a fresh Gaussian
/// observation; a Byzantine node additionally resamples the symbol through
/// the matching row of the attack matrix. Consumes at most two draws from
/// the stream.
///
/// The empirical distribution of this draw matches
/// apply_attack(symbol_pmf(...), P, alpha) when the caller re-draws the
/// Byzantine identity per sample with probability alpha; under fixed
/// identities (NetworkConfig) the match holds for the average across
/// sensors, not per node.
int draw_symbol(const GaussianObservationModel& model, const UniformQuantizer& q, double theta,
                bool is_byzantine, const FlippingMatrix& attack, RngStream& st);

struct WilsonInterval {
    double lo, hi;
};

struct DetectionSummary {
    std::uint64_t trials = 0;
    std::uint64_t trials_h0 = 0, trials_h1 = 0;
    std::uint64_t false_alarms = 0, misses = 0, errors = 0;
    double p_false_alarm = 0.0, p_miss = 0.0, p_error = 0.0;
    WilsonInterval ci_false_alarm{0, 1}, ci_miss{0, 1}, ci_error{0, 1};
};

struct DetectionSimOptions {
    /// When set, the FC fuses with post-attack likelihoods instead of the
    /// default clean (attack-unaware) ones.
    bool attack_aware = false;
    bool parallel = true;
};

/// Monte Carlo detection run: per trial the hypothesis is drawn from the
/// priors, symbols are generated, and the FC applies the MAP log-likelihood
/// ratio test sum_i log(P(v_i|H1)/P(v_i|H0)) vs log(p0/p1), breaking exact
/// ties with a fair coin. Deterministic given (config, seed, trials).
DetectionSummary simulate_detection(const DetectionScenario& s, const NetworkConfig& cfg,
                                    std::uint64_t trials, const DetectionSimOptions& opts = {});

/// Single reproducible detection trial (exposed for record-level tests).
TrialRecord detection_trial(const DetectionScenario& s, const NetworkConfig& cfg,
                            std::uint64_t trial, bool attack_aware = false);

enum class FusionNormalization {
    ByN,  // theta_hat = (1/N) sum gamma^-1(v_i)
    ByM,  // theta_hat = (1/M) sum gamma^-1(v_i)
};

struct EstimationSimOptions {
    FusionNormalization normalization = FusionNormalization::ByN;
    bool parallel = true;
};

struct EstimationSummary {
    std::uint64_t trials = 0;
    double mean_estimate = 0.0;
    double mse = 0.0;
    double mse_std_error = 0.0;
};

/// Monte Carlo estimation run with centroid-average fusion.
EstimationSummary simulate_estimation(const EstimationScenario& s, const NetworkConfig& cfg,
                                      std::uint64_t trials, const EstimationSimOptions& opts = {});

TrialRecord estimation_trial(const EstimationScenario& s, const NetworkConfig& cfg,
                             std::uint64_t trial,
                             FusionNormalization normalization = FusionNormalization::ByN);

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t n, double z = 1.96);

}  // namespace byzq
