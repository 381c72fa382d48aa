#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "byzq/attack.hpp"
#include "byzq/metrics.hpp"
#include "byzq/model.hpp"
#include "byzq/sim.hpp"

namespace byzq {

enum class NodeType { Honest, Byzantine };
enum class Tag { Untagged, Honest, Byzantine };

/// Per-node running squared-deviation sums. Each node's reputation is the
/// time average Lambda_i = sum_i / count_i.
struct ReputationState {
    explicit ReputationState(int N);

    int size() const { return static_cast<int>(sums.size()); }
    void add(int node, double d);
    double lambda(int node) const;

    std::vector<double> sums;
    std::vector<std::uint64_t> counts;
    std::vector<Tag> tags;
};

/// Functional form of ReputationState::add.
ReputationState update(ReputationState state, int node, double d);

/// Squared deviation between a received symbol's centroid and the signal the
/// FC expects for its fused decision: (gamma^-1(v) - f(theta_hat))^2.
double deviation(int v, double theta_hat, const UniformQuantizer& q,
                 const GaussianObservationModel& f);

/// Threshold rule: Byzantine iff lambda > eta (a tie tags Honest).
Tag tag(double lambda, double eta);

/// Prior over the phenomenon used when marginalizing node behaviour.
struct ThetaPrior {
    enum class Kind { Uniform, PointMass, Discrete };

    Kind kind = Kind::Uniform;
    double lo = 0.0, hi = 1.0;                     // Uniform support
    double point = 0.0;                            // PointMass location
    std::vector<std::pair<double, double>> atoms;  // Discrete (value, weight)

    static ThetaPrior uniform(double lo, double hi);
    static ThetaPrior point_mass(double x);
    static ThetaPrior discrete(std::vector<std::pair<double, double>> atoms);
};

/// Everything needed to reason about one node's symbols conditioned on
/// another node's type: network size, compromised fraction, the attack, the
/// observation chain, and the prior over theta.
struct TypeConditionalModel {
    int N;
    double alpha;
    FlippingMatrix attack;
    UniformQuantizer quantizer;
    GaussianObservationModel observation;
    ThetaPrior prior;

    static TypeConditionalModel make(int N, double alpha, FlippingMatrix attack,
                                     UniformQuantizer q, GaussianObservationModel obs,
                                     ThetaPrior prior);

    /// P(T_j = B | T_i = H) = N alpha / (N - 1).
    double pi_bh() const;
    /// P(T_j = B | T_i = B) = (N alpha - 1) / (N - 1).
    double pi_bb() const;
};

/// P(v_j = m | theta, T_i = type). For j = i this is the clean pmf (Honest)
/// or the fully flipped pmf (Byzantine); for j != i it is the pi-weighted
/// mixture of the two. Rejects parameters that would push the mixture weight
/// outside [0, 1] rather than clamping.
SymbolPmf type_conditional_pmf(const TypeConditionalModel& m, int j, int i, NodeType type_of_i,
                               double theta);

/// Prior-marginalized version, integrating theta out by adaptive quadrature
/// (absolute tolerance 1e-9 per component).
SymbolPmf marginal_type_conditional_pmf(const TypeConditionalModel& m, int j, int i,
                                        NodeType type_of_i);

/// Fusion rule parameters entering the reputation moments: theta_hat divides
/// the centroid sum by N or by M, and T is the averaging window behind the
/// CLT variance of Lambda.
struct FusionSpec {
    FusionNormalization normalization = FusionNormalization::ByN;
    std::uint64_t T = 1;
};

/// Raw moments E[S^0..S^4] of S = sum_i w_i X_i for independent X_i with the
/// given per-variable raw moments E[X^1..X^4].
std::array<double, 5> weighted_sum_moments(std::span<const double> weights,
                                           std::span<const std::array<double, 4>> moments);

/// Raw moments 1..4 of gamma^-1(v_j) given T_1 = type, for node 1 itself
/// (node_is_one = true) or any other node.
std::array<double, 4> reputation_phi_moments(const TypeConditionalModel& m, bool node_is_one,
                                             NodeType type);

struct DeviationMoments {
    double mean;      // E[d_i | T_i]
    double variance;  // Var[d_i | T_i] per sample (divide by T for Lambda)
};

/// Mean and variance of the squared deviation d_1 under the marginal
/// independence model, via polynomial expansion over per-node moments.
DeviationMoments deviation_moments(const TypeConditionalModel& m, const FusionSpec& fusion,
                                   NodeType type);

/// Asymptotic tagging threshold eta = mu_H + sigma_H * Qinv(xi) with
/// sigma_H^2 = Var[d | H] / T.
double asymptotic_threshold(const TypeConditionalModel& m, const FusionSpec& fusion, double xi);

/// Hand-expanded second and fourth moments of the weighted deviation for a
/// five-node network fused with the 1/M rule; cross-check path for the
/// generic expansion. phi1/phi2 are the node-1 and other-node moments.
double mu1h_closed_form_n5(const std::array<double, 4>& phi1, const std::array<double, 4>& phi2,
                           int M);
double delta_closed_form_n5(const std::array<double, 4>& phi1, const std::array<double, 4>& phi2,
                            int M);

struct IdentificationSeries {
    std::vector<int> identified_count;        // nodes tagged Byzantine at each t
    std::vector<double> honest_mislabel;      // honest nodes tagged Byzantine
    std::vector<double> byzantine_mislabel;   // Byzantine nodes tagged Honest
};

/// Runs the reputation scheme on top of the detection network: at each step
/// the FC fuses with the MAP rule, accumulates per-node squared deviations
/// against the decided signal, and re-tags every node. Deterministic given
/// the config seed.
IdentificationSeries run_identification(const DetectionScenario& s, const NetworkConfig& cfg,
                                        double eta, std::uint64_t T_max,
                                        bool attack_aware = false);

/// Same scheme on the estimation network with centroid-average fusion.
IdentificationSeries run_identification(const EstimationScenario& s, const NetworkConfig& cfg,
                                        double eta, std::uint64_t T_max,
                                        FusionNormalization normalization = FusionNormalization::ByN);

/// Midpoint of the analytic per-type deviation means, assuming the FC
/// decision matches the truth; a practical default threshold for the
/// identification experiments.
double calibrate_eta(const DetectionScenario& s, const NetworkConfig& cfg);
double calibrate_eta(const EstimationScenario& s, const NetworkConfig& cfg,
                     FusionNormalization normalization = FusionNormalization::ByN);

}  // namespace byzq
