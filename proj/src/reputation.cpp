#include "byzq/reputation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "byzq/quadrature.hpp"

namespace byzq {

ReputationState::ReputationState(int N) {
    if (N < 1) throw std::invalid_argument("ReputationState: N must be >= 1");
    sums.assign(N, 0.0);
    counts.assign(N, 0);
    tags.assign(N, Tag::Untagged);
}

void ReputationState::add(int node, double d) {
    if (node < 0 || node >= size()) throw std::out_of_range("ReputationState: node out of range");
    if (!(d >= 0.0)) throw std::invalid_argument("ReputationState: deviation must be >= 0");
    sums[node] += d;
    counts[node] += 1;
}

double ReputationState::lambda(int node) const {
    if (node < 0 || node >= size()) throw std::out_of_range("ReputationState: node out of range");
    if (counts[node] == 0) return 0.0;
    return sums[node] / static_cast<double>(counts[node]);
}

ReputationState update(ReputationState state, int node, double d) {
    state.add(node, d);
    return state;
}

double deviation(int v, double theta_hat, const UniformQuantizer& q,
                 const GaussianObservationModel& f) {
    const double diff = dequantize(q, v) - f.mean(theta_hat);
    return diff * diff;
}

Tag tag(double lambda, double eta) { return lambda > eta ? Tag::Byzantine : Tag::Honest; }

ThetaPrior ThetaPrior::uniform(double lo, double hi) {
    if (!(hi > lo)) throw std::invalid_argument("ThetaPrior::uniform: need hi > lo");
    ThetaPrior p;
    p.kind = Kind::Uniform;
    p.lo = lo;
    p.hi = hi;
    return p;
}

ThetaPrior ThetaPrior::point_mass(double x) {
    ThetaPrior p;
    p.kind = Kind::PointMass;
    p.point = x;
    return p;
}

ThetaPrior ThetaPrior::discrete(std::vector<std::pair<double, double>> atoms) {
    if (atoms.empty()) throw std::invalid_argument("ThetaPrior::discrete: no atoms");
    double sum = 0.0;
    for (const auto& [x, w] : atoms) {
        if (w < 0.0) throw std::invalid_argument("ThetaPrior::discrete: negative weight");
        sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("ThetaPrior::discrete: weights must sum to 1");
    ThetaPrior p;
    p.kind = Kind::Discrete;
    p.atoms = std::move(atoms);
    return p;
}

TypeConditionalModel TypeConditionalModel::make(int N, double alpha, FlippingMatrix attack,
                                                UniformQuantizer q, GaussianObservationModel obs,
                                                ThetaPrior prior) {
    if (N < 2) throw std::invalid_argument("TypeConditionalModel: N must be >= 2");
    if (!(alpha >= 0.0) || !(alpha <= 1.0))
        throw std::invalid_argument("TypeConditionalModel: alpha must lie in [0, 1]");
    if (attack.alphabet.M != q.alphabet.M)
        throw std::invalid_argument("TypeConditionalModel: alphabet mismatch");
    return {N, alpha, std::move(attack), std::move(q), obs, std::move(prior)};
}

double TypeConditionalModel::pi_bh() const {
    return static_cast<double>(N) * alpha / static_cast<double>(N - 1);
}

double TypeConditionalModel::pi_bb() const {
    return (static_cast<double>(N) * alpha - 1.0) / static_cast<double>(N - 1);
}

namespace {
SymbolPmf mix_pmfs(const SymbolPmf& a, const SymbolPmf& b, double weight_on_b) {
    std::vector<double> out(a.probs.size());
    for (std::size_t m = 0; m < out.size(); ++m)
        out[m] = (1.0 - weight_on_b) * a[m] + weight_on_b * b[m];
    return SymbolPmf(a.alphabet, std::move(out));
}
}  // namespace

SymbolPmf type_conditional_pmf(const TypeConditionalModel& m, int j, int i, NodeType type_of_i,
                               double theta) {
    const SymbolPmf clean = symbol_pmf(m.observation, m.quantizer, theta);
    const SymbolPmf flipped = apply_attack(clean, m.attack, 1.0);
    if (j == i) return type_of_i == NodeType::Honest ? clean : flipped;

    const double pi = type_of_i == NodeType::Honest ? m.pi_bh() : m.pi_bb();
    if (pi < 0.0)
        throw std::invalid_argument(
            "type_conditional_pmf: pi_BB < 0 (needs N*alpha >= 1); not clamping");
    if (pi > 1.0)
        throw std::invalid_argument(
            "type_conditional_pmf: mixture weight above 1 (needs alpha <= (N-1)/N); not clamping");
    return mix_pmfs(clean, flipped, pi);
}

SymbolPmf marginal_type_conditional_pmf(const TypeConditionalModel& m, int j, int i,
                                        NodeType type_of_i) {
    const int M = m.quantizer.alphabet.M;
    switch (m.prior.kind) {
        case ThetaPrior::Kind::PointMass:
            return type_conditional_pmf(m, j, i, type_of_i, m.prior.point);
        case ThetaPrior::Kind::Discrete: {
            std::vector<double> acc(M, 0.0);
            for (const auto& [x, w] : m.prior.atoms) {
                const SymbolPmf p = type_conditional_pmf(m, j, i, type_of_i, x);
                for (int k = 0; k < M; ++k) acc[k] += w * p[k];
            }
            return SymbolPmf(m.quantizer.alphabet, std::move(acc));
        }
        case ThetaPrior::Kind::Uniform:
            break;
    }
    const double density = 1.0 / (m.prior.hi - m.prior.lo);
    const auto integrand = [&](double theta) {
        std::vector<double> v = type_conditional_pmf(m, j, i, type_of_i, theta).probs;
        for (double& x : v) x *= density;
        return v;
    };
    std::vector<double> raw = integrate_adaptive(integrand, m.prior.lo, m.prior.hi, 1e-9);
    // The components are within the quadrature tolerance; rescale the tiny
    // residual so the result satisfies the simplex invariant exactly.
    double sum = 0.0;
    for (double v : raw) sum += v;
    for (double& v : raw) v /= sum;
    return SymbolPmf(m.quantizer.alphabet, std::move(raw));
}

std::array<double, 5> weighted_sum_moments(std::span<const double> weights,
                                           std::span<const std::array<double, 4>> moments) {
    if (weights.size() != moments.size())
        throw std::invalid_argument("weighted_sum_moments: size mismatch");
    static constexpr int binom[5][5] = {
        {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
    std::array<double, 5> cur{1.0, 0.0, 0.0, 0.0, 0.0};
    for (std::size_t idx = 0; idx < weights.size(); ++idx) {
        const double w = weights[idx];
        const auto& m = moments[idx];
        // Raw moments of w * X, order 0..4.
        const std::array<double, 5> wm{1.0, w * m[0], w * w * m[1], w * w * w * m[2],
                                       w * w * w * w * m[3]};
        std::array<double, 5> next{};
        for (int k = 0; k <= 4; ++k) {
            double acc = 0.0;
            for (int a = 0; a <= k; ++a) acc += binom[k][a] * cur[k - a] * wm[a];
            next[k] = acc;
        }
        cur = next;
    }
    return cur;
}

std::array<double, 4> reputation_phi_moments(const TypeConditionalModel& m, bool node_is_one,
                                             NodeType type) {
    const SymbolPmf p = marginal_type_conditional_pmf(m, node_is_one ? 1 : 2, 1, type);
    std::array<double, 4> phi{};
    for (int k = 0; k < m.quantizer.alphabet.M; ++k) {
        const double c = m.quantizer.centroids[k];
        double power = 1.0;
        for (int j = 0; j < 4; ++j) {
            power *= c;
            phi[j] += power * p[k];
        }
    }
    return phi;
}

DeviationMoments deviation_moments(const TypeConditionalModel& m, const FusionSpec& fusion,
                                   NodeType type) {
    const double divisor = fusion.normalization == FusionNormalization::ByN
                               ? static_cast<double>(m.N)
                               : static_cast<double>(m.quantizer.alphabet.M);
    const auto phi1 = reputation_phi_moments(m, true, type);
    const auto phi2 = reputation_phi_moments(m, false, type);

    std::vector<double> weights(m.N, -1.0 / divisor);
    weights[0] = 1.0 - 1.0 / divisor;
    std::vector<std::array<double, 4>> moments(m.N, phi2);
    moments[0] = phi1;

    const auto s = weighted_sum_moments(weights, moments);
    return {s[2], s[4] - s[2] * s[2]};
}

double asymptotic_threshold(const TypeConditionalModel& m, const FusionSpec& fusion, double xi) {
    if (!(xi > 0.0) || !(xi < 1.0))
        throw std::invalid_argument("asymptotic_threshold: xi must lie in (0, 1)");
    if (fusion.T < 1) throw std::invalid_argument("asymptotic_threshold: T must be >= 1");
    const DeviationMoments dm = deviation_moments(m, fusion, NodeType::Honest);
    const double sigma = std::sqrt(std::max(0.0, dm.variance) / static_cast<double>(fusion.T));
    return dm.mean + sigma * gaussian_tail_inv(xi);
}

double mu1h_closed_form_n5(const std::array<double, 4>& phi1, const std::array<double, 4>& phi2,
                           int M) {
    const double m1 = M - 1.0;
    return (m1 * m1 * phi1[1] + 4.0 * phi2[1] + 12.0 * phi2[0] * phi2[0] -
            8.0 * m1 * phi1[0] * phi2[0]) /
           (static_cast<double>(M) * M);
}

double delta_closed_form_n5(const std::array<double, 4>& phi1, const std::array<double, 4>& phi2,
                            int M) {
    const double m1 = M - 1.0;
    const double p11 = phi1[0], p12 = phi1[1], p13 = phi1[2], p14 = phi1[3];
    const double p21 = phi2[0], p22 = phi2[1], p23 = phi2[2], p24 = phi2[3];
    const double M4 = static_cast<double>(M) * M * M * M;
    return (m1 * m1 * m1 * m1 * p14 - 16.0 * m1 * m1 * m1 * p13 * p21 +
            6.0 * m1 * m1 * p12 * (4.0 * p22 + 12.0 * p21 * p21) -
            4.0 * m1 * p11 * (4.0 * p23 + 36.0 * p22 * p21 + 24.0 * p21 * p21 * p21) +
            4.0 * p24 + 12.0 * p23 * p21 +
            36.0 * (p23 * p21 + p22 * p22 + 2.0 * p22 * p21 * p21) +
            24.0 * (p21 * p21 * p21 * p21 + 3.0 * p22 * p21 * p21)) /
           M4;
}

namespace {
IdentificationSeries run_series(const NetworkConfig& cfg, double eta, std::uint64_t T_max,
                                const std::function<TrialRecord(std::uint64_t)>& step,
                                const GaussianObservationModel& expected_signal) {
    if (T_max < 1) throw std::invalid_argument("run_identification: T_max must be >= 1");
    const int N = cfg.N;
    int honest_total = 0;
    for (int i = 0; i < N; ++i) honest_total += cfg.is_byzantine[i] ? 0 : 1;
    const int byz_total = N - honest_total;

    ReputationState state(N);
    IdentificationSeries series;
    series.identified_count.reserve(T_max);
    series.honest_mislabel.reserve(T_max);
    series.byzantine_mislabel.reserve(T_max);

    for (std::uint64_t t = 0; t < T_max; ++t) {
        const TrialRecord rec = step(t);
        for (int i = 0; i < N; ++i)
            state.add(i, deviation(rec.transmitted[i], rec.decision, cfg.quantizer,
                                   expected_signal));
        int tagged = 0, honest_wrong = 0, byz_wrong = 0;
        for (int i = 0; i < N; ++i) {
            state.tags[i] = tag(state.lambda(i), eta);
            const bool says_byz = state.tags[i] == Tag::Byzantine;
            tagged += says_byz ? 1 : 0;
            if (cfg.is_byzantine[i]) {
                byz_wrong += says_byz ? 0 : 1;
            } else {
                honest_wrong += says_byz ? 1 : 0;
            }
        }
        series.identified_count.push_back(tagged);
        series.honest_mislabel.push_back(
            honest_total ? static_cast<double>(honest_wrong) / honest_total : 0.0);
        series.byzantine_mislabel.push_back(
            byz_total ? static_cast<double>(byz_wrong) / byz_total : 0.0);
    }
    return series;
}
}  // namespace

IdentificationSeries run_identification(const DetectionScenario& s, const NetworkConfig& cfg,
                                        double eta, std::uint64_t T_max, bool attack_aware) {
    return run_series(
        cfg, eta, T_max,
        [&](std::uint64_t t) { return detection_trial(s, cfg, t, attack_aware); }, s.model0);
}

IdentificationSeries run_identification(const EstimationScenario& s, const NetworkConfig& cfg,
                                        double eta, std::uint64_t T_max,
                                        FusionNormalization normalization) {
    return run_series(
        cfg, eta, T_max,
        [&](std::uint64_t t) { return estimation_trial(s, cfg, t, normalization); }, s.model);
}

double calibrate_eta(const DetectionScenario& s, const NetworkConfig& cfg) {
    double mu_h = 0.0, mu_b = 0.0;
    for (int h = 0; h <= 1; ++h) {
        const double w = h == 0 ? s.p0 : s.p1;
        if (w == 0.0) continue;
        const SymbolPmf clean = s.pmf(h);
        const SymbolPmf flipped = apply_attack(clean, cfg.attack, 1.0);
        const double signal = s.model0.mean(static_cast<double>(h));
        for (int m = 1; m <= clean.size(); ++m) {
            const double diff = dequantize(s.quantizer, m) - signal;
            mu_h += w * clean[m - 1] * diff * diff;
            mu_b += w * flipped[m - 1] * diff * diff;
        }
    }
    return 0.5 * (mu_h + mu_b);
}

double calibrate_eta(const EstimationScenario& s, const NetworkConfig& cfg,
                     FusionNormalization normalization) {
    const TypeConditionalModel m =
        TypeConditionalModel::make(cfg.N, cfg.alpha, cfg.attack, cfg.quantizer, s.model,
                                   ThetaPrior::point_mass(s.theta));
    const FusionSpec fusion{normalization, 1};
    const double mu_h = deviation_moments(m, fusion, NodeType::Honest).mean;
    const double mu_b = deviation_moments(m, fusion, NodeType::Byzantine).mean;
    return 0.5 * (mu_h + mu_b);
}

}  // namespace byzq
