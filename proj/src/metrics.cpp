#include "byzq/metrics.hpp"

#include <cmath>

namespace byzq {

DetectionScenario DetectionScenario::bpsk(double mu, double sigma, UniformQuantizer q, double p0,
                                          double p1) {
    if (p0 < 0.0 || p1 < 0.0 || std::fabs(p0 + p1 - 1.0) > 1e-12)
        throw std::invalid_argument("DetectionScenario: priors must be nonnegative and sum to 1");
    return {GaussianObservationModel::bpsk(mu, sigma), GaussianObservationModel::bpsk(mu, sigma),
            std::move(q), p0, p1};
}

SymbolPmf DetectionScenario::pmf(int hypothesis) const {
    if (hypothesis != 0 && hypothesis != 1)
        throw std::invalid_argument("DetectionScenario::pmf: hypothesis must be 0 or 1");
    return symbol_pmf(hypothesis == 0 ? model0 : model1, quantizer,
                      static_cast<double>(hypothesis));
}

EstimationScenario EstimationScenario::location(double sigma, UniformQuantizer q, double theta) {
    return {GaussianObservationModel::location(sigma), std::move(q), theta};
}

double kld(const SymbolPmf& pmf0, const SymbolPmf& pmf1) {
    if (pmf0.alphabet.M != pmf1.alphabet.M)
        throw std::invalid_argument("kld: alphabet mismatch");
    double d = 0.0;
    for (int m = 0; m < pmf0.size(); ++m) {
        const double p = pmf0[m];
        if (p == 0.0) continue;  // 0 * log 0 -> 0
        const double q = pmf1[m];
        if (q == 0.0)
            throw SupportViolation("kld: pmf0 has mass where pmf1 vanishes (divergence is +inf)");
        d += p * std::log(p / q);
    }
    return d;
}

double detection_kld(const DetectionScenario& s, const FlippingMatrix& P, double alpha) {
    return kld(apply_attack(s.pmf(0), P, alpha), apply_attack(s.pmf(1), P, alpha));
}

double fisher(const SymbolPmf& pmf, const SymbolPmfGradient& grad) {
    if (pmf.alphabet.M != grad.alphabet.M)
        throw std::invalid_argument("fisher: alphabet mismatch");
    double j = 0.0;
    for (int m = 0; m < pmf.size(); ++m) {
        const double g = grad[m];
        if (g == 0.0) continue;
        const double num = g * g;
        if (num == 0.0) continue;  // underflow: the cell's mass decays slower than g^2
        if (pmf[m] == 0.0)
            throw SupportViolation("fisher: zero-probability cell with non-zero gradient");
        j += num / pmf[m];
    }
    return j;
}

double estimation_fisher(const EstimationScenario& s, const FlippingMatrix& P, double alpha) {
    const SymbolPmf z = symbol_pmf(s.model, s.quantizer, s.theta);
    const SymbolPmfGradient g = symbol_pmf_gradient(s.model, s.quantizer, s.theta);
    return fisher(apply_attack(z, P, alpha), apply_attack(g, P, alpha));
}

double estimation_fisher_symmetric(const EstimationScenario& s, double p, double alpha) {
    const int M = s.quantizer.alphabet.M;
    if (!(p >= 0.0) || p > 1.0 / (M - 1) + 1e-12)
        throw std::invalid_argument("estimation_fisher_symmetric: p must lie in [0, 1/(M-1)]");
    if (!(alpha >= 0.0) || !(alpha <= 1.0))
        throw std::invalid_argument("estimation_fisher_symmetric: alpha must lie in [0, 1]");
    const SymbolPmf z = symbol_pmf(s.model, s.quantizer, s.theta);
    const SymbolPmfGradient g = symbol_pmf_gradient(s.model, s.quantizer, s.theta);
    const double f = 1.0 - M * alpha * p;
    double sum = 0.0;
    for (int m = 0; m < M; ++m) {
        const double gm = g[m];
        if (gm == 0.0) continue;
        const double num = gm * gm;
        if (num == 0.0) continue;
        const double zt = alpha * p + f * z[m];
        if (zt == 0.0)
            throw SupportViolation("estimation_fisher_symmetric: zero-probability cell");
        sum += num / zt;
    }
    return f * f * sum;
}

}  // namespace byzq
