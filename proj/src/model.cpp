#include "byzq/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "byzq/gaussian.hpp"

namespace byzq {

Alphabet::Alphabet(int M_) : M(M_) {
    if (M < 2) throw std::invalid_argument("Alphabet: M must be >= 2");
}

UniformQuantizer make_uniform_quantizer(int M, double A) {
    if (M < 2) throw std::invalid_argument("make_uniform_quantizer: M must be >= 2");
    if (!(A > 0.0)) throw std::invalid_argument("make_uniform_quantizer: A must be > 0");

    UniformQuantizer q{Alphabet(M), A, 0.0, {}, {}};
    if (M == 2) {
        // Degenerate case: one threshold at 0, centroids +-A/2.
        q.step = A;
        q.thresholds = {0.0};
        q.centroids = {-A / 2.0, A / 2.0};
        return q;
    }
    q.step = 2.0 * A / static_cast<double>(M - 2);
    q.thresholds.resize(M - 1);
    for (int i = 1; i <= M - 1; ++i)
        q.thresholds[i - 1] = A * (2.0 * (i - 1) / static_cast<double>(M - 2) - 1.0);
    q.centroids.resize(M);
    const double lo = q.thresholds.front() - q.step;  // virtual lambda_0
    const double hi = q.thresholds.back() + q.step;   // virtual lambda_M
    q.centroids.front() = (lo + q.thresholds.front()) / 2.0;
    for (int m = 2; m <= M - 1; ++m)
        q.centroids[m - 1] = (q.thresholds[m - 2] + q.thresholds[m - 1]) / 2.0;
    q.centroids.back() = (q.thresholds.back() + hi) / 2.0;
    return q;
}

int quantize(const UniformQuantizer& q, double r) {
    // Cell rule: lambda_{m-1} < r <= lambda_m, so a boundary value belongs to
    // the lower cell. lower_bound gives the first threshold >= r.
    const auto it = std::lower_bound(q.thresholds.begin(), q.thresholds.end(), r);
    return static_cast<int>(it - q.thresholds.begin()) + 1;
}

double dequantize(const UniformQuantizer& q, int m) {
    if (m < 1 || m > q.alphabet.M)
        throw std::out_of_range("dequantize: symbol out of range");
    return q.centroids[m - 1];
}

GaussianObservationModel GaussianObservationModel::bpsk(double mu, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("bpsk: sigma must be > 0");
    return {Signal::BpskAmplitude, mu, sigma};
}

GaussianObservationModel GaussianObservationModel::location(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("location: sigma must be > 0");
    return {Signal::Location, 0.0, sigma};
}

double GaussianObservationModel::mean(double theta) const {
    if (signal == Signal::Location) return theta;
    return theta > 0.5 ? mu : -mu;
}

double GaussianObservationModel::mean_derivative() const {
    if (signal != Signal::Location)
        throw std::invalid_argument("mean_derivative: signal map not differentiable");
    return 1.0;
}

namespace {
void check_simplex(const std::vector<double>& p) {
    double sum = 0.0;
    for (double v : p) {
        if (v < -1e-15 || v > 1.0 + 1e-12)
            throw std::invalid_argument("SymbolPmf: entry outside [0, 1]");
        sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("SymbolPmf: entries must sum to 1 within 1e-12");
}
}  // namespace

SymbolPmf::SymbolPmf(Alphabet a, std::vector<double> p) : alphabet(a), probs(std::move(p)) {
    if (static_cast<int>(probs.size()) != alphabet.M)
        throw std::invalid_argument("SymbolPmf: size mismatch");
    check_simplex(probs);
}

SymbolPmfGradient::SymbolPmfGradient(Alphabet a, std::vector<double> d)
    : alphabet(a), dprobs(std::move(d)) {
    if (static_cast<int>(dprobs.size()) != alphabet.M)
        throw std::invalid_argument("SymbolPmfGradient: size mismatch");
    double sum = 0.0;
    for (double v : dprobs) sum += v;
    if (std::fabs(sum) > 1e-10)
        throw std::invalid_argument("SymbolPmfGradient: entries must sum to 0 within 1e-10");
}

SymbolPmf symbol_pmf(const GaussianObservationModel& model, const UniformQuantizer& q,
                     double theta) {
    const int M = q.alphabet.M;
    const double mean = model.mean(theta);
    std::vector<double> cdf(M + 1);
    cdf[0] = 0.0;
    cdf[M] = 1.0;
    for (int i = 1; i < M; ++i) cdf[i] = normal_cdf((q.thresholds[i - 1] - mean) / model.sigma);
    std::vector<double> p(M);
    for (int m = 0; m < M; ++m) p[m] = std::max(0.0, cdf[m + 1] - cdf[m]);
    return SymbolPmf(q.alphabet, std::move(p));
}

SymbolPmfGradient symbol_pmf_gradient(const GaussianObservationModel& model,
                                      const UniformQuantizer& q, double theta) {
    const int M = q.alphabet.M;
    const double mean = model.mean(theta);
    const double scale = model.mean_derivative() / model.sigma;
    std::vector<double> pdf(M + 1);
    pdf[0] = 0.0;
    pdf[M] = 0.0;  // density vanishes at the virtual +-infinity boundaries
    for (int i = 1; i < M; ++i) pdf[i] = normal_pdf((q.thresholds[i - 1] - mean) / model.sigma);
    std::vector<double> d(M);
    for (int m = 0; m < M; ++m) d[m] = (pdf[m] - pdf[m + 1]) * scale;
    return SymbolPmfGradient(q.alphabet, std::move(d));
}

}  // namespace byzq
