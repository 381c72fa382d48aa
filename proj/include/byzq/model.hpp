#pragma once

#include <vector>

namespace byzq {

/// Quantization alphabet of size M >= 2. Symbols are labelled 1..M; every
/// vector indexed against an alphabet stores symbol m at position m-1.
struct Alphabet {
    int M;

    explicit Alphabet(int M_);
    bool operator==(const Alphabet&) const = default;
};

/// Uniform scalar quantizer on [-A, A] with unbounded outer cells.
///
/// For M >= 3 the thresholds are lambda_i = A*(2*(i-1)/(M-2) - 1), i = 1..M-1,
/// so lambda_1 = -A and lambda_{M-1} = A, with step 2A/(M-2). M = 2 uses a
/// single threshold at 0. Centroids are cell midpoints; the outer cells use
/// virtual boundaries one step beyond the extreme thresholds.
struct UniformQuantizer {
    Alphabet alphabet;
    double A;
    double step;
    std::vector<double> thresholds;  // size M-1, strictly increasing
    std::vector<double> centroids;   // size M, strictly increasing
};

UniformQuantizer make_uniform_quantizer(int M, double A);

/// Maps r to the symbol m with lambda_{m-1} < r <= lambda_m (outer cells
/// unbounded). Total on all of R.
int quantize(const UniformQuantizer& q, double r);

/// Centroid of symbol m's cell (m in 1..M).
double dequantize(const UniformQuantizer& q, int m);

/// Scalar Gaussian observation r = mean(theta) + n, n ~ N(0, sigma^2).
/// Two signal maps: a BPSK amplitude (theta in {0,1} -> -mu/+mu) used for
/// detection, and the identity map used for estimation.
struct GaussianObservationModel {
    enum class Signal { BpskAmplitude, Location };

    Signal signal;
    double mu;     // amplitude; unused by Location
    double sigma;  // noise standard deviation, > 0

    static GaussianObservationModel bpsk(double mu, double sigma);
    static GaussianObservationModel location(double sigma);

    double mean(double theta) const;
    /// d mean / d theta. Only the location map is differentiable.
    double mean_derivative() const;
};

/// Probability vector over one alphabet: entries in [0,1], sum 1 within 1e-12.
struct SymbolPmf {
    Alphabet alphabet;
    std::vector<double> probs;

    SymbolPmf(Alphabet a, std::vector<double> p);
    double operator[](std::size_t i) const { return probs[i]; }
    int size() const { return alphabet.M; }
};

/// Derivative of a SymbolPmf with respect to theta; entries sum to 0 within
/// 1e-10.
struct SymbolPmfGradient {
    Alphabet alphabet;
    std::vector<double> dprobs;

    SymbolPmfGradient(Alphabet a, std::vector<double> d);
    double operator[](std::size_t i) const { return dprobs[i]; }
    int size() const { return alphabet.M; }
};

/// P(symbol = m | theta) for the quantized observation.
SymbolPmf symbol_pmf(const GaussianObservationModel& model, const UniformQuantizer& q,
                     double theta);

/// d/dtheta of symbol_pmf (location model only).
SymbolPmfGradient symbol_pmf_gradient(const GaussianObservationModel& model,
                                      const UniformQuantizer& q, double theta);

}  // namespace byzq
