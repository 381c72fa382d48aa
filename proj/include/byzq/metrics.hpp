#pragma once

#include <stdexcept>

#include "byzq/attack.hpp"
#include "byzq/model.hpp"

namespace byzq {

/// Thrown when a divergence or Fisher sum hits a cell with zero reference
/// probability but non-zero numerator mass.
class SupportViolation : public std::domain_error {
 public:
    using std::domain_error::domain_error;
};

/// Binary hypothesis test on BPSK observations: theta = 0 under H0 (mean
/// -mu), theta = 1 under H1 (mean +mu).
struct DetectionScenario {
    GaussianObservationModel model0;
    GaussianObservationModel model1;
    UniformQuantizer quantizer;
    double p0;
    double p1;

    static DetectionScenario bpsk(double mu, double sigma, UniformQuantizer q, double p0 = 0.5,
                                  double p1 = 0.5);
    SymbolPmf pmf(int hypothesis) const;
};

/// Scalar location estimation r = theta + n evaluated at one theta.
struct EstimationScenario {
    GaussianObservationModel model;  // location form
    UniformQuantizer quantizer;
    double theta;

    static EstimationScenario location(double sigma, UniformQuantizer q, double theta);
};

/// Kullback-Leibler divergence sum_m p0[m] ln(p0[m]/p1[m]) in nats.
/// Cells with p0[m] = 0 contribute 0; p0[m] > 0 with p1[m] = 0 throws
/// SupportViolation.
double kld(const SymbolPmf& pmf0, const SymbolPmf& pmf1);

/// Per-sensor KLD between the post-attack symbol distributions under the two
/// hypotheses. The network-level divergence is N times this.
double detection_kld(const DetectionScenario& s, const FlippingMatrix& P, double alpha);

/// Fisher information sum_m grad[m]^2 / pmf[m] of a pmf and the gradient of
/// that same pmf. Cells with grad[m] = 0 contribute 0; grad[m] != 0 with
/// pmf[m] = 0 throws SupportViolation.
double fisher(const SymbolPmf& pmf, const SymbolPmfGradient& grad);

/// Per-sensor conditional Fisher information of the post-attack symbols,
/// computed by pushing both the pmf and its gradient through the attack.
/// Works for any flipping matrix.
double estimation_fisher(const EstimationScenario& s, const FlippingMatrix& P, double alpha);

/// Closed form for the symmetric family: (1 - M alpha p)^2 *
/// sum_m (dz_m/dtheta)^2 / ztilde_m. Agrees with estimation_fisher within
/// 1e-10 on symmetric attacks.
double estimation_fisher_symmetric(const EstimationScenario& s, double p, double alpha);

}  // namespace byzq
