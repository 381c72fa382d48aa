#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "byzq/linalg.hpp"
#include "byzq/model.hpp"

namespace byzq {

/// Thrown by the noisy-channel solver when the existence condition
/// 0 <= (Q^T)^-1 1 <= M 1 fails; carries the offending vector.
class ExistenceConditionError : public std::runtime_error {
 public:
    ExistenceConditionError(std::string what, std::vector<double> v)
        : std::runtime_error(std::move(what)), vector(std::move(v)) {}
    std::vector<double> vector;
};

/// Row-stochastic M x M flipping matrix: entry (l, m) is the probability a
/// compromised node reports m when its true symbol is l.
struct FlippingMatrix {
    Alphabet alphabet;
    SquareMatrix entries;

    FlippingMatrix(Alphabet a, SquareMatrix e);
    /// 1-based accessor p_{lm}.
    double p(int l, int m) const { return entries(l - 1, m - 1); }
};

/// Row-stochastic M x M channel matrix between the sensors and the fusion
/// center; entry (m, n) is the probability symbol m arrives as n.
struct ChannelMatrix {
    Alphabet alphabet;
    SquareMatrix entries;

    ChannelMatrix(Alphabet a, SquareMatrix e);
    double q(int m, int n) const { return entries(m - 1, n - 1); }
};

/// Output of the noisy-channel blinding solver. The matrix is the literal
/// closed-form solution and may carry entries outside [0, 1]; `feasible`
/// reports whether it is a valid stochastic matrix, with the offending
/// entries listed in `violations`.
struct AttackSolution {
    double alpha_blind;
    SquareMatrix matrix;
    bool feasible;
    struct Violation {
        int row, col;  // 1-based
        double value;
    };
    std::vector<Violation> violations;
};

/// Minimum compromised fraction that blinds the fusion center over an ideal
/// channel: (M-1)/M.
double blind_fraction(int M);

/// The blinding attack: uniform off-diagonal flips, zero diagonal.
FlippingMatrix optimal_attack(int M);

/// One-parameter symmetric family: p off-diagonal, 1-(M-1)p on the diagonal.
/// Requires 0 <= p <= 1/(M-1).
FlippingMatrix symmetric_attack(int M, double p);

/// Worst-case flipping probability within the symmetric family (for any
/// alpha below the blind fraction): 1/(M-1).
double worst_case_symmetric_p(int M);

/// Post-attack symbol distribution when an alpha fraction of nodes flips
/// through P: out[m] = alpha * sum_l p_lm in[l] + (1 - alpha) in[m].
SymbolPmf apply_attack(const SymbolPmf& pmf, const FlippingMatrix& P, double alpha);

/// Same linear map applied to a pmf derivative.
SymbolPmfGradient apply_attack(const SymbolPmfGradient& grad, const FlippingMatrix& P,
                               double alpha);

/// Distribution after the FC channel: out[n] = sum_m q_mn in[m].
SymbolPmf apply_channel(const SymbolPmf& pmf, const ChannelMatrix& Q);

/// Blinding solution for an invertible row-stochastic channel Q:
///   alpha_blind = 1 - (1/M) max{ (Q^T)^-1 1 }
///   P = 1/(alpha_blind M) * ones * Q^-1 - (1 - alpha_blind)/alpha_blind * I.
/// Checks the existence condition first and never adjusts alpha; the caller
/// inspects `feasible`.
AttackSolution noisy_channel_attack(const ChannelMatrix& Q);

/// Diagnostic companion to noisy_channel_attack (not part of the closed-form
/// solution): smallest alpha for which the blinding matrix at that alpha is
/// entrywise in [0, 1], found by bisection. Returns NaN when no alpha in
/// (0, 1] qualifies.
double min_feasible_alpha(const ChannelMatrix& Q);

}  // namespace byzq
