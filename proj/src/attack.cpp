#include "byzq/attack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace byzq {

namespace {
constexpr double kStochasticTol = 1e-12;
constexpr double kFeasibilityTol = 1e-10;
constexpr double kSingularCondition = 1e12;

void check_row_stochastic(const SquareMatrix& m, const char* who) {
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double v = m(i, j);
            if (v < -kStochasticTol || v > 1.0 + kStochasticTol)
                throw std::invalid_argument(std::string(who) + ": entry outside [0, 1]");
            row += v;
        }
        if (std::fabs(row - 1.0) > kStochasticTol)
            throw std::invalid_argument(std::string(who) + ": row sums must be 1 within 1e-12");
    }
}
}  // namespace

FlippingMatrix::FlippingMatrix(Alphabet a, SquareMatrix e) : alphabet(a), entries(std::move(e)) {
    if (entries.size() != static_cast<std::size_t>(alphabet.M))
        throw std::invalid_argument("FlippingMatrix: size mismatch");
    check_row_stochastic(entries, "FlippingMatrix");
}

ChannelMatrix::ChannelMatrix(Alphabet a, SquareMatrix e) : alphabet(a), entries(std::move(e)) {
    if (entries.size() != static_cast<std::size_t>(alphabet.M))
        throw std::invalid_argument("ChannelMatrix: size mismatch");
    check_row_stochastic(entries, "ChannelMatrix");
}

double blind_fraction(int M) {
    if (M < 2) throw std::invalid_argument("blind_fraction: M must be >= 2");
    return static_cast<double>(M - 1) / static_cast<double>(M);
}

FlippingMatrix optimal_attack(int M) {
    if (M < 2) throw std::invalid_argument("optimal_attack: M must be >= 2");
    SquareMatrix e(M);
    const double off = 1.0 / static_cast<double>(M - 1);
    for (int l = 0; l < M; ++l)
        for (int m = 0; m < M; ++m) e(l, m) = (l == m) ? 0.0 : off;
    return FlippingMatrix(Alphabet(M), std::move(e));
}

FlippingMatrix symmetric_attack(int M, double p) {
    if (M < 2) throw std::invalid_argument("symmetric_attack: M must be >= 2");
    const double pmax = 1.0 / static_cast<double>(M - 1);
    if (!(p >= 0.0) || p > pmax + kStochasticTol)
        throw std::invalid_argument("symmetric_attack: p must lie in [0, 1/(M-1)]");
    SquareMatrix e(M);
    const double diag = 1.0 - (M - 1) * p;
    for (int l = 0; l < M; ++l)
        for (int m = 0; m < M; ++m) e(l, m) = (l == m) ? diag : p;
    return FlippingMatrix(Alphabet(M), std::move(e));
}

double worst_case_symmetric_p(int M) {
    if (M < 2) throw std::invalid_argument("worst_case_symmetric_p: M must be >= 2");
    return 1.0 / static_cast<double>(M - 1);
}

namespace {
std::vector<double> attacked_vector(const std::vector<double>& in, const SquareMatrix& p,
                                    double alpha) {
    const std::size_t n = p.size();
    std::vector<double> out(n);
    for (std::size_t m = 0; m < n; ++m) {
        double flipped = 0.0;
        for (std::size_t l = 0; l < n; ++l) flipped += p(l, m) * in[l];
        out[m] = alpha * flipped + (1.0 - alpha) * in[m];
    }
    return out;
}
}  // namespace

SymbolPmf apply_attack(const SymbolPmf& pmf, const FlippingMatrix& P, double alpha) {
    if (pmf.alphabet.M != P.alphabet.M)
        throw std::invalid_argument("apply_attack: alphabet mismatch");
    if (!(alpha >= 0.0) || !(alpha <= 1.0))
        throw std::invalid_argument("apply_attack: alpha must lie in [0, 1]");
    return SymbolPmf(pmf.alphabet, attacked_vector(pmf.probs, P.entries, alpha));
}

SymbolPmfGradient apply_attack(const SymbolPmfGradient& grad, const FlippingMatrix& P,
                               double alpha) {
    if (grad.alphabet.M != P.alphabet.M)
        throw std::invalid_argument("apply_attack: alphabet mismatch");
    if (!(alpha >= 0.0) || !(alpha <= 1.0))
        throw std::invalid_argument("apply_attack: alpha must lie in [0, 1]");
    return SymbolPmfGradient(grad.alphabet, attacked_vector(grad.dprobs, P.entries, alpha));
}

SymbolPmf apply_channel(const SymbolPmf& pmf, const ChannelMatrix& Q) {
    if (pmf.alphabet.M != Q.alphabet.M)
        throw std::invalid_argument("apply_channel: alphabet mismatch");
    return SymbolPmf(pmf.alphabet, Q.entries.row_times(pmf.probs));
}

namespace {
// Blinding matrix at a given alpha: 1/(alpha M) * ones * Q^-1 - (1-alpha)/alpha * I.
// Every row of ones * Q^-1 equals the column-sum vector of Q^-1.
SquareMatrix blinding_matrix(const std::vector<double>& qinv_colsums, double alpha) {
    const std::size_t n = qinv_colsums.size();
    SquareMatrix p(n);
    const double scale = 1.0 / (alpha * static_cast<double>(n));
    const double shift = (1.0 - alpha) / alpha;
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = 0; m < n; ++m)
            p(l, m) = scale * qinv_colsums[m] - (l == m ? shift : 0.0);
    return p;
}

std::vector<AttackSolution::Violation> find_violations(const SquareMatrix& p) {
    std::vector<AttackSolution::Violation> v;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double x = p(i, j);
            if (x < -kFeasibilityTol || x > 1.0 + kFeasibilityTol)
                v.push_back({static_cast<int>(i) + 1, static_cast<int>(j) + 1, x});
        }
    return v;
}
}  // namespace

AttackSolution noisy_channel_attack(const ChannelMatrix& Q) {
    const int M = Q.alphabet.M;
    if (condition_estimate(Q.entries) > kSingularCondition)
        throw SingularMatrixError("noisy_channel_attack: channel matrix is singular");

    const SquareMatrix qinv = inverse(Q.entries);
    // (Q^T)^-1 1 equals the column sums of Q^-1.
    std::vector<double> w(M, 0.0);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) w[j] += qinv(i, j);

    double wmax = w[0];
    for (double v : w) wmax = std::max(wmax, v);
    for (double v : w)
        if (v < -kFeasibilityTol || v > M + kFeasibilityTol) {
            std::ostringstream os;
            os << "noisy_channel_attack: existence condition 0 <= (Q^T)^-1 1 <= M*1 violated; "
                  "vector = [";
            for (int j = 0; j < M; ++j) os << (j ? ", " : "") << w[j];
            os << "]";
            throw ExistenceConditionError(os.str(), w);
        }

    AttackSolution sol;
    sol.alpha_blind = 1.0 - wmax / static_cast<double>(M);
    sol.matrix = blinding_matrix(w, sol.alpha_blind);
    sol.violations = find_violations(sol.matrix);
    sol.feasible = sol.violations.empty();
    return sol;
}

double min_feasible_alpha(const ChannelMatrix& Q) {
    const int M = Q.alphabet.M;
    if (condition_estimate(Q.entries) > kSingularCondition)
        throw SingularMatrixError("min_feasible_alpha: channel matrix is singular");
    const SquareMatrix qinv = inverse(Q.entries);
    std::vector<double> w(M, 0.0);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) w[j] += qinv(i, j);

    const auto feasible = [&](double alpha) {
        return find_violations(blinding_matrix(w, alpha)).empty();
    };
    if (!feasible(1.0)) return std::numeric_limits<double>::quiet_NaN();
    double lo = 1e-12, hi = 1.0;
    if (feasible(lo)) return lo;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace byzq
