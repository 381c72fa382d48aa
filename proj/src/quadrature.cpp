#include "byzq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace byzq {

namespace {
using Vec = std::vector<double>;

Vec simpson(const Vec& fa, const Vec& fm, const Vec& fb, double h) {
    Vec out(fa.size());
    for (std::size_t i = 0; i < fa.size(); ++i)
        out[i] = h / 6.0 * (fa[i] + 4.0 * fm[i] + fb[i]);
    return out;
}

void adaptive(const std::function<Vec(double)>& f, double a, double b, const Vec& fa,
              const Vec& fm, const Vec& fb, const Vec& whole, double tol, int depth, Vec& acc) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const Vec flm = f(lm), frm = f(rm);
    const Vec left = simpson(fa, flm, fm, m - a);
    const Vec right = simpson(fm, frm, fb, b - m);

    double err = 0.0;
    for (std::size_t i = 0; i < whole.size(); ++i)
        err = std::max(err, std::fabs(left[i] + right[i] - whole[i]));

    if (err <= 15.0 * tol || depth <= 0) {
        if (depth <= 0 && err > 15.0 * tol)
            throw std::runtime_error("integrate_adaptive: failed to converge");
        for (std::size_t i = 0; i < acc.size(); ++i)
            acc[i] += left[i] + right[i] + (left[i] + right[i] - whole[i]) / 15.0;
        return;
    }
    adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, acc);
    adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, acc);
}
}  // namespace

std::vector<double> integrate_adaptive(const std::function<std::vector<double>(double)>& f,
                                       double a, double b, double abs_tol, int max_depth) {
    if (!(b > a)) throw std::invalid_argument("integrate_adaptive: need b > a");
    const Vec fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const Vec whole = simpson(fa, fm, fb, b - a);
    Vec acc(fa.size(), 0.0);
    adaptive(f, a, b, fa, fm, fb, whole, abs_tol, max_depth, acc);
    return acc;
}

double integrate_adaptive_scalar(const std::function<double(double)>& f, double a, double b,
                                 double abs_tol, int max_depth) {
    const auto g = [&f](double x) { return std::vector<double>{f(x)}; };
    return integrate_adaptive(g, a, b, abs_tol, max_depth)[0];
}

}  // namespace byzq
