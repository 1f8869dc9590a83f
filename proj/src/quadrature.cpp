#include "conclab/quadrature.hpp"

#include <cmath>

#include "conclab/errors.hpp"

namespace conclab {

namespace {

struct SimpsonState {
    const std::function<double(double)>& f;
    int max_depth;
};

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double recurse(const SimpsonState& st, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = st.f(lm);
    const double frm = st.f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= st.max_depth)
        throw CheckFailure("adaptive quadrature failed to converge at depth " +
                           std::to_string(depth));
    return recurse(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           recurse(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 int max_depth) {
    if (!(a < b)) {
        if (a == b) return 0.0;
        return -integrate(f, b, a, rel_tol, max_depth);
    }
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = simpson(fa, fm, fb, b - a);
    // Scale the absolute budget by a coarse magnitude estimate so rel_tol
    // behaves relatively; fall back to an absolute floor near zero.
    const double scale = std::max(std::abs(whole), 1e-300);
    const SimpsonState st{f, max_depth};
    return recurse(st, a, b, fa, fm, fb, whole, rel_tol * scale, 0);
}

}  // namespace conclab
