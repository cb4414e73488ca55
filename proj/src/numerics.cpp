#include "cypipe/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cypipe::numerics {

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b,
               double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa,
                     double b, double fb, double m, double fm, double whole,
                     double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(f, a, fa, m, fm, flm);
    const double right = simpson(f, m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = simpson(f, a, fa, b, fb, fm);
    return adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

std::vector<double> cumulative_simpson(const std::function<double(double)>& f,
                                       const std::vector<double>& nodes) {
    std::vector<double> acc(nodes.size(), 0.0);
    if (nodes.empty()) return acc;
    double fl = f(nodes.front());
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        const double a = nodes[k];
        const double b = nodes[k + 1];
        const double fm = f(0.5 * (a + b));
        const double fr = f(b);
        acc[k + 1] = acc[k] + (b - a) / 6.0 * (fl + 4.0 * fm + fr);
        fl = fr;
    }
    return acc;
}

RootResult brent_root(const std::function<double(double)>& f, double lo, double hi,
                      double xtol, int max_iter) {
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return {a, 0.0, 0};
    if (fb == 0.0) return {b, 0.0, 0};
    if (fa * fb > 0.0) {
        throw std::invalid_argument("brent_root: endpoints do not bracket a root");
    }
    double c = a, fc = fa;
    double d = b - a, e = d;
    RootResult out;
    for (int iter = 0; iter < max_iter; ++iter) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 =
            2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) {
            out.x = b;
            out.fx = fb;
            out.iterations = iter;
            return out;
        }
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // secant or inverse quadratic interpolation
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
    }
    out.x = b;
    out.fx = fb;
    out.iterations = max_iter;
    return out;
}

std::pair<double, double> golden_section_max(const std::function<double(double)>& f,
                                             double a, double b, double xtol) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2; f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1; f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    const double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

// ---------------------------------------------------------------------------
// CubicSpline
// ---------------------------------------------------------------------------

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y, double slope_lo,
                         double slope_hi)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) {
        throw std::invalid_argument("CubicSpline: need >= 2 samples of equal length");
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(x_[i + 1] > x_[i])) {
            throw std::invalid_argument("CubicSpline: abscissae must increase strictly");
        }
    }
    // Solve for second derivatives with clamped ends.
    std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
    const double h0 = x_[1] - x_[0];
    diag[0] = 2.0 * h0;
    upper[0] = h0;
    rhs[0] = 6.0 * ((y_[1] - y_[0]) / h0 - slope_lo);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = x_[i] - x_[i - 1];
        const double hr = x_[i + 1] - x_[i];
        lower[i] = hl;
        diag[i] = 2.0 * (hl + hr);
        upper[i] = hr;
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl);
    }
    const double hn = x_[n - 1] - x_[n - 2];
    lower[n - 1] = hn;
    diag[n - 1] = 2.0 * hn;
    rhs[n - 1] = 6.0 * (slope_hi - (y_[n - 1] - y_[n - 2]) / hn);
    solve_tridiagonal(lower, diag, upper, rhs);
    m_ = std::move(rhs);
}

namespace {

// derivative at x0 of the polynomial through up to five leading points,
// by a small Vandermonde solve in the (x - x0) basis
double onesided_slope(const std::vector<double>& x, const std::vector<double>& y,
                      bool from_end) {
    const std::size_t n = x.size();
    const std::size_t m = std::min<std::size_t>(5, n);
    auto pick = [&](std::size_t k) {
        const std::size_t idx = from_end ? n - 1 - k : k;
        return std::pair{x[idx], y[idx]};
    };
    const double x0 = pick(0).first;
    double A[5][6] = {};
    for (std::size_t r = 0; r < m; ++r) {
        const auto [xr, yr] = pick(r);
        double p = 1.0;
        for (std::size_t c = 0; c < m; ++c) {
            A[r][c] = p;
            p *= (xr - x0);
        }
        A[r][m] = yr;
    }
    for (std::size_t c = 0; c < m; ++c) {  // partial-pivot elimination
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < m; ++r) {
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        }
        for (std::size_t k = 0; k <= m; ++k) std::swap(A[c][k], A[piv][k]);
        for (std::size_t r = c + 1; r < m; ++r) {
            const double w = A[r][c] / A[c][c];
            for (std::size_t k = c; k <= m; ++k) A[r][k] -= w * A[c][k];
        }
    }
    double coef[5] = {};
    for (std::size_t r = m; r-- > 0;) {
        double acc = A[r][m];
        for (std::size_t k = r + 1; k < m; ++k) acc -= A[r][k] * coef[k];
        coef[r] = acc / A[r][r];
    }
    return coef[1];
}

}  // namespace

CubicSpline CubicSpline::with_estimated_slopes(std::vector<double> x,
                                               std::vector<double> y) {
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("CubicSpline: need >= 2 samples");
    if (n == 2) {
        const double s = (y[1] - y[0]) / (x[1] - x[0]);
        return CubicSpline(std::move(x), std::move(y), s, s);
    }
    const double lo = onesided_slope(x, y, false);
    const double hi = onesided_slope(x, y, true);
    return CubicSpline(std::move(x), std::move(y), lo, hi);
}

int CubicSpline::interval(double x) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    int i = static_cast<int>(it - x_.begin()) - 1;
    i = std::clamp(i, 0, static_cast<int>(x_.size()) - 2);
    return i;
}

double CubicSpline::value(double x) const {
    const int i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
    const int i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h / 6.0;
}

double CubicSpline::second_derivative(double x) const {
    const int i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return a * m_[i] + b * m_[i + 1];
}

double CubicSpline::max_abs_second_derivative() const {
    double mx = 0.0;
    for (double v : m_) mx = std::max(mx, std::abs(v));
    return mx;
}

double Polynomial::value(double x) const {
    double acc = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return Polynomial({0.0});
    std::vector<double> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
    return Polynomial(std::move(d));
}

void solve_tridiagonal(const std::vector<double>& lower, std::vector<double>& diag,
                       const std::vector<double>& upper, std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
    }
}

}  // namespace cypipe::numerics
