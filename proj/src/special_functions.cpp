#include "rmh/special_functions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rmh/errors.hpp"

namespace rmh {

namespace {

constexpr double kEps = 1e-14;
constexpr double kFpMin = 1e-300;
constexpr int kMaxIter = 500;

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

// Series for P(a,x), valid and fast for x < a+1.
TailProbability gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps) {
            const double lg = a * std::log(x) - x - std::lgamma(a);
            if (lg < -745.0) return {0.0, 0.0, true};
            return {clamp01(sum * std::exp(lg)), std::fabs(term / sum) + kEps, false};
        }
    }
    throw numeric_error("regularized_gamma: series failed to converge (a=" +
                        std::to_string(a) + ", x=" + std::to_string(x) + ")");
}

// Continued fraction for Q(a,x), valid for x >= a+1, modified Lentz.
TailProbability gamma_q_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kFpMin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = b + an / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) {
            const double lg = a * std::log(x) - x - std::lgamma(a);
            if (lg < -745.0) return {0.0, 0.0, true};
            return {clamp01(h * std::exp(lg)), std::fabs(delta - 1.0) + kEps, false};
        }
    }
    throw numeric_error("regularized_gamma: continued fraction failed to converge (a=" +
                        std::to_string(a) + ", x=" + std::to_string(x) + ")");
}

double beta_cf(double a, double b, double x, double* achieved) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double md = static_cast<double>(m);
        const double m2 = 2.0 * md;
        double aa = md * (b - md) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + md) * (qab + md) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) {
            *achieved = std::fabs(delta - 1.0) + kEps;
            return h;
        }
    }
    throw numeric_error("regularized_beta: continued fraction failed to converge (a=" +
                        std::to_string(a) + ", b=" + std::to_string(b) +
                        ", x=" + std::to_string(x) + ")");
}

} // namespace

TailProbability regularized_gamma_p(double a, double x) {
    if (a <= 0 || x < 0)
        throw std::invalid_argument("regularized_gamma_p: need a > 0 and x >= 0");
    if (x == 0) return {0.0, 0.0, false};
    if (x < a + 1.0) return gamma_p_series(a, x);
    TailProbability q = gamma_q_cf(a, x);
    return {clamp01(1.0 - q.value), q.achieved_relative_error, false};
}

TailProbability regularized_gamma_q(double a, double x) {
    if (a <= 0 || x < 0)
        throw std::invalid_argument("regularized_gamma_q: need a > 0 and x >= 0");
    if (x == 0) return {1.0, 0.0, false};
    if (x >= a + 1.0) return gamma_q_cf(a, x);
    TailProbability p = gamma_p_series(a, x);
    return {clamp01(1.0 - p.value), p.achieved_relative_error, p.underflow};
}

TailProbability regularized_beta(double a, double b, double x) {
    if (a <= 0 || b <= 0)
        throw std::invalid_argument("regularized_beta: need a > 0 and b > 0");
    if (x < 0 || x > 1)
        throw std::invalid_argument("regularized_beta: x must be in [0,1]");
    if (x == 0) return {0.0, 0.0, false};
    if (x == 1) return {1.0, 0.0, false};
    const double lbt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log1p(-x);
    double achieved = 0.0;
    if (x < (a + 1.0) / (a + b + 2.0)) {
        if (lbt < -745.0) return {0.0, 0.0, true};
        const double v = std::exp(lbt) * beta_cf(a, b, x, &achieved) / a;
        return {clamp01(v), achieved, false};
    }
    if (lbt < -745.0) return {1.0, kEps, false};
    const double v = 1.0 - std::exp(lbt) * beta_cf(b, a, 1.0 - x, &achieved) / b;
    return {clamp01(v), achieved, false};
}

TailProbability chi2_sf(double x, int df) {
    if (df < 1) throw std::invalid_argument("chi2_sf: df must be >= 1");
    if (x < 0) throw std::invalid_argument("chi2_sf: x must be >= 0");
    return regularized_gamma_q(0.5 * static_cast<double>(df), 0.5 * x);
}

TailProbability chi2_cdf(double x, int df) {
    if (df < 1) throw std::invalid_argument("chi2_cdf: df must be >= 1");
    if (x < 0) throw std::invalid_argument("chi2_cdf: x must be >= 0");
    return regularized_gamma_p(0.5 * static_cast<double>(df), 0.5 * x);
}

TailProbability f_sf(double x, int d1, int d2) {
    if (d1 < 1 || d2 < 1) throw std::invalid_argument("f_sf: degrees of freedom must be >= 1");
    if (x < 0) throw std::invalid_argument("f_sf: x must be >= 0");
    const double w = static_cast<double>(d2) /
                     (static_cast<double>(d2) + static_cast<double>(d1) * x);
    return regularized_beta(0.5 * static_cast<double>(d2), 0.5 * static_cast<double>(d1), w);
}

TailProbability f_cdf(double x, int d1, int d2) {
    if (d1 < 1 || d2 < 1) throw std::invalid_argument("f_cdf: degrees of freedom must be >= 1");
    if (x < 0) throw std::invalid_argument("f_cdf: x must be >= 0");
    const double w = static_cast<double>(d1) * x /
                     (static_cast<double>(d2) + static_cast<double>(d1) * x);
    return regularized_beta(0.5 * static_cast<double>(d1), 0.5 * static_cast<double>(d2), w);
}

} // namespace rmh
