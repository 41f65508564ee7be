#ifndef RMH_SPECIAL_FUNCTIONS_HPP
#define RMH_SPECIAL_FUNCTIONS_HPP

namespace rmh {

/// Tail probability with the relative error the evaluation converged to.
/// underflow marks values below the smallest representable magnitude, which
/// are returned as exact 0.
struct TailProbability {
    double value = 0.0;
    double achieved_relative_error = 0.0;
    bool underflow = false;
};

/// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
/// Series expansion for x < a+1, modified-Lentz continued fraction otherwise.
TailProbability regularized_gamma_p(double a, double x);
TailProbability regularized_gamma_q(double a, double x);

/// Regularized incomplete beta I_x(a,b) via the continued fraction.
TailProbability regularized_beta(double a, double b, double x);

/// P(chi2_df > x) = Q(df/2, x/2).
TailProbability chi2_sf(double x, int df);
TailProbability chi2_cdf(double x, int df);

/// P(F_{d1,d2} > x) = I_{d2/(d2+d1*x)}(d2/2, d1/2).
TailProbability f_sf(double x, int d1, int d2);
TailProbability f_cdf(double x, int d1, int d2);

} // namespace rmh

#endif
