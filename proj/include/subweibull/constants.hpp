#pragma once

#include <map>
#include <string>

namespace subweibull {

// Closed-form constants indexed by the Weibull order alpha.
double const_c(double alpha);          // 3^{1/a}/sqrt(3)
double const_m(double alpha);          // max{1, 2^{(1-a)/a}}
double const_k(double alpha);          // c(a) M(a)
double const_s(double alpha);          // 2^{1/a} M(a) / 2
double quasi_norm_q(double alpha);     // Q_a
double moment_lower_c(double alpha);   // C_*(a)
double moment_upper_c(double alpha);   // C^*(a)
double weighted_sum_c(double alpha);   // C(a) in the weighted-sum bound

// Values the theory leaves unspecified. All default to 1 and every report
// echoes the values in force.
struct BoundConstants {
    double c_alpha_var_small = 1.0;  // variance-sum bound, alpha <= 1
    double k_alpha_lt = 1.0;
    double c_alpha_var_large = 1.0;  // variance-sum bound, alpha > 1
    double c_alpha_max_avg = 1.0;    // max of averages
    double c_alpha_cov = 1.0;   // covariance max-norm deviation
    double c_alpha_rip = 1.0;   // sparse operator norm / RSC
    double c_alpha_poly = 1.0;  // polynomial-tail Lasso lambda
    double k1_clt = 1.0;
    double k2_clt = 1.0;
    double c_beta_b_clt = 1.0;
    double c_gamma_lasso = 1.0;
    double c_bootstrap = 1.0;

    void validate() const;
    // Set by name; false if the name is unknown.
    bool set(const std::string& name, double value);
    std::map<std::string, double> as_map() const;
    // "name=value;..." in name order, values printed with %.17g.
    std::string to_string() const;
};

}  // namespace subweibull
