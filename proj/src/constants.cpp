#include "subweibull/constants.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace subweibull {

namespace {
void check_alpha(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("alpha must be positive and finite");
}
}  // namespace

double const_c(double a) {
    check_alpha(a);
    return std::pow(3.0, 1.0 / a) / std::sqrt(3.0);
}

double const_m(double a) {
    check_alpha(a);
    return std::max(1.0, std::pow(2.0, (1.0 - a) / a));
}

double const_k(double a) { return const_c(a) * const_m(a); }

double const_s(double a) { return std::pow(2.0, 1.0 / a) * const_m(a) / 2.0; }

double quasi_norm_q(double a) {
    check_alpha(a);
    if (a < 1.0) return 2.0 * std::numbers::e * std::pow(4.0 / a, 1.0 / a);
    return 1.0;
}

double moment_lower_c(double a) {
    check_alpha(a);
    return 0.5 * std::min(1.0, std::pow(a, 1.0 / a));
}

double moment_upper_c(double a) {
    check_alpha(a);
    return std::numbers::e * std::max(2.0, std::pow(4.0, 1.0 / a));
}

double weighted_sum_c(double a) {
    check_alpha(a);
    const double e = std::numbers::e;
    const double lead = std::max(std::sqrt(2.0), std::pow(2.0, 1.0 / a));
    if (a < 1.0) {
        return lead * std::sqrt(8.0) * e * e * e * std::pow(2.0 * std::numbers::pi, 0.25) * std::exp(1.0 / 24.0) *
               std::pow(std::exp(2.0 / e) / a, 1.0 / a);
    }
    return lead * (4.0 * e + 2.0 * std::pow(std::log(2.0), 1.0 / a));
}

namespace {
template <class F>
void for_each_field(BoundConstants& c, F&& f) {
    f("c_alpha_cov", c.c_alpha_cov);
    f("c_alpha_max_avg", c.c_alpha_max_avg);
    f("c_alpha_poly", c.c_alpha_poly);
    f("c_alpha_rip", c.c_alpha_rip);
    f("c_alpha_var_large", c.c_alpha_var_large);
    f("c_alpha_var_small", c.c_alpha_var_small);
    f("c_beta_b_clt", c.c_beta_b_clt);
    f("c_bootstrap", c.c_bootstrap);
    f("c_gamma_lasso", c.c_gamma_lasso);
    f("k1_clt", c.k1_clt);
    f("k2_clt", c.k2_clt);
    f("k_alpha_lt", c.k_alpha_lt);
}
}  // namespace

void BoundConstants::validate() const {
    auto copy = *this;
    for_each_field(copy, [](const char* name, double& v) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("constant ") + name + " must be positive and finite");
    });
}

bool BoundConstants::set(const std::string& name, double value) {
    bool found = false;
    for_each_field(*this, [&](const char* n, double& v) {
        if (name == n) {
            v = value;
            found = true;
        }
    });
    return found;
}

std::map<std::string, double> BoundConstants::as_map() const {
    std::map<std::string, double> out;
    auto copy = *this;
    for_each_field(copy, [&](const char* n, double& v) { out[n] = v; });
    return out;
}

std::string BoundConstants::to_string() const {
    std::string s;
    char buf[64];
    for (const auto& [k, v] : as_map()) {
        if (!s.empty()) s += ';';
        std::snprintf(buf, sizeof buf, "%.17g", v);
        s += k + "=" + buf;
    }
    return s;
}

}  // namespace subweibull
