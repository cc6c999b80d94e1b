#include "subweibull/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "subweibull/errors.hpp"

namespace subweibull {

Eigen::MatrixXd gram(const Eigen::MatrixXd& X) {
    if (X.rows() < 1) throw std::invalid_argument("gram: need n >= 1");
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(X.cols(), X.cols());
    G.selfadjointView<Eigen::Lower>().rankUpdate(X.transpose());
    G = G.selfadjointView<Eigen::Lower>();
    G /= static_cast<double>(X.rows());
    return 0.5 * (G + G.transpose());
}

Eigen::MatrixXd centered_cov(const Eigen::MatrixXd& X) {
    if (X.rows() < 2) throw std::invalid_argument("centered_cov: need n >= 2");
    const Eigen::RowVectorXd mean = X.colwise().mean();
    return gram(X.rowwise() - mean);
}

GramPair make_gram_pair(const DataMatrix& X, bool centered) {
    if (centered) return {centered_cov(X.values), X.law.population_cov(), true};
    return {gram(X.values), X.law.population_gram(), false};
}

double max_elementwise_error(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    if (A.rows() != A.cols() || A.rows() != B.rows() || A.cols() != B.cols())
        throw std::invalid_argument("max_elementwise_error: dimension mismatch");
    double m = 0.0;
    for (Eigen::Index k = 0; k < A.cols(); ++k)
        for (Eigen::Index j = 0; j <= k; ++j) m = std::max(m, std::fabs(A(j, k) - B(j, k)));
    return m;
}

ThresholdResult delta_bound(double a_np, double k_np, double n, double p, double alpha, double t,
                            const BoundConstants& constants, bool centered) {
    if (!(alpha > 0.0)) throw std::domain_error("alpha must be positive");
    if (alpha > 2.0) throw UnsupportedRangeError("delta_bound: alpha > 2 is not supported");
    if (!(a_np >= 0.0) || !(k_np >= 0.0) || !(t >= 0.0)) throw std::domain_error("delta_bound: negative input");
    if (!(n >= 1.0) || !(p >= 1.0)) throw std::domain_error("delta_bound: n, p must be >= 1");
    constants.validate();
    const double s = t + 2.0 * std::log(p);
    const double thr = 7.0 * a_np * std::sqrt(s / n) + constants.c_alpha_cov * k_np * k_np *
                                                            std::pow(std::log(2.0 * n), 2.0 / alpha) *
                                                            std::pow(s, 2.0 / alpha) / n;
    return {thr, std::min(1.0, (centered ? 6.0 : 3.0) * std::exp(-t))};
}

Eigen::MatrixXd hard_threshold(const Eigen::MatrixXd& M, double lambda) {
    if (M.rows() != M.cols()) throw std::invalid_argument("hard_threshold: matrix must be square");
    if (!(lambda >= 0.0)) throw std::invalid_argument("hard_threshold: lambda must be >= 0");
    Eigen::MatrixXd out = M;
    for (Eigen::Index k = 0; k < M.cols(); ++k)
        for (Eigen::Index j = 0; j <= k; ++j) {
            // decide on the upper entry and mirror, so the output is symmetric
            const double v = std::fabs(M(j, k)) < lambda ? 0.0 : M(j, k);
            out(j, k) = v;
            out(k, j) = v;
        }
    return out;
}

double binomial_coefficient(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

double spectral_norm_sym(const Eigen::MatrixXd& A) {
    const auto k = A.rows();
    if (k == 0) return 0.0;
    if (k == 1) return std::fabs(A(0, 0));
    if (k == 2) {
        const double m = 0.5 * (A(0, 0) + A(1, 1));
        const double h = 0.5 * (A(0, 0) - A(1, 1));
        const double b = 0.5 * (A(0, 1) + A(1, 0));
        return std::fabs(m) + std::hypot(h, b);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

void check_square(const Eigen::MatrixXd& D, const char* who) {
    if (D.rows() != D.cols()) throw std::invalid_argument(std::string(who) + ": matrix must be square");
}

// Advance a sorted k-subset of {0..p-1} lexicographically; false at the end.
bool next_combination(std::vector<int>& c, int p) {
    const int k = static_cast<int>(c.size());
    int i = k - 1;
    while (i >= 0 && c[i] == p - k + i) --i;
    if (i < 0) return false;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    return true;
}

Eigen::MatrixXd principal(const Eigen::MatrixXd& D, const std::vector<int>& S) {
    const int k = static_cast<int>(S.size());
    Eigen::MatrixXd M(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) M(a, b) = D(S[a], S[b]);
    return M;
}

}  // namespace

RipResult rip_exact(const Eigen::MatrixXd& D, int k, std::uint64_t cap) {
    check_square(D, "rip_exact");
    const int p = static_cast<int>(D.rows());
    if (k < 1 || k > p) throw std::invalid_argument("rip_exact: need 1 <= k <= p");
    const double count = binomial_coefficient(p, k);
    if (count > static_cast<double>(cap))
        throw CapacityError("rip_exact: support count exceeds the enumeration cap; use rip_net");
    RipResult r;
    r.k = k;
    r.method = RipMethod::Exact;
    std::vector<int> S(k);
    std::iota(S.begin(), S.end(), 0);
    do {
        r.value = std::max(r.value, spectral_norm_sym(principal(D, S)));
        ++r.supports_evaluated;
    } while (next_combination(S, p));
    return r;
}

Eigen::VectorXd QuarterNet::vector(std::size_t support, Eigen::Index column) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(p);
    const auto& S = supports.at(support);
    for (int a = 0; a < k; ++a) v(S[a]) = mesh(a, column);
    return v;
}

Eigen::MatrixXd sphere_quarter_mesh(int k) {
    if (k < 1) throw std::invalid_argument("sphere_quarter_mesh: k must be >= 1");
    if (k == 1) {
        Eigen::MatrixXd m(1, 2);
        m << 1.0, -1.0;
        return m;
    }
    // Any unit theta has theta/|theta|_inf on a cube face, within
    // (h/2) sqrt(k-1) of a grid point on that face; radial projection onto the
    // sphere is 1-Lipschitz outside the unit ball.
    const int m = static_cast<int>(std::ceil(4.0 * std::sqrt(static_cast<double>(k - 1)) - 1e-12));
    std::vector<int> idx(k, 0);
    std::vector<Eigen::VectorXd> pts;
    for (;;) {
        bool surface = false;
        for (int v : idx) surface = surface || v == 0 || v == m;
        if (surface) {
            Eigen::VectorXd g(k);
            for (int a = 0; a < k; ++a) g(a) = -1.0 + 2.0 * idx[a] / m;
            pts.push_back(g.normalized());
        }
        int a = 0;
        while (a < k && idx[a] == m) idx[a++] = 0;
        if (a == k) break;
        ++idx[a];
    }
    Eigen::MatrixXd out(k, static_cast<Eigen::Index>(pts.size()));
    for (std::size_t c = 0; c < pts.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = pts[c];
    return out;
}

QuarterNet quarter_net(int k, int p, std::uint64_t cap, const RngStream& rng) {
    if (k < 1 || k > p) throw std::invalid_argument("quarter_net: need 1 <= k <= p");
    QuarterNet net;
    net.k = k;
    net.p = p;
    net.mesh = sphere_quarter_mesh(k);
    const double count = binomial_coefficient(p, k);
    if (count <= static_cast<double>(cap)) {
        std::vector<int> S(k);
        std::iota(S.begin(), S.end(), 0);
        do net.supports.push_back(S);
        while (next_combination(S, p));
        net.exhaustive = true;
    } else {
        RngStream r = rng;
        std::vector<int> pool(p);
        for (std::uint64_t s = 0; s < cap; ++s) {
            std::iota(pool.begin(), pool.end(), 0);
            for (int i = 0; i < k; ++i) {
                const int j = i + static_cast<int>(r.next_u64() % static_cast<std::uint64_t>(p - i));
                std::swap(pool[i], pool[j]);
            }
            std::vector<int> S(pool.begin(), pool.begin() + k);
            std::sort(S.begin(), S.end());
            net.supports.push_back(std::move(S));
        }
        net.exhaustive = false;
    }
    return net;
}

RipResult rip_net(const Eigen::MatrixXd& D, int k, const QuarterNet& net) {
    check_square(D, "rip_net");
    if (net.k != k || net.p != D.rows()) throw std::invalid_argument("rip_net: net does not match (k, p)");
    RipResult r;
    r.k = k;
    r.method = RipMethod::QuarterNet;
    r.net_size = net.size();
    r.exhaustive = net.exhaustive;
    for (const auto& S : net.supports) {
        const Eigen::MatrixXd sub = principal(D, S);
        const Eigen::MatrixXd T = sub * net.mesh;
        const Eigen::RowVectorXd q = net.mesh.cwiseProduct(T).colwise().sum();
        r.value = std::max(r.value, q.cwiseAbs().maxCoeff());
        ++r.supports_evaluated;
    }
    return r;
}

double upsilon_estimate(const Eigen::MatrixXd& X, int k, const QuarterNet& net) {
    if (net.supports.empty() || net.mesh.cols() == 0) throw std::invalid_argument("upsilon_estimate: empty net");
    if (net.k != k || net.p != X.cols()) throw std::invalid_argument("upsilon_estimate: net does not match data");
    const Eigen::Index n = X.rows();
    double best = 0.0;
    Eigen::MatrixXd Xs(n, k);
    for (const auto& S : net.supports) {
        for (int a = 0; a < k; ++a) Xs.col(a) = X.col(S[a]);
        const Eigen::MatrixXd Z = (Xs * net.mesh).array().square().matrix();
        const Eigen::RowVectorXd mean = Z.colwise().mean();
        const Eigen::RowVectorXd var = (Z.rowwise() - mean).array().square().colwise().sum() / static_cast<double>(n);
        best = std::max(best, var.maxCoeff());
    }
    return best;
}

double xi_bound(const RsConvexityParams& q, bool joint) {
    if (!(q.alpha > 0.0)) throw std::domain_error("xi_bound: alpha must be positive");
    if (q.alpha > 2.0) throw UnsupportedRangeError("xi_bound: alpha > 2 is not supported");
    if (!(q.k >= 1.0) || q.k > q.p) throw std::invalid_argument("xi_bound: need 1 <= k <= p");
    if (!(q.n >= 1.0)) throw std::invalid_argument("xi_bound: n must be >= 1");
    if (!(q.upsilon >= 0.0) || !(q.k_np >= 0.0) || !(q.c_alpha > 0.0))
        throw std::invalid_argument("xi_bound: negative scale parameter");
    const double ratio = 36.0 * q.n * q.p / q.k;
    if (!(ratio > 1.0)) throw std::invalid_argument("xi_bound: 36np/k must exceed 1");
    const double L = std::log(ratio);
    const double first = 14.0 * std::sqrt(2.0) * std::sqrt(q.upsilon * q.k * L / q.n);
    double second = q.c_alpha * q.k_np * q.k_np * std::pow(std::log(2.0 * q.n), 2.0 / q.alpha) *
                    std::pow(q.k * L, 2.0 / q.alpha) / q.n;
    if (!joint) second *= q.k;
    return first + second;
}

ReReport re_check(const Eigen::MatrixXd& sigma, double xi, int k) {
    check_square(sigma, "re_check");
    if (sigma.rows() == 0) throw std::invalid_argument("re_check: empty matrix");
    const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
    if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("re_check: matrix is not symmetric");
    if (!(xi >= 0.0)) throw std::invalid_argument("re_check: xi must be >= 0");
    return re_verdict(min_eigenvalue_sym(sigma), xi, k);
}

double min_eigenvalue_sym(const Eigen::MatrixXd& A) {
    check_square(A, "min_eigenvalue_sym");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

ReReport re_verdict(double lambda_min, double xi, int k) {
    if (!(xi >= 0.0)) throw std::invalid_argument("re_verdict: xi must be >= 0");
    ReReport r;
    r.lambda_min = lambda_min;
    r.xi = xi;
    r.k = k;
    r.satisfied = r.lambda_min >= kReFactor * xi;
    r.gamma_n = r.satisfied ? r.lambda_min / 2.0 : 0.0;
    return r;
}

double rsc_lower(const Eigen::VectorXd& theta, double lambda_min, double xi, int k) {
    if (k < 1) throw std::invalid_argument("rsc_lower: k must be >= 1");
    const double l2 = theta.squaredNorm();
    const double l1 = theta.lpNorm<1>();
    return (lambda_min - 27.0 * xi) * l2 - (54.0 * xi / k) * l1 * l1;
}

double cone_min_oracle(const Eigen::MatrixXd& sigma_hat, const std::vector<int>& S, double delta, int trials,
                       const RngStream& rng) {
    check_square(sigma_hat, "cone_min_oracle");
    const int p = static_cast<int>(sigma_hat.rows());
    if (S.empty()) throw std::invalid_argument("cone_min_oracle: S must be nonempty");
    if (trials < 1) throw std::invalid_argument("cone_min_oracle: trials must be >= 1");
    if (!(delta >= 1.0)) throw std::invalid_argument("cone_min_oracle: delta must be >= 1");
    std::vector<char> in_s(p, 0);
    for (int j : S) {
        if (j < 0 || j >= p) throw std::invalid_argument("cone_min_oracle: index out of range");
        in_s[j] = 1;
    }
    std::vector<int> comp;
    for (int j = 0; j < p; ++j)
        if (!in_s[j]) comp.push_back(j);
    RngStream r = rng;
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXd theta(p);
    for (int t = 0; t < trials; ++t) {
        theta.setZero();
        double l1s = 0.0;
        for (int j : S) {
            theta(j) = r.normal();
            l1s += std::fabs(theta(j));
        }
        const double ns = std::sqrt(
            std::accumulate(S.begin(), S.end(), 0.0, [&](double acc, int j) { return acc + theta(j) * theta(j); }));
        if (ns == 0.0) continue;
        for (int j : S) theta(j) /= ns;
        l1s /= ns;
        if (!comp.empty()) {
            const double budget = delta * l1s * r.uniform();
            // alternate dense and single-coordinate off-support directions
            if (t % 2 == 0) {
                double l1c = 0.0;
                for (int j : comp) {
                    theta(j) = r.normal();
                    l1c += std::fabs(theta(j));
                }
                if (l1c > 0.0)
                    for (int j : comp) theta(j) *= budget / l1c;
            } else {
                const int j = comp[r.next_u64() % comp.size()];
                theta(j) = r.coin() ? budget : -budget;
            }
        }
        const double q = theta.dot(sigma_hat * theta) / theta.squaredNorm();
        best = std::min(best, q);
    }
    return best;
}

}  // namespace subweibull
