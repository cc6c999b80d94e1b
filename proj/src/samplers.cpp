#include "subweibull/samplers.hpp"

#include <bit>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "subweibull/errors.hpp"

namespace subweibull {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double open_uniform_from(std::uint64_t u) {
    return (static_cast<double>(u >> 11) + 0.5) * 0x1.0p-53;
}

inline double weibull_magnitude(double alpha, double e) {
    if (alpha == 1.0) return e;
    if (alpha == 2.0) return std::sqrt(e);
    if (alpha == 0.5) return e * e;
    return std::pow(e, 1.0 / alpha);
}

// log of the standard normal upper tail at x >= 0
double log_normal_upper(double x) {
    const double v = 0.5 * std::erfc(x / std::numbers::sqrt2);
    if (v > 0.0) return std::log(v);
    // Mills-ratio asymptote; only reached for x beyond ~38
    return -0.5 * x * x - std::log(x * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace

ScalarLaw ScalarLaw::symmetric_weibull(double alpha, double scale) {
    ScalarLaw l{ScalarKind::SymmetricWeibull, alpha, scale, false};
    l.validate();
    return l;
}
ScalarLaw ScalarLaw::gaussian(double sigma) {
    ScalarLaw l{ScalarKind::Gaussian, sigma, 0.0, false};
    l.validate();
    return l;
}
ScalarLaw ScalarLaw::exponential(double rate, bool centered) {
    ScalarLaw l{ScalarKind::Exponential, rate, 0.0, centered};
    l.validate();
    return l;
}
ScalarLaw ScalarLaw::pareto(double shape, double scale) {
    ScalarLaw l{ScalarKind::Pareto, shape, scale, false};
    l.validate();
    return l;
}
ScalarLaw ScalarLaw::student_t(double dof) {
    ScalarLaw l{ScalarKind::StudentT, dof, 0.0, false};
    l.validate();
    return l;
}
ScalarLaw ScalarLaw::constant(double c) {
    ScalarLaw l{ScalarKind::Constant, c, 0.0, false};
    l.validate();
    return l;
}

void ScalarLaw::validate() const {
    auto pos = [](double v, const char* what) {
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
    };
    switch (kind) {
        case ScalarKind::SymmetricWeibull:
            pos(a, "Weibull alpha");
            pos(b, "Weibull scale");
            break;
        case ScalarKind::Gaussian:
            if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("Gaussian sigma must be >= 0");
            break;
        case ScalarKind::Exponential:
            pos(a, "Exponential rate");
            break;
        case ScalarKind::Pareto:
            pos(a, "Pareto shape");
            pos(b, "Pareto scale");
            break;
        case ScalarKind::StudentT:
            pos(a, "Student t dof");
            break;
        case ScalarKind::Constant:
            if (!std::isfinite(a)) throw std::invalid_argument("Constant must be finite");
            break;
    }
}

std::string ScalarLaw::describe() const {
    char buf[128];
    switch (kind) {
        case ScalarKind::SymmetricWeibull:
            std::snprintf(buf, sizeof buf, "weibull(alpha=%.17g,scale=%.17g)", a, b);
            break;
        case ScalarKind::Gaussian:
            std::snprintf(buf, sizeof buf, "gaussian(sigma=%.17g)", a);
            break;
        case ScalarKind::Exponential:
            std::snprintf(buf, sizeof buf, "exponential(rate=%.17g,centered=%d)", a, centered ? 1 : 0);
            break;
        case ScalarKind::Pareto:
            std::snprintf(buf, sizeof buf, "pareto(shape=%.17g,scale=%.17g)", a, b);
            break;
        case ScalarKind::StudentT:
            std::snprintf(buf, sizeof buf, "student_t(dof=%.17g)", a);
            break;
        case ScalarKind::Constant:
            std::snprintf(buf, sizeof buf, "constant(%.17g)", a);
            break;
    }
    return buf;
}

double ScalarLaw::mean() const {
    switch (kind) {
        case ScalarKind::Exponential:
            return centered ? 0.0 : 1.0 / a;
        case ScalarKind::Constant:
            return a;
        case ScalarKind::Pareto:
            return a > 1.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
        case ScalarKind::StudentT:
            return a > 1.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
        default:
            return 0.0;
    }
}

double ScalarLaw::second_moment() const {
    switch (kind) {
        case ScalarKind::SymmetricWeibull:
            return b * b * std::tgamma(1.0 + 2.0 / a);
        case ScalarKind::Gaussian:
            return a * a;
        case ScalarKind::Exponential:
            return (centered ? 1.0 : 2.0) / (a * a);
        case ScalarKind::Pareto:
            return a > 2.0 ? b * b * a / (a - 2.0) : kInf;
        case ScalarKind::StudentT:
            return a > 2.0 ? a / (a - 2.0) : kInf;
        case ScalarKind::Constant:
            return a * a;
    }
    return kInf;
}

std::optional<std::pair<double, double>> ScalarLaw::psi_norm() const {
    switch (kind) {
        case ScalarKind::SymmetricWeibull:
            // E exp(|Z|^a / eta^a) = 1 / (1 - (b/eta)^a)
            return std::make_pair(a, std::pow(2.0, 1.0 / a) * b);
        case ScalarKind::Gaussian:
            return std::make_pair(2.0, a * std::sqrt(8.0 / 3.0));
        case ScalarKind::Exponential:
            if (!centered) return std::make_pair(1.0, 2.0 / a);
            return std::nullopt;
        default:
            return std::nullopt;
    }
}

double ScalarLaw::from_normal(double z) const {
    const double az = std::fabs(z);
    const double sgn = z < 0.0 ? -1.0 : 1.0;
    switch (kind) {
        case ScalarKind::SymmetricWeibull: {
            // P(|X| > x) = 2 Phi(-|z|)
            const double e = -(std::log(2.0) + log_normal_upper(az));
            return sgn * b * weibull_magnitude(a, std::max(e, 0.0));
        }
        case ScalarKind::Gaussian:
            return a * z;
        case ScalarKind::Exponential: {
            const double shift = centered ? 1.0 / a : 0.0;
            // survival Phi(-z)
            double e;
            if (z >= 0.0)
                e = -log_normal_upper(z);
            else
                e = -std::log1p(-0.5 * std::erfc(az / std::numbers::sqrt2));
            return e / a - shift;
        }
        case ScalarKind::Pareto: {
            const double ls = std::log(2.0) + log_normal_upper(az);
            return sgn * b * std::exp(-ls / a);
        }
        case ScalarKind::StudentT: {
            boost::math::students_t dist(a);
            const double tail = 0.5 * std::erfc(az / std::numbers::sqrt2);
            if (tail <= 0.0) return sgn * kInf;
            return sgn * boost::math::quantile(boost::math::complement(dist, tail));
        }
        case ScalarKind::Constant:
            return a;
    }
    return 0.0;
}

double symmetric_weibull_from_uniform(double alpha, double scale, double u, bool positive) {
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("uniform must lie in (0,1)");
    const double m = scale * weibull_magnitude(alpha, -std::log(u));
    return positive ? m : -m;
}

double draw_scalar(const ScalarLaw& law, RngStream& rng) {
    switch (law.kind) {
        case ScalarKind::SymmetricWeibull: {
            const std::uint64_t u = rng.next_u64();
            const double m = law.b * weibull_magnitude(law.a, -std::log(open_uniform_from(u)));
            return (u & 1u) ? m : -m;
        }
        case ScalarKind::Gaussian:
            return law.a * rng.normal();
        case ScalarKind::Exponential:
            return rng.exponential() / law.a - (law.centered ? 1.0 / law.a : 0.0);
        case ScalarKind::Pareto: {
            const std::uint64_t u = rng.next_u64();
            const double m = law.b * std::pow(open_uniform_from(u), -1.0 / law.a);
            return (u & 1u) ? m : -m;
        }
        case ScalarKind::StudentT: {
            const double z = rng.normal();
            const double chi2 = 2.0 * rng.gamma(0.5 * law.a);
            return z / std::sqrt(chi2 / law.a);
        }
        case ScalarKind::Constant:
            return law.a;
    }
    return 0.0;
}

VectorLaw VectorLaw::iid(ScalarLaw law, Eigen::Index p) {
    VectorLaw v;
    v.kind = VectorKind::Iid;
    v.marginal = law;
    v.p = p;
    v.validate();
    return v;
}

VectorLaw VectorLaw::gaussian_copula(double rho, ScalarLaw law, Eigen::Index p) {
    VectorLaw v;
    v.kind = VectorKind::GaussianCopula;
    v.marginal = law;
    v.p = p;
    v.rho = rho;
    v.validate();
    return v;
}

VectorLaw VectorLaw::identical(ScalarLaw law, Eigen::Index p) {
    VectorLaw v;
    v.kind = VectorKind::Identical;
    v.marginal = law;
    v.p = p;
    v.validate();
    return v;
}

VectorLaw VectorLaw::linear_map(Eigen::MatrixXd factor, ScalarLaw law) {
    VectorLaw v;
    v.kind = VectorKind::LinearMap;
    v.marginal = law;
    v.p = factor.rows();
    v.factor = std::move(factor);
    v.validate();
    return v;
}

void VectorLaw::validate() const {
    marginal.validate();
    if (p < 1) throw std::invalid_argument("vector law dimension must be >= 1");
    if (kind == VectorKind::GaussianCopula && !(rho >= 0.0 && rho <= 1.0))
        throw std::invalid_argument("copula rho must lie in [0, 1]");
    if (kind == VectorKind::LinearMap) {
        if (factor.rows() != p || factor.cols() < 1)
            throw std::invalid_argument("linear map factor has mismatched dimensions");
        if (!factor.allFinite()) throw std::invalid_argument("linear map factor must be finite");
    }
}

std::string VectorLaw::describe() const {
    char buf[96];
    switch (kind) {
        case VectorKind::Iid:
            std::snprintf(buf, sizeof buf, "iid(p=%ld)", static_cast<long>(p));
            break;
        case VectorKind::GaussianCopula:
            std::snprintf(buf, sizeof buf, "gaussian_copula(p=%ld,rho=%.17g)", static_cast<long>(p), rho);
            break;
        case VectorKind::Identical:
            std::snprintf(buf, sizeof buf, "identical(p=%ld)", static_cast<long>(p));
            break;
        case VectorKind::LinearMap:
            std::snprintf(buf, sizeof buf, "linear_map(p=%ld,m=%ld)", static_cast<long>(p),
                          static_cast<long>(factor.cols()));
            break;
    }
    return std::string(buf) + ":" + marginal.describe();
}

Eigen::VectorXd VectorLaw::mean() const {
    const double mu = marginal.mean();
    if (kind == VectorKind::LinearMap) return factor * Eigen::VectorXd::Constant(factor.cols(), mu);
    return Eigen::VectorXd::Constant(p, mu);
}

GaussHermite gauss_hermite(int order) {
    if (order < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) {
        J(k, k - 1) = std::sqrt(static_cast<double>(k));
        J(k - 1, k) = J(k, k - 1);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    GaussHermite gh;
    gh.nodes = es.eigenvalues();
    gh.weights = es.eigenvectors().row(0).transpose().array().square();
    gh.weights /= gh.weights.sum();
    return gh;
}

Eigen::MatrixXd VectorLaw::population_gram() const {
    const double m2 = marginal.second_moment();
    const double mu = marginal.mean();
    switch (kind) {
        case VectorKind::Iid: {
            Eigen::MatrixXd G = Eigen::MatrixXd::Constant(p, p, mu * mu);
            G.diagonal().setConstant(m2);
            return G;
        }
        case VectorKind::Identical:
            return Eigen::MatrixXd::Constant(p, p, m2);
        case VectorKind::LinearMap: {
            Eigen::MatrixXd G = (m2 - mu * mu) * (factor * factor.transpose());
            const Eigen::VectorXd m = mean();
            G += m * m.transpose();
            return G;
        }
        case VectorKind::GaussianCopula: {
            double off;
            if (rho == 0.0) {
                off = mu * mu;
            } else if (rho == 1.0) {
                off = m2;
            } else {
                // X_j = F^{-1}(Phi(sqrt(rho) Z0 + sqrt(1-rho) W_j)); condition on Z0.
                static const GaussHermite gh = gauss_hermite(160);
                const double sr = std::sqrt(rho), sc = std::sqrt(1.0 - rho);
                off = 0.0;
                for (Eigen::Index i = 0; i < gh.nodes.size(); ++i) {
                    double g = 0.0;
                    for (Eigen::Index k = 0; k < gh.nodes.size(); ++k)
                        g += gh.weights(k) * marginal.from_normal(sr * gh.nodes(i) + sc * gh.nodes(k));
                    off += gh.weights(i) * g * g;
                }
            }
            Eigen::MatrixXd G = Eigen::MatrixXd::Constant(p, p, off);
            G.diagonal().setConstant(m2);
            return G;
        }
    }
    return {};
}

Eigen::MatrixXd VectorLaw::population_cov() const {
    const Eigen::VectorXd m = mean();
    return population_gram() - m * m.transpose();
}

Eigen::VectorXd VectorLaw::coordinate_variances() const { return population_cov().diagonal(); }

double VectorLaw::gamma_max() const { return population_gram().diagonal().maxCoeff(); }

std::optional<std::pair<double, double>> VectorLaw::marginal_psi_norm() const {
    if (kind == VectorKind::LinearMap) return std::nullopt;
    return marginal.psi_norm();
}

void VectorLaw::draw_row(RngStream& rng, double* out, Eigen::Index stride) const {
    switch (kind) {
        case VectorKind::Iid:
            for (Eigen::Index j = 0; j < p; ++j) out[j * stride] = draw_scalar(marginal, rng);
            break;
        case VectorKind::Identical: {
            const double v = draw_scalar(marginal, rng);
            for (Eigen::Index j = 0; j < p; ++j) out[j * stride] = v;
            break;
        }
        case VectorKind::GaussianCopula: {
            const double sr = std::sqrt(rho), sc = std::sqrt(1.0 - rho);
            const double z0 = rng.normal();
            for (Eigen::Index j = 0; j < p; ++j) out[j * stride] = marginal.from_normal(sr * z0 + sc * rng.normal());
            break;
        }
        case VectorKind::LinearMap: {
            Eigen::VectorXd e(factor.cols());
            for (Eigen::Index k = 0; k < e.size(); ++k) e(k) = draw_scalar(marginal, rng);
            const Eigen::VectorXd x = factor * e;
            for (Eigen::Index j = 0; j < p; ++j) out[j * stride] = x(j);
            break;
        }
    }
}

DataMatrix draw_matrix(const VectorLaw& law, Eigen::Index n, const RngStream& rng) {
    if (n < 1) throw std::invalid_argument("draw_matrix: n must be >= 1");
    law.validate();
    DataMatrix D{Eigen::MatrixXd(n, law.p), law};
    for (Eigen::Index i = 0; i < n; ++i) {
        RngStream r = rng.child(static_cast<std::uint64_t>(i));
        law.draw_row(r, D.values.data() + i, n);
    }
    return D;
}

Eigen::VectorXd population_beta0(const VectorLaw& design, const ResponseMap& response, Eigen::Index oracle_n,
                                 const RngStream& rng) {
    if (oracle_n < 1) throw std::invalid_argument("population_beta0: oracle_n must be >= 1");
    design.validate();
    const Eigen::Index p = design.p;
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(p, p);
    Eigen::VectorXd h = Eigen::VectorXd::Zero(p);
    constexpr Eigen::Index kChunk = 4096;
    Eigen::MatrixXd block(kChunk, p);
    Eigen::VectorXd f(kChunk);
    for (Eigen::Index start = 0; start < oracle_n; start += kChunk) {
        const Eigen::Index m = std::min(kChunk, oracle_n - start);
        for (Eigen::Index i = 0; i < m; ++i) {
            RngStream r = rng.child(static_cast<std::uint64_t>(start + i));
            design.draw_row(r, block.data() + i, kChunk);
            f(i) = response(block.row(i).transpose());
        }
        G.selfadjointView<Eigen::Lower>().rankUpdate(block.topRows(m).transpose());
        h.noalias() += block.topRows(m).transpose() * f.head(m);
    }
    G = G.selfadjointView<Eigen::Lower>();
    G /= static_cast<double>(oracle_n);
    h /= static_cast<double>(oracle_n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().cwiseAbs().maxCoeff();
    if (!(lo > 0.0) || hi / lo > 1e12) throw SingularityError("population_beta0: oracle gram is near-singular");
    return G.ldlt().solve(h);
}

RegressionData make_regression(const VectorLaw& design, const Eigen::VectorXd& beta0, const ScalarLaw& noise,
                               Eigen::Index n, const ResponseMap& misspec, const RngStream& rng,
                               Eigen::Index oracle_n) {
    noise.validate();
    RegressionData out{draw_matrix(design, n, rng.child(0)), Eigen::VectorXd(n), Eigen::VectorXd(n), beta0};
    RngStream nr = rng.child(1);
    for (Eigen::Index i = 0; i < n; ++i) out.eps(i) = draw_scalar(noise, nr);
    if (misspec) {
        for (Eigen::Index i = 0; i < n; ++i) out.y(i) = misspec(out.X.values.row(i).transpose()) + out.eps(i);
        out.beta0 = population_beta0(design, misspec, oracle_n, rng.child(2));
    } else {
        if (beta0.size() != design.p) throw std::invalid_argument("make_regression: beta0 length must equal p");
        out.y.noalias() = out.X.values * beta0;
        out.y += out.eps;
    }
    return out;
}

namespace {
std::uint64_t to_le(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(v);
    return v;
}
}  // namespace

void write_matrix_binary(const Eigen::MatrixXd& values, std::uint64_t seed, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path);
    for (Eigen::Index i = 0; i < values.rows(); ++i)
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            const std::uint64_t w = to_le(std::bit_cast<std::uint64_t>(values(i, j)));
            out.write(reinterpret_cast<const char*>(&w), sizeof w);
        }
    std::ofstream meta(path + ".meta");
    if (!meta) throw IoError("cannot open " + path + ".meta");
    meta << values.rows() << ' ' << values.cols() << ' ' << seed << '\n';
    if (!out || !meta) throw IoError("write failed for " + path);
}

Eigen::MatrixXd read_matrix_binary(const std::string& path, std::uint64_t* seed_out) {
    std::ifstream meta(path + ".meta");
    if (!meta) throw IoError("cannot open " + path + ".meta");
    long n = 0, p = 0;
    std::uint64_t seed = 0;
    if (!(meta >> n >> p >> seed) || n < 0 || p < 0) throw IoError("malformed sidecar for " + path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    Eigen::MatrixXd M(n, p);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < p; ++j) {
            std::uint64_t w;
            if (!in.read(reinterpret_cast<char*>(&w), sizeof w)) throw IoError("truncated matrix file " + path);
            M(i, j) = std::bit_cast<double>(to_le(w));
        }
    if (seed_out) *seed_out = seed;
    return M;
}

}  // namespace subweibull
