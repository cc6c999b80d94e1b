#include "subweibull/cli/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <thread>

#include "subweibull/cli/svg.hpp"
#include "subweibull/covariance.hpp"
#include "subweibull/errors.hpp"
#include "subweibull/hdclt.hpp"
#include "subweibull/lasso.hpp"
#include "subweibull/orlicz.hpp"
#include "subweibull/parallel.hpp"
#include "subweibull/samplers.hpp"
#include "subweibull/stats.hpp"
#include "subweibull/tailbounds.hpp"

namespace subweibull::cli {

const InvariantTally* ExperimentResult::first_violation() const {
    for (const auto& t : invariants)
        if (t.violated > 0) return &t;
    return nullptr;
}

const InvariantTally* ExperimentResult::invariant(const std::string& name) const {
    for (const auto& t : invariants)
        if (t.name == name) return &t;
    return nullptr;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Row = std::vector<Cell>;

struct Check {
    std::string name;
    bool ok;
    std::string detail;
};

// Output of one (grid point, replication) task.
struct TaskOut {
    std::vector<Row> rows;
    std::vector<Check> checks;
    std::vector<double> metrics;  // experiment-specific values kept for the summary
};

struct Axis {
    std::string name;
    std::vector<double> values;
};

std::vector<std::vector<double>> cartesian(const std::vector<Axis>& axes) {
    std::vector<std::vector<double>> out{{}};
    for (const auto& a : axes) {
        std::vector<std::vector<double>> next;
        for (const auto& prefix : out)
            for (double v : a.values) {
                auto p = prefix;
                p.push_back(v);
                next.push_back(std::move(p));
            }
        out = std::move(next);
    }
    return out;
}

long as_count(double v, const std::string& name) {
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e12)
        throw ConfigError(name + ": expected a positive integer, got " + format_double(v));
    return static_cast<long>(v);
}

Cell I(long long v) { return Cell{v}; }
Cell D(double v) { return Cell{v}; }
Cell S(std::string v) { return Cell{std::move(v)}; }

// Runs reps tasks per grid point across workers; collects in grid order.
std::vector<std::vector<TaskOut>> run_tasks(std::size_t points, long reps, unsigned workers,
                                            const std::function<TaskOut(std::size_t, long)>& task) {
    std::vector<TaskOut> flat(points * static_cast<std::size_t>(reps));
    parallel_for(flat.size(), workers, [&](std::size_t i) {
        flat[i] = task(i / static_cast<std::size_t>(reps), static_cast<long>(i % static_cast<std::size_t>(reps)));
    });
    std::vector<std::vector<TaskOut>> out(points);
    for (std::size_t i = 0; i < flat.size(); ++i) out[i / static_cast<std::size_t>(reps)].push_back(std::move(flat[i]));
    return out;
}

void tally(ExperimentResult& res, const std::vector<std::vector<TaskOut>>& tasks,
           const std::vector<std::string>& names) {
    std::map<std::string, InvariantTally> by_name;
    for (const auto& n : names) by_name[n].name = n;
    for (const auto& point : tasks)
        for (const auto& t : point)
            for (const auto& c : t.checks) {
                auto& tl = by_name[c.name];
                tl.name = c.name;
                ++tl.checked;
                if (!c.ok) {
                    if (tl.violated == 0) tl.first_violation = c.detail;
                    ++tl.violated;
                }
            }
    for (const auto& n : names) res.invariants.push_back(by_name[n]);
    for (auto& [n, t] : by_name)
        if (std::find(names.begin(), names.end(), n) == names.end()) res.invariants.push_back(t);
}

void add_rows(CsvTable& table, const std::vector<std::vector<TaskOut>>& tasks) {
    for (const auto& point : tasks)
        for (const auto& t : point)
            for (const auto& r : t.rows) table.add_row(r);
}

std::vector<double> metric_of(const std::vector<TaskOut>& point, std::size_t idx) {
    std::vector<double> v;
    for (const auto& t : point)
        if (idx < t.metrics.size() && std::isfinite(t.metrics[idx])) v.push_back(t.metrics[idx]);
    return v;
}

double median_or_nan(std::vector<double> v) { return v.empty() ? kNaN : median(std::move(v)); }

// Appends <metric>_slope and <metric>_slope_se fitted against x within each
// series (rows sharing the group columns); NaN when a series has < 2 points.
void add_slope_columns(CsvTable& summary, const std::string& x, const std::string& metric,
                       const std::vector<std::string>& groups) {
    const auto xs = summary.numeric_column(x);
    const auto ys = summary.numeric_column(metric);
    bool positive = !xs.empty();
    for (std::size_t i = 0; i < xs.size(); ++i) positive = positive && xs[i] > 0 && ys[i] > 0;
    std::map<std::string, std::pair<double, double>> fits;
    if (positive)
        for (const auto& s : plot_series(summary, x, metric, true, groups))
            fits[s.label] = s.x.size() >= 2 ? std::make_pair(s.slope, s.slope_se) : std::make_pair(kNaN, kNaN);
    std::vector<std::size_t> gi;
    for (const auto& g : groups) gi.push_back(summary.column_index(g));
    // keep the constants column last
    const std::size_t cpos = summary.columns.size() - 1;
    summary.columns.insert(summary.columns.begin() + cpos, {metric + "_slope", metric + "_slope_se"});
    for (auto& r : summary.rows) {
        std::string label;
        for (std::size_t s = 0; s < gi.size(); ++s) label += (s ? " " : "") + groups[s] + "=" + format_cell(r[gi[s]]);
        const auto it = fits.find(label);
        const auto f = it == fits.end() ? std::make_pair(kNaN, kNaN) : it->second;
        r.insert(r.begin() + cpos, {D(f.first), D(f.second)});
    }
}

std::vector<std::string> scanned_axes(const std::vector<Axis>& axes) {
    std::vector<std::string> out;
    for (const auto& a : axes)
        if (a.values.size() > 1) out.push_back(a.name);
    return out;
}

std::vector<std::string> others(const std::vector<std::string>& all, const std::string& skip) {
    std::vector<std::string> out;
    for (const auto& s : all)
        if (s != skip) out.push_back(s);
    return out;
}

// ---- laws -------------------------------------------------------------------

struct LawChoice {
    std::string name;
    ScalarLaw marginal;
    double alpha;  // tail order the experiment attributes to the marginal
};

LawChoice marginal_for(const ExperimentConfig& cfg, double alpha, const std::string& fallback = "weibull") {
    const std::string law = cfg.text("law", fallback);
    if (law == "weibull" || law == "copula") {
        const double scale = cfg.has("scale") ? cfg.number("scale", 1.0) : 1.0 / std::sqrt(std::tgamma(1.0 + 2.0 / alpha));
        return {law, ScalarLaw::symmetric_weibull(alpha, scale), alpha};
    }
    if (law == "gaussian") return {law, ScalarLaw::gaussian(cfg.number("scale", 1.0)), 2.0};
    if (law == "exponential") return {law, ScalarLaw::exponential(1.0 / cfg.number("scale", 1.0), true), 1.0};
    throw ConfigError("law: unknown law '" + law + "' (weibull, copula, gaussian, exponential)");
}

VectorLaw vector_for(const ExperimentConfig& cfg, const LawChoice& lc, long p) {
    if (lc.name == "copula") {
        const double rho = cfg.number("rho", 0.5);
        if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("rho: must lie in [0, 1]");
        return VectorLaw::gaussian_copula(rho, lc.marginal, p);
    }
    return VectorLaw::iid(lc.marginal, p);
}

// E|X|^r for the supported marginals, when finite and known in closed form.
std::optional<double> abs_moment(const ScalarLaw& m, double r) {
    switch (m.kind) {
        case ScalarKind::SymmetricWeibull:
            return std::pow(m.b, r) * std::tgamma(1.0 + r / m.a);
        case ScalarKind::Gaussian:
            return std::pow(m.a, r) * std::pow(2.0, r / 2.0) * std::tgamma((r + 1.0) / 2.0) / std::sqrt(std::numbers::pi);
        case ScalarKind::Exponential:
            if (m.centered && r == 3.0) return (12.0 / std::numbers::e - 2.0) / std::pow(m.a, 3.0);
            if (m.centered && r == 4.0) return 9.0 / std::pow(m.a, 4.0);
            if (m.centered && r == 2.0) return 1.0 / (m.a * m.a);
            if (!m.centered) return std::tgamma(1.0 + r) / std::pow(m.a, r);
            return std::nullopt;
        case ScalarKind::Pareto:
            if (r < m.a) return std::pow(m.b, r) * m.a / (m.a - r);
            return std::nullopt;
        default:
            return std::nullopt;
    }
}

// psi_alpha norm of the marginal: closed form when the orders match, else a plug-in estimate.
double marginal_psi(const ScalarLaw& m, double alpha, const RngStream& rng, long pilot = 200000) {
    if (const auto pn = m.psi_norm(); pn && std::fabs(pn->first - alpha) < 1e-15) return pn->second;
    RngStream s = rng;
    std::vector<double> x(static_cast<std::size_t>(pilot));
    for (auto& v : x) v = draw_scalar(m, s);
    return empirical_norm(x, OrliczSpec::psi(alpha)).value;
}

// Analytic Var((theta'X)^2) sup over k-sparse unit theta, iid mean-zero coordinates.
double upsilon_iid(const ScalarLaw& m, int k) {
    const auto m4 = abs_moment(m, 4.0);
    if (!m4) return kNaN;
    const double s2 = m.second_moment();
    const double kurt = *m4 / (s2 * s2);
    const double max_sum4 = kurt >= 3.0 ? 1.0 : 1.0 / k;
    return s2 * s2 * ((kurt - 3.0) * max_sum4 + 2.0);
}

std::vector<int> random_support(int p, int k, RngStream rng) {
    std::vector<int> idx(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) idx[j] = j;
    for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(p - i));
        std::swap(idx[i], idx[j]);
    }
    std::vector<int> S(idx.begin(), idx.begin() + k);
    std::sort(S.begin(), S.end());
    return S;
}

// Even size m = 2*ceil(k/2): RIP at this size certifies the RSC inequality with 54/k.
int certified_size(int k) { return 2 * ((k + 1) / 2); }

// Certified upper bound on RIP_n(m): exact when enumerable, else m * max-norm error.
double certified_rip(const Eigen::MatrixXd& D, int m, std::uint64_t cap) {
    const int p = static_cast<int>(D.rows());
    m = std::min(m, p);
    if (binomial_coefficient(p, m) <= static_cast<double>(cap)) return rip_exact(D, m, cap).value;
    return m * D.cwiseAbs().maxCoeff();
}

struct ReOutcome {
    ReReport report;
    double oracle = kNaN;
};

// RE verdict for sigma_hat against sigma, with the cone oracle run only when satisfied.
// lambda_min is the smallest eigenvalue of the population matrix.
ReOutcome re_with_oracle(double lambda_min, const Eigen::MatrixXd& sigma_hat, double xi, int k, double delta,
                         int trials, const RngStream& rng, std::vector<Check>& checks, const std::string& where) {
    ReOutcome o{re_verdict(lambda_min, xi, k)};
    if (o.report.satisfied) {
        const auto S = random_support(static_cast<int>(sigma_hat.rows()), k, rng.child(0));
        o.oracle = cone_min_oracle(sigma_hat, S, delta, trials, rng.child(1));
        checks.push_back({"re_not_falsified", o.oracle >= o.report.gamma_n,
                          where + ": cone oracle " + format_double(o.oracle) + " < gamma " +
                              format_double(o.report.gamma_n)});
    }
    return o;
}

// Symmetric perturbation with max-norm chosen so the certified xi passes the RE check.
Eigen::MatrixXd synthetic_perturbation(Eigen::Index p, double lambda_min, int k, RngStream rng, double* xi_out) {
    Eigen::MatrixXd E(p, p);
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index i = 0; i <= j; ++i) E(i, j) = E(j, i) = 2.0 * rng.uniform() - 1.0;
    const int m = certified_size(k);
    const double target = 0.9 * lambda_min / (kReFactor * m);
    E *= target / E.cwiseAbs().maxCoeff();
    *xi_out = m * E.cwiseAbs().maxCoeff();
    return E;
}

// ---- norms --------------------------------------------------------------------

ExperimentResult exp_norms(const ExperimentConfig& cfg, unsigned workers) {
    const std::vector<Axis> axes = {{"alpha", cfg.list("alpha", {0.5, 1.0, 2.0})}, {"n", cfg.list("n", {1000, 10000})}};
    const long reps = as_count(cfg.number("reps", 20), "reps");
    const double L = cfg.number("gbo_l", 1.0), r_max = cfg.number("r_max", 200.0), step = cfg.number("grid_step", 0.5);
    const double tol = cfg.number("norm_tol", kNormTol);
    const auto grid = cartesian(axes);
    const std::string cs = cfg.constants.to_string();
    for (const auto& g : grid) marginal_for(cfg, g[0]);

    auto tasks = run_tasks(grid.size(), reps, workers, [&](std::size_t gi, long r) {
        const double alpha = grid[gi][0];
        const long n = as_count(grid[gi][1], "n");
        const auto lc = marginal_for(cfg, alpha);
        RngStream s = RngStream(cfg.seed, gi).child(static_cast<std::uint64_t>(r));
        std::vector<double> x(static_cast<std::size_t>(n));
        for (auto& v : x) v = draw_scalar(lc.marginal, s);
        const auto psi = empirical_norm(x, OrliczSpec::psi(alpha), tol);
        const auto gbo = empirical_norm(x, OrliczSpec::gbo(alpha, L), tol);
        const auto phi = empirical_norm(x, OrliczSpec::gbo_phi(alpha, L), tol);
        const double mom = moment_growth_norm(x, alpha, r_max, step);
        const double gmom = gbo_moment_norm(x, alpha, L, r_max, step);
        const bool conv = moment_grid_converged(x, alpha, L, r_max, step, 1e-3, true);
        const auto pn = lc.marginal.psi_norm();
        const double truth = pn && std::fabs(pn->first - alpha) < 1e-15 ? pn->second : kNaN;
        TaskOut out;
        const std::string where = "alpha=" + format_double(alpha) + " n=" + std::to_string(n) + " rep=" + std::to_string(r);
        const double slack = 2.0 * (gbo.tolerance + phi.tolerance);
        out.checks.push_back({"gbo_phi_sandwich", gbo.value <= phi.value + slack && phi.value <= 2.0 * gbo.value + slack,
                              where + ": gbo " + format_double(gbo.value) + " phi " + format_double(phi.value)});
        if (conv) {
            const double lo = moment_lower_c(alpha) * gmom, hi = moment_upper_c(alpha) * gmom;
            out.checks.push_back({"moment_sandwich", lo <= gbo.value + 2.0 * gbo.tolerance && gbo.value <= hi + 2.0 * gbo.tolerance,
                                  where + ": gbo " + format_double(gbo.value) + " outside [" + format_double(lo) + ", " +
                                      format_double(hi) + "]"});
        }
        out.rows.push_back({D(alpha), I(n), I(r), S(lc.marginal.describe()), D(psi.value), D(psi.tolerance), D(truth),
                            D(gbo.value), D(phi.value), D(mom), D(gmom), I(conv ? 1 : 0), S(cs)});
        out.metrics = {psi.value, mom, truth};
        return out;
    });

    ExperimentResult res;
    res.experiment = "norms";
    res.results = {"norms-results/1",
                   {"alpha", "n", "rep", "law", "psi_norm", "psi_tol", "psi_true", "gbo_norm", "phi_norm",
                    "moment_norm", "gbo_moment_norm", "grid_converged", "constants"},
                   {}};
    add_rows(res.results, tasks);
    res.summary = {"norms-summary/1",
                   {"alpha", "n", "reps", "median_psi_norm", "psi_true", "rel_error", "median_moment_norm", "constants"},
                   {}};
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const double med = median_or_nan(metric_of(tasks[gi], 0));
        const double truth = tasks[gi].empty() ? kNaN : tasks[gi][0].metrics[2];
        res.summary.add_row({D(grid[gi][0]), I(as_count(grid[gi][1], "n")), I(reps), D(med), D(truth),
                             D(std::fabs(med - truth) / truth), D(median_or_nan(metric_of(tasks[gi], 1))), S(cs)});
    }
    res.metric = "median_psi_norm";
    res.scanned = scanned_axes(axes);
    tally(res, tasks, {"gbo_phi_sandwich", "moment_sandwich"});
    return res;
}

// ---- tailcheck ----------------------------------------------------------------

ExperimentResult exp_tailcheck(const ExperimentConfig& cfg, unsigned workers) {
    const std::vector<Axis> axes = {{"alpha", cfg.list("alpha", {0.5, 1.0, 2.0})},
                                    {"n", cfg.list("n", {100, 1000})},
                                    {"q", cfg.list("q", {10})}};
    const std::vector<double> ts = cfg.list("t", {1.0, 2.0, 4.0});
    const long reps = as_count(cfg.number("reps", 2000), "reps");
    const long pilot = as_count(cfg.number("pilot", 100000), "pilot");
    const auto grid = cartesian(axes);
    const std::string cs = cfg.constants.to_string();

    // Gamma and K per grid point; K from a pilot sample on its own substream.
    // tail_gamma replaces the analytic Gamma (a misspecified variance proxy).
    const double gamma_override = cfg.number("tail_gamma", -1.0);
    std::vector<double> gammas(grid.size()), Ks(grid.size());
    parallel_for(grid.size(), workers, [&](std::size_t gi) {
        const auto lc = marginal_for(cfg, grid[gi][0]);
        gammas[gi] = gamma_override > 0.0 ? gamma_override : lc.marginal.second_moment();
        RngStream s(cfg.seed, gi, 1);
        std::vector<double> x(static_cast<std::size_t>(pilot));
        for (auto& v : x) v = draw_scalar(lc.marginal, s);
        Ks[gi] = 1.1 * empirical_norm(x, OrliczSpec::psi(grid[gi][0])).value;
    });

    auto tasks = run_tasks(grid.size(), reps, workers, [&](std::size_t gi, long r) {
        const long n = as_count(grid[gi][1], "n"), q = as_count(grid[gi][2], "q");
        const auto lc = marginal_for(cfg, grid[gi][0]);
        const auto W = draw_matrix(VectorLaw::iid(lc.marginal, q), n, RngStream(cfg.seed, gi).child(r));
        TaskOut out;
        out.metrics = {(W.values.colwise().sum() / static_cast<double>(n)).cwiseAbs().maxCoeff()};
        return out;
    });

    ExperimentResult res;
    res.experiment = "tailcheck";
    res.results = {"tailcheck-results/1",
                   {"alpha", "n", "q", "t", "law", "reps", "gamma", "K", "threshold", "bound", "frequency", "mc_se",
                    "violation", "constants"},
                   {}};
    long violations = 0, points = 0;
    double worst = -INFINITY;
    InvariantTally inv{"tail_domination", 0, 0, ""};
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const auto vals = metric_of(tasks[gi], 0);
        const double n = grid[gi][1], q = grid[gi][2];
        for (double t : ts) {
            const auto th = max_average_threshold(gammas[gi], Ks[gi], n, q, grid[gi][0], t, cfg.constants);
            double hits = 0;
            for (double v : vals) hits += v >= th.threshold ? 1.0 : 0.0;
            const double freq = hits / static_cast<double>(vals.size());
            const double allowed = th.prob_bound + 3.0 * binomial_se(th.prob_bound, static_cast<double>(reps));
            const bool bad = freq > allowed;
            ++points;
            ++inv.checked;
            worst = std::max(worst, freq - th.prob_bound);
            if (bad) {
                if (inv.violated == 0)
                    inv.first_violation = "alpha=" + format_double(grid[gi][0]) + " n=" + format_double(n) + " q=" +
                                          format_double(q) + " t=" + format_double(t) + ": frequency " +
                                          format_double(freq) + " > " + format_double(allowed);
                ++inv.violated;
                ++violations;
            }
            res.results.add_row({D(grid[gi][0]), I(static_cast<long long>(n)), I(static_cast<long long>(q)), D(t),
                                 S(marginal_for(cfg, grid[gi][0]).marginal.describe()), I(reps), D(gammas[gi]),
                                 D(Ks[gi]), D(th.threshold), D(th.prob_bound), D(freq),
                                 D(binomial_se(freq, static_cast<double>(reps))), I(bad ? 1 : 0), S(cs)});
        }
    }
    res.summary = {"tailcheck-summary/1", {"grid_points", "reps", "violations", "max_excess", "constants"}, {}};
    res.summary.add_row({I(points), I(reps), I(violations), D(worst), S(cs)});
    res.invariants.push_back(inv);
    // plots come from the per-point table here
    res.metric = "frequency";
    auto sc = scanned_axes(axes);
    if (ts.size() > 1) sc.push_back("t");
    res.scanned = sc;
    return res;
}

// ---- covariance ---------------------------------------------------------------

ExperimentResult exp_covariance(const ExperimentConfig& cfg, unsigned workers) {
    const std::vector<Axis> axes = {{"alpha", cfg.list("alpha", {1.0})},
                                    {"p", cfg.list("p", {50})},
                                    {"n", cfg.list("n", {250, 500, 1000, 2000, 4000})}};
    const long reps = as_count(cfg.number("reps", 200), "reps");
    const double t = cfg.number("t", 3.0);
    const int k = static_cast<int>(as_count(cfg.number("k", 2), "k"));
    const int trials = static_cast<int>(as_count(cfg.number("trials", 10000), "trials"));
    const double delta = cfg.number("delta", 3.0);
    const bool synthetic = cfg.number("synthetic", 1) != 0.0;
    const auto grid = cartesian(axes);
    const std::string cs = cfg.constants.to_string();

    struct PointLaw {
        VectorLaw law;
        Eigen::MatrixXd gram, cov;
        Eigen::VectorXd mu;
        double a_np = kNaN, k_np = kNaN, lambda_min = kNaN;
    };
    std::vector<PointLaw> laws(grid.size());
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const double alpha = grid[gi][0];
        const long p = as_count(grid[gi][1], "p");
        if (k > p) throw ConfigError("k: must not exceed p");
        const auto lc = marginal_for(cfg, alpha);
        auto& pl = laws[gi];
        pl.law = vector_for(cfg, lc, p);
        pl.gram = pl.law.population_gram();
        pl.lambda_min = min_eigenvalue_sym(pl.gram);
        pl.cov = pl.law.population_cov();
        pl.mu = pl.law.mean();
        if (pl.law.kind == VectorKind::Iid) {
            if (const auto m4 = abs_moment(lc.marginal, 4.0)) {
                const double s2 = lc.marginal.second_moment();
                pl.a_np = std::sqrt(std::max(*m4 - s2 * s2, s2 * s2));
            }
        }
        pl.k_np = marginal_psi(lc.marginal, alpha, RngStream(cfg.seed, gi, 1));
    }

    auto tasks = run_tasks(grid.size(), reps, workers, [&](std::size_t gi, long r) {
        const auto& pl = laws[gi];
        const long n = as_count(grid[gi][2], "n");
        const RngStream base = RngStream(cfg.seed, gi).child(r);
        const auto X = draw_matrix(pl.law, n, base.child(0));
        const Eigen::MatrixXd G = gram(X), C = centered_cov(X);
        const double dn = max_elementwise_error(G, pl.gram), dstar = max_elementwise_error(C, pl.cov);
        TaskOut out;
        const std::string where = "alpha=" + format_double(grid[gi][0]) + " p=" + format_double(grid[gi][1]) +
                                  " n=" + std::to_string(n) + " rep=" + std::to_string(r);
        // centered-error decomposition
        const Eigen::MatrixXd Xc = X.values.rowwise() - pl.mu.transpose();
        const Eigen::VectorXd xbar = X.values.colwise().mean().transpose() - pl.mu;
        const double rhs = max_elementwise_error(gram(Xc), pl.cov) + std::pow(xbar.cwiseAbs().maxCoeff(), 2);
        out.checks.push_back({"centered_decomposition", dstar <= rhs * (1.0 + 1e-10) + 1e-14,
                              where + ": " + format_double(dstar) + " > " + format_double(rhs)});
        // thresholding at any lambda above the observed error drops every true zero
        const double lam = dstar * (1.0 + 1e-9) + std::numeric_limits<double>::min();
        const Eigen::MatrixXd T = hard_threshold(C, lam);
        bool kept_zero = false;
        for (Eigen::Index j = 0; j < T.cols() && !kept_zero; ++j)
            for (Eigen::Index i = 0; i <= j; ++i)
                if (pl.cov(i, j) == 0.0 && T(i, j) != 0.0) {
                    kept_zero = true;
                    break;
                }
        out.checks.push_back({"threshold_support", !kept_zero, where + ": kept an entry whose true value is zero"});
        // RE from the certified bound m * Delta_n >= RIP_n(m)
        const int m = certified_size(k);
        const double xi = m * dn;
        auto re = re_with_oracle(pl.lambda_min, G, xi, k, delta, trials, base.child(1), out.checks, where);
        double syn_oracle = kNaN, syn_gamma = kNaN;
        long syn_sat = 0;
        if (synthetic && r == 0) {
            double sxi = 0.0;
            const Eigen::MatrixXd E = synthetic_perturbation(pl.gram.rows(), pl.lambda_min, k, base.child(2), &sxi);
            auto so = re_with_oracle(pl.lambda_min, pl.gram + E, sxi, k, delta, trials, base.child(3), out.checks,
                                     where + " synthetic");
            syn_oracle = so.oracle;
            syn_gamma = so.report.gamma_n;
            syn_sat = so.report.satisfied ? 1 : 0;
        }
        const double thr = std::isfinite(pl.a_np)
                               ? delta_bound(pl.a_np, pl.k_np, n, grid[gi][1], grid[gi][0], t, cfg.constants, false).threshold
                               : kNaN;
        const double thr_c = std::isfinite(pl.a_np)
                                 ? delta_bound(pl.a_np, pl.k_np, n, grid[gi][1], grid[gi][0], t, cfg.constants, true).threshold
                                 : kNaN;
        out.rows.push_back({D(grid[gi][0]), I(as_count(grid[gi][1], "p")), I(n), I(r), D(dn), D(dstar), D(thr), D(thr_c),
                            D(xi), I(re.report.satisfied ? 1 : 0), D(re.report.gamma_n), D(re.oracle), I(syn_sat),
                            D(syn_gamma), D(syn_oracle), S(cs)});
        out.metrics = {dn, dstar, thr, thr_c, re.report.satisfied ? 1.0 : 0.0};
        return out;
    });

    ExperimentResult res;
    res.experiment = "covariance";
    res.results = {"covariance-results/1",
                   {"alpha", "p", "n", "rep", "delta_n", "delta_n_star", "delta_threshold", "delta_star_threshold",
                    "xi_certified", "re_satisfied", "gamma_n", "cone_oracle_min", "synthetic_re_satisfied",
                    "synthetic_gamma_n", "synthetic_cone_oracle_min", "constants"},
                   {}};
    add_rows(res.results, tasks);
    res.summary = {"covariance-summary/1",
                   {"alpha", "p", "n", "reps", "median_delta_n", "median_delta_n_star", "delta_threshold",
                    "exceed_rate", "re_satisfied_count", "constants"},
                   {}};
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const auto dn = metric_of(tasks[gi], 0);
        const double thr = tasks[gi][0].metrics[2];
        double exceed = 0, sat = 0;
        for (const auto& tk : tasks[gi]) {
            exceed += tk.metrics[0] > thr ? 1 : 0;
            sat += tk.metrics[4];
        }
        res.summary.add_row({D(grid[gi][0]), I(as_count(grid[gi][1], "p")), I(as_count(grid[gi][2], "n")), I(reps),
                             D(median_or_nan(dn)), D(median_or_nan(metric_of(tasks[gi], 1))), D(thr),
                             D(std::isfinite(thr) ? exceed / reps : kNaN), I(static_cast<long long>(sat)), S(cs)});
    }
    add_slope_columns(res.summary, "n", "median_delta_n", others(scanned_axes(axes), "n"));
    res.metric = "median_delta_n";
    res.scanned = scanned_axes(axes);
    res.rate_axes = {"n", "p"};
    tally(res, tasks, {"centered_decomposition", "threshold_support", "re_not_falsified"});
    return res;
}

// ---- rip ----------------------------------------------------------------------

ExperimentResult exp_rip(const ExperimentConfig& cfg, unsigned workers) {
    const std::vector<Axis> axes = {{"alpha", cfg.list("alpha", {1.0})},
                                    {"p", cfg.list("p", {30})},
                                    {"k", cfg.list("k", {2})},
                                    {"n", cfg.list("n", {500, 1000, 2000, 4000})}};
    const long reps = as_count(cfg.number("reps", 100), "reps");
    const auto cap = static_cast<std::uint64_t>(cfg.number("cap", static_cast<double>(kDefaultEnumerationCap)));
    const int trials = static_cast<int>(as_count(cfg.number("trials", 10000), "trials"));
    const double delta = cfg.number("delta", 3.0);
    const auto grid = cartesian(axes);
    const std::string cs = cfg.constants.to_string();

    std::vector<VectorLaw> laws;
    std::vector<double> kn(grid.size()), ups(grid.size());
    std::vector<QuarterNet> nets;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const long p = as_count(grid[gi][1], "p");
        const int k = static_cast<int>(as_count(grid[gi][2], "k"));
        if (k > p) throw ConfigError("k: must not exceed p");
        const auto lc = marginal_for(cfg, grid[gi][0]);
        laws.push_back(vector_for(cfg, lc, p));
        kn[gi] = marginal_psi(lc.marginal, grid[gi][0], RngStream(cfg.seed, gi, 1));
        ups[gi] = laws.back().kind == VectorKind::Iid ? upsilon_iid(lc.marginal, k) : kNaN;
        nets.push_back(quarter_net(k, static_cast<int>(p), cap, RngStream(cfg.seed, gi, 2)));
    }

    // population Gram and its smallest eigenvalue, once per grid point
    std::vector<Eigen::MatrixXd> sigs;
    std::vector<double> lmins;
    for (const auto& l : laws) {
        sigs.push_back(l.population_gram());
        lmins.push_back(min_eigenvalue_sym(sigs.back()));
    }

    auto tasks = run_tasks(grid.size(), reps, workers, [&](std::size_t gi, long r) {
        const long p = as_count(grid[gi][1], "p"), n = as_count(grid[gi][3], "n");
        const int k = static_cast<int>(grid[gi][2]);
        const RngStream base = RngStream(cfg.seed, gi).child(r);
        const auto X = draw_matrix(laws[gi], n, base.child(0));
        const Eigen::MatrixXd& Sig = sigs[gi];
        const Eigen::MatrixXd G = gram(X);
        const Eigen::MatrixXd Dm = G - Sig;
        TaskOut out;
        const std::string where = "p=" + std::to_string(p) + " k=" + std::to_string(k) + " n=" + std::to_string(n) +
                                  " rep=" + std::to_string(r);
        const bool enumerable = binomial_coefficient(static_cast<int>(p), k) <= static_cast<double>(cap);
        const double exact = enumerable ? rip_exact(Dm, k, cap).value : kNaN;
        double exact_next = kNaN;
        if (enumerable && k < p && binomial_coefficient(static_cast<int>(p), k + 1) <= static_cast<double>(cap)) {
            exact_next = rip_exact(Dm, k + 1, cap).value;
            out.checks.push_back({"rip_monotone_k", exact <= exact_next * (1.0 + 1e-12) + 1e-15,
                                  where + ": RIP(k) " + format_double(exact) + " > RIP(k+1) " + format_double(exact_next)});
        }
        const auto net = rip_net(Dm, k, nets[gi]);
        if (enumerable && nets[gi].exhaustive)
            out.checks.push_back({"net_certification", exact <= 2.0 * net.value * (1.0 + 1e-12) + 1e-15,
                                  where + ": exact " + format_double(exact) + " > 2 * net " + format_double(net.value)});
        const double ups_net = upsilon_estimate(X.values, k, nets[gi]);
        const double ups_used = std::isfinite(ups[gi]) ? ups[gi] : ups_net;
        RsConvexityParams prm{ups_used, kn[gi], static_cast<double>(n), static_cast<double>(p), static_cast<double>(k),
                              grid[gi][0], cfg.constants.c_alpha_rip};
        const double xim = xi_bound(prm, false), xij = xi_bound(prm, true);
        const double xi_cert = certified_rip(Dm, certified_size(k), cap);
        const auto re = re_with_oracle(lmins[gi], G, xi_cert, k, delta, trials, base.child(1), out.checks, where);
        out.rows.push_back({D(grid[gi][0]), I(p), I(k), I(n), I(r), D(exact), D(exact_next), D(net.value),
                            I(static_cast<long long>(net.net_size)), I(nets[gi].exhaustive ? 1 : 0), D(ups[gi]),
                            D(ups_net), D(xim), D(xij), D(xi_cert), I(re.report.satisfied ? 1 : 0), D(re.report.gamma_n),
                            S(cs)});
        out.metrics = {std::isfinite(exact) ? exact : net.value, net.value, xim};
        return out;
    });

    ExperimentResult res;
    res.experiment = "rip";
    res.results = {"rip-results/1",
                   {"alpha", "p", "k", "n", "rep", "rip_exact", "rip_exact_k_plus_1", "rip_net", "net_size",
                    "net_exhaustive", "upsilon_analytic", "upsilon_net", "xi_marginal", "xi_joint", "xi_certified",
                    "re_satisfied", "gamma_n", "constants"},
                   {}};
    add_rows(res.results, tasks);
    res.summary = {"rip-summary/1",
                   {"alpha", "p", "k", "n", "reps", "median_rip", "median_rip_net", "median_xi_marginal", "constants"},
                   {}};
    for (std::size_t gi = 0; gi < grid.size(); ++gi)
        res.summary.add_row({D(grid[gi][0]), I(as_count(grid[gi][1], "p")), I(as_count(grid[gi][2], "k")),
                             I(as_count(grid[gi][3], "n")), I(reps), D(median_or_nan(metric_of(tasks[gi], 0))),
                             D(median_or_nan(metric_of(tasks[gi], 1))), D(median_or_nan(metric_of(tasks[gi], 2))),
                             S(cs)});
    add_slope_columns(res.summary, "n", "median_rip", others(scanned_axes(axes), "n"));
    res.metric = "median_rip";
    res.scanned = scanned_axes(axes);
    res.rate_axes = {"n"};
    tally(res, tasks, {"rip_monotone_k", "net_certification", "re_not_falsified"});
    return res;
}

// ---- re -----------------------------------------------------------------------

ExperimentResult exp_re(const ExperimentConfig& cfg, unsigned workers) {
    const std::vector<Axis> axes = {{"alpha", cfg.list("alpha", {1.0})},
                                    {"p", cfg.list("p", {20})},
                                    {"k", cfg.list("k", {2, 4})},
                                    {"n", cfg.list("n", {500, 2000})}};
    const long reps = as_count(cfg.number("reps", 20), "reps");
    const auto cap = static_cast<std::uint64_t>(cfg.number("cap", static_cast<double>(kDefaultEnumerationCap)));
    const int trials = static_cast<int>(as_count(cfg.number("trials", 10000), "trials"));
    const double delta = cfg.number("delta", 3.0);
    const bool synthetic = cfg.number("synthetic", 1) != 0.0;
    const auto grid = cartesian(axes);
    const std::string cs = cfg.constants.to_string();

    std::vector<VectorLaw> laws;
    std::vector<double> kn(grid.size()), ups(grid.size());
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const long p = as_count(grid[gi][1], "p");
        const int k = static_cast<int>(as_count(grid[gi][2], "k"));
        if (k > p) throw ConfigError("k: must not exceed p");
        const auto lc = marginal_for(cfg, grid[gi][0]);
        laws.push_back(vector_for(cfg, lc, p));
        kn[gi] = marginal_psi(lc.marginal, grid[gi][0], RngStream(cfg.seed, gi, 1));
        ups[gi] = laws.back().kind == VectorKind::Iid ? upsilon_iid(lc.marginal, k) : kNaN;
    }

    // population Gram and its smallest eigenvalue, once per grid point
    std::vector<Eigen::MatrixXd> sigs;
    std::vector<double> lmins;
    for (const auto& l : laws) {
        sigs.push_back(l.population_gram());
        lmins.push_back(min_eigenvalue_sym(sigs.back()));
    }

    auto tasks = run_tasks(grid.size(), reps, workers, [&](std::size_t gi, long r) {
        const long p = as_count(grid[gi][1], "p"), n = as_count(grid[gi][3], "n");
        const int k = static_cast<int>(grid[gi][2]);
        const RngStream base = RngStream(cfg.seed, gi).child(r);
        const auto X = draw_matrix(laws[gi], n, base.child(0));
        const Eigen::MatrixXd& Sig = sigs[gi];
        const Eigen::MatrixXd G = gram(X);
        TaskOut out;
        const std::string where = "p=" + std::to_string(p) + " k=" + std::to_string(k) + " n=" + std::to_string(n) +
                                  " rep=" + std::to_string(r);
        double upsilon = ups[gi];
        if (!std::isfinite(upsilon))
            upsilon = upsilon_estimate(X.values, k, quarter_net(k, static_cast<int>(p), cap, base.child(4)));
        const RsConvexityParams prm{upsilon, kn[gi], static_cast<double>(n), static_cast<double>(p),
                                    static_cast<double>(k), grid[gi][0], cfg.constants.c_alpha_rip};
        const double xi_theory = xi_bound(prm, false);
        const auto re_theory = re_verdict(lmins[gi], xi_theory, k);
        const double xi_cert = certified_rip(G - Sig, certified_size(k), cap);
        const auto re = re_with_oracle(lmins[gi], G, xi_cert, k, delta, trials, base.child(1), out.checks, where);
        // the data-side cone minimum is reported whether or not RE was certified
        const double data_min =
            std::isfinite(re.oracle)
                ? re.oracle
                : cone_min_oracle(G, random_support(static_cast<int>(p), k, base.child(1).child(0)), delta, trials,
                                  base.child(1).child(1));
        out.rows.push_back({D(grid[gi][0]), I(p), I(k), I(n), I(r), S("data"), D(xi_theory), D(xi_cert),
                            D(re.report.lambda_min), I(re_theory.satisfied ? 1 : 0), I(re.report.satisfied ? 1 : 0),
                            D(re.report.gamma_n), D(data_min), S(cs)});
        out.metrics = {data_min, re.report.satisfied ? 1.0 : 0.0, xi_theory};
        if (synthetic) {
            double sxi = 0.0;
            const Eigen::MatrixXd E = synthetic_perturbation(Sig.rows(), lmins[gi], k, base.child(2), &sxi);
            const auto so = re_with_oracle(lmins[gi], Sig + E, sxi, k, delta, trials, base.child(3), out.checks,
                                           where + " synthetic");
            out.rows.push_back({D(grid[gi][0]), I(p), I(k), I(n), I(r), S("synthetic"), D(kNaN), D(sxi),
                                D(so.report.lambda_min), I(0), I(so.report.satisfied ? 1 : 0), D(so.report.gamma_n),
                                D(so.oracle), S(cs)});
        }
        return out;
    });

    ExperimentResult res;
    res.experiment = "re";
    res.results = {"re-results/1",
                   {"alpha", "p", "k", "n", "rep", "kind", "xi_theory", "xi_certified", "lambda_min",
                    "re_theory_satisfied", "re_satisfied", "gamma_n", "cone_oracle_min", "constants"},
                   {}};
    add_rows(res.results, tasks);
    res.summary = {"re-summary/1",
                   {"alpha", "p", "k", "n", "reps", "median_cone_oracle_min", "re_satisfied_count", "median_xi_theory",
                    "constants"},
                   {}};
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        double sat = 0;
        for (const auto& tk : tasks[gi]) sat += tk.metrics[1];
        res.summary.add_row({D(grid[gi][0]), I(as_count(grid[gi][1], "p")), I(as_count(grid[gi][2], "k")),
                             I(as_count(grid[gi][3], "n")), I(reps), D(median_or_nan(metric_of(tasks[gi], 0))),
                             I(static_cast<long long>(sat)), D(median_or_nan(metric_of(tasks[gi], 2))), S(cs)});
    }
    res.metric = "median_cone_oracle_min";
    res.scanned = scanned_axes(axes);
    tally(res, tasks, {"re_not_falsified"});
    return res;
}

// ---- lasso --------------------------------------------------------------------

ExperimentResult exp_lasso(const ExperimentConfig& cfg, unsigned workers) {
    const std::vector<Axis> axes = {{"alpha", cfg.list("alpha", {1.0})},
                                    {"p", cfg.list("p", {200})},
                                    {"k", cfg.list("k", {5})},
                                    {"n", cfg.list("n", {500, 1000, 2000, 4000, 8000})}};
    const long reps = as_count(cfg.number("reps", 200), "reps");
    const std::string noise_kind = cfg.text("noise", "gaussian");
    const double sigma = cfg.number("noise_sigma", 1.0);
    const double shape = cfg.number("noise_shape", 4.0);
    const std::string policy = cfg.text("policy", "oracle");
    const double factor = cfg.number("lambda_factor", 2.0);
    const double tol = cfg.number("tol", 1e-9);
    const int max_iter = static_cast<int>(as_count(cfg.number("max_iter", 100000), "max_iter"));
    if (policy != "oracle" && policy != "theory" && policy != "fixed")
        throw ConfigError("policy: unknown policy '" + policy + "' (oracle, theory, fixed)");
    if (policy == "fixed" && !cfg.has("lambda")) throw ConfigError("lambda: required when policy=fixed");
    ScalarLaw noise;
    double noise_order = 2.0;  // psi order of the noise, when sub-Weibull
    if (noise_kind == "gaussian") {
        noise = ScalarLaw::gaussian(sigma);
    } else if (noise_kind == "pareto") {
        if (!(shape > 2.0)) throw ConfigError("noise_shape: must exceed 2 for finite variance");
        noise = ScalarLaw::pareto(shape, sigma * std::sqrt((shape - 2.0) / shape));
        noise_order = kNaN;
    } else {
        throw ConfigError("noise: unknown noise '" + noise_kind + "' (gaussian, pareto)");
    }
    const auto grid = cartesian(axes);
    const std::string cs = cfg.constants.to_string();
    std::vector<VectorLaw> laws;
    std::vector<double> kx(grid.size());
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const long p = as_count(grid[gi][1], "p");
        if (as_count(grid[gi][2], "k") > p) throw ConfigError("k: must not exceed p");
        as_count(grid[gi][3], "n");
        const auto lc = marginal_for(cfg, grid[gi][0]);
        laws.push_back(vector_for(cfg, lc, p));
        kx[gi] = marginal_psi(lc.marginal, grid[gi][0], RngStream(cfg.seed, gi, 1));
    }
    const double sigma_np = std::sqrt(noise.second_moment());  // design has unit variances
    const double poly_r = cfg.number("poly_r", std::min(3.0, 0.75 * shape));
    const double poly_l = cfg.number("poly_l", 1.0);

    auto lambda_for = [&](std::size_t gi, const RegressionData& d) -> double {
        const double alpha = grid[gi][0];
        if (policy == "fixed") return resolve_lambda(FixedLambda{cfg.number("lambda", 0.0)}, d.X.values);
        if (policy == "oracle") return resolve_lambda(EmpiricalOracle{d.eps, factor}, d.X.values);
        if (noise_kind == "gaussian") {
            const double k_eps = noise.psi_norm()->second;
            const double gamma = 1.0 / (1.0 / alpha + 1.0 / noise_order);
            return resolve_lambda(TheorySubWeibull{sigma_np, std::max(kx[gi], k_eps), gamma, cfg.constants},
                                  d.X.values);
        }
        const auto mr = abs_moment(noise, poly_r);
        if (!mr) throw ConfigError("poly_r: must be below noise_shape");
        return resolve_lambda(TheoryPoly{sigma_np, kx[gi], std::pow(*mr, 1.0 / poly_r), alpha, poly_r, poly_l,
                                         cfg.constants},
                              d.X.values);
    };

    // population Gram and its smallest eigenvalue, once per grid point
    std::vector<Eigen::MatrixXd> sigs;
    std::vector<double> lmins;
    for (const auto& l : laws) {
        sigs.push_back(l.population_gram());
        lmins.push_back(min_eigenvalue_sym(sigs.back()));
    }

    auto tasks = run_tasks(grid.size(), reps, workers, [&](std::size_t gi, long r) {
        const long p = as_count(grid[gi][1], "p"), k = as_count(grid[gi][2], "k"), n = as_count(grid[gi][3], "n");
        Eigen::VectorXd beta0 = Eigen::VectorXd::Zero(p);
        beta0.head(k).setOnes();
        const RngStream base = RngStream(cfg.seed, gi).child(r);
        const auto d = make_regression(laws[gi], beta0, noise, n, nullptr, base);
        const double lam = lambda_for(gi, d);
        const auto fit = solve({d.X.values, d.y}, lam, tol, max_iter);
        const Eigen::VectorXd nu = fit.beta - beta0;
        const double err = nu.norm();
        const double score = (d.X.values.transpose() * d.eps).cwiseAbs().maxCoeff() / static_cast<double>(n);
        TaskOut out;
        const std::string where = "p=" + std::to_string(p) + " k=" + std::to_string(k) + " n=" + std::to_string(n) +
                                  " rep=" + std::to_string(r);
        if (fit.converged)
            out.checks.push_back({"kkt_certificate", fit.kkt_residual <= 10.0 * tol,
                                  where + ": KKT residual " + format_double(fit.kkt_residual)});
        out.checks.push_back({"objective_monotone", fit.objective_monotone, where + ": objective increased"});
        const bool cone_applies = lam >= 2.0 * score;
        const std::vector<int> supp = support_of(beta0);
        const bool cone = cone_membership(nu, supp, beta0);
        if (cone_applies) out.checks.push_back({"cone_invariant", cone, where + ": error left the cone"});
        const Eigen::MatrixXd& Sig = sigs[gi];
        const Eigen::MatrixXd G = gram(d.X);
        const int m = certified_size(static_cast<int>(k));
        const double xi = m * max_elementwise_error(G, Sig);
        const auto re = re_verdict(lmins[gi], xi, static_cast<int>(k));
        double bound = kNaN;
        if (cone_applies && re.satisfied) {
            bound = deterministic_error_bound(static_cast<double>(k), lam, re.gamma_n);
            out.checks.push_back({"deterministic_bound", err <= bound * (1.0 + 1e-9),
                                  where + ": error " + format_double(err) + " > " + format_double(bound)});
        }
        out.rows.push_back({D(grid[gi][0]), I(p), I(k), I(n), S(noise_kind), I(r), D(lam), D(score), D(err),
                            I(fit.iterations), I(fit.converged ? 1 : 0), D(fit.kkt_residual), I(cone_applies ? 1 : 0),
                            I(cone ? 1 : 0), I(re.satisfied ? 1 : 0), D(re.gamma_n), D(bound), S(cs)});
        out.metrics = {err, lam, cone_applies ? 1.0 : 0.0, re.satisfied ? 1.0 : 0.0, fit.converged ? 1.0 : 0.0};
        return out;
    });

    ExperimentResult res;
    res.experiment = "lasso";
    res.results = {"lasso-results/1",
                   {"alpha", "p", "k", "n", "noise", "rep", "lambda", "score_max", "l2_error", "sweeps", "converged",
                    "kkt_residual", "cone_applies", "cone_holds", "re_satisfied", "gamma_n", "deterministic_bound",
                    "constants"},
                   {}};
    add_rows(res.results, tasks);
    res.summary = {"lasso-summary/1",
                   {"alpha", "p", "k", "n", "noise", "policy", "reps", "median_l2_error", "median_lambda",
                    "converged_count", "re_satisfied_count", "theory_error_bound", "constants"},
                   {}};
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        double conv = 0, sat = 0;
        for (const auto& tk : tasks[gi]) conv += tk.metrics[4], sat += tk.metrics[3];
        double theory = kNaN;
        if (noise_kind == "gaussian") {
            const double gamma = 1.0 / (1.0 / grid[gi][0] + 1.0 / noise_order);
            theory = error_bound_subweibull(sigma_np, std::max(kx[gi], noise.psi_norm()->second), grid[gi][3],
                                            grid[gi][1], grid[gi][2], gamma, lmins[gi], cfg.constants);
        }
        res.summary.add_row({D(grid[gi][0]), I(as_count(grid[gi][1], "p")), I(as_count(grid[gi][2], "k")),
                             I(as_count(grid[gi][3], "n")), S(noise_kind), S(policy), I(reps),
                             D(median_or_nan(metric_of(tasks[gi], 0))), D(median_or_nan(metric_of(tasks[gi], 1))),
                             I(static_cast<long long>(conv)), I(static_cast<long long>(sat)), D(theory), S(cs)});
    }
    add_slope_columns(res.summary, "n", "median_l2_error", others(scanned_axes(axes), "n"));
    res.metric = "median_l2_error";
    res.scanned = scanned_axes(axes);
    res.rate_axes = {"n", "k", "p"};
    tally(res, tasks, {"kkt_certificate", "objective_monotone", "cone_invariant", "deterministic_bound"});
    return res;
}

// ---- clt ----------------------------------------------------------------------

ExperimentResult exp_clt(const ExperimentConfig& cfg, unsigned workers) {
    const std::vector<Axis> axes = {{"alpha", cfg.list("alpha", {1.0})},
                                    {"q", cfg.list("q", {50})},
                                    {"n", cfg.list("n", {250, 1000, 4000})}};
    const long reps = as_count(cfg.number("reps", 20), "reps");
    const long draws = as_count(cfg.number("draws", 20000), "draws");
    const int kgrid = static_cast<int>(cfg.number("grid", 0));
    const double B = cfg.number("B", 1.0);
    const auto grid = cartesian(axes);
    const std::string cs = cfg.constants.to_string();

    struct PointLaw {
        VectorLaw law;
        Eigen::MatrixXd cov;
        double L = kNaN, K = kNaN, beta = 1.0;
    };
    std::vector<PointLaw> laws(grid.size());
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const auto lc = marginal_for(cfg, grid[gi][0], "exponential");
        auto& pl = laws[gi];
        pl.law = vector_for(cfg, lc, as_count(grid[gi][1], "q"));
        as_count(grid[gi][2], "n");
        pl.cov = pl.law.population_cov();
        pl.beta = lc.alpha;
        if (const auto m3 = abs_moment(lc.marginal, 3.0)) pl.L = *m3;
        pl.K = marginal_psi(lc.marginal, lc.alpha, RngStream(cfg.seed, gi, 1));
    }

    // Runs are the replications; each run draws `draws` max statistics from both sides.
    auto tasks = run_tasks(grid.size(), reps, 1, [&](std::size_t gi, long r) {
        const long n = as_count(grid[gi][2], "n");
        const RngStream base = RngStream(cfg.seed, gi).child(r);
        const auto a = data_max_sample(laws[gi].law, n, draws, base.child(0), workers);
        const auto b = gaussian_analog_sample(laws[gi].cov, n, draws, base.child(1), workers);
        const double rho = rho_rectangle_proxy(a, b, kgrid);
        TaskOut out;
        out.rows.push_back({D(grid[gi][0]), I(as_count(grid[gi][1], "q")), I(n), I(r), S(laws[gi].law.describe()),
                            I(draws), D(rho), D(median(a.values)), D(median(b.values)), S(cs)});
        out.metrics = {rho};
        return out;
    });

    ExperimentResult res;
    res.experiment = "clt";
    res.results = {"clt-results/1",
                   {"alpha", "q", "n", "run", "law", "draws", "rho_proxy", "median_data_max", "median_gaussian_max",
                    "constants"},
                   {}};
    add_rows(res.results, tasks);
    res.summary = {"clt-summary/1",
                   {"alpha", "q", "n", "runs", "median_rho_proxy", "hdclt_bound", "condition_ok", "constants"},
                   {}};
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const auto& pl = laws[gi];
        double bound = kNaN;
        long long ok = 0;
        if (std::isfinite(pl.L)) {
            const auto hb = hdclt_bound(pl.L, pl.K, grid[gi][2], grid[gi][1], pl.beta, B, cfg.constants);
            bound = hb.bound;
            ok = hb.condition_ok ? 1 : 0;
        }
        res.summary.add_row({D(grid[gi][0]), I(as_count(grid[gi][1], "q")), I(as_count(grid[gi][2], "n")), I(reps),
                             D(median_or_nan(metric_of(tasks[gi], 0))), D(bound), I(ok), S(cs)});
    }
    add_slope_columns(res.summary, "n", "median_rho_proxy", others(scanned_axes(axes), "n"));
    res.metric = "median_rho_proxy";
    res.scanned = scanned_axes(axes);
    res.rate_axes = {"n"};
    return res;
}

// ---- bootstrap ----------------------------------------------------------------

ExperimentResult exp_bootstrap(const ExperimentConfig& cfg, unsigned workers) {
    const std::vector<Axis> axes = {{"alpha", cfg.list("alpha", {1.0})},
                                    {"q", cfg.list("q", {100})},
                                    {"n", cfg.list("n", {500})}};
    const long reps = as_count(cfg.number("reps", 1000), "reps");
    const long draws = as_count(cfg.number("draws", 500), "draws");
    const double nominal = cfg.number("nominal", 0.9);
    if (!(nominal > 0.0 && nominal < 1.0)) throw ConfigError("nominal: must lie in (0, 1)");
    if (reps < 100) throw ConfigError("reps: coverage needs at least 100 replications");
    const auto grid = cartesian(axes);
    const std::string cs = cfg.constants.to_string();

    ExperimentResult res;
    res.experiment = "bootstrap";
    res.results = {"bootstrap-results/1",
                   {"alpha", "q", "n", "rep", "law", "statistic", "critical_value", "covered", "constants"},
                   {}};
    res.summary = {"bootstrap-summary/1",
                   {"alpha", "q", "n", "reps", "draws", "nominal", "coverage", "mc_se", "constants"},
                   {}};
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const long q = as_count(grid[gi][1], "q"), n = as_count(grid[gi][2], "n");
        const auto law = vector_for(cfg, marginal_for(cfg, grid[gi][0]), q);
        const auto cov = coverage_experiment(law, n, q, nominal, reps, draws, RngStream(cfg.seed, gi), workers);
        for (long r = 0; r < reps; ++r) {
            const double T = cov.statistics[r], c = cov.critical_values[r];
            res.results.add_row({D(grid[gi][0]), I(q), I(n), I(r), S(law.describe()), D(T), D(c), I(T <= c ? 1 : 0), S(cs)});
        }
        res.summary.add_row({D(grid[gi][0]), I(q), I(n), I(reps), I(draws), D(nominal), D(cov.coverage), D(cov.mc_se), S(cs)});
    }
    res.metric = "coverage";
    res.scanned = scanned_axes(axes);
    return res;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned workers) {
    workers = std::max(1u, workers);
    static const std::map<std::string, ExperimentResult (*)(const ExperimentConfig&, unsigned)> table = {
        {"norms", exp_norms}, {"tailcheck", exp_tailcheck}, {"covariance", exp_covariance}, {"rip", exp_rip},
        {"re", exp_re},       {"lasso", exp_lasso},         {"clt", exp_clt},               {"bootstrap", exp_bootstrap}};
    const auto it = table.find(cfg.experiment);
    if (it == table.end()) throw ConfigError("experiment: unknown experiment '" + cfg.experiment + "'");
    cfg.constants.validate();
    return it->second(cfg, workers);
}

RunManifest run(ExperimentConfig cfg, const RunOptions& options) {
    namespace fs = std::filesystem;
    if (options.seed) cfg.seed = *options.seed;
    const unsigned workers =
        options.workers ? std::max(1u, *options.workers) : std::max(1u, std::thread::hardware_concurrency());
    const std::string dir = options.out_dir ? *options.out_dir : "out";
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir);

    RunManifest m;
    m.started_at = utc_timestamp();
    m.experiment = cfg.experiment;
    m.version = kArtifactVersion;
    m.seed = cfg.seed;
    m.workers = workers;
    m.config_echo = cfg.echo;
    if (options.seed) {
        auto& echo = m.config_echo;
        echo.erase(std::remove_if(echo.begin(), echo.end(), [](const auto& kv) { return kv.first == "seed"; }), echo.end());
        echo.emplace_back("seed", std::to_string(cfg.seed));
    }
    m.constants = cfg.constants.as_map();

    const ExperimentResult res = run_experiment(cfg, workers);
    std::vector<std::string> names = {"results.csv", "summary.csv"};
    write_text_file((fs::path(dir) / "results.csv").string(), to_csv(res.results));
    write_text_file((fs::path(dir) / "summary.csv").string(), to_csv(res.summary));
    // tailcheck keeps its per-point table in results.csv
    const CsvTable& plot_table = res.experiment == "tailcheck" ? res.results : res.summary;
    for (const auto& axis : res.scanned) {
        const bool wants_log = std::find(res.rate_axes.begin(), res.rate_axes.end(), axis) != res.rate_axes.end();
        const auto xs = plot_table.numeric_column(axis);
        const auto ys = plot_table.numeric_column(res.metric);
        bool finite = true, positive = true;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            finite = finite && std::isfinite(xs[i]) && std::isfinite(ys[i]);
            positive = positive && xs[i] > 0 && ys[i] > 0;
        }
        if (!finite) continue;
        auto series = others(res.scanned, axis);
        const std::string name = "plot_" + axis + ".svg";
        emit_plot(plot_table, axis, res.metric, wants_log && positive, (fs::path(dir) / name).string(), series);
        names.push_back(name);
    }
    if (const auto* bad = res.first_violation())
        throw InvariantViolation(bad->name, bad->first_violation + " (" + std::to_string(bad->violated) + " of " +
                                                std::to_string(bad->checked) + " checks failed)");
    for (const auto& t : res.invariants) m.invariants.push_back({t.name, t.checked, t.violated});
    m.finished_at = utc_timestamp();
    return write_manifest(std::move(m), dir, names);
}

}  // namespace subweibull::cli
