#include "socon/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <set>

#include "lbfgs.hpp"
#include "socon/common.hpp"
#include "socon/csv.hpp"

namespace socon {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

struct Cluster {
    std::vector<double> x;
    std::vector<std::uint8_t> y;  // 1 = NotAlone (model-positive)
};

// Posterior mode of the random intercept for one cluster: maximizes
// sum_j log p(y_j | eta_j) - u^2/(2 sigma^2). Strictly concave, solved by
// damped Newton to near machine precision.
double solve_mode(const Cluster& c, double beta0, double beta1, double inv_s2) {
    double u = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        double g = -u * inv_s2;
        double h = -inv_s2;
        for (std::size_t j = 0; j < c.x.size(); ++j) {
            const double p = sigmoid(beta0 + beta1 * c.x[j] + u);
            g += (c.y[j] != 0 ? 1.0 : 0.0) - p;
            h -= p * (1.0 - p);
        }
        double step = -g / h;
        if (step > 10.0) step = 10.0;
        if (step < -10.0) step = -10.0;
        u += step;
        if (std::abs(g) < 1e-13 * (1.0 + std::abs(u) * inv_s2)) break;
    }
    return u;
}

struct ClusterTerms {
    double loglik = 0.0;
    double d_beta0 = 0.0;
    double d_beta1 = 0.0;
    double d_t = 0.0;
};

// Laplace-approximate marginal log-likelihood of one cluster and its exact
// gradient in (beta0, beta1, t = log sigma), including the dependence of the
// posterior mode and the curvature correction on the parameters.
ClusterTerms cluster_terms(const Cluster& c, double beta0, double beta1, double t) {
    const double inv_s2 = std::exp(-2.0 * t);
    const double u = solve_mode(c, beta0, beta1, inv_s2);

    double ll = 0.0;
    double sum_r = 0.0, sum_rx = 0.0;
    double w_sum = 0.0;
    double v0 = 0.0, v1 = 0.0;  // sums of w(1-2p) and w(1-2p)x
    double s0 = 0.0, s1 = 0.0;  // sums of w and w*x
    for (std::size_t j = 0; j < c.x.size(); ++j) {
        const double z = beta0 + beta1 * c.x[j] + u;
        const double y = c.y[j] != 0 ? 1.0 : 0.0;
        ll += y * z - ((z > 0.0 ? z : 0.0) + std::log1p(std::exp(-std::abs(z))));
        const double p = sigmoid(z);
        const double w = p * (1.0 - p);
        const double r = y - p;
        sum_r += r;
        sum_rx += r * c.x[j];
        w_sum += w;
        const double v = w * (1.0 - 2.0 * p);
        v0 += v;
        v1 += v * c.x[j];
        s0 += w;
        s1 += w * c.x[j];
    }
    const double a = w_sum + inv_s2;

    ClusterTerms out;
    out.loglik = ll - 0.5 * u * u * inv_s2 - t - 0.5 * std::log(a);
    out.d_beta0 = sum_r - 0.5 * v0 / a + 0.5 * v0 * s0 / (a * a);
    out.d_beta1 = sum_rx - 0.5 * v1 / a + 0.5 * v0 * s1 / (a * a);
    out.d_t = u * u * inv_s2 - 1.0 + inv_s2 / a - v0 * u * inv_s2 / (a * a);
    return out;
}

std::vector<Cluster> build_clusters(std::span<const double> x, std::span<const std::uint8_t> labels,
                                    std::span<const int> cluster_ids) {
    if (x.size() != labels.size() || x.size() != cluster_ids.size()) {
        throw Error("fit_glmm: input size mismatch");
    }
    std::map<int, std::size_t> slots;
    std::vector<Cluster> clusters;
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto [it, inserted] = slots.try_emplace(cluster_ids[i], clusters.size());
        if (inserted) clusters.emplace_back();
        auto& c = clusters[it->second];
        c.x.push_back(x[i]);
        // Model-positive direction is NotAlone.
        c.y.push_back(labels[i] != 0 ? 0 : 1);
    }
    return clusters;
}

double normal_two_sided_p(double z) {
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

double objective_on_clusters(std::span<const double> params, const std::vector<Cluster>& clusters,
                             double n, std::span<double> grad_out) {
    const double inv_n = 1.0 / n;
    double ll = 0.0, g0 = 0.0, g1 = 0.0, gt = 0.0;
    for (const auto& c : clusters) {
        const auto terms = cluster_terms(c, params[0], params[1], params[2]);
        ll += terms.loglik;
        g0 += terms.d_beta0;
        g1 += terms.d_beta1;
        gt += terms.d_t;
    }
    grad_out[0] = -g0 * inv_n;
    grad_out[1] = -g1 * inv_n;
    grad_out[2] = -gt * inv_n;
    return -ll * inv_n;
}

}  // namespace

double glmm_objective(std::span<const double> params, std::span<const double> feature_values,
                      std::span<const std::uint8_t> labels, std::span<const int> cluster_ids,
                      std::span<double> grad_out) {
    if (params.size() != 3 || grad_out.size() != 3) throw Error("glmm_objective: expected 3 parameters");
    const auto clusters = build_clusters(feature_values, labels, cluster_ids);
    return objective_on_clusters(params, clusters, static_cast<double>(feature_values.size()), grad_out);
}

MixedEffectsResult fit_glmm(std::span<const double> feature_values,
                            std::span<const std::uint8_t> labels,
                            std::span<const int> cluster_ids) {
    const auto clusters = build_clusters(feature_values, labels, cluster_ids);
    if (clusters.size() < 2) throw ValidationError("fit_glmm: need at least two clusters");
    std::size_t pos = 0;
    for (std::uint8_t l : labels) pos += l != 0;
    if (pos == 0 || pos == labels.size()) {
        throw ValidationError("fit_glmm: both classes must be present");
    }

    const double n = static_cast<double>(feature_values.size());
    auto fg = [&](const std::vector<double>& p, std::vector<double>& g) {
        std::array<double, 3> grad{};
        const double value =
            objective_on_clusters(std::span<const double>(p.data(), 3), clusters, n, grad);
        g.assign(grad.begin(), grad.end());
        return value;
    };

    // Start at the pooled intercept with a moderate random-effect scale.
    double mean_y = 0.0;
    for (std::uint8_t l : labels) mean_y += l != 0 ? 0.0 : 1.0;  // NotAlone rate
    mean_y = std::clamp(mean_y / static_cast<double>(labels.size()), 1e-3, 1.0 - 1e-3);
    std::vector<double> x0 = {std::log(mean_y / (1.0 - mean_y)), 0.0, std::log(0.5)};

    const auto res = detail::lbfgs_minimize(x0, fg, 300, 1e-8);
    if (!res.converged && res.grad_norm > 1e-5) {
        throw Error("fit_glmm: no convergence after " + std::to_string(res.iterations) +
                    " iterations (gradient norm " + std::to_string(res.grad_norm) + ")");
    }

    // Observed information via central differences of the analytic gradient,
    // scaled back to the unnormalized log-likelihood.
    std::array<std::array<double, 3>, 3> hess{};
    const std::array<double, 3> steps = {1e-5 * (1.0 + std::abs(res.x[0])),
                                         1e-5 * (1.0 + std::abs(res.x[1])),
                                         1e-5 * (1.0 + std::abs(res.x[2]))};
    for (int k = 0; k < 3; ++k) {
        std::vector<double> plus = res.x, minus = res.x;
        plus[k] += steps[k];
        minus[k] -= steps[k];
        std::array<double, 3> gp{}, gm{};
        objective_on_clusters(std::span<const double>(plus.data(), 3), clusters, n, gp);
        objective_on_clusters(std::span<const double>(minus.data(), 3), clusters, n, gm);
        for (int l = 0; l < 3; ++l) hess[k][l] = n * (gp[l] - gm[l]) / (2.0 * steps[k]);
    }
    // Symmetrize.
    for (int k = 0; k < 3; ++k) {
        for (int l = k + 1; l < 3; ++l) {
            const double v = 0.5 * (hess[k][l] + hess[l][k]);
            hess[k][l] = v;
            hess[l][k] = v;
        }
    }

    // Invert; when the variance direction is flat (sigma^2 at the boundary)
    // fall back to the fixed-effect block.
    double se1 = std::numeric_limits<double>::quiet_NaN();
    {
        const auto& h = hess;
        const double det = h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1]) -
                           h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0]) +
                           h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]);
        if (std::abs(det) > 1e-10 && h[2][2] > 1e-8) {
            // (I^{-1})_{11} via the cofactor.
            const double c11 = h[0][0] * h[2][2] - h[0][2] * h[2][0];
            const double var1 = c11 / det;
            if (var1 > 0.0) se1 = std::sqrt(var1);
        }
        if (std::isnan(se1)) {
            const double det2 = h[0][0] * h[1][1] - h[0][1] * h[1][0];
            if (std::abs(det2) > 1e-12) {
                const double var1 = h[0][0] / det2;
                if (var1 > 0.0) se1 = std::sqrt(var1);
            }
        }
    }
    if (std::isnan(se1) || se1 <= 0.0) {
        throw Error("fit_glmm: information matrix is singular; standard error unavailable");
    }

    MixedEffectsResult out;
    out.coefficient = res.x[1];
    out.std_error = se1;
    out.z_score = out.coefficient / out.std_error;
    out.p_value = normal_two_sided_p(out.z_score);
    out.random_intercept_variance = std::exp(2.0 * res.x[2]);
    out.log_likelihood = -res.value * n;
    return out;
}

std::vector<double> bonferroni(std::span<const double> p_values) {
    const double m = static_cast<double>(p_values.size());
    std::vector<double> out;
    out.reserve(p_values.size());
    for (double p : p_values) {
        if (p < 0.0 || p > 1.0) throw ValidationError("bonferroni: p-values must lie in [0,1]");
        out.push_back(std::min(1.0, m * p));
    }
    return out;
}

std::vector<MixedEffectsResult> rank_features(const FeatureMatrix& fm, int top_k,
                                              const std::string& scope, int jobs) {
    if (top_k < 0) throw ValidationError("rank_features: top_k must be >= 0");
    std::vector<std::size_t> scoped;
    for (std::size_t r = 0; r < fm.rows(); ++r) {
        if (scope.empty() || fm.country[r] == scope) scoped.push_back(r);
    }
    if (scoped.empty()) throw ValidationError("rank_features: scope '" + scope + "' selects no rows");

    // Cluster ids from participant ids.
    std::map<std::string, int> pid_slot;
    std::vector<int> cluster(scoped.size());
    for (std::size_t i = 0; i < scoped.size(); ++i) {
        auto [it, inserted] =
            pid_slot.try_emplace(fm.participant_id[scoped[i]], static_cast<int>(pid_slot.size()));
        cluster[i] = it->second;
    }

    const std::size_t n_feat = fm.schema.n_features();
    const std::size_t n_mark = fm.schema.n_markers();
    const std::size_t n_cols = n_feat + n_mark;

    struct Fit {
        bool attempted = false;
        bool ok = false;
        std::size_t schema_index = 0;
        MixedEffectsResult result;
    };
    std::vector<Fit> fits(n_cols);

    parallel_for(n_cols, jobs, [&](std::size_t c) {
        Fit& fit = fits[c];
        fit.schema_index = c;
        const bool is_marker = c >= n_feat;
        std::vector<double> x;
        std::vector<std::uint8_t> y;
        std::vector<int> cl;
        x.reserve(scoped.size());
        for (std::size_t i = 0; i < scoped.size(); ++i) {
            const std::size_t r = scoped[i];
            double value;
            if (is_marker) {
                value = static_cast<double>(fm.marker_row(r)[c - n_feat]);
            } else {
                value = fm.row(r)[c];
                if (std::isnan(value)) continue;  // observed rows only
            }
            x.push_back(value);
            y.push_back(fm.label[r]);
            cl.push_back(cluster[i]);
        }
        if (x.size() < 8) return;
        const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
        if (*mn == *mx) return;  // constant feature carries no test
        bool pos = false, neg = false;
        for (auto l : y) (l != 0 ? pos : neg) = true;
        std::set<int> distinct(cl.begin(), cl.end());
        if (!pos || !neg || distinct.size() < 2) return;

        fit.attempted = true;
        try {
            fit.result = fit_glmm(x, y, cl);
            fit.result.feature =
                is_marker ? fm.schema.marker_names[c - n_feat] : fm.schema.feature_names[c];
            fit.ok = true;
        } catch (const std::exception& ex) {
            warn("rank_features: fit failed for '" +
                 (is_marker ? fm.schema.marker_names[c - n_feat] : fm.schema.feature_names[c]) +
                 "': " + ex.what());
        }
    });

    // Bonferroni with m = number of features actually tested.
    std::size_t m = 0;
    for (const auto& f : fits) m += f.attempted;
    std::vector<Fit> ok;
    for (auto& f : fits) {
        if (f.ok) {
            f.result.p_adjusted = std::min(1.0, static_cast<double>(m) * f.result.p_value);
            ok.push_back(std::move(f));
        }
    }
    std::sort(ok.begin(), ok.end(), [](const Fit& a, const Fit& b) {
        if (a.result.p_adjusted != b.result.p_adjusted) return a.result.p_adjusted < b.result.p_adjusted;
        if (a.result.p_value != b.result.p_value) return a.result.p_value < b.result.p_value;
        return a.schema_index < b.schema_index;
    });
    if (ok.size() > static_cast<std::size_t>(top_k)) ok.resize(static_cast<std::size_t>(top_k));

    std::vector<MixedEffectsResult> out;
    out.reserve(ok.size());
    for (auto& f : ok) out.push_back(std::move(f.result));
    return out;
}

void write_ranking_csv(std::span<const MixedEffectsResult> ranking, std::ostream& out) {
    csv::Writer w(out);
    w.field(std::string("rank")).field(std::string("feature")).field(std::string("coefficient"))
        .field(std::string("std_error")).field(std::string("z_score")).field(std::string("p_value"))
        .field(std::string("p_adjusted")).field(std::string("random_intercept_variance"));
    w.end_row();
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        const auto& r = ranking[i];
        w.field(static_cast<long long>(i + 1)).field(r.feature).field(r.coefficient)
            .field(r.std_error).field(r.z_score).field(r.p_value).field(r.p_adjusted)
            .field(r.random_intercept_variance);
        w.end_row();
    }
}

}  // namespace socon
