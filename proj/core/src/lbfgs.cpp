#include "lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace socon::detail {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

OptimResult lbfgs_minimize(std::vector<double> x0,
                           const std::function<double(const std::vector<double>&, std::vector<double>&)>& fg,
                           int max_iterations, double tolerance, int history) {
    const std::size_t d = x0.size();
    OptimResult res;
    res.x = std::move(x0);

    std::vector<double> grad(d, 0.0);
    double value = fg(res.x, grad);

    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;

    for (int iter = 0; iter < max_iterations; ++iter) {
        res.grad_norm = norm2(grad);
        if (res.grad_norm <= tolerance) {
            res.value = value;
            res.iterations = iter;
            res.converged = true;
            return res;
        }

        // Two-loop recursion for the search direction.
        std::vector<double> q = grad;
        std::vector<double> alpha(s_hist.size(), 0.0);
        for (std::size_t i = s_hist.size(); i-- > 0;) {
            alpha[i] = rho_hist[i] * dot(s_hist[i], q);
            for (std::size_t j = 0; j < d; ++j) q[j] -= alpha[i] * y_hist[i][j];
        }
        if (!s_hist.empty()) {
            const double gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
            for (auto& v : q) v *= gamma;
        }
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
            const double beta = rho_hist[i] * dot(y_hist[i], q);
            for (std::size_t j = 0; j < d; ++j) q[j] += (alpha[i] - beta) * s_hist[i][j];
        }
        for (auto& v : q) v = -v;  // descent direction

        double dir_deriv = dot(grad, q);
        if (dir_deriv >= 0.0) {
            // Not a descent direction (stale curvature); restart with steepest descent.
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            for (std::size_t j = 0; j < d; ++j) q[j] = -grad[j];
            dir_deriv = dot(grad, q);
        }

        // Armijo backtracking.
        double step = 1.0;
        std::vector<double> x_new(d), grad_new(d, 0.0);
        double value_new = value;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t j = 0; j < d; ++j) x_new[j] = res.x[j] + step * q[j];
            value_new = fg(x_new, grad_new);
            if (std::isfinite(value_new) && value_new <= value + 1e-4 * step * dir_deriv) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            res.value = value;
            res.iterations = iter;
            res.converged = res.grad_norm <= tolerance;
            return res;
        }

        std::vector<double> s(d), yv(d);
        for (std::size_t j = 0; j < d; ++j) {
            s[j] = x_new[j] - res.x[j];
            yv[j] = grad_new[j] - grad[j];
        }
        const double ys = dot(yv, s);
        if (ys > 1e-12) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(yv));
            rho_hist.push_back(1.0 / ys);
            if (static_cast<int>(s_hist.size()) > history) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        res.x = std::move(x_new);
        grad = std::move(grad_new);
        value = value_new;
        grad_new.assign(d, 0.0);
        x_new.assign(d, 0.0);
    }

    res.grad_norm = norm2(grad);
    res.value = value;
    res.iterations = max_iterations;
    res.converged = res.grad_norm <= tolerance;
    return res;
}

}  // namespace socon::detail
