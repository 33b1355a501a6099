#pragma once

// Minimal L-BFGS with Armijo backtracking, shared by the logistic trainer and
// the mixed-effects screener. Internal header.

#include <functional>
#include <vector>

namespace socon::detail {

struct OptimResult {
    std::vector<double> x;
    double value = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

// fg(x, grad) evaluates the objective and writes its gradient. Terminates when
// the gradient 2-norm drops to `tolerance` or max_iterations is reached.
OptimResult lbfgs_minimize(std::vector<double> x0,
                           const std::function<double(const std::vector<double>&, std::vector<double>&)>& fg,
                           int max_iterations, double tolerance, int history = 10);

}  // namespace socon::detail
