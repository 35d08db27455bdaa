#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace photonlab::optim {

struct NelderMeadOptions {
    int max_iters = 2000;
    double x_tol = 1e-9;
    double f_tol = 1e-12;
    double initial_step = 0.1;  // relative to parameter scale, see nelder_mead()
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Derivative-free simplex minimization. The initial simplex is x0 plus one
/// vertex per coordinate displaced by initial_step * max(|x0_i|, 1).
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0,
                             const NelderMeadOptions& opts = {});

/// Minimizes with simple box bounds by clamping evaluation points.
NelderMeadResult nelder_mead_bounded(const std::function<double(const std::vector<double>&)>& f,
                                     std::vector<double> x0,
                                     const std::vector<std::pair<double, double>>& bounds,
                                     const NelderMeadOptions& opts = {});

}  // namespace photonlab::optim
