#include "photonlab/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "photonlab/errors.hpp"

namespace photonlab::optim {

namespace {

struct Vertex {
    std::vector<double> x;
    double f;
};

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opts) {
    require(!x0.empty(), "invalid-parameter", "nelder_mead: empty start point");
    const std::size_t dim = x0.size();

    std::vector<Vertex> simplex;
    simplex.reserve(dim + 1);
    simplex.push_back({x0, f(x0)});
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<double> v = x0;
        v[i] += opts.initial_step * std::max(std::abs(x0[i]), 1.0);
        simplex.push_back({v, f(v)});
    }

    auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };

    int iter = 0;
    bool converged = false;
    for (; iter < opts.max_iters; ++iter) {
        std::sort(simplex.begin(), simplex.end(), by_value);
        const Vertex& best = simplex.front();
        const Vertex& worst = simplex.back();

        double spread = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            spread = std::max(spread, std::abs(worst.x[i] - best.x[i]));
        if (spread < opts.x_tol && std::abs(worst.f - best.f) < opts.f_tol) {
            converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t v = 0; v + 1 < simplex.size(); ++v)
            for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[v].x[i];
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto point = [&](double coeff) {
            std::vector<double> p(dim);
            for (std::size_t i = 0; i < dim; ++i)
                p[i] = centroid[i] + coeff * (centroid[i] - worst.x[i]);
            return p;
        };

        std::vector<double> xr = point(1.0);
        const double fr = f(xr);
        if (fr < best.f) {
            std::vector<double> xe = point(2.0);
            const double fe = f(xe);
            simplex.back() = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
        } else if (fr < simplex[simplex.size() - 2].f) {
            simplex.back() = {xr, fr};
        } else {
            std::vector<double> xc = point(fr < worst.f ? 0.5 : -0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, worst.f)) {
                simplex.back() = {xc, fc};
            } else {
                for (std::size_t v = 1; v < simplex.size(); ++v) {
                    for (std::size_t i = 0; i < dim; ++i)
                        simplex[v].x[i] = best.x[i] + 0.5 * (simplex[v].x[i] - best.x[i]);
                    simplex[v].f = f(simplex[v].x);
                }
            }
        }
    }

    std::sort(simplex.begin(), simplex.end(), by_value);
    return {simplex.front().x, simplex.front().f, iter, converged};
}

NelderMeadResult nelder_mead_bounded(const std::function<double(const std::vector<double>&)>& f,
                                     std::vector<double> x0,
                                     const std::vector<std::pair<double, double>>& bounds,
                                     const NelderMeadOptions& opts) {
    require(bounds.size() == x0.size(), "invalid-parameter",
            "nelder_mead_bounded: bounds/start size mismatch");
    for (std::size_t i = 0; i < x0.size(); ++i)
        x0[i] = std::clamp(x0[i], bounds[i].first, bounds[i].second);

    auto clamped = [&](const std::vector<double>& x) {
        std::vector<double> c(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            c[i] = std::clamp(x[i], bounds[i].first, bounds[i].second);
        return c;
    };
    auto wrapped = [&](const std::vector<double>& x) {
        std::vector<double> c = clamped(x);
        double penalty = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - c[i];
            penalty += d * d;
        }
        return f(c) + penalty;
    };

    NelderMeadResult r = nelder_mead(wrapped, std::move(x0), opts);
    r.x = clamped(r.x);
    r.value = f(r.x);
    return r;
}

}  // namespace photonlab::optim
