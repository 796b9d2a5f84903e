#include "core/optim.hpp"

#include <algorithm>
#include <vector>

namespace qcb {

namespace {

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) < b(i)) return true;
        if (a(i) > b(i)) return false;
    }
    return false;
}

} // namespace

SimplexResult nelder_mead_max(const std::function<double(const Eigen::VectorXd&)>& f,
                              const Eigen::VectorXd& x0, const Eigen::VectorXd& step,
                              const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                              const SimplexOptions& options) {
    const Eigen::Index n = x0.size();
    const auto clamp = [&](Eigen::VectorXd x) {
        for (Eigen::Index i = 0; i < n; ++i) x(i) = std::clamp(x(i), lo(i), hi(i));
        return x;
    };
    const auto eval = [&](const Eigen::VectorXd& x) { return f(clamp(x)); };

    struct Vertex {
        Eigen::VectorXd x;
        double v;
    };
    std::vector<Vertex> s;
    s.push_back({x0, eval(x0)});
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd x = x0;
        x(i) += step(i);
        s.push_back({x, eval(x)});
    }

    // best first; stable + lexicographic tie-breaking keeps this deterministic
    const auto order = [&] {
        std::stable_sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) {
            if (a.v != b.v) return a.v > b.v;
            return lex_less(a.x, b.x);
        });
    };
    order();

    int iter = 0;
    bool converged = false;
    for (; iter < options.max_iter; ++iter) {
        double spread = 0.0;
        for (const auto& v : s) spread = std::max(spread, (v.x - s[0].x).cwiseAbs().maxCoeff());
        if (spread < options.param_tol && std::abs(s[0].v - s[n].v) < options.value_tol) {
            converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (Eigen::Index i = 0; i < n; ++i) centroid += s[i].x;
        centroid /= static_cast<double>(n);

        const Vertex& worst = s[n];
        Eigen::VectorXd xr = centroid + (centroid - worst.x);
        double vr = eval(xr);

        if (vr > s[0].v) {
            Eigen::VectorXd xe = centroid + 2.0 * (centroid - worst.x);
            double ve = eval(xe);
            s[n] = (ve > vr) ? Vertex{xe, ve} : Vertex{xr, vr};
        } else if (vr > s[n - 1].v) {
            s[n] = {xr, vr};
        } else {
            Eigen::VectorXd xc = centroid + 0.5 * (worst.x - centroid);
            double vc = eval(xc);
            if (vc > worst.v) {
                s[n] = {xc, vc};
            } else {
                for (Eigen::Index i = 1; i <= n; ++i) {
                    s[i].x = s[0].x + 0.5 * (s[i].x - s[0].x);
                    s[i].v = eval(s[i].x);
                }
            }
        }
        order();
    }

    return {clamp(s[0].x), s[0].v, converged, iter};
}

} // namespace qcb
