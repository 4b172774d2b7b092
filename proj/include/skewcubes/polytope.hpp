#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "skewcubes/linalg.hpp"

namespace skewcubes {

// One halfspace a.x <= c with unit normal a.
struct Halfspace {
    Vec normal;
    double offset;
};

// The image of the closed cube [-1,1]^m under x -> Ax + v is a parallelotope
// cut out by 2m halfspaces with normals along the rows of A^{-1}.
inline std::vector<Halfspace> parallelotope_halfspaces(const Mat& a, const Vec& v) {
    const int m = a.dim();
    Mat ainv = inverse(a);
    std::vector<Halfspace> hs;
    hs.reserve(static_cast<std::size_t>(2 * m));
    for (int i = 0; i < m; ++i) {
        Vec w(static_cast<std::size_t>(m));
        double nrm = 0.0;
        for (int j = 0; j < m; ++j) {
            w[static_cast<std::size_t>(j)] = ainv(i, j);
            nrm += ainv(i, j) * ainv(i, j);
        }
        nrm = std::sqrt(nrm);
        double wv = 0.0;
        for (int j = 0; j < m; ++j) wv += w[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
        // |w.(x-v)| <= 1, normalized
        Vec wn = w;
        for (double& x : wn) x /= nrm;
        hs.push_back({wn, (1.0 + wv) / nrm});
        Vec wm = wn;
        for (double& x : wm) x = -x;
        hs.push_back({wm, (1.0 - wv) / nrm});
    }
    return hs;
}

// Largest t such that every constraint a.x + t <= c is satisfiable, i.e. the
// inradius of the constraint intersection (negative when the system is
// infeasible).  Solved by a primal simplex after shifting t to be
// nonnegative; the shifted start makes the slack basis feasible, so no
// phase-1 is needed.
inline double inflation_radius(const std::vector<Halfspace>& sys) {
    const int n = static_cast<int>(sys.size());
    if (n == 0) throw std::invalid_argument("inflation_radius: empty system");
    const int m = static_cast<int>(sys[0].normal.size());

    double t0 = sys[0].offset;
    for (const auto& h : sys) t0 = std::min(t0, h.offset);
    t0 -= 1.0;

    // columns: x+ (m), x- (m), t_hat, slacks (n)
    const int ncols = 2 * m + 1 + n;
    std::vector<std::vector<double>> tab(static_cast<std::size_t>(n),
                                         std::vector<double>(static_cast<std::size_t>(ncols) + 1, 0.0));
    std::vector<int> basis(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        auto& row = tab[static_cast<std::size_t>(j)];
        for (int d = 0; d < m; ++d) {
            row[static_cast<std::size_t>(d)] = sys[static_cast<std::size_t>(j)].normal[static_cast<std::size_t>(d)];
            row[static_cast<std::size_t>(m + d)] = -row[static_cast<std::size_t>(d)];
        }
        row[static_cast<std::size_t>(2 * m)] = 1.0;
        row[static_cast<std::size_t>(2 * m + 1 + j)] = 1.0;
        row[static_cast<std::size_t>(ncols)] = sys[static_cast<std::size_t>(j)].offset - t0;
        basis[static_cast<std::size_t>(j)] = 2 * m + 1 + j;
    }
    std::vector<double> cost(static_cast<std::size_t>(ncols) + 1, 0.0);
    cost[static_cast<std::size_t>(2 * m)] = 1.0;  // maximize t_hat; row kept as reduced costs

    const double eps = 1e-11;
    for (int iter = 0; iter < 10000; ++iter) {
        int enter = -1;
        for (int c = 0; c < ncols; ++c)
            if (cost[static_cast<std::size_t>(c)] > eps) {
                enter = c;  // Bland's rule
                break;
            }
        if (enter < 0) break;
        int leave = -1;
        double best = 0.0;
        for (int r = 0; r < n; ++r) {
            double coef = tab[static_cast<std::size_t>(r)][static_cast<std::size_t>(enter)];
            if (coef > eps) {
                double ratio = tab[static_cast<std::size_t>(r)][static_cast<std::size_t>(ncols)] / coef;
                if (leave < 0 || ratio < best - eps ||
                    (ratio < best + eps && basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)]))
                {
                    leave = r;
                    best = ratio;
                }
            }
        }
        if (leave < 0) throw std::logic_error("inflation_radius: unbounded program");
        auto& prow = tab[static_cast<std::size_t>(leave)];
        double piv = prow[static_cast<std::size_t>(enter)];
        for (double& x : prow) x /= piv;
        for (int r = 0; r < n; ++r) {
            if (r == leave) continue;
            double f = tab[static_cast<std::size_t>(r)][static_cast<std::size_t>(enter)];
            if (f == 0.0) continue;
            for (int c = 0; c <= ncols; ++c)
                tab[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -= f * prow[static_cast<std::size_t>(c)];
        }
        double f = cost[static_cast<std::size_t>(enter)];
        for (int c = 0; c <= ncols; ++c) cost[static_cast<std::size_t>(c)] -= f * prow[static_cast<std::size_t>(c)];
        basis[static_cast<std::size_t>(leave)] = enter;
    }
    // objective value = -cost[rhs] after canonicalization
    return -cost[static_cast<std::size_t>(ncols)] + t0;
}

// Separation margin of two parallelotopes: positive iff disjoint, measured
// as the joint inflation radius needed to make them touch.
inline double separation_margin(const Mat& a1, const Vec& v1, const Mat& a2, const Vec& v2) {
    std::vector<Halfspace> sys = parallelotope_halfspaces(a1, v1);
    std::vector<Halfspace> sys2 = parallelotope_halfspaces(a2, v2);
    sys.insert(sys.end(), sys2.begin(), sys2.end());
    return -inflation_radius(sys);
}

// Certified fast disjointness test along the 4m face normals.  Returns true
// only when the two bodies are provably separated with LP margin >= tol;
// false means "unknown", and the LP is the authority.
inline bool certified_separated(const Mat& a1, const Vec& v1, const Mat& a2, const Vec& v2, double tol) {
    const int m = a1.dim();
    Mat inv1 = inverse(a1), inv2 = inverse(a2);
    auto extent = [m](const Mat& gen, const Vec& u) {
        // support radius of {gen * s : s in [-1,1]^m} along u
        double e = 0.0;
        for (int j = 0; j < m; ++j) {
            double d = 0.0;
            for (int i = 0; i < m; ++i) d += u[static_cast<std::size_t>(i)] * gen(i, j);
            e += std::abs(d);
        }
        return e;
    };
    auto growth = [m](const Mat& inv, const Vec& u) {
        // coefficients of u over the rows of inv (the unnormalized normals)
        Mat w(m);
        Vec scale(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            double nrm = 0.0;
            for (int j = 0; j < m; ++j) nrm += inv(i, j) * inv(i, j);
            nrm = std::sqrt(nrm);
            scale[static_cast<std::size_t>(i)] = nrm;
            for (int j = 0; j < m; ++j) w(i, j) = inv(i, j) / nrm;
        }
        (void)scale;
        Vec coef = mat_vec(transpose(inverse(w)), u);
        double s = 0.0;
        for (double c : coef) s += std::abs(c);
        return s;
    };
    Vec diff(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) diff[static_cast<std::size_t>(i)] = v2[static_cast<std::size_t>(i)] - v1[static_cast<std::size_t>(i)];

    for (int side = 0; side < 2; ++side) {
        const Mat& inv = side == 0 ? inv1 : inv2;
        for (int i = 0; i < m; ++i) {
            Vec u(static_cast<std::size_t>(m));
            double nrm = 0.0;
            for (int j = 0; j < m; ++j) nrm += inv(i, j) * inv(i, j);
            nrm = std::sqrt(nrm);
            for (int j = 0; j < m; ++j) u[static_cast<std::size_t>(j)] = inv(i, j) / nrm;
            double sep = 0.0;
            for (int j = 0; j < m; ++j) sep += u[static_cast<std::size_t>(j)] * diff[static_cast<std::size_t>(j)];
            double gap = std::abs(sep) - extent(a1, u) - extent(a2, u);
            if (gap > tol * (growth(inv1, u) + growth(inv2, u)) + 1e-15) return true;
        }
    }
    return false;
}

}  // namespace skewcubes
