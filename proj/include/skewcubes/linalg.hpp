#pragma once

#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "skewcubes/rng.hpp"

namespace skewcubes {

using Vec = std::vector<double>;

// Dense square matrix, row-major.  Dimensions here stay tiny (m <= 6), so no
// external linear algebra dependency is warranted.
class Mat {
public:
    Mat() = default;
    explicit Mat(int n) : n_(n), a_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0) {}

    static Mat identity(int n) {
        Mat m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Mat diagonal(const Vec& d) {
        Mat m(static_cast<int>(d.size()));
        for (int i = 0; i < m.n_; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
        return m;
    }

    static Mat from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        Mat m(static_cast<int>(rows.size()));
        int i = 0;
        for (const auto& row : rows) {
            int j = 0;
            for (double v : row) m(i, j++) = v;
            ++i;
        }
        return m;
    }

    int dim() const { return n_; }
    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    friend bool operator==(const Mat& x, const Mat& y) { return x.n_ == y.n_ && x.a_ == y.a_; }

private:
    int n_ = 0;
    std::vector<double> a_;
};

inline Mat operator*(const Mat& a, const Mat& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("Mat product: dimension mismatch");
    const int n = a.dim();
    Mat c(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline Vec mat_vec(const Mat& a, const Vec& x) {
    const int n = a.dim();
    Vec y(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += a(i, j) * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = s;
    }
    return y;
}

inline Mat transpose(const Mat& a) {
    Mat t(a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) t(j, i) = a(i, j);
    return t;
}

inline double max_abs(const Mat& a) {
    double m = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j)));
    return m;
}

inline double max_abs_diff(const Mat& a, const Mat& b) {
    double m = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

inline double max_abs_diff(const Vec& a, const Vec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double inf_norm(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double euclid_dist(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline double det(const Mat& a) {
    // Gaussian elimination with partial pivoting on a copy
    const int n = a.dim();
    Mat m = a;
    double d = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
        if (m(piv, c) == 0.0) return 0.0;
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
            d = -d;
        }
        d *= m(c, c);
        for (int r = c + 1; r < n; ++r) {
            double f = m(r, c) / m(c, c);
            for (int j = c; j < n; ++j) m(r, j) -= f * m(c, j);
        }
    }
    return d;
}

inline Mat inverse(const Mat& a) {
    const int n = a.dim();
    Mat m = a;
    Mat inv = Mat::identity(n);
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
        if (m(piv, c) == 0.0) throw std::invalid_argument("inverse: singular matrix");
        if (piv != c)
            for (int j = 0; j < n; ++j) {
                std::swap(m(piv, j), m(c, j));
                std::swap(inv(piv, j), inv(c, j));
            }
        double p = m(c, c);
        for (int j = 0; j < n; ++j) {
            m(c, j) /= p;
            inv(c, j) /= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            double f = m(r, c);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                m(r, j) -= f * m(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

struct QrSplit {
    Mat orthogonal;  // Q
    Mat triangular;  // R, upper triangular with positive diagonal
};

// Modified Gram-Schmidt with the diagonal of R normalized positive.  The
// factorization is unique for invertible input, which makes the split a
// canonical section of the coset decomposition used throughout.  Rejection is
// scale-invariant: |det| is measured against the entry magnitude, so small
// well-conditioned matrices (composites of contractions) pass.
inline QrSplit qr_split(const Mat& a, double eps_det = 1e-12) {
    const int n = a.dim();
    double scale = max_abs(a);
    double rel = 1.0;
    for (int i = 0; i < n; ++i) rel *= scale;
    if (scale == 0.0 || std::abs(det(a)) <= eps_det * rel)
        throw std::invalid_argument("qr_split: matrix is singular or near-singular");
    Mat q(n), r(n);
    // work on columns
    std::vector<Vec> col(static_cast<std::size_t>(n), Vec(static_cast<std::size_t>(n)));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) col[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = a(i, j);
    for (int k = 0; k < n; ++k) {
        double nrm = 0.0;
        for (double v : col[static_cast<std::size_t>(k)]) nrm += v * v;
        nrm = std::sqrt(nrm);
        r(k, k) = nrm;
        for (int i = 0; i < n; ++i) q(i, k) = col[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] / nrm;
        for (int j = k + 1; j < n; ++j) {
            double dot = 0.0;
            for (int i = 0; i < n; ++i) dot += q(i, k) * col[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
            r(k, j) = dot;
            for (int i = 0; i < n; ++i) col[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] -= dot * q(i, k);
        }
    }
    return {q, r};
}

inline double orthogonality_defect(const Mat& q) {
    return max_abs_diff(transpose(q) * q, Mat::identity(q.dim()));
}

inline bool is_diagonal(const Mat& a, double eps) {
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            if (i != j && std::abs(a(i, j)) > eps) return false;
    return true;
}

// Haar-like random orthogonal matrix: QR of a Gaussian sample.
inline Mat random_orthogonal(Rng& rng, int n, bool special = false) {
    Mat g(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.gauss();
    Mat q;
    for (;;) {
        try {
            q = qr_split(g).orthogonal;
            break;
        } catch (const std::invalid_argument&) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) g(i, j) = rng.gauss();
        }
    }
    if (special && det(q) < 0.0)
        for (int i = 0; i < n; ++i) q(i, n - 1) = -q(i, n - 1);
    return q;
}

// Orthogonal map sending unit vector `from` to unit vector `to` (a reflection
// unless they already coincide).
inline Mat orthogonal_sending(const Vec& from, const Vec& to) {
    const int n = static_cast<int>(from.size());
    Vec d(static_cast<std::size_t>(n));
    double nd = 0.0;
    for (int i = 0; i < n; ++i) {
        d[static_cast<std::size_t>(i)] = from[static_cast<std::size_t>(i)] - to[static_cast<std::size_t>(i)];
        nd += d[static_cast<std::size_t>(i)] * d[static_cast<std::size_t>(i)];
    }
    if (nd < 1e-30) return Mat::identity(n);
    Mat h = Mat::identity(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            h(i, j) -= 2.0 * d[static_cast<std::size_t>(i)] * d[static_cast<std::size_t>(j)] / nd;
    return h;
}

}  // namespace skewcubes
