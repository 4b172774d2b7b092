#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewcubes/linalg.hpp"
#include "skewcubes/permutation.hpp"
#include "skewcubes/polytope.hpp"
#include "skewcubes/rng.hpp"

namespace skewcubes {

constexpr double kLinEps = 1e-10;
constexpr double kDefaultTol = 1e-9;

// Named matrix families closed enough for the constructions here: positive
// diagonals, orthogonal times positive diagonal, the special-orthogonal
// variant, or a caller-supplied predicate on the orthogonal factor.
enum class GroupTag { dilation, orth_dilation, special_orth_dilation, custom };

inline std::string group_tag_name(GroupTag t) {
    switch (t) {
        case GroupTag::dilation: return "Λ";                       // Λ
        case GroupTag::orth_dilation: return "O·Λ";           // O·Λ
        case GroupTag::special_orth_dilation: return "SO·Λ";  // SO·Λ
        case GroupTag::custom: return "custom";
    }
    return "?";
}

inline std::optional<GroupTag> group_tag_from_name(const std::string& s) {
    if (s == "Λ" || s == "dilation" || s == "L") return GroupTag::dilation;
    if (s == "O·Λ" || s == "orth_dilation" || s == "O.L") return GroupTag::orth_dilation;
    if (s == "SO·Λ" || s == "special_orth_dilation" || s == "SO.L")
        return GroupTag::special_orth_dilation;
    if (s == "custom") return GroupTag::custom;
    return std::nullopt;
}

using OrthPredicate = std::function<bool(const Mat&)>;

// coarsest family containing both: block sums of members land in the joined
// family, which is what product constructions need
inline GroupTag tag_join(GroupTag a, GroupTag b) {
    if (a == GroupTag::custom || b == GroupTag::custom) return GroupTag::custom;
    if (a == GroupTag::orth_dilation || b == GroupTag::orth_dilation) return GroupTag::orth_dilation;
    if (a == GroupTag::special_orth_dilation || b == GroupTag::special_orth_dilation)
        return GroupTag::special_orth_dilation;
    return GroupTag::dilation;
}

// Invertible matrix with its cached orthogonal/triangular split.  Products of
// tagged matrices can leave the tagged family (the triangular factor need not
// stay diagonal), so membership is a predicate checked where required rather
// than a storage invariant.
struct GroupElem {
    int m = 0;
    Mat matrix;
    GroupTag tag = GroupTag::dilation;
    Mat o_part;
    Mat r_part;  // upper triangular, positive diagonal

    static GroupElem make(Mat a, GroupTag tag) {
        GroupElem g;
        g.m = a.dim();
        g.tag = tag;
        QrSplit s = qr_split(a);
        g.o_part = s.orthogonal;
        g.r_part = s.triangular;
        g.matrix = std::move(a);
        return g;
    }

    // exact split known at construction: keeps scale entries bitwise stable
    // under the deformations instead of re-deriving them from a QR pass
    static GroupElem from_parts(Mat orthogonal, const Vec& scales, GroupTag tag) {
        GroupElem g;
        g.m = orthogonal.dim();
        g.tag = tag;
        g.r_part = Mat::diagonal(scales);
        g.matrix = orthogonal * g.r_part;
        g.o_part = std::move(orthogonal);
        return g;
    }

    static GroupElem identity(int m, GroupTag tag) { return make(Mat::identity(m), tag); }

    bool has_diagonal_scale(double eps = kLinEps) const { return is_diagonal(r_part, eps); }

    // diagonal of the triangular part
    Vec scale_diagonal() const {
        Vec d(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) d[static_cast<std::size_t>(i)] = r_part(i, i);
        return d;
    }
};

// membership of a matrix in the tagged family: the triangular factor must be
// diagonal and the orthogonal factor must lie in the tagged subgroup
inline bool check_dilation_member(const Mat& a, GroupTag tag, double eps = kLinEps,
                                  const OrthPredicate& custom = {}) {
    QrSplit s;
    try {
        s = qr_split(a);
    } catch (const std::invalid_argument&) {
        return false;
    }
    if (!is_diagonal(s.triangular, eps)) return false;
    switch (tag) {
        case GroupTag::dilation:
            return max_abs_diff(s.orthogonal, Mat::identity(a.dim())) <= eps;
        case GroupTag::orth_dilation:
            return true;
        case GroupTag::special_orth_dilation:
            return det(s.orthogonal) > 0.0;
        case GroupTag::custom:
            if (!custom) throw std::invalid_argument("check_dilation_member: custom tag needs a predicate");
            return custom(s.orthogonal);
    }
    return false;
}

struct SkewCube {
    Vec center;
    GroupElem g;
};

// x inside the open cube required; the affine image is matrix*x + center
inline Vec cube_embed(const SkewCube& c, const Vec& x) {
    if (static_cast<int>(x.size()) != c.g.m) throw std::invalid_argument("cube_embed: dimension mismatch");
    for (double v : x)
        if (!(std::abs(v) < 1.0)) throw std::invalid_argument("cube_embed: point outside the open cube");
    Vec y = mat_vec(c.g.matrix, x);
    for (int i = 0; i < c.g.m; ++i) y[static_cast<std::size_t>(i)] += c.center[static_cast<std::size_t>(i)];
    return y;
}

// signed distance of the image box to the boundary of the ambient cube,
// measured per coordinate by interval arithmetic (exact for boxes)
inline double containment_margin(const SkewCube& c) {
    double margin = 2.0;
    for (int d = 0; d < c.g.m; ++d) {
        double extent = 0.0;
        for (int j = 0; j < c.g.m; ++j) extent += std::abs(c.g.matrix(d, j));
        margin = std::min(margin, 1.0 - std::abs(c.center[static_cast<std::size_t>(d)]) - extent);
    }
    return margin;
}

struct SkewCubeTuple {
    int m = 0;
    GroupTag tag = GroupTag::dilation;
    std::vector<SkewCube> cubes;

    int arity() const { return static_cast<int>(cubes.size()); }
};

inline SkewCubeTuple unit_tuple(int m, GroupTag tag) {
    SkewCubeTuple t;
    t.m = m;
    t.tag = tag;
    t.cubes.push_back({Vec(static_cast<std::size_t>(m), 0.0), GroupElem::identity(m, tag)});
    return t;
}

// right action: (t.sigma)_r = t_{sigma(r)}
inline SkewCubeTuple act(const SkewCubeTuple& t, const Permutation& sigma) {
    if (sigma.arity() != t.arity()) throw std::invalid_argument("act: arity mismatch");
    SkewCubeTuple out;
    out.m = t.m;
    out.tag = t.tag;
    out.cubes.reserve(t.cubes.size());
    for (int r = 0; r < t.arity(); ++r) out.cubes.push_back(t.cubes[static_cast<std::size_t>(sigma(r))]);
    return out;
}

struct PairMargin {
    int i = 0, j = 0;
    double margin = 0.0;
};

struct ValidityReport {
    bool valid = false;
    double tol = kDefaultTol;
    std::vector<double> containment;
    std::vector<PairMargin> pairs;
    std::string failure;  // empty when valid
};

// containment margins >= -tol and pairwise separation margins >= tol.  The
// face-normal certificate is used as a fast accept; the program margin is the
// authority and is what reports carry.
inline ValidityReport validate_tuple(const SkewCubeTuple& t, double tol = kDefaultTol, bool fast = false) {
    ValidityReport rep;
    rep.tol = tol;
    rep.valid = true;
    for (const auto& c : t.cubes) {
        if (static_cast<int>(c.center.size()) != t.m || c.g.m != t.m)
            throw std::invalid_argument("validate_tuple: dimension mismatch");
        double margin = containment_margin(c);
        rep.containment.push_back(margin);
        if (!(margin >= -tol)) {
            rep.valid = false;
            if (rep.failure.empty())
                rep.failure = "cube " + std::to_string(rep.containment.size() - 1) + " escapes the cube";
        }
    }
    const int k = t.arity();
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            const auto& a = t.cubes[static_cast<std::size_t>(i)];
            const auto& b = t.cubes[static_cast<std::size_t>(j)];
            double margin;
            if (fast && certified_separated(a.g.matrix, a.center, b.g.matrix, b.center, tol)) {
                margin = tol;  // certified lower bound; exact value not needed
            } else {
                margin = separation_margin(a.g.matrix, a.center, b.g.matrix, b.center);
            }
            rep.pairs.push_back({i, j, margin});
            if (!(margin >= tol)) {
                rep.valid = false;
                if (rep.failure.empty())
                    rep.failure = "cubes " + std::to_string(i) + "," + std::to_string(j) + " overlap";
            }
        }
    return rep;
}

struct ComposeOptions {
    bool check_inputs = true;
    bool check_output = true;
    double tol = kDefaultTol;
};

// operadic composition: block i is the outer cube i applied to the cubes of
// the i-th inner tuple; valid inputs compose to valid output
inline SkewCubeTuple compose_tuples(const SkewCubeTuple& outer, std::span<const SkewCubeTuple> inners,
                                    ComposeOptions opts = {}) {
    if (static_cast<int>(inners.size()) != outer.arity())
        throw std::invalid_argument("compose_tuples: arity mismatch");
    for (const auto& inner : inners)
        if (inner.m != outer.m || inner.tag != outer.tag)
            throw std::invalid_argument("compose_tuples: dimension or group mismatch");
    if (opts.check_inputs) {
        if (!validate_tuple(outer, opts.tol, true).valid)
            throw std::invalid_argument("compose_tuples: invalid outer tuple");
        for (const auto& inner : inners)
            if (!validate_tuple(inner, opts.tol, true).valid)
                throw std::invalid_argument("compose_tuples: invalid inner tuple");
    }
    SkewCubeTuple out;
    out.m = outer.m;
    out.tag = outer.tag;
    for (int i = 0; i < outer.arity(); ++i) {
        const auto& oc = outer.cubes[static_cast<std::size_t>(i)];
        for (const auto& ic : inners[static_cast<std::size_t>(i)].cubes) {
            SkewCube c;
            c.center = mat_vec(oc.g.matrix, ic.center);
            for (int d = 0; d < out.m; ++d) c.center[static_cast<std::size_t>(d)] += oc.center[static_cast<std::size_t>(d)];
            c.g = GroupElem::make(oc.g.matrix * ic.g.matrix, out.tag);
            out.cubes.push_back(std::move(c));
        }
    }
    if (opts.check_output && !validate_tuple(out, opts.tol / 2, true).valid)
        throw std::logic_error("compose_tuples: composite failed validation");
    return out;
}

inline SkewCubeTuple compose_tuples(const SkewCubeTuple& outer, const std::vector<SkewCubeTuple>& inners,
                                    ComposeOptions opts = {}) {
    return compose_tuples(outer, std::span<const SkewCubeTuple>(inners.data(), inners.size()), opts);
}

// configuration of centers and frames; carries the G^k x Sigma_k actions
struct FramedConfiguration {
    int m = 0;
    std::vector<Vec> points;
    std::vector<GroupElem> frames;

    int arity() const { return static_cast<int>(points.size()); }
};

inline FramedConfiguration act(const FramedConfiguration& c, const Permutation& sigma) {
    FramedConfiguration out;
    out.m = c.m;
    for (int r = 0; r < c.arity(); ++r) {
        out.points.push_back(c.points[static_cast<std::size_t>(sigma(r))]);
        out.frames.push_back(c.frames[static_cast<std::size_t>(sigma(r))]);
    }
    return out;
}

inline FramedConfiguration frame_act(const FramedConfiguration& c, const std::vector<GroupElem>& hs) {
    if (hs.size() != c.frames.size()) throw std::invalid_argument("frame_act: arity mismatch");
    FramedConfiguration out = c;
    for (std::size_t i = 0; i < hs.size(); ++i)
        out.frames[i] = GroupElem::make(c.frames[i].matrix * hs[i].matrix, c.frames[i].tag);
    return out;
}

// forgetful projection onto centers and frames
inline FramedConfiguration pi_map(const SkewCubeTuple& t) {
    FramedConfiguration out;
    out.m = t.m;
    for (const auto& c : t.cubes) {
        out.points.push_back(c.center);
        out.frames.push_back(c.g);
    }
    return out;
}

enum class Side { left, right };

// pad a tuple into m+n dimensions: centers extended by zero, matrices by an
// identity block on the other factor
inline SkewCubeTuple embed_factor(const SkewCubeTuple& t, int n, Side side) {
    SkewCubeTuple out;
    out.m = t.m + n;
    out.tag = t.tag;
    for (const auto& c : t.cubes) {
        Vec center(static_cast<std::size_t>(out.m), 0.0);
        Mat mat = Mat::identity(out.m);
        int off = side == Side::left ? 0 : n;
        for (int i = 0; i < t.m; ++i) {
            center[static_cast<std::size_t>(off + i)] = c.center[static_cast<std::size_t>(i)];
            for (int j = 0; j < t.m; ++j) mat(off + i, off + j) = c.g.matrix(i, j);
        }
        out.cubes.push_back({std::move(center), GroupElem::make(std::move(mat), t.tag)});
    }
    return out;
}

// generator-level product: cube (i,j) has center (v_i, w_j) and matrix
// diag(g_i, h_j), listed in row-major order over (i, j)
inline SkewCubeTuple product_generator(const SkewCubeTuple& p, const SkewCubeTuple& q) {
    SkewCubeTuple out;
    out.m = p.m + q.m;
    out.tag = tag_join(p.tag, q.tag);
    for (const auto& pc : p.cubes)
        for (const auto& qc : q.cubes) {
            Vec center(static_cast<std::size_t>(out.m), 0.0);
            Mat mat = Mat::identity(out.m);
            for (int i = 0; i < p.m; ++i) {
                center[static_cast<std::size_t>(i)] = pc.center[static_cast<std::size_t>(i)];
                for (int j = 0; j < p.m; ++j) mat(i, j) = pc.g.matrix(i, j);
            }
            for (int i = 0; i < q.m; ++i) {
                center[static_cast<std::size_t>(p.m + i)] = qc.center[static_cast<std::size_t>(i)];
                for (int j = 0; j < q.m; ++j) mat(p.m + i, p.m + j) = qc.g.matrix(i, j);
            }
            out.cubes.push_back({std::move(center), GroupElem::make(std::move(mat), out.tag)});
        }
    return out;
}

inline double tuple_deviation(const SkewCubeTuple& a, const SkewCubeTuple& b) {
    if (a.arity() != b.arity() || a.m != b.m) return 1e300;
    double dev = 0.0;
    for (int i = 0; i < a.arity(); ++i) {
        dev = std::max(dev, max_abs_diff(a.cubes[static_cast<std::size_t>(i)].center,
                                         b.cubes[static_cast<std::size_t>(i)].center));
        dev = std::max(dev, max_abs_diff(a.cubes[static_cast<std::size_t>(i)].g.matrix,
                                         b.cubes[static_cast<std::size_t>(i)].g.matrix));
    }
    return dev;
}

struct InterchangeResult {
    bool ok = false;
    double max_deviation = 0.0;
};

// Both composites of the interchange relation, evaluated in the product
// dimension: (p; q,..,q) against (q; p,..,p) twisted by the transpose
// permutation.  Valid generator pairs agree exactly.
inline InterchangeResult interchange_check(const SkewCubeTuple& p, const SkewCubeTuple& q,
                                           double tol = kDefaultTol) {
    const int k = p.arity(), l = q.arity();
    SkewCubeTuple pe = embed_factor(p, q.m, Side::left);
    SkewCubeTuple qe = embed_factor(q, p.m, Side::right);
    pe.tag = qe.tag = tag_join(p.tag, q.tag);
    ComposeOptions opts;
    opts.check_inputs = false;
    opts.check_output = false;
    SkewCubeTuple side1 = compose_tuples(pe, std::vector<SkewCubeTuple>(static_cast<std::size_t>(k), qe), opts);
    SkewCubeTuple side2 = compose_tuples(qe, std::vector<SkewCubeTuple>(static_cast<std::size_t>(l), pe), opts);
    side2 = act(side2, transpose_perm(k, l));
    InterchangeResult res;
    res.max_deviation = tuple_deviation(side1, side2);
    res.ok = res.max_deviation <= tol;
    return res;
}

// --- random generation for the suites ----------------------------------------

// a valid tuple with healthy margins: centers separated in the sup metric,
// scales capped by the free space around each center
inline SkewCubeTuple random_tuple(Rng& rng, int m, int k, GroupTag tag) {
    SkewCubeTuple out;
    out.m = m;
    out.tag = tag;
    if (k == 0) return out;
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<Vec> centers;
        double sep = 1.0 / std::pow(static_cast<double>(k), 1.0 / m);
        int guard = 0;
        while (static_cast<int>(centers.size()) < k && guard < 4000) {
            ++guard;
            Vec v(static_cast<std::size_t>(m));
            for (int d = 0; d < m; ++d) v[static_cast<std::size_t>(d)] = rng.uniform(-0.85, 0.85);
            bool ok = true;
            for (const auto& w : centers) {
                double dist = 0.0;
                for (int d = 0; d < m; ++d)
                    dist = std::max(dist, std::abs(v[static_cast<std::size_t>(d)] - w[static_cast<std::size_t>(d)]));
                if (dist < 0.45 * sep) ok = false;
            }
            if (ok) centers.push_back(std::move(v));
        }
        if (static_cast<int>(centers.size()) < k) continue;
        out.cubes.clear();
        for (int i = 0; i < k; ++i) {
            double avail = 1.0 - inf_norm(centers[static_cast<std::size_t>(i)]);
            for (int j = 0; j < k; ++j) {
                if (j == i) continue;
                double dist = 0.0;
                for (int d = 0; d < m; ++d)
                    dist = std::max(dist, std::abs(centers[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] -
                                                   centers[static_cast<std::size_t>(j)][static_cast<std::size_t>(d)]));
                avail = std::min(avail, dist / 2.0);
            }
            double cap = 0.9 * avail / std::sqrt(static_cast<double>(m));
            Vec diag(static_cast<std::size_t>(m));
            for (int d = 0; d < m; ++d) diag[static_cast<std::size_t>(d)] = cap * rng.uniform(0.3, 1.0);
            Mat a = Mat::diagonal(diag);
            if (tag == GroupTag::orth_dilation)
                a = random_orthogonal(rng, m) * a;
            else if (tag == GroupTag::special_orth_dilation)
                a = random_orthogonal(rng, m, true) * a;
            out.cubes.push_back({centers[static_cast<std::size_t>(i)], GroupElem::make(a, tag)});
        }
        if (validate_tuple(out, kDefaultTol, true).valid) return out;
    }
    throw std::runtime_error("random_tuple: sampling budget exhausted");
}

}  // namespace skewcubes
