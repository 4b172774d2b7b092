#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "skewcubes/skew_cubes.hpp"

namespace skewcubes {

namespace detail {

inline void require_diagonal_scales(const SkewCubeTuple& t, const char* who) {
    for (const auto& c : t.cubes)
        if (!c.g.has_diagonal_scale())
            throw std::invalid_argument(std::string(who) + ": matrix is not orthogonal times diagonal");
}

}  // namespace detail

// every scale factor is one common scalar, across cubes and coordinates
inline bool is_equidiameter(const SkewCubeTuple& t, double tol = kDefaultTol) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& c : t.cubes) {
        if (!c.g.has_diagonal_scale(tol)) return false;
        for (double v : c.g.scale_diagonal()) {
            if (first) {
                lo = hi = v;
                first = false;
            } else {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    return first || hi - lo <= tol;
}

inline double common_scale(const SkewCubeTuple& t) {
    double sum = 0.0;
    int n = 0;
    for (const auto& c : t.cubes)
        for (double v : c.g.scale_diagonal()) {
            sum += v;
            ++n;
        }
    return n ? sum / n : 0.0;
}

// Ball oracle: an equidiameter tuple can rotate freely in place iff the balls
// circumscribing its boxes stay inside the cube and pairwise disjoint.  The
// circumscribed ball of a box with half-side s has radius s*sqrt(m).
inline bool is_freewheeling(const SkewCubeTuple& t, double tol = kDefaultTol) {
    if (t.arity() == 0) return true;
    if (!is_equidiameter(t, tol)) return false;
    const double s = common_scale(t);
    const double radius = s * std::sqrt(static_cast<double>(t.m));
    for (const auto& c : t.cubes)
        if (!(radius <= 1.0 - inf_norm(c.center) - tol)) return false;
    for (int i = 0; i < t.arity(); ++i)
        for (int j = i + 1; j < t.arity(); ++j) {
            double d = euclid_dist(t.cubes[static_cast<std::size_t>(i)].center,
                                   t.cubes[static_cast<std::size_t>(j)].center);
            if (!(d >= 2.0 * radius + tol)) return false;
        }
    return true;
}

// Secondary oracle: rotate the boxes in place and validate.  Besides random
// rotations it always includes the adversarial ones (corners aligned along
// center lines and toward the nearest face), so a failure of the ball
// criterion is witnessed deterministically.
inline bool rotation_oracle(const SkewCubeTuple& t, double tol, Rng& rng, int random_samples = 10) {
    if (t.arity() == 0) return true;
    if (!is_equidiameter(t, tol)) return false;
    const int m = t.m, k = t.arity();
    const double s = common_scale(t);
    Vec diag_dir(static_cast<std::size_t>(m), 1.0 / std::sqrt(static_cast<double>(m)));

    auto rotated = [&](const std::vector<Mat>& os) {
        SkewCubeTuple out;
        out.m = m;
        out.tag = GroupTag::orth_dilation;
        for (int i = 0; i < k; ++i)
            out.cubes.push_back({t.cubes[static_cast<std::size_t>(i)].center,
                                 GroupElem::from_parts(os[static_cast<std::size_t>(i)],
                                                       Vec(static_cast<std::size_t>(m), s), out.tag)});
        return out;
    };
    auto passes = [&](const SkewCubeTuple& cand) {
        ValidityReport rep = validate_tuple(cand, tol);
        if (!rep.valid) return false;
        for (double margin : rep.containment)
            if (!(margin >= tol)) return false;  // strict on both sides for rotations
        return true;
    };

    std::vector<Mat> ids(static_cast<std::size_t>(k), Mat::identity(m));
    if (!passes(rotated(ids))) return false;
    for (int rep = 0; rep < random_samples; ++rep) {
        std::vector<Mat> os;
        for (int i = 0; i < k; ++i) os.push_back(random_orthogonal(rng, m));
        if (!passes(rotated(os))) return false;
    }
    // corner-to-corner along each center line
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            Vec u(static_cast<std::size_t>(m));
            double d = euclid_dist(t.cubes[static_cast<std::size_t>(i)].center,
                                   t.cubes[static_cast<std::size_t>(j)].center);
            if (d <= 0) return false;
            for (int x = 0; x < m; ++x)
                u[static_cast<std::size_t>(x)] = (t.cubes[static_cast<std::size_t>(j)].center[static_cast<std::size_t>(x)] -
                                                  t.cubes[static_cast<std::size_t>(i)].center[static_cast<std::size_t>(x)]) /
                                                 d;
            std::vector<Mat> os = ids;
            os[static_cast<std::size_t>(i)] = orthogonal_sending(diag_dir, u);
            Vec nu = u;
            for (double& x : nu) x = -x;
            os[static_cast<std::size_t>(j)] = orthogonal_sending(diag_dir, nu);
            if (!passes(rotated(os))) return false;
        }
    // corner toward the nearest face of the ambient cube
    for (int i = 0; i < k; ++i) {
        const Vec& v = t.cubes[static_cast<std::size_t>(i)].center;
        int worst = 0;
        double best = -1.0;
        for (int x = 0; x < m; ++x)
            if (std::abs(v[static_cast<std::size_t>(x)]) > best) {
                best = std::abs(v[static_cast<std::size_t>(x)]);
                worst = x;
            }
        Vec e(static_cast<std::size_t>(m), 0.0);
        e[static_cast<std::size_t>(worst)] = v[static_cast<std::size_t>(worst)] >= 0 ? 1.0 : -1.0;
        std::vector<Mat> os = ids;
        os[static_cast<std::size_t>(i)] = orthogonal_sending(diag_dir, e);
        if (!passes(rotated(os))) return false;
    }
    return true;
}

namespace detail {

// interpolate the diagonal scales toward a target scalar, keeping centers and
// orthogonal parts; entries already at the target are carried over bitwise so
// the fixed subspace stays fixed with zero deviation
inline SkewCubeTuple scale_homotopy(const SkewCubeTuple& t, double time, double target) {
    SkewCubeTuple out;
    out.m = t.m;
    out.tag = t.tag;
    for (const auto& c : t.cubes) {
        Vec d = c.g.scale_diagonal();
        bool moved = false;
        for (double& v : d) {
            if (v != target) {
                v = (1.0 - time) * v + time * target;
                moved = true;
            }
        }
        if (!moved || time == 0.0) {
            out.cubes.push_back(c);
        } else {
            out.cubes.push_back({c.center, GroupElem::from_parts(c.g.o_part, d, t.tag)});
        }
    }
    return out;
}

}  // namespace detail

inline double min_scale_entry(const SkewCubeTuple& t) {
    double mn = 0.0;
    bool first = true;
    for (const auto& c : t.cubes)
        for (double v : c.g.scale_diagonal()) {
            if (first) {
                mn = v;
                first = false;
            } else
                mn = std::min(mn, v);
        }
    return mn;
}

// first deformation: all scale entries flow to the least entry present
inline SkewCubeTuple equidiameter_homotopy(const SkewCubeTuple& t, double time) {
    if (time < 0.0 || time > 1.0) throw std::invalid_argument("equidiameter_homotopy: time outside [0,1]");
    detail::require_diagonal_scales(t, "equidiameter_homotopy");
    if (t.arity() == 0) return t;
    return detail::scale_homotopy(t, time, min_scale_entry(t));
}

inline double default_freewheel_coeff(int m) { return 0.5 / std::sqrt(static_cast<double>(m)); }

// second deformation: the common scalar flows to the freewheeling bound.  The
// pairwise and boundary clamps are shaved by a relative 1e-6 so the endpoint
// clears the ball criterion at tolerance; freewheeling inputs are returned
// unchanged.
inline SkewCubeTuple freewheeling_homotopy(const SkewCubeTuple& t, double time, double coeff,
                                           double tol = kDefaultTol) {
    if (time < 0.0 || time > 1.0) throw std::invalid_argument("freewheeling_homotopy: time outside [0,1]");
    if (!is_equidiameter(t, tol))
        throw std::invalid_argument("freewheeling_homotopy: input is not equidiameter");
    if (t.arity() == 0) return t;
    if (is_freewheeling(t, tol)) return t;
    const double shave = 1.0 - 1e-6;
    double target = min_scale_entry(t);
    double boundary = 2.0;
    for (const auto& c : t.cubes) boundary = std::min(boundary, 1.0 - inf_norm(c.center));
    target = std::min(target, (boundary / std::sqrt(static_cast<double>(t.m))) * shave);
    if (t.arity() >= 2) {
        double minpair = 1e300;
        for (int i = 0; i < t.arity(); ++i)
            for (int j = i + 1; j < t.arity(); ++j)
                minpair = std::min(minpair, euclid_dist(t.cubes[static_cast<std::size_t>(i)].center,
                                                        t.cubes[static_cast<std::size_t>(j)].center));
        target = std::min(target, coeff * minpair * shave);
    }
    return detail::scale_homotopy(t, time, target);
}

struct FreewheelSplit {
    SkewCubeTuple classical;          // same centers, scalar boxes, diagonal family
    std::vector<Mat> rotations;       // the orthogonal parts
    GroupTag tag = GroupTag::dilation;  // original family, for the inverse
};

// a freewheeling tuple is a classical equidiameter tuple plus one rotation
// per cube; only freewheeling tuples split, because only there every choice
// of rotations assembles back into a valid tuple
inline FreewheelSplit freewheel_split(const SkewCubeTuple& t, double tol = kDefaultTol) {
    if (!is_freewheeling(t, tol)) throw std::invalid_argument("freewheel_split: input is not freewheeling");
    FreewheelSplit out;
    out.tag = t.tag;
    out.classical.m = t.m;
    out.classical.tag = GroupTag::dilation;
    for (const auto& c : t.cubes) {
        Vec d = c.g.scale_diagonal();
        double s = 0.0;
        for (double v : d) s += v;
        s /= static_cast<double>(t.m);
        out.classical.cubes.push_back(
            {c.center, GroupElem::make(Mat::diagonal(Vec(static_cast<std::size_t>(t.m), s)), GroupTag::dilation)});
        out.rotations.push_back(c.g.o_part);
    }
    return out;
}

inline SkewCubeTuple freewheel_unsplit(const FreewheelSplit& s) {
    SkewCubeTuple out;
    out.m = s.classical.m;
    out.tag = s.tag;
    if (s.rotations.size() != s.classical.cubes.size())
        throw std::invalid_argument("freewheel_unsplit: rotation count mismatch");
    for (std::size_t i = 0; i < s.rotations.size(); ++i) {
        Mat a = s.rotations[i] * s.classical.cubes[i].g.matrix;
        out.cubes.push_back({s.classical.cubes[i].center, GroupElem::make(std::move(a), s.tag)});
    }
    return out;
}

// sampled deformation path; frames[0] is the input
struct HomotopyTrace {
    std::vector<double> t_samples;
    std::vector<SkewCubeTuple> frames;
};

enum class RetractStage { equidiameter, freewheeling };

inline HomotopyTrace build_trace(const SkewCubeTuple& t, RetractStage stage, int samples, double coeff,
                                 double tol = kDefaultTol) {
    if (samples < 2) throw std::invalid_argument("build_trace: need at least two samples");
    HomotopyTrace tr;
    for (int i = 0; i < samples; ++i) {
        double time = static_cast<double>(i) / static_cast<double>(samples - 1);
        tr.t_samples.push_back(time);
        tr.frames.push_back(stage == RetractStage::equidiameter ? equidiameter_homotopy(t, time)
                                                                : freewheeling_homotopy(t, time, coeff, tol));
    }
    return tr;
}

}  // namespace skewcubes
