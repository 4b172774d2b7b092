#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewcubes/rng.hpp"
#include "skewcubes/skew_cubes.hpp"

namespace skewcubes {

// open axis-aligned box (lo, hi), lo < hi componentwise
struct Box {
    Vec lo, hi;

    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const Vec& p) const {
        for (std::size_t d = 0; d < lo.size(); ++d)
            if (!(lo[d] < p[d] && p[d] < hi[d])) return false;
        return true;
    }
    double volume() const {
        double v = 1.0;
        for (std::size_t d = 0; d < lo.size(); ++d) v *= hi[d] - lo[d];
        return v;
    }
};

inline bool boxes_disjoint(const Box& a, const Box& b) {
    for (std::size_t d = 0; d < a.lo.size(); ++d)
        if (a.hi[d] <= b.lo[d] || b.hi[d] <= a.lo[d]) return true;
    return false;
}

inline std::optional<Box> box_intersection(const Box& a, const Box& b) {
    Box out;
    out.lo.resize(a.lo.size());
    out.hi.resize(a.lo.size());
    for (std::size_t d = 0; d < a.lo.size(); ++d) {
        out.lo[d] = std::max(a.lo[d], b.lo[d]);
        out.hi[d] = std::min(a.hi[d], b.hi[d]);
        if (!(out.lo[d] < out.hi[d])) return std::nullopt;
    }
    return out;
}

// finite union of pairwise-disjoint open boxes
struct BoxRegion {
    int m = 0;
    std::vector<Box> boxes;

    bool empty() const { return boxes.empty(); }
    bool contains(const Vec& p) const {
        for (const auto& b : boxes)
            if (b.contains(p)) return true;
        return false;
    }
    double volume() const {
        double v = 0.0;
        for (const auto& b : boxes) v += b.volume();
        return v;
    }
};

inline BoxRegion make_region(int m, std::vector<Box> boxes) {
    BoxRegion r;
    r.m = m;
    for (const auto& b : boxes)
        if (b.dim() != m) throw std::invalid_argument("make_region: box dimension mismatch");
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        for (std::size_t d = 0; d < boxes[i].lo.size(); ++d)
            if (!(boxes[i].lo[d] < boxes[i].hi[d]))
                throw std::invalid_argument("make_region: degenerate box");
        for (std::size_t j = i + 1; j < boxes.size(); ++j)
            if (!boxes_disjoint(boxes[i], boxes[j]))
                throw std::invalid_argument("make_region: boxes overlap");
    }
    r.boxes = std::move(boxes);
    return r;
}

inline BoxRegion cube_region(int m) {
    Box b;
    b.lo.assign(static_cast<std::size_t>(m), -1.0);
    b.hi.assign(static_cast<std::size_t>(m), 1.0);
    return make_region(m, {b});
}

// region containment: each box, being connected, must sit inside a single box
// of the other region
inline bool region_contains(const BoxRegion& outer, const BoxRegion& inner) {
    for (const auto& a : inner.boxes) {
        bool placed = false;
        for (const auto& b : outer.boxes) {
            bool inside = true;
            for (std::size_t d = 0; d < a.lo.size(); ++d)
                if (a.lo[d] < b.lo[d] || a.hi[d] > b.hi[d]) {
                    inside = false;
                    break;
                }
            if (inside) {
                placed = true;
                break;
            }
        }
        if (!placed) return false;
    }
    return true;
}

inline BoxRegion region_intersection(const BoxRegion& a, const BoxRegion& b) {
    BoxRegion out;
    out.m = a.m;
    for (const auto& x : a.boxes)
        for (const auto& y : b.boxes)
            if (auto z = box_intersection(x, y)) out.boxes.push_back(*z);
    return out;
}

// product region in the sum dimension; products of disjoint unions stay
// disjoint boxwise
inline BoxRegion region_product(const BoxRegion& a, const BoxRegion& b) {
    BoxRegion out;
    out.m = a.m + b.m;
    for (const auto& x : a.boxes)
        for (const auto& y : b.boxes) {
            Box p;
            p.lo = x.lo;
            p.hi = x.hi;
            p.lo.insert(p.lo.end(), y.lo.begin(), y.lo.end());
            p.hi.insert(p.hi.end(), y.hi.begin(), y.hi.end());
            out.boxes.push_back(std::move(p));
        }
    return out;
}

// seeded rejection sampling of a configuration with a pairwise separation
// floor; deterministic per seed, throws after a bounded retry budget
inline FramedConfiguration sample_configuration(const BoxRegion& region, int k, double min_sep, Rng& rng) {
    if (region.empty() && k > 0) throw std::runtime_error("sample_configuration: empty region");
    FramedConfiguration out;
    out.m = region.m;
    if (k == 0) return out;
    double total = region.volume();
    long long budget = 2000LL * (k + 1);
    while (static_cast<int>(out.points.size()) < k) {
        if (--budget < 0) throw std::runtime_error("sample_configuration: retry budget exhausted");
        double pick = rng.uniform01() * total;
        const Box* box = &region.boxes.back();
        for (const auto& b : region.boxes) {
            pick -= b.volume();
            if (pick <= 0) {
                box = &b;
                break;
            }
        }
        Vec p(static_cast<std::size_t>(region.m));
        for (int d = 0; d < region.m; ++d)
            p[static_cast<std::size_t>(d)] = rng.uniform(box->lo[static_cast<std::size_t>(d)], box->hi[static_cast<std::size_t>(d)]);
        bool ok = true;
        for (const auto& q : out.points)
            if (euclid_dist(p, q) < min_sep) {
                ok = false;
                break;
            }
        if (ok) {
            out.points.push_back(std::move(p));
            out.frames.push_back(GroupElem::identity(region.m, GroupTag::orth_dilation));
        }
    }
    return out;
}

// cube-level avatar of the evaluation map: the embedding of each cube applied
// to the origin, paired with its frame
inline FramedConfiguration evaluation_at_origin(const SkewCubeTuple& t) {
    FramedConfiguration out;
    out.m = t.m;
    for (const auto& c : t.cubes) {
        out.points.push_back(cube_embed(c, Vec(static_cast<std::size_t>(t.m), 0.0)));
        out.frames.push_back(c.g);
    }
    return out;
}

// disjoint open boxes around the distinct points of each set, radius below
// half the minimal pairwise sup-distance and clamped into the ambient region
struct NeighborhoodPair {
    BoxRegion u, v;
};

inline BoxRegion disjoint_neighborhoods(const std::vector<Vec>& pts, const BoxRegion& region) {
    std::vector<Vec> distinct;
    for (const auto& p : pts) {
        bool seen = false;
        for (const auto& q : distinct)
            if (max_abs_diff(p, q) == 0.0) seen = true;
        if (!seen) distinct.push_back(p);
    }
    BoxRegion out;
    out.m = region.m;
    if (distinct.empty()) return out;
    double r = 1e300;
    for (std::size_t i = 0; i < distinct.size(); ++i)
        for (std::size_t j = i + 1; j < distinct.size(); ++j)
            r = std::min(r, max_abs_diff(distinct[i], distinct[j]) / 2.0);
    for (const auto& p : distinct) {
        // stay inside the hosting box of the region
        const Box* host = nullptr;
        for (const auto& b : region.boxes)
            if (b.contains(p)) host = &b;
        if (!host) throw std::invalid_argument("disjoint_neighborhoods: point outside region");
        double rad = r;
        for (int d = 0; d < region.m; ++d) {
            rad = std::min(rad, p[static_cast<std::size_t>(d)] - host->lo[static_cast<std::size_t>(d)]);
            rad = std::min(rad, host->hi[static_cast<std::size_t>(d)] - p[static_cast<std::size_t>(d)]);
        }
        rad *= 0.5;
        Box nb;
        nb.lo.resize(static_cast<std::size_t>(region.m));
        nb.hi.resize(static_cast<std::size_t>(region.m));
        for (int d = 0; d < region.m; ++d) {
            nb.lo[static_cast<std::size_t>(d)] = p[static_cast<std::size_t>(d)] - rad;
            nb.hi[static_cast<std::size_t>(d)] = p[static_cast<std::size_t>(d)] + rad;
        }
        out.boxes.push_back(std::move(nb));
    }
    return make_region(region.m, std::move(out.boxes));
}

inline NeighborhoodPair build_disjoint_neighborhoods(const std::vector<Vec>& s, const std::vector<Vec>& t,
                                                     const BoxRegion& region_m, const BoxRegion& region_n) {
    return {disjoint_neighborhoods(s, region_m), disjoint_neighborhoods(t, region_n)};
}

// A cover is either an explicit finite list of members or the constructive
// rule that produces a product of disjoint point neighborhoods for any given
// finite subset (the disk-products cover of a product of two regions).
struct CoverSpec {
    enum class Kind { explicit_members, disk_products } kind = Kind::explicit_members;
    BoxRegion region;  // for disk products, the product of the two factors
    std::vector<BoxRegion> members;
    BoxRegion factor_m, factor_n;
};

inline CoverSpec explicit_cover(BoxRegion region, std::vector<BoxRegion> members) {
    CoverSpec c;
    c.kind = CoverSpec::Kind::explicit_members;
    c.region = std::move(region);
    for (const auto& mref : members)
        if (!region_contains(c.region, mref))
            throw std::invalid_argument("explicit_cover: member not contained in region");
    c.members = std::move(members);
    return c;
}

inline CoverSpec disk_product_cover(BoxRegion factor_m, BoxRegion factor_n) {
    CoverSpec c;
    c.kind = CoverSpec::Kind::disk_products;
    c.region = region_product(factor_m, factor_n);
    c.factor_m = std::move(factor_m);
    c.factor_n = std::move(factor_n);
    return c;
}

struct WeissReport {
    bool pass = true;
    std::uint64_t seed = 0;
    struct PerK {
        int k = 0;
        int trials = 0;
        int failures = 0;
        std::vector<Vec> witness;  // first failing subset, if any
    };
    std::vector<PerK> per_k;
};

namespace detail {

inline bool member_covers(const BoxRegion& member, const std::vector<Vec>& pts) {
    for (const auto& p : pts)
        if (!member.contains(p)) return false;
    return true;
}

}  // namespace detail

// sampling evidence for the finite-subset property: every sampled subset of
// size <= k_max must land in some member (or in the constructed member for
// rule-based covers)
inline WeissReport check_weiss_cover(const CoverSpec& cover, int k_max, int trials, std::uint64_t seed) {
    WeissReport report;
    report.seed = seed;
    Rng rng = Rng(seed).derive("weiss");
    for (int k = 0; k <= k_max; ++k) {
        WeissReport::PerK row;
        row.k = k;
        row.trials = trials;
        for (int trial = 0; trial < trials; ++trial) {
            FramedConfiguration conf = sample_configuration(cover.region, k, 0.0, rng);
            bool covered = false;
            if (cover.kind == CoverSpec::Kind::explicit_members) {
                for (const auto& member : cover.members)
                    if (detail::member_covers(member, conf.points)) {
                        covered = true;
                        break;
                    }
            } else {
                // constructive rule: split the pairs, build neighborhoods,
                // take the product; the member must exist, cover, and embed
                std::vector<Vec> s, t;
                const int dm = cover.factor_m.m;
                for (const auto& p : conf.points) {
                    s.emplace_back(p.begin(), p.begin() + dm);
                    t.emplace_back(p.begin() + dm, p.end());
                }
                auto nb = build_disjoint_neighborhoods(s, t, cover.factor_m, cover.factor_n);
                BoxRegion member = region_product(nb.u, nb.v);
                covered = (k == 0) || (detail::member_covers(member, conf.points) &&
                                       region_contains(cover.region, member));
            }
            if (!covered) {
                ++row.failures;
                if (row.witness.empty()) row.witness = conf.points;
                report.pass = false;
            }
        }
        report.per_k.push_back(std::move(row));
    }
    return report;
}

struct CompleteWeissReport {
    bool pass = true;
    std::uint64_t seed = 0;
    int subcollections = 0;
    std::vector<WeissReport> failures;  // reports of failed intersections
};

// completeness: for sampled finite sub-collections, the members contained in
// their intersection must again verify the finite-subset property there
inline CompleteWeissReport check_complete_weiss(const CoverSpec& cover, int subset_size, int k_max, int trials,
                                                std::uint64_t seed) {
    CompleteWeissReport report;
    report.seed = seed;
    Rng rng = Rng(seed).derive("complete");
    const int rounds = std::max(4, trials / 8);
    for (int round = 0; round < rounds; ++round) {
        int takes = 1 + rng.uniform_int(std::max(1, subset_size));
        BoxRegion inter;
        bool started = false;
        CoverSpec restricted;
        if (cover.kind == CoverSpec::Kind::explicit_members) {
            if (cover.members.empty()) continue;
            for (int i = 0; i < takes; ++i) {
                const BoxRegion& mem = cover.members[static_cast<std::size_t>(rng.uniform_int(
                    static_cast<int>(cover.members.size())))];
                inter = started ? region_intersection(inter, mem) : mem;
                started = true;
            }
            std::vector<BoxRegion> inside;
            for (const auto& mem : cover.members)
                if (region_contains(inter, mem)) inside.push_back(mem);
            restricted = CoverSpec{};
            restricted.kind = CoverSpec::Kind::explicit_members;
            restricted.region = inter;
            restricted.members = std::move(inside);
        } else {
            // members are products U_i x V_i built from sampled subsets; the
            // intersection of products is the product of intersections
            BoxRegion um, vn;
            bool first = true;
            for (int i = 0; i < takes; ++i) {
                int pts = 1 + rng.uniform_int(3);
                FramedConfiguration conf = sample_configuration(cover.region, pts, 0.0, rng);
                std::vector<Vec> s, t;
                const int dm = cover.factor_m.m;
                for (const auto& p : conf.points) {
                    s.emplace_back(p.begin(), p.begin() + dm);
                    t.emplace_back(p.begin() + dm, p.end());
                }
                auto nb = build_disjoint_neighborhoods(s, t, cover.factor_m, cover.factor_n);
                BoxRegion prod = region_product(nb.u, nb.v);
                if (first) {
                    inter = prod;
                    um = nb.u;
                    vn = nb.v;
                    first = false;
                } else {
                    inter = region_intersection(inter, prod);
                    um = region_intersection(um, nb.u);
                    vn = region_intersection(vn, nb.v);
                }
            }
            // the box-algebra identity behind the construction
            BoxRegion product_of_inters = region_product(um, vn);
            if (inter.boxes.size() != product_of_inters.boxes.size() ||
                region_contains(inter, product_of_inters) == false ||
                region_contains(product_of_inters, inter) == false) {
                report.pass = false;
                continue;
            }
            if (um.empty() || vn.empty()) continue;
            restricted = disk_product_cover(um, vn);
        }
        ++report.subcollections;
        if (restricted.kind == CoverSpec::Kind::explicit_members && restricted.region.empty()) continue;
        WeissReport sub = check_weiss_cover(restricted, k_max, std::max(1, trials / 8),
                                            rng.next_u64());
        if (!sub.pass) {
            report.pass = false;
            report.failures.push_back(std::move(sub));
        }
    }
    return report;
}

}  // namespace skewcubes
