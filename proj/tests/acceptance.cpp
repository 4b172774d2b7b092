// Acceptance suite: one line per criterion, exit status zero only when every
// criterion holds at its stated tolerance.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "oracle_helpers.hpp"
#include "product_isos.hpp"
#include "skewcubes/conf_weiss.hpp"
#include "skewcubes/json_io.hpp"
#include "skewcubes/law_suite.hpp"
#include "skewcubes/retraction.hpp"

using namespace skewcubes;
using namespace skewcubes::testing;

namespace {

constexpr double kTol = 1e-9;
constexpr std::uint64_t kSeed = 20240817;

struct Criterion {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        if (detail.empty()) detail = why;
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

GroupTag tag_of(int i) {
    switch (i) {
        case 0: return GroupTag::dilation;
        case 1: return GroupTag::orth_dilation;
        default: return GroupTag::special_orth_dilation;
    }
}

Permutation random_perm(Rng& rng, int k) {
    std::vector<int> img(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) img[static_cast<std::size_t>(i)] = i;
    for (int i = k - 1; i > 0; --i)
        std::swap(img[static_cast<std::size_t>(i)], img[static_cast<std::size_t>(rng.uniform_int(i + 1))]);
    return Permutation::from_images(img);
}

// valid equidiameter tuples that are deliberately too crowded to freewheel:
// axis-aligned row of boxes with gaps below the ball bound
SkewCubeTuple crowded_tuple(Rng& rng, int m, int k) {
    double gap = rng.uniform(0.35, 0.5);
    double s = 0.45 * gap;
    SkewCubeTuple t;
    t.m = m;
    t.tag = GroupTag::dilation;
    double x0 = -gap * (k - 1) / 2.0;
    for (int i = 0; i < k; ++i) {
        Vec center(static_cast<std::size_t>(m), 0.0);
        center[0] = x0 + gap * i;
        t.cubes.push_back(
            {center, GroupElem::from_parts(Mat::identity(m), Vec(static_cast<std::size_t>(m), s), t.tag)});
    }
    return t;
}

// --- criterion 1: operad law suite -------------------------------------------

Criterion criterion_operad_laws() {
    auto start = std::chrono::steady_clock::now();
    Criterion c;
    double worst = 0.0;
    Rng root(kSeed);
    for (int m = 1; m <= 3; ++m)
        for (int g = 0; g < 3; ++g) {
            Rng stream = root.derive("laws").derive(static_cast<std::uint64_t>(m * 10 + g));
            OperadLawResult r = run_operad_law_suite(m, tag_of(g), 1000, kTol, stream);
            worst = std::max({worst, r.dev_associativity, r.dev_unit, r.dev_equivariance_outer,
                              r.dev_equivariance_inner});
            if (!r.pass) c.fail("law deviation above tolerance at m=" + std::to_string(m));
        }
    double elapsed = seconds_since(start);
    if (elapsed > 60.0) c.fail("runtime above 60 s");
    char buf[160];
    std::snprintf(buf, sizeof buf, "9 groups x 1000 composites, max dev %.2e, %.1f s", worst, elapsed);
    c.detail = c.pass ? buf : c.detail + " (" + buf + ")";
    return c;
}

// --- criterion 2: interchange ---------------------------------------------------

Criterion criterion_interchange() {
    Criterion c;
    Rng stream = Rng(kSeed).derive("interchange");
    InterchangeSuiteResult r = run_interchange_suite(500, kTol, stream);
    if (r.max_deviation > kTol) c.fail("composites disagree");
    if (r.negatives_detected != r.negatives_total) c.fail("a negative control slipped through");
    char buf[160];
    std::snprintf(buf, sizeof buf, "500 pairs, max dev %.2e, negatives %d/%d detected", r.max_deviation,
                  r.negatives_detected, r.negatives_total);
    c.detail = c.pass ? buf : c.detail;
    return c;
}

// --- criterion 3: retraction suite ---------------------------------------------

Criterion criterion_retraction() {
    Criterion c;
    Rng rng = Rng(kSeed).derive("retraction");
    double worst_roundtrip = 0.0;
    int disagreements = 0;
    for (int trial = 0; trial < 500; ++trial) {
        int m = 1 + rng.uniform_int(3);
        int k = 1 + rng.uniform_int(6);
        SkewCubeTuple t = trial % 5 == 4 && m >= 2 ? crowded_tuple(rng, m, std::min(k, 4))
                                                   : random_tuple(rng, m, k, tag_of(rng.uniform_int(3)));

        // 33 samples of the first stage all validate
        for (int i = 0; i <= 32; ++i)
            if (!validate_tuple(equidiameter_homotopy(t, i / 32.0), kTol, true).valid) {
                c.fail("equidiameter frame invalid");
                break;
            }
        SkewCubeTuple eq = equidiameter_homotopy(t, 1.0);
        if (!is_equidiameter(eq, kTol)) c.fail("endpoint not equidiameter");
        if (tuple_deviation(equidiameter_homotopy(eq, 0.61), eq) != 0.0)
            c.fail("equidiameter subspace moved");

        SkewCubeTuple fw = freewheeling_homotopy(eq, 1.0, default_freewheel_coeff(m), kTol);
        if (!is_freewheeling(fw, kTol)) c.fail("endpoint not freewheeling");
        if (tuple_deviation(freewheeling_homotopy(fw, 0.37, default_freewheel_coeff(m), kTol), fw) != 0.0)
            c.fail("freewheeling subspace moved");

        FreewheelSplit split = freewheel_split(fw, kTol);
        worst_roundtrip = std::max(worst_roundtrip, tuple_deviation(freewheel_unsplit(split), fw));

        // the randomized rotation oracle must agree with the ball criterion
        // on the endpoint and on the (possibly crowded) equidiameter stage
        Rng sub = rng.derive(static_cast<std::uint64_t>(trial));
        if (rotation_oracle(fw, kTol, sub, 10) != is_freewheeling(fw, kTol)) ++disagreements;
        Rng sub2 = rng.derive(static_cast<std::uint64_t>(trial) + 100000);
        if (rotation_oracle(eq, kTol, sub2, 10) != is_freewheeling(eq, kTol)) ++disagreements;
    }
    if (worst_roundtrip > 1e-12) c.fail("split/unsplit roundtrip above 1e-12");
    if (disagreements > 0) c.fail("rotation oracle disagreed with the ball oracle");
    char buf[160];
    std::snprintf(buf, sizeof buf, "500 tuples, roundtrip %.2e, oracle disagreements %d", worst_roundtrip,
                  disagreements);
    c.detail = c.pass ? buf : c.detail + " (" + buf + ")";
    return c;
}

// --- criterion 4: projection comparison ------------------------------------------

Criterion criterion_projection() {
    Criterion c;
    Rng rng = Rng(kSeed).derive("projection");
    for (int trial = 0; trial < 1000; ++trial) {
        int m = 1 + rng.uniform_int(3), k = rng.uniform_int(5);
        SkewCubeTuple t = random_tuple(rng, m, k, tag_of(rng.uniform_int(3)));
        FramedConfiguration ev = evaluation_at_origin(t);
        FramedConfiguration pr = pi_map(t);
        for (int i = 0; i < k; ++i) {
            if (max_abs_diff(ev.points[static_cast<std::size_t>(i)], pr.points[static_cast<std::size_t>(i)]) != 0.0 ||
                max_abs_diff(ev.frames[static_cast<std::size_t>(i)].matrix,
                             pr.frames[static_cast<std::size_t>(i)].matrix) != 0.0)
                c.fail("projection mismatch");
        }
        if (k > 0) {
            Permutation sigma = random_perm(rng, k);
            FramedConfiguration lhs = pi_map(act(t, sigma));
            FramedConfiguration rhs = act(pi_map(t), sigma);
            for (int i = 0; i < k; ++i)
                if (max_abs_diff(lhs.points[static_cast<std::size_t>(i)], rhs.points[static_cast<std::size_t>(i)]) != 0.0)
                    c.fail("permutation equivariance broken");
            // frame twist via composition with origin-centered cubes
            std::vector<GroupElem> hs;
            std::vector<SkewCubeTuple> units;
            for (int i = 0; i < k; ++i) {
                Mat h = random_orthogonal(rng, m) *
                        Mat::diagonal(Vec(static_cast<std::size_t>(m), rng.uniform(0.3, 0.9)));
                hs.push_back(GroupElem::make(h, GroupTag::orth_dilation));
                SkewCubeTuple u;
                u.m = m;
                u.tag = t.tag;
                u.cubes.push_back({Vec(static_cast<std::size_t>(m), 0.0), hs.back()});
                units.push_back(std::move(u));
            }
            ComposeOptions opts;
            opts.check_inputs = false;
            opts.check_output = false;
            FramedConfiguration lhs2 = pi_map(compose_tuples(t, units, opts));
            FramedConfiguration rhs2 = frame_act(pi_map(t), hs);
            for (int i = 0; i < k; ++i)
                if (max_abs_diff(lhs2.frames[static_cast<std::size_t>(i)].matrix,
                                 rhs2.frames[static_cast<std::size_t>(i)].matrix) != 0.0)
                    c.fail("frame equivariance broken");
        }
    }
    if (c.pass) c.detail = "1000 tuples, projections and equivariance exact";
    return c;
}

// --- criterion 5: combinatorial suite ---------------------------------------------

Criterion criterion_combinatorics() {
    auto start = std::chrono::steady_clock::now();
    Criterion c;
    Rng rng = Rng(kSeed).derive("combinatorics");

    // unit and associativity bijections
    for (int rep = 0; rep < 20 && c.pass; ++rep) {
        FinSymSeq s = random_word_seq(rng, 3, 20);
        if (!check_compose_unit_left(s) || !check_compose_unit_right(s)) c.fail("compose unit bijection");
        if (!check_matrix_unit_left(s) || !check_matrix_unit_right(s)) c.fail("matrix unit bijection");
    }
    for (int rep = 0; rep < 8 && c.pass; ++rep) {
        FinSymSeq x = random_word_seq(rng, 2, 6), y = random_word_seq(rng, 2, 6),
                  z = random_word_seq(rng, 2, 6);
        if (!check_graded_assoc(x, y, z)) c.fail("graded associativity bijection");
        if (!check_matrix_assoc(x, y, z)) c.fail("matrix associativity bijection");
    }
    for (int rep = 0; rep < 5 && c.pass; ++rep) {
        FinSymSeq x = random_word_seq(rng, 2, 4), y = random_word_seq(rng, 2, 4),
                  z = random_word_seq(rng, 1, 3);
        if (!check_compose_assoc(x, y, z)) c.fail("compose associativity bijection");
    }

    // free-action cardinality formula, 200 cases
    for (int rep = 0; rep < 200 && c.pass; ++rep) {
        FinSymSeq x = random_free_seq(rng, 3), y = random_free_seq(rng, 3);
        FinSymSeq xy = graded_tensor(x, y);
        for (int k = 0; k <= 6; ++k) {
            long long expect = 0;
            for (int i = 0; i <= k; ++i)
                expect += static_cast<long long>(x.size(i)) * y.size(k - i) * binomial(k, i);
            if (xy.size(k) != expect) c.fail("free cardinality formula");
        }
    }
    // spot cross-check against the independent closure oracle
    for (int rep = 0; rep < 5 && c.pass; ++rep) {
        FinSymSeq x = random_word_seq(rng, 2, 6), y = random_word_seq(rng, 2, 6);
        FinSymSeq xy = graded_tensor(x, y);
        for (int k = 0; k <= 4; ++k)
            if (xy.size(k) != brute_graded_count(x, y, k)) c.fail("closure oracle mismatch");
    }

    // regular orbits multiply: Sigma_k box Sigma_l is Sigma_{kl}
    for (int k = 1; k <= 4 && c.pass; ++k)
        for (int l = 1; l <= 4 && c.pass; ++l) {
            const int n = k * l;
            FinSymSeq X = FinSymSeq::free_orbit(k), Y = FinSymSeq::free_orbit(l);
            if (n <= 6) {
                long long fact = 1;
                for (int i = 2; i <= n; ++i) fact *= i;
                if (matrix_tensor(X, Y).size(n) != fact) c.fail("regular orbit product size");
            }
            // freeness gives orbit size k! l!, so classes number (kl)!; check
            // the orbit size and canonical-form injectivity on samples
            std::set<std::string> orbit;
            for (const auto& s : skewcubes::detail::perms_cached(k))
                for (const auto& t : skewcubes::detail::perms_cached(l)) {
                    MatrixRep moved{k, l, X.act(k, 0, s), Y.act(l, 0, t), invert(product_perm(s, t))};
                    orbit.insert(matrix_label(X, Y, moved));
                }
            long long kf = 1, lf = 1;
            for (int i = 2; i <= k; ++i) kf *= i;
            for (int i = 2; i <= l; ++i) lf *= i;
            if (static_cast<long long>(orbit.size()) != kf * lf) c.fail("orbit size under the pair action");
            std::set<std::string> classes;
            for (int rep = 0; rep < 10; ++rep) {
                MatrixRep r{k, l, 0, 0, random_perm(rng, n)};
                classes.insert(matrix_label(X, Y, canonical_matrix_rep(X, Y, r)));
                MatrixRep again = r;
                if (matrix_label(X, Y, canonical_matrix_rep(X, Y, again)) != *classes.rbegin() &&
                    classes.size() == 1)
                    c.fail("canonicalization unstable");
            }
        }

    // tensor of free modules against the independent enumeration, 100 cases
    SetOperad term = SetOperad::terminal(2);
    OperadMap ev;
    ev.max_arity = 2;
    ev.map = [](int, int) { return 0; };
    for (int rep = 0; rep < 100 && c.pass; ++rep) {
        FinSymSeq x = random_word_seq(rng, 2, 4);
        FinSymSeq y = random_word_seq(rng, 1, 3);
        if (rep % 2) std::swap(x, y);
        RightModule m = free_module_bv_tensor(term, x, term, y, term, ev, ev, 2, 40000);
        FinSymSeq xy = matrix_tensor(x, y);
        for (int r = 0; r <= 4; ++r)
            if (m.size(r) != brute_compose_count(xy, term.underlying(), r))
                c.fail("module tensor cardinality");
    }

    // category laws: terminal exhaustive through size 3
    SetOperad term3 = SetOperad::terminal(3);
    for (int a = 0; a <= 3 && c.pass; ++a)
        for (int b = 0; b <= 3 && c.pass; ++b) {
            for (const auto& h : fp_hom_set(term3, a, b)) {
                if (!hom_equal(compose_hom(term3, identity_hom(term3, a), h), h) ||
                    !hom_equal(compose_hom(term3, h, identity_hom(term3, b)), h))
                    c.fail("terminal category units");
            }
            for (int cc = 0; cc <= 3 && c.pass; ++cc)
                for (int d = 0; d <= 3 && c.pass; ++d)
                    for (const auto& h1 : fp_hom_set(term3, a, b))
                        for (const auto& h2 : fp_hom_set(term3, b, cc))
                            for (const auto& h3 : fp_hom_set(term3, cc, d))
                                if (!hom_equal(compose_hom(term3, compose_hom(term3, h1, h2), h3),
                                               compose_hom(term3, h1, compose_hom(term3, h2, h3)))) {
                                    c.fail("terminal category associativity");
                                    break;
                                }
        }

    // endomorphism operad of a 2-element set: units exhaustive through size
    // 3, associativity exhaustive through size 2 plus seeded size-3 triples
    SetOperad end2 = SetOperad::endomorphism(2, 3);
    for (int a = 0; a <= 3 && c.pass; ++a)
        for (int b = 0; b <= 3 && c.pass; ++b)
            for (const auto& h : fp_hom_set(end2, a, b))
                if (!hom_equal(compose_hom(end2, identity_hom(end2, a), h), h) ||
                    !hom_equal(compose_hom(end2, h, identity_hom(end2, b)), h)) {
                    c.fail("endomorphism category units");
                    break;
                }
    for (int a = 0; a <= 2 && c.pass; ++a)
        for (int b = 0; b <= 2 && c.pass; ++b)
            for (int cc = 0; cc <= 2 && c.pass; ++cc)
                for (int d = 0; d <= 2 && c.pass; ++d)
                    for (const auto& h1 : fp_hom_set(end2, a, b)) {
                        for (const auto& h2 : fp_hom_set(end2, b, cc))
                            for (const auto& h3 : fp_hom_set(end2, cc, d))
                                if (!hom_equal(compose_hom(end2, compose_hom(end2, h1, h2), h3),
                                               compose_hom(end2, h1, compose_hom(end2, h2, h3)))) {
                                    c.fail("endomorphism category associativity");
                                    break;
                                }
                        if (!c.pass) break;
                    }
    for (int rep = 0; rep < 2000 && c.pass; ++rep) {
        int a = rng.uniform_int(4), b = 1 + rng.uniform_int(3), cc = 1 + rng.uniform_int(3),
            d = 1 + rng.uniform_int(3);
        auto hab = fp_hom_set(end2, a, b);
        auto hbc = fp_hom_set(end2, b, cc);
        auto hcd = fp_hom_set(end2, cc, d);
        if (hab.empty() || hbc.empty() || hcd.empty()) continue;
        const auto& h1 = hab[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(hab.size())))];
        const auto& h2 = hbc[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(hbc.size())))];
        const auto& h3 = hcd[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(hcd.size())))];
        if (!hom_equal(compose_hom(end2, compose_hom(end2, h1, h2), h3),
                       compose_hom(end2, h1, compose_hom(end2, h2, h3))))
            c.fail("endomorphism category associativity (sampled)");
    }

    double elapsed = seconds_since(start);
    if (elapsed > 120.0) c.fail("runtime above 120 s");
    char buf[160];
    std::snprintf(buf, sizeof buf, "bijections, 200 cardinality cases, 100 tensor cases, category laws, %.1f s",
                  elapsed);
    c.detail = c.pass ? buf : c.detail + " (" + std::to_string(elapsed) + " s)";
    return c;
}

// --- criterion 6: covers ------------------------------------------------------------

Criterion criterion_weiss() {
    Criterion c;
    Rng rng = Rng(kSeed).derive("weiss");
    BoxRegion rm = cube_region(2);
    BoxRegion rn = make_region(1, {Box{{-1.0}, {0.0}}, Box{{0.2}, {1.0}}});
    for (int rep = 0; rep < 1000 && c.pass; ++rep) {
        int np = 1 + rng.uniform_int(4), nq = 1 + rng.uniform_int(4);
        FramedConfiguration ps = sample_configuration(rm, np, 0.0, rng);
        FramedConfiguration qs = sample_configuration(rn, nq, 0.0, rng);
        NeighborhoodPair nb = build_disjoint_neighborhoods(ps.points, qs.points, rm, rn);
        for (const auto& p : ps.points)
            if (!nb.u.contains(p)) c.fail("neighborhood misses its point");
        for (const auto& q : qs.points)
            if (!nb.v.contains(q)) c.fail("neighborhood misses its point");
        if (!region_contains(rm, nb.u) || !region_contains(rn, nb.v)) c.fail("neighborhood escapes region");
        for (std::size_t i = 0; i < nb.u.boxes.size() && c.pass; ++i)
            for (std::size_t j = i + 1; j < nb.u.boxes.size(); ++j)
                if (!boxes_disjoint(nb.u.boxes[i], nb.u.boxes[j])) c.fail("neighborhoods overlap");
    }

    CoverSpec cover = disk_product_cover(rm, rn);
    WeissReport wr = check_weiss_cover(cover, 4, 500, kSeed + 1);
    if (!wr.pass) c.fail("disk product cover failed the finite-subset check");
    CompleteWeissReport cw = check_complete_weiss(cover, 3, 3, 200, kSeed + 2);
    if (!cw.pass) c.fail("disk product cover failed completeness");

    // engineered negatives
    std::vector<BoxRegion> tiny;
    for (double x = -0.9; x < 1.0; x += 0.2) tiny.push_back(make_region(1, {Box{{x - 0.05}, {x + 0.05}}}));
    CoverSpec dots = explicit_cover(cube_region(1), std::move(tiny));
    WeissReport neg = check_weiss_cover(dots, 2, 100, kSeed + 3);
    bool witnessed = false;
    for (const auto& row : neg.per_k)
        if (row.failures > 0 && !row.witness.empty()) witnessed = true;
    if (neg.pass || !witnessed) c.fail("negative cover not detected with witness");

    BoxRegion half_a = make_region(1, {Box{{-1.0}, {0.5}}});
    BoxRegion half_b = make_region(1, {Box{{-0.5}, {1.0}}});
    CoverSpec adversarial = explicit_cover(cube_region(1), {cube_region(1), half_a, half_b});
    CompleteWeissReport cneg = check_complete_weiss(adversarial, 2, 2, 400, kSeed + 4);
    if (cneg.pass || cneg.failures.empty()) c.fail("incomplete cover not detected");

    if (c.pass)
        c.detail = "1000 neighborhood cases exact; disk products pass; negatives witnessed";
    return c;
}

// --- criterion 7: determinism --------------------------------------------------------

Criterion criterion_determinism() {
    Criterion c;
    auto law_report = [] {
        Json combos = Json::array();
        Rng root(kSeed);
        for (int m = 1; m <= 2; ++m) {
            Rng stream = root.derive("determinism").derive(static_cast<std::uint64_t>(m));
            OperadLawResult r = run_operad_law_suite(m, GroupTag::orth_dilation, 50, kTol, stream);
            combos.push_back(Json{{"m", m},
                                  {"dev",
                                   Json{{"assoc", r.dev_associativity},
                                        {"unit", r.dev_unit},
                                        {"outer", r.dev_equivariance_outer},
                                        {"inner", r.dev_equivariance_inner}}},
                                  {"pass", r.pass}});
        }
        return combos.dump();
    };
    if (law_report() != law_report()) c.fail("law suite report not reproducible");

    auto weiss_report = [] {
        CoverSpec cover = disk_product_cover(cube_region(1), cube_region(1));
        return to_json(check_weiss_cover(cover, 3, 60, kSeed)).dump();
    };
    if (weiss_report() != weiss_report()) c.fail("cover report not reproducible");

    auto trace_report = [] {
        Rng rng = Rng(kSeed).derive("trace");
        SkewCubeTuple t = random_tuple(rng, 2, 3, GroupTag::orth_dilation);
        return trace_to_csv(build_trace(t, RetractStage::equidiameter, 9, 0.5));
    };
    if (trace_report() != trace_report()) c.fail("trace not reproducible");

    if (c.pass) c.detail = "repeated runs byte-identical for laws, covers, traces";
    return c;
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        Criterion (*run)();
    };
    Entry entries[] = {
        {"operad law suite", criterion_operad_laws},
        {"interchange evaluation", criterion_interchange},
        {"retraction suite", criterion_retraction},
        {"projection comparison", criterion_projection},
        {"combinatorial suite", criterion_combinatorics},
        {"cover suite", criterion_weiss},
        {"determinism", criterion_determinism},
    };
    bool all = true;
    int index = 1;
    for (const auto& e : entries) {
        Criterion c = e.run();
        all = all && c.pass;
        std::printf("[%d] %-24s %s  (%s)\n", index++, e.name, c.pass ? "PASS" : "FAIL", c.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%s\n", all ? "acceptance: all criteria hold" : "acceptance: FAILURES present");
    return all ? 0 : 1;
}
