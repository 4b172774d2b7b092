#pragma once

#include <string>
#include <vector>

#include "skewcubes/retraction.hpp"
#include "skewcubes/skew_cubes.hpp"

namespace skewcubes {

// Seeded law suites over random cube tuples.  The same drivers back the
// command line and the acceptance run, so reports are reproducible from both
// entry points.

struct OperadLawResult {
    int m = 0;
    GroupTag tag = GroupTag::dilation;
    int trials = 0;
    double dev_associativity = 0.0;
    double dev_unit = 0.0;
    double dev_equivariance_outer = 0.0;
    double dev_equivariance_inner = 0.0;
    bool pass = false;
};

inline OperadLawResult run_operad_law_suite(int m, GroupTag tag, int trials, double tol, Rng rng) {
    OperadLawResult res;
    res.m = m;
    res.tag = tag;
    res.trials = trials;
    ComposeOptions opts;
    opts.check_inputs = false;
    opts.check_output = false;
    for (int trial = 0; trial < trials; ++trial) {
        int k = 1 + rng.uniform_int(3);
        SkewCubeTuple a = random_tuple(rng, m, k, tag);
        std::vector<SkewCubeTuple> bs;
        std::vector<int> sizes;
        int total = 0;
        for (int i = 0; i < k; ++i) {
            int j = rng.uniform_int(4);
            bs.push_back(random_tuple(rng, m, j, tag));
            sizes.push_back(j);
            total += j;
        }

        // associativity through a third layer
        std::vector<SkewCubeTuple> cs;
        for (int i = 0; i < total; ++i) cs.push_back(random_tuple(rng, m, rng.uniform_int(3), tag));
        SkewCubeTuple left = compose_tuples(compose_tuples(a, bs, opts), cs, opts);
        std::vector<SkewCubeTuple> inner_composites;
        int off = 0;
        for (int i = 0; i < k; ++i) {
            std::vector<SkewCubeTuple> block(cs.begin() + off, cs.begin() + off + sizes[static_cast<std::size_t>(i)]);
            off += sizes[static_cast<std::size_t>(i)];
            inner_composites.push_back(compose_tuples(bs[static_cast<std::size_t>(i)], block, opts));
        }
        SkewCubeTuple right = compose_tuples(a, inner_composites, opts);
        res.dev_associativity = std::max(res.dev_associativity, tuple_deviation(left, right));

        // unit laws
        std::vector<SkewCubeTuple> units(static_cast<std::size_t>(k), unit_tuple(m, tag));
        res.dev_unit = std::max(res.dev_unit, tuple_deviation(compose_tuples(a, units, opts), a));
        res.dev_unit =
            std::max(res.dev_unit, tuple_deviation(compose_tuples(unit_tuple(m, tag), {a}, opts), a));

        // outer action reshuffles the inner list and transports blocks
        std::vector<int> img(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) img[static_cast<std::size_t>(i)] = i;
        for (int i = k - 1; i > 0; --i)
            std::swap(img[static_cast<std::size_t>(i)], img[static_cast<std::size_t>(rng.uniform_int(i + 1))]);
        Permutation sigma = Permutation::from_images(img);
        Permutation sigma_inv = invert(sigma);
        SkewCubeTuple lhs = compose_tuples(act(a, sigma), bs, opts);
        std::vector<SkewCubeTuple> re;
        for (int i = 0; i < k; ++i) re.push_back(bs[static_cast<std::size_t>(sigma_inv(i))]);
        SkewCubeTuple rhs = act(compose_tuples(a, re, opts), block_transport(sigma, sizes));
        res.dev_equivariance_outer = std::max(res.dev_equivariance_outer, tuple_deviation(lhs, rhs));

        // inner actions assemble to a block sum
        std::vector<Permutation> rho;
        std::vector<SkewCubeTuple> moved;
        for (int i = 0; i < k; ++i) {
            int j = sizes[static_cast<std::size_t>(i)];
            std::vector<int> r2(static_cast<std::size_t>(j));
            for (int x = 0; x < j; ++x) r2[static_cast<std::size_t>(x)] = x;
            for (int x = j - 1; x > 0; --x)
                std::swap(r2[static_cast<std::size_t>(x)], r2[static_cast<std::size_t>(rng.uniform_int(x + 1))]);
            rho.push_back(Permutation::from_images(r2));
            moved.push_back(act(bs[static_cast<std::size_t>(i)], rho.back()));
        }
        SkewCubeTuple lhs2 = compose_tuples(a, moved, opts);
        SkewCubeTuple rhs2 = act(compose_tuples(a, bs, opts), block_sum(rho));
        res.dev_equivariance_inner = std::max(res.dev_equivariance_inner, tuple_deviation(lhs2, rhs2));
    }
    res.pass = res.dev_associativity <= tol && res.dev_unit <= tol && res.dev_equivariance_outer <= tol &&
               res.dev_equivariance_inner <= tol;
    return res;
}

struct InterchangeSuiteResult {
    int trials = 0;
    double max_deviation = 0.0;
    int negatives_total = 0;
    int negatives_detected = 0;
    bool pass = false;
};

inline InterchangeSuiteResult run_interchange_suite(int trials, double tol, Rng rng) {
    InterchangeSuiteResult res;
    res.trials = trials;
    GroupTag tags[] = {GroupTag::dilation, GroupTag::orth_dilation, GroupTag::special_orth_dilation};
    for (int trial = 0; trial < trials; ++trial) {
        int m = 1 + rng.uniform_int(2), n = 1 + rng.uniform_int(2);
        int k = 1 + rng.uniform_int(3), l = 1 + rng.uniform_int(3);
        SkewCubeTuple p = random_tuple(rng, m, k, tags[rng.uniform_int(3)]);
        SkewCubeTuple q = random_tuple(rng, n, l, tags[rng.uniform_int(3)]);
        InterchangeResult r = interchange_check(p, q, tol);
        res.max_deviation = std::max(res.max_deviation, r.max_deviation);
        if (k * l >= 2) {
            // negative control: a deliberately wrong permutation must move
            // some cube to a detectably different place
            ++res.negatives_total;
            SkewCubeTuple pe = embed_factor(p, n, Side::left);
            SkewCubeTuple qe = embed_factor(q, m, Side::right);
            pe.tag = qe.tag = tag_join(p.tag, q.tag);
            ComposeOptions opts;
            opts.check_inputs = false;
            opts.check_output = false;
            SkewCubeTuple side1 =
                compose_tuples(pe, std::vector<SkewCubeTuple>(static_cast<std::size_t>(k), qe), opts);
            SkewCubeTuple side2 =
                compose_tuples(qe, std::vector<SkewCubeTuple>(static_cast<std::size_t>(l), pe), opts);
            int a = rng.uniform_int(k * l);
            int b = (a + 1 + rng.uniform_int(k * l - 1)) % (k * l);
            Permutation wrong = compose(transpose_perm(k, l), Permutation::transposition(k * l, a, b));
            if (tuple_deviation(side1, act(side2, wrong)) > tol) ++res.negatives_detected;
        }
    }
    res.pass = res.max_deviation <= tol && res.negatives_detected == res.negatives_total;
    return res;
}

}  // namespace skewcubes
