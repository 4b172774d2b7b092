#pragma once

// Test-only oracles: class counting by breadth-first closure over the
// single-generator moves, independent of the canonical-form machinery in the
// library, plus small random generators shared by the suites.

#include <map>
#include <queue>
#include <set>
#include <vector>

#include "skewcubes/permutation.hpp"
#include "skewcubes/rng.hpp"
#include "skewcubes/symseq.hpp"

namespace skewcubes::testing {

inline long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// --- brute-force class counts -----------------------------------------------

namespace detail {

using Key = std::vector<int>;

inline void bfs_count(std::map<Key, int>& ids, const std::vector<std::vector<int>>& adj, int& classes) {
    const int n = static_cast<int>(ids.size());
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    classes = 0;
    for (int s = 0; s < n; ++s) {
        if (seen[static_cast<std::size_t>(s)]) continue;
        ++classes;
        std::queue<int> q;
        q.push(s);
        seen[static_cast<std::size_t>(s)] = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v : adj[static_cast<std::size_t>(u)])
                if (!seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = 1;
                    q.push(v);
                }
        }
    }
}

}  // namespace detail

// classes of X(i) x Y(j) x Sigma_{i+j} under the graded-tensor moves
inline int brute_graded_count(const FinSymSeq& X, const FinSymSeq& Y, int k) {
    std::map<detail::Key, int> ids;
    std::vector<detail::Key> keys;
    for (int i : X.arities())
        for (int j : Y.arities()) {
            if (i + j != k) continue;
            for (int x = 0; x < X.size(i); ++x)
                for (int y = 0; y < Y.size(j); ++y)
                    for (const auto& pi : all_permutations(k)) {
                        detail::Key key{i, j, x, y};
                        for (int v : pi.images()) key.push_back(v);
                        if (ids.emplace(key, static_cast<int>(keys.size())).second) keys.push_back(key);
                    }
        }
    std::vector<std::vector<int>> adj(keys.size());
    for (std::size_t u = 0; u < keys.size(); ++u) {
        const auto& key = keys[u];
        int i = key[0], j = key[1], x = key[2], y = key[3];
        Permutation pi = Permutation::from_images(std::vector<int>(key.begin() + 4, key.end()));
        auto link = [&](int x2, int y2, const Permutation& pi2) {
            detail::Key nk{i, j, x2, y2};
            for (int v : pi2.images()) nk.push_back(v);
            adj[u].push_back(ids.at(nk));
        };
        for (int t = 0; t + 1 < i; ++t) {
            Permutation a = Permutation::transposition(i, t, t + 1);
            link(X.act(i, x, a), y,
                 compose(block_sum(std::vector<Permutation>{a, Permutation::identity(j)}), pi));
        }
        for (int t = 0; t + 1 < j; ++t) {
            Permutation b = Permutation::transposition(j, t, t + 1);
            link(x, Y.act(j, y, b),
                 compose(block_sum(std::vector<Permutation>{Permutation::identity(i), b}), pi));
        }
    }
    int classes = 0;
    detail::bfs_count(ids, adj, classes);
    return classes;
}

inline int brute_matrix_count(const FinSymSeq& X, const FinSymSeq& Y, int k) {
    std::map<detail::Key, int> ids;
    std::vector<detail::Key> keys;
    for (int i : X.arities())
        for (int j : Y.arities()) {
            if (i * j != k) continue;
            for (int x = 0; x < X.size(i); ++x)
                for (int y = 0; y < Y.size(j); ++y)
                    for (const auto& pi : all_permutations(k)) {
                        detail::Key key{i, j, x, y};
                        for (int v : pi.images()) key.push_back(v);
                        if (ids.emplace(key, static_cast<int>(keys.size())).second) keys.push_back(key);
                    }
        }
    std::vector<std::vector<int>> adj(keys.size());
    for (std::size_t u = 0; u < keys.size(); ++u) {
        const auto& key = keys[u];
        int i = key[0], j = key[1], x = key[2], y = key[3];
        Permutation pi = Permutation::from_images(std::vector<int>(key.begin() + 4, key.end()));
        auto link = [&](int x2, int y2, const Permutation& pi2) {
            detail::Key nk{i, j, x2, y2};
            for (int v : pi2.images()) nk.push_back(v);
            adj[u].push_back(ids.at(nk));
        };
        for (int t = 0; t + 1 < i; ++t) {
            Permutation a = Permutation::transposition(i, t, t + 1);
            link(X.act(i, x, a), y, compose(product_perm(a, Permutation::identity(j)), pi));
        }
        for (int t = 0; t + 1 < j; ++t) {
            Permutation b = Permutation::transposition(j, t, t + 1);
            link(x, Y.act(j, y, b), compose(product_perm(Permutation::identity(i), b), pi));
        }
    }
    int classes = 0;
    detail::bfs_count(ids, adj, classes);
    return classes;
}

inline int brute_compose_count(const FinSymSeq& X, const FinSymSeq& Y, int k) {
    std::map<detail::Key, int> ids;
    std::vector<detail::Key> keys;
    std::vector<int> support = Y.arities();
    for (int ell : X.arities()) {
        std::vector<std::vector<int>> comps;
        std::vector<int> cur;
        skewcubes::detail::compositions_rec(k, ell, support, cur, comps);
        for (const auto& ar : comps)
            for (int x = 0; x < X.size(ell); ++x) {
                std::vector<int> ys(static_cast<std::size_t>(ell), 0);
                for (;;) {
                    for (const auto& tau : all_permutations(k)) {
                        detail::Key key{ell, x};
                        for (int i = 0; i < ell; ++i) {
                            key.push_back(ar[static_cast<std::size_t>(i)]);
                            key.push_back(ys[static_cast<std::size_t>(i)]);
                        }
                        for (int v : tau.images()) key.push_back(v);
                        if (ids.emplace(key, static_cast<int>(keys.size())).second) keys.push_back(key);
                    }
                    std::size_t pos = 0;
                    while (pos < ys.size()) {
                        if (++ys[pos] < Y.size(ar[pos] >= 0 ? ar[pos] : 0)) break;
                        ys[pos] = 0;
                        ++pos;
                    }
                    if (pos == ys.size()) break;
                }
            }
    }
    std::vector<std::vector<int>> adj(keys.size());
    for (std::size_t u = 0; u < keys.size(); ++u) {
        const auto& key = keys[u];
        int ell = key[0], x = key[1];
        std::vector<int> ar(static_cast<std::size_t>(ell)), ys(static_cast<std::size_t>(ell));
        for (int i = 0; i < ell; ++i) {
            ar[static_cast<std::size_t>(i)] = key[static_cast<std::size_t>(2 + 2 * i)];
            ys[static_cast<std::size_t>(i)] = key[static_cast<std::size_t>(3 + 2 * i)];
        }
        Permutation tau = Permutation::from_images(std::vector<int>(key.begin() + 2 + 2 * ell, key.end()));
        auto link = [&](int x2, const std::vector<int>& ar2, const std::vector<int>& ys2, const Permutation& t2) {
            detail::Key nk{ell, x2};
            for (int i = 0; i < ell; ++i) {
                nk.push_back(ar2[static_cast<std::size_t>(i)]);
                nk.push_back(ys2[static_cast<std::size_t>(i)]);
            }
            for (int v : t2.images()) nk.push_back(v);
            adj[u].push_back(ids.at(nk));
        };
        // inner moves
        for (int slot = 0; slot < ell; ++slot) {
            int a = ar[static_cast<std::size_t>(slot)];
            for (int t = 0; t + 1 < a; ++t) {
                Permutation b = Permutation::transposition(a, t, t + 1);
                std::vector<Permutation> blocks;
                for (int i = 0; i < ell; ++i)
                    blocks.push_back(i == slot ? b : Permutation::identity(ar[static_cast<std::size_t>(i)]));
                auto ys2 = ys;
                ys2[static_cast<std::size_t>(slot)] = Y.act(a, ys[static_cast<std::size_t>(slot)], b);
                link(x, ar, ys2, compose(block_sum(blocks), tau));
            }
        }
        // outer moves
        for (int t = 0; t + 1 < ell; ++t) {
            Permutation s = Permutation::transposition(ell, t, t + 1);
            std::vector<int> ar2(static_cast<std::size_t>(ell)), ys2(static_cast<std::size_t>(ell));
            for (int i = 0; i < ell; ++i) {
                ar2[static_cast<std::size_t>(i)] = ar[static_cast<std::size_t>(s(i))];
                ys2[static_cast<std::size_t>(i)] = ys[static_cast<std::size_t>(s(i))];
            }
            link(X.act(ell, x, s), ar2, ys2, compose(block_transport(s, ar), tau));
        }
    }
    int classes = 0;
    detail::bfs_count(ids, adj, classes);
    return classes;
}

// --- random inputs ------------------------------------------------------------

// small random symmetric sequence built from word orbits
inline FinSymSeq random_word_seq(Rng& rng, int max_arity = 3, int max_total = 24) {
    FinSymSeq out;
    int total = 0;
    int tries = 0;
    while (total == 0 && tries < 20) {
        ++tries;
        out = FinSymSeq();
        total = 0;
        for (int k = 0; k <= max_arity; ++k) {
            if (rng.uniform01() < 0.45) continue;
            int nwords = 1 + rng.uniform_int(2);
            std::vector<std::string> words;
            for (int w = 0; w < nwords; ++w) {
                std::string word;
                int alpha = 1 + rng.uniform_int(3);
                for (int i = 0; i < k; ++i) word += static_cast<char>('a' + rng.uniform_int(alpha));
                words.push_back(word);
            }
            FinSymSeq comp = FinSymSeq::from_words(k, words);
            if (total + comp.size(k) > max_total) continue;
            total += comp.size(k);
            if (comp.size(k) > 0) out.set_component(k, comp.at(k));
        }
    }
    if (total == 0) out = FinSymSeq::point(1, "fallback");
    return out;
}

// free actions only: orbits of words with pairwise-distinct letters
inline FinSymSeq random_free_seq(Rng& rng, int max_arity = 3) {
    FinSymSeq out;
    bool any = false;
    for (int k = 0; k <= max_arity; ++k) {
        if (rng.uniform01() < 0.4) continue;
        int orbits = 1 + rng.uniform_int(2);
        std::vector<std::string> words;
        for (int o = 0; o < orbits; ++o) {
            std::string word;
            for (int i = 0; i < k; ++i) word += static_cast<char>('a' + o * k + i);
            words.push_back(word);
        }
        FinSymSeq comp = FinSymSeq::from_words(k, words);
        out.set_component(k, comp.at(k));
        any = true;
    }
    if (!any) out = FinSymSeq::free_orbit(1 + rng.uniform_int(2));
    return out;
}

}  // namespace skewcubes::testing
