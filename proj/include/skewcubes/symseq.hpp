#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewcubes/permutation.hpp"

namespace skewcubes {

// One arity of a finite symmetric sequence: a sorted list of element labels
// and the right action of the adjacent transpositions s_t = (t, t+1).
// Arbitrary permutations act through adjacent factorizations, so tables stay
// small even at arity 8.
struct SeqComponent {
    std::vector<std::string> labels;
    std::vector<std::vector<int>> gen_act;  // gen_act[t][e], t in [0, k-2]

    int size() const { return static_cast<int>(labels.size()); }
};

// Checks that generator tables define a genuine right Sigma_k action by
// verifying the defining relations of the symmetric group.
inline bool action_tables_valid(const SeqComponent& c, int k) {
    const int n = c.size();
    if (static_cast<int>(c.gen_act.size()) != std::max(0, k - 1)) return false;
    for (const auto& t : c.gen_act) {
        if (static_cast<int>(t.size()) != n) return false;
        for (int v : t)
            if (v < 0 || v >= n) return false;
    }
    auto ap = [&](int e, int t) { return c.gen_act[static_cast<std::size_t>(t)][static_cast<std::size_t>(e)]; };
    for (int t = 0; t + 1 < k; ++t)
        for (int e = 0; e < n; ++e) {
            if (ap(ap(e, t), t) != e) return false;  // involution
            if (t + 2 < k && ap(ap(ap(e, t), t + 1), t) != ap(ap(ap(e, t + 1), t), t + 1)) return false;
            for (int u = t + 2; u + 1 < k; ++u)
                if (ap(ap(e, t), u) != ap(ap(e, u), t)) return false;
        }
    return true;
}

class FinSymSeq {
public:
    FinSymSeq() = default;

    static FinSymSeq empty() { return FinSymSeq(); }

    // one element with trivial action
    static FinSymSeq point(int arity, const std::string& label = "pt") {
        FinSymSeq s;
        SeqComponent c;
        c.labels = {label};
        c.gen_act.assign(static_cast<std::size_t>(std::max(0, arity - 1)), {0});
        s.comps_[arity] = std::move(c);
        return s;
    }

    static FinSymSeq unit_j() { return point(1, "j"); }
    static FinSymSeq unit_i() { return point(1, "i"); }

    // the regular orbit: elements are the permutations of arity k with the
    // right multiplication action
    static FinSymSeq free_orbit(int k) {
        FinSymSeq s;
        SeqComponent c;
        std::vector<Permutation> perms = all_permutations(k);
        std::map<std::string, int> index;
        for (const auto& p : perms) c.labels.push_back(p.to_string());
        std::sort(c.labels.begin(), c.labels.end());
        for (int e = 0; e < static_cast<int>(c.labels.size()); ++e) index[c.labels[static_cast<std::size_t>(e)]] = e;
        c.gen_act.assign(static_cast<std::size_t>(std::max(0, k - 1)), std::vector<int>(c.labels.size()));
        for (const auto& p : perms) {
            int e = index[p.to_string()];
            for (int t = 0; t + 1 < k; ++t) {
                Permutation moved = compose(p, Permutation::transposition(k, t, t + 1));
                c.gen_act[static_cast<std::size_t>(t)][static_cast<std::size_t>(e)] = index[moved.to_string()];
            }
        }
        s.comps_[k] = std::move(c);
        return s;
    }

    // orbit closure of words of length `arity`: (w.sigma)_r = w_{sigma(r)}
    static FinSymSeq from_words(int arity, const std::vector<std::string>& words) {
        std::set<std::string> closed;
        std::vector<std::string> queue;
        for (const auto& w : words) {
            if (static_cast<int>(w.size()) != arity)
                throw std::invalid_argument("from_words: word length must equal arity");
            if (closed.insert(w).second) queue.push_back(w);
        }
        while (!queue.empty()) {
            std::string w = queue.back();
            queue.pop_back();
            for (int t = 0; t + 1 < arity; ++t) {
                std::string x = w;
                std::swap(x[static_cast<std::size_t>(t)], x[static_cast<std::size_t>(t) + 1]);
                if (closed.insert(x).second) queue.push_back(x);
            }
        }
        FinSymSeq s;
        SeqComponent c;
        c.labels.assign(closed.begin(), closed.end());
        for (auto& l : c.labels) l = "w:" + l;
        std::sort(c.labels.begin(), c.labels.end());
        std::map<std::string, int> index;
        for (int e = 0; e < c.size(); ++e) index[c.labels[static_cast<std::size_t>(e)]] = e;
        c.gen_act.assign(static_cast<std::size_t>(std::max(0, arity - 1)), std::vector<int>(c.labels.size()));
        for (int e = 0; e < c.size(); ++e) {
            std::string w = c.labels[static_cast<std::size_t>(e)].substr(2);
            for (int t = 0; t + 1 < arity; ++t) {
                std::string x = w;
                std::swap(x[static_cast<std::size_t>(t)], x[static_cast<std::size_t>(t) + 1]);
                c.gen_act[static_cast<std::size_t>(t)][static_cast<std::size_t>(e)] = index["w:" + x];
            }
        }
        s.comps_[arity] = std::move(c);
        return s;
    }

    bool has(int k) const {
        auto it = comps_.find(k);
        return it != comps_.end() && !it->second.labels.empty();
    }
    const SeqComponent& at(int k) const { return comps_.at(k); }
    int size(int k) const { return has(k) ? at(k).size() : 0; }

    int total_size() const {
        int n = 0;
        for (const auto& [k, c] : comps_) n += c.size();
        return n;
    }

    std::vector<int> arities() const {
        std::vector<int> out;
        for (const auto& [k, c] : comps_)
            if (!c.labels.empty()) out.push_back(k);
        return out;
    }

    const std::string& label(int k, int e) const { return at(k).labels[static_cast<std::size_t>(e)]; }

    int index_of(int k, const std::string& lab) const {
        const auto& ls = at(k).labels;
        auto it = std::lower_bound(ls.begin(), ls.end(), lab);
        if (it == ls.end() || *it != lab) throw std::invalid_argument("FinSymSeq: unknown label " + lab);
        return static_cast<int>(it - ls.begin());
    }

    int act(int k, int e, const Permutation& sigma) const {
        if (sigma.arity() != k) throw std::invalid_argument("FinSymSeq::act: arity mismatch");
        if (k <= 1 || sigma.is_identity()) return e;
        const auto& c = at(k);
        for (int t : adjacent_factorization(sigma)) e = c.gen_act[static_cast<std::size_t>(t)][static_cast<std::size_t>(e)];
        return e;
    }

    void set_component(int k, SeqComponent c) {
        if (!action_tables_valid(c, k))
            throw std::invalid_argument("FinSymSeq: invalid action tables at arity " + std::to_string(k));
        if (!std::is_sorted(c.labels.begin(), c.labels.end()))
            throw std::invalid_argument("FinSymSeq: labels must be sorted");
        comps_[k] = std::move(c);
    }

    friend bool operator==(const FinSymSeq& a, const FinSymSeq& b);

private:
    std::map<int, SeqComponent> comps_;
};

inline bool operator==(const FinSymSeq& a, const FinSymSeq& b) {
    auto ka = a.arities(), kb = b.arities();
    if (ka != kb) return false;
    for (int k : ka) {
        if (a.at(k).labels != b.at(k).labels) return false;
        if (a.at(k).gen_act != b.at(k).gen_act) return false;
    }
    return true;
}

// J and I are both one point in arity 1; the wrapper keeps track of which
// monoidal structure the point is the unit for.
struct UnitSeq {
    enum class Which { compose_unit_j, matrix_unit_i } which;
    FinSymSeq seq() const {
        return which == Which::compose_unit_j ? FinSymSeq::unit_j() : FinSymSeq::unit_i();
    }
};

// ---------------------------------------------------------------------------
// graded tensor product
// ---------------------------------------------------------------------------

// representative of a class of (X (.) Y)(i+j)
struct GradedRep {
    int i = 0, j = 0;
    int x = 0, y = 0;
    Permutation pi;
};

namespace detail {

inline const std::vector<Permutation>& perms_cached(int k) {
    // node-based container: references stay valid across later insertions
    static std::map<int, std::vector<Permutation>> cache;
    auto it = cache.find(k);
    if (it == cache.end()) it = cache.emplace(k, all_permutations(k)).first;
    return it->second;
}

struct GradedKey {
    int i, j, x, y;
    std::vector<int> pi;
    bool operator<(const GradedKey& o) const {
        if (i != o.i) return i < o.i;
        if (j != o.j) return j < o.j;
        if (x != o.x) return x < o.x;
        if (y != o.y) return y < o.y;
        return pi < o.pi;
    }
};

}  // namespace detail

// class of (x.alpha, y.beta, pi) ~ (x, y, blocksum(alpha,beta) o pi): the
// canonical representative is the lexicographically least orbit member
inline GradedRep canonical_graded_rep(const FinSymSeq& X, const FinSymSeq& Y, const GradedRep& r) {
    const int i = r.i, j = r.j;
    bool first = true;
    detail::GradedKey best{};
    GradedRep out = r;
    for (const auto& alpha : detail::perms_cached(i))
        for (const auto& beta : detail::perms_cached(j)) {
            int x2 = X.act(i, r.x, alpha);
            int y2 = Y.act(j, r.y, beta);
            Permutation pi2 = compose(invert(block_sum(std::vector<Permutation>{alpha, beta})), r.pi);
            detail::GradedKey key{i, j, x2, y2, pi2.images()};
            if (first || key < best) {
                first = false;
                best = key;
                out = GradedRep{i, j, x2, y2, pi2};
            }
        }
    return out;
}

inline std::string graded_label(const FinSymSeq& X, const FinSymSeq& Y, const GradedRep& r) {
    return "g(" + std::to_string(r.i) + "," + std::to_string(r.j) + "|" + X.label(r.i, r.x) + "|" +
           Y.label(r.j, r.y) + "|" + r.pi.to_string() + ")";
}

struct GradedResult {
    FinSymSeq seq;
    std::map<int, std::vector<GradedRep>> reps;  // aligned with seq labels
};

GradedResult graded_tensor_full(const FinSymSeq& X, const FinSymSeq& Y, int size_cap = 20000);

inline FinSymSeq graded_tensor(const FinSymSeq& X, const FinSymSeq& Y) {
    return graded_tensor_full(X, Y).seq;
}

// ---------------------------------------------------------------------------
// matrix tensor product
// ---------------------------------------------------------------------------

struct MatrixRep {
    int i = 0, j = 0;
    int x = 0, y = 0;
    Permutation pi;  // arity i*j
};

// class of (x.sigma, y.rho, pi) ~ (x, y, product_perm(sigma,rho) o pi)
inline MatrixRep canonical_matrix_rep(const FinSymSeq& X, const FinSymSeq& Y, const MatrixRep& r) {
    const int i = r.i, j = r.j;
    bool first = true;
    detail::GradedKey best{};
    MatrixRep out = r;
    for (const auto& sig : detail::perms_cached(i))
        for (const auto& rho : detail::perms_cached(j)) {
            int x2 = X.act(i, r.x, sig);
            int y2 = Y.act(j, r.y, rho);
            Permutation pi2 = compose(invert(product_perm(sig, rho)), r.pi);
            detail::GradedKey key{i, j, x2, y2, pi2.images()};
            if (first || key < best) {
                first = false;
                best = key;
                out = MatrixRep{i, j, x2, y2, pi2};
            }
        }
    return out;
}

inline std::string matrix_label(const FinSymSeq& X, const FinSymSeq& Y, const MatrixRep& r) {
    return "m(" + std::to_string(r.i) + "," + std::to_string(r.j) + "|" + X.label(r.i, r.x) + "|" +
           Y.label(r.j, r.y) + "|" + r.pi.to_string() + ")";
}

struct MatrixResult {
    FinSymSeq seq;
    std::map<int, std::vector<MatrixRep>> reps;
};

MatrixResult matrix_tensor_full(const FinSymSeq& X, const FinSymSeq& Y, int size_cap = 20000);

inline FinSymSeq matrix_tensor(const FinSymSeq& X, const FinSymSeq& Y) {
    return matrix_tensor_full(X, Y).seq;
}

// ---------------------------------------------------------------------------
// composition product
// ---------------------------------------------------------------------------

// (x; y_1..y_ell; tau): outer x in X(ell), inner y_i in Y(arities[i]),
// tau in Sigma_{sum arities}.  Slot r of the composite operation feeds leaf
// tau(r), leaves being listed blockwise.
struct CompositeRep {
    int ell = 0;
    int x = 0;
    std::vector<int> ys;
    std::vector<int> arities;
    Permutation tau;
};

// The quotient is generated by two families of moves:
//   inner:  (x; (y_i . rho_i); tau)         ~ (x; (y_i); blocksum(rho) o tau)
//   outer:  (x . sigma; (e_i); tau)         ~ (x; (e_{sigma^{-1}(i)});
//                                              block_transport(sigma, arities) o tau)
CompositeRep canonical_composite_rep(const FinSymSeq& X, const FinSymSeq& Y, const CompositeRep& r);

// canonical representative; rejects inconsistent arity bookkeeping; idempotent
inline CompositeRep normalize_composite(const FinSymSeq& X, const FinSymSeq& Y, const CompositeRep& r) {
    int total = 0;
    for (int a : r.arities) total += a;
    if (r.tau.arity() != total || static_cast<int>(r.ys.size()) != r.ell ||
        static_cast<int>(r.arities.size()) != r.ell)
        throw std::invalid_argument("normalize_composite: inconsistent arities");
    if (!X.has(r.ell) || r.x < 0 || r.x >= X.size(r.ell))
        throw std::invalid_argument("normalize_composite: bad outer element");
    for (int idx = 0; idx < r.ell; ++idx) {
        int a = r.arities[static_cast<std::size_t>(idx)];
        if (!Y.has(a) || r.ys[static_cast<std::size_t>(idx)] < 0 || r.ys[static_cast<std::size_t>(idx)] >= Y.size(a))
            throw std::invalid_argument("normalize_composite: bad inner element");
    }
    return canonical_composite_rep(X, Y, r);
}

std::string composite_label(const FinSymSeq& X, const FinSymSeq& Y, const CompositeRep& r);

struct CompositeResult {
    FinSymSeq seq;
    std::map<int, std::vector<CompositeRep>> reps;
};

CompositeResult composition_product_full(const FinSymSeq& X, const FinSymSeq& Y, int size_cap = 20000);

inline FinSymSeq composition_product(const FinSymSeq& X, const FinSymSeq& Y) {
    return composition_product_full(X, Y).seq;
}

// ---------------------------------------------------------------------------
// implementation
// ---------------------------------------------------------------------------

namespace detail {

// minimal representatives of the left cosets (Sigma_{k_1} x ... ) \ Sigma_k:
// assign slots to ordered blocks, increasing slots get increasing leaves
inline void coset_transversal_rec(const std::vector<int>& sizes, std::vector<int>& remaining, int slot,
                                  std::vector<int>& assign, std::vector<std::vector<int>>& out) {
    const int k = static_cast<int>(assign.size());
    if (slot == k) {
        out.push_back(assign);
        return;
    }
    for (int b = 0; b < static_cast<int>(sizes.size()); ++b) {
        if (remaining[static_cast<std::size_t>(b)] == 0) continue;
        remaining[static_cast<std::size_t>(b)]--;
        assign[static_cast<std::size_t>(slot)] = b;
        coset_transversal_rec(sizes, remaining, slot + 1, assign, out);
        remaining[static_cast<std::size_t>(b)]++;
    }
}

inline std::vector<Permutation> block_coset_transversal(const std::vector<int>& sizes) {
    int k = 0;
    for (int s : sizes) k += s;
    std::vector<std::vector<int>> assigns;
    std::vector<int> rem = sizes, assign(static_cast<std::size_t>(k));
    coset_transversal_rec(sizes, rem, 0, assign, assigns);
    std::vector<int> prefix(sizes.size() + 1, 0);
    for (std::size_t b = 0; b < sizes.size(); ++b) prefix[b + 1] = prefix[b] + sizes[b];
    std::vector<Permutation> out;
    out.reserve(assigns.size());
    for (const auto& a : assigns) {
        std::vector<int> next = prefix;  // next free leaf per block
        std::vector<int> img(static_cast<std::size_t>(k));
        for (int r = 0; r < k; ++r) img[static_cast<std::size_t>(r)] = next[static_cast<std::size_t>(a[static_cast<std::size_t>(r)])]++;
        out.push_back(Permutation::from_images(std::move(img)));
    }
    return out;
}

// all tuples (rho_1..rho_n) with rho_i in Sigma_{sizes[i]}, visited by callback
template <typename F>
inline void for_each_perm_tuple(const std::vector<int>& sizes, F&& f) {
    std::vector<const std::vector<Permutation>*> pools;
    pools.reserve(sizes.size());
    for (int s : sizes) pools.push_back(&perms_cached(s));
    std::vector<int> idx(sizes.size(), 0);
    std::vector<Permutation> tuple(sizes.size());
    for (;;) {
        for (std::size_t i = 0; i < sizes.size(); ++i) tuple[i] = (*pools[i])[static_cast<std::size_t>(idx[i])];
        f(tuple);
        std::size_t pos = 0;
        while (pos < sizes.size()) {
            if (++idx[pos] < static_cast<int>(pools[pos]->size())) break;
            idx[pos] = 0;
            ++pos;
        }
        if (pos == sizes.size()) break;
    }
}

// nonnegative compositions of k into ell parts drawn from the support set
inline void compositions_rec(int k, int ell, const std::vector<int>& support, std::vector<int>& cur,
                             std::vector<std::vector<int>>& out) {
    if (ell == 0) {
        if (k == 0) out.push_back(cur);
        return;
    }
    for (int a : support) {
        if (a > k) continue;
        cur.push_back(a);
        compositions_rec(k - a, ell - 1, support, cur, out);
        cur.pop_back();
    }
}

}  // namespace detail

inline GradedResult graded_tensor_full(const FinSymSeq& X, const FinSymSeq& Y, int size_cap) {
    GradedResult res;
    std::map<int, std::map<std::string, GradedRep>> classes;
    for (int i : X.arities())
        for (int j : Y.arities()) {
            const int k = i + j;
            auto transversal = detail::block_coset_transversal({i, j});
            for (int x = 0; x < X.size(i); ++x)
                for (int y = 0; y < Y.size(j); ++y)
                    for (const auto& pi : transversal) {
                        GradedRep rep = canonical_graded_rep(X, Y, GradedRep{i, j, x, y, pi});
                        classes[k].emplace(graded_label(X, Y, rep), rep);
                        int total = 0;
                        for (const auto& [kk, m] : classes) total += static_cast<int>(m.size());
                        if (total > size_cap) throw std::length_error("graded_tensor: size cap exceeded");
                    }
        }
    for (auto& [k, m] : classes) {
        SeqComponent c;
        std::vector<GradedRep> reps;
        for (auto& [lab, rep] : m) {
            c.labels.push_back(lab);
            reps.push_back(rep);
        }
        c.gen_act.assign(static_cast<std::size_t>(std::max(0, k - 1)), std::vector<int>(c.labels.size()));
        for (int e = 0; e < static_cast<int>(reps.size()); ++e)
            for (int t = 0; t + 1 < k; ++t) {
                GradedRep moved = reps[static_cast<std::size_t>(e)];
                moved.pi = compose(moved.pi, Permutation::transposition(k, t, t + 1));
                moved = canonical_graded_rep(X, Y, moved);
                auto it = m.find(graded_label(X, Y, moved));
                c.gen_act[static_cast<std::size_t>(t)][static_cast<std::size_t>(e)] =
                    static_cast<int>(std::distance(m.begin(), it));
            }
        res.seq.set_component(k, std::move(c));
        res.reps[k] = std::move(reps);
    }
    return res;
}

inline MatrixResult matrix_tensor_full(const FinSymSeq& X, const FinSymSeq& Y, int size_cap) {
    MatrixResult res;
    std::map<int, std::map<std::string, MatrixRep>> classes;
    for (int i : X.arities())
        for (int j : Y.arities()) {
            const int k = i * j;
            if (k > 9) throw std::length_error("matrix_tensor: arity above materialization bound");
            for (int x = 0; x < X.size(i); ++x)
                for (int y = 0; y < Y.size(j); ++y)
                    for (const auto& pi : detail::perms_cached(k)) {
                        MatrixRep rep = canonical_matrix_rep(X, Y, MatrixRep{i, j, x, y, pi});
                        classes[k].emplace(matrix_label(X, Y, rep), rep);
                    }
            int total = 0;
            for (const auto& [kk, m] : classes) total += static_cast<int>(m.size());
            if (total > size_cap) throw std::length_error("matrix_tensor: size cap exceeded");
        }
    for (auto& [k, m] : classes) {
        SeqComponent c;
        std::vector<MatrixRep> reps;
        for (auto& [lab, rep] : m) {
            c.labels.push_back(lab);
            reps.push_back(rep);
        }
        c.gen_act.assign(static_cast<std::size_t>(std::max(0, k - 1)), std::vector<int>(c.labels.size()));
        for (int e = 0; e < static_cast<int>(reps.size()); ++e)
            for (int t = 0; t + 1 < k; ++t) {
                MatrixRep moved = reps[static_cast<std::size_t>(e)];
                moved.pi = compose(moved.pi, Permutation::transposition(k, t, t + 1));
                moved = canonical_matrix_rep(X, Y, moved);
                auto it = m.find(matrix_label(X, Y, moved));
                c.gen_act[static_cast<std::size_t>(t)][static_cast<std::size_t>(e)] =
                    static_cast<int>(std::distance(m.begin(), it));
            }
        res.seq.set_component(k, std::move(c));
        res.reps[k] = std::move(reps);
    }
    return res;
}

inline CompositeRep canonical_composite_rep(const FinSymSeq& X, const FinSymSeq& Y, const CompositeRep& r) {
    const int ell = r.ell;
    bool first = true;
    std::vector<int> bestkey;
    CompositeRep out = r;
    for (const auto& sigma : detail::perms_cached(ell)) {
        Permutation sigma_inv = invert(sigma);
        int x2 = X.act(ell, r.x, sigma_inv);
        std::vector<int> ys2(static_cast<std::size_t>(ell)), ar2(static_cast<std::size_t>(ell));
        for (int i = 0; i < ell; ++i) {
            ys2[static_cast<std::size_t>(i)] = r.ys[static_cast<std::size_t>(sigma_inv(i))];
            ar2[static_cast<std::size_t>(i)] = r.arities[static_cast<std::size_t>(sigma_inv(i))];
        }
        Permutation t2 = compose(block_transport(sigma, r.arities), r.tau);
        detail::for_each_perm_tuple(ar2, [&](const std::vector<Permutation>& rho) {
            std::vector<int> ys3(static_cast<std::size_t>(ell));
            std::vector<Permutation> rho_inv(rho.size());
            for (int i = 0; i < ell; ++i) {
                ys3[static_cast<std::size_t>(i)] =
                    Y.act(ar2[static_cast<std::size_t>(i)], ys2[static_cast<std::size_t>(i)], rho[static_cast<std::size_t>(i)]);
                rho_inv[static_cast<std::size_t>(i)] = invert(rho[static_cast<std::size_t>(i)]);
            }
            Permutation t3 = compose(block_sum(rho_inv), t2);
            std::vector<int> key;
            key.reserve(static_cast<std::size_t>(2 * ell + t3.arity() + 2));
            key.push_back(x2);
            for (int i = 0; i < ell; ++i) {
                key.push_back(ar2[static_cast<std::size_t>(i)]);
                key.push_back(ys3[static_cast<std::size_t>(i)]);
            }
            for (int v : t3.images()) key.push_back(v);
            if (first || key < bestkey) {
                first = false;
                bestkey = key;
                out = CompositeRep{ell, x2, ys3, ar2, t3};
            }
        });
    }
    return out;
}

inline std::string composite_label(const FinSymSeq& X, const FinSymSeq& Y, const CompositeRep& r) {
    std::string s = "c(" + std::to_string(r.ell) + "|" + X.label(r.ell, r.x);
    for (int i = 0; i < r.ell; ++i)
        s += "|" + std::to_string(r.arities[static_cast<std::size_t>(i)]) + ":" +
             Y.label(r.arities[static_cast<std::size_t>(i)], r.ys[static_cast<std::size_t>(i)]);
    s += "|" + r.tau.to_string() + ")";
    return s;
}

inline CompositeResult composition_product_full(const FinSymSeq& X, const FinSymSeq& Y, int size_cap) {
    CompositeResult res;
    std::map<int, std::map<std::string, CompositeRep>> classes;
    std::vector<int> ysupport = Y.arities();
    int max_k = 0;
    for (int ell : X.arities())
        for (int a : ysupport) max_k = std::max(max_k, ell * a);
    for (int ell : X.arities()) {
        std::vector<std::vector<int>> comps;
        for (int k = 0; k <= std::max(max_k, 0); ++k) {
            comps.clear();
            std::vector<int> cur;
            detail::compositions_rec(k, ell, ysupport, cur, comps);
            for (const auto& ar : comps) {
                auto transversal = detail::block_coset_transversal(ar);
                // element tuples
                std::vector<int> sizes;
                for (int a : ar) sizes.push_back(Y.size(a));
                std::vector<int> ys(static_cast<std::size_t>(ell), 0);
                for (int x = 0; x < X.size(ell); ++x) {
                    std::fill(ys.begin(), ys.end(), 0);
                    for (;;) {
                        for (const auto& tau : transversal) {
                            CompositeRep rep =
                                canonical_composite_rep(X, Y, CompositeRep{ell, x, ys, ar, tau});
                            classes[k].emplace(composite_label(X, Y, rep), rep);
                        }
                        std::size_t pos = 0;
                        while (pos < ys.size()) {
                            if (++ys[pos] < sizes[pos]) break;
                            ys[pos] = 0;
                            ++pos;
                        }
                        if (pos == ys.size()) break;
                    }
                }
                int total = 0;
                for (const auto& [kk, m] : classes) total += static_cast<int>(m.size());
                if (total > size_cap) throw std::length_error("composition_product: size cap exceeded");
            }
        }
    }
    for (auto& [k, m] : classes) {
        SeqComponent c;
        std::vector<CompositeRep> reps;
        for (auto& [lab, rep] : m) {
            c.labels.push_back(lab);
            reps.push_back(rep);
        }
        c.gen_act.assign(static_cast<std::size_t>(std::max(0, k - 1)), std::vector<int>(c.labels.size()));
        for (int e = 0; e < static_cast<int>(reps.size()); ++e)
            for (int t = 0; t + 1 < k; ++t) {
                CompositeRep moved = reps[static_cast<std::size_t>(e)];
                moved.tau = compose(moved.tau, Permutation::transposition(k, t, t + 1));
                moved = canonical_composite_rep(X, Y, moved);
                auto it = m.find(composite_label(X, Y, moved));
                c.gen_act[static_cast<std::size_t>(t)][static_cast<std::size_t>(e)] =
                    static_cast<int>(std::distance(m.begin(), it));
            }
        res.seq.set_component(k, std::move(c));
        res.reps[k] = std::move(reps);
    }
    return res;
}

}  // namespace skewcubes
