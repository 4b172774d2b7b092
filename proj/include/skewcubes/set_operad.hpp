#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "skewcubes/permutation.hpp"
#include "skewcubes/symseq.hpp"

namespace skewcubes {

// Operad in finite sets: a FinSymSeq with a unit in arity 1 and a
// substitution map gamma.  gamma satisfies
//   gamma(x; (y_i . rho_i))  = gamma(x; (y_i)) . blocksum(rho)
//   gamma(x . sigma; (e_i))  = gamma(x; (e_{sigma^{-1}(i)})) . block_transport(sigma, arities)
// which the law checker below verifies on enumerable arities.
class SetOperad {
public:
    using Gamma = std::function<int(int ell, int x, const std::vector<std::pair<int, int>>&)>;

    SetOperad(FinSymSeq seq, int unit_index, Gamma gamma, std::string name)
        : seq_(std::move(seq)), unit_(unit_index), gamma_(std::move(gamma)), name_(std::move(name)) {}

    const FinSymSeq& underlying() const { return seq_; }
    const std::string& name() const { return name_; }
    int unit() const { return unit_; }
    int size(int k) const { return seq_.size(k); }
    bool has(int k) const { return seq_.has(k); }
    const std::string& label(int k, int e) const { return seq_.label(k, e); }
    int act(int k, int e, const Permutation& s) const { return seq_.act(k, e, s); }

    // inners: (arity, element) per slot of x
    int compose(int ell, int x, const std::vector<std::pair<int, int>>& inners) const {
        if (static_cast<int>(inners.size()) != ell)
            throw std::invalid_argument("SetOperad::compose: arity mismatch");
        return gamma_(ell, x, inners);
    }

    static SetOperad terminal(int max_arity = 8);
    static SetOperad endomorphism(int set_size, int max_arity = 3);
    static SetOperad associative(int max_arity = 5);
    static SetOperad from_tables(FinSymSeq seq, const std::string& unit_label,
                                 std::map<std::string, std::string> compose_table);

private:
    FinSymSeq seq_;
    int unit_;
    Gamma gamma_;
    std::string name_;
};

// --- builtins ---------------------------------------------------------------

inline SetOperad SetOperad::terminal(int max_arity) {
    FinSymSeq seq;
    for (int k = 0; k <= max_arity; ++k) {
        SeqComponent c;
        c.labels = {"*"};
        c.gen_act.assign(static_cast<std::size_t>(std::max(0, k - 1)), {0});
        seq.set_component(k, std::move(c));
    }
    auto gamma = [](int, int, const std::vector<std::pair<int, int>>&) { return 0; };
    return SetOperad(std::move(seq), 0, gamma, "terminal");
}

namespace detail {

// function tables S^k -> S with inputs in lex order, first coordinate most
// significant; the label is "f:" followed by output digits
inline int end_table_size(int n, int k) {
    int t = 1;
    for (int i = 0; i < k; ++i) t *= n;
    return t;
}

inline std::string end_label(const std::vector<int>& outs) {
    std::string s = "f:";
    for (int d : outs) s += static_cast<char>('0' + d);
    return s;
}

inline std::vector<int> end_decode(const std::string& label) {
    std::vector<int> outs;
    for (std::size_t i = 2; i < label.size(); ++i) outs.push_back(label[i] - '0');
    return outs;
}

}  // namespace detail

inline SetOperad SetOperad::endomorphism(int set_size, int max_arity) {
    const int n = set_size;
    if (n < 0 || n > 4) throw std::invalid_argument("endomorphism: set size must be in [0,4]");
    // the empty set has no nullary operations (nothing to map the point to)
    // and exactly the empty function at every positive arity
    FinSymSeq seq;
    for (int k = 0; k <= max_arity; ++k) {
        const int inputs = detail::end_table_size(n, k);
        // all n^inputs functions
        long long count = 1;
        for (int i = 0; i < inputs; ++i) {
            count *= n;
            if (count > 70000) throw std::length_error("endomorphism: component too large");
        }
        SeqComponent c;
        std::vector<int> outs(static_cast<std::size_t>(inputs), 0);
        for (long long id = 0; id < count; ++id) {
            long long v = id;
            for (int i = inputs - 1; i >= 0; --i) {
                outs[static_cast<std::size_t>(i)] = static_cast<int>(v % n);
                v /= n;
            }
            c.labels.push_back(detail::end_label(outs));
        }
        // lex-sorted already for fixed width
        c.gen_act.assign(static_cast<std::size_t>(std::max(0, k - 1)), std::vector<int>(c.labels.size()));
        std::vector<int> digits(static_cast<std::size_t>(k));
        for (int e = 0; e < static_cast<int>(c.labels.size()); ++e) {
            std::vector<int> f = detail::end_decode(c.labels[static_cast<std::size_t>(e)]);
            for (int t = 0; t + 1 < k; ++t) {
                // (f.s)(a) = f(a o s^{-1}) = f with inputs t,t+1 swapped
                std::vector<int> g(f.size());
                for (int idx = 0; idx < inputs; ++idx) {
                    int v = idx;
                    for (int i = k - 1; i >= 0; --i) {
                        digits[static_cast<std::size_t>(i)] = v % n;
                        v /= n;
                    }
                    std::swap(digits[static_cast<std::size_t>(t)], digits[static_cast<std::size_t>(t) + 1]);
                    int jdx = 0;
                    for (int i = 0; i < k; ++i) jdx = jdx * n + digits[static_cast<std::size_t>(i)];
                    g[static_cast<std::size_t>(idx)] = f[static_cast<std::size_t>(jdx)];
                }
                // index of g in the lex-sorted list is its numeric encoding
                long long gid = 0;
                for (int d : g) gid = gid * n + d;
                c.gen_act[static_cast<std::size_t>(t)][static_cast<std::size_t>(e)] = static_cast<int>(gid);
            }
        }
        seq.set_component(k, std::move(c));
    }
    // unit = identity on one input: outs = (0,1,..,n-1)
    std::vector<int> idouts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idouts[static_cast<std::size_t>(i)] = i;
    int unit_index = seq.index_of(1, detail::end_label(idouts));

    FinSymSeq seq_copy = seq;
    auto gamma = [n, seq_copy](int ell, int x, const std::vector<std::pair<int, int>>& inners) {
        std::vector<std::vector<int>> gs;
        int total = 0;
        for (const auto& [a, e] : inners) {
            gs.push_back(detail::end_decode(seq_copy.label(a, e)));
            total += a;
        }
        std::vector<int> f = detail::end_decode(seq_copy.label(ell, x));
        const int inputs = detail::end_table_size(n, total);
        std::vector<int> out(static_cast<std::size_t>(inputs));
        std::vector<int> digits(static_cast<std::size_t>(total));
        for (int idx = 0; idx < inputs; ++idx) {
            int v = idx;
            for (int i = total - 1; i >= 0; --i) {
                digits[static_cast<std::size_t>(i)] = v % n;
                v /= n;
            }
            int pos = 0, fidx = 0;
            for (int i = 0; i < ell; ++i) {
                int a = inners[static_cast<std::size_t>(i)].first;
                int sub = 0;
                for (int d = 0; d < a; ++d) sub = sub * n + digits[static_cast<std::size_t>(pos + d)];
                fidx = fidx * n + gs[static_cast<std::size_t>(i)][static_cast<std::size_t>(sub)];
                pos += a;
            }
            out[static_cast<std::size_t>(idx)] = f[static_cast<std::size_t>(fidx)];
        }
        long long gid = 0;
        for (int d : out) gid = gid * n + d;
        return static_cast<int>(gid);
    };
    return SetOperad(std::move(seq), unit_index, gamma, "endomorphism:" + std::to_string(n));
}

inline SetOperad SetOperad::associative(int max_arity) {
    FinSymSeq seq;
    for (int k = 0; k <= max_arity; ++k) {
        FinSymSeq orbit = FinSymSeq::free_orbit(k);
        SeqComponent c = orbit.at(k);
        seq.set_component(k, std::move(c));
    }
    FinSymSeq seq_copy = seq;
    auto gamma = [seq_copy](int ell, int x, const std::vector<std::pair<int, int>>& inners) {
        Permutation outer = Permutation::from_images_1based([&] {
            // labels of free_orbit are permutation strings "[a,b,..]"
            std::vector<int> img;
            const std::string& lab = seq_copy.label(ell, x);
            int cur = 0;
            bool in_num = false;
            for (char ch : lab)
                if (ch >= '0' && ch <= '9') {
                    cur = cur * 10 + (ch - '0');
                    in_num = true;
                } else if (in_num) {
                    img.push_back(cur);
                    cur = 0;
                    in_num = false;
                }
            return img;
        }());
        std::vector<Permutation> parts;
        std::vector<int> sizes;
        int total = 0;
        for (const auto& [a, e] : inners) {
            std::vector<int> img;
            const std::string& lab = seq_copy.label(a, e);
            int cur = 0;
            bool in_num = false;
            for (char ch : lab)
                if (ch >= '0' && ch <= '9') {
                    cur = cur * 10 + (ch - '0');
                    in_num = true;
                } else if (in_num) {
                    img.push_back(cur);
                    cur = 0;
                    in_num = false;
                }
            parts.push_back(Permutation::from_images_1based(img));
            sizes.push_back(a);
            total += a;
        }
        Permutation res = skewcubes::compose(block_transport(outer, sizes), block_sum(parts));
        (void)total;
        return seq_copy.index_of(res.arity(), res.to_string());
    };
    int unit_index = seq.index_of(1, Permutation::identity(1).to_string());
    return SetOperad(std::move(seq), unit_index, gamma, "associative");
}

inline SetOperad SetOperad::from_tables(FinSymSeq seq, const std::string& unit_label,
                                        std::map<std::string, std::string> compose_table) {
    int unit_index = seq.index_of(1, unit_label);
    FinSymSeq seq_copy = seq;
    auto gamma = [seq_copy, table = std::move(compose_table)](int ell, int x,
                                                             const std::vector<std::pair<int, int>>& inners) {
        std::string key = seq_copy.label(ell, x) + "|";
        int total = 0;
        for (std::size_t i = 0; i < inners.size(); ++i) {
            if (i) key += ",";
            key += seq_copy.label(inners[i].first, inners[i].second);
            total += inners[i].first;
        }
        auto it = table.find(key);
        if (it == table.end()) throw std::invalid_argument("SetOperad: compose table has no entry " + key);
        return seq_copy.index_of(total, it->second);
    };
    return SetOperad(std::move(seq), unit_index, gamma, "table");
}

// p(p_1,...,p_k), the equivariant extension of gamma to arbitrary
// representatives being determined by the two relations above
inline int operad_compose(const SetOperad& p, int ell, int x, const std::vector<std::pair<int, int>>& inners) {
    return p.compose(ell, x, inners);
}

// --- operad law checking ----------------------------------------------------

struct LawViolation {
    std::string law;
    std::string detail;
};

// exhaustive within caps; returns first violation found
inline std::optional<LawViolation> check_operad_laws(const SetOperad& p, int max_arity, int max_component,
                                                     long long budget = 2000000) {
    std::vector<int> arities;
    for (int k : p.underlying().arities())
        if (k <= max_arity && p.size(k) <= max_component) arities.push_back(k);
    long long work = 0;

    // unit laws
    for (int k : arities)
        for (int e = 0; e < p.size(k); ++e) {
            if (p.compose(1, p.unit(), {{k, e}}) != e)
                return LawViolation{"unit_outer", p.label(k, e)};
            std::vector<std::pair<int, int>> units(static_cast<std::size_t>(k), {1, p.unit()});
            if (p.has(1) && p.compose(k, e, units) != e)
                return LawViolation{"unit_inner", p.label(k, e)};
            if (++work > budget) return std::nullopt;
        }

    // equivariance, law A (inner) and law B (outer) with single transpositions
    for (int ell : arities) {
        if (ell == 0) continue;
        std::vector<std::vector<int>> shapes;
        std::vector<int> cur;
        // all inner-arity tuples over the supported arities
        std::function<void(int)> rec = [&](int i) {
            if (work > budget) return;
            if (i == ell) {
                shapes.push_back(cur);
                return;
            }
            for (int a : arities) {
                cur.push_back(a);
                rec(i + 1);
                cur.pop_back();
            }
        };
        rec(0);
        for (const auto& shape : shapes) {
            int total = 0;
            for (int a : shape) total += a;
            if (total > max_arity) continue;
            for (int x = 0; x < p.size(ell); ++x) {
                // one representative inner tuple and one transposition each way
                std::vector<std::pair<int, int>> inners;
                for (int a : shape) inners.emplace_back(a, p.size(a) - 1);
                int base = p.compose(ell, x, inners);
                // law A with rho = transposition in the first slot of arity >= 2
                for (int slot = 0; slot < ell; ++slot) {
                    int a = shape[static_cast<std::size_t>(slot)];
                    if (a < 2) continue;
                    std::vector<Permutation> rho(static_cast<std::size_t>(ell));
                    for (int i = 0; i < ell; ++i) rho[static_cast<std::size_t>(i)] =
                        Permutation::identity(shape[static_cast<std::size_t>(i)]);
                    rho[static_cast<std::size_t>(slot)] = Permutation::transposition(a, 0, 1);
                    auto moved = inners;
                    moved[static_cast<std::size_t>(slot)].second =
                        p.act(a, moved[static_cast<std::size_t>(slot)].second, rho[static_cast<std::size_t>(slot)]);
                    int lhs = p.compose(ell, x, moved);
                    int rhs = p.act(total, base, block_sum(rho));
                    if (lhs != rhs) return LawViolation{"equivariance_inner", p.label(ell, x)};
                    if (++work > budget) return std::nullopt;
                }
                // law B with sigma = adjacent transpositions
                for (int t = 0; t + 1 < ell; ++t) {
                    Permutation sigma = Permutation::transposition(ell, t, t + 1);
                    Permutation sigma_inv = invert(sigma);
                    int xs = p.act(ell, x, sigma);
                    int lhs = p.compose(ell, xs, inners);
                    std::vector<std::pair<int, int>> re(static_cast<std::size_t>(ell));
                    std::vector<int> sizes(static_cast<std::size_t>(ell));
                    for (int i = 0; i < ell; ++i) {
                        re[static_cast<std::size_t>(i)] = inners[static_cast<std::size_t>(sigma_inv(i))];
                        sizes[static_cast<std::size_t>(i)] = shape[static_cast<std::size_t>(i)];
                    }
                    int rhs = p.act(total, p.compose(ell, x, re), block_transport(sigma, sizes));
                    if (lhs != rhs) return LawViolation{"equivariance_outer", p.label(ell, x)};
                    if (++work > budget) return std::nullopt;
                }
                // associativity: substitute units-variant triple
                // gamma(gamma(x; y); z) = gamma(x; gamma(y_i; z-block))
                // exercised with y = inners and z = all units
                if (p.has(1)) {
                    std::vector<std::pair<int, int>> z(static_cast<std::size_t>(total), {1, p.unit()});
                    int left = p.compose(total, base, z);
                    std::vector<std::pair<int, int>> composed;
                    for (int i = 0; i < ell; ++i) {
                        int a = shape[static_cast<std::size_t>(i)];
                        std::vector<std::pair<int, int>> zi(static_cast<std::size_t>(a), {1, p.unit()});
                        composed.emplace_back(a, p.compose(a, inners[static_cast<std::size_t>(i)].second, zi));
                    }
                    int right = p.compose(ell, x, composed);
                    if (left != right) return LawViolation{"associativity", p.label(ell, x)};
                }
            }
        }
    }
    return std::nullopt;
}

// --- the category F(P) ------------------------------------------------------

// A morphism X -> Y in F(P): a function f together with one operad element
// per fiber.  Objects are skeletal finite sets {0..n-1}.
struct FpHom {
    int from = 0, to = 0;
    std::vector<int> f;       // size `from`, values in [0, to)
    std::vector<int> labels;  // size `to`; labels[b] indexes P(|f^{-1}(b)|)
};

inline std::vector<std::vector<int>> hom_fibers(const FpHom& h) {
    std::vector<std::vector<int>> fib(static_cast<std::size_t>(h.to));
    for (int a = 0; a < h.from; ++a) fib[static_cast<std::size_t>(h.f[static_cast<std::size_t>(a)])].push_back(a);
    return fib;
}

inline FpHom identity_hom(const SetOperad& p, int n) {
    FpHom h;
    h.from = h.to = n;
    h.f.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) h.f[static_cast<std::size_t>(i)] = i;
    h.labels.assign(static_cast<std::size_t>(n), p.unit());
    return h;
}

inline bool hom_valid(const SetOperad& p, const FpHom& h) {
    if (static_cast<int>(h.f.size()) != h.from || static_cast<int>(h.labels.size()) != h.to) return false;
    auto fib = hom_fibers(h);
    for (int b = 0; b < h.to; ++b) {
        int a = static_cast<int>(fib[static_cast<std::size_t>(b)].size());
        if (!p.has(a) || h.labels[static_cast<std::size_t>(b)] < 0 || h.labels[static_cast<std::size_t>(b)] >= p.size(a))
            return false;
    }
    return true;
}

// all morphisms X -> Y for |X| = from, |Y| = to
inline std::vector<FpHom> fp_hom_set(const SetOperad& p, int from, int to, long long cap = 2000000) {
    std::vector<FpHom> out;
    if (to == 0 && from > 0) return out;  // no functions into the empty set
    std::vector<int> f(static_cast<std::size_t>(from), 0);
    for (;;) {
        std::vector<int> fiber_size(static_cast<std::size_t>(to), 0);
        for (int a = 0; a < from; ++a) fiber_size[static_cast<std::size_t>(f[static_cast<std::size_t>(a)])]++;
        bool ok = true;
        long long combos = 1;
        for (int b = 0; b < to && ok; ++b) {
            if (!p.has(fiber_size[static_cast<std::size_t>(b)])) ok = false;
            else combos *= p.size(fiber_size[static_cast<std::size_t>(b)]);
            if (combos > cap) throw std::length_error("fp_hom_set: too many morphisms");
        }
        if (ok) {
            std::vector<int> lab(static_cast<std::size_t>(to), 0);
            for (;;) {
                FpHom h;
                h.from = from;
                h.to = to;
                h.f = f;
                h.labels = lab;
                out.push_back(std::move(h));
                if (static_cast<long long>(out.size()) > cap) throw std::length_error("fp_hom_set: too many morphisms");
                int pos = 0;
                while (pos < to) {
                    if (++lab[static_cast<std::size_t>(pos)] < p.size(fiber_size[static_cast<std::size_t>(pos)])) break;
                    lab[static_cast<std::size_t>(pos)] = 0;
                    ++pos;
                }
                if (pos == to) break;
            }
        }
        int pos = 0;
        while (pos < from) {
            if (++f[static_cast<std::size_t>(pos)] < to) break;
            f[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == from) break;
    }
    return out;
}

// h: X -> Y followed by h2: Y -> Z.  Labels compose by feeding the h-labels
// over each h2-fiber into the h2-label, then reindexing the interleaved
// fiber union into skeletal order.
inline FpHom compose_hom(const SetOperad& p, const FpHom& h, const FpHom& h2) {
    if (h.to != h2.from) throw std::invalid_argument("compose_hom: objects do not match");
    FpHom out;
    out.from = h.from;
    out.to = h2.to;
    out.f.resize(static_cast<std::size_t>(h.from));
    for (int a = 0; a < h.from; ++a)
        out.f[static_cast<std::size_t>(a)] =
            h2.f[static_cast<std::size_t>(h.f[static_cast<std::size_t>(a)])];
    auto fib1 = hom_fibers(h);
    auto fib2 = hom_fibers(h2);
    auto fib3 = hom_fibers(out);
    out.labels.resize(static_cast<std::size_t>(h2.to));
    for (int c = 0; c < h2.to; ++c) {
        const auto& bs = fib2[static_cast<std::size_t>(c)];
        std::vector<std::pair<int, int>> inners;
        std::vector<int> block_order;  // elements of X in (b, fiber) order
        for (int b : bs) {
            inners.emplace_back(static_cast<int>(fib1[static_cast<std::size_t>(b)].size()),
                                h.labels[static_cast<std::size_t>(b)]);
            for (int a : fib1[static_cast<std::size_t>(b)]) block_order.push_back(a);
        }
        int composed = p.compose(static_cast<int>(bs.size()), h2.labels[static_cast<std::size_t>(c)], inners);
        const auto& skel = fib3[static_cast<std::size_t>(c)];  // ascending
        std::vector<int> img(skel.size());
        for (std::size_t r = 0; r < skel.size(); ++r) {
            int a = skel[r];
            int pos = static_cast<int>(std::find(block_order.begin(), block_order.end(), a) - block_order.begin());
            img[r] = pos;
        }
        out.labels[static_cast<std::size_t>(c)] =
            p.act(static_cast<int>(skel.size()), composed, Permutation::from_images(img));
    }
    return out;
}

inline bool hom_equal(const FpHom& a, const FpHom& b) {
    return a.from == b.from && a.to == b.to && a.f == b.f && a.labels == b.labels;
}

// --- right modules ----------------------------------------------------------

// Right P-module presented as a presheaf on F(P): finite components indexed
// by arity plus a contravariant action of morphisms, act(h: A->B): M(B)->M(A).
class RightModule {
public:
    using Action = std::function<int(const FpHom&, int)>;

    RightModule(FinSymSeq underlying, Action action, std::string name)
        : seq_(std::move(underlying)), act_(std::move(action)), name_(std::move(name)) {}

    const FinSymSeq& underlying() const { return seq_; }
    const std::string& name() const { return name_; }
    int size(int r) const { return seq_.size(r); }
    bool has(int r) const { return seq_.has(r); }
    const std::string& label(int r, int e) const { return seq_.label(r, e); }
    int sym_act(int k, int e, const Permutation& s) const { return seq_.act(k, e, s); }

    // e lives at arity h.to; the result lives at arity h.from
    int act(const FpHom& h, int e) const { return act_(h, e); }

private:
    FinSymSeq seq_;
    Action act_;
    std::string name_;
};

// free P-module on X: underlying sequence X o P, morphisms act by composing
// their labels into the inner factors and reindexing the tail
inline RightModule free_module(const SetOperad& p, const FinSymSeq& x, int size_cap = 20000) {
    auto full = composition_product_full(x, p.underlying(), size_cap);
    auto seq = full.seq;
    auto reps = std::make_shared<std::map<int, std::vector<CompositeRep>>>(std::move(full.reps));
    auto pseq = std::make_shared<FinSymSeq>(p.underlying());
    auto xseq = std::make_shared<FinSymSeq>(x);
    auto gamma = std::make_shared<SetOperad>(p);
    FinSymSeq seq_for_lookup = seq;
    auto action = [reps, pseq, xseq, gamma, seq_for_lookup](const FpHom& h, int e) {
        const int B = h.to;
        auto it = reps->find(B);
        if (it == reps->end() || e < 0 || e >= static_cast<int>(it->second.size()))
            throw std::invalid_argument("free module action: no such element");
        const CompositeRep& r = it->second[static_cast<std::size_t>(e)];
        auto fib = hom_fibers(h);
        Permutation tau_inv = invert(r.tau);
        // leaf prefix per block of the old representative
        std::vector<int> prefix(static_cast<std::size_t>(r.ell) + 1, 0);
        for (int i = 0; i < r.ell; ++i)
            prefix[static_cast<std::size_t>(i) + 1] =
                prefix[static_cast<std::size_t>(i)] + r.arities[static_cast<std::size_t>(i)];
        // compose each inner with the labels routed to its leaves
        std::vector<int> new_ys(static_cast<std::size_t>(r.ell));
        std::vector<int> new_ar(static_cast<std::size_t>(r.ell));
        for (int i = 0; i < r.ell; ++i) {
            std::vector<std::pair<int, int>> fed;
            int total = 0;
            for (int a = 0; a < r.arities[static_cast<std::size_t>(i)]; ++a) {
                int slot = tau_inv(prefix[static_cast<std::size_t>(i)] + a);
                int nb = static_cast<int>(fib[static_cast<std::size_t>(slot)].size());
                fed.emplace_back(nb, h.labels[static_cast<std::size_t>(slot)]);
                total += nb;
            }
            new_ys[static_cast<std::size_t>(i)] =
                gamma->compose(r.arities[static_cast<std::size_t>(i)], r.ys[static_cast<std::size_t>(i)], fed);
            new_ar[static_cast<std::size_t>(i)] = total;
        }
        // new tail: slot r of the composed operation feeds the leaf of its
        // fiber element inside the expanded block layout
        std::vector<int> leaf_prefix(static_cast<std::size_t>(B) + 1, 0);  // by old leaf position c
        for (int c = 0; c < B; ++c) {
            int slot = tau_inv(c);
            leaf_prefix[static_cast<std::size_t>(c) + 1] =
                leaf_prefix[static_cast<std::size_t>(c)] +
                static_cast<int>(fib[static_cast<std::size_t>(slot)].size());
        }
        std::vector<int> rank_in_fiber(static_cast<std::size_t>(h.from), 0);
        for (int b = 0; b < B; ++b)
            for (std::size_t rr = 0; rr < fib[static_cast<std::size_t>(b)].size(); ++rr)
                rank_in_fiber[static_cast<std::size_t>(fib[static_cast<std::size_t>(b)][rr])] = static_cast<int>(rr);
        std::vector<int> img(static_cast<std::size_t>(h.from));
        for (int a = 0; a < h.from; ++a) {
            int b = h.f[static_cast<std::size_t>(a)];
            int c = r.tau(b);  // old leaf position of slot b
            img[static_cast<std::size_t>(a)] = leaf_prefix[static_cast<std::size_t>(c)] + rank_in_fiber[static_cast<std::size_t>(a)];
        }
        CompositeRep moved{r.ell, r.x, new_ys, new_ar, Permutation::from_images(std::move(img))};
        moved = canonical_composite_rep(*xseq, *pseq, moved);
        return seq_for_lookup.index_of(h.from, composite_label(*xseq, *pseq, moved));
    };
    return RightModule(std::move(seq), action, "free(" + p.name() + ")");
}

// operad morphism given elementwise; arities above `max_arity` are not used
struct OperadMap {
    std::function<int(int, int)> map;  // (arity, element) -> element
    int max_arity = 8;
};

inline std::optional<LawViolation> check_operad_map(const SetOperad& p, const SetOperad& q, const OperadMap& phi,
                                                    long long budget = 200000) {
    if (phi.map(1, p.unit()) != q.unit()) return LawViolation{"map_unit", ""};
    long long work = 0;
    std::vector<int> arities;
    for (int k : p.underlying().arities())
        if (k <= phi.max_arity) arities.push_back(k);
    for (int k : arities)
        for (int e = 0; e < p.size(k); ++e) {
            for (int t = 0; t + 1 < k; ++t) {
                Permutation s = Permutation::transposition(k, t, t + 1);
                if (phi.map(k, p.act(k, e, s)) != q.act(k, phi.map(k, e), s))
                    return LawViolation{"map_equivariance", p.label(k, e)};
                if (++work > budget) return std::nullopt;
            }
        }
    for (int ell : arities) {
        if (ell == 0) continue;
        for (int x = 0; x < p.size(ell); ++x) {
            // one composite per shape with all slots the highest element
            std::function<void(std::vector<std::pair<int, int>>&)> check =
                [&](std::vector<std::pair<int, int>>& inners) {
                    int total = 0;
                    for (auto& [a, e] : inners) total += a;
                    if (!q.has(total) || !p.has(total)) return;
                    int lhs = phi.map(total, p.compose(ell, x, inners));
                    std::vector<std::pair<int, int>> mapped;
                    for (auto& [a, e] : inners) mapped.emplace_back(a, phi.map(a, e));
                    int rhs = q.compose(ell, phi.map(ell, x), mapped);
                    if (lhs != rhs) throw LawViolation{"map_compose", p.label(ell, x)};
                };
            try {
                std::vector<std::pair<int, int>> inners;
                std::function<void(int)> rec = [&](int i) {
                    if (work > budget) return;
                    if (i == ell) {
                        ++work;
                        check(inners);
                        return;
                    }
                    for (int a : arities) {
                        inners.emplace_back(a, p.size(a) - 1);
                        rec(i + 1);
                        inners.pop_back();
                        inners.emplace_back(a, 0);
                        rec(i + 1);
                        inners.pop_back();
                    }
                };
                rec(0);
            } catch (const LawViolation& v) {
                return v;
            }
        }
    }
    return std::nullopt;
}

// restriction along an operad map P -> Q: same elements, action through
// relabeled morphisms
inline RightModule restrict_module(const SetOperad& p, const SetOperad& q, const OperadMap& phi,
                                   const RightModule& m) {
    if (auto bad = check_operad_map(p, q, phi))
        throw std::invalid_argument("restrict_module: not an operad map (" + bad->law + ")");
    auto mp = std::make_shared<RightModule>(m);
    auto phim = phi.map;
    auto action = [mp, phim](const FpHom& h, int e) {
        FpHom relabeled = h;
        auto fib = hom_fibers(h);
        for (int b = 0; b < h.to; ++b)
            relabeled.labels[static_cast<std::size_t>(b)] =
                phim(static_cast<int>(fib[static_cast<std::size_t>(b)].size()),
                     h.labels[static_cast<std::size_t>(b)]);
        return mp->act(relabeled, e);
    };
    return RightModule(m.underlying(), action, m.name() + "|restricted");
}

// hom-style module over endomorphism(src): component k is the set of
// functions src^k -> tgt, morphisms act by substitution
inline RightModule endomorphism_hom_module(int src, int tgt, int max_arity) {
    FinSymSeq seq;
    for (int k = 0; k <= max_arity; ++k) {
        const int inputs = detail::end_table_size(src, k);
        long long count = 1;
        for (int i = 0; i < inputs; ++i) {
            count *= tgt;
            if (count > 70000) throw std::length_error("endomorphism_hom_module: component too large");
        }
        SeqComponent c;
        std::vector<int> outs(static_cast<std::size_t>(inputs), 0);
        for (long long id = 0; id < count; ++id) {
            long long v = id;
            for (int i = inputs - 1; i >= 0; --i) {
                outs[static_cast<std::size_t>(i)] = static_cast<int>(v % tgt);
                v /= tgt;
            }
            c.labels.push_back("h:" + detail::end_label(outs).substr(2));
        }
        c.gen_act.assign(static_cast<std::size_t>(std::max(0, k - 1)), std::vector<int>(c.labels.size()));
        std::vector<int> digits(static_cast<std::size_t>(k));
        for (int e = 0; e < static_cast<int>(c.labels.size()); ++e) {
            std::vector<int> f = detail::end_decode(c.labels[static_cast<std::size_t>(e)]);
            for (int t = 0; t + 1 < k; ++t) {
                std::vector<int> g(f.size());
                for (int idx = 0; idx < inputs; ++idx) {
                    int v = idx;
                    for (int i = k - 1; i >= 0; --i) {
                        digits[static_cast<std::size_t>(i)] = v % src;
                        v /= src;
                    }
                    std::swap(digits[static_cast<std::size_t>(t)], digits[static_cast<std::size_t>(t) + 1]);
                    int jdx = 0;
                    for (int i = 0; i < k; ++i) jdx = jdx * src + digits[static_cast<std::size_t>(i)];
                    g[static_cast<std::size_t>(idx)] = f[static_cast<std::size_t>(jdx)];
                }
                long long gid = 0;
                for (int d : g) gid = gid * tgt + d;
                c.gen_act[static_cast<std::size_t>(t)][static_cast<std::size_t>(e)] = static_cast<int>(gid);
            }
        }
        seq.set_component(k, std::move(c));
    }
    FinSymSeq seq_copy = seq;
    auto action = [src, tgt, seq_copy](const FpHom& h, int e) {
        auto fib = hom_fibers(h);
        // endomorphism labels are lex-sorted fixed-width tables, so the
        // element index is its own numeric encoding
        std::vector<std::vector<int>> qs;
        for (int b = 0; b < h.to; ++b) {
            int a = static_cast<int>(fib[static_cast<std::size_t>(b)].size());
            int inputs_b = detail::end_table_size(src, a);
            std::vector<int> table(static_cast<std::size_t>(inputs_b));
            int v = h.labels[static_cast<std::size_t>(b)];
            for (int i = inputs_b - 1; i >= 0; --i) {
                table[static_cast<std::size_t>(i)] = v % src;
                v /= src;
            }
            qs.push_back(std::move(table));
        }
        std::vector<int> m = detail::end_decode(seq_copy.label(h.to, e));
        const int inputs = detail::end_table_size(src, h.from);
        std::vector<int> out(static_cast<std::size_t>(inputs));
        std::vector<int> digits(static_cast<std::size_t>(h.from));
        for (int idx = 0; idx < inputs; ++idx) {
            int v = idx;
            for (int i = h.from - 1; i >= 0; --i) {
                digits[static_cast<std::size_t>(i)] = v % src;
                v /= src;
            }
            int midx = 0;
            for (int b = 0; b < h.to; ++b) {
                int sub = 0;
                for (int a : fib[static_cast<std::size_t>(b)]) sub = sub * src + digits[static_cast<std::size_t>(a)];
                midx = midx * src + qs[static_cast<std::size_t>(b)][static_cast<std::size_t>(sub)];
            }
            out[static_cast<std::size_t>(idx)] = m[static_cast<std::size_t>(midx)];
        }
        long long gid = 0;
        for (int d : out) gid = gid * tgt + d;
        return static_cast<int>(gid);
    };
    return RightModule(std::move(seq), action, "hom-module");
}

// --- interchange and the tensor on free modules ------------------------------

struct InterchangeWitness {
    int k = 0, p = 0, l = 0, q = 0;  // arities and element indices
};

// the common value of (p; q,..,q; id) and (q; p,..,p; transpose) in the
// target, or the witness of their disagreement
inline std::optional<InterchangeWitness> check_interchange(const SetOperad& target, const OperadMap& eval_p,
                                                           const SetOperad& p, const OperadMap& eval_q,
                                                           const SetOperad& q, int max_arity) {
    for (int k : p.underlying().arities()) {
        if (k > max_arity) continue;
        for (int l : q.underlying().arities()) {
            if (l > max_arity || k * l > max_arity) continue;
            for (int pe = 0; pe < p.size(k); ++pe)
                for (int qe = 0; qe < q.size(l); ++qe) {
                    int pt = eval_p.map(k, pe), qt = eval_q.map(l, qe);
                    std::vector<std::pair<int, int>> qs(static_cast<std::size_t>(k), {l, qt});
                    int side1 = target.compose(k, pt, qs);
                    std::vector<std::pair<int, int>> ps(static_cast<std::size_t>(l), {k, pt});
                    int side2 = target.act(k * l, target.compose(l, qt, ps), transpose_perm(k, l));
                    if (side1 != side2) return InterchangeWitness{k, pe, l, qe};
                }
        }
    }
    return std::nullopt;
}

inline int interchange_element(const SetOperad& target, int k, int p_elt, int l, int q_elt) {
    std::vector<std::pair<int, int>> qs(static_cast<std::size_t>(k), {l, q_elt});
    return target.compose(k, p_elt, qs);
}

// tensor of free modules, realized through evaluation maps into a concrete
// target: the result is the free target-module on the matrix tensor of the
// generating sequences
inline RightModule free_module_bv_tensor(const SetOperad& p, const FinSymSeq& x, const SetOperad& q,
                                         const FinSymSeq& y, const SetOperad& target, const OperadMap& eval_p,
                                         const OperadMap& eval_q, int max_arity = 6, int size_cap = 20000) {
    if (auto bad = check_operad_map(p, target, eval_p))
        throw std::invalid_argument("free_module_bv_tensor: eval_p is not an operad map (" + bad->law + ")");
    if (auto bad = check_operad_map(q, target, eval_q))
        throw std::invalid_argument("free_module_bv_tensor: eval_q is not an operad map (" + bad->law + ")");
    if (auto w = check_interchange(target, eval_p, p, eval_q, q, max_arity))
        throw std::invalid_argument("free_module_bv_tensor: interchange fails at (" + p.label(w->k, w->p) +
                                    ", " + q.label(w->l, w->q) + ")");
    return free_module(target, matrix_tensor(x, y), size_cap);
}

// product of morphisms: (f x g, labels p_b (x) q_{b'}), the fiber over a
// product point being the lex-ordered product of the fibers
inline FpHom mu_on_homs(const SetOperad& p, const FpHom& h1, const SetOperad& q, const FpHom& h2,
                        const SetOperad& target, const OperadMap& eval_p, const OperadMap& eval_q) {
    FpHom out;
    out.from = h1.from * h2.from;
    out.to = h1.to * h2.to;
    out.f.resize(static_cast<std::size_t>(out.from));
    for (int a = 0; a < h1.from; ++a)
        for (int a2 = 0; a2 < h2.from; ++a2)
            out.f[static_cast<std::size_t>(a * h2.from + a2)] =
                h1.f[static_cast<std::size_t>(a)] * h2.to + h2.f[static_cast<std::size_t>(a2)];
    auto fib1 = hom_fibers(h1);
    auto fib2 = hom_fibers(h2);
    out.labels.resize(static_cast<std::size_t>(out.to));
    for (int b = 0; b < h1.to; ++b)
        for (int b2 = 0; b2 < h2.to; ++b2) {
            int k = static_cast<int>(fib1[static_cast<std::size_t>(b)].size());
            int l = static_cast<int>(fib2[static_cast<std::size_t>(b2)].size());
            int pt = eval_p.map(k, h1.labels[static_cast<std::size_t>(b)]);
            int qt = eval_q.map(l, h2.labels[static_cast<std::size_t>(b2)]);
            // both interchange composites must agree on the labels used
            std::vector<std::pair<int, int>> qs(static_cast<std::size_t>(k), {l, qt});
            int side1 = target.compose(k, pt, qs);
            std::vector<std::pair<int, int>> ps(static_cast<std::size_t>(l), {k, pt});
            int side2 = target.act(k * l, target.compose(l, qt, ps), transpose_perm(k, l));
            if (side1 != side2)
                throw std::invalid_argument("mu_on_homs: interchange fails at (" + p.label(k, h1.labels[static_cast<std::size_t>(b)]) +
                                            ", " + q.label(l, h2.labels[static_cast<std::size_t>(b2)]) + ")");
            out.labels[static_cast<std::size_t>(b * h2.to + b2)] = side1;
        }
    return out;
}

}  // namespace skewcubes
