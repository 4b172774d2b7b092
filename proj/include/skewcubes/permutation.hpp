#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace skewcubes {

// Bijection of {0..k-1}, stored as the image array.  Externally (JSON and
// printed forms) images are 1-based; internally everything is 0-based.
//
// Group law is function composition: compose(a, b)(r) = a(b(r)), so the
// right-action axiom x.(a*b) = (x.a).b holds for actions that apply the
// leftmost factor first.
class Permutation {
public:
    Permutation() = default;

    static Permutation identity(int k) {
        Permutation p;
        p.img_.resize(static_cast<std::size_t>(k));
        std::iota(p.img_.begin(), p.img_.end(), 0);
        return p;
    }

    // images are 0-based
    static Permutation from_images(std::vector<int> images) {
        Permutation p;
        p.img_ = std::move(images);
        if (!p.is_bijection())
            throw std::invalid_argument("Permutation: images are not a bijection");
        return p;
    }

    static Permutation from_images_1based(const std::vector<int>& images) {
        std::vector<int> v(images.size());
        for (std::size_t i = 0; i < images.size(); ++i) v[i] = images[i] - 1;
        return from_images(std::move(v));
    }

    // transposition (a b), 0-based, within arity k
    static Permutation transposition(int k, int a, int b) {
        Permutation p = identity(k);
        std::swap(p.img_[static_cast<std::size_t>(a)], p.img_[static_cast<std::size_t>(b)]);
        return p;
    }

    int arity() const { return static_cast<int>(img_.size()); }
    int operator()(int i) const { return img_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& images() const { return img_; }

    std::vector<int> images_1based() const {
        std::vector<int> v(img_.size());
        for (std::size_t i = 0; i < img_.size(); ++i) v[i] = img_[i] + 1;
        return v;
    }

    bool is_identity() const {
        for (std::size_t i = 0; i < img_.size(); ++i)
            if (img_[i] != static_cast<int>(i)) return false;
        return true;
    }

    friend bool operator==(const Permutation& a, const Permutation& b) { return a.img_ == b.img_; }
    friend bool operator!=(const Permutation& a, const Permutation& b) { return !(a == b); }
    friend bool operator<(const Permutation& a, const Permutation& b) { return a.img_ < b.img_; }

    std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < img_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(img_[i] + 1);
        }
        s += ']';
        return s;
    }

private:
    bool is_bijection() const {
        std::vector<char> seen(img_.size(), 0);
        for (int v : img_) {
            if (v < 0 || v >= static_cast<int>(img_.size()) || seen[static_cast<std::size_t>(v)])
                return false;
            seen[static_cast<std::size_t>(v)] = 1;
        }
        return true;
    }

    std::vector<int> img_;
};

// (a*b)(r) = a(b(r))
inline Permutation compose(const Permutation& a, const Permutation& b) {
    if (a.arity() != b.arity())
        throw std::invalid_argument("compose: arity mismatch");
    std::vector<int> img(static_cast<std::size_t>(a.arity()));
    for (int r = 0; r < a.arity(); ++r) img[static_cast<std::size_t>(r)] = a(b(r));
    return Permutation::from_images(std::move(img));
}

inline Permutation invert(const Permutation& p) {
    std::vector<int> img(static_cast<std::size_t>(p.arity()));
    for (int r = 0; r < p.arity(); ++r) img[static_cast<std::size_t>(p(r))] = r;
    return Permutation::from_images(std::move(img));
}

// tau_1 (+) ... (+) tau_n acting blockwise, block i occupying the slots
// [sum of earlier arities, +arity_i).
inline Permutation block_sum(std::span<const Permutation> taus) {
    int total = 0;
    for (const auto& t : taus) total += t.arity();
    std::vector<int> img(static_cast<std::size_t>(total));
    int off = 0;
    for (const auto& t : taus) {
        for (int r = 0; r < t.arity(); ++r)
            img[static_cast<std::size_t>(off + r)] = off + t(r);
        off += t.arity();
    }
    return Permutation::from_images(std::move(img));
}

inline Permutation block_sum(const std::vector<Permutation>& taus) {
    return block_sum(std::span<const Permutation>(taus.data(), taus.size()));
}

// Transpose permutation on a k-by-l grid in row-major encoding:
// position (i,j) is stored at i*l + j (0-based) and sent to j*k + i.
inline Permutation transpose_perm(int k, int l) {
    std::vector<int> img(static_cast<std::size_t>(k) * static_cast<std::size_t>(l));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < l; ++j)
            img[static_cast<std::size_t>(i * l + j)] = j * k + i;
    return Permutation::from_images(std::move(img));
}

// Pairwise product permutation on the same grid: (i,j) -> (sigma(i), tau(j)).
// Homomorphism in each argument.
inline Permutation product_perm(const Permutation& sigma, const Permutation& tau) {
    const int k = sigma.arity(), l = tau.arity();
    std::vector<int> img(static_cast<std::size_t>(k) * static_cast<std::size_t>(l));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < l; ++j)
            img[static_cast<std::size_t>(i * l + j)] = sigma(i) * l + tau(j);
    return Permutation::from_images(std::move(img));
}

// Block transport: the permutation of sum(sizes) slots that moves the block
// at position i (sizes[i] wide) to where block sigma(i) sits once blocks are
// laid out in the order sizes[sigma^{-1}(0)], sizes[sigma^{-1}(1)], ...
// Degenerates to sigma itself when all sizes are 1.
inline Permutation block_transport(const Permutation& sigma, const std::vector<int>& sizes) {
    const int k = sigma.arity();
    if (static_cast<int>(sizes.size()) != k)
        throw std::invalid_argument("block_transport: size list does not match arity");
    Permutation inv = invert(sigma);
    // prefix of the rearranged layout
    std::vector<int> rearranged_prefix(static_cast<std::size_t>(k) + 1, 0);
    for (int t = 0; t < k; ++t)
        rearranged_prefix[static_cast<std::size_t>(t) + 1] =
            rearranged_prefix[static_cast<std::size_t>(t)] + sizes[static_cast<std::size_t>(inv(t))];
    int total = rearranged_prefix[static_cast<std::size_t>(k)];
    std::vector<int> img(static_cast<std::size_t>(total));
    int pos = 0;
    for (int i = 0; i < k; ++i) {
        int dst = rearranged_prefix[static_cast<std::size_t>(sigma(i))];
        for (int a = 0; a < sizes[static_cast<std::size_t>(i)]; ++a)
            img[static_cast<std::size_t>(pos++)] = dst + a;
    }
    return Permutation::from_images(std::move(img));
}

// Factor p into adjacent transpositions s_{i} = (i, i+1) such that applying
// the recorded generators left to right under a right action reproduces the
// action of p: x.p = ((x.g1).g2)...  Returns generator indices i (0-based).
inline std::vector<int> adjacent_factorization(const Permutation& p) {
    std::vector<int> word;
    std::vector<int> img = p.images();
    const int k = p.arity();
    // bubble sort; p = s_{i_r} o ... o s_{i_1} when swaps are recorded
    // in the order performed, so the right action applies them reversed.
    bool moved = true;
    while (moved) {
        moved = false;
        for (int i = 0; i + 1 < k; ++i) {
            if (img[static_cast<std::size_t>(i)] > img[static_cast<std::size_t>(i) + 1]) {
                std::swap(img[static_cast<std::size_t>(i)], img[static_cast<std::size_t>(i) + 1]);
                word.push_back(i);
                moved = true;
            }
        }
    }
    std::reverse(word.begin(), word.end());
    return word;
}

// All permutations of arity k in lexicographic order.  k <= 8 in practice.
inline std::vector<Permutation> all_permutations(int k) {
    std::vector<int> img(static_cast<std::size_t>(k));
    std::iota(img.begin(), img.end(), 0);
    std::vector<Permutation> out;
    do {
        out.push_back(Permutation::from_images(img));
    } while (std::next_permutation(img.begin(), img.end()));
    return out;
}

}  // namespace skewcubes
