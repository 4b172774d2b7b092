#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "skewcubes/conf_weiss.hpp"
#include "skewcubes/permutation.hpp"
#include "skewcubes/retraction.hpp"
#include "skewcubes/set_operad.hpp"
#include "skewcubes/skew_cubes.hpp"
#include "skewcubes/symseq.hpp"

namespace skewcubes {

using Json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- permutations: {"k": 3, "images": [2,1,3]}, images 1-based ---------------

inline Json to_json(const Permutation& p) {
    return Json{{"k", p.arity()}, {"images", p.images_1based()}};
}

inline Permutation permutation_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("k") || !j.contains("images"))
        throw ParseError("permutation: expected {k, images}");
    std::vector<int> images = j.at("images").get<std::vector<int>>();
    if (static_cast<int>(images.size()) != j.at("k").get<int>())
        throw ParseError("permutation: image count disagrees with k");
    try {
        return Permutation::from_images_1based(images);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

// --- symmetric sequences ------------------------------------------------------
// {"components": {"2": {"elements": [...],
//                       "action": {"2,1": ["b","a"], ...}}}}
// action tables are indexed by the 1-based images of the adjacent
// transpositions and list the image of each element in order

inline Json to_json(const FinSymSeq& s) {
    Json comps = Json::object();
    for (int k : s.arities()) {
        const auto& c = s.at(k);
        Json action = Json::object();
        for (int t = 0; t + 1 < k; ++t) {
            Permutation gen = Permutation::transposition(k, t, t + 1);
            std::string key;
            for (int r = 0; r < k; ++r) {
                if (r) key += ',';
                key += std::to_string(gen(r) + 1);
            }
            Json images = Json::array();
            for (int e = 0; e < c.size(); ++e)
                images.push_back(c.labels[static_cast<std::size_t>(
                    c.gen_act[static_cast<std::size_t>(t)][static_cast<std::size_t>(e)])]);
            action[key] = images;
        }
        comps[std::to_string(k)] = Json{{"elements", c.labels}, {"action", action}};
    }
    return Json{{"components", comps}};
}

inline FinSymSeq finsymseq_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("components")) throw ParseError("symseq: expected {components}");
    FinSymSeq out;
    for (const auto& [kstr, cj] : j.at("components").items()) {
        int k = std::stoi(kstr);
        SeqComponent c;
        c.labels = cj.at("elements").get<std::vector<std::string>>();
        if (!std::is_sorted(c.labels.begin(), c.labels.end()))
            throw ParseError("symseq: elements must be listed sorted");
        std::map<std::string, int> index;
        for (int e = 0; e < c.size(); ++e) index[c.labels[static_cast<std::size_t>(e)]] = e;
        c.gen_act.assign(static_cast<std::size_t>(std::max(0, k - 1)), std::vector<int>(c.labels.size()));
        for (int t = 0; t + 1 < k; ++t) {
            Permutation gen = Permutation::transposition(k, t, t + 1);
            std::string key;
            for (int r = 0; r < k; ++r) {
                if (r) key += ',';
                key += std::to_string(gen(r) + 1);
            }
            if (!cj.contains("action") || !cj.at("action").contains(key))
                throw ParseError("symseq: missing action table " + key + " at arity " + kstr);
            auto images = cj.at("action").at(key).get<std::vector<std::string>>();
            if (images.size() != c.labels.size()) throw ParseError("symseq: action table size mismatch");
            for (int e = 0; e < c.size(); ++e) {
                auto it = index.find(images[static_cast<std::size_t>(e)]);
                if (it == index.end()) throw ParseError("symseq: action hits unknown label");
                c.gen_act[static_cast<std::size_t>(t)][static_cast<std::size_t>(e)] = it->second;
            }
        }
        try {
            out.set_component(k, std::move(c));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
        }
    }
    return out;
}

// --- set operads ---------------------------------------------------------------
// {"builtin": "terminal" | "endomorphism:2" | "associative", "max_arity": 4}
// or {"components": ..., "unit": "label", "compose": {"p|q1,q2": "r", ...}}

inline SetOperad set_operad_from_json(const Json& j) {
    if (j.contains("builtin")) {
        std::string name = j.at("builtin").get<std::string>();
        int max_arity = j.value("max_arity", 3);
        if (name == "terminal") return SetOperad::terminal(max_arity);
        if (name == "associative") return SetOperad::associative(max_arity);
        if (name.rfind("endomorphism:", 0) == 0)
            return SetOperad::endomorphism(std::stoi(name.substr(13)), max_arity);
        throw ParseError("set operad: unknown builtin " + name);
    }
    FinSymSeq seq = finsymseq_from_json(j);
    std::map<std::string, std::string> table;
    for (const auto& [key, val] : j.at("compose").items()) table[key] = val.get<std::string>();
    SetOperad p = SetOperad::from_tables(std::move(seq), j.at("unit").get<std::string>(), std::move(table));
    if (auto bad = check_operad_laws(p, 4, 64))
        throw ParseError("set operad: law violation (" + bad->law + " at " + bad->detail + ")");
    return p;
}

// --- morphisms of F(P) -----------------------------------------------------------
// {"from": 2, "to": 1, "f": [1, 1], "labels": ["f:0001"]}, f 1-based

inline Json to_json(const SetOperad& p, const FpHom& h) {
    std::vector<int> f1(h.f.size());
    for (std::size_t i = 0; i < h.f.size(); ++i) f1[i] = h.f[i] + 1;
    auto fib = hom_fibers(h);
    Json labels = Json::array();
    for (int b = 0; b < h.to; ++b)
        labels.push_back(p.label(static_cast<int>(fib[static_cast<std::size_t>(b)].size()),
                                 h.labels[static_cast<std::size_t>(b)]));
    return Json{{"from", h.from}, {"to", h.to}, {"f", f1}, {"labels", labels}};
}

inline FpHom fp_hom_from_json(const SetOperad& p, const Json& j) {
    FpHom h;
    h.from = j.at("from").get<int>();
    h.to = j.at("to").get<int>();
    for (int v : j.at("f").get<std::vector<int>>()) {
        if (v < 1 || v > h.to) throw ParseError("hom: image out of range");
        h.f.push_back(v - 1);
    }
    if (static_cast<int>(h.f.size()) != h.from) throw ParseError("hom: wrong function length");
    auto fib = hom_fibers(h);
    auto labels = j.at("labels").get<std::vector<std::string>>();
    if (static_cast<int>(labels.size()) != h.to) throw ParseError("hom: wrong label count");
    for (int b = 0; b < h.to; ++b) {
        int a = static_cast<int>(fib[static_cast<std::size_t>(b)].size());
        try {
            h.labels.push_back(p.underlying().index_of(a, labels[static_cast<std::size_t>(b)]));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
        }
    }
    if (!hom_valid(p, h)) throw ParseError("hom: labels do not match fiber arities");
    return h;
}

// --- skew cube tuples ------------------------------------------------------------
// {"m": 2, "group": "O·Λ", "cubes": [{"v": [...], "g": [[...], ...]}]}
// the optional image form adds the images of +/- e_d / 2 per cube

inline Json to_json(const Mat& a) {
    Json rows = Json::array();
    for (int i = 0; i < a.dim(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < a.dim(); ++j) row.push_back(a(i, j));
        rows.push_back(row);
    }
    return rows;
}

inline Mat mat_from_json(const Json& j, int m) {
    if (!j.is_array() || static_cast<int>(j.size()) != m) throw ParseError("matrix: wrong row count");
    Mat a(m);
    for (int i = 0; i < m; ++i) {
        if (static_cast<int>(j[static_cast<std::size_t>(i)].size()) != m)
            throw ParseError("matrix: wrong column count");
        for (int c = 0; c < m; ++c) a(i, c) = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].get<double>();
    }
    return a;
}

inline Json to_json(const SkewCubeTuple& t, bool with_images = false) {
    Json cubes = Json::array();
    for (const auto& c : t.cubes) {
        Json cj{{"v", c.center}, {"g", to_json(c.g.matrix)}};
        if (with_images) {
            Json plus = Json::array(), minus = Json::array();
            for (int d = 0; d < t.m; ++d) {
                Vec e(static_cast<std::size_t>(t.m), 0.0);
                e[static_cast<std::size_t>(d)] = 0.5;
                plus.push_back(cube_embed(c, e));
                e[static_cast<std::size_t>(d)] = -0.5;
                minus.push_back(cube_embed(c, e));
            }
            cj["images_plus"] = plus;
            cj["images_minus"] = minus;
        }
        cubes.push_back(cj);
    }
    return Json{{"m", t.m}, {"group", group_tag_name(t.tag)}, {"cubes", cubes}};
}

inline SkewCubeTuple skew_tuple_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("m") || !j.contains("group") || !j.contains("cubes"))
        throw ParseError("tuple: expected {m, group, cubes}");
    SkewCubeTuple t;
    t.m = j.at("m").get<int>();
    if (t.m < 1) throw ParseError("tuple: dimension must be positive");
    auto tag = group_tag_from_name(j.at("group").get<std::string>());
    if (!tag) throw ParseError("tuple: unknown group tag " + j.at("group").get<std::string>());
    t.tag = *tag;
    for (const auto& cj : j.at("cubes")) {
        SkewCube c;
        c.center = cj.at("v").get<Vec>();
        if (static_cast<int>(c.center.size()) != t.m) throw ParseError("tuple: center dimension mismatch");
        Mat a = mat_from_json(cj.at("g"), t.m);
        try {
            c.g = GroupElem::make(std::move(a), t.tag);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
        }
        // image form, when present, must be consistent with (v, g)
        if (cj.contains("images_plus")) {
            for (int d = 0; d < t.m; ++d) {
                Vec e(static_cast<std::size_t>(t.m), 0.0);
                e[static_cast<std::size_t>(d)] = 0.5;
                Vec plus = cj.at("images_plus")[static_cast<std::size_t>(d)].get<Vec>();
                if (max_abs_diff(plus, cube_embed(c, e)) > 1e-12)
                    throw ParseError("tuple: stored images disagree with (v, g)");
            }
        }
        t.cubes.push_back(std::move(c));
    }
    return t;
}

inline Json to_json(const ValidityReport& r) {
    Json pairs = Json::array();
    for (const auto& p : r.pairs) pairs.push_back(Json{{"i", p.i}, {"j", p.j}, {"margin", p.margin}});
    Json out{{"valid", r.valid}, {"tol", r.tol}, {"containment", r.containment}, {"pairs", pairs}};
    if (!r.failure.empty()) out["failure"] = r.failure;
    return out;
}

inline Json to_json(const FramedConfiguration& c) {
    Json frames = Json::array();
    for (const auto& g : c.frames) frames.push_back(to_json(g.matrix));
    return Json{{"m", c.m}, {"points", c.points}, {"frames", frames}};
}

// --- homotopy traces -------------------------------------------------------------

inline Json to_json(const HomotopyTrace& tr) {
    Json frames = Json::array();
    for (std::size_t i = 0; i < tr.frames.size(); ++i)
        frames.push_back(Json{{"t", tr.t_samples[i]}, {"tuple", to_json(tr.frames[i])}});
    return Json{{"samples", frames}};
}

// one row per (sample, cube): t, center coordinates, matrix entries row-major
inline std::string trace_to_csv(const HomotopyTrace& tr) {
    std::ostringstream os;
    os.precision(17);
    if (tr.frames.empty()) return "";
    const int m = tr.frames.front().m;
    os << "t,cube";
    for (int d = 0; d < m; ++d) os << ",v" << d;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) os << ",g" << i << j;
    os << "\n";
    for (std::size_t s = 0; s < tr.frames.size(); ++s)
        for (int c = 0; c < tr.frames[s].arity(); ++c) {
            os << tr.t_samples[s] << "," << c;
            const auto& cube = tr.frames[s].cubes[static_cast<std::size_t>(c)];
            for (int d = 0; d < m; ++d) os << "," << cube.center[static_cast<std::size_t>(d)];
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) os << "," << cube.g.matrix(i, j);
            os << "\n";
        }
    return os.str();
}

// --- regions and covers ------------------------------------------------------------

inline Json to_json(const BoxRegion& r) {
    Json boxes = Json::array();
    for (const auto& b : r.boxes) boxes.push_back(Json{{"lo", b.lo}, {"hi", b.hi}});
    return Json{{"m", r.m}, {"boxes", boxes}};
}

inline BoxRegion region_from_json(const Json& j) {
    int m = j.at("m").get<int>();
    std::vector<Box> boxes;
    for (const auto& bj : j.at("boxes")) {
        Box b;
        b.lo = bj.at("lo").get<Vec>();
        b.hi = bj.at("hi").get<Vec>();
        if (static_cast<int>(b.lo.size()) != m || static_cast<int>(b.hi.size()) != m)
            throw ParseError("region: box dimension mismatch");
        boxes.push_back(std::move(b));
    }
    try {
        return make_region(m, std::move(boxes));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

inline Json to_json(const CoverSpec& c) {
    if (c.kind == CoverSpec::Kind::disk_products)
        return Json{{"type", "disk_products"},
                    {"factor_m", to_json(c.factor_m)},
                    {"factor_n", to_json(c.factor_n)}};
    Json members = Json::array();
    for (const auto& m : c.members) members.push_back(to_json(m));
    return Json{{"type", "explicit"}, {"region", to_json(c.region)}, {"members", members}};
}

inline CoverSpec cover_from_json(const Json& j) {
    std::string type = j.value("type", "explicit");
    if (type == "disk_products")
        return disk_product_cover(region_from_json(j.at("factor_m")), region_from_json(j.at("factor_n")));
    if (type != "explicit") throw ParseError("cover: unknown type " + type);
    std::vector<BoxRegion> members;
    for (const auto& mj : j.at("members")) members.push_back(region_from_json(mj));
    try {
        return explicit_cover(region_from_json(j.at("region")), std::move(members));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

inline Json to_json(const WeissReport& r) {
    Json per_k = Json::array();
    for (const auto& row : r.per_k) {
        Json rj{{"k", row.k}, {"trials", row.trials}, {"failures", row.failures}};
        if (!row.witness.empty()) rj["witness"] = row.witness;
        per_k.push_back(rj);
    }
    return Json{{"pass", r.pass}, {"seed", r.seed}, {"per_k", per_k}};
}

inline Json to_json(const CompleteWeissReport& r) {
    Json fails = Json::array();
    for (const auto& f : r.failures) fails.push_back(to_json(f));
    return Json{{"pass", r.pass}, {"seed", r.seed}, {"subcollections", r.subcollections}, {"failures", fails}};
}

// --- file helpers ---------------------------------------------------------------

inline Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    return j;
}

inline void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace skewcubes
