// Command line driver: validate and transform cube tuples, run the seeded
// law suites, evaluate interchange, compute symmetric-sequence products, and
// check covers.  Exit codes: 0 pass, 1 semantic failure, 2 input error.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "skewcubes/json_io.hpp"
#include "skewcubes/law_suite.hpp"

using namespace skewcubes;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

void emit(const Json& report, const std::string& out_path) {
    std::string text = report.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        save_text(out_path, text);
}

int cmd_validate(const std::string& file, double tol, const std::string& out) {
    SkewCubeTuple t = skew_tuple_from_json(load_json(file));
    ValidityReport rep = validate_tuple(t, tol);
    Json j = to_json(rep);
    j["command"] = "validate";
    emit(j, out);
    return rep.valid ? kExitPass : kExitFail;
}

int cmd_check_operad(std::uint64_t seed, double tol, int trials, std::vector<int> dims,
                     std::vector<std::string> groups, const std::string& out) {
    if (dims.empty()) dims = {1, 2, 3};
    if (groups.empty()) groups = {"dilation", "orth_dilation", "special_orth_dilation"};
    Json combos = Json::array();
    bool pass = true;
    Rng root(seed);
    for (int m : dims)
        for (const auto& gname : groups) {
            auto tag = group_tag_from_name(gname);
            if (!tag || *tag == GroupTag::custom) throw ParseError("unknown group " + gname);
            Rng stream = root.derive("operad-laws").derive(gname).derive(static_cast<std::uint64_t>(m));
            OperadLawResult r = run_operad_law_suite(m, *tag, trials, tol, stream);
            pass = pass && r.pass;
            combos.push_back(Json{{"m", m},
                                  {"group", group_tag_name(*tag)},
                                  {"trials", r.trials},
                                  {"laws",
                                   Json{{"associativity", r.dev_associativity},
                                        {"unit", r.dev_unit},
                                        {"equivariance_outer", r.dev_equivariance_outer},
                                        {"equivariance_inner", r.dev_equivariance_inner}}},
                                  {"pass", r.pass}});
        }
    Json report{{"command", "check-operad"}, {"seed", seed}, {"tol", tol}, {"combos", combos}, {"pass", pass}};
    emit(report, out);
    return pass ? kExitPass : kExitFail;
}

int cmd_retract(const std::string& file, const std::string& stage, int samples, double coeff,
                bool root2_coeff, double tol, const std::string& out, const std::string& format) {
    SkewCubeTuple t = skew_tuple_from_json(load_json(file));
    if (!validate_tuple(t, tol).valid) {
        std::cerr << "retract: input tuple is not valid\n";
        return kExitFail;
    }
    RetractStage st;
    if (stage == "equi")
        st = RetractStage::equidiameter;
    else if (stage == "free")
        st = RetractStage::freewheeling;
    else
        throw ParseError("retract: stage must be equi or free");
    double c = coeff > 0 ? coeff : default_freewheel_coeff(t.m);
    if (root2_coeff) c = std::sqrt(2.0);
    HomotopyTrace tr;
    try {
        tr = build_trace(t, st, samples, c, tol);
    } catch (const std::invalid_argument& e) {
        std::cerr << "retract: " << e.what() << "\n";
        return kExitFail;
    }
    bool frames_valid = true;
    for (const auto& f : tr.frames) frames_valid = frames_valid && validate_tuple(f, tol, true).valid;
    Json report{{"command", "retract"}, {"stage", stage}, {"samples", samples}, {"coeff", c},
                {"frames_valid", frames_valid}};
    if (st == RetractStage::freewheeling) {
        bool endpoint_ok = is_freewheeling(tr.frames.back(), tol);
        report["endpoint_freewheeling"] = endpoint_ok;
        if (!endpoint_ok) report["warning"] = "endpoint misses the ball criterion at this coefficient";
    } else {
        report["endpoint_equidiameter"] = is_equidiameter(tr.frames.back(), tol);
    }
    if (format == "csv") {
        if (out.empty())
            std::cout << trace_to_csv(tr);
        else
            save_text(out, trace_to_csv(tr));
        std::cerr << report.dump(2) << "\n";
    } else {
        report["trace"] = to_json(tr);
        emit(report, out);
    }
    return frames_valid ? kExitPass : kExitFail;
}

int cmd_interchange(const std::string& file_p, const std::string& file_q, double tol,
                    const std::string& out) {
    SkewCubeTuple p = skew_tuple_from_json(load_json(file_p));
    SkewCubeTuple q = skew_tuple_from_json(load_json(file_q));
    if (!validate_tuple(p, tol).valid || !validate_tuple(q, tol).valid) {
        std::cerr << "interchange: input tuples must be valid\n";
        return kExitFail;
    }
    InterchangeResult r = interchange_check(p, q, tol);
    Json report{{"command", "interchange"}, {"tol", tol}, {"max_deviation", r.max_deviation}, {"pass", r.ok}};
    emit(report, out);
    return r.ok ? kExitPass : kExitFail;
}

int cmd_symseq(const std::string& op, const std::string& file_x, const std::string& file_y,
               const std::string& out) {
    FinSymSeq x = finsymseq_from_json(load_json(file_x));
    FinSymSeq y = finsymseq_from_json(load_json(file_y));
    FinSymSeq result;
    if (op == "graded")
        result = graded_tensor(x, y);
    else if (op == "compose")
        result = composition_product(x, y);
    else if (op == "matrix")
        result = matrix_tensor(x, y);
    else
        throw ParseError("symseq: op must be graded, compose, or matrix");
    Json j = to_json(result);
    j["command"] = "symseq";
    j["op"] = op;
    emit(j, out);
    return kExitPass;
}

int cmd_weiss(const std::string& cover_file, int kmax, int trials, int subset_size, bool complete,
              std::uint64_t seed, const std::string& out) {
    CoverSpec cover = cover_from_json(load_json(cover_file));
    WeissReport rep = check_weiss_cover(cover, kmax, trials, seed);
    Json report{{"command", "weiss"}, {"seed", seed}, {"weiss", to_json(rep)}};
    bool pass = rep.pass;
    if (complete) {
        CompleteWeissReport crep = check_complete_weiss(cover, subset_size, kmax, trials, seed);
        report["complete"] = to_json(crep);
        pass = pass && crep.pass;
    }
    report["pass"] = pass;
    emit(report, out);
    return pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"skew little cubes toolkit"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    double tol = kDefaultTol;
    int trials = 100;
    std::string out;
    std::string format = "json";

    std::string validate_file;
    auto* validate = app.add_subcommand("validate", "validate a cube tuple file");
    validate->add_option("file", validate_file)->required();
    validate->add_option("--tol", tol);
    validate->add_option("--out", out);

    std::vector<int> dims;
    std::vector<std::string> groups;
    auto* check = app.add_subcommand("check-operad", "run the seeded operad law suite");
    check->add_option("--seed", seed);
    check->add_option("--tol", tol);
    check->add_option("--trials", trials);
    check->add_option("--dim", dims);
    check->add_option("--group", groups);
    check->add_option("--out", out);

    std::string retract_file, stage = "equi";
    int samples = 33;
    double coeff = -1.0;
    bool root2_coeff = false;
    auto* retract = app.add_subcommand("retract", "emit a deformation trace for a tuple");
    retract->add_option("file", retract_file)->required();
    retract->add_option("--stage", stage)->check(CLI::IsMember({"equi", "free"}));
    retract->add_option("--samples", samples)->check(CLI::PositiveNumber);
    retract->add_option("--coeff", coeff);
    retract->add_flag("--root2-coeff", root2_coeff);
    retract->add_option("--tol", tol);
    retract->add_option("--out", out);
    retract->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

    std::string file_p, file_q;
    auto* inter = app.add_subcommand("interchange", "evaluate both interchange composites");
    inter->add_option("file_p", file_p)->required();
    inter->add_option("file_q", file_q)->required();
    inter->add_option("--tol", tol);
    inter->add_option("--out", out);

    std::string op, file_x, file_y;
    auto* sym = app.add_subcommand("symseq", "products of symmetric sequences");
    sym->add_option("op", op)->required()->check(CLI::IsMember({"graded", "compose", "matrix"}));
    sym->add_option("fileX", file_x)->required();
    sym->add_option("fileY", file_y)->required();
    sym->add_option("--out", out);

    std::string cover_file;
    int kmax = 4, subset_size = 3;
    bool complete = false;
    auto* weiss = app.add_subcommand("weiss", "finite-subset cover checks");
    weiss->add_option("cover", cover_file)->required();
    weiss->add_option("--kmax", kmax);
    weiss->add_option("--trials", trials);
    weiss->add_option("--subset-size", subset_size);
    weiss->add_flag("--complete", complete);
    weiss->add_option("--seed", seed);
    weiss->add_option("--out", out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(validate)) return cmd_validate(validate_file, tol, out);
        if (app.got_subcommand(check)) return cmd_check_operad(seed, tol, trials, dims, groups, out);
        if (app.got_subcommand(retract))
            return cmd_retract(retract_file, stage, samples, coeff, root2_coeff, tol, out, format);
        if (app.got_subcommand(inter)) return cmd_interchange(file_p, file_q, tol, out);
        if (app.got_subcommand(sym)) return cmd_symseq(op, file_x, file_y, out);
        if (app.got_subcommand(weiss))
            return cmd_weiss(cover_file, kmax, trials, subset_size, complete, seed, out);
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitInput;
}
