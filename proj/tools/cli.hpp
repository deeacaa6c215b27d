#pragma once

#include <chrono>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "packing3d.hpp"

namespace packing3d::cli {

enum Exit { ok = 0, failed = 1, bad_input = 2 };

struct SolveArgs {
    std::string algo = "volume";
    std::string input, output, report, descriptor;
    std::string epsilon, mode = "aptas", backend = "licheng";
    std::optional<std::size_t> k_max;
    bool rotations = false;
};

struct Solved {
    Packing packing;
    json result;  // bins / height / volume
    json bound;
    json stages = json::object();
    Rational volume_lb = 0;
};

inline const std::vector<std::string>& algo_names() {
    static const std::vector<std::string> names{"absolute", "absolute-sp", "asymptotic", "mvbb", "rotation",
                                                "licheng",  "halfthin",    "volume"};
    return names;
}

inline bool is_unit(const BinSpec& b) { return b.W == 1 && b.D == 1 && b.H == 1; }

inline std::vector<Item> normalized(const std::vector<Item>& items, const BinSpec& b, bool scale_h) {
    std::vector<Item> out;
    for (const auto& it : items) out.push_back(Item{it.id, it.w / b.W, it.d / b.D, scale_h ? it.h / b.H : it.h});
    return out;
}

inline void denormalize(Packing& p, const BinSpec& b, bool scale_h) {
    for (auto& q : p.placements) {
        q.x *= b.W;
        q.y *= b.D;
        if (scale_h) q.z *= b.H;
    }
    p.bin = b;
}

inline json approx(const Rational& r) { return to_double(r); }

inline Solved solve_instance(const Instance& inst, const SolveArgs& a) {
    if (a.backend == "external") throw PreconditionError("the external strip backend is not installed");
    if (a.backend != "licheng") throw ParseError("unknown backend '" + a.backend + "'");
    if (a.rotations && a.algo != "rotation") throw ParseError("--rotations is only valid with --algo rotation");
    const bool strip = a.algo == "absolute-sp" || a.algo == "licheng" || a.algo == "halfthin";
    const BinSpec bin = inst.bin;
    const std::vector<Item>& items = inst.items;
    Solved s;
    const Rational v = total_volume(items);
    auto eps_or = [&](const Rational& d) { return a.epsilon.empty() ? d : parse_rational(a.epsilon); };

    if (a.algo == "mvbb") {
        MvbbOptions o;
        o.epsilon = eps_or(o.epsilon);
        o.mode = parse_mvbb_mode(a.mode);
        auto r = solve_mvbb(items, o);
        s.packing = r.packing;
        s.volume_lb = r.lower_bound;
        s.result = {{"volume", rational_to_json(r.volume)}, {"box", bin_to_json(r.box)}};
        s.bound = {{"formula", r.bound}, {"certified", r.certified}, {"backend", r.backend},
                   {"lower_bound", rational_to_json(r.lower_bound)}};
        json cls = json::object();
        for (const auto& [k, n] : r.class_counts) cls[k] = n;
        s.stages = {{"mode", r.mode}, {"case", r.case_label}, {"delta", rational_to_json(r.delta)},
                    {"mu", rational_to_json(r.mu)}, {"classes", cls}, {"evaluations", r.evaluations.size()},
                    {"axis", std::string(1, axis_name(r.axis))}};
        return s;
    }

    if (a.algo == "rotation" && !(bin.W == bin.D && bin.D == bin.H))
        throw PreconditionError("rotation needs a cubic bin");
    const std::vector<Item> u = is_unit(bin) ? items : normalized(items, bin, !strip);
    const Rational vu = total_volume(u);

    if (a.algo == "volume") {
        s.packing = volume_bin_pack(u);
        s.bound = {{"formula", "8v+18"}, {"value", rational_to_json(volume_bin_bound(u))}};
    } else if (a.algo == "licheng" || a.algo == "halfthin") {
        auto mode = a.algo == "licheng" ? LiChengMode::general : LiChengMode::halfthin;
        auto r = licheng_strip(u, mode);
        s.packing = r.packing;
        Rational b = (mode == LiChengMode::general ? 4 : 3) * vu + 8 * max_height(u);
        s.bound = {{"formula", mode == LiChengMode::general ? "4v+8h_max" : "3v+8h_max"}, {"value", rational_to_json(b)}};
        s.stages = {{"steinberg_fallbacks", r.steinberg_fallbacks}};
    } else if (a.algo == "absolute") {
        AbsParams p;
        p.epsilon = eps_or(p.epsilon);
        if (a.k_max) p.K = *a.k_max;
        auto r = solve_absolute_bp(u, p);
        s.packing = r.packing;
        const auto& b = r.bound;
        s.bound = {{"formula", b.bound_formula}, {"value", b.bin_bound}, {"certified", b.ratio_certified},
                   {"backend", b.backend}};
        s.stages = {{"route", b.route}, {"mu", rational_to_json(b.mu)}, {"delta", rational_to_json(b.delta)},
                    {"log", b.log}};
        if (b.k_accepted) s.stages["k_accepted"] = *b.k_accepted;
    } else if (a.algo == "absolute-sp") {
        AbsParams p;
        p.epsilon = eps_or(p.epsilon);
        auto r = solve_absolute_sp(u, p);
        s.packing = r.strip;
        s.bound = {{"formula", r.route == "guess" ? "guess*(1+eps) stacked bins" : "4v+8h_max"}};
        s.stages = {{"route", r.route}, {"guess", rational_to_json(r.guess)}, {"bins_stacked", r.bins_stacked},
                    {"guesses_tried", r.guesses_tried}, {"guesses_accepted", r.guesses_accepted}};
    } else if (a.algo == "asymptotic") {
        AsymOptions o;
        o.epsilon = eps_or(o.epsilon);
        if (!a.descriptor.empty()) {
            o.source = ContainerSource::explicit_descriptor;
            o.descriptor = descriptor_from_json(read_json_file(a.descriptor));
        }
        auto r = solve_asymptotic_bp(u, o);
        s.packing = r.packing;
        s.bound = {{"formula", "harmonic strip bins plus overflow"}, {"certified", false}};
        s.stages = asym_report_to_json(r.report);
    } else if (a.algo == "rotation") {
        auto r = rotation_5approx(u, a.k_max.value_or(5));
        s.packing = r.packing;
        s.bound = {{"formula", r.k_accepted ? "5k" : "8v+18"}};
        if (r.k_accepted) s.bound["value"] = 5 * *r.k_accepted;
        s.stages = {{"route", r.route}, {"mu", rational_to_json(r.mu)}, {"groups", r.groups}, {"log", r.log}};
    } else {
        throw ParseError("unknown algo '" + a.algo + "'");
    }

    if (!is_unit(bin)) denormalize(s.packing, bin, !strip);
    if (strip) {
        Rational h = 0;
        ItemTable table(items);
        for (const auto& q : s.packing.placements) h = rmax(h, q.z + extents(table.at(q.item_id), q.orient)[2]);
        s.result = {{"height", rational_to_json(h)}};
        s.volume_lb = rmax(v / (bin.W * bin.D), max_height(items));
    } else {
        s.result = {{"bins", s.packing.bin_count()}};
        s.volume_lb = ceil_r(vu);
    }
    return s;
}

inline Instance load_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }

inline Rational numeric_result(const json& result) {
    if (result.contains("bins")) return Rational(result.at("bins").get<long>());
    if (result.contains("height")) return parse_rational(result.at("height").get<std::string>());
    return parse_rational(result.at("volume").get<std::string>());
}

inline int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
    Instance inst = load_instance(a.input);
    auto t0 = std::chrono::steady_clock::now();
    Solved s = solve_instance(inst, a);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    VerifyReport vr = verify_packing(s.packing, ItemTable(inst.items), VerifyOptions{true});
    json report{{"algo", a.algo},
                {"items", inst.items.size()},
                {"result", s.result},
                {"volume_lb", rational_to_json(s.volume_lb)},
                {"bound", s.bound},
                {"stages", s.stages},
                {"verification", verify_report_to_json(vr)},
                {"approximate", {{"result", approx(numeric_result(s.result))}, {"volume_lb", approx(s.volume_lb)},
                                 {"runtime_ms", ms}}}};
    if (a.output.empty()) out << packing_to_json(s.packing).dump(2) << '\n';
    else write_json_file(a.output, packing_to_json(s.packing));
    if (!a.report.empty()) write_json_file(a.report, report);
    err << a.algo << ": " << s.result.dump() << (vr.feasible ? " feasible" : " INFEASIBLE") << '\n';
    return vr.feasible ? ok : failed;
}

inline int cmd_verify(const std::string& inst_path, const std::string& pack_path, const std::string& report,
                      std::ostream& out) {
    Instance inst = load_instance(inst_path);
    Packing p = packing_from_json(read_json_file(pack_path));
    VerifyReport vr = verify_packing(p, ItemTable(inst.items), VerifyOptions{true});
    json j = verify_report_to_json(vr);
    if (report.empty()) out << j.dump(2) << '\n';
    else write_json_file(report, j);
    return vr.feasible ? ok : failed;
}

inline int cmd_oracle(const std::string& input, std::size_t cap, bool rot, std::optional<std::size_t> max_bins,
                      const std::string& output, std::ostream& out) {
    Instance inst = load_instance(input);
    OracleOptions o{cap, rot};
    auto r = oracle_opt_bins(inst.items, inst.bin, max_bins.value_or(inst.items.size()), o);
    json j{{"opt", r.opt ? json(*r.opt) : json(nullptr)}, {"rotations", rot}, {"packing", packing_to_json(r.witness)}};
    if (output.empty()) out << j.dump(2) << '\n';
    else write_json_file(output, j);
    return r.opt ? ok : failed;
}

struct BenchArgs {
    std::string dir, family = "uniform", algos = "volume,licheng,rotation", output;
    std::size_t count = 20, n = 5, oracle_cap = 6;
    std::uint64_t seed = 1;
    bool timing = false;
};

inline std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string t; std::getline(ss, t, ',');)
        if (!t.empty()) out.push_back(t);
    return out;
}

inline std::string fmt(double x) {
    std::ostringstream o;
    o << std::setprecision(6) << x;
    return o.str();
}

inline int cmd_bench(const BenchArgs& a, std::ostream& out) {
    std::vector<std::pair<std::string, Instance>> insts;
    if (!a.dir.empty()) {
        std::vector<std::filesystem::path> files;
        for (const auto& e : std::filesystem::directory_iterator(a.dir))
            if (e.path().extension() == ".json") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) insts.emplace_back(f.stem().string(), load_instance(f.string()));
    } else {
        Family fam = parse_family(a.family);
        for (std::size_t i = 0; i < a.count; ++i) {
            std::uint64_t sd = a.seed + i;
            insts.emplace_back(std::string(family_name(fam)) + "-" + std::to_string(sd),
                               Instance{BinSpec{}, random_instance(sd, fam, a.n)});
        }
    }
    auto algos = split_csv(a.algos);
    for (const auto& al : algos)
        if (std::find(algo_names().begin(), algo_names().end(), al) == algo_names().end())
            throw ParseError("unknown algo '" + al + "'");
    std::ostringstream csv;
    csv << "instance,algo,result,volume_lb,oracle_opt,ratio,runtime_ms\n";
    for (const auto& [name, inst] : insts) {
        std::optional<std::size_t> opt_plain, opt_rot;
        for (const auto& al : algos) {
            SolveArgs sa;
            sa.algo = al;
            auto t0 = std::chrono::steady_clock::now();
            Solved s = solve_instance(inst, sa);
            double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            Rational res = numeric_result(s.result);
            std::string oracle_col, ratio_col;
            const bool bins = s.result.contains("bins");
            if (bins && inst.items.size() <= a.oracle_cap) {
                auto& slot = al == "rotation" ? opt_rot : opt_plain;
                if (!slot) slot = oracle_opt_bins(inst.items, inst.bin, inst.items.size(), {a.oracle_cap, al == "rotation"}).opt;
                if (slot) {
                    oracle_col = std::to_string(*slot);
                    if (*slot > 0) ratio_col = fmt(to_double(res / Rational(static_cast<long>(*slot))));
                }
            }
            csv << name << ',' << al << ',' << to_string(res) << ',' << to_string(s.volume_lb) << ',' << oracle_col << ','
                << ratio_col << ',' << (a.timing ? fmt(ms) : std::string()) << '\n';
        }
    }
    if (a.output.empty()) out << csv.str();
    else {
        std::ofstream f(a.output);
        if (!f) throw Error("cannot write '" + a.output + "'");
        f << csv.str();
    }
    return ok;
}

inline int cmd_gen(const std::string& family, std::size_t n, std::uint64_t seed, const std::string& output,
                   std::ostream& out) {
    Instance inst{BinSpec{}, random_instance(seed, parse_family(family), n)};
    json j = instance_to_json(inst);
    if (output.empty()) out << j.dump(2) << '\n';
    else write_json_file(output, j);
    return ok;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"3D packing toolkit"};
    app.require_subcommand(1);

    SolveArgs sa;
    std::string k_max;
    auto* solve = app.add_subcommand("solve", "pack an instance");
    solve->add_option("--algo", sa.algo, "absolute|absolute-sp|asymptotic|mvbb|rotation|licheng|halfthin|volume");
    solve->add_option("--input", sa.input, "instance JSON")->required();
    solve->add_option("--output", sa.output, "packing JSON (stdout when absent)");
    solve->add_option("--report", sa.report, "report JSON");
    solve->add_option("--epsilon", sa.epsilon, "accuracy, decimal or p/q");
    solve->add_option("--k-max", k_max, "largest bin count guessed");
    solve->add_option("--backend", sa.backend, "licheng|external");
    solve->add_option("--mode", sa.mode, "mvbb mode: aptas|absolute3");
    solve->add_option("--descriptor", sa.descriptor, "container descriptor JSON for asymptotic");
    solve->add_flag("--rotations", sa.rotations, "allow rotations (rotation algo only)");

    std::string v_inst, v_pack, v_report;
    auto* verify = app.add_subcommand("verify", "check a packing against an instance");
    verify->add_option("--input", v_inst, "instance JSON")->required();
    verify->add_option("--packing", v_pack, "packing JSON")->required();
    verify->add_option("--report", v_report, "report JSON (stdout when absent)");

    std::string o_inst, o_out;
    std::size_t o_cap = 6;
    std::string o_max;
    bool o_rot = false;
    auto* oracle = app.add_subcommand("oracle", "exact optimum for tiny instances");
    oracle->add_option("--input", o_inst, "instance JSON")->required();
    oracle->add_option("--cap", o_cap, "largest item count searched");
    oracle->add_option("--max-bins", o_max, "stop above this many bins");
    oracle->add_option("--output", o_out, "result JSON (stdout when absent)");
    oracle->add_flag("--rotations", o_rot, "allow the six axis permutations");

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "CSV over generated or stored instances");
    bench->add_option("--dir", ba.dir, "directory of instance JSON files");
    bench->add_option("--family", ba.family, "uniform|cube-heavy|thin-heavy|grid12");
    bench->add_option("--count", ba.count, "generated instances");
    bench->add_option("--n", ba.n, "items per generated instance");
    bench->add_option("--seed", ba.seed, "first seed");
    bench->add_option("--algos", ba.algos, "comma separated algos");
    bench->add_option("--oracle-cap", ba.oracle_cap, "oracle column up to this many items");
    bench->add_option("--output", ba.output, "CSV file (stdout when absent)");
    bench->add_flag("--timing", ba.timing, "fill runtime_ms");

    std::string g_family = "uniform", g_out;
    std::size_t g_n = 10;
    std::uint64_t g_seed = 1;
    auto* gen = app.add_subcommand("gen", "write a seeded random instance");
    gen->add_option("--family", g_family, "uniform|cube-heavy|thin-heavy|grid12");
    gen->add_option("--n", g_n, "item count");
    gen->add_option("--seed", g_seed, "seed");
    gen->add_option("--output", g_out, "instance JSON (stdout when absent)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return bad_input;
    }

    auto parse_size = [](const std::string& s, const char* what) -> std::optional<std::size_t> {
        if (s.empty()) return std::nullopt;
        Rational r = parse_rational(s);
        if (r.get_den() != 1 || r < 1) throw ParseError(std::string(what) + " must be a positive integer");
        return to_size(r.get_num());
    };
    try {
        if (*solve) {
            sa.k_max = parse_size(k_max, "--k-max");
            if (std::find(algo_names().begin(), algo_names().end(), sa.algo) == algo_names().end())
                throw ParseError("unknown algo '" + sa.algo + "'");
            return cmd_solve(sa, out, err);
        }
        if (*verify) return cmd_verify(v_inst, v_pack, v_report, out);
        if (*oracle) return cmd_oracle(o_inst, o_cap, o_rot, parse_size(o_max, "--max-bins"), o_out, out);
        if (*bench) return cmd_bench(ba, out);
        return cmd_gen(g_family, g_n, g_seed, g_out, out);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return bad_input;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return failed;
    }
}

}  // namespace packing3d::cli
