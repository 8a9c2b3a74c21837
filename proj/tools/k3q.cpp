// Command-line interface: exact q-expansions of the catalogued series,
// operator application on coefficient documents, and the verification
// suites. One JSON document per series on standard output.

#include "k3q/catalogue.hpp"
#include "k3q/degeneration.hpp"
#include "k3q/hecke.hpp"
#include "k3q/modforms.hpp"
#include "k3q/potentials.hpp"
#include "k3q/seriesdoc.hpp"
#include "k3q/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace k3q;

struct NamedSeries {
    std::function<QSeries(long long)> make;
    SeriesMeta meta;
};

std::map<std::string, NamedSeries> series_table() {
    using catalogue::RelP1EKey;
    using catalogue::RelProfile;
    std::map<std::string, NamedSeries> t;
    auto meta = [](int l, int w, int p) {
        return SeriesMeta{l, w, p};
    };
    t["C2"] = {[](long long N) { return eisenstein_c(2, N); }, meta(1, 2, 0)};
    t["C4"] = {[](long long N) { return eisenstein_c(4, N); }, meta(1, 4, 0)};
    t["C6"] = {[](long long N) { return eisenstein_c(6, N); }, meta(1, 6, 0)};
    t["Delta"] = {[](long long N) { return discriminant(N); }, meta(1, 12, 0)};
    t["InvDelta"] = {[](long long N) { return catalogue::f01(N); }, meta(1, -12, 1)};
    t["X2"] = {[](long long N) { return level2_generators(N).first; }, meta(2, 2, 0)};
    t["X4"] = {[](long long N) { return level2_generators(N).second; }, meta(2, 4, 0)};
    t["DqC2"] = {[](long long N) { return catalogue::dqc2(N); }, meta(1, 4, 0)};

    t["F_0_1"] = {[](long long N) { return catalogue::f01(N); }, meta(1, -12, 1)};
    t["F_1_1_p"] = {[](long long N) { return catalogue::f11_p(N); }, meta(1, -8, 1)};
    t["F_2_1_pp"] = {[](long long N) { return catalogue::f21_pp(N); }, meta(1, -4, 1)};
    t["F_0_2"] = {[](long long N) { return catalogue::f02(N); }, meta(2, -12, 2)};
    t["F_1_2_p"] = {[](long long N) { return catalogue::f12_p(N); }, meta(2, -8, 2)};
    t["F_2_2_pp"] = {[](long long N) { return catalogue::f22_pp(N); }, meta(2, -4, 2)};
    t["F22_degeneration"] = {[](long long N) { return assemble_f22(N); }, meta(2, -4, 2)};

    for (int g = 1; g <= 5; ++g)
        t["FE_" + std::to_string(g)] = {
            [g](long long N) { return catalogue::fiber_series(g, N); }, meta(1, 2 * g, 0)};

    t["FrelSE_11_11"] = {[](long long N) {
        return catalogue::rel_SE(RelProfile{{1, false}, {1, false}}, N);
    }, {}};
    t["FrelSE_11_1w"] = {[](long long N) {
        return catalogue::rel_SE(RelProfile{{1, false}, {1, true}}, N);
    }, {}};
    t["FrelSE_21"] = {[](long long N) { return catalogue::rel_SE(RelProfile{{2, false}}, N); }, {}};

    t["G_0_1_p_11"] = {[](long long N) { return catalogue::rel_P1E(RelP1EKey{0, 1, 1, {{1, false}}}, N); }, {}};
    t["G_0_1_1w"] = {[](long long N) { return catalogue::rel_P1E(RelP1EKey{0, 1, 0, {{1, true}}}, N); }, {}};
    t["G_1_1_p_1w"] = {[](long long N) { return catalogue::rel_P1E(RelP1EKey{1, 1, 1, {{1, true}}}, N); }, {}};
    t["G_1_1_pp_11"] = {[](long long N) { return catalogue::rel_P1E(RelP1EKey{1, 1, 2, {{1, false}}}, N); }, {}};
    t["G_2_1_pp_1w"] = {[](long long N) { return catalogue::rel_P1E(RelP1EKey{2, 1, 2, {{1, true}}}, N); }, {}};
    t["G_1_2_pp_2w"] = {[](long long N) { return catalogue::rel_P1E(RelP1EKey{1, 2, 2, {{2, true}}}, N); }, {}};
    t["G_1_2_pp_1w1w"] = {[](long long N) {
        return catalogue::rel_P1E(RelP1EKey{1, 2, 2, {{1, true}, {1, true}}}, N);
    }, {}};
    return t;
}

std::vector<Insertion> parse_insertions(const std::string& list) {
    std::vector<Insertion> out;
    if (list.empty()) return out;
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t i = 0;
        while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i;
        if (i == 0 || i == tok.size())
            throw CLI::ValidationError("--ins", "token '" + tok + "' is not of the form <a><class>");
        int a = std::stoi(tok.substr(0, i));
        std::string cls = tok.substr(i);
        InsClass c;
        if (cls == "1") c = InsClass::one();
        else if (cls == "F") c = InsClass::fiber();
        else if (cls == "W") c = InsClass::section_sum();
        else if (cls == "p") c = InsClass::point();
        else throw CLI::ValidationError("--ins", "unknown class '" + cls + "' (use 1, F, W or p)");
        out.push_back(tau(a, c));
    }
    return out;
}

std::pair<QSeries, SeriesMeta> read_input(const std::string& path) {
    std::string text;
    if (path.empty() || path == "-") {
        std::stringstream buf;
        buf << std::cin.rdbuf();
        text = buf.str();
    } else {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open input file: " + path);
        std::stringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    SeriesDocument doc = parse_document(text);
    return {from_document(doc), doc.metadata};
}

void emit(const QSeries& s, const SeriesMeta& meta, bool pretty) {
    std::cout << dump_document(to_document(s, meta), pretty) << "\n";
}

int run_verify(const std::string& suite, long long order, std::uint64_t seed) {
    using namespace k3q::verify;
    static const std::map<std::string, long long> minimum = {
        {"commutators", 12}, {"hecke-decomp", 24}, {"examples", 10},
        {"degeneration", 4}, {"compat", 0},        {"membership", 30},
    };
    auto it = minimum.find(suite);
    if (it == minimum.end()) {
        std::cerr << "unknown suite '" << suite << "'; available:";
        for (auto& [k, v] : minimum) std::cerr << " " << k;
        std::cerr << "\n";
        return 2;
    }
    if (order < it->second) {
        std::cerr << "suite '" << suite << "' needs --order >= " << it->second << "\n";
        return 2;
    }
    Suite results;
    if (suite == "commutators") results = commutators(order, seed);
    else if (suite == "hecke-decomp") results = hecke_decomp(order, seed);
    else if (suite == "examples") results = examples(order);
    else if (suite == "degeneration") results = degeneration(order);
    else if (suite == "compat") results = compat();
    else results = membership(order, seed);

    bool ok = true;
    for (auto& r : results) {
        std::cout << (r.ok ? "ok  " : "FAIL") << "  " << r.name;
        if (!r.detail.empty()) std::cout << "  [" << r.detail << "]";
        std::cout << "\n";
        ok = ok && r.ok;
    }
    std::cout << (ok ? "suite passed" : "suite FAILED") << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact q-series toolkit for quasimodular forms and K3 curve counts"};
    app.require_subcommand(1);

    long long order = 50;
    bool pretty = false;

    // --- series ---
    auto* cmd_series = app.add_subcommand("series", "print a catalogued q-expansion");
    std::string series_name;
    cmd_series->add_option("name", series_name, "series name (see `list`)")->required();
    cmd_series->add_option("--order", order, "truncation order")->capture_default_str();
    cmd_series->add_flag("--pretty", pretty, "pretty-print the document");

    // --- list ---
    auto* cmd_list = app.add_subcommand("list", "list the available series names");

    // --- apply ---
    auto* cmd_apply = app.add_subcommand("apply", "apply an operator to a series document");
    std::string op, input_path, ins_spec;
    long long p_d = 1, p_m = 2, p_k = 0, p_ell = 0;
    int p_g = 0;
    std::optional<int> p_level, p_weight, p_pole;
    cmd_apply->add_option("op", op, "dq | b | u | hecke | twrong | mcf | ddc2")->required();
    cmd_apply->add_option("-i,--input", input_path, "input document (default: stdin)");
    cmd_apply->add_option("-d", p_d, "index for b / u");
    cmd_apply->add_option("-m", p_m, "Hecke index / divisibility");
    cmd_apply->add_option("-k", p_k, "declared weight for hecke");
    cmd_apply->add_option("-l", p_ell, "acting weight for twrong");
    cmd_apply->add_option("-g", p_g, "genus for mcf");
    cmd_apply->add_option("--ins", ins_spec, "insertions for mcf, e.g. 0p,0p or 1F");
    cmd_apply->add_option("--level", p_level, "level for ddc2 (overrides metadata)");
    cmd_apply->add_option("--weight", p_weight, "weight for ddc2 (overrides metadata)");
    cmd_apply->add_option("--pole", p_pole, "pole order for ddc2 (overrides metadata)");
    std::optional<long long> apply_order;
    cmd_apply->add_option("--order", apply_order, "truncate the output window");
    cmd_apply->add_flag("--pretty", pretty, "pretty-print the document");

    // --- verify ---
    auto* cmd_verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite;
    std::uint64_t seed = 0x5eed5eedULL;
    cmd_verify
        ->add_option("suite", suite,
                     "commutators | hecke-decomp | examples | degeneration | compat | membership")
        ->required();
    cmd_verify->add_option("--order", order, "truncation order")->capture_default_str();
    cmd_verify->add_option("--seed", seed, "seed for the randomized checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_list) {
            for (auto& [name, entry] : series_table()) std::cout << name << "\n";
            return 0;
        }
        if (*cmd_series) {
            auto table = series_table();
            auto it = table.find(series_name);
            if (it == table.end()) {
                std::cerr << "unknown series '" << series_name << "'; run `k3q list`\n";
                return 2;
            }
            emit(it->second.make(order), it->second.meta, pretty);
            return 0;
        }
        if (*cmd_apply) {
            auto [f, meta] = read_input(input_path);
            std::optional<QSeries> result;
            SeriesMeta out;
            if (op == "dq") {
                out = meta;
                if (out.weight) *out.weight += 2;
                result = dq(f);
            } else if (op == "b") {
                if (meta.level && meta.weight && meta.pole_order)
                    out = SeriesMeta{static_cast<int>(*meta.level * p_d), *meta.weight,
                                     static_cast<int>(*meta.pole_order * p_d)};
                result = b_op(p_d, f);
            } else if (op == "u") {
                out.weight = meta.weight;
                result = u_op(p_d, f);
            } else if (op == "hecke") {
                if (meta.level && *meta.level == 1 && meta.pole_order && *meta.pole_order <= 1)
                    out = SeriesMeta{1, static_cast<int>(p_k), static_cast<int>(p_m)};
                result = hecke_t(p_m, p_k, f);
            } else if (op == "twrong") {
                if (meta.level && *meta.level == 1 && meta.pole_order && *meta.pole_order <= 1)
                    out = SeriesMeta{static_cast<int>(p_m), meta.weight ? *meta.weight : 0,
                                     static_cast<int>(p_m)};
                result = t_wrong(p_m, p_ell, f);
            } else if (op == "mcf") {
                auto ins = parse_insertions(ins_spec);
                auto dd = degree_data(p_g, ins);
                out = SeriesMeta{static_cast<int>(p_m), static_cast<int>(dd.k),
                                 static_cast<int>(p_m)};
                result = apply_mcf(f, p_g, p_m, ins);
            } else if (op == "ddc2") {
                SeriesMeta eff = meta;
                if (p_level) eff.level = p_level;
                if (p_weight) eff.weight = p_weight;
                if (p_pole) eff.pole_order = p_pole;
                if (!eff.level || !eff.weight || !eff.pole_order)
                    throw std::runtime_error(
                        "ddc2 needs level, weight and pole order (metadata or flags)");
                QMForm dec = decompose(f, *eff.level, *eff.weight, *eff.pole_order);
                out = SeriesMeta{*eff.level, *eff.weight - 2, *eff.pole_order};
                result = to_qseries(ddc2(dec), f.order());
            } else {
                std::cerr << "unknown operator '" << op << "'\n";
                return 2;
            }
            if (apply_order) result = result->truncated(std::min(*apply_order, result->order()));
            emit(*result, out, pretty);
            return 0;
        }
        if (*cmd_verify) return run_verify(suite, order, seed);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
