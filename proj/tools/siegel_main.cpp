// Command-line front end: boundary-stratum atlases, ramification reports and
// bound experiments, the displayed-identity suite, toric multiplicity
// calculators, quartic fixed-locus tools and congruence-quotient utilities.
//
// Exit codes: 0 success, 1 usage/runtime error, 2 a checked inequality or
// identity was refuted (data for the logs, never silently dropped).

#include <chrono>
#include <iostream>

#include <CLI11.hpp>

#include "siegel/io.hpp"

using namespace siegel;

namespace {

struct GlobalOpts {
    std::string format = "json";
    unsigned threads = 1;
    bool timing = false;
    std::string ceiling = "1208925819614629174706176";  // 2^80
};

int emit(const Json& j, const GlobalOpts& g, double wall_s, const std::string& text_summary) {
    Json out = j;
    if (g.timing) out["timing"] = Json{{"wall_ms", u64(wall_s * 1000)}};
    if (g.format == "json") std::cout << out.dump(2) << "\n";
    else std::cout << text_summary;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact computations on level-n boundary strata of Sp(4)"};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalOpts gl;
    app.add_option("--format", gl.format, "output format: json|csv|text")->capture_default_str();
    app.add_option("--threads", gl.threads, "worker threads for partitionable loops")
        ->capture_default_str();
    app.add_flag("--timing", gl.timing, "include wall time in the output");
    app.add_option("--ceiling", gl.ceiling, "stabilizer-chain order ceiling");

    // ---- atlas ----
    auto* atlas_cmd = app.add_subcommand("atlas", "enumerate boundary stratum families");
    u32 atlas_level = 3;
    std::string atlas_family = "D";
    bool atlas_count = false, atlas_dump = false;
    atlas_cmd->add_option("--level", atlas_level, "level n >= 3")->required();
    atlas_cmd->add_option("--family", atlas_family, "D|cusp|E|F|line|triple")->required();
    atlas_cmd->add_flag("--count", atlas_count, "print the count only");
    atlas_cmd->add_flag("--dump", atlas_dump, "dump all items");

    // ---- ram-report ----
    auto* ram_cmd = app.add_subcommand("ram-report", "full ramification report for a subgroup");
    std::string ram_subgroup;
    bool ram_adjoin = false, ram_lines = false;
    u32 ram_level = 0;
    ram_cmd->add_option("--subgroup", ram_subgroup, "subgroup JSON file")->required();
    ram_cmd->add_option("--level", ram_level, "expected level (checked against the file)");
    ram_cmd->add_flag("--adjoin-center", ram_adjoin, "adjoin -1 to the generators");
    ram_cmd->add_flag("--full-lines", ram_lines, "include per-line values");

    // ---- bound-check ----
    auto* bound_cmd = app.add_subcommand("bound-check", "index-bound experiment for one family");
    std::string bound_family = "D", bound_subgroup;
    bool bound_adjoin = false;
    bound_cmd->add_option("--family", bound_family, "D|E|DD|F|DDD or 'all'")->required();
    bound_cmd->add_option("--subgroup", bound_subgroup, "subgroup JSON file")->required();
    bound_cmd->add_flag("--adjoin-center", bound_adjoin, "adjoin -1 to the generators");

    // ---- verify-identities ----
    auto* ident_cmd = app.add_subcommand("verify-identities", "check the displayed identities");
    u32 ident_level = 9;
    u64 ident_trials = 1000, ident_seed = 1;
    ident_cmd->add_option("--level", ident_level, "level n >= 3")->required();
    ident_cmd->add_option("--trials", ident_trials, "random draws per identity")->required();
    ident_cmd->add_option("--seed", ident_seed, "seed")->required();

    // ---- toric ----
    auto* toric_cmd = app.add_subcommand("toric", "toric quotient-singularity calculators");
    toric_cmd->require_subcommand(1);
    toric_cmd->fallthrough();
    auto* toric_delta = toric_cmd->add_subcommand("delta", "minimal invariant degree / n");
    auto* toric_mult = toric_cmd->add_subcommand("mult", "multiplicity bound and exact value");
    auto* toric_census = toric_cmd->add_subcommand("census", "count triples with delta >= eps");
    u32 toric_mod = 2;
    std::string toric_weights = "1,1,1";
    for (auto* c : {toric_delta, toric_mult}) {
        c->add_option("--modulus", toric_mod, "n")->required();
        c->add_option("--weights", toric_weights, "\"a,b,c;d,e,f\"")->required();
    }
    u32 census_p = 2, census_s = 3;
    std::string census_eps = "1/2";
    toric_census->add_option("--p", census_p, "prime")->required();
    toric_census->add_option("--s", census_s, "exponent")->required();
    toric_census->add_option("--epsilon", census_eps, "rational threshold")->required();

    // ---- quartic ----
    auto* quartic_cmd = app.add_subcommand("quartic", "singular-quartic fixed-locus tools");
    quartic_cmd->require_subcommand(1);
    quartic_cmd->fallthrough();
    auto* q_on = quartic_cmd->add_subcommand("on", "membership in the quartic");
    auto* q_stab = quartic_cmd->add_subcommand("stab", "permutation stabilizer with factors");
    auto* q_classify = quartic_cmd->add_subcommand("classify", "fixed-locus case analysis");
    auto* q_nf = quartic_cmd->add_subcommand("normal-form", "involution normal form over Z");
    auto* q_ii = quartic_cmd->add_subcommand("stab-ii", "the order-16 stabilizer relations");
    (void)q_ii;
    std::string q_point, q_type, q_matrix;
    u32 q_zeta = 20;
    for (auto* c : {q_on, q_stab}) {
        c->add_option("--point", q_point, "x1:...:x6 with z/theta/i symbols")->required();
        c->add_option("--zeta-order", q_zeta, "cyclotomic field conductor");
    }
    q_classify->add_option("--type", q_type, "one of the six cycle types")->required();
    q_nf->add_option("--matrix", q_matrix, "16 integers, row-major")->required();

    // ---- congruence ----
    auto* cong_cmd = app.add_subcommand("congruence", "composite-level utilities");
    cong_cmd->require_subcommand(1);
    cong_cmd->fallthrough();
    auto* c_split = cong_cmd->add_subcommand("split", "CRT-split the generators of a subgroup");
    auto* c_pproj = cong_cmd->add_subcommand("pproj", "p-power component image of a subgroup");
    auto* c_kernel = cong_cmd->add_subcommand("kernel-gen", "kernel-layer generation check");
    std::string cong_subgroup;
    u32 cong_p = 5, cong_i = 2;
    u64 cong_seed = 1;
    bool cong_exhaustive = false, cong_adjoin = false;
    for (auto* c : {c_split, c_pproj}) {
        c->add_option("--subgroup", cong_subgroup, "subgroup JSON file")->required();
        c->add_option("--p", cong_p, "prime")->required();
        c->add_flag("--adjoin-center", cong_adjoin, "adjoin -1");
    }
    c_kernel->add_option("--p", cong_p, "prime >= 5")->required();
    c_kernel->add_option("--i", cong_i, "layer index >= 2")->required();
    c_kernel->add_option("--seed", cong_seed, "conjugator seed");
    c_kernel->add_flag("--exhaustive", cong_exhaustive, "walk the whole level-p group");

    CLI11_PARSE(app, argc, argv);

    auto t0 = std::chrono::steady_clock::now();
    auto wall = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

    try {
        BigInt ceiling(gl.ceiling);
        if (atlas_cmd->parsed()) {
            Atlas atlas(atlas_level);
            if (gl.format == "csv" && !atlas_count) {
                std::cout << atlas_family_csv(atlas, atlas_family);
                return 0;
            }
            Json j = atlas_family_json(atlas, atlas_family, atlas_dump && !atlas_count);
            return emit(j, gl, wall(), std::to_string(u64(j["count"])) + "\n");
        }
        if (ram_cmd->parsed()) {
            Subgroup h = load_subgroup(ram_subgroup, ram_adjoin);
            if (ram_level && ram_level != h.level)
                throw std::invalid_argument("subgroup level does not match --level");
            h.chain(ceiling);
            Atlas atlas(h.level);
            RamificationLab lab(atlas, h);
            Json j = report_to_json(lab.report(ram_lines));
            return emit(j, gl, wall(), j["families"].dump(2) + "\n");
        }
        if (bound_cmd->parsed()) {
            Subgroup h = load_subgroup(bound_subgroup, bound_adjoin);
            h.chain(ceiling);
            Atlas atlas(h.level);
            RamificationLab lab(atlas, h);
            std::vector<BoundVerdict> verdicts;
            if (bound_family == "all") verdicts = lab.bound_check_all();
            else verdicts.push_back(lab.bound_check(family_from_name(bound_family)));
            Json arr = Json::array();
            bool all_ok = true;
            std::string text;
            for (const auto& v : verdicts) {
                arr.push_back(verdict_to_json(v));
                all_ok = all_ok && v.satisfied;
                text += std::string(family_name(v.family)) + ": " +
                        (v.satisfied ? "satisfied" : "REFUTED") + "\n";
            }
            Json j;
            j["verdicts"] = arr;
            emit(j, gl, wall(), text);
            return all_ok ? 0 : 2;
        }
        if (ident_cmd->parsed()) {
            auto rep = verify_identities(ident_level, ident_trials, ident_seed, gl.threads);
            Json j = identity_report_to_json(rep);
            emit(j, gl, wall(),
                 "checks: " + std::to_string(rep.checks) +
                     " failures: " + std::to_string(rep.failures.size()) + "\n");
            return rep.failures.empty() ? 0 : 2;
        }
        if (toric_delta->parsed() || toric_mult->parsed()) {
            ToricSingularity h(toric_mod, parse_weights(toric_weights));
            Json j;
            j["modulus"] = toric_mod;
            Json gens = Json::array();
            for (const auto& w : h.generators()) gens.push_back(Json::array({w[0], w[1], w[2]}));
            j["generators"] = gens;
            j["group_order"] = h.group_order().str();
            j["delta"] = rational_str(h.delta());
            if (toric_mult->parsed()) {
                j["mult_upper_bound"] = rational_str(h.mult_upper_bound());
                j["mult_exact"] = h.mult_exact().str();
            }
            return emit(j, gl, wall(), j.dump(2) + "\n");
        }
        if (toric_census->parsed()) {
            Rational eps = parse_rational(census_eps);
            auto res = census(census_p, census_s, eps, gl.threads);
            Json j = census_to_json(census_p, census_s, eps, res);
            emit(j, gl, wall(),
                 "count: " + std::to_string(res.count) + " bound: " + rational_str(res.bound) +
                     (res.satisfied ? " satisfied" : " REFUTED") + "\n");
            return res.satisfied ? 0 : 2;
        }
        if (q_on->parsed() || q_stab->parsed()) {
            auto field = CycloField::get(q_zeta);
            QuarticPoint pt = parse_quartic_point(q_point, field);
            Json j;
            j["point"] = q_point;
            j["on_quartic"] = on_quartic(pt);
            if (q_stab->parsed()) {
                auto stab = stabilizer(pt);
                Json arr = Json::array();
                for (const auto& s : stab) {
                    Json e;
                    Json perm = Json::array();
                    for (int i = 0; i < 6; ++i) perm.push_back(s.sigma[std::size_t(i)] + 1);
                    e["perm"] = perm;
                    e["lambda"] = s.lambda.str();
                    arr.push_back(e);
                }
                j["stabilizer_order"] = stab.size();
                j["stabilizer"] = arr;
            }
            return emit(j, gl, wall(), j.dump(2) + "\n");
        }
        if (q_classify->parsed()) {
            auto rep = classify_permutation_fixed_locus(q_type);
            Json j;
            j["sigma_type"] = rep.sigma_type;
            Json arr = Json::array();
            std::string text;
            for (const auto& b : rep.branches) {
                arr.push_back(Json{{"lambda", b.lambda}, {"outcome", outcome_name(b.outcome)},
                                   {"detail", b.detail}});
                text += b.lambda + " -> " + outcome_name(b.outcome) + "\n";
            }
            j["branches"] = arr;
            return emit(j, gl, wall(), text);
        }
        if (q_nf->parsed()) {
            std::istringstream is(q_matrix);
            ZMat4 m;
            for (int i = 0; i < 16; ++i) {
                std::string tok;
                if (!(is >> tok)) throw std::invalid_argument("--matrix needs 16 integers");
                m[std::size_t(i)] = BigInt(tok);
            }
            auto nf = involution_normal_form(m);
            Json j;
            Json basis = Json::array();
            for (const auto& e : nf.e) {
                Json v = Json::array();
                for (const auto& c : e) v.push_back(c.str());
                basis.push_back(v);
            }
            j["basis"] = basis;
            Json conj = Json::array();
            for (const auto& c : nf.conjugator) conj.push_back(c.str());
            j["conjugator"] = conj;
            return emit(j, gl, wall(), j.dump(2) + "\n");
        }
        if (q_ii->parsed()) {
            auto rep = stab_ii_relations();
            Json j;
            j["relations_hold"] = rep.relations_hold;
            j["non_abelian"] = rep.non_abelian;
            j["group_order_mod_pm"] = rep.group_order_mod_pm;
            return emit(j, gl, wall(), j.dump(2) + "\n");
        }
        if (c_split->parsed() || c_pproj->parsed()) {
            Subgroup h = load_subgroup(cong_subgroup, cong_adjoin);
            LevelSplit split = level_split(h.level, cong_p);
            Json j;
            j["level"] = h.level;
            j["p_component"] = split.n1;
            j["coprime_component"] = split.n2;
            if (c_split->parsed()) {
                Json gens = Json::array();
                for (const auto& g : h.generators) {
                    auto [g1, g2] = crt_split(g, split);
                    gens.push_back(Json{{"mod_p_part", matrix_to_json(g1)},
                                        {"mod_coprime_part", matrix_to_json(g2)}});
                }
                j["generators"] = gens;
            } else {
                Subgroup proj = p_projection(h, cong_p);
                proj.chain(ceiling);
                Json gens = Json::array();
                for (const auto& g : proj.generators) gens.push_back(matrix_to_json(g));
                j["projection_level"] = proj.level;
                j["projection_generators"] = gens;
                j["projection_order"] = proj.order().str();
            }
            return emit(j, gl, wall(), j.dump(2) + "\n");
        }
        if (c_kernel->parsed()) {
            auto res = verify_kernel_generation(cong_p, cong_i, cong_seed, 512, cong_exhaustive);
            Json j;
            j["p"] = cong_p;
            j["i"] = cong_i;
            j["layer_dimension"] = 10;
            j["generated"] = res.generated;
            j["rank"] = res.rank;
            j["conjugators_used"] = res.conjugators_used;
            emit(j, gl, wall(), std::string("generated: ") + (res.generated ? "yes" : "no") + "\n");
            return res.generated ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
