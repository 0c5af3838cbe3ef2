// Command-line verification harness: computes the closed-form tables, the
// enumerated tables, or both (comparing them), and runs named check profiles.
//
// Exit codes: 0 tables match / all checks pass, 1 mismatch or check failure,
// 2 invalid parameters, 3 skipped (budget exceeded or closed form
// inapplicable for the given parameters).

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dosum/checks.hpp"
#include "dosum/parallel.hpp"

using namespace dosum;

namespace {

constexpr int kExitMatch = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitSkipped = 3;

struct CommonOpts {
    std::int64_t p = 3, n = 3, k = 1, t = 1;
    std::string method = "both";
    int workers = 0;
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t budget = 0;
    std::string out;
    std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOpts& opt, bool with_t) {
    cmd->add_option("p", opt.p, "odd prime")->required();
    cmd->add_option("n", opt.n, "extension degree")->required();
    cmd->add_option("k", opt.k, "exponent parameter")->required();
    if (with_t) cmd->add_option("t", opt.t, "code alphabet degree (divides gcd(n,k))");
    cmd->add_option("--method", opt.method, "oracle | fast | theorem | both")
        ->check(CLI::IsMember({"oracle", "fast", "theorem", "both"}));
    cmd->add_option("--workers", opt.workers, "worker threads (default: hardware)");
    cmd->add_option("--seed", opt.seed, "seed for sampled checks");
    cmd->add_option("--budget", opt.budget, "enumeration budget override");
    cmd->add_option("--out", opt.out, "output file path");
    cmd->add_option("--format", opt.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
}

std::uint64_t budget_of(const CommonOpts& opt) { return opt.budget ? opt.budget : default_budget(); }
int workers_of(const CommonOpts& opt) { return opt.workers > 0 ? opt.workers : default_workers(); }

void emit(const CommonOpts& opt, const nlohmann::json& j, const std::string& csv) {
    std::string payload = (opt.format == "csv" && !csv.empty()) ? csv : j.dump(2) + "\n";
    if (opt.out.empty()) {
        std::cout << payload;
    } else {
        std::ofstream f(opt.out, std::ios::binary);
        f << payload;
        std::cout << "wrote " << opt.out << "\n";
    }
}

int run_dist(const CommonOpts& opt, bool s_version) {
    ParamSet par = derive_params(opt.p, opt.n, opt.k, opt.t);
    auto need_enum = opt.method != "theorem";
    auto need_theorem = opt.method == "theorem" || opt.method == "both";

    std::optional<DistTable> enumerated, theorem;
    if (need_theorem) theorem = s_version ? theorem_s_distribution(par) : theorem_t_distribution(par);
    if (need_enum) {
        Sums sums(FieldCtx::get(opt.p, opt.n), par);
        if (s_version) {
            auto m = opt.method == "oracle" ? SDistMethod::Oracle : SDistMethod::PairSweep;
            enumerated = sums.s_distribution(m, workers_of(opt), budget_of(opt));
        } else {
            auto m = opt.method == "oracle" ? TDistMethod::Oracle : TDistMethod::Fast;
            enumerated = sums.t_distribution(m, workers_of(opt), budget_of(opt));
        }
    }
    const DistTable& table = enumerated ? *enumerated : *theorem;
    nlohmann::json j;
    j["schema"] = 1;
    j["kind"] = s_version ? "sdist" : "tdist";
    j["params"] = par.to_json();
    j["method"] = opt.method;
    j["table"] = table.to_json();
    if (theorem && enumerated) {
        bool match = *theorem == *enumerated;
        j["match"] = match;
        emit(opt, j, "");
        std::cout << (match ? "MATCH" : "MISMATCH") << ": closed form vs enumeration\n";
        return match ? kExitMatch : kExitMismatch;
    }
    emit(opt, j, "");
    return kExitMatch;
}

int run_weights(const CommonOpts& opt, const std::string& code) {
    ParamSet par = derive_params(opt.p, opt.n, opt.k, opt.t);
    CodeId which = code == "c2" ? CodeId::C2 : CodeId::C1;
    auto need_enum = opt.method != "theorem";
    auto need_theorem = opt.method == "theorem" || opt.method == "both";

    std::optional<WeightTable> enumerated, theorem;
    if (need_theorem) theorem = which == CodeId::C1 ? theorem_c1_weights(par) : theorem_c2_weights(par);
    if (need_enum) {
        Sums sums(FieldCtx::get(opt.p, opt.n), par);
        WeightMethod m = opt.method == "fast" ? WeightMethod::FromDist : WeightMethod::Enum;
        if (opt.method == "both") {
            // prefer full enumeration, fall back to the weight sweep
            try {
                enumerated = weight_distribution(sums, which, WeightMethod::Enum, workers_of(opt),
                                                 budget_of(opt));
            } catch (const BudgetExceeded&) {
                enumerated = weight_distribution(sums, which, WeightMethod::FromDist, workers_of(opt),
                                                 budget_of(opt));
            }
        } else {
            enumerated = weight_distribution(sums, which, m, workers_of(opt), budget_of(opt));
        }
    }
    const WeightTable& table = enumerated ? *enumerated : *theorem;
    nlohmann::json j;
    j["schema"] = 1;
    j["kind"] = "weights";
    j["code"] = code;
    j["params"] = par.to_json();
    j["method"] = opt.method;
    j["table"] = table.to_json();
    if (theorem && enumerated) {
        bool match = *theorem == *enumerated;
        j["match"] = match;
        emit(opt, j, table.to_csv());
        std::cout << (match ? "MATCH" : "MISMATCH") << ": closed form vs enumeration\n";
        return match ? kExitMatch : kExitMismatch;
    }
    emit(opt, j, table.to_csv());
    return kExitMatch;
}

int run_corr(const CommonOpts& opt) {
    ParamSet par = derive_params(opt.p, opt.n, opt.k, opt.t);
    auto need_enum = opt.method != "theorem";
    auto need_theorem = opt.method == "theorem" || opt.method == "both";

    std::optional<DistTable> enumerated, theorem;
    if (need_theorem) theorem = theorem_correlation_distribution(par);
    if (need_enum) {
        Sums sums(FieldCtx::get(opt.p, opt.n), par);
        enumerated = correlation_distribution_enum(sums, workers_of(opt), budget_of(opt));
    }
    const DistTable& table = enumerated ? *enumerated : *theorem;
    nlohmann::json j;
    j["schema"] = 1;
    j["kind"] = "corr";
    j["params"] = par.to_json();
    j["method"] = opt.method;
    j["table"] = table.to_json();
    if (theorem && enumerated) {
        bool match = *theorem == *enumerated;
        j["match"] = match;
        emit(opt, j, "");
        std::cout << (match ? "MATCH" : "MISMATCH") << ": closed form vs mixed enumeration\n";
        return match ? kExitMatch : kExitMismatch;
    }
    emit(opt, j, "");
    return kExitMatch;
}

int run_verify(const std::string& profile_arg, const CommonOpts& opt) {
    Profile prof;
    if (profile_arg.size() > 5 && profile_arg.substr(profile_arg.size() - 5) == ".json") {
        std::ifstream f(profile_arg);
        if (!f) {
            std::cerr << "cannot open profile file " << profile_arg << "\n";
            return kExitInvalid;
        }
        nlohmann::json j;
        f >> j;
        prof = profile_from_json(j);
    } else {
        prof = builtin_profile(profile_arg);
    }
    if (opt.workers > 0) prof.workers = opt.workers;
    if (opt.budget > 0) prof.budget = opt.budget;
    if (opt.seed != kDefaultSeed) prof.seed = opt.seed;

    Report rep = run_profile(prof);
    for (const auto& c : rep.checks)
        std::cout << to_string(c.status) << "  " << c.name << "  (" << c.seconds << " s)  "
                  << c.detail << "\n";
    std::cout << "profile " << rep.profile_name << ": "
              << (rep.any_fail() ? "FAIL" : "PASS") << " in " << rep.elapsed << " s\n";
    if (!opt.out.empty()) {
        std::ofstream f(opt.out, std::ios::binary);
        f << rep.to_json().dump(2) << "\n";
        std::cout << "wrote " << opt.out << "\n";
    }
    return rep.any_fail() ? kExitMismatch : kExitMatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact exponential-sum, cyclic-code and sequence-correlation verifier"};
    app.require_subcommand(1);

    CommonOpts params_opt;
    auto* cmd_params = app.add_subcommand("params", "derive and print instance parameters");
    cmd_params->add_option("p", params_opt.p)->required();
    cmd_params->add_option("n", params_opt.n)->required();
    cmd_params->add_option("k", params_opt.k)->required();
    cmd_params->add_option("t", params_opt.t);

    CommonOpts tdist_opt, sdist_opt, weights_opt, corr_opt, verify_opt;
    std::string code = "c1", profile_arg = "smoke";

    auto* cmd_tdist = app.add_subcommand("tdist", "value distribution of T(a,b)");
    add_common(cmd_tdist, tdist_opt, true);
    auto* cmd_sdist = app.add_subcommand("sdist", "value distribution of S(a,b,g)");
    add_common(cmd_sdist, sdist_opt, true);
    auto* cmd_weights = app.add_subcommand("weights", "cyclic code weight distribution");
    add_common(cmd_weights, weights_opt, true);
    cmd_weights->add_option("--code", code, "c1 | c2")->check(CLI::IsMember({"c1", "c2"}));
    auto* cmd_corr = app.add_subcommand("corr", "sequence family correlation distribution");
    add_common(cmd_corr, corr_opt, true);
    auto* cmd_verify = app.add_subcommand("verify", "run a named check profile");
    cmd_verify->add_option("profile", profile_arg, "builtin profile name or a .json file")->required();
    cmd_verify->add_option("--workers", verify_opt.workers);
    cmd_verify->add_option("--seed", verify_opt.seed);
    cmd_verify->add_option("--budget", verify_opt.budget);
    cmd_verify->add_option("--out", verify_opt.out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_params->parsed()) {
            ParamSet par = derive_params(params_opt.p, params_opt.n, params_opt.k, params_opt.t);
            nlohmann::json j = par.to_json();
            // which closed-form tables apply to this instance
            nlohmann::json tabs;
            tabs["tdist"] = par.dprime == 2 * par.d ? "DD" : "D";
            tabs["sdist"] = to_string(par.case_tag);
            if (par.dprime == par.d)
                tabs["c1_weights"] = (par.d / par.t) % 2 == 1 ? "D_T_ODD" : "D_T_EVEN";
            else
                tabs["c1_weights"] = par.k_sixth ? "DD_K6" : "DD";
            tabs["c2_weights"] = par.k_sixth ? "inapplicable (k of n/6 type)" : to_string(par.case_tag);
            tabs["corr"] = par.k_sixth ? "inapplicable (k of n/6 type)" : to_string(par.case_tag);
            j["tables"] = tabs;
            std::cout << j.dump(2) << "\n";
            return kExitMatch;
        }
        if (cmd_tdist->parsed()) return run_dist(tdist_opt, false);
        if (cmd_sdist->parsed()) return run_dist(sdist_opt, true);
        if (cmd_weights->parsed()) return run_weights(weights_opt, code);
        if (cmd_corr->parsed()) return run_corr(corr_opt);
        if (cmd_verify->parsed()) return run_verify(profile_arg, verify_opt);
    } catch (const ValidationError& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const InapplicableCase& e) {
        std::cerr << "SKIPPED: " << e.what() << "\n";
        return kExitSkipped;
    } catch (const BudgetExceeded& e) {
        std::cerr << "SKIPPED: " << e.what() << "\n";
        return kExitSkipped;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMismatch;
    }
    return kExitMatch;
}
