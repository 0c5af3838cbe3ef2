#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dosum/codes.hpp"
#include "dosum/expsum.hpp"
#include "dosum/seqcorr.hpp"

namespace dosum {

inline constexpr std::uint64_t kDefaultSeed = 0xD05A11CEull;
inline constexpr std::uint64_t kDefaultBudget = 200'000'000'000ull;

// DOSUM_BUDGET overrides the default enumeration budget.
std::uint64_t default_budget();

enum class CheckStatus { Pass, Fail, Skipped };
const char* to_string(CheckStatus st);

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    std::string detail;
    double seconds = 0;
};

struct Profile {
    std::string name;
    std::int64_t p = 3, n = 3, k = 1;
    std::vector<std::int64_t> ts{1};
    std::vector<std::string> checks;
    int workers = 0;  // 0: hardware default
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t budget = 0;  // 0: default_budget()
    std::int64_t sample_pairs = 100;
    std::int64_t sample_triples = 10000;
    std::int64_t sample_corr = 2000;
    std::int64_t lemma6_per_class = 20;
    std::string tdist_method = "fast";
    std::string sdist_method = "sweep";
    std::string weights_method = "enum";
    std::string weights_c2_method;  // defaults to weights_method

    void validate() const;
};

Profile builtin_profile(const std::string& name);
std::vector<std::string> builtin_profile_names();
Profile profile_from_json(const nlohmann::json& j);

struct Report {
    std::string profile_name;
    nlohmann::json params_echo;
    std::vector<CheckResult> checks;
    double elapsed = 0;
    bool any_fail() const;
    nlohmann::json to_json() const;
};

// Shared evaluation state for one (p,n,k) instance; Sums engines per t.
class CheckEnv {
public:
    CheckEnv(const Profile& prof);
    const Profile& prof() const { return *prof_; }
    const ParamSet& par(std::int64_t t) const;
    const Sums& sums(std::int64_t t) const;
    const Sums& sums() const { return sums(prof_->ts.front()); }
    std::shared_ptr<const FieldCtx> ctx() const { return ctx_; }
    int workers() const;
    std::uint64_t budget() const;

    // enumerated T-distribution, computed once and shared between checks
    const DistTable& enum_tdist();

private:
    const Profile* prof_;
    std::shared_ptr<const FieldCtx> ctx_;
    std::map<std::int64_t, ParamSet> pars_;
    std::map<std::int64_t, std::shared_ptr<Sums>> sums_;
    std::optional<DistTable> tdist_;
};

// Individual checks; each returns Pass/Fail/Skipped and never throws.
CheckResult check_params(CheckEnv& env);
CheckResult check_gauss(CheckEnv& env);
CheckResult check_tdist(CheckEnv& env);
CheckResult check_sdist(CheckEnv& env);
CheckResult check_sdist_sampled(CheckEnv& env);
CheckResult check_moments(CheckEnv& env);
CheckResult check_moment_system(CheckEnv& env);
CheckResult check_artin(CheckEnv& env);
CheckResult check_lemma6(CheckEnv& env);
CheckResult check_weights_c1(CheckEnv& env);
CheckResult check_weights_c2(CheckEnv& env);
CheckResult check_corr(CheckEnv& env);
CheckResult check_congruence(CheckEnv& env);
CheckResult check_scaling(CheckEnv& env);
CheckResult check_basis_invariance(CheckEnv& env);
CheckResult check_solvability(CheckEnv& env);
CheckResult check_lemma7(CheckEnv& env);
CheckResult check_tfast_sampled(CheckEnv& env);
CheckResult check_determinism(CheckEnv& env);

CheckResult run_check(CheckEnv& env, const std::string& name);
Report run_profile(const Profile& prof);

}  // namespace dosum
