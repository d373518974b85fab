#include "topq/verify.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace topq {

TrialVerdict score(const QuantileResult& result, const ProblemSpec& spec,
                   const GroundTruth& truth,
                   const std::vector<double>& returned_means, ScoreMode mode) {
    if (returned_means.size() != result.arms.size())
        throw std::invalid_argument("score: one mean per returned arm required");

    const bool finite =
        spec.kind == ProblemKind::q_fk || spec.kind == ProblemKind::q_fu;

    // Required threshold on the true mean of each returned arm.
    double need = 0.0;
    bool threshold_mode = mode == ScoreMode::threshold;
    if (mode == ScoreMode::by_problem)
        threshold_mode =
            spec.kind == ProblemKind::q_ik || spec.kind == ProblemKind::q_fk;
    if (threshold_mode) {
        if (!spec.lambda)
            throw std::invalid_argument("score: threshold mode needs lambda");
        need = *spec.lambda - spec.eps;
    } else if (finite) {
        need = truth.lambda_top(spec.m) - spec.eps;  // mean + eps >= lambda_[m]
    } else {
        need = truth.lambda_rho(spec.rho) - spec.eps;
    }

    TrialVerdict v;
    v.samples = result.total_samples;
    v.margins.reserve(result.arms.size());
    for (double mu : returned_means) v.margins.push_back(mu - need);

    bool distinct = true;
    {
        std::set<std::uint64_t> ids;
        for (const Arm& a : result.arms)
            if (!ids.insert(a.id).second) distinct = false;
        if (finite) {
            std::set<std::int64_t> bases;
            for (const Arm& a : result.arms)
                if (!bases.insert(a.base).second) distinct = false;
        }
    }

    v.success = distinct && result.arms.size() == spec.k;
    for (double mg : v.margins)
        if (mg < 0.0) v.success = false;
    return v;
}

PacCheck failure_rate_counts(std::size_t failures, std::size_t trials,
                             double delta) {
    if (trials < 30)
        throw std::invalid_argument("failure_rate: need at least 30 trials");
    if (failures > trials)
        throw std::invalid_argument("failure_rate: failures exceed trials");

    const double z = 1.959963984540054;  // 97.5% normal quantile
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(failures) / n;
    const double denom = 1.0 + z * z / n;
    const double center = p + z * z / (2.0 * n);
    const double half =
        z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));

    PacCheck out;
    out.trials = trials;
    out.failures = failures;
    out.rate = p;
    out.wilson_low = std::max(0.0, (center - half) / denom);
    out.wilson_high = std::min(1.0, (center + half) / denom);
    out.pass = out.wilson_low <= delta;
    return out;
}

PacCheck failure_rate(const std::vector<TrialVerdict>& verdicts, double delta) {
    std::size_t failures = 0;
    for (const TrialVerdict& v : verdicts)
        if (!v.success) ++failures;
    return failure_rate_counts(failures, verdicts.size(), delta);
}

}  // namespace topq
