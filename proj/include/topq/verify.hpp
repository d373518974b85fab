#pragma once
#include <cstddef>
#include <vector>

#include "topq/algorithms.hpp"
#include "topq/arms.hpp"

namespace topq {

// How a returned arm is judged. Each problem's stated guarantee picks the
// default: known-threshold variants promise mean >= lambda - eps, the
// unknown-threshold ones promise quantile/top-m optimality.
enum class ScoreMode { by_problem, threshold, quantile };

struct TrialVerdict {
    bool success = false;
    std::vector<double> margins;  // mean - required threshold, per arm
    std::uint64_t samples = 0;
};

// Scores a result against known means. `returned_means` aligns with
// result.arms (for finite variants they can be looked up via base index,
// for prior sources the caller reads them off the ArmSource). Duplicate
// handles (or duplicate base arms on finite problems) fail regardless of
// margins. Pure: equal inputs give equal verdicts.
TrialVerdict score(const QuantileResult& result, const ProblemSpec& spec,
                   const GroundTruth& truth,
                   const std::vector<double>& returned_means,
                   ScoreMode mode = ScoreMode::by_problem);

struct PacCheck {
    std::size_t trials = 0;
    std::size_t failures = 0;
    double rate = 0.0;
    double wilson_low = 0.0;
    double wilson_high = 0.0;
    bool pass = false;  // cannot reject the PAC claim: wilson_low <= delta
};

// Wilson 95% interval on the empirical failure rate; needs >= 30 verdicts.
PacCheck failure_rate(const std::vector<TrialVerdict>& verdicts, double delta);
PacCheck failure_rate_counts(std::size_t failures, std::size_t trials,
                             double delta);

}  // namespace topq
