#pragma once
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "topq/arms.hpp"
#include "topq/confidence.hpp"

namespace topq {

// Every subroutine reports its sample usage as an arithmetic tally of the
// requests it made; callers cross-check it against the ArmSource counter.

struct SelectResult {
    Arm arm;
    std::uint64_t samples = 0;
};

// (eps,1)-PAC best-arm selection by rounds of elimination at the empirical
// median. Round l samples every survivor ceil(4/eps_l^2 * log(3/delta_l))
// times with eps_1 = eps/4, eps_{l+1} = (3/4) eps_l, delta_1 = delta/2,
// delta_{l+1} = delta_l/2, then keeps the top half. The round costs form a
// geometric series of ratio 8/9, so the total sample count is at most
// (|A|/eps^2) * (576 log(6/delta) + 3200) plus one ceiling per arm-round:
// O(|A|/eps^2 * log(1/delta)) with leading constant 576. A single-arm
// input returns immediately without sampling.
SelectResult median_elimination(std::span<const Arm> arms, double eps,
                                double delta, ArmSource& src);

struct HalvingResult {
    std::vector<Arm> arms;
    std::uint64_t samples = 0;
};

// Keeps k PAC-best arms: round r samples each survivor
// ceil(2/eps_r^2 * log(2 k |A_r| / delta_r)) times with
// eps_r = (eps/4)(3/4)^{r-1}, delta_r = delta/2^r, then keeps the top
// max(k, ceil(|A_r|/2)) by fresh empirical means. With probability 1-delta
// every returned arm is within eps of the k-th best input mean. k == |A|
// returns the input verbatim with zero samples.
HalvingResult halving(std::span<const Arm> arms, std::size_t k, double eps,
                      double delta, ArmSource& src);

// Same schedule run on reward-complemented means (mu -> 1-mu), so it keeps
// k PAC-worst arms.
HalvingResult halving_worst(std::span<const Arm> arms, std::size_t k,
                            double eps, double delta, ArmSource& src);

// Budget under which the LUCB loop below is guaranteed (w.p. 1-delta) to
// stop on its own with Hoeffding bounds:
//   3n + max{ 8n/eps^2 log(k1 n/delta),
//             8(1+1/e) gamma n/eps^2 log(4(1+1/e) gamma/eps^2) }.
std::uint64_t pac_budget(std::size_t n_arms, double eps, double delta,
                         double gamma = 2.0, double k1 = 4.0);

// One loop iteration of the LUCB-style sampler, recorded when tracing:
// after the paired samples at time t, `best` is the empirical-mean argmax
// and `challenger` the argmax of upper bounds among the rest; gap is
// U(challenger) - L(best). Snapshots allow asserting the argmax invariants.
struct PacTraceRow {
    std::uint64_t t = 0;
    std::size_t best = 0;
    std::size_t challenger = 0;
    double gap = 0.0;
    std::vector<double> mu_hat;
    std::vector<double> upper;
};

std::string trace_to_csv(const std::vector<PacTraceRow>& rows);

struct PacMaxingResult {
    Arm arm;
    bool exhausted = false;
    std::uint64_t samples = 0;
};

// LUCB-with-budget: sample every arm once, then repeatedly sample the
// empirical best and the highest-upper-bound challenger until the interval
// gap drops to eps or the budget would be exceeded by the next pair. On a
// clean stop returns the empirical best; on exhaustion returns a uniformly
// random arm (exhausted = true). Per-count error schedule delta_s comes
// from BoundSchedule{delta, n}. Ties break toward the lowest index.
PacMaxingResult pac_maxing(std::span<const Arm> arms, double eps, double delta,
                           std::uint64_t budget, const ConfidenceBound& bound,
                           ArmSource& src,
                           std::vector<PacTraceRow>* trace = nullptr);

struct LambdaEstimate {
    double lambda_hat = 0.0;
    std::uint64_t samples = 0;
};

// Estimates the top-rho quantile of an infinite source within [lambda_rho -
// eps, lambda_{rho/2}] w.p. 1-delta: draw n3 = ceil(32/rho log(5/delta))
// arms, keep the m = floor(1 + (3/4) rho n3) PAC-best, take the PAC-worst
// of those, sample it n4 = ceil(1/(2 eps3^2) log(10/delta)) times and
// return mu_hat - eps2 - eps3. Tolerance split: eps1 = eps2 = eps3 = eps/4.
LambdaEstimate lambda_estimation(ArmSource& src, double rho, double eps,
                                 double delta);

}  // namespace topq
