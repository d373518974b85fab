#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "topq/arms.hpp"
#include "topq/confidence.hpp"
#include "topq/subroutines.hpp"

namespace topq {

// ---------- Problem descriptions and results ----------

// The four problem variants: infinite or finite arm set, quantile
// threshold known or unknown.
enum class ProblemKind { q_ik, q_iu, q_fk, q_fu };

std::string to_string(ProblemKind kind);

struct ProblemSpec {
    ProblemKind kind = ProblemKind::q_ik;
    std::size_t k = 1;
    double rho = 0.1;       // infinite variants
    std::size_t m = 0;      // finite variants: top-m of n
    std::size_t n = 0;
    double eps = 0.1;
    double delta = 0.1;
    std::optional<double> lambda;  // required for *K, forbidden for *U
    BoundKind bound = BoundKind::hoeffding;

    // Enforces the variant invariants: k >= 1; rho, eps, delta in (0,1/2);
    // lambda present iff the threshold is known; k <= m <= n/2 for Q-FK and
    // additionally 2k < m for Q-FU. Throws std::invalid_argument.
    void validate() const;
};

struct QuantileResult {
    std::vector<Arm> arms;          // k distinct handles
    std::uint64_t total_samples = 0;
    std::map<std::string, std::uint64_t> phase_breakdown;
    std::uint64_t repetitions = 0;  // accept/reject rounds of the outer loop
};

// ---------- Solvers ----------

// Tolerance split for the known-threshold repeat-and-test loop:
// eps1 + 2*eps2 = eps.
struct EpsilonSplit {
    double eps1_frac = 0.8;
    double eps2_frac = 0.1;
};

// Known threshold lambda <= lambda_rho, infinite source. Repeats: draw
// n1 = ceil(log(3)/rho) arms, pick one by median_elimination(eps1, 1/4),
// sample it n2 = ceil(log(k/delta)/(2 eps2^2)) times and accept when the
// empirical mean reaches lambda - eps1 - eps2; stops at k accepted arms.
// W.p. >= 1-delta every returned arm has mean >= lambda - eps.
QuantileResult al_q_ik(ArmSource& src, std::size_t k, double rho, double eps,
                       double delta, double lambda,
                       const EpsilonSplit& split = {});

// Confidence-bound variant: the per-repetition candidate comes from
// pac_maxing(A_t, 3eps/4, 1/4) and the accept test races the candidate
// against a constant arm at lambda - 7eps/8 with pac_maxing(eps/8,
// delta/k). Budgets are pac_budget values; an exhausted run counts as a
// rejection. Exploits large gaps: cheap when means sit far from lambda.
QuantileResult cb_al_q_ik(ArmSource& src, std::size_t k, double rho,
                          double eps, double delta, double lambda,
                          const ConfidenceBound& bound);

// Unknown threshold: estimate lambda_rho by lambda_estimation(rho, eps/2,
// delta/2), then run the known-threshold solver at (rho/2, eps/2, delta/2).
// Set `bound` to use the confidence-bound inner solver.
QuantileResult al_q_iu(ArmSource& src, std::size_t k, double rho, double eps,
                       double delta,
                       const ConfidenceBound* bound = nullptr);

// Finite set with known lambda <= lambda_[m]: repeatedly solve the k=1
// infinite-extension problem at rho_t = (m-t+1)/(n-t+1) and delete the
// chosen base arm, so returned base indices are distinct by construction.
// `src` must be an extension source over the full base set.
QuantileResult al_q_fk(ArmSource& src, std::size_t m, std::size_t k,
                       double eps, double delta, double lambda,
                       const ConfidenceBound* bound = nullptr);

// Finite set, unknown threshold: estimate lambda at rho = m/n over the
// extension, then solve the known-threshold problem for the top floor(m/2)
// at halved tolerance and error.
QuantileResult al_q_fu(ArmSource& src, std::size_t m, std::size_t k,
                       double eps, double delta,
                       const ConfidenceBound* bound = nullptr);

// Iterative uniform rejection baseline: draw one arm, sample it
// ceil(2/eps^2 * log(2k/(delta rho))) times, accept when the empirical
// mean reaches lambda - eps/2; repeat until k accepted.
QuantileResult iur_baseline(ArmSource& src, std::size_t k, double rho,
                            double eps, double delta, double lambda);

}  // namespace topq
