#include "topq/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace topq {

namespace {

std::int64_t ceil_count(double x) {
    return static_cast<std::int64_t>(std::ceil(x));
}

std::int64_t draw_batch_size(double rho) {
    return ceil_count(std::log(3.0) / rho);
}

void check_ranges(std::size_t k, double rho, double eps, double delta,
                  const char* who) {
    if (k < 1) throw std::invalid_argument(std::string(who) + ": k must be >= 1");
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument(std::string(who) + ": rho must be in (0,1)");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument(std::string(who) + ": eps must be in (0,1)");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument(std::string(who) + ": delta must be in (0,1)");
}

}  // namespace

std::string to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::q_ik: return "q_ik";
        case ProblemKind::q_iu: return "q_iu";
        case ProblemKind::q_fk: return "q_fk";
        case ProblemKind::q_fu: return "q_fu";
    }
    return "?";
}

void ProblemSpec::validate() const {
    if (k < 1) throw std::invalid_argument("spec: k must be >= 1");
    if (!(eps > 0.0 && eps < 0.5))
        throw std::invalid_argument("spec: eps must be in (0,1/2)");
    if (!(delta > 0.0 && delta < 0.5))
        throw std::invalid_argument("spec: delta must be in (0,1/2)");
    const bool finite = kind == ProblemKind::q_fk || kind == ProblemKind::q_fu;
    const bool known = kind == ProblemKind::q_ik || kind == ProblemKind::q_fk;
    if (known && !lambda)
        throw std::invalid_argument("spec: known-threshold variant needs lambda");
    if (!known && lambda)
        throw std::invalid_argument("spec: unknown-threshold variant forbids lambda");
    if (finite) {
        if (n < 2) throw std::invalid_argument("spec: need n >= 2 arms");
        if (!(k <= m && m <= n / 2))
            throw std::invalid_argument("spec: need k <= m <= n/2");
        if (kind == ProblemKind::q_fu && !(2 * k < m))
            throw std::invalid_argument("spec: q_fu needs 2k < m");
    } else {
        if (!(rho > 0.0 && rho < 0.5))
            throw std::invalid_argument("spec: rho must be in (0,1/2)");
    }
}

// ---------- Known threshold, infinite set ----------

QuantileResult al_q_ik(ArmSource& src, std::size_t k, double rho, double eps,
                       double delta, double lambda, const EpsilonSplit& split) {
    check_ranges(k, rho, eps, delta, "al_q_ik");
    const double eps1 = split.eps1_frac * eps;
    const double eps2 = split.eps2_frac * eps;
    if (std::abs(eps1 + 2.0 * eps2 - eps) > 1e-12 * std::max(1.0, eps) ||
        eps1 <= 0.0 || eps2 <= 0.0)
        throw std::invalid_argument("al_q_ik: split must satisfy eps1 + 2*eps2 = eps");

    const std::int64_t n1 = draw_batch_size(rho);
    const std::int64_t n2 = ceil_count(
        std::log(static_cast<double>(k) / delta) / (2.0 * eps2 * eps2));

    QuantileResult res;
    std::uint64_t select = 0, test = 0;
    while (res.arms.size() < k) {
        res.repetitions += 1;
        const std::vector<Arm> batch = src.draw_arms(n1);
        const SelectResult cand = median_elimination(batch, eps1, 0.25, src);
        select += cand.samples;
        const double mu = src.sample_mean(cand.arm, n2).mean;
        test += static_cast<std::uint64_t>(n2);
        if (mu >= lambda - eps1 - eps2) res.arms.push_back(cand.arm);
    }
    res.phase_breakdown["selection"] = select;
    res.phase_breakdown["testing"] = test;
    res.total_samples = select + test;
    return res;
}

QuantileResult cb_al_q_ik(ArmSource& src, std::size_t k, double rho,
                          double eps, double delta, double lambda,
                          const ConfidenceBound& bound) {
    check_ranges(k, rho, eps, delta, "cb_al_q_ik");
    const std::int64_t n1 = draw_batch_size(rho);
    const std::uint64_t g0 =
        pac_budget(static_cast<std::size_t>(n1), 0.75 * eps, 0.25);
    const std::uint64_t g1 =
        pac_budget(2, eps / 8.0, delta / static_cast<double>(k));

    // Rewards live in [0,1]; an estimated threshold can push the ruler
    // value below 0, where every arm legitimately qualifies.
    const double ruler_value = std::clamp(lambda - 0.875 * eps, 0.0, 1.0);

    QuantileResult res;
    std::uint64_t select = 0, test = 0;
    while (res.arms.size() < k) {
        res.repetitions += 1;
        const std::vector<Arm> batch = src.draw_arms(n1);
        const PacMaxingResult cand =
            pac_maxing(batch, 0.75 * eps, 0.25, g0, bound, src);
        select += cand.samples;
        if (cand.exhausted) continue;  // candidate round failed; redraw

        const Arm ruler = src.add_constant_arm(ruler_value);
        const Arm pair[2] = {cand.arm, ruler};
        const PacMaxingResult race = pac_maxing(
            pair, eps / 8.0, delta / static_cast<double>(k), g1, bound, src);
        test += race.samples;
        if (!race.exhausted && race.arm == cand.arm) res.arms.push_back(cand.arm);
    }
    res.phase_breakdown["selection"] = select;
    res.phase_breakdown["testing"] = test;
    res.total_samples = select + test;
    return res;
}

// ---------- Unknown threshold, infinite set ----------

QuantileResult al_q_iu(ArmSource& src, std::size_t k, double rho, double eps,
                       double delta, const ConfidenceBound* bound) {
    check_ranges(k, rho, eps, delta, "al_q_iu");
    if (!(rho < 0.5 && eps < 0.5 && delta < 0.5))
        throw std::invalid_argument("al_q_iu: rho, eps, delta must be in (0,1/2)");

    const LambdaEstimate est =
        lambda_estimation(src, rho, eps / 2.0, delta / 2.0);
    QuantileResult res =
        bound ? cb_al_q_ik(src, k, rho / 2.0, eps / 2.0, delta / 2.0,
                           est.lambda_hat, *bound)
              : al_q_ik(src, k, rho / 2.0, eps / 2.0, delta / 2.0,
                        est.lambda_hat);
    res.phase_breakdown["estimation"] = est.samples;
    res.total_samples += est.samples;
    return res;
}

// ---------- Finite sets ----------

QuantileResult al_q_fk(ArmSource& src, std::size_t m, std::size_t k,
                       double eps, double delta, double lambda,
                       const ConfidenceBound* bound) {
    if (src.kind() != ArmSource::Kind::infinite_extension)
        throw std::invalid_argument("al_q_fk: needs an extension source");
    const std::size_t n = src.active_base_count();
    if (!(k >= 1 && k <= m && m <= n / 2))
        throw std::invalid_argument("al_q_fk: need k <= m <= n/2");

    QuantileResult res;
    std::uint64_t select = 0, test = 0;
    for (std::size_t t = 0; t < k; ++t) {
        const double rho_t = static_cast<double>(m - t) / static_cast<double>(n - t);
        QuantileResult one =
            bound ? cb_al_q_ik(src, 1, rho_t, eps,
                               delta / static_cast<double>(k), lambda, *bound)
                  : al_q_ik(src, 1, rho_t, eps, delta / static_cast<double>(k),
                            lambda);
        select += one.phase_breakdown["selection"];
        test += one.phase_breakdown["testing"];
        res.repetitions += 1;
        res.arms.push_back(one.arms.front());
        src.remove_base(one.arms.front().base);
    }
    res.phase_breakdown["selection"] = select;
    res.phase_breakdown["testing"] = test;
    res.total_samples = select + test;
    return res;
}

QuantileResult al_q_fu(ArmSource& src, std::size_t m, std::size_t k,
                       double eps, double delta, const ConfidenceBound* bound) {
    if (src.kind() != ArmSource::Kind::infinite_extension)
        throw std::invalid_argument("al_q_fu: needs an extension source");
    const std::size_t n = src.active_base_count();
    if (!(k >= 1 && 2 * k < m && m <= n / 2))
        throw std::invalid_argument("al_q_fu: need 2k < m <= n/2");

    const double rho = static_cast<double>(m) / static_cast<double>(n);
    const LambdaEstimate est =
        lambda_estimation(src, rho, eps / 2.0, delta / 2.0);
    QuantileResult res = al_q_fk(src, m / 2, k, eps / 2.0, delta / 2.0,
                                 est.lambda_hat, bound);
    res.phase_breakdown["estimation"] = est.samples;
    res.total_samples += est.samples;
    return res;
}

// ---------- Uniform rejection baseline ----------

QuantileResult iur_baseline(ArmSource& src, std::size_t k, double rho,
                            double eps, double delta, double lambda) {
    check_ranges(k, rho, eps, delta, "iur_baseline");
    // Per-repetition error delta*rho/(2k): a union bound over the
    // geometric number of repetitions keeps the total at delta.
    const std::int64_t n_rep = ceil_count(
        2.0 / (eps * eps) *
        std::log(2.0 * static_cast<double>(k) / (delta * rho)));

    QuantileResult res;
    std::uint64_t test = 0;
    while (res.arms.size() < k) {
        res.repetitions += 1;
        const Arm arm = src.draw_arm();
        const double mu = src.sample_mean(arm, n_rep).mean;
        test += static_cast<std::uint64_t>(n_rep);
        if (mu >= lambda - eps / 2.0) res.arms.push_back(arm);
    }
    res.phase_breakdown["testing"] = test;
    res.total_samples = test;
    return res;
}

}  // namespace topq
