#include "topq/subroutines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace topq {

namespace {

std::int64_t ceil_count(double x) {
    return static_cast<std::int64_t>(std::ceil(x));
}

void check_pac_params(double eps, double delta, const char* who) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument(std::string(who) + ": eps must be in (0,1)");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument(std::string(who) + ": delta must be in (0,1)");
}

struct Scored {
    Arm arm;
    double mu_hat;
};

// Rank survivors by fresh empirical means, largest first; ties keep input
// order so results are seed-deterministic.
void sort_by_mean_desc(std::vector<Scored>& v) {
    std::stable_sort(v.begin(), v.end(), [](const Scored& a, const Scored& b) {
        return a.mu_hat > b.mu_hat;
    });
}

}  // namespace

// ---------- Median-Elimination ----------

SelectResult median_elimination(std::span<const Arm> arms, double eps,
                                double delta, ArmSource& src) {
    if (arms.empty())
        throw std::invalid_argument("median_elimination: empty arm set");
    check_pac_params(eps, delta, "median_elimination");

    std::vector<Arm> alive(arms.begin(), arms.end());
    std::uint64_t used = 0;
    double eps_l = eps / 4.0;
    double delta_l = delta / 2.0;

    while (alive.size() > 1) {
        const std::int64_t n_l =
            ceil_count(4.0 / (eps_l * eps_l) * std::log(3.0 / delta_l));
        std::vector<Scored> scored;
        scored.reserve(alive.size());
        for (const Arm& a : alive) {
            scored.push_back({a, src.sample_mean(a, n_l).mean});
            used += static_cast<std::uint64_t>(n_l);
        }
        sort_by_mean_desc(scored);
        const std::size_t keep = (scored.size() + 1) / 2;  // above the median
        alive.clear();
        for (std::size_t i = 0; i < keep; ++i) alive.push_back(scored[i].arm);
        eps_l *= 0.75;
        delta_l *= 0.5;
    }
    return SelectResult{alive.front(), used};
}

// ---------- Halving ----------

namespace {

HalvingResult halving_impl(std::span<const Arm> arms, std::size_t k, double eps,
                           double delta, ArmSource& src, bool worst) {
    if (k < 1 || k > arms.size())
        throw std::invalid_argument("halving: need 1 <= k <= |arms|");
    check_pac_params(eps, delta, "halving");

    std::vector<Arm> alive(arms.begin(), arms.end());
    std::uint64_t used = 0;
    double eps_r = eps / 4.0;
    double delta_r = delta / 2.0;

    while (alive.size() > k) {
        const std::int64_t n_r = ceil_count(
            2.0 / (eps_r * eps_r) *
            std::log(2.0 * static_cast<double>(k) *
                     static_cast<double>(alive.size()) / delta_r));
        std::vector<Scored> scored;
        scored.reserve(alive.size());
        for (const Arm& a : alive) {
            double mu = src.sample_mean(a, n_r).mean;
            used += static_cast<std::uint64_t>(n_r);
            scored.push_back({a, worst ? 1.0 - mu : mu});
        }
        sort_by_mean_desc(scored);
        const std::size_t keep = std::max(k, (alive.size() + 1) / 2);
        alive.clear();
        for (std::size_t i = 0; i < keep; ++i) alive.push_back(scored[i].arm);
        eps_r *= 0.75;
        delta_r *= 0.5;
    }
    return HalvingResult{std::move(alive), used};
}

}  // namespace

HalvingResult halving(std::span<const Arm> arms, std::size_t k, double eps,
                      double delta, ArmSource& src) {
    return halving_impl(arms, k, eps, delta, src, /*worst=*/false);
}

HalvingResult halving_worst(std::span<const Arm> arms, std::size_t k,
                            double eps, double delta, ArmSource& src) {
    return halving_impl(arms, k, eps, delta, src, /*worst=*/true);
}

// ---------- PAC maxing ----------

std::uint64_t pac_budget(std::size_t n_arms, double eps, double delta,
                         double gamma, double k1) {
    if (n_arms < 1) throw std::invalid_argument("pac_budget: need n >= 1");
    check_pac_params(eps, delta, "pac_budget");
    const double n = static_cast<double>(n_arms);
    const double e1 = 1.0 + std::exp(-1.0);
    const double a = 8.0 * n / (eps * eps) * std::log(k1 * n / delta);
    const double b = 8.0 * e1 * gamma * n / (eps * eps) *
                     std::log(4.0 * e1 * gamma / (eps * eps));
    return static_cast<std::uint64_t>(std::ceil(3.0 * n + std::max(a, b)));
}

std::string trace_to_csv(const std::vector<PacTraceRow>& rows) {
    std::ostringstream out;
    out << "t,a,b,gap\n";
    for (const auto& r : rows) {
        out << r.t << ',' << r.best << ',' << r.challenger << ',' << r.gap
            << '\n';
    }
    return out.str();
}

PacMaxingResult pac_maxing(std::span<const Arm> arms, double eps, double delta,
                           std::uint64_t budget, const ConfidenceBound& bound,
                           ArmSource& src, std::vector<PacTraceRow>* trace) {
    const std::size_t n = arms.size();
    if (n == 0) throw std::invalid_argument("pac_maxing: empty arm set");
    check_pac_params(eps, delta, "pac_maxing");
    if (budget < n)
        throw std::invalid_argument(
            "pac_maxing: budget must cover one sample per arm");

    const BoundSchedule sched{delta, n};

    struct State {
        double sum = 0.0;
        std::uint64_t count = 0;
        double mu_hat = 0.0;
        double up = 1.0;
        double low = 0.0;
    };
    std::vector<State> st(n);

    auto observe = [&](std::size_t i) {
        st[i].sum += src.sample_once(arms[i]);
        st[i].count += 1;
        st[i].mu_hat = st[i].sum / static_cast<double>(st[i].count);
        const double ds = sched.delta_s(st[i].count);
        st[i].up = bound.upper(st[i].mu_hat, st[i].count, ds);
        st[i].low = bound.lower(st[i].mu_hat, st[i].count, ds);
    };

    for (std::size_t i = 0; i < n; ++i) observe(i);
    std::uint64_t t = n;

    // No challenger exists for a single arm; its one sample decides.
    if (n == 1) return PacMaxingResult{arms[0], false, t};

    auto best_index = [&] {
        std::size_t best = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (st[i].mu_hat > st[best].mu_hat) best = i;
        return best;
    };
    auto challenger_index = [&](std::size_t best) {
        std::size_t ch = best == 0 ? 1 : 0;
        for (std::size_t i = 0; i < n; ++i)
            if (i != best && st[i].up > st[ch].up) ch = i;
        return ch;
    };

    std::size_t a = best_index();
    std::size_t b = challenger_index(a);
    double gap = std::numeric_limits<double>::infinity();

    while (gap > eps && t + 2 <= budget) {
        observe(a);
        observe(b);
        t += 2;
        a = best_index();
        b = challenger_index(a);
        gap = st[b].up - st[a].low;
        if (trace) {
            PacTraceRow row{t, a, b, gap, {}, {}};
            row.mu_hat.reserve(n);
            row.upper.reserve(n);
            for (const State& s : st) {
                row.mu_hat.push_back(s.mu_hat);
                row.upper.push_back(s.up);
            }
            trace->push_back(std::move(row));
        }
    }

    if (gap <= eps) return PacMaxingResult{arms[a], false, t};
    return PacMaxingResult{arms[src.pick_index(n)], true, t};
}

// ---------- Quantile threshold estimation ----------

LambdaEstimate lambda_estimation(ArmSource& src, double rho, double eps,
                                 double delta) {
    if (!(rho > 0.0 && rho < 0.5))
        throw std::invalid_argument("lambda_estimation: rho must be in (0,1/2)");
    if (!(eps > 0.0 && eps < 0.5))
        throw std::invalid_argument("lambda_estimation: eps must be in (0,1/2)");
    if (!(delta > 0.0 && delta < 0.5))
        throw std::invalid_argument("lambda_estimation: delta must be in (0,1/2)");

    const double eps1 = eps / 4.0, eps2 = eps / 4.0, eps3 = eps / 4.0;
    const std::int64_t n3 = ceil_count(32.0 / rho * std::log(5.0 / delta));
    const std::int64_t n4 =
        ceil_count(1.0 / (2.0 * eps3 * eps3) * std::log(10.0 / delta));
    const std::size_t m = static_cast<std::size_t>(
        std::floor(1.0 + 0.75 * rho * static_cast<double>(n3)));

    std::uint64_t used = 0;
    const std::vector<Arm> pool = src.draw_arms(n3);
    HalvingResult top = halving(pool, m, eps1, delta / 5.0, src);
    used += top.samples;
    HalvingResult worst = halving_worst(top.arms, 1, eps2, delta / 5.0, src);
    used += worst.samples;
    const double mu0 = src.sample_mean(worst.arms.front(), n4).mean;
    used += static_cast<std::uint64_t>(n4);
    return LambdaEstimate{mu0 - eps2 - eps3, used};
}

}  // namespace topq
