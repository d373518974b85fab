#pragma once
#include <cstdint>
#include <string>

namespace topq {

// Bernoulli KL divergence d(p||q) = p log(p/q) + (1-p) log((1-p)/(1-q)),
// with 0 log 0 = 0 and +inf when q is degenerate but p is not.
double kl_bernoulli(double p, double q);

// Hoeffding bounds: mu_hat +/- sqrt(log(1/delta) / (2 N)), clamped to [0,1].
double hoeffding_upper(double mu_hat, std::uint64_t n, double delta);
double hoeffding_lower(double mu_hat, std::uint64_t n, double delta);

// Chernoff/KL bounds for [0,1] rewards:
//   kl_upper = max{q in [mu_hat, 1] : N * d(mu_hat||q) <= log(1/delta)}
//   kl_lower = min{q in [0, mu_hat] : N * d(mu_hat||q) <= log(1/delta)}
// solved by bisection (64 iterations or interval width 1e-9, whichever
// first), returning the feasible side of the last bracket.
double kl_upper(double mu_hat, std::uint64_t n, double delta);
double kl_lower(double mu_hat, std::uint64_t n, double delta);

enum class BoundKind { hoeffding, kl };

std::string to_string(BoundKind kind);
BoundKind bound_kind_from_string(const std::string& name);

// Upper/lower confidence bound pair with per-use error delta. Both outputs
// are clamped to [0,1] and bracket mu_hat; the radius shrinks in N and
// grows in 1/delta.
struct ConfidenceBound {
    BoundKind kind = BoundKind::hoeffding;

    double upper(double mu_hat, std::uint64_t n, double delta) const;
    double lower(double mu_hat, std::uint64_t n, double delta) const;
};

// Per-count error schedule delta_s = delta / (k1 * n * s^gamma). With
// gamma > 1 and k1 >= 2 (1 + 1/(gamma-1)), sum_s 2 n delta_s <= delta.
struct BoundSchedule {
    double delta = 0.1;
    std::size_t n_arms = 1;
    double gamma = 2.0;
    double k1 = 4.0;

    double delta_s(std::uint64_t s) const;
};

}  // namespace topq
