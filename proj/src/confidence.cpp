#include "topq/confidence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace topq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_args(double mu_hat, std::uint64_t n, double delta) {
    if (n == 0) throw std::invalid_argument("confidence bound: N must be >= 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("confidence bound: delta must be in (0,1)");
    if (!(mu_hat >= 0.0 && mu_hat <= 1.0))
        throw std::invalid_argument("confidence bound: mu_hat must be in [0,1]");
}

double xlogxy(double x, double x_over_y) {
    return x > 0.0 ? x * std::log(x_over_y) : 0.0;
}

}  // namespace

double kl_bernoulli(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("kl_bernoulli: arguments must be in [0,1]");
    if (p == q) return 0.0;
    if (q <= 0.0 || q >= 1.0) return kInf;
    return xlogxy(p, p / q) + xlogxy(1.0 - p, (1.0 - p) / (1.0 - q));
}

double hoeffding_upper(double mu_hat, std::uint64_t n, double delta) {
    check_args(mu_hat, n, delta);
    const double r = std::sqrt(std::log(1.0 / delta) / (2.0 * static_cast<double>(n)));
    return std::min(1.0, mu_hat + r);
}

double hoeffding_lower(double mu_hat, std::uint64_t n, double delta) {
    check_args(mu_hat, n, delta);
    const double r = std::sqrt(std::log(1.0 / delta) / (2.0 * static_cast<double>(n)));
    return std::max(0.0, mu_hat - r);
}

namespace {

// Largest q in [mu, 1] with n*d(mu||q) <= target, approached from the
// feasible side so the returned divergence never overshoots. Stops after
// 64 halvings or once the divergence sits within 1e-9 of the target.
double kl_bisect_up(double mu, double n, double target) {
    double lo = mu, hi = 1.0;
    if (n * kl_bernoulli(mu, hi) <= target) return hi;
    double d_lo = 0.0;
    for (int it = 0; it < 64 && target - d_lo > 1e-9; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double d_mid = n * kl_bernoulli(mu, mid);
        if (d_mid <= target) {
            lo = mid;
            d_lo = d_mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

double kl_bisect_down(double mu, double n, double target) {
    double lo = 0.0, hi = mu;
    if (n * kl_bernoulli(mu, lo) <= target) return lo;
    double d_hi = 0.0;
    for (int it = 0; it < 64 && target - d_hi > 1e-9; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double d_mid = n * kl_bernoulli(mu, mid);
        if (d_mid <= target) {
            hi = mid;
            d_hi = d_mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace

double kl_upper(double mu_hat, std::uint64_t n, double delta) {
    check_args(mu_hat, n, delta);
    if (mu_hat >= 1.0) return 1.0;
    return kl_bisect_up(mu_hat, static_cast<double>(n), std::log(1.0 / delta));
}

double kl_lower(double mu_hat, std::uint64_t n, double delta) {
    check_args(mu_hat, n, delta);
    if (mu_hat <= 0.0) return 0.0;
    return kl_bisect_down(mu_hat, static_cast<double>(n), std::log(1.0 / delta));
}

std::string to_string(BoundKind kind) {
    return kind == BoundKind::hoeffding ? "hoeffding" : "kl";
}

BoundKind bound_kind_from_string(const std::string& name) {
    if (name == "hoeffding") return BoundKind::hoeffding;
    if (name == "kl") return BoundKind::kl;
    throw std::invalid_argument("unknown bound kind: " + name);
}

double ConfidenceBound::upper(double mu_hat, std::uint64_t n, double delta) const {
    return kind == BoundKind::hoeffding ? hoeffding_upper(mu_hat, n, delta)
                                        : kl_upper(mu_hat, n, delta);
}

double ConfidenceBound::lower(double mu_hat, std::uint64_t n, double delta) const {
    return kind == BoundKind::hoeffding ? hoeffding_lower(mu_hat, n, delta)
                                        : kl_lower(mu_hat, n, delta);
}

double BoundSchedule::delta_s(std::uint64_t s) const {
    if (s == 0) throw std::invalid_argument("delta_s: s must be >= 1");
    return delta / (k1 * static_cast<double>(n_arms) *
                    std::pow(static_cast<double>(s), gamma));
}

}  // namespace topq
