#pragma once
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "topq/rng.hpp"

namespace topq {

// ---------- Reward distributions ----------

// A sampleable reward law supported on [0, 1].
class RewardDistribution {
  public:
    enum class Kind { bernoulli, constant };

    static RewardDistribution bernoulli(double p);
    static RewardDistribution constant(double v);

    Kind kind() const { return kind_; }
    double mean() const { return param_; }

    double draw(SplitMix64& rng) const;
    // Mean of `times` fresh i.i.d. draws. For Bernoulli arms this takes a
    // single binomial variate instead of `times` coin flips; the result is
    // distributed identically and keeps billion-sample runs desk-scale.
    double draw_mean(SplitMix64& rng, std::int64_t times) const;

  private:
    RewardDistribution(Kind k, double p) : kind_(k), param_(p) {}
    Kind kind_;
    double param_;
};

// ---------- Priors over arm means ----------

// Distribution of expected rewards for an infinite arm population.
// TwoPoint(rho, hi, lo) puts mass rho on hi and 1-rho on lo.
class MeanPrior {
  public:
    enum class Kind { uniform01, two_point, discrete };

    static MeanPrior uniform01();
    static MeanPrior two_point(double rho, double hi, double lo);
    static MeanPrior discrete(std::vector<double> values,
                              std::vector<double> weights);
    static MeanPrior point(double v);
    // Empirical distribution of a finite mean list, uniform weights.
    static MeanPrior empirical(std::span<const double> means);

    Kind kind() const { return kind_; }

    double sample(SplitMix64& rng) const;

    // Inverse CDF in the sup sense: quantile(p) = sup{x : F(x) <= p}.
    // Satisfies F(quantile(p)) >= p and P{X >= quantile(1-rho)} >= rho.
    double quantile(double p) const;

    // Atoms (ascending) and cumulative masses; empty for uniform01.
    const std::vector<double>& atoms() const { return values_; }
    const std::vector<double>& cumulative() const { return cum_; }

  private:
    MeanPrior() = default;
    Kind kind_ = Kind::uniform01;
    std::vector<double> values_;  // ascending
    std::vector<double> cum_;     // cumulative weights, cum_.back() == 1
};

// ---------- Arms and arm sources ----------

// Lightweight arm handle. `base` is the index of the underlying arm for
// finite sets and their infinite extensions (-1 for prior-generated arms);
// it is what lets a caller delete a chosen arm from a base set while
// duplicates drawn earlier stay scoreable.
struct Arm {
    std::uint64_t id = 0;
    std::int64_t base = -1;

    friend bool operator==(const Arm&, const Arm&) = default;
};

struct SampleStats {
    double mean = 0.0;
    std::int64_t count = 0;
};

// The single gateway for every reward observation. The counter moves by
// exactly one per observation and by zero for anything else (drawing arms
// is free). Single-threaded: distinct trials use distinct sources.
class ArmSource {
  public:
    enum class Kind { finite, infinite_prior, infinite_extension };

    static ArmSource finite(std::vector<RewardDistribution> arms,
                            std::uint64_t seed);
    static ArmSource infinite(MeanPrior prior, std::uint64_t seed);
    static ArmSource extension(std::vector<RewardDistribution> base,
                               std::uint64_t seed);

    Kind kind() const { return kind_; }
    std::uint64_t seed() const { return seed_; }

    // Finite / extension base set.
    std::size_t base_size() const { return base_.size(); }
    std::size_t active_base_count() const { return active_.size(); }
    const std::vector<Arm>& base_arms() const;
    // Extension-only deletion; subsequent draws never see this base arm.
    void remove_base(std::int64_t base_index);

    // Arm acquisition. Never touches the sample counter.
    Arm draw_arm();
    std::vector<Arm> draw_arms(std::int64_t count);
    // Synthetic arm with constant reward `value`; excluded from draws.
    Arm add_constant_arm(double value);

    // Reward sampling. Counter += 1 / += times.
    double sample_once(const Arm& arm);
    SampleStats sample_mean(const Arm& arm, std::int64_t times);

    std::uint64_t total_samples() const { return total_; }

    // Ground-truth access for scoring; not for algorithm use.
    double true_mean(const Arm& arm) const;

    // Uniform index from the source's own stream (tie-free fallback draws).
    std::uint64_t pick_index(std::uint64_t n) { return rng_.below(n); }

  private:
    struct ArmState {
        RewardDistribution dist;
        SplitMix64 rng;
        std::int64_t base;
    };

    ArmSource(Kind kind, std::uint64_t seed);
    Arm register_arm(const RewardDistribution& dist, std::int64_t base);
    const ArmState& state_of(const Arm& arm) const;

    Kind kind_;
    std::uint64_t seed_;
    SplitMix64 rng_;
    std::optional<MeanPrior> prior_;
    std::vector<RewardDistribution> base_;
    std::vector<std::uint32_t> active_;
    std::vector<ArmState> states_;
    std::vector<Arm> base_handles_;
    std::uint64_t total_ = 0;
};

// ---------- Ground truth ----------

// Known means for scoring: a closed-form prior, or a finite sorted list.
class GroundTruth {
  public:
    static GroundTruth of_prior(MeanPrior prior);
    static GroundTruth of_means(std::vector<double> means);

    bool finite() const { return !by_base_.empty(); }
    std::size_t size() const { return by_base_.size(); }

    // Top-rho quantile of the mean law, quantile(1 - rho).
    double lambda_rho(double rho) const;
    // m-th largest mean of a finite set, 1-indexed.
    double lambda_top(std::size_t m) const;

    double mean_of_base(std::int64_t base_index) const;

  private:
    GroundTruth() = default;
    std::optional<MeanPrior> prior_;
    std::vector<double> by_base_;
    std::vector<double> sorted_desc_;
};

// mean >= lambda_rho - eps
bool is_quantile_optimal(double mean, const GroundTruth& truth, double eps,
                         double rho);
// mean + eps >= lambda_[m]
bool is_top_m_optimal(double mean, const GroundTruth& truth, double eps,
                      std::size_t m);

}  // namespace topq
