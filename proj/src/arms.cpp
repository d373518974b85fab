#include "topq/arms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace topq {

// ---------- RewardDistribution ----------

RewardDistribution RewardDistribution::bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("bernoulli: p must be in [0,1]");
    return RewardDistribution(Kind::bernoulli, p);
}

RewardDistribution RewardDistribution::constant(double v) {
    if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("constant: value must be in [0,1]");
    return RewardDistribution(Kind::constant, v);
}

double RewardDistribution::draw(SplitMix64& rng) const {
    switch (kind_) {
        case Kind::bernoulli: return rng.bernoulli(param_) ? 1.0 : 0.0;
        case Kind::constant: return param_;
    }
    return param_;
}

double RewardDistribution::draw_mean(SplitMix64& rng, std::int64_t times) const {
    if (times < 1) throw std::invalid_argument("draw_mean: times must be >= 1");
    switch (kind_) {
        case Kind::bernoulli: {
            if (param_ <= 0.0) return 0.0;
            if (param_ >= 1.0) return 1.0;
            std::binomial_distribution<std::int64_t> bin(times, param_);
            return static_cast<double>(bin(rng)) / static_cast<double>(times);
        }
        case Kind::constant: return param_;
    }
    return param_;
}

// ---------- MeanPrior ----------

namespace {
void check_mean_support(double v) {
    if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("prior: mean values must be in [0,1]");
}
}  // namespace

MeanPrior MeanPrior::uniform01() {
    MeanPrior p;
    p.kind_ = Kind::uniform01;
    return p;
}

MeanPrior MeanPrior::two_point(double rho, double hi, double lo) {
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("two_point: rho must be in (0,1)");
    check_mean_support(hi);
    check_mean_support(lo);
    if (!(lo < hi)) throw std::invalid_argument("two_point: need lo < hi");
    return discrete({lo, hi}, {1.0 - rho, rho});
}

MeanPrior MeanPrior::discrete(std::vector<double> values,
                              std::vector<double> weights) {
    if (values.empty() || values.size() != weights.size())
        throw std::invalid_argument("discrete: values/weights size mismatch");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    MeanPrior p;
    p.kind_ = Kind::discrete;
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("discrete: negative weight");
        total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("discrete: zero total weight");

    double cum = 0.0;
    for (std::size_t i : order) {
        check_mean_support(values[i]);
        if (weights[i] <= 0.0) continue;
        cum += weights[i] / total;
        if (!p.values_.empty() && p.values_.back() == values[i]) {
            p.cum_.back() = cum;  // merge duplicate atoms
        } else {
            p.values_.push_back(values[i]);
            p.cum_.push_back(cum);
        }
    }
    p.cum_.back() = 1.0;
    return p;
}

MeanPrior MeanPrior::point(double v) { return discrete({v}, {1.0}); }

MeanPrior MeanPrior::empirical(std::span<const double> means) {
    std::vector<double> v(means.begin(), means.end());
    return discrete(std::move(v), std::vector<double>(means.size(), 1.0));
}

double MeanPrior::sample(SplitMix64& rng) const {
    if (kind_ == Kind::uniform01) return rng.uniform01();
    const double u = rng.uniform01();
    // First atom whose cumulative mass exceeds u.
    auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    if (it == cum_.end()) --it;
    return values_[static_cast<std::size_t>(it - cum_.begin())];
}

double MeanPrior::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("quantile: p must be in (0,1)");
    if (kind_ == Kind::uniform01) return p;  // F(x) = x on [0,1]
    // sup{x : F(x) <= p} for a step CDF is the first atom with F(atom) > p:
    // every x strictly below it has F(x) <= p.
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (cum_[i] > p) return values_[i];
    }
    return values_.back();
}

// ---------- ArmSource ----------

ArmSource::ArmSource(Kind kind, std::uint64_t seed)
    : kind_(kind), seed_(seed), rng_(derive_seed(seed, {0})) {}

ArmSource ArmSource::finite(std::vector<RewardDistribution> arms,
                            std::uint64_t seed) {
    if (arms.empty()) throw std::invalid_argument("finite: empty arm set");
    ArmSource src(Kind::finite, seed);
    src.base_ = std::move(arms);
    for (std::size_t i = 0; i < src.base_.size(); ++i) {
        src.base_handles_.push_back(
            src.register_arm(src.base_[i], static_cast<std::int64_t>(i)));
    }
    return src;
}

ArmSource ArmSource::infinite(MeanPrior prior, std::uint64_t seed) {
    ArmSource src(Kind::infinite_prior, seed);
    src.prior_ = std::move(prior);
    return src;
}

ArmSource ArmSource::extension(std::vector<RewardDistribution> base,
                               std::uint64_t seed) {
    if (base.empty()) throw std::invalid_argument("extension: empty base set");
    ArmSource src(Kind::infinite_extension, seed);
    src.base_ = std::move(base);
    src.active_.resize(src.base_.size());
    std::iota(src.active_.begin(), src.active_.end(), std::uint32_t{0});
    return src;
}

const std::vector<Arm>& ArmSource::base_arms() const {
    if (kind_ != Kind::finite)
        throw std::logic_error("base_arms: only finite sources expose handles");
    return base_handles_;
}

void ArmSource::remove_base(std::int64_t base_index) {
    if (kind_ != Kind::infinite_extension)
        throw std::logic_error("remove_base: not an extension source");
    auto it = std::find(active_.begin(), active_.end(),
                        static_cast<std::uint32_t>(base_index));
    if (it == active_.end())
        throw std::invalid_argument("remove_base: index not active");
    active_.erase(it);
}

Arm ArmSource::register_arm(const RewardDistribution& dist, std::int64_t base) {
    const std::uint64_t id = states_.size();
    states_.push_back(ArmState{dist, SplitMix64(derive_seed(seed_, {1, id})), base});
    return Arm{id, base};
}

Arm ArmSource::draw_arm() {
    switch (kind_) {
        case Kind::infinite_prior: {
            const double mean = prior_->sample(rng_);
            return register_arm(RewardDistribution::bernoulli(mean), -1);
        }
        case Kind::infinite_extension: {
            if (active_.empty())
                throw std::logic_error("draw_arm: extension base exhausted");
            const std::uint32_t j =
                active_[rng_.below(active_.size())];  // uniform, with replacement
            return register_arm(base_[j], static_cast<std::int64_t>(j));
        }
        case Kind::finite:
            throw std::logic_error("draw_arm: finite sources expose base_arms()");
    }
    throw std::logic_error("draw_arm: bad source kind");
}

std::vector<Arm> ArmSource::draw_arms(std::int64_t count) {
    if (count < 1) throw std::invalid_argument("draw_arms: count must be >= 1");
    std::vector<Arm> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) out.push_back(draw_arm());
    return out;
}

Arm ArmSource::add_constant_arm(double value) {
    return register_arm(RewardDistribution::constant(value), -1);
}

const ArmSource::ArmState& ArmSource::state_of(const Arm& arm) const {
    if (arm.id >= states_.size())
        throw std::invalid_argument("unknown arm id");
    return states_[arm.id];
}

double ArmSource::sample_once(const Arm& arm) {
    if (arm.id >= states_.size()) throw std::invalid_argument("unknown arm id");
    auto& st = states_[arm.id];
    total_ += 1;
    return st.dist.draw(st.rng);
}

SampleStats ArmSource::sample_mean(const Arm& arm, std::int64_t times) {
    if (times < 1) throw std::invalid_argument("sample_mean: times must be >= 1");
    if (arm.id >= states_.size()) throw std::invalid_argument("unknown arm id");
    auto& st = states_[arm.id];
    total_ += static_cast<std::uint64_t>(times);
    return SampleStats{st.dist.draw_mean(st.rng, times), times};
}

double ArmSource::true_mean(const Arm& arm) const {
    return state_of(arm).dist.mean();
}

// ---------- GroundTruth ----------

GroundTruth GroundTruth::of_prior(MeanPrior prior) {
    GroundTruth t;
    t.prior_ = std::move(prior);
    return t;
}

GroundTruth GroundTruth::of_means(std::vector<double> means) {
    if (means.empty()) throw std::invalid_argument("of_means: empty mean list");
    GroundTruth t;
    t.by_base_ = means;
    std::sort(means.begin(), means.end(), std::greater<>());
    t.sorted_desc_ = std::move(means);
    t.prior_ = MeanPrior::empirical(t.by_base_);
    return t;
}

double GroundTruth::lambda_rho(double rho) const {
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("lambda_rho: rho must be in (0,1)");
    return prior_->quantile(1.0 - rho);
}

double GroundTruth::lambda_top(std::size_t m) const {
    if (!finite()) throw std::logic_error("lambda_top: needs a finite set");
    if (m < 1 || m > sorted_desc_.size())
        throw std::invalid_argument("lambda_top: m out of range");
    return sorted_desc_[m - 1];
}

double GroundTruth::mean_of_base(std::int64_t base_index) const {
    if (base_index < 0 ||
        static_cast<std::size_t>(base_index) >= by_base_.size())
        throw std::invalid_argument("mean_of_base: index out of range");
    return by_base_[static_cast<std::size_t>(base_index)];
}

bool is_quantile_optimal(double mean, const GroundTruth& truth, double eps,
                         double rho) {
    return mean >= truth.lambda_rho(rho) - eps;
}

bool is_top_m_optimal(double mean, const GroundTruth& truth, double eps,
                      std::size_t m) {
    return mean + eps >= truth.lambda_top(m);
}

}  // namespace topq
