#pragma once
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "topq/algorithms.hpp"
#include "topq/verify.hpp"

namespace topq {

// Raised for malformed experiment configs; the CLI maps it to exit code 1.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// ---------- Arm population specs ----------

// Compact, parseable description of the arm population. Canonical forms:
//   uniform01                      mean prior U([0,1])
//   point:0.7                      all means equal 0.7
//   twopoint:0.05:0.9:0.2          mean hi w.p. 0.05, lo otherwise
//   discrete:0.2@0.5;0.8@0.5       atoms value@weight
//   linear:100                     finite means i/n, i = 1..n
//   means:0.9;0.8;0.2;0.1          explicit finite mean list
// The same string is stored in the CSV `prior` column, so rows can be
// re-scored without the original config file.
class ArmSetSpec {
  public:
    static ArmSetSpec parse(const std::string& text);
    std::string str() const;

    bool finite() const;
    MeanPrior prior() const;               // infinite kinds only
    std::vector<double> mean_list() const; // finite kinds only
    std::size_t arm_count() const;         // finite kinds only
    GroundTruth truth() const;

    ArmSource make_source(std::uint64_t seed, bool extension_for_finite) const;

  private:
    std::string text_;
};

// ---------- Experiment configuration ----------

struct SweepAxis {
    std::string param;           // one of: k, rho, eps, delta, m
    std::vector<double> values;  // explicit list, exactly one axis per config
};

struct ExperimentConfig {
    std::string algorithm;  // al_q_ik, cb_al_q_ik, al_q_iu, cb_al_q_iu,
                            // al_q_fk, cb_al_q_fk, al_q_fu, cb_al_q_fu, iur
    ArmSetSpec arms;
    std::size_t k = 1;
    double rho = 0.1;
    std::size_t m = 0;
    double eps = 0.1;
    double delta = 0.1;
    std::optional<double> lambda;  // default: ground-truth threshold
    BoundKind bound = BoundKind::kl;
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    SweepAxis sweep;
    std::string out;

    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig from_json_file(const std::string& path);

    ProblemKind problem_kind() const;
    bool uses_bound() const;
    // ProblemSpec for a given sweep-point override applied.
    ExperimentConfig at(double sweep_value) const;
    ProblemSpec problem_spec() const;
    void validate() const;  // throws ConfigError with the offending field
};

// ---------- Trial records and CSV ----------

struct TrialRecord {
    std::string algorithm;
    std::size_t k = 1;
    double rho = 0.0;
    std::size_t m = 0;
    std::size_t n = 0;
    double eps = 0.0;
    double delta = 0.0;
    std::string bound;  // "hoeffding", "kl", or "none"
    std::string prior;  // ArmSetSpec canonical string
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    bool success = false;
    std::uint64_t wall_ms = 0;

    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

inline constexpr const char* kCsvHeader =
    "algorithm,k,rho,m,n,eps,delta,bound,prior,trial,seed,samples,success,"
    "wall_ms";

// Equality on everything except the measured wall time.
bool same_outcome(const TrialRecord& a, const TrialRecord& b);
bool same_outcome(const std::vector<TrialRecord>& a,
                  const std::vector<TrialRecord>& b);

std::string write_csv(const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_csv(std::istream& in);
std::vector<TrialRecord> read_csv_text(const std::string& text);

// ---------- Runners ----------

// One seeded trial at a fixed sweep point. The per-trial seed is derived
// from (master seed, sweep value bits, trial index), so reordering sweep
// values permutes rows without changing them, and parallel execution
// cannot affect results.
TrialRecord run_single_trial(const ExperimentConfig& point_cfg,
                             double sweep_value, std::size_t trial_index);

// Serial reference runner: canonical row order (sweep-major, trial-minor).
std::vector<TrialRecord> run_sweep_serial(const ExperimentConfig& cfg);
// OpenMP runner over (point, trial) pairs; identical records in identical
// order, jobs <= 0 means all hardware threads.
std::vector<TrialRecord> run_sweep_parallel(const ExperimentConfig& cfg,
                                            int jobs);
std::vector<TrialRecord> run_sweep(const ExperimentConfig& cfg, int jobs = 1);

// ---------- Aggregation ----------

struct PointSummary {
    double sweep_value = 0.0;
    std::size_t trials = 0;
    double mean_samples = 0.0;
    PacCheck pac;
};

std::vector<PointSummary> summarize(const ExperimentConfig& cfg,
                                    const std::vector<TrialRecord>& records);
std::string format_summary(const ExperimentConfig& cfg,
                           const std::vector<PointSummary>& rows);

struct CompareCell {
    double mean_samples = 0.0;
    double ratio = 1.0;  // vs the first config
    double ratio_lo = 1.0;
    double ratio_hi = 1.0;
};

struct ComparePoint {
    double sweep_value = 0.0;
    std::vector<CompareCell> cells;  // one per config
};

struct CompareReport {
    std::vector<std::string> labels;
    std::string axis;
    std::vector<ComparePoint> points;
};

// Paired comparison across configs sharing arms, spec, seed and sweep axis.
// Ratios of mean samples carry 95% paired-bootstrap intervals.
CompareReport compare_runs(const std::vector<ExperimentConfig>& configs,
                           int jobs = 1);
std::string format_compare(const CompareReport& report);

// ---------- Re-verification of stored rows ----------

struct VerifyReport {
    std::size_t rows = 0;
    std::size_t mismatched_rows = 0;  // replay disagreed with the stored row
    std::vector<std::string> point_labels;
    std::vector<PointSummary> points;  // Wilson check per >=30-row group
    bool pac_ok = true;
    bool replay_ok = true;
};

// Replays every row from its stored seed, checks samples/success match,
// and runs the Wilson PAC check per sweep point. Rows produced with a
// custom lambda cannot be replayed without it; pass the config's lambda.
VerifyReport verify_records(const std::vector<TrialRecord>& records,
                            std::optional<double> lambda_override = {});
std::string format_verify(const VerifyReport& report);

}  // namespace topq
