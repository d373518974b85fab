#include "topq/bench.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace topq {

namespace {

// Shortest decimal form that parses back to the exact double; keeps CSV
// rows byte-stable across write/read cycles.
std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    if (std::strtod(buf, nullptr) != v)
        std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw ConfigError(what + ": bad number '" + s + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw ConfigError(what + ": bad integer '" + s + "'");
    return static_cast<std::uint64_t>(v);
}

}  // namespace

// ---------- ArmSetSpec ----------

ArmSetSpec ArmSetSpec::parse(const std::string& text) {
    ArmSetSpec spec;
    spec.text_ = text;
    // Validate eagerly so config errors surface with a field name.
    const std::vector<std::string> head = split(text, ':');
    const std::string& kind = head[0];
    if (kind == "uniform01") {
        if (head.size() != 1) throw ConfigError("arms: uniform01 takes no parameters");
    } else if (kind == "point") {
        if (head.size() != 2) throw ConfigError("arms: expected point:<mean>");
        spec.prior();
    } else if (kind == "twopoint") {
        if (head.size() != 4)
            throw ConfigError("arms: expected twopoint:<rho>:<hi>:<lo>");
        spec.prior();
    } else if (kind == "discrete") {
        if (head.size() != 2)
            throw ConfigError("arms: expected discrete:<v@w;v@w;...>");
        spec.prior();
    } else if (kind == "linear") {
        if (head.size() != 2 || spec.arm_count() < 1)
            throw ConfigError("arms: expected linear:<n>");
    } else if (kind == "means") {
        if (head.size() != 2 || spec.mean_list().empty())
            throw ConfigError("arms: expected means:<m1;m2;...>");
    } else {
        throw ConfigError("arms: unknown population kind '" + kind + "'");
    }
    return spec;
}

std::string ArmSetSpec::str() const { return text_.empty() ? "uniform01" : text_; }

bool ArmSetSpec::finite() const {
    const std::string t = str();
    return t.rfind("linear:", 0) == 0 || t.rfind("means:", 0) == 0;
}

MeanPrior ArmSetSpec::prior() const {
    const std::vector<std::string> head = split(str(), ':');
    const std::string& kind = head[0];
    if (kind == "uniform01") return MeanPrior::uniform01();
    if (kind == "point") return MeanPrior::point(parse_double(head[1], "arms"));
    if (kind == "twopoint")
        return MeanPrior::two_point(parse_double(head[1], "arms"),
                                    parse_double(head[2], "arms"),
                                    parse_double(head[3], "arms"));
    if (kind == "discrete") {
        std::vector<double> values, weights;
        for (const std::string& atom : split(head[1], ';')) {
            const std::vector<std::string> vw = split(atom, '@');
            if (vw.size() != 2)
                throw ConfigError("arms: discrete atom must be value@weight");
            values.push_back(parse_double(vw[0], "arms"));
            weights.push_back(parse_double(vw[1], "arms"));
        }
        return MeanPrior::discrete(std::move(values), std::move(weights));
    }
    throw ConfigError("arms: '" + str() + "' is not a prior population");
}

std::vector<double> ArmSetSpec::mean_list() const {
    const std::vector<std::string> head = split(str(), ':');
    if (head[0] == "linear") {
        const std::size_t n =
            static_cast<std::size_t>(parse_u64(head[1], "arms"));
        std::vector<double> means(n);
        for (std::size_t i = 0; i < n; ++i)
            means[i] = static_cast<double>(i + 1) / static_cast<double>(n);
        return means;
    }
    if (head[0] == "means") {
        std::vector<double> means;
        for (const std::string& v : split(head[1], ';'))
            means.push_back(parse_double(v, "arms"));
        return means;
    }
    throw ConfigError("arms: '" + str() + "' is not a finite population");
}

std::size_t ArmSetSpec::arm_count() const { return mean_list().size(); }

GroundTruth ArmSetSpec::truth() const {
    return finite() ? GroundTruth::of_means(mean_list())
                    : GroundTruth::of_prior(prior());
}

ArmSource ArmSetSpec::make_source(std::uint64_t seed,
                                  bool extension_for_finite) const {
    if (!finite()) return ArmSource::infinite(prior(), seed);
    std::vector<RewardDistribution> dists;
    for (double mu : mean_list())
        dists.push_back(RewardDistribution::bernoulli(mu));
    return extension_for_finite ? ArmSource::extension(std::move(dists), seed)
                                : ArmSource::finite(std::move(dists), seed);
}

// ---------- ExperimentConfig ----------

namespace {

struct AlgorithmInfo {
    ProblemKind kind;
    bool confidence_bound;
};

const std::map<std::string, AlgorithmInfo>& algorithm_table() {
    static const std::map<std::string, AlgorithmInfo> table = {
        {"al_q_ik", {ProblemKind::q_ik, false}},
        {"cb_al_q_ik", {ProblemKind::q_ik, true}},
        {"al_q_iu", {ProblemKind::q_iu, false}},
        {"cb_al_q_iu", {ProblemKind::q_iu, true}},
        {"al_q_fk", {ProblemKind::q_fk, false}},
        {"cb_al_q_fk", {ProblemKind::q_fk, true}},
        {"al_q_fu", {ProblemKind::q_fu, false}},
        {"cb_al_q_fu", {ProblemKind::q_fu, true}},
        {"iur", {ProblemKind::q_ik, false}},
    };
    return table;
}

const AlgorithmInfo& algorithm_info(const std::string& name) {
    auto it = algorithm_table().find(name);
    if (it == algorithm_table().end())
        throw ConfigError("algorithm: unknown name '" + name + "'");
    return it->second;
}

}  // namespace

ProblemKind ExperimentConfig::problem_kind() const {
    return algorithm_info(algorithm).kind;
}

bool ExperimentConfig::uses_bound() const {
    return algorithm_info(algorithm).confidence_bound;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: not valid JSON: ") + e.what());
    }
    static const std::set<std::string> known = {
        "algorithm", "arms", "k",     "rho",   "m",     "eps",
        "delta",     "lambda", "bound", "trials", "seed", "sweep", "out"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key()))
            throw ConfigError("config field '" + it.key() + "': unknown field");
    }

    ExperimentConfig cfg;
    try {
        cfg.algorithm = j.at("algorithm").get<std::string>();
        cfg.arms = ArmSetSpec::parse(j.at("arms").get<std::string>());
        if (j.contains("k")) cfg.k = j["k"].get<std::size_t>();
        if (j.contains("rho")) cfg.rho = j["rho"].get<double>();
        if (j.contains("m")) cfg.m = j["m"].get<std::size_t>();
        if (j.contains("eps")) cfg.eps = j["eps"].get<double>();
        if (j.contains("delta")) cfg.delta = j["delta"].get<double>();
        if (j.contains("lambda")) cfg.lambda = j["lambda"].get<double>();
        if (j.contains("bound"))
            cfg.bound = bound_kind_from_string(j["bound"].get<std::string>());
        if (j.contains("trials")) cfg.trials = j["trials"].get<std::size_t>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("out")) cfg.out = j["out"].get<std::string>();
        if (j.contains("sweep")) {
            cfg.sweep.param = j["sweep"].at("param").get<std::string>();
            cfg.sweep.values =
                j["sweep"].at("values").get<std::vector<double>>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config field ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

ExperimentConfig ExperimentConfig::at(double sweep_value) const {
    ExperimentConfig point = *this;
    const std::string& p = sweep.param;
    if (p == "k") point.k = static_cast<std::size_t>(sweep_value);
    else if (p == "rho") point.rho = sweep_value;
    else if (p == "eps") point.eps = sweep_value;
    else if (p == "delta") point.delta = sweep_value;
    else if (p == "m") point.m = static_cast<std::size_t>(sweep_value);
    else throw ConfigError("sweep.param: unknown parameter '" + p + "'");
    return point;
}

ProblemSpec ExperimentConfig::problem_spec() const {
    ProblemSpec spec;
    spec.kind = problem_kind();
    spec.k = k;
    spec.eps = eps;
    spec.delta = delta;
    spec.bound = bound;
    const bool finite_kind =
        spec.kind == ProblemKind::q_fk || spec.kind == ProblemKind::q_fu;
    if (finite_kind) {
        if (!arms.finite())
            throw ConfigError("arms: finite-set algorithm needs linear:/means:");
        spec.m = m;
        spec.n = arms.arm_count();
        spec.rho = static_cast<double>(m) / static_cast<double>(spec.n);
    } else {
        spec.rho = rho;
    }
    const bool known =
        spec.kind == ProblemKind::q_ik || spec.kind == ProblemKind::q_fk;
    if (known) {
        // Default threshold: the exact ground-truth quantile.
        if (lambda) spec.lambda = *lambda;
        else if (finite_kind) spec.lambda = arms.truth().lambda_top(m);
        else spec.lambda = arms.truth().lambda_rho(rho);
    } else if (lambda) {
        spec.lambda = *lambda;  // validate() rejects it below
    }
    return spec;
}

void ExperimentConfig::validate() const {
    algorithm_info(algorithm);
    if (trials < 1) throw ConfigError("trials: must be >= 1");
    if (sweep.param.empty()) throw ConfigError("sweep: missing sweep axis");
    if (sweep.values.empty()) throw ConfigError("sweep: empty sweep axis");
    static const std::set<std::string> axes = {"k", "rho", "eps", "delta", "m"};
    if (!axes.count(sweep.param))
        throw ConfigError("sweep.param: unknown parameter '" + sweep.param + "'");
    for (double v : sweep.values) {
        const ExperimentConfig point = at(v);
        try {
            point.problem_spec().validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError("config at " + sweep.param + "=" + fmt_double(v) +
                              ": " + e.what());
        }
    }
}

// ---------- CSV ----------

bool same_outcome(const TrialRecord& a, const TrialRecord& b) {
    TrialRecord x = a, y = b;
    x.wall_ms = 0;
    y.wall_ms = 0;
    return x == y;
}

bool same_outcome(const std::vector<TrialRecord>& a,
                  const std::vector<TrialRecord>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!same_outcome(a[i], b[i])) return false;
    return true;
}

std::string write_csv(const std::vector<TrialRecord>& records) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const TrialRecord& r : records) {
        out << r.algorithm << ',' << r.k << ',' << fmt_double(r.rho) << ','
            << r.m << ',' << r.n << ',' << fmt_double(r.eps) << ','
            << fmt_double(r.delta) << ',' << r.bound << ',' << r.prior << ','
            << r.trial << ',' << r.seed << ',' << r.samples << ','
            << (r.success ? 1 : 0) << ',' << r.wall_ms << '\n';
    }
    return out.str();
}

std::vector<TrialRecord> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw ConfigError("csv: missing or unexpected header");
    std::vector<TrialRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != 14) throw ConfigError("csv: expected 14 fields");
        TrialRecord r;
        r.algorithm = f[0];
        r.k = static_cast<std::size_t>(parse_u64(f[1], "csv k"));
        r.rho = parse_double(f[2], "csv rho");
        r.m = static_cast<std::size_t>(parse_u64(f[3], "csv m"));
        r.n = static_cast<std::size_t>(parse_u64(f[4], "csv n"));
        r.eps = parse_double(f[5], "csv eps");
        r.delta = parse_double(f[6], "csv delta");
        r.bound = f[7];
        r.prior = f[8];
        r.trial = static_cast<std::size_t>(parse_u64(f[9], "csv trial"));
        r.seed = parse_u64(f[10], "csv seed");
        r.samples = parse_u64(f[11], "csv samples");
        r.success = parse_u64(f[12], "csv success") != 0;
        r.wall_ms = parse_u64(f[13], "csv wall_ms");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<TrialRecord> read_csv_text(const std::string& text) {
    std::istringstream in(text);
    return read_csv(in);
}

// ---------- Runners ----------

namespace {

TrialRecord run_trial_seeded(const ExperimentConfig& pc,
                             std::uint64_t trial_seed,
                             std::size_t trial_index) {
    const ProblemSpec spec = pc.problem_spec();
    const GroundTruth truth = pc.arms.truth();
    const bool finite_kind =
        spec.kind == ProblemKind::q_fk || spec.kind == ProblemKind::q_fu;
    ArmSource src = pc.arms.make_source(trial_seed, /*extension=*/true);
    const ConfidenceBound bound{pc.bound};
    const ConfidenceBound* cb = pc.uses_bound() ? &bound : nullptr;

    const auto t0 = std::chrono::steady_clock::now();
    QuantileResult result;
    if (pc.algorithm == "al_q_ik")
        result = al_q_ik(src, spec.k, spec.rho, spec.eps, spec.delta,
                         *spec.lambda);
    else if (pc.algorithm == "cb_al_q_ik")
        result = cb_al_q_ik(src, spec.k, spec.rho, spec.eps, spec.delta,
                            *spec.lambda, bound);
    else if (pc.algorithm == "iur")
        result = iur_baseline(src, spec.k, spec.rho, spec.eps, spec.delta,
                              *spec.lambda);
    else if (pc.algorithm == "al_q_iu" || pc.algorithm == "cb_al_q_iu")
        result = al_q_iu(src, spec.k, spec.rho, spec.eps, spec.delta, cb);
    else if (pc.algorithm == "al_q_fk" || pc.algorithm == "cb_al_q_fk")
        result = al_q_fk(src, spec.m, spec.k, spec.eps, spec.delta,
                         *spec.lambda, cb);
    else if (pc.algorithm == "al_q_fu" || pc.algorithm == "cb_al_q_fu")
        result = al_q_fu(src, spec.m, spec.k, spec.eps, spec.delta, cb);
    else
        throw ConfigError("algorithm: unknown name '" + pc.algorithm + "'");
    const auto t1 = std::chrono::steady_clock::now();

    if (result.total_samples != src.total_samples())
        throw std::logic_error(
            pc.algorithm + ": self-reported samples disagree with the source counter");

    std::vector<double> means;
    means.reserve(result.arms.size());
    for (const Arm& a : result.arms) means.push_back(src.true_mean(a));
    const TrialVerdict verdict = score(result, spec, truth, means);

    TrialRecord rec;
    rec.algorithm = pc.algorithm;
    rec.k = spec.k;
    rec.rho = spec.rho;
    rec.m = finite_kind ? spec.m : 0;
    rec.n = finite_kind ? spec.n : 0;
    rec.eps = spec.eps;
    rec.delta = spec.delta;
    rec.bound = pc.uses_bound() ? to_string(pc.bound) : "none";
    rec.prior = pc.arms.str();
    rec.trial = trial_index;
    rec.seed = trial_seed;
    rec.samples = result.total_samples;
    rec.success = verdict.success;
    rec.wall_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count());
    return rec;
}

std::uint64_t trial_seed_for(const ExperimentConfig& cfg, double sweep_value,
                             std::size_t trial_index) {
    // Keyed by the sweep value itself (not its list position): permuting
    // the config's value order permutes rows without changing any of them.
    return derive_seed(cfg.seed,
                       {std::bit_cast<std::uint64_t>(sweep_value),
                        static_cast<std::uint64_t>(trial_index)});
}

}  // namespace

TrialRecord run_single_trial(const ExperimentConfig& cfg, double sweep_value,
                             std::size_t trial_index) {
    return run_trial_seeded(cfg.at(sweep_value),
                            trial_seed_for(cfg, sweep_value, trial_index),
                            trial_index);
}

std::vector<TrialRecord> run_sweep_serial(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<TrialRecord> records;
    records.reserve(cfg.sweep.values.size() * cfg.trials);
    for (double value : cfg.sweep.values)
        for (std::size_t t = 0; t < cfg.trials; ++t)
            records.push_back(run_single_trial(cfg, value, t));
    return records;
}

std::vector<TrialRecord> run_sweep_parallel(const ExperimentConfig& cfg,
                                            int jobs) {
    cfg.validate();
    const std::size_t points = cfg.sweep.values.size();
    const std::size_t total = points * cfg.trials;
    std::vector<TrialRecord> records(total);
#ifdef _OPENMP
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
    std::exception_ptr failure;
#pragma omp parallel for num_threads(threads) schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(total); ++i) {
        try {
            const std::size_t point = static_cast<std::size_t>(i) / cfg.trials;
            const std::size_t trial = static_cast<std::size_t>(i) % cfg.trials;
            records[static_cast<std::size_t>(i)] =
                run_single_trial(cfg, cfg.sweep.values[point], trial);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
#else
    (void)jobs;
    for (std::size_t i = 0; i < total; ++i) {
        const std::size_t point = i / cfg.trials;
        const std::size_t trial = i % cfg.trials;
        records[i] = run_single_trial(cfg, cfg.sweep.values[point], trial);
    }
#endif
    return records;
}

std::vector<TrialRecord> run_sweep(const ExperimentConfig& cfg, int jobs) {
    return jobs == 1 ? run_sweep_serial(cfg) : run_sweep_parallel(cfg, jobs);
}

// ---------- Aggregation ----------

std::vector<PointSummary> summarize(const ExperimentConfig& cfg,
                                    const std::vector<TrialRecord>& records) {
    const std::size_t points = cfg.sweep.values.size();
    if (records.size() != points * cfg.trials)
        throw std::invalid_argument("summarize: record count mismatch");
    std::vector<PointSummary> out;
    out.reserve(points);
    for (std::size_t p = 0; p < points; ++p) {
        PointSummary s;
        s.sweep_value = cfg.sweep.values[p];
        s.trials = cfg.trials;
        std::size_t failures = 0;
        double sum = 0.0;
        double delta_at_point = cfg.delta;
        for (std::size_t t = 0; t < cfg.trials; ++t) {
            const TrialRecord& r = records[p * cfg.trials + t];
            sum += static_cast<double>(r.samples);
            failures += r.success ? 0 : 1;
            delta_at_point = r.delta;
        }
        s.mean_samples = sum / static_cast<double>(cfg.trials);
        if (cfg.trials >= 30)
            s.pac = failure_rate_counts(failures, cfg.trials, delta_at_point);
        else
            s.pac = PacCheck{cfg.trials, failures,
                             static_cast<double>(failures) / cfg.trials, 0.0,
                             1.0, true};
        out.push_back(s);
    }
    return out;
}

std::string format_summary(const ExperimentConfig& cfg,
                           const std::vector<PointSummary>& rows) {
    std::ostringstream out;
    out << "algorithm " << cfg.algorithm << ", arms " << cfg.arms.str()
        << ", sweep " << cfg.sweep.param << "\n";
    char line[160];
    std::snprintf(line, sizeof line, "%12s %8s %14s %10s %20s %s\n",
                  cfg.sweep.param.c_str(), "trials", "mean_samples",
                  "fail_rate", "wilson95", "pac");
    out << line;
    for (const PointSummary& s : rows) {
        std::snprintf(line, sizeof line,
                      "%12g %8zu %14.1f %10.4f [%7.4f, %7.4f] %s\n",
                      s.sweep_value, s.trials, s.mean_samples, s.pac.rate,
                      s.pac.wilson_low, s.pac.wilson_high,
                      s.pac.pass ? "pass" : "FAIL");
        out << line;
    }
    return out.str();
}

namespace {

void require_comparable(const std::vector<ExperimentConfig>& configs) {
    if (configs.size() < 2)
        throw ConfigError("compare: need at least two configs");
    const ExperimentConfig& base = configs.front();
    for (const ExperimentConfig& c : configs) {
        if (c.sweep.param != base.sweep.param ||
            c.sweep.values != base.sweep.values)
            throw ConfigError("compare: mismatched sweep axes");
        if (c.arms.str() != base.arms.str())
            throw ConfigError("compare: configs must share the arm population");
        if (c.seed != base.seed || c.trials != base.trials)
            throw ConfigError("compare: configs must share seed and trials");
        if (c.k != base.k || c.rho != base.rho || c.m != base.m ||
            c.eps != base.eps || c.delta != base.delta)
            throw ConfigError("compare: configs must share the problem spec");
    }
}

}  // namespace

CompareReport compare_runs(const std::vector<ExperimentConfig>& configs,
                           int jobs) {
    require_comparable(configs);
    const ExperimentConfig& base = configs.front();
    const std::size_t points = base.sweep.values.size();
    const std::size_t trials = base.trials;

    std::vector<std::vector<TrialRecord>> runs;
    runs.reserve(configs.size());
    for (const ExperimentConfig& c : configs) runs.push_back(run_sweep(c, jobs));

    CompareReport report;
    report.axis = base.sweep.param;
    for (const ExperimentConfig& c : configs)
        report.labels.push_back(c.algorithm + "/" +
                                (c.uses_bound() ? to_string(c.bound) : "none"));

    constexpr int kResamples = 1000;
    for (std::size_t p = 0; p < points; ++p) {
        ComparePoint point;
        point.sweep_value = base.sweep.values[p];
        std::vector<std::vector<double>> samples(configs.size());
        for (std::size_t c = 0; c < configs.size(); ++c) {
            samples[c].reserve(trials);
            for (std::size_t t = 0; t < trials; ++t)
                samples[c].push_back(
                    static_cast<double>(runs[c][p * trials + t].samples));
        }
        auto mean_of = [&](const std::vector<double>& v,
                           const std::vector<std::size_t>* idx) {
            double sum = 0.0;
            if (idx)
                for (std::size_t i : *idx) sum += v[i];
            else
                for (double x : v) sum += x;
            return sum / static_cast<double>(trials);
        };

        SplitMix64 boot(derive_seed(base.seed, {0xb007u, p}));
        for (std::size_t c = 0; c < configs.size(); ++c) {
            CompareCell cell;
            cell.mean_samples = mean_of(samples[c], nullptr);
            if (c == 0) {
                point.cells.push_back(cell);
                continue;
            }
            cell.ratio = cell.mean_samples / mean_of(samples[0], nullptr);
            // Paired bootstrap: resample trial indices, shared across the
            // two runs, so common-seed noise cancels.
            std::vector<double> ratios(kResamples);
            std::vector<std::size_t> idx(trials);
            for (int b = 0; b < kResamples; ++b) {
                for (std::size_t t = 0; t < trials; ++t)
                    idx[t] = static_cast<std::size_t>(boot.below(trials));
                ratios[static_cast<std::size_t>(b)] =
                    mean_of(samples[c], &idx) / mean_of(samples[0], &idx);
            }
            std::sort(ratios.begin(), ratios.end());
            cell.ratio_lo = ratios[static_cast<std::size_t>(0.025 * kResamples)];
            cell.ratio_hi = ratios[static_cast<std::size_t>(0.975 * kResamples)];
            point.cells.push_back(cell);
        }
        report.points.push_back(std::move(point));
    }
    return report;
}

std::string format_compare(const CompareReport& report) {
    std::ostringstream out;
    out << "paired comparison on axis '" << report.axis << "' (baseline "
        << report.labels.front() << ")\n";
    char line[200];
    for (const ComparePoint& p : report.points) {
        out << report.axis << " = " << fmt_double(p.sweep_value) << "\n";
        for (std::size_t c = 0; c < p.cells.size(); ++c) {
            const CompareCell& cell = p.cells[c];
            if (c == 0) {
                std::snprintf(line, sizeof line, "  %-24s mean_samples %14.1f\n",
                              report.labels[c].c_str(), cell.mean_samples);
            } else {
                std::snprintf(
                    line, sizeof line,
                    "  %-24s mean_samples %14.1f ratio %.4f [%.4f, %.4f]\n",
                    report.labels[c].c_str(), cell.mean_samples, cell.ratio,
                    cell.ratio_lo, cell.ratio_hi);
            }
            out << line;
        }
    }
    return out.str();
}

// ---------- Replay verification ----------

VerifyReport verify_records(const std::vector<TrialRecord>& records,
                            std::optional<double> lambda_override) {
    VerifyReport report;
    report.rows = records.size();

    std::vector<std::string> order;
    std::map<std::string, std::pair<std::size_t, std::size_t>> groups;
    std::map<std::string, double> group_delta;

    for (const TrialRecord& r : records) {
        ExperimentConfig pc;
        pc.algorithm = r.algorithm;
        pc.arms = ArmSetSpec::parse(r.prior);
        pc.k = r.k;
        pc.rho = r.rho;
        pc.m = r.m;
        pc.eps = r.eps;
        pc.delta = r.delta;
        pc.lambda = lambda_override;
        if (r.bound != "none") pc.bound = bound_kind_from_string(r.bound);
        const TrialRecord replay = run_trial_seeded(pc, r.seed, r.trial);

        const bool row_ok =
            replay.samples == r.samples && replay.success == r.success;
        if (!row_ok) ++report.mismatched_rows;

        std::ostringstream key;
        key << r.algorithm << " k=" << r.k << " rho=" << fmt_double(r.rho)
            << " m=" << r.m << " n=" << r.n << " eps=" << fmt_double(r.eps)
            << " delta=" << fmt_double(r.delta) << " " << r.bound << " "
            << r.prior;
        auto [it, fresh] = groups.try_emplace(key.str(), 0, 0);
        if (fresh) order.push_back(key.str());
        it->second.first += 1;                          // rows
        it->second.second += replay.success ? 0 : 1;    // failures, re-scored
        group_delta[key.str()] = r.delta;
    }

    for (const std::string& key : order) {
        const auto [rows, failures] = groups[key];
        if (rows < 30) continue;  // Wilson check needs a real sample
        PointSummary s;
        s.sweep_value = 0.0;
        s.trials = rows;
        s.pac = failure_rate_counts(failures, rows, group_delta[key]);
        report.point_labels.push_back(key);
        report.points.push_back(s);
        if (!s.pac.pass) report.pac_ok = false;
    }
    report.replay_ok = report.mismatched_rows == 0;
    return report;
}

std::string format_verify(const VerifyReport& report) {
    std::ostringstream out;
    out << "rows " << report.rows << ", replay mismatches "
        << report.mismatched_rows << (report.replay_ok ? " (ok)" : " (FAIL)")
        << "\n";
    for (std::size_t i = 0; i < report.points.size(); ++i) {
        const PacCheck& pac = report.points[i].pac;
        char line[120];
        std::snprintf(line, sizeof line,
                      "  fail %zu/%zu wilson [%0.4f, %0.4f] vs delta: %s  ",
                      pac.failures, pac.trials, pac.wilson_low, pac.wilson_high,
                      pac.pass ? "pass" : "FAIL");
        out << line << report.point_labels[i] << "\n";
    }
    return out.str();
}

}  // namespace topq
