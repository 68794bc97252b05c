#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <nlohmann/json.hpp>
#include <string>
#include <thread>
#include <vector>

#include "stoq/analysis.hpp"
#include "stoq/baselines.hpp"
#include "stoq/compiler.hpp"
#include "stoq/random_targets.hpp"

namespace stoq {

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentConfig {
    std::string preset;            // built-in Hamiltonian name
    std::string hamiltonian_file;  // overrides preset when set
    int qubits = 3;                // for random-target experiments
    int iterations = 10000;
    int runs = 16;
    std::uint64_t seed = 0;
    double delta_beta = 0.03;
    double p_append = 0.5;
    long max_length = 64;  // <= 0 disables the cap
    double epsilon = 0.2;
    double tau = 0.5;
    int trotter_steps = 10;
    int qdrift_reps = 1000;
    int grid_points = 1001;
    int jobs = 1;
    std::string out_dir = "out";
    std::vector<double> depths = {1, 5, 10, 20, 40};
    std::vector<double> sweep_delta_beta = {0.01, 0.1};
    std::vector<double> sweep_p_append = {0.2, 0.8};

    void validate() const {
        if (runs < 1) throw std::invalid_argument("config: runs must be >= 1");
        if (iterations < 1)
            throw std::invalid_argument("config: iterations must be >= 1");
        if (jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
        if (grid_points < 2)
            throw std::invalid_argument("config: grid-points must be >= 2");
    }

    Hamiltonian resolve_hamiltonian() const {
        if (!hamiltonian_file.empty()) {
            std::ifstream in(hamiltonian_file);
            if (!in)
                throw std::invalid_argument("config: cannot open Hamiltonian file " +
                                            hamiltonian_file);
            return parse_hamiltonian(in);
        }
        if (preset.empty())
            throw std::invalid_argument("config: no Hamiltonian preset or file given");
        return ising_preset(preset);
    }

    StoqConfig stoq_config(std::uint64_t run_seed) const {
        StoqConfig c;
        c.num_iterations = iterations;
        c.delta_beta = delta_beta;
        c.p_append = p_append;
        if (max_length > 0)
            c.max_length = static_cast<size_t>(max_length);
        else
            c.max_length.reset();
        c.seed = run_seed;
        return c;
    }

    nlohmann::json to_json() const {
        return {{"preset", preset},
                {"hamiltonian_file", hamiltonian_file},
                {"qubits", qubits},
                {"iterations", iterations},
                {"runs", runs},
                {"seed", seed},
                {"delta_beta", delta_beta},
                {"p_append", p_append},
                {"max_length", max_length},
                {"epsilon", epsilon},
                {"tau", tau},
                {"trotter_steps", trotter_steps},
                {"qdrift_reps", qdrift_reps},
                {"grid_points", grid_points},
                {"jobs", jobs},
                {"out_dir", out_dir},
                {"depths", depths},
                {"sweep_delta_beta", sweep_delta_beta},
                {"sweep_p_append", sweep_p_append}};
    }
};

struct RunRecord {
    std::uint64_t seed = 0;
    double final_cost = 0.0;
    double wall_seconds = 0.0;
    std::vector<std::string> artifacts;
};

/// Runs fn(run_index) for each run, spreading work across `jobs` threads.
/// Run i always uses seed base_seed + i regardless of scheduling.
inline void for_each_run(int runs, int jobs,
                         const std::function<void(int)>& fn) {
    if (jobs <= 1) {
        for (int i = 0; i < runs; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex err_mutex;
    const int workers = std::min(jobs, runs);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= runs) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / v.size();
}

/// Standard error of the mean, from the unbiased sample standard deviation.
inline double stderr_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / (v.size() - 1)) / std::sqrt(double(v.size()));
}

inline void write_trace_csv(std::ostream& out, const CompilationTrace& trace) {
    out << "iteration,beta,cost,accepted,seq_length\n";
    for (const auto& r : trace.records)
        out << r.iteration << ',' << format_fixed6(r.beta) << ','
            << format_fixed6(r.cost) << ',' << (r.accepted ? 1 : 0) << ','
            << r.seq_length << '\n';
}

inline nlohmann::json manifest_json(const ExperimentConfig& config,
                                    const std::vector<RunRecord>& runs) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["config"] = config.to_json();
    j["runs"] = nlohmann::json::array();
    for (size_t i = 0; i < runs.size(); ++i)
        j["runs"].push_back({{"run", i},
                             {"seed", runs[i].seed},
                             {"final_cost", runs[i].final_cost},
                             {"wall_seconds", runs[i].wall_seconds},
                             {"artifacts", runs[i].artifacts}});
    return j;
}

namespace detail {

inline std::filesystem::path ensure_out_dir(const ExperimentConfig& config) {
    std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

struct TimedRun {
    CompilationResult result;
    double wall_seconds = 0.0;
};

inline TimedRun timed_compile(const ComplexMatrix& target,
                              std::shared_ptr<const GateAlphabet> alphabet,
                              const StoqConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    CompilationResult result = compile(target, alphabet, config);
    const auto t1 = std::chrono::steady_clock::now();
    return {std::move(result),
            std::chrono::duration<double>(t1 - t0).count()};
}

inline void write_mean_curve(const std::filesystem::path& path,
                             const std::vector<CompilationTrace>& traces) {
    size_t max_len = 0;
    for (const auto& t : traces) max_len = std::max(max_len, t.records.size());
    std::ofstream out(path);
    out << "iteration,mean_cost\n";
    for (size_t i = 0; i < max_len; ++i) {
        double sum = 0.0;
        int count = 0;
        for (const auto& t : traces)
            if (i < t.records.size()) {
                sum += t.records[i].cost;
                ++count;
            }
        out << (i + 1) << ',' << format_fixed6(sum / count) << '\n';
    }
}

}  // namespace detail

struct CurveSummary {
    std::vector<double> final_costs;
    double mean_final_cost = 0.0;
};

/// STOQ cost curves against a time-evolution target (one trace CSV per run
/// plus a mean-curve CSV and summary JSON).
inline CurveSummary run_cost_curves(const ExperimentConfig& config) {
    config.validate();
    const auto dir = detail::ensure_out_dir(config);
    const Hamiltonian ham = config.resolve_hamiltonian();
    const ComplexMatrix target = ham.time_evolution(config.tau);
    auto alphabet = std::make_shared<const GateAlphabet>(
        hamiltonian_term_alphabet(ham, config.epsilon, config.tau));

    std::vector<RunRecord> records(config.runs);
    std::vector<CompilationTrace> traces(config.runs);
    for_each_run(config.runs, config.jobs, [&](int i) {
        const std::uint64_t run_seed = config.seed + i;
        auto run = detail::timed_compile(target, alphabet,
                                         config.stoq_config(run_seed));
        const auto trace_path = dir / ("trace_run" + std::to_string(i) + ".csv");
        std::ofstream out(trace_path);
        write_trace_csv(out, run.result.trace);
        const auto seq_path = dir / ("sequence_run" + std::to_string(i) + ".txt");
        std::ofstream seq_out(seq_path);
        write_sequence(seq_out, run.result.sequence.instances);
        records[i] = {run_seed, run.result.trace.final_cost, run.wall_seconds,
                      {trace_path.string(), seq_path.string()}};
        traces[i] = std::move(run.result.trace);
    });

    detail::write_mean_curve(dir / "mean_curve.csv", traces);

    CurveSummary summary;
    for (const auto& r : records) summary.final_costs.push_back(r.final_cost);
    summary.mean_final_cost = mean_of(summary.final_costs);

    nlohmann::json j = manifest_json(config, records);
    j["mean_final_cost"] = summary.mean_final_cost;
    std::ofstream(dir / "summary.json") << j.dump(2) << '\n';
    return summary;
}

/// STOQ cost curves against per-run Haar-random targets.
inline CurveSummary run_random_unitary(const ExperimentConfig& config) {
    config.validate();
    const auto dir = detail::ensure_out_dir(config);
    const int n = config.qubits;
    auto alphabet =
        std::make_shared<const GateAlphabet>(universal_alphabet(n));

    std::vector<RunRecord> records(config.runs);
    std::vector<CompilationTrace> traces(config.runs);
    for_each_run(config.runs, config.jobs, [&](int i) {
        const std::uint64_t run_seed = config.seed + i;
        std::mt19937_64 target_rng(run_seed);
        const ComplexMatrix target = haar_random_unitary(1 << n, target_rng);
        auto run = detail::timed_compile(target, alphabet,
                                         config.stoq_config(run_seed));
        const auto trace_path = dir / ("trace_run" + std::to_string(i) + ".csv");
        std::ofstream out(trace_path);
        write_trace_csv(out, run.result.trace);
        records[i] = {run_seed, run.result.trace.final_cost, run.wall_seconds,
                      {trace_path.string()}};
        traces[i] = std::move(run.result.trace);
    });

    detail::write_mean_curve(dir / "mean_curve.csv", traces);

    CurveSummary summary;
    for (const auto& r : records) summary.final_costs.push_back(r.final_cost);
    summary.mean_final_cost = mean_of(summary.final_costs);

    nlohmann::json j = manifest_json(config, records);
    j["mean_final_cost"] = summary.mean_final_cost;
    std::ofstream(dir / "summary.json") << j.dump(2) << '\n';
    return summary;
}

struct PathComparisonSummary {
    CompilationStats stoq;     // averaged over runs
    CompilationStats trotter;
    CompilationStats qdrift;
};

/// Path profiles and Table-style stats for STOQ vs. the randomized-Trotter
/// and QDRIFT baselines on a time-evolution target.
inline PathComparisonSummary run_path_comparison(
    const ExperimentConfig& config) {
    config.validate();
    const auto dir = detail::ensure_out_dir(config);
    const Hamiltonian ham = config.resolve_hamiltonian();
    const ComplexMatrix target = ham.time_evolution(config.tau);
    auto alphabet = std::make_shared<const GateAlphabet>(
        hamiltonian_term_alphabet(ham, config.epsilon, config.tau));

    std::vector<RunRecord> records(config.runs);
    std::vector<CompilationStats> stoq_stats(config.runs);
    for_each_run(config.runs, config.jobs, [&](int i) {
        const std::uint64_t run_seed = config.seed + i;
        auto run = detail::timed_compile(target, alphabet,
                                         config.stoq_config(run_seed));
        PathProfile profile = path_profile(run.result.sequence, ham,
                                           config.tau, config.grid_points,
                                           "stoq");
        const auto profile_path =
            dir / ("profile_stoq_run" + std::to_string(i) + ".csv");
        std::ofstream pout(profile_path);
        write_profile_csv(pout, profile);
        stoq_stats[i] = compilation_stats(run.result.sequence, ham, config.tau,
                                          target, config.grid_points, "stoq");
        records[i] = {run_seed, run.result.trace.final_cost, run.wall_seconds,
                      {profile_path.string()}};
    });

    std::mt19937_64 trotter_rng(config.seed);
    CompiledSequence trotter_seq =
        randomized_trotter(ham, config.tau, config.trotter_steps, trotter_rng);
    std::mt19937_64 qdrift_rng(config.seed);
    CompiledSequence qdrift_seq =
        qdrift(ham, config.tau, config.qdrift_reps, qdrift_rng);

    PathComparisonSummary summary;
    summary.trotter = compilation_stats(trotter_seq, ham, config.tau, target,
                                        config.grid_points, "trotter");
    summary.qdrift = compilation_stats(qdrift_seq, ham, config.tau, target,
                                       config.grid_points, "qdrift");
    {
        std::ofstream out(dir / "profile_trotter.csv");
        write_profile_csv(out, path_profile(trotter_seq, ham, config.tau,
                                            config.grid_points, "trotter"));
    }
    {
        std::ofstream out(dir / "profile_qdrift.csv");
        write_profile_csv(out, path_profile(qdrift_seq, ham, config.tau,
                                            config.grid_points, "qdrift"));
    }

    summary.stoq.method = "stoq";
    if (config.runs > 0) {
        for (const auto& s : stoq_stats) {
            summary.stoq.time += s.time;
            summary.stoq.mean_d += s.mean_d;
            summary.stoq.max_d += s.max_d;
            summary.stoq.cost += s.cost;
        }
        summary.stoq.time /= config.runs;
        summary.stoq.mean_d /= config.runs;
        summary.stoq.max_d /= config.runs;
        summary.stoq.cost /= config.runs;
        summary.stoq.has_path = true;
    }

    std::ofstream stats_out(dir / "stats.csv");
    write_stats_csv_header(stats_out);
    // The ideal evolution runs for tau with no compiled path.
    stats_out << "ideal," << format_fixed6(config.tau) << ",,,\n";
    write_stats_csv_row(stats_out, summary.trotter);
    write_stats_csv_row(stats_out, summary.qdrift);
    if (config.runs > 0) write_stats_csv_row(stats_out, summary.stoq);

    std::ofstream(dir / "summary.json")
        << manifest_json(config, records).dump(2) << '\n';
    return summary;
}

struct DepthPoint {
    double depth = 0.0;
    double mean_cost = 0.0;
    double stderr_cost = 0.0;
};

struct DepthSweepSummary {
    std::vector<DepthPoint> points;
    double plateau = 0.0;       // measured random-unitary mean final cost
    double kappa = 0.0;         // fitted decay scale in c(d) = plateau*(1-e^{-d/kappa})
    bool fit_converged = false;
};

/// Least-squares fit of kappa in c(d) = plateau * (1 - e^{-d/kappa}).
inline std::pair<double, bool> fit_depth_decay(
    const std::vector<DepthPoint>& points, double plateau) {
    if (points.size() < 2 || !(plateau > 0)) return {0.0, false};
    auto sse = [&](double kappa) {
        double s = 0.0;
        for (const auto& p : points) {
            const double model = plateau * (1.0 - std::exp(-p.depth / kappa));
            s += (p.mean_cost - model) * (p.mean_cost - model);
        }
        return s;
    };
    // coarse log-scan then golden-section refinement
    double best_kappa = 1.0, best = sse(1.0);
    for (double k = 0.01; k <= 1000.0; k *= 1.1) {
        const double v = sse(k);
        if (v < best) {
            best = v;
            best_kappa = k;
        }
    }
    double lo = best_kappa / 1.25, hi = best_kappa * 1.25;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 80; ++it) {
        const double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
        if (sse(a) < sse(b))
            hi = b;
        else
            lo = a;
    }
    const double kappa = 0.5 * (lo + hi);
    return {kappa, std::isfinite(kappa) && kappa > 0};
}

/// Final cost vs. average circuit depth for random-circuit targets, with
/// the saturating-exponential fit pinned to the measured random-unitary
/// plateau.
inline DepthSweepSummary run_depth_sweep(const ExperimentConfig& config) {
    config.validate();
    if (config.depths.empty())
        throw std::invalid_argument("depth-sweep: empty depth list");
    const auto dir = detail::ensure_out_dir(config);
    const int n = config.qubits;
    auto alphabet =
        std::make_shared<const GateAlphabet>(universal_alphabet(n));

    DepthSweepSummary summary;
    std::vector<RunRecord> records;
    std::ofstream csv(dir / "depth_sweep.csv");
    csv << "depth,mean_cost,stderr,runs\n";

    for (size_t di = 0; di < config.depths.size(); ++di) {
        const double depth = config.depths[di];
        std::vector<double> finals(config.runs);
        std::vector<RunRecord> depth_records(config.runs);
        for_each_run(config.runs, config.jobs, [&](int i) {
            const std::uint64_t run_seed =
                config.seed + di * config.runs + i;
            std::mt19937_64 target_rng(run_seed);
            CompiledSequence circuit =
                random_circuit(n, depth, alphabet, target_rng);
            const ComplexMatrix target = sequence_product(circuit);
            auto run = detail::timed_compile(target, alphabet,
                                             config.stoq_config(run_seed));
            finals[i] = run.result.trace.final_cost;
            depth_records[i] = {run_seed, finals[i], run.wall_seconds, {}};
        });
        DepthPoint point{depth, mean_of(finals), stderr_of(finals)};
        summary.points.push_back(point);
        csv << format_fixed6(depth) << ',' << format_fixed6(point.mean_cost)
            << ',' << format_fixed6(point.stderr_cost) << ',' << config.runs
            << '\n';
        records.insert(records.end(), depth_records.begin(),
                       depth_records.end());
    }

    // plateau reference: Haar-random targets at the same size
    {
        std::vector<double> finals(config.runs);
        for_each_run(config.runs, config.jobs, [&](int i) {
            const std::uint64_t run_seed =
                config.seed + config.depths.size() * config.runs + i;
            std::mt19937_64 target_rng(run_seed);
            const ComplexMatrix target =
                haar_random_unitary(1 << n, target_rng);
            auto run = detail::timed_compile(target, alphabet,
                                             config.stoq_config(run_seed));
            finals[i] = run.result.trace.final_cost;
        });
        summary.plateau = mean_of(finals);
    }

    if (summary.points.size() >= 2) {
        auto [kappa, ok] = fit_depth_decay(summary.points, summary.plateau);
        summary.kappa = kappa;
        summary.fit_converged = ok;
    }

    nlohmann::json j = manifest_json(config, records);
    j["plateau"] = summary.plateau;
    j["fit"] = {{"form", "plateau*(1-exp(-depth/kappa))"},
                {"kappa", summary.kappa},
                {"converged", summary.fit_converged}};
    std::ofstream(dir / "fit.json") << j.dump(2) << '\n';
    return summary;
}

struct SweepCell {
    double delta_beta = 0.0;
    double p_append = 0.0;
    double mean_cost = 0.0;
    double stderr_cost = 0.0;
};

/// Robustness grid over (delta_beta, p_append) for random-unitary targets.
inline std::vector<SweepCell> run_param_sweep(const ExperimentConfig& config) {
    config.validate();
    if (config.sweep_delta_beta.empty() || config.sweep_p_append.empty())
        throw std::invalid_argument("param-sweep: empty grid");
    const auto dir = detail::ensure_out_dir(config);
    const int n = config.qubits;
    auto alphabet =
        std::make_shared<const GateAlphabet>(universal_alphabet(n));

    std::vector<SweepCell> cells;
    std::ofstream csv(dir / "param_sweep.csv");
    csv << "delta_beta,p_append,mean_cost,stderr,runs\n";
    size_t cell_index = 0;
    for (double db : config.sweep_delta_beta)
        for (double pa : config.sweep_p_append) {
            std::vector<double> finals(config.runs);
            for_each_run(config.runs, config.jobs, [&](int i) {
                const std::uint64_t run_seed =
                    config.seed + cell_index * config.runs + i;
                std::mt19937_64 target_rng(run_seed);
                const ComplexMatrix target =
                    haar_random_unitary(1 << n, target_rng);
                StoqConfig sc = config.stoq_config(run_seed);
                sc.delta_beta = db;
                sc.p_append = pa;
                auto run = detail::timed_compile(target, alphabet, sc);
                finals[i] = run.result.trace.final_cost;
            });
            SweepCell cell{db, pa, mean_of(finals), stderr_of(finals)};
            cells.push_back(cell);
            csv << format_fixed6(db) << ',' << format_fixed6(pa) << ','
                << format_fixed6(cell.mean_cost) << ','
                << format_fixed6(cell.stderr_cost) << ',' << config.runs
                << '\n';
            ++cell_index;
        }

    std::ofstream(dir / "summary.json")
        << manifest_json(config, {}).dump(2) << '\n';
    return cells;
}

}  // namespace stoq
