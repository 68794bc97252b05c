// Command-line harness for STOQ compilations and the experiment suite.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "stoq/experiments.hpp"

namespace {

void add_common_flags(CLI::App* cmd, stoq::ExperimentConfig& config) {
    cmd->add_option("--preset", config.preset,
                    "Built-in Hamiltonian preset (ising2/ising3/ising5/ising8)");
    cmd->add_option("--hamiltonian", config.hamiltonian_file,
                    "Hamiltonian file (one '<coeff> <paulis>' term per line)");
    cmd->add_option("--qubits", config.qubits,
                    "Qubit count for random-target experiments");
    cmd->add_option("--iterations", config.iterations, "Iterations per run");
    cmd->add_option("--runs", config.runs, "Number of independent runs");
    cmd->add_option("--seed", config.seed, "Base seed; run i uses seed+i");
    cmd->add_option("--delta-beta", config.delta_beta, "Annealing increment");
    cmd->add_option("--p-append", config.p_append, "Append probability");
    cmd->add_option("--max-length", config.max_length,
                    "Sequence length cap (<= 0 disables)");
    cmd->add_option("--epsilon", config.epsilon,
                    "Gate-duration bound factor (t range is [-eps*tau, eps*tau])");
    cmd->add_option("--tau", config.tau, "Evolution time of the target");
    cmd->add_option("--trotter-steps", config.trotter_steps, "Trotter steps");
    cmd->add_option("--qdrift-reps", config.qdrift_reps, "QDRIFT repetitions");
    cmd->add_option("--grid-points", config.grid_points,
                    "Ideal-path grid resolution");
    cmd->add_option("--jobs", config.jobs, "Parallel runs");
    cmd->add_option("--out", config.out_dir, "Output directory");
    cmd->set_config("--config");
}

int run_compile(const stoq::ExperimentConfig& config,
                const std::string& target_file,
                const std::string& alphabet_kind) {
    using namespace stoq;
    std::shared_ptr<const GateAlphabet> alphabet;
    ComplexMatrix target;
    if (!target_file.empty()) {
        std::ifstream in(target_file);
        if (!in) {
            std::cerr << "cannot open target file " << target_file << "\n";
            return 2;
        }
        target = parse_matrix(in);
        int n = 0;
        while ((Eigen::Index{1} << n) < target.rows()) ++n;
        if ((Eigen::Index{1} << n) != target.rows()) {
            std::cerr << "target dimension is not a power of two\n";
            return 2;
        }
        alphabet =
            std::make_shared<const GateAlphabet>(universal_alphabet(n));
    } else {
        const Hamiltonian ham = config.resolve_hamiltonian();
        target = ham.time_evolution(config.tau);
        if (alphabet_kind == "universal")
            alphabet = std::make_shared<const GateAlphabet>(
                universal_alphabet(ham.num_qubits()));
        else
            alphabet = std::make_shared<const GateAlphabet>(
                hamiltonian_term_alphabet(ham, config.epsilon, config.tau));
    }

    CompilationResult result =
        compile(target, alphabet, config.stoq_config(config.seed));

    std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "sequence.txt");
        write_sequence(out, result.sequence.instances);
    }
    {
        std::ofstream out(dir / "trace.csv");
        write_trace_csv(out, result.trace);
    }
    std::cout << "final cost " << result.trace.final_cost << ", "
              << result.sequence.size() << " gates, artifacts in "
              << dir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"STOQ: stochastic search for approximate unitary compilation"};
    app.require_subcommand(1);

    stoq::ExperimentConfig config;
    std::string target_file;
    std::string alphabet_kind = "hamiltonian";

    auto* compile_cmd =
        app.add_subcommand("compile", "Single ad-hoc compilation");
    add_common_flags(compile_cmd, config);
    compile_cmd->add_option("--target", target_file,
                            "Target unitary matrix file");
    compile_cmd->add_option("--alphabet", alphabet_kind,
                            "Gate alphabet: hamiltonian | universal");

    auto* curves_cmd = app.add_subcommand(
        "cost-curves", "STOQ cost curves for a time-evolution target");
    add_common_flags(curves_cmd, config);

    auto* path_cmd = app.add_subcommand(
        "path-compare", "Path profiles and stats: STOQ vs Trotter vs QDRIFT");
    add_common_flags(path_cmd, config);

    auto* random_cmd = app.add_subcommand(
        "random-unitary", "STOQ cost curves for Haar-random targets");
    add_common_flags(random_cmd, config);

    auto* depth_cmd = app.add_subcommand(
        "depth-sweep", "Final cost vs average circuit depth");
    add_common_flags(depth_cmd, config);
    depth_cmd->add_option("--depths", config.depths, "Average depths to sweep");

    auto* sweep_cmd = app.add_subcommand(
        "param-sweep", "Robustness grid over delta-beta and p-append");
    add_common_flags(sweep_cmd, config);
    sweep_cmd->add_option("--sweep-delta-beta", config.sweep_delta_beta,
                          "delta-beta grid values");
    sweep_cmd->add_option("--sweep-p-append", config.sweep_p_append,
                          "p-append grid values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (compile_cmd->parsed())
            return run_compile(config, target_file, alphabet_kind);
        if (curves_cmd->parsed()) {
            auto s = stoq::run_cost_curves(config);
            std::cout << "mean final cost " << s.mean_final_cost << "\n";
        } else if (path_cmd->parsed()) {
            auto s = stoq::run_path_comparison(config);
            std::cout << "stoq mean(d) " << s.stoq.mean_d << ", trotter "
                      << s.trotter.mean_d << ", qdrift " << s.qdrift.mean_d
                      << "\n";
        } else if (random_cmd->parsed()) {
            auto s = stoq::run_random_unitary(config);
            std::cout << "mean final cost " << s.mean_final_cost << "\n";
        } else if (depth_cmd->parsed()) {
            auto s = stoq::run_depth_sweep(config);
            std::cout << "plateau " << s.plateau << ", kappa " << s.kappa
                      << (s.fit_converged ? "" : " (fit not converged)")
                      << "\n";
        } else if (sweep_cmd->parsed()) {
            auto cells = stoq::run_param_sweep(config);
            for (const auto& c : cells)
                std::cout << "delta_beta=" << c.delta_beta
                          << " p_append=" << c.p_append << " mean cost "
                          << c.mean_cost << "\n";
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
