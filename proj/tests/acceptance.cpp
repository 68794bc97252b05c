// Acceptance suite: one pass/fail line per criterion. With no arguments all
// criteria run; otherwise run the criteria numbers given on the command line.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "stoq/experiments.hpp"

using namespace stoq;
namespace fs = std::filesystem;

namespace {

int g_jobs = int(std::max(1u, std::thread::hardware_concurrency()));

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

fs::path scratch(const std::string& tag) {
    auto dir = fs::temp_directory_path() / ("stoq_acceptance_" + tag);
    fs::remove_all(dir);
    return dir;
}

// 1. Exact Trotter/QDRIFT total durations on ising5.
Check criterion1() {
    Check c;
    Hamiltonian h5 = ising_preset("ising5");
    std::mt19937_64 rng(0);
    auto trotter = randomized_trotter(h5, 0.5, 10, rng);
    auto qd = qdrift(h5, 0.5, 1000, rng);
    const double tt = total_time(trotter), qt = total_time(qd);
    c.require(std::abs(tt - 4.5) <= 1e-12, "trotter time " + fmt(tt));
    c.require(std::abs(qt - 5.5) <= 1e-12, "qdrift time " + fmt(qt));
    return c;
}

// 2. Baseline accuracy vs the ising5 time-evolution target.
Check criterion2() {
    Check c;
    Hamiltonian h5 = ising_preset("ising5");
    ComplexMatrix target = h5.time_evolution(0.5);
    std::vector<double> trotter_costs, qdrift_costs;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::mt19937_64 rng(seed);
        trotter_costs.push_back(
            cost(target, sequence_product(randomized_trotter(h5, 0.5, 10, rng))));
        std::mt19937_64 rng2(seed);
        qdrift_costs.push_back(
            cost(target, sequence_product(qdrift(h5, 0.5, 1000, rng2))));
    }
    const double mt = median(trotter_costs), mq = median(qdrift_costs);
    c.require(mt <= 1e-3, "trotter median cost " + fmt(mt));
    c.require(mq <= 0.02, "qdrift median cost " + fmt(mq));
    c.detail = "trotter " + fmt(mt) + ", qdrift " + fmt(mq);
    return c;
}

// 3. STOQ accuracy on time-evolution targets.
Check criterion3() {
    Check c;
    for (const char* preset : {"ising2", "ising3"}) {
        ExperimentConfig config;
        config.preset = preset;
        config.iterations = 10000;
        config.runs = 16;
        config.seed = 1000;
        config.jobs = g_jobs;
        config.out_dir = scratch(std::string("c3_") + preset).string();
        auto s = run_cost_curves(config);
        c.require(s.mean_final_cost <= 0.05,
                  std::string(preset) + " mean cost " +
                      fmt(s.mean_final_cost));
        c.detail += std::string(preset) + " " + fmt(s.mean_final_cost) + "  ";
    }
    {
        ExperimentConfig config;
        config.preset = "ising5";
        config.iterations = 10000;
        config.runs = 16;
        config.seed = 2000;
        config.jobs = g_jobs;
        config.out_dir = scratch("c3_ising5").string();
        auto s = run_cost_curves(config);
        const double best =
            *std::min_element(s.final_costs.begin(), s.final_costs.end());
        c.require(best <= 0.1, "ising5 best cost " + fmt(best));
        c.detail += "ising5 best " + fmt(best);
    }
    return c;
}

// 4. Path-distance separation and runtime comparability on ising5.
Check criterion4() {
    Check c;
    ExperimentConfig config;
    config.preset = "ising5";
    config.iterations = 10000;
    config.runs = 5;
    config.seed = 3000;
    config.jobs = g_jobs;
    config.out_dir = scratch("c4").string();
    auto s = run_path_comparison(config);
    c.require(s.stoq.mean_d >= 3.0 * s.trotter.mean_d,
              "stoq mean_d " + fmt(s.stoq.mean_d) + " vs trotter " +
                  fmt(s.trotter.mean_d));
    c.require(s.stoq.mean_d >= 3.0 * s.qdrift.mean_d,
              "stoq mean_d " + fmt(s.stoq.mean_d) + " vs qdrift " +
                  fmt(s.qdrift.mean_d));
    c.require(s.stoq.time <= 2.0 * s.qdrift.time &&
                  s.stoq.time >= 0.5 * s.trotter.time,
              "stoq time " + fmt(s.stoq.time) + " not within 2x of baselines");
    c.detail = "mean_d stoq " + fmt(s.stoq.mean_d) + ", trotter " +
               fmt(s.trotter.mean_d) + ", qdrift " + fmt(s.qdrift.mean_d) +
               "; time stoq " + fmt(s.stoq.time);
    return c;
}

// 5. Random-unitary plateaus at 2, 3, 5 qubits.
Check criterion5() {
    Check c;
    const struct {
        int qubits;
        double center, band;
    } cases[] = {{2, 0.1, 0.05}, {3, 0.5, 0.1}, {5, 0.8, 0.1}};
    for (const auto& cs : cases) {
        ExperimentConfig config;
        config.qubits = cs.qubits;
        config.iterations = 10000;
        config.runs = 20;
        config.seed = 4000 + cs.qubits;
        config.jobs = g_jobs;
        config.out_dir =
            scratch("c5_q" + std::to_string(cs.qubits)).string();
        auto s = run_random_unitary(config);
        c.require(std::abs(s.mean_final_cost - cs.center) <= cs.band,
                  std::to_string(cs.qubits) + "q mean cost " +
                      fmt(s.mean_final_cost));
        c.detail += std::to_string(cs.qubits) + "q " +
                    fmt(s.mean_final_cost) + "  ";
    }
    return c;
}

// 6. Depth-sweep shape at desk scale.
Check criterion6() {
    Check c;
    ExperimentConfig config;
    config.qubits = 5;
    config.iterations = 30000;
    config.runs = 8;
    config.seed = 5000;
    config.jobs = g_jobs;
    config.depths = {1, 5, 10, 20, 40};
    config.out_dir = scratch("c6").string();
    auto s = run_depth_sweep(config);
    for (size_t i = 1; i < s.points.size(); ++i)
        c.require(s.points[i].mean_cost > s.points[i - 1].mean_cost,
                  "not increasing at depth " + fmt(s.points[i].depth));
    const double last = s.points.back().mean_cost;
    c.require(std::abs(last - s.plateau) <= 0.1,
              "depth-40 cost " + fmt(last) + " vs plateau " +
                  fmt(s.plateau));
    c.detail = "costs";
    for (const auto& p : s.points) c.detail += " " + fmt(p.mean_cost);
    c.detail += "; plateau " + fmt(s.plateau);
    return c;
}

// 7. Parameter-sweep robustness (reduced grid).
Check criterion7() {
    Check c;
    ExperimentConfig config;
    config.qubits = 3;
    config.iterations = 30000;
    config.runs = 8;
    config.seed = 6000;
    config.jobs = g_jobs;
    config.sweep_delta_beta = {0.01, 0.1};
    config.sweep_p_append = {0.2, 0.8};
    config.out_dir = scratch("c7").string();
    auto cells = run_param_sweep(config);
    for (const auto& cell : cells) {
        c.require(cell.mean_cost >= 0.30 && cell.mean_cost <= 0.60,
                  "cell (" + fmt(cell.delta_beta) + "," +
                      fmt(cell.p_append) + ") mean " + fmt(cell.mean_cost));
        c.detail += fmt(cell.mean_cost) + " ";
    }
    return c;
}

// 8. Fast property suite.
Check criterion8() {
    Check c;
    std::mt19937_64 rng(1);

    // cost global-phase invariance
    ComplexMatrix u = haar_random_unitary(8, rng);
    for (double alpha : {0.0, M_PI / 7, M_PI, 1.234})
        c.require(cost(std::exp(Complex(0, alpha)) * u, u) < 1e-12,
                  "phase invariance");

    // expm vs 40-term Taylor oracle
    {
        ComplexMatrix a(8, 8);
        std::normal_distribution<double> g(0.0, 1.0);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) a(i, j) = Complex(g(rng), g(rng));
        ComplexMatrix h = (a + a.adjoint()) / 2.0;
        ComplexMatrix sum = ComplexMatrix::Identity(8, 8);
        ComplexMatrix power = ComplexMatrix::Identity(8, 8);
        const ComplexMatrix iht = Complex(0, 0.3) * h;
        for (int k = 1; k <= 40; ++k) {
            power = power * iht / double(k);
            sum += power;
        }
        c.require((hermitian_expi(h, 0.3) - sum).cwiseAbs().maxCoeff() <=
                      1e-10,
                  "expm vs Taylor");
    }

    // acceptance rule values
    c.require(accept_probability(0.5, 0.4, 2.0) == 1.0, "accept delta<0");
    c.require(accept_probability(0.5, 0.5, 2.0) == 1.0, "accept delta=0");
    c.require(std::abs(accept_probability(0.1, 0.6, 2.0) - std::exp(-1.0)) <
                  1e-12,
              "accept e^-1");

    Hamiltonian h2 = ising_preset("ising2");
    auto alphabet = std::make_shared<const GateAlphabet>(
        hamiltonian_term_alphabet(h2, 0.2, 0.5));
    ComplexMatrix target = h2.time_evolution(0.5);

    // beta = 0 hook accepts all proposals
    {
        StoqConfig sc;
        sc.num_iterations = 300;
        sc.seed = 2;
        sc.fixed_beta = 0.0;
        auto r = compile(target, alphabet, sc);
        for (const auto& rec : r.trace.records)
            c.require(rec.accepted, "beta=0 acceptance");
    }

    // greedy limit rejects all cost increases
    {
        StoqConfig sc;
        sc.num_iterations = 500;
        sc.delta_beta = 1e6;
        sc.seed = 3;
        auto r = compile(target, alphabet, sc);
        double prev = cost(target, ComplexMatrix::Identity(4, 4));
        for (const auto& rec : r.trace.records) {
            if (rec.accepted)
                c.require(rec.cost <= prev + 1e-15, "greedy acceptance");
            prev = rec.cost;
        }
        // cached vs recomputed product
        c.require((sequence_product(r.sequence) - r.final_product)
                          .cwiseAbs()
                          .maxCoeff() <= 1e-8,
                  "cached product");
    }

    // Haar unitarity and |Tr U|^2 moment
    {
        double mean = 0.0;
        const int draws = 2000;
        for (int i = 0; i < draws; ++i) {
            ComplexMatrix v = haar_random_unitary(4, rng);
            if (i < 20) c.require(is_unitary(v, 1e-9), "haar unitarity");
            const double t = std::abs(v.trace());
            mean += t * t;
        }
        mean /= draws;
        c.require(std::abs(mean - 1.0) < 0.1, "haar moment " + fmt(mean));
    }

    // QDRIFT sampling frequencies within 5 sigma
    {
        Hamiltonian h5 = ising_preset("ising5");
        const double lambda = h5.lambda_norm();
        std::mt19937_64 qrng(4);
        auto seq = qdrift(h5, 0.5, 10000, qrng);
        std::map<std::string, int> counts;
        for (const auto& inst : seq.instances) counts[inst.spec_id]++;
        for (size_t k = 0; k < h5.terms().size(); ++k) {
            const double p = std::abs(h5.terms()[k].coefficient) / lambda;
            const double sigma = std::sqrt(10000 * p * (1 - p));
            c.require(std::abs(counts[seq.alphabet->specs()[k].id] -
                               10000 * p) < 5 * sigma,
                      "qdrift frequency");
        }
    }

    // d_1 = 0 for the exact one-gate ideal sequence
    {
        ComplexMatrix hmat = h2.to_matrix();
        GateSpec spec;
        spec.id = "full_evolution";
        spec.kind = GateKind::HamiltonianTerm;
        spec.support = {1, 2};
        spec.param_ranges = {{0.0, 0.5}};
        spec.has_duration = true;
        spec.build = [hmat](const std::vector<double>& p) {
            return hermitian_expi(hmat, p[0]);
        };
        CompiledSequence seq;
        seq.n = 2;
        seq.alphabet = std::make_shared<const GateAlphabet>(
            2, std::vector<GateSpec>{spec});
        seq.instances.push_back({spec.id, spec.support, {0.5}, 0.5});
        auto profile = path_profile(seq, h2, 0.5, 101);
        c.require(profile.steps[0].distance < 1e-10, "ideal d1");
    }
    return c;
}

// 9. Determinism of emitted CSV artifacts.
Check criterion9() {
    Check c;
    ExperimentConfig config;
    config.preset = "ising2";
    config.iterations = 1000;
    config.runs = 3;
    config.seed = 7000;

    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    config.out_dir = scratch("c9_a").string();
    run_cost_curves(config);
    fs::path a(config.out_dir);
    config.out_dir = scratch("c9_b").string();
    config.jobs = g_jobs;
    run_cost_curves(config);
    fs::path b(config.out_dir);
    for (const char* name :
         {"trace_run0.csv", "trace_run1.csv", "trace_run2.csv",
          "mean_curve.csv"})
        c.require(slurp(a / name) == slurp(b / name),
                  std::string("mismatch in ") + name);
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    std::map<int, Check (*)()> criteria = {
        {1, criterion1}, {2, criterion2}, {3, criterion3},
        {4, criterion4}, {5, criterion5}, {6, criterion6},
        {7, criterion7}, {8, criterion8}, {9, criterion9}};

    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    bool all_ok = true;
    for (const auto& [num, fn] : criteria) {
        if (!selected.empty() && !selected.count(num)) continue;
        Check c;
        try {
            c = fn();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << num;
        if (!c.detail.empty()) std::cout << "  [" << c.detail << "]";
        std::cout << std::endl;
        all_ok = all_ok && c.ok;
    }
    return all_ok ? 0 : 1;
}
