#pragma once

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "stoq/hamiltonian.hpp"
#include "stoq/matrix.hpp"
#include "stoq/sequence.hpp"

namespace stoq {

/// G_M...G_1; the empty sequence is the identity.
inline ComplexMatrix sequence_product(const CompiledSequence& seq) {
    const Eigen::Index dim = Eigen::Index{1} << seq.n;
    ComplexMatrix prod = ComplexMatrix::Identity(dim, dim);
    for (const auto& inst : seq.instances)
        prod = instance_matrix(inst, *seq.alphabet, seq.n) * prod;
    return prod;
}

/// Sum of gate durations. Undefined durations (universal-alphabet gates)
/// are an error, not zero.
inline double total_time(const CompiledSequence& seq) {
    double t = 0.0;
    for (const auto& inst : seq.instances) {
        if (!inst.duration)
            throw std::invalid_argument("total_time: gate has no defined duration");
        t += *inst.duration;
    }
    return t;
}

struct PathStep {
    size_t step = 0;        // m, 1-based
    double cum_time = 0.0;  // sum of the first m durations
    double distance = 0.0;  // d_m
};

struct PathProfile {
    std::string method;
    std::vector<PathStep> steps;
    double total_time = 0.0;
    double final_cost = 0.0;
};

/// Distance from each prefix of the compiled path to the ideal path
/// {e^{iHt} : t in [0, tau]}: d_m = min over a uniform inclusive t-grid of
/// the phase-invariant cost between e^{iHt} and the m-gate prefix product.
inline PathProfile path_profile(const CompiledSequence& seq,
                                const Hamiltonian& ham, double tau,
                                int grid_points = 1001,
                                const std::string& method = "") {
    if (grid_points < 2)
        throw std::invalid_argument("path_profile: grid_points must be >= 2");
    const Eigen::Index dim = Eigen::Index{1} << seq.n;

    // e^{iHt} on the grid, from one eigendecomposition of H.
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(ham.to_matrix());
    if (es.info() != Eigen::Success)
        throw std::runtime_error("path_profile: eigendecomposition failed");
    const Eigen::VectorXd& lam = es.eigenvalues();
    const ComplexMatrix& q = es.eigenvectors();
    std::vector<ComplexMatrix> ideal(grid_points);
    for (int j = 0; j < grid_points; ++j) {
        const double t = tau * j / (grid_points - 1);
        Eigen::VectorXcd phases(lam.size());
        for (Eigen::Index k = 0; k < lam.size(); ++k)
            phases(k) = std::exp(Complex(0, lam(k) * t));
        ideal[j] = q * phases.asDiagonal() * q.adjoint();
    }

    PathProfile profile;
    profile.method = method;
    ComplexMatrix prefix = ComplexMatrix::Identity(dim, dim);
    double cum_time = 0.0;
    for (size_t m = 1; m <= seq.size(); ++m) {
        const auto& inst = seq.instances[m - 1];
        prefix = instance_matrix(inst, *seq.alphabet, seq.n) * prefix;
        if (inst.duration) cum_time += *inst.duration;
        double dmin = 1.0;
        for (const auto& u : ideal)
            dmin = std::min(dmin, cost(u, prefix));
        profile.steps.push_back({m, cum_time, dmin});
    }
    profile.total_time = cum_time;
    profile.final_cost = cost(ideal.back(), prefix);
    return profile;
}

struct CompilationStats {
    std::string method;
    double time = 0.0;
    double mean_d = 0.0;
    double max_d = 0.0;
    double cost = 0.0;
    bool has_path = false;  // false for an empty sequence
};

inline CompilationStats compilation_stats(const CompiledSequence& seq,
                                          const Hamiltonian& ham, double tau,
                                          const ComplexMatrix& target,
                                          int grid_points = 1001,
                                          const std::string& method = "") {
    CompilationStats stats;
    stats.method = method;
    stats.time = total_time(seq);
    stats.cost = cost(target, sequence_product(seq));
    if (!seq.instances.empty()) {
        PathProfile profile = path_profile(seq, ham, tau, grid_points, method);
        double sum = 0.0, mx = 0.0;
        for (const auto& s : profile.steps) {
            sum += s.distance;
            mx = std::max(mx, s.distance);
        }
        stats.mean_d = sum / profile.steps.size();
        stats.max_d = mx;
        stats.has_path = true;
    }
    return stats;
}

inline std::string format_fixed6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

inline void write_profile_csv(std::ostream& out, const PathProfile& profile) {
    out << "step,cum_time,path_distance\n";
    for (const auto& s : profile.steps)
        out << s.step << ',' << format_fixed6(s.cum_time) << ','
            << format_fixed6(s.distance) << '\n';
}

inline void write_stats_csv_header(std::ostream& out) {
    out << "method,time,mean_d,max_d,cost\n";
}

inline void write_stats_csv_row(std::ostream& out,
                                const CompilationStats& stats) {
    out << stats.method << ',' << format_fixed6(stats.time) << ',';
    if (stats.has_path)
        out << format_fixed6(stats.mean_d) << ',' << format_fixed6(stats.max_d);
    else
        out << ',';
    out << ',' << format_fixed6(stats.cost) << '\n';
}

}  // namespace stoq
