#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "stoq/matrix.hpp"
#include "stoq/sequence.hpp"

namespace stoq {

struct StoqConfig {
    int num_iterations = 10000;
    double delta_beta = 0.03;
    double p_append = 0.5;
    // Hard cap on sequence length; append proposals at the cap are rejected
    // outright. Keeps the chain from inflating the sequence without bound
    // when p_append is high, and bounds the total duration of compiled
    // time-evolution sequences. Unset means unlimited.
    std::optional<size_t> max_length = 64;
    std::optional<double> cost_threshold;
    std::uint64_t seed = 0;
    // Testing hook: pins beta to a fixed value instead of the schedule.
    std::optional<double> fixed_beta;

    void validate() const {
        if (num_iterations < 1)
            throw std::invalid_argument("StoqConfig: num_iterations must be >= 1");
        if (!(delta_beta > 0))
            throw std::invalid_argument("StoqConfig: delta_beta must be > 0");
        if (!(p_append > 0 && p_append < 1))
            throw std::invalid_argument("StoqConfig: p_append must be in (0,1)");
        if (max_length && *max_length < 1)
            throw std::invalid_argument("StoqConfig: max_length must be >= 1");
        if (cost_threshold &&
            !(*cost_threshold >= 0 && *cost_threshold <= 1))
            throw std::invalid_argument("StoqConfig: cost_threshold must be in [0,1]");
    }
};

/// Fraction of append proposals that pick a uniformly random insertion slot
/// instead of the end of the sequence. A pure end-append search stalls on
/// larger targets (it can only refine the most recent gates), while pure
/// random-position insertion over-fits small ones; this mix performed best
/// across both regimes.
inline constexpr double kInteriorInsertProbability = 0.3;

enum class ProposalKind { Append, Remove };

struct TraceRecord {
    int iteration = 0;
    double beta = 0.0;
    double cost = 0.0;
    ProposalKind proposal = ProposalKind::Append;
    bool accepted = false;
    size_t seq_length = 0;
};

struct CompilationTrace {
    std::vector<TraceRecord> records;
    double final_cost = 0.0;
};

struct CompilationResult {
    CompiledSequence sequence;
    CompilationTrace trace;
    ComplexMatrix final_product;  // cached running product G_M...G_1
};

/// Acceptance probability for a proposed change with Delta = new_cost - cost:
/// e^{-beta*Delta} for Delta > 0, else 1.
inline double accept_probability(double cost, double new_cost, double beta) {
    const double delta = new_cost - cost;
    return delta > 0 ? std::exp(-beta * delta) : 1.0;
}

struct Proposal {
    ProposalKind kind = ProposalKind::Append;
    std::optional<GateInstance> instance;  // set for appends
};

/// Draws the next proposal: append a fresh instance with probability
/// p_append (always, when the sequence is empty), otherwise remove the
/// last gate.
inline Proposal propose_change(size_t seq_length, const GateAlphabet& alphabet,
                               double p_append, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const bool append = u(rng) < p_append || seq_length == 0;
    Proposal p;
    if (append) {
        p.kind = ProposalKind::Append;
        p.instance = sample_instance(alphabet, rng);
    } else {
        p.kind = ProposalKind::Remove;
    }
    return p;
}

/// Returns a copy of `seq` with one gate appended or the last gate removed.
inline CompiledSequence random_change(const CompiledSequence& seq,
                                      const GateAlphabet& alphabet,
                                      double p_append, std::mt19937_64& rng) {
    Proposal p = propose_change(seq.size(), alphabet, p_append, rng);
    CompiledSequence out = seq;
    if (p.kind == ProposalKind::Append)
        out.instances.push_back(std::move(*p.instance));
    else
        out.instances.pop_back();
    return out;
}

/// Annealed MCMC search for a gate sequence approximating `target`.
/// Starts from the empty sequence; each iteration increments beta, proposes
/// a single-gate edit, and accepts per accept_probability.
///
/// Proposal policy: with probability p_append a freshly sampled gate is
/// inserted -- at the end of the sequence, or (with probability
/// kInteriorInsertProbability) at a uniformly random slot; otherwise a gate
/// at a uniformly random position is removed. Appends beyond
/// config.max_length are rejected without evaluation.
///
/// Candidates are evaluated against a stack of cached prefix products
/// P_m = G_m...G_1: an edit at position j has candidate product
/// P_M P_j^dag g P_j (insertion) or P_M P_{j+1}^dag P_j (removal), so the
/// full product is never recomputed from scratch; the prefix stack above
/// the edit position is rebuilt only when a proposal is accepted.
/// Deterministic for a fixed seed.
inline CompilationResult compile(
    const ComplexMatrix& target,
    std::shared_ptr<const GateAlphabet> alphabet, const StoqConfig& config) {
    config.validate();
    const int n = alphabet->num_qubits();
    const Eigen::Index dim = Eigen::Index{1} << n;
    if (target.rows() != dim || target.cols() != dim)
        throw std::invalid_argument("compile: target dimension does not match alphabet");
    if (!is_unitary(target))
        throw std::invalid_argument("compile: target is not unitary");

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    CompiledSequence seq;
    seq.n = n;
    seq.alphabet = alphabet;

    // prefix_products[m] = G_m...G_1 (m = 0 is the identity)
    std::vector<ComplexMatrix> prefix_products;
    prefix_products.push_back(ComplexMatrix::Identity(dim, dim));
    double current_cost = cost(target, prefix_products.back());

    CompilationTrace trace;
    trace.records.reserve(config.num_iterations);

    for (int i = 1; i <= config.num_iterations; ++i) {
        const double beta =
            config.fixed_beta ? *config.fixed_beta : i * config.delta_beta;
        const bool append = u(rng) < config.p_append || seq.instances.empty();

        if (append && config.max_length && seq.size() >= *config.max_length) {
            trace.records.push_back(
                {i, beta, current_cost, ProposalKind::Append, false,
                 seq.size()});
            continue;
        }

        GateInstance inst;
        ComplexMatrix gate;
        size_t pos = 0;  // insertion slot or removal index
        ComplexMatrix candidate;
        if (append) {
            inst = sample_instance(*alphabet, rng);
            gate = instance_matrix(inst, *alphabet, n);
            pos = seq.size();
            if (u(rng) < kInteriorInsertProbability) {
                std::uniform_int_distribution<size_t> slot(0, seq.size());
                pos = slot(rng);
            }
            if (pos == seq.size())
                candidate = gate * prefix_products.back();
            else
                candidate = prefix_products.back() *
                            prefix_products[pos].adjoint() * gate *
                            prefix_products[pos];
        } else {
            std::uniform_int_distribution<size_t> index(0, seq.size() - 1);
            pos = index(rng);
            candidate = prefix_products.back() *
                        prefix_products[pos + 1].adjoint() *
                        prefix_products[pos];
        }
        const double new_cost = cost(target, candidate);

        const double p_acc = accept_probability(current_cost, new_cost, beta);
        const bool accepted = p_acc >= 1.0 || u(rng) < p_acc;
        if (accepted) {
            size_t rebuild_from;
            if (append) {
                seq.instances.insert(seq.instances.begin() + pos,
                                     std::move(inst));
                prefix_products.resize(pos + 1);
                prefix_products.push_back(gate * prefix_products.back());
                rebuild_from = pos + 1;
            } else {
                seq.instances.erase(seq.instances.begin() + pos);
                prefix_products.resize(pos + 1);
                rebuild_from = pos;
            }
            for (size_t m = rebuild_from; m < seq.size(); ++m)
                prefix_products.push_back(
                    instance_matrix(seq.instances[m], *alphabet, n) *
                    prefix_products.back());
            current_cost = new_cost;
        }
        trace.records.push_back(
            {i, beta, current_cost,
             append ? ProposalKind::Append : ProposalKind::Remove, accepted,
             seq.size()});
        if (config.cost_threshold && current_cost <= *config.cost_threshold)
            break;
    }

    trace.final_cost = current_cost;
    return {std::move(seq), std::move(trace), prefix_products.back()};
}

}  // namespace stoq
