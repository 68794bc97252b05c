#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "stoq/hamiltonian.hpp"
#include "stoq/sequence.hpp"

namespace stoq {

/// First-order Trotter with an independent uniformly random term ordering
/// per step: `steps` passes, each emitting every term as e^{i H_k (tau/steps)}.
/// Total gates = K*steps; total duration = K*tau.
inline CompiledSequence randomized_trotter(const Hamiltonian& ham, double tau,
                                           int steps, std::mt19937_64& rng) {
    if (steps < 1)
        throw std::invalid_argument("randomized_trotter: steps must be >= 1");
    if (ham.terms().empty())
        throw std::invalid_argument("randomized_trotter: empty Hamiltonian");
    const double dt = tau / steps;
    // Alphabet whose per-term range is exactly [-tau/steps, tau/steps].
    auto alphabet = std::make_shared<const GateAlphabet>(
        hamiltonian_term_alphabet(ham, 1.0 / steps, tau));

    CompiledSequence seq;
    seq.n = ham.num_qubits();
    seq.alphabet = alphabet;
    const size_t k = ham.terms().size();
    std::vector<size_t> order(k);
    for (int s = 0; s < steps; ++s) {
        std::iota(order.begin(), order.end(), size_t{0});
        std::shuffle(order.begin(), order.end(), rng);
        for (size_t idx : order) {
            const GateSpec& spec = alphabet->specs()[idx];
            GateInstance inst;
            inst.spec_id = spec.id;
            inst.support = spec.support;
            inst.params = {dt};
            inst.duration = dt;
            seq.instances.push_back(std::move(inst));
        }
    }
    return seq;
}

/// QDRIFT: `reps` samples of term k with probability |c_k|/lambda, each
/// emitted as e^{i sign(c_k) P_k (lambda*tau/reps)} where P_k is the
/// unit-coefficient Pauli string. Total duration = lambda*tau exactly.
inline CompiledSequence qdrift(const Hamiltonian& ham, double tau, int reps,
                               std::mt19937_64& rng) {
    if (reps < 1) throw std::invalid_argument("qdrift: reps must be >= 1");
    const double lambda = ham.lambda_norm();
    if (!(lambda > 0)) throw std::invalid_argument("qdrift: zero Hamiltonian");
    const double dt = lambda * tau / reps;

    // Unit-coefficient version of each term; the coefficient sign folds
    // into the gate's time parameter.
    std::vector<PauliTerm> unit_terms;
    std::vector<double> weights;
    for (const auto& t : ham.terms()) {
        unit_terms.push_back({1.0, t.string});
        weights.push_back(std::abs(t.coefficient));
    }
    Hamiltonian unit_ham(ham.num_qubits(), unit_terms);
    auto alphabet = std::make_shared<const GateAlphabet>(
        hamiltonian_term_alphabet(unit_ham, lambda / reps, tau));

    std::discrete_distribution<size_t> pick(weights.begin(), weights.end());
    CompiledSequence seq;
    seq.n = ham.num_qubits();
    seq.alphabet = alphabet;
    seq.instances.reserve(reps);
    for (int r = 0; r < reps; ++r) {
        const size_t k = pick(rng);
        const double sign = ham.terms()[k].coefficient < 0 ? -1.0 : 1.0;
        const GateSpec& spec = alphabet->specs()[k];
        GateInstance inst;
        inst.spec_id = spec.id;
        inst.support = spec.support;
        inst.params = {sign * dt};
        inst.duration = dt;
        seq.instances.push_back(std::move(inst));
    }
    return seq;
}

}  // namespace stoq
