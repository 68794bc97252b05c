#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "stoq/matrix.hpp"

namespace stoq {

enum class Pauli : char { I = 'I', X = 'X', Y = 'Y', Z = 'Z' };

inline ComplexMatrix pauli_matrix(Pauli p) {
    switch (p) {
        case Pauli::I: return pauli_matrices::identity2();
        case Pauli::X: return pauli_matrices::sigma_x();
        case Pauli::Y: return pauli_matrices::sigma_y();
        case Pauli::Z: return pauli_matrices::sigma_z();
    }
    throw std::invalid_argument("pauli_matrix: bad label");
}

/// One Pauli operator per qubit. Qubit 1 is the most-significant (leftmost)
/// tensor factor, project-wide.
struct PauliString {
    std::vector<Pauli> ops;

    PauliString() = default;
    explicit PauliString(std::vector<Pauli> o) : ops(std::move(o)) {}
    explicit PauliString(const std::string& labels) {
        ops.reserve(labels.size());
        for (char c : labels) {
            switch (c) {
                case 'I': ops.push_back(Pauli::I); break;
                case 'X': ops.push_back(Pauli::X); break;
                case 'Y': ops.push_back(Pauli::Y); break;
                case 'Z': ops.push_back(Pauli::Z); break;
                default:
                    throw std::invalid_argument(
                        "PauliString: bad label '" + std::string(1, c) + "'");
            }
        }
    }

    int num_qubits() const { return static_cast<int>(ops.size()); }

    std::string to_string() const {
        std::string s;
        s.reserve(ops.size());
        for (Pauli p : ops) s.push_back(static_cast<char>(p));
        return s;
    }

    /// 1-based indices of the non-identity qubits.
    std::vector<int> support() const {
        std::vector<int> idx;
        for (int q = 0; q < num_qubits(); ++q)
            if (ops[q] != Pauli::I) idx.push_back(q + 1);
        return idx;
    }

    ComplexMatrix to_matrix() const {
        if (ops.empty()) throw std::invalid_argument("PauliString: empty");
        ComplexMatrix m = pauli_matrix(ops[0]);
        for (size_t q = 1; q < ops.size(); ++q)
            m = kron(m, pauli_matrix(ops[q]));
        return m;
    }

    bool operator==(const PauliString& other) const { return ops == other.ops; }
};

struct PauliTerm {
    double coefficient = 0.0;
    PauliString string;
};

/// Weighted sum of Pauli strings with real coefficients. Duplicate strings
/// are merged at construction.
class Hamiltonian {
  public:
    Hamiltonian(int n, std::vector<PauliTerm> terms) : n_(n) {
        std::map<std::string, size_t> seen;
        for (auto& t : terms) {
            if (t.string.num_qubits() != n)
                throw std::invalid_argument(
                    "Hamiltonian: term qubit count mismatch");
            auto key = t.string.to_string();
            auto it = seen.find(key);
            if (it == seen.end()) {
                seen.emplace(key, terms_.size());
                terms_.push_back(std::move(t));
            } else {
                terms_[it->second].coefficient += t.coefficient;
            }
        }
    }

    int num_qubits() const { return n_; }
    const std::vector<PauliTerm>& terms() const { return terms_; }

    /// Dense 2^n realization. Limited to n <= 10.
    ComplexMatrix to_matrix() const {
        if (n_ > 10)
            throw std::invalid_argument("Hamiltonian::to_matrix: n > 10");
        const Eigen::Index dim = Eigen::Index{1} << n_;
        ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
        for (const auto& t : terms_)
            m += t.coefficient * t.string.to_matrix();
        return m;
    }

    /// e^{+i H tau}.
    ComplexMatrix time_evolution(double tau) const {
        return hermitian_expi(to_matrix(), tau);
    }

    /// lambda = sum of |coefficients|.
    double lambda_norm() const {
        double s = 0.0;
        for (const auto& t : terms_) s += std::abs(t.coefficient);
        return s;
    }

  private:
    int n_;
    std::vector<PauliTerm> terms_;
};

/// Nearest-neighbor XX coupling plus transverse Y field on an open chain:
/// sum_i J_i X_i X_{i+1} + sum_i h_i Y_i.
inline Hamiltonian ising_hamiltonian(int n, const std::vector<double>& J,
                                     const std::vector<double>& h) {
    if (n < 2) throw std::invalid_argument("ising_hamiltonian: n < 2");
    if (static_cast<int>(J.size()) != n - 1)
        throw std::invalid_argument("ising_hamiltonian: need n-1 couplings");
    if (static_cast<int>(h.size()) != n)
        throw std::invalid_argument("ising_hamiltonian: need n fields");
    std::vector<PauliTerm> terms;
    for (int i = 0; i < n - 1; ++i) {
        std::vector<Pauli> ops(n, Pauli::I);
        ops[i] = Pauli::X;
        ops[i + 1] = Pauli::X;
        terms.push_back({J[i], PauliString(std::move(ops))});
    }
    for (int i = 0; i < n; ++i) {
        std::vector<Pauli> ops(n, Pauli::I);
        ops[i] = Pauli::Y;
        terms.push_back({h[i], PauliString(std::move(ops))});
    }
    return Hamiltonian(n, std::move(terms));
}

/// Built-in Ising instances: "ising2", "ising3", "ising5", "ising8".
inline Hamiltonian ising_preset(const std::string& name) {
    if (name == "ising2")
        return ising_hamiltonian(2, {1.27}, {1.54, 1.19});
    if (name == "ising3")
        return ising_hamiltonian(3, {1.81, 1.27}, {1.54, 1.19, 0.53});
    if (name == "ising5")
        return ising_hamiltonian(5, {1.20, 1.40, 1.60, 1.80},
                                 {1.60, 1.30, 1.00, 0.70, 0.40});
    if (name == "ising8")
        return ising_hamiltonian(8, {1.20, 1.30, 1.40, 1.50, 1.60, 1.70, 1.80},
                                 {1.40, 1.10, 0.80, 1.00, 1.20, 1.50, 1.70, 1.30});
    throw std::invalid_argument("unknown Hamiltonian preset: " + name);
}

/// Text format: one `<coefficient> <pauli-string>` per line, '#' comments.
/// Qubit count is inferred from the string length.
inline Hamiltonian parse_hamiltonian(std::istream& in) {
    std::vector<PauliTerm> terms;
    int n = -1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double coeff;
        std::string labels;
        if (!(ls >> coeff)) {
            std::string tok;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw std::invalid_argument("Hamiltonian file: bad line " +
                                        std::to_string(lineno));
        }
        if (!(ls >> labels))
            throw std::invalid_argument("Hamiltonian file: missing Pauli string on line " +
                                        std::to_string(lineno));
        PauliString ps(labels);
        if (n < 0) n = ps.num_qubits();
        if (ps.num_qubits() != n)
            throw std::invalid_argument("Hamiltonian file: inconsistent qubit count on line " +
                                        std::to_string(lineno));
        terms.push_back({coeff, std::move(ps)});
    }
    if (n < 0) throw std::invalid_argument("Hamiltonian file: no terms");
    return Hamiltonian(n, std::move(terms));
}

inline void write_hamiltonian(std::ostream& out, const Hamiltonian& ham) {
    char buf[64];
    for (const auto& t : ham.terms()) {
        std::snprintf(buf, sizeof(buf), "%.17g", t.coefficient);
        out << buf << ' ' << t.string.to_string() << '\n';
    }
}

}  // namespace stoq
