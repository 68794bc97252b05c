#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stoq/hamiltonian.hpp"
#include "stoq/matrix.hpp"

namespace stoq {

enum class GateKind { FixedMatrix, ParameterizedBuilder, HamiltonianTerm };

struct ParamRange {
    double lo = 0.0;
    double hi = 0.0;
};

/// A gate family: fixed matrix, parameterized builder, or short
/// Hamiltonian-term evolution e^{i c P t}. The builder produces the matrix
/// on the support subspace only (dim 2^|support|), with the first support
/// qubit as the most-significant factor.
struct GateSpec {
    std::string id;
    GateKind kind = GateKind::FixedMatrix;
    std::vector<int> support;  // 1-based qubit indices, distinct
    std::vector<ParamRange> param_ranges;
    bool has_duration = false;  // duration = |t| (first parameter)
    std::function<ComplexMatrix(const std::vector<double>&)> build;
};

struct GateInstance {
    std::string spec_id;
    std::vector<int> support;
    std::vector<double> params;
    std::optional<double> duration;
};

class GateAlphabet {
  public:
    GateAlphabet(int n, std::vector<GateSpec> specs)
        : n_(n), specs_(std::move(specs)) {
        if (specs_.empty())
            throw std::invalid_argument("GateAlphabet: no specs");
        for (size_t k = 0; k < specs_.size(); ++k) {
            const auto& s = specs_[k];
            for (int q : s.support)
                if (q < 1 || q > n_)
                    throw std::invalid_argument("GateAlphabet: support outside [1,n]");
            if (!index_.emplace(s.id, k).second)
                throw std::invalid_argument("GateAlphabet: duplicate spec id " + s.id);
        }
    }

    int num_qubits() const { return n_; }
    const std::vector<GateSpec>& specs() const { return specs_; }

    const GateSpec& find(const std::string& id) const {
        auto it = index_.find(id);
        if (it == index_.end())
            throw std::invalid_argument("GateAlphabet: unknown spec id " + id);
        return specs_[it->second];
    }

  private:
    int n_;
    std::vector<GateSpec> specs_;
    std::map<std::string, size_t> index_;
};

/// One spec per Hamiltonian term H_k, realizing e^{i H_k t} with
/// t in [-epsilon*tau, epsilon*tau].
inline GateAlphabet hamiltonian_term_alphabet(const Hamiltonian& ham,
                                              double epsilon, double tau) {
    if (epsilon <= 0 || tau <= 0)
        throw std::invalid_argument("hamiltonian_term_alphabet: epsilon, tau must be positive");
    if (ham.terms().empty())
        throw std::invalid_argument("hamiltonian_term_alphabet: empty Hamiltonian");
    const double bound = epsilon * tau;
    std::vector<GateSpec> specs;
    for (const auto& term : ham.terms()) {
        auto sup = term.string.support();
        std::string label;
        if (sup.empty()) {
            // all-identity term contributes only a global phase; realize on qubit 1
            sup = {1};
            label = "I_1";
        } else {
            for (int q : sup)
                label.push_back(static_cast<char>(term.string.ops[q - 1]));
            for (int q : sup) label += "_" + std::to_string(q);
        }
        std::vector<Pauli> small;
        if (term.string.support().empty()) {
            small = {Pauli::I};
        } else {
            for (int q : term.string.support())
                small.push_back(term.string.ops[q - 1]);
        }
        const double coeff = term.coefficient;
        ComplexMatrix local = coeff * PauliString(small).to_matrix();
        GateSpec spec;
        spec.id = label;
        spec.kind = GateKind::HamiltonianTerm;
        spec.support = sup;
        spec.param_ranges = {{-bound, bound}};
        spec.has_duration = true;
        spec.build = [local](const std::vector<double>& p) {
            return hermitian_expi(local, p[0]);
        };
        specs.push_back(std::move(spec));
    }
    return GateAlphabet(ham.num_qubits(), std::move(specs));
}

/// Parameterized single-qubit rotation R_phi(theta).
inline ComplexMatrix rotation_gate(double theta, double phi) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    ComplexMatrix m(2, 2);
    m << c, std::exp(Complex(0, -(M_PI / 2.0 + phi))) * s,
        std::exp(Complex(0, -(M_PI / 2.0 - phi))) * s, c;
    return m;
}

/// Parameterized two-qubit entangling gate XX(theta).
inline ComplexMatrix xx_gate(double theta) {
    const double c = std::cos(theta);
    const Complex is(0, -std::sin(theta));
    ComplexMatrix m(4, 4);
    m << c, 0, 0, is,
        0, c, is, 0,
        0, is, c, 0,
        is, 0, 0, c;
    return m;
}

/// Universal trapped-ion-style alphabet: one R spec per qubit and one XX
/// spec per unordered qubit pair. Durations are undefined for these gates.
inline GateAlphabet universal_alphabet(int n) {
    if (n < 1) throw std::invalid_argument("universal_alphabet: n < 1");
    constexpr double two_pi = 2.0 * M_PI;
    std::vector<GateSpec> specs;
    for (int q = 1; q <= n; ++q) {
        GateSpec spec;
        spec.id = "R_" + std::to_string(q);
        spec.kind = GateKind::ParameterizedBuilder;
        spec.support = {q};
        spec.param_ranges = {{0.0, two_pi}, {0.0, two_pi}};
        spec.build = [](const std::vector<double>& p) {
            return rotation_gate(p[0], p[1]);
        };
        specs.push_back(std::move(spec));
    }
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            GateSpec spec;
            spec.id = "XX_" + std::to_string(i) + "_" + std::to_string(j);
            spec.kind = GateKind::ParameterizedBuilder;
            spec.support = {i, j};
            spec.param_ranges = {{0.0, two_pi}};
            spec.build = [](const std::vector<double>& p) {
                return xx_gate(p[0]);
            };
            specs.push_back(std::move(spec));
        }
    return GateAlphabet(n, std::move(specs));
}

/// Uniform spec choice, each parameter uniform over its range.
inline GateInstance sample_instance(const GateAlphabet& alphabet,
                                    std::mt19937_64& rng) {
    std::uniform_int_distribution<size_t> pick(0, alphabet.specs().size() - 1);
    const GateSpec& spec = alphabet.specs()[pick(rng)];
    GateInstance inst;
    inst.spec_id = spec.id;
    inst.support = spec.support;
    for (const auto& r : spec.param_ranges) {
        std::uniform_real_distribution<double> u(r.lo, r.hi);
        inst.params.push_back(u(rng));
    }
    if (spec.has_duration) inst.duration = std::abs(inst.params[0]);
    return inst;
}

/// Embeds a gate acting on `support` (dim 2^k) into the full 2^n space,
/// identity on the remaining qubits. Qubit 1 is the most-significant bit.
inline ComplexMatrix embed_gate(const ComplexMatrix& g,
                                const std::vector<int>& support, int n) {
    const int k = static_cast<int>(support.size());
    const Eigen::Index sub = Eigen::Index{1} << k;
    if (g.rows() != sub || g.cols() != sub)
        throw std::invalid_argument("embed_gate: matrix/support size mismatch");
    std::vector<int> shift;  // bit position of each support qubit, MSB-first order
    std::vector<bool> in_support(n + 1, false);
    for (int q : support) {
        if (q < 1 || q > n || in_support[q])
            throw std::invalid_argument("embed_gate: bad support");
        in_support[q] = true;
        shift.push_back(n - q);
    }
    std::vector<int> rest_shift;
    for (int q = 1; q <= n; ++q)
        if (!in_support[q]) rest_shift.push_back(n - q);

    const Eigen::Index dim = Eigen::Index{1} << n;
    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    const Eigen::Index rest = Eigen::Index{1} << rest_shift.size();
    for (Eigen::Index m = 0; m < rest; ++m) {
        Eigen::Index base = 0;
        for (size_t b = 0; b < rest_shift.size(); ++b)
            if ((m >> b) & 1) base |= Eigen::Index{1} << rest_shift[b];
        for (Eigen::Index rs = 0; rs < sub; ++rs) {
            Eigen::Index row = base;
            for (int b = 0; b < k; ++b)
                if ((rs >> (k - 1 - b)) & 1) row |= Eigen::Index{1} << shift[b];
            for (Eigen::Index cs = 0; cs < sub; ++cs) {
                Eigen::Index col = base;
                for (int b = 0; b < k; ++b)
                    if ((cs >> (k - 1 - b)) & 1) col |= Eigen::Index{1} << shift[b];
                out(row, col) = g(rs, cs);
            }
        }
    }
    return out;
}

/// Full 2^n unitary for an instance: the gate on its support, identity
/// elsewhere.
inline ComplexMatrix instance_matrix(const GateInstance& inst,
                                     const GateAlphabet& alphabet, int n) {
    const GateSpec& spec = alphabet.find(inst.spec_id);
    if (inst.params.size() != spec.param_ranges.size())
        throw std::invalid_argument("instance_matrix: wrong parameter count");
    for (size_t i = 0; i < inst.params.size(); ++i) {
        const auto& r = spec.param_ranges[i];
        if (inst.params[i] < r.lo || inst.params[i] > r.hi)
            throw std::invalid_argument("instance_matrix: parameter out of range");
    }
    return embed_gate(spec.build(inst.params), inst.support, n);
}

/// Sequence file line: `<spec_id> q=<i[,j]> p=<v1[,v2]>`, 12 fixed decimals.
inline void write_instance(std::ostream& out, const GateInstance& inst) {
    out << inst.spec_id << " q=";
    for (size_t i = 0; i < inst.support.size(); ++i) {
        if (i) out << ',';
        out << inst.support[i];
    }
    if (!inst.params.empty()) {
        out << " p=";
        char buf[32];
        for (size_t i = 0; i < inst.params.size(); ++i) {
            if (i) out << ',';
            std::snprintf(buf, sizeof(buf), "%.12f", inst.params[i]);
            out << buf;
        }
    }
    out << '\n';
}

inline void write_sequence(std::ostream& out,
                           const std::vector<GateInstance>& instances) {
    for (const auto& inst : instances) write_instance(out, inst);
}

inline std::vector<GateInstance> parse_sequence(std::istream& in,
                                                const GateAlphabet& alphabet) {
    std::vector<GateInstance> instances;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string id;
        if (!(ls >> id)) continue;
        GateInstance inst;
        inst.spec_id = id;
        std::string field;
        while (ls >> field) {
            if (field.rfind("q=", 0) == 0) {
                std::istringstream fs(field.substr(2));
                std::string tok;
                while (std::getline(fs, tok, ','))
                    inst.support.push_back(std::stoi(tok));
            } else if (field.rfind("p=", 0) == 0) {
                std::istringstream fs(field.substr(2));
                std::string tok;
                while (std::getline(fs, tok, ','))
                    inst.params.push_back(std::stod(tok));
            } else {
                throw std::invalid_argument("sequence file: bad field on line " +
                                            std::to_string(lineno));
            }
        }
        const GateSpec& spec = alphabet.find(id);
        if (spec.has_duration && !inst.params.empty())
            inst.duration = std::abs(inst.params[0]);
        instances.push_back(std::move(inst));
    }
    return instances;
}

}  // namespace stoq
