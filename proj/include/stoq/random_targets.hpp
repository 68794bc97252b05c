#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "stoq/matrix.hpp"
#include "stoq/sequence.hpp"

namespace stoq {

/// Haar-distributed random unitary: complex-Gaussian matrix, QR, with the
/// triangular factor's diagonal phases folded back into Q so the result is
/// exactly Haar rather than merely unitary.
inline ComplexMatrix haar_random_unitary(int dim, std::mt19937_64& rng) {
    if (dim < 1)
        throw std::invalid_argument("haar_random_unitary: dim must be >= 1");
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix z(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            const double re = g(rng), im = g(rng);
            z(i, j) = Complex(re, im);
        }
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= a > 0 ? d / a : Complex(1, 0);
    }
    return q;
}

/// Random circuit of round(avg_depth * n) gates drawn from the alphabet;
/// average depth = gate count / qubit count. Rounding is half-to-even.
inline CompiledSequence random_circuit(
    int n, double avg_depth, std::shared_ptr<const GateAlphabet> alphabet,
    std::mt19937_64& rng) {
    const double exact = avg_depth * n;
    if (exact < 0.5)
        throw std::invalid_argument("random_circuit: avg_depth*n must round to >= 1");
    const long count = std::lrint(exact);  // half-to-even under default rounding
    CompiledSequence seq;
    seq.n = n;
    seq.alphabet = alphabet;
    seq.instances.reserve(count);
    for (long i = 0; i < count; ++i)
        seq.instances.push_back(sample_instance(*alphabet, rng));
    return seq;
}

/// Plain-text matrix export: `dim` header, then row-major `re,im` lines,
/// 17 significant digits.
inline void write_matrix(std::ostream& out, const ComplexMatrix& m) {
    out << m.rows() << '\n';
    char buf[64];
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g", m(i, j).real(),
                          m(i, j).imag());
            out << buf << '\n';
        }
}

inline ComplexMatrix parse_matrix(std::istream& in) {
    Eigen::Index dim = 0;
    if (!(in >> dim) || dim < 1)
        throw std::invalid_argument("matrix file: bad dimension header");
    ComplexMatrix m(dim, dim);
    std::string line;
    std::getline(in, line);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) {
            if (!std::getline(in, line))
                throw std::invalid_argument("matrix file: truncated");
            double re = 0, im = 0;
            if (std::sscanf(line.c_str(), "%lf,%lf", &re, &im) != 2)
                throw std::invalid_argument("matrix file: bad entry line");
            m(i, j) = Complex(re, im);
        }
    return m;
}

}  // namespace stoq
