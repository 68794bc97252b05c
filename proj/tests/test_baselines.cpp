#include <catch_amalgamated.hpp>
#include <algorithm>
#include <map>
#include <random>

#include "stoq/analysis.hpp"
#include "stoq/baselines.hpp"

using namespace stoq;

namespace {
double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}
}  // namespace

TEST_CASE("randomized_trotter gate count and duration") {
    Hamiltonian h5 = ising_preset("ising5");
    std::mt19937_64 rng(1);
    auto seq = randomized_trotter(h5, 0.5, 10, rng);
    CHECK(seq.size() == 90);
    CHECK(total_time(seq) == Catch::Approx(4.5).margin(1e-12));
    for (const auto& inst : seq.instances)
        CHECK(*inst.duration == Catch::Approx(0.05).margin(1e-15));
}

TEST_CASE("randomized_trotter emits each term once per step") {
    Hamiltonian h5 = ising_preset("ising5");
    std::mt19937_64 rng(2);
    auto seq = randomized_trotter(h5, 0.5, 4, rng);
    const size_t k = h5.terms().size();
    for (int step = 0; step < 4; ++step) {
        std::map<std::string, int> counts;
        for (size_t i = step * k; i < (step + 1) * k; ++i)
            counts[seq.instances[i].spec_id]++;
        CHECK(counts.size() == k);
        for (const auto& [id, c] : counts) CHECK(c == 1);
    }
}

TEST_CASE("randomized_trotter accuracy improves with steps") {
    Hamiltonian h2 = ising_preset("ising2");
    ComplexMatrix target = h2.time_evolution(0.5);
    std::map<int, std::vector<double>> costs;
    for (int steps : {1, 2, 5, 10, 20}) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            std::mt19937_64 rng(seed);
            auto seq = randomized_trotter(h2, 0.5, steps, rng);
            costs[steps].push_back(cost(target, sequence_product(seq)));
        }
    }
    CHECK(median(costs[20]) < median(costs[1]));
}

TEST_CASE("randomized_trotter is exact for a single term") {
    Hamiltonian h(2, {{1.3, PauliString("XY")}});
    ComplexMatrix target = h.time_evolution(0.5);
    std::mt19937_64 rng(3);
    auto seq = randomized_trotter(h, 0.5, 3, rng);
    CHECK(cost(target, sequence_product(seq)) < 1e-12);
}

TEST_CASE("qdrift durations and total time") {
    Hamiltonian h5 = ising_preset("ising5");
    std::mt19937_64 rng(4);
    auto seq = qdrift(h5, 0.5, 1000, rng);
    CHECK(seq.size() == 1000);
    CHECK(total_time(seq) == Catch::Approx(5.5).margin(1e-12));
}

TEST_CASE("qdrift sampling frequencies follow coefficient weights") {
    Hamiltonian h5 = ising_preset("ising5");
    const double lambda = h5.lambda_norm();
    std::mt19937_64 rng(5);
    auto seq = qdrift(h5, 0.5, 10000, rng);

    std::map<std::string, int> counts;
    for (const auto& inst : seq.instances) counts[inst.spec_id]++;
    auto alphabet = seq.alphabet;
    for (size_t k = 0; k < h5.terms().size(); ++k) {
        const double p = std::abs(h5.terms()[k].coefficient) / lambda;
        const double expect = 10000 * p;
        const double sigma = std::sqrt(10000 * p * (1 - p));
        CHECK(std::abs(counts[alphabet->specs()[k].id] - expect) < 5 * sigma);
    }
}

TEST_CASE("qdrift accuracy improves with repetitions") {
    Hamiltonian h2 = ising_preset("ising2");
    ComplexMatrix target = h2.time_evolution(0.5);
    std::map<int, std::vector<double>> costs;
    for (int reps : {100, 300, 1000}) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            std::mt19937_64 rng(seed);
            auto seq = qdrift(h2, 0.5, reps, rng);
            costs[reps].push_back(cost(target, sequence_product(seq)));
        }
    }
    CHECK(median(costs[300]) < median(costs[100]));
    CHECK(median(costs[1000]) < median(costs[300]));
}

TEST_CASE("qdrift is exact for a single term") {
    Hamiltonian h(2, {{1.3, PauliString("XY")}});
    ComplexMatrix target = h.time_evolution(0.5);
    std::mt19937_64 rng(6);
    auto seq = qdrift(h, 0.5, 50, rng);
    CHECK(cost(target, sequence_product(seq)) < 1e-12);
}

TEST_CASE("negative coefficients fold into the time sign") {
    Hamiltonian h(2, {{-1.1, PauliString("XX")}});
    ComplexMatrix target = h.time_evolution(0.5);
    std::mt19937_64 rng(7);
    auto seq = qdrift(h, 0.5, 20, rng);
    CHECK(cost(target, sequence_product(seq)) < 1e-12);
    for (const auto& inst : seq.instances) {
        CHECK(inst.params[0] < 0);
        CHECK(*inst.duration > 0);
    }
}

TEST_CASE("baseline edge cases") {
    Hamiltonian zero = ising_hamiltonian(2, {0}, {0, 0});
    std::mt19937_64 rng(8);
    CHECK_THROWS_AS(qdrift(zero, 0.5, 10, rng), std::invalid_argument);
    Hamiltonian h2 = ising_preset("ising2");
    CHECK_THROWS_AS(randomized_trotter(h2, 0.5, 0, rng),
                    std::invalid_argument);
}
