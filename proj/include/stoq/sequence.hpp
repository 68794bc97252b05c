#pragma once

#include <memory>
#include <vector>

#include "stoq/gates.hpp"

namespace stoq {

/// An ordered gate sequence whose product (applied left-multiplicatively:
/// appending G multiplies the running product by G on the left, so the
/// product of [G1, ..., GM] is GM...G1) approximates a target unitary.
struct CompiledSequence {
    int n = 0;
    std::shared_ptr<const GateAlphabet> alphabet;
    std::vector<GateInstance> instances;

    size_t size() const { return instances.size(); }
};

}  // namespace stoq
