#pragma once

#include <vector>

namespace stochnewton {

// Finite Markov chain driven by labeled deterministic maps: label j fires
// with probability label_probs[j] and moves state s to label_maps[j][s].
struct LabeledChain {
    std::vector<double> label_probs;
    std::vector<std::vector<int>> label_maps;

    int state_count() const {
        return label_maps.empty() ? 0 : static_cast<int>(label_maps[0].size());
    }
    int label_count() const { return static_cast<int>(label_maps.size()); }
};

// One closed (recurrent) communicating class with its cyclic structure.
struct ChainClass {
    std::vector<int> states;  // ascending
    int period = 1;
    // Partition of `states` ordered so each label maps class k into k+1.
    std::vector<std::vector<int>> cyclic_classes;
    // Stationary vector of the period-step chain on each cyclic class,
    // aligned with cyclic_classes[k]; the one-step operator pushes
    // stationary[k] onto stationary[k+1].
    std::vector<std::vector<double>> stationary;
};

struct ChainDecomposition {
    std::vector<ChainClass> closed_classes;
    std::vector<int> transient_states;
    std::vector<std::vector<double>> one_step;  // full transition matrix
};

ChainDecomposition decompose_chain(const LabeledChain& chain);

// All simple cycles (as vertex sequences, minimal vertex first) inside the
// sub-digraph induced by `states`; returns false if the enumeration budget
// was exhausted before completing.
bool enumerate_simple_cycles(const std::vector<std::vector<char>>& adjacency,
                             const std::vector<int>& states, long budget,
                             std::vector<std::vector<int>>& out);

}  // namespace stochnewton
