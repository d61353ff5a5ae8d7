#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "funnel/dag.hpp"
#include "funnel/labeling.hpp"

namespace funnel {

// All randomness goes through std::mt19937_64, whose output sequence is fixed
// by the C++ standard, and through the helpers below (the standard
// distributions are implementation-defined, so they are not used).
class rng {
public:
    explicit rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    // Uniform in [0, bound); bound > 0. Rejection sampling on the top bits.
    std::uint64_t below(std::uint64_t bound);
    // Uniform in [0, 1) with 53 random bits.
    double unit();

private:
    std::mt19937_64 engine_;
};

// SplitMix64 finalizer; derives independent seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index);

struct gen_params {
    std::size_t n = 0;
    double p = 0.0;
    std::size_t s = 0;
    std::uint64_t seed = 0;
};

struct planted_instance {
    dag graph;
    labeling labels;  // the planted funnel labeling
};

// Random funnel over the topological order 0..n-1:
//  1. each vertex is Fork or Merge with probability 1/2;
//  2. the j-th Fork (j earlier Forks) draws r uniform in [0, j]: r = j makes it
//     a root, otherwise it hangs below the r-th earlier Fork;
//  3. Merge vertices do the same from the back, pointing to later Merges;
//  4. ceil(p * P) of the P forward Fork->Merge pairs are added as arcs, chosen
//     uniformly without replacement (Floyd's algorithm).
// Throws domain_error unless n >= 1 and 0 <= p <= 1.
planted_instance generate_planted_funnel(const gen_params& params);

// Adds s distinct absent arcs (u,v), u < v, chosen uniformly. Throws
// not_enough_slots when fewer than s forward pairs are free.
dag add_noise_arcs(const dag& g, std::size_t s, std::uint64_t seed);

// Forks 0..floor(n/2)-1 as an out-star from 0, Merges as an in-star into
// n-1, and every Fork->Merge arc: floor(n^2/4) + n - 2 arcs.
dag extremal_funnel(std::size_t n);

// Literal: +v for variable v (1-based), -v for its negation.
struct cnf_formula {
    std::size_t variable_count = 0;
    std::vector<std::vector<int>> clauses;
};

// Every clause has exactly three literals over distinct variables in range.
void validate_3cnf(const cnf_formula& formula);

// Reads DIMACS CNF ("p cnf <vars> <clauses>", clauses terminated by 0).
cnf_formula parse_dimacs(std::string_view text);
std::string emit_dimacs(const cnf_formula& formula);

// Exhaustive satisfiability check; throws too_large above 20 variables.
bool sat_oracle(const cnf_formula& formula);

struct reduction {
    dag graph;
    std::size_t target = 0;  // 2m + n
};

// Variable x (0-based) owns vertices 6x + {0: x0, 1: xt, 2: xf, 3: x1, 4: x2,
// 5: x3}; clause c owns 6n + 5c + {0: c0, 1..4: c1..c4}. Arcs: xt->x0,
// xf->x0, x0->x1|x2|x3, ci->c0, and c0->xt (positive literal) or c0->xf
// (negative literal). Throws invalid_formula.
reduction reduce_3sat(const cnf_formula& formula);

}  // namespace funnel
