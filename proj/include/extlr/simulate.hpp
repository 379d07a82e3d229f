#pragma once

#include <iosfwd>
#include <set>
#include <vector>

#include "extlr/grammar.hpp"
#include "extlr/oracle.hpp"

namespace extlr {

struct SimOptions {
  bool trace = false;
  std::ostream* trace_out = nullptr;
};

struct SimStats {
  std::size_t nodes_created = 0;
  std::size_t edges_created = 0;
  std::vector<std::size_t> per_phase_created;  // node insertions per phase
};

// Runs the uncompressed stack-graph recognizer: every phase closes the graph
// under expansion and reduction, then the next token filters and advances
// the readable states. Accepts iff the finished start item survives to the
// last phase.
bool simulate(const Grammar& g, const std::vector<SymbolId>& input,
              const SimOptions& opts = {}, SimStats* stats = nullptr);

// Test hook: the configuration set after each phase's closure, as stacks of
// (production, dot) pairs capped at max_stack elements below the state.
// Directly comparable with explore_mg.
std::vector<std::set<MgConfig>> simulate_stacks(const Grammar& g,
                                                const std::vector<SymbolId>& input,
                                                int max_stack);

}  // namespace extlr
