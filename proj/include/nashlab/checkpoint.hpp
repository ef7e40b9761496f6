#pragma once

#include <iosfwd>
#include <string>

#include "nashlab/solvers.hpp"

namespace nashlab {

// Versioned text checkpoint; doubles are written as hexfloats so a
// save/load/save cycle is byte-identical.
struct Checkpoint {
  std::string game;
  SolverStateDump state;
};

void write_checkpoint(std::ostream& os, const std::string& game, const Solver& solver);
void write_checkpoint_file(const std::string& path, const std::string& game,
                           const Solver& solver);
Checkpoint read_checkpoint(std::istream& is);
Checkpoint read_checkpoint_file(const std::string& path);

// Builds the game named in the checkpoint and restores the solver onto it.
std::unique_ptr<Solver> restore_solver(const GameTree& tree, const Checkpoint& ck);

}  // namespace nashlab
