#include "nashlab/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nashlab/util.hpp"

namespace nashlab {

namespace {
constexpr const char* kMagic = "nashlab-checkpoint";
constexpr int kVersion = 1;
}  // namespace

void write_checkpoint(std::ostream& os, const std::string& game, const Solver& solver) {
  SolverStateDump d = solver.dump_state();
  os << kMagic << " " << kVersion << "\n";
  os << "game " << game << "\n";
  os << "solver " << solver_name(d.kind) << "\n";
  os << "iteration " << d.iteration << "\n";
  os << "eps " << format_double_hex(d.params.eps) << "\n";
  os << "lambda " << format_double_hex(d.params.lambda) << "\n";
  os << "seed " << d.params.seed << "\n";
  os << "random_init " << (d.params.random_init ? 1 : 0) << "\n";
  os << "init_range " << format_double_hex(d.params.init_range) << "\n";
  for (const auto& [name, table] : d.tables) {
    os << "table " << name << " " << table.size() << "\n";
    for (double v : table) os << format_double_hex(v) << "\n";
  }
  os << "end\n";
}

void write_checkpoint_file(const std::string& path, const std::string& game,
                           const Solver& solver) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write checkpoint: " + path);
  write_checkpoint(f, game, solver);
}

Checkpoint read_checkpoint(std::istream& is) {
  Checkpoint ck;
  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != kMagic)
    throw std::runtime_error("not a checkpoint file");
  if (version != kVersion)
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  std::string key;
  while (is >> key) {
    if (key == "end") break;
    if (key == "game") {
      is >> ck.game;
    } else if (key == "solver") {
      std::string s;
      is >> s;
      ck.state.kind = solver_from_name(s);
    } else if (key == "iteration") {
      is >> ck.state.iteration;
    } else if (key == "eps" || key == "lambda" || key == "init_range") {
      std::string v;
      is >> v;
      double d;
      if (!parse_double(v, d)) throw std::runtime_error("bad checkpoint number: " + v);
      if (key == "eps") ck.state.params.eps = d;
      else if (key == "lambda") ck.state.params.lambda = d;
      else ck.state.params.init_range = d;
    } else if (key == "seed") {
      is >> ck.state.params.seed;
    } else if (key == "random_init") {
      int v;
      is >> v;
      ck.state.params.random_init = v != 0;
    } else if (key == "table") {
      std::string name;
      size_t n;
      is >> name >> n;
      std::vector<double> t(n);
      for (size_t i = 0; i < n; ++i) {
        std::string v;
        is >> v;
        if (!parse_double(v, t[i]))
          throw std::runtime_error("bad checkpoint table entry: " + v);
      }
      ck.state.tables.emplace_back(name, std::move(t));
    } else {
      throw std::runtime_error("unknown checkpoint key: " + key);
    }
  }
  return ck;
}

Checkpoint read_checkpoint_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read checkpoint: " + path);
  return read_checkpoint(f);
}

std::unique_ptr<Solver> restore_solver(const GameTree& tree, const Checkpoint& ck) {
  auto solver = make_solver(tree, ck.state.kind, ck.state.params);
  solver->load_state(ck.state);
  return solver;
}

}  // namespace nashlab
