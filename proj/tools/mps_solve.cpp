// Reference shim for the external-solver adapter: reads a free-format MPS
// file, solves it with the built-in simplex and writes the solution-file
// grammar (status / objective / name value lines). Wire it up as
//   command_template = "ldslab-mps-solve {mps} {sol}"
// or use it as a template for a shim around a real solver.

#include <fstream>
#include <iostream>
#include <string>

#include "ldslab/mps.hpp"
#include "ldslab/simplex.hpp"

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: ldslab-mps-solve <model.mps> <model.sol>\n";
    return 64;
  }
  try {
    const ldslab::LpModel model = ldslab::parse_mps(argv[1]);
    const ldslab::Solution solution = ldslab::solve_reference(model);

    std::ofstream out(argv[2]);
    if (!out) {
      std::cerr << "cannot open '" << argv[2] << "' for writing\n";
      return 1;
    }
    out << "status " << ldslab::to_string(solution.status) << "\n";
    out.precision(17);
    out << "objective " << solution.objective << "\n";
    if (solution.has_values()) {
      for (int j = 0; j < model.num_vars(); ++j) {
        out << model.variable(j).name << " " << solution.values[j] << "\n";
      }
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
