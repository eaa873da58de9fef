// Emits an interpolation plan JSON for the assumption-only regime: every
// marginal at the admissibility cap (3*Delta)^-3 for Delta = max(5, 1/(6*delta)).
// Used to (re)generate the plan files shipped under data/.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "probint/interpolate.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Emit an interpolation plan for the assumption-only regime"};
  double delta = 1.0 / 30.0;
  double epsilon = 1e-4;
  int n = 8;
  std::string out_path;
  app.add_option("--delta", delta, "Reporting width 1/(6*Delta)");
  app.add_option("--epsilon", epsilon, "Accuracy target in (0,1)");
  app.add_option("--n", n, "Event count the plan must cover");
  app.add_option("output", out_path, "Output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const probint::interpolate::InterpolationPlan plan =
        probint::interpolate::build_phi(delta, epsilon, n);
    const std::string text = plan.to_json_string();
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path);
      if (!out) {
        std::cerr << "cannot open '" << out_path << "' for writing\n";
        return 1;
      }
      out << text;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
