// Sweeps a short omega range and prints isolated-eigenvalue counts per step.

#include <iostream>

#include <gapspec/gapspec.hpp>

int main() {
  using namespace gapspec;

  RunConfig cfg;
  cfg.potential = kerr_potential(0.0);
  cfg.grid.N = 128;
  cfg.tolerances.tol_band = 2.5e-4;
  cfg.tolerances.tol_match = 5e-3;

  const SweepResult result = sweep(cfg.potential, 0.55, 0.95, 5, cfg);

  std::cout << "omega        ip  rp  quartets  H+  H-\n";
  for (size_t i = 0; i < result.report.omega_values.size(); ++i) {
    const Counts& c = result.report.counts[i];
    std::cout << fmt15(result.report.omega_values[i]) << "  " << c.L_imag_pairs << "  "
              << c.L_real_pairs << "  " << c.L_quartets << "  " << c.Hplus_isolated
              << "  " << c.Hminus_isolated << "\n";
  }
  for (const SweepEvent& e : result.report.events)
    std::cout << "event " << to_string(e.kind) << " in (" << fmt15(e.bracket_lo) << ", "
              << fmt15(e.bracket_hi) << ")\n";
  return 0;
}
