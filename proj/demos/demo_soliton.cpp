// Builds one gap-soliton profile and prints its invariants.

#include <iostream>

#include <gapspec/gapspec.hpp>

int main() {
  using namespace gapspec;

  const PotentialParams p = kerr_potential(0.0);
  const double omega = 0.5;
  const SolitonParams sp(omega);
  const ChebGrid grid = build_grid(256, default_halfwidth(omega));

  const SolitonProfile profile = soliton_appendix_a(grid, sp, p);
  const double residual = ode_residual(profile, p);
  const ConservedQuantities cons = conserved_quantities(profile, p);

  std::cout << "omega            " << fmt15(omega) << "\n";
  std::cout << "branch           " << to_string(profile.branch) << "\n";
  std::cout << "halfwidth        " << fmt15(grid.halfwidth) << "\n";
  std::cout << "ode residual     " << fmt15(residual) << "\n";
  std::cout << "charge Q         " << fmt15(cons.Q) << "\n";
  std::cout << "momentum P       " << fmt15(cons.P) << "\n";
  std::cout << "energy H         " << fmt15(cons.H) << "\n";
  std::cout << "Lambda = H+wQ    " << fmt15(cons.Lambda) << "\n";

  // closed form and reconstruction agree pointwise
  const SolitonProfile closed = soliton_closed_form(grid, sp, ModelAlias{ModelAlias::Kind::kerr, 0.0});
  double diff = 0.0;
  for (int j = 0; j < profile.u0.size(); ++j)
    diff = std::max(diff, std::abs(profile.u0(j) - closed.u0(j)));
  std::cout << "closed-form gap  " << fmt15(diff) << "\n";
  return 0;
}
