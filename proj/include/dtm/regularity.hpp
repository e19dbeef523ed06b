#pragma once

#include <cstddef>
#include <vector>

#include "dtm/empirical.hpp"

namespace dtm {

// Monotone tabulated upper bound on the modulus of continuity of a quantile
// function. Values at the grid, plus the right-limit at zero.
struct ModulusFunction {
  std::vector<double> grid;    // increasing v values in (0, 1]
  std::vector<double> values;  // nondecreasing, nonnegative
  double zero_plus = 0.0;      // omega(0+) = omega(0)

  void validate() const;

  // Linear interpolation anchored at (0, zero_plus); constant beyond grid.back().
  double eval(double v) const;
  double at_one() const { return eval(1.0); }

  // Generalized inverse with the boundary extensions: 0 on [0, omega(0)],
  // 1 above omega(1). Plateaus are broken by a 1e-12*v tilt before inversion.
  double inverse(double t) const;
};

// Exact modulus of the tabulated quantile at each requested window width:
// sup over |u - u'| <= v of |F^-1(u) - F^-1(u')|. zero_plus is the largest
// single-step jump of the tabulation.
ModulusFunction modulus_of_continuity(const TabulatedQuantile& q,
                                      const std::vector<double>& v_grid);

// Smallest concave nondecreasing function dominating m on its grid
// (upper hull of the graph anchored at (0, zero_plus)). The output
// satisfies omega(v)/v nonincreasing on the grid.
ModulusFunction least_concave_majorant(const ModulusFunction& m);

// Rate functional omega(mass)/sqrt(mass).
double psi(const ModulusFunction& m, double mass);

// Rate functional (F^-1(mass) - F^-1(0))/sqrt(mass).
double psi_tilde(const TabulatedQuantile& q, double mass);

// Geometric parameters of an (a,b)-standard measure seen from x.
struct AbStandardParams {
  double a = 1.0;
  double b = 1.0;
  double dist_xK = 0.0;  // ||K - x||
  double haus_xK = 0.0;  // Haus({x}, K)
};

// Quantile-increment bound F^-1(u) - F^-1(0) <= r (u/a)^{1/b} [(u/a)^{1/b} + ||K-x||]^{r-1}.
double ab_quantile_bound(const AbStandardParams& p, double r, double u);

// Modulus bound for connected supports: omega(h) <= r (h/a)^{1/b} Haus({x},K)^{r-1}.
double ab_modulus_bound(const AbStandardParams& p, double r, double h);

}  // namespace dtm
