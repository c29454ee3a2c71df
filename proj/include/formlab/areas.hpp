#pragma once

#include <string>
#include <utility>
#include <vector>

#include "formlab/arith.hpp"
#include "formlab/aut_class.hpp"
#include "formlab/forms.hpp"

namespace formlab {

struct AreaPiece {
  std::string label;
  long double lo = 0, hi = 0;  // may be infinite
  long double value = 0;
  long double error = 0;
};

struct QuadratureResult {
  long double value = 0;
  long double abs_error_estimate = 0;
  std::vector<AreaPiece> pieces;
};

// 1e-8 up to degree 10, 1e-6 above.
long double default_area_tol(int degree);

// Area of {|F(x,y)| <= 1}, degree >= 3.
QuadratureResult area(const BinaryForm& F, long double tol);

// Sum of the areas over the members Q+_{d,nu} (resp. Q-), nu = 1..d+1. The combined single
// integral is returned as value, with one piece per member; the two must agree within 10 * tol.
QuadratureResult coef_qplus(int d, long double tol);
QuadratureResult coef_qminus(int d, long double tol);

// Area of L_{d,p} split into the left tail, the d-1 unit windows around 0..d-2, the middle stretch,
// the window around p and the right tail.
QuadratureResult area_L(int d, long p, long double tol);
std::vector<std::pair<std::string, long double>> area_L_pieces(int d, long p, long double tol);

Rat w_coeff(AutClass c);

}  // namespace formlab
