#pragma once

#include <functional>

#include "covlab/error.hpp"

namespace covlab {

/// Adaptive Simpson integration of f over [a, b] with Richardson error
/// control: a panel is accepted when |S_half - S| / 15 meets its share of
/// `tol`. Exact on cubics. Throws NumericError carrying the achieved error
/// estimate if the subdivision budget runs out.
double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                           double tol = 1e-12);

}  // namespace covlab
