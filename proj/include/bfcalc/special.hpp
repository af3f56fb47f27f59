#pragma once

#include "bfcalc/types.hpp"

namespace bfcalc {

// e^w - 1 without cancellation near w = 0.
Complex cexpm1(Complex w);

// (1 - e^{-w}) / w, equal to 1 at w = 0.
Complex one_minus_exp_over(Complex w);

// e^w E_n(w) for n >= 1 and w off the closed negative axis.
Complex expint_scaled(int n, Complex w);

// log(1 + z) without cancellation near z = 0.
Complex clog1p(Complex z);

// Principal-branch argument, with arg(0) = 0.
double arg0(Complex z);

}  // namespace bfcalc
