#pragma once

#include <complex>
#include <numbers>
#include <vector>

namespace fcp {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

inline constexpr double kPi = std::numbers::pi;

double sup_norm(const CVec& v);
double sup_norm(const RVec& v);

}  // namespace fcp
