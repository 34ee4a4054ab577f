#pragma once

#include <vector>

namespace quantsine {

// theta1 multiplies -cos(k_i), theta2 multiplies +sin(k_i)
struct ThetaEstimate {
    double theta1 = 0.0;
    double theta2 = 0.0;
};

struct FitResult {
    ThetaEstimate theta;
    double amp_sq = 0.0;
    double amp = 0.0;
};

// Closed-form LS projection for the coherent sine design, k_i = 2 pi lambda i / N:
//   theta1 = -(2/N) sum y_i cos k_i,  theta2 = +(2/N) sum y_i sin k_i.
// Requires N >= 3, lambda >= 1 and N not dividing 2*lambda (degenerate design).
ThetaEstimate fit_theta(const std::vector<double>& y, int lambda, int n_samples);

double amp_sq_estimate(const ThetaEstimate& t);

FitResult fit(const std::vector<double>& y, int lambda, int n_samples);

// O(N^2) double-sum form (4/N^2) sum_i sum_u y_i y_u cos(k_i - k_u); agrees with
// amp_sq_estimate to ~1e-12 relative and exists purely as a debug cross-check.
double amp_sq_double_sum(const std::vector<double>& y, int lambda, int n_samples);

// General least squares (H^T H)^{-1} H^T y by partially pivoted elimination.
// h is row-major N x p with p <= 3. Throws std::domain_error when the normal
// matrix is singular at working precision.
std::vector<double> general_ls_solve(const std::vector<double>& h,
                                     const std::vector<double>& y, int p);

}  // namespace quantsine
