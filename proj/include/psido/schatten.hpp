#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

#include "psido/core.hpp"
#include "psido/quantize.hpp"

namespace psido {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SingularSpectrum {
    std::vector<double> values;  // descending, >= 0
    std::string source;
};

SingularSpectrum singular_values(const Eigen::MatrixXcd& M, const std::string& source = "");
SingularSpectrum singular_values(const OperatorMatrix& M);

struct QNorm {
    double value = 0.0;
    // sum of s_k^q over the values dropped by the tail cut
    double tail_qmass = 0.0;
    double kept_qmass = 0.0;
    std::size_t kept = 0;
    bool zero = false;
};

constexpr double kDefaultTailCut = 1e-10;

// (sum_{s_k >= cut * s_1} s_k^q)^{1/q}. q may exceed 1 (plain sum); q = inf gives s_1.
QNorm qnorm(const SingularSpectrum& s, double q, double tail_cut = kDefaultTailCut);
double schatten_norm(const Eigen::MatrixXcd& M, double q, double tail_cut = 0.0);

struct InequalityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    // (rhs - lhs) / max(rhs, tiny); nonnegative when the inequality holds
    double margin = 0.0;
    bool holds = false;
};

// ||A + B||^q <= ||A||^q + ||B||^q, 0 < q <= 1.
InequalityReport check_triangle(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, double q);
InequalityReport check_triangle(const OperatorMatrix& A, const OperatorMatrix& B, double q);
// ||AB||_q <= ||A||_{q1} ||B||_{q2}, 1/q = 1/q1 + 1/q2; q1 or q2 may be kInf.
InequalityReport check_holder(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, double q1, double q2);
InequalityReport check_holder(const OperatorMatrix& A, const OperatorMatrix& B, double q1, double q2);

void write_spectrum_csv(const SingularSpectrum& s, const std::string& path);

}  // namespace psido
