#include "psido/schatten.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace psido {

SingularSpectrum singular_values(const Eigen::MatrixXcd& M, const std::string& source) {
    SingularSpectrum s;
    s.source = source;
    if (M.size() == 0) return s;
    if (!M.allFinite()) throw NumericalError("non-finite entries in " + (source.empty() ? "matrix" : source));
    Eigen::MatrixXcd A = M;  // zgesdd overwrites its input
    const lapack_int m = static_cast<lapack_int>(A.rows()), n = static_cast<lapack_int>(A.cols());
    std::vector<double> sv(std::min(m, n));
    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, reinterpret_cast<lapack_complex_double*>(A.data()),
                                           m, sv.data(), nullptr, 1, nullptr, 1);
    if (info != 0)
        throw NumericalError("SVD did not converge (info=" + std::to_string(info) + ") for " +
                             (source.empty() ? "matrix" : source));
    std::sort(sv.begin(), sv.end(), std::greater<>());
    for (auto& v : sv) v = std::max(v, 0.0);
    s.values = std::move(sv);
    return s;
}

SingularSpectrum singular_values(const OperatorMatrix& M) { return singular_values(M.entries, M.provenance); }

QNorm qnorm(const SingularSpectrum& s, double q, double tail_cut) {
    if (!(q > 0.0)) throw InvalidArgument("q must be positive");
    if (!(tail_cut >= 0.0)) throw InvalidArgument("tail_cut must be nonnegative");
    QNorm r;
    const double s1 = s.values.empty() ? 0.0 : s.values.front();
    if (s1 == 0.0) {
        r.zero = true;
        return r;
    }
    if (std::isinf(q)) {
        r.value = s1;
        r.kept = 1;
        return r;
    }
    const double cut = tail_cut * s1;
    // Sum smallest first for accuracy.
    for (auto it = s.values.rbegin(); it != s.values.rend(); ++it) {
        const double v = std::pow(*it / s1, q);
        if (*it >= cut) {
            r.kept_qmass += v;
            ++r.kept;
        } else {
            r.tail_qmass += v;
        }
    }
    const double scale = std::pow(s1, q);
    r.kept_qmass *= scale;
    r.tail_qmass *= scale;
    r.value = s1 * std::pow(r.kept_qmass / scale, 1.0 / q);
    return r;
}

double schatten_norm(const Eigen::MatrixXcd& M, double q, double tail_cut) {
    return qnorm(singular_values(M), q, tail_cut).value;
}

namespace {

InequalityReport finish(double lhs, double rhs) {
    InequalityReport r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs > 0.0 ? (rhs - lhs) / rhs : (lhs == 0.0 ? 0.0 : -kInf);
    r.holds = r.margin >= -1e-10;
    return r;
}

}  // namespace

InequalityReport check_triangle(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, double q) {
    if (!(q > 0.0 && q <= 1.0)) throw InvalidArgument("triangle check needs 0 < q <= 1");
    if (A.rows() != B.rows() || A.cols() != B.cols()) throw InvalidArgument("triangle check: shape mismatch");
    const double a = std::pow(schatten_norm(A, q), q);
    const double b = std::pow(schatten_norm(B, q), q);
    const double s = std::pow(schatten_norm(A + B, q), q);
    return finish(s, a + b);
}

InequalityReport check_triangle(const OperatorMatrix& A, const OperatorMatrix& B, double q) {
    if (A.grid != B.grid || A.rows != B.rows || A.cols != B.cols) throw GridMismatch("triangle check: index sets differ");
    return check_triangle(A.entries, B.entries, q);
}

InequalityReport check_holder(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, double q1, double q2) {
    if (!(q1 > 0.0) || !(q2 > 0.0)) throw InvalidArgument("holder check: exponents must be positive");
    const double inv = (std::isinf(q1) ? 0.0 : 1.0 / q1) + (std::isinf(q2) ? 0.0 : 1.0 / q2);
    if (inv < 1.0 - 1e-12) throw InvalidArgument("holder check: 1/q1 + 1/q2 must be >= 1 so that q <= 1");
    if (A.cols() != B.rows()) throw InvalidArgument("holder check: inner dimensions differ");
    const double q = 1.0 / inv;
    const double lhs = schatten_norm(A * B, q);
    return finish(lhs, schatten_norm(A, q1) * schatten_norm(B, q2));
}

InequalityReport check_holder(const OperatorMatrix& A, const OperatorMatrix& B, double q1, double q2) {
    if (A.column_grid() != B.grid || A.cols != B.rows) throw GridMismatch("holder check: inner index sets differ");
    return check_holder(A.entries, B.entries, q1, q2);
}

void write_spectrum_csv(const SingularSpectrum& s, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    os << "index,value\n";
    os.precision(17);
    for (std::size_t k = 0; k < s.values.size(); ++k) os << k + 1 << ',' << s.values[k] << '\n';
}

}  // namespace psido
