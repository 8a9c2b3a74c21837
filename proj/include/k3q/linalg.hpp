#pragma once

#include "k3q/qseries.hpp"
#include "k3q/rational.hpp"

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace k3q {

// An exact over-determined system turned out inconsistent: the target series
// does not lie in the candidate space (to the given precision).
struct MembershipError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace linalg {

using RMatrix = std::vector<std::vector<Rational>>;

// Fraction-free (Bareiss) forward elimination over the integers.
// M is mutated in place; returns false when some of the first `cols`
// columns admits no pivot (rank deficiency).
inline bool bareiss_forward(std::vector<std::vector<Integer>>& M, size_t cols) {
    const size_t rows = M.size();
    Integer prev(1);
    for (size_t k = 0; k < cols; ++k) {
        size_t p = k;
        while (p < rows && M[p][k] == 0) ++p;
        if (p == rows) return false;
        std::swap(M[p], M[k]);
        for (size_t i = k + 1; i < rows; ++i) {
            for (size_t j = k + 1; j < M[i].size(); ++j) {
                Integer t = M[i][j] * M[k][k] - M[i][k] * M[k][j];
                M[i][j] = t / prev;  // exact by the Bareiss identity
            }
            M[i][k] = 0;
        }
        prev = M[k][k];
    }
    return true;
}

// Solve A x = b exactly, where A has rows >= cols.
//  - PrecisionError: rank(A) < cols, the data does not pin down a unique x
//  - MembershipError: the (over-determined) system is inconsistent;
//    `row_label` names the offending equation in the message
template <typename RowLabel>
inline std::vector<Rational> solve_overdetermined(const RMatrix& A,
                                                  const std::vector<Rational>& b,
                                                  RowLabel&& row_label) {
    const size_t rows = A.size();
    if (rows == 0 || b.size() != rows) throw std::invalid_argument("solve: shape mismatch");
    const size_t cols = A[0].size();
    if (rows < cols) throw PrecisionError("solve: fewer equations than unknowns");

    // Scale each column (and the right-hand side) to integers.
    std::vector<Integer> colscale(cols + 1, Integer(1));
    for (size_t j = 0; j < cols; ++j)
        for (size_t i = 0; i < rows; ++i)
            colscale[j] = lcm(colscale[j], denominator(A[i][j]));
    for (size_t i = 0; i < rows; ++i)
        colscale[cols] = lcm(colscale[cols], denominator(b[i]));

    std::vector<std::vector<Integer>> M(rows, std::vector<Integer>(cols + 1));
    for (size_t i = 0; i < rows; ++i) {
        for (size_t j = 0; j < cols; ++j)
            M[i][j] = numerator(A[i][j]) * (colscale[j] / denominator(A[i][j]));
        M[i][cols] = numerator(b[i]) * (colscale[cols] / denominator(b[i]));
    }

    if (!bareiss_forward(M, cols))
        throw PrecisionError("solve: ambiguous system (window too small to certify)");

    // Back-substitution on the echelon rows, then undo the column scaling.
    std::vector<Rational> y(cols);
    for (size_t jj = cols; jj-- > 0;) {
        Rational acc(M[jj][cols]);
        for (size_t l = jj + 1; l < cols; ++l) acc -= Rational(M[jj][l]) * y[l];
        y[jj] = acc / Rational(M[jj][jj]);
    }
    std::vector<Rational> x(cols);
    for (size_t j = 0; j < cols; ++j)
        x[j] = y[j] * Rational(colscale[j]) / Rational(colscale[cols]);

    // Surplus equations must hold as well; verify every original row.
    for (size_t i = 0; i < rows; ++i) {
        Rational acc(0);
        for (size_t j = 0; j < cols; ++j) acc += A[i][j] * x[j];
        if (acc != b[i])
            throw MembershipError("membership failure at " + row_label(i));
    }
    return x;
}

inline bool full_column_rank(const RMatrix& A) {
    const size_t rows = A.size();
    if (rows == 0) return false;
    const size_t cols = A[0].size();
    if (rows < cols) return false;
    std::vector<Integer> colscale(cols, Integer(1));
    for (size_t j = 0; j < cols; ++j)
        for (size_t i = 0; i < rows; ++i)
            colscale[j] = lcm(colscale[j], denominator(A[i][j]));
    std::vector<std::vector<Integer>> M(rows, std::vector<Integer>(cols));
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j)
            M[i][j] = numerator(A[i][j]) * (colscale[j] / denominator(A[i][j]));
    return bareiss_forward(M, cols);
}

}  // namespace linalg
}  // namespace k3q
