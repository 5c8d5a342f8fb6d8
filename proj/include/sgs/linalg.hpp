#pragma once

#include <vector>

#include "sgs/errors.hpp"
#include "sgs/rational.hpp"

namespace sgs {

using QMatrix = std::vector<std::vector<Q>>;

/// Solves A X = B exactly by Gaussian elimination over the rationals,
/// pivoting on the first nonzero entry of each column. A is n x n, B is
/// n x k. Throws SingularSystemError when A is singular.
inline QMatrix solve_linear(QMatrix a, QMatrix b) {
    const std::size_t n = a.size();
    for (auto& row : a)
        if (row.size() != n) throw Error("solve_linear: matrix not square");
    if (b.size() != n) throw Error("solve_linear: rhs row count mismatch");
    const std::size_t k = b.empty() ? 0 : b[0].size();

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) throw SingularSystemError("singular linear system");
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            std::swap(b[pivot], b[col]);
        }
        const Q inv = a[col][col];
        for (std::size_t j = col; j < n; ++j) a[col][j] /= inv;
        for (std::size_t j = 0; j < k; ++j) b[col][j] /= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            const Q factor = a[r][col];
            for (std::size_t j = col; j < n; ++j) a[r][j] -= factor * a[col][j];
            for (std::size_t j = 0; j < k; ++j) b[r][j] -= factor * b[col][j];
        }
    }
    return b;
}

}  // namespace sgs
