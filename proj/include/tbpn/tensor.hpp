#pragma once

#include "tbpn/symbolic.hpp"

#include <initializer_list>
#include <vector>

namespace tbpn {

/// Where a tensor field lives: on the base Q, along the projection tau
/// (base indices, coefficients in (q,u)), or on the total space TQ.
enum class Space { Base, Along, Total };

/// Component array of a tensor field with `up` contravariant and `down`
/// covariant indices. Storage is row-major over (up..., down...).
struct TensorField {
    Space space = Space::Along;
    int dim = 0;
    int up = 0;
    int down = 0;
    std::vector<Expr> comps;

    static TensorField zero(Space space, int dim, int up, int down);
    /// Rank-2 tensor from a matrix; row index is the first tensor index.
    static TensorField fromMatrix(Space space, const ExprMatrix& m, int up, int down);
    static TensorField vector(Space space, const ExprVector& v);
    static TensorField covector(Space space, const ExprVector& v);

    [[nodiscard]] int rank() const { return up + down; }
    [[nodiscard]] std::size_t offset(std::initializer_list<int> idx) const;
    [[nodiscard]] std::size_t offset(const std::vector<int>& idx) const;
    Expr& operator()(std::initializer_list<int> idx) { return comps[offset(idx)]; }
    const Expr& operator()(std::initializer_list<int> idx) const { return comps[offset(idx)]; }

    /// Rank-2 tensors only.
    [[nodiscard]] ExprMatrix matrix() const;
    /// Rank-1 tensors only.
    [[nodiscard]] ExprVector asVector() const;
};

/// Multi-index enumeration helper: calls fn(idx) for all idx in [0,dim)^rank.
template <class Fn>
void forEachIndex(int dim, int rank, Fn&& fn) {
    std::vector<int> idx(static_cast<std::size_t>(rank), 0);
    for (;;) {
        fn(idx);
        int k = rank - 1;
        while (k >= 0 && ++idx[k] == dim) idx[k--] = 0;
        if (k < 0) return;
    }
}

}  // namespace tbpn
