#include "tbpn/tensor.hpp"

#include <stdexcept>

namespace tbpn {

TensorField TensorField::zero(Space space, int dim, int up, int down) {
    TensorField t;
    t.space = space;
    t.dim = dim;
    t.up = up;
    t.down = down;
    std::size_t count = 1;
    for (int k = 0; k < up + down; ++k) count *= static_cast<std::size_t>(dim);
    t.comps.assign(count, Expr(0.0));
    return t;
}

TensorField TensorField::fromMatrix(Space space, const ExprMatrix& m, int up, int down) {
    if (up + down != 2 || m.rows() != m.cols()) throw std::invalid_argument("fromMatrix: need a square matrix and rank 2");
    TensorField t = zero(space, static_cast<int>(m.rows()), up, down);
    for (int i = 0; i < t.dim; ++i)
        for (int j = 0; j < t.dim; ++j) t({i, j}) = m(i, j);
    return t;
}

TensorField TensorField::vector(Space space, const ExprVector& v) {
    TensorField t = zero(space, static_cast<int>(v.size()), 1, 0);
    for (int i = 0; i < t.dim; ++i) t.comps[i] = v(i);
    return t;
}

TensorField TensorField::covector(Space space, const ExprVector& v) {
    TensorField t = zero(space, static_cast<int>(v.size()), 0, 1);
    for (int i = 0; i < t.dim; ++i) t.comps[i] = v(i);
    return t;
}

std::size_t TensorField::offset(std::initializer_list<int> idx) const {
    if (static_cast<int>(idx.size()) != rank()) throw std::out_of_range("TensorField: wrong number of indices");
    std::size_t off = 0;
    for (int i : idx) {
        if (i < 0 || i >= dim) throw std::out_of_range("TensorField: index out of range");
        off = off * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i);
    }
    return off;
}

std::size_t TensorField::offset(const std::vector<int>& idx) const {
    if (static_cast<int>(idx.size()) != rank()) throw std::out_of_range("TensorField: wrong number of indices");
    std::size_t off = 0;
    for (int i : idx) off = off * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i);
    return off;
}

ExprMatrix TensorField::matrix() const {
    if (rank() != 2) throw std::logic_error("TensorField::matrix on rank " + std::to_string(rank()));
    ExprMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = (*this)({i, j});
    return m;
}

ExprVector TensorField::asVector() const {
    if (rank() != 1) throw std::logic_error("TensorField::asVector on rank " + std::to_string(rank()));
    ExprVector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = comps[i];
    return v;
}

}  // namespace tbpn
