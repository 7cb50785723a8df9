#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "sasaki/jet.hpp"

namespace sasaki {

/// Dense square tensor: every slot ranges over 0..dim-1, row-major storage.
template <class T>
class Tensor {
public:
    Tensor() = default;
    Tensor(int dim, int rank, const T& fill = T{})
        : dim_(dim), rank_(rank), data_(count(dim, rank), fill) {}

    int dim() const { return dim_; }
    int rank() const { return rank_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    template <class... I>
    T& operator()(I... idx) {
        return data_[offset(idx...)];
    }
    template <class... I>
    const T& operator()(I... idx) const {
        return data_[offset(idx...)];
    }

    T& at(std::span<const int> idx) { return data_[flat_index(idx)]; }
    const T& at(std::span<const int> idx) const { return data_[flat_index(idx)]; }

    std::size_t flat_index(std::span<const int> idx) const {
        if (idx.size() != static_cast<std::size_t>(rank_)) throw std::invalid_argument("Tensor: wrong index count");
        std::size_t k = 0;
        for (int i : idx) k = k * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
        return k;
    }

    T& flat(std::size_t k) { return data_[k]; }
    const T& flat(std::size_t k) const { return data_[k]; }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    /// Multi-index of flat position k.
    std::vector<int> unflatten(std::size_t k) const {
        std::vector<int> idx(static_cast<std::size_t>(rank_));
        for (int s = rank_ - 1; s >= 0; --s) {
            idx[static_cast<std::size_t>(s)] = static_cast<int>(k % static_cast<std::size_t>(dim_));
            k /= static_cast<std::size_t>(dim_);
        }
        return idx;
    }

private:
    static std::size_t count(int dim, int rank) {
        std::size_t n = 1;
        for (int r = 0; r < rank; ++r) n *= static_cast<std::size_t>(dim);
        return n;
    }

    template <class... I>
    std::size_t offset(I... idx) const {
        static_assert(sizeof...(I) > 0);
        const std::array<int, sizeof...(I)> ids{static_cast<int>(idx)...};
        std::size_t k = 0;
        for (int i : ids) k = k * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
        return k;
    }

    int dim_ = 0;
    int rank_ = 0;
    std::vector<T> data_;
};

using JetTensor = Tensor<Jet>;
using RealTensor = Tensor<double>;
using Vec = std::vector<double>;
using JetVec = std::vector<Jet>;

/// Order-0 values of a jet tensor.
inline RealTensor values(const JetTensor& t) {
    RealTensor out(t.dim(), t.rank());
    for (std::size_t k = 0; k < t.size(); ++k) out.flat(k) = t.flat(k).value();
    return out;
}

inline Vec values(const JetVec& v) {
    Vec out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k].value();
    return out;
}

}  // namespace sasaki
